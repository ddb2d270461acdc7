//! Verification suites. Every case is a closed computation with a pass/fail verdict.

use super::Env;
use crate::bmp::localize::is_vertexwise_iso;
use crate::bmp::{
    build_bmp, decompose, localize, search_non_v, translate, Normalization, SectionsBimodule,
};
use crate::coxeter::KlTable;
use crate::error::{Error, Result};
use crate::homotopy::khom::r_dim;
use crate::homotopy::rouquier::{
    apply_letters, cocone_projection, f_letter, translate_complex, unit_object,
};
use crate::homotopy::{
    costandard, delta, forget_hom, is_homotopy_equiv, khom, nabla, perversity_check, rouquier,
    standard, tilting_s, BmpComplex, BmpCtx, LetterKind, Ops, Verdict,
};
use crate::polyalg::PolyMatrix;
use crate::sheaf::ops::{closed_part, corestrict, default_window};
use crate::sheaf::{check_v, verify_bmp, HomSystem, SheafMorphism};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

pub const SUITES: &[&str] = &[
    "axioms",
    "kl",
    "ses",
    "vcond",
    "vanishing",
    "rouquier-formula",
    "braid",
    "std-rouquier",
    "convolution",
    "perverse",
    "triangle",
    "ringel",
    "soergel",
    "roundtrip",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timed {
    pub name: String,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub cases: Vec<Case>,
    pub timing: Vec<Timed>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }
}

type Check<'a> = Box<dyn Fn() -> Result<(bool, String)> + Send + Sync + 'a>;

struct Plan<'a>(Vec<(String, Check<'a>)>);

impl<'a> Plan<'a> {
    fn new() -> Self {
        Plan(Vec::new())
    }

    fn add(
        &mut self,
        name: impl Into<String>,
        f: impl Fn() -> Result<(bool, String)> + Send + Sync + 'a,
    ) {
        self.0.push((name.into(), Box::new(f)));
    }
}

fn verdict(v: Verdict) -> (bool, String) {
    match v {
        Verdict::Equivalent(w) => {
            let blocks = w
                .map
                .blocks
                .values()
                .map(|b| b.entries().count())
                .sum::<usize>();
            (
                true,
                format!("chain isomorphism with {blocks} nonzero components"),
            )
        }
        Verdict::Refuted(why) => (false, why),
    }
}

fn equiv(ctx: &BmpCtx, a: &BmpComplex, b: &BmpComplex, seed: u64) -> Result<(bool, String)> {
    is_homotopy_equiv(ctx, a, b, seed).map(verdict)
}

/// Runs one named suite; cases run on the configured worker pool and are reported in plan order.
pub fn run_suite(env: &Env, suite: &str) -> Result<SuiteResult> {
    let ctx = BmpCtx::new(&env.cat)?;
    let plan = plan(env, &ctx, suite)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(env.config.jobs.max(1))
        .build()
        .map_err(|e| Error::Invariant(e.to_string()))?;
    let out: Vec<(Case, Timed)> = pool.install(|| {
        plan.0
            .par_iter()
            .map(|(name, f)| {
                let t = Instant::now();
                let (passed, detail) = match f() {
                    Ok(r) => r,
                    Err(e) => (false, format!("error: {e}")),
                };
                let millis = t.elapsed().as_millis() as u64;
                log::info!("{suite}/{name}: {}", if passed { "pass" } else { "FAIL" });
                (
                    Case {
                        name: name.clone(),
                        passed,
                        detail,
                    },
                    Timed {
                        name: name.clone(),
                        millis,
                    },
                )
            })
            .collect()
    });
    let (cases, timing) = out.into_iter().unzip();
    Ok(SuiteResult {
        suite: suite.to_string(),
        cases,
        timing,
    })
}

fn plan<'a>(env: &'a Env, ctx: &'a BmpCtx<'a>, suite: &str) -> Result<Plan<'a>> {
    let mut p = Plan::new();
    match suite {
        "axioms" => axioms(env, &mut p),
        "kl" => kl(env, &mut p),
        "ses" => ses(env, &mut p),
        "vcond" => vcond(env, &mut p),
        "vanishing" => vanishing(env, ctx, &mut p),
        "rouquier-formula" => rouquier_formula(env, ctx, &mut p),
        "braid" => braid(env, ctx, &mut p),
        "std-rouquier" => std_rouquier(env, ctx, &mut p),
        "convolution" => convolution(env, ctx, &mut p),
        "perverse" => perverse(env, ctx, &mut p),
        "triangle" => triangle(env, ctx, &mut p),
        "ringel" => ringel(env, ctx, &mut p),
        "soergel" => soergel(env, &mut p),
        "roundtrip" => roundtrip(env, &mut p),
        _ => {
            return Err(Error::Validation(format!(
                "unknown suite {suite:?}; known: {}",
                SUITES.join(", ")
            )))
        }
    }
    Ok(p)
}

/// Elements within the configured length bound.
fn elements(env: &Env) -> Vec<usize> {
    let g = env.cat.group();
    (0..g.len())
        .filter(|&w| env.config.max_length.is_none_or(|m| g.length(w) <= m))
        .collect()
}

fn name(env: &Env, w: usize) -> String {
    env.cat.group().name(w)
}

fn axioms<'a>(env: &'a Env, p: &mut Plan<'a>) {
    for w in elements(env) {
        p.add(format!("E_{}", name(env, w)), move || {
            let f = build_bmp(
                env.cat.graph(),
                w,
                env.config.normalization,
                &env.cat.policy,
            )?;
            let (lo, hi) = default_window(&f.sheaf);
            let r = verify_bmp(&f.sheaf, lo, hi)?;
            let bad: Vec<String> = r
                .vertices
                .iter()
                .filter(|v| !v.ok)
                .flat_map(|v| v.failures.clone())
                .collect();
            Ok((
                r.passed(),
                if bad.is_empty() {
                    format!("window [{lo}, {hi}]")
                } else {
                    bad.join("; ")
                },
            ))
        });
    }
}

/// KL polynomial read off from stalk generator degrees in classification normalization:
/// a generator in degree 2k contributes q^k.
pub fn kl_from_degrees(degrees: &[i32]) -> Result<Vec<i64>> {
    let mut out: Vec<i64> = Vec::new();
    for &e in degrees {
        if e < 0 || e % 2 != 0 {
            return Err(Error::Invariant(format!("stalk generator in degree {e}")));
        }
        let k = (e / 2) as usize;
        if out.len() <= k {
            out.resize(k + 1, 0);
        }
        out[k] += 1;
    }
    Ok(out)
}

/// Stalk generator degrees of E_w at every vertex, classification normalization.
pub fn classification_stalks(env: &Env, w: usize) -> Result<Vec<Vec<i32>>> {
    let f = build_bmp(
        env.cat.graph(),
        w,
        Normalization::Classification,
        &env.cat.policy,
    )?;
    Ok((0..env.cat.len())
        .map(|x| f.sheaf.stalk_generator_degrees(x))
        .collect())
}

fn kl<'a>(env: &'a Env, p: &mut Plan<'a>) {
    for w in elements(env) {
        p.add(format!("E_{}", name(env, w)), move || {
            let g = env.cat.group();
            let table = KlTable::new(g);
            let stalks = classification_stalks(env, w)?;
            let mut bad = Vec::new();
            for x in 0..g.len() {
                let got = kl_from_degrees(&stalks[x])?;
                let want = table.kl_polynomial(x, w).map(|p| p.0).unwrap_or_default();
                if got != want {
                    bad.push(format!(
                        "P({}, {}): stalk {got:?}, recursion {want:?}",
                        name(env, x),
                        name(env, w)
                    ));
                }
            }
            Ok((
                bad.is_empty(),
                if bad.is_empty() {
                    format!("{} vertices", g.len())
                } else {
                    bad.join("; ")
                },
            ))
        });
    }
}

/// Downward closed vertex sets: all of them on small graphs, otherwise the principal ones.
fn closed_sets(env: &Env) -> Vec<Vec<bool>> {
    let g = env.cat.graph();
    let n = g.len();
    if n > 8 {
        return (0..n).map(|w| g.below(w)).collect();
    }
    (1u32..(1 << n))
        .map(|bits| (0..n).map(|i| bits >> i & 1 == 1).collect::<Vec<bool>>())
        .filter(|z| g.is_closed(z))
        .collect()
}

fn ses<'a>(env: &'a Env, p: &mut Plan<'a>) {
    let m = env.config.max_degree;
    for z in closed_sets(env) {
        let label = (0..z.len())
            .filter(|&i| z[i])
            .map(|i| name(env, i))
            .collect::<Vec<_>>()
            .join(",");
        p.add(format!("Z={{{label}}}"), move || {
            let u: Vec<bool> = z.iter().map(|b| !b).collect();
            let n = env.cat.len();
            let mut checked = 0;
            for x in 0..n {
                let e = env.cat.object(x)?;
                let (ie, _) = closed_part(&e, &z)?;
                for y in 0..n {
                    let f = env.cat.object(y)?;
                    let (cf, _) = corestrict(&f, &z)?;
                    let whole = HomSystem::new(&e, &f, None);
                    let left = HomSystem::new(&ie, &f, None);
                    let right = HomSystem::general(&e, &cf, None);
                    let open = HomSystem::new(&e, &f, Some(&u));
                    for d in -m..=m {
                        let (h, a, b, o) = (whole.dim(d), left.dim(d), right.dim(d), open.dim(d));
                        if h != a + o || h != b + o {
                            return Ok((
                                false,
                                format!(
                                    "({}, {}) degree {d}: Hom {h}, closed {a}/{b}, open {o}",
                                    name(env, x),
                                    name(env, y)
                                ),
                            ));
                        }
                        checked += 1;
                    }
                }
            }
            Ok((true, format!("{checked} cells")))
        });
    }
}

fn vcond<'a>(env: &'a Env, p: &mut Plan<'a>) {
    for w in elements(env) {
        p.add(format!("E_{}", name(env, w)), move || {
            let f = env.cat.object(w)?;
            Ok(match check_v(std::slice::from_ref(&*f))? {
                None => (true, "all costalks free".into()),
                Some(v) => (
                    false,
                    format!(
                        "costalk at {} has generators in degrees {:?}",
                        v.vertex, v.generator_degrees
                    ),
                ),
            })
        });
    }
    p.add("non-(V) search", || {
        Ok(match search_non_v(4)? {
            Some(w) => (
                true,
                format!(
                    "{} vertices, costalk at {} has generators {:?}",
                    w.graph.len(),
                    w.vertex,
                    w.generator_degrees
                ),
            ),
            None => (false, "no graph without (V) found".into()),
        })
    });
}

fn pairs(env: &Env) -> Vec<(usize, usize)> {
    let el = elements(env);
    el.iter()
        .flat_map(|&x| el.iter().map(move |&w| (x, w)))
        .collect()
}

const HOM_SHIFTS: std::ops::RangeInclusive<i32> = -4..=4;

fn vanishing<'a>(env: &'a Env, ctx: &'a BmpCtx<'a>, p: &mut Plan<'a>) {
    let m = env.config.max_degree;
    for (x, w) in pairs(env) {
        p.add(
            format!("Hom(D_{}, N_{})", name(env, x), name(env, w)),
            move || {
                let (a, b) = (standard(ctx, x)?, costandard(ctx, w)?);
                let nv = env.cat.graph().nvars();
                for j in HOM_SHIFTS {
                    for d in -m..=m {
                        let want = if x == w && j == 0 { r_dim(nv, d) } else { 0 };
                        let got = khom(ctx, &a, &b, j, d)?;
                        if got != want {
                            return Ok((
                                false,
                                format!("shift {j}, degree {d}: {got} instead of {want}"),
                            ));
                        }
                    }
                }
                Ok((
                    true,
                    if x == w {
                        "R in shift 0".into()
                    } else {
                        "zero".into()
                    },
                ))
            },
        );
    }
}

fn rouquier_formula<'a>(env: &'a Env, ctx: &'a BmpCtx<'a>, p: &mut Plan<'a>) {
    let m = env.config.max_degree;
    for (x, w) in pairs(env) {
        p.add(
            format!("Hom(F_{}, E_{})", name(env, x), name(env, w)),
            move || {
                let (a, b) = (delta(ctx, x)?, nabla(ctx, w)?);
                for j in HOM_SHIFTS {
                    let f = forget_hom(ctx, &a, &b, j, -m, m)?;
                    let want: Vec<(i32, usize)> = if x == w && j == 0 {
                        vec![(0, 1)]
                    } else {
                        vec![]
                    };
                    if !f.free || f.generators != want {
                        return Ok((
                            false,
                            format!("shift {j}: generators {:?}, free {}", f.generators, f.free),
                        ));
                    }
                }
                Ok((
                    true,
                    if x == w {
                        "one generator in degree 0".into()
                    } else {
                        "zero".into()
                    },
                ))
            },
        );
    }
}

fn braid<'a>(env: &'a Env, ctx: &'a BmpCtx<'a>, p: &mut Plan<'a>) {
    let g = env.cat.group();
    let sys = &g.system;
    for s in 0..sys.rank() {
        for t in s + 1..sys.rank() {
            let m = sys.m[s][t] as usize;
            let alt = |a: usize, b: usize| {
                (0..m)
                    .map(|i| if i % 2 == 0 { a } else { b })
                    .collect::<Vec<_>>()
            };
            let (u, v) = (alt(s, t), alt(t, s));
            for kind in [LetterKind::F, LetterKind::E] {
                let (u, v) = (u.clone(), v.clone());
                let label = format!(
                    "{:?} {} = {}",
                    kind,
                    sys.word_string(&u),
                    sys.word_string(&v)
                );
                p.add(label, move || {
                    equiv(
                        ctx,
                        &rouquier(ctx, &u, kind)?,
                        &rouquier(ctx, &v, kind)?,
                        env.config.seed,
                    )
                });
            }
        }
    }
}

fn std_rouquier<'a>(env: &'a Env, ctx: &'a BmpCtx<'a>, p: &mut Plan<'a>) {
    for w in elements(env) {
        p.add(format!("D_{}", name(env, w)), move || {
            equiv(ctx, &delta(ctx, w)?, &standard(ctx, w)?, env.config.seed)
        });
        p.add(format!("N_{}", name(env, w)), move || {
            equiv(ctx, &nabla(ctx, w)?, &costandard(ctx, w)?, env.config.seed)
        });
    }
}

fn convolution<'a>(env: &'a Env, ctx: &'a BmpCtx<'a>, p: &mut Plan<'a>) {
    let g = env.cat.group();
    for (y, w) in pairs(env) {
        let yw = g.mul(y, w);
        if g.length(yw) != g.length(y) + g.length(w) || g.length(w) == 0 {
            continue;
        }
        p.add(
            format!("D_{} * D_{}", name(env, y), name(env, w)),
            move || {
                let c = apply_letters(ctx, &delta(ctx, y)?, g.word(w), LetterKind::F)?;
                equiv(ctx, &c, &standard(ctx, yw)?, env.config.seed)
            },
        );
    }
    for w in elements(env) {
        p.add(
            format!("D_{} * N_{}^-1", name(env, w), name(env, w)),
            move || {
                let word = g.word(w);
                let back: Vec<usize> = word.iter().rev().copied().collect();
                let c = apply_letters(
                    ctx,
                    &apply_letters(ctx, &unit_object(ctx), word, LetterKind::F)?,
                    &back,
                    LetterKind::E,
                )?;
                let one = unit_object(ctx);
                if c.label_multiset() != one.label_multiset() {
                    return Ok((false, format!("minimal terms {:?}", c.label_multiset())));
                }
                equiv(ctx, &c, &one, env.config.seed)
            },
        );
    }
}

fn perverse<'a>(env: &'a Env, ctx: &'a BmpCtx<'a>, p: &mut Plan<'a>) {
    let heart = |c: &BmpComplex, constructible: bool| -> Result<(bool, String)> {
        let r = perversity_check(ctx, c, constructible)?;
        let bad: Vec<String> = r
            .strata
            .iter()
            .filter(|s| !(s.le0 && s.ge0))
            .map(|s| s.vertex.clone())
            .collect();
        Ok((
            r.heart,
            if bad.is_empty() {
                "in the heart".into()
            } else {
                format!("fails at {}", bad.join(","))
            },
        ))
    };
    for w in elements(env) {
        p.add(format!("D_{}", name(env, w)), move || {
            heart(&standard(ctx, w)?, false)
        });
        p.add(format!("N_{}", name(env, w)), move || {
            heart(&costandard(ctx, w)?, false)
        });
    }
    p.add("E_1[1] not perverse", move || {
        let r = perversity_check(ctx, &Ops(ctx).shift(&unit_object(ctx), 1), false)?;
        Ok((r.le0 && !r.ge0, format!("le0 {}, ge0 {}", r.le0, r.ge0)))
    });
    for s in 0..env.cat.group().rank() {
        let gen = env.cat.group().system.gens[s].clone();
        p.add(format!("T_{gen}"), move || heart(&tilting_s(ctx, s)?, true));
    }
}

fn triangle<'a>(env: &'a Env, ctx: &'a BmpCtx<'a>, p: &mut Plan<'a>) {
    let g = env.cat.group();
    for x in elements(env) {
        for s in 0..g.rank() {
            let xs = g.mul_right(x, s);
            if g.length(xs) < g.length(x) {
                continue;
            }
            p.add(
                format!("x={}, s={}", name(env, x), g.system.gens[s]),
                move || {
                    let ops = Ops(ctx);
                    let dx = delta(ctx, x)?;
                    let fx = f_letter(ctx, &dx, s)?;
                    ops.check_d2(&fx)?;
                    let (first, why) = equiv(ctx, &fx, &standard(ctx, xs)?, env.config.seed)?;
                    if !first {
                        return Ok((false, format!("F_s(D_x) vs D_xs: {why}")));
                    }
                    let t = ops.twist(&translate_complex(ctx, &dx, s)?.0, 1);
                    let proj = cocone_projection(ctx, &fx, &t);
                    if !ops.is_chain_map(&fx, &t, &proj) {
                        return Ok((false, "projection is not a chain map".into()));
                    }
                    equiv(
                        ctx,
                        &ops.cone(&fx, &t, &proj),
                        &ops.twist(&standard(ctx, x)?, 1),
                        env.config.seed,
                    )
                },
            );
        }
    }
}

fn ringel<'a>(env: &'a Env, ctx: &'a BmpCtx<'a>, p: &mut Plan<'a>) {
    let g = env.cat.group();
    let w0 = g.longest();
    for w in elements(env) {
        p.add(format!("R(N_{})", name(env, w)), move || {
            let r = apply_letters(ctx, &costandard(ctx, w)?, g.word(w0), LetterKind::F)?;
            equiv(ctx, &r, &standard(ctx, g.mul(w, w0))?, env.config.seed)
        });
    }
}

fn soergel<'a>(env: &'a Env, p: &mut Plan<'a>) {
    let g = env.cat.group();
    for w in elements(env) {
        p.add(format!("E_{}", name(env, w)), move || {
            let f = env.cat.object(w)?;
            let mut bad = Vec::new();
            for x in 0..g.len() {
                if x == w || !g.bruhat_leq(x, w) {
                    continue;
                }
                let l = g.length(x) as i32;
                let st = f.stalk_generator_degrees(x);
                let co: Vec<i32> = env.cat.costalk(w, x)?.gens.iter().map(|c| c.0).collect();
                if st.iter().any(|&e| e >= -l) {
                    bad.push(format!("stalk at {}: {st:?}", name(env, x)));
                }
                if co.iter().any(|&e| e <= -l) {
                    bad.push(format!("costalk at {}: {co:?}", name(env, x)));
                }
            }
            Ok((
                bad.is_empty(),
                if bad.is_empty() {
                    "degree conditions hold".into()
                } else {
                    bad.join("; ")
                },
            ))
        });
    }
}

fn roundtrip<'a>(env: &'a Env, p: &mut Plan<'a>) {
    let g = env.cat.group();
    for w in elements(env) {
        p.add(format!("localize(Gamma(E_{}))", name(env, w)), move || {
            let f = env.cat.object(w)?;
            let n = f.nvars();
            let loc = localize(&SectionsBimodule::new(&f, g)?.presented())?;
            let mats: Vec<PolyMatrix> = (0..f.graph.len())
                .map(|z| {
                    PolyMatrix::from_columns(
                        f.rank(z),
                        n,
                        &loc.stalk_gens[z]
                            .iter()
                            .map(|s| s.1.clone())
                            .collect::<Vec<_>>(),
                    )
                })
                .collect();
            let phi = SheafMorphism::from_vertices(&loc.sheaf, &f, 0, mats);
            phi.check(&loc.sheaf, &f)?;
            Ok((is_vertexwise_iso(&phi), "comparison map".into()))
        });
    }
    for s in 0..g.rank() {
        p.add(format!("T_{0}T_{0}E_1", g.system.gens[s]), move || {
            let e = g.identity();
            let xs = g.mul_right(e, s);
            let once = env.cat.translation(e, s)?;
            let base = match once.dec.summands.as_slice() {
                [(y, n)] if *y == xs => *n,
                other => return Ok((false, format!("T_sE_1 splits as {other:?}"))),
            };
            let twice = translate(once.translated.sheaf(), g, s)?;
            let mut rel: Vec<(usize, i32)> = decompose(twice.sheaf(), &env.cat)?
                .summands
                .iter()
                .map(|&(y, n)| (y, n - base))
                .collect();
            rel.sort();
            let shifts: Vec<i32> = rel.iter().map(|r| r.1).collect();
            Ok((
                rel.iter().all(|r| r.0 == xs) && shifts == vec![-2, 0],
                format!("relative shifts {shifts:?}"),
            ))
        });
    }
}
