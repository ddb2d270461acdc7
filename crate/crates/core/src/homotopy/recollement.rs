//! Extension by zero and pushforward from open regions, built by peeling one closed
//! vertex at a time, and stalk/costalk complexes at a vertex.

use super::complex::{Block, Complex, Ops};
use super::ctx::{BmpComplex, BmpCtx, FreeComplex, FreeCtx, Label};
use crate::error::{Error, Result};
use crate::polyalg::linalg::solve;
use crate::polyalg::{Ambient, Poly, PolyMatrix, SparseVec};
use crate::sheaf::ops::mask;
use crate::sheaf::SheafMorphism;
use std::collections::BTreeMap;

/// Extends a morphism defined on the region of `ctx` minus `s` to the region of `ctx`,
/// choosing the component at s by solving the edge conditions degreewise.
pub fn lift(
    ctx: &BmpCtx,
    s: usize,
    x: usize,
    y: usize,
    phi: &SheafMorphism,
) -> Result<SheafMorphism> {
    let (ex, ey) = (ctx.object(x), ctx.object(y));
    let mut out = phi.clone();
    let g = ctx.cat.graph();
    if ex.rank(s) > 0 && ey.rank(s) > 0 {
        let n = g.nvars();
        let edges: Vec<usize> = g
            .up_edges(s)
            .iter()
            .copied()
            .filter(|&k| !ey.edges[k].shifts.is_empty())
            .collect();
        let blocks: Vec<Ambient> = edges.iter().map(|&k| ey.edge_ambient(k)).collect();
        let starts: Vec<usize> = blocks
            .iter()
            .scan(0, |acc, b| {
                let s0 = *acc;
                *acc += b.len();
                Some(s0)
            })
            .collect();
        let mut stack = Ambient::new(n);
        for b in &blocks {
            stack.comps.extend(b.comps.iter().cloned());
        }
        let stalk = ey.stalk_ambient(s);
        let mut col_s = PolyMatrix::zero(ey.rank(s), ex.rank(s), n);
        for j in 0..ex.rank(s) {
            let d = -ex.stalks[s][j] + phi.degree;
            let image = |u: &[Poly]| {
                let mut e = stack.zero_elem();
                for (b, &k) in edges.iter().enumerate() {
                    let r = ey.rho(s, k).apply(u);
                    for (i, p) in r.into_iter().enumerate() {
                        e[starts[b] + i] = p;
                    }
                }
                e
            };
            let mut target = stack.zero_elem();
            for (b, &k) in edges.iter().enumerate() {
                if ex.edges[k].shifts.is_empty() {
                    continue;
                }
                let ann = g.annihilator(k);
                let v = g.edges[k].upper;
                let phik = phi.vertex[v].map(|p| ann.reduce(p));
                let r = phik.apply(&ex.rho(s, k).column(j));
                for (i, p) in r.into_iter().enumerate() {
                    target[starts[b] + i] = p;
                }
            }
            let basis = stalk.basis(d);
            let images: Vec<SparseVec> = basis
                .iter()
                .map(|u| stack.encode_reduced(&image(u), d))
                .collect();
            let t = stack.encode_reduced(&target, d);
            let c = solve(&images, &t).ok_or_else(|| {
                Error::LiftFailure(format!(
                    "no lift of a morphism E_{} → E_{} at {}",
                    g.vertices[x].id, g.vertices[y].id, g.vertices[s].id
                ))
            })?;
            let mut u = stalk.zero_elem();
            for (b, coef) in &c.0 {
                for (i, p) in basis[*b].iter().enumerate() {
                    if !p.is_zero() {
                        u[i] = u[i].add(&p.scale(coef));
                    }
                }
            }
            for (i, p) in u.into_iter().enumerate() {
                col_s.set(i, j, p);
            }
        }
        out.vertex[s] = col_s;
    }
    Ok(ctx.mask(out))
}

fn lift_complex(ctx: &BmpCtx, c: &BmpComplex, s: usize) -> Result<BmpComplex> {
    let mut out = c.clone();
    for (k, b) in out.d.iter_mut().enumerate() {
        let i = c.lo + k as i32;
        let mut nb = Block::zero(b.rows, b.cols);
        for (q, p, phi) in b.entries() {
            let m = lift(ctx, s, c.term(i)[p].0, c.term(i + 1)[q].0, phi)?;
            if !m.is_zero() {
                nb.set(q, p, Some(m));
            }
        }
        *b = nb;
    }
    Ok(out)
}

fn at(
    b: &Block<SheafMorphism>,
    q: usize,
    p: usize,
    s: usize,
    rows: usize,
    cols: usize,
    n: usize,
) -> PolyMatrix {
    b.get(q, p)
        .map(|m| m.vertex[s].clone())
        .unwrap_or_else(|| PolyMatrix::zero(rows, cols, n))
}

/// The component at s of a block product g·f between terms, as one matrix per (target, source) pair.
fn product_at(
    ctx: &BmpCtx,
    c: &BmpComplex,
    i: i32,
    s: usize,
) -> BTreeMap<(usize, usize), PolyMatrix> {
    let n = ctx.cat.graph().nvars();
    let (f, g) = (c.diff(i), c.diff(i + 1));
    let r = |l: &Label| ctx.object(l.0).rank(s);
    let mut out = BTreeMap::new();
    for (q, lq) in c.term(i + 2).iter().enumerate() {
        for (p, lp) in c.term(i).iter().enumerate() {
            let mut acc = PolyMatrix::zero(r(lq), r(lp), n);
            for (m, lm) in c.term(i + 1).iter().enumerate() {
                if g.get(q, m).is_some() && f.get(m, p).is_some() {
                    acc = acc.add(&at(&g, q, m, s, r(lq), r(lm), n).mul(&at(
                        &f,
                        m,
                        p,
                        s,
                        r(lm),
                        r(lp),
                        n,
                    )));
                }
            }
            if !acc.is_zero() {
                out.insert((q, p), acc);
            }
        }
    }
    out
}

fn one_by_one(p: Poly) -> PolyMatrix {
    let mut m = PolyMatrix::zero(1, 1, p.nvars());
    m.set(0, 0, p);
    m
}

fn top_shift(ctx: &BmpCtx, s: usize) -> i32 {
    ctx.object(s).stalks[s][0]
}

/// One j_! step: the region of `ctx` is the old region plus s.
fn shriek_step(ctx: &BmpCtx, c: &BmpComplex, s: usize) -> Result<BmpComplex> {
    let ops = Ops(ctx);
    let n = ctx.cat.graph().nvars();
    let a = lift_complex(ctx, c, s)?;
    let ds = top_shift(ctx, s);
    // I^k: one copy of E_s per stalk generator at s of each term
    let gens = |k: i32| -> Vec<(usize, usize, Label)> {
        a.term(k)
            .iter()
            .enumerate()
            .flat_map(|(p, &(x, sh))| {
                ctx.object(x).stalks[s]
                    .iter()
                    .enumerate()
                    .map(move |(j, &nj)| (p, j, (s, sh + nj - ds)))
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    let lo = a.lo;
    let hi = a.hi() + 1;
    let mut terms = BTreeMap::new();
    let mut d = BTreeMap::new();
    for k in lo..=hi {
        let ik1 = gens(k - 1);
        terms.insert(
            k,
            a.term(k)
                .iter()
                .cloned()
                .chain(ik1.iter().map(|g| g.2))
                .collect::<Vec<_>>(),
        );
    }
    for k in lo..hi {
        let (e0, e1) = (a.term(k), a.term(k + 1));
        let (i0, i1) = (gens(k - 1), gens(k));
        let mut blk = Block::zero(e1.len() + i1.len(), e0.len() + i0.len());
        for (q, p, m) in a.diff(k).entries() {
            blk.set(q, p, Some(m.clone()));
        }
        // B: I^{k−1} → Ẽ^{k+1}
        let aa = product_at(ctx, &a, k - 1, s);
        for (col, &(pp, j, lab)) in i0.iter().enumerate() {
            for (q, lq) in e1.iter().enumerate() {
                if let Some(m) = aa.get(&(q, pp)) {
                    let v = m.block(0, m.rows, j, j + 1).neg();
                    if !v.is_zero() {
                        blk.set(
                            q,
                            e0.len() + col,
                            Some(ctx.arrow_between(lab, *lq, &[(s, v)])),
                        );
                    }
                }
            }
        }
        // ε: Ẽ^k → I^k
        for (row, &(p, j, lab)) in i1.iter().enumerate() {
            let r = ctx.object(e0[p].0).rank(s);
            let mut m = PolyMatrix::zero(1, r, n);
            m.set(0, j, Poly::one(n));
            blk.set(
                e1.len() + row,
                p,
                Some(ctx.arrow_between(e0[p], lab, &[(s, m)])),
            );
        }
        // C: I^{k−1} → I^k
        let prev = a.diff(k - 1);
        for (row, &(p, j, lt)) in i1.iter().enumerate() {
            for (col, &(pp, jj, ls)) in i0.iter().enumerate() {
                if let Some(m) = prev.get(p, pp) {
                    let v = m.vertex[s].get(j, jj).neg();
                    if !v.is_zero() {
                        blk.set(
                            e1.len() + row,
                            e0.len() + col,
                            Some(ctx.arrow_between(ls, lt, &[(s, one_by_one(v))])),
                        );
                    }
                }
            }
        }
        d.insert(k, blk);
    }
    let out = Complex::from_parts(terms, d);
    ops.check_d2(&out)?;
    Ok(ops.minimize(&out))
}

/// One j_* step.
fn star_step(ctx: &BmpCtx, c: &BmpComplex, s: usize) -> Result<BmpComplex> {
    let ops = Ops(ctx);
    let n = ctx.cat.graph().nvars();
    let cat = ctx.cat;
    let a = lift_complex(ctx, c, s)?;
    let ds = top_shift(ctx, s);
    // K^k: one copy of E_s per costalk generator at s of each term
    let gens = |k: i32| -> Result<Vec<(usize, usize, Label, i32, Vec<Poly>)>> {
        let mut out = Vec::new();
        for (p, &(x, sh)) in a.term(k).iter().enumerate() {
            if ctx.object(x).rank(s) == 0 {
                continue;
            }
            let cd = cat.costalk(x, s)?;
            for (g, (e, v)) in cd.gens.iter().enumerate() {
                out.push((p, g, (s, sh - e - ds), *e, v.clone()));
            }
        }
        Ok(out)
    };
    let express = |x: usize, v: &[Poly], d: i32| -> Result<Vec<Poly>> {
        cat.costalk(x, s)?.solver.express(v, d).ok_or_else(|| {
            Error::LiftFailure(format!(
                "element outside the costalk at {}",
                cat.graph().vertices[s].id
            ))
        })
    };
    let lo = a.lo - 1;
    let hi = a.hi();
    let mut terms = BTreeMap::new();
    let mut d = BTreeMap::new();
    for k in lo..=hi {
        let kk = gens(k + 1)?;
        terms.insert(
            k,
            kk.iter()
                .map(|g| g.2)
                .chain(a.term(k).iter().cloned())
                .collect::<Vec<_>>(),
        );
    }
    for k in lo..hi {
        let (k0, k1) = (gens(k + 1)?, gens(k + 2)?);
        let (e0, e1) = (a.term(k), a.term(k + 1));
        let (o0, o1) = (k0.len(), k1.len());
        let mut blk = Block::zero(o1 + e1.len(), o0 + e0.len());
        for (q, p, m) in a.diff(k).entries() {
            blk.set(o1 + q, o0 + p, Some(m.clone()));
        }
        // η: K^{k+1} → Ẽ^{k+1}
        for (col, (p, _, lab, _, v)) in k0.iter().enumerate() {
            let m = PolyMatrix::from_columns(v.len(), n, std::slice::from_ref(v));
            blk.set(
                o1 + p,
                col,
                Some(ctx.arrow_between(*lab, e1[*p], &[(s, m)])),
            );
        }
        // C: K^{k+1} → K^{k+2}, minus the restriction of A_{k+1}
        let next = a.diff(k + 1);
        for (col, (p, _, ls, e, v)) in k0.iter().enumerate() {
            for (q, lq) in a.term(k + 2).iter().enumerate() {
                let Some(m) = next.get(q, *p) else { continue };
                let img = m.vertex[s].apply(v);
                let coef = express(lq.0, &img, e + lq.1 - e1[*p].1)?;
                for (row, (qq, g, lt, _, _)) in k1.iter().enumerate() {
                    if qq == &q && !coef[*g].is_zero() {
                        blk.set(
                            row,
                            col,
                            Some(ctx.arrow_between(*ls, *lt, &[(s, one_by_one(coef[*g].neg()))])),
                        );
                    }
                }
            }
        }
        // B: Ẽ^k → K^{k+2}, minus the component at s of A_{k+1}A_k
        let aa = product_at(ctx, &a, k, s);
        for (p, lp) in e0.iter().enumerate() {
            let r = ctx.object(lp.0).rank(s);
            for (q, lq) in a.term(k + 2).iter().enumerate() {
                let Some(m) = aa.get(&(q, p)) else { continue };
                let mut rows: BTreeMap<usize, PolyMatrix> = BTreeMap::new();
                for j in 0..r {
                    let coef = express(
                        lq.0,
                        &m.column(j),
                        -ctx.object(lp.0).stalks[s][j] + lq.1 - lp.1,
                    )?;
                    for (row, (qq, g, _, _, _)) in k1.iter().enumerate() {
                        if qq == &q && !coef[*g].is_zero() {
                            rows.entry(row)
                                .or_insert_with(|| PolyMatrix::zero(1, r, n))
                                .set(0, j, coef[*g].neg());
                        }
                    }
                }
                for (row, mm) in rows {
                    blk.set(
                        row,
                        o0 + p,
                        Some(ctx.arrow_between(*lp, k1[row].2, &[(s, mm)])),
                    );
                }
            }
        }
        d.insert(k, blk);
    }
    let out = Complex::from_parts(terms, d);
    ops.check_d2(&out)?;
    Ok(ops.minimize(&out))
}

fn peel(ctx: &BmpCtx, c: &BmpComplex, star: bool) -> Result<BmpComplex> {
    let g = ctx.cat.graph();
    if !g.is_open(&ctx.region) {
        return Err(Error::NotOpen(
            "extension needs an upward closed region".into(),
        ));
    }
    let mut region = ctx.region.clone();
    let mut cur = Ops(ctx).minimize(c);
    for &s in g.linear_extension().iter().rev() {
        if region[s] {
            continue;
        }
        region[s] = true;
        let next = ctx.with_region(region.clone());
        cur = if star {
            star_step(&next, &cur, s)?
        } else {
            shriek_step(&next, &cur, s)?
        };
    }
    Ok(cur)
}

/// j_!: extension by zero of a complex on the (open) region of `ctx` to the whole graph.
pub fn j_shriek(ctx: &BmpCtx, c: &BmpComplex) -> Result<BmpComplex> {
    peel(ctx, c, false)
}

/// j_*: pushforward of a complex on the (open) region of `ctx` to the whole graph.
pub fn j_star(ctx: &BmpCtx, c: &BmpComplex) -> Result<BmpComplex> {
    peel(ctx, c, true)
}

fn stratum<'a>(ctx: &BmpCtx<'a>, w: usize) -> (BmpCtx<'a>, BmpComplex) {
    let g = ctx.cat.graph();
    let up: Vec<usize> = (0..g.len()).filter(|&y| g.leq(w, y)).collect();
    (
        ctx.with_region(mask(g.len(), &up)),
        Complex::single(vec![(w, 0)], 0),
    )
}

/// Δ_w = j_! of the constant sheaf on the stratum of w, shifted by d_w.
pub fn standard(ctx: &BmpCtx, w: usize) -> Result<BmpComplex> {
    let (u, c) = stratum(ctx, w);
    j_shriek(&u, &c)
}

/// ∇_w = j_* of the same.
pub fn costandard(ctx: &BmpCtx, w: usize) -> Result<BmpComplex> {
    let (u, c) = stratum(ctx, w);
    j_star(&u, &c)
}

/// i_x^*: termwise stalks at x, minimized over R.
pub fn stalk_complex(ctx: &BmpCtx, c: &BmpComplex, x: usize) -> FreeComplex {
    Ops(&FreeCtx {
        nvars: ctx.cat.graph().nvars(),
    })
    .minimize(&naive_stalk(ctx, c, x))
}

/// i_x^!: termwise costalks at x (relative to all upward edges), minimized over R.
pub fn costalk_complex(ctx: &BmpCtx, c: &BmpComplex, x: usize) -> Result<FreeComplex> {
    Ok(Ops(&FreeCtx {
        nvars: ctx.cat.graph().nvars(),
    })
    .minimize(&naive_costalk(ctx, c, x)?))
}

/// Termwise stalks at x.
pub fn naive_stalk(ctx: &BmpCtx, c: &BmpComplex, x: usize) -> FreeComplex {
    let labels = |i: i32| -> Vec<(usize, usize, i32)> {
        c.term(i)
            .iter()
            .enumerate()
            .flat_map(|(p, &(y, a))| {
                ctx.object(y).stalks[x]
                    .iter()
                    .enumerate()
                    .map(move |(j, &sh)| (p, j, sh + a))
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    let mut terms = BTreeMap::new();
    let mut d = BTreeMap::new();
    for i in c.lo..=c.hi() {
        terms.insert(i, labels(i).iter().map(|l| l.2).collect());
    }
    for i in c.lo..c.hi() {
        let (src, tgt) = (labels(i), labels(i + 1));
        let di = c.diff(i);
        let mut b = Block::zero(tgt.len(), src.len());
        for (r, &(q, jq, _)) in tgt.iter().enumerate() {
            for (col, &(p, jp, _)) in src.iter().enumerate() {
                if let Some(m) = di.get(q, p) {
                    let e = m.vertex[x].get(jq, jp);
                    if !e.is_zero() {
                        b.set(r, col, Some(e.clone()));
                    }
                }
            }
        }
        d.insert(i, b);
    }
    Complex::from_parts(terms, d)
}

/// Termwise costalks at x.
pub fn naive_costalk(ctx: &BmpCtx, c: &BmpComplex, x: usize) -> Result<FreeComplex> {
    let cat = ctx.cat;
    let labels = |i: i32| -> Result<Vec<(usize, usize, i32, i32, Vec<Poly>)>> {
        let mut out = Vec::new();
        for (p, &(y, a)) in c.term(i).iter().enumerate() {
            if ctx.object(y).rank(x) == 0 {
                continue;
            }
            for (g, (e, v)) in cat.costalk(y, x)?.gens.iter().enumerate() {
                out.push((p, g, a - e, *e, v.clone()));
            }
        }
        Ok(out)
    };
    let mut terms = BTreeMap::new();
    let mut d = BTreeMap::new();
    for i in c.lo..=c.hi() {
        terms.insert(i, labels(i)?.iter().map(|l| l.2).collect());
    }
    for i in c.lo..c.hi() {
        let (src, tgt) = (labels(i)?, labels(i + 1)?);
        let di = c.diff(i);
        let mut b = Block::zero(tgt.len(), src.len());
        for (col, (p, _, _, e, v)) in src.iter().enumerate() {
            for (q, lq) in c.term(i + 1).iter().enumerate() {
                let Some(m) = di.get(q, *p) else { continue };
                let img = m.vertex[x].apply(v);
                let coef = cat
                    .costalk(lq.0, x)?
                    .solver
                    .express(&img, e + lq.1 - c.term(i)[*p].1)
                    .ok_or_else(|| {
                        Error::Invariant("costalk not preserved by a morphism".into())
                    })?;
                for (r, (qq, g, _, _, _)) in tgt.iter().enumerate() {
                    if *qq == q && !coef[*g].is_zero() {
                        b.set(r, col, Some(coef[*g].clone()));
                    }
                }
            }
        }
        d.insert(i, b);
    }
    Ok(Complex::from_parts(terms, d))
}

/// Applies R → 𝕜 (evaluation at 0) to every entry.
pub fn constructible(c: &FreeComplex) -> FreeComplex {
    let mut out = c.clone();
    for b in out.d.iter_mut() {
        for a in b.data.iter_mut() {
            if let Some(p) = a {
                let k = p.constant_term();
                *a = (!k.is_zero()).then(|| Poly::constant(p.nvars(), k));
            }
        }
    }
    out
}
