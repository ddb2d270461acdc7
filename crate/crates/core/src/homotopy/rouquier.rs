//! Translation of complexes, the F- and E-letters, and Rouquier complexes.

use super::complex::{Additive, Block, ChainMap, Complex, Ops};
use super::ctx::{BmpComplex, BmpCtx, Label};
use crate::error::{Error, Result};
use crate::sheaf::SheafMorphism;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LetterKind {
    F,
    E,
}

impl LetterKind {
    pub fn parse(s: &str) -> Result<LetterKind> {
        match s {
            "F" | "f" | "delta" => Ok(LetterKind::F),
            "E" | "e" | "nabla" => Ok(LetterKind::E),
            _ => Err(Error::Parse(format!("unknown letter kind {s:?}"))),
        }
    }
}

/// T̂_s applied termwise, with each T̂_sE_x split into indecomposables.
/// Also returns, per degree, the source position and summand index of every new term.
pub fn translate_complex(
    ctx: &BmpCtx,
    c: &BmpComplex,
    s: usize,
) -> Result<(BmpComplex, BTreeMap<i32, Vec<(usize, usize)>>)> {
    let cat = ctx.cat;
    let mut origin = BTreeMap::new();
    let mut terms = BTreeMap::new();
    for i in c.lo..=c.hi() {
        let mut t = Vec::new();
        let mut o = Vec::new();
        for (p, &(x, a)) in c.term(i).iter().enumerate() {
            let td = cat.translation(x, s)?;
            for (k, &(y, n)) in td.dec.summands.iter().enumerate() {
                t.push((y, n + a));
                o.push((p, k));
            }
        }
        terms.insert(i, t);
        origin.insert(i, o);
    }
    let mut d = BTreeMap::new();
    for i in c.lo..c.hi() {
        let (src, tgt) = (&origin[&i], &origin[&(i + 1)]);
        let di = c.diff(i);
        let mut b = Block::zero(tgt.len(), src.len());
        for (q, p, phi) in di.entries() {
            let (x, xp) = (c.term(i)[p].0, c.term(i + 1)[q].0);
            let comps = cat.translate_arrow(x, xp, s, phi)?;
            let rows: Vec<usize> = (0..tgt.len()).filter(|&r| tgt[r].0 == q).collect();
            let cols: Vec<usize> = (0..src.len()).filter(|&r| src[r].0 == p).collect();
            for &r in &rows {
                for &col in &cols {
                    let m = ctx.mask(comps[tgt[r].1][src[col].1].clone());
                    if !m.is_zero() {
                        let cur = b.get(r, col).cloned();
                        b.set(r, col, Ops(ctx).add_opt(cur, Some(&m)));
                    }
                }
            }
        }
        d.insert(i, b);
    }
    Ok((Complex::from_parts(terms, d), origin))
}

/// F_s(C) = Cocone(mult: T̂_sC{1} → C{1}), with the T̂_s part in the lower position of each term.
pub fn f_letter(ctx: &BmpCtx, c: &BmpComplex, s: usize) -> Result<BmpComplex> {
    let ops = Ops(ctx);
    let (t, origin) = translate_complex(ctx, c, s)?;
    let t = ops.twist(&t, 1);
    let c1 = ops.twist(c, 1);
    let mut f = ChainMap {
        degree: 0,
        blocks: BTreeMap::new(),
    };
    for i in c.lo..=c.hi() {
        let mut b = Block::zero(c.term(i).len(), t.term(i).len());
        for (r, &(p, k)) in origin[&i].iter().enumerate() {
            let td = ctx.cat.translation(c.term(i)[p].0, s)?;
            b.set(
                p,
                r,
                Some(ctx.mask(td.mult[k].clone())).filter(|m| !m.is_zero()),
            );
        }
        f.blocks.insert(i, b);
    }
    Ok(cocone(ctx, &t, &c1, &f))
}

/// Cocone(f: A → B): terms A^k ⊕ B^{k−1}, d = [[d_A, 0], [f, −d_B]].
pub fn cocone<C: Additive>(
    ctx: &C,
    a: &Complex<C::Label, C::Arrow>,
    b: &Complex<C::Label, C::Arrow>,
    f: &ChainMap<C::Arrow>,
) -> Complex<C::Label, C::Arrow> {
    let ops = Ops(ctx);
    let lo = a.lo.min(b.lo + 1);
    let hi = a.hi().max(b.hi() + 1);
    let mut terms = BTreeMap::new();
    let mut d = BTreeMap::new();
    for k in lo..=hi {
        terms.insert(
            k,
            a.term(k)
                .iter()
                .chain(b.term(k - 1))
                .cloned()
                .collect::<Vec<_>>(),
        );
        let z = Block::zero(a.term(k + 1).len(), b.term(k - 1).len());
        d.insert(
            k,
            ops.join(&a.diff(k), &z, &f.block(k, a, b), &ops.neg(&b.diff(k - 1))),
        );
    }
    Complex::from_parts(terms, d)
}

/// E_s(C) = Cone(unit: C{−1} → T̂_sC{1}).
pub fn e_letter(ctx: &BmpCtx, c: &BmpComplex, s: usize) -> Result<BmpComplex> {
    let ops = Ops(ctx);
    let (t, origin) = translate_complex(ctx, c, s)?;
    let t = ops.twist(&t, 1);
    let c1 = ops.twist(c, -1);
    let mut f = ChainMap {
        degree: 0,
        blocks: BTreeMap::new(),
    };
    for i in c.lo..=c.hi() {
        let mut b = Block::zero(t.term(i).len(), c.term(i).len());
        for (r, &(p, k)) in origin[&i].iter().enumerate() {
            let td = ctx.cat.translation(c.term(i)[p].0, s)?;
            b.set(
                r,
                p,
                Some(ctx.mask(td.unit[k].clone())).filter(|m| !m.is_zero()),
            );
        }
        f.blocks.insert(i, b);
    }
    Ok(ops.cone(&c1, &t, &f))
}

/// E_1 in degree 0.
pub fn unit_object(ctx: &BmpCtx) -> BmpComplex {
    Complex::single(vec![(ctx.cat.group().identity(), 0)], 0)
}

/// Applies letters left to right, minimizing after each; d∘d is re-checked every step.
pub fn apply_letters(
    ctx: &BmpCtx,
    c: &BmpComplex,
    word: &[usize],
    kind: LetterKind,
) -> Result<BmpComplex> {
    let ops = Ops(ctx);
    let mut cur = c.clone();
    for &s in word {
        cur = match kind {
            LetterKind::F => f_letter(ctx, &cur, s)?,
            LetterKind::E => e_letter(ctx, &cur, s)?,
        };
        ops.check_d2(&cur)?;
        cur = ops.minimize(&cur);
    }
    Ok(cur)
}

fn check_reduced(ctx: &BmpCtx, word: &[usize]) -> Result<()> {
    let g = ctx.cat.group();
    let w = g.from_word(word);
    if g.length(w) != word.len() {
        return Err(Error::NotReduced(g.system.word_string(word)));
    }
    Ok(())
}

/// The Rouquier complex of a reduced word applied to E_1.
pub fn rouquier(ctx: &BmpCtx, word: &[usize], kind: LetterKind) -> Result<BmpComplex> {
    check_reduced(ctx, word)?;
    apply_letters(ctx, &unit_object(ctx), word, kind)
}

/// F-letters along the chosen reduced word of w.
pub fn delta(ctx: &BmpCtx, w: usize) -> Result<BmpComplex> {
    rouquier(ctx, &ctx.cat.group().word(w), LetterKind::F)
}

/// E-letters along the chosen reduced word of w.
pub fn nabla(ctx: &BmpCtx, w: usize) -> Result<BmpComplex> {
    rouquier(ctx, &ctx.cat.group().word(w), LetterKind::E)
}

/// E_1{−1} → E_s → E_1{1} in degrees −1, 0, 1 with maps η_s, ε_s.
/// The composite ε_s∘η_s is α_s, so this is a complex only after 𝕜 ⊗_R on Hom spaces;
/// that is what gets checked.
pub fn tilting_s(ctx: &BmpCtx, s: usize) -> Result<BmpComplex> {
    let g = ctx.cat.group();
    let e = g.identity();
    let xs = g.mul_right(e, s);
    let eta = first_basis(ctx, e, xs, 1)?;
    let eps = first_basis(ctx, xs, e, 1)?;
    let mut d0 = Block::zero(1, 1);
    d0.set(0, 0, Some(eta));
    let mut d1 = Block::zero(1, 1);
    d1.set(0, 0, Some(eps));
    let c = Complex {
        lo: -1,
        terms: vec![vec![(e, -1)], vec![(xs, 0)], vec![(e, 1)]],
        d: vec![d0, d1],
    };
    let sq = ctx.compose(c.d[1].get(0, 0).unwrap(), c.d[0].get(0, 0).unwrap());
    if !super::khom::in_positive_part(ctx, e, e, &sq)? {
        return Err(Error::Invariant("ε∘η is not in the positive part".into()));
    }
    Ok(c)
}

fn first_basis(ctx: &BmpCtx, x: usize, y: usize, delta: i32) -> Result<SheafMorphism> {
    let b = ctx.cat.hom_basis(x, y, delta)?;
    b.first()
        .map(|m| ctx.mask(m.clone()))
        .ok_or_else(|| Error::Invariant("missing degree-one morphism".into()))
}

/// The projection of a cocone onto its first part, a chain map.
pub fn cocone_projection(
    ctx: &BmpCtx,
    cone: &BmpComplex,
    a: &BmpComplex,
) -> ChainMap<SheafMorphism> {
    let mut blocks = BTreeMap::new();
    for i in a.lo..=a.hi() {
        let n = a.term(i).len();
        let mut b = Block::zero(n, cone.term(i).len());
        for k in 0..n {
            b.set(k, k, Some(ctx.identity(&a.term(i)[k])));
        }
        blocks.insert(i, b);
    }
    ChainMap { degree: 0, blocks }
}

/// Labels of a complex, for display.
pub fn describe(ctx: &BmpCtx, c: &BmpComplex) -> Vec<(i32, Vec<String>)> {
    let g = ctx.cat.group();
    (c.lo..=c.hi())
        .map(|i| {
            (
                i,
                c.term(i)
                    .iter()
                    .map(|&(x, a): &Label| format!("E_{}{{{}}}", g.name(x), a))
                    .collect(),
            )
        })
        .collect()
}
