//! Perversity via minimal stalk and costalk complexes, and truncation on one stratum.

use super::complex::{Complex, Ops};
use super::ctx::{BmpComplex, BmpCtx, FreeComplex, FreeCtx};
use super::recollement::{constructible, naive_costalk, naive_stalk};
use crate::error::Result;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumReport {
    pub vertex: String,
    pub d: i32,
    /// (cohomological degree, shift n) of each R{n} in the minimal stalk complex
    pub stalk: Vec<(i32, i32)>,
    pub costalk: Vec<(i32, i32)>,
    pub le0: bool,
    pub ge0: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerversityReport {
    pub strata: Vec<StratumReport>,
    pub le0: bool,
    pub ge0: bool,
    pub heart: bool,
}

pub fn shifts(c: &FreeComplex) -> Vec<(i32, i32)> {
    c.label_multiset()
}

/// ᵖD^{≤0} on one stratum: every R{n} in degree i has n ≥ i + d.
pub fn le0(stalk: &[(i32, i32)], d: i32) -> bool {
    stalk.iter().all(|&(i, n)| n >= i + d)
}

/// ᵖD^{≥0} on one stratum: every R{n} in degree i has n ≤ i + d.
pub fn ge0(costalk: &[(i32, i32)], d: i32) -> bool {
    costalk.iter().all(|&(i, n)| n <= i + d)
}

/// Checks the stratumwise inequalities. With `constructible`, Hom spaces are taken
/// modulo R_+ first, so complexes whose d∘d only vanishes there are accepted.
pub fn perversity_check(
    ctx: &BmpCtx,
    c: &BmpComplex,
    constructible_homs: bool,
) -> Result<PerversityReport> {
    let g = ctx.cat.graph();
    let free = Ops(&FreeCtx { nvars: g.nvars() });
    let prep = |m: FreeComplex| {
        if constructible_homs {
            free.minimize(&constructible(&m))
        } else {
            free.minimize(&m)
        }
    };
    let mut strata = Vec::new();
    for x in 0..g.len() {
        let d = g.vertices[x].d;
        let st = shifts(&prep(naive_stalk(ctx, c, x)));
        let co = shifts(&prep(naive_costalk(ctx, c, x)?));
        strata.push(StratumReport {
            vertex: g.vertices[x].id.clone(),
            d,
            le0: le0(&st, d),
            ge0: ge0(&co, d),
            stalk: st,
            costalk: co,
        });
    }
    let l = strata.iter().all(|s| s.le0);
    let r = strata.iter().all(|s| s.ge0);
    Ok(PerversityReport {
        strata,
        le0: l,
        ge0: r,
        heart: l && r,
    })
}

/// For a complex of free modules on a single stratum of dimension d: the subcomplex L of
/// summands R{n} in degree i with n ≥ i + d, and the quotient N, so L → M → N is a triangle
/// with L in ᵖD^{≤0} and N in ᵖD^{≥1}.
pub fn truncate_stratum(m: &FreeComplex, d: i32, nvars: usize) -> (FreeComplex, FreeComplex) {
    let m = Ops(&FreeCtx { nvars }).minimize(m);
    let keep = |i: i32, upper: bool| -> Vec<usize> {
        (0..m.term(i).len())
            .filter(|&k| (m.term(i)[k] >= i + d) == upper)
            .collect()
    };
    let part = |upper: bool| -> FreeComplex {
        let mut terms = BTreeMap::new();
        let mut ds = BTreeMap::new();
        for i in m.lo..=m.hi() {
            let ks = keep(i, upper);
            terms.insert(i, ks.iter().map(|&k| m.term(i)[k]).collect());
            if i < m.hi() {
                ds.insert(i, m.diff(i).select(&keep(i + 1, upper), &ks));
            }
        }
        Complex::from_parts(terms, ds)
    };
    (part(true), part(false))
}
