//! Krull–Schmidt splitting of BMP sheaves into shifted indecomposables.

use super::category::BmpCategory;
use crate::error::{Error, Result};
use crate::polyalg::linalg::{independent_subset, invert};
use crate::polyalg::{Scalar, SparseVec};
use crate::sheaf::{HomSystem, Sheaf, SheafMorphism};

/// F ≅ ⊕ E_y{n}, with inclusions ι_k: E_y → F of degree −n and projections π_k of degree n.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<(usize, i32)>,
    pub iota: Vec<SheafMorphism>,
    pub pi: Vec<SheafMorphism>,
}

/// Constant at the top stalk of a degree-0 endomorphism of E_y.
pub fn top_scalar(phi: &SheafMorphism, y: usize) -> Scalar {
    phi.vertex[y].get(0, 0).constant_term()
}

pub fn decompose(f: &Sheaf, cat: &BmpCategory) -> Result<Decomposition> {
    let g = &f.graph;
    let mut cands: Vec<(usize, i32)> = Vec::new();
    for y in f.support() {
        for e in f.stalk_generator_degrees(y) {
            let c = (y, -e - g.vertices[y].d);
            if !cands.contains(&c) {
                cands.push(c);
            }
        }
    }
    cands.sort_by_key(|&(y, n)| (std::cmp::Reverse(g.vertices[y].d), y, n));
    let mut e = SheafMorphism::identity(f);
    let mut out = Decomposition {
        summands: vec![],
        iota: vec![],
        pi: vec![],
    };
    for (y, n) in cands {
        let ey = cat.object(y)?;
        let fs = HomSystem::new(&ey, f, None).basis(-n);
        let gs = HomSystem::new(f, &ey, None).basis(n);
        if fs.is_empty() || gs.is_empty() {
            continue;
        }
        let ef: Vec<SheafMorphism> = fs.iter().map(|a| e.compose_in(a, g)).collect();
        let ge: Vec<SheafMorphism> = gs.iter().map(|b| b.compose_in(&e, g)).collect();
        let p: Vec<Vec<Scalar>> = ef
            .iter()
            .map(|a| gs.iter().map(|b| top_scalar(&b.compose(a), y)).collect())
            .collect();
        let rows = independent_subset(
            &p.iter()
                .map(|r| SparseVec::from_dense(r))
                .collect::<Vec<_>>(),
        );
        if rows.is_empty() {
            continue;
        }
        let cols = independent_subset(
            &(0..gs.len())
                .map(|b| {
                    SparseVec::from_dense(
                        &rows.iter().map(|&a| p[a][b].clone()).collect::<Vec<_>>(),
                    )
                })
                .collect::<Vec<_>>(),
        );
        let r = rows.len();
        let m: Vec<Vec<Scalar>> = (0..r)
            .map(|j| (0..r).map(|k| p[rows[k]][cols[j]].clone()).collect())
            .collect();
        let q =
            invert(&m).ok_or_else(|| Error::SplitFailure("pairing block is singular".into()))?;
        let mut idem = SheafMorphism::zero(f, f, 0);
        for i in 0..r {
            let iota = ef[rows[i]].clone();
            let mut pi = SheafMorphism::zero(f, &ey, n);
            for j in 0..r {
                pi = pi.add(&ge[cols[j]].scale(&q[i][j]));
            }
            idem = idem.add(&iota.compose_in(&pi, g));
            out.summands.push((y, n));
            out.iota.push(iota);
            out.pi.push(pi);
        }
        e = e.add(&idem.scale(&Scalar::from_i64(-1)));
    }
    if !e.is_zero() {
        return Err(Error::SplitFailure(
            "a complement remains after splitting off all candidates".into(),
        ));
    }
    Ok(out)
}
