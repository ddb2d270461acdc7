//! The Braden–MacPherson construction of indecomposable sheaves.

use crate::error::{Error, Result};
use crate::polyalg::graded::minimal_generators;
use crate::polyalg::{Poly, PolyMatrix};
use crate::sheaf::ops::{mask, sections_in_degree, Stack};
use crate::sheaf::{check_v, MomentGraph, Sheaf, Vertex};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Which stalk the top vertex gets: R (classification) or R{d_top} (perverse).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    #[default]
    Perverse,
    Classification,
}

impl Normalization {
    pub fn parse(s: &str) -> Result<Normalization> {
        match s {
            "perverse" => Ok(Normalization::Perverse),
            "classification" => Ok(Normalization::Classification),
            _ => Err(Error::Validation(format!("unknown normalization {s:?}"))),
        }
    }

    pub fn top_shift(self, g: &MomentGraph, top: usize) -> i32 {
        match self {
            Normalization::Perverse => g.vertices[top].d,
            Normalization::Classification => 0,
        }
    }
}

/// Generator windows: start at the top degree plus height plus `margin`, widen by `step`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowPolicy {
    pub margin: i32,
    pub step: i32,
    pub max_widenings: u32,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        WindowPolicy {
            margin: 2,
            step: 4,
            max_widenings: 4,
        }
    }
}

/// A BMP sheaf with the window on which it was built and verified.
#[derive(Clone, Debug)]
pub struct BmpObject {
    pub sheaf: Sheaf,
    pub top: usize,
    pub normalization: Normalization,
    pub window: (i32, i32),
}

/// Builds E_top by descending a linear extension of {≤ top}.
pub fn build_bmp(
    g: &Arc<MomentGraph>,
    top: usize,
    norm: Normalization,
    policy: &WindowPolicy,
) -> Result<BmpObject> {
    let lo = -norm.top_shift(g, top);
    let mut hi = lo + g.height(top) as i32 + policy.margin;
    let mut tries = 0;
    loop {
        match build_in_window(g, top, norm, lo, hi) {
            Err(Error::WindowNotStabilized { .. }) if tries < policy.max_widenings => {
                log::debug!(
                    "widening window for {} to [{lo}, {}]",
                    g.vertices[top].id,
                    hi + policy.step
                );
                hi += policy.step;
                tries += 1;
            }
            Err(e) => return Err(e),
            Ok(sheaf) => {
                return Ok(BmpObject {
                    sheaf,
                    top,
                    normalization: norm,
                    window: (lo, hi),
                })
            }
        }
    }
}

fn build_in_window(
    g: &Arc<MomentGraph>,
    top: usize,
    norm: Normalization,
    lo: i32,
    hi: i32,
) -> Result<Sheaf> {
    let n = g.nvars();
    let below = g.below(top);
    let mut stalks: Vec<Vec<i32>> = vec![Vec::new(); g.len()];
    stalks[top] = vec![norm.top_shift(g, top)];
    let mut rho: Vec<Option<PolyMatrix>> = vec![None; g.edges.len()];
    let materialize = |stalks: &Vec<Vec<i32>>, rho: &Vec<Option<PolyMatrix>>| -> Vec<PolyMatrix> {
        g.edges
            .iter()
            .zip(rho)
            .map(|(ed, r)| {
                r.clone().unwrap_or_else(|| {
                    PolyMatrix::zero(stalks[ed.upper].len(), stalks[ed.lower].len(), n)
                })
            })
            .collect()
    };
    let order: Vec<usize> = g
        .linear_extension()
        .into_iter()
        .rev()
        .filter(|&x| below[x] && x != top)
        .collect();
    for x in order {
        let partial = Sheaf::standard(g.clone(), stalks.clone(), materialize(&stalks, &rho));
        let ups: Vec<usize> = g
            .up_edges(x)
            .iter()
            .copied()
            .filter(|&k| !stalks[g.edges[k].upper].is_empty())
            .collect();
        if ups.is_empty() {
            continue;
        }
        let tgt = Stack::new(
            n,
            &ups.iter()
                .map(|&k| partial.edge_ambient(k))
                .collect::<Vec<_>>(),
        );
        let above = g.strictly_above(x);
        let gens = minimal_generators(&tgt.amb, lo, hi, |d| {
            Ok(sections_in_degree(&partial, &above, d)
                .into_iter()
                .map(|s| {
                    let mut out = Vec::with_capacity(tgt.amb.len());
                    for &k in &ups {
                        out.extend(s[g.edges[k].upper].iter().cloned());
                    }
                    tgt.amb.reduce(&out)
                })
                .collect())
        })?;
        stalks[x] = gens.iter().map(|(d, _)| -d).collect();
        let parts: Vec<Vec<Vec<Poly>>> = gens.iter().map(|(_, v)| tgt.split(v)).collect();
        for (b, &k) in ups.iter().enumerate() {
            let cols: Vec<Vec<Poly>> = parts.iter().map(|p| p[b].clone()).collect();
            rho[k] = Some(PolyMatrix::from_columns(
                stalks[g.edges[k].upper].len(),
                n,
                &cols,
            ));
        }
    }
    let sheaf = Sheaf::standard(g.clone(), stalks.clone(), materialize(&stalks, &rho));
    sheaf.check()?;
    Ok(sheaf)
}

/// A small moment graph on which some indecomposable has a non-free costalk.
#[derive(Clone, Debug)]
pub struct NonVWitness {
    pub graph: Arc<MomentGraph>,
    pub top: usize,
    pub vertex: String,
    pub generator_degrees: Vec<i32>,
}

/// Exhaustive search over graphs with at most `max_vertices` vertices, orders generated by
/// their edges, and generic labels drawn from a fixed pool of linear forms in three variables.
pub fn search_non_v(max_vertices: usize) -> Result<Option<NonVWitness>> {
    use crate::polyalg::{Field, Scalar};
    let nv = 3;
    let lin =
        |c: [i64; 3]| Poly::linear(&c.iter().map(|&x| Scalar::from_i64(x)).collect::<Vec<_>>());
    let pool = [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 1, 0],
        [0, 1, 1],
        [1, 0, 1],
        [1, 1, 1],
        [1, 2, 3],
    ];
    let vars = MomentGraph::default_vars(nv);
    for n in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        if pairs.len() > pool.len() {
            break;
        }
        // every edge set, oriented by index; the order is the one generated by the edges
        for bits in 0u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize, Poly)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(i, &(a, b))| (a, b, lin(pool[i])))
                .collect();
            if !connected(n, &edges) {
                continue;
            }
            let vertices = (0..n)
                .map(|i| Vertex {
                    id: format!("v{i}"),
                    d: 0,
                    order_rank: i as i32,
                })
                .collect();
            let order = edges.iter().map(|e| (e.0, e.1)).collect();
            let g = Arc::new(MomentGraph::new(
                Field::Rational,
                vars.clone(),
                vertices,
                order,
                edges,
            )?);
            for top in 0..n {
                let f = build_bmp(
                    &g,
                    top,
                    Normalization::Classification,
                    &WindowPolicy::default(),
                )?;
                if let Some(w) = check_v(std::slice::from_ref(&f.sheaf))? {
                    return Ok(Some(NonVWitness {
                        graph: g,
                        top,
                        vertex: w.vertex,
                        generator_degrees: w.generator_degrees,
                    }));
                }
            }
        }
    }
    Ok(None)
}

fn connected(n: usize, edges: &[(usize, usize, Poly)]) -> bool {
    let mut seen = mask(n, &[0]);
    let mut changed = true;
    while changed {
        changed = false;
        for (a, b, _) in edges {
            if seen[*a] != seen[*b] {
                seen[*a] = true;
                seen[*b] = true;
                changed = true;
            }
        }
    }
    seen.iter().all(|&s| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bmp::bruhat::bruhat_graph;
    use crate::coxeter::CoxeterGroup;
    use crate::sheaf::ops::corestrict;
    use crate::sheaf::verify_bmp;

    fn graph(t: &str) -> Arc<MomentGraph> {
        bruhat_graph(&Arc::new(CoxeterGroup::parse_type(t).unwrap()))
            .unwrap()
            .graph
    }

    #[test]
    fn e_s_on_a1() {
        let g = graph("A1");
        let s = g.vertex("s").unwrap();
        let f = build_bmp(&g, s, Normalization::Perverse, &WindowPolicy::default()).unwrap();
        assert_eq!(f.sheaf.stalks, vec![vec![1], vec![1]]);
        assert_eq!(f.sheaf.edges[0].shifts, vec![1]);
        assert!(verify_bmp(&f.sheaf, -2, 6).unwrap().passed());
    }

    #[test]
    fn e_w0_on_a2() {
        let g = graph("A2");
        let w0 = g.vertex("sts").unwrap();
        let f = build_bmp(&g, w0, Normalization::Perverse, &WindowPolicy::default()).unwrap();
        assert!(f.sheaf.stalks.iter().all(|s| s == &vec![3]));
        assert!(verify_bmp(&f.sheaf, -3, 5).unwrap().passed());
        let one = g.vertex("1").unwrap();
        let (c, _) = corestrict(&f.sheaf, &mask(g.len(), &[one])).unwrap();
        assert_eq!(c.stalks[one], vec![-3]);
    }

    #[test]
    fn minimal_vertex_is_constant() {
        let g = graph("A2");
        let f = build_bmp(&g, 0, Normalization::Perverse, &WindowPolicy::default()).unwrap();
        assert_eq!(f.sheaf.support(), vec![0]);
        assert_eq!(f.sheaf.stalks[0], vec![0]);
    }

    #[test]
    fn non_v_graph_exists() {
        let w = search_non_v(3)
            .unwrap()
            .expect("a witness on three vertices");
        assert_eq!(w.graph.len(), 3);
        assert!(w.generator_degrees.len() > 2);
    }
}
