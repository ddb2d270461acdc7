use crate::coxeter::{coset_data, CoxeterGroup};
use crate::error::{Error, Result};
use crate::sheaf::{GraphMorphism, MomentGraph, Vertex};
use std::sync::Arc;

/// A Bruhat moment graph on W (no parabolic) or on W/W_s.
#[derive(Clone, Debug)]
pub struct BruhatGraph {
    pub group: Arc<CoxeterGroup>,
    pub graph: Arc<MomentGraph>,
    pub parabolic: Option<usize>,
    /// Minimal group element of each vertex.
    pub reps: Vec<usize>,
}

fn check_faithful(g: &CoxeterGroup) -> Result<()> {
    if let Err(w) = g.check_reflection_faithful()? {
        return Err(Error::NotReflectionFaithful(g.name(w)));
    }
    Ok(())
}

/// The Bruhat graph on W: edges x—tx labeled α_t.
pub fn bruhat_graph(g: &Arc<CoxeterGroup>) -> Result<BruhatGraph> {
    check_faithful(g)?;
    let n = g.len();
    let vertices = (0..n)
        .map(|w| Vertex {
            id: g.name(w),
            d: g.length(w) as i32,
            order_rank: w as i32,
        })
        .collect();
    let mut order = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if g.length(y) == g.length(x) + 1 && g.bruhat_leq(x, y) {
                order.push((x, y));
            }
        }
    }
    let mut edges = Vec::new();
    for &t in g.reflections() {
        let alpha = g.root_poly(t);
        for x in 0..n {
            let y = g.mul(t, x);
            if x < y {
                edges.push((x, y, alpha.clone()));
            }
        }
    }
    edges.sort_by_key(|e| (e.0, e.1));
    let vars = MomentGraph::default_vars(g.realization.nvars());
    let graph = MomentGraph::new(g.realization.field, vars, vertices, order, edges)?;
    Ok(BruhatGraph {
        group: g.clone(),
        graph: Arc::new(graph),
        parabolic: None,
        reps: (0..n).collect(),
    })
}

/// The graph on W/W_s with the induced order and d_p = min length.
pub fn parabolic_graph(g: &Arc<CoxeterGroup>, s: usize) -> Result<BruhatGraph> {
    check_faithful(g)?;
    let (cosets, leq) = coset_data(g, s);
    let find = |w: usize| {
        cosets
            .iter()
            .position(|c| c.min == w || c.max == w)
            .unwrap()
    };
    let vertices = cosets
        .iter()
        .enumerate()
        .map(|(i, c)| Vertex {
            id: format!("{}W_{}", g.name(c.min), g.system.gens[s]),
            d: c.d as i32,
            order_rank: i as i32,
        })
        .collect();
    let mut order = Vec::new();
    for (i, row) in leq.iter().enumerate() {
        for (j, &b) in row.iter().enumerate() {
            if i != j && b {
                order.push((i, j));
            }
        }
    }
    let mut edges = Vec::new();
    for &t in g.reflections() {
        for (i, c) in cosets.iter().enumerate() {
            let j = find(g.mul(t, c.min));
            if i < j
                && !edges
                    .iter()
                    .any(|e: &(usize, usize, _)| e.0 == i && e.1 == j)
            {
                edges.push((i, j, g.root_poly(t)));
            }
        }
    }
    edges.sort_by_key(|e| (e.0, e.1));
    let vars = MomentGraph::default_vars(g.realization.nvars());
    let graph = MomentGraph::new(g.realization.field, vars, vertices, order, edges)?;
    Ok(BruhatGraph {
        group: g.clone(),
        graph: Arc::new(graph),
        parabolic: Some(s),
        reps: cosets.iter().map(|c| c.min).collect(),
    })
}

/// π^s: W → W/W_s as a morphism of moment graphs.
pub fn projection(b: &BruhatGraph, p: &BruhatGraph) -> GraphMorphism {
    let s = p.parabolic.expect("parabolic target");
    let g = &b.group;
    let map = b
        .reps
        .iter()
        .map(|&w| {
            let ws = g.mul_right(w, s);
            p.reps.iter().position(|&m| m == w || m == ws).unwrap()
        })
        .collect();
    GraphMorphism { map }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(t: &str) -> Arc<CoxeterGroup> {
        Arc::new(CoxeterGroup::parse_type(t).unwrap())
    }

    #[test]
    fn sizes() {
        let b = bruhat_graph(&grp("A1")).unwrap();
        assert_eq!((b.graph.len(), b.graph.edges.len()), (2, 1));
        let b = bruhat_graph(&grp("A2")).unwrap();
        assert_eq!((b.graph.len(), b.graph.edges.len()), (6, 9));
        let p = parabolic_graph(&grp("A2"), 0).unwrap();
        assert_eq!(p.graph.len(), 3);
        assert_eq!(p.graph.edges.len(), 3);
        let mut ds: Vec<i32> = p.graph.vertices.iter().map(|v| v.d).collect();
        ds.sort();
        assert_eq!(ds, vec![0, 1, 2]);
        let pi = projection(&b, &p);
        pi.validate(&b.graph, &p.graph).unwrap();
        assert_eq!(parabolic_graph(&grp("B2"), 0).unwrap().graph.len(), 4);
    }

    #[test]
    fn json_roundtrip_of_bruhat_graphs() {
        for t in ["A1", "A2", "B2"] {
            let b = bruhat_graph(&grp(t)).unwrap();
            let s = b.graph.to_json();
            assert_eq!(MomentGraph::from_json(&s).unwrap().to_json(), s);
        }
    }
}
