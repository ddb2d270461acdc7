use crate::error::{Error, Result};
use crate::polyalg::graded::Annihilator;
use crate::polyalg::{poly::default_names, Field, Poly};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub d: i32,
    pub order_rank: i32,
}

/// Edge between comparable vertices, stored as (lower, upper).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub lower: usize,
    pub upper: usize,
    pub label: Poly,
}

/// Finite moment graph with a partial order and a dimension function.
#[derive(Clone, Debug)]
pub struct MomentGraph {
    pub field: Field,
    pub vars: Vec<String>,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub order_pairs: Vec<(usize, usize)>,
    anns: Vec<Arc<Annihilator>>,
    leq: Vec<Vec<bool>>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    between: HashMap<(usize, usize), usize>,
    ids: HashMap<String, usize>,
}

/// A set of vertices.
pub type VertexSet = Vec<bool>;

impl MomentGraph {
    /// `order_pairs` generate the order (u < v); edges must join comparable vertices.
    pub fn new(
        field: Field,
        vars: Vec<String>,
        vertices: Vec<Vertex>,
        order_pairs: Vec<(usize, usize)>,
        edges: Vec<(usize, usize, Poly)>,
    ) -> Result<MomentGraph> {
        let n = vertices.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(u, v) in &order_pairs {
            if u >= n || v >= n {
                return Err(Error::Validation("order pair out of range".into()));
            }
            if u == v {
                return Err(Error::Validation(
                    "order pair relates a vertex to itself".into(),
                ));
            }
            leq[u][v] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Validation("order relation has a cycle".into()));
                }
            }
        }
        let mut ids = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if ids.insert(v.id.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate vertex id {:?}", v.id)));
            }
        }
        let nvars = vars.len();
        let mut es = Vec::new();
        let mut between = HashMap::new();
        for (a, b, label) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::Validation("edge endpoints invalid".into()));
            }
            if label.nvars() != nvars || label.degree() != Some(2) {
                return Err(Error::ZeroLabel);
            }
            if !field.contains_poly(&label) {
                return Err(Error::FieldMismatch("edge label outside the field".into()));
            }
            let (lower, upper) = if leq[a][b] {
                (a, b)
            } else if leq[b][a] {
                (b, a)
            } else {
                return Err(Error::Validation(format!(
                    "edge {}—{} joins incomparable vertices",
                    vertices[a].id, vertices[b].id
                )));
            };
            if between.contains_key(&(lower, upper)) {
                return Err(Error::Validation(format!(
                    "two edges between {} and {}",
                    vertices[lower].id, vertices[upper].id
                )));
            }
            between.insert((lower, upper), es.len());
            es.push(Edge {
                lower,
                upper,
                label,
            });
        }
        let anns = es
            .iter()
            .map(|e: &Edge| Annihilator::new(&e.label).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for (k, e) in es.iter().enumerate() {
            up[e.lower].push(k);
            down[e.upper].push(k);
        }
        Ok(MomentGraph {
            field,
            vars,
            vertices,
            edges: es,
            order_pairs,
            anns,
            leq,
            up,
            down,
            between,
            ids,
        })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, id: &str) -> Option<usize> {
        self.ids.get(id).copied()
    }

    pub fn annihilator(&self, e: usize) -> &Arc<Annihilator> {
        &self.anns[e]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    /// Edges x—y with y > x.
    pub fn up_edges(&self, x: usize) -> &[usize] {
        &self.up[x]
    }

    /// Edges y—x with y < x.
    pub fn down_edges(&self, x: usize) -> &[usize] {
        &self.down[x]
    }

    pub fn incident(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.up[x].iter().chain(&self.down[x]).copied()
    }

    pub fn edge_between(&self, x: usize, y: usize) -> Option<usize> {
        self.between
            .get(&(x, y))
            .or_else(|| self.between.get(&(y, x)))
            .copied()
    }

    pub fn other_end(&self, e: usize, x: usize) -> usize {
        let ed = &self.edges[e];
        if ed.lower == x {
            ed.upper
        } else {
            ed.lower
        }
    }

    pub fn all(&self) -> VertexSet {
        vec![true; self.len()]
    }

    pub fn below(&self, x: usize) -> VertexSet {
        (0..self.len()).map(|y| self.leq[y][x]).collect()
    }

    pub fn above(&self, x: usize) -> VertexSet {
        (0..self.len()).map(|y| self.leq[x][y]).collect()
    }

    pub fn strictly_above(&self, x: usize) -> VertexSet {
        (0..self.len()).map(|y| self.lt(x, y)).collect()
    }

    /// Open means upward closed.
    pub fn is_open(&self, set: &[bool]) -> bool {
        (0..self.len()).all(|x| !set[x] || (0..self.len()).all(|y| !self.leq[x][y] || set[y]))
    }

    /// Closed means downward closed.
    pub fn is_closed(&self, set: &[bool]) -> bool {
        (0..self.len()).all(|x| !set[x] || (0..self.len()).all(|y| !self.leq[y][x] || set[y]))
    }

    /// Number of elements strictly below x along a longest chain.
    pub fn height(&self, x: usize) -> usize {
        let mut memo = vec![None; self.len()];
        self.height_memo(x, &mut memo)
    }

    fn height_memo(&self, x: usize, memo: &mut Vec<Option<usize>>) -> usize {
        if let Some(h) = memo[x] {
            return h;
        }
        let h = (0..self.len())
            .filter(|&y| self.lt(y, x))
            .map(|y| self.height_memo(y, memo) + 1)
            .max()
            .unwrap_or(0);
        memo[x] = Some(h);
        h
    }

    /// Linear extension of the order: increasing (height, order_rank, index).
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut memo = vec![None; self.len()];
        let hs: Vec<usize> = (0..self.len())
            .map(|x| self.height_memo(x, &mut memo))
            .collect();
        let mut v: Vec<usize> = (0..self.len()).collect();
        v.sort_by_key(|&x| (hs[x], self.vertices[x].order_rank, x));
        v
    }

    /// Full subgraph on a vertex set, with the map new index → old index.
    pub fn subgraph(&self, set: &[bool]) -> (MomentGraph, Vec<usize>) {
        let old: Vec<usize> = (0..self.len()).filter(|&x| set[x]).collect();
        let mut new_of = vec![usize::MAX; self.len()];
        for (i, &x) in old.iter().enumerate() {
            new_of[x] = i;
        }
        let vertices = old.iter().map(|&x| self.vertices[x].clone()).collect();
        let mut pairs = Vec::new();
        for (i, &x) in old.iter().enumerate() {
            for (j, &y) in old.iter().enumerate() {
                if i != j && self.leq[x][y] {
                    pairs.push((i, j));
                }
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| set[e.lower] && set[e.upper])
            .map(|e| (new_of[e.lower], new_of[e.upper], e.label.clone()))
            .collect();
        let g = MomentGraph::new(self.field, self.vars.clone(), vertices, pairs, edges)
            .expect("subgraph of a valid graph");
        (g, old)
    }

    /// Covering relations of the order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.lt(x, y) && !(0..n).any(|z| self.lt(x, z) && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

impl Field {
    pub fn contains_poly(&self, p: &Poly) -> bool {
        p.terms().iter().all(|(_, c)| self.contains(c))
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct RawVertex {
    pub id: String,
    pub d: i32,
    pub order_rank: i32,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct RawEdge {
    pub u: String,
    pub v: String,
    pub label: String,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct RawGraph {
    pub field: Field,
    pub vars: Vec<String>,
    pub vertices: Vec<RawVertex>,
    pub order: Vec<(String, String)>,
    pub edges: Vec<RawEdge>,
}

impl MomentGraph {
    pub(crate) fn to_raw(&self) -> RawGraph {
        RawGraph {
            field: self.field,
            vars: self.vars.clone(),
            vertices: self
                .vertices
                .iter()
                .map(|v| RawVertex {
                    id: v.id.clone(),
                    d: v.d,
                    order_rank: v.order_rank,
                })
                .collect(),
            order: self
                .order_pairs
                .iter()
                .map(|&(u, v)| (self.vertices[u].id.clone(), self.vertices[v].id.clone()))
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    u: self.vertices[e.lower].id.clone(),
                    v: self.vertices[e.upper].id.clone(),
                    label: e.label.to_string_with(&self.vars),
                })
                .collect(),
        }
    }

    pub(crate) fn from_raw(raw: RawGraph) -> Result<MomentGraph> {
        if let Field::Quadratic { d } = raw.field {
            Field::quadratic(d)?;
        }
        let mut seen = std::collections::HashSet::new();
        for v in &raw.vars {
            if v.is_empty()
                || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                || !v.chars().next().unwrap().is_ascii_alphabetic()
            {
                return Err(Error::Validation(format!("bad variable name {v:?}")));
            }
            if !seen.insert(v.clone()) {
                return Err(Error::Validation(format!("duplicate variable {v:?}")));
            }
        }
        let vertices: Vec<Vertex> = raw
            .vertices
            .into_iter()
            .map(|v| Vertex {
                id: v.id,
                d: v.d,
                order_rank: v.order_rank,
            })
            .collect();
        let ids: HashMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect();
        let look = |s: &str| {
            ids.get(s)
                .copied()
                .ok_or_else(|| Error::Validation(format!("unknown vertex {s:?}")))
        };
        let order = raw
            .order
            .iter()
            .map(|(u, v)| Ok((look(u)?, look(v)?)))
            .collect::<Result<Vec<_>>>()?;
        let edges = raw
            .edges
            .iter()
            .map(|e| {
                Ok((
                    look(&e.u)?,
                    look(&e.v)?,
                    Poly::parse(&e.label, &raw.vars, raw.field)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        MomentGraph::new(raw.field, raw.vars, vertices, order, edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("serializable") + "\n"
    }

    pub fn from_json(s: &str) -> Result<MomentGraph> {
        MomentGraph::from_raw(serde_json::from_str(s)?)
    }

    pub fn default_vars(n: usize) -> Vec<String> {
        default_names(n)
    }
}

/// Vertex map between moment graphs over the same realization.
#[derive(Clone, Debug)]
pub struct GraphMorphism {
    pub map: Vec<usize>,
}

impl GraphMorphism {
    pub fn identity(n: usize) -> GraphMorphism {
        GraphMorphism {
            map: (0..n).collect(),
        }
    }

    /// Checks that each edge either collapses or maps to an edge with a proportional label.
    pub fn validate(&self, src: &MomentGraph, tgt: &MomentGraph) -> Result<()> {
        if self.map.len() != src.len() || self.map.iter().any(|&y| y >= tgt.len()) {
            return Err(Error::Validation("vertex map has the wrong shape".into()));
        }
        for e in &src.edges {
            let (a, b) = (self.map[e.lower], self.map[e.upper]);
            if a == b {
                continue;
            }
            let k = tgt
                .edge_between(a, b)
                .ok_or_else(|| Error::Validation("edge maps to a non-edge".into()))?;
            if !proportional(&tgt.edges[k].label, &e.label) {
                return Err(Error::Validation("edge labels differ".into()));
            }
        }
        Ok(())
    }
}

pub fn proportional(a: &Poly, b: &Poly) -> bool {
    let (Some(x), Some(y)) = (a.linear_coeffs(), b.linear_coeffs()) else {
        return false;
    };
    let Some(i) = x.iter().position(|c| !c.is_zero()) else {
        return false;
    };
    if y[i].is_zero() {
        return false;
    }
    let r = &y[i] / &x[i];
    x.iter().zip(&y).all(|(p, q)| &(p * &r) == q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> MomentGraph {
        let vs = (0..3)
            .map(|i| Vertex {
                id: format!("v{i}"),
                d: i,
                order_rank: i,
            })
            .collect();
        let x = |s: &str| Poly::parse_default(s, 2, Field::Rational).unwrap();
        MomentGraph::new(
            Field::Rational,
            default_names(2),
            vs,
            vec![(0, 1), (1, 2)],
            vec![(0, 1, x("x1")), (2, 0, x("x2")), (1, 2, x("x1 + x2"))],
        )
        .unwrap()
    }

    #[test]
    fn order_and_sets() {
        let g = chain();
        assert!(g.leq(0, 2));
        assert_eq!(g.edges[1].lower, 0);
        assert!(g.is_open(&[false, true, true]));
        assert!(!g.is_open(&[true, false, true]));
        assert!(g.is_closed(&[true, true, false]));
        assert_eq!(g.linear_extension(), vec![0, 1, 2]);
        assert_eq!(g.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn json_roundtrip() {
        let g = chain();
        let s = g.to_json();
        let h = MomentGraph::from_json(&s).unwrap();
        assert_eq!(h.to_json(), s);
    }

    #[test]
    fn rejects_bad_graphs() {
        let vs = |n: usize| {
            (0..n)
                .map(|i| Vertex {
                    id: format!("v{i}"),
                    d: 0,
                    order_rank: 0,
                })
                .collect::<Vec<_>>()
        };
        let x = Poly::parse_default("x1", 1, Field::Rational).unwrap();
        assert!(MomentGraph::new(
            Field::Rational,
            default_names(1),
            vs(2),
            vec![],
            vec![(0, 1, x.clone())]
        )
        .is_err());
        assert!(MomentGraph::new(
            Field::Rational,
            default_names(1),
            vs(2),
            vec![(0, 1), (1, 0)],
            vec![]
        )
        .is_err());
        assert!(MomentGraph::new(
            Field::Rational,
            default_names(1),
            vs(2),
            vec![(0, 1)],
            vec![(0, 1, Poly::zero(1))]
        )
        .is_err());
        assert!(MomentGraph::new(
            Field::Rational,
            default_names(1),
            vs(2),
            vec![(0, 1)],
            vec![(0, 1, x.clone()), (1, 0, x)]
        )
        .is_err());
    }
}
