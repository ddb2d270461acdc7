use super::graph::{MomentGraph, RawGraph};
use crate::error::{Error, Result};
use crate::polyalg::graded::{Annihilator, Comp};
use crate::polyalg::{Ambient, Poly, PolyMatrix};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Edge module F^E = ⊕ (R/α_E){n} with its two structure maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeModule {
    pub shifts: Vec<i32>,
    pub rho_lower: PolyMatrix,
    pub rho_upper: PolyMatrix,
}

/// A sheaf on a moment graph: free stalks, edge modules and structure maps.
#[derive(Clone, Debug)]
pub struct Sheaf {
    pub graph: Arc<MomentGraph>,
    pub stalks: Vec<Vec<i32>>,
    pub edges: Vec<EdgeModule>,
}

impl PartialEq for Sheaf {
    fn eq(&self, o: &Sheaf) -> bool {
        Arc::ptr_eq(&self.graph, &o.graph) && self.stalks == o.stalks && self.edges == o.edges
    }
}

impl Sheaf {
    pub fn zero(graph: Arc<MomentGraph>) -> Sheaf {
        let n = graph.nvars();
        let edges = graph.edges.iter().map(|_| EdgeModule::empty(n)).collect();
        Sheaf {
            stalks: vec![Vec::new(); graph.len()],
            edges,
            graph,
        }
    }

    /// The sheaf with stalk `shifts` at x and zero elsewhere.
    pub fn skyscraper(graph: Arc<MomentGraph>, x: usize, shifts: Vec<i32>) -> Sheaf {
        let mut s = Sheaf::zero(graph);
        let n = s.nvars();
        for &e in s.graph.up_edges(x).iter().chain(s.graph.down_edges(x)) {
            s.edges[e] = EdgeModule {
                shifts: vec![],
                rho_lower: PolyMatrix::zero(0, 0, n),
                rho_upper: PolyMatrix::zero(0, 0, n),
            };
        }
        let r = shifts.len();
        s.stalks[x] = shifts;
        for &e in s.graph.up_edges(x) {
            s.edges[e].rho_lower = PolyMatrix::zero(0, r, n);
        }
        for &e in s.graph.down_edges(x) {
            s.edges[e].rho_upper = PolyMatrix::zero(0, r, n);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.graph.nvars()
    }

    pub fn rank(&self, x: usize) -> usize {
        self.stalks[x].len()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.stalks.len())
            .filter(|&x| !self.stalks[x].is_empty())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.stalks.iter().all(|s| s.is_empty())
    }

    pub fn stalk_ambient(&self, x: usize) -> Ambient {
        Ambient::free(self.nvars(), &self.stalks[x])
    }

    pub fn edge_ambient(&self, e: usize) -> Ambient {
        edge_ambient(
            self.nvars(),
            &self.edges[e].shifts,
            self.graph.annihilator(e),
        )
    }

    /// Structure map ρ_{x,E}.
    pub fn rho(&self, x: usize, e: usize) -> &PolyMatrix {
        let ed = &self.graph.edges[e];
        if ed.lower == x {
            &self.edges[e].rho_lower
        } else {
            debug_assert_eq!(ed.upper, x);
            &self.edges[e].rho_upper
        }
    }

    /// Edge modules equal the upper stalk mod α with ρ_upper the identity.
    pub fn is_standard(&self) -> bool {
        self.graph.edges.iter().zip(&self.edges).all(|(ed, m)| {
            m.shifts == self.stalks[ed.upper]
                && m.rho_upper == PolyMatrix::identity(m.shifts.len(), self.nvars())
        })
    }

    /// Builds a sheaf in standard form from stalks and the lower structure maps.
    pub fn standard(
        graph: Arc<MomentGraph>,
        stalks: Vec<Vec<i32>>,
        rho_lower: Vec<PolyMatrix>,
    ) -> Sheaf {
        let n = graph.nvars();
        let edges = graph
            .edges
            .iter()
            .zip(rho_lower)
            .enumerate()
            .map(|(k, (ed, rl))| {
                let shifts = stalks[ed.upper].clone();
                let ann = graph.annihilator(k);
                EdgeModule {
                    rho_upper: PolyMatrix::identity(shifts.len(), n),
                    rho_lower: rl.map(|p| ann.reduce(p)),
                    shifts,
                }
            })
            .collect();
        Sheaf {
            graph,
            stalks,
            edges,
        }
    }

    pub fn check(&self) -> Result<()> {
        let n = self.nvars();
        if self.stalks.len() != self.graph.len() || self.edges.len() != self.graph.edges.len() {
            return Err(Error::Validation("sheaf does not match its graph".into()));
        }
        for (k, (ed, m)) in self.graph.edges.iter().zip(&self.edges).enumerate() {
            let r = m.shifts.len();
            let ann = self.graph.annihilator(k);
            for (mat, x) in [(&m.rho_lower, ed.lower), (&m.rho_upper, ed.upper)] {
                if mat.rows != r || mat.cols != self.stalks[x].len() || mat.nvars != n {
                    return Err(Error::Validation(format!(
                        "structure map on edge {k} has the wrong shape"
                    )));
                }
                if !mat.is_homogeneous(&self.stalks[x], &m.shifts, 0) {
                    return Err(Error::Validation(format!(
                        "structure map on edge {k} is not homogeneous of degree 0"
                    )));
                }
                if mat.data.iter().any(|p| &ann.reduce(p) != p) {
                    return Err(Error::Validation(format!(
                        "structure map on edge {k} is not reduced mod the label"
                    )));
                }
            }
        }
        Ok(())
    }

    /// F{n}: every shift increased by n.
    pub fn shift(&self, n: i32) -> Sheaf {
        let sh = |v: &Vec<i32>| v.iter().map(|s| s + n).collect::<Vec<_>>();
        Sheaf {
            graph: self.graph.clone(),
            stalks: self.stalks.iter().map(sh).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeModule {
                    shifts: sh(&e.shifts),
                    ..e.clone()
                })
                .collect(),
        }
    }

    pub fn direct_sum(graph: &Arc<MomentGraph>, parts: &[Sheaf]) -> Sheaf {
        let n = graph.nvars();
        let stalks = (0..graph.len())
            .map(|x| {
                parts
                    .iter()
                    .flat_map(|p| p.stalks[x].iter().copied())
                    .collect()
            })
            .collect();
        let edges = (0..graph.edges.len())
            .map(|e| EdgeModule {
                shifts: parts
                    .iter()
                    .flat_map(|p| p.edges[e].shifts.iter().copied())
                    .collect(),
                rho_lower: block_diag(n, parts.iter().map(|p| &p.edges[e].rho_lower)),
                rho_upper: block_diag(n, parts.iter().map(|p| &p.edges[e].rho_upper)),
            })
            .collect();
        Sheaf {
            graph: graph.clone(),
            stalks,
            edges,
        }
    }

    /// Graded rank of the stalks: generator degrees per vertex.
    pub fn stalk_generator_degrees(&self, x: usize) -> Vec<i32> {
        let mut v: Vec<i32> = self.stalks[x].iter().map(|s| -s).collect();
        v.sort();
        v
    }
}

impl EdgeModule {
    pub fn empty(nvars: usize) -> EdgeModule {
        EdgeModule {
            shifts: vec![],
            rho_lower: PolyMatrix::zero(0, 0, nvars),
            rho_upper: PolyMatrix::zero(0, 0, nvars),
        }
    }
}

pub fn edge_ambient(nvars: usize, shifts: &[i32], ann: &Arc<Annihilator>) -> Ambient {
    Ambient {
        nvars,
        comps: shifts
            .iter()
            .map(|&shift| Comp {
                shift,
                ann: Some(ann.clone()),
            })
            .collect(),
    }
}

pub fn block_diag<'a>(
    nvars: usize,
    mats: impl Iterator<Item = &'a PolyMatrix> + Clone,
) -> PolyMatrix {
    let rows = mats.clone().map(|m| m.rows).sum();
    let cols = mats.clone().map(|m| m.cols).sum();
    let mut out = PolyMatrix::zero(rows, cols, nvars);
    let (mut r0, mut c0) = (0, 0);
    for m in mats {
        for i in 0..m.rows {
            for j in 0..m.cols {
                out.set(r0 + i, c0 + j, m.get(i, j).clone());
            }
        }
        r0 += m.rows;
        c0 += m.cols;
    }
    out
}

/// Morphism of sheaves of internal degree `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafMorphism {
    pub degree: i32,
    pub vertex: Vec<PolyMatrix>,
    pub edge: Vec<PolyMatrix>,
}

impl SheafMorphism {
    pub fn zero(src: &Sheaf, tgt: &Sheaf, degree: i32) -> SheafMorphism {
        let n = src.nvars();
        SheafMorphism {
            degree,
            vertex: (0..src.stalks.len())
                .map(|x| PolyMatrix::zero(tgt.rank(x), src.rank(x), n))
                .collect(),
            edge: (0..src.edges.len())
                .map(|e| PolyMatrix::zero(tgt.edges[e].shifts.len(), src.edges[e].shifts.len(), n))
                .collect(),
        }
    }

    pub fn identity(f: &Sheaf) -> SheafMorphism {
        let n = f.nvars();
        SheafMorphism {
            degree: 0,
            vertex: f
                .stalks
                .iter()
                .map(|s| PolyMatrix::identity(s.len(), n))
                .collect(),
            edge: f
                .edges
                .iter()
                .map(|e| PolyMatrix::identity(e.shifts.len(), n))
                .collect(),
        }
    }

    /// Fills in edge components of a morphism between standard-form sheaves.
    pub fn from_vertices(
        src: &Sheaf,
        tgt: &Sheaf,
        degree: i32,
        vertex: Vec<PolyMatrix>,
    ) -> SheafMorphism {
        let edge = src
            .graph
            .edges
            .iter()
            .enumerate()
            .map(|(k, ed)| {
                let ann = src.graph.annihilator(k);
                let m = &vertex[ed.upper];
                debug_assert_eq!(
                    (m.rows, m.cols),
                    (tgt.edges[k].shifts.len(), src.edges[k].shifts.len())
                );
                m.map(|p| ann.reduce(p))
            })
            .collect();
        SheafMorphism {
            degree,
            vertex,
            edge,
        }
    }

    pub fn compose(&self, first: &SheafMorphism) -> SheafMorphism {
        SheafMorphism {
            degree: self.degree + first.degree,
            vertex: self
                .vertex
                .iter()
                .zip(&first.vertex)
                .map(|(a, b)| a.mul(b))
                .collect(),
            edge: self
                .edge
                .iter()
                .zip(&first.edge)
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    /// Composition with edge components reduced mod the labels.
    pub fn compose_in(&self, first: &SheafMorphism, graph: &MomentGraph) -> SheafMorphism {
        let mut m = self.compose(first);
        for (k, e) in m.edge.iter_mut().enumerate() {
            let ann = graph.annihilator(k);
            *e = e.map(|p| ann.reduce(p));
        }
        m
    }

    pub fn add(&self, o: &SheafMorphism) -> SheafMorphism {
        assert_eq!(self.degree, o.degree);
        SheafMorphism {
            degree: self.degree,
            vertex: self
                .vertex
                .iter()
                .zip(&o.vertex)
                .map(|(a, b)| a.add(b))
                .collect(),
            edge: self
                .edge
                .iter()
                .zip(&o.edge)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &crate::polyalg::Scalar) -> SheafMorphism {
        SheafMorphism {
            degree: self.degree,
            vertex: self.vertex.iter().map(|m| m.scale(c)).collect(),
            edge: self.edge.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.vertex.iter().all(|m| m.is_zero()) && self.edge.iter().all(|m| m.is_zero())
    }

    /// Checks shapes, homogeneity and the commuting squares exactly.
    pub fn check(&self, src: &Sheaf, tgt: &Sheaf) -> Result<()> {
        let g = &src.graph;
        for x in 0..g.len() {
            let m = &self.vertex[x];
            if (m.rows, m.cols) != (tgt.rank(x), src.rank(x))
                || !m.is_homogeneous(&src.stalks[x], &tgt.stalks[x], self.degree)
            {
                return Err(Error::Validation(format!(
                    "vertex component at {} is malformed",
                    g.vertices[x].id
                )));
            }
        }
        for (k, ed) in g.edges.iter().enumerate() {
            let m = &self.edge[k];
            let (fs, gs) = (&src.edges[k].shifts, &tgt.edges[k].shifts);
            if (m.rows, m.cols) != (gs.len(), fs.len()) || !m.is_homogeneous(fs, gs, self.degree) {
                return Err(Error::Validation(format!(
                    "edge component {k} is malformed"
                )));
            }
            let ann = g.annihilator(k);
            for x in [ed.lower, ed.upper] {
                let lhs = tgt.rho(x, k).mul(&self.vertex[x]);
                let rhs = m.mul(src.rho(x, k));
                if lhs.sub(&rhs).data.iter().any(|p| !ann.reduce(p).is_zero()) {
                    return Err(Error::Validation(format!(
                        "square at edge {k} does not commute"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RawStalk {
    vertex: String,
    shifts: Vec<i32>,
}

#[derive(Serialize, Deserialize)]
struct RawEdgeModule {
    u: String,
    v: String,
    shifts: Vec<i32>,
    rho_lower: Vec<Vec<String>>,
    rho_upper: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct RawSheaf {
    graph: RawGraph,
    stalks: Vec<RawStalk>,
    edges: Vec<RawEdgeModule>,
}

pub fn matrix_to_strings(m: &PolyMatrix, names: &[String]) -> Vec<Vec<String>> {
    (0..m.rows)
        .map(|i| {
            (0..m.cols)
                .map(|j| m.get(i, j).to_string_with(names))
                .collect()
        })
        .collect()
}

pub fn matrix_from_strings(
    rows: &[Vec<String>],
    r: usize,
    c: usize,
    g: &MomentGraph,
) -> Result<PolyMatrix> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(Error::Validation(format!("expected a {r}x{c} matrix")));
    }
    let mut m = PolyMatrix::zero(r, c, g.nvars());
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            m.set(i, j, Poly::parse(s, &g.vars, g.field)?);
        }
    }
    Ok(m)
}

impl Sheaf {
    pub fn to_json(&self) -> String {
        let g = &self.graph;
        let raw = RawSheaf {
            graph: g.to_raw(),
            stalks: g
                .vertices
                .iter()
                .zip(&self.stalks)
                .map(|(v, s)| RawStalk {
                    vertex: v.id.clone(),
                    shifts: s.clone(),
                })
                .collect(),
            edges: g
                .edges
                .iter()
                .zip(&self.edges)
                .map(|(ed, m)| RawEdgeModule {
                    u: g.vertices[ed.lower].id.clone(),
                    v: g.vertices[ed.upper].id.clone(),
                    shifts: m.shifts.clone(),
                    rho_lower: matrix_to_strings(&m.rho_lower, &g.vars),
                    rho_upper: matrix_to_strings(&m.rho_upper, &g.vars),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("serializable") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Sheaf> {
        let raw: RawSheaf = serde_json::from_str(s)?;
        let g = Arc::new(MomentGraph::from_raw(raw.graph)?);
        Sheaf::from_raw_parts(g, raw.stalks, raw.edges)
    }

    /// Reads only the sheaf data, against a known graph.
    fn from_raw_parts(
        g: Arc<MomentGraph>,
        rs: Vec<RawStalk>,
        re: Vec<RawEdgeModule>,
    ) -> Result<Sheaf> {
        let mut stalks = vec![Vec::new(); g.len()];
        let mut seen = vec![false; g.len()];
        for s in rs {
            let x = g
                .vertex(&s.vertex)
                .ok_or_else(|| Error::Validation(format!("unknown vertex {:?}", s.vertex)))?;
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::Validation(format!(
                    "stalk {:?} given twice",
                    s.vertex
                )));
            }
            stalks[x] = s.shifts;
        }
        let mut edges: Vec<Option<EdgeModule>> = vec![None; g.edges.len()];
        for e in re {
            let look = |s: &str| {
                g.vertex(s)
                    .ok_or_else(|| Error::Validation(format!("unknown vertex {s:?}")))
            };
            let (a, b) = (look(&e.u)?, look(&e.v)?);
            let k = g
                .edge_between(a, b)
                .ok_or_else(|| Error::Validation("edge module on a non-edge".into()))?;
            if g.edges[k].lower != a {
                return Err(Error::Validation(
                    "edge module endpoints must be listed lower first".into(),
                ));
            }
            let r = e.shifts.len();
            let m = EdgeModule {
                rho_lower: matrix_from_strings(&e.rho_lower, r, stalks[a].len(), &g)?,
                rho_upper: matrix_from_strings(&e.rho_upper, r, stalks[b].len(), &g)?,
                shifts: e.shifts,
            };
            if edges[k].replace(m).is_some() {
                return Err(Error::Validation("edge module given twice".into()));
            }
        }
        let n = g.nvars();
        let edges = edges
            .into_iter()
            .enumerate()
            .map(|(k, m)| {
                m.unwrap_or_else(|| {
                    let ed = &g.edges[k];
                    EdgeModule {
                        shifts: vec![],
                        rho_lower: PolyMatrix::zero(0, stalks[ed.lower].len(), n),
                        rho_upper: PolyMatrix::zero(0, stalks[ed.upper].len(), n),
                    }
                })
            })
            .collect();
        let f = Sheaf {
            graph: g,
            stalks,
            edges,
        };
        f.check()?;
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::Field;
    use crate::sheaf::graph::Vertex;

    pub(crate) fn a1_graph() -> Arc<MomentGraph> {
        let vs = vec![
            Vertex {
                id: "1".into(),
                d: 0,
                order_rank: 0,
            },
            Vertex {
                id: "s".into(),
                d: 1,
                order_rank: 1,
            },
        ];
        let a = Poly::parse_default("x1", 1, Field::Rational).unwrap();
        Arc::new(
            MomentGraph::new(
                Field::Rational,
                vec!["x1".into()],
                vs,
                vec![(0, 1)],
                vec![(0, 1, a)],
            )
            .unwrap(),
        )
    }

    fn e_s() -> Sheaf {
        let g = a1_graph();
        Sheaf::standard(g, vec![vec![1], vec![1]], vec![PolyMatrix::identity(1, 1)])
    }

    #[test]
    fn standard_form_and_json() {
        let f = e_s();
        f.check().unwrap();
        assert!(f.is_standard());
        let s = f.to_json();
        let h = Sheaf::from_json(&s).unwrap();
        assert_eq!(h.to_json(), s);
        assert_eq!(h.stalks, f.stalks);
    }

    #[test]
    fn morphism_checks() {
        let f = e_s();
        let id = SheafMorphism::identity(&f);
        id.check(&f, &f).unwrap();
        let mut bad = id.clone();
        bad.vertex[0] = PolyMatrix::zero(1, 1, 1);
        assert!(bad.check(&f, &f).is_err());
        let sum = Sheaf::direct_sum(&f.graph, &[f.clone(), f.shift(2)]);
        sum.check().unwrap();
        assert_eq!(sum.stalks[0], vec![1, 3]);
    }
}
