//! Cached indecomposables, Hom bases and translation data on a Bruhat graph.

use super::bruhat::{bruhat_graph, BruhatGraph};
use super::build::{build_bmp, Normalization, WindowPolicy};
use super::decompose::{decompose, Decomposition};
use super::localize::{mult, translate, translate_morphism, unit, Translated};
use crate::coxeter::CoxeterGroup;
use crate::error::{Error, Result};
use crate::polyalg::graded::SpanSolver;
use crate::polyalg::{Poly, PolyMatrix};
use crate::sheaf::ops::costalk;
use crate::sheaf::{HomSystem, MomentGraph, Sheaf, SheafMorphism};
use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

/// T̂_s E_x split into indecomposables, with the natural maps in components.
#[derive(Debug)]
pub struct TranslationData {
    pub translated: Translated,
    pub dec: Decomposition,
    /// mult ∘ ι_k: E_{y_k} → E_x.
    pub mult: Vec<SheafMorphism>,
    /// π_k ∘ unit: E_x → E_{y_k}.
    pub unit: Vec<SheafMorphism>,
}

/// Costalk of E_x at s with a solver for coordinates in its generators.
#[derive(Debug)]
pub struct CostalkData {
    pub gens: Vec<(i32, Vec<Poly>)>,
    pub solver: SpanSolver,
}

struct Cache<K, V>(Mutex<HashMap<K, Arc<V>>>);

impl<K: Eq + Hash + Clone, V> Cache<K, V> {
    fn new() -> Self {
        Cache(Mutex::new(HashMap::new()))
    }

    fn get_or(&self, k: K, f: impl FnOnce() -> Result<V>) -> Result<Arc<V>> {
        if let Some(v) = self.0.lock().unwrap().get(&k) {
            return Ok(v.clone());
        }
        let v = Arc::new(f()?);
        Ok(self.0.lock().unwrap().entry(k).or_insert(v).clone())
    }
}

/// The additive category of perverse-normalized BMP sheaves on a Bruhat graph.
pub struct BmpCategory {
    pub bruhat: BruhatGraph,
    pub policy: WindowPolicy,
    objects: Cache<usize, Sheaf>,
    homs: Cache<(usize, usize, i32), Vec<SheafMorphism>>,
    translations: Cache<(usize, usize), TranslationData>,
    costalks: Cache<(usize, usize), CostalkData>,
}

impl BmpCategory {
    pub fn new(group: CoxeterGroup) -> Result<BmpCategory> {
        Self::with_policy(group, WindowPolicy::default())
    }

    pub fn with_policy(group: CoxeterGroup, policy: WindowPolicy) -> Result<BmpCategory> {
        let bruhat = bruhat_graph(&Arc::new(group))?;
        Ok(BmpCategory {
            bruhat,
            policy,
            objects: Cache::new(),
            homs: Cache::new(),
            translations: Cache::new(),
            costalks: Cache::new(),
        })
    }

    pub fn parse_type(t: &str) -> Result<BmpCategory> {
        Self::new(CoxeterGroup::parse_type(t)?)
    }

    pub fn group(&self) -> &Arc<CoxeterGroup> {
        &self.bruhat.group
    }

    pub fn graph(&self) -> &Arc<MomentGraph> {
        &self.bruhat.graph
    }

    pub fn len(&self) -> usize {
        self.graph().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn d(&self, x: usize) -> i32 {
        self.graph().vertices[x].d
    }

    /// E_x, perverse normalization; checks End⁰(E_x) = 𝕜.
    pub fn object(&self, x: usize) -> Result<Arc<Sheaf>> {
        self.objects.get_or(x, || {
            let f = build_bmp(self.graph(), x, Normalization::Perverse, &self.policy)?.sheaf;
            if HomSystem::new(&f, &f, None).dim(0) != 1 {
                return Err(Error::Invariant(format!(
                    "End⁰ of E_{} is not the ground field",
                    self.graph().vertices[x].id
                )));
            }
            Ok(f)
        })
    }

    /// Basis of Hom^δ(E_x, E_y).
    pub fn hom_basis(&self, x: usize, y: usize, delta: i32) -> Result<Arc<Vec<SheafMorphism>>> {
        self.homs.get_or((x, y, delta), || {
            let (a, b) = (self.object(x)?, self.object(y)?);
            Ok(HomSystem::new(&a, &b, None).basis(delta))
        })
    }

    pub fn translation(&self, x: usize, s: usize) -> Result<Arc<TranslationData>> {
        self.translations.get_or((x, s), || {
            let ex = self.object(x)?;
            let translated = translate(&ex, self.group(), s)?;
            let g = self.graph();
            let dec = decompose(translated.sheaf(), self)?;
            let m = mult(&translated);
            let u = unit(&translated, self.group())?;
            let mult = dec.iota.iter().map(|i| m.compose_in(i, g)).collect();
            let unit = dec.pi.iter().map(|p| p.compose_in(&u, g)).collect();
            Ok(TranslationData {
                translated,
                dec,
                mult,
                unit,
            })
        })
    }

    /// Components π'_j ∘ T̂_s φ ∘ ι_k of T̂_s applied to φ: E_x → E_{x'}.
    pub fn translate_arrow(
        &self,
        x: usize,
        xp: usize,
        s: usize,
        phi: &SheafMorphism,
    ) -> Result<Vec<Vec<SheafMorphism>>> {
        let (tx, txp) = (self.translation(x, s)?, self.translation(xp, s)?);
        let t = translate_morphism(phi, &tx.translated, &txp.translated, self.group())?;
        let g = self.graph();
        Ok(txp
            .dec
            .pi
            .iter()
            .map(|p| {
                tx.dec
                    .iota
                    .iter()
                    .map(|i| p.compose_in(&t.compose_in(i, g), g))
                    .collect()
            })
            .collect())
    }

    /// Costalk of E_x at s relative to all upward edges.
    pub fn costalk(&self, x: usize, s: usize) -> Result<Arc<CostalkData>> {
        self.costalks.get_or((x, s), || {
            let f = self.object(x)?;
            let gens = costalk(&f, s)?;
            Ok(CostalkData {
                solver: SpanSolver::new(f.stalk_ambient(s), gens.clone()),
                gens,
            })
        })
    }

    /// Matrix at s of the inclusion of the costalk of E_x.
    pub fn costalk_matrix(&self, x: usize, s: usize) -> Result<PolyMatrix> {
        let c = self.costalk(x, s)?;
        let f = self.object(x)?;
        Ok(PolyMatrix::from_columns(
            f.rank(s),
            f.nvars(),
            &c.gens.iter().map(|g| g.1.clone()).collect::<Vec<_>>(),
        ))
    }
}
