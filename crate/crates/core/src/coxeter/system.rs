use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_ORDER_BOUND: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterSystem {
    pub gens: Vec<String>,
    pub m: Vec<Vec<u32>>,
    #[serde(default = "default_bound", skip_serializing)]
    pub order_bound: usize,
}

fn default_bound() -> usize {
    DEFAULT_ORDER_BOUND
}

impl CoxeterSystem {
    pub fn new(gens: Vec<String>, m: Vec<Vec<u32>>) -> Result<CoxeterSystem> {
        let sys = CoxeterSystem {
            gens,
            m,
            order_bound: DEFAULT_ORDER_BOUND,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.gens.len();
        if n == 0 {
            return Err(Error::Validation("no generators".into()));
        }
        if self.m.len() != n || self.m.iter().any(|r| r.len() != n) {
            return Err(Error::Validation(
                "Coxeter matrix has the wrong shape".into(),
            ));
        }
        for i in 0..n {
            if self.m[i][i] != 1 {
                return Err(Error::Validation(format!(
                    "m({0},{0}) must be 1",
                    self.gens[i]
                )));
            }
            for j in 0..n {
                if self.m[i][j] != self.m[j][i] {
                    return Err(Error::Validation("Coxeter matrix is not symmetric".into()));
                }
                if i != j && self.m[i][j] < 2 {
                    return Err(Error::Validation(
                        "off-diagonal Coxeter entries must be at least 2".into(),
                    ));
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        for g in &self.gens {
            if g.is_empty() || !g.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') || g == "1"
            {
                return Err(Error::Validation(format!("bad generator name {g:?}")));
            }
            if !seen.insert(g) {
                return Err(Error::Validation(format!("duplicate generator {g:?}")));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Type A_n, with generators s,t for n ≤ 2 and s1..sn otherwise.
    pub fn type_a(n: usize) -> CoxeterSystem {
        let mut m = vec![vec![2; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
            if i + 1 < n {
                row[i + 1] = 3;
            }
            if i > 0 {
                row[i - 1] = 3;
            }
        }
        CoxeterSystem {
            gens: default_gens(n),
            m,
            order_bound: DEFAULT_ORDER_BOUND,
        }
    }

    /// Type B_n; the last bond has m = 4.
    pub fn type_b(n: usize) -> CoxeterSystem {
        let mut s = CoxeterSystem::type_a(n);
        if n >= 2 {
            s.m[n - 2][n - 1] = 4;
            s.m[n - 1][n - 2] = 4;
        }
        s
    }

    /// Dihedral I₂(m).
    pub fn dihedral(m: u32) -> CoxeterSystem {
        CoxeterSystem {
            gens: default_gens(2),
            m: vec![vec![1, m], vec![m, 1]],
            order_bound: DEFAULT_ORDER_BOUND,
        }
    }

    /// "A1", "A2", "B2", "A3", "G2", "I2(5)", or JSON {"gens":[...],"m":[[...]]}.
    pub fn parse(spec: &str) -> Result<CoxeterSystem> {
        let t = spec.trim();
        if t.starts_with('{') {
            #[derive(Deserialize)]
            struct Raw {
                gens: Vec<String>,
                m: Vec<Vec<u32>>,
            }
            let raw: Raw = serde_json::from_str(t)?;
            return CoxeterSystem::new(raw.gens, raw.m);
        }
        let bad = || Error::Parse(format!("unknown Coxeter type {t:?}"));
        if let Some(m) = t.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
            let m: u32 = m.parse().map_err(|_| bad())?;
            if m < 2 {
                return Err(bad());
            }
            return Ok(CoxeterSystem::dihedral(m));
        }
        if t == "G2" {
            return Ok(CoxeterSystem::dihedral(6));
        }
        let (kind, n) = t.split_at(1.min(t.len()));
        let n: usize = n.parse().map_err(|_| bad())?;
        if n == 0 || n > 8 {
            return Err(bad());
        }
        match kind {
            "A" => Ok(CoxeterSystem::type_a(n)),
            "B" if n >= 2 => Ok(CoxeterSystem::type_b(n)),
            _ => Err(bad()),
        }
    }

    /// Parses a word such as "sts", "s,t,s", "s2s1s3s2" or "1" into generator indices.
    pub fn parse_word(&self, w: &str) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for tok in w.split(|c: char| c == ',' || c == '·' || c == '*' || c.is_whitespace()) {
            if tok.is_empty() || tok == "1" || tok == "e" {
                continue;
            }
            let mut rest = tok;
            while !rest.is_empty() {
                let best = self
                    .gens
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| rest.starts_with(g.as_str()))
                    .max_by_key(|(_, g)| g.len())
                    .ok_or_else(|| Error::Parse(format!("cannot read word {w:?}")))?;
                out.push(best.0);
                rest = &rest[best.1.len()..];
            }
        }
        Ok(out)
    }

    pub fn word_string(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&i| self.gens[i].as_str()).collect()
    }
}

fn default_gens(n: usize) -> Vec<String> {
    match n {
        1 => vec!["s".into()],
        2 => vec!["s".into(), "t".into()],
        _ => (1..=n).map(|i| format!("s{i}")).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_types() {
        assert_eq!(
            CoxeterSystem::parse("A2").unwrap().m,
            vec![vec![1, 3], vec![3, 1]]
        );
        assert_eq!(CoxeterSystem::parse("B2").unwrap().m[0][1], 4);
        let a3 = CoxeterSystem::parse("A3").unwrap();
        assert_eq!(a3.m[0][2], 2);
        assert_eq!(a3.gens, vec!["s1", "s2", "s3"]);
        let j = CoxeterSystem::parse(r#"{"gens":["s","t"],"m":[[1,3],[3,1]]}"#).unwrap();
        assert_eq!(j, CoxeterSystem::parse("A2").unwrap());
        assert!(CoxeterSystem::parse(r#"{"gens":["s","t"],"m":[[1,3],[2,1]]}"#).is_err());
        assert!(CoxeterSystem::parse("C9").is_err());
    }

    #[test]
    fn words() {
        let a3 = CoxeterSystem::parse("A3").unwrap();
        assert_eq!(a3.parse_word("s2s1s3s2").unwrap(), vec![1, 0, 2, 1]);
        assert_eq!(a3.parse_word("s2,s1").unwrap(), vec![1, 0]);
        let a2 = CoxeterSystem::parse("A2").unwrap();
        assert_eq!(a2.parse_word("sts").unwrap(), vec![0, 1, 0]);
        assert_eq!(a2.parse_word("1").unwrap(), Vec::<usize>::new());
        assert!(a2.parse_word("sx").is_err());
    }
}
