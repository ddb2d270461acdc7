use super::system::CoxeterSystem;
use crate::error::{Error, Result};
use crate::polyalg::{Field, Poly, Scalar, Q};
use serde::{Deserialize, Serialize};

/// Dense square matrix acting on coefficient columns of V*.
pub type Mat = Vec<Vec<Scalar>>;

pub fn mat_identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    let k = b.len();
    let mut out = vec![vec![Scalar::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += &(&a[i][l] * &b[l][j]);
                }
            }
        }
    }
    out
}

pub fn mat_vec(a: &Mat, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y))
        })
        .collect()
}

/// Realization: V* = 𝕜^n with linear actions of the generators and simple-root covectors.
/// The polynomial ring R = Sym(V*) has one variable per coordinate of V*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub field: Field,
    pub dim: usize,
    pub actions: Vec<Mat>,
    pub roots: Vec<Vec<Scalar>>,
}

/// −2cos(π/m) as an exact scalar together with the field it needs.
pub fn cartan_entry(m: u32) -> Result<(Scalar, Field)> {
    Ok(match m {
        2 => (Scalar::zero(), Field::Rational),
        3 => (Scalar::from_i64(-1), Field::Rational),
        4 => (-Scalar::sqrt(2), Field::Quadratic { d: 2 }),
        5 => (
            Scalar::quadratic(Q::new(-1, 2), Q::new(-1, 2), 5),
            Field::Quadratic { d: 5 },
        ),
        6 => (-Scalar::sqrt(3), Field::Quadratic { d: 3 }),
        _ => {
            return Err(Error::Validation(format!(
                "no exact geometric realization implemented for m = {m}"
            )))
        }
    })
}

impl Realization {
    /// Geometric representation with Cartan entries −2cos(π/m); V* has the simple roots as basis.
    pub fn geometric(sys: &CoxeterSystem) -> Result<Realization> {
        let n = sys.rank();
        let mut field = Field::Rational;
        let mut cartan = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    cartan[i][j] = Scalar::from_i64(2);
                } else {
                    let (a, f) = cartan_entry(sys.m[i][j])?;
                    field = field.join(f)?;
                    cartan[i][j] = a;
                }
            }
        }
        // s(α_t) = α_t − a_{st} α_s
        let actions = (0..n)
            .map(|s| {
                let mut m = mat_identity(n);
                for t in 0..n {
                    m[s][t] = &m[s][t] - &cartan[s][t];
                }
                m
            })
            .collect();
        let roots = (0..n)
            .map(|s| {
                (0..n)
                    .map(|i| {
                        if i == s {
                            Scalar::one()
                        } else {
                            Scalar::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Realization {
            field,
            dim: n,
            actions,
            roots,
        })
    }

    /// Explicit realization, validated.
    pub fn explicit(
        field: Field,
        actions: Vec<Mat>,
        roots: Vec<Vec<Scalar>>,
    ) -> Result<Realization> {
        let dim = roots.first().map(|r| r.len()).unwrap_or(0);
        let r = Realization {
            field,
            dim,
            actions,
            roots,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.actions.len() != self.roots.len() {
            return Err(Error::Validation(
                "one action matrix and one root per generator".into(),
            ));
        }
        for (a, r) in self.actions.iter().zip(&self.roots) {
            if a.len() != self.dim
                || a.iter().any(|row| row.len() != self.dim)
                || r.len() != self.dim
            {
                return Err(Error::Validation(
                    "realization matrices have the wrong shape".into(),
                ));
            }
            if mat_mul(a, a) != mat_identity(self.dim) {
                return Err(Error::Validation(
                    "action matrix is not an involution".into(),
                ));
            }
            if r.iter().all(|x| x.is_zero()) {
                return Err(Error::ZeroLabel);
            }
            for x in a.iter().flatten().chain(r) {
                if !self.field.contains(x) {
                    return Err(Error::FieldMismatch(format!("{x} not in {:?}", self.field)));
                }
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.dim
    }

    pub fn root_poly(&self, s: usize) -> Poly {
        Poly::linear(&self.roots[s])
    }

    /// Images of the variables under a matrix, as linear forms: x_i ↦ column i.
    pub fn variable_images(m: &Mat) -> Vec<Poly> {
        let n = m.len();
        (0..n)
            .map(|i| Poly::linear(&(0..n).map(|r| m[r][i].clone()).collect::<Vec<_>>()))
            .collect()
    }

    /// Checks the braid relations (st)^m = 1 for all pairs.
    pub fn satisfies_braid_relations(&self, sys: &CoxeterSystem) -> bool {
        let n = self.actions.len();
        (0..n).all(|s| {
            (0..n).all(|t| {
                let st = mat_mul(&self.actions[s], &self.actions[t]);
                let mut p = mat_identity(self.dim);
                for _ in 0..sys.m[s][t] {
                    p = mat_mul(&p, &st);
                }
                p == mat_identity(self.dim)
            })
        })
    }
}

#[derive(Serialize, Deserialize)]
struct RawRealization {
    field: Field,
    actions: Vec<Vec<Vec<String>>>,
    roots: Vec<Vec<String>>,
}

impl Realization {
    pub fn from_json(s: &str) -> Result<Realization> {
        let raw: RawRealization = serde_json::from_str(s)?;
        let sc = |x: &String| Scalar::parse_in(x, raw.field);
        let actions = raw
            .actions
            .iter()
            .map(|m| {
                m.iter()
                    .map(|r| r.iter().map(sc).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let roots = raw
            .roots
            .iter()
            .map(|r| r.iter().map(sc).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Realization::explicit(raw.field, actions, roots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_is_involutive_and_braided() {
        for t in ["A1", "A2", "B2", "A3", "G2", "I2(5)"] {
            let sys = CoxeterSystem::parse(t).unwrap();
            let r = Realization::geometric(&sys).unwrap();
            r.validate().unwrap();
            assert!(r.satisfies_braid_relations(&sys), "{t}");
        }
    }

    #[test]
    fn b2_needs_sqrt2() {
        let r = Realization::geometric(&CoxeterSystem::parse("B2").unwrap()).unwrap();
        assert_eq!(r.field, Field::Quadratic { d: 2 });
    }
}
