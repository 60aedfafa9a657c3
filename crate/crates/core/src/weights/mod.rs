//! Torus weight systems and the positivity test: a multiset of characters is
//! positive when zero is not in its convex hull, i.e. some linear functional is
//! strictly positive on every weight.
//!
//! Every answer comes with a certificate that can be re-checked without the
//! solver: a rational functional `λ` with `λ·w >= 1` on all weights, or a
//! nonzero nonnegative integer combination `Σ nᵢ wᵢ = 0`.

mod difference;
mod simplex;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{primitive_integer_vector, rat, Rational, RationalRepr};

pub use difference::{difference_positivity, infer_difference_presentation, DifferencePresentation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightsError {
    #[error("weight {index} has length {found}, expected rank {rank}")]
    WeightLength {
        index: usize,
        found: usize,
        rank: usize,
    },
    #[error("{found} character names given for rank {rank}")]
    CharacterCount { found: usize, rank: usize },
    #[error("inclusion matrix is {rows}x{cols}, expected {expected_rows} rows")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
    },
    #[error("weight {index} is not e_i - e_j for distinct basis indices")]
    MalformedPresentation { index: usize },
    #[error("presentation has {found} entries for {expected} weights")]
    PresentationLength { found: usize, expected: usize },
}

/// Finite multiset of integer characters of a rank-`r` torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    rank: usize,
    characters: Vec<String>,
    weights: Vec<Vec<i64>>,
}

impl WeightSystem {
    pub fn new(characters: Vec<String>, weights: Vec<Vec<i64>>) -> Result<Self, WeightsError> {
        let rank = characters.len();
        for (index, w) in weights.iter().enumerate() {
            if w.len() != rank {
                return Err(WeightsError::WeightLength {
                    index,
                    found: w.len(),
                    rank,
                });
            }
        }
        Ok(WeightSystem {
            rank,
            characters,
            weights,
        })
    }

    /// Weight system with characters named `e1..er`.
    pub fn with_rank(rank: usize, weights: Vec<Vec<i64>>) -> Result<Self, WeightsError> {
        Self::new(default_characters(rank), weights)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn characters(&self) -> &[String] {
        &self.characters
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Same multiset with weights in sorted order.
    pub fn sorted(&self) -> WeightSystem {
        let mut w = self.weights.clone();
        w.sort();
        WeightSystem {
            rank: self.rank,
            characters: self.characters.clone(),
            weights: w,
        }
    }

    pub fn extend(&mut self, other: &WeightSystem) -> Result<(), WeightsError> {
        for (i, w) in other.weights.iter().enumerate() {
            if w.len() != self.rank {
                return Err(WeightsError::WeightLength {
                    index: i,
                    found: w.len(),
                    rank: self.rank,
                });
            }
        }
        self.weights.extend(other.weights.iter().cloned());
        Ok(())
    }

    pub fn push(&mut self, w: Vec<i64>) -> Result<(), WeightsError> {
        if w.len() != self.rank {
            return Err(WeightsError::WeightLength {
                index: self.weights.len(),
                found: w.len(),
                rank: self.rank,
            });
        }
        self.weights.push(w);
        Ok(())
    }

    pub fn contains_zero_weight(&self) -> bool {
        self.weights.iter().any(|w| w.iter().all(|&x| x == 0))
    }
}

pub fn default_characters(rank: usize) -> Vec<String> {
    (1..=rank).map(|i| format!("e{i}")).collect()
}

/// Pulls a weight system back along a torus inclusion.
///
/// `inclusion` has one row per ambient character and one column per
/// sub-torus character; a weight `w` maps to `inclusionᵀ w`.
pub fn restrict_weight_system(
    ws: &WeightSystem,
    inclusion: &[Vec<i64>],
    sub_characters: Option<Vec<String>>,
) -> Result<WeightSystem, WeightsError> {
    let cols = inclusion.first().map_or(0, Vec::len);
    if inclusion.len() != ws.rank || inclusion.iter().any(|r| r.len() != cols) {
        return Err(WeightsError::ShapeMismatch {
            rows: inclusion.len(),
            cols,
            expected_rows: ws.rank,
        });
    }
    let characters = sub_characters.unwrap_or_else(|| default_characters(cols));
    if characters.len() != cols {
        return Err(WeightsError::CharacterCount {
            found: characters.len(),
            rank: cols,
        });
    }
    let weights = ws
        .weights
        .iter()
        .map(|w| {
            (0..cols)
                .map(|c| w.iter().zip(inclusion).map(|(x, row)| x * row[c]).sum())
                .collect()
        })
        .collect();
    WeightSystem::new(characters, weights)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PositivityCertificate {
    /// `λ·w >= 1` for every weight.
    Positive { functional: Vec<Rational> },
    /// Nonzero, nonnegative, coprime and `Σ nᵢ wᵢ = 0`.
    NotPositive { combination: Vec<BigInt> },
}

impl PositivityCertificate {
    pub fn is_positive(&self) -> bool {
        matches!(self, PositivityCertificate::Positive { .. })
    }

    pub fn verdict(&self) -> Verdict {
        match self {
            PositivityCertificate::Positive { .. } => Verdict::Positive,
            PositivityCertificate::NotPositive { .. } => Verdict::NotPositive,
        }
    }

    /// Independent check of the witness against `ws`.
    pub fn verify(&self, ws: &WeightSystem) -> bool {
        match self {
            PositivityCertificate::Positive { functional } => {
                functional.len() == ws.rank && verify_functional(ws, functional)
            }
            PositivityCertificate::NotPositive { combination } => {
                if combination.len() != ws.len()
                    || combination.iter().any(Signed::is_negative)
                    || combination.iter().all(Zero::is_zero)
                {
                    return false;
                }
                (0..ws.rank).all(|c| {
                    combination
                        .iter()
                        .zip(&ws.weights)
                        .fold(BigInt::zero(), |acc, (n, w)| acc + n * w[c])
                        .is_zero()
                })
            }
        }
    }
}

/// True iff `λ·w >= 1` for every weight.
pub fn verify_functional(ws: &WeightSystem, functional: &[Rational]) -> bool {
    functional.len() == ws.rank
        && ws.weights.iter().all(|w| {
            let v = w
                .iter()
                .zip(functional)
                .fold(Rational::zero(), |acc, (&x, l)| acc + l * rat(x));
            v >= rat(1)
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Positive,
    NotPositive,
}

/// Decides positivity by exact LP feasibility of `{λ : λ·w >= 1}`.
pub fn positivity(ws: &WeightSystem) -> PositivityCertificate {
    let rows: Vec<Vec<Rational>> = ws
        .weights
        .iter()
        .map(|w| w.iter().map(|&x| rat(x)).collect())
        .collect();
    let cert = match simplex::solve_at_least_one(&rows, ws.rank) {
        simplex::Feasibility::Feasible(functional) => PositivityCertificate::Positive { functional },
        simplex::Feasibility::Infeasible(y) => PositivityCertificate::NotPositive {
            combination: primitive_integer_vector(&y),
        },
    };
    debug_assert!(cert.verify(ws), "solver produced an invalid certificate");
    cert
}

#[derive(Serialize, Deserialize)]
struct WeightSystemRepr {
    rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    characters: Option<Vec<String>>,
    weights: Vec<Vec<i64>>,
}

impl Serialize for WeightSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WeightSystemRepr {
            rank: self.rank,
            characters: Some(self.characters.clone()),
            weights: self.weights.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = WeightSystemRepr::deserialize(d)?;
        let characters = match repr.characters {
            Some(c) if c.len() != repr.rank => {
                return Err(D::Error::custom(WeightsError::CharacterCount {
                    found: c.len(),
                    rank: repr.rank,
                }))
            }
            Some(c) => c,
            None => default_characters(repr.rank),
        };
        WeightSystem::new(characters, repr.weights).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    functional: Option<Vec<RationalRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    combination: Option<Vec<String>>,
}

impl Serialize for PositivityCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            PositivityCertificate::Positive { functional } => CertificateRepr {
                verdict: Verdict::Positive,
                functional: Some(functional.iter().map(RationalRepr::from).collect()),
                combination: None,
            },
            PositivityCertificate::NotPositive { combination } => CertificateRepr {
                verdict: Verdict::NotPositive,
                functional: None,
                combination: Some(combination.iter().map(ToString::to_string).collect()),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PositivityCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = CertificateRepr::deserialize(d)?;
        match (repr.verdict, repr.functional, repr.combination) {
            (Verdict::Positive, Some(f), None) => Ok(PositivityCertificate::Positive {
                functional: f
                    .into_iter()
                    .map(Rational::try_from)
                    .collect::<Result<_, _>>()
                    .map_err(D::Error::custom)?,
            }),
            (Verdict::NotPositive, None, Some(c)) => Ok(PositivityCertificate::NotPositive {
                combination: c
                    .iter()
                    .map(|s| s.parse::<BigInt>())
                    .collect::<Result<_, _>>()
                    .map_err(D::Error::custom)?,
            }),
            _ => Err(D::Error::custom(
                "certificate must carry exactly the witness matching its verdict",
            )),
        }
    }
}
