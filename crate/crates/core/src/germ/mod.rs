//! Weighted homogeneous map germs `(C^n, 0) -> (C^p, 0)` as `k`-jets.
//!
//! Covers the quasi-homogeneous weight lattice, the unfolding space and the
//! normal space of the contact orbit, Euler classes, the restriction of the
//! `Σ²` class, monomial models, and the `I_{c,d}` incidence formula.

mod corpus;
mod parse;
mod sigma2;
mod unfolding;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{integer_kernel, Monomial, MultiPoly, RatMatrix, Rational};

pub use corpus::{sigma2_corpus, xayb, CorpusGerm};
pub use sigma2::{
    ideal_equal_at_jet, incidence_i, monomial_model, restrict_to_subtorus, sigma2_restriction,
    thom_porteous_sigma2, IncidenceI, MonomialCase, MonomialModel, Sigma2Restriction,
};
pub use unfolding::{
    euler_class, germ_codim, germ_incidence_verdict, germ_normal_data, normal_space_weights,
    unfolding_basis, GermNormalData, GermReport, JetVector, SourceWeights, UnfoldingBasis,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GermError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("component {component} has a constant term; jets start in degree 1")]
    ConstantTerm { component: usize },
    #[error("the germ has no one-parameter symmetry")]
    NoSymmetry,
    #[error("expected 2 source variables, found {0}")]
    BadSourceDim(usize),
    #[error("source dimensions differ: {0} vs {1}")]
    SourceDimMismatch(usize, usize),
    #[error("no monomialization case applies: {0}")]
    CaseNotApplicable(String),
    #[error("monomial model does not generate the same ideal at jet order {0}")]
    ModelMismatch(u32),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("jet order must be at least 1")]
    BadJetOrder,
}

/// A `k`-jet of a map germ: `p` polynomial components in `n` variables with
/// no constant terms and no terms above degree `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetGerm {
    variables: Vec<String>,
    components: Vec<MultiPoly>,
    k: u32,
}

impl JetGerm {
    /// Builds a jet, dropping terms above degree `k`.
    pub fn new(variables: Vec<String>, components: Vec<MultiPoly>, k: u32) -> Result<Self, GermError> {
        if k == 0 {
            return Err(GermError::BadJetOrder);
        }
        let zero = Monomial::one(variables.len());
        let mut aligned = Vec::with_capacity(components.len());
        for (component, c) in components.iter().enumerate() {
            let c = c.embed(&variables);
            if !c.coefficient(&zero).is_zero() {
                return Err(GermError::ConstantTerm { component });
            }
            aligned.push(MultiPoly::from_terms(
                variables.clone(),
                c.terms()
                    .iter()
                    .filter(|(m, _)| m.degree() <= k)
                    .map(|(m, c)| (m.clone(), c.clone())),
            ));
        }
        Ok(JetGerm {
            variables,
            components: aligned,
            k,
        })
    }

    /// Monomial germ with unit coefficients; `None` entries are zero
    /// components.
    pub fn monomial(n: usize, exponents: &[Option<Vec<u32>>], k: u32) -> Result<Self, GermError> {
        let variables = parse::default_variables(n);
        let components = exponents
            .iter()
            .map(|e| match e {
                Some(e) => MultiPoly::from_terms(
                    variables.clone(),
                    [(Monomial(e.clone()), Rational::from_integer(1.into()))],
                ),
                None => MultiPoly::zero(variables.clone()),
            })
            .collect();
        JetGerm::new(variables, components, k)
    }

    pub fn n(&self) -> usize {
        self.variables.len()
    }

    pub fn p(&self) -> usize {
        self.components.len()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    /// The same germ viewed at another jet order (terms above `k` dropped).
    pub fn with_jet(&self, k: u32) -> Result<JetGerm, GermError> {
        JetGerm::new(self.variables.clone(), self.components.clone(), k)
    }

    /// Largest total degree occurring in any component.
    pub fn max_degree(&self) -> u32 {
        self.components
            .iter()
            .filter_map(MultiPoly::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// The `p x n` matrix of `d_0 f`.
    pub fn linear_part(&self) -> RatMatrix {
        let n = self.n();
        RatMatrix::from_rows(
            self.components
                .iter()
                .map(|c| (0..n).map(|l| c.coefficient(&Monomial::var(n, l))).collect())
                .collect(),
        )
    }

    /// `∂f/∂x_l` as a list of component polynomials.
    pub fn partial(&self, l: usize) -> Vec<MultiPoly> {
        self.components
            .iter()
            .map(|c| {
                MultiPoly::from_terms(
                    self.variables.clone(),
                    c.terms().iter().filter(|(m, _)| m.0[l] > 0).map(|(m, c)| {
                        let mut e = m.0.clone();
                        e[l] -= 1;
                        (Monomial(e), c * Rational::from_integer(m.0[l].into()))
                    }),
                )
            })
            .collect()
    }

    pub fn is_monomial(&self) -> bool {
        self.components.iter().all(|c| c.terms().len() <= 1)
    }
}

impl fmt::Display for JetGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Parses `"x^2+3*y*z, y^2+3*x*z, z^2+3*x*y"`: components separated by
/// commas, variables `x, y, z` or `x1..xn`, rational coefficients. The jet
/// order is the largest degree present.
pub fn parse_germ(text: &str) -> Result<JetGerm, GermError> {
    let (variables, components) = parse::parse_components(text)?;
    let k = components
        .iter()
        .filter_map(MultiPoly::total_degree)
        .max()
        .unwrap_or(1)
        .max(1);
    JetGerm::new(variables, components, k)
}

/// `i` with `f ∈ Σ^i`: the dimension of the kernel of `d_0 f`.
pub fn sigma_index(f: &JetGerm) -> usize {
    f.n() - f.linear_part().rank()
}

/// Integer lattice of weightings `(a_1..a_n; b_1..b_p)` with
/// `f_j(t^a x) = t^{b_j} f_j(x)`, one row per independent symmetry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiHomWeights {
    pub n: usize,
    pub p: usize,
    pub rows: Vec<Vec<i64>>,
}

impl QuasiHomWeights {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Source weights of variable `l`, one entry per row.
    pub fn source(&self, l: usize) -> Vec<i64> {
        self.rows.iter().map(|r| r[l]).collect()
    }

    /// Target weights of component `j`, one entry per row.
    pub fn target(&self, j: usize) -> Vec<i64> {
        self.rows.iter().map(|r| r[self.n + j]).collect()
    }

    /// Weight `b_j - α·a` of the jet vector `x^α e_j`, one entry per row.
    pub fn weight_of(&self, alpha: &Monomial, j: usize) -> Vec<i64> {
        self.rows
            .iter()
            .map(|r| r[self.n + j] - alpha.weighted_degree(&r[..self.n]))
            .collect()
    }

    /// Names of the characters of the symmetry torus: `g` in rank one,
    /// `g1, g2, ...` otherwise.
    pub fn characters(&self) -> Vec<String> {
        character_names(self.rank())
    }
}

pub fn character_names(rank: usize) -> Vec<String> {
    if rank == 1 {
        vec!["g".to_string()]
    } else {
        (1..=rank).map(|i| format!("g{i}")).collect()
    }
}

/// Saturated lattice of all integer weightings under which `f` is weighted
/// homogeneous, in Hermite normal form.
pub fn infer_weights(f: &JetGerm) -> QuasiHomWeights {
    let (n, p) = (f.n(), f.p());
    let mut equations = Vec::new();
    for (j, c) in f.components.iter().enumerate() {
        for m in c.terms().keys() {
            let mut row: Vec<BigInt> = m.0.iter().map(|&e| BigInt::from(e)).collect();
            row.resize(n + p, BigInt::zero());
            row[n + j] = BigInt::from(-1);
            equations.push(row);
        }
    }
    let rows = integer_kernel(&equations, n + p)
        .into_iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().expect("weights fit in i64"))
                .collect()
        })
        .collect();
    QuasiHomWeights { n, p, rows }
}

/// Polynomial as `{monomial string: coefficient}` for compact reports.
pub fn poly_terms(p: &MultiPoly) -> BTreeMap<String, String> {
    p.terms()
        .iter()
        .map(|(m, c)| {
            let name = MultiPoly::from_terms(p.variables().to_vec(), [(m.clone(), Rational::from_integer(1.into()))]);
            (name.to_string(), c.to_string())
        })
        .collect()
}
