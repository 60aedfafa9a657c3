use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::{infer_weights, sigma_index, GermError, JetGerm, QuasiHomWeights};
use crate::exact::{rat, EchelonSpan, Monomial, MultiPoly, RatMatrix, Rational, SparseVec};
use crate::weights::{positivity, PositivityCertificate, WeightSystem};

/// Coordinates on jets of degree `0..=k`: column `m * p + j` is `x^{α_m} e_j`
/// with monomials in ascending graded-lex order, so constants come first.
#[derive(Clone, Debug)]
struct JetSpace {
    p: usize,
    k: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl JetSpace {
    fn new(n: usize, p: usize, k: u32) -> Self {
        let monomials = Monomial::up_to_degree(n, 0, k);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        JetSpace {
            p,
            k,
            monomials,
            index,
        }
    }

    fn dim(&self) -> usize {
        self.monomials.len() * self.p
    }

    fn column(&self, m: &Monomial, j: usize) -> Option<usize> {
        self.index.get(m).map(|i| i * self.p + j)
    }

    fn element(&self, col: usize) -> JetVector {
        JetVector {
            monomial: self.monomials[col / self.p].0.clone(),
            component: col % self.p,
        }
    }

    /// `x^β · v` truncated to degree `k`.
    fn shifted(&self, beta: &Monomial, v: &[MultiPoly]) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v.iter().enumerate() {
            for (m, coeff) in c.terms() {
                let prod = beta.mul(m);
                if prod.degree() <= self.k {
                    let col = self.column(&prod, j).expect("degree within jet space");
                    out.insert(col, coeff.clone());
                }
            }
        }
        out
    }

    fn vector_of(&self, v: &[MultiPoly]) -> SparseVec {
        self.shifted(&Monomial::one(self.monomials[0].len()), v)
    }
}

/// The monomial jet vector `x^α e_j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct JetVector {
    pub monomial: Vec<u32>,
    pub component: usize,
}

impl JetVector {
    pub fn degree(&self) -> u32 {
        self.monomial.iter().sum()
    }

    pub fn display(&self, variables: &[String], p: usize) -> String {
        let mono = MultiPoly::from_terms(
            variables.to_vec(),
            [(Monomial(self.monomial.clone()), rat(1))],
        )
        .to_string();
        let parts: Vec<String> = (0..p)
            .map(|j| if j == self.component { mono.clone() } else { "0".into() })
            .collect();
        format!("({})", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Generators {
    /// `f_i e_j` and `∂f/∂x_l` with all monomial multipliers: the span whose
    /// complement in the positive-degree jets is the unfolding space.
    Extended,
    /// `f_i e_j` with all multipliers and `∂f/∂x_l` with multipliers of
    /// positive degree: the tangent space of the orbit itself.
    Orbit,
}

fn tangent_span(f: &JetGerm, space: &JetSpace, mode: Generators) -> EchelonSpan {
    let (n, p) = (f.n(), f.p());
    let mut span = EchelonSpan::new(space.dim());
    let partials: Vec<Vec<MultiPoly>> = (0..n).map(|l| f.partial(l)).collect();
    let unit_vectors: Vec<Vec<MultiPoly>> = (0..p)
        .flat_map(|i| {
            (0..p).map(move |j| {
                (0..p)
                    .map(|c| {
                        if c == j {
                            f.components()[i].clone()
                        } else {
                            MultiPoly::zero(f.variables().to_vec())
                        }
                    })
                    .collect()
            })
        })
        .collect();
    for beta in &space.monomials {
        for v in &unit_vectors {
            let s = space.shifted(beta, v);
            if !s.is_empty() {
                span.insert(&s);
            }
        }
        if mode == Generators::Orbit && beta.degree() == 0 {
            continue;
        }
        for d in &partials {
            let s = space.shifted(beta, d);
            if !s.is_empty() {
                span.insert(&s);
            }
        }
    }
    span
}

/// Monomial complement of the extended tangent span in the jets of degree
/// `1..=k`.
#[derive(Clone, Debug)]
pub struct UnfoldingBasis {
    pub elements: Vec<JetVector>,
    /// Weight `b_j - α·a` of each element, present when `f` has symmetries.
    pub weights: Option<Vec<Vec<i64>>>,
    space: JetSpace,
    span: EchelonSpan,
    variables: Vec<String>,
}

impl UnfoldingBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Normal form of a jet vector modulo the extended tangent space,
    /// expressed over the basis elements (zero coefficients omitted).
    pub fn reduce(&self, v: &[MultiPoly]) -> Vec<(JetVector, Rational)> {
        let aligned: Vec<MultiPoly> = v.iter().map(|c| c.embed(&self.variables)).collect();
        self.span
            .reduce(&self.space.vector_of(&aligned))
            .into_iter()
            .filter(|(col, _)| *col >= self.space.p)
            .map(|(col, c)| (self.space.element(col), c))
            .collect()
    }

    pub fn element_strings(&self) -> Vec<String> {
        self.elements
            .iter()
            .map(|e| e.display(&self.variables, self.space.p))
            .collect()
    }
}

impl fmt::Display for UnfoldingBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.element_strings().join(", "))
    }
}

fn weights_for(lattice: &QuasiHomWeights, elements: &[JetVector]) -> Option<Vec<Vec<i64>>> {
    (lattice.rank() > 0).then(|| {
        elements
            .iter()
            .map(|e| lattice.weight_of(&Monomial(e.monomial.clone()), e.component))
            .collect()
    })
}

pub fn unfolding_basis(f: &JetGerm) -> UnfoldingBasis {
    let space = JetSpace::new(f.n(), f.p(), f.k());
    let span = tangent_span(f, &space, Generators::Extended);
    let elements: Vec<JetVector> = span
        .non_pivots()
        .into_iter()
        .filter(|&c| c >= f.p())
        .map(|c| space.element(c))
        .collect();
    let weights = weights_for(&infer_weights(f), &elements);
    UnfoldingBasis {
        elements,
        weights,
        space,
        span,
        variables: f.variables().to_vec(),
    }
}

/// Weights of the normal space computed directly as the monomial complement
/// of the orbit tangent space, together with its dimension.
pub fn normal_space_weights(f: &JetGerm) -> Result<(Vec<Vec<i64>>, usize), GermError> {
    let lattice = infer_weights(f);
    if lattice.rank() == 0 {
        return Err(GermError::NoSymmetry);
    }
    let space = JetSpace::new(f.n(), f.p(), f.k());
    let span = tangent_span(f, &space, Generators::Orbit);
    let elements: Vec<JetVector> = span
        .non_pivots()
        .into_iter()
        .filter(|&c| c >= f.p())
        .map(|c| space.element(c))
        .collect();
    let weights = weights_for(&lattice, &elements).expect("rank checked");
    Ok((weights, elements.len()))
}

/// Whether the source summand `C^n` enters the normal weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SourceWeights {
    #[default]
    Include,
    Exclude,
}

#[derive(Clone, Debug)]
pub struct GermNormalData {
    pub lattice: QuasiHomWeights,
    pub unfolding: UnfoldingBasis,
    /// Weights of `ker d_0 f ⊂ C^n`; all `n` source weights when `f` has no
    /// linear part.
    pub source_weights: Vec<Vec<i64>>,
    pub weights: WeightSystem,
    pub codim: usize,
    pub diagnostics: Vec<String>,
}

/// Weights of `ker d_0 f`. The linear part only couples `x_l` to `f_j` when
/// they carry the same weight, so the kernel splits over weight classes.
fn kernel_source_weights(f: &JetGerm, lattice: &QuasiHomWeights) -> Vec<Vec<i64>> {
    let linear = f.linear_part();
    let mut classes: Vec<Vec<i64>> = Vec::new();
    for l in 0..f.n() {
        let w = lattice.source(l);
        if !classes.contains(&w) {
            classes.push(w);
        }
    }
    let mut out = Vec::new();
    for w in classes {
        let cols: Vec<usize> = (0..f.n()).filter(|&l| lattice.source(l) == w).collect();
        let rows: Vec<usize> = (0..f.p()).filter(|&j| lattice.target(j) == w).collect();
        let block = RatMatrix::with_cols(
            rows.iter()
                .map(|&j| cols.iter().map(|&l| linear[(j, l)].clone()).collect())
                .collect(),
            cols.len(),
        );
        for _ in 0..cols.len() - block.rank() {
            out.push(w.clone());
        }
    }
    out
}

fn stabilization_note(f: &JetGerm, dim: usize) -> Option<String> {
    if f.k() < 2 {
        return None;
    }
    let lower = f.with_jet(f.k() - 1).ok()?;
    let d = unfolding_basis(&lower).dim();
    (d != dim).then(|| {
        format!(
            "unfolding dimension {dim} at jet order {} differs from {d} at order {}; the jet order may be too low",
            f.k(),
            f.k() - 1
        )
    })
}

/// Codimension of the orbit: `dim ker d_0 f + dim U`. Needs no weights.
pub fn germ_codim(f: &JetGerm) -> usize {
    sigma_index(f) + unfolding_basis(f).dim()
}

pub fn germ_normal_data(f: &JetGerm, sources: SourceWeights) -> Result<GermNormalData, GermError> {
    let lattice = infer_weights(f);
    if lattice.rank() == 0 {
        return Err(GermError::NoSymmetry);
    }
    let unfolding = unfolding_basis(f);
    let source_weights = kernel_source_weights(f, &lattice);
    let mut weights = unfolding.weights.clone().expect("rank checked");
    if sources == SourceWeights::Include {
        weights.extend(source_weights.iter().cloned());
    }
    let codim = unfolding.dim() + source_weights.len();
    let mut diagnostics: Vec<String> = stabilization_note(f, unfolding.dim()).into_iter().collect();
    if source_weights.len() < f.n() {
        diagnostics.push(format!(
            "d_0 f has rank {}; only its kernel contributes source weights",
            f.n() - source_weights.len()
        ));
    }
    let weights =
        WeightSystem::new(lattice.characters(), weights).expect("weights sized to the lattice");
    Ok(GermNormalData {
        lattice,
        unfolding,
        source_weights,
        weights,
        codim,
        diagnostics,
    })
}

/// Product of the normal weights as linear forms in the torus characters.
pub fn euler_class(f: &JetGerm, sources: SourceWeights) -> Result<MultiPoly, GermError> {
    let data = germ_normal_data(f, sources)?;
    Ok(product_of_weights(&data.weights))
}

pub(super) fn product_of_weights(ws: &WeightSystem) -> MultiPoly {
    let vars = ws.characters().to_vec();
    ws.weights().iter().fold(MultiPoly::one(vars.clone()), |acc, w| {
        let coeffs: Vec<Rational> = w.iter().map(|&x| rat(x)).collect();
        acc.mul(&MultiPoly::linear(vars.clone(), &coeffs))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GermReport {
    pub germ: String,
    pub jet: u32,
    pub characters: Vec<String>,
    pub weights: Vec<Vec<i64>>,
    pub certificate: PositivityCertificate,
    pub incidence: bool,
    pub codim: usize,
    pub diagnostics: Vec<String>,
}

impl GermReport {
    pub fn weight_system(&self) -> WeightSystem {
        WeightSystem::new(self.characters.clone(), self.weights.clone()).expect("consistent report")
    }
}

/// Positivity of the stabilizer torus on the normal space; a positive
/// certificate implies the Incidence Property.
pub fn germ_incidence_verdict(f: &JetGerm, sources: SourceWeights) -> Result<GermReport, GermError> {
    let data = germ_normal_data(f, sources)?;
    let ws = data.weights.sorted();
    let certificate = positivity(&ws);
    let mut diagnostics = data.diagnostics;
    if ws.contains_zero_weight() {
        diagnostics.push("a normal weight is zero, so the Euler class vanishes".into());
    }
    Ok(GermReport {
        germ: f.to_string(),
        jet: f.k(),
        characters: ws.characters().to_vec(),
        weights: ws.weights().to_vec(),
        incidence: certificate.is_positive(),
        certificate,
        codim: data.codim,
        diagnostics,
    })
}
