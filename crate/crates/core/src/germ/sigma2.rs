use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{
    character_names, germ_codim, infer_weights, parse_germ, sigma_index, GermError, JetGerm,
    QuasiHomWeights,
};
use crate::exact::{rat, EchelonSpan, Monomial, MultiPoly, RatMatrix, Rational, SparseVec};

fn tp_variables(p: usize) -> Vec<String> {
    let mut v = vec!["alpha1".to_string(), "alpha2".to_string()];
    v.extend((1..=p).map(|i| format!("beta{i}")));
    v
}

/// `[Σ²(2, p)] = ∏_i (β_i - α_1)(β_i - α_2)` in the Chern roots `α_1, α_2`
/// of the source and `β_1..β_p` of the target, expanded.
pub fn thom_porteous_sigma2(p: usize) -> MultiPoly {
    let vars = tp_variables(p);
    let mut acc = MultiPoly::one(vars.clone());
    for i in 0..p {
        let beta = MultiPoly::var(vars.clone(), &vars[2 + i]);
        for alpha in &vars[..2] {
            acc = acc.mul(&beta.sub(&MultiPoly::var(vars.clone(), alpha)));
        }
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MonomialCase {
    /// Already monomial; coefficients normalized to 1.
    Monomial,
    /// A source weight vanishes: strip the unit in the weight-zero variable.
    ZeroWeight,
    /// Source weights of opposite sign: each component is its lowest
    /// monomial times a unit.
    OppositeSigns,
    /// Positive source weights with a component `x_o^k` of the weight of the
    /// other variable: reduce the remaining components modulo it.
    PurePower,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialModel {
    pub germ: JetGerm,
    pub case: MonomialCase,
    /// The weighting `(a; b)` that selected the case.
    pub weighting: Vec<i64>,
}

/// A contact-equivalent monomial germ `(x^{u_i} y^{v_i})`, found by the case
/// analysis on the source weights and checked by comparing ideals at the jet
/// order of `f`.
pub fn monomial_model(f: &JetGerm) -> Result<MonomialModel, GermError> {
    if f.n() != 2 {
        return Err(GermError::BadSourceDim(f.n()));
    }
    let lattice = infer_weights(f);
    if lattice.rank() == 0 {
        return Err(GermError::NoSymmetry);
    }
    let candidates: Vec<CaseResult> = if f.is_monomial() {
        vec![(
            f.components()
                .iter()
                .map(|c| c.terms().keys().next().map(|m| m.0.clone()))
                .collect(),
            MonomialCase::Monomial,
            lattice.rows[0].clone(),
        )]
    } else {
        lattice
            .rows
            .iter()
            .filter_map(|row| case_for_row(f, row))
            .collect()
    };
    let Some((exponents, case, weighting)) = candidates.into_iter().next() else {
        return Err(GermError::CaseNotApplicable(format!(
            "weights {:?} fit none of the cases",
            lattice.rows
        )));
    };
    let germ = JetGerm::monomial(2, &exponents, f.k())?;
    let germ = JetGerm::new(f.variables().to_vec(), germ.components().to_vec(), f.k())?;
    if !ideal_equal_at_jet(f, &germ, f.k())? {
        return Err(GermError::ModelMismatch(f.k()));
    }
    Ok(MonomialModel {
        germ,
        case,
        weighting,
    })
}

type CaseResult = (Vec<Option<Vec<u32>>>, MonomialCase, Vec<i64>);

fn case_for_row(f: &JetGerm, row: &[i64]) -> Option<CaseResult> {
    let (a1, a2) = (row[0], row[1]);
    let comps = f.components();
    if a1 == 0 && a2 == 0 {
        return None;
    }
    if a1 == 0 || a2 == 0 {
        // all monomials of a component share the exponent of the weighted
        // variable; keep the lowest power of the weight-zero one
        let z = if a1 == 0 { 0 } else { 1 };
        let exps = comps
            .iter()
            .map(|c| {
                let lowest = c.terms().keys().min_by_key(|m| m.0[z])?;
                Some(lowest.0.clone())
            })
            .collect();
        return Some((exps, MonomialCase::ZeroWeight, row.to_vec()));
    }
    if (a1 > 0) != (a2 > 0) {
        let exps = comps
            .iter()
            .map(|c| {
                let keys: Vec<&Monomial> = c.terms().keys().collect();
                if keys.is_empty() {
                    return None;
                }
                Some((0..2).map(|v| keys.iter().map(|m| m.0[v]).min().unwrap()).collect())
            })
            .collect();
        return Some((exps, MonomialCase::OppositeSigns, row.to_vec()));
    }
    let row: Vec<i64> = if a1 < 0 { row.iter().map(|x| -x).collect() } else { row.to_vec() };
    let a = [row[0], row[1]];
    let b = &row[2..];
    for (i, c) in comps.iter().enumerate() {
        for m in 0..2 {
            let o = 1 - m;
            if b[i] != a[m] || c.terms().len() != 1 {
                continue;
            }
            let mono = c.terms().keys().next().unwrap();
            if mono.0[m] != 0 || a[m] % a[o] != 0 {
                continue;
            }
            let kk = (a[m] / a[o]) as u32;
            debug_assert_eq!(mono.0[o], kk);
            let exps = comps
                .iter()
                .enumerate()
                .map(|(j, cj)| {
                    if j == i {
                        let mut e = vec![0; 2];
                        e[o] = kk;
                        return Some(e);
                    }
                    if cj.is_zero() {
                        return None;
                    }
                    let scaled = (b[j] / a[o]) as u32;
                    let mut e = vec![0; 2];
                    e[m] = scaled / kk;
                    e[o] = scaled % kk;
                    let e_mono = Monomial(e.clone());
                    (!cj.coefficient(&e_mono).is_zero()).then_some(e)
                })
                .collect();
            return Some((exps, MonomialCase::PurePower, row.clone()));
        }
    }
    None
}

fn ideal_span(f: &JetGerm, k: u32) -> EchelonSpan {
    let n = f.n();
    let monomials = Monomial::up_to_degree(n, 0, k);
    let index: BTreeMap<Monomial, usize> = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let mut span = EchelonSpan::new(monomials.len());
    for beta in &monomials {
        for c in f.components() {
            let v: SparseVec = c
                .terms()
                .iter()
                .filter_map(|(m, coeff)| {
                    let prod = beta.mul(m);
                    index.get(&prod).map(|&col| (col, coeff.clone()))
                })
                .collect();
            if !v.is_empty() {
                span.insert(&v);
            }
        }
    }
    span
}

/// Whether `(f_1..f_p)` and `(g_1..g_q)` agree modulo terms of degree above
/// `k`.
pub fn ideal_equal_at_jet(f: &JetGerm, g: &JetGerm, k: u32) -> Result<bool, GermError> {
    if f.n() != g.n() {
        return Err(GermError::SourceDimMismatch(f.n(), g.n()));
    }
    Ok(ideal_span(f, k).same_span(&ideal_span(g, k)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sigma2Restriction {
    pub polynomial: MultiPoly,
    /// Symmetry lattice whose characters the polynomial is written in.
    pub lattice: QuasiHomWeights,
    /// Set when the symmetry of `f` was too small and the restriction was
    /// taken over the torus of a contact-equivalent monomial germ.
    pub monomial_model: Option<MonomialModel>,
    pub diagnostics: Vec<String>,
}

fn restrict_over(f: &JetGerm, lattice: &QuasiHomWeights) -> MultiPoly {
    let tp = thom_porteous_sigma2(f.p());
    let images: BTreeMap<String, Vec<Rational>> = tp
        .variables()
        .iter()
        .enumerate()
        .map(|(idx, name)| {
            let w = if idx < 2 { lattice.source(idx) } else { lattice.target(idx - 2) };
            (name.clone(), w.into_iter().map(rat).collect())
        })
        .collect();
    tp.substitute_linear(&lattice.characters(), &images)
        .expect("one image per Chern root")
}

/// `[Σ²]` restricted to the maximal torus of the stabilizer of `f`.
///
/// Over a rank-one lattice the result is `∏ (b_i - a_1)(b_i - a_2) g^{2p}`.
/// When that vanishes although `f` has no linear part, `f` is contact
/// equivalent to a monomial germ with a rank-two torus and the restriction is
/// recomputed there.
pub fn sigma2_restriction(f: &JetGerm) -> Result<Sigma2Restriction, GermError> {
    if f.n() != 2 {
        return Err(GermError::BadSourceDim(f.n()));
    }
    let lattice = infer_weights(f);
    if lattice.rank() == 0 {
        return Err(GermError::NoSymmetry);
    }
    let polynomial = restrict_over(f, &lattice);
    if !polynomial.is_zero() || sigma_index(f) < 2 {
        return Ok(Sigma2Restriction {
            polynomial,
            lattice,
            monomial_model: None,
            diagnostics: Vec::new(),
        });
    }
    match monomial_model(f) {
        Ok(model) => {
            let bigger = infer_weights(&model.germ);
            let diagnostics = vec![format!(
                "restriction over the weighting {:?} vanishes; f is contact equivalent to the monomial germ ({}) with a rank-{} torus",
                lattice.rows,
                model.germ,
                bigger.rank()
            )];
            Ok(Sigma2Restriction {
                polynomial: restrict_over(&model.germ, &bigger),
                lattice: bigger,
                monomial_model: Some(model),
                diagnostics,
            })
        }
        Err(e) => Ok(Sigma2Restriction {
            polynomial,
            lattice,
            monomial_model: None,
            diagnostics: vec![format!("no monomial model: {e}")],
        }),
    }
}

/// Restricts a polynomial in the characters of `lattice` to the
/// one-parameter subgroup with weighting `(a; b)`, which must lie in the
/// rational span of the lattice. The result is in the single character `g`.
pub fn restrict_to_subtorus(
    poly: &MultiPoly,
    lattice: &QuasiHomWeights,
    weighting: &[i64],
) -> Result<MultiPoly, GermError> {
    let r = lattice.rank();
    let len = lattice.n + lattice.p;
    if weighting.len() != len {
        return Err(GermError::PreconditionViolated(format!(
            "weighting has {} entries, expected {len}",
            weighting.len()
        )));
    }
    let augmented = RatMatrix::from_rows(
        (0..len)
            .map(|t| {
                let mut row: Vec<Rational> = lattice.rows.iter().map(|w| rat(w[t])).collect();
                row.push(rat(weighting[t]));
                row
            })
            .collect(),
    );
    let rref = augmented.rref();
    if rref.pivots.contains(&r) {
        return Err(GermError::PreconditionViolated(format!(
            "{weighting:?} is not a symmetry of the germ"
        )));
    }
    let mut coeffs = vec![Rational::zero(); r];
    for (row, &col) in rref.pivots.iter().enumerate() {
        coeffs[col] = rref.reduced[(row, r)].clone();
    }
    let g = character_names(1);
    let images: BTreeMap<String, Vec<Rational>> = lattice
        .characters()
        .into_iter()
        .zip(coeffs)
        .map(|(name, c)| (name, vec![c]))
        .collect();
    let aligned = poly.embed(&lattice.characters());
    aligned
        .substitute_linear(&g, &images)
        .map_err(|e| GermError::PreconditionViolated(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceI {
    #[serde(serialize_with = "crate::exact::serialize_rational")]
    pub coefficient: Rational,
    /// Degree of `g`: the codimension of the `I_{c,d}` orbit.
    pub exponent: usize,
    /// Terms dropped because a factorial had a negative argument.
    pub dropped_terms: usize,
}

fn factorial(n: i64) -> Option<BigInt> {
    (n >= 0).then(|| (1..=n).fold(BigInt::one(), |acc, k| acc * k))
}

/// `[I_{c,d}]|_{I_{a,b}} = (a-1)!(b-1)! (a^d b^c / ((a-c)!(b-d)!) + a^c b^d /
/// ((a-d)!(b-c)!)) / (δ_cd + 1) · g^D`, where a term with a negative
/// factorial argument is zero. `D` is the codimension of the orbit of
/// `(xy, x^c + y^d)`.
pub fn incidence_i(a: u32, b: u32, c: u32, d: u32) -> Result<IncidenceI, GermError> {
    let bad = |why: &str| Err(GermError::PreconditionViolated(why.to_string()));
    if !(2 <= a && a <= b) {
        return bad("need 2 <= a <= b");
    }
    if (a, b) == (2, 2) {
        return bad("(a, b) = (2, 2) has a rank-two symmetry");
    }
    if !(2 <= c && c <= d) {
        return bad("need 2 <= c <= d");
    }
    if c + d >= a + b {
        return bad("need c + d < a + b");
    }
    let (ai, bi, ci, di) = (a as i64, b as i64, c as i64, d as i64);
    let pow = |base: i64, e: u32| Rational::from_integer(BigInt::from(base).pow(e));
    let mut sum = Rational::zero();
    let mut dropped_terms = 0;
    for (num, f1, f2) in [
        (pow(ai, d) * pow(bi, c), ai - ci, bi - di),
        (pow(ai, c) * pow(bi, d), ai - di, bi - ci),
    ] {
        match (factorial(f1), factorial(f2)) {
            (Some(x), Some(y)) => sum += num / Rational::from_integer(x * y),
            _ => dropped_terms += 1,
        }
    }
    let front = Rational::from_integer(
        factorial(ai - 1).expect("a >= 2") * factorial(bi - 1).expect("b >= 2"),
    );
    let delta = if c == d { rat(2) } else { rat(1) };
    let coefficient = front * sum / delta;
    let representative = parse_germ(&format!("x*y, x^{c} + y^{d}"))?.with_jet(c + d + 1)?;
    Ok(IncidenceI {
        coefficient,
        exponent: germ_codim(&representative),
        dropped_terms,
    })
}
