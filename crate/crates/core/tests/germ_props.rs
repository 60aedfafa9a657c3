use std::collections::BTreeSet;

use orbit_incidence::exact::{rat, Monomial, MultiPoly};
use orbit_incidence::germ::{
    euler_class, germ_normal_data, ideal_equal_at_jet, incidence_i, infer_weights, monomial_model,
    parse_germ, sigma2_corpus, sigma2_restriction, sigma_index, unfolding_basis, xayb, JetGerm,
    SourceWeights,
};
use proptest::prelude::*;

/// `(x^i y^j, 0)` with `i < a-1, j < b` and `(0, x^i y^j)` with `i < a,
/// j < b-1`, constants excluded.
fn xayb_description(a: u32, b: u32) -> BTreeSet<(Vec<u32>, usize)> {
    let mut out = BTreeSet::new();
    for i in 0..a - 1 {
        for j in 0..b {
            out.insert((vec![i, j], 0));
        }
    }
    for i in 0..a {
        for j in 0..b - 1 {
            out.insert((vec![i, j], 1));
        }
    }
    out.remove(&(vec![0, 0], 0));
    out.remove(&(vec![0, 0], 1));
    out
}

#[test]
fn xayb_unfolding_matches_monomial_description() {
    for a in 2..=5 {
        for b in 2..=5 {
            let u = unfolding_basis(&xayb(a, b));
            let got: BTreeSet<(Vec<u32>, usize)> =
                u.elements.iter().map(|e| (e.monomial.clone(), e.component)).collect();
            assert_eq!(got.len(), u.dim());
            assert_eq!(got, xayb_description(a, b), "(x^{a}, y^{b})");
        }
    }
}

#[test]
fn euler_class_vanishes_iff_zero_weight() {
    let mut germs: Vec<JetGerm> = sigma2_corpus(11, 80).into_iter().map(|g| g.germ).collect();
    germs.extend((2..=5).flat_map(|a| (a..=6).map(move |b| xayb(a, b))));
    germs.push(parse_germ("x^2+3*y*z, y^2+3*x*z, z^2+3*x*y").unwrap());
    for f in &germs {
        for sources in [SourceWeights::Include, SourceWeights::Exclude] {
            let data = germ_normal_data(f, sources).unwrap();
            let e = euler_class(f, sources).unwrap();
            assert_eq!(e.is_zero(), data.weights.contains_zero_weight(), "({f})");
            if !e.is_zero() {
                assert!(e.is_homogeneous());
                assert_eq!(e.total_degree(), Some(data.weights.len() as u32), "({f})");
            }
        }
    }
}

#[test]
fn sigma2_restriction_shape() {
    for g in sigma2_corpus(12, 120) {
        let f = &g.germ;
        let r = sigma2_restriction(f).unwrap();
        if r.polynomial.is_zero() {
            assert!(sigma_index(f) < 2, "({f})");
            continue;
        }
        assert!(r.polynomial.is_homogeneous());
        assert_eq!(r.polynomial.total_degree(), Some(2 * f.p() as u32), "({f})");
        if r.monomial_model.is_none() {
            // vanishing iff some target character equals a source character
            let lattice = infer_weights(f);
            let coincide = (0..f.p()).any(|j| (0..2).any(|l| lattice.target(j) == lattice.source(l)));
            assert!(!coincide, "({f}) nonzero although characters coincide");
        }
    }
    for g in sigma2_corpus(13, 120) {
        let f = &g.germ;
        let r = sigma2_restriction(f).unwrap();
        if r.monomial_model.is_none() {
            let lattice = &r.lattice;
            let coincide = (0..f.p()).any(|j| (0..2).any(|l| lattice.target(j) == lattice.source(l)));
            assert_eq!(r.polynomial.is_zero(), coincide, "({f})");
        }
    }
}

#[test]
fn monomial_models_generate_the_same_ideal() {
    let mut found = 0;
    for g in sigma2_corpus(14, 150) {
        let f = &g.germ;
        if sigma_index(f) < 2 {
            continue;
        }
        if let Ok(m) = monomial_model(f) {
            assert!(m.germ.is_monomial(), "({f}) -> ({})", m.germ);
            assert!(ideal_equal_at_jet(f, &m.germ, f.k()).unwrap(), "({f}) -> ({})", m.germ);
            found += 1;
        }
    }
    assert!(found > 20, "only {found} monomial models");
}

#[test]
fn incidence_exponent_increases_with_c_plus_d() {
    let (a, b) = (4, 7);
    let mut points = Vec::new();
    for c in 2..a + b {
        for d in c..a + b {
            if c + d < a + b {
                points.push((c + d, incidence_i(a, b, c, d).unwrap().exponent));
            }
        }
    }
    for &(s, e) in &points {
        for &(t, f) in &points {
            if s < t {
                assert!(e < f, "exponent {e} at c+d={s}, {f} at c+d={t}");
            }
        }
    }
}

fn corpus_germ() -> impl Strategy<Value = JetGerm> {
    (0u64..5, 0usize..40).prop_map(|(seed, i)| sigma2_corpus(seed, 40)[i].germ.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unfolding_quotient_is_graded(f in corpus_germ(), pick in any::<prop::sample::Index>(), j in 0usize..3) {
        let lattice = infer_weights(&f);
        prop_assume!(lattice.rank() > 0);
        let u = unfolding_basis(&f);
        let weights = u.weights.clone().unwrap();
        for (e, w) in u.elements.iter().zip(&weights) {
            prop_assert_eq!(w, &lattice.weight_of(&Monomial(e.monomial.clone()), e.component));
        }
        // a weight vector reduces to basis elements of the same weight
        let j = j % f.p();
        let monomials = Monomial::up_to_degree(f.n(), 1, f.k());
        let m = pick.get(&monomials).clone();
        let target = lattice.weight_of(&m, j);
        let vars = f.variables().to_vec();
        let vector: Vec<MultiPoly> = (0..f.p())
            .map(|c| {
                if c == j {
                    MultiPoly::from_terms(vars.clone(), [(m.clone(), rat(1))])
                } else {
                    MultiPoly::zero(vars.clone())
                }
            })
            .collect();
        for (e, _) in u.reduce(&vector) {
            let w = lattice.weight_of(&Monomial(e.monomial.clone()), e.component);
            prop_assert_eq!(&w, &target);
        }
        // the tangent generators themselves reduce to zero
        for l in 0..f.n() {
            prop_assert!(u.reduce(&f.partial(l)).is_empty());
        }
    }

    #[test]
    fn source_weight_flag_only_adds_kernel_weights(f in corpus_germ()) {
        let with = germ_normal_data(&f, SourceWeights::Include).unwrap();
        let without = germ_normal_data(&f, SourceWeights::Exclude).unwrap();
        prop_assert_eq!(with.weights.len(), without.weights.len() + with.source_weights.len());
        prop_assert_eq!(with.source_weights.len(), sigma_index(&f));
        prop_assert_eq!(with.codim, sigma_index(&f) + with.unfolding.dim());
    }
}
