use orbit_incidence::weights::{
    difference_positivity, infer_difference_presentation, positivity, restrict_weight_system,
    PositivityCertificate, WeightSystem,
};
use proptest::prelude::*;

fn system(max_rank: usize, max_len: usize) -> impl Strategy<Value = WeightSystem> {
    (1..=max_rank).prop_flat_map(move |rank| {
        prop::collection::vec(prop::collection::vec(-4i64..=4, rank), 0..=max_len)
            .prop_map(move |w| WeightSystem::with_rank(rank, w).unwrap())
    })
}

fn rank2(max_len: usize) -> impl Strategy<Value = Vec<[i64; 2]>> {
    prop::collection::vec((-5i64..=5, -5i64..=5).prop_map(|(a, b)| [a, b]), 0..=max_len)
}

/// Exhaustive search over integer directions in a box. A feasible open cone
/// is bounded by two rays `±w^⊥` with entries at most 5, so it contains their
/// sum or, when it is a half plane, a weight itself.
fn brute_force_rank2(weights: &[[i64; 2]]) -> bool {
    (-10..=10i64).any(|a| {
        (-10..=10i64).any(|b| weights.iter().all(|w| a * w[0] + b * w[1] > 0))
    })
}

fn ws2(weights: &[[i64; 2]]) -> WeightSystem {
    WeightSystem::with_rank(2, weights.iter().map(|w| w.to_vec()).collect()).unwrap()
}

fn difference_system() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..7).prop_flat_map(|n| {
        let arc = (0..n, 0..n - 1).prop_map(|(i, j)| (i, if j >= i { j + 1 } else { j }));
        (Just(n), prop::collection::vec(arc, 0..10))
    })
}

fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> WeightSystem {
    let weights = arcs
        .iter()
        .map(|&(i, j)| {
            let mut w = vec![0; n];
            w[i] = 1;
            w[j] = -1;
            w
        })
        .collect();
    WeightSystem::with_rank(n, weights).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn certificates_always_verify(ws in system(4, 12)) {
        let cert = positivity(&ws);
        prop_assert!(cert.verify(&ws));
        if ws.contains_zero_weight() {
            prop_assert!(!cert.is_positive());
        }
        if let PositivityCertificate::NotPositive { combination } = &cert {
            prop_assert_eq!(combination.len(), ws.len());
        }
    }

    #[test]
    fn rank2_matches_brute_force(weights in rank2(10)) {
        prop_assert_eq!(positivity(&ws2(&weights)).is_positive(), brute_force_rank2(&weights));
    }

    #[test]
    fn verdict_is_invariant(ws in system(3, 8), scale in 1i64..5, shift in 0usize..8) {
        let verdict = positivity(&ws).is_positive();
        let mut rotated = ws.weights().to_vec();
        if !rotated.is_empty() {
            let k = shift % rotated.len();
            rotated.rotate_left(k);
        }
        let permuted = WeightSystem::with_rank(ws.rank(), rotated).unwrap();
        prop_assert_eq!(positivity(&permuted).is_positive(), verdict);
        let scaled = WeightSystem::with_rank(
            ws.rank(),
            ws.weights().iter().map(|w| w.iter().map(|c| c * scale).collect()).collect(),
        )
        .unwrap();
        prop_assert_eq!(positivity(&scaled).is_positive(), verdict);
        // unimodular change of coordinates: e_1 -> e_1 + e_r
        let r = ws.rank();
        let mut basis: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
        if r > 1 {
            basis[r - 1][0] = 1;
        }
        let changed = restrict_weight_system(&ws, &basis, None).unwrap();
        prop_assert_eq!(positivity(&changed).is_positive(), verdict);
    }

    #[test]
    fn verdict_is_monotone(ws in system(3, 8), extra in prop::collection::vec(-4i64..=4, 3)) {
        let verdict = positivity(&ws).is_positive();
        let mut bigger = ws.clone();
        bigger.push(extra[..ws.rank()].to_vec()).unwrap();
        let bigger_verdict = positivity(&bigger).is_positive();
        // adding a weight can only destroy positivity
        prop_assert!(!bigger_verdict || verdict);
        if !ws.is_empty() {
            let smaller = WeightSystem::with_rank(ws.rank(), ws.weights()[1..].to_vec()).unwrap();
            prop_assert!(!verdict || positivity(&smaller).is_positive());
        }
    }

    #[test]
    fn difference_systems_agree((n, arcs) in difference_system()) {
        let ws = from_arcs(n, &arcs);
        let presentation = infer_difference_presentation(&ws).expect("pure differences");
        let lp = positivity(&ws);
        let graph = difference_positivity(&ws, &presentation).unwrap();
        prop_assert!(graph.verify(&ws));
        prop_assert_eq!(lp.is_positive(), graph.is_positive());
        let direct = difference_positivity(&ws, &arcs).unwrap();
        prop_assert_eq!(direct.is_positive(), lp.is_positive());
    }

    #[test]
    fn json_round_trip(ws in system(3, 8)) {
        let cert = positivity(&ws);
        let ws_back: WeightSystem = serde_json::from_str(&serde_json::to_string(&ws).unwrap()).unwrap();
        let cert_back: PositivityCertificate =
            serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
        prop_assert_eq!(&ws_back, &ws);
        prop_assert_eq!(&cert_back, &cert);
        prop_assert_eq!(positivity(&ws_back).is_positive(), cert.is_positive());
    }
}
