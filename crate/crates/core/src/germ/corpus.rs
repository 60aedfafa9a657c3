use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{parse::default_variables, JetGerm};
use crate::exact::{rat, Monomial, MultiPoly};

/// `(x^a, y^b)` at a jet order past its determinacy.
pub fn xayb(a: u32, b: u32) -> JetGerm {
    JetGerm::monomial(2, &[Some(vec![a, 0]), Some(vec![0, b])], a + b)
        .expect("monomials have no constant term")
}

#[derive(Clone, Debug)]
pub struct CorpusGerm {
    pub germ: JetGerm,
    /// The weighting `(a_1, a_2; b_1..b_p)` the germ was built from.
    pub weighting: Vec<i64>,
}

const SOURCE_WEIGHTS: [[i64; 2]; 11] = [
    [1, 1],
    [1, 2],
    [2, 1],
    [1, 3],
    [2, 3],
    [3, 2],
    [1, 0],
    [0, 1],
    [1, -1],
    [2, -1],
    [-1, 2],
];

/// Random weighted homogeneous germs `(C^2, 0) -> (C^p, 0)`, `p <= 3`, as
/// `k`-jets with `k <= 6`, distinct and reproducible from `seed`.
///
/// Target weights are biased towards the source weights so that linear
/// terms, and components of a source weight without linear terms, both
/// occur often.
pub fn sigma2_corpus(seed: u64, count: usize) -> Vec<CorpusGerm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = default_variables(2);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = *SOURCE_WEIGHTS.choose(&mut rng).expect("nonempty");
        let p = rng.gen_range(1..=3);
        let k = rng.gen_range(3..=6u32);
        let monomials = Monomial::up_to_degree(2, 1, k);
        let mut achievable: Vec<i64> = monomials.iter().map(|m| m.weighted_degree(&a)).collect();
        achievable.sort();
        achievable.dedup();
        let mut weighting = a.to_vec();
        let mut components = Vec::with_capacity(p);
        for _ in 0..p {
            let b = if rng.gen_bool(0.3) {
                a[rng.gen_range(0..2)]
            } else {
                *achievable.choose(&mut rng).expect("nonempty")
            };
            let allow_linear = rng.gen_bool(0.5);
            let pool: Vec<&Monomial> = monomials
                .iter()
                .filter(|m| m.weighted_degree(&a) == b && (allow_linear || m.degree() > 1))
                .collect();
            if pool.is_empty() {
                continue;
            }
            let mut chosen: Vec<&Monomial> = pool.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            if chosen.is_empty() {
                chosen.push(pool.choose(&mut rng).expect("nonempty"));
            }
            let terms = chosen.into_iter().map(|m| {
                let mut c = rng.gen_range(-3..=3);
                if c == 0 {
                    c = 1;
                }
                (m.clone(), rat(c))
            });
            components.push(MultiPoly::from_terms(vars.clone(), terms));
            weighting.push(b);
        }
        if components.is_empty() {
            continue;
        }
        let germ = JetGerm::new(vars.clone(), components, k).expect("no constant terms");
        if seen.insert(germ.to_string()) {
            out.push(CorpusGerm { germ, weighting });
        }
    }
    out
}
