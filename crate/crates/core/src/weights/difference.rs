use num_bigint::BigInt;

use super::{PositivityCertificate, WeightSystem, WeightsError};
use crate::exact::rat;

/// Each weight written as `e_plus - e_minus` over character indices.
pub type DifferencePresentation = Vec<(usize, usize)>;

/// Reads off `(i, j)` with `w = e_i - e_j` for each weight, if every weight has
/// that shape.
pub fn infer_difference_presentation(ws: &WeightSystem) -> Option<DifferencePresentation> {
    ws.weights()
        .iter()
        .map(|w| {
            let plus: Vec<usize> = (0..w.len()).filter(|&k| w[k] == 1).collect();
            let minus: Vec<usize> = (0..w.len()).filter(|&k| w[k] == -1).collect();
            let others = w.iter().filter(|&&x| x != 0 && x != 1 && x != -1).count();
            (plus.len() == 1 && minus.len() == 1 && others == 0).then(|| (plus[0], minus[0]))
        })
        .collect()
}

/// Positivity for systems of differences of basis characters.
///
/// Each weight `e_i - e_j` is an arc `j -> i`. An acyclic digraph is positive
/// with `λ_v` the longest-path depth of `v`; a directed cycle sums to zero and
/// gives the `NotPositive` combination.
pub fn difference_positivity(
    ws: &WeightSystem,
    presentation: &[(usize, usize)],
) -> Result<PositivityCertificate, WeightsError> {
    if presentation.len() != ws.len() {
        return Err(WeightsError::PresentationLength {
            found: presentation.len(),
            expected: ws.len(),
        });
    }
    let r = ws.rank();
    for (index, (&(i, j), w)) in presentation.iter().zip(ws.weights()).enumerate() {
        let well_formed = i != j
            && i < r
            && j < r
            && w.iter().enumerate().all(|(k, &x)| {
                x == if k == i {
                    1
                } else if k == j {
                    -1
                } else {
                    0
                }
            });
        if !well_formed {
            return Err(WeightsError::MalformedPresentation { index });
        }
    }

    // out[v] = (target, weight index)
    let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); r];
    for (idx, &(i, j)) in presentation.iter().enumerate() {
        out[j].push((i, idx));
    }

    // Iterative DFS: 0 = unvisited, 1 = on stack, 2 = done.
    let mut state = vec![0u8; r];
    let mut order = Vec::with_capacity(r);
    let mut parent_arc: Vec<Option<(usize, usize)>> = vec![None; r];
    for start in 0..r {
        if state[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        state[start] = 1;
        while let Some(top) = stack.last_mut() {
            let v = top.0;
            if top.1 < out[v].len() {
                let (u, idx) = out[v][top.1];
                top.1 += 1;
                match state[u] {
                    0 => {
                        state[u] = 1;
                        parent_arc[u] = Some((v, idx));
                        stack.push((u, 0));
                    }
                    1 => {
                        // cycle u -> ... -> v -> u
                        let mut combination = vec![BigInt::from(0); ws.len()];
                        combination[idx] = BigInt::from(1);
                        let mut w = v;
                        while w != u {
                            let (p, pidx) = parent_arc[w].expect("stack vertex has a parent");
                            combination[pidx] = BigInt::from(1);
                            w = p;
                        }
                        return Ok(PositivityCertificate::NotPositive { combination });
                    }
                    _ => {}
                }
            } else {
                state[v] = 2;
                order.push(v);
                stack.pop();
            }
        }
    }

    order.reverse();
    let mut depth = vec![0i64; r];
    for &v in &order {
        for &(u, _) in &out[v] {
            depth[u] = depth[u].max(depth[v] + 1);
        }
    }
    Ok(PositivityCertificate::Positive {
        functional: depth.into_iter().map(rat).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(rank: usize, w: &[&[i64]]) -> WeightSystem {
        WeightSystem::with_rank(rank, w.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    #[test]
    fn single_arc() {
        let s = ws(2, &[&[-1, 1]]);
        let p = infer_difference_presentation(&s).unwrap();
        assert_eq!(p, vec![(1, 0)]);
        let c = difference_positivity(&s, &p).unwrap();
        assert!(c.is_positive());
        assert!(c.verify(&s));
    }

    #[test]
    fn two_cycle() {
        let s = ws(2, &[&[1, -1], &[-1, 1]]);
        let p = infer_difference_presentation(&s).unwrap();
        let c = difference_positivity(&s, &p).unwrap();
        assert_eq!(
            c,
            PositivityCertificate::NotPositive {
                combination: vec![BigInt::from(1), BigInt::from(1)]
            }
        );
        assert!(c.verify(&s));
    }

    #[test]
    fn longer_cycle_with_tail() {
        let s = ws(4, &[&[-1, 1, 0, 0], &[0, -1, 1, 0], &[0, 0, -1, 1], &[0, 1, 0, -1]]);
        let p = infer_difference_presentation(&s).unwrap();
        let c = difference_positivity(&s, &p).unwrap();
        assert!(!c.is_positive());
        assert!(c.verify(&s));
    }

    #[test]
    fn malformed_presentation() {
        let s = ws(2, &[&[2, -1]]);
        assert!(infer_difference_presentation(&s).is_none());
        assert_eq!(
            difference_positivity(&s, &[(0, 1)]),
            Err(WeightsError::MalformedPresentation { index: 0 })
        );
        let s = ws(2, &[&[1, -1]]);
        assert_eq!(
            difference_positivity(&s, &[(1, 0)]),
            Err(WeightsError::MalformedPresentation { index: 0 })
        );
        assert!(matches!(
            difference_positivity(&s, &[]),
            Err(WeightsError::PresentationLength { .. })
        ));
    }

    #[test]
    fn chain_depths() {
        let s = ws(3, &[&[-1, 1, 0], &[0, -1, 1], &[-1, 0, 1]]);
        let p = infer_difference_presentation(&s).unwrap();
        assert_eq!(
            difference_positivity(&s, &p).unwrap(),
            PositivityCertificate::Positive {
                functional: vec![rat(0), rat(1), rat(2)]
            }
        );
    }
}
