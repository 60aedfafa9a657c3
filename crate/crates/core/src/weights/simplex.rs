//! Exact phase-one simplex for systems `A x >= 1` with `x` free.
//!
//! Columns are `x+ (r) | x- (r) | surplus (m) | artificial (m)` with the
//! artificials as the starting basis. Pivoting follows Bland's rule, which
//! terminates under exact arithmetic. At an optimum with positive value the
//! dual `y = c_B B^-1` satisfies `y >= 0`, `y A = 0`, `sum y > 0`; it is read
//! off the reduced costs of the artificial columns as `y_i = 1 - d_i`.

use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

pub(crate) enum Feasibility {
    Feasible(Vec<Rational>),
    /// Farkas multipliers, one per row.
    Infeasible(Vec<Rational>),
}

struct Tableau {
    m: usize,
    n: usize,
    // m rows of n coefficients followed by the right-hand side
    t: Vec<Vec<Rational>>,
    cost: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn reduced_costs(&self) -> Vec<Rational> {
        (0..self.n)
            .map(|j| {
                let mut d = self.cost[j].clone();
                for i in 0..self.m {
                    let cb = &self.cost[self.basis[i]];
                    if !cb.is_zero() && !self.t[i][j].is_zero() {
                        d -= cb * &self.t[i][j];
                    }
                }
                d
            })
            .collect()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for v in self.t[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let prow = self.t[row].clone();
        for i in 0..self.m {
            if i == row || self.t[i][col].is_zero() {
                continue;
            }
            let f = self.t[i][col].clone();
            for (v, p) in self.t[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[row] = col;
    }

    fn rhs(&self, i: usize) -> &Rational {
        &self.t[i][self.n]
    }

    /// Runs Bland's rule to optimality; the phase-one objective is bounded
    /// below by zero so no unbounded exit exists.
    fn optimize(&mut self) -> Vec<Rational> {
        loop {
            let d = self.reduced_costs();
            let Some(enter) = (0..self.n).find(|&j| d[j].is_negative()) else {
                return d;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.m {
                let a = &self.t[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let (row, _) = leave.expect("phase-one objective is bounded below");
            self.pivot(row, enter);
        }
    }
}

pub(crate) fn solve_at_least_one(a: &[Vec<Rational>], r: usize) -> Feasibility {
    let m = a.len();
    if m == 0 {
        return Feasibility::Feasible(vec![Rational::zero(); r]);
    }
    let n = 2 * r + 2 * m;
    let mut t = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let mut line = vec![Rational::zero(); n + 1];
        for (j, v) in row.iter().enumerate() {
            line[j] = v.clone();
            line[r + j] = -v.clone();
        }
        line[2 * r + i] = -Rational::one();
        line[2 * r + m + i] = Rational::one();
        line[n] = Rational::one();
        t.push(line);
    }
    let mut cost = vec![Rational::zero(); n];
    for c in cost.iter_mut().skip(2 * r + m) {
        *c = Rational::one();
    }
    let mut tab = Tableau {
        m,
        n,
        t,
        cost,
        basis: (2 * r + m..n).collect(),
    };
    let d = tab.optimize();

    let value = (0..m).fold(Rational::zero(), |acc, i| {
        acc + &tab.cost[tab.basis[i]] * tab.rhs(i)
    });
    if value.is_zero() {
        let mut x = vec![Rational::zero(); 2 * r];
        for i in 0..m {
            let b = tab.basis[i];
            if b < 2 * r {
                x[b] = tab.rhs(i).clone();
            }
        }
        let (pos, neg) = x.split_at(r);
        Feasibility::Feasible(pos.iter().zip(neg).map(|(p, q)| p - q).collect())
    } else {
        Feasibility::Infeasible(
            (0..m)
                .map(|i| Rational::one() - &d[2 * r + m + i])
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn rows(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn orthant_is_feasible() {
        match solve_at_least_one(&rows(&[&[1, 0], &[0, 1]]), 2) {
            Feasibility::Feasible(x) => assert_eq!(x, vec![rat(1), rat(1)]),
            Feasibility::Infeasible(_) => panic!("expected feasible"),
        }
    }

    #[test]
    fn opposite_pair_is_infeasible() {
        match solve_at_least_one(&rows(&[&[1, -1], &[-1, 1]]), 2) {
            Feasibility::Infeasible(y) => {
                assert!(y.iter().all(|v| !v.is_negative()));
                assert_eq!(y[0], y[1]);
                assert!(y[0].is_positive());
            }
            Feasibility::Feasible(_) => panic!("expected infeasible"),
        }
    }

    #[test]
    fn zero_row_is_infeasible() {
        assert!(matches!(
            solve_at_least_one(&rows(&[&[0, 0], &[1, 0]]), 2),
            Feasibility::Infeasible(_)
        ));
    }
}
