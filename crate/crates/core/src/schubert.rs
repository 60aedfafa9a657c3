//! Orbits of `B⁻ × B⁺` acting on `n × n` matrices by `(R, L)·M = L M R⁻¹`.
//!
//! Each orbit contains exactly one partial permutation matrix. Completing it to
//! a permutation of `{1..2n}` fixes the stabilizer torus and a normal space
//! whose weights are all `e_u - e_v` with `u > v`.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{rat, RatMatrix};
use crate::weights::{difference_positivity, PositivityCertificate, WeightSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchubertError {
    #[error("entry ({0}, {1}) is outside the {2}x{2} matrix")]
    OutOfRange(usize, usize, usize),
    #[error("row {0} contains more than one 1")]
    RowConflict(usize),
    #[error("column {0} contains more than one 1")]
    ColumnConflict(usize),
    #[error("matrices have sizes {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("cannot parse matrix: {0}")]
    Parse(String),
}

/// 0-1 matrix with at most one 1 in each row and column; positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialPermutation {
    n: usize,
    ones: BTreeSet<(usize, usize)>,
}

impl PartialPermutation {
    pub fn new(n: usize, ones: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, SchubertError> {
        let ones: BTreeSet<(usize, usize)> = ones.into_iter().collect();
        let mut rows = vec![false; n + 1];
        let mut cols = vec![false; n + 1];
        for &(i, j) in &ones {
            if i == 0 || j == 0 || i > n || j > n {
                return Err(SchubertError::OutOfRange(i, j, n));
            }
            if std::mem::replace(&mut rows[i], true) {
                return Err(SchubertError::RowConflict(i));
            }
            if std::mem::replace(&mut cols[j], true) {
                return Err(SchubertError::ColumnConflict(j));
            }
        }
        Ok(PartialPermutation { n, ones })
    }

    pub fn identity(n: usize) -> Self {
        PartialPermutation {
            n,
            ones: (1..=n).map(|i| (i, i)).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        PartialPermutation {
            n,
            ones: BTreeSet::new(),
        }
    }

    /// Parses rows separated by `;`, entries `0`/`1` optionally separated by
    /// spaces or commas, e.g. `"01;10"` or `"0 1; 1 0"`.
    pub fn parse(n: usize, text: &str) -> Result<Self, SchubertError> {
        let rows: Vec<&str> = text.split(';').map(str::trim).collect();
        if rows.len() != n {
            return Err(SchubertError::Parse(format!(
                "expected {n} rows, found {}",
                rows.len()
            )));
        }
        let mut ones = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let entries: Vec<char> = row.chars().filter(|c| !c.is_whitespace() && *c != ',').collect();
            if entries.len() != n {
                return Err(SchubertError::Parse(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    entries.len()
                )));
            }
            for (j, c) in entries.iter().enumerate() {
                match c {
                    '0' => {}
                    '1' => ones.push((i + 1, j + 1)),
                    other => {
                        return Err(SchubertError::Parse(format!("unexpected character {other:?}")))
                    }
                }
            }
        }
        Self::new(n, ones)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ones(&self) -> &BTreeSet<(usize, usize)> {
        &self.ones
    }

    pub fn rank(&self) -> usize {
        self.ones.len()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.n]; self.n];
        for &(i, j) in &self.ones {
            m[i - 1][j - 1] = 1;
        }
        m
    }

    pub fn to_matrix(&self) -> RatMatrix {
        RatMatrix::from_i64_rows(
            &self
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|&v| v as i64).collect())
                .collect::<Vec<_>>(),
        )
    }

    /// `rank A[1..=i, 1..=j]` for all `i, j`, as an `n × n` table.
    pub fn northwest_ranks(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut t = vec![vec![0usize; n]; n];
        for i in 1..=n {
            for j in 1..=n {
                t[i - 1][j - 1] = self.ones.iter().filter(|&&(a, b)| a <= i && b <= j).count();
            }
        }
        t
    }

    /// All partial permutations of size `n`, in sorted order.
    pub fn all(n: usize) -> Vec<PartialPermutation> {
        fn rec(
            n: usize,
            row: usize,
            used: &mut Vec<bool>,
            cur: &mut Vec<(usize, usize)>,
            out: &mut Vec<PartialPermutation>,
        ) {
            if row > n {
                out.push(PartialPermutation {
                    n,
                    ones: cur.iter().copied().collect(),
                });
                return;
            }
            rec(n, row + 1, used, cur, out);
            for c in 1..=n {
                if !used[c] {
                    used[c] = true;
                    cur.push((row, c));
                    rec(n, row + 1, used, cur, out);
                    cur.pop();
                    used[c] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(n, 1, &mut vec![false; n + 1], &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

/// Completion of a partial permutation to `π ∈ S_2n`, stored in one-line
/// notation (`one_line[i-1] = π(i)`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendedPermutation {
    pub n: usize,
    pub one_line: Vec<usize>,
}

impl ExtendedPermutation {
    pub fn apply(&self, i: usize) -> usize {
        self.one_line[i - 1]
    }

    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.one_line.len()];
        for (i, &p) in self.one_line.iter().enumerate() {
            inv[p - 1] = i + 1;
        }
        inv
    }

    /// Recovers the upper-left `n × n` block.
    pub fn restrict(&self) -> PartialPermutation {
        PartialPermutation {
            n: self.n,
            ones: (1..=self.n)
                .filter(|&i| self.apply(i) <= self.n)
                .map(|i| (i, self.apply(i)))
                .collect(),
        }
    }
}

/// Rows without a 1 get, top to bottom, the left-most unused column beyond
/// `n`; the columns still missing a 1 then fill rows `n+1..2n` in increasing
/// order.
pub fn extend(a: &PartialPermutation) -> ExtendedPermutation {
    let n = a.n;
    let mut pi = vec![0usize; 2 * n];
    let mut used = vec![false; 2 * n + 1];
    for &(i, j) in &a.ones {
        pi[i - 1] = j;
        used[j] = true;
    }
    let mut next_col = n + 1;
    for slot in pi.iter_mut().take(n) {
        if *slot == 0 {
            *slot = next_col;
            used[next_col] = true;
            next_col += 1;
        }
    }
    let mut free = (1..=2 * n).filter(|&c| !used[c]);
    for slot in pi.iter_mut().skip(n) {
        *slot = free.next().expect("column count matches row count");
    }
    ExtendedPermutation { n, one_line: pi }
}

/// Maximal torus of the stabilizer, parameterized by the characters
/// `S = {1..n} ∪ π({1..n})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchubertStabilizer {
    pub character_indices: Vec<usize>,
}

impl SchubertStabilizer {
    pub fn of(pi: &ExtendedPermutation) -> Self {
        let s: BTreeSet<usize> = (1..=pi.n).chain((1..=pi.n).map(|i| pi.apply(i))).collect();
        SchubertStabilizer {
            character_indices: s.into_iter().collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.character_indices.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.character_indices.iter().map(|k| format!("e{k}")).collect()
    }

    fn position(&self, k: usize) -> usize {
        self.character_indices
            .binary_search(&k)
            .expect("index belongs to the stabilizer")
    }
}

/// Normal weights together with their `e_u - e_v` presentation.
#[derive(Clone, Debug)]
pub struct NormalWeights {
    pub stabilizer: SchubertStabilizer,
    pub weights: WeightSystem,
    pub presentation: Vec<(usize, usize)>,
    /// The surviving coordinates `(i, j)` of the normal space, 1-based.
    pub coordinates: Vec<(usize, usize)>,
}

/// One weight `e_π(i) - e_j` per coordinate `(i, j)` with `π(i) > j` and
/// `π⁻¹(j) > i`.
pub fn normal_weights(a: &PartialPermutation) -> NormalWeights {
    let pi = extend(a);
    let inv = pi.inverse();
    let stab = SchubertStabilizer::of(&pi);
    let r = stab.rank();
    let mut weights = Vec::new();
    let mut presentation = Vec::new();
    let mut coordinates = Vec::new();
    for i in 1..=a.n {
        for j in 1..=a.n {
            if pi.apply(i) > j && inv[j - 1] > i {
                let plus = stab.position(pi.apply(i));
                let minus = stab.position(j);
                let mut w = vec![0i64; r];
                w[plus] = 1;
                w[minus] = -1;
                weights.push(w);
                presentation.push((plus, minus));
                coordinates.push((i, j));
            }
        }
    }
    NormalWeights {
        weights: WeightSystem::new(stab.names(), weights).expect("weights have stabilizer rank"),
        stabilizer: stab,
        presentation,
        coordinates,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SchubertReport {
    pub matrix: Vec<Vec<u8>>,
    pub pi: Vec<usize>,
    pub characters: Vec<String>,
    pub weights: Vec<Vec<i64>>,
    pub certificate: PositivityCertificate,
    pub incidence: bool,
    pub codim: usize,
}

impl SchubertReport {
    pub fn weight_system(&self) -> WeightSystem {
        WeightSystem::new(self.characters.clone(), self.weights.clone()).expect("consistent report")
    }
}

pub fn incidence_verdict(a: &PartialPermutation) -> SchubertReport {
    let nw = normal_weights(a);
    let certificate = difference_positivity(&nw.weights, &nw.presentation)
        .expect("normal weights are basis differences");
    SchubertReport {
        matrix: a.to_rows(),
        pi: extend(a).one_line,
        characters: nw.weights.characters().to_vec(),
        weights: nw.weights.weights().to_vec(),
        incidence: certificate.is_positive(),
        certificate,
        codim: nw.weights.len(),
    }
}

/// `A ≤ B` when the orbit of `A` lies in the closure of the orbit of `B`:
/// every northwest rank of `A` is at most that of `B`.
pub fn closure_leq(a: &PartialPermutation, b: &PartialPermutation) -> Result<bool, SchubertError> {
    if a.n != b.n {
        return Err(SchubertError::SizeMismatch(a.n, b.n));
    }
    let (ra, rb) = (a.northwest_ranks(), b.northwest_ranks());
    Ok(ra.iter().flatten().zip(rb.iter().flatten()).all(|(x, y)| x <= y))
}

/// Codimension of the orbit computed from its tangent space
/// `{Y A - A X : Y lower, X upper triangular}`.
pub fn orbit_codimension(a: &PartialPermutation) -> usize {
    let n = a.n;
    let m = a.to_matrix();
    let mut generators = Vec::new();
    // Y = E_{pq} with p >= q contributes E_{pq} A; X = E_{pq} with p <= q contributes -A E_{pq}.
    for p in 0..n {
        for q in 0..n {
            if p >= q {
                let mut g = vec![rat(0); n * n];
                for c in 0..n {
                    g[p * n + c] += m[(q, c)].clone();
                }
                generators.push(g);
            }
            if p <= q {
                let mut g = vec![rat(0); n * n];
                for r in 0..n {
                    g[r * n + q] -= m[(r, p)].clone();
                }
                generators.push(g);
            }
        }
    }
    n * n - RatMatrix::with_cols(generators, n * n).rank()
}
