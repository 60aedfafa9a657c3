//! Representations of Dynkin quivers.
//!
//! Indecomposables are modeled explicitly (one per positive root) and
//! certified by `dim End = 1`. Hom and Ext dimensions between them drive the
//! normal weights of every orbit, the Ext-ordering of roots, and the Hom-order
//! oracle for degenerations.

mod orbit;
mod rep;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{rat, Rational};

pub use orbit::{
    enumerate_orbits, ext_order, ext_table, hom_leq, hom_order_edges, orbit_incidence_verdict,
    orbit_normal_weights, ExtTable, OrbitNormalWeights, OrbitReport, OrbitSpec,
};
pub use rep::{build_indecomposable, hom_ext, IndecompRep, Rep, MAX_RETRIES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("underlying graph is not a simply-laced Dynkin diagram: {0}")]
    NotDynkin(String),
    #[error("unknown diagram `{0}`")]
    UnknownDiagram(String),
    #[error("bad orientation: {0}")]
    BadOrientation(String),
    #[error("{0:?} is not a positive root")]
    NotARoot(Vec<u32>),
    #[error("no brick found for {0:?} after {1} attempts")]
    ExhaustedRetries(Vec<u32>, usize),
    #[error("representation does not match the quiver: {0}")]
    QuiverMismatch(String),
    #[error("dimension vectors differ: {0:?} vs {1:?}")]
    DimMismatch(Vec<u32>, Vec<u32>),
    #[error("bad orbit description: {0}")]
    BadOrbit(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E(usize),
}

impl DynkinType {
    /// Largest coefficient of the highest root; bounds every positive root.
    pub fn max_root_entry(self) -> u32 {
        match self {
            DynkinType::A(_) => 1,
            DynkinType::D(_) => 2,
            DynkinType::E(6) => 3,
            DynkinType::E(7) => 4,
            DynkinType::E(_) => 6,
        }
    }

    pub fn root_count(self) -> usize {
        match self {
            DynkinType::A(n) => n * (n + 1) / 2,
            DynkinType::D(n) => n * (n - 1),
            DynkinType::E(6) => 36,
            DynkinType::E(7) => 63,
            DynkinType::E(_) => 120,
        }
    }

    pub fn parse(name: &str) -> Result<Self, QuiverError> {
        let bad = || QuiverError::UnknownDiagram(name.to_string());
        let name = name.trim();
        let (kind, rest) = name.split_at(name.chars().next().ok_or_else(bad)?.len_utf8());
        let n: usize = rest.parse().map_err(|_| bad())?;
        match kind.to_ascii_uppercase().as_str() {
            "A" if n >= 1 => Ok(DynkinType::A(n)),
            "D" if n >= 4 => Ok(DynkinType::D(n)),
            "E" if (6..=8).contains(&n) => Ok(DynkinType::E(n)),
            _ => Err(bad()),
        }
    }

    pub fn vertex_count(self) -> usize {
        match self {
            DynkinType::A(n) | DynkinType::D(n) | DynkinType::E(n) => n,
        }
    }

    /// Undirected edges on vertices `1..=n`: `A_n` a path, `D_n` the path
    /// `1..n-1` with `n` attached to `n-2`, `E_n` the path `1..n-1` with `n`
    /// attached to `3`.
    pub fn edges(self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        let path_len = match self {
            DynkinType::A(_) => n,
            _ => n - 1,
        };
        let mut e: Vec<(usize, usize)> = (1..path_len).map(|i| (i, i + 1)).collect();
        match self {
            DynkinType::A(_) => {}
            DynkinType::D(_) => e.push((n - 2, n)),
            DynkinType::E(_) => e.push((3, n)),
        }
        e
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
        }
    }
}

/// Oriented Dynkin quiver; vertices are `0..n` internally and named `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverSpec {
    n: usize,
    /// `(tail, head)`: the arrow maps the tail space into the head space.
    edges: Vec<(usize, usize)>,
    kind: DynkinType,
}

impl QuiverSpec {
    /// Validates that the underlying graph is a connected simply-laced Dynkin
    /// diagram (positive-definite Tits form) and classifies it.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, QuiverError> {
        let not = |why: &str| QuiverError::NotDynkin(why.to_string());
        if n == 0 {
            return Err(not("no vertices"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(t, h) in &edges {
            if t >= n || h >= n {
                return Err(not("edge endpoint out of range"));
            }
            if t == h {
                return Err(not("loop"));
            }
            if !seen.insert((t.min(h), t.max(h))) {
                return Err(not("multiple edge"));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(t, h) in &edges {
            adj[t].push(h);
            adj[h].push(t);
        }
        let mut reached = vec![false; n];
        let mut stack = vec![0];
        reached[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !std::mem::replace(&mut reached[u], true) {
                    stack.push(u);
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return Err(not("disconnected"));
        }
        // Symmetric Tits form 2I - adjacency; positive definite iff all
        // elimination pivots are positive.
        let mut m: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            rat(2)
                        } else if adj[i].contains(&j) {
                            rat(-1)
                        } else {
                            rat(0)
                        }
                    })
                    .collect()
            })
            .collect();
        for k in 0..n {
            if m[k][k] <= rat(0) {
                return Err(not("Tits form is not positive definite"));
            }
            for i in k + 1..n {
                let f = &m[i][k] / &m[k][k];
                for j in k..n {
                    let v = &m[i][j] - &f * &m[k][j];
                    m[i][j] = v;
                }
            }
        }
        let degrees: Vec<usize> = adj.iter().map(Vec::len).collect();
        let kind = match degrees.iter().position(|&d| d == 3) {
            None => DynkinType::A(n),
            Some(center) => {
                let mut arms: Vec<usize> = adj[center]
                    .iter()
                    .map(|&start| {
                        let (mut prev, mut cur, mut len) = (center, start, 1);
                        while let Some(&next) = adj[cur].iter().find(|&&x| x != prev) {
                            prev = cur;
                            cur = next;
                            len += 1;
                        }
                        len
                    })
                    .collect();
                arms.sort();
                match arms[..] {
                    [1, 1, _] => DynkinType::D(n),
                    [1, 2, 2..=4] => DynkinType::E(n),
                    _ => return Err(not("unexpected branch shape")),
                }
            }
        };
        Ok(QuiverSpec { n, edges, kind })
    }

    /// Builds a quiver from a diagram name and an orientation string such as
    /// `"1>2,2>3"` (`a>b` is an arrow from `a` to `b`, `a<b` from `b` to `a`).
    /// Without an orientation every arrow points from the smaller label.
    pub fn from_diagram(diagram: &str, orientation: Option<&str>) -> Result<Self, QuiverError> {
        let kind = DynkinType::parse(diagram)?;
        let undirected = kind.edges();
        let n = kind.vertex_count();
        let edges = match orientation {
            None => undirected.iter().map(|&(a, b)| (a - 1, b - 1)).collect(),
            Some(text) => {
                let mut edges = Vec::new();
                for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                    let (a, b, forward) = if let Some((a, b)) = token.split_once('>') {
                        (a, b, true)
                    } else if let Some((a, b)) = token.split_once('<') {
                        (a, b, false)
                    } else {
                        return Err(QuiverError::BadOrientation(format!("token `{token}`")));
                    };
                    let parse = |s: &str| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|_| QuiverError::BadOrientation(format!("vertex `{s}`")))
                    };
                    let (a, b) = (parse(a)?, parse(b)?);
                    if !undirected.contains(&(a.min(b), a.max(b))) {
                        return Err(QuiverError::BadOrientation(format!(
                            "{a}-{b} is not an edge of {kind}"
                        )));
                    }
                    let (t, h) = if forward { (a, b) } else { (b, a) };
                    edges.push((t - 1, h - 1));
                }
                if edges.len() != undirected.len() {
                    return Err(QuiverError::BadOrientation(format!(
                        "{} arrows given for {} edges",
                        edges.len(),
                        undirected.len()
                    )));
                }
                edges
            }
        };
        let q = QuiverSpec::new(n, edges)?;
        debug_assert_eq!(q.kind, kind);
        Ok(q)
    }

    /// Every orientation of a diagram, in a fixed order.
    pub fn all_orientations(diagram: &str) -> Result<Vec<QuiverSpec>, QuiverError> {
        let kind = DynkinType::parse(diagram)?;
        let undirected = kind.edges();
        let n = kind.vertex_count();
        (0..1u64 << undirected.len())
            .map(|mask| {
                let edges = undirected
                    .iter()
                    .enumerate()
                    .map(|(k, &(a, b))| {
                        if mask >> k & 1 == 0 {
                            (a - 1, b - 1)
                        } else {
                            (b - 1, a - 1)
                        }
                    })
                    .collect();
                QuiverSpec::new(n, edges)
            })
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn kind(&self) -> DynkinType {
        self.kind
    }

    pub fn orientation_string(&self) -> String {
        self.edges
            .iter()
            .map(|(t, h)| format!("{}>{}", t + 1, h + 1))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Tits form `q(d) = Σ dᵢ² - Σ_e d_tail d_head`.
    pub fn tits_form(&self, d: &[u32]) -> i64 {
        self.euler_form(d, d)
    }

    /// Euler form `⟨x, y⟩ = Σ xᵢyᵢ - Σ_e x_tail y_head`.
    pub fn euler_form(&self, x: &[u32], y: &[u32]) -> i64 {
        let diag: i64 = x.iter().zip(y).map(|(&a, &b)| a as i64 * b as i64).sum();
        let off: i64 = self
            .edges
            .iter()
            .map(|&(t, h)| x[t] as i64 * y[h] as i64)
            .sum();
        diag - off
    }

    /// Positive roots: nonzero `d` with `q(d) = 1`, by bounded exhaustive
    /// search, sorted by total dimension and then lexicographically.
    pub fn positive_roots(&self) -> Vec<Vec<u32>> {
        let bound = self.kind.max_root_entry();
        let mut out = Vec::new();
        let mut d = vec![0u32; self.n];
        loop {
            if d.iter().any(|&x| x > 0) && self.tits_form(&d) == 1 {
                out.push(d.clone());
            }
            let mut k = 0;
            while k < self.n && d[k] == bound {
                d[k] = 0;
                k += 1;
            }
            if k == self.n {
                break;
            }
            d[k] += 1;
        }
        out.sort_by(|a, b| {
            let (sa, sb): (u32, u32) = (a.iter().sum(), b.iter().sum());
            sa.cmp(&sb).then_with(|| b.cmp(a))
        });
        out
    }
}

/// Compact label of a dimension vector (entries never exceed 6).
pub fn root_label(d: &[u32]) -> String {
    d.iter().map(|x| x.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagrams_classify() {
        for name in ["A1", "A2", "A5", "D4", "D6", "E6", "E7", "E8"] {
            let q = QuiverSpec::from_diagram(name, None).unwrap();
            assert_eq!(q.kind().to_string(), name);
        }
        assert!(DynkinType::parse("D3").is_err());
        assert!(DynkinType::parse("E9").is_err());
        assert!(DynkinType::parse("B2").is_err());
    }

    #[test]
    fn non_dynkin_graphs_are_rejected() {
        // 4-cycle (affine A3), star with four arms (affine D4)
        assert!(QuiverSpec::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).is_err());
        assert!(QuiverSpec::new(5, vec![(0, 1), (0, 2), (0, 3), (0, 4)]).is_err());
        assert!(QuiverSpec::new(2, vec![(0, 1), (1, 0)]).is_err());
        assert!(QuiverSpec::new(3, vec![(0, 1)]).is_err());
        // affine E6: arms 2,2,2
        let e = vec![(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)];
        assert!(QuiverSpec::new(7, e).is_err());
    }

    #[test]
    fn orientation_parsing() {
        let q = QuiverSpec::from_diagram("A3", Some("1>2, 3<2")).unwrap();
        assert_eq!(q.edges(), &[(0, 1), (1, 2)]);
        let q = QuiverSpec::from_diagram("A3", Some("2>1,3>2")).unwrap();
        assert_eq!(q.orientation_string(), "2>1,3>2");
        assert!(QuiverSpec::from_diagram("A3", Some("1>3,2>3")).is_err());
        assert!(QuiverSpec::from_diagram("A3", Some("1>2")).is_err());
        assert!(QuiverSpec::from_diagram("A3", Some("1-2,2>3")).is_err());
        assert_eq!(QuiverSpec::all_orientations("D4").unwrap().len(), 8);
    }

    #[test]
    fn root_examples() {
        let a2 = QuiverSpec::from_diagram("A2", None).unwrap();
        assert_eq!(a2.positive_roots(), vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let a3 = QuiverSpec::from_diagram("A3", None).unwrap();
        assert_eq!(a3.positive_roots().len(), 6);
        let d4 = QuiverSpec::from_diagram("D4", None).unwrap();
        let roots = d4.positive_roots();
        assert_eq!(roots.len(), 12);
        assert!(roots.contains(&vec![1, 2, 1, 1]));
    }

    #[test]
    fn root_counts_match_type() {
        for name in ["A4", "D5", "E6", "E7", "E8"] {
            let q = QuiverSpec::from_diagram(name, None).unwrap();
            assert_eq!(q.positive_roots().len(), q.kind().root_count(), "{name}");
        }
    }
}
