use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{build_indecomposable, hom_ext, root_label, IndecompRep, QuiverError, QuiverSpec};
use crate::weights::{difference_positivity, PositivityCertificate, WeightSystem};

/// Hom and Ext dimensions between all indecomposables, indexed by the
/// position of each root in `roots`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtTable {
    pub roots: Vec<Vec<u32>>,
    pub hom: Vec<Vec<usize>>,
    pub ext: Vec<Vec<usize>>,
}

impl ExtTable {
    pub fn root_index(&self, d: &[u32]) -> Option<usize> {
        self.roots.iter().position(|r| r == d)
    }

    /// Nonzero Ext entries as `(r, s, m_rs)`.
    pub fn ext_entries(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (r, row) in self.ext.iter().enumerate() {
            for (s, &m) in row.iter().enumerate() {
                if m > 0 {
                    out.push((r, s, m));
                }
            }
        }
        out
    }
}

impl Serialize for ExtTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            r: String,
            s: String,
            m: usize,
        }
        #[derive(Serialize)]
        struct Repr {
            roots: Vec<String>,
            hom: Vec<Vec<usize>>,
            ext: Vec<Entry>,
        }
        Repr {
            roots: self.roots.iter().map(|r| root_label(r)).collect(),
            hom: self.hom.clone(),
            ext: self
                .ext_entries()
                .into_iter()
                .map(|(r, s, m)| Entry {
                    r: root_label(&self.roots[r]),
                    s: root_label(&self.roots[s]),
                    m,
                })
                .collect(),
        }
        .serialize(s)
    }
}

/// Builds one certified indecomposable per positive root and tabulates Hom
/// and Ext between them. Root `k` is sampled from its own stream derived
/// from `seed`, so the work parallelizes without shared state.
pub fn ext_table(q: &QuiverSpec, seed: u64) -> Result<ExtTable, QuiverError> {
    let roots = q.positive_roots();
    let models: Vec<IndecompRep> = roots
        .par_iter()
        .enumerate()
        .map(|(k, d)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            build_indecomposable(q, d, &mut rng)
        })
        .collect::<Result<_, _>>()?;
    let rows: Vec<(Vec<usize>, Vec<usize>)> = models
        .par_iter()
        .map(|m| {
            let mut hom = Vec::with_capacity(models.len());
            let mut ext = Vec::with_capacity(models.len());
            for n in &models {
                let (h, e) = hom_ext(q, &m.rep, &n.rep)?;
                hom.push(h);
                ext.push(e);
            }
            Ok((hom, ext))
        })
        .collect::<Result<_, QuiverError>>()?;
    let (hom, ext) = rows.into_iter().unzip();
    Ok(ExtTable { roots, hom, ext })
}

/// A topological order of the Ext digraph (arc `r -> s` iff `m_rs > 0`),
/// smallest available index first, or `None` if it has a cycle.
pub fn ext_order(table: &ExtTable) -> Option<Vec<usize>> {
    let k = table.roots.len();
    let mut indegree = vec![0usize; k];
    for (_, s, _) in table.ext_entries() {
        indegree[s] += 1;
    }
    let mut ready: BTreeSet<usize> = (0..k).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(k);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for s in 0..k {
            if table.ext[v][s] > 0 {
                indegree[s] -= 1;
                if indegree[s] == 0 {
                    ready.insert(s);
                }
            }
        }
    }
    (order.len() == k).then_some(order)
}

/// Multiplicities of indecomposable summands, keyed by root.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitSpec {
    mult: BTreeMap<Vec<u32>, u32>,
}

impl OrbitSpec {
    pub fn new(entries: impl IntoIterator<Item = (Vec<u32>, u32)>) -> Self {
        let mut mult = BTreeMap::new();
        for (r, m) in entries {
            if m > 0 {
                *mult.entry(r).or_insert(0) += m;
            }
        }
        OrbitSpec { mult }
    }

    /// Parses `"root:mult,..."` with roots written as digit strings, e.g.
    /// `"10:2,01:1"` on a two-vertex quiver.
    pub fn parse(text: &str, vertices: usize) -> Result<Self, QuiverError> {
        let bad = |why: String| QuiverError::BadOrbit(why);
        let mut entries = Vec::new();
        for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (root, m) = token
                .split_once(':')
                .ok_or_else(|| bad(format!("`{token}` is not root:mult")))?;
            let root: Vec<u32> = root
                .trim()
                .chars()
                .map(|c| c.to_digit(10))
                .collect::<Option<_>>()
                .ok_or_else(|| bad(format!("root `{root}` is not a digit string")))?;
            if root.len() != vertices {
                return Err(bad(format!(
                    "root has {} entries, quiver has {vertices} vertices",
                    root.len()
                )));
            }
            let m: u32 = m
                .trim()
                .parse()
                .map_err(|_| bad(format!("multiplicity `{m}`")))?;
            entries.push((root, m));
        }
        Ok(OrbitSpec::new(entries))
    }

    pub fn multiplicities(&self) -> &BTreeMap<Vec<u32>, u32> {
        &self.mult
    }

    pub fn multiplicity(&self, root: &[u32]) -> u32 {
        self.mult.get(root).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.mult.is_empty()
    }

    /// Total dimension vector `Σ μ_r r`, given the vertex count.
    pub fn dimension(&self, vertices: usize) -> Vec<u32> {
        let mut d = vec![0; vertices];
        for (r, &m) in &self.mult {
            for (x, &y) in d.iter_mut().zip(r) {
                *x += m * y;
            }
        }
        d
    }

    pub fn label(&self) -> String {
        self.mult
            .iter()
            .map(|(r, m)| format!("{}:{m}", root_label(r)))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Multiplicities as a dense vector over the table's roots.
    fn dense(&self, table: &ExtTable) -> Result<Vec<u32>, QuiverError> {
        let mut v = vec![0; table.roots.len()];
        for (r, &m) in &self.mult {
            let k = table
                .root_index(r)
                .ok_or_else(|| QuiverError::BadOrbit(format!("{} is not a positive root", root_label(r))))?;
            v[k] = m;
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitNormalWeights {
    pub weights: WeightSystem,
    pub presentation: Vec<(usize, usize)>,
}

/// Weights `e_{s,i} - e_{r,j}` on `⊕ Hom(C^{μ_r}, C^{μ_s})^{m_rs}`.
pub fn orbit_normal_weights(
    table: &ExtTable,
    mu: &OrbitSpec,
) -> Result<OrbitNormalWeights, QuiverError> {
    let dense = mu.dense(table)?;
    let mut first = vec![0; dense.len()];
    let mut characters = Vec::new();
    for (k, &m) in dense.iter().enumerate() {
        first[k] = characters.len();
        for j in 1..=m {
            characters.push(format!("e{}_{j}", root_label(&table.roots[k])));
        }
    }
    let rank = characters.len();
    let mut weights = Vec::new();
    let mut presentation = Vec::new();
    for (r, s, m_rs) in table.ext_entries() {
        for i in 0..dense[s] as usize {
            for j in 0..dense[r] as usize {
                let (plus, minus) = (first[s] + i, first[r] + j);
                for _ in 0..m_rs {
                    let mut w = vec![0; rank];
                    w[plus] = 1;
                    w[minus] = -1;
                    weights.push(w);
                    presentation.push((plus, minus));
                }
            }
        }
    }
    let weights = WeightSystem::new(characters, weights).expect("weights sized to characters");
    Ok(OrbitNormalWeights {
        weights,
        presentation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub mu: BTreeMap<String, u32>,
    pub dim: Vec<u32>,
    pub characters: Vec<String>,
    pub weights: Vec<Vec<i64>>,
    pub certificate: PositivityCertificate,
    pub incidence: bool,
    pub codim: usize,
}

impl OrbitReport {
    pub fn weight_system(&self) -> WeightSystem {
        WeightSystem::new(self.characters.clone(), self.weights.clone()).expect("consistent report")
    }
}

pub fn orbit_incidence_verdict(table: &ExtTable, mu: &OrbitSpec) -> Result<OrbitReport, QuiverError> {
    let nw = orbit_normal_weights(table, mu)?;
    let certificate = difference_positivity(&nw.weights, &nw.presentation)
        .expect("orbit normal weights are basis differences");
    let vertices = table.roots.first().map_or(0, Vec::len);
    Ok(OrbitReport {
        mu: mu
            .multiplicities()
            .iter()
            .map(|(r, &m)| (root_label(r), m))
            .collect(),
        dim: mu.dimension(vertices),
        characters: nw.weights.characters().to_vec(),
        weights: nw.weights.weights().to_vec(),
        incidence: certificate.is_positive(),
        certificate,
        codim: nw.weights.len(),
    })
}

/// Hom-order: `true` when `Σ_r μ_M(r) hom(r, X) ≤ Σ_r μ_N(r) hom(r, X)` for
/// every indecomposable `X`, i.e. the orbit of `N` lies in the closure of the
/// orbit of `M`.
pub fn hom_leq(table: &ExtTable, m: &OrbitSpec, n: &OrbitSpec) -> Result<bool, QuiverError> {
    let vertices = table.roots.first().map_or(0, Vec::len);
    let (dm, dn) = (m.dimension(vertices), n.dimension(vertices));
    if dm != dn {
        return Err(QuiverError::DimMismatch(dm, dn));
    }
    let (mm, nn) = (m.dense(table)?, n.dense(table)?);
    Ok((0..table.roots.len()).all(|x| {
        let total = |mu: &[u32]| -> usize {
            mu.iter()
                .enumerate()
                .map(|(r, &c)| c as usize * table.hom[r][x])
                .sum()
        };
        total(&mm) <= total(&nn)
    }))
}

/// All nonzero orbit specs whose dimension vector has entries at most
/// `bound`, sorted.
pub fn enumerate_orbits(table: &ExtTable, bound: u32) -> Vec<OrbitSpec> {
    fn go(
        table: &ExtTable,
        bound: u32,
        k: usize,
        dim: &mut Vec<u32>,
        mu: &mut Vec<(Vec<u32>, u32)>,
        out: &mut Vec<OrbitSpec>,
    ) {
        if k == table.roots.len() {
            if !mu.is_empty() {
                out.push(OrbitSpec::new(mu.iter().cloned()));
            }
            return;
        }
        go(table, bound, k + 1, dim, mu, out);
        let root = &table.roots[k];
        let mut m = 0;
        loop {
            m += 1;
            if dim.iter().zip(root).any(|(&d, &r)| d + m * r > bound) {
                break;
            }
            for (d, &r) in dim.iter_mut().zip(root) {
                *d += m * r;
            }
            mu.push((root.clone(), m));
            go(table, bound, k + 1, dim, mu, out);
            mu.pop();
            for (d, &r) in dim.iter_mut().zip(root) {
                *d -= m * r;
            }
        }
    }
    let vertices = table.roots.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    go(table, bound, 0, &mut vec![0; vertices], &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Covering relations of the Hom-order among `orbits` sharing a dimension
/// vector, as index pairs `(upper, lower)`: the orbit of `lower` lies in the
/// closure of the orbit of `upper` with nothing strictly between.
pub fn hom_order_edges(table: &ExtTable, orbits: &[OrbitSpec]) -> Vec<(usize, usize)> {
    let vertices = table.roots.first().map_or(0, Vec::len);
    let mut groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for (k, o) in orbits.iter().enumerate() {
        groups.entry(o.dimension(vertices)).or_default().push(k);
    }
    let mut edges = Vec::new();
    for members in groups.values() {
        let below = |a: usize, b: usize| {
            a != b && hom_leq(table, &orbits[a], &orbits[b]).unwrap_or(false)
        };
        for &a in members {
            for &b in members {
                if below(a, b) && !members.iter().any(|&c| below(a, c) && below(c, b)) {
                    edges.push((a, b));
                }
            }
        }
    }
    edges.sort();
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2_table() -> ExtTable {
        ext_table(&QuiverSpec::from_diagram("A2", Some("1>2")).unwrap(), 1).unwrap()
    }

    fn spec(entries: &[(&[u32], u32)]) -> OrbitSpec {
        OrbitSpec::new(entries.iter().map(|(r, m)| (r.to_vec(), *m)))
    }

    #[test]
    fn a2_ext_table() {
        let t = a2_table();
        assert_eq!(t.roots, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(t.ext_entries(), vec![(0, 1, 1)]);
        assert_eq!(t.hom[2], vec![1, 0, 1]);
        assert_eq!(ext_order(&t), Some(vec![0, 1, 2]));
    }

    #[test]
    fn a2_normal_weights() {
        let t = a2_table();
        let nw = orbit_normal_weights(&t, &spec(&[(&[1, 1], 1)])).unwrap();
        assert!(nw.weights.is_empty());

        let nw = orbit_normal_weights(&t, &spec(&[(&[1, 0], 1), (&[0, 1], 1)])).unwrap();
        assert_eq!(nw.weights.characters(), &["e10_1", "e01_1"]);
        assert_eq!(nw.weights.weights(), &[vec![-1, 1]]);

        let nw = orbit_normal_weights(&t, &spec(&[(&[1, 0], 2), (&[0, 1], 1)])).unwrap();
        assert_eq!(nw.weights.characters(), &["e10_1", "e10_2", "e01_1"]);
        assert_eq!(nw.weights.weights(), &[vec![-1, 0, 1], vec![0, -1, 1]]);
    }

    #[test]
    fn a2_verdicts_and_hom_order() {
        let t = a2_table();
        let split = spec(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let p = spec(&[(&[1, 1], 1)]);
        assert!(orbit_incidence_verdict(&t, &split).unwrap().incidence);
        assert!(hom_leq(&t, &p, &split).unwrap());
        assert!(!hom_leq(&t, &split, &p).unwrap());
        assert!(hom_leq(&t, &p, &p).unwrap());
        assert!(matches!(
            hom_leq(&t, &p, &spec(&[(&[1, 0], 1)])),
            Err(QuiverError::DimMismatch(..))
        ));
    }

    #[test]
    fn orbit_parsing() {
        let mu = OrbitSpec::parse("10:2, 01:1", 2).unwrap();
        assert_eq!(mu.dimension(2), vec![2, 1]);
        assert_eq!(mu.label(), "01:1,10:2");
        assert!(OrbitSpec::parse("1:1", 2).is_err());
        assert!(OrbitSpec::parse("10", 2).is_err());
        assert!(OrbitSpec::parse("1x:1", 2).is_err());
        let t = a2_table();
        assert!(orbit_normal_weights(&t, &OrbitSpec::parse("20:1", 2).unwrap()).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let t = a2_table();
        // dimension (1,1) has two orbits; bound 1 gives (1,0),(0,1),(1,1)x2
        let orbits = enumerate_orbits(&t, 1);
        assert_eq!(orbits.len(), 4);
        let edges = hom_order_edges(&t, &orbits);
        assert_eq!(edges.len(), 1);
        let (upper, lower) = edges[0];
        assert_eq!(orbits[upper], spec(&[(&[1, 1], 1)]));
        assert_eq!(orbits[lower], spec(&[(&[1, 0], 1), (&[0, 1], 1)]));
    }
}
