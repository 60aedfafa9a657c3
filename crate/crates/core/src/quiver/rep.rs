use rand::Rng;

use super::{QuiverError, QuiverSpec};
use crate::exact::{rat, RatMatrix};

pub const MAX_RETRIES: usize = 1000;

/// A representation: one space per vertex and one matrix per arrow, the
/// matrix of `t -> h` having `dims[h]` rows and `dims[t]` columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    pub dims: Vec<usize>,
    pub maps: Vec<RatMatrix>,
}

impl Rep {
    pub fn zero_maps(q: &QuiverSpec, dims: Vec<usize>) -> Rep {
        let maps = q
            .edges()
            .iter()
            .map(|&(t, h)| RatMatrix::zeros(dims[h], dims[t]))
            .collect();
        Rep { dims, maps }
    }

    pub fn check(&self, q: &QuiverSpec) -> Result<(), QuiverError> {
        let bad = |why: String| Err(QuiverError::QuiverMismatch(why));
        if self.dims.len() != q.vertex_count() {
            return bad(format!(
                "{} vertex spaces for {} vertices",
                self.dims.len(),
                q.vertex_count()
            ));
        }
        if self.maps.len() != q.edges().len() {
            return bad(format!(
                "{} matrices for {} arrows",
                self.maps.len(),
                q.edges().len()
            ));
        }
        for (k, (&(t, h), m)) in q.edges().iter().zip(&self.maps).enumerate() {
            if m.rows() != self.dims[h] || m.cols() != self.dims[t] {
                return bad(format!(
                    "arrow {k} has a {}x{} matrix, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    self.dims[h],
                    self.dims[t]
                ));
            }
        }
        Ok(())
    }
}

/// `(dim Hom(M, N), dim Ext¹(M, N))` as kernel and cokernel dimensions of
/// `φ ↦ (N_e φ_tail - φ_head M_e)_e`.
pub fn hom_ext(q: &QuiverSpec, m: &Rep, n: &Rep) -> Result<(usize, usize), QuiverError> {
    m.check(q)?;
    n.check(q)?;
    let nv = q.vertex_count();
    let mut var_offset = vec![0; nv + 1];
    for i in 0..nv {
        var_offset[i + 1] = var_offset[i] + n.dims[i] * m.dims[i];
    }
    let cols = var_offset[nv];
    // φ_i is dims N_i x M_i, stored row-major
    let var = |i: usize, a: usize, b: usize| var_offset[i] + a * m.dims[i] + b;

    let mut rows = Vec::new();
    for (k, &(t, h)) in q.edges().iter().enumerate() {
        let (me, ne) = (&m.maps[k], &n.maps[k]);
        for r in 0..n.dims[h] {
            for c in 0..m.dims[t] {
                let mut row = vec![rat(0); cols];
                for a in 0..n.dims[t] {
                    row[var(t, a, c)] += &ne[(r, a)];
                }
                for b in 0..m.dims[h] {
                    row[var(h, r, b)] -= &me[(b, c)];
                }
                rows.push(row);
            }
        }
    }
    let target = rows.len();
    let rank = RatMatrix::with_cols(rows, cols).rank();
    Ok((cols - rank, target - rank))
}

/// An indecomposable together with its brick certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndecompRep {
    pub dim: Vec<u32>,
    pub rep: Rep,
    pub endo_dim: usize,
}

impl IndecompRep {
    /// Re-certifies stored data: the dimension vector must be a root and the
    /// endomorphism algebra one-dimensional.
    pub fn certify(q: &QuiverSpec, rep: Rep) -> Result<Self, QuiverError> {
        rep.check(q)?;
        let dim: Vec<u32> = rep.dims.iter().map(|&d| d as u32).collect();
        if dim.iter().all(|&d| d == 0) || q.tits_form(&dim) != 1 {
            return Err(QuiverError::NotARoot(dim));
        }
        let (endo_dim, _) = hom_ext(q, &rep, &rep)?;
        if endo_dim != 1 {
            return Err(QuiverError::QuiverMismatch(format!(
                "dim End = {endo_dim}, not a brick"
            )));
        }
        Ok(IndecompRep { dim, rep, endo_dim })
    }
}

/// Samples arrow matrices with entries in `-2..=2` until `dim End = 1`.
pub fn build_indecomposable<R: Rng>(
    q: &QuiverSpec,
    d: &[u32],
    rng: &mut R,
) -> Result<IndecompRep, QuiverError> {
    if d.len() != q.vertex_count() || d.iter().all(|&x| x == 0) || q.tits_form(d) != 1 {
        return Err(QuiverError::NotARoot(d.to_vec()));
    }
    let dims: Vec<usize> = d.iter().map(|&x| x as usize).collect();
    for _ in 0..MAX_RETRIES {
        let mut rep = Rep::zero_maps(q, dims.clone());
        for mat in rep.maps.iter_mut() {
            for r in 0..mat.rows() {
                for c in 0..mat.cols() {
                    mat[(r, c)] = rat(rng.gen_range(-2..=2));
                }
            }
        }
        let (endo_dim, _) = hom_ext(q, &rep, &rep)?;
        if endo_dim == 1 {
            return Ok(IndecompRep {
                dim: d.to_vec(),
                rep,
                endo_dim,
            });
        }
    }
    Err(QuiverError::ExhaustedRetries(d.to_vec(), MAX_RETRIES))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn a2() -> QuiverSpec {
        QuiverSpec::from_diagram("A2", Some("1>2")).unwrap()
    }

    fn simple(q: &QuiverSpec, i: usize) -> Rep {
        let mut dims = vec![0; q.vertex_count()];
        dims[i] = 1;
        Rep::zero_maps(q, dims)
    }

    #[test]
    fn simples_on_a2() {
        let q = a2();
        let (s1, s2) = (simple(&q, 0), simple(&q, 1));
        assert_eq!(hom_ext(&q, &s1, &s1).unwrap(), (1, 0));
        assert_eq!(hom_ext(&q, &s1, &s2).unwrap(), (0, 1));
        assert_eq!(hom_ext(&q, &s2, &s1).unwrap(), (0, 0));
    }

    #[test]
    fn mismatched_rep_is_rejected() {
        let q = a2();
        let a3 = QuiverSpec::from_diagram("A3", None).unwrap();
        let s = simple(&a3, 0);
        assert!(matches!(
            hom_ext(&q, &s, &s),
            Err(QuiverError::QuiverMismatch(_))
        ));
        let bad = Rep {
            dims: vec![1, 1],
            maps: vec![RatMatrix::zeros(2, 1)],
        };
        assert!(bad.check(&q).is_err());
    }

    #[test]
    fn projective_of_a2() {
        let q = a2();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = build_indecomposable(&q, &[1, 1], &mut rng).unwrap();
        assert_eq!(p.endo_dim, 1);
        assert_ne!(p.rep.maps[0][(0, 0)], rat(0));
        assert!(build_indecomposable(&q, &[2, 1], &mut rng).is_err());
    }

    #[test]
    fn simples_are_built_with_zero_maps() {
        let q = QuiverSpec::from_diagram("A3", None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = build_indecomposable(&q, &[0, 1, 0], &mut rng).unwrap();
        assert!(s.rep.maps.iter().all(RatMatrix::is_zero));
        assert_eq!(IndecompRep::certify(&q, s.rep.clone()).unwrap(), s);
    }

    #[test]
    fn d4_highest_root() {
        let q = QuiverSpec::from_diagram("D4", None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = build_indecomposable(&q, &[1, 2, 1, 1], &mut rng).unwrap();
        assert_eq!(m.endo_dim, 1);
        assert_eq!(hom_ext(&q, &m.rep, &m.rep).unwrap(), (1, 0));
    }

    #[test]
    fn decomposable_is_not_certified() {
        let q = a2();
        let rep = Rep::zero_maps(&q, vec![1, 1]);
        assert!(IndecompRep::certify(&q, rep).is_err());
    }
}
