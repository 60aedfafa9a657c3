use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Rational, RationalRepr};

/// Exponent vector, ordered graded-lexicographically: total degree first, then
/// lexicographic with the first variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Weighted degree `sum e_i * w_i`.
    pub fn weighted_degree(&self, weights: &[i64]) -> i64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
    }

    /// All exponent vectors in `nvars` variables of total degree exactly `d`,
    /// in ascending graded-lex order.
    pub fn of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(prefix: &mut Vec<u32>, left: usize, d: u32, out: &mut Vec<Monomial>) {
            if left == 1 {
                prefix.push(d);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in 0..=d {
                prefix.push(e);
                rec(prefix, left - 1, d - e, out);
                prefix.pop();
            }
        }
        if nvars == 0 {
            return if d == 0 { vec![Monomial(vec![])] } else { vec![] };
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), nvars, d, &mut out);
        out.sort();
        out
    }

    /// All exponent vectors with total degree in `lo..=hi`, ascending.
    pub fn up_to_degree(nvars: usize, lo: u32, hi: u32) -> Vec<Monomial> {
        (lo..=hi).flat_map(|d| Monomial::of_degree(nvars, d)).collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with rational coefficients over a named,
/// ordered variable list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    variables: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(variables: Vec<String>) -> Self {
        MultiPoly {
            variables,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(variables: Vec<String>, c: Rational) -> Self {
        let n = variables.len();
        let mut p = Self::zero(variables);
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn one(variables: Vec<String>) -> Self {
        Self::constant(variables, Rational::one())
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(variables: Vec<String>, name: &str) -> Self {
        let i = variables
            .iter()
            .position(|v| v == name)
            .unwrap_or_else(|| panic!("unknown variable {name}"));
        let n = variables.len();
        let mut p = Self::zero(variables);
        p.add_term(Monomial::var(n, i), Rational::one());
        p
    }

    /// Linear form `sum c_i v_i` over the given variables.
    pub fn linear(variables: Vec<String>, coeffs: &[Rational]) -> Self {
        assert_eq!(coeffs.len(), variables.len());
        let n = variables.len();
        let mut p = Self::zero(variables);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn from_terms(
        variables: Vec<String>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = Self::zero(variables);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Maximum total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.len(), self.variables.len(), "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Re-expresses `self` over a superset variable list.
    pub fn embed(&self, variables: &[String]) -> MultiPoly {
        let map: Vec<usize> = self
            .variables
            .iter()
            .map(|v| {
                variables
                    .iter()
                    .position(|w| w == v)
                    .unwrap_or_else(|| panic!("variable {v} missing from target list"))
            })
            .collect();
        let mut out = MultiPoly::zero(variables.to_vec());
        for (m, c) in &self.terms {
            let mut e = vec![0; variables.len()];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] = k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Brings two polynomials onto a common variable list: `a`'s variables in
    /// order, followed by `b`'s variables not already present.
    pub fn align(a: &MultiPoly, b: &MultiPoly) -> (MultiPoly, MultiPoly) {
        if a.variables == b.variables {
            return (a.clone(), b.clone());
        }
        let mut vars = a.variables.clone();
        for v in &b.variables {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        (a.embed(&vars), b.embed(&vars))
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let (mut a, b) = Self::align(self, other);
        for (m, c) in b.terms {
            a.add_term(m, c);
        }
        a
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            variables: self.variables.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Rational) -> MultiPoly {
        if s.is_zero() {
            return MultiPoly::zero(self.variables.clone());
        }
        MultiPoly {
            variables: self.variables.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let (a, b) = Self::align(self, other);
        let mut out = MultiPoly::zero(a.variables.clone());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(self.variables.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Product of a list of polynomials sharing a variable list.
    pub fn product<'a>(variables: Vec<String>, factors: impl IntoIterator<Item = &'a MultiPoly>) -> MultiPoly {
        factors
            .into_iter()
            .fold(MultiPoly::one(variables), |acc, f| acc.mul(f))
    }

    /// Replaces every variable by a linear form over `new_vars` and expands.
    ///
    /// `images` maps each variable name of `self` to its coefficient vector
    /// over `new_vars`.
    pub fn substitute_linear(
        &self,
        new_vars: &[String],
        images: &BTreeMap<String, Vec<Rational>>,
    ) -> Result<MultiPoly, super::ExactError> {
        let forms: Vec<MultiPoly> = self
            .variables
            .iter()
            .map(|v| {
                let coeffs = images
                    .get(v)
                    .ok_or_else(|| super::ExactError::MissingImage(v.clone()))?;
                if coeffs.len() != new_vars.len() {
                    return Err(super::ExactError::ImageLength {
                        variable: v.clone(),
                        expected: new_vars.len(),
                        found: coeffs.len(),
                    });
                }
                Ok(MultiPoly::linear(new_vars.to_vec(), coeffs))
            })
            .collect::<Result<_, _>>()?;

        let mut powers: Vec<Vec<MultiPoly>> = forms
            .iter()
            .map(|f| vec![MultiPoly::one(new_vars.to_vec()), f.clone()])
            .collect();
        let mut out = MultiPoly::zero(new_vars.to_vec());
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(new_vars.to_vec(), c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&forms[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e]);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Evaluates at a rational point given in variable order.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.variables.len());
        self.terms.iter().fold(Rational::zero(), |acc, (m, c)| {
            let v = m
                .0
                .iter()
                .zip(point)
                .fold(c.clone(), |t, (&e, x)| t * num_traits::pow(x.clone(), e as usize));
            acc + v
        })
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .0
                .iter()
                .zip(&self.variables)
                .filter(|(e, _)| **e > 0)
                .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            let negative = c.is_negative();
            let abs = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{abs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    #[serde(flatten)]
    coeff: RationalRepr,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    variables: Vec<String>,
    terms: Vec<TermRepr>,
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRepr {
            variables: self.variables.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    exp: m.0.clone(),
                    coeff: RationalRepr::from(c),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = PolyRepr::deserialize(d)?;
        let n = repr.variables.len();
        let mut p = MultiPoly::zero(repr.variables);
        for t in repr.terms {
            if t.exp.len() != n {
                return Err(D::Error::custom("exponent length does not match variables"));
            }
            let c = Rational::try_from(t.coeff).map_err(D::Error::custom)?;
            p.add_term(Monomial(t.exp), c);
        }
        Ok(p)
    }
}
