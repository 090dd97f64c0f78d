use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::endofunction::Endofunction;
use crate::error::{Error, Result};

/// `Σ coeffs[k]·x_k + constant`, scaled so that the first nonzero
/// coefficient (or the constant, for a constant form) is 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    coeffs: Vec<BigRational>,
    constant: BigRational,
}

impl LinearForm {
    /// Canonicalizes `Σ coeffs·x + constant`, returning the scale pulled
    /// out. A zero input yields scale 0 and the zero form.
    pub fn new(coeffs: Vec<BigRational>, constant: BigRational) -> (BigRational, Self) {
        let lead = coeffs
            .iter()
            .chain(std::iter::once(&constant))
            .find(|c| !c.is_zero())
            .cloned();
        match lead {
            None => (BigRational::zero(), Self { coeffs, constant }),
            Some(lead) => {
                let coeffs = coeffs.into_iter().map(|c| c / &lead).collect();
                let constant = constant / &lead;
                (lead, Self { coeffs, constant })
            }
        }
    }

    /// Canonicalizes an integer combination `Σ c·x_k`.
    pub fn from_terms(n: usize, terms: &[(usize, i64)]) -> (BigRational, Self) {
        let mut coeffs = vec![0i64; n];
        for &(k, c) in terms {
            coeffs[k] += c;
        }
        Self::new(coeffs.into_iter().map(rat).collect(), BigRational::zero())
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn constant(&self) -> &BigRational {
        &self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_canonical(&self) -> bool {
        match self.coeffs.iter().chain(std::iter::once(&self.constant)).find(|c| !c.is_zero()) {
            None => true,
            Some(lead) => lead.is_one(),
        }
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        self.coeffs
            .iter()
            .zip(point)
            .filter(|(c, _)| !c.is_zero())
            .fold(self.constant.clone(), |acc, (c, x)| acc + c * x)
    }

    /// Largest variable index with a nonzero coefficient.
    pub fn last_variable(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Integer multiple `(coefficients, constant)` clearing denominators.
    pub fn integer_multiple(&self) -> (Vec<i64>, i64) {
        let den = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.constant))
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scale = |c: &BigRational| -> i64 {
            let v = c * BigRational::from_integer(den.clone());
            i64::try_from(v.to_integer()).expect("small coefficients")
        };
        (self.coeffs.iter().map(scale).collect(), scale(&self.constant))
    }

    /// The form after the substitution `x_k -> x_{σ(k)}`, re-canonicalized.
    pub fn substitute(&self, sigma: &Endofunction) -> (BigRational, Self) {
        let mut coeffs = vec![BigRational::zero(); self.n()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[sigma.apply(k)] += c;
        }
        Self::new(coeffs, self.constant.clone())
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let mag = if mag.is_one() { String::new() } else { mag.to_string() };
            write!(f, "{sign}{mag}x{k}")?;
            first = false;
        }
        if !self.constant.is_zero() || first {
            if !first && !self.constant.is_negative() {
                write!(f, "+")?;
            }
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

pub(crate) fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `scalar · Π form^exponent`; scalar 0 is the zero polynomial and carries
/// no factors.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "SerialPolynomial", try_from = "SerialPolynomial")]
pub struct FactoredPolynomial {
    scalar: BigRational,
    factors: BTreeMap<LinearForm, u32>,
}

impl FactoredPolynomial {
    pub fn one() -> Self {
        Self { scalar: BigRational::one(), factors: BTreeMap::new() }
    }

    pub fn zero() -> Self {
        Self { scalar: BigRational::zero(), factors: BTreeMap::new() }
    }

    pub fn scalar(&self) -> &BigRational {
        &self.scalar
    }

    pub fn factors(&self) -> &BTreeMap<LinearForm, u32> {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().filter(|(f, _)| f.last_variable().is_some()).map(|(_, e)| e).sum()
    }

    /// Multiplies by `scale · form` where `form` is canonical.
    pub fn mul_canonical(&mut self, scale: BigRational, form: LinearForm, exponent: u32) {
        if self.is_zero() || exponent == 0 {
            return;
        }
        if scale.is_zero() {
            *self = Self::zero();
            return;
        }
        for _ in 0..exponent {
            self.scalar *= &scale;
        }
        if form.last_variable().is_none() {
            // constant form, canonically 1
            return;
        }
        *self.factors.entry(form).or_insert(0) += exponent;
    }

    pub fn mul_form(&mut self, (scale, form): (BigRational, LinearForm)) {
        self.mul_canonical(scale, form, 1);
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        out.scalar *= &other.scalar;
        for (form, &e) in &other.factors {
            *out.factors.entry(form.clone()).or_insert(0) += e;
        }
        out
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        self.factors.iter().fold(self.scalar.clone(), |acc, (form, &e)| {
            let v = form.eval(point);
            (0..e).fold(acc, |a, _| a * &v)
        })
    }

    /// `P(x ∘ σ)`: every variable `x_k` replaced by `x_{σ(k)}`.
    pub fn substitute(&self, sigma: &Endofunction) -> Self {
        let mut out = Self { scalar: self.scalar.clone(), factors: BTreeMap::new() };
        for (form, &e) in &self.factors {
            let (scale, form) = form.substitute(sigma);
            out.mul_canonical(scale, form, e);
        }
        out
    }

    /// Same factors with the same exponents, scalars ignored.
    pub fn same_factors(&self, other: &Self) -> bool {
        self.is_zero() == other.is_zero() && self.factors == other.factors
    }
}

impl fmt::Display for FactoredPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.scalar)?;
        for (form, e) in &self.factors {
            write!(f, "·({form})")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FactoredPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct SerialFactor {
    coeffs: Vec<String>,
    constant: String,
    exponent: u32,
}

#[derive(Serialize, Deserialize)]
struct SerialPolynomial {
    scalar: String,
    factors: Vec<SerialFactor>,
}

impl From<FactoredPolynomial> for SerialPolynomial {
    fn from(p: FactoredPolynomial) -> Self {
        Self {
            scalar: p.scalar.to_string(),
            factors: p
                .factors
                .into_iter()
                .map(|(form, exponent)| SerialFactor {
                    coeffs: form.coeffs.iter().map(ToString::to_string).collect(),
                    constant: form.constant.to_string(),
                    exponent,
                })
                .collect(),
        }
    }
}

impl TryFrom<SerialPolynomial> for FactoredPolynomial {
    type Error = Error;

    fn try_from(s: SerialPolynomial) -> Result<Self> {
        let parse = |t: &str| t.parse::<BigRational>().map_err(|_| Error::Parse(t.to_string()));
        let mut p = Self { scalar: parse(&s.scalar)?, factors: BTreeMap::new() };
        for factor in s.factors {
            let coeffs = factor.coeffs.iter().map(|c| parse(c)).collect::<Result<Vec<_>>>()?;
            let (scale, form) = LinearForm::new(coeffs, parse(&factor.constant)?);
            p.mul_canonical(scale, form, factor.exponent);
        }
        Ok(p)
    }
}

/// `Π form^max(α, β)` over the union of both factor sets; the scalar of a
/// nonzero result is 1.
pub fn lcm_factored(a: &FactoredPolynomial, b: &FactoredPolynomial) -> Result<FactoredPolynomial> {
    for form in a.factors.keys().chain(b.factors.keys()) {
        if !form.is_canonical() {
            return Err(Error::FactorConflict(format!("non-canonical factor {form}")));
        }
    }
    if a.is_zero() || b.is_zero() {
        return Ok(FactoredPolynomial::zero());
    }
    let mut out = FactoredPolynomial::one();
    for (form, &e) in a.factors.iter().chain(&b.factors) {
        let slot = out.factors.entry(form.clone()).or_insert(0);
        *slot = (*slot).max(e);
    }
    Ok(out)
}

/// `x_j - x_i`
pub fn difference(n: usize, j: usize, i: usize) -> (BigRational, LinearForm) {
    LinearForm::from_terms(n, &[(j, 1), (i, -1)])
}

/// `Π_{i<j} (x_j - x_i)`
pub fn vertex_vandermonde(n: usize) -> FactoredPolynomial {
    let mut p = FactoredPolynomial::one();
    for j in 0..n {
        for i in 0..j {
            p.mul_form(difference(n, j, i));
        }
    }
    p
}

/// `a_j - a_i` and `a_j + a_i` for `a_k = x_{f(k)} - x_k`.
pub fn edge_pair_forms(f: &Endofunction, i: usize, j: usize) -> [(BigRational, LinearForm); 2] {
    let n = f.n();
    let minus = [(f.apply(j), 1), (j, -1), (f.apply(i), -1), (i, 1)];
    let plus = [(f.apply(j), 1), (j, -1), (f.apply(i), 1), (i, -1)];
    [LinearForm::from_terms(n, &minus), LinearForm::from_terms(n, &plus)]
}

/// `Π (a_j² - a_i²)` over pairs `i < j` with `i >= lowest`, each factor
/// split into `(a_j - a_i)(a_j + a_i)`.
pub fn edge_vandermonde_from(f: &Endofunction, lowest: usize) -> FactoredPolynomial {
    let mut p = FactoredPolynomial::one();
    for j in 0..f.n() {
        for i in lowest..j {
            for form in edge_pair_forms(f, i, j) {
                p.mul_form(form);
            }
        }
    }
    p
}

/// `Π_{i<j} ((x_{f(j)} - x_j)² - (x_{f(i)} - x_i)²)`, zero when two edge
/// forms agree up to sign.
pub fn edge_vandermonde(f: &Endofunction) -> FactoredPolynomial {
    edge_vandermonde_from(f, 0)
}

/// `Π_{i<j} (x_j - x_i)((x_{f(j)} - x_j)² - (x_{f(i)} - x_i)²)`
pub fn full_product(f: &Endofunction) -> FactoredPolynomial {
    vertex_vandermonde(f.n()).mul(&edge_vandermonde(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ef(s: &str) -> Endofunction {
        s.parse().unwrap()
    }

    fn point(values: &[i64]) -> Vec<BigRational> {
        values.iter().map(|&v| rat(v)).collect()
    }

    #[test]
    fn canonical_scaling() {
        let (scale, form) = LinearForm::from_terms(3, &[(0, -2), (2, 4)]);
        assert_eq!(scale, rat(-2));
        assert_eq!(form.to_string(), "x0-2x2");
        let (scale, zero) = LinearForm::from_terms(3, &[(1, 1), (1, -1)]);
        assert!(scale.is_zero() && zero.is_zero());
    }

    #[test]
    fn lcm_examples() {
        let n = 3;
        let mut a = FactoredPolynomial::one();
        a.mul_form(difference(n, 1, 0));
        let mut b = FactoredPolynomial::one();
        b.mul_canonical(rat(1), difference(n, 1, 0).1, 2);
        let l = lcm_factored(&a, &b).unwrap();
        assert_eq!(l.factors().values().copied().collect::<Vec<_>>(), vec![2]);

        let mut c = FactoredPolynomial::one();
        c.mul_form(difference(n, 2, 0));
        assert_eq!(lcm_factored(&a, &c).unwrap().degree(), 2);
        assert!(lcm_factored(&a, &FactoredPolynomial::zero()).unwrap().is_zero());
    }

    #[test]
    fn vandermonde_examples() {
        let v = vertex_vandermonde(2);
        assert_eq!(v.degree(), 1);
        assert_eq!(v.eval(&point(&[3, 7])), rat(4));
        assert!(edge_vandermonde(&Endofunction::identity(2)).is_zero());
        assert!(edge_vandermonde(&ef("1,0,2")).is_zero());
        assert!(!edge_vandermonde(&ef("0,0,1")).is_zero());
    }

    #[test]
    fn split_matches_unsplit_product() {
        let f = ef("0,0,1");
        let e = edge_vandermonde(&f);
        for p in [[0, 1, 3], [2, -1, 5], [4, 4, 9], [-3, 7, 1]] {
            let x = point(&p);
            let a: Vec<BigRational> = (0..3).map(|k| &x[f.apply(k)] - &x[k]).collect();
            let mut direct = rat(1);
            for j in 0..3 {
                for i in 0..j {
                    direct *= &a[j] * &a[j] - &a[i] * &a[i];
                }
            }
            assert_eq!(e.eval(&x), direct);
        }
    }

    #[test]
    fn serde_round_trip() {
        let p = full_product(&ef("0,0,1,2"));
        let text = serde_json::to_string(&p).unwrap();
        let back: FactoredPolynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn substitution_permutes_variables() {
        let p = vertex_vandermonde(3);
        let swap = ef("1,0,2");
        let q = p.substitute(&swap);
        assert!(q.same_factors(&p));
        assert_eq!(q.scalar(), &-p.scalar().clone());
    }
}
