//! Sparse multivariate polynomials, monomial enumeration and affine forms.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exponent vector `α` of a monomial `x^α`.
///
/// Ordered graded-lexicographically: first by total degree, then
/// lexicographically on the entries, so that `x₁ > x₂ > … > xₙ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        ExponentVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    /// The unit vector `e_i` (0-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn plus(&self, other: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.nvars(), other.nvars());
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` if some entry would become negative.
    pub fn minus(&self, other: &ExponentVector) -> Option<ExponentVector> {
        debug_assert_eq!(self.nvars(), other.nvars());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExponentVector)
    }

    pub fn plus_unit(&self, i: usize) -> ExponentVector {
        let mut v = self.0.clone();
        v[i] += 1;
        ExponentVector(v)
    }

    pub fn minus_unit(&self, i: usize) -> Option<ExponentVector> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(ExponentVector(v))
    }

    /// Whether `x^self` divides `x^other`.
    pub fn divides(&self, other: &ExponentVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Evaluates `x^α` at a point.
    pub fn eval<S: Scalar>(&self, point: &[S]) -> S {
        let mut acc = S::one();
        for (x, &a) in point.iter().zip(&self.0) {
            for _ in 0..a {
                acc = acc * x.clone();
            }
        }
        acc
    }

    /// Reads a JSON array of non-negative integers.
    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse(format!("exponent vector must be an array, got {v}")))?;
        arr.iter()
            .map(|e| {
                e.as_u64()
                    .and_then(|u| u32::try_from(u).ok())
                    .ok_or_else(|| Error::Parse(format!("bad exponent {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(ExponentVector)
    }

    pub fn to_json(&self) -> Value {
        json!(self.0)
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl From<&[u32]> for ExponentVector {
    fn from(v: &[u32]) -> Self {
        ExponentVector(v.to_vec())
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Name of variable `i` in an `n`-variate ring: `x, y, z` for up to three
/// variables, `x1, x2, …` otherwise.
pub fn var_name(i: usize, n: usize) -> String {
    if n <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "1");
        }
        let n = self.nvars();
        let mut first = true;
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", var_name(i, n))?;
            if a > 1 {
                write!(f, "^{a}")?;
            }
        }
        Ok(())
    }
}

/// All exponent vectors of total degree exactly `d` in `n` variables, in
/// lexicographic order.
pub fn enumerate_degree(n: usize, d: usize) -> Vec<ExponentVector> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(ExponentVector(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in 0..=left {
            prefix.push(a);
            rec(n, left - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(ExponentVector(Vec::new()));
        }
        return out;
    }
    rec(n, d as u32, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Basis `{x^α : |α| ≤ d}` of polynomials of degree at most `d`, in
/// graded-lex order.
pub fn enumerate_fd(n: usize, d: usize) -> Vec<ExponentVector> {
    (0..=d).flat_map(|k| enumerate_degree(n, k)).collect()
}

/// `binomial(n, k)` as u128.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Degree of a polynomial; the zero polynomial has degree `-∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Absolute/relative tolerance for comparing floating point coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 0.0, rel: 1e-12 }
    }
}

impl Tolerance {
    pub fn close(&self, a: f64, b: f64, scale: f64) -> bool {
        (a - b).abs() <= self.abs + self.rel * scale
    }
}

/// Sparse polynomial in `n` variables; zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<S> {
    n: usize,
    terms: BTreeMap<ExponentVector, S>,
}

impl<S: Scalar> MultiPoly<S> {
    pub fn zero(n: usize) -> Self {
        MultiPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: S) -> Self {
        Self::monomial(ExponentVector::zero(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, S::one())
    }

    /// The variable `x_i` (0-based).
    pub fn var(n: usize, i: usize) -> Self {
        Self::monomial(ExponentVector::unit(n, i), S::one())
    }

    pub fn monomial(exp: ExponentVector, c: S) -> Self {
        let n = exp.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        MultiPoly { n, terms }
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, summing
    /// repeated exponents.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, S)>,
    {
        let mut p = Self::zero(n);
        for (e, c) in terms {
            if e.nvars() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: e.nvars(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|e| e.degree())
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &ExponentVector) -> S {
        self.terms.get(exp).cloned().unwrap_or_else(S::zero)
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&ExponentVector, &S)> {
        self.terms.iter().next_back()
    }

    /// The constant value if the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.is_zero().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, exp: ExponentVector, c: S) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn eval(&self, point: &[S]) -> Result<S> {
        if point.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .fold(S::zero(), |acc, (e, c)| acc + c.clone() * e.eval(point)))
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        MultiPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.clone() * s.clone()))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Multiplies by the monomial `c·x^e`.
    pub fn mul_monomial(&self, e: &ExponentVector, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        MultiPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.plus(e), v.clone() * c.clone()))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MultiPoly<T> {
        let mut out = MultiPoly::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Re-embeds into a ring with `m ≥ n` variables, the old variables
    /// occupying positions `offset..offset+n`.
    pub fn embed(&self, m: usize, offset: usize) -> Self {
        assert!(offset + self.n <= m, "embedding does not fit");
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut v = vec![0; m];
                v[offset..offset + self.n].copy_from_slice(e.entries());
                (ExponentVector(v), c.clone())
            })
            .collect();
        MultiPoly { n: m, terms }
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert_eq!(self.n, divisor.n, "variable count mismatch");
        let (ld_e, ld_c) = divisor.leading()?;
        let (ld_e, ld_c) = (ld_e.clone(), ld_c.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero(self.n);
        while let Some((e, c)) = rem.leading() {
            let shift = e.minus(&ld_e)?;
            let t = c.clone() / ld_c.clone();
            rem = &rem - &divisor.mul_monomial(&shift, &t);
            quot.add_term(shift, t);
        }
        Some(quot)
    }

    /// Coefficient-wise comparison: exact for rationals, with the given
    /// tolerance (relative to the largest coefficient) for floats.
    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        if self.n != other.n {
            return false;
        }
        if S::is_exact() {
            return self == other;
        }
        let scale = self
            .terms
            .values()
            .chain(other.terms.values())
            .map(|c| c.magnitude())
            .fold(0.0, f64::max);
        let diff = self - other;
        diff.terms
            .values()
            .all(|c| tol.close(c.magnitude(), 0.0, scale))
    }

    /// Kind-appropriate equality: exact for rationals, default tolerance
    /// for floats.
    pub fn equals(&self, other: &Self) -> bool {
        self.approx_eq(other, Tolerance::default())
    }

    /// Sum of coefficient magnitudes times `|x^α|` at a point, the usual
    /// normaliser for residuals.
    pub fn abs_eval(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.magnitude() * e.eval(point))
            .sum()
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if let Some(lower) = e.minus_unit(i) {
                out.add_term(lower, c.clone() * S::from_i64(e.get(i) as i64));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let (re, im) = c.to_json_parts();
                json!({ "exp": e.to_json(), "re": re, "im": im })
            })
            .collect();
        json!({ "n": self.n, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("polynomial needs integer field \"n\"".into()))?
            as usize;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("polynomial needs array field \"terms\"".into()))?;
        let mut p = Self::zero(n);
        for t in terms {
            let e = ExponentVector::from_json(
                t.get("exp")
                    .ok_or_else(|| Error::Parse("term without \"exp\"".into()))?,
            )?;
            if e.nvars() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: e.nvars(),
                });
            }
            let re = t
                .get("re")
                .ok_or_else(|| Error::Parse("term without \"re\"".into()))?;
            p.add_term(e, S::from_json_parts(re, t.get("im"))?);
        }
        Ok(p)
    }
}

impl<S: fmt::Debug> fmt::Debug for MultiPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (e, c) in &self.terms {
            m.entry(e, c);
        }
        m.finish()
    }
}

impl<S: Scalar> fmt::Display for MultiPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "({c:?})")?;
            } else {
                write!(f, "({c:?})*{e}")?;
            }
        }
        Ok(())
    }
}

fn check_same_ring(a: usize, b: usize) {
    assert_eq!(a, b, "polynomials in rings with different variable counts");
}

impl<S: Scalar> Add for &MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn add(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
        check_same_ring(self.n, rhs.n);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn sub(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
        check_same_ring(self.n, rhs.n);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<S: Scalar> Mul for &MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn mul(self, rhs: &MultiPoly<S>) -> MultiPoly<S> {
        check_same_ring(self.n, rhs.n);
        let mut out = MultiPoly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.plus(e2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Neg for &MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn neg(self) -> MultiPoly<S> {
        MultiPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<S: Scalar> $tr for MultiPoly<S> {
            type Output = MultiPoly<S>;
            fn $m(self, rhs: MultiPoly<S>) -> MultiPoly<S> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<S: Scalar> Neg for MultiPoly<S> {
    type Output = MultiPoly<S>;
    fn neg(self) -> MultiPoly<S> {
        -&self
    }
}

/// An element `c + Σ aᵢ xᵢ` of the space of affine-linear forms.
#[derive(Clone, PartialEq, Debug)]
pub struct AffineForm<S> {
    pub constant: S,
    pub linear: Vec<S>,
}

impl<S: Scalar> AffineForm<S> {
    pub fn zero(n: usize) -> Self {
        AffineForm {
            constant: S::zero(),
            linear: vec![S::zero(); n],
        }
    }

    pub fn constant(n: usize, c: S) -> Self {
        AffineForm {
            constant: c,
            linear: vec![S::zero(); n],
        }
    }

    /// `c·x_i`.
    pub fn var(n: usize, i: usize, c: S) -> Self {
        let mut f = Self::zero(n);
        f.linear[i] = c;
        f
    }

    pub fn nvars(&self) -> usize {
        self.linear.len()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.iter().all(|a| a.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.linear.iter().all(|a| a.is_zero())
    }

    pub fn eval(&self, point: &[S]) -> Result<S> {
        if point.len() != self.linear.len() {
            return Err(Error::LengthMismatch {
                expected: self.linear.len(),
                found: point.len(),
            });
        }
        Ok(self
            .linear
            .iter()
            .zip(point)
            .fold(self.constant.clone(), |acc, (a, x)| acc + a.clone() * x.clone()))
    }

    pub fn scale(&self, s: &S) -> Self {
        AffineForm {
            constant: self.constant.clone() * s.clone(),
            linear: self.linear.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars(), other.nvars());
        AffineForm {
            constant: self.constant.clone() + other.constant.clone(),
            linear: self
                .linear
                .iter()
                .zip(&other.linear)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    /// The form as a polynomial in `m ≥ n` variables, with `x_i` mapped to
    /// variable `offset + i`.
    pub fn to_poly(&self, m: usize, offset: usize) -> MultiPoly<S> {
        let mut p = MultiPoly::constant(m, self.constant.clone());
        for (i, a) in self.linear.iter().enumerate() {
            p.add_term(ExponentVector::unit(m, offset + i), a.clone());
        }
        p
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AffineForm<T> {
        AffineForm {
            constant: f(&self.constant),
            linear: self.linear.iter().map(f).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "c": self.constant.to_json(),
            "x": self.linear.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, n: usize) -> Result<Self> {
        let c = S::from_json(
            v.get("c")
                .ok_or_else(|| Error::Parse("affine form without \"c\"".into()))?,
        )?;
        let xs = v
            .get("x")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("affine form without array \"x\"".into()))?;
        if xs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: xs.len(),
            });
        }
        Ok(AffineForm {
            constant: c,
            linear: xs.iter().map(S::from_json).collect::<Result<_>>()?,
        })
    }
}

impl<S: Scalar> fmt::Display for AffineForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.nvars();
        let mut parts = Vec::new();
        if !self.constant.is_zero() {
            parts.push(format!("{:?}", self.constant));
        }
        for (i, a) in self.linear.iter().enumerate() {
            if !a.is_zero() {
                parts.push(format!("{:?}*{}", a, var_name(i, n)));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
