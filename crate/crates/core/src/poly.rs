//! Sparse multivariate polynomials over ℤ in the fixed variables `X`, `Y`, `Z`.
//!
//! Every symbolic object in the crate is an [`MPoly`]. Terms are kept in a
//! `BTreeMap` keyed by [`Monomial`], whose ordering is graded-lexicographic, so
//! two polynomials are equal exactly when their term maps are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division leaves a nonzero remainder")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("polynomial involves more than one variable")]
    NotUnivariate,
    #[error("no value assigned to variable {0}")]
    MissingAssignment(Var),
    #[error("polynomial is not palindromic of even degree")]
    NotPalindromic,
    #[error("invalid polynomial JSON: {0}")]
    InvalidJson(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::Z => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "X",
            Var::Y => "Y",
            Var::Z => "Z",
        }
    }

    /// The remaining variables in `(X, Y, Z)` order, after `self`.
    fn others(self) -> [Var; 2] {
        match self {
            Var::X => [Var::Y, Var::Z],
            Var::Y => [Var::X, Var::Z],
            Var::Z => [Var::X, Var::Y],
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Var {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "X" => Ok(Var::X),
            "Y" => Ok(Var::Y),
            "Z" => Ok(Var::Z),
            _ => Err(PolyError::InvalidJson(format!("unknown variable {s:?}"))),
        }
    }
}

/// Exponent triple `(e_X, e_Y, e_Z)`, ordered graded-lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    #[inline]
    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    fn with_exp(mut self, v: Var, e: u32) -> Self {
        self.0[v.index()] = e;
        self
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in ℤ[X, Y, Z]. No stored coefficient is ever zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, Monomial::ONE)
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(1, Monomial::ONE.with_exp(v, 1))
    }

    pub fn monomial(c: impl Into<BigInt>, m: Monomial) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// Univariate polynomial from ascending coefficients `c_0, c_1, …`.
    pub fn univariate<C: Into<BigInt> + Clone>(v: Var, coeffs: &[C]) -> Self {
        let mut p = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::ONE.with_exp(v, i as u32), c.clone().into());
        }
        p
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Leading term with respect to the graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Degree in `v`; `None` for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Variables with a positive exponent in some term, in `(X, Y, Z)` order.
    pub fn variables(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|&v| self.terms.keys().any(|m| m.exp(v) > 0))
            .collect()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    /// Constant term.
    pub fn constant_term(&self) -> BigInt {
        self.coeff(&Monomial::ONE)
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Coefficients with respect to `v`: entry `i` is the coefficient of `v^i`,
    /// a polynomial free of `v`.
    pub fn coeffs_in(&self, v: Var) -> Vec<MPoly> {
        let Some(d) = self.degree_in(v) else {
            return Vec::new();
        };
        let mut out = vec![MPoly::zero(); d as usize + 1];
        for (m, c) in &self.terms {
            out[m.exp(v) as usize]
                .terms
                .insert(m.with_exp(v, 0), c.clone());
        }
        out
    }

    /// Coefficient of `v^k` as a polynomial free of `v`.
    pub fn coeff_in(&self, v: Var, k: u32) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(v) == k)
                .map(|(m, c)| (m.with_exp(v, 0), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> MPoly {
        if k.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    fn shift(&self, v: Var, k: u32) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.with_exp(v, m.exp(v) + k), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replaces every occurrence of `v` by `value`.
    pub fn substitute(&self, v: Var, value: &MPoly) -> MPoly {
        let coeffs = self.coeffs_in(v);
        let mut acc = MPoly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Renames variable `from` to `to`. The polynomial must not already involve `to`
    /// unless `from == to`.
    pub fn rename(&self, from: Var, to: Var) -> MPoly {
        if from == to {
            return self.clone();
        }
        self.substitute(from, &MPoly::var(to))
    }

    /// Gcd of the coefficients, signed so that the leading coefficient of the
    /// primitive part is positive. Zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        match self.leading_term() {
            Some((_, lc)) if lc.is_negative() => -g,
            _ => g,
        }
    }

    /// Divides every coefficient by `k`; fails unless each division is exact.
    pub fn div_exact_scalar(&self, k: &BigInt) -> Result<MPoly, PolyError> {
        if k.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return Err(PolyError::NotDivisible);
            }
            terms.insert(*m, q);
        }
        Ok(MPoly { terms })
    }

    /// Exact division `self / den`, treating `main` as the leading variable and
    /// recursing on the remaining variables in `(X, Y, Z)` order for
    /// leading-coefficient division.
    ///
    /// The divisor is split into content and primitive part; by Gauss's lemma
    /// every intermediate division by the primitive part is exact in ℤ whenever
    /// the full division is. The quotient must have integer coefficients.
    pub fn exact_div(&self, den: &MPoly, main: Var) -> Result<MPoly, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        if self.is_zero() {
            return Ok(MPoly::zero());
        }
        let content = den.content();
        let primitive = den.div_exact_scalar(&content)?;
        let [second, third] = main.others();
        let q = divide_recursive(self, &primitive, &[main, second, third])?;
        q.div_exact_scalar(&content)
    }

    /// The coefficient-sign twist `g*(T) = Σ (-1)^(n-i) a_i T^i`, `n = deg g`.
    pub fn star(&self) -> Result<MPoly, PolyError> {
        let vars = self.variables();
        let v = match vars.as_slice() {
            [] => return Ok(self.clone()),
            [v] => *v,
            _ => return Err(PolyError::NotUnivariate),
        };
        let n = self.degree_in(v).unwrap_or(0);
        Ok(MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    if (n - m.exp(v)) % 2 == 1 {
                        (*m, -c)
                    } else {
                        (*m, c.clone())
                    }
                })
                .collect(),
        })
    }

    /// Horner evaluation, nested over `X`, then `Y`, then `Z`.
    pub fn eval_complex(&self, at: &Point) -> Result<Complex64, PolyError> {
        for v in self.variables() {
            if at.get(v).is_none() {
                return Err(PolyError::MissingAssignment(v));
            }
        }
        Ok(horner_nested(self, at, &Var::ALL))
    }

    /// Evaluates a univariate polynomial at a real point in double-double
    /// arithmetic, with coefficients split into two doubles. Intended for root
    /// checks where plain `f64` Horner loses too many digits to cancellation.
    pub fn eval_real_precise(&self, x: f64) -> Result<f64, PolyError> {
        let vars = self.variables();
        let v = match vars.as_slice() {
            [] => return Ok(bigint_to_dd(&self.constant_term()).to_f64()),
            [v] => *v,
            _ => return Err(PolyError::NotUnivariate),
        };
        let coeffs = self.coeffs_in(v);
        let mut acc = DoubleDouble::ZERO;
        for c in coeffs.iter().rev() {
            acc = acc.mul_f64(x).add(bigint_to_dd(&c.constant_term()));
        }
        Ok(acc.to_f64())
    }
}

fn divide_recursive(num: &MPoly, den: &MPoly, order: &[Var]) -> Result<MPoly, PolyError> {
    if num.is_zero() {
        return Ok(MPoly::zero());
    }
    let Some((&main, rest)) = order.split_first() else {
        // both sides are constants here
        let (q, r) = num.constant_term().div_rem(&den.constant_term());
        if !r.is_zero() || !num.is_constant() {
            return Err(PolyError::NotDivisible);
        }
        return Ok(MPoly::constant(q));
    };
    let den_deg = den.degree_in(main).unwrap_or(0);
    let den_lc = den.coeff_in(main, den_deg);
    let mut rem = num.clone();
    let mut quot = MPoly::zero();
    while !rem.is_zero() {
        let rem_deg = rem.degree_in(main).unwrap_or(0);
        if rem_deg < den_deg {
            return Err(PolyError::NotDivisible);
        }
        let rem_lc = rem.coeff_in(main, rem_deg);
        let c = divide_recursive(&rem_lc, &den_lc, rest)?;
        let term = c.shift(main, rem_deg - den_deg);
        rem -= &(&term * den);
        quot += &term;
    }
    Ok(quot)
}

fn horner_nested(p: &MPoly, at: &Point, order: &[Var]) -> Complex64 {
    let Some((&v, rest)) = order.split_first() else {
        return Complex64::new(bigint_to_f64(&p.constant_term()), 0.0);
    };
    if p.degree_in(v).unwrap_or(0) == 0 {
        return horner_nested(p, at, rest);
    }
    let x = at.get(v).unwrap_or_default();
    let mut acc = Complex64::new(0.0, 0.0);
    for c in p.coeffs_in(v).iter().rev() {
        acc = acc * x + horner_nested(c, at, rest);
    }
    acc
}

pub(crate) fn bigint_to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// Assignment of complex values to variables.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Point {
    values: [Option<Complex64>; 3],
}

impl Point {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, v: Var, value: impl Into<Complex64>) -> Self {
        self.values[v.index()] = Some(value.into());
        self
    }

    pub fn get(&self, v: Var) -> Option<Complex64> {
        self.values[v.index()]
    }
}

#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        (s, b - (s - a))
    }

    fn add(self, o: DoubleDouble) -> DoubleDouble {
        let (s, e) = Self::two_sum(self.hi, o.hi);
        let (t, f) = Self::two_sum(self.lo, o.lo);
        let (s, e) = Self::quick_two_sum(s, e + t);
        let (hi, lo) = Self::quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }

    fn mul_f64(self, x: f64) -> DoubleDouble {
        let p = self.hi * x;
        let e = self.hi.mul_add(x, -p);
        let (hi, lo) = Self::quick_two_sum(p, e + self.lo * x);
        DoubleDouble { hi, lo }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

fn bigint_to_dd(c: &BigInt) -> DoubleDouble {
    let hi = bigint_to_f64(c);
    let rest = c - BigInt::from_f64(hi).unwrap_or_default();
    DoubleDouble {
        hi,
        lo: bigint_to_f64(&rest),
    }
}

// ---------------------------------------------------------------------------
// arithmetic

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;

    fn add(self, rhs: &'a MPoly) -> MPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;

    fn sub(self, rhs: &'a MPoly) -> MPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;

    fn mul(self, rhs: &'a MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;

    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;

    fn neg(mut self) -> MPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl AddAssign<&MPoly> for MPoly {
    fn add_assign(&mut self, rhs: &MPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&MPoly> for MPoly {
    fn sub_assign(&mut self, rhs: &MPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c);
        }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &'a MPoly) -> MPoly {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<MPoly> for &'a MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Sum for MPoly {
    fn sum<I: Iterator<Item = MPoly>>(iter: I) -> MPoly {
        let mut acc = MPoly::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}

impl Product for MPoly {
    fn product<I: Iterator<Item = MPoly>>(iter: I) -> MPoly {
        iter.fold(MPoly::one(), |acc, p| &acc * &p)
    }
}

impl From<i64> for MPoly {
    fn from(c: i64) -> Self {
        MPoly::constant(c)
    }
}

impl From<Var> for MPoly {
    fn from(v: Var) -> Self {
        MPoly::var(v)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_const = *m == Monomial::ONE;
            if !abs.is_one() || is_const {
                write!(f, "{abs}")?;
                if !is_const {
                    f.write_str("*")?;
                }
            }
            let mut first = true;
            for v in Var::ALL {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
struct TermJson {
    e: [u32; 3],
    c: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    vars: Vec<String>,
    terms: Vec<TermJson>,
}

impl Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            vars: Var::ALL.iter().map(|v| v.name().to_string()).collect(),
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| TermJson {
                    e: m.0,
                    c: c.to_string(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = PolyJson::deserialize(deserializer)?;
        MPoly::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<PolyJson> for MPoly {
    type Error = PolyError;

    fn try_from(raw: PolyJson) -> Result<Self, PolyError> {
        if raw.vars != ["X", "Y", "Z"] {
            return Err(PolyError::InvalidJson(format!(
                "expected vars [\"X\",\"Y\",\"Z\"], got {:?}",
                raw.vars
            )));
        }
        let mut terms = BTreeMap::new();
        for t in raw.terms {
            let c: BigInt =
                t.c.parse()
                    .map_err(|_| PolyError::InvalidJson(format!("bad coefficient {:?}", t.c)))?;
            if c.is_zero() {
                return Err(PolyError::InvalidJson("zero coefficient".into()));
            }
            if terms.insert(Monomial(t.e), c).is_some() {
                return Err(PolyError::InvalidJson(format!(
                    "duplicate exponent {:?}",
                    t.e
                )));
            }
        }
        Ok(MPoly { terms })
    }
}

// ---------------------------------------------------------------------------
// palindromic Laurent polynomials

/// `a_0 + Σ_{k≥1} a_k (X^k + X^{-k})`, stored as `(a_0, …, a_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPalindrome {
    half_coeffs: Vec<BigInt>,
}

impl LaurentPalindrome {
    pub fn new<C: Into<BigInt>>(half_coeffs: impl IntoIterator<Item = C>) -> Self {
        let mut half_coeffs: Vec<BigInt> = half_coeffs.into_iter().map(Into::into).collect();
        while half_coeffs.last().is_some_and(Zero::is_zero) {
            half_coeffs.pop();
        }
        Self { half_coeffs }
    }

    pub fn half_coeffs(&self) -> &[BigInt] {
        &self.half_coeffs
    }

    /// Half-degree `d`; zero for constants and for the zero value.
    pub fn half_degree(&self) -> usize {
        self.half_coeffs.len().saturating_sub(1)
    }

    /// Reads off a palindromic polynomial `g` of even degree `2d` in `v`:
    /// `X^{-d} g(X)` is a palindromic Laurent polynomial.
    pub fn from_palindromic(g: &MPoly, v: Var) -> Result<Self, PolyError> {
        if g.variables().iter().any(|&w| w != v) {
            return Err(PolyError::NotUnivariate);
        }
        let coeffs: Vec<BigInt> = g
            .coeffs_in(v)
            .into_iter()
            .map(|c| c.constant_term())
            .collect();
        if coeffs.is_empty() {
            return Ok(Self::default());
        }
        let n = coeffs.len() - 1;
        if n % 2 == 1 || (0..=n).any(|i| coeffs[i] != coeffs[n - i]) {
            return Err(PolyError::NotPalindromic);
        }
        Ok(Self::new(coeffs[n / 2..].iter().cloned()))
    }

    /// Rewrites in terms of `Z = X + 1/X` using `X^k + X^{-k} = p_k(Z)`.
    pub fn to_z_poly(&self) -> MPoly {
        let z = MPoly::var(Var::Z);
        let mut out = MPoly::zero();
        let (mut prev, mut cur) = (MPoly::constant(2), z.clone());
        for (k, a) in self.half_coeffs.iter().enumerate() {
            match k {
                0 => out += &MPoly::constant(a.clone()),
                1 => out += &cur.scale(a),
                _ => {
                    let next = &(&z * &cur) - &prev;
                    prev = std::mem::replace(&mut cur, next);
                    out += &cur.scale(a);
                }
            }
        }
        out
    }

    /// Inverse of [`to_z_poly`](Self::to_z_poly) for polynomials in `Z` alone.
    pub fn from_z_poly(p: &MPoly) -> Result<Self, PolyError> {
        if p.variables().iter().any(|&v| v != Var::Z) {
            return Err(PolyError::NotUnivariate);
        }
        let Some(d) = p.degree_in(Var::Z) else {
            return Ok(Self::default());
        };
        let basis = trace_basis_z(d as usize);
        let mut rest = p.clone();
        let mut half = vec![BigInt::zero(); d as usize + 1];
        for k in (0..=d as usize).rev() {
            let c = rest.coeff(&Monomial([0, 0, k as u32]));
            if k == 0 {
                half[0] = c;
                break;
            }
            // p_k is monic
            rest -= &basis[k].scale(&c);
            half[k] = c;
        }
        Ok(Self::new(half))
    }
}

/// `[2, Z, Z^2 - 2, …]`: `X^k + X^{-k}` as polynomials in `Z = X + 1/X`.
fn trace_basis_z(d: usize) -> Vec<MPoly> {
    let z = MPoly::var(Var::Z);
    let mut out = vec![MPoly::constant(2)];
    if d >= 1 {
        out.push(z.clone());
    }
    for k in 2..=d {
        let next = &(&z * &out[k - 1]) - &out[k - 2];
        out.push(next);
    }
    out
}
