//! The trace polynomials `p_n`, the half-cyclotomic polynomials `q_n` and the
//! cyclotomic polynomials `g_n`, together with exact checks of the identities
//! tying them together.
//!
//! All families are univariate in `Z`; use [`MPoly::rename`] to move them to
//! another variable.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_integer::Integer;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{bigint_to_f64, LaurentPalindrome, MPoly, PolyError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("recursive and cyclotomic constructions of q_{0} differ")]
    RouteDisagreement(u64),
    #[error("index {0} is out of range for this construction")]
    BadIndex(u64),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `p_n(v)`: `p_0 = 1`, `p_1 = v`, `p_2 = v^2 - 2`, `p_n = v p_{n-1} - p_{n-2}`.
pub fn trace_power_poly(n: usize, v: Var) -> MPoly {
    trace_power_table(n, v).pop().unwrap_or_else(MPoly::one)
}

/// `[p_0, …, p_n]` in `v`.
pub fn trace_power_table(n: usize, v: Var) -> Vec<MPoly> {
    let x = MPoly::var(v);
    let mut out = vec![MPoly::one()];
    if n >= 1 {
        out.push(x.clone());
    }
    if n >= 2 {
        out.push(&(&x * &x) - &MPoly::constant(2));
    }
    for k in 3..=n {
        let next = &(&x * &out[k - 1]) - &out[k - 2];
        out.push(next);
    }
    out
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Euler's totient by trial-division factorization.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut phi = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// Number of trace functions generating the trace ring of an `n`-generator
/// group: `n(n^2 + 5)/6`.
pub fn generator_count(n: u64) -> u64 {
    let n = n as u128;
    (n * (n * n + 5) / 6) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Recursive,
    ViaCyclotomic,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `p_n - 2 = q_1 ∏ q_d^2` (with an extra `q_2` for even `n`).
    PnFactorization,
    /// `Σ_{i≤s} p_i = ∏_{1≠d|2s+1} q_d`.
    SumPi,
    /// `Σ (-1)^i p_{s-i} = ∏_{1≠d|2s+1} q_d*`.
    AlternatingSum,
    /// `p_s + Σ (-1)^i β_i p_{s-i} = 0`, `β_i = Z` for odd `i`, `2` for even.
    BetaIdentity,
}

impl Identity {
    pub const ALL: [Identity; 4] = [
        Identity::PnFactorization,
        Identity::SumPi,
        Identity::AlternatingSum,
        Identity::BetaIdentity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::PnFactorization => "pn_factorization",
            Identity::SumPi => "sum_pi",
            Identity::AlternatingSum => "alternating_sum",
            Identity::BetaIdentity => "beta_identity",
        }
    }

    fn first_index(self) -> u64 {
        match self {
            Identity::BetaIdentity => 2,
            _ => 1,
        }
    }
}

/// Outcome of checking one identity over an index range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub identity: String,
    pub range: [u64; 2],
    pub passed: bool,
    pub first_failure: Option<u64>,
}

impl FamilyReport {
    pub fn new(identity: impl Into<String>, lo: u64, hi: u64, first_failure: Option<u64>) -> Self {
        Self {
            identity: identity.into(),
            range: [lo, hi],
            passed: first_failure.is_none(),
            first_failure,
        }
    }
}

/// Memoizing constructor for the three families.
///
/// Caches are write-once: an entry never changes after it is first computed.
/// Individual `q_n` can be overridden up front, which is how verification
/// failures are exercised in tests.
#[derive(Debug, Clone, Default)]
pub struct Families {
    p: Vec<MPoly>,
    q: BTreeMap<u64, MPoly>,
    g: BTreeMap<u64, MPoly>,
}

impl Families {
    pub fn new() -> Self {
        Self::default()
    }

    /// Families whose `q_n` for the given indices are fixed to the supplied
    /// polynomials instead of being computed.
    pub fn with_q_overrides(overrides: impl IntoIterator<Item = (u64, MPoly)>) -> Self {
        Self {
            q: overrides.into_iter().collect(),
            ..Self::default()
        }
    }

    /// `p_n(Z)`.
    pub fn p(&mut self, n: usize) -> &MPoly {
        if self.p.len() <= n {
            self.p = trace_power_table(n.max(2 * self.p.len()), Var::Z);
        }
        &self.p[n]
    }

    /// The `n`-th cyclotomic polynomial in `Z`, from `Z^n - 1` divided by
    /// `g_d` for every proper divisor `d`.
    pub fn cyclotomic(&mut self, n: u64) -> Result<MPoly, FamilyError> {
        if n == 0 {
            return Err(FamilyError::BadIndex(n));
        }
        if let Some(g) = self.g.get(&n) {
            return Ok(g.clone());
        }
        let mut coeffs = vec![0i64; n as usize + 1];
        coeffs[0] = -1;
        coeffs[n as usize] = 1;
        let mut acc = MPoly::univariate(Var::Z, &coeffs);
        for d in divisors(n).into_iter().filter(|&d| d < n) {
            let gd = self.cyclotomic(d)?;
            acc = acc.exact_div(&gd, Var::Z)?;
        }
        self.g.insert(n, acc.clone());
        Ok(acc)
    }

    /// `q_n` by the recursive construction (memoized).
    pub fn q(&mut self, n: u64) -> Result<MPoly, FamilyError> {
        if let Some(q) = self.q.get(&n) {
            return Ok(q.clone());
        }
        let q = self.q_recursive(n)?;
        self.q.insert(n, q.clone());
        Ok(q)
    }

    pub fn half_cyclotomic(&mut self, n: u64, route: Route) -> Result<MPoly, FamilyError> {
        match route {
            Route::Recursive => self.q(n),
            Route::ViaCyclotomic => self.q_via_cyclotomic(n),
            Route::Both => {
                let a = self.q(n)?;
                let b = self.q_via_cyclotomic(n)?;
                if a != b {
                    return Err(FamilyError::RouteDisagreement(n));
                }
                Ok(a)
            }
        }
    }

    fn q_recursive(&mut self, n: u64) -> Result<MPoly, FamilyError> {
        match n {
            0 => return Err(FamilyError::BadIndex(0)),
            1 => return Ok(MPoly::univariate(Var::Z, &[-2, 1])),
            2 => return Ok(MPoly::univariate(Var::Z, &[2, 1])),
            _ => {}
        }
        let mut acc = rhs_palindrome(n).to_z_poly();
        let even = n.is_multiple_of(2);
        for d in divisors(n) {
            if d == 1 || d == n || (even && d == 2) {
                continue;
            }
            let qd = self.q(d)?;
            acc = acc.exact_div(&qd, Var::Z)?;
        }
        Ok(acc)
    }

    /// `q_n` from `g_n(X) = X^{φ(n)/2} q_n(X + 1/X)`, for `n > 2`.
    pub fn q_via_cyclotomic(&mut self, n: u64) -> Result<MPoly, FamilyError> {
        if n <= 2 {
            return Err(FamilyError::BadIndex(n));
        }
        let g = self.cyclotomic(n)?;
        Ok(LaurentPalindrome::from_palindromic(&g, Var::Z)?.to_z_poly())
    }

    /// Left and right sides of `identity` at index `n`.
    pub fn identity_sides(
        &mut self,
        identity: Identity,
        n: u64,
    ) -> Result<(MPoly, MPoly), FamilyError> {
        let n_us = n as usize;
        match identity {
            Identity::PnFactorization => {
                let lhs = self.p(n_us) - &MPoly::constant(2);
                let even = n.is_multiple_of(2);
                let mut rhs = self.q(1)?;
                if even {
                    rhs = &rhs * &self.q(2)?;
                }
                for d in divisors(n) {
                    if d == 1 || (even && d == 2) {
                        continue;
                    }
                    let qd = self.q(d)?;
                    rhs = &rhs * &(&qd * &qd);
                }
                Ok((lhs, rhs))
            }
            Identity::SumPi => {
                let lhs = (0..=n_us).map(|i| self.p(i).clone()).sum();
                let mut rhs = MPoly::one();
                for d in divisors(2 * n + 1).into_iter().skip(1) {
                    rhs = &rhs * &self.q(d)?;
                }
                Ok((lhs, rhs))
            }
            Identity::AlternatingSum => {
                let lhs = self.alternating_sum(n_us);
                let mut rhs = MPoly::one();
                for d in divisors(2 * n + 1).into_iter().skip(1) {
                    rhs = &rhs * &self.q(d)?.star()?;
                }
                Ok((lhs, rhs))
            }
            Identity::BetaIdentity => {
                let z = MPoly::var(Var::Z);
                let two = MPoly::constant(2);
                let mut lhs = self.p(n_us).clone();
                for i in 1..=n_us {
                    let beta = if i % 2 == 1 { &z } else { &two };
                    let term = beta * self.p(n_us - i);
                    if i % 2 == 1 {
                        lhs -= &term;
                    } else {
                        lhs += &term;
                    }
                }
                Ok((lhs, MPoly::zero()))
            }
        }
    }

    /// `Σ_{i=0}^{s} (-1)^i p_{s-i}(Z)`.
    pub fn alternating_sum(&mut self, s: usize) -> MPoly {
        let mut acc = MPoly::zero();
        for i in 0..=s {
            let p = self.p(s - i).clone();
            if i % 2 == 0 {
                acc += &p;
            } else {
                acc -= &p;
            }
        }
        acc
    }

    /// Checks `identity` by exact comparison at every index from its first
    /// valid index up to `limit`.
    pub fn verify_family_identity(&mut self, identity: Identity, limit: u64) -> FamilyReport {
        let lo = identity.first_index();
        let first_failure = (lo..=limit).find(|&n| match self.identity_sides(identity, n) {
            Ok((lhs, rhs)) => lhs != rhs,
            Err(_) => true,
        });
        FamilyReport::new(identity.name(), lo, limit, first_failure)
    }

    /// Recursive vs cyclotomic `q_n` for `3 ≤ n ≤ limit`, including the degree
    /// `φ(n)/2`.
    pub fn verify_q_routes(&mut self, limit: u64) -> FamilyReport {
        let first_failure = (3..=limit).find(|&n| match self.half_cyclotomic(n, Route::Both) {
            Ok(q) => q.degree_in(Var::Z) != Some((euler_phi(n) / 2) as u32),
            Err(_) => true,
        });
        FamilyReport::new("q_route_agreement", 3, limit, first_failure)
    }
}

impl Families {
    /// Largest `|q_r(2cos(2πk/r))| / max|coeff|` over `k` coprime to `r`,
    /// evaluated in extended precision.
    pub fn max_root_residual(&mut self, r: u64) -> Result<f64, FamilyError> {
        let q = self.q(r)?;
        let norm = bigint_to_f64(&q.max_abs_coeff());
        let mut worst: f64 = 0.0;
        for k in (1..=r).filter(|&k| k.gcd(&r) == 1) {
            let x = 2.0 * (2.0 * PI * k as f64 / r as f64).cos();
            worst = worst.max(q.eval_real_precise(x)?.abs() / norm);
        }
        Ok(worst)
    }

    /// The roots of `q_r` are `2cos(2πk/r)` for `k` coprime to `r`, checked for
    /// `1 ≤ r ≤ limit` with scaled tolerance `tol`.
    pub fn verify_q_roots(&mut self, limit: u64, tol: f64) -> FamilyReport {
        let first_failure = (1..=limit).find(|&r| match self.max_root_residual(r) {
            Ok(res) => res.is_nan() || res > tol,
            Err(_) => true,
        });
        FamilyReport::new("q_roots", 1, limit, first_failure)
    }
}

/// Right-hand side of the defining product for `q_n`, `n ≥ 3`:
/// `(X^{n-1} + … + 1) / X^{(n-1)/2}` for odd `n`,
/// `(X^{n-2} + X^{n-4} + … + 1) / X^{(n-2)/2}` for even `n`.
fn rhs_palindrome(n: u64) -> LaurentPalindrome {
    if n % 2 == 1 {
        let d = ((n - 1) / 2) as usize;
        LaurentPalindrome::new(vec![1; d + 1])
    } else {
        // only exponents of the same parity as (n-2)/2 occur
        let d = ((n - 2) / 2) as usize;
        LaurentPalindrome::new((0..=d).map(|k| i32::from((k + d).is_multiple_of(2))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(coeffs: &[i64]) -> MPoly {
        MPoly::univariate(Var::Z, coeffs)
    }

    #[test]
    fn p_examples() {
        assert_eq!(trace_power_poly(0, Var::Z), MPoly::one());
        assert_eq!(trace_power_poly(1, Var::X), MPoly::var(Var::X));
        assert_eq!(trace_power_poly(2, Var::Z), z(&[-2, 0, 1]));
        assert_eq!(trace_power_poly(4, Var::Z), z(&[2, 0, -4, 0, 1]));
        let mut f = Families::new();
        assert_eq!(f.p(3), &z(&[0, -3, 0, 1]));
        assert_eq!(f.p(4), &z(&[2, 0, -4, 0, 1]));
    }

    #[test]
    fn p_parity_and_anchor_values() {
        let mut f = Families::new();
        for s in 1..60usize {
            let p = f.p(s).clone();
            assert!(p.terms().all(|(m, _)| (m.0[2] as usize) % 2 == s % 2));
            assert_eq!(p.degree_in(Var::Z), Some(s as u32));
            let at = |x: i64| p.substitute(Var::Z, &MPoly::constant(x)).constant_term();
            assert_eq!(at(2), 2.into());
            assert_eq!(at(-2), if s % 2 == 0 { 2.into() } else { (-2).into() });
        }
    }

    #[test]
    fn number_theory_helpers() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(100), 40);
        assert_eq!(euler_phi(97), 96);
        for n in 1..200u64 {
            let brute = (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count() as u64;
            assert_eq!(euler_phi(n), brute);
        }
    }

    #[test]
    fn generator_count_examples() {
        assert_eq!(generator_count(1), 1);
        assert_eq!(generator_count(2), 3);
        assert_eq!(generator_count(3), 7);
        for n in 1..1000 {
            assert_eq!(n * (n * n + 5) % 6, 0);
        }
    }

    #[test]
    fn cyclotomic_examples() {
        let mut f = Families::new();
        assert_eq!(f.cyclotomic(1), Ok(z(&[-1, 1])));
        assert_eq!(f.cyclotomic(2), Ok(z(&[1, 1])));
        assert_eq!(f.cyclotomic(6), Ok(z(&[1, -1, 1])));
        assert_eq!(f.cyclotomic(12), Ok(z(&[1, 0, -1, 0, 1])));
        assert_eq!(f.cyclotomic(0), Err(FamilyError::BadIndex(0)));
        // first cyclotomic polynomial with a coefficient outside {-1, 0, 1}
        let g105 = f.cyclotomic(105).unwrap();
        assert_eq!(g105.coeff(&crate::Monomial([0, 0, 7])), (-2).into());
    }

    #[test]
    fn q_examples() {
        let mut f = Families::new();
        assert_eq!(f.q(1), Ok(z(&[-2, 1])));
        assert_eq!(f.q(2), Ok(z(&[2, 1])));
        assert_eq!(f.q(3), Ok(z(&[1, 1])));
        assert_eq!(f.q(4), Ok(z(&[0, 1])));
        assert_eq!(f.q(5), Ok(z(&[-1, 1, 1])));
        assert_eq!(f.q(6), Ok(z(&[-1, 1])));
        assert_eq!(f.q(7), Ok(z(&[-1, -2, 1, 1])));
        assert_eq!(f.q(9), Ok(z(&[1, -3, 0, 1])));
        assert_eq!(f.half_cyclotomic(9, Route::Both), Ok(z(&[1, -3, 0, 1])));
        assert_eq!(
            f.half_cyclotomic(2, Route::ViaCyclotomic),
            Err(FamilyError::BadIndex(2))
        );
    }

    #[test]
    fn even_rhs_palindrome_parity() {
        assert_eq!(rhs_palindrome(4), LaurentPalindrome::new([0, 1]));
        assert_eq!(rhs_palindrome(6), LaurentPalindrome::new([1, 0, 1]));
        assert_eq!(rhs_palindrome(8), LaurentPalindrome::new([0, 1, 0, 1]));
    }

    #[test]
    fn route_disagreement_detected() {
        let mut f = Families::with_q_overrides([(9, z(&[1, -3, 0, 2]))]);
        assert_eq!(
            f.half_cyclotomic(9, Route::Both),
            Err(FamilyError::RouteDisagreement(9))
        );
    }

    #[test]
    fn identity_spot_checks() {
        let mut f = Families::new();
        let (lhs, rhs) = f.identity_sides(Identity::PnFactorization, 9).unwrap();
        let expected = z(&[-2, 1]) * z(&[1, 1]).pow(2) * z(&[1, -3, 0, 1]).pow(2);
        assert_eq!(lhs, expected);
        assert_eq!(rhs, expected);
        let (lhs, rhs) = f.identity_sides(Identity::AlternatingSum, 1).unwrap();
        assert_eq!(lhs, z(&[-1, 1]));
        assert_eq!(rhs, z(&[-1, 1]));
        let (lhs, _) = f.identity_sides(Identity::BetaIdentity, 2).unwrap();
        assert!(lhs.is_zero());
    }

    #[test]
    fn small_identity_reports() {
        let mut f = Families::new();
        for id in Identity::ALL {
            let r = f.verify_family_identity(id, 30);
            assert!(r.passed, "{r:?}");
        }
        assert!(f.verify_q_routes(60).passed);
        assert!(f.verify_q_roots(40, 1e-9).passed);
    }

    #[test]
    fn corrupted_q_is_reported() {
        let mut f = Families::with_q_overrides([(5, z(&[-1, 2, 1]))]);
        let r = f.verify_family_identity(Identity::PnFactorization, 12);
        assert_eq!(r.first_failure, Some(5));
        assert!(!r.passed);
        assert_eq!(f.verify_q_roots(12, 1e-9).first_failure, Some(5));
    }

    #[test]
    fn report_json() {
        let r = FamilyReport::new("sum_pi", 1, 10, None);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"identity":"sum_pi","range":[1,10],"passed":true,"first_failure":null}"#
        );
    }
}
