//! Floating-point checks with explicit SL(2,C) representations.
//!
//! Representations of the torus knot group `⟨A, B | A^m = B^2⟩` are sampled and
//! pushed to `H_m` through `x = B⁻¹A^{(m+1)/2}`, `y = A^{-(m-1)/2}B`.
//! Matrix residuals are relative Frobenius distances,
//! `‖M - N‖ / max(1, ‖N‖)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::{Mul, Neg, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{Point, Var};
use crate::trace::{check_odd_m, TraceError};
use crate::variety::{scaled_residual, CurveDescription};
use crate::word::{FreeWord, Generator};

/// Determinant tolerance for matrices admitted as representation images.
pub const DET_TOLERANCE: f64 = 1e-10;

/// Smallest `|b|` accepted for the off-diagonal entry of a sampled `B`.
const MIN_OFF_DIAGONAL: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("no image for generator {0:?}")]
    UnknownGenerator(Symbol),
    #[error("could not draw a well-conditioned sample")]
    DegenerateSample,
    #[error("representation violates its relation (residual {0:e})")]
    RelationViolated(f64),
    #[error(transparent)]
    NotOddM(#[from] TraceError),
}

/// 2×2 complex matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mat2 {
    pub fn new(
        a: impl Into<Complex64>,
        b: impl Into<Complex64>,
        c: impl Into<Complex64>,
        d: impl Into<Complex64>,
    ) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Self::diag(1.0.into(), 1.0.into())
    }

    pub fn diag(p: Complex64, q: Complex64) -> Self {
        Self::new(p, 0.0, 0.0, q)
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Inverse of a unit-determinant matrix, via the adjugate.
    pub fn inv(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    /// `self^k` by binary exponentiation; negative `k` uses [`inv`](Self::inv).
    pub fn pow(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.inv() } else { *self };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    /// `‖self - target‖ / max(1, ‖target‖)`.
    pub fn rel_dist(&self, target: &Mat2) -> f64 {
        (*self - *target).norm() / target.norm().max(1.0)
    }

    pub fn is_unimodular(&self) -> bool {
        (self.det() - 1.0).norm() <= DET_TOLERANCE
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Symbol {
    /// `H_m` generators.
    X,
    Y,
    /// Torus knot group generators.
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Abelian,
    IrreducibleCandidate,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Abelian => "abelian",
            Kind::IrreducibleCandidate => "irreducible_candidate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub images: BTreeMap<Symbol, Mat2>,
    pub kind: Kind,
    pub seed: u64,
}

impl Representation {
    /// Representation of the torus knot group with images `A`, `B`, together
    /// with the induced images of the `H_m` generators.
    pub fn from_torus_images(m: u64, a: Mat2, b: Mat2, kind: Kind, seed: u64) -> Self {
        let (x, y) = phi(m, &a, &b);
        let images = BTreeMap::from([
            (Symbol::A, a),
            (Symbol::B, b),
            (Symbol::X, x),
            (Symbol::Y, y),
        ]);
        Self { images, kind, seed }
    }

    /// Diagonal representation `A = diag(u², u⁻²)`, `B = diag(u^m, u^{-m})`.
    pub fn abelian(m: u64, u: Complex64, seed: u64) -> Self {
        let a = Mat2::diag(u.powi(2), u.powi(-2));
        let b = Mat2::diag(u.powi(m as i32), u.powi(-(m as i32)));
        Self::from_torus_images(m, a, b, Kind::Abelian, seed)
    }

    pub fn image(&self, s: Symbol) -> Result<Mat2, NumericError> {
        self.images
            .get(&s)
            .copied()
            .ok_or(NumericError::UnknownGenerator(s))
    }
}

/// `(B⁻¹A^{(m+1)/2}, A^{-(m-1)/2}B)`.
pub fn phi(m: u64, a: &Mat2, b: &Mat2) -> (Mat2, Mat2) {
    let half = ((m - 1) / 2) as i64;
    (b.inv() * a.pow(half + 1), a.pow(-half) * *b)
}

/// `(yx, yxy…y)` with the second word of length `m`.
pub fn psi(m: u64, x: &Mat2, y: &Mat2) -> (Mat2, Mat2) {
    let a = *y * *x;
    (a, alternating_product(y, x, m as usize))
}

/// `g h g h …` with `len` factors.
fn alternating_product(g: &Mat2, h: &Mat2, len: usize) -> Mat2 {
    let mut acc = Mat2::identity();
    for i in 0..len {
        acc = acc * if i % 2 == 0 { *g } else { *h };
    }
    acc
}

/// Product of the images of the letters of `w`.
pub fn eval_word(rep: &Representation, w: &FreeWord) -> Result<Mat2, NumericError> {
    let mut acc = Mat2::identity();
    for l in w.letters() {
        let s = match l.generator {
            Generator::X => Symbol::X,
            Generator::Y => Symbol::Y,
        };
        let m = rep.image(s)?;
        acc = acc * if l.inverse { m.inv() } else { m };
    }
    Ok(acc)
}

/// `p_n(t)` by the three-term recurrence.
pub fn trace_power_value(n: usize, t: Complex64) -> Complex64 {
    match n {
        0 => 1.0.into(),
        1 => t,
        _ => {
            let (mut prev, mut cur) = (t, t * t - 2.0);
            for _ in 2..n {
                let next = t * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `|p_n(tr M) - tr(M^n)| / max(1, |tr(M^n)|)`.
pub fn power_trace_check(m: &Mat2, n: usize) -> f64 {
    let exact = m.pow(n as i64).trace();
    (trace_power_value(n, m.trace()) - exact).norm() / exact.norm().max(1.0)
}

fn unit_box(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// Random unit-determinant matrix with entries of moderate size.
pub fn random_sl2(rng: &mut impl Rng) -> Mat2 {
    loop {
        let a = unit_box(rng);
        if a.norm() < 0.25 {
            continue;
        }
        let b = unit_box(rng);
        let c = unit_box(rng);
        let d = (1.0 + b * c) / a;
        return Mat2::new(a, b, c, d);
    }
}

/// Samples a representation of the torus knot group for odd `m > 1`.
///
/// * `Abelian`: `u = e^{t + iθ}` with `θ` uniform and `t ∈ [-1/4, 1/4]`,
///   see [`Representation::abelian`].
/// * `IrreducibleCandidate`: `A = diag(λ, λ⁻¹)` with `λ = e^{iπ(2j+1)/m}`,
///   `j ≠ (m-1)/2`, so `A^m = -I`; `B = [[a, b], [c, -a]]` with
///   `c = -(1+a²)/b`, so `B² = -I`.
pub fn sample_representation(
    m: u64,
    kind: Kind,
    seed: u64,
) -> Result<Representation, NumericError> {
    check_odd_m(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        Kind::Abelian => {
            let theta = rng.gen_range(0.0..2.0 * PI);
            let t = rng.gen_range(-0.25..=0.25);
            Ok(Representation::abelian(
                m,
                Complex64::from_polar(f64::exp(t), theta),
                seed,
            ))
        }
        Kind::IrreducibleCandidate => {
            let central = (m - 1) / 2;
            let j = loop {
                let j = rng.gen_range(0..m);
                if j != central {
                    break j;
                }
            };
            let lambda = Complex64::from_polar(1.0, PI * (2 * j + 1) as f64 / m as f64);
            let a_mat = Mat2::diag(lambda, lambda.inv());
            for _ in 0..64 {
                let a = unit_box(&mut rng);
                let b = unit_box(&mut rng);
                if b.norm() < MIN_OFF_DIAGONAL {
                    continue;
                }
                let c = -(1.0 + a * a) / b;
                let b_mat = Mat2::new(a, b, c, -a);
                return Ok(Representation::from_torus_images(
                    m, a_mat, b_mat, kind, seed,
                ));
            }
            Err(NumericError::DegenerateSample)
        }
    }
}

/// Residuals of the isomorphism between the torus knot group and `H_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToroReport {
    /// `xyx…x` vs `yxy…y` (length `m`) on the `H_m` images.
    pub relation: f64,
    /// `ψ(φ(A)), ψ(φ(B))` vs `A, B`.
    pub psi_phi: f64,
    /// `φ(ψ(x)), φ(ψ(y))` vs `x, y`.
    pub phi_psi: f64,
    pub passed: bool,
}

fn torus_relation_residual(m: u64, rep: &Representation) -> Result<f64, NumericError> {
    let a = rep.image(Symbol::A)?;
    let b = rep.image(Symbol::B)?;
    Ok(a.pow(m as i64).rel_dist(&b.pow(2)))
}

fn h_m_relation_residual(m: u64, x: &Mat2, y: &Mat2) -> f64 {
    let m = m as usize;
    alternating_product(x, y, m).rel_dist(&alternating_product(y, x, m))
}

pub fn check_toro_isomorphism(
    m: u64,
    rep: &Representation,
    tol: f64,
) -> Result<ToroReport, NumericError> {
    check_odd_m(m)?;
    let torus = torus_relation_residual(m, rep)?;
    if torus.is_nan() || torus > tol {
        return Err(NumericError::RelationViolated(torus));
    }
    let a = rep.image(Symbol::A)?;
    let b = rep.image(Symbol::B)?;
    let (x, y) = phi(m, &a, &b);
    let relation = h_m_relation_residual(m, &x, &y);
    let (a2, b2) = psi(m, &x, &y);
    let psi_phi = a2.rel_dist(&a).max(b2.rel_dist(&b));
    let (x2, y2) = phi(m, &a2, &b2);
    let phi_psi = x2.rel_dist(&x).max(y2.rel_dist(&y));
    Ok(ToroReport {
        relation,
        psi_phi,
        phi_psi,
        passed: relation <= tol && psi_phi <= tol && phi_psi <= tol,
    })
}

/// Character point of a sampled representation checked against the curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub m: u64,
    pub kind: Kind,
    pub seed: u64,
    #[serde(rename = "X", with = "complex_pair")]
    pub x: Complex64,
    #[serde(rename = "Z", with = "complex_pair")]
    pub z: Complex64,
    pub residual_defining: f64,
    pub residual_relation: f64,
    /// Line level closest to `Z`, for irreducible candidates.
    pub nearest_line: Option<f64>,
    /// `|Z - (X² - 2)|` for abelian samples, `|Z - nearest_line|` otherwise.
    #[serde(skip)]
    pub component_distance: f64,
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [crate::variety::sig12(z.re), crate::variety::sig12(z.im)].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

pub fn membership_check(
    curve: &CurveDescription,
    rep: &Representation,
    tol: f64,
) -> Result<MembershipReport, NumericError> {
    let m = curve.m;
    let x_img = rep.image(Symbol::X)?;
    let y_img = rep.image(Symbol::Y)?;
    let residual_relation = h_m_relation_residual(m, &x_img, &y_img);
    if residual_relation.is_nan() || residual_relation > tol {
        return Err(NumericError::RelationViolated(residual_relation));
    }
    let x = x_img.trace();
    let z = (x_img * y_img).trace();
    let at = Point::new().with(Var::X, x).with(Var::Z, z);
    let value = curve
        .defining_poly
        .eval_complex(&at)
        .expect("defining polynomial only involves X and Z");
    let residual_defining = scaled_residual(&curve.defining_poly, value);
    let (nearest_line, component_distance) = match rep.kind {
        Kind::Abelian => (None, (z - (x * x - 2.0)).norm()),
        Kind::IrreducibleCandidate => {
            let (level, dist) = curve
                .line_levels
                .iter()
                .map(|&l| (l, (z - l).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("at least one line level");
            (Some(level), dist)
        }
    };
    Ok(MembershipReport {
        m,
        kind: rep.kind,
        seed: rep.seed,
        x,
        z,
        residual_defining,
        residual_relation,
        nearest_line,
        component_distance,
    })
}

/// Seeds for a batch: `seed + i`.
pub fn batch_seeds(seed: u64, count: usize) -> impl Iterator<Item = u64> {
    (0..count as u64).map(move |i| seed.wrapping_add(i))
}

/// `x ↦ M` as a one-generator representation.
pub fn single(m: Mat2) -> Representation {
    Representation {
        images: BTreeMap::from([(Symbol::X, m)]),
        kind: Kind::Abelian,
        seed: 0,
    }
}
