//! The defining polynomial of the character variety of `H_m`, `m > 1` odd.
//!
//! In the `(X, Z)` plane (after eliminating `Y = X`) the variety is cut out by
//! `f_s(X, Z)` with `s = (m-1)/2`, which factors as
//! `(X^2 - Z - 2) ∏_{1≠d|m} q_d*(Z)`: the parabola `Z = X^2 - 2` and
//! `(m-1)/2` horizontal lines `Z = -2 cos(2πk/m)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{divisors, Families, FamilyError, FamilyReport};
use crate::poly::{bigint_to_f64, MPoly, Point, PolyError, Var};
use crate::trace::{check_odd_m, TraceEngine, TraceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarietyError {
    #[error(transparent)]
    NotOddM(#[from] TraceError),
    #[error("need x_min < x_max and at least 2 samples")]
    BadRange,
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `h(X, Z) = X^2 - Z`.
fn h() -> MPoly {
    let x = MPoly::var(Var::X);
    &(&x * &x) - &MPoly::var(Var::Z)
}

/// `k(X) = X^2 - 2`.
fn k() -> MPoly {
    let x = MPoly::var(Var::X);
    &(&x * &x) - &MPoly::constant(2)
}

/// `X^2 - Z - 2`, whose zero set is the parabola component.
pub fn parabola_factor() -> MPoly {
    &h() - &MPoly::constant(2)
}

/// `f_s(X, Z) = p_s(Z)(h - 1) + Σ_{i=1}^{s} (-1)^i p_{s-i}(Z) α_i`, where
/// `α_i = h` for even `i` and `k` for odd `i`.
pub fn f_direct(families: &mut Families, s: usize) -> MPoly {
    let h = h();
    let k = k();
    let mut acc = families.p(s) * &(&h - &MPoly::one());
    for i in 1..=s {
        let alpha = if i % 2 == 0 { &h } else { &k };
        let term = families.p(s - i) * alpha;
        if i % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}

/// `∏_{1≠d|m} q_d*(Z)`.
pub fn line_factor(families: &mut Families, m: u64) -> Result<MPoly, VarietyError> {
    check_odd_m(m)?;
    let mut acc = MPoly::one();
    for d in divisors(m).into_iter().skip(1) {
        acc = &acc * &families.q(d)?.star()?;
    }
    Ok(acc)
}

/// `(X^2 - Z - 2) ∏_{1≠d|m} q_d*(Z)`.
pub fn closed_form(families: &mut Families, m: u64) -> Result<MPoly, VarietyError> {
    Ok(&parabola_factor() * &line_factor(families, m)?)
}

/// `{-2 cos(2πk/m) : 1 ≤ k ≤ (m-1)/2}`, ascending.
pub fn line_levels(m: u64) -> Result<Vec<f64>, VarietyError> {
    check_odd_m(m)?;
    let mut levels: Vec<f64> = (1..=(m - 1) / 2)
        .map(|k| -2.0 * (2.0 * PI * k as f64 / m as f64).cos())
        .collect();
    levels.sort_by(f64::total_cmp);
    Ok(levels)
}

/// `|value| / max |coefficient of p|`.
pub fn scaled_residual(p: &MPoly, value: Complex64) -> f64 {
    let norm = bigint_to_f64(&p.max_abs_coeff());
    if norm == 0.0 {
        value.norm()
    } else {
        value.norm() / norm
    }
}

/// Results of the three exact checks for one `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyReport {
    pub m: u64,
    /// `f_{(m-1)/2} = (X^2 - Z - 2) ∏ q_d*`.
    pub closed_form: bool,
    /// `f(X, X, Z) = f_{(m-1)/2}` for the trace-reduced `f`.
    pub trace: Option<bool>,
    /// `f_{(m-1)/2}` divides `p0(X, X, Z)`.
    pub divisibility: Option<bool>,
}

impl VarietyReport {
    pub fn passed(&self) -> bool {
        self.closed_form && self.trace != Some(false) && self.divisibility != Some(false)
    }
}

/// Which of the exact variety checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarietyChecks {
    pub trace: bool,
    pub divisibility: bool,
}

impl VarietyChecks {
    pub const ALL: VarietyChecks = VarietyChecks {
        trace: true,
        divisibility: true,
    };
}

pub fn verify_variety(
    families: &mut Families,
    engine: &mut TraceEngine,
    m: u64,
    checks: VarietyChecks,
) -> Result<VarietyReport, VarietyError> {
    check_odd_m(m)?;
    let s = ((m - 1) / 2) as usize;
    let direct = f_direct(families, s);
    let closed_form = match closed_form(families, m) {
        Ok(c) => c == direct,
        Err(VarietyError::Family(_)) | Err(VarietyError::Poly(_)) => false,
        Err(e) => return Err(e),
    };
    let trace = checks.trace.then(|| {
        let f = engine.f_trace(m).expect("m checked above");
        f.substitute(Var::Y, &MPoly::var(Var::X)) == direct
    });
    let divisibility = checks.divisibility.then(|| {
        let p0 = engine.h_m_presentation(m).expect("m checked above").p0;
        let p0_diag = p0.substitute(Var::Y, &MPoly::var(Var::X));
        p0_diag.exact_div(&direct, Var::X).is_ok()
    });
    Ok(VarietyReport {
        m,
        closed_form,
        trace,
        divisibility,
    })
}

/// Runs [`verify_variety`] over odd `m` in `[3, max_m]` and summarizes each
/// check as a [`FamilyReport`]. Trace and divisibility checks only run up to
/// their own limits.
pub fn verify_variety_range(
    families: &mut Families,
    engine: &mut TraceEngine,
    max_m: u64,
    max_trace_m: u64,
    max_div_m: u64,
) -> Vec<FamilyReport> {
    let mut first = [None; 3];
    for m in (3..=max_m).step_by(2) {
        let checks = VarietyChecks {
            trace: m <= max_trace_m,
            divisibility: m <= max_div_m,
        };
        let r = verify_variety(families, engine, m, checks).expect("odd m");
        let outcomes = [Some(r.closed_form), r.trace, r.divisibility];
        for (slot, ok) in first.iter_mut().zip(outcomes) {
            if slot.is_none() && ok == Some(false) {
                *slot = Some(m);
            }
        }
    }
    vec![
        FamilyReport::new("variety_closed_form", 3, max_m, first[0]),
        FamilyReport::new("variety_trace", 3, max_m.min(max_trace_m), first[1]),
        FamilyReport::new("variety_divisibility", 3, max_m.min(max_div_m), first[2]),
    ]
}

/// For odd `m` in `[3, max_m]`: `(m-1)/2` distinct line levels, each a root
/// of the line factor up to the scaled tolerance `tol`.
pub fn verify_line_structure(families: &mut Families, max_m: u64, tol: f64) -> FamilyReport {
    let ok = |families: &mut Families, m: u64| -> Result<bool, VarietyError> {
        let curve = CurveDescription::new(families, m)?;
        let distinct = curve.line_levels.windows(2).all(|w| w[0] < w[1]);
        let count = curve.line_levels.len() as u64 == (m - 1) / 2;
        Ok(distinct && count && curve.max_level_residual()? <= tol)
    };
    let first_failure = (3..=max_m)
        .step_by(2)
        .find(|&m| !ok(families, m).unwrap_or(false));
    FamilyReport::new("line_structure", 3, max_m, first_failure)
}

/// Parabola plus horizontal lines.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveDescription {
    pub m: u64,
    pub has_parabola: bool,
    pub line_levels: Vec<f64>,
    pub line_factor: MPoly,
    /// Expanded `(X^2 - Z - 2) · line_factor`.
    pub defining_poly: MPoly,
}

impl CurveDescription {
    pub fn new(families: &mut Families, m: u64) -> Result<Self, VarietyError> {
        let line_factor = line_factor(families, m)?;
        Ok(Self {
            m,
            has_parabola: true,
            line_levels: line_levels(m)?,
            defining_poly: &parabola_factor() * &line_factor,
            line_factor,
        })
    }

    /// Value of the defining polynomial at `(x, z)`, evaluated factor by factor.
    pub fn eval(&self, x: Complex64, z: Complex64) -> Result<Complex64, PolyError> {
        let line = self
            .line_factor
            .eval_complex(&Point::new().with(Var::Z, z))?;
        Ok((x * x - z - 2.0) * line)
    }

    /// Largest `|line_factor(ℓ)| / max|coeff|` over the line levels, using
    /// extended-precision evaluation.
    pub fn max_level_residual(&self) -> Result<f64, PolyError> {
        let norm = bigint_to_f64(&self.line_factor.max_abs_coeff());
        let mut worst: f64 = 0.0;
        for &l in &self.line_levels {
            worst = worst.max(self.line_factor.eval_real_precise(l)?.abs() / norm);
        }
        Ok(worst)
    }
}

#[derive(Serialize)]
struct CurveJson<'a> {
    m: u64,
    parabola: &'static str,
    lines: Vec<f64>,
    defining_poly: &'a MPoly,
}

impl Serialize for CurveDescription {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CurveJson {
            m: self.m,
            parabola: "Z=X^2-2",
            lines: self.line_levels.iter().map(|&l| sig12(l)).collect(),
            defining_poly: &self.defining_poly,
        }
        .serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Parabola,
    Line,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlotPoint {
    pub component: Component,
    pub x: f64,
    pub z: f64,
}

/// Parabola samples and the endpoints of each horizontal line segment over
/// `[x_min, x_max]`.
pub fn plot_data(
    m: u64,
    x_min: f64,
    x_max: f64,
    samples: usize,
) -> Result<Vec<PlotPoint>, VarietyError> {
    check_odd_m(m)?;
    if !x_min.is_finite() || !x_max.is_finite() || x_min >= x_max || samples < 2 {
        return Err(VarietyError::BadRange);
    }
    let step = (x_max - x_min) / (samples - 1) as f64;
    let mut out: Vec<PlotPoint> = (0..samples)
        .map(|i| {
            let x = if i + 1 == samples {
                x_max
            } else {
                x_min + step * i as f64
            };
            PlotPoint {
                component: Component::Parabola,
                x,
                z: x * x - 2.0,
            }
        })
        .collect();
    for z in line_levels(m)? {
        for x in [x_min, x_max] {
            out.push(PlotPoint {
                component: Component::Line,
                x,
                z,
            });
        }
    }
    Ok(out)
}

/// CSV with header `component,x,z`; numbers carry 12 significant digits.
pub fn plot_csv(points: &[PlotPoint]) -> String {
    let mut out = String::from("component,x,z\n");
    for p in points {
        let name = match p.component {
            Component::Parabola => "parabola",
            Component::Line => "line",
        };
        let _ = writeln!(out, "{name},{},{}", sig12(p.x), sig12(p.z));
    }
    out
}

/// Rounds to 12 significant digits.
pub fn sig12(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xz(terms: &[(i64, u32, u32)]) -> MPoly {
        terms
            .iter()
            .map(|&(c, ex, ez)| MPoly::monomial(c, crate::Monomial([ex, 0, ez])))
            .sum()
    }

    fn z(coeffs: &[i64]) -> MPoly {
        MPoly::univariate(Var::Z, coeffs)
    }

    #[test]
    fn f_direct_examples() {
        let mut fam = Families::new();
        let f1 = f_direct(&mut fam, 1);
        assert_eq!(
            f1,
            xz(&[(1, 2, 1), (-1, 0, 2), (-1, 0, 1), (-1, 2, 0), (2, 0, 0)])
        );
        assert_eq!(f1, &parabola_factor() * &z(&[-1, 1]));
        assert_eq!(f_direct(&mut fam, 2), &parabola_factor() * &z(&[-1, -1, 1]));
        for s in 1..10 {
            let f = f_direct(&mut fam, s);
            assert_eq!(f.degree_in(Var::X), Some(2));
            assert_eq!(f.degree_in(Var::Z), Some(s as u32 + 1));
        }
    }

    #[test]
    fn closed_form_examples() {
        let mut fam = Families::new();
        let p = parabola_factor();
        assert_eq!(closed_form(&mut fam, 3), Ok(&p * &z(&[-1, 1])));
        assert_eq!(closed_form(&mut fam, 5), Ok(&p * &z(&[-1, -1, 1])));
        assert_eq!(
            closed_form(&mut fam, 9),
            Ok(&(&p * &z(&[-1, 1])) * &z(&[-1, -3, 0, 1]))
        );
        assert!(matches!(
            closed_form(&mut fam, 6),
            Err(VarietyError::NotOddM(_))
        ));
    }

    #[test]
    fn verify_small_m() {
        let mut fam = Families::new();
        let mut eng = TraceEngine::new();
        for m in [3, 5, 9] {
            let r = verify_variety(&mut fam, &mut eng, m, VarietyChecks::ALL).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.trace, Some(true));
            assert_eq!(r.divisibility, Some(true));
        }
    }

    #[test]
    fn line_level_examples() {
        assert_eq!(line_levels(3).unwrap().len(), 1);
        assert!((line_levels(3).unwrap()[0] - 1.0).abs() < 1e-15);
        let l5 = line_levels(5).unwrap();
        assert!((l5[0] + 0.6180339887).abs() < 1e-10);
        assert!((l5[1] - 1.6180339887).abs() < 1e-10);
        let mut fam = Families::new();
        let c7 = CurveDescription::new(&mut fam, 7).unwrap();
        assert_eq!(c7.line_levels.len(), 3);
        assert!(c7.max_level_residual().unwrap() < 1e-9);
        assert!(line_levels(8).is_err());
        assert!(verify_line_structure(&mut fam, 31, 1e-9).passed);
    }

    #[test]
    fn plot_examples() {
        let pts = plot_data(3, -2.0, 2.0, 3).unwrap();
        let parabola: Vec<(f64, f64)> = pts
            .iter()
            .filter(|p| p.component == Component::Parabola)
            .map(|p| (p.x, p.z))
            .collect();
        assert_eq!(parabola, vec![(-2.0, 2.0), (0.0, -2.0), (2.0, 2.0)]);
        let lines: Vec<&PlotPoint> = pts
            .iter()
            .filter(|p| p.component == Component::Line)
            .collect();
        assert_eq!(lines.len(), 2);
        assert!(lines.iter().all(|p| (p.z - 1.0).abs() < 1e-15));

        let pts5 = plot_data(5, 0.0, 1.0, 10).unwrap();
        assert_eq!(
            pts5.iter()
                .filter(|p| p.component == Component::Line)
                .count(),
            4
        );

        let mut fam = Families::new();
        let curve = CurveDescription::new(&mut fam, 3).unwrap();
        let v = curve.eval(0.0.into(), (-2.0).into()).unwrap();
        assert_eq!(v.norm(), 0.0);

        assert_eq!(plot_data(3, 1.0, 1.0, 5), Err(VarietyError::BadRange));
        assert_eq!(plot_data(3, 0.0, 1.0, 1), Err(VarietyError::BadRange));
    }

    #[test]
    fn plot_points_lie_on_curve() {
        let mut fam = Families::new();
        for m in [3, 5, 7, 15, 21] {
            let curve = CurveDescription::new(&mut fam, m).unwrap();
            let poly = &curve.defining_poly;
            for p in plot_data(m, -2.5, 2.5, 41).unwrap() {
                let v = curve.eval(p.x.into(), p.z.into()).unwrap();
                assert!(scaled_residual(poly, v) < 1e-9, "m={m} {p:?}");
            }
        }
    }

    #[test]
    fn csv_format() {
        let csv = plot_csv(&plot_data(3, -2.0, 2.0, 3).unwrap());
        assert_eq!(
            csv,
            "component,x,z\nparabola,-2,2\nparabola,0,-2\nparabola,2,2\nline,-2,1\nline,2,1\n"
        );
    }

    #[test]
    fn curve_json() {
        let mut fam = Families::new();
        let c = CurveDescription::new(&mut fam, 3).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["m"], 3);
        assert_eq!(v["parabola"], "Z=X^2-2");
        assert_eq!(v["lines"].as_array().unwrap().len(), 1);
        assert_eq!(v["defining_poly"]["vars"][2], "Z");
    }
}
