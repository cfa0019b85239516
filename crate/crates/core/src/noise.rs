//! Critical visibility under depolarizing noise.
//!
//! With ρ → vρ + (1 − v)I/d the observable sum is vη + (1 − v)n/d, so
//! contextuality survives for v > v* = (α − n/d)/(η − n/d).

use num_rational::BigRational;
use serde::Serialize;

use crate::algebra::{AlgebraError, BigReal, GoldenQuartic};
use crate::alpha::alpha_clique;
use crate::eta::{optimize_eta, EtaError, EtaSettings};
use crate::graph::{named, Graph};
use crate::theta::{lovasz_theta, SolveSettings, ThetaError};

#[derive(Debug, Clone, thiserror::Error)]
pub enum NoiseError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("η = {eta} does not exceed the mixed-state baseline n/d = {baseline}; v* is undefined")]
    BelowBaseline { eta: f64, baseline: f64 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Eta(#[from] EtaError),
}

/// A visibility threshold, or the sentinel v* ≥ 1 when η ≤ α.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Visibility {
    Critical(f64),
    NoAdvantage(f64),
}

impl Visibility {
    pub fn v_star(&self) -> f64 {
        match *self {
            Visibility::Critical(v) | Visibility::NoAdvantage(v) => v,
        }
    }

    pub fn explanation(&self) -> Option<&'static str> {
        match self {
            Visibility::Critical(_) => None,
            Visibility::NoAdvantage(_) => Some("η does not exceed α: no visibility certifies contextuality"),
        }
    }
}

pub fn critical_visibility(alpha: f64, eta: f64, n: usize, d: usize) -> Result<Visibility, NoiseError> {
    if d == 0 {
        return Err(NoiseError::ZeroDimension);
    }
    let b = n as f64 / d as f64;
    if eta <= b {
        return Err(NoiseError::BelowBaseline { eta, baseline: b });
    }
    let v = (alpha - b) / (eta - b);
    Ok(if eta > alpha { Visibility::Critical(v) } else { Visibility::NoAdvantage(v) })
}

/// v* at BigReal precision.
pub fn critical_visibility_big(alpha: &BigReal, eta: &BigReal, n: usize, d: usize) -> Result<BigReal, NoiseError> {
    if d == 0 {
        return Err(NoiseError::ZeroDimension);
    }
    let digits = eta.digits();
    let b = BigReal::from_ratio(n as i64, d as i64, digits);
    let den = eta - &b;
    if den.is_negative() || den.is_zero() {
        return Err(NoiseError::BelowBaseline { eta: eta.to_f64(), baseline: b.to_f64() });
    }
    Ok(&(alpha - &b) / &den)
}

/// v* in closed form for η in Q(√φ) ⊃ Q(√5).
pub fn critical_visibility_exact(alpha: i64, eta: &GoldenQuartic, n: usize, d: usize) -> Result<GoldenQuartic, NoiseError> {
    if d == 0 {
        return Err(NoiseError::ZeroDimension);
    }
    let b = GoldenQuartic::rational(BigRational::new((n as i64).into(), (d as i64).into()));
    let den = eta - &b;
    if den.to_f64() <= 0.0 {
        return Err(NoiseError::BelowBaseline { eta: eta.to_f64(), baseline: b.to_f64() });
    }
    Ok((&GoldenQuartic::int(alpha) - &b).div(&den)?)
}

/// 1/(3√5 − 5), the shared value for the pentagon and for Quad-C5 at d = 3.
pub fn kcbs_visibility_closed_form() -> GoldenQuartic {
    let den = &(&GoldenQuartic::int(3) * &GoldenQuartic::sqrt5()) - &GoldenQuartic::int(5);
    den.inverse().expect("3√5 − 5 is nonzero")
}

/// Checks that shifting α, η and the baseline by a common `k` leaves the
/// ratio unchanged to 1e-12 (relative to its size). A zero denominator
/// returns false.
pub fn shift_invariance_check(alpha: f64, eta: f64, baseline: f64, k: f64) -> bool {
    let den = eta - baseline;
    let den_k = (eta + k) - (baseline + k);
    if den == 0.0 || den_k == 0.0 {
        return false;
    }
    let lhs = ((alpha + k) - (baseline + k)) / den_k;
    let rhs = (alpha - baseline) / den;
    (lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0)
}

#[derive(Clone, Debug)]
pub enum EtaSource {
    Value(f64),
    /// θ from the high-accuracy SDP.
    Theta,
    /// Best λ_max from the restart optimizer in the row's dimension.
    Optimized { restarts: usize, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct NoiseInput {
    pub label: String,
    pub graph: Graph,
    pub d: usize,
    pub eta: EtaSource,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoiseProfile {
    pub label: String,
    pub n: usize,
    pub alpha: usize,
    pub eta: f64,
    pub d: usize,
    pub v_star: f64,
    #[serde(rename = "tolerance")]
    pub tolerance_1_minus_v: f64,
}

pub fn noise_table(inputs: &[NoiseInput]) -> Result<Vec<NoiseProfile>, NoiseError> {
    inputs
        .iter()
        .map(|row| {
            let alpha = alpha_clique(&row.graph).alpha;
            let eta = match row.eta {
                EtaSource::Value(v) => v,
                EtaSource::Theta => lovasz_theta(&row.graph, &SolveSettings::high_accuracy())?.theta,
                EtaSource::Optimized { restarts, seed } => {
                    optimize_eta(&row.graph, &EtaSettings::new(row.d, restarts, seed))?.best.lambda_max
                }
            };
            let v_star = critical_visibility(alpha as f64, eta, row.graph.n(), row.d)?.v_star();
            Ok(NoiseProfile {
                label: row.label.clone(),
                n: row.graph.n(),
                alpha,
                eta,
                d: row.d,
                v_star,
                tolerance_1_minus_v: 1.0 - v_star,
            })
        })
        .collect()
}

/// The five published rows: pentagon, heptagon, Quad-C5 at d = 3 and 4,
/// Wagner at d = 4.
pub fn published_inputs(restarts: usize, seed: u64) -> Vec<NoiseInput> {
    let row = |label: &str, graph: Graph, d: usize, eta: EtaSource| NoiseInput { label: label.into(), graph, d, eta };
    vec![
        row("C5 (KCBS)", named::c5(), 3, EtaSource::Theta),
        row("C7", named::c7(), 3, EtaSource::Theta),
        row("Quad-C5 (d=3)", named::quad_c5(), 3, EtaSource::Optimized { restarts, seed }),
        row("Quad-C5 (d=4)", named::quad_c5(), 4, EtaSource::Theta),
        row("Wagner (d=4)", named::wagner(), 4, EtaSource::Theta),
    ]
}

pub fn render_noise_table(rows: &[NoiseProfile]) -> String {
    let mut out = format!("{:<16} {:>2} {:>5} {:>8} {:>2} {:>7} {:>7}\n", "graph", "n", "alpha", "eta_d", "d", "v*", "1-v*");
    for r in rows {
        out += &format!(
            "{:<16} {:>2} {:>5} {:>8.5} {:>2} {:>7.4} {:>7.4}\n",
            r.label, r.n, r.alpha, r.eta, r.d, r.v_star, r.tolerance_1_minus_v
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(alpha: f64, eta: f64, n: usize, d: usize) -> f64 {
        critical_visibility(alpha, eta, n, d).unwrap().v_star()
    }

    #[test]
    fn published_closed_forms() {
        let s5 = 5f64.sqrt();
        let kcbs = 1.0 / (3.0 * s5 - 5.0);
        assert!((v(2.0, s5, 5, 3) - kcbs).abs() < 1e-15);
        assert!((v(3.0, 1.0 + s5, 8, 3) - kcbs).abs() < 1e-14);
        assert!((v(3.0, 2.0 + 2f64.sqrt(), 8, 4) - 1.0 / 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(v(8.0 / 3.0, 3.0, 8, 3), 0.0);
    }

    #[test]
    fn exact_equality_in_the_golden_field() {
        let s5 = GoldenQuartic::sqrt5();
        let kcbs = critical_visibility_exact(2, &s5, 5, 3).unwrap();
        let quad = critical_visibility_exact(3, &(&GoldenQuartic::one() + &s5), 8, 3).unwrap();
        assert_eq!(kcbs, quad);
        assert_eq!(kcbs, kcbs_visibility_closed_form());
    }

    #[test]
    fn big_real_agrees_to_fifty_digits() {
        let s5 = BigReal::from_i64(5, 50).sqrt().unwrap();
        let one_plus = &BigReal::from_i64(1, 50) + &s5;
        let a = critical_visibility_big(&BigReal::from_i64(2, 50), &s5, 5, 3).unwrap();
        let b = critical_visibility_big(&BigReal::from_i64(3, 50), &one_plus, 8, 3).unwrap();
        let exact = kcbs_visibility_closed_form().to_bigreal(50);
        assert!((&a - &b).log10_abs() < -45.0);
        assert!((&a - &exact).log10_abs() < -45.0);
    }

    #[test]
    fn domain_errors_and_sentinel() {
        assert!(matches!(critical_visibility(2.0, 1.5, 5, 3), Err(NoiseError::BelowBaseline { .. })));
        assert!(matches!(critical_visibility(2.0, 2.0, 5, 3), Ok(Visibility::NoAdvantage(v)) if v >= 1.0));
        assert!(matches!(critical_visibility(2.0, 2.5, 5, 0), Err(NoiseError::ZeroDimension)));
        assert!(Visibility::NoAdvantage(1.0).explanation().is_some());
    }

    #[test]
    fn shift_examples() {
        assert!(shift_invariance_check(2.0, 5f64.sqrt(), 5.0 / 3.0, 1.0));
        assert!(shift_invariance_check(2.0, 3.1, 1.2, 7.3));
        assert!(shift_invariance_check(2.0, 3.1, 1.2, 0.0));
        assert!(!shift_invariance_check(2.0, 1.0, 1.0, 1.0));
    }

    proptest! {
        #[test]
        fn shift_invariance(alpha in 0.0f64..10.0, b in 0.0f64..10.0, gap in 0.05f64..10.0, k in -20.0f64..20.0) {
            prop_assert!(shift_invariance_check(alpha, b + gap, b, k));
        }

        #[test]
        fn monotone_in_alpha_and_eta(n in 3usize..12, d in 2usize..6, t in 0.0f64..1.0, gap in 0.01f64..3.0) {
            let b = n as f64 / d as f64;
            let alpha = b + t;
            let eta = alpha + gap;
            let base = v(alpha, eta, n, d);
            prop_assert!(v(alpha + 1e-3, eta, n, d) > base);
            prop_assert!(v(alpha, eta + 1e-3, n, d) < base);
            prop_assert!((0.0..=1.0).contains(&(1.0 - base)));
        }
    }
}
