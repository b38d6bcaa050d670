//! Problem parameters `(n, q, λ)` and every constant derived from them.
//!
//! The constants are the Rellich and Hardy constants, the optimal Hardy
//! strength `Λ = n²/4`, the weight exponent `β`, the critical exponent `2**`,
//! the sphere measure `ω_n`, and the coefficients `a_λ`, `b_λ` of the reduced
//! one-dimensional quadratic form
//! `∫ |w''|² + 2 a_λ |w'|² + b_λ |w|²`.

use libm::lgamma as ln_gamma;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Validated parameter triple with all derived constants computed eagerly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub n: u32,
    pub q: f64,
    pub lambda: f64,
    /// Rellich constant `μ_n = n(n-4)/4`.
    pub mu: f64,
    /// Hardy constant `ν_n = (n-4)²/4`.
    pub nu: f64,
    /// `Λ = n²/4`.
    pub lambda_max: f64,
    /// Weight exponent `β = n - q(n-4)/2`.
    pub beta: f64,
    /// Critical exponent `2** = 2n/(n-4)`.
    pub q_crit: f64,
    /// Surface measure of the unit sphere in `ℝⁿ`.
    pub omega_n: f64,
    /// `a_λ = (μ_n + 2) - λ/2`.
    pub a_coeff: f64,
    /// `b_λ = (Λ - λ) ν_n`.
    pub b_coeff: f64,
}

pub fn make_params(n: u32, q: f64, lambda: f64) -> Result<ProblemParams> {
    check_dimension(n)?;
    if !q.is_finite() || q < 2.0 {
        return Err(Error::ExponentOutOfRange {
            q,
            reason: "q must be at least 2",
        });
    }
    let nf = f64::from(n);
    let lambda_max = nf * nf / 4.0;
    if !lambda.is_finite() || lambda >= lambda_max {
        return Err(Error::LambdaOutOfRange { lambda, lambda_max });
    }
    let mu = nf * (nf - 4.0) / 4.0;
    let nu = (nf - 4.0) * (nf - 4.0) / 4.0;
    let a_coeff = (2.0 * (mu + 2.0) - lambda) / 2.0;
    let b_coeff = (lambda_max - lambda) * nu;
    Ok(ProblemParams {
        n,
        q,
        lambda,
        mu,
        nu,
        lambda_max,
        beta: nf - q * (nf - 4.0) / 2.0,
        q_crit: critical_exponent(n),
        omega_n: sphere_measure(n),
        a_coeff,
        b_coeff,
    })
}

impl ProblemParams {
    /// `q = 2**`: the weight disappears and the full problem loses compactness.
    pub fn is_critical(&self) -> bool {
        (self.q - self.q_crit).abs() <= 1e-12 * self.q_crit
    }

    /// Same dimension and exponent, different Hardy strength.
    pub fn with_lambda(&self, lambda: f64) -> Result<ProblemParams> {
        make_params(self.n, self.q, lambda)
    }

    /// Roots `α ≤ β` of `k² - 2a k + b`, so that the quartic operator factors
    /// as `(-D² + α)(-D² + β)`. Both are positive because `a² ≥ b > 0`.
    pub fn factor_roots(&self) -> (f64, f64) {
        let disc = self.discriminant().sqrt();
        let hi = self.a_coeff + disc;
        // b / hi avoids cancellation in a - sqrt(a² - b).
        (self.b_coeff / hi, hi)
    }

    /// `a_λ² - b_λ`, which equals `(λ/2 - (n-2))²`.
    pub fn discriminant(&self) -> f64 {
        let half = self.lambda / 2.0 - (f64::from(self.n) - 2.0);
        half * half
    }
}

fn check_dimension(n: u32) -> Result<()> {
    if n < 5 {
        Err(Error::DimensionTooSmall { n })
    } else {
        Ok(())
    }
}

/// `2n/(n-4)`.
pub fn critical_exponent(n: u32) -> f64 {
    let nf = f64::from(n);
    2.0 * nf / (nf - 4.0)
}

/// `|𝕊^{n-1}| = 2π^{n/2}/Γ(n/2)`, evaluated through the log-gamma function.
pub fn sphere_measure(n: u32) -> f64 {
    let half = f64::from(n) / 2.0;
    (2.0f64.ln() + half * PI.ln() - ln_gamma(half)).exp()
}

/// Optimal constant of the linear problem `q = 2`, `μ_n² - λ ν_n`.
///
/// It coincides with `b_λ` and is never attained: there is no extremal
/// function for `q = 2`.
pub fn s2_closed_form(p: &ProblemParams) -> f64 {
    p.mu * p.mu - p.lambda * p.nu
}

/// Exponent `q_n` above which the symmetry-breaking condition holds.
pub fn q_threshold(n: u32) -> Result<f64> {
    check_dimension(n)?;
    let nf = f64::from(n);
    let a_n = 3.0 * (nf - 1.0) / (2.0 * (nf - 4.0) * (nf - 4.0));
    Ok(1.0 + a_n + ((1.0 + a_n) * (1.0 + a_n) + 4.0 / 3.0 * a_n).sqrt())
}

/// `(3q+2)/(q(q-2)) < (n-4)²/(n-1)`.
pub fn bs_condition(n: u32, q: f64) -> Result<bool> {
    check_dimension(n)?;
    if !q.is_finite() || q <= 2.0 {
        return Err(Error::ExponentOutOfRange {
            q,
            reason: "the condition needs q > 2",
        });
    }
    let nf = f64::from(n);
    let lhs = (3.0 * q + 2.0) / (q * (q - 2.0));
    let rhs = (nf - 4.0) * (nf - 4.0) / (nf - 1.0);
    Ok(lhs < rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn critical_exponent_in_dimension_five() {
        let p = make_params(5, 10.0, 0.0).unwrap();
        assert_eq!(p.beta, 0.0);
        assert_eq!(p.q_crit, 10.0);
        assert_eq!(p.mu, 1.25);
        assert_eq!(p.nu, 0.25);
        assert_eq!(p.lambda_max, 6.25);
        assert!(p.is_critical());
    }

    #[test]
    fn rellich_weight_for_q_two() {
        let p = make_params(5, 2.0, 0.0).unwrap();
        assert_eq!(p.beta, 4.0);
    }

    #[test]
    fn coefficients_in_dimension_five() {
        let p = make_params(5, 4.0, 0.0).unwrap();
        assert_eq!(p.a_coeff, 3.25);
        assert_eq!(p.b_coeff, 1.5625);
        assert!((p.a_coeff * p.a_coeff - p.b_coeff - 9.0).abs() < 1e-14);
        assert_eq!(p.discriminant(), 9.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            make_params(4, 3.0, 0.0).unwrap_err(),
            Error::DimensionTooSmall { n: 4 }
        );
        assert!(matches!(
            make_params(5, 4.0, 6.25),
            Err(Error::LambdaOutOfRange { .. })
        ));
        assert!(matches!(
            make_params(5, 1.5, 0.0),
            Err(Error::ExponentOutOfRange { .. })
        ));
        assert!(matches!(
            make_params(5, f64::NAN, 0.0),
            Err(Error::ExponentOutOfRange { .. })
        ));
    }

    #[test]
    fn sphere_measures() {
        // ω_5 = 8π²/3, ω_6 = π³, ω_7 = 16π³/15.
        assert!(rel(sphere_measure(5), 8.0 * PI * PI / 3.0) < 1e-14);
        assert!(rel(sphere_measure(6), PI.powi(3)) < 1e-14);
        assert!(rel(sphere_measure(7), 16.0 * PI.powi(3) / 15.0) < 1e-14);
        assert!(rel(sphere_measure(8), PI.powi(4) / 3.0) < 1e-14);
    }

    #[test]
    fn linear_constant() {
        let p = make_params(5, 2.0, 0.0).unwrap();
        assert_eq!(s2_closed_form(&p), 1.5625);
        let p = make_params(6, 2.0, -1.0).unwrap();
        assert_eq!(s2_closed_form(&p), 10.0);
        // At λ → Λ the constant collapses: μ_n² = Λ ν_n.
        for n in 5..20 {
            let p = make_params(n, 2.0, 0.0).unwrap();
            assert!((p.mu * p.mu - p.lambda_max * p.nu).abs() < 1e-9 * p.mu * p.mu);
            assert!(rel(s2_closed_form(&p), p.b_coeff) < 1e-14);
        }
    }

    #[test]
    fn threshold_in_dimension_seven() {
        let q7 = q_threshold(7).unwrap();
        // a_7 = 1 exactly, so q_7 = 2 + sqrt(16/3).
        assert!((q7 - (2.0 + (16.0f64 / 3.0).sqrt())).abs() < 1e-15);
        assert!((q7 - 4.309401).abs() < 1e-6);
        assert!(q7 < critical_exponent(7));
        assert!(!bs_condition(7, q7).unwrap());
    }

    #[test]
    fn threshold_window_emptiness() {
        assert!(q_threshold(5).unwrap() >= critical_exponent(5));
        assert!(q_threshold(6).unwrap() >= critical_exponent(6));
        for n in 7..=40 {
            assert!(q_threshold(n).unwrap() < critical_exponent(n), "n = {n}");
        }
        let q50 = q_threshold(50).unwrap();
        let q100 = q_threshold(100).unwrap();
        assert!(q50 > 2.0 && q100 > 2.0);
        assert!(q100 < q50);
        assert!(q100 - 2.0 < 0.1);
        assert!(matches!(
            q_threshold(4),
            Err(Error::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn bs_condition_examples() {
        assert!(bs_condition(7, 4.5).unwrap());
        // LHS at (7, 4.5) is 15.5/11.25.
        assert!((15.5f64 / 11.25 - 1.377_777_777_777_777_8).abs() < 1e-15);
        let mut q = 2.0005;
        while q <= 6.0 {
            assert!(!bs_condition(6, q).unwrap(), "q = {q}");
            q += 0.001;
        }
        assert!(matches!(
            bs_condition(7, 2.0),
            Err(Error::ExponentOutOfRange { .. })
        ));
    }

    #[test]
    fn bs_condition_matches_threshold_on_dense_sweep() {
        for n in 5..=16 {
            let qn = q_threshold(n).unwrap();
            let qc = critical_exponent(n);
            let steps = 4000;
            for k in 1..steps {
                let q = 2.0 + (qc - 2.0) * k as f64 / steps as f64;
                assert_eq!(bs_condition(n, q).unwrap(), q > qn, "n = {n}, q = {q}");
            }
        }
    }

    #[test]
    fn beta_endpoints() {
        for n in 5..30 {
            let crit = make_params(n, critical_exponent(n), 0.0).unwrap();
            assert!(crit.beta.abs() < 1e-13);
            let lin = make_params(n, 2.0, 0.0).unwrap();
            assert_eq!(lin.beta, 4.0);
        }
    }

    proptest! {
        #[test]
        fn discriminant_identity(n in 5u32..40, frac in -50.0f64..0.999) {
            let lambda_max = f64::from(n * n) / 4.0;
            let lambda = frac * lambda_max;
            let p = make_params(n, 3.0, lambda).unwrap();
            let lhs = p.a_coeff * p.a_coeff - p.b_coeff;
            let rhs = (lambda / 2.0 - (f64::from(n) - 2.0)).powi(2);
            prop_assert!(p.a_coeff > 0.0 && p.b_coeff > 0.0);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(p.a_coeff * p.a_coeff));
            let (lo, hi) = p.factor_roots();
            prop_assert!(lo > 0.0 && lo <= hi);
            prop_assert!(((lo + hi) - 2.0 * p.a_coeff).abs() <= 1e-12 * hi);
            prop_assert!((lo * hi - p.b_coeff).abs() <= 1e-12 * p.b_coeff);
        }

        #[test]
        fn linear_constant_is_affine(n in 5u32..20, l1 in -100.0f64..0.0, l2 in -100.0f64..0.0) {
            let p1 = make_params(n, 2.0, l1).unwrap();
            let p2 = make_params(n, 2.0, l2).unwrap();
            if (l1 - l2).abs() > 1e-6 {
                let slope = (s2_closed_form(&p1) - s2_closed_form(&p2)) / (l1 - l2);
                prop_assert!((slope + p1.nu).abs() < 1e-8 * p1.nu.max(1.0) * 100.0);
            }
        }
    }
}
