//! Integrals of a profile: the quartic form, the weighted `L^q` norm, the
//! Rayleigh quotient and the `U₀, U₁, U₂` triple.
//!
//! For `u(x) = |x|^{(4-n)/2} w(-log|x|)`:
//!
//! ```text
//! ∫|Δu|²           = ω (∫w″² + 2(μ+2)∫w′² + μ²∫w²)
//! ∫|x|⁻²|∇u|²      = ω (∫w′² + ν∫w²)
//! ∫|x|⁻⁴u²         = ω ∫w²
//! ∫|x|^{-β}|u|^q   = ω ∫|w|^q
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ProblemParams;
use crate::profile::{dot, first_difference, second_difference, simpson, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub i_w2pp: f64,
    pub i_w2p: f64,
    pub i_w2: f64,
    pub i_wq: f64,
    pub u0: f64,
    pub u1: f64,
    pub u2: f64,
    pub a_value: f64,
    pub b_value: f64,
    /// Set when the profile vanishes identically.
    pub degenerate: bool,
}

impl EnergyBreakdown {
    /// `∫w″² + 2a∫w′² + b∫w²`.
    pub fn quartic_form(&self, p: &ProblemParams) -> f64 {
        self.i_w2pp + 2.0 * p.a_coeff * self.i_w2p + p.b_coeff * self.i_w2
    }
}

/// `|w|^{q-2} w`, extended by zero at `w = 0`.
pub fn nonlinearity(w: f64, q: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        w.signum() * w.abs().powf(q - 1.0)
    }
}

pub fn energy_breakdown(w: &Profile, p: &ProblemParams) -> Result<EnergyBreakdown> {
    if w.len() < 5 {
        return Err(Error::GridTooCoarse {
            points: w.len(),
            required: 5,
        });
    }
    let h = w.spacing();
    let d1 = first_difference(&w.values, h);
    let d2 = second_difference(&w.values, h);
    let sq = |v: &[f64]| -> Vec<f64> { v.iter().map(|x| x * x).collect() };
    let i_w2pp = simpson(&sq(&d2), h);
    let i_w2p = simpson(&sq(&d1), h);
    let i_w2 = simpson(&sq(&w.values), h);
    let pow_q: Vec<f64> = w.values.iter().map(|x| x.abs().powf(p.q)).collect();
    let i_wq = simpson(&pow_q, h);

    let om = p.omega_n;
    let u0 = om * i_w2;
    let u1 = om * (i_w2p + p.nu * i_w2);
    let u2 = om * (i_w2pp + 2.0 * (p.mu + 2.0) * i_w2p + p.mu * p.mu * i_w2);
    let degenerate = w.is_zero();
    let b_value = if degenerate {
        0.0
    } else {
        (om * i_wq).powf(2.0 / p.q)
    };
    Ok(EnergyBreakdown {
        i_w2pp,
        i_w2p,
        i_w2,
        i_wq,
        u0,
        u1,
        u2,
        a_value: u2 - p.lambda * u1,
        b_value,
        degenerate,
    })
}

/// `(∫w″² + 2a∫w′² + b∫w²) / (∫|w|^q)^{2/q}`; multiply by `ω^{(q-2)/q}`
/// for the radial constant.
pub fn rayleigh_quotient(w: &Profile, p: &ProblemParams) -> Result<f64> {
    let e = energy_breakdown(w, p)?;
    if e.degenerate || e.i_wq == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(e.quartic_form(p) / e.i_wq.powf(2.0 / p.q))
}

/// Discrete quartic operator `D₂D₂w − 2a D₂w + b w` with zero extension.
pub(crate) fn apply_operator(values: &[f64], h: f64, p: &ProblemParams) -> Vec<f64> {
    let d2 = second_difference(values, h);
    let d4 = second_difference(&d2, h);
    values
        .iter()
        .zip(d2.iter().zip(&d4))
        .map(|(w, (s, f))| f - 2.0 * p.a_coeff * s + p.b_coeff * w)
        .collect()
}

/// Discrete quadratic form `h(|D₂w|² − 2a⟨w, D₂w⟩ + b|w|²)`; equals
/// `h⟨w, Kw⟩` for the operator above, which is symmetric.
pub(crate) fn discrete_form(values: &[f64], h: f64, p: &ProblemParams) -> f64 {
    let d2 = second_difference(values, h);
    h * (dot(&d2, &d2) - 2.0 * p.a_coeff * dot(values, &d2) + p.b_coeff * dot(values, values))
}

/// Residual of the Euler–Lagrange equation `w⁗ − 2a w″ + b w = s |w|^{q-2}w`
/// with the multiplier `s` chosen so that the residual is orthogonal to `w`.
pub fn el_gradient(w: &Profile, p: &ProblemParams) -> Result<Profile> {
    let (r, _) = el_residual_with_multiplier(w, p)?;
    Ok(r)
}

pub(crate) fn el_residual_with_multiplier(
    w: &Profile,
    p: &ProblemParams,
) -> Result<(Profile, f64)> {
    if w.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let h = w.spacing();
    let kw = apply_operator(&w.values, h, p);
    let nw: Vec<f64> = w.values.iter().map(|&x| nonlinearity(x, p.q)).collect();
    let s = dot(&kw, &w.values) / dot(&nw, &w.values);
    let values = kw.iter().zip(&nw).map(|(k, n)| k - s * n).collect();
    Ok((
        Profile {
            grid: w.grid,
            values,
        },
        s,
    ))
}
