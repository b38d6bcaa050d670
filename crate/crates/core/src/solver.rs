//! Radial ground states by inverse iteration.
//!
//! The discrete problem minimizes
//!
//! ```text
//! Q(w) = h⟨w, K w⟩ / (h Σ|w_i|^q)^{2/q},   K = D₂² − 2a D₂ + b
//! ```
//!
//! where `D₂` is the five-point fourth-order second difference with zero
//! extension. `K` factors as `(−D₂ + α)(−D₂ + β)` with `α β = b`,
//! `α + β = 2a`, so each step solves two well-conditioned pentadiagonal
//! systems instead of one quartic system whose condition number grows like
//! `h⁻⁴`. The map `w ↦ K⁻¹(|w|^{q-2}w)` is a generalized power step and does
//! not increase `Q`.

use serde::{Deserialize, Serialize};

use crate::banded::Pentadiagonal;
use crate::error::{Error, Result};
use crate::functional::{
    discrete_form, el_residual_with_multiplier, energy_breakdown, nonlinearity, rayleigh_quotient,
    EnergyBreakdown,
};
use crate::params::ProblemParams;
use crate::profile::{dot, interpolate, simpson, Grid, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Target for the relative preconditioned residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Line-searched gradient steps when plain iteration stalls.
    pub polish: bool,
    pub recenter_every: usize,
    /// Boundary leak above this is flagged on the result.
    pub leak_tol: f64,
    /// Boundary leak above this is an error.
    pub leak_error_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-8,
            max_iter: 10_000,
            polish: true,
            recenter_every: 1,
            leak_tol: 1e-8,
            leak_error_tol: 1e-4,
        }
    }
}

/// Plain iteration is deemed stalled when the residual has not halved over
/// this many steps.
const STALL_WINDOW: usize = 200;
const STALL_FACTOR: f64 = 0.5;
/// Relative rounding allowance on the quotient when comparing steps.
const QUOTIENT_SLACK: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub params: ProblemParams,
    /// Normalized so that `ω ∫|w|^q dt = 1`.
    pub w: Profile,
    pub s_rad: f64,
    pub breakdown: EnergyBreakdown,
    /// `‖w − s K⁻¹(|w|^{q-2}w)‖ / ‖w‖`, the residual the solver drives to `tol`.
    pub el_residual: f64,
    /// Discrete L² norm of `Kw − s|w|^{q-2}w`. Rounding in `K` puts a floor of
    /// roughly `ε h⁻⁴ max|w|` under this quantity.
    pub el_residual_strong: f64,
    pub iterations: usize,
    pub boundary_leak: f64,
    pub leak_flagged: bool,
    pub positive: bool,
    /// `max |w(t) − w(−t)| / max |w|`.
    pub even_after_centering: f64,
    /// Discrete quotient after each step, starting with the seed.
    pub quotient_history: Vec<f64>,
}

/// Scalar record of a ground state for result files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateSummary {
    pub params: ProblemParams,
    pub grid: Grid,
    pub s_rad: f64,
    pub breakdown: EnergyBreakdown,
    pub el_residual: f64,
    pub el_residual_strong: f64,
    pub iterations: usize,
    pub boundary_leak: f64,
    pub leak_flagged: bool,
    pub positive: bool,
    pub even_after_centering: f64,
    pub profile_csv: Option<String>,
}

impl GroundState {
    pub fn summary(&self, profile_csv: Option<String>) -> GroundStateSummary {
        GroundStateSummary {
            params: self.params,
            grid: self.w.grid,
            s_rad: self.s_rad,
            breakdown: self.breakdown,
            el_residual: self.el_residual,
            el_residual_strong: self.el_residual_strong,
            iterations: self.iterations,
            boundary_leak: self.boundary_leak,
            leak_flagged: self.leak_flagged,
            positive: self.positive,
            even_after_centering: self.even_after_centering,
            profile_csv,
        }
    }

    /// `ω^{(q-2)/q}`, converting 1D quotients to radial constants.
    pub fn omega_factor(&self) -> f64 {
        omega_factor(&self.params)
    }
}

pub(crate) fn omega_factor(p: &ProblemParams) -> f64 {
    p.omega_n.powf((p.q - 2.0) / p.q)
}

/// Minimizes the quotient starting from `e^{-t²}`.
pub fn solve_radial(p: &ProblemParams, g: &Grid, opts: &SolverOptions) -> Result<GroundState> {
    let seed = Profile::from_fn(*g, |t| (-t * t).exp())?;
    solve_radial_from(p, &seed, opts)
}

/// The inverse `K⁻¹` as two pentadiagonal solves.
struct InverseOperator {
    first: Pentadiagonal,
    second: Pentadiagonal,
}

impl InverseOperator {
    fn new(p: &ProblemParams, g: &Grid) -> Result<InverseOperator> {
        let h = g.spacing();
        let c = 1.0 / (12.0 * h * h);
        let (alpha, beta) = p.factor_roots();
        let band = |shift: f64| Pentadiagonal::toeplitz(g.points, 30.0 * c + shift, -16.0 * c, c);
        Ok(InverseOperator {
            first: band(alpha)?,
            second: band(beta)?,
        })
    }

    fn apply(&self, rhs: &[f64]) -> Vec<f64> {
        let mut x = rhs.to_vec();
        self.first.solve_in_place(&mut x);
        self.second.solve_in_place(&mut x);
        x
    }
}

fn check_exponent(p: &ProblemParams) -> Result<()> {
    if !(p.q > 2.0) {
        return Err(Error::ExponentOutOfRange {
            q: p.q,
            reason:
                "q = 2 has no minimizer; its optimal constant is the closed form mu^2 - lambda nu",
        });
    }
    if p.q > p.q_crit * (1.0 + 1e-12) {
        return Err(Error::ExponentOutOfRange {
            q: p.q,
            reason: "q exceeds the critical exponent 2n/(n-4)",
        });
    }
    Ok(())
}

/// State of one iterate: normalized, centered values plus `K⁻¹N(w)`.
struct Iterate {
    w: Vec<f64>,
    kinv_n: Vec<f64>,
    multiplier: f64,
    residual: f64,
    quotient: f64,
}

struct Stepper<'a> {
    p: &'a ProblemParams,
    h: f64,
    inv: InverseOperator,
}

impl Stepper<'_> {
    fn power_sum(&self, w: &[f64]) -> f64 {
        self.h * w.iter().map(|x| x.abs().powf(self.p.q)).sum::<f64>()
    }

    /// Rescales to `ω ∫|w|^q = 1` (Simpson) and evaluates the residual.
    fn prepare(&self, mut w: Vec<f64>, recenter: bool) -> Result<Iterate> {
        let pow_q: Vec<f64> = w.iter().map(|x| x.abs().powf(self.p.q)).collect();
        let iq = simpson(&pow_q, self.h);
        if !(iq > 0.0) || !iq.is_finite() {
            return Err(Error::ZeroDenominator);
        }
        let scale = (1.0 / (self.p.omega_n * iq)).powf(1.0 / self.p.q);
        w.iter_mut().for_each(|x| *x *= scale);
        if recenter {
            w = recentered(w);
        }
        let nw: Vec<f64> = w.iter().map(|&x| nonlinearity(x, self.p.q)).collect();
        let kinv_n = self.inv.apply(&nw);
        let form = discrete_form(&w, self.h, self.p);
        let multiplier = form / (self.h * dot(&nw, &w));
        let diff: f64 = w
            .iter()
            .zip(&kinv_n)
            .map(|(x, y)| (x - multiplier * y).powi(2))
            .sum();
        let residual = (diff / dot(&w, &w)).sqrt();
        let quotient = form / self.power_sum(&w).powf(2.0 / self.p.q);
        Ok(Iterate {
            w,
            kinv_n,
            multiplier,
            residual,
            quotient,
        })
    }

    /// One gradient step along `s K⁻¹N(w) − w`. Among a few step lengths,
    /// takes the one with the smallest residual that does not raise the
    /// quotient beyond rounding. `τ = 1` reproduces a plain power step.
    fn polish_step(&self, it: &Iterate, recenter: bool) -> Result<Option<Iterate>> {
        let dir: Vec<f64> =
            it.w.iter()
                .zip(&it.kinv_n)
                .map(|(x, y)| it.multiplier * y - x)
                .collect();
        let ceiling = it.quotient * (1.0 + QUOTIENT_SLACK);
        let mut best: Option<Iterate> = None;
        for tau in [0.5, 1.0, 1.5, 2.0, 3.0] {
            let cand: Vec<f64> = it.w.iter().zip(&dir).map(|(x, d)| x + tau * d).collect();
            let next = self.prepare(cand, recenter)?;
            if next.quotient <= ceiling
                && best.as_ref().is_none_or(|b| next.residual < b.residual)
            {
                best = Some(next);
            }
        }
        Ok(best)
    }
}

/// Moves the largest `|w|` to the center node and makes it positive.
fn recentered(w: Vec<f64>) -> Vec<f64> {
    let n = w.len();
    let c = (n - 1) / 2;
    let mut best = c;
    let mut best_val = w[c].abs();
    for (i, v) in w.iter().enumerate() {
        let a = v.abs();
        if a > best_val || (a == best_val && i.abs_diff(c) < best.abs_diff(c)) {
            best = i;
            best_val = a;
        }
    }
    let sign = if w[best] < 0.0 { -1.0 } else { 1.0 };
    if best == c {
        if sign > 0.0 {
            return w;
        }
        return w.into_iter().map(|x| -x).collect();
    }
    let k = best as isize - c as isize;
    (0..n as isize)
        .map(|i| {
            let j = i + k;
            if (0..n as isize).contains(&j) {
                sign * w[j as usize]
            } else {
                0.0
            }
        })
        .collect()
}

/// Minimizes the quotient starting from `seed` (any nonzero profile).
pub fn solve_radial_from(
    p: &ProblemParams,
    seed: &Profile,
    opts: &SolverOptions,
) -> Result<GroundState> {
    check_exponent(p)?;
    if seed.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let g = seed.grid;
    let stepper = Stepper {
        p,
        h: g.spacing(),
        inv: InverseOperator::new(p, &g)?,
    };
    let mut it = stepper.prepare(seed.values.clone(), true)?;
    let mut run = Run {
        history: vec![it.quotient],
        iterations: 0,
    };
    it = run.converge(&stepper, it, opts)?;
    // Peak-node recentering leaves the profile up to half a step off its axis
    // of symmetry; move it there by interpolation and converge again.
    for _ in 0..CENTERING_ROUNDS {
        let prof = Profile::new(g, it.w.clone())?;
        if prof.asymmetry() <= CENTERING_TOL * prof.max_abs() {
            break;
        }
        // One power step at least, so that interpolation noise in the tails
        // is not returned as is.
        let shifted = stepper.prepare(subnode_centered(&prof), true)?;
        let stepped = stepper.prepare(shifted.kinv_n, true)?;
        run.iterations += 1;
        run.history.push(stepped.quotient);
        it = run.converge(&stepper, stepped, opts)?;
    }

    finish(p, g, it, run.iterations, run.history, opts)
}

/// Asymmetry below which no sub-node centering is attempted.
const CENTERING_TOL: f64 = 1e-9;
const CENTERING_ROUNDS: usize = 3;

struct Run {
    history: Vec<f64>,
    iterations: usize,
}

impl Run {
    /// Power steps until the residual reaches `tol`, switching to polish steps
    /// once the residual stops halving.
    fn converge(
        &mut self,
        stepper: &Stepper<'_>,
        mut it: Iterate,
        opts: &SolverOptions,
    ) -> Result<Iterate> {
        let every = opts.recenter_every.max(1);
        let mut polishing = false;
        let mut best_residual = it.residual;
        let mut since_progress = 0;
        let fail = |iterations, residual| Error::NoConvergence {
            iterations,
            residual,
        };
        while it.residual >= opts.tol {
            if self.iterations >= opts.max_iter {
                return Err(fail(self.iterations, it.residual));
            }
            self.iterations += 1;
            let recenter = self.iterations.is_multiple_of(every);
            let next = if polishing {
                stepper
                    .polish_step(&it, recenter)?
                    .ok_or_else(|| fail(self.iterations, it.residual))?
            } else {
                stepper.prepare(it.kinv_n.clone(), recenter)?
            };
            if next.residual < STALL_FACTOR * best_residual {
                best_residual = next.residual;
                since_progress = 0;
            } else {
                since_progress += 1;
            }
            if since_progress >= STALL_WINDOW {
                if polishing || !opts.polish {
                    return Err(fail(self.iterations, next.residual));
                }
                polishing = true;
                since_progress = 0;
            }
            self.history.push(next.quotient);
            it = next;
        }
        Ok(it)
    }
}

/// Values of `w(t + δ)` where `δ`, within one step of the center node, is the
/// critical point of the interpolant nearest the peak.
fn subnode_centered(w: &Profile) -> Vec<f64> {
    let h = w.spacing();
    let eps = 1e-3 * h;
    let slope = |t: f64| (interpolate(w, t + eps) - interpolate(w, t - eps)) / (2.0 * eps);
    let (mut lo, mut hi) = (-h, h);
    if (slope(lo) > 0.0) == (slope(hi) > 0.0) {
        return w.values.clone();
    }
    let rising = slope(lo) > 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if (slope(mid) > 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let delta = 0.5 * (lo + hi);
    w.grid
        .nodes()
        .into_iter()
        .map(|t| interpolate(w, t + delta))
        .collect()
}

fn finish(
    p: &ProblemParams,
    g: Grid,
    it: Iterate,
    iterations: usize,
    quotient_history: Vec<f64>,
    opts: &SolverOptions,
) -> Result<GroundState> {
    let w = Profile::new(g, it.w)?;
    let boundary_leak = w.boundary_leak();
    if boundary_leak > opts.leak_error_tol {
        return Err(Error::BoundaryLeak {
            leak: boundary_leak,
            limit: opts.leak_error_tol,
        });
    }
    let breakdown = energy_breakdown(&w, p)?;
    let s_rad = omega_factor(p) * rayleigh_quotient(&w, p)?;
    let (strong, _) = el_residual_with_multiplier(&w, p)?;
    let el_residual_strong = strong.dot(&strong).sqrt();
    let max = w.max_abs();
    Ok(GroundState {
        params: *p,
        s_rad,
        breakdown,
        el_residual: it.residual,
        el_residual_strong,
        iterations,
        boundary_leak,
        leak_flagged: boundary_leak > opts.leak_tol,
        positive: w.values.iter().all(|&v| v > 0.0),
        even_after_centering: w.asymmetry() / max,
        quotient_history,
        w,
    })
}

/// Relative change of the quotient under the dilation `u ↦ ρ^{(n-4)/2}u(ρ·)`,
/// which acts on profiles as `w(t) ↦ w(t + log ρ)`.
///
/// The profile is placed on a window padded with zeros so that nothing is
/// pushed off the grid; an integer number of nodes is shifted exactly and the
/// remainder by six-point interpolation.
pub fn dilation_invariance_check(gs: &GroundState, rho: f64) -> Result<f64> {
    let g = gs.w.grid;
    let limit = g.half_width / 2.0;
    let shift = rho.ln();
    if !(rho > 0.0) || !(shift.abs() <= limit) {
        return Err(Error::ShiftOutOfRange { shift, limit });
    }
    if shift == 0.0 {
        return Ok(0.0);
    }
    let h = g.spacing();
    let pad = (shift.abs() / h).ceil() as usize + 4;
    let padded_grid = Grid {
        half_width: g.half_width + pad as f64 * h,
        points: g.points + 2 * pad,
    };
    let mut values = vec![0.0; padded_grid.points];
    values[pad..pad + g.points].copy_from_slice(&gs.w.values);
    let base = Profile {
        grid: padded_grid,
        values,
    };
    let moved = if (shift / h - (shift / h).round()).abs() < 1e-9 {
        base.shifted((shift / h).round() as isize)
    } else {
        Profile {
            grid: padded_grid,
            values: padded_grid
                .nodes()
                .into_iter()
                .map(|t| interpolate(&base, t + shift))
                .collect(),
        }
    };
    let before = rayleigh_quotient(&base, &gs.params)?;
    let after = rayleigh_quotient(&moved, &gs.params)?;
    Ok((after - before).abs() / before.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;

    fn solve(n: u32, q: f64, lambda: f64) -> GroundState {
        let p = make_params(n, q, lambda).unwrap();
        solve_radial(&p, &Grid::default(), &SolverOptions::default()).unwrap()
    }

    #[test]
    fn converges_with_monotone_history() {
        let gs = solve(5, 4.0, 0.0);
        assert!(gs.el_residual < 1e-8);
        assert!(gs.positive);
        assert!(gs.even_after_centering < 1e-6);
        for pair in gs.quotient_history.windows(2) {
            assert!(pair[1] <= pair[0] * (1.0 + 1e-13), "{pair:?}");
        }
        let norm = gs.params.omega_n * gs.breakdown.i_wq;
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(gs.s_rad > 0.0);
    }

    #[test]
    fn restart_from_scaled_solution() {
        let gs = solve(6, 3.0, 0.0);
        let again =
            solve_radial_from(&gs.params, &gs.w.scaled(7.0), &SolverOptions::default()).unwrap();
        assert!((again.s_rad - gs.s_rad).abs() < 1e-10 * gs.s_rad);
    }

    #[test]
    fn strongly_negative_lambda() {
        let gs = solve(6, 3.0, -50.0);
        assert_eq!(gs.params.a_coeff, 30.0);
        assert_eq!(gs.params.b_coeff, 59.0);
        assert!(gs.el_residual < 1e-8);
        assert!(gs.positive);
    }

    #[test]
    fn rejects_linear_and_supercritical_exponents() {
        let g = Grid::default();
        let o = SolverOptions::default();
        let p = make_params(5, 2.0, 0.0).unwrap();
        assert!(matches!(
            solve_radial(&p, &g, &o),
            Err(Error::ExponentOutOfRange { .. })
        ));
        let p = make_params(5, 11.0, 0.0).unwrap();
        assert!(matches!(
            solve_radial(&p, &g, &o),
            Err(Error::ExponentOutOfRange { .. })
        ));
    }

    #[test]
    fn iteration_cap() {
        let p = make_params(5, 4.0, 0.0).unwrap();
        let o = SolverOptions {
            max_iter: 2,
            ..SolverOptions::default()
        };
        assert!(matches!(
            solve_radial(&p, &Grid::default(), &o),
            Err(Error::NoConvergence { iterations: 2, .. })
        ));
    }

    #[test]
    fn truncation_too_tight() {
        let p = make_params(5, 4.0, 0.0).unwrap();
        let g = Grid::new(6.0, 1025).unwrap();
        assert!(matches!(
            solve_radial(&p, &g, &SolverOptions::default()),
            Err(Error::BoundaryLeak { .. })
        ));
    }

    #[test]
    fn dilation_invariance() {
        let gs = solve(5, 4.0, 0.0);
        assert_eq!(dilation_invariance_check(&gs, 1.0).unwrap(), 0.0);
        let d = dilation_invariance_check(&gs, 2.0f64.exp()).unwrap();
        assert!(d < 1e-9, "{d}");
        let h = gs.w.spacing();
        let exact = dilation_invariance_check(&gs, (40.0 * h).exp()).unwrap();
        assert!(exact < 1e-12, "{exact}");
        assert!(matches!(
            dilation_invariance_check(&gs, 30.0f64.exp()),
            Err(Error::ShiftOutOfRange { .. })
        ));
        assert!(dilation_invariance_check(&gs, -1.0).is_err());
    }
}
