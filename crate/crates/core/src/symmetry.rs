//! Symmetry-breaking diagnostics.
//!
//! At a radial minimizer `u` normalized by `∫|x|^{-β}|u|^q = 1`, the second
//! variation along `uφ`, with `φ` a first spherical harmonic, must satisfy
//! `A(uφ) ≥ (q−1)A(u)` if `u` is also a global minimizer. Using
//! `∫|x|⁻²uΔu = −(n−4)U₀ − U₁`,
//!
//! ```text
//! A(uφ) = A(u) + (n−1)(3n−9−λ)U₀ + 2(n−1)U₁.
//! ```
//!
//! The gap `D = (q−1)A(u) − A(uφ)` is therefore positive exactly when that
//! necessary condition fails, which shows that the ground state is not
//! radial.

use libm::lgamma as ln_gamma;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::functional::EnergyBreakdown;
use crate::params::{bs_condition, critical_exponent, make_params, q_threshold, ProblemParams};
use crate::profile::Grid;
use crate::quadrature::{uniform_breaks, GaussLegendre};
use crate::solver::{solve_radial, GroundState, SolverOptions};
use crate::verify::{radial_integrals, verify_ground_state, IdentityReport};

/// Relative margin on `|A(u)|` that `D` must exceed to certify breaking.
pub const CERTIFICATION_MARGIN: f64 = 1e-6;
const ROUTE_AGREEMENT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// No obstruction to radial symmetry was found. This does not prove
    /// that the ground state is radial.
    RadiallyStable,
    /// The radial minimizer fails the second-order condition, so the best
    /// constant is strictly below the radial one.
    SymmetryBroken,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::RadiallyStable => "RadiallyStable",
            Verdict::SymmetryBroken => "SymmetryBroken",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryCertificate {
    pub params: ProblemParams,
    pub u0: f64,
    pub u1: f64,
    pub u2: f64,
    pub a_u: f64,
    pub a_uphi: f64,
    /// `(q−1)A(u) − A(uφ)`.
    pub second_variation_gap: f64,
    /// The same gap from the collected form
    /// `(q−2)[U₂ − (λ + 2(n−1)/(q−2))U₁ − (n−1)(3n−9−λ)/(q−2) U₀]`.
    pub gap_rearranged: f64,
    pub routes_agree: bool,
    pub margin: f64,
    pub verdict: Verdict,
    pub interpretation: String,
    /// `−2q/(3q+2)·λ + 4q(μ+2)/(3q+2) − 2(n−1)/(q−2)`; positive for
    /// sufficiently negative `λ`.
    pub lambda_condition_coefficient: f64,
    /// `λ < 0` and the coefficient above is positive.
    pub lambda_condition_met: bool,
    /// Whether `(3q+2)/(q(q−2)) < (n−4)²/(n−1)`.
    pub exponent_condition_met: bool,
}

/// `A(uφ)` for `u` with the given `U`-triple.
pub fn a_uphi(b: &EnergyBreakdown, p: &ProblemParams) -> f64 {
    let n = f64::from(p.n);
    let u_lap_u = -(n - 4.0) * b.u0 - b.u1;
    b.a_value + (n - 1.0) * (n - 1.0 - p.lambda) * b.u0 - 2.0 * (n - 1.0) * u_lap_u
}

pub fn lambda_condition_coefficient(p: &ProblemParams) -> f64 {
    let q = p.q;
    let n = f64::from(p.n);
    -2.0 * q / (3.0 * q + 2.0) * p.lambda + 4.0 * q * (p.mu + 2.0) / (3.0 * q + 2.0)
        - 2.0 * (n - 1.0) / (q - 2.0)
}

/// Certificate from the `U`-triple alone; no convergence check.
pub fn certify_breakdown(b: &EnergyBreakdown, p: &ProblemParams) -> Result<SymmetryCertificate> {
    if !(p.q > 2.0) {
        return Err(Error::ExponentOutOfRange {
            q: p.q,
            reason: "the second-variation test needs q > 2",
        });
    }
    let n = f64::from(p.n);
    let q = p.q;
    let a_u = b.a_value;
    let a_phi = a_uphi(b, p);
    let gap = (q - 1.0) * a_u - a_phi;
    let rearranged = (q - 2.0)
        * (b.u2
            - (p.lambda + 2.0 * (n - 1.0) / (q - 2.0)) * b.u1
            - (n - 1.0) * (3.0 * n - 9.0 - p.lambda) / (q - 2.0) * b.u0);
    let scale = gap.abs().max(rearranged.abs()).max(a_u.abs());
    let routes_agree = (gap - rearranged).abs() <= ROUTE_AGREEMENT * scale;
    let margin = CERTIFICATION_MARGIN * a_u.abs();
    let verdict = if gap > margin {
        Verdict::SymmetryBroken
    } else {
        Verdict::RadiallyStable
    };
    let interpretation = match verdict {
        Verdict::SymmetryBroken => {
            "second variation along the first spherical harmonic is negative: the ground state is not radial"
        }
        Verdict::RadiallyStable => "no obstruction to radial symmetry found (not a proof of symmetry)",
    }
    .to_string();
    let c1 = lambda_condition_coefficient(p);
    Ok(SymmetryCertificate {
        params: *p,
        u0: b.u0,
        u1: b.u1,
        u2: b.u2,
        a_u,
        a_uphi: a_phi,
        second_variation_gap: gap,
        gap_rearranged: rearranged,
        routes_agree,
        margin,
        verdict,
        interpretation,
        lambda_condition_coefficient: c1,
        lambda_condition_met: p.lambda < 0.0 && c1 > 0.0,
        exponent_condition_met: bs_condition(p.n, q)?,
    })
}

/// Certificate for a ground state computed with the default tolerance.
pub fn certify(gs: &GroundState) -> Result<SymmetryCertificate> {
    certify_with(gs, SolverOptions::default().tol)
}

pub fn certify_with(gs: &GroundState, tol: f64) -> Result<SymmetryCertificate> {
    if !(gs.el_residual <= tol) {
        return Err(Error::NotConverged {
            residual: gs.el_residual,
            tol,
        });
    }
    certify_breakdown(&gs.breakdown, &gs.params)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub lambda: f64,
    pub gap: f64,
    pub s_rad: f64,
    pub verdict: Verdict,
    /// All identity checks passed at this ground state.
    pub identities_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub gap_lo: f64,
    pub gap_hi: f64,
    pub bisections: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaScan {
    pub n: u32,
    pub q: f64,
    pub rows: Vec<ScanRow>,
    /// Every sign change of the gap, refined, in increasing `λ`.
    pub brackets: Vec<Bracket>,
    /// For each identity, the report with the largest residual over the rows.
    pub worst_reports: Vec<IdentityReport>,
}

impl LambdaScan {
    pub fn first_bracket(&self) -> Result<&Bracket> {
        self.brackets.first().ok_or(Error::NoSignChange)
    }
}

struct GapPoint {
    gap: f64,
    s_rad: f64,
    verdict: Verdict,
    reports: Vec<IdentityReport>,
}

fn gap_at(p: &ProblemParams, g: &Grid, opts: &SolverOptions) -> Result<GapPoint> {
    let gs = solve_radial(p, g, opts)?;
    let c = certify_with(&gs, opts.tol)?;
    Ok(GapPoint {
        gap: c.second_variation_gap,
        s_rad: gs.s_rad,
        verdict: c.verdict,
        reports: verify_ground_state(&gs)?,
    })
}

/// Scans `λ` over `steps` equally spaced values of `[lo, hi]`, most negative
/// first, and refines every sign change of the gap by bisection down to a
/// width of `10⁻³ max(|λ|, 1)`.
pub fn lambda_star(
    n: u32,
    q: f64,
    range: (f64, f64),
    steps: usize,
    g: &Grid,
    opts: &SolverOptions,
) -> Result<LambdaScan> {
    let (lo, hi) = range;
    if !(lo <= hi) {
        return Err(Error::InvalidRange(format!(
            "lambda range {lo}:{hi} is reversed or not a number"
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidRange("at least one step is required".into()));
    }
    let base = make_params(n, q, hi)?;
    let count = if lo == hi { 1 } else { steps };
    let lambdas: Vec<f64> = (0..count)
        .map(|k| {
            if count == 1 {
                lo
            } else {
                lo + (hi - lo) * k as f64 / (count - 1) as f64
            }
        })
        .collect();
    let points: Vec<(f64, GapPoint)> = lambdas
        .par_iter()
        .map(|&lambda| Ok((lambda, gap_at(&base.with_lambda(lambda)?, g, opts)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut worst_reports: Vec<IdentityReport> = Vec::new();
    for (_, pt) in &points {
        for r in &pt.reports {
            match worst_reports.iter_mut().find(|w| w.name == r.name) {
                Some(w) if w.pass && (!r.pass || r.residual > w.residual) => *w = r.clone(),
                Some(_) => {}
                None => worst_reports.push(r.clone()),
            }
        }
    }
    let rows: Vec<ScanRow> = points
        .into_iter()
        .map(|(lambda, pt)| ScanRow {
            lambda,
            gap: pt.gap,
            s_rad: pt.s_rad,
            verdict: pt.verdict,
            identities_pass: pt.reports.iter().all(|r| r.pass),
        })
        .collect();
    let brackets = rows
        .windows(2)
        .filter(|w| (w[0].gap > 0.0) != (w[1].gap > 0.0))
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(a, b)| refine(&base, a, b, g, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(LambdaScan {
        n,
        q,
        rows,
        brackets,
        worst_reports,
    })
}

fn refine(
    base: &ProblemParams,
    a: ScanRow,
    b: ScanRow,
    g: &Grid,
    opts: &SolverOptions,
) -> Result<Bracket> {
    let width = 1e-3 * a.lambda.abs().max(1.0);
    let mut br = Bracket {
        lambda_lo: a.lambda,
        lambda_hi: b.lambda,
        gap_lo: a.gap,
        gap_hi: b.gap,
        bisections: 0,
    };
    while br.lambda_hi - br.lambda_lo > width {
        let mid = 0.5 * (br.lambda_lo + br.lambda_hi);
        let gap = gap_at(&base.with_lambda(mid)?, g, opts)?.gap;
        if (gap > 0.0) == (br.gap_lo > 0.0) {
            br.lambda_lo = mid;
            br.gap_lo = gap;
        } else {
            br.lambda_hi = mid;
            br.gap_hi = gap;
        }
        br.bisections += 1;
    }
    Ok(br)
}

/// Average of `|x + y|⁻²` over the sphere `|x| = r`, for `|y| = s`.
pub fn spherical_mean_weight(r: f64, s: f64, n: u32) -> Result<f64> {
    if !(r >= 0.0 && s >= 0.0) || !(r.is_finite() && s.is_finite()) {
        return Err(Error::InvalidRange(format!(
            "radii must be finite and non-negative, got r = {r}, s = {s}"
        )));
    }
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    if r == 0.0 && s == 0.0 {
        return Err(Error::SingularConfiguration { r, s, n });
    }
    if r == 0.0 {
        return Ok(1.0 / (s * s));
    }
    if s == 0.0 {
        return Ok(1.0 / (r * r));
    }
    // ∫₀^π sin^{n-2}θ dθ = √π Γ((n−1)/2) / Γ(n/2)
    let nf = f64::from(n);
    let norm = (0.5 * PI.ln() + ln_gamma((nf - 1.0) / 2.0) - ln_gamma(nf / 2.0)).exp();
    let width = (r - s).abs() / (r * s).sqrt();
    // Below this angle the integrand is O(θ^{n−2}) and its share is negligible.
    let floor = (width.min(1.0) * 1e-5).max(1e-10);
    let coarse = graded_angle_integral(r, s, n, floor, 12);
    let fine = graded_angle_integral(r, s, n, floor * 1e-3, 16);
    if (coarse - fine).abs() > 1e-8 * fine.abs() {
        return Err(Error::SingularConfiguration { r, s, n });
    }
    Ok(fine / norm)
}

/// `∫_{θ_min}^π sin^{n−2}θ / ((r−s)² + 4rs sin²(θ/2)) dθ` on panels that
/// halve in width towards `θ = 0`.
fn graded_angle_integral(r: f64, s: f64, n: u32, theta_min: f64, order: usize) -> f64 {
    let gl = gauss(order);
    let diff2 = (r - s) * (r - s);
    let rs4 = 4.0 * r * s;
    let pow = (n - 2) as i32;
    let f = |t: f64| {
        let half = (0.5 * t).sin();
        t.sin().powi(pow) / (diff2 + rs4 * half * half)
    };
    let mut breaks = vec![PI];
    let mut t = PI;
    while t > theta_min {
        t *= 0.5;
        breaks.push(t.max(theta_min));
    }
    breaks.reverse();
    gl.composite(&breaks, f)
}

fn gauss(order: usize) -> &'static GaussLegendre {
    static RULES: OnceLock<Mutex<HashMap<usize, &'static GaussLegendre>>> = OnceLock::new();
    let mut map = RULES
        .get_or_init(Default::default)
        .lock()
        .expect("rule cache poisoned");
    map.entry(order)
        .or_insert_with(|| Box::leak(Box::new(GaussLegendre::new(order))))
}

/// Half-width in `log r` for bubble integrals.
pub const BUBBLE_HALF_WIDTH: f64 = 40.0;

fn bubble(n: u32) -> impl Fn(f64) -> f64 {
    let k = (4.0 - f64::from(n)) / 2.0;
    move |r: f64| (1.0 + r * r).powf(k)
}

fn bubble_slope(n: u32, r: f64) -> f64 {
    let nf = f64::from(n);
    (4.0 - nf) * r * (1.0 + r * r).powf((2.0 - nf) / 2.0)
}

/// `∫|ΔU|²` and `∫U^{2**}` for the bubble by direct radial quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BubbleIntegrals {
    pub laplacian: f64,
    pub critical_norm: f64,
    pub sobolev_constant: f64,
}

/// Bubble integrals for dimension `n`, computed once per process.
pub fn bubble_integrals(n: u32) -> Result<BubbleIntegrals> {
    static CACHE: OnceLock<Mutex<HashMap<u32, BubbleIntegrals>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("bubble cache poisoned").get(&n) {
        return Ok(*v);
    }
    let p = make_params(n, critical_exponent(n), 0.0)?;
    let ri = radial_integrals(bubble(n), &p, BUBBLE_HALF_WIDTH)?;
    let v = BubbleIntegrals {
        laplacian: ri.laplacian,
        critical_norm: ri.weighted_lq,
        sobolev_constant: ri.laplacian / ri.weighted_lq.powf(2.0 / p.q),
    };
    cache.lock().expect("bubble cache poisoned").insert(n, v);
    Ok(v)
}

/// The Sobolev constant of `D^{2,2}(ℝⁿ)`, as the quotient of the bubble.
pub fn sobolev_constant(n: u32) -> Result<f64> {
    Ok(bubble_integrals(n)?.sobolev_constant)
}

/// `∫|x + y|⁻²|∇U(x)|² dx` with `|y| = offset`.
pub fn shifted_hardy_term(n: u32, offset: f64) -> Result<f64> {
    let p = make_params(n, critical_exponent(n), 0.0)?;
    let gl = gauss(10);
    let t = BUBBLE_HALF_WIDTH;
    let mut breaks = uniform_breaks(-t, t, (2.0 * t / 0.25) as usize);
    if offset > 0.0 {
        let ls = offset.ln();
        if ls > -t && ls < t {
            breaks.push(ls);
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
        }
    }
    let nf = f64::from(n);
    let mut acc = 0.0;
    let mut err = None;
    for pair in breaks.windows(2) {
        let v = gl.integrate(pair[0], pair[1], |s| {
            let r = s.exp();
            let du = bubble_slope(n, r);
            match spherical_mean_weight(r, offset, n) {
                Ok(m) => du * du * m * (nf * s).exp(),
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            }
        });
        acc += v;
    }
    if let Some(e) = err {
        return Err(Error::QuadratureFailure(e.to_string()));
    }
    Ok(p.omega_n * acc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BubbleRow {
    pub offset: f64,
    pub quotient: f64,
    pub s_star: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BubbleTable {
    pub n: u32,
    pub lambda: f64,
    pub s_star: f64,
    pub rows: Vec<BubbleRow>,
}

/// Quotient of the translated bubble `U(· − y)` for the critical problem:
/// `(∫|ΔU|² − λ ∫|x+y|⁻²|∇U|²) / (∫U^{2**})^{2/2**}`, one row per `|y|`.
pub fn bubble_comparison(n: u32, lambda: f64, offsets: &[f64]) -> Result<BubbleTable> {
    let p = make_params(n, critical_exponent(n), lambda)?;
    if let Some(bad) = offsets.iter().find(|y| !(**y >= 0.0 && y.is_finite())) {
        return Err(Error::InvalidRange(format!(
            "offsets must be finite and non-negative, got {bad}"
        )));
    }
    let bi = bubble_integrals(n)?;
    let denom = bi.critical_norm.powf(2.0 / p.q);
    let s_star = bi.sobolev_constant;
    let rows = offsets
        .par_iter()
        .map(|&offset| {
            let quotient = if lambda == 0.0 {
                s_star
            } else {
                (bi.laplacian - lambda * shifted_hardy_term(n, offset)?) / denom
            };
            Ok(BubbleRow {
                offset,
                quotient,
                s_star,
                gap: quotient - s_star,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BubbleTable {
        n,
        lambda,
        s_star,
        rows,
    })
}

/// `(q_n, 2n/(n−4))` when nonempty.
pub fn bs_window(n: u32) -> Result<Option<(f64, f64)>> {
    let lo = q_threshold(n)?;
    let hi = critical_exponent(n);
    Ok((lo < hi).then_some((lo, hi)))
}
