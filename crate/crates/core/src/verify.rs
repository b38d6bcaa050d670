//! Identity checks on computed ground states and on the Emden–Fowler
//! correspondence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::{energy_breakdown, EnergyBreakdown};
use crate::params::ProblemParams;
use crate::profile::{ef_transform, first_difference, second_difference, Grid, Profile};
use crate::quadrature::{uniform_breaks, GaussLegendre};
use crate::solver::GroundState;

pub const FIRST_INTEGRAL_TOL: f64 = 1e-5;
pub const INTEGRATED_TOL: f64 = 1e-7;
pub const POHOZAEV_TOL: f64 = 1e-6;
pub const CROSS_CHECK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs = rhs` up to the tolerance.
    Equal,
    /// `lhs > rhs` strictly.
    Greater,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs − rhs| / max(|lhs|, |rhs|, 1)`.
    pub residual: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl IdentityReport {
    pub fn equality(name: &str, lhs: f64, rhs: f64, tolerance: f64) -> IdentityReport {
        let residual = relative_residual(lhs, rhs);
        IdentityReport {
            name: name.to_string(),
            lhs,
            rhs,
            residual,
            tolerance,
            relation: Relation::Equal,
            pass: residual <= tolerance,
        }
    }
}

pub fn relative_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0)
}

/// Conserved energy of the Euler–Lagrange ODE,
/// `−w‴w′ + ½w″² + a w′² − (b/2)w² + (S/q)|w|^q`, which vanishes for a
/// homoclinic solution. Reports its largest value over nodes where
/// `|w| > 10⁻⁶ max|w|`, relative to the largest individual term there.
pub fn check_first_integral(gs: &GroundState) -> IdentityReport {
    let p = &gs.params;
    let w = &gs.w.values;
    let h = gs.w.spacing();
    let d1 = first_difference(w, h);
    let d2 = second_difference(w, h);
    let d3 = first_difference(&d2, h);
    let cutoff = 1e-6 * gs.w.max_abs();
    let n = w.len();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 4..n.saturating_sub(4) {
        if w[i].abs() <= cutoff {
            continue;
        }
        let terms = [
            -d3[i] * d1[i],
            0.5 * d2[i] * d2[i],
            p.a_coeff * d1[i] * d1[i],
            -0.5 * p.b_coeff * w[i] * w[i],
            gs.s_rad / p.q * w[i].abs().powf(p.q),
        ];
        worst = worst.max(terms.iter().sum::<f64>().abs());
        scale = terms.iter().fold(scale, |m, t| m.max(t.abs()));
    }
    let lhs = if scale > 0.0 { worst / scale } else { 0.0 };
    IdentityReport::equality("first_integral", lhs, 0.0, FIRST_INTEGRAL_TOL)
}

/// `3∫w″² + 2a∫w′² + (2/q)S∫|w|^q = b∫w²`, evaluated after rescaling the
/// profile to `ω ∫|w|^q = 1`.
pub fn check_integrated_identity(gs: &GroundState) -> Result<IdentityReport> {
    let p = &gs.params;
    let e = energy_breakdown(&normalized(&gs.w, p)?, p)?;
    let lhs = 3.0 * e.i_w2pp + 2.0 * p.a_coeff * e.i_w2p + 2.0 / p.q * gs.s_rad * e.i_wq;
    let rhs = p.b_coeff * e.i_w2;
    Ok(IdentityReport::equality(
        "integrated_identity",
        lhs,
        rhs,
        INTEGRATED_TOL,
    ))
}

fn normalized(w: &Profile, p: &ProblemParams) -> Result<Profile> {
    let e = energy_breakdown(w, p)?;
    if e.degenerate {
        return Err(Error::ZeroDenominator);
    }
    Ok(w.scaled((p.omega_n * e.i_wq).powf(-1.0 / p.q)))
}

/// The integrated identity rewritten with `U₀, U₁, U₂`:
/// `(3 + 2/q)U₂ = (4(μ+2) + λ(q+2)/q)U₁ − 2ν(λ − 2(n−2))U₀`.
/// Homogeneous of degree two, so it holds for any scaling of the profile.
pub fn pohozaev_sides(b: &EnergyBreakdown, p: &ProblemParams) -> (f64, f64) {
    let (q, lam) = (p.q, p.lambda);
    let lhs = (3.0 + 2.0 / q) * b.u2;
    let rhs = (4.0 * (p.mu + 2.0) + lam * (q + 2.0) / q) * b.u1
        - 2.0 * p.nu * (lam - 2.0 * (f64::from(p.n) - 2.0)) * b.u0;
    (lhs, rhs)
}

pub fn check_pohozaev(gs: &GroundState) -> IdentityReport {
    check_pohozaev_breakdown(&gs.breakdown, &gs.params)
}

pub fn check_pohozaev_breakdown(b: &EnergyBreakdown, p: &ProblemParams) -> IdentityReport {
    let (lhs, rhs) = pohozaev_sides(b, p);
    IdentityReport::equality("pohozaev", lhs, rhs, POHOZAEV_TOL)
}

/// `∫|x|⁻²|∇u|² > ν ∫|x|⁻⁴u²`, strict.
pub fn check_hardy(b: &EnergyBreakdown, p: &ProblemParams) -> IdentityReport {
    let lhs = b.u1;
    let rhs = p.nu * b.u0;
    IdentityReport {
        name: "hardy".to_string(),
        lhs,
        rhs,
        residual: relative_residual(lhs, rhs),
        tolerance: 0.0,
        relation: Relation::Greater,
        pass: !b.degenerate && lhs > rhs,
    }
}

/// The four identities embedded in every solve result.
pub fn verify_ground_state(gs: &GroundState) -> Result<Vec<IdentityReport>> {
    Ok(vec![
        check_first_integral(gs),
        check_integrated_identity(gs)?,
        check_pohozaev(gs),
        check_hardy(&gs.breakdown, &gs.params),
    ])
}

/// Radial integrals of `u` computed directly in `ℝⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialIntegrals {
    /// `∫|Δu|²`
    pub laplacian: f64,
    /// `∫|x|⁻²|∇u|²`
    pub hardy_gradient: f64,
    /// `∫|x|^{-β}|u|^q`
    pub weighted_lq: f64,
    /// `∫|x|⁻⁴u²`
    pub rellich: f64,
}

/// Step for the finite differences in `log r`.
const LOG_STEP: f64 = 5e-3;
const PANEL_WIDTH: f64 = 0.25;
const PANEL_NODES: usize = 10;

/// Value, first and second derivative of `s ↦ u(eˢ)`, sixth-order central
/// differences.
pub(crate) fn log_derivatives(u: &impl Fn(f64) -> f64, s: f64) -> (f64, f64, f64) {
    let d = LOG_STEP;
    let f = |k: f64| u((s + k * d).exp());
    let (m3, m2, m1, z, p1, p2, p3) = (f(-3.0), f(-2.0), f(-1.0), f(0.0), f(1.0), f(2.0), f(3.0));
    let first = (-m3 + 9.0 * m2 - 45.0 * m1 + 45.0 * p1 - 9.0 * p2 + p3) / (60.0 * d);
    let second = (2.0 * m3 - 27.0 * m2 + 270.0 * m1 - 490.0 * z + 270.0 * p1 - 27.0 * p2
        + 2.0 * p3)
        / (180.0 * d * d);
    (z, first, second)
}

/// Direct quadrature over `e^{-T} ≤ |x| ≤ e^{T}` in the variable `s = log r`,
/// using `Δu = r⁻²(u_ss + (n−2)u_s)` and `u_r = u_s / r`.
pub fn radial_integrals(
    radial_u: impl Fn(f64) -> f64,
    p: &ProblemParams,
    half_width: f64,
) -> Result<RadialIntegrals> {
    let gl = GaussLegendre::new(PANEL_NODES);
    let panels = (2.0 * half_width / PANEL_WIDTH).ceil() as usize;
    let breaks = uniform_breaks(-half_width, half_width, panels);
    let nf = f64::from(p.n);
    let mut acc = [0.0f64; 4];
    let mut bad = None;
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, wt) in gl.nodes.iter().zip(&gl.weights) {
            let s = mid + half * x;
            let (u, us, uss) = log_derivatives(&radial_u, s);
            let lap_r2 = uss + (nf - 2.0) * us;
            // Powers of r folded into exponentials to stay finite for large |s|.
            let terms = [
                lap_r2 * lap_r2 * ((nf - 4.0) * s).exp(),
                us * us * ((nf - 4.0) * s).exp(),
                u.abs().powf(p.q) * ((nf - p.beta) * s).exp(),
                u * u * ((nf - 4.0) * s).exp(),
            ];
            if terms.iter().any(|v| !v.is_finite()) {
                bad.get_or_insert(s);
                continue;
            }
            for (a, t) in acc.iter_mut().zip(terms) {
                *a += wt * half * t;
            }
        }
    }
    if let Some(s) = bad {
        return Err(Error::QuadratureFailure(format!(
            "non-finite integrand at r = {:e}",
            s.exp()
        )));
    }
    let om = p.omega_n;
    Ok(RadialIntegrals {
        laplacian: om * acc[0],
        hardy_gradient: om * acc[1],
        weighted_lq: om * acc[2],
        rellich: om * acc[3],
    })
}

/// The same four integrals from the profile side.
pub fn profile_integrals(w: &Profile, p: &ProblemParams) -> Result<RadialIntegrals> {
    let e = energy_breakdown(w, p)?;
    Ok(RadialIntegrals {
        laplacian: e.u2,
        hardy_gradient: e.u1,
        weighted_lq: p.omega_n * e.i_wq,
        rellich: e.u0,
    })
}

/// Compares the radial integrals of `u` computed directly in `ℝⁿ` with the
/// profile integrals of its Emden–Fowler image on `g`.
pub fn cross_check_ef(
    radial_u: impl Fn(f64) -> f64,
    p: &ProblemParams,
    g: &Grid,
) -> Result<Vec<IdentityReport>> {
    let w = ef_transform(&radial_u, p, g)?;
    let ef = profile_integrals(&w, p)?;
    let direct = radial_integrals(&radial_u, p, g.half_width)?;
    Ok(vec![
        IdentityReport::equality("laplacian", direct.laplacian, ef.laplacian, CROSS_CHECK_TOL),
        IdentityReport::equality(
            "hardy_gradient",
            direct.hardy_gradient,
            ef.hardy_gradient,
            CROSS_CHECK_TOL,
        ),
        IdentityReport::equality(
            "weighted_lq",
            direct.weighted_lq,
            ef.weighted_lq,
            CROSS_CHECK_TOL,
        ),
        IdentityReport::equality("rellich", direct.rellich, ef.rellich, CROSS_CHECK_TOL),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;
    use crate::solver::{solve_radial, SolverOptions};
    use std::f64::consts::PI;

    fn solve(n: u32, q: f64, lambda: f64) -> GroundState {
        let p = make_params(n, q, lambda).unwrap();
        solve_radial(&p, &Grid::default(), &SolverOptions::default()).unwrap()
    }

    fn fake_state(w: Profile, p: ProblemParams) -> GroundState {
        let breakdown = energy_breakdown(&w, &p).unwrap();
        let r = crate::functional::rayleigh_quotient(&w, &p).unwrap();
        GroundState {
            params: p,
            s_rad: p.omega_n.powf((p.q - 2.0) / p.q) * r,
            breakdown,
            el_residual: 1.0,
            el_residual_strong: 1.0,
            iterations: 0,
            boundary_leak: 0.0,
            leak_flagged: false,
            positive: true,
            even_after_centering: 0.0,
            quotient_history: vec![],
            w,
        }
    }

    #[test]
    fn identities_hold_at_a_ground_state() {
        let gs = solve(5, 4.0, 0.0);
        for r in verify_ground_state(&gs).unwrap() {
            assert!(r.pass, "{r:?}");
        }
        let e = &gs.breakdown;
        assert!(gs.params.b_coeff * e.i_w2 > 3.0 * e.i_w2pp);
    }

    #[test]
    fn pohozaev_is_scale_invariant() {
        let gs = solve(6, 3.0, -10.0);
        let base = check_pohozaev(&gs);
        let b3 = energy_breakdown(&gs.w.scaled(3.0), &gs.params).unwrap();
        let scaled = check_pohozaev_breakdown(&b3, &gs.params);
        assert!((base.residual - scaled.residual).abs() < 1e-12);
    }

    #[test]
    fn integrated_identity_renormalizes() {
        let gs = solve(6, 4.0, 0.0);
        let mut scaled = gs.clone();
        scaled.w = gs.w.scaled(5.0);
        scaled.breakdown = energy_breakdown(&scaled.w, &gs.params).unwrap();
        assert!(check_integrated_identity(&scaled).unwrap().pass);
    }

    #[test]
    fn gaussian_fails_every_equation() {
        let p = make_params(5, 4.0, 0.0).unwrap();
        let w = Profile::from_fn(Grid::default(), |t| (-t * t).exp()).unwrap();
        let gs = fake_state(w, p);
        let fi = check_first_integral(&gs);
        assert!(!fi.pass && fi.residual > 1e-2, "{fi:?}");
        let poh = check_pohozaev(&gs);
        assert!(!poh.pass && poh.residual > 1e-2, "{poh:?}");
        assert!(!check_integrated_identity(&gs).unwrap().pass);
        assert!(check_hardy(&gs.breakdown, &p).pass);
    }

    #[test]
    fn hardy_ratio_for_wide_gaussian() {
        let p = make_params(5, 4.0, 0.0).unwrap();
        let sigma = 100.0;
        let g = Grid::new(800.0, 40001).unwrap();
        let w = Profile::from_fn(g, |t| (-(t / sigma).powi(2)).exp()).unwrap();
        let b = energy_breakdown(&w, &p).unwrap();
        let report = check_hardy(&b, &p);
        assert!(report.pass);
        // ∫w′²/∫w² = 1/σ² for e^{-t²/σ²}.
        let ratio = b.u1 / (p.nu * b.u0);
        let expected = 1.0 + 1.0 / (p.nu * sigma * sigma);
        assert!(ratio > 1.0 && ratio < 1.01);
        assert!((ratio - expected).abs() < 1e-9, "{ratio} vs {expected}");
    }

    #[test]
    fn zero_profile_fails_hardy() {
        let p = make_params(5, 4.0, 0.0).unwrap();
        let b = energy_breakdown(&Profile::zeros(Grid::new(4.0, 33).unwrap()), &p).unwrap();
        assert!(!check_hardy(&b, &p).pass);
    }

    #[test]
    fn cross_check_gaussian_profile() {
        for n in [5u32, 6] {
            let p = make_params(n, 4.0, 0.0).unwrap();
            let k = (f64::from(n) - 4.0) / 2.0;
            let u = move |r: f64| r.powf(-k) * (-(r.ln()).powi(2)).exp();
            let reports = cross_check_ef(u, &p, &Grid::default()).unwrap();
            assert_eq!(reports.len(), 4);
            for r in &reports {
                assert!(r.pass, "{r:?}");
            }
            // Closed forms of the profile side.
            let om = p.omega_n;
            let root = (PI / 2.0).sqrt();
            assert!((reports[3].lhs - om * root).abs() < 1e-8 * om);
            assert!((reports[2].lhs - om * (PI / 4.0).sqrt()).abs() < 1e-8 * om);
        }
    }

    #[test]
    fn cross_check_bubble() {
        for n in [5u32, 6] {
            let p = make_params(n, crate::params::critical_exponent(n), 0.0).unwrap();
            let k = (4.0 - f64::from(n)) / 2.0;
            let u = move |r: f64| (1.0 + r * r).powf(k);
            let reports = cross_check_ef(u, &p, &Grid::new(40.0, 8193).unwrap()).unwrap();
            for r in &reports {
                assert!(r.pass, "n = {n}: {r:?}");
            }
        }
    }

    #[test]
    fn cross_check_zero() {
        let p = make_params(5, 4.0, 0.0).unwrap();
        for r in cross_check_ef(|_| 0.0, &p, &Grid::new(10.0, 257).unwrap()).unwrap() {
            assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
            assert!(r.pass);
        }
    }
}
