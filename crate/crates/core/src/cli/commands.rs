use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use super::args::{BubbleArgs, Format, NumericArgs, ScanArgs, SolveArgs, TableArgs};
use super::output::{csv_string, emit, emit_json, profile_path, Cell, ResultEnvelope};
use super::{CliError, Exit};
use crate::error::Error;
use crate::functional::rayleigh_quotient;
use crate::params::{
    critical_exponent, make_params, q_threshold, s2_closed_form, sphere_measure, ProblemParams,
};
use crate::profile::{ef_transform, write_profile, Grid, Profile};
use crate::solver::{solve_radial, GroundState, GroundStateSummary, SolverOptions};
use crate::symmetry::{
    bs_window, bubble_comparison, certify_with, lambda_star, spherical_mean_weight,
    SymmetryCertificate,
};
use crate::verify::{cross_check_ef, verify_ground_state, IdentityReport};

/// Fills every field not given on the command line from the JSON config.
fn merge<T: Serialize + DeserializeOwned>(flags: &T, config: Option<&Path>) -> Result<T, CliError> {
    let Some(path) = config else {
        return Ok(
            serde_json::from_value(serde_json::to_value(flags).map_err(Error::from)?)
                .map_err(Error::from)?,
        );
    };
    let text = fs::read_to_string(path).map_err(Error::from)?;
    let mut base: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
    let serde_json::Value::Object(ref mut obj) = base else {
        return Err(CliError::Usage(format!(
            "config {} must hold a JSON object",
            path.display()
        )));
    };
    if let serde_json::Value::Object(given) = serde_json::to_value(flags).map_err(Error::from)? {
        for (k, v) in given {
            let unset = v.is_null() || v == serde_json::Value::Bool(false);
            if !unset {
                obj.insert(k, v);
            }
        }
    }
    serde_json::from_value(base).map_err(|e| CliError::Usage(format!("config: {e}")))
}

fn required<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing required argument --{flag}")))
}

fn parse_range(text: &str, flag: &str) -> Result<(f64, f64), CliError> {
    let usage = || CliError::Usage(format!("--{flag} expects lo:hi, got `{text}`"));
    let (a, b) = text.split_once(':').ok_or_else(usage)?;
    let lo: f64 = a.trim().parse().map_err(|_| usage())?;
    let hi: f64 = b.trim().parse().map_err(|_| usage())?;
    if !(lo <= hi) {
        return Err(CliError::Usage(format!(
            "--{flag}: lower end {lo} exceeds upper end {hi}"
        )));
    }
    Ok((lo, hi))
}

fn resolve_numeric(n: &mut NumericArgs) -> Result<(Grid, SolverOptions), CliError> {
    let defaults = SolverOptions::default();
    let grid = Grid::new(
        *n.half_width.get_or_insert(Grid::default().half_width),
        *n.points.get_or_insert(Grid::default().points),
    )?;
    n.points = Some(grid.points);
    let opts = SolverOptions {
        tol: *n.tol.get_or_insert(defaults.tol),
        max_iter: *n.max_iter.get_or_insert(defaults.max_iter),
        ..defaults
    };
    Ok((grid, opts))
}

fn echo<T: Serialize>(cfg: &T) -> Result<serde_json::Value, CliError> {
    Ok(serde_json::to_value(cfg).map_err(Error::from)?)
}

struct Solved {
    config: serde_json::Value,
    gs: GroundState,
    reports: Vec<IdentityReport>,
    tol: f64,
    out: Option<std::path::PathBuf>,
}

fn solve_and_verify(args: &SolveArgs) -> Result<Solved, CliError> {
    let mut cfg = merge(args, args.config.as_deref())?;
    let n = required(cfg.n, "n")?;
    let q = required(cfg.q, "q")?;
    let lambda = required(cfg.lambda, "lambda")?;
    let p = make_params(n, q, lambda)?;
    let (grid, opts) = resolve_numeric(&mut cfg.numeric)?;
    let gs = solve_radial(&p, &grid, &opts)?;
    if gs.leak_flagged {
        eprintln!(
            "warning: boundary leak {:.3e} exceeds {:.1e}; consider a larger --half-width",
            gs.boundary_leak, opts.leak_tol
        );
    }
    let reports = verify_ground_state(&gs)?;
    Ok(Solved {
        config: echo(&cfg)?,
        gs,
        reports,
        tol: opts.tol,
        out: cfg.out,
    })
}

fn verification_exit(reports: &[IdentityReport]) -> Exit {
    match reports.iter().find(|r| !r.pass) {
        None => Exit::Success,
        Some(r) => {
            eprintln!(
                "verification failed: {} residual {:.3e} (tolerance {:.1e})",
                r.name, r.residual, r.tolerance
            );
            Exit::VerificationFailed
        }
    }
}

pub fn solve(args: &SolveArgs) -> Result<Exit, CliError> {
    let s = solve_and_verify(args)?;
    let profile_csv = match &s.out {
        Some(out) => {
            let path = profile_path(out);
            write_profile(&s.gs.w, &path)?;
            Some(path.display().to_string())
        }
        None => None,
    };
    let env = ResultEnvelope::new(s.config, s.gs.summary(profile_csv), s.reports.clone());
    emit_json(&env, s.out.as_deref())?;
    Ok(verification_exit(&s.reports))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyPayload {
    pub ground_state: GroundStateSummary,
    pub certificate: SymmetryCertificate,
}

pub fn certify(args: &SolveArgs) -> Result<Exit, CliError> {
    let s = solve_and_verify(args)?;
    let certificate = certify_with(&s.gs, s.tol)?;
    let payload = CertifyPayload {
        ground_state: s.gs.summary(None),
        certificate,
    };
    let env = ResultEnvelope::new(s.config, payload, s.reports.clone());
    emit_json(&env, s.out.as_deref())?;
    Ok(verification_exit(&s.reports))
}

pub fn scan(args: &ScanArgs) -> Result<Exit, CliError> {
    let mut cfg = merge(args, args.config.as_deref())?;
    let n = required(cfg.n, "n")?;
    let q = required(cfg.q, "q")?;
    let range_text = cfg
        .lambda_range
        .clone()
        .ok_or_else(|| CliError::Usage("missing required argument --lambda-range".into()))?;
    let range = parse_range(&range_text, "lambda-range")?;
    let steps = *cfg.steps.get_or_insert(40);
    let format = *cfg.format.get_or_insert(Format::Json);
    let (grid, opts) = resolve_numeric(&mut cfg.numeric)?;
    let scan = lambda_star(n, q, range, steps, &grid, &opts)?;
    if scan.brackets.is_empty() {
        eprintln!("no sign change of the gap in [{}, {}]", range.0, range.1);
    }
    match format {
        Format::Json => {
            let reports = scan.worst_reports.clone();
            let env = ResultEnvelope::new(echo(&cfg)?, scan, reports);
            emit_json(&env, cfg.out.as_deref())?;
        }
        Format::Csv => {
            let rows: Vec<Vec<Cell>> = scan
                .rows
                .iter()
                .map(|r| {
                    vec![
                        Cell::Float(r.lambda),
                        Cell::Float(r.gap),
                        Cell::Float(r.s_rad),
                        Cell::Text(r.verdict.label().to_string()),
                        Cell::Text(r.identities_pass.to_string()),
                    ]
                })
                .collect();
            let mut text = csv_string(
                &["lambda", "D", "s_rad", "verdict", "identities_pass"],
                &rows,
            )?;
            // Refined brackets follow the rows after a blank line.
            let brackets: Vec<Vec<Cell>> = scan
                .brackets
                .iter()
                .map(|b| {
                    vec![
                        Cell::Float(b.lambda_lo),
                        Cell::Float(b.lambda_hi),
                        Cell::Float(b.gap_lo),
                        Cell::Float(b.gap_hi),
                        Cell::Int(b.bisections as i64),
                    ]
                })
                .collect();
            if !brackets.is_empty() {
                text.push('\n');
                text.push_str(&csv_string(
                    &["lambda_lo", "lambda_hi", "D_lo", "D_hi", "bisections"],
                    &brackets,
                )?);
            }
            emit(&text, cfg.out.as_deref())?;
        }
    }
    Ok(Exit::Success)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: u32,
    pub mu: f64,
    pub nu: f64,
    pub lambda_max: f64,
    pub omega_n: f64,
    pub q_crit: f64,
    pub q_n: f64,
    pub window_nonempty: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s2: Option<f64>,
}

pub fn table_rows(
    n_range: (u32, u32),
    windows: bool,
    linear: Option<(f64, f64, usize)>,
) -> Result<Vec<TableRow>, CliError> {
    let mut rows = Vec::new();
    for n in n_range.0..=n_range.1 {
        let p = make_params(n, 2.0, 0.0)?;
        let window = bs_window(n)?;
        let base = TableRow {
            n,
            mu: p.mu,
            nu: p.nu,
            lambda_max: p.lambda_max,
            omega_n: p.omega_n,
            q_crit: p.q_crit,
            q_n: q_threshold(n)?,
            window_nonempty: window.is_some(),
            window: if windows { window } else { None },
            lambda: None,
            s2: None,
        };
        match linear {
            None => rows.push(base),
            Some((lo, hi, steps)) => {
                for k in 0..steps {
                    let lambda = if steps == 1 {
                        lo
                    } else {
                        lo + (hi - lo) * k as f64 / (steps - 1) as f64
                    };
                    let pl = p.with_lambda(lambda)?;
                    rows.push(TableRow {
                        lambda: Some(lambda),
                        s2: Some(s2_closed_form(&pl)),
                        ..base.clone()
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub fn table(args: &TableArgs) -> Result<Exit, CliError> {
    let mut cfg = merge(args, args.config.as_deref())?;
    let n_text = cfg.n_range.get_or_insert_with(|| "5:12".into()).clone();
    let (lo, hi) = parse_range(&n_text, "n-range")?;
    if lo.fract() != 0.0 || hi.fract() != 0.0 || lo < 0.0 {
        return Err(CliError::Usage(format!(
            "--n-range expects integers, got `{n_text}`"
        )));
    }
    let linear = if cfg.linear {
        let text = cfg
            .lambda_range
            .get_or_insert_with(|| "-10:0".into())
            .clone();
        let (a, b) = parse_range(&text, "lambda-range")?;
        let steps = *cfg.steps.get_or_insert(11);
        if steps == 0 {
            return Err(CliError::Usage("--steps must be positive".into()));
        }
        Some((a, b, steps))
    } else {
        None
    };
    let rows = table_rows((lo as u32, hi as u32), cfg.windows, linear)?;
    match *cfg.format.get_or_insert(Format::Csv) {
        Format::Json => {
            let env = ResultEnvelope::new(echo(&cfg)?, rows, Vec::new());
            emit_json(&env, cfg.out.as_deref())?;
        }
        Format::Csv => {
            let mut header = vec![
                "n",
                "mu",
                "nu",
                "lambda_max",
                "omega_n",
                "q_crit",
                "q_n",
                "window_nonempty",
            ];
            if cfg.windows {
                header.extend(["window_lo", "window_hi"]);
            }
            if linear.is_some() {
                header.extend(["lambda", "s2"]);
            }
            let cells: Vec<Vec<Cell>> = rows
                .iter()
                .map(|r| {
                    let mut c = vec![
                        Cell::Int(i64::from(r.n)),
                        Cell::Float(r.mu),
                        Cell::Float(r.nu),
                        Cell::Float(r.lambda_max),
                        Cell::Float(r.omega_n),
                        Cell::Float(r.q_crit),
                        Cell::Float(r.q_n),
                        Cell::Text(r.window_nonempty.to_string()),
                    ];
                    if cfg.windows {
                        match r.window {
                            Some((a, b)) => c.extend([Cell::Float(a), Cell::Float(b)]),
                            None => {
                                c.extend([Cell::Text(String::new()), Cell::Text(String::new())])
                            }
                        }
                    }
                    if let (Some(l), Some(s)) = (r.lambda, r.s2) {
                        c.extend([Cell::Float(l), Cell::Float(s)]);
                    }
                    c
                })
                .collect();
            emit(&csv_string(&header, &cells)?, cfg.out.as_deref())?;
        }
    }
    Ok(Exit::Success)
}

pub fn bubble(args: &BubbleArgs) -> Result<Exit, CliError> {
    let mut cfg = merge(args, args.config.as_deref())?;
    let n = required(cfg.n, "n")?;
    let lambda = required(cfg.lambda, "lambda")?;
    let offsets = cfg.offsets.get_or_insert_with(|| vec![0.0]).clone();
    let table = bubble_comparison(n, lambda, &offsets)?;
    match *cfg.format.get_or_insert(Format::Csv) {
        Format::Json => {
            let env = ResultEnvelope::new(echo(&cfg)?, table, Vec::new());
            emit_json(&env, cfg.out.as_deref())?;
        }
        Format::Csv => {
            let cells: Vec<Vec<Cell>> = table
                .rows
                .iter()
                .map(|r| {
                    vec![
                        Cell::Float(r.offset),
                        Cell::Float(r.quotient),
                        Cell::Float(r.s_star),
                        Cell::Float(r.gap),
                    ]
                })
                .collect();
            let text = csv_string(&["offset", "R", "S_star", "gap"], &cells)?;
            emit(&text, cfg.out.as_deref())?;
        }
    }
    Ok(Exit::Success)
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> crate::Result<(bool, String)>) -> Check {
    match f() {
        Ok((pass, detail)) => Check { name, pass, detail },
        Err(e) => Check {
            name,
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

fn params_grid() -> crate::Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in 5..15 {
        for k in 0..10 {
            let p = make_params(n, 3.0, -100.0 + 10.0 * f64::from(k))?;
            let lhs = p.a_coeff * p.a_coeff - p.b_coeff;
            let half = p.lambda / 2.0 - (f64::from(n) - 2.0);
            worst = worst.max((lhs - half * half).abs() / lhs.abs().max(1.0));
        }
    }
    Ok((worst < 1e-12, format!("max relative deviation {worst:.2e}")))
}

fn windows_check() -> crate::Result<(bool, String)> {
    let mut ok = bs_window(5)?.is_none() && bs_window(6)?.is_none();
    for n in 7..=12 {
        ok &= bs_window(n)?.is_some();
    }
    let q7 = q_threshold(7)?;
    ok &= q7 > 4.30 && q7 < 4.32;
    Ok((ok, format!("q_7 = {q7:.6}")))
}

fn ground_state_check() -> crate::Result<(bool, String)> {
    let p = make_params(5, 4.0, 0.0)?;
    let gs = solve_radial(&p, &Grid::default(), &SolverOptions::default())?;
    let reports = verify_ground_state(&gs)?;
    let ok = reports.iter().all(|r| r.pass) && gs.positive && gs.el_residual < 1e-8;
    Ok((
        ok,
        format!("s_rad = {:.10}, residual {:.2e}", gs.s_rad, gs.el_residual),
    ))
}

fn linear_limit_check() -> crate::Result<(bool, String)> {
    let p = make_params(5, 4.0, 0.0)?;
    let sigma = 100.0;
    let w = Profile::from_fn(Grid::new(400.0, 8001)?, |t| (-(t / sigma).powi(2)).exp())?;
    // With q = 2 the quotient reduces to the quadratic form over ∫w².
    let pl = ProblemParams { q: 2.0, ..p };
    let r = rayleigh_quotient(&w, &pl)?;
    let b = p.b_coeff;
    Ok((r >= b && r <= 1.02 * b, format!("R = {r:.8}, b = {b}")))
}

fn cross_check() -> crate::Result<(bool, String)> {
    let p = make_params(5, 4.0, 0.0)?;
    let u = |r: f64| r.powf(-0.5) * (-(r.ln()).powi(2)).exp();
    let reports = cross_check_ef(u, &p, &Grid::default())?;
    let worst = reports.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok((
        reports.iter().all(|r| r.pass),
        format!("max residual {worst:.2e}"),
    ))
}

fn spherical_mean_check() -> crate::Result<(bool, String)> {
    let m = spherical_mean_weight(1.0, 2.0, 3)?;
    let exact = 3.0f64.ln() / 4.0;
    Ok(((m - exact).abs() < 1e-12, format!("M(1, 2) = {m:.15}")))
}

fn sphere_check() -> crate::Result<(bool, String)> {
    let om = sphere_measure(5);
    let exact = 8.0 * PI * PI / 3.0;
    Ok((
        (om - exact).abs() < 1e-13 * exact,
        format!("omega_5 = {om:.15}"),
    ))
}

fn bubble_profile_check() -> crate::Result<(bool, String)> {
    let p = make_params(5, critical_exponent(5), 0.0)?;
    let g = Grid::new(20.0, 801)?;
    let w = ef_transform(|r: f64| (1.0 + r * r).powf(-0.5), &p, &g)?;
    let worst = g
        .nodes()
        .iter()
        .zip(&w.values)
        .map(|(t, v)| (v - (t.exp() + (-t).exp()).powf(-0.5)).abs() / v)
        .fold(0.0, f64::max);
    Ok((worst < 1e-12, format!("max relative error {worst:.2e}")))
}

pub fn selfcheck() -> Result<Exit, CliError> {
    let checks = [
        check("coefficient_identity", params_grid),
        check("sphere_measure", sphere_check),
        check("exponent_windows", windows_check),
        check("linear_limit", linear_limit_check),
        check("bubble_transform", bubble_profile_check),
        check("ef_cross_check", cross_check),
        check("spherical_mean", spherical_mean_check),
        check("ground_state_identities", ground_state_check),
    ];
    let mut all = true;
    for c in &checks {
        println!(
            "{} {:<26} {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
        all &= c.pass;
    }
    Ok(if all {
        Exit::Success
    } else {
        Exit::VerificationFailed
    })
}
