//! Sampled functions on a truncated line `[-T, T]`.
//!
//! A [`Profile`] holds the values of `w(t)` on a uniform odd-sized grid, so
//! `t = 0` is a node and the grid is exactly symmetric. Outside `[-T, T]` the
//! function and its derivatives are taken to be zero.
//!
//! Derivatives use fourth-order centered stencils written as nested
//! differences (`D₂ = δ² - δ⁴/12`, `D₁ = μδ(1 - δ²/6)`). Differencing
//! neighbouring samples first keeps the rounding error proportional to the
//! derivative itself instead of to `|w|/h²`.

use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::format::{fmt_f64, to_json_string};
use crate::params::ProblemParams;

pub const MIN_POINTS: usize = 16;
pub const DEFAULT_HALF_WIDTH: f64 = 30.0;
pub const DEFAULT_POINTS: usize = 4097;

/// Uniform grid on `[-half_width, half_width]` with an odd number of nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub half_width: f64,
    pub points: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            half_width: DEFAULT_HALF_WIDTH,
            points: DEFAULT_POINTS,
        }
    }
}

impl Grid {
    /// Even point counts are rounded up to the next odd number.
    pub fn new(half_width: f64, points: usize) -> Result<Grid> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half-width must be positive, got {half_width}"
            )));
        }
        if points < MIN_POINTS {
            return Err(Error::GridTooCoarse {
                points,
                required: MIN_POINTS,
            });
        }
        let points = if points.is_multiple_of(2) { points + 1 } else { points };
        Ok(Grid { half_width, points })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    pub fn center(&self) -> usize {
        (self.points - 1) / 2
    }

    /// `t_i = (i - c) h`, exactly antisymmetric about the center node.
    pub fn node(&self, i: usize) -> f64 {
        (i as f64 - self.center() as f64) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.node(i)).collect()
    }

    /// Grid with the same half-width and `2N - 1` points (spacing halved).
    pub fn refined(&self) -> Grid {
        Grid {
            half_width: self.half_width,
            points: 2 * self.points - 1,
        }
    }
}

/// How derivative stencils are closed at the two ends of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    /// One-sided fourth-order formulas at the two outermost nodes on each side.
    OneSided,
    /// Values (and derivatives) outside the grid are zero.
    ZeroExtension,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl Profile {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Profile> {
        if values.len() != grid.points {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.points,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { t: grid.node(i) });
        }
        Ok(Profile { grid, values })
    }

    /// Samples `f` at the grid nodes.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Profile> {
        Profile::new(grid, grid.nodes().into_iter().map(f).collect())
    }

    pub fn zeros(grid: Grid) -> Profile {
        Profile {
            grid,
            values: vec![0.0; grid.points],
        }
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Profile {
        self.map(|v| c * v)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Profile {
        Profile {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `t → -t`.
    pub fn reflected(&self) -> Profile {
        let mut values = self.values.clone();
        values.reverse();
        Profile {
            grid: self.grid,
            values,
        }
    }

    /// `w(t) → w(t + k h)`, with zeros entering from the boundary.
    pub fn shifted(&self, k: isize) -> Profile {
        let n = self.len() as isize;
        let values = (0..n)
            .map(|i| {
                let j = i + k;
                if (0..n).contains(&j) {
                    self.values[j as usize]
                } else {
                    0.0
                }
            })
            .collect();
        Profile {
            grid: self.grid,
            values,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Index of the largest `|w|`; ties go to the node closest to `t = 0`.
    pub fn argmax_abs(&self) -> usize {
        let c = self.grid.center();
        let mut best = c;
        let mut best_val = self.values[c].abs();
        for (i, v) in self.values.iter().enumerate() {
            let a = v.abs();
            if a > best_val || (a == best_val && i.abs_diff(c) < best.abs_diff(c)) {
                best = i;
                best_val = a;
            }
        }
        best
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// `max |w(t) - w(-t)|`; exactly zero for even data.
    pub fn asymmetry(&self) -> f64 {
        let n = self.len();
        (0..n / 2)
            .map(|i| (self.values[i] - self.values[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }

    /// `max(|w_0|, |w_{N-1}|) / max |w|`, zero for the zero profile.
    pub fn boundary_leak(&self) -> f64 {
        let m = self.max_abs();
        if m == 0.0 {
            return 0.0;
        }
        self.values[0].abs().max(self.values[self.len() - 1].abs()) / m
    }

    /// Discrete inner product `h Σ a_i b_i`.
    pub fn dot(&self, other: &Profile) -> f64 {
        self.spacing() * dot(&self.values, &other.values)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fourth-order derivative with one-sided closures at the ends.
pub fn differentiate(p: &Profile, order: Order) -> Result<Profile> {
    differentiate_with(p, order, Closure::OneSided)
}

pub fn differentiate_with(p: &Profile, order: Order, closure: Closure) -> Result<Profile> {
    let required = match (order, closure) {
        (Order::Second, Closure::OneSided) => 6,
        _ => 5,
    };
    if p.len() < required {
        return Err(Error::GridTooCoarse {
            points: p.len(),
            required,
        });
    }
    let h = p.spacing();
    let values = match closure {
        Closure::ZeroExtension => {
            let ext = zero_extended(&p.values, 2);
            stencil_interior(&ext, order, h)
        }
        Closure::OneSided => {
            let mut out = stencil_interior(&p.values, order, h);
            // `stencil_interior` returns N - 4 values for nodes 2..N-2.
            let v = &p.values;
            let n = v.len();
            let (b0, b1, e1, e0) = match order {
                Order::First => {
                    let f0 = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4])
                        / (12.0 * h);
                    let f1 =
                        (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h);
                    let g1 = (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4]
                        - v[n - 5])
                        / (12.0 * h);
                    let g0 = (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3]
                        - 16.0 * v[n - 4]
                        + 3.0 * v[n - 5])
                        / (12.0 * h);
                    (f0, f1, g1, g0)
                }
                Order::Second => {
                    let h2 = 12.0 * h * h;
                    let s0 = (45.0 * v[0] - 154.0 * v[1] + 214.0 * v[2] - 156.0 * v[3]
                        + 61.0 * v[4]
                        - 10.0 * v[5])
                        / h2;
                    let s1 = (10.0 * v[0] - 15.0 * v[1] - 4.0 * v[2] + 14.0 * v[3] - 6.0 * v[4]
                        + v[5])
                        / h2;
                    let t1 = (10.0 * v[n - 1] - 15.0 * v[n - 2] - 4.0 * v[n - 3] + 14.0 * v[n - 4]
                        - 6.0 * v[n - 5]
                        + v[n - 6])
                        / h2;
                    let t0 = (45.0 * v[n - 1] - 154.0 * v[n - 2] + 214.0 * v[n - 3]
                        - 156.0 * v[n - 4]
                        + 61.0 * v[n - 5]
                        - 10.0 * v[n - 6])
                        / h2;
                    (s0, s1, t1, t0)
                }
            };
            let mut full = Vec::with_capacity(n);
            full.push(b0);
            full.push(b1);
            full.append(&mut out);
            full.push(e1);
            full.push(e0);
            full
        }
    };
    Ok(Profile {
        grid: p.grid,
        values,
    })
}

pub(crate) fn zero_extended(v: &[f64], pad: usize) -> Vec<f64> {
    let mut ext = vec![0.0; v.len() + 2 * pad];
    ext[pad..pad + v.len()].copy_from_slice(v);
    ext
}

/// Centered stencil on nodes `2..len-2` of `v` (so `len - 4` outputs).
fn stencil_interior(v: &[f64], order: Order, h: f64) -> Vec<f64> {
    let m = v.len();
    // d[k] = v[k+1] - v[k]; s[k] = δ²v at node k+1.
    let d: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
    let s: Vec<f64> = d.windows(2).map(|w| w[1] - w[0]).collect();
    (2..m - 2)
        .map(|k| match order {
            Order::Second => {
                let (sm, s0, sp) = (s[k - 2], s[k - 1], s[k]);
                (s0 - ((sp - s0) - (s0 - sm)) / 12.0) / (h * h)
            }
            Order::First => {
                let centered = 0.5 * (d[k] + d[k - 1]);
                (centered - (s[k] - s[k - 2]) / 12.0) / h
            }
        })
        .collect()
}

/// Fourth-order second derivative with zero extension; the operator `D₂`
/// that also defines the solver's discrete quartic form.
pub fn second_difference(values: &[f64], h: f64) -> Vec<f64> {
    stencil_interior(&zero_extended(values, 2), Order::Second, h)
}

pub fn first_difference(values: &[f64], h: f64) -> Vec<f64> {
    stencil_interior(&zero_extended(values, 2), Order::First, h)
}

/// Composite Simpson rule over `[-T, T]`.
pub fn integrate(p: &Profile) -> f64 {
    simpson(&p.values, p.spacing())
}

pub(crate) fn simpson(v: &[f64], h: f64) -> f64 {
    let n = v.len();
    debug_assert!(n % 2 == 1);
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, &x) in v.iter().enumerate().take(n - 1).skip(1) {
        if i % 2 == 1 {
            odd += x;
        } else {
            even += x;
        }
    }
    h / 3.0 * (v[0] + v[n - 1] + 4.0 * odd + 2.0 * even)
}

/// Emden–Fowler image of a radial function: `w(t) = r^{(n-4)/2} u(r)` at
/// `r = e^{-t}`.
pub fn ef_transform(radial_u: impl Fn(f64) -> f64, p: &ProblemParams, g: &Grid) -> Result<Profile> {
    let k = (f64::from(p.n) - 4.0) / 2.0;
    let mut values = Vec::with_capacity(g.points);
    for t in g.nodes() {
        let w = (-k * t).exp() * radial_u((-t).exp());
        if !w.is_finite() {
            return Err(Error::NonFiniteSample { t });
        }
        values.push(w);
    }
    Ok(Profile { grid: *g, values })
}

/// Radial function `u(r) = r^{(4-n)/2} w(-log r)` reconstructed from a
/// profile by local sixth-order interpolation (exact at nodes).
#[derive(Debug, Clone)]
pub struct RadialProfile {
    profile: Profile,
    exponent: f64,
}

pub fn ef_untransform(w: &Profile, p: &ProblemParams) -> RadialProfile {
    RadialProfile {
        profile: w.clone(),
        exponent: (f64::from(p.n) - 4.0) / 2.0,
    }
}

impl RadialProfile {
    pub fn eval(&self, r: f64) -> f64 {
        if !(r > 0.0) {
            return f64::NAN;
        }
        let t = -r.ln();
        (self.exponent * t).exp() * interpolate(&self.profile, t)
    }
}

/// Value of the profile at an arbitrary `t`, zero outside the grid.
pub fn interpolate(p: &Profile, t: f64) -> f64 {
    let g = p.grid;
    let h = g.spacing();
    let x = t / h + g.center() as f64;
    let last = (g.points - 1) as f64;
    if !(x > -1e-9 && x < last + 1e-9) {
        return 0.0;
    }
    let nearest = x.round();
    if (x - nearest).abs() < 1e-7 {
        return p.values[nearest as usize];
    }
    // Six-point Lagrange stencil around x, shifted inside the grid.
    let base = (x.floor() as isize - 2).clamp(0, g.points as isize - 6) as usize;
    let mut acc = 0.0;
    for j in 0..6 {
        let xj = (base + j) as f64;
        let mut l = 1.0;
        for m in 0..6 {
            if m != j {
                let xm = (base + m) as f64;
                l *= (x - xm) / (xj - xm);
            }
        }
        acc += l * p.values[base + j];
    }
    acc
}

/// Grid metadata written next to a profile CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileMeta {
    pub half_width: f64,
    pub points: usize,
    pub spacing: f64,
}

/// Path of the JSON sidecar for a profile CSV.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Writes `t,w` rows plus a JSON sidecar with the grid metadata.
pub fn write_profile(p: &Profile, csv: &Path) -> Result<()> {
    let mut out = String::with_capacity(p.len() * 48 + 8);
    out.push_str("t,w\n");
    for (t, w) in p.grid.nodes().into_iter().zip(&p.values) {
        out.push_str(&fmt_f64(t));
        out.push(',');
        out.push_str(&fmt_f64(*w));
        out.push('\n');
    }
    fs::File::create(csv)?.write_all(out.as_bytes())?;
    let meta = ProfileMeta {
        half_width: p.grid.half_width,
        points: p.grid.points,
        spacing: p.spacing(),
    };
    fs::write(sidecar_path(csv), to_json_string(&meta)?)?;
    Ok(())
}

pub fn read_profile(csv: &Path) -> Result<Profile> {
    let meta: ProfileMeta = serde_json::from_str(&fs::read_to_string(sidecar_path(csv))?)?;
    let grid = Grid::new(meta.half_width, meta.points)?;
    let reader = BufReader::new(fs::File::open(csv)?);
    let mut values = Vec::with_capacity(grid.points);
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        if k == 0 || line.trim().is_empty() {
            continue;
        }
        let w = line
            .split(',')
            .nth(1)
            .ok_or_else(|| Error::Parse(format!("line {}: expected two columns", k + 1)))?;
        values.push(
            w.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", k + 1)))?,
        );
    }
    Profile::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;
    use std::f64::consts::PI;

    fn grid(t: f64, n: usize) -> Grid {
        Grid::new(t, n).unwrap()
    }

    #[test]
    fn grid_is_odd_and_symmetric() {
        let g = grid(5.0, 100);
        assert_eq!(g.points, 101);
        assert_eq!(g.node(g.center()), 0.0);
        for i in 0..g.points {
            assert_eq!(g.node(i), -g.node(g.points - 1 - i));
        }
        assert!(matches!(
            Grid::new(1.0, 8),
            Err(Error::GridTooCoarse { .. })
        ));
        assert!(Grid::new(-1.0, 33).is_err());
    }

    #[test]
    fn quadratic_second_derivative_is_exact() {
        let p = Profile::from_fn(grid(3.0, 65), |t| t * t).unwrap();
        let d2 = differentiate(&p, Order::Second).unwrap();
        for v in &d2.values {
            assert!((v - 2.0).abs() < 1e-10, "{v}");
        }
        let d1 = differentiate(&p, Order::First).unwrap();
        for (t, v) in p.grid.nodes().iter().zip(&d1.values) {
            assert!((v - 2.0 * t).abs() < 1e-11);
        }
    }

    #[test]
    fn quartic_polynomials_exact_everywhere() {
        let p = Profile::from_fn(grid(2.0, 41), |t| t.powi(4) - 3.0 * t.powi(3) + t).unwrap();
        let d1 = differentiate(&p, Order::First).unwrap();
        let d2 = differentiate(&p, Order::Second).unwrap();
        for (i, t) in p.grid.nodes().into_iter().enumerate() {
            let e1 = 4.0 * t.powi(3) - 9.0 * t * t + 1.0;
            let e2 = 12.0 * t * t - 18.0 * t;
            assert!((d1.values[i] - e1).abs() < 1e-9, "i = {i}");
            assert!((d2.values[i] - e2).abs() < 1e-8, "i = {i}");
        }
    }

    #[test]
    fn sine_second_derivative_accuracy() {
        let p = Profile::from_fn(grid(10.0, 2049), f64::sin).unwrap();
        let d2 = differentiate(&p, Order::Second).unwrap();
        let err = p
            .grid
            .nodes()
            .iter()
            .zip(&d2.values)
            .skip(2)
            .take(p.len() - 4)
            .map(|(t, v)| (v + t.sin()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "err = {err}");
    }

    #[test]
    fn constant_has_zero_slope() {
        let p = Profile::from_fn(grid(4.0, 33), |_| 2.5).unwrap();
        let d1 = differentiate(&p, Order::First).unwrap();
        assert!(d1.values.iter().all(|v| v.abs() < 1e-13));
    }

    #[test]
    fn zero_extension_matches_interior() {
        let p = Profile::from_fn(grid(12.0, 401), |t| (-t * t).exp()).unwrap();
        let a = differentiate_with(&p, Order::Second, Closure::ZeroExtension).unwrap();
        let b = differentiate(&p, Order::Second).unwrap();
        for i in 2..p.len() - 2 {
            assert_eq!(a.values[i], b.values[i]);
        }
    }

    #[test]
    fn simpson_examples() {
        let g = grid(12.0, 2049);
        let gauss = Profile::from_fn(g, |t| (-t * t).exp()).unwrap();
        assert!((integrate(&gauss) - PI.sqrt()).abs() < 1e-10 * PI.sqrt());
        let one = Profile::from_fn(grid(5.0, 101), |_| 1.0).unwrap();
        assert!((integrate(&one) - 10.0).abs() < 1e-12);
        let odd = Profile::from_fn(g, |t| t * (-t * t).exp()).unwrap();
        assert!(integrate(&odd).abs() < 1e-12);
    }

    #[test]
    fn simpson_refinement_order() {
        // Smooth but not periodic-like, so the error is algebraic.
        let f = |t: f64| (-(t - 0.3) * (t - 0.3) / 0.5).exp() + 0.1 * t.powi(5) * (-t * t).exp();
        let exact_fine = integrate(&Profile::from_fn(grid(2.0, 4097), f).unwrap());
        let e1 = (integrate(&Profile::from_fn(grid(2.0, 33), f).unwrap()) - exact_fine).abs();
        let e2 = (integrate(&Profile::from_fn(grid(2.0, 65), f).unwrap()) - exact_fine).abs();
        let order = (e1 / e2).log2();
        assert!(order >= 3.5, "observed order {order}");
    }

    #[test]
    fn ef_transform_of_weighted_gaussian() {
        let p = make_params(5, 4.0, 0.0).unwrap();
        let g = grid(6.0, 241);
        let k = (f64::from(p.n) - 4.0) / 2.0;
        let w = ef_transform(|r: f64| r.powf(-k) * (-(r.ln()).powi(2)).exp(), &p, &g).unwrap();
        for (t, v) in g.nodes().iter().zip(&w.values) {
            let e = (-t * t).exp();
            assert!((v - e).abs() <= 1e-13 * e.max(1e-300) + 1e-300, "t = {t}");
        }
    }

    #[test]
    fn ef_transform_of_bubble() {
        let p = make_params(5, 10.0, 0.0).unwrap();
        let g = grid(20.0, 801);
        let w = ef_transform(|r: f64| (1.0 + r * r).powf(-0.5), &p, &g).unwrap();
        for (t, v) in g.nodes().iter().zip(&w.values) {
            let e = (t.exp() + (-t).exp()).powf(-0.5);
            assert!((v - e).abs() <= 1e-12 * e, "t = {t}");
        }
    }

    #[test]
    fn ef_transform_of_zero_and_nonfinite() {
        let p = make_params(6, 3.0, 0.0).unwrap();
        let g = grid(4.0, 33);
        assert!(ef_transform(|_| 0.0, &p, &g).unwrap().is_zero());
        assert!(matches!(
            ef_transform(|r: f64| 1.0 / (r - 1.0), &p, &g),
            Err(Error::NonFiniteSample { .. })
        ));
    }

    #[test]
    fn untransform_round_trip() {
        for n in [5u32, 6, 9] {
            let p = make_params(n, 3.0, 0.0).unwrap();
            let g = grid(15.0, 1001);
            let w = Profile::from_fn(g, |t| (1.0 + 0.3 * t) * (-0.2 * t * t).exp()).unwrap();
            let u = ef_untransform(&w, &p);
            let back = ef_transform(|r| u.eval(r), &p, &g).unwrap();
            let scale = w.max_abs();
            for (a, b) in w.values.iter().zip(&back.values) {
                assert!((a - b).abs() <= 1e-13 * scale.max(a.abs()), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn interpolation_between_nodes() {
        let g = grid(5.0, 401);
        let w = Profile::from_fn(g, |t| (-t * t).exp()).unwrap();
        for t in [0.0123, -1.777, 3.3333] {
            assert!((interpolate(&w, t) - (-t * t).exp()).abs() < 1e-9);
        }
        assert_eq!(interpolate(&w, 7.0), 0.0);
    }

    #[test]
    fn evenness_is_exact_on_even_data() {
        let g = grid(7.0, 257);
        let w = Profile::from_fn(g, |t| (-t * t).exp() * t.cos()).unwrap();
        assert_eq!(w.asymmetry(), 0.0);
        let odd = Profile::from_fn(g, |t| t * (-t * t).exp()).unwrap();
        assert!(odd.asymmetry() > 0.1);
    }

    #[test]
    fn shifting_and_peak_search() {
        let g = grid(4.0, 41);
        let w = Profile::from_fn(g, |t| (-(t - 1.0) * (t - 1.0)).exp()).unwrap();
        let k = w.argmax_abs() as isize - g.center() as isize;
        assert_eq!(k, 5);
        let centered = w.shifted(k);
        assert_eq!(centered.argmax_abs(), g.center());
        assert_eq!(*centered.values.last().unwrap(), 0.0);
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.csv");
        let g = grid(3.0, 65);
        let w = Profile::from_fn(g, |t| (-t * t).exp() / 3.0).unwrap();
        write_profile(&w, &path).unwrap();
        let back = read_profile(&path).unwrap();
        assert_eq!(back, w);
        let first = fs::read_to_string(&path).unwrap();
        assert!(first.starts_with("t,w\n-3.0000000000000000e0,"));
    }
}
