//! Symmetric positive definite pentadiagonal systems via `L D Lᵀ`.

use crate::error::{Error, Result};

/// Factorization `A = L D Lᵀ` of a symmetric pentadiagonal matrix, with `L`
/// unit lower triangular of bandwidth two.
#[derive(Debug, Clone)]
pub struct Pentadiagonal {
    d: Vec<f64>,
    l1: Vec<f64>,
    l2: Vec<f64>,
}

impl Pentadiagonal {
    /// `diag[i] = A[i][i]`, `off1[i] = A[i+1][i]`, `off2[i] = A[i+2][i]`.
    pub fn factor(diag: &[f64], off1: &[f64], off2: &[f64]) -> Result<Pentadiagonal> {
        let n = diag.len();
        if n == 0 || off1.len() + 1 < n || off2.len() + 2 < n {
            return Err(Error::InvalidGrid("inconsistent band lengths".into()));
        }
        let mut d = vec![0.0; n];
        // l1[i] = L[i][i-1], l2[i] = L[i][i-2]; leading entries unused.
        let mut l1 = vec![0.0; n];
        let mut l2 = vec![0.0; n];
        for i in 0..n {
            let mut di = diag[i];
            if i >= 1 {
                di -= l1[i] * l1[i] * d[i - 1];
            }
            if i >= 2 {
                di -= l2[i] * l2[i] * d[i - 2];
            }
            if !(di > 0.0) {
                return Err(Error::InvalidGrid(format!(
                    "banded system is not positive definite (pivot {i})"
                )));
            }
            d[i] = di;
            if i + 2 < n {
                l2[i + 2] = off2[i] / di;
            }
            if i + 1 < n {
                let mut v = off1[i];
                if i >= 1 {
                    v -= l2[i + 1] * l1[i] * d[i - 1];
                }
                l1[i + 1] = v / di;
            }
        }
        Ok(Pentadiagonal { d, l1, l2 })
    }

    /// Factorization of a banded Toeplitz matrix with constant bands.
    pub fn toeplitz(n: usize, diag: f64, off1: f64, off2: f64) -> Result<Pentadiagonal> {
        Pentadiagonal::factor(&vec![diag; n], &vec![off1; n], &vec![off2; n])
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.len();
        assert_eq!(x.len(), n, "right-hand side has the wrong length");
        for i in 1..n {
            let mut v = x[i] - self.l1[i] * x[i - 1];
            if i >= 2 {
                v -= self.l2[i] * x[i - 2];
            }
            x[i] = v;
        }
        for (xi, di) in x.iter_mut().zip(&self.d) {
            *xi /= di;
        }
        for i in (0..n.saturating_sub(1)).rev() {
            let mut v = x[i] - self.l1[i + 1] * x[i + 1];
            if i + 2 < n {
                v -= self.l2[i + 2] * x[i + 2];
            }
            x[i] = v;
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn apply(diag: &[f64], off1: &[f64], off2: &[f64], x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let mut v = diag[i] * x[i];
                if i >= 1 {
                    v += off1[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += off1[i] * x[i + 1];
                }
                if i >= 2 {
                    v += off2[i - 2] * x[i - 2];
                }
                if i + 2 < n {
                    v += off2[i] * x[i + 2];
                }
                v
            })
            .collect()
    }

    #[test]
    fn solves_random_diagonally_dominant_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 3, 5, 40] {
            let off1: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let off2: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let diag: Vec<f64> = (0..n).map(|_| 4.5 + rng.gen_range(0.0..1.0)).collect();
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let b = apply(&diag, &off1, &off2, &x);
            let f = Pentadiagonal::factor(&diag, &off1, &off2).unwrap();
            let got = f.solve(&b);
            for (g, e) in got.iter().zip(&x) {
                assert!((g - e).abs() < 1e-13, "n = {n}");
            }
        }
    }

    #[test]
    fn rejects_indefinite() {
        assert!(Pentadiagonal::toeplitz(10, 1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn shifted_second_difference_is_spd() {
        // (-D2 + s) for the five-point fourth-order stencil, tiny shift.
        let h: f64 = 0.01;
        let c = 1.0 / (12.0 * h * h);
        let f = Pentadiagonal::toeplitz(4097, 30.0 * c + 1e-3, -16.0 * c, c).unwrap();
        let x = f.solve(&vec![1.0; 4097]);
        assert!(x.iter().all(|v| v.is_finite() && *v > 0.0));
    }
}
