//! Thomas algorithm for tridiagonal systems.
//!
//! No pivoting is performed. A pivot whose magnitude falls below
//! [`PIVOT_EPS`] is reported as [`Error::SingularSystem`].

use crate::error::{shape_mismatch, Error, Result};

pub const PIVOT_EPS: f64 = 1e-13;

/// `sub[i]` couples row `i + 1` to column `i`; `sup[i]` couples row `i` to
/// column `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    fn check(&self) -> Result<()> {
        check_bands(&self.sub, &self.diag, &self.sup)?;
        if self.rhs.len() != self.diag.len() {
            return Err(shape_mismatch(self.diag.len(), self.rhs.len()));
        }
        Ok(())
    }

    /// `A x` for the banded matrix.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        apply_bands(&self.sub, &self.diag, &self.sup, x)
    }
}

pub fn thomas_solve(sys: &TridiagonalSystem) -> Result<Vec<f64>> {
    sys.check()?;
    TridiagonalFactor::new(&sys.sub, &sys.diag, &sys.sup)?.solve(&sys.rhs)
}

/// Forward-elimination factors, reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct TridiagonalFactor {
    sub: Vec<f64>,
    /// eliminated super-diagonal `c'_i`
    sup_mod: Vec<f64>,
    /// pivots after elimination
    pivots: Vec<f64>,
}

impl TridiagonalFactor {
    pub fn new(sub: &[f64], diag: &[f64], sup: &[f64]) -> Result<Self> {
        check_bands(sub, diag, sup)?;
        let n = diag.len();
        let mut pivots = Vec::with_capacity(n);
        let mut sup_mod = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n {
            let p = if i == 0 {
                diag[0]
            } else {
                diag[i] - sub[i - 1] * sup_mod[i - 1]
            };
            if !(p.abs() > PIVOT_EPS) {
                return Err(Error::SingularSystem { row: i, pivot: p });
            }
            pivots.push(p);
            if i + 1 < n {
                sup_mod.push(sup[i] / p);
            }
        }
        Ok(Self {
            sub: sub.to_vec(),
            sup_mod,
            pivots,
        })
    }

    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    pub fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        let n = self.len();
        if x.len() != n {
            return Err(shape_mismatch(n, x.len()));
        }
        if n == 0 {
            return Ok(());
        }
        x[0] /= self.pivots[0];
        for i in 1..n {
            x[i] = (x[i] - self.sub[i - 1] * x[i - 1]) / self.pivots[i];
        }
        for i in (0..n - 1).rev() {
            x[i] -= self.sup_mod[i] * x[i + 1];
        }
        Ok(())
    }
}

fn check_bands(sub: &[f64], diag: &[f64], sup: &[f64]) -> Result<()> {
    let n = diag.len();
    let off = n.saturating_sub(1);
    if sub.len() != off || sup.len() != off {
        return Err(shape_mismatch(
            format!("off-diagonals of length {off}"),
            format!("sub {} / sup {}", sub.len(), sup.len()),
        ));
    }
    Ok(())
}

fn apply_bands(sub: &[f64], diag: &[f64], sup: &[f64], x: &[f64]) -> Vec<f64> {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut s = diag[i] * x[i];
            if i > 0 {
                s += sub[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += sup[i] * x[i + 1];
            }
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Dense Gaussian elimination with partial pivoting.
    fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
                .unwrap();
            a.swap(k, p);
            b.swap(k, p);
            for i in k + 1..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
                b[i] -= f * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
            x[i] = (b[i] - s) / a[i][i];
        }
        x
    }

    fn to_dense(s: &TridiagonalSystem) -> Vec<Vec<f64>> {
        let n = s.diag.len();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = s.diag[i];
            if i + 1 < n {
                a[i][i + 1] = s.sup[i];
                a[i + 1][i] = s.sub[i];
            }
        }
        a
    }

    fn rel_residual(s: &TridiagonalSystem, x: &[f64]) -> f64 {
        let r = s.apply(x);
        let num = r
            .iter()
            .zip(&s.rhs)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        let den = s.rhs.iter().fold(0.0_f64, |m, b| m.max(b.abs()));
        num / den
    }

    #[test]
    fn identity_returns_rhs() {
        let v = vec![1.5, -2.0, 3.25, 0.0];
        let s = TridiagonalSystem {
            sub: vec![0.0; 3],
            diag: vec![1.0; 4],
            sup: vec![0.0; 3],
            rhs: v.clone(),
        };
        assert_eq!(thomas_solve(&s).unwrap(), v);
    }

    #[test]
    fn three_by_three_matches_dense_oracle() {
        let s = TridiagonalSystem {
            sub: vec![1.0, 1.0],
            diag: vec![2.0, 2.0, 2.0],
            sup: vec![1.0, 1.0],
            rhs: vec![4.0, 8.0, 8.0],
        };
        let x = thomas_solve(&s).unwrap();
        let y = dense_solve(to_dense(&s), s.rhs.clone());
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-14);
        }
        // hand value: x = (1, 2, 3)
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn random_diagonally_dominant_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = 50;
            let s = TridiagonalSystem {
                sub: (0..n - 1).map(|_| rng.random_range(0.0..1.0)).collect(),
                diag: (0..n).map(|_| rng.random_range(2.0..3.0)).collect(),
                sup: (0..n - 1).map(|_| rng.random_range(0.0..1.0)).collect(),
                rhs: (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
            };
            let x = thomas_solve(&s).unwrap();
            assert!(rel_residual(&s, &x) <= 1e-10);
            let y = dense_solve(to_dense(&s), s.rhs.clone());
            for (a, b) in x.iter().zip(&y) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_pivot_is_reported() {
        let s = TridiagonalSystem {
            sub: vec![1.0],
            diag: vec![1.0, 1.0],
            sup: vec![1.0],
            rhs: vec![1.0, 1.0],
        };
        assert!(matches!(
            thomas_solve(&s),
            Err(Error::SingularSystem { row: 1, .. })
        ));
    }

    #[test]
    fn shape_errors() {
        let s = TridiagonalSystem {
            sub: vec![1.0],
            diag: vec![1.0, 1.0, 1.0],
            sup: vec![1.0, 1.0],
            rhs: vec![1.0; 3],
        };
        assert!(matches!(thomas_solve(&s), Err(Error::ShapeMismatch { .. })));
        let f = TridiagonalFactor::new(&[0.0], &[1.0, 1.0], &[0.0]).unwrap();
        assert!(f.solve(&[1.0]).is_err());
    }

    #[test]
    fn factor_reuse_matches_fresh_solves() {
        let (sub, diag, sup) = (vec![0.3; 9], vec![2.0; 10], vec![-0.4; 9]);
        let f = TridiagonalFactor::new(&sub, &diag, &sup).unwrap();
        for k in 0..10 {
            let rhs: Vec<f64> = (0..10).map(|i| ((i * k) as f64).sin()).collect();
            let fresh = thomas_solve(&TridiagonalSystem {
                sub: sub.clone(),
                diag: diag.clone(),
                sup: sup.clone(),
                rhs: rhs.clone(),
            })
            .unwrap();
            assert_eq!(f.solve(&rhs).unwrap(), fresh);
        }
    }
}
