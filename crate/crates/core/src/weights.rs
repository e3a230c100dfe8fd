//! Differential quadrature weighting coefficients.
//!
//! First-order weights come from the modified trigonometric B-spline basis:
//! for every node `x_i` the weights `a_{iℓ}` satisfy
//!
//! ```text
//! Σ_ℓ a_{iℓ} σ_m(x_ℓ) = σ'_m(x_i)        m = 1..N
//! ```
//!
//! The matrix `M[m][ℓ] = σ_m(x_ℓ)` is tridiagonal and shared by all nodes,
//! so it is factored once and back-substituted `N` times. Second-order
//! weights follow from Shu's recursion on the first-order ones, with the
//! diagonal defined as the negative off-diagonal row sum.

use std::fmt;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::grid::{Grid1D, Grid2D};
use crate::matrix::Matrix;
use crate::spline::{ModifiedBasis, SplineCoeffs};
use crate::thomas::TridiagonalFactor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

/// Dense derivative matrix of order 1 or 2 along one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    pub order: u8,
    pub axis: Axis,
    pub entries: Matrix,
}

impl WeightMatrix {
    pub fn len(&self) -> usize {
        self.entries.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Derivative samples `W f`.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.entries.mul_vec(f)
    }

    pub fn with_axis(mut self, axis: Axis) -> Self {
        self.axis = axis;
        self
    }

    /// Writes `row,col,value` lines (0-based indices, 17 significant digits).
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "row,col,value")?;
        for i in 0..self.len() {
            for (j, v) in self.entries.row(i).iter().enumerate() {
                writeln!(out, "{i},{j},{}", fmt_f64(*v))?;
            }
        }
        Ok(())
    }
}

/// The shared tridiagonal system behind the spline-based weights.
#[derive(Debug, Clone)]
pub struct WeightSystem {
    basis: ModifiedBasis,
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

impl WeightSystem {
    pub fn new(n: usize, coeffs: SplineCoeffs) -> Result<Self> {
        let basis = ModifiedBasis::new(n, coeffs)?;
        let mut sub = Vec::with_capacity(n - 1);
        let mut diag = Vec::with_capacity(n);
        let mut sup = Vec::with_capacity(n - 1);
        for m in 1..=n {
            diag.push(basis.value(m, m)?);
            if m < n {
                sup.push(basis.value(m, m + 1)?);
                sub.push(basis.value(m + 1, m)?);
            }
        }
        Ok(Self {
            basis,
            sub,
            diag,
            sup,
        })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn basis(&self) -> &ModifiedBasis {
        &self.basis
    }

    /// `(sub, diag, sup)` bands of `M[m][ℓ] = σ_m(x_ℓ)`.
    pub fn bands(&self) -> (&[f64], &[f64], &[f64]) {
        (&self.sub, &self.diag, &self.sup)
    }

    /// Right-hand side `[σ'_m(x_i)]_m` for node `i` (0-based).
    pub fn first_order_rhs(&self, i: usize) -> Result<Vec<f64>> {
        (1..=self.len()).map(|m| self.basis.deriv1(m, i + 1)).collect()
    }

    /// Right-hand side `[σ''_m(x_i)]_m` for node `i` (0-based).
    pub fn second_order_rhs(&self, i: usize) -> Result<Vec<f64>> {
        (1..=self.len()).map(|m| self.basis.deriv2(m, i + 1)).collect()
    }

    /// `M w` for a candidate weight row `w`.
    pub fn apply(&self, w: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|m| {
                let mut s = self.diag[m] * w[m];
                if m > 0 {
                    s += self.sub[m - 1] * w[m - 1];
                }
                if m + 1 < n {
                    s += self.sup[m] * w[m + 1];
                }
                s
            })
            .collect()
    }

    fn solve_rows(&self, rhs: impl Fn(usize) -> Result<Vec<f64>>) -> Result<Matrix> {
        let n = self.len();
        let factor = TridiagonalFactor::new(&self.sub, &self.diag, &self.sup)?;
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            let mut row = rhs(i)?;
            factor.solve_in_place(&mut row)?;
            out.row_mut(i).copy_from_slice(&row);
        }
        if !out.is_finite() {
            return Err(Error::NonFinite("weighting coefficients".into()));
        }
        Ok(out)
    }
}

pub fn first_order_weights(grid: &Grid1D, coeffs: &SplineCoeffs) -> Result<WeightMatrix> {
    let sys = WeightSystem::new(grid.len(), *coeffs)?;
    let entries = sys.solve_rows(|i| sys.first_order_rhs(i))?;
    Ok(WeightMatrix {
        order: 1,
        axis: Axis::X,
        entries,
    })
}

/// Shu's recursion for `r = 2`:
///
/// ```text
/// a2_{iℓ} = 2 (a1_{iℓ} a1_{ii} - a1_{iℓ} / (x_i - x_ℓ))     i ≠ ℓ
/// a2_{ii} = -Σ_{ℓ≠i} a2_{iℓ}
/// ```
pub fn second_order_weights(w1: &WeightMatrix, grid: &Grid1D) -> Result<WeightMatrix> {
    if w1.order != 1 {
        return Err(Error::Domain(format!(
            "recursion needs first-order weights, got order {}",
            w1.order
        )));
    }
    let n = grid.len();
    if w1.len() != n {
        return Err(crate::error::shape_mismatch(n, w1.len()));
    }
    let x = grid.nodes();
    let a1 = &w1.entries;
    let mut a2 = Matrix::zeros(n, n);
    for i in 0..n {
        let a1_ii = a1[(i, i)];
        let mut diag = 0.0;
        for l in 0..n {
            if l == i {
                continue;
            }
            let v = 2.0 * (a1[(i, l)] * a1_ii - a1[(i, l)] / (x[i] - x[l]));
            a2[(i, l)] = v;
            diag -= v;
        }
        a2[(i, i)] = diag;
    }
    if !a2.is_finite() {
        return Err(Error::NonFinite("second-order weights".into()));
    }
    Ok(WeightMatrix {
        order: 2,
        axis: w1.axis,
        entries: a2,
    })
}

/// Second-order weights solved directly from the `σ''` system. Kept as a
/// cross-check; the solvers use [`second_order_weights`].
pub fn spline_second_order_weights(grid: &Grid1D, coeffs: &SplineCoeffs) -> Result<WeightMatrix> {
    let sys = WeightSystem::new(grid.len(), *coeffs)?;
    let entries = sys.solve_rows(|i| sys.second_order_rhs(i))?;
    Ok(WeightMatrix {
        order: 2,
        axis: Axis::X,
        entries,
    })
}

/// First- and second-order weights along one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisWeights {
    pub d1: WeightMatrix,
    pub d2: WeightMatrix,
}

impl AxisWeights {
    pub fn build(grid: &Grid1D, axis: Axis) -> Result<Self> {
        let c = grid.coeffs()?;
        Self::build_with(grid, &c, axis)
    }

    fn build_with(grid: &Grid1D, c: &SplineCoeffs, axis: Axis) -> Result<Self> {
        let d1 = first_order_weights(grid, c)?.with_axis(axis);
        let d2 = second_order_weights(&d1, grid)?;
        Ok(Self { d1, d2 })
    }
}

/// `a^(1), a^(2)` along x and `b^(1), b^(2)` along y.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights2D {
    pub ax1: WeightMatrix,
    pub ax2: WeightMatrix,
    pub by1: WeightMatrix,
    pub by2: WeightMatrix,
}

pub fn weights_2d(grid: &Grid2D, cx: &SplineCoeffs, cy: &SplineCoeffs) -> Result<Weights2D> {
    let x = AxisWeights::build_with(&grid.x, cx, Axis::X)?;
    let y = AxisWeights::build_with(&grid.y, cy, Axis::Y)?;
    Ok(Weights2D {
        ax1: x.d1,
        ax2: x.d2,
        by1: y.d1,
        by2: y.d2,
    })
}
