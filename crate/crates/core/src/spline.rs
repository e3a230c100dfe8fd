//! Trigonometric cubic B-splines and their boundary-modified variants.
//!
//! Only knot values enter the quadrature systems, so the basis is evaluated
//! through the closed-form knot-value table rather than the piecewise
//! definition. Basis indices are 1-based to match the node numbering: the
//! unmodified splines `T_0 ..= T_{N+1}` are centred on the (extended) nodes
//! `x_0 ..= x_{N+1}`, and the modified basis `σ_1 ..= σ_N` lives on the
//! physical nodes `x_1 ..= x_N`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const DENOM_EPS: f64 = 1e-14;

/// Upper end of the admissible grid spacing, `2π/3` (keeps `sin(3h/2) > 0`).
pub const MAX_SPACING: f64 = 2.0 * PI / 3.0;

/// Knot-value constants of the trigonometric cubic B-spline for spacing `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineCoeffs {
    pub h: f64,
    /// `T_m(x_{m±1})`
    pub a1: f64,
    /// `T_m(x_m)`
    pub a2: f64,
    /// `T'_m(x_{m+1})`
    pub a3: f64,
    /// `T'_m(x_{m-1})`, equal to `-a3`
    pub a4: f64,
    /// `T''_m(x_{m±1})`
    pub a5: f64,
    /// `T''_m(x_m)`
    pub a6: f64,
    pub omega: f64,
}

impl SplineCoeffs {
    pub fn new(h: f64) -> Result<Self> {
        if !(h > 0.0 && h < MAX_SPACING) {
            return Err(Error::Domain(format!(
                "grid spacing h = {h} outside (0, 2π/3)"
            )));
        }
        let (s_half, c_half) = (0.5 * h).sin_cos();
        let (s1, c1) = h.sin_cos();
        let (s3h, c3h) = (1.5 * h).sin_cos();

        let d_a1 = s1 * s3h;
        let d_a2 = 1.0 + 2.0 * c1;
        let d_a5 = 16.0 * s_half * s_half * (2.0 * c_half + c3h);
        let d_a6 = s_half * s_half * (2.0 + 4.0 * c1);
        for (name, d) in [
            ("sin(h)·sin(3h/2)", d_a1),
            ("1 + 2cos(h)", d_a2),
            ("sin(3h/2)", s3h),
            ("a5 denominator", d_a5),
            ("a6 denominator", d_a6),
        ] {
            if d.abs() < DENOM_EPS {
                return Err(Error::Domain(format!(
                    "denominator {name} vanishes at h = {h}"
                )));
            }
        }

        let a1 = s_half * s_half / d_a1;
        let a2 = 2.0 / d_a2;
        let a4 = 3.0 / (4.0 * s3h);
        let a3 = -a4;
        let a5 = (3.0 + 9.0 * c1) / d_a5;
        let a6 = -3.0 * c_half * c_half / d_a6;
        let omega = s_half * s1 * s3h;
        Ok(Self {
            h,
            a1,
            a2,
            a3,
            a4,
            a5,
            a6,
            omega,
        })
    }
}

/// `T_m(x_j)`.
pub fn basis_value(m: usize, j: usize, c: &SplineCoeffs) -> f64 {
    match m.abs_diff(j) {
        0 => c.a2,
        1 => c.a1,
        _ => 0.0,
    }
}

/// `T'_m(x_j)`.
pub fn basis_deriv1(m: usize, j: usize, c: &SplineCoeffs) -> f64 {
    if m == j + 1 {
        c.a4
    } else if j == m + 1 {
        c.a3
    } else {
        0.0
    }
}

/// `T''_m(x_j)`.
pub fn basis_deriv2(m: usize, j: usize, c: &SplineCoeffs) -> f64 {
    match m.abs_diff(j) {
        0 => c.a6,
        1 => c.a5,
        _ => 0.0,
    }
}

/// Boundary-modified basis `σ_1 ..= σ_N` on an `N`-node grid.
///
/// ```text
/// σ_1     = T_1 + 2 T_0
/// σ_2     = T_2 - T_0
/// σ_m     = T_m                 3 <= m <= N-2
/// σ_{N-1} = T_{N-1} - T_{N+1}
/// σ_N     = T_N + 2 T_{N+1}
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedBasis {
    n: usize,
    coeffs: SplineCoeffs,
}

impl ModifiedBasis {
    pub fn new(n: usize, coeffs: SplineCoeffs) -> Result<Self> {
        if n < 4 {
            return Err(Error::Domain(format!(
                "modified basis needs at least 4 nodes, got {n}"
            )));
        }
        Ok(Self { n, coeffs })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &SplineCoeffs {
        &self.coeffs
    }

    pub fn value(&self, m: usize, j: usize) -> Result<f64> {
        self.combine(m, j, basis_value)
    }

    pub fn deriv1(&self, m: usize, j: usize) -> Result<f64> {
        self.combine(m, j, basis_deriv1)
    }

    pub fn deriv2(&self, m: usize, j: usize) -> Result<f64> {
        self.combine(m, j, basis_deriv2)
    }

    fn combine(
        &self,
        m: usize,
        j: usize,
        t: fn(usize, usize, &SplineCoeffs) -> f64,
    ) -> Result<f64> {
        let n = self.n;
        for idx in [m, j] {
            if idx == 0 || idx > n {
                return Err(Error::Index {
                    index: idx,
                    range: format!("1..={n}"),
                });
            }
        }
        let c = &self.coeffs;
        Ok(if m == 1 {
            t(1, j, c) + 2.0 * t(0, j, c)
        } else if m == 2 {
            t(2, j, c) - t(0, j, c)
        } else if m == n - 1 {
            t(n - 1, j, c) - t(n + 1, j, c)
        } else if m == n {
            t(n, j, c) + 2.0 * t(n + 1, j, c)
        } else {
            t(m, j, c)
        })
    }
}
