//! Frozen-coefficient matrix stability analysis.
//!
//! Freezing `u ≈ τ0`, `v ≈ κ0` in the nonlinear terms turns the interior
//! semi-discrete system into `dU/dt = B U + H` with
//! `B = -(τ0 + κ0) A1 + 2ν A2`, where `A1`, `A2` are the interior blocks
//! of the first and second order weighting matrices. A step size is
//! acceptable when every `λ dt` lies in `{z : |R(z)| ≤ 1}`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::eigen::eigenvalues;
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::matrix::Matrix;
use crate::ssprk54::{amplification, SchemeCoefficients};
use crate::weights::{Axis, AxisWeights};

/// Slack on `|R(z)| ≤ 1` for roundoff on the region boundary.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Rows and columns `1..n-1` (0-based) of a square matrix.
pub fn interior_block(w: &Matrix) -> Result<Matrix> {
    let n = w.rows();
    if !w.is_square() || n < 4 {
        return Err(Error::Domain(format!(
            "interior block needs a square matrix with at least 4 rows, got {}x{}",
            w.rows(),
            w.cols()
        )));
    }
    Ok(w.block(1, n - 1, 1, n - 1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrozenParams {
    pub tau0: f64,
    pub kappa0: f64,
    pub nu: f64,
    pub dt: f64,
}

impl FrozenParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu >= 0.0) || !self.nu.is_finite() {
            return Err(Error::Config(format!("nu must be >= 0, got {}", self.nu)));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.tau0.is_finite() && self.kappa0.is_finite()) {
            return Err(Error::Config("frozen velocities must be finite".into()));
        }
        Ok(())
    }

    fn speed(&self) -> f64 {
        self.tau0 + self.kappa0
    }
}

/// Interior blocks and their spectra; independent of the frozen parameters.
#[derive(Debug, Clone)]
pub struct Spectra {
    pub a1: Matrix,
    pub a2: Matrix,
    /// sorted by imaginary part
    pub lambda1: Vec<Complex64>,
    /// sorted by real part
    pub lambda2: Vec<Complex64>,
}

fn by_im(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re))
}

fn by_re(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

impl Spectra {
    pub fn compute(grid: &Grid1D) -> Result<Self> {
        let w = AxisWeights::build(grid, Axis::X)?;
        let a1 = interior_block(&w.d1.entries)?;
        let a2 = interior_block(&w.d2.entries)?;
        let (l1, l2) = std::thread::scope(|s| {
            let h = s.spawn(|| eigenvalues(&a1));
            let l2 = eigenvalues(&a2);
            (h.join().expect("eigenvalue thread panicked"), l2)
        });
        let (mut lambda1, mut lambda2) = (l1?, l2?);
        lambda1.sort_by(by_im);
        lambda2.sort_by(by_re);
        Ok(Self { a1, a2, lambda1, lambda2 })
    }

    /// `max |Re λ1| / max |Im λ1|`; zero for a purely imaginary spectrum.
    pub fn imaginary_dominance(&self) -> f64 {
        let re = self.lambda1.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
        let im = self.lambda1.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if im == 0.0 {
            f64::INFINITY
        } else {
            re / im
        }
    }

    /// Paired values `2ν λ2_k - (τ0 + κ0) λ1_k`.
    pub fn paired(&self, p: &FrozenParams) -> Vec<Complex64> {
        self.lambda1
            .iter()
            .zip(&self.lambda2)
            .map(|(l1, l2)| 2.0 * p.nu * l2 - p.speed() * l1)
            .collect()
    }

    /// Exact spectrum of the assembled operator `-(τ0 + κ0) A1 + 2ν A2`.
    pub fn assembled(&self, p: &FrozenParams) -> Result<Vec<Complex64>> {
        let b = self.a1.lin_comb(-p.speed(), &self.a2, 2.0 * p.nu)?;
        let mut e = eigenvalues(&b)?;
        e.sort_by(by_re);
        Ok(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub params: FrozenParams,
    pub lambda1: Vec<Complex64>,
    pub lambda2: Vec<Complex64>,
    pub lambda_b: Vec<Complex64>,
    pub z: Vec<Complex64>,
    pub all_inside: bool,
    pub max_abs_r: f64,
    /// spectrum of the assembled operator and its `max |R(λ dt)|`
    pub assembled: Vec<Complex64>,
    pub assembled_max_abs_r: f64,
}

fn max_abs_r(scheme: &SchemeCoefficients, z: &[Complex64]) -> f64 {
    z.iter().map(|&z| amplification(scheme, z).norm()).fold(0.0, f64::max)
}

fn report(spectra: &Spectra, p: &FrozenParams, scheme: &SchemeCoefficients) -> Result<StabilityReport> {
    p.validate()?;
    let lambda_b = spectra.paired(p);
    let z: Vec<Complex64> = lambda_b.iter().map(|l| l * p.dt).collect();
    let max_r = max_abs_r(scheme, &z);
    let assembled = spectra.assembled(p)?;
    let za: Vec<Complex64> = assembled.iter().map(|l| l * p.dt).collect();
    Ok(StabilityReport {
        params: *p,
        lambda1: spectra.lambda1.clone(),
        lambda2: spectra.lambda2.clone(),
        lambda_b,
        z,
        all_inside: max_r <= 1.0 + MEMBERSHIP_TOL,
        max_abs_r: max_r,
        assembled_max_abs_r: max_abs_r(scheme, &za),
        assembled,
    })
}

pub fn analyze(grid: &Grid1D, params: &FrozenParams, scheme: &SchemeCoefficients) -> Result<StabilityReport> {
    params.validate()?;
    report(&Spectra::compute(grid)?, params, scheme)
}

/// Reports for several step sizes, sharing one set of spectra.
pub fn sweep(
    grid: &Grid1D,
    params: &FrozenParams,
    dts: &[f64],
    scheme: &SchemeCoefficients,
) -> Result<(Spectra, Vec<StabilityReport>)> {
    let spectra = Spectra::compute(grid)?;
    let reports = dts
        .iter()
        .map(|&dt| report(&spectra, &FrozenParams { dt, ..*params }, scheme))
        .collect::<Result<_>>()?;
    Ok((spectra, reports))
}

pub const DT_FLOOR: f64 = 1e-9;
pub const DT_CEIL: f64 = 10.0;

/// Largest `dt ∈ (0, 10]` whose paired values all lie in the stability
/// region, found by geometric bisection to relative width 1e-3.
pub fn max_stable_dt(grid: &Grid1D, nu: f64, tau0: f64, kappa0: f64, scheme: &SchemeCoefficients) -> Result<f64> {
    let spectra = Spectra::compute(grid)?;
    max_stable_dt_for(&spectra, nu, tau0, kappa0, scheme)
}

pub fn max_stable_dt_for(spectra: &Spectra, nu: f64, tau0: f64, kappa0: f64, scheme: &SchemeCoefficients) -> Result<f64> {
    let base = FrozenParams { tau0, kappa0, nu, dt: 1.0 };
    base.validate()?;
    let lam = spectra.paired(&base);
    let inside = |dt: f64| {
        let z: Vec<Complex64> = lam.iter().map(|l| l * dt).collect();
        max_abs_r(scheme, &z) <= 1.0 + MEMBERSHIP_TOL
    };
    if !inside(DT_FLOOR) {
        return Err(Error::NoStableDt { dt: DT_FLOOR });
    }
    if inside(DT_CEIL) {
        return Ok(DT_CEIL);
    }
    let (mut lo, mut hi) = (DT_FLOOR, DT_CEIL);
    while (hi - lo) > 1e-3 * hi {
        let mid = (lo * hi).sqrt();
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Largest `σ_min(M - λI) / ‖M‖_F` over up to `samples` eigenvalues spread
/// through `eigs`. Small values confirm the eigenvalues.
pub fn spectrum_residual(m: &Matrix, eigs: &[Complex64], samples: usize) -> Result<f64> {
    if !m.is_square() || m.rows() != eigs.len() {
        return Err(crate::error::shape_mismatch(m.rows(), eigs.len()));
    }
    let n = m.rows();
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let picks: Vec<usize> = match (n, samples) {
        (0, _) | (_, 0) => Vec::new(),
        _ if samples >= n => (0..n).collect(),
        _ => (0..samples).map(|k| k * (n - 1) / (samples - 1).max(1)).collect(),
    };
    let mut worst = 0.0_f64;
    for k in picks {
        let lam = eigs[k];
        let shifted = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
            let d = if i == j { lam } else { Complex64::new(0.0, 0.0) };
            Complex64::new(m[(i, j)], 0.0) - d
        });
        let smin = shifted.singular_values().iter().cloned().fold(f64::INFINITY, f64::min);
        worst = worst.max(smin / scale);
    }
    Ok(worst)
}

/// Validation of the 1D reduction on a small tensor grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KroneckerCheck {
    pub eigenvalues: Vec<Complex64>,
    /// largest distance from a 2D eigenvalue to the nearest `μ_i + ν_j`
    pub max_distance: f64,
}

pub const KRON_MAX_N: usize = 12;

/// Assembles the interior 2D frozen operator
/// `-τ0 A1x ⊗ I - κ0 I ⊗ A1y + ν (A2x ⊗ I + I ⊗ A2y)` and compares its
/// spectrum with the sums of the 1D pieces' spectra.
pub fn kronecker_check(x: &Grid1D, y: &Grid1D, p: &FrozenParams) -> Result<KroneckerCheck> {
    p.validate()?;
    if x.len() > KRON_MAX_N || y.len() > KRON_MAX_N {
        return Err(Error::Domain(format!(
            "2D validation limited to {KRON_MAX_N} nodes per axis"
        )));
    }
    let piece = |g: &Grid1D, speed: f64| -> Result<Matrix> {
        let w = AxisWeights::build(g, Axis::X)?;
        let a1 = interior_block(&w.d1.entries)?;
        let a2 = interior_block(&w.d2.entries)?;
        a1.lin_comb(-speed, &a2, p.nu)
    };
    let (px, py) = (piece(x, p.tau0)?, piece(y, p.kappa0)?);
    let (ix, iy) = (Matrix::identity(px.rows()), Matrix::identity(py.rows()));
    let b = px.kron(&iy).lin_comb(1.0, &ix.kron(&py), 1.0)?;
    let eigs = eigenvalues(&b)?;
    let (mx, my) = (eigenvalues(&px)?, eigenvalues(&py)?);
    let max_distance = eigs
        .iter()
        .map(|e| {
            mx.iter()
                .flat_map(|a| my.iter().map(move |b| (e - (a + b)).norm()))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    Ok(KroneckerCheck { eigenvalues: eigs, max_distance })
}
