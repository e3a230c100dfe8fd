//! Semi-discrete coupled viscous Burgers' systems.
//!
//! 1D:
//! ```text
//! u_t = u_xx - η u u_x - α (u v)_x
//! v_t = v_xx - ξ v v_x - β (u v)_x
//! ```
//! 2D:
//! ```text
//! u_t + u u_x + v u_y = ν (u_xx + u_yy)
//! v_t + u v_x + v v_y = ν (v_xx + v_yy)
//! ```
//! Both are discretised with Dirichlet data on the boundary nodes. Interior
//! sums run over interior nodes only; the boundary columns are collected
//! into the forcing terms `F` and `G`, with the convection coefficients
//! frozen at the current nodal values.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{shape_mismatch, Error, Result};
use crate::grid::{Grid1D, Grid2D};
use crate::ssprk54::{OdeSystem, StageTime};
use crate::weights::{weights_2d, Axis, AxisWeights, WeightMatrix, Weights2D};

pub type FnX = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type FnXT = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type FnXY = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type FnXYT = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Which time the Dirichlet data is evaluated at inside a multi-stage step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    /// Base time of the step for every stage.
    #[default]
    Base,
    /// Nominal time of each stage.
    Stage,
}

impl BoundaryPolicy {
    pub fn pick(self, t: StageTime) -> f64 {
        match self {
            BoundaryPolicy::Base => t.base,
            BoundaryPolicy::Stage => t.stage,
        }
    }
}

impl FromStr for BoundaryPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "base" => Ok(Self::Base),
            "stage" => Ok(Self::Stage),
            _ => Err(Error::Config(format!("unknown boundary policy `{s}`"))),
        }
    }
}

impl fmt::Display for BoundaryPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Base => "base",
            Self::Stage => "stage",
        })
    }
}

/// Form of the 1D `G_i` boundary forcing.
///
/// `Printed` collects exactly the boundary columns of the full sums:
/// `-β u_i (a v)_bnd - β v_i (a u)_bnd`. `Symmetric` swaps the columns of
/// those two terms, `-β u_i (a u)_bnd - β v_i (a v)_bnd`; it does not match
/// the full-sum discretisation and exists for experiments only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GForm {
    #[default]
    Printed,
    Symmetric,
}

impl FromStr for GForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(Self::Printed),
            "symmetric" => Ok(Self::Symmetric),
            _ => Err(Error::Config(format!("unknown G form `{s}`"))),
        }
    }
}

impl fmt::Display for GForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Printed => "printed",
            Self::Symmetric => "symmetric",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RhsOptions {
    pub boundary: BoundaryPolicy,
    pub gform: GForm,
}

#[derive(Clone)]
pub struct Problem1D {
    pub name: String,
    pub eta: f64,
    pub xi: f64,
    pub alpha: f64,
    pub beta: f64,
    pub domain: (f64, f64),
    pub phi: FnX,
    pub psi: FnX,
    /// `u(a, t)`
    pub g1: FnX,
    /// `u(b, t)`
    pub g2: FnX,
    /// `v(a, t)`
    pub g3: FnX,
    /// `v(b, t)`
    pub g4: FnX,
    pub exact_u: Option<FnXT>,
    pub exact_v: Option<FnXT>,
}

impl fmt::Debug for Problem1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem1D")
            .field("name", &self.name)
            .field("eta", &self.eta)
            .field("xi", &self.xi)
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

/// Dirichlet data on the four edges of a rectangle. Corners take the value
/// of the `x = a` / `x = b` edges.
#[derive(Clone)]
pub struct EdgeTraces {
    /// value on `x = a` as a function of `(y, t)`
    pub x_lo: FnXT,
    /// value on `x = b` as a function of `(y, t)`
    pub x_hi: FnXT,
    /// value on `y = c` as a function of `(x, t)`
    pub y_lo: FnXT,
    /// value on `y = d` as a function of `(x, t)`
    pub y_hi: FnXT,
}

impl EdgeTraces {
    /// Traces of a function defined on the whole rectangle.
    pub fn from_field(f: FnXYT, domain: [f64; 4]) -> Self {
        let [a, b, c, d] = domain;
        let (f1, f2, f3, f4) = (f.clone(), f.clone(), f.clone(), f);
        Self {
            x_lo: Arc::new(move |y, t| f1(a, y, t)),
            x_hi: Arc::new(move |y, t| f2(b, y, t)),
            y_lo: Arc::new(move |x, t| f3(x, c, t)),
            y_hi: Arc::new(move |x, t| f4(x, d, t)),
        }
    }

    /// Largest disagreement between the x-edge and y-edge traces at the
    /// four corners.
    pub fn corner_mismatch(&self, domain: [f64; 4], t: f64) -> f64 {
        let [a, b, c, d] = domain;
        [
            (self.x_lo)(c, t) - (self.y_lo)(a, t),
            (self.x_lo)(d, t) - (self.y_hi)(a, t),
            (self.x_hi)(c, t) - (self.y_lo)(b, t),
            (self.x_hi)(d, t) - (self.y_hi)(b, t),
        ]
        .iter()
        .fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Clone)]
pub struct Problem2D {
    pub name: String,
    pub nu: f64,
    pub re: f64,
    /// `[a, b, c, d]` for `[a, b] × [c, d]`
    pub domain: [f64; 4],
    pub phi: FnXY,
    pub psi: FnXY,
    pub bc_u: EdgeTraces,
    pub bc_v: EdgeTraces,
    pub exact_u: Option<FnXYT>,
    pub exact_v: Option<FnXYT>,
    /// Times at or beyond this are outside the problem's validity.
    pub valid_until: Option<f64>,
}

impl Problem2D {
    pub fn check_time(&self, t: f64) -> Result<()> {
        match self.valid_until {
            Some(limit) if t >= limit => Err(Error::Domain(format!(
                "{} is only defined for t < {limit}",
                self.name
            ))),
            _ => Ok(()),
        }
    }

    pub fn has_exact(&self) -> bool {
        self.exact_u.is_some() && self.exact_v.is_some()
    }
}

impl fmt::Debug for Problem2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem2D")
            .field("name", &self.name)
            .field("nu", &self.nu)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct State1D {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl State1D {
    pub fn zeros(n: usize) -> Self {
        Self {
            u: vec![0.0; n],
            v: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = self.u.clone();
        out.extend_from_slice(&self.v);
        out
    }

    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if flat.len() % 2 != 0 {
            return Err(shape_mismatch("even length", flat.len()));
        }
        let (u, v) = flat.split_at(flat.len() / 2);
        Ok(Self {
            u: u.to_vec(),
            v: v.to_vec(),
        })
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(&self.v).all(|x| x.is_finite())
    }
}

/// Velocity fields on an `nx × ny` grid, x index major.
#[derive(Debug, Clone, PartialEq)]
pub struct State2D {
    pub nx: usize,
    pub ny: usize,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl State2D {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        Self {
            nx,
            ny,
            u: vec![0.0; nx * ny],
            v: vec![0.0; nx * ny],
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = self.u.clone();
        out.extend_from_slice(&self.v);
        out
    }

    pub fn from_flat(nx: usize, ny: usize, flat: &[f64]) -> Result<Self> {
        if flat.len() != 2 * nx * ny {
            return Err(shape_mismatch(2 * nx * ny, flat.len()));
        }
        let (u, v) = flat.split_at(nx * ny);
        Ok(Self {
            nx,
            ny,
            u: u.to_vec(),
            v: v.to_vec(),
        })
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }
}

fn check_1d(state: &State1D, w1: &WeightMatrix, w2: &WeightMatrix, grid: &Grid1D) -> Result<()> {
    let n = grid.len();
    for (what, len) in [
        ("u", state.u.len()),
        ("v", state.v.len()),
        ("first-order weights", w1.len()),
        ("second-order weights", w2.len()),
    ] {
        if len != n {
            return Err(shape_mismatch(format!("{what} of length {n}"), len));
        }
    }
    Ok(())
}

/// Interior time derivatives of the 1D system, interior sums plus boundary
/// forcing. Boundary entries of `state` must already hold the Dirichlet
/// data; boundary entries of the result are zero.
pub fn rhs_1d(
    state: &State1D,
    problem: &Problem1D,
    w1: &WeightMatrix,
    w2: &WeightMatrix,
    grid: &Grid1D,
    gform: GForm,
) -> Result<State1D> {
    check_1d(state, w1, w2, grid)?;
    let n = grid.len();
    let (u, v) = (&state.u, &state.v);
    let (a1, a2) = (&w1.entries, &w2.entries);
    let last = n - 1;
    let mut out = State1D::zeros(n);
    for i in 1..last {
        let r1 = a1.row(i);
        let r2 = a2.row(i);
        let (mut su1, mut sv1, mut su2, mut sv2) = (0.0, 0.0, 0.0, 0.0);
        for l in 1..last {
            su1 += r1[l] * u[l];
            sv1 += r1[l] * v[l];
            su2 += r2[l] * u[l];
            sv2 += r2[l] * v[l];
        }
        let bu1 = r1[0] * u[0] + r1[last] * u[last];
        let bv1 = r1[0] * v[0] + r1[last] * v[last];
        let bu2 = r2[0] * u[0] + r2[last] * u[last];
        let bv2 = r2[0] * v[0] + r2[last] * v[last];

        let eta_i = problem.eta * u[i];
        let xi_i = problem.xi * v[i];
        let alpha_i = problem.alpha * u[i];
        let alpha_p = problem.alpha * v[i];
        let beta_i = problem.beta * u[i];
        let beta_p = problem.beta * v[i];

        let f = bu2 - eta_i * bu1 - alpha_i * bv1 - alpha_p * bu1;
        let g = match gform {
            GForm::Printed => bv2 - xi_i * bv1 - beta_i * bv1 - beta_p * bu1,
            GForm::Symmetric => bv2 - xi_i * bv1 - beta_i * bu1 - beta_p * bv1,
        };
        out.u[i] = su2 - eta_i * su1 - alpha_i * sv1 - alpha_p * su1 + f;
        out.v[i] = sv2 - xi_i * sv1 - beta_i * sv1 - beta_p * su1 + g;
    }
    Ok(out)
}

/// Same derivatives computed from full sums over all nodes, without the
/// interior/boundary split.
pub fn rhs_1d_full(
    state: &State1D,
    problem: &Problem1D,
    w1: &WeightMatrix,
    w2: &WeightMatrix,
    grid: &Grid1D,
) -> Result<State1D> {
    check_1d(state, w1, w2, grid)?;
    let n = grid.len();
    let ux = w1.apply(&state.u)?;
    let vx = w1.apply(&state.v)?;
    let uxx = w2.apply(&state.u)?;
    let vxx = w2.apply(&state.v)?;
    let mut out = State1D::zeros(n);
    for i in 1..n - 1 {
        let (u, v) = (state.u[i], state.v[i]);
        let uv_x = u * vx[i] + v * ux[i];
        out.u[i] = uxx[i] - problem.eta * u * ux[i] - problem.alpha * uv_x;
        out.v[i] = vxx[i] - problem.xi * v * vx[i] - problem.beta * uv_x;
    }
    Ok(out)
}

pub fn apply_dirichlet_1d(state: &mut State1D, t: f64, problem: &Problem1D) {
    let n = state.len();
    state.u[0] = (problem.g1)(t);
    state.u[n - 1] = (problem.g2)(t);
    state.v[0] = (problem.g3)(t);
    state.v[n - 1] = (problem.g4)(t);
}

pub fn apply_dirichlet_2d(state: &mut State2D, t: f64, problem: &Problem2D, grid: &Grid2D) {
    let (nx, ny) = (grid.nx(), grid.ny());
    let (xs, ys) = (grid.x.nodes(), grid.y.nodes());
    for (field, tr) in [(&mut state.u, &problem.bc_u), (&mut state.v, &problem.bc_v)] {
        for (i, &x) in xs.iter().enumerate() {
            field[i * ny] = (tr.y_lo)(x, t);
            field[i * ny + ny - 1] = (tr.y_hi)(x, t);
        }
        for (j, &y) in ys.iter().enumerate() {
            field[j] = (tr.x_lo)(y, t);
            field[(nx - 1) * ny + j] = (tr.x_hi)(y, t);
        }
    }
}

/// Interior time derivatives of the 2D system. Boundary ring entries of
/// `state` must hold the Dirichlet data.
///
/// x-derivatives are accumulated row-by-row (`out[i, :] += a[i, k] f[k, :]`)
/// and y-derivatives as dot products of contiguous rows, so every inner
/// loop walks memory with unit stride.
pub fn rhs_2d(state: &State2D, problem: &Problem2D, w: &Weights2D, grid: &Grid2D) -> Result<State2D> {
    let (nx, ny) = (grid.nx(), grid.ny());
    if state.nx != nx || state.ny != ny || state.u.len() != nx * ny || state.v.len() != nx * ny {
        return Err(shape_mismatch(
            format!("{nx}x{ny} fields"),
            format!("{}x{} (u {}, v {})", state.nx, state.ny, state.u.len(), state.v.len()),
        ));
    }
    for (m, n) in [(&w.ax1, nx), (&w.ax2, nx), (&w.by1, ny), (&w.by2, ny)] {
        if m.len() != n {
            return Err(shape_mismatch(format!("{n}x{n} weights"), m.len()));
        }
    }
    let nu = problem.nu;
    let (a1, a2, b1, b2) = (&w.ax1.entries, &w.ax2.entries, &w.by1.entries, &w.by2.entries);
    let (u, v) = (&state.u, &state.v);
    let (xl, yl) = (nx - 1, ny - 1);
    let mut out = State2D::zeros(nx, ny);

    // x-direction sums for one interior row i, columns 0..ny
    let mut ux = vec![0.0; ny];
    let mut vx = vec![0.0; ny];
    let mut uxx = vec![0.0; ny];
    let mut vxx = vec![0.0; ny];
    let mut ux_b = vec![0.0; ny];
    let mut vx_b = vec![0.0; ny];
    let mut uxx_b = vec![0.0; ny];
    let mut vxx_b = vec![0.0; ny];

    for i in 1..xl {
        for buf in [&mut ux, &mut vx, &mut uxx, &mut vxx] {
            buf.fill(0.0);
        }
        let (r1, r2) = (a1.row(i), a2.row(i));
        for k in 1..xl {
            let (c1, c2) = (r1[k], r2[k]);
            let uk = &u[k * ny..(k + 1) * ny];
            let vk = &v[k * ny..(k + 1) * ny];
            for j in 0..ny {
                ux[j] += c1 * uk[j];
                vx[j] += c1 * vk[j];
                uxx[j] += c2 * uk[j];
                vxx[j] += c2 * vk[j];
            }
        }
        let (u0, ul) = (&u[0..ny], &u[xl * ny..]);
        let (v0, vl) = (&v[0..ny], &v[xl * ny..]);
        for j in 0..ny {
            ux_b[j] = r1[0] * u0[j] + r1[xl] * ul[j];
            vx_b[j] = r1[0] * v0[j] + r1[xl] * vl[j];
            uxx_b[j] = r2[0] * u0[j] + r2[xl] * ul[j];
            vxx_b[j] = r2[0] * v0[j] + r2[xl] * vl[j];
        }

        let urow = &u[i * ny..(i + 1) * ny];
        let vrow = &v[i * ny..(i + 1) * ny];
        for j in 1..yl {
            let (q1, q2) = (b1.row(j), b2.row(j));
            let (mut uy, mut vy, mut uyy, mut vyy) = (0.0, 0.0, 0.0, 0.0);
            for k in 1..yl {
                uy += q1[k] * urow[k];
                vy += q1[k] * vrow[k];
                uyy += q2[k] * urow[k];
                vyy += q2[k] * vrow[k];
            }
            let uy_b = q1[0] * urow[0] + q1[yl] * urow[yl];
            let vy_b = q1[0] * vrow[0] + q1[yl] * vrow[yl];
            let uyy_b = q2[0] * urow[0] + q2[yl] * urow[yl];
            let vyy_b = q2[0] * vrow[0] + q2[yl] * vrow[yl];

            let tau = urow[j];
            let kappa = vrow[j];
            let f = nu * (uxx_b[j] + uyy_b) - tau * ux_b[j] - kappa * uy_b;
            let g = nu * (vxx_b[j] + vyy_b) - tau * vx_b[j] - kappa * vy_b;
            let idx = i * ny + j;
            out.u[idx] = nu * (uxx[j] + uyy) - tau * ux[j] - kappa * uy + f;
            out.v[idx] = nu * (vxx[j] + vyy) - tau * vx[j] - kappa * vy + g;
        }
    }
    Ok(out)
}

/// Full-sum 2D derivatives, for cross-checking [`rhs_2d`].
pub fn rhs_2d_full(state: &State2D, problem: &Problem2D, w: &Weights2D, grid: &Grid2D) -> Result<State2D> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut out = State2D::zeros(nx, ny);
    let dx = |m: &WeightMatrix, f: &[f64], i: usize, j: usize| -> f64 {
        (0..nx).map(|k| m.entries[(i, k)] * f[k * ny + j]).sum()
    };
    let dy = |m: &WeightMatrix, f: &[f64], i: usize, j: usize| -> f64 {
        (0..ny).map(|k| m.entries[(j, k)] * f[i * ny + k]).sum()
    };
    let (u, v) = (&state.u, &state.v);
    for i in 1..nx - 1 {
        for j in 1..ny - 1 {
            let idx = i * ny + j;
            let lap_u = dx(&w.ax2, u, i, j) + dy(&w.by2, u, i, j);
            let lap_v = dx(&w.ax2, v, i, j) + dy(&w.by2, v, i, j);
            out.u[idx] = problem.nu * lap_u - u[idx] * dx(&w.ax1, u, i, j) - v[idx] * dy(&w.by1, u, i, j);
            out.v[idx] = problem.nu * lap_v - u[idx] * dx(&w.ax1, v, i, j) - v[idx] * dy(&w.by1, v, i, j);
        }
    }
    Ok(out)
}

/// 1D system bound to a grid and its weights, usable by the integrator.
/// The flat state is `u` followed by `v`.
#[derive(Debug, Clone)]
pub struct Burgers1D {
    pub problem: Problem1D,
    pub grid: Grid1D,
    pub weights: AxisWeights,
    pub options: RhsOptions,
}

impl Burgers1D {
    pub fn new(problem: Problem1D, n: usize, options: RhsOptions) -> Result<Self> {
        let grid = Grid1D::new(problem.domain.0, problem.domain.1, n)?;
        let weights = AxisWeights::build(&grid, Axis::X)?;
        Ok(Self {
            problem,
            grid,
            weights,
            options,
        })
    }

    pub fn initial_state(&self) -> State1D {
        let x = self.grid.nodes();
        State1D {
            u: x.iter().map(|&x| (self.problem.phi)(x)).collect(),
            v: x.iter().map(|&x| (self.problem.psi)(x)).collect(),
        }
    }

    pub fn exact_state(&self, t: f64) -> Option<State1D> {
        let (eu, ev) = (self.problem.exact_u.as_ref()?, self.problem.exact_v.as_ref()?);
        let x = self.grid.nodes();
        Some(State1D {
            u: x.iter().map(|&x| eu(x, t)).collect(),
            v: x.iter().map(|&x| ev(x, t)).collect(),
        })
    }

    pub fn rhs(&self, state: &State1D, t: f64) -> Result<State1D> {
        let mut s = state.clone();
        apply_dirichlet_1d(&mut s, t, &self.problem);
        rhs_1d(
            &s,
            &self.problem,
            &self.weights.d1,
            &self.weights.d2,
            &self.grid,
            self.options.gform,
        )
    }
}

impl OdeSystem for Burgers1D {
    fn rhs(&self, time: StageTime, u: &[f64], du: &mut [f64]) -> Result<()> {
        let state = State1D::from_flat(u)?;
        let d = Burgers1D::rhs(self, &state, self.options.boundary.pick(time))?;
        let n = d.len();
        du[..n].copy_from_slice(&d.u);
        du[n..].copy_from_slice(&d.v);
        Ok(())
    }
}

/// 2D system bound to a grid and its weights. The flat state is the `u`
/// field followed by the `v` field.
#[derive(Debug, Clone)]
pub struct Burgers2D {
    pub problem: Problem2D,
    pub grid: Grid2D,
    pub weights: Weights2D,
    pub options: RhsOptions,
}

impl Burgers2D {
    pub fn new(problem: Problem2D, nx: usize, ny: usize, options: RhsOptions) -> Result<Self> {
        let [a, b, c, d] = problem.domain;
        let grid = Grid2D::new(Grid1D::new(a, b, nx)?, Grid1D::new(c, d, ny)?);
        let weights = weights_2d(&grid, &grid.x.coeffs()?, &grid.y.coeffs()?)?;
        Ok(Self {
            problem,
            grid,
            weights,
            options,
        })
    }

    pub fn initial_state(&self) -> State2D {
        State2D {
            nx: self.grid.nx(),
            ny: self.grid.ny(),
            u: self.grid.sample(|x, y| (self.problem.phi)(x, y)),
            v: self.grid.sample(|x, y| (self.problem.psi)(x, y)),
        }
    }

    pub fn exact_state(&self, t: f64) -> Option<State2D> {
        let (eu, ev) = (self.problem.exact_u.as_ref()?, self.problem.exact_v.as_ref()?);
        Some(State2D {
            nx: self.grid.nx(),
            ny: self.grid.ny(),
            u: self.grid.sample(|x, y| eu(x, y, t)),
            v: self.grid.sample(|x, y| ev(x, y, t)),
        })
    }

    pub fn rhs(&self, state: &State2D, t: f64) -> Result<State2D> {
        let mut s = state.clone();
        apply_dirichlet_2d(&mut s, t, &self.problem, &self.grid);
        rhs_2d(&s, &self.problem, &self.weights, &self.grid)
    }
}

impl OdeSystem for Burgers2D {
    fn rhs(&self, time: StageTime, u: &[f64], du: &mut [f64]) -> Result<()> {
        let state = State2D::from_flat(self.grid.nx(), self.grid.ny(), u)?;
        let d = Burgers2D::rhs(self, &state, self.options.boundary.pick(time))?;
        let m = d.u.len();
        du[..m].copy_from_slice(&d.u);
        du[m..].copy_from_slice(&d.v);
        Ok(())
    }
}
