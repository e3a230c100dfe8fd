//! Time-marching drivers for the 1D and 2D systems.

use crate::burgers::{apply_dirichlet_1d, apply_dirichlet_2d, Burgers1D, Burgers2D, State1D, State2D};
use crate::error::{Error, Result};
use crate::problems::{error_norms, ErrorNorms, ErrorReport};
use crate::ssprk54::{step, IntegrationConfig, OdeSystem, SchemeCoefficients};

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<S> {
    pub step: usize,
    pub t: f64,
    pub state: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<S> {
    /// In ascending time. Always ends with the final state.
    pub snapshots: Vec<Snapshot<S>>,
    pub steps: usize,
}

impl<S> Solution<S> {
    pub fn last(&self) -> &Snapshot<S> {
        self.snapshots.last().expect("a solution has at least one snapshot")
    }
}

/// Maps snapshot times onto step indices. Times must lie in `[0, t_end]`
/// on the `dt` lattice; `t_end` is always included.
pub fn snapshot_steps(config: &IntegrationConfig, times: &[f64]) -> Result<Vec<usize>> {
    let total = config.steps()?;
    let mut out = Vec::with_capacity(times.len() + 1);
    for &t in times {
        let tol = 1e-9 * config.dt;
        if !(t >= config.t0 - tol && t <= config.t_end + tol) {
            return Err(Error::Config(format!(
                "snapshot time {t} outside [{}, {}]",
                config.t0, config.t_end
            )));
        }
        let r = (t - config.t0) / config.dt;
        let k = r.round();
        if ((r - k) * config.dt).abs() > tol {
            return Err(Error::Config(format!("snapshot time {t} is not a multiple of dt = {}", config.dt)));
        }
        out.push(k as usize);
    }
    out.push(total);
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn march<S, T>(
    sys: &S,
    u0: Vec<f64>,
    config: &IntegrationConfig,
    snapshots: &[f64],
    scheme: &SchemeCoefficients,
    mut finish: impl FnMut(&[f64], f64) -> Result<T>,
) -> Result<Solution<T>>
where
    S: OdeSystem + ?Sized,
{
    let steps = config.steps()?;
    let wanted = snapshot_steps(config, snapshots)?;
    let mut next = wanted.iter().peekable();
    let mut out = Vec::with_capacity(wanted.len());
    let mut u = u0;
    for k in 0..=steps {
        if k > 0 {
            u = step(scheme, &u, config.time_at(k - 1), config.dt, sys)?;
        }
        if next.peek() == Some(&&k) {
            next.next();
            let t = config.time_at(k);
            out.push(Snapshot {
                step: k,
                t,
                state: finish(&u, t)?,
            });
        }
    }
    Ok(Solution { snapshots: out, steps })
}

/// Integrates from the sampled initial data. Boundary entries of every
/// returned state hold the Dirichlet data at the snapshot time.
pub fn solve_1d(
    sys: &Burgers1D,
    config: &IntegrationConfig,
    snapshots: &[f64],
    scheme: &SchemeCoefficients,
) -> Result<Solution<State1D>> {
    let mut s0 = sys.initial_state();
    apply_dirichlet_1d(&mut s0, config.t0, &sys.problem);
    march(sys, s0.to_flat(), config, snapshots, scheme, |u, t| {
        let mut s = State1D::from_flat(u)?;
        apply_dirichlet_1d(&mut s, t, &sys.problem);
        Ok(s)
    })
}

pub fn solve_2d(
    sys: &Burgers2D,
    config: &IntegrationConfig,
    snapshots: &[f64],
    scheme: &SchemeCoefficients,
) -> Result<Solution<State2D>> {
    sys.problem.check_time(config.t_end)?;
    let (nx, ny) = (sys.grid.nx(), sys.grid.ny());
    let mut s0 = sys.initial_state();
    apply_dirichlet_2d(&mut s0, config.t0, &sys.problem, &sys.grid);
    march(sys, s0.to_flat(), config, snapshots, scheme, |u, t| {
        let mut s = State2D::from_flat(nx, ny, u)?;
        apply_dirichlet_2d(&mut s, t, &sys.problem, &sys.grid);
        Ok(s)
    })
}

/// Errors of `u` and `v` against the exact solution, if there is one.
pub fn errors_1d(sys: &Burgers1D, state: &State1D, t: f64) -> Result<Option<(ErrorNorms, ErrorNorms)>> {
    let Some(exact) = sys.exact_state(t) else {
        return Ok(None);
    };
    let h = sys.grid.spacing();
    Ok(Some((
        error_norms(&state.u, &exact.u, h)?,
        error_norms(&state.v, &exact.v, h)?,
    )))
}

pub fn errors_2d(sys: &Burgers2D, state: &State2D, t: f64) -> Result<Option<(ErrorNorms, ErrorNorms)>> {
    let Some(exact) = sys.exact_state(t) else {
        return Ok(None);
    };
    let w = sys.grid.x.spacing() * sys.grid.y.spacing();
    Ok(Some((
        error_norms(&state.u, &exact.u, w)?,
        error_norms(&state.v, &exact.v, w)?,
    )))
}

/// `u`-error report at the last snapshot of a 1D run.
pub fn report_1d(sys: &Burgers1D, sol: &Solution<State1D>, dt: f64) -> Result<ErrorReport> {
    let last = sol.last();
    let (eu, _) = errors_1d(sys, &last.state, last.t)?
        .ok_or_else(|| Error::Config(format!("problem {} has no exact solution", sys.problem.name)))?;
    Ok(ErrorReport::new(sys.grid.len(), dt, last.t, eu))
}

pub fn report_2d(sys: &Burgers2D, sol: &Solution<State2D>, dt: f64) -> Result<ErrorReport> {
    let last = sol.last();
    let (eu, _) = errors_2d(sys, &last.state, last.t)?
        .ok_or_else(|| Error::Config(format!("problem {} has no exact solution", sys.problem.name)))?;
    Ok(ErrorReport::new(sys.grid.nx(), dt, last.t, eu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burgers::RhsOptions;
    use crate::problems::{problem1, problem4};

    const S: SchemeCoefficients = SchemeCoefficients::SSPRK54;

    #[test]
    fn snapshot_lattice() {
        let c = IntegrationConfig::new(0.0, 1.0, 0.1).unwrap();
        assert_eq!(snapshot_steps(&c, &[0.5, 0.0, 0.5]).unwrap(), vec![0, 5, 10]);
        assert!(snapshot_steps(&c, &[0.55]).is_err());
        assert!(snapshot_steps(&c, &[1.5]).is_err());
        assert!(snapshot_steps(&c, &[-0.1]).is_err());
    }

    #[test]
    fn zero_horizon_returns_initial_data() {
        let sys = Burgers1D::new(problem1(), 11, RhsOptions::default()).unwrap();
        let c = IntegrationConfig::new(0.0, 0.0, 1e-3).unwrap();
        let sol = solve_1d(&sys, &c, &[], &S).unwrap();
        assert_eq!(sol.steps, 0);
        assert_eq!(sol.snapshots.len(), 1);
        let mut s0 = sys.initial_state();
        apply_dirichlet_1d(&mut s0, 0.0, &sys.problem);
        assert_eq!(sol.last().state, s0);
    }

    #[test]
    fn short_p1_run_is_accurate() {
        let sys = Burgers1D::new(problem1(), 21, RhsOptions::default()).unwrap();
        let c = IntegrationConfig::new(0.0, 0.1, 1e-3).unwrap();
        let sol = solve_1d(&sys, &c, &[0.05], &S).unwrap();
        assert_eq!(sol.snapshots.len(), 2);
        assert_eq!(sol.snapshots[0].step, 50);
        let r = report_1d(&sys, &sol, 1e-3).unwrap();
        assert!(r.linf < 1e-3, "{r:?}");
        assert_eq!(r.n, 21);
    }

    #[test]
    fn short_p4_run_keeps_sum() {
        let sys = Burgers2D::new(problem4(100.0), 9, 9, RhsOptions::default()).unwrap();
        let c = IntegrationConfig::new(0.0, 0.01, 1e-3).unwrap();
        let sol = solve_2d(&sys, &c, &[], &S).unwrap();
        let s = &sol.last().state;
        for k in 0..s.u.len() {
            assert!((s.u[k] + s.v[k] - 1.5).abs() < 1e-10);
        }
        let r = report_2d(&sys, &sol, 1e-3).unwrap();
        assert!(r.l2 < 1e-2);
    }
}
