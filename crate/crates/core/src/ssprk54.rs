//! Optimal five-stage, fourth-order strong-stability-preserving Runge-Kutta
//! scheme, written as convex combinations of forward-Euler substeps:
//!
//! ```text
//! u1    = u                        + c1  dt L(u)
//! u2    = b2 u  + p2 u1            + c2  dt L(u1)
//! u3    = b3 u  + p3 u2            + c3  dt L(u2)
//! u4    = b4 u  + p4 u3            + c4  dt L(u3)
//! u_new = f2 u2 + f3 u3 + g3 dt L(u3) + f4 u4 + g4 dt L(u4)
//! ```

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeCoefficients {
    pub c1: f64,
    pub b2: f64,
    pub p2: f64,
    pub c2: f64,
    pub b3: f64,
    pub p3: f64,
    pub c3: f64,
    pub b4: f64,
    pub p4: f64,
    pub c4: f64,
    pub f2: f64,
    pub f3: f64,
    pub g3: f64,
    pub f4: f64,
    pub g4: f64,
}

impl SchemeCoefficients {
    pub const SSPRK54: Self = Self {
        c1: 0.391752226571890,
        b2: 0.444370493651235,
        p2: 0.555629506348765,
        c2: 0.368410593050371,
        b3: 0.620101851488403,
        p3: 0.379898148511597,
        c3: 0.251891774271694,
        b4: 0.178079954393132,
        p4: 0.821920045606868,
        c4: 0.544974750228521,
        f2: 0.517231671970585,
        f3: 0.096059710526147,
        g3: 0.063692468666290,
        f4: 0.386708617503269,
        g4: 0.226007483236906,
    };

    /// Times at which each of the five `L` evaluations nominally sits,
    /// as fractions of `dt`.
    pub fn stage_fractions(&self) -> [f64; 5] {
        let t2 = self.c1;
        let t3 = self.p2 * t2 + self.c2;
        let t4 = self.p3 * t3 + self.c3;
        let t5 = self.p4 * t4 + self.c4;
        [0.0, t2, t3, t4, t5]
    }

    pub fn all(&self) -> [f64; 15] {
        [
            self.c1, self.b2, self.p2, self.c2, self.b3, self.p3, self.c3, self.b4, self.p4,
            self.c4, self.f2, self.f3, self.g3, self.f4, self.g4,
        ]
    }
}

impl Default for SchemeCoefficients {
    fn default() -> Self {
        Self::SSPRK54
    }
}

/// Base time of the step plus the nominal time of the current stage.
/// Right-hand sides decide which one drives their boundary data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageTime {
    pub base: f64,
    pub stage: f64,
}

impl StageTime {
    pub fn at(t: f64) -> Self {
        Self { base: t, stage: t }
    }
}

/// A first-order system `du/dt = L(u, t)`.
pub trait OdeSystem<T = f64> {
    fn rhs(&self, time: StageTime, u: &[T], du: &mut [T]) -> Result<()>;
}

impl<T, F> OdeSystem<T> for F
where
    F: Fn(StageTime, &[T], &mut [T]) -> Result<()>,
{
    fn rhs(&self, time: StageTime, u: &[T], du: &mut [T]) -> Result<()> {
        self(time, u, du)
    }
}

pub trait StateScalar: Copy + Default + Add<Output = Self> + Mul<f64, Output = Self> {
    fn is_finite(self) -> bool;
}

impl StateScalar for f64 {
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl StateScalar for Complex64 {
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// One step from `t` to `t + dt`.
pub fn step<T: StateScalar, S: OdeSystem<T> + ?Sized>(
    scheme: &SchemeCoefficients,
    u: &[T],
    t: f64,
    dt: f64,
    sys: &S,
) -> Result<Vec<T>> {
    let n = u.len();
    let fr = scheme.stage_fractions();
    let at = |k: usize| StageTime {
        base: t,
        stage: t + fr[k] * dt,
    };
    let check = |v: &[T], stage: usize| {
        if v.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFiniteState { stage, time: t })
        }
    };
    let mut l = vec![T::default(); n];

    sys.rhs(at(0), u, &mut l)?;
    let u1: Vec<T> = (0..n).map(|i| u[i] + l[i] * (scheme.c1 * dt)).collect();
    check(&u1, 1)?;

    sys.rhs(at(1), &u1, &mut l)?;
    let u2: Vec<T> = (0..n)
        .map(|i| u[i] * scheme.b2 + u1[i] * scheme.p2 + l[i] * (scheme.c2 * dt))
        .collect();
    check(&u2, 2)?;

    sys.rhs(at(2), &u2, &mut l)?;
    let u3: Vec<T> = (0..n)
        .map(|i| u[i] * scheme.b3 + u2[i] * scheme.p3 + l[i] * (scheme.c3 * dt))
        .collect();
    check(&u3, 3)?;

    let mut l3 = vec![T::default(); n];
    sys.rhs(at(3), &u3, &mut l3)?;
    let u4: Vec<T> = (0..n)
        .map(|i| u[i] * scheme.b4 + u3[i] * scheme.p4 + l3[i] * (scheme.c4 * dt))
        .collect();
    check(&u4, 4)?;

    sys.rhs(at(4), &u4, &mut l)?;
    let out: Vec<T> = (0..n)
        .map(|i| {
            u2[i] * scheme.f2
                + u3[i] * scheme.f3
                + l3[i] * (scheme.g3 * dt)
                + u4[i] * scheme.f4
                + l[i] * (scheme.g4 * dt)
        })
        .collect();
    check(&out, 5)?;
    Ok(out)
}

/// Stability function `R(z)`: one step of `u' = λu` from `u = 1` with
/// `λ dt = z`.
pub fn amplification(scheme: &SchemeCoefficients, z: Complex64) -> Complex64 {
    let sys = |_: StageTime, u: &[Complex64], du: &mut [Complex64]| {
        du[0] = u[0] * z;
        Ok(())
    };
    // the scheme only fails on non-finite stages, which a finite z cannot produce
    step(scheme, &[Complex64::new(1.0, 0.0)], 0.0, 1.0, &sys)
        .map(|v| v[0])
        .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig {
    pub t0: f64,
    pub t_end: f64,
    pub dt: f64,
}

impl IntegrationConfig {
    pub fn new(t0: f64, t_end: f64, dt: f64) -> Result<Self> {
        let c = Self { t0, t_end, dt };
        c.steps()?;
        Ok(c)
    }

    /// Number of steps; `dt` must divide the interval.
    pub fn steps(&self) -> Result<usize> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= self.t0) {
            return Err(Error::Config(format!(
                "t_end {} precedes t0 {}",
                self.t_end, self.t0
            )));
        }
        let ratio = (self.t_end - self.t0) / self.dt;
        let n = ratio.round();
        if ((ratio - n) * self.dt).abs() > 1e-9 * self.dt {
            return Err(Error::Config(format!(
                "dt = {} does not divide [{}, {}]",
                self.dt, self.t0, self.t_end
            )));
        }
        Ok(n as usize)
    }

    pub fn time_at(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }
}

/// Advances `u0` over the configured interval. The observer sees
/// `(step index, time, state)` after every step, with indices starting at 1.
pub fn integrate<S, O>(
    scheme: &SchemeCoefficients,
    u0: &[f64],
    config: &IntegrationConfig,
    sys: &S,
    mut observer: O,
) -> Result<Vec<f64>>
where
    S: OdeSystem + ?Sized,
    O: FnMut(usize, f64, &[f64]),
{
    let steps = config.steps()?;
    let mut u = u0.to_vec();
    for k in 0..steps {
        let t = config.time_at(k);
        u = step(scheme, &u, t, config.dt, sys)?;
        observer(k + 1, config.time_at(k + 1), &u);
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: SchemeCoefficients = SchemeCoefficients::SSPRK54;

    fn decay(lambda: f64) -> impl Fn(StageTime, &[f64], &mut [f64]) -> Result<()> {
        move |_, u, du| {
            for (d, x) in du.iter_mut().zip(u) {
                *d = lambda * x;
            }
            Ok(())
        }
    }

    fn global_error(dt: f64) -> f64 {
        let cfg = IntegrationConfig::new(0.0, 1.0, dt).unwrap();
        let u = integrate(&S, &[1.0], &cfg, &decay(-1.0), |_, _, _| {}).unwrap();
        (u[0] - (-1.0f64).exp()).abs()
    }

    #[test]
    fn convex_sums_and_signs() {
        assert!((S.b2 + S.p2 - 1.0).abs() <= 1e-14);
        assert!((S.b3 + S.p3 - 1.0).abs() <= 1e-14);
        assert!((S.b4 + S.p4 - 1.0).abs() <= 1e-14);
        assert!((S.f2 + S.f3 + S.f4 - 1.0).abs() <= 1e-14);
        assert!(S.all().iter().all(|&c| c >= 0.0));
    }

    #[test]
    fn zero_rhs_keeps_state() {
        let u = [1.0, -2.5, 3.0e3];
        let out = step(&S, &u, 0.0, 0.1, &decay(0.0)).unwrap();
        for (a, b) in out.iter().zip(&u) {
            assert!((a - b).abs() <= 1e-14 * b.abs().max(1.0));
        }
    }

    #[test]
    fn single_step_exponential() {
        let out = step(&S, &[1.0], 0.0, 0.1, &decay(-1.0)).unwrap();
        assert!((out[0] - (-0.1f64).exp()).abs() < 2e-7);
    }

    #[test]
    fn halving_dt_gains_sixteen() {
        let (e1, e2) = (global_error(0.1), global_error(0.05));
        assert!(e1 / e2 >= 16.0, "{e1} {e2}");
    }

    #[test]
    fn global_order_is_four() {
        let e: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|&dt| global_error(dt)).collect();
        for w in e.windows(2) {
            let p = (w[0] / w[1]).log2();
            assert!((3.8..=4.2).contains(&p), "order {p}");
        }
    }

    #[test]
    fn amplification_polynomial() {
        // the printed final-stage weights sum to 1 + 1e-15
        let r0 = amplification(&S, Complex64::new(0.0, 0.0));
        assert!((r0 - 1.0).norm() <= 1e-14, "{r0}");
        // Recover the degree-5 coefficients from six real samples.
        let zs: [f64; 6] = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let mut a = [[0.0; 6]; 6];
        let mut b = [0.0; 6];
        for (r, &z) in zs.iter().enumerate() {
            for (c, slot) in a[r].iter_mut().enumerate() {
                *slot = z.powi(c as i32);
            }
            b[r] = amplification(&S, Complex64::new(z, 0.0)).re;
        }
        let coef = solve6(a, b);
        let taylor = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0];
        for k in 0..5 {
            assert!((coef[k] - taylor[k]).abs() <= 1e-12, "k={k}: {}", coef[k]);
        }
        assert!(amplification(&S, Complex64::new(-1.0, 0.0)).norm() < 1.0);
    }

    fn solve6(mut a: [[f64; 6]; 6], mut b: [f64; 6]) -> [f64; 6] {
        for k in 0..6 {
            let p = (k..6).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
            a.swap(k, p);
            b.swap(k, p);
            for i in k + 1..6 {
                let f = a[i][k] / a[k][k];
                for j in k..6 {
                    a[i][j] -= f * a[k][j];
                }
                b[i] -= f * b[k];
            }
        }
        let mut x = [0.0; 6];
        for i in (0..6).rev() {
            let s: f64 = (i + 1..6).map(|j| a[i][j] * x[j]).sum();
            x[i] = (b[i] - s) / a[i][i];
        }
        x
    }

    #[test]
    fn negative_real_axis_segment_is_stable() {
        let mut worst = 0.0_f64;
        for k in 0..=300 {
            let z = Complex64::new(-0.01 * k as f64, 0.0);
            worst = worst.max(amplification(&S, z).norm());
        }
        assert!(worst <= 1.0 + 1e-12, "max |R| on [-3, 0] = {worst}");
    }

    #[test]
    fn zero_length_interval() {
        let cfg = IntegrationConfig::new(0.5, 0.5, 0.1).unwrap();
        let mut calls = 0;
        let u = integrate(&S, &[2.0, 3.0], &cfg, &decay(-1.0), |_, _, _| calls += 1).unwrap();
        assert_eq!(u, vec![2.0, 3.0]);
        assert_eq!(calls, 0);
    }

    #[test]
    fn observer_count_and_times() {
        let cfg = IntegrationConfig::new(0.0, 1.0, 0.01).unwrap();
        let mut seen = Vec::new();
        integrate(&S, &[1.0], &cfg, &decay(-1.0), |k, t, _| seen.push((k, t))).unwrap();
        assert_eq!(seen.len(), 100);
        assert_eq!(seen[99].0, 100);
        assert!((seen[99].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_linear_system() {
        let lambdas = [-1.0, -0.5, 0.3, -2.0];
        let sys = move |_: StageTime, u: &[f64], du: &mut [f64]| {
            for i in 0..4 {
                du[i] = lambdas[i] * u[i];
            }
            Ok(())
        };
        let cfg = IntegrationConfig::new(0.0, 1.0, 0.01).unwrap();
        let u = integrate(&S, &[1.0; 4], &cfg, &sys, |_, _, _| {}).unwrap();
        for i in 0..4 {
            assert!((u[i] - lambdas[i].exp()).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(IntegrationConfig::new(0.0, 1.0, 0.3).is_err());
        assert!(IntegrationConfig::new(0.0, 1.0, 0.0).is_err());
        assert!(IntegrationConfig::new(1.0, 0.0, 0.1).is_err());
        assert_eq!(IntegrationConfig::new(0.0, 1.0, 1e-3).unwrap().steps().unwrap(), 1000);
    }

    #[test]
    fn blow_up_reports_stage() {
        let sys = |_: StageTime, u: &[f64], du: &mut [f64]| {
            du[0] = u[0] * 1e308;
            Ok(())
        };
        let err = step(&S, &[1e10], 2.0, 1.0, &sys).unwrap_err();
        assert_eq!(err, Error::NonFiniteState { stage: 1, time: 2.0 });
    }

    #[test]
    fn stage_time_hint() {
        let fr = S.stage_fractions();
        assert_eq!(fr[0], 0.0);
        assert!(fr.iter().all(|&c| (0.0..=1.0).contains(&c)));
        let rec = std::cell::RefCell::new(Vec::new());
        let sys = |t: StageTime, _: &[f64], du: &mut [f64]| {
            rec.borrow_mut().push(t);
            du[0] = 0.0;
            Ok(())
        };
        step(&S, &[0.0], 1.0, 0.5, &sys).unwrap();
        let rec = rec.into_inner();
        assert_eq!(rec.len(), 5);
        assert!(rec.iter().all(|t| t.base == 1.0));
        assert!((rec[4].stage - (1.0 + 0.5 * fr[4])).abs() < 1e-15);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn step_is_linear_for_linear_rhs(
                u in proptest::collection::vec(-10.0..10.0f64, 3),
                w in proptest::collection::vec(-10.0..10.0f64, 3),
                a in -3.0..3.0f64,
                b in -3.0..3.0f64,
            ) {
                let sys = |_: StageTime, x: &[f64], d: &mut [f64]| {
                    d[0] = -x[0] + 0.5 * x[1];
                    d[1] = 0.25 * x[0] - 2.0 * x[2];
                    d[2] = x[1] - x[2];
                    Ok(())
                };
                let comb: Vec<f64> = (0..3).map(|i| a * u[i] + b * w[i]).collect();
                let lhs = step(&S, &comb, 0.0, 0.1, &sys).unwrap();
                let su = step(&S, &u, 0.0, 0.1, &sys).unwrap();
                let sw = step(&S, &w, 0.0, 0.1, &sys).unwrap();
                for i in 0..3 {
                    let rhs = a * su[i] + b * sw[i];
                    prop_assert!((lhs[i] - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
                }
            }
        }
    }
}
