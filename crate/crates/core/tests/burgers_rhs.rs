use std::f64::consts::PI;

use mtb_dqm::burgers::*;
use mtb_dqm::grid::{Grid1D, Grid2D};
use mtb_dqm::problems::{problem1, problem2, problem3, problem4, P2_DOMAIN};
use mtb_dqm::weights::{weights_2d, Axis, AxisWeights};
use proptest::prelude::*;

fn p1_parts(n: usize) -> (Problem1D, Grid1D, AxisWeights) {
    let p = problem1();
    let g = Grid1D::new(p.domain.0, p.domain.1, n).unwrap();
    let w = AxisWeights::build(&g, Axis::X).unwrap();
    (p, g, w)
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn split_matches_full_sums_1d(seed in proptest::collection::vec(-2.0f64..2.0, 2 * 17)) {
        let (p, g, w) = p1_parts(17);
        let s = State1D { u: seed[..17].to_vec(), v: seed[17..].to_vec() };
        let a = rhs_1d(&s, &p, &w.d1, &w.d2, &g, GForm::Printed).unwrap();
        let b = rhs_1d_full(&s, &p, &w.d1, &w.d2, &g).unwrap();
        let scale = 1.0 + b.u.iter().chain(&b.v).map(|x| x.abs()).fold(0.0, f64::max);
        prop_assert!(max_diff(&a.u, &b.u) <= 1e-12 * scale);
        prop_assert!(max_diff(&a.v, &b.v) <= 1e-12 * scale);
    }

    #[test]
    fn split_matches_full_sums_2d(seed in proptest::collection::vec(-2.0f64..2.0, 2 * 9 * 7)) {
        let p = problem4(100.0);
        let g = Grid2D::new(Grid1D::new(0.0, 1.0, 9).unwrap(), Grid1D::new(0.0, 1.0, 7).unwrap());
        let w = weights_2d(&g, &g.x.coeffs().unwrap(), &g.y.coeffs().unwrap()).unwrap();
        let s = State2D::from_flat(9, 7, &seed).unwrap();
        let a = rhs_2d(&s, &p, &w, &g).unwrap();
        let b = rhs_2d_full(&s, &p, &w, &g).unwrap();
        let scale = 1.0 + b.u.iter().chain(&b.v).map(|x| x.abs()).fold(0.0, f64::max);
        prop_assert!(max_diff(&a.u, &b.u) <= 1e-12 * scale);
        prop_assert!(max_diff(&a.v, &b.v) <= 1e-12 * scale);
    }
}

#[test]
fn zero_state_has_zero_derivative() {
    let (p, g, w) = p1_parts(11);
    let d = rhs_1d(&State1D::zeros(11), &p, &w.d1, &w.d2, &g, GForm::Printed).unwrap();
    assert!(d.u.iter().chain(&d.v).all(|&x| x == 0.0));
}

#[test]
fn nonlinear_part_scales_quadratically() {
    // with the diffusion part removed, doubling the state quadruples the derivative
    let (mut p, g, w) = p1_parts(13);
    let zero2 = mtb_dqm::weights::WeightMatrix {
        order: 2,
        axis: Axis::X,
        entries: mtb_dqm::matrix::Matrix::zeros(13, 13),
    };
    p.alpha = 0.7;
    let s: State1D = State1D {
        u: g.nodes().iter().map(|x| x.cos()).collect(),
        v: g.nodes().iter().map(|x| (2.0 * x).sin()).collect(),
    };
    let s2 = State1D {
        u: s.u.iter().map(|x| 2.0 * x).collect(),
        v: s.v.iter().map(|x| 2.0 * x).collect(),
    };
    let a = rhs_1d(&s, &p, &w.d1, &zero2, &g, GForm::Printed).unwrap();
    let b = rhs_1d(&s2, &p, &w.d1, &zero2, &g, GForm::Printed).unwrap();
    for k in 0..13 {
        assert!((b.u[k] - 4.0 * a.u[k]).abs() < 1e-12 * (1.0 + a.u[k].abs()));
        assert!((b.v[k] - 4.0 * a.v[k]).abs() < 1e-12 * (1.0 + a.v[k].abs()));
    }
}

#[test]
fn p1_derivative_matches_exact() {
    // u_t = -e^{-t} sin x at t = 0
    let sys = Burgers1D::new(problem1(), 81, RhsOptions::default()).unwrap();
    let d = sys.rhs(&sys.initial_state(), 0.0).unwrap();
    let x = sys.grid.nodes();
    for i in 1..80 {
        assert!((d.u[i] + x[i].sin()).abs() < 5e-3, "i={i}");
        assert!((d.v[i] + x[i].sin()).abs() < 5e-3, "i={i}");
    }
    assert_eq!(d.u[0], 0.0);
    assert_eq!(d.v[80], 0.0);
}

#[test]
fn p4_derivative_matches_exact() {
    let p = problem4(100.0);
    let eu = p.exact_u.clone().unwrap();
    let sys = Burgers2D::new(p, 33, 33, RhsOptions::default()).unwrap();
    let d = sys.rhs(&sys.initial_state(), 0.0).unwrap();
    let dt = 1e-6;
    let mut worst = 0.0_f64;
    for (i, &x) in sys.grid.x.nodes().iter().enumerate().take(32).skip(1) {
        for (j, &y) in sys.grid.y.nodes().iter().enumerate().take(32).skip(1) {
            let ut = (eu(x, y, dt) - eu(x, y, -dt)) / (2.0 * dt);
            worst = worst.max((d.u[sys.grid.idx(i, j)] - ut).abs());
        }
    }
    assert!(worst < 1e-2, "{worst}");
}

#[test]
fn gform_variants_differ_only_near_boundary() {
    let (p, g, w) = p1_parts(15);
    let s = State1D {
        u: g.nodes().iter().map(|x| 1.0 + x.cos()).collect(),
        v: g.nodes().iter().map(|x| x.sin() - 0.5).collect(),
    };
    let a = rhs_1d(&s, &p, &w.d1, &w.d2, &g, GForm::Printed).unwrap();
    let b = rhs_1d(&s, &p, &w.d1, &w.d2, &g, GForm::Symmetric).unwrap();
    assert_eq!(a.u, b.u);
    assert!(max_diff(&a.v, &b.v) > 0.0);
}

#[test]
fn dirichlet_corners_follow_x_edges() {
    let p = problem3(50.0);
    let g = Grid2D::square(0.0, 0.5, 6).unwrap();
    let mut s = State2D::zeros(6, 6);
    apply_dirichlet_2d(&mut s, 0.0, &p, &g);
    assert_eq!(s.u[g.idx(0, 0)], 1.0);
    assert!((s.u[g.idx(5, 5)] - (1.0 + (PI * 0.5).cos())).abs() < 1e-15);
    assert!((s.v[g.idx(5, 0)] - 0.5).abs() < 1e-15);
}

#[test]
fn compatible_problems_have_consistent_corners() {
    let p2 = problem2(80.0, P2_DOMAIN);
    let p4 = problem4(100.0);
    for t in [0.0, 0.3] {
        assert!(p2.bc_u.corner_mismatch(p2.domain, t) < 1e-14);
        assert!(p2.bc_v.corner_mismatch(p2.domain, t) < 1e-14);
        assert!(p4.bc_u.corner_mismatch(p4.domain, t) < 1e-14);
    }
    // problem 3's edges agree at the corners but not with its initial data
    let p3 = problem3(50.0);
    assert!(p3.bc_u.corner_mismatch(p3.domain, 0.0) < 1e-14);
    let y = 0.1;
    assert!(((p3.phi)(0.0, y) - (p3.bc_u.x_lo)(y, 0.0)).abs() > 0.5);
}

#[test]
fn shape_errors() {
    let (p, g, w) = p1_parts(11);
    assert!(rhs_1d(&State1D::zeros(10), &p, &w.d1, &w.d2, &g, GForm::Printed).is_err());
    assert!(State1D::from_flat(&[1.0, 2.0, 3.0]).is_err());
    assert!(State2D::from_flat(3, 3, &[0.0; 17]).is_err());
}

#[test]
fn policy_parsing() {
    assert_eq!("base".parse::<BoundaryPolicy>().unwrap(), BoundaryPolicy::Base);
    assert_eq!("stage".parse::<BoundaryPolicy>().unwrap(), BoundaryPolicy::Stage);
    assert!("later".parse::<BoundaryPolicy>().is_err());
    assert_eq!("symmetric".parse::<GForm>().unwrap(), GForm::Symmetric);
    assert_eq!(GForm::Printed.to_string(), "printed");
    assert_eq!(BoundaryPolicy::default(), BoundaryPolicy::Base);
}
