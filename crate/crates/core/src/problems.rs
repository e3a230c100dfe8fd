//! Concrete test problems, error norms and convergence orders.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::burgers::{EdgeTraces, FnXYT, Problem1D, Problem2D};
use crate::error::{shape_mismatch, Error, Result};

/// `u = v = e^{-t} sin x` on `[-π, π]` with `η = ξ = -2`, `α = β = 1`.
pub fn problem1() -> Problem1D {
    let exact = |x: f64, t: f64| (-t).exp() * x.sin();
    let (a, b) = (-PI, PI);
    Problem1D {
        name: "p1".into(),
        eta: -2.0,
        xi: -2.0,
        alpha: 1.0,
        beta: 1.0,
        domain: (a, b),
        phi: Arc::new(f64::sin),
        psi: Arc::new(f64::sin),
        g1: Arc::new(move |t| exact(a, t)),
        g2: Arc::new(move |t| exact(b, t)),
        g3: Arc::new(move |t| exact(a, t)),
        g4: Arc::new(move |t| exact(b, t)),
        exact_u: Some(Arc::new(exact)),
        exact_v: Some(Arc::new(exact)),
    }
}

/// Problem 2's exact solution blows up at `t = 1/√2`.
pub const P2_SINGULAR_TIME: f64 = std::f64::consts::FRAC_1_SQRT_2;
/// Latest time problem 2 is integrated to.
pub const P2_HORIZON: f64 = 0.6;

/// Rational exact solution
/// `u = (x + y - 2xt)/(1 - 2t²)`, `v = (x - y - 2yt)/(1 - 2t²)`,
/// solved on `domain` (the tabulated runs use `[0, 0.5]²`).
/// Boundary traces are taken from the exact solution.
pub fn problem2(re: f64, domain: [f64; 4]) -> Problem2D {
    let exact_u: FnXYT = Arc::new(|x, y, t| (x + y - 2.0 * x * t) / (1.0 - 2.0 * t * t));
    let exact_v: FnXYT = Arc::new(|x, y, t| (x - y - 2.0 * y * t) / (1.0 - 2.0 * t * t));
    Problem2D {
        name: "p2".into(),
        nu: 1.0 / re,
        re,
        domain,
        phi: Arc::new(|x, y| x + y),
        psi: Arc::new(|x, y| x - y),
        bc_u: EdgeTraces::from_field(exact_u.clone(), domain),
        bc_v: EdgeTraces::from_field(exact_v.clone(), domain),
        exact_u: Some(exact_u),
        exact_v: Some(exact_v),
        valid_until: Some(P2_SINGULAR_TIME - 1e-6),
    }
}

pub const P2_DOMAIN: [f64; 4] = [0.0, 0.5, 0.0, 0.5];

/// `u0 = sin πx + sin πy`, `v0 = x + y` on `[0, 0.5]²` with fixed edge data.
/// No closed-form solution; see [`TABLE_3_1`].
pub fn problem3(re: f64) -> Problem2D {
    let domain = [0.0, 0.5, 0.0, 0.5];
    Problem2D {
        name: "p3".into(),
        nu: 1.0 / re,
        re,
        domain,
        phi: Arc::new(|x, y| (PI * x).sin() + (PI * y).sin()),
        psi: Arc::new(|x, y| x + y),
        bc_u: EdgeTraces {
            x_lo: Arc::new(|y, _| (PI * y).cos()),
            x_hi: Arc::new(|y, _| 1.0 + (PI * y).cos()),
            y_lo: Arc::new(|x, _| 1.0 + (PI * x).sin()),
            y_hi: Arc::new(|x, _| (PI * x).sin()),
        },
        bc_v: EdgeTraces {
            x_lo: Arc::new(|y, _| y),
            x_hi: Arc::new(|y, _| 0.5 + y),
            y_lo: Arc::new(|x, _| x),
            y_hi: Arc::new(|x, _| x + 0.5),
        },
        exact_u: None,
        exact_v: None,
        valid_until: None,
    }
}

/// Traveling wave on `[0, 1]²`:
/// `u = 3/4 - 1/(4(1 + E))`, `v = 3/4 + 1/(4(1 + E))`,
/// `E = exp((-4x + 4y - t) Re / 32)`.
pub fn problem4(re: f64) -> Problem2D {
    let domain = [0.0, 1.0, 0.0, 1.0];
    let wave = move |x: f64, y: f64, t: f64| 0.25 / (1.0 + ((-4.0 * x + 4.0 * y - t) * re / 32.0).exp());
    let exact_u: FnXYT = Arc::new(move |x, y, t| 0.75 - wave(x, y, t));
    let exact_v: FnXYT = Arc::new(move |x, y, t| 0.75 + wave(x, y, t));
    let (eu, ev) = (exact_u.clone(), exact_v.clone());
    Problem2D {
        name: "p4".into(),
        nu: 1.0 / re,
        re,
        domain,
        phi: Arc::new(move |x, y| eu(x, y, 0.0)),
        psi: Arc::new(move |x, y| ev(x, y, 0.0)),
        bc_u: EdgeTraces::from_field(exact_u.clone(), domain),
        bc_v: EdgeTraces::from_field(exact_v.clone(), domain),
        exact_u: Some(exact_u),
        exact_v: Some(exact_v),
        valid_until: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub l2: f64,
    pub linf: f64,
}

/// `L2 = sqrt(w Σ |e_j|²)`, `L∞ = max |e_j|`, where `w` is the node
/// spacing in 1D and the cell area `h_x h_y` in 2D.
pub fn error_norms(computed: &[f64], exact: &[f64], weight: f64) -> Result<ErrorNorms> {
    if computed.len() != exact.len() {
        return Err(shape_mismatch(exact.len(), computed.len()));
    }
    let mut sq = 0.0;
    let mut linf = 0.0_f64;
    for (c, e) in computed.iter().zip(exact) {
        let d = (c - e).abs();
        sq += d * d;
        linf = linf.max(d);
    }
    Ok(ErrorNorms {
        l2: (weight * sq).sqrt(),
        linf,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// nodes per axis
    pub n: usize,
    pub dt: f64,
    pub t: f64,
    pub l2: f64,
    pub linf: f64,
}

impl ErrorReport {
    pub fn new(n: usize, dt: f64, t: f64, norms: ErrorNorms) -> Self {
        Self {
            n,
            dt,
            t,
            l2: norms.l2,
            linf: norms.linf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orders {
    pub l2: f64,
    pub linf: f64,
}

/// Two-grid order `log(E_coarse / E_fine) / log(N_fine / N_coarse)`.
pub fn convergence_order(coarse: &ErrorReport, fine: &ErrorReport) -> Result<Orders> {
    if fine.n <= coarse.n {
        return Err(Error::Domain(format!(
            "fine grid ({}) must have more nodes than the coarse grid ({})",
            fine.n, coarse.n
        )));
    }
    for (what, e) in [
        ("coarse L2", coarse.l2),
        ("coarse Linf", coarse.linf),
        ("fine L2", fine.l2),
        ("fine Linf", fine.linf),
    ] {
        if !(e > 1e-15) {
            return Err(Error::Degenerate(format!("{what} = {e:e}")));
        }
    }
    let ratio = (fine.n as f64 / coarse.n as f64).ln();
    Ok(Orders {
        l2: (coarse.l2 / fine.l2).ln() / ratio,
        linf: (coarse.linf / fine.linf).ln() / ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l2: f64,
    pub r_l2: Option<f64>,
    pub linf: f64,
    pub r_linf: Option<f64>,
}

/// Rows in the order given; orders are filled from the preceding row.
pub fn convergence_table(reports: &[ErrorReport]) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::with_capacity(reports.len());
    for (k, r) in reports.iter().enumerate() {
        let orders = match k {
            0 => None,
            _ => Some(convergence_order(&reports[k - 1], r)?),
        };
        rows.push(ConvergenceRow {
            n: r.n,
            l2: r.l2,
            r_l2: orders.map(|o| o.l2),
            linf: r.linf,
            r_linf: orders.map(|o| o.linf),
        });
    }
    Ok(rows)
}

/// Published reference numbers bundled with the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTable {
    pub id: &'static str,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
    /// leading `#` comment lines
    pub notes: Vec<String>,
}

pub const TABLE_1_1: &str = include_str!("../data/table_1_1.csv");
pub const TABLE_1_3: &str = include_str!("../data/table_1_3.csv");
pub const TABLE_2_1: &str = include_str!("../data/table_2_1.csv");
pub const TABLE_2_2: &str = include_str!("../data/table_2_2.csv");
pub const TABLE_2_3: &str = include_str!("../data/table_2_3.csv");
pub const TABLE_3_1: &str = include_str!("../data/table_3_1.csv");
pub const TABLE_4_1: &str = include_str!("../data/table_4_1.csv");

pub const TABLE_IDS: [&str; 7] = ["1.1", "1.3", "2.1", "2.2", "2.3", "3.1", "4.1"];

impl ReferenceTable {
    pub fn load(id: &str) -> Result<Self> {
        let (id, text) = match id {
            "1.1" => ("1.1", TABLE_1_1),
            "1.3" => ("1.3", TABLE_1_3),
            "2.1" => ("2.1", TABLE_2_1),
            "2.2" => ("2.2", TABLE_2_2),
            "2.3" => ("2.3", TABLE_2_3),
            "3.1" => ("3.1", TABLE_3_1),
            "4.1" => ("4.1", TABLE_4_1),
            other => return Err(Error::Config(format!("unknown reference table `{other}`"))),
        };
        Self::parse(id, text)
    }

    fn parse(id: &'static str, text: &str) -> Result<Self> {
        let mut notes = Vec::new();
        let mut header = None;
        let mut rows = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(c) = line.strip_prefix('#') {
                notes.push(c.trim().to_string());
                continue;
            }
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            match header {
                None => header = Some(cells.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
                Some(ref h) => {
                    if cells.len() != h.len() {
                        return Err(shape_mismatch(h.len(), cells.len()));
                    }
                    let row = cells
                        .iter()
                        .map(|c| {
                            if c.is_empty() {
                                Ok(None)
                            } else {
                                c.parse::<f64>()
                                    .map(Some)
                                    .map_err(|e| Error::Config(format!("table {id}: `{c}`: {e}")))
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    rows.push(row);
                }
            }
        }
        Ok(Self {
            id,
            header: header.ok_or_else(|| Error::Config(format!("table {id} has no header")))?,
            rows,
            notes,
        })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Value in `col` of every row.
    pub fn values(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let c = self.column(name)?;
        Some(self.rows.iter().map(|r| r[c]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem1_values() {
        let p = problem1();
        let eu = p.exact_u.as_ref().unwrap();
        for t in [0.0, 0.5, 3.0] {
            assert_eq!(eu(0.0, t), 0.0);
        }
        assert!((eu(PI / 2.0, 1.0) - (-1.0f64).exp()).abs() < 1e-15);
        for x in [-2.0, 0.3, 1.7] {
            assert_eq!((p.phi)(x), x.sin());
            assert_eq!((p.psi)(x), x.sin());
        }
        assert!((p.g1)(0.0).abs() < 1e-15);
    }

    #[test]
    fn problem2_values() {
        let p = problem2(80.0, P2_DOMAIN);
        let eu = p.exact_u.as_ref().unwrap();
        let ev = p.exact_v.as_ref().unwrap();
        assert_eq!(eu(0.3, 0.4, 0.0), 0.3 + 0.4);
        assert!((eu(0.1, 0.1, 0.1) - 0.18 / 0.98).abs() < 1e-15);
        assert!((eu(0.1, 0.1, 0.1) - 0.183673).abs() < 5e-7);
        assert!((ev(0.5, 0.5, 0.1) + 0.1 / 0.98).abs() < 1e-15);
        assert!((ev(0.5, 0.5, 0.1) + 0.10204).abs() < 5e-6);
        assert!(p.check_time(0.5).is_ok());
        assert!(p.check_time(P2_SINGULAR_TIME).is_err());
        assert!(p.check_time(P2_SINGULAR_TIME - 1e-7).is_err());
        assert!((p.nu * p.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn problem3_values() {
        let p = problem3(50.0);
        assert!(((p.phi)(0.5, 0.0) - 1.0).abs() < 1e-15);
        assert!(!p.has_exact());
        let t = ReferenceTable::load("3.1").unwrap();
        assert_eq!(t.rows[0][t.column("u").unwrap()], Some(0.97056));
        assert_eq!(t.rows[5][t.column("v").unwrap()], Some(0.22653));
    }

    #[test]
    fn problem4_values() {
        let p = problem4(100.0);
        let (eu, ev) = (p.exact_u.as_ref().unwrap(), p.exact_v.as_ref().unwrap());
        for &(x, y, t) in &[(0.1, 0.7, 0.3), (0.9, 0.2, 1.0), (0.5, 0.5, 0.0)] {
            assert!((eu(x, y, t) + ev(x, y, t) - 1.5).abs() < 1e-15);
        }
        // on 4y - 4x = t the exponent vanishes
        let (x, t) = (0.2, 0.4);
        let y = x + t / 4.0;
        assert!((eu(x, y, t) - 0.625).abs() < 1e-15);
        assert!((ev(x, y, t) - 0.875).abs() < 1e-15);
        assert!(((p.phi)(0.3, 0.3) - 0.625).abs() < 1e-15);
    }

    #[test]
    fn norms() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let n = error_norms(&a, &a, 0.1).unwrap();
        assert_eq!((n.l2, n.linf), (0.0, 0.0));

        let b = [1.0, 2.5, 3.0, 4.0];
        let h = 0.2_f64;
        let n = error_norms(&b, &a, h).unwrap();
        assert_eq!(n.linf, 0.5);
        assert!((n.l2 - h.sqrt() * 0.5).abs() < 1e-15);

        let m = 11;
        let h = 1.0 / (m - 1) as f64;
        let d = 0.03;
        let c: Vec<f64> = (0..m).map(|k| k as f64 + d).collect();
        let e: Vec<f64> = (0..m).map(|k| k as f64).collect();
        let n = error_norms(&c, &e, h).unwrap();
        assert!((n.l2 - d * (h * m as f64).sqrt()).abs() < 1e-14);

        assert!(error_norms(&a, &b[..3], 1.0).is_err());
    }

    fn report(n: usize, l2: f64, linf: f64) -> ErrorReport {
        ErrorReport {
            n,
            dt: 1e-3,
            t: 1.0,
            l2,
            linf,
        }
    }

    #[test]
    fn orders() {
        let r = convergence_order(&report(10, 0.2, 0.4), &report(20, 0.1, 0.2)).unwrap();
        assert!((r.l2 - 1.0).abs() < 1e-14 && (r.linf - 1.0).abs() < 1e-14);

        let r = convergence_order(&report(10, 6.69e-3, 1.0), &report(20, 8.77e-4, 1.0)).unwrap();
        assert!((r.l2 - 2.93).abs() < 5e-3, "{}", r.l2);
        let r = convergence_order(&report(20, 8.77e-4, 1.0), &report(40, 1.03e-4, 1.0)).unwrap();
        assert!((r.l2 - 3.09).abs() < 5e-3, "{}", r.l2);

        assert!(matches!(
            convergence_order(&report(10, 0.0, 1.0), &report(20, 1.0, 1.0)),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn table_with_one_row_has_no_orders() {
        let rows = convergence_table(&[report(10, 1.0, 1.0)]).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].r_l2.is_none() && rows[0].r_linf.is_none());
    }

    #[test]
    fn reference_tables_parse() {
        for id in TABLE_IDS {
            let t = ReferenceTable::load(id).unwrap();
            assert!(!t.rows.is_empty(), "{id}");
            assert!(!t.notes.is_empty(), "{id}");
        }
        let t = ReferenceTable::load("1.1").unwrap();
        assert_eq!(t.values("r_l2").unwrap()[0], None);
        assert!(ReferenceTable::load("9.9").is_err());
    }
}
