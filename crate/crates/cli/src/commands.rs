//! Subcommand bodies. Each validates its whole configuration before the
//! first file is written.

use mtb_dqm::burgers::{Burgers1D, Burgers2D, EdgeTraces, Problem2D, RhsOptions, State1D, State2D};
use mtb_dqm::error::Error;
use mtb_dqm::grid::Grid1D;
use mtb_dqm::problems::{
    convergence_table, problem1, problem2, problem3, problem4, ErrorReport, ReferenceTable, P2_DOMAIN, P2_HORIZON,
};
use mtb_dqm::solver::{errors_1d, errors_2d, report_1d, report_2d, solve_1d, solve_2d, Solution};
use mtb_dqm::ssprk54::{IntegrationConfig, SchemeCoefficients};
use mtb_dqm::stability::{max_stable_dt_for, sweep, FrozenParams, Spectra};
use mtb_dqm::weights::{Axis, AxisWeights};

use crate::config::{ExperimentConfig, ProblemId, Resolved};
use crate::error::CliError;
use crate::manifest::{cell, opt_cell, Csv, Run, RunManifest};

const SCHEME: SchemeCoefficients = SchemeCoefficients::SSPRK54;

pub enum System {
    One(Burgers1D),
    Two(Burgers2D),
}

pub fn problem_2d(id: ProblemId, re: f64, domain: Option<[f64; 4]>) -> Problem2D {
    let mut p = match id {
        ProblemId::P2 => problem2(re, domain.unwrap_or(P2_DOMAIN)),
        ProblemId::P3 => problem3(re),
        _ => problem4(re),
    };
    if let (Some(d), ProblemId::P4) = (domain, id) {
        p.domain = d;
        p.bc_u = EdgeTraces::from_field(p.exact_u.clone().expect("p4 is exact"), d);
        p.bc_v = EdgeTraces::from_field(p.exact_v.clone().expect("p4 is exact"), d);
    }
    p
}

pub fn build(r: &Resolved) -> Result<System, CliError> {
    Ok(match r.problem {
        ProblemId::P1 => System::One(Burgers1D::new(problem1(), r.nx, r.rhs)?),
        id => {
            let p = problem_2d(id, r.re.expect("2D problems carry re"), r.domain);
            if id == ProblemId::P2 && r.t_end > P2_HORIZON {
                return Err(CliError::Config(format!(
                    "p2 is integrated at most to t = {P2_HORIZON} (the exact solution blows up at 1/sqrt(2))"
                )));
            }
            p.check_time(r.t_end)?;
            System::Two(Burgers2D::new(p, r.nx, r.ny.unwrap_or(r.nx), r.rhs)?)
        }
    })
}

/// Frozen coefficients taken from the initial data: the largest convective
/// speeds and the diffusion coefficient written as `2ν`.
pub fn frozen_from_initial(sys: &System) -> (f64, f64, f64) {
    let max_abs = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    match sys {
        System::One(s) => {
            let st = s.initial_state();
            let p = &s.problem;
            let (mu, mv) = (max_abs(&st.u), max_abs(&st.v));
            let speed = (p.eta.abs() * mu + p.alpha.abs() * mv).max(p.xi.abs() * mv + p.beta.abs() * mu);
            (speed, 0.0, 0.5)
        }
        System::Two(s) => {
            let st = s.initial_state();
            (max_abs(&st.u), max_abs(&st.v), s.problem.nu)
        }
    }
}

fn x_grid(sys: &System) -> &Grid1D {
    match sys {
        System::One(s) => &s.grid,
        System::Two(s) => &s.grid.x,
    }
}

fn solution_1d(sys: &Burgers1D, s: &State1D, t: f64) -> Result<Csv, CliError> {
    let exact = sys.exact_state(t);
    let mut csv = match exact {
        Some(_) => Csv::new(&["x", "u", "v", "exact_u", "exact_v", "err_u", "err_v"]),
        None => Csv::new(&["x", "u", "v"]),
    };
    for (i, &x) in sys.grid.nodes().iter().enumerate() {
        let mut row = vec![cell(x), cell(s.u[i]), cell(s.v[i])];
        if let Some(e) = &exact {
            row.extend([cell(e.u[i]), cell(e.v[i]), cell(s.u[i] - e.u[i]), cell(s.v[i] - e.v[i])]);
        }
        csv.push(row);
    }
    Ok(csv)
}

fn solution_2d(sys: &Burgers2D, s: &State2D, t: f64) -> Result<Csv, CliError> {
    let exact = sys.exact_state(t);
    let mut csv = match exact {
        Some(_) => Csv::new(&["x", "y", "u", "v", "exact_u", "exact_v", "err_u", "err_v"]),
        None => Csv::new(&["x", "y", "u", "v"]),
    };
    for (i, &x) in sys.grid.x.nodes().iter().enumerate() {
        for (j, &y) in sys.grid.y.nodes().iter().enumerate() {
            let k = sys.grid.idx(i, j);
            let mut row = vec![cell(x), cell(y), cell(s.u[k]), cell(s.v[k])];
            if let Some(e) = &exact {
                row.extend([cell(e.u[k]), cell(e.v[k]), cell(s.u[k] - e.u[k]), cell(s.v[k] - e.v[k])]);
            }
            csv.push(row);
        }
    }
    Ok(csv)
}

const ERROR_HEADER: [&str; 8] = ["t", "step", "n", "dt", "l2_u", "linf_u", "l2_v", "linf_v"];

fn write_solution<S>(
    run: &mut Run,
    sol: &Solution<S>,
    dt: f64,
    n: usize,
    mut dump: impl FnMut(&S, f64) -> Result<Csv, CliError>,
    mut errors: impl FnMut(&S, f64) -> Result<Option<(mtb_dqm::problems::ErrorNorms, mtb_dqm::problems::ErrorNorms)>, CliError>,
) -> Result<(), CliError> {
    let mut table = Csv::new(&ERROR_HEADER);
    for snap in &sol.snapshots {
        run.write(&format!("solution_{:07}.csv", snap.step), &dump(&snap.state, snap.t)?.render())?;
        if let Some((eu, ev)) = errors(&snap.state, snap.t)? {
            table.push(vec![
                cell(snap.t),
                snap.step.to_string(),
                n.to_string(),
                cell(dt),
                cell(eu.l2),
                cell(eu.linf),
                cell(ev.l2),
                cell(ev.linf),
            ]);
        }
    }
    if !table.is_empty() {
        run.write("errors.csv", &table.render())?;
    }
    Ok(())
}

pub fn run_solve(cfg: &ExperimentConfig) -> Result<RunManifest, CliError> {
    let r = cfg.resolve()?;
    let sys = build(&r)?;
    let icfg = IntegrationConfig::new(0.0, r.t_end, r.dt)?;
    mtb_dqm::solver::snapshot_steps(&icfg, &r.snapshots)?;

    let mut run = Run::new("solve", &r.out, resolved_entries(&r));
    run.phase("setup");
    if r.stability_check {
        let (tau0, kappa0, nu) = frozen_from_initial(&sys);
        let rep = mtb_dqm::stability::analyze(x_grid(&sys), &FrozenParams { tau0, kappa0, nu, dt: r.dt }, &SCHEME)?;
        let msg = format!(
            "frozen-coefficient check (tau0={tau0}, kappa0={kappa0}, nu={nu}): all_inside={}, max|R|={}",
            rep.all_inside, rep.max_abs_r
        );
        if !rep.all_inside {
            eprintln!("warning: {msg}");
        }
        run.note(msg);
    }

    run.phase("integrate");
    match &sys {
        System::One(s) => {
            let sol = solve_1d(s, &icfg, &r.snapshots, &SCHEME)?;
            run.phase("write");
            write_solution(
                &mut run,
                &sol,
                r.dt,
                s.grid.len(),
                |st, t| solution_1d(s, st, t),
                |st, t| Ok(errors_1d(s, st, t)?),
            )?;
        }
        System::Two(s) => {
            let sol = solve_2d(s, &icfg, &r.snapshots, &SCHEME)?;
            run.phase("write");
            write_solution(
                &mut run,
                &sol,
                r.dt,
                s.grid.nx(),
                |st, t| solution_2d(s, st, t),
                |st, t| Ok(errors_2d(s, st, t)?),
            )?;
        }
    }
    run.write("config.txt", &resolved_config(&r).to_string())?;
    run.finish()
}

pub fn resolved_config(r: &Resolved) -> ExperimentConfig {
    ExperimentConfig {
        problem: Some(r.problem),
        nx: Some(r.nx),
        ny: r.ny,
        re: r.re,
        dt: Some(r.dt),
        t_end: Some(r.t_end),
        snapshots: Some(r.snapshots.clone()),
        out: Some(r.out.clone()),
        boundary_policy: Some(r.rhs.boundary),
        gform: Some(r.rhs.gform),
        stability_check: Some(r.stability_check),
        domain: r.domain,
        ..Default::default()
    }
}

fn resolved_entries(r: &Resolved) -> Vec<(&'static str, String)> {
    resolved_config(r).entries()
}

fn error_report(r: &Resolved, n: usize) -> Result<ErrorReport, CliError> {
    let one = Resolved {
        nx: n,
        ny: r.ny.map(|_| n),
        ..r.clone()
    };
    let icfg = IntegrationConfig::new(0.0, r.t_end, r.dt)?;
    Ok(match build(&one)? {
        System::One(s) => report_1d(&s, &solve_1d(&s, &icfg, &[], &SCHEME)?, r.dt)?,
        System::Two(s) => report_2d(&s, &solve_2d(&s, &icfg, &[], &SCHEME)?, r.dt)?,
    })
}

pub fn run_convergence(cfg: &ExperimentConfig) -> Result<RunManifest, CliError> {
    let r = cfg.resolve()?;
    let ns = cfg.ns.clone().unwrap_or_else(|| vec![r.nx]);
    if ns.is_empty() {
        return Err(CliError::Config("ns must list at least one grid size".into()));
    }
    for w in ns.windows(2) {
        if w[1] != 2 * w[0] {
            return Err(CliError::Config(format!(
                "ns must double at every step, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    if r.problem == ProblemId::P3 {
        return Err(CliError::Config("p3 has no exact solution to measure errors against".into()));
    }
    // fail on a bad grid before any output exists
    for &n in &ns {
        build(&Resolved { nx: n, ny: r.ny.map(|_| n), ..r.clone() })?;
    }
    let mut config = resolved_entries(&r);
    config.push(("ns", ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")));
    let mut run = Run::new("convergence", &r.out, config);
    let mut reports = Vec::new();
    for &n in &ns {
        run.phase(&format!("n={n}"));
        reports.push(error_report(&r, n)?);
    }
    run.phase("write");
    let rows = convergence_table(&reports)?;
    let mut csv = Csv::new(&["n", "l2", "r_l2", "linf", "r_linf"]);
    for row in &rows {
        csv.push(vec![
            row.n.to_string(),
            cell(row.l2),
            opt_cell(row.r_l2),
            cell(row.linf),
            opt_cell(row.r_linf),
        ]);
        println!(
            "N={:>4}  L2={:.4e}  R={:>6}  Linf={:.4e}  R={:>6}",
            row.n,
            row.l2,
            row.r_l2.map(|r| format!("{r:.3}")).unwrap_or_default(),
            row.linf,
            row.r_linf.map(|r| format!("{r:.3}")).unwrap_or_default()
        );
    }
    run.write("convergence.csv", &csv.render())?;
    run.finish()
}

pub const DEFAULT_DTS: [f64; 5] = [1e-4, 1e-3, 1e-2, 1e-1, 1.0];

pub fn run_stability(cfg: &ExperimentConfig) -> Result<RunManifest, CliError> {
    let mut cfg = cfg.clone();
    cfg.problem.get_or_insert(ProblemId::P1);
    let r = cfg.resolve()?;
    let sys = build(&Resolved { t_end: 0.0, ..r.clone() })?;
    let (t0, k0, n0) = frozen_from_initial(&sys);
    let (tau0, kappa0, nu) = (cfg.tau0.unwrap_or(t0), cfg.kappa0.unwrap_or(k0), cfg.nu.unwrap_or(n0));
    let mut dts = cfg.dts.clone().unwrap_or_else(|| DEFAULT_DTS.to_vec());
    dts.sort_by(f64::total_cmp);
    let base = FrozenParams { tau0, kappa0, nu, dt: 1.0 };
    base.validate()?;
    for &dt in &dts {
        FrozenParams { dt, ..base }.validate()?;
    }

    let mut config = resolved_entries(&r);
    config.extend([("nu", nu.to_string()), ("tau0", tau0.to_string()), ("kappa0", kappa0.to_string())]);
    let mut run = Run::new("stability", &r.out, config);
    run.phase("spectra");
    let grid = x_grid(&sys).clone();
    let (spectra, reports) = sweep(&grid, &base, &dts, &SCHEME)?;
    let max_dt = match max_stable_dt_for(&spectra, nu, tau0, kappa0, &SCHEME) {
        Ok(dt) => Some(dt),
        Err(Error::NoStableDt { .. }) => None,
        Err(e) => return Err(e.into()),
    };

    run.phase("write");
    run.write("spectra.csv", &spectra_csv(&spectra).render())?;
    let mut csv = Csv::new(&["dt", "all_inside", "max_abs_r", "assembled_max_abs_r"]);
    let mut first_failure = None;
    for rep in &reports {
        csv.push(vec![
            cell(rep.params.dt),
            rep.all_inside.to_string(),
            cell(rep.max_abs_r),
            cell(rep.assembled_max_abs_r),
        ]);
        if !rep.all_inside && first_failure.is_none() {
            first_failure = Some(rep.params.dt);
        }
        println!(
            "dt={:.3e}  {}  max|R|={:.6}",
            rep.params.dt,
            if rep.all_inside { "inside" } else { "OUTSIDE" },
            rep.max_abs_r
        );
    }
    run.write("stability.csv", &csv.render())?;
    match max_dt {
        Some(dt) => println!("largest stable dt ≈ {dt:.4e}"),
        None => println!("no stable dt down to 1e-9"),
    }
    if let Some(dt) = first_failure {
        println!("first failure at dt={dt:.3e}");
        run.note(format!("first failing dt in the sweep: {dt}"));
    }
    run.note(format!("lambda1 imaginary dominance max|Re|/max|Im| = {:e}", spectra.imaginary_dominance()));
    if let Some(dt) = max_dt {
        run.note(format!("largest stable dt: {dt}"));
    }
    run.finish()
}

fn spectra_csv(s: &Spectra) -> Csv {
    let mut csv = Csv::new(&["matrix", "re", "im"]);
    for (name, l) in [("A1", &s.lambda1), ("A2", &s.lambda2)] {
        for z in l {
            csv.push(vec![name.to_string(), cell(z.re), cell(z.im)]);
        }
    }
    csv
}

pub fn run_weights_dump(cfg: &ExperimentConfig) -> Result<RunManifest, CliError> {
    let mut cfg = cfg.clone();
    cfg.problem.get_or_insert(ProblemId::P1);
    let r = cfg.resolve()?;
    let sys = build(&Resolved { t_end: 0.0, ..r.clone() })?;
    let grid = x_grid(&sys).clone();
    let mut run = Run::new("weights-dump", &r.out, resolved_entries(&r));
    run.phase("weights");
    let w = AxisWeights::build(&grid, Axis::X)?;
    run.phase("write");
    for (name, m) in [("weights_1.csv", &w.d1), ("weights_2.csv", &w.d2)] {
        let mut buf = Vec::new();
        m.write_csv(&mut buf).expect("writing to memory");
        run.write(name, &String::from_utf8(buf).expect("ascii csv"))?;
    }
    run.finish()
}

pub const TABLES: [&str; 6] = ["1.1", "1.3", "2.1", "2.3", "3.1", "4.1"];

fn ratio(a: f64, b: Option<f64>) -> Option<f64> {
    b.filter(|&b| b != 0.0).map(|b| a / b)
}

struct SideBySide {
    csv: Csv,
    widths: usize,
}

impl SideBySide {
    fn new(header: &[&str]) -> Self {
        println!("{}", header.iter().map(|h| format!("{h:>12}")).collect::<String>());
        Self {
            csv: Csv::new(header),
            widths: header.len(),
        }
    }

    fn row(&mut self, cells: Vec<Option<f64>>) {
        assert_eq!(cells.len(), self.widths);
        println!(
            "{}",
            cells
                .iter()
                .map(|c| match c {
                    Some(x) if x.fract() == 0.0 && x.abs() < 1e6 => format!("{:>12}", *x as i64),
                    Some(x) => format!("{x:>12.4e}"),
                    None => format!("{:>12}", "-"),
                })
                .collect::<String>()
        );
        self.csv.push(cells.into_iter().map(opt_cell).collect());
    }
}

/// Runs the parameter set behind a published table and prints computed
/// and published values side by side with their ratios.
pub fn run_table(id: &str, cfg: &ExperimentConfig) -> Result<RunManifest, CliError> {
    if !TABLES.contains(&id) {
        return Err(CliError::Config(format!("unknown table `{id}` (expected one of {})", TABLES.join(", "))));
    }
    for (key, set) in [("problem", cfg.problem.is_some()), ("nx", cfg.nx.is_some()), ("dt", cfg.dt.is_some())] {
        if set {
            return Err(CliError::Config(format!("table runs use the published parameters; `{key}` cannot be set")));
        }
    }
    let rhs = RhsOptions {
        boundary: cfg.boundary_policy.unwrap_or_default(),
        gform: cfg.gform.unwrap_or_default(),
    };
    let out = cfg.out.clone().unwrap_or_else(|| format!("table_{id}").into());
    let published = ReferenceTable::load(id)?;
    let mut run = Run::new(
        "table",
        &out,
        vec![
            ("table", id.to_string()),
            ("boundary_policy", rhs.boundary.to_string()),
            ("gform", rhs.gform.to_string()),
        ],
    );
    run.phase("compute");
    let pubcol = |name: &str| published.values(name).expect("bundled table has the column");
    let table = match id {
        "1.1" | "4.1" => {
            let ns: Vec<usize> = pubcol("n").iter().map(|n| n.expect("n") as usize).collect();
            let mut reports = Vec::new();
            for &n in &ns {
                reports.push(match id {
                    "1.1" => {
                        let s = Burgers1D::new(problem1(), n, rhs)?;
                        let c = IntegrationConfig::new(0.0, 1.0, 1e-3)?;
                        report_1d(&s, &solve_1d(&s, &c, &[], &SCHEME)?, 1e-3)?
                    }
                    _ => {
                        let s = Burgers2D::new(problem4(100.0), n, n, rhs)?;
                        let c = IntegrationConfig::new(0.0, 1.0, 1e-4)?;
                        report_2d(&s, &solve_2d(&s, &c, &[], &SCHEME)?, 1e-4)?
                    }
                });
            }
            let rows = convergence_table(&reports)?;
            let (l2, rl2, li, rli) = (pubcol("l2"), pubcol("r_l2"), pubcol("linf"), pubcol("r_linf"));
            let mut t = SideBySide::new(&[
                "n", "l2", "l2_pub", "l2_ratio", "r_l2", "r_l2_pub", "linf", "linf_pub", "linf_ratio", "r_linf",
                "r_linf_pub",
            ]);
            for (k, row) in rows.iter().enumerate() {
                t.row(vec![
                    Some(row.n as f64),
                    Some(row.l2),
                    l2[k],
                    ratio(row.l2, l2[k]),
                    row.r_l2,
                    rl2[k],
                    Some(row.linf),
                    li[k],
                    ratio(row.linf, li[k]),
                    row.r_linf,
                    rli[k],
                ]);
            }
            t
        }
        "1.3" => {
            let times: Vec<f64> = pubcol("t").iter().map(|t| t.expect("t")).collect();
            let s = Burgers1D::new(problem1(), 121, rhs)?;
            let c = IntegrationConfig::new(0.0, *times.last().expect("rows"), 1e-3)?;
            let sol = solve_1d(&s, &c, &times, &SCHEME)?;
            let (li, l2) = (pubcol("linf"), pubcol("l2"));
            let mut t = SideBySide::new(&["t", "linf", "linf_pub", "linf_ratio", "l2", "l2_pub", "l2_ratio"]);
            for (k, snap) in sol.snapshots.iter().filter(|s| s.step > 0).enumerate() {
                let (e, _) = errors_1d(&s, &snap.state, snap.t)?.expect("p1 is exact");
                t.row(vec![Some(snap.t), Some(e.linf), li[k], ratio(e.linf, li[k]), Some(e.l2), l2[k], ratio(e.l2, l2[k])]);
            }
            t
        }
        "2.1" => {
            let v_pub = ReferenceTable::load("2.2")?;
            let s = Burgers2D::new(problem2(80.0, P2_DOMAIN), 21, 21, rhs)?;
            let (xs, ys, ts) = (pubcol("x"), pubcol("y"), pubcol("t"));
            let mut times: Vec<f64> = ts.iter().map(|t| t.expect("t")).collect();
            times.dedup();
            let c = IntegrationConfig::new(0.0, *times.last().expect("rows"), 1e-4)?;
            let sol = solve_2d(&s, &c, &times, &SCHEME)?;
            let (un, vn) = (pubcol("numerical"), v_pub.values("numerical").expect("column"));
            let mut t = SideBySide::new(&["x", "y", "t", "u", "u_pub", "u_exact", "v", "v_pub", "v_exact"]);
            for k in 0..published.rows.len() {
                let (x, y, tt) = (xs[k].expect("x"), ys[k].expect("y"), ts[k].expect("t"));
                let snap = sol
                    .snapshots
                    .iter()
                    .find(|s| (s.t - tt).abs() < 1e-9)
                    .expect("snapshot requested");
                let idx = s.grid.idx(s.grid.x.nearest(x), s.grid.y.nearest(y));
                let (eu, ev) = (s.problem.exact_u.as_ref().expect("exact"), s.problem.exact_v.as_ref().expect("exact"));
                t.row(vec![
                    Some(x),
                    Some(y),
                    Some(tt),
                    Some(snap.state.u[idx]),
                    un[k],
                    Some(eu(x, y, tt)),
                    Some(snap.state.v[idx]),
                    vn[k],
                    Some(ev(x, y, tt)),
                ]);
            }
            t
        }
        "2.3" => {
            let (ns, ts, l2, li) = (pubcol("n"), pubcol("t"), pubcol("l2"), pubcol("linf"));
            let mut t = SideBySide::new(&["n", "t", "l2_v", "l2_pub", "l2_ratio", "linf_v", "linf_pub", "linf_ratio"]);
            let mut cache: Vec<(usize, Solution<State2D>, Burgers2D)> = Vec::new();
            let mut times: Vec<f64> = ts.iter().map(|t| t.expect("t")).collect();
            times.sort_by(f64::total_cmp);
            times.dedup();
            for k in 0..published.rows.len() {
                let (n, tt) = (ns[k].expect("n") as usize, ts[k].expect("t"));
                if !cache.iter().any(|c| c.0 == n) {
                    let s = Burgers2D::new(problem2(100.0, P2_DOMAIN), n, n, rhs)?;
                    let c = IntegrationConfig::new(0.0, *times.last().expect("rows"), 1e-4)?;
                    let sol = solve_2d(&s, &c, &times, &SCHEME)?;
                    cache.push((n, sol, s));
                }
                let (_, sol, s) = cache.iter().find(|c| c.0 == n).expect("cached");
                let snap = sol.snapshots.iter().find(|s| (s.t - tt).abs() < 1e-9).expect("snapshot");
                let (_, ev) = errors_2d(s, &snap.state, tt)?.expect("p2 is exact");
                t.row(vec![
                    Some(n as f64),
                    Some(tt),
                    Some(ev.l2),
                    l2[k],
                    ratio(ev.l2, l2[k]),
                    Some(ev.linf),
                    li[k],
                    ratio(ev.linf, li[k]),
                ]);
            }
            t
        }
        _ => {
            let s = Burgers2D::new(problem3(50.0), 21, 21, rhs)?;
            let c = IntegrationConfig::new(0.0, 0.625, 1e-4)?;
            let sol = solve_2d(&s, &c, &[], &SCHEME)?;
            let st = &sol.last().state;
            let (xs, ys, up, vp) = (pubcol("x"), pubcol("y"), pubcol("u"), pubcol("v"));
            let mut t = SideBySide::new(&["x", "y", "u", "u_pub", "u_diff", "v", "v_pub", "v_diff"]);
            for k in 0..published.rows.len() {
                let (x, y) = (xs[k].expect("x"), ys[k].expect("y"));
                let idx = s.grid.idx(s.grid.x.nearest(x), s.grid.y.nearest(y));
                let (u, v) = (st.u[idx], st.v[idx]);
                t.row(vec![
                    Some(x),
                    Some(y),
                    Some(u),
                    up[k],
                    up[k].map(|p| u - p),
                    Some(v),
                    vp[k],
                    vp[k].map(|p| v - p),
                ]);
            }
            t
        }
    };
    run.phase("write");
    run.write(&format!("table_{id}.csv"), &table.csv.render())?;
    run.finish()
}
