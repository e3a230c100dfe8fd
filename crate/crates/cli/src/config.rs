//! Flat `key = value` experiment configuration.
//!
//! One setting per line, `#` starts a comment. Lists are comma separated.
//! Every key has a command-line flag of the same name with `_` spelled `-`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use mtb_dqm::burgers::{BoundaryPolicy, GForm, RhsOptions};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemId {
    P1,
    P2,
    P3,
    P4,
}

impl ProblemId {
    pub fn is_2d(self) -> bool {
        self != ProblemId::P1
    }

    pub fn default_re(self) -> Option<f64> {
        match self {
            ProblemId::P1 => None,
            ProblemId::P2 => Some(80.0),
            ProblemId::P3 => Some(50.0),
            ProblemId::P4 => Some(100.0),
        }
    }

    fn default_n(self) -> usize {
        match self {
            ProblemId::P1 => 121,
            ProblemId::P2 | ProblemId::P3 => 21,
            ProblemId::P4 => 32,
        }
    }

    fn default_dt(self) -> f64 {
        match self {
            ProblemId::P1 => 1e-3,
            _ => 1e-4,
        }
    }

    fn default_t_end(self) -> f64 {
        match self {
            ProblemId::P1 | ProblemId::P4 => 1.0,
            ProblemId::P2 => 0.1,
            ProblemId::P3 => 0.625,
        }
    }
}

impl FromStr for ProblemId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "p1" => Ok(Self::P1),
            "p2" => Ok(Self::P2),
            "p3" => Ok(Self::P3),
            "p4" => Ok(Self::P4),
            _ => Err(CliError::Config(format!("unknown problem `{s}` (expected p1, p2, p3 or p4)"))),
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::P1 => "p1",
            Self::P2 => "p2",
            Self::P3 => "p3",
            Self::P4 => "p4",
        })
    }
}

/// Settings as written by the user; unset keys fall back to per-problem
/// defaults in [`ExperimentConfig::resolve`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    pub problem: Option<ProblemId>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub re: Option<f64>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub snapshots: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub boundary_policy: Option<BoundaryPolicy>,
    pub gform: Option<GForm>,
    pub stability_check: Option<bool>,
    /// 2D box `[a, b, c, d]`; only for problems whose traces come from an
    /// exact solution.
    pub domain: Option<[f64; 4]>,
    pub ns: Option<Vec<usize>>,
    pub nu: Option<f64>,
    pub tau0: Option<f64>,
    pub kappa0: Option<f64>,
    pub dts: Option<Vec<f64>>,
}

pub const KEYS: [&str; 17] = [
    "problem",
    "nx",
    "ny",
    "re",
    "dt",
    "t_end",
    "snapshots",
    "out",
    "boundary_policy",
    "gform",
    "stability_check",
    "domain",
    "ns",
    "nu",
    "tau0",
    "kappa0",
    "dts",
];

fn bad(key: &str, value: &str, why: impl fmt::Display) -> CliError {
    CliError::Config(format!("{key} = {value}: {why}"))
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    v.parse::<T>().map_err(|e| bad(key, v, e))
}

fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>, CliError>
where
    T::Err: fmt::Display,
{
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|s| num(key, s.trim())).collect()
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut c = Self::default();
        let mut seen = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if seen.contains(&k) {
                return Err(CliError::Config(format!("line {}: duplicate key `{k}`", lineno + 1)));
            }
            seen.push(k);
            c.set(k, v)?;
        }
        Ok(c)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<(), CliError> {
        match key {
            "problem" => self.problem = Some(v.parse()?),
            "nx" => self.nx = Some(num(key, v)?),
            "ny" => self.ny = Some(num(key, v)?),
            "re" => self.re = Some(num(key, v)?),
            "dt" => self.dt = Some(num(key, v)?),
            "t_end" => self.t_end = Some(num(key, v)?),
            "snapshots" => self.snapshots = Some(list(key, v)?),
            "out" => self.out = Some(PathBuf::from(v)),
            "boundary_policy" => self.boundary_policy = Some(v.parse().map_err(|e| bad(key, v, e))?),
            "gform" => self.gform = Some(v.parse().map_err(|e| bad(key, v, e))?),
            "stability_check" => self.stability_check = Some(num(key, v)?),
            "domain" => {
                let d: Vec<f64> = list(key, v)?;
                let d: [f64; 4] = d.try_into().map_err(|_| bad(key, v, "expected a,b,c,d"))?;
                self.domain = Some(d);
            }
            "ns" => self.ns = Some(list(key, v)?),
            "nu" => self.nu = Some(num(key, v)?),
            "tau0" => self.tau0 = Some(num(key, v)?),
            "kappa0" => self.kappa0 = Some(num(key, v)?),
            "dts" => self.dts = Some(list(key, v)?),
            _ => return Err(CliError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Keys set in `other` replace ours.
    pub fn overlay(&mut self, other: &ExperimentConfig) {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f.clone(); } )* };
        }
        take!(
            problem, nx, ny, re, dt, t_end, snapshots, out, boundary_policy, gform, stability_check, domain, ns,
            nu, tau0, kappa0, dts
        );
    }

    /// `(key, value)` pairs of the set keys in canonical order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let mut push = |k: &'static str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k, v));
            }
        };
        push("problem", self.problem.map(|p| p.to_string()));
        push("nx", self.nx.map(|x| x.to_string()));
        push("ny", self.ny.map(|x| x.to_string()));
        push("re", self.re.map(|x| x.to_string()));
        push("dt", self.dt.map(|x| x.to_string()));
        push("t_end", self.t_end.map(|x| x.to_string()));
        push("snapshots", self.snapshots.as_deref().map(join));
        push("out", self.out.as_ref().map(|p| p.display().to_string()));
        push("boundary_policy", self.boundary_policy.map(|x| x.to_string()));
        push("gform", self.gform.map(|x| x.to_string()));
        push("stability_check", self.stability_check.map(|x| x.to_string()));
        push("domain", self.domain.as_ref().map(|d| join(d)));
        push("ns", self.ns.as_deref().map(join));
        push("nu", self.nu.map(|x| x.to_string()));
        push("tau0", self.tau0.map(|x| x.to_string()));
        push("kappa0", self.kappa0.map(|x| x.to_string()));
        push("dts", self.dts.as_deref().map(join));
        out
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let problem = self
            .problem
            .ok_or_else(|| CliError::Config("no problem given (set `problem` or pass --problem)".into()))?;
        let nx = self.nx.unwrap_or(problem.default_n());
        let ny = match (problem.is_2d(), self.ny) {
            (false, Some(_)) => return Err(CliError::Config("ny is only meaningful for 2D problems".into())),
            (false, None) => None,
            (true, ny) => Some(ny.unwrap_or(nx)),
        };
        let re = match (problem.default_re(), self.re) {
            (None, Some(_)) => return Err(CliError::Config("re is only meaningful for 2D problems".into())),
            (d, r) => r.or(d),
        };
        if let Some(re) = re {
            if !(re > 0.0 && re.is_finite()) {
                return Err(CliError::Config(format!("re must be positive, got {re}")));
            }
        }
        if self.domain.is_some() && !matches!(problem, ProblemId::P2 | ProblemId::P4) {
            return Err(CliError::Config(
                "domain can only be changed for p2 and p4, whose boundary data come from the exact solution"
                    .into(),
            ));
        }
        let dt = self.dt.unwrap_or(problem.default_dt());
        let t_end = self.t_end.unwrap_or(problem.default_t_end());
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(CliError::Config(format!("dt must be positive, got {dt}")));
        }
        if !(t_end >= 0.0 && t_end.is_finite()) {
            return Err(CliError::Config(format!("t_end must be >= 0, got {t_end}")));
        }
        mtb_dqm::ssprk54::IntegrationConfig::new(0.0, t_end, dt)?;
        let snapshots = self.snapshots.clone().unwrap_or_default();
        if let Some(&t) = snapshots.iter().find(|&&t| !(t >= 0.0 && t <= t_end)) {
            return Err(CliError::Config(format!("snapshot time {t} outside [0, {t_end}]")));
        }
        Ok(Resolved {
            problem,
            nx,
            ny,
            re,
            dt,
            t_end,
            snapshots,
            out: self.out.clone().unwrap_or_else(|| PathBuf::from("out")),
            rhs: RhsOptions {
                boundary: self.boundary_policy.unwrap_or_default(),
                gform: self.gform.unwrap_or_default(),
            },
            stability_check: self.stability_check.unwrap_or(false),
            domain: self.domain,
        })
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.entries() {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

/// Config with defaults filled in and invariants checked.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub problem: ProblemId,
    pub nx: usize,
    pub ny: Option<usize>,
    pub re: Option<f64>,
    pub dt: f64,
    pub t_end: f64,
    pub snapshots: Vec<f64>,
    pub out: PathBuf,
    pub rhs: RhsOptions,
    pub stability_check: bool,
    pub domain: Option<[f64; 4]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# problem 4 at the published resolution
problem = p4
nx = 32   # nodes per axis
re=100
dt = 1e-4
t_end = 1
snapshots = 0.5, 1
boundary_policy = stage
";

    #[test]
    fn parse_and_resolve() {
        let c = ExperimentConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.problem, Some(ProblemId::P4));
        assert_eq!(c.snapshots, Some(vec![0.5, 1.0]));
        let r = c.resolve().unwrap();
        assert_eq!((r.nx, r.ny), (32, Some(32)));
        assert_eq!(r.rhs.boundary, BoundaryPolicy::Stage);
        assert_eq!(r.rhs.gform, GForm::Printed);
    }

    #[test]
    fn round_trip_is_idempotent() {
        let once = ExperimentConfig::parse(SAMPLE).unwrap().to_string();
        let twice = ExperimentConfig::parse(&once).unwrap().to_string();
        assert_eq!(once, twice);
        assert_eq!(ExperimentConfig::parse(&once).unwrap(), ExperimentConfig::parse(SAMPLE).unwrap());
    }

    #[test]
    fn every_key_round_trips() {
        let text = "problem = p2\nnx = 9\nny = 7\nre = 80\ndt = 0.001\nt_end = 0.1\nsnapshots = 0.05\n\
                    out = runs/a\nboundary_policy = base\ngform = symmetric\nstability_check = true\n\
                    domain = -0.5,0.5,-0.5,0.5\nns = 5,9\nnu = 0.0125\ntau0 = 1\nkappa0 = 0.5\ndts = 0.001,0.01\n";
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(c.entries().len(), KEYS.len());
        assert_eq!(c.to_string(), text);
    }

    #[test]
    fn overlay_prefers_flags() {
        let mut c = ExperimentConfig::parse(SAMPLE).unwrap();
        let flags = ExperimentConfig {
            nx: Some(16),
            ..Default::default()
        };
        c.overlay(&flags);
        assert_eq!(c.nx, Some(16));
        assert_eq!(c.dt, Some(1e-4));
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "problem = p9",
            "nx = ten",
            "colour = blue",
            "problem p1",
            "dt = 1\ndt = 2",
            "domain = 0,1,0",
        ] {
            assert!(ExperimentConfig::parse(text).is_err(), "{text}");
        }
        for text in [
            "",
            "problem = p1\nny = 5",
            "problem = p1\nre = 10",
            "problem = p1\ndt = 0.3\nt_end = 1",
            "problem = p1\nsnapshots = 2",
            "problem = p3\ndomain = 0,1,0,1",
            "problem = p4\nre = -1",
        ] {
            let c = ExperimentConfig::parse(text).unwrap();
            assert!(c.resolve().is_err(), "{text}");
        }
    }
}
