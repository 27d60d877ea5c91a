//! Run configuration: command-line flags, an optional `key=value` file, and
//! validation. Flags override file values.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Parser;

use crate::catalog::SUITES;
use crate::drinfeld::{self, CURRENT_NAMES};
use crate::exact::Rational;
use crate::gauss::GAUSS_NAMES;
use crate::rep::LABELS;
use crate::{Error, Result};

#[derive(Parser, Debug, Clone, Default)]
#[command(
    name = "verify",
    about = "Exact identity checks for the Yangian of so3"
)]
pub struct Cli {
    /// Comma-separated suites: rmatrix, rtt, unitarity, gauss, section3, drinfeld, roundtrip, all.
    #[arg(long)]
    pub suites: Option<String>,
    /// Truncation order K.
    #[arg(long)]
    pub order: Option<i64>,
    /// Number of tensor factors m.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Comma-separated evaluation points, e.g. `0,1/3`.
    #[arg(long, allow_hyphen_values = true)]
    pub points: Option<String>,
    /// Output format: json or text.
    #[arg(long)]
    pub format: Option<String>,
    /// Single-coefficient perturbation `suite:target:order:delta`.
    #[arg(long, allow_hyphen_values = true)]
    pub mutate: Option<String>,
    /// Seed for the sampled Yang-Baxter oracle.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest mode index in the mode relations.
    #[arg(long)]
    pub mode_bound: Option<i64>,
    /// Include elapsed milliseconds per record.
    #[arg(long)]
    pub timings: bool,
    /// `key=value` file with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print the identity catalog and exit.
    #[arg(long)]
    pub catalog: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mutation {
    pub suite: String,
    pub target: String,
    /// Exponent `r` of the perturbed `u^{-r}` coefficient; for `P` and `Q`,
    /// the flattened entry index.
    pub order: i64,
    pub delta: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub order: i64,
    pub depth: usize,
    pub points: Vec<Rational>,
    /// Selected suites in canonical order.
    pub suites: Vec<String>,
    pub format: Format,
    pub mutate: Option<Mutation>,
    pub seed: u64,
    pub mode_bound: i64,
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: 8,
            depth: 2,
            points: vec![Rational::zero(), Rational::new(1, 3)],
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            format: Format::Json,
            mutate: None,
            seed: 0,
            mode_bound: drinfeld::default_mode_bound(8),
            timings: false,
        }
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Parse a `key=value` file; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("line {}: expected key=value", n + 1)))?;
        let key = k.trim().replace('_', "-");
        const KEYS: [&str; 9] = [
            "suites",
            "order",
            "depth",
            "points",
            "format",
            "mutate",
            "seed",
            "mode-bound",
            "timings",
        ];
        if !KEYS.contains(&key.as_str()) {
            return Err(config_err(format!("line {}: unknown key {key:?}", n + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

pub fn parse_points(s: &str) -> Result<Vec<Rational>> {
    let pts = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<Rational>()
                .map_err(|e| config_err(e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    if pts.is_empty() {
        return Err(config_err("no evaluation points"));
    }
    Ok(pts)
}

pub fn parse_suites(s: &str) -> Result<Vec<String>> {
    let mut chosen = Vec::new();
    for name in s.split(',').map(str::trim) {
        if name == "all" {
            chosen.extend(SUITES.iter().copied());
        } else if SUITES.contains(&name) {
            chosen.push(name);
        } else {
            return Err(config_err(format!("unknown suite {name:?}")));
        }
    }
    Ok(SUITES
        .iter()
        .filter(|s| chosen.contains(s))
        .map(|s| s.to_string())
        .collect())
}

fn t_target_names() -> Vec<String> {
    let lab = |i: i64| {
        if i < 0 {
            "M1".to_string()
        } else {
            i.to_string()
        }
    };
    LABELS
        .iter()
        .flat_map(|&i| {
            LABELS
                .iter()
                .map(move |&j| format!("t{}{}", lab(i), lab(j)))
        })
        .collect()
}

/// Entry `(i,j)` of `T` named by a target such as `tM10`.
pub fn parse_t_target(target: &str) -> Option<(i64, i64)> {
    let rest = target.strip_prefix('t')?;
    let (i, rest) = match rest.strip_prefix("M1") {
        Some(r) => (-1, r),
        None => (rest.get(..1)?.parse::<i64>().ok()?, &rest[1..]),
    };
    let j = match rest {
        "M1" => -1,
        _ => rest.parse::<i64>().ok()?,
    };
    (LABELS.contains(&i) && LABELS.contains(&j)).then_some((i, j))
}

/// Names accepted as mutation targets for a suite.
pub fn mutation_targets(suite: &str) -> Vec<String> {
    match suite {
        "rmatrix" => vec!["P".into(), "Q".into()],
        "rtt" | "unitarity" => t_target_names(),
        "gauss" | "section3" | "roundtrip" => GAUSS_NAMES.iter().map(|s| s.to_string()).collect(),
        "drinfeld" => CURRENT_NAMES.iter().map(|s| s.to_string()).collect(),
        _ => Vec::new(),
    }
}

pub fn parse_mutation(s: &str) -> Result<Mutation> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let [suite, target, order, delta] = parts[..] else {
        return Err(config_err(format!(
            "mutation {s:?} is not suite:target:order:delta"
        )));
    };
    if !SUITES.contains(&suite) {
        return Err(config_err(format!("unknown mutation suite {suite:?}")));
    }
    if !mutation_targets(suite).iter().any(|t| t == target) {
        return Err(config_err(format!(
            "unknown target {target:?} for suite {suite}"
        )));
    }
    let order: i64 = order
        .parse()
        .map_err(|_| config_err(format!("mutation order {order:?} is not an integer")))?;
    let delta: Rational = delta
        .parse()
        .map_err(|e: crate::exact::ExactError| config_err(e.to_string()))?;
    Ok(Mutation {
        suite: suite.to_string(),
        target: target.to_string(),
        order,
        delta,
    })
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(config_err(format!(
            "{key}: expected true or false, got {v:?}"
        ))),
    }
}

impl RunConfig {
    /// Merge flags over file values and validate.
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let file = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
                parse_config_file(&text)?
            }
            None => BTreeMap::new(),
        };
        let pick = |flag: Option<String>, key: &str| flag.or_else(|| file.get(key).cloned());
        let int = |key: &str, v: &str| -> Result<i64> {
            v.parse()
                .map_err(|_| config_err(format!("{key}: {v:?} is not an integer")))
        };

        let mut cfg = RunConfig::default();
        if let Some(v) = pick(cli.order.map(|x| x.to_string()), "order") {
            cfg.order = int("order", &v)?;
        }
        if let Some(v) = pick(cli.depth.map(|x| x.to_string()), "depth") {
            let d = int("depth", &v)?;
            if d < 1 {
                return Err(config_err(format!("depth must be >= 1, got {d}")));
            }
            cfg.depth = d as usize;
        }
        if let Some(v) = pick(cli.points.clone(), "points") {
            cfg.points = parse_points(&v)?;
        }
        if let Some(v) = pick(cli.suites.clone(), "suites") {
            cfg.suites = parse_suites(&v)?;
        }
        if let Some(v) = pick(cli.format.clone(), "format") {
            cfg.format = match v.as_str() {
                "json" => Format::Json,
                "text" => Format::Text,
                other => return Err(config_err(format!("unknown format {other:?}"))),
            };
        }
        if let Some(v) = pick(cli.mutate.clone(), "mutate") {
            cfg.mutate = Some(parse_mutation(&v)?);
        }
        if let Some(v) = pick(cli.seed.map(|x| x.to_string()), "seed") {
            cfg.seed = v
                .parse()
                .map_err(|_| config_err(format!("seed: {v:?} is not a non-negative integer")))?;
        }
        cfg.timings = cli.timings
            || match file.get("timings") {
                Some(v) => parse_bool("timings", v)?,
                None => false,
            };
        let bound = match pick(cli.mode_bound.map(|x| x.to_string()), "mode-bound") {
            Some(v) => Some(int("mode-bound", &v)?),
            None => None,
        };
        cfg.validate(bound)?;
        Ok(cfg)
    }

    fn validate(&mut self, bound: Option<i64>) -> Result<()> {
        if self.order < 2 {
            return Err(config_err(format!(
                "order must be >= 2, got {}",
                self.order
            )));
        }
        if self.depth > 1 && self.points.len() != self.depth {
            return Err(config_err(format!(
                "depth {} needs exactly {} points, got {}",
                self.depth,
                self.depth,
                self.points.len()
            )));
        }
        if self.suites.is_empty() {
            return Err(config_err("no suites selected"));
        }
        self.mode_bound = match bound {
            Some(b) => {
                drinfeld::validate_mode_bound(b, self.order)?;
                b
            }
            None => drinfeld::default_mode_bound(self.order),
        };
        if let Some(m) = &self.mutate {
            if !self.suites.contains(&m.suite) {
                return Err(config_err(format!(
                    "mutation suite {} is not selected",
                    m.suite
                )));
            }
            let max = if m.suite == "rmatrix" { 80 } else { self.order };
            if m.order < 0 || m.order > max {
                return Err(config_err(format!(
                    "mutation order {} outside 0..={max}",
                    m.order
                )));
            }
        }
        Ok(())
    }

    /// Evaluation parameter sets: one per point when `m = 1`, else one
    /// tensor product over all points.
    pub fn eval_sets(&self) -> Vec<crate::rep::EvalParams> {
        use crate::rep::EvalParams;
        if self.depth == 1 {
            self.points
                .iter()
                .map(|p| EvalParams::new(vec![p.clone()], self.order))
                .collect()
        } else {
            vec![EvalParams::new(self.points.clone(), self.order)]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("verify").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn defaults() {
        let cfg = RunConfig::from_cli(&cli(&[])).unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.mode_bound, 6);
        assert_eq!(cfg.eval_sets().len(), 1);
    }

    #[test]
    fn depth_one_runs_each_point() {
        let cfg = RunConfig::from_cli(&cli(&["--depth", "1", "--points", "0,1/3,-2/5"])).unwrap();
        assert_eq!(cfg.eval_sets().len(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        for args in [
            &["--points", "1/0"][..],
            &["--suites", "nope"],
            &["--order", "1"],
            &["--order", "6", "--mode-bound", "5"],
            &["--depth", "3"],
            &["--format", "xml"],
            &["--mutate", "gauss:kMinus2:1:1"],
            &["--mutate", "rtt:tM10:1:1", "--suites", "gauss"],
        ] {
            assert!(
                matches!(RunConfig::from_cli(&cli(args)), Err(Error::Config(_))),
                "{args:?}"
            );
        }
    }

    #[test]
    fn mutation_parsing() {
        let m = parse_mutation("gauss:kMinus1:1:+1").unwrap();
        assert_eq!(
            (m.suite.as_str(), m.target.as_str(), m.order),
            ("gauss", "kMinus1", 1)
        );
        assert_eq!(m.delta, Rational::one());
        assert_eq!(parse_t_target("tM10"), Some((-1, 0)));
        assert_eq!(parse_t_target("t1M1"), Some((1, -1)));
        assert_eq!(parse_t_target("t00"), Some((0, 0)));
        assert_eq!(parse_t_target("t2M1"), None);
        assert_eq!(mutation_targets("rtt").len(), 9);
    }

    #[test]
    fn file_values_lose_to_flags() {
        let map =
            parse_config_file("order = 6 # truncation\nsuites=rtt\n\nmode_bound=2\n").unwrap();
        assert_eq!(map["order"], "6");
        assert_eq!(map["mode-bound"], "2");
        assert!(parse_config_file("colour=blue").is_err());

        let dir = std::env::temp_dir().join(format!("verify-cfg-{}", std::process::id()));
        std::fs::write(&dir, "order=6\nsuites=rtt\n").unwrap();
        let mut c = cli(&["--order", "5"]);
        c.config = Some(dir.clone());
        let cfg = RunConfig::from_cli(&c).unwrap();
        std::fs::remove_file(&dir).unwrap();
        assert_eq!(cfg.order, 5);
        assert_eq!(cfg.suites, vec!["rtt".to_string()]);
    }
}
