//! Suite execution: builds representations, applies the optional mutation,
//! evaluates every catalog identity and assembles a sorted report.

use std::time::Instant;

use rayon::prelude::*;

use crate::catalog;
use crate::config::{parse_t_target, Mutation, RunConfig};
use crate::drinfeld::{self, Currents};
use crate::exact::Rational;
use crate::gauss::{self, GaussData};
use crate::identity::{evaluate, Identity, Outcome, SeriesEnv};
use crate::rep::{self, EvalParams, RepT};
use crate::report::{Failure, Record, Report, Verdict};
use crate::rmatrix::{self, RMatrixFamily};
use crate::Result;

/// Sizes `N` covered by the R-matrix suite.
pub const RMATRIX_SIZES: [usize; 3] = [3, 4, 5];
/// Random points sampled by the Yang-Baxter oracle.
pub const YBE_SAMPLES: usize = 5;

struct Ctx<'a> {
    cfg: &'a RunConfig,
    suite: &'static str,
    params: String,
}

impl Ctx<'_> {
    fn mutation(&self) -> Option<&Mutation> {
        self.cfg.mutate.as_ref().filter(|m| m.suite == self.suite)
    }

    fn record(
        &self,
        id: &str,
        verdict: Verdict,
        oracle: Option<Verdict>,
        start: Instant,
    ) -> Record {
        let anchor = catalog::lookup(id).map_or("", |e| e.anchor);
        let mut r = Record::new(id, self.suite, anchor, &self.params, verdict);
        if let Some(o) = oracle {
            r = r.with_oracle(o);
        }
        if self.cfg.timings {
            r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        }
        r
    }

    fn identity(&self, id: &str, env: &SeriesEnv, identity: &Identity) -> Record {
        let start = Instant::now();
        let Outcome { verdict, oracle } = evaluate(env, identity);
        self.record(id, verdict, oracle, start)
    }

    /// Every identity of the suite fails with the construction error.
    fn all_failed(&self, err: &crate::Error) -> Vec<Record> {
        let start = Instant::now();
        catalog::suite_entries(self.suite)
            .map(|e| {
                let v = Verdict::fail(Failure::new(format!("evaluation error: {err}")));
                self.record(e.id, v, None, start)
            })
            .collect()
    }

    fn or_failed(&self, out: Result<Vec<Record>>) -> Vec<Record> {
        out.unwrap_or_else(|e| self.all_failed(&e))
    }
}

fn mutated_family(n: usize, m: Option<&Mutation>) -> Result<RMatrixFamily> {
    let fam = RMatrixFamily::new(n)?;
    Ok(match m {
        Some(m) => fam.perturbed(m.target == "Q", m.order as usize, &m.delta),
        None => fam,
    })
}

fn run_rmatrix(cfg: &RunConfig) -> Vec<Record> {
    RMATRIX_SIZES
        .par_iter()
        .map(|&n| {
            let ctx = Ctx {
                cfg,
                suite: "rmatrix",
                params: format!("N={n}"),
            };
            let start = Instant::now();
            let fam = match mutated_family(n, ctx.mutation()) {
                Ok(f) => f,
                Err(e) => return ctx.all_failed(&e),
            };
            let mut out: Vec<Record> = rmatrix::check_structure(&fam)
                .into_iter()
                .map(|(id, v)| ctx.record(id, v, None, start))
                .collect();
            let start = Instant::now();
            let ybe = rmatrix::check_ybe(&fam);
            let sampled = rmatrix::check_ybe_at_points(&fam, cfg.seed, YBE_SAMPLES);
            out.push(ctx.record("ybe", ybe, Some(sampled), start));
            out
        })
        .flatten()
        .collect()
}

fn mutated_t(t: &RepT, m: Option<&Mutation>) -> Result<RepT> {
    match m {
        Some(m) => {
            let (i, j) = parse_t_target(&m.target)
                .ok_or_else(|| crate::Error::UnknownSeries(m.target.clone()))?;
            t.perturbed(i, j, m.order, &m.delta)
        }
        None => Ok(t.clone()),
    }
}

fn run_rtt(ctx: &Ctx, t: &RepT) -> Result<Vec<Record>> {
    let t = mutated_t(t, ctx.mutation())?;
    let env = rep::rep_env(&t, &rep::invert_t(&t)?);
    let fam = RMatrixFamily::new(3)?;
    Ok(vec![
        ctx.identity("rtt", &env, &rep::rtt_identity(&fam)),
        ctx.identity("rtt_entrywise", &env, &rep::gen_rel_t_identity()),
        ctx.identity("rtt_inverse", &env, &rep::rtt_inverse_identity(&fam)),
        ctx.identity(
            "rtt_inverse_entrywise",
            &env,
            &rep::gen_rel_tprime_identity(),
        ),
    ])
}

fn run_unitarity(ctx: &Ctx, t: &RepT) -> Result<Vec<Record>> {
    let t = mutated_t(t, ctx.mutation())?;
    let env = rep::rep_env(&t, &rep::invert_t(&t)?);
    let kappa = Rational::half();
    Ok(vec![
        ctx.identity("unitarity", &env, &rep::unitarity_identity(&kappa)),
        ctx.identity(
            "inverse_is_shifted_transpose",
            &env,
            &rep::inverse_transpose_identity(&kappa),
        ),
    ])
}

fn mutated_gauss(g: &GaussData, m: Option<&Mutation>) -> Result<GaussData> {
    match m {
        Some(m) => g.perturbed(&m.target, m.order, &m.delta),
        None => Ok(g.clone()),
    }
}

fn run_gauss(ctx: &Ctx, t: &RepT, g: &GaussData) -> Result<Vec<Record>> {
    let g = mutated_gauss(g, ctx.mutation())?;
    let checks = [
        (
            "gauss_reconstruction",
            gauss::check_reconstruction as fn(&RepT, &GaussData) -> Verdict,
        ),
        ("gauss_uniqueness", |_, g| gauss::check_uniqueness(g)),
        ("gauss_leading_terms", |_, g| gauss::check_leading_terms(g)),
    ];
    Ok(checks
        .into_iter()
        .map(|(id, f)| {
            let start = Instant::now();
            ctx.record(id, f(t, &g), None, start)
        })
        .collect())
}

fn run_section3(ctx: &Ctx, g: &GaussData) -> Result<Vec<Record>> {
    let env = mutated_gauss(g, ctx.mutation())?.env();
    Ok(gauss::gauss_relations()
        .iter()
        .map(|(id, identity)| ctx.identity(id, &env, identity))
        .collect())
}

fn run_drinfeld(ctx: &Ctx, g: &GaussData) -> Result<Vec<Record>> {
    let mut c = drinfeld::phi_map(g)?;
    if let Some(m) = ctx.mutation() {
        c = c.perturbed(&m.target, m.order, &m.delta)?;
    }
    let env = drinfeld::joint_env(g, &c);
    let mut out: Vec<Record> = drinfeld::current_identities()
        .iter()
        .map(|(id, identity)| ctx.identity(id, &env, identity))
        .collect();
    let start = Instant::now();
    let bound = ctx.cfg.mode_bound;
    let mode_ctx = Ctx {
        cfg: ctx.cfg,
        suite: ctx.suite,
        params: format!("{};bound={bound}", ctx.params),
    };
    for (id, v) in drinfeld::check_mode_relations(&c, bound) {
        out.push(mode_ctx.record(id, v, None, start));
    }
    out.push(ctx.identity("phi_h_shift", &env, &drinfeld::phi_h_shift()));
    out.push(ctx.identity("inverse_map", &env, &drinfeld::inverse_map()));
    Ok(out)
}

fn run_roundtrip(ctx: &Ctx, t: &RepT, g: &GaussData) -> Result<Vec<Record>> {
    let g = mutated_gauss(g, ctx.mutation())?;
    let start = Instant::now();
    let c: Currents = drinfeld::phi_map(&g)?;
    Ok(vec![ctx.record(
        "surjectivity",
        drinfeld::check_surjectivity(t, &c),
        None,
        start,
    )])
}

fn run_eval_set(cfg: &RunConfig, params: &EvalParams) -> Vec<Record> {
    let label = params.label();
    let suites: Vec<&'static str> = catalog::SUITES
        .iter()
        .copied()
        .filter(|s| *s != "rmatrix" && cfg.suites.iter().any(|x| x == s))
        .collect();
    let ctx_for = |suite| Ctx {
        cfg,
        suite,
        params: label.clone(),
    };
    let t = match rep::build_rep(params) {
        Ok(t) => t,
        Err(e) => {
            return suites
                .iter()
                .flat_map(|s| ctx_for(*s).all_failed(&e))
                .collect()
        }
    };
    let needs_gauss = suites
        .iter()
        .any(|s| matches!(*s, "gauss" | "section3" | "drinfeld" | "roundtrip"));
    let g = if needs_gauss {
        Some(gauss::gauss_decompose(&t))
    } else {
        None
    };
    suites
        .par_iter()
        .map(|&suite| {
            let ctx = ctx_for(suite);
            let out = match (suite, &g) {
                ("rtt", _) => run_rtt(&ctx, &t),
                ("unitarity", _) => run_unitarity(&ctx, &t),
                (_, Some(Err(e))) => Err(e.clone()),
                ("gauss", Some(Ok(g))) => run_gauss(&ctx, &t, g),
                ("section3", Some(Ok(g))) => run_section3(&ctx, g),
                ("drinfeld", Some(Ok(g))) => run_drinfeld(&ctx, g),
                ("roundtrip", Some(Ok(g))) => run_roundtrip(&ctx, &t, g),
                _ => unreachable!("suite {suite} is not dispatched"),
            };
            ctx.or_failed(out)
        })
        .flatten()
        .collect()
}

/// Run every selected suite. Records come back sorted, so the report is
/// independent of scheduling.
pub fn run(cfg: &RunConfig) -> Report {
    let mut records = Vec::new();
    let (rm, rest) = rayon::join(
        || {
            if cfg.suites.iter().any(|s| s == "rmatrix") {
                run_rmatrix(cfg)
            } else {
                Vec::new()
            }
        },
        || {
            if cfg.suites.iter().any(|s| s != "rmatrix") {
                cfg.eval_sets()
                    .par_iter()
                    .map(|p| run_eval_set(cfg, p))
                    .flatten()
                    .collect()
            } else {
                Vec::new()
            }
        },
    );
    records.extend(rm);
    records.extend(rest);
    Report::new(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_mutation;

    fn small(suites: &[&str]) -> RunConfig {
        RunConfig {
            order: 5,
            depth: 1,
            points: vec![Rational::zero()],
            suites: suites.iter().map(|s| s.to_string()).collect(),
            mode_bound: 3,
            ..RunConfig::default()
        }
    }

    #[test]
    fn every_catalog_entry_gets_a_record() {
        let report = run(&small(&catalog::SUITES));
        for e in catalog::CATALOG {
            assert!(report.find(e.id).next().is_some(), "{}", e.id);
        }
        let failed: Vec<_> = report
            .records
            .iter()
            .filter(|r| r.verdict.is_fail())
            .map(|r| r.id.as_str())
            .collect();
        assert_eq!(failed, ["f1m1_square"]);
        assert!(report.records.iter().all(Record::oracle_agrees));
    }

    #[test]
    fn mutation_in_each_suite_fails() {
        for spec in [
            "rmatrix:P:0:1",
            "rtt:tM10:2:1",
            "unitarity:t00:1:1/2",
            "gauss:kMinus1:1:1",
            "section3:eM10:2:1",
            "drinfeld:H:2:1",
            "roundtrip:f0M1:1:1",
        ] {
            let m = parse_mutation(spec).unwrap();
            let cfg = RunConfig {
                mutate: Some(m.clone()),
                ..small(&[m.suite.as_str()])
            };
            let report = run(&cfg);
            let fail = report
                .records
                .iter()
                .find(|r| r.verdict.is_fail() && r.id != "f1m1_square")
                .unwrap_or_else(|| panic!("{spec} stayed green"));
            assert!(fail.verdict.failure().unwrap().row.is_some(), "{spec}");
        }
    }
}
