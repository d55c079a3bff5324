use std::fmt::Write as _;

use hyperenvy::hyperfree::{corollary_bound, delta_bound, DeltaBound, GoalMatrix, TargetPoint};
use hyperenvy::linalg::{pseudo_inverse, Rational};
use hyperenvy::measures::MeasureProfile;
use hyperenvy::partition::{build_from_weights, solve_alpha, theorem1_weights, DeltaMode, DeltaValue, WeightSystem};
use hyperenvy::relations::{solve_relations, Margin, RelationSolution};
use hyperenvy::verifier::{check_fairness, sharing_matrix, FairnessOptions, FairnessReport, SharingMatrix};
use hyperenvy::Error;

use crate::error::{CliError, CliResult};
use crate::problem::{matrix_strings, strings, DeltaSpec, PartitionFile, Problem};
use crate::report::{
    ConstructionReport, EnclosureReport, FairnessJson, FeasibilityReport, GramReport, SolveReport, VerifyReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Route {
    /// Solve the weight LP directly.
    Lp,
    /// Compose the Gram division with the stochastic factor `G+ (P + delta K)`.
    Stochastic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Predicate {
    Proportional,
    Exact,
    Equitable,
    EnvyFree,
    SuperEnvyFree,
    HyperEnvyFree,
    Relation,
}

impl Predicate {
    fn name(self) -> &'static str {
        match self {
            Predicate::Proportional => "proportional",
            Predicate::Exact => "exact",
            Predicate::Equitable => "equitable",
            Predicate::EnvyFree => "envy-free",
            Predicate::SuperEnvyFree => "super-envy-free",
            Predicate::HyperEnvyFree => "hyper-envy-free",
            Predicate::Relation => "relation",
        }
    }
}

/// A report, its one-screen summary, and whether the request was met.
#[derive(Debug, Clone)]
pub struct Outcome<R> {
    pub report: R,
    pub summary: String,
    pub satisfied: bool,
}

fn verdict(ok: bool) -> String {
    if ok { "feasible" } else { "infeasible" }.to_string()
}

fn format_matrix(out: &mut String, title: &str, rows: &[Vec<String>]) {
    let _ = writeln!(out, "{title}:");
    for row in rows {
        let _ = writeln!(out, "  [{}]", row.join(", "));
    }
}

pub fn gram_report(profile: &MeasureProfile, goal: Option<&GoalMatrix>, p: &TargetPoint, tol: &Rational) -> CliResult<GramReport> {
    let g = profile.gram_matrix();
    let g_plus = pseudo_inverse(&g);
    let mut report = GramReport {
        players: profile.players(),
        gram: matrix_strings(&g),
        kernel: profile.measure_relations().iter().map(|v| strings(v)).collect(),
        pseudo_inverse: matrix_strings(&g_plus),
        g_plus_k: None,
        delta_bound: None,
        corollary_bound: None,
    };
    if let Some(k) = goal {
        report.g_plus_k = Some(matrix_strings(&(&g_plus * k.matrix())));
        let bound = delta_bound(&g_plus, k, p).map_err(|e| CliError::core("delta bound", e))?;
        report.delta_bound = Some(bound.to_string());
        report.corollary_bound = match corollary_bound(&g, k, p, tol) {
            Ok(enc) => Some(EnclosureReport {
                lo: enc.lo.to_string(),
                hi: enc.hi.to_string(),
            }),
            Err(Error::Singular | Error::ZeroGoal) => None,
            Err(e) => return Err(CliError::core("corollary bound", e)),
        };
    }
    Ok(report)
}

fn gram_summary(out: &mut String, r: &GramReport) {
    format_matrix(out, "Gram matrix", &r.gram);
    if r.kernel.is_empty() {
        let _ = writeln!(out, "measures are linearly independent");
    } else {
        format_matrix(out, "measure relations", &r.kernel);
    }
    format_matrix(out, "pseudo-inverse", &r.pseudo_inverse);
    if let Some(gk) = &r.g_plus_k {
        format_matrix(out, "G+ K", gk);
    }
    if let Some(b) = &r.delta_bound {
        let _ = writeln!(out, "delta bound: {b}");
    }
    if let Some(c) = &r.corollary_bound {
        let _ = writeln!(out, "corollary bound in [{}, {}]", c.lo, c.hi);
    }
}

pub fn cmd_gram(problem: &Problem, tol: &Rational) -> CliResult<Outcome<GramReport>> {
    let report = gram_report(&problem.profile, problem.goal.as_ref(), &problem.target, tol)?;
    let mut summary = String::new();
    gram_summary(&mut summary, &report);
    Ok(Outcome {
        report,
        summary,
        satisfied: true,
    })
}

fn fairness(problem: &Problem, k: Option<&GoalMatrix>, m: &SharingMatrix) -> (FairnessReport, FairnessJson) {
    let p = &problem.target;
    let opts = FairnessOptions {
        goal: k.map(|k| (k.clone(), p.clone())),
        relation: problem.relation.as_ref().map(|r| (r.clone(), p.clone())),
    };
    let report = check_fairness(m, &opts);
    let json = FairnessJson::new(&report, k.map(|k| (k, p)), problem.relation.as_ref().map(|r| (r, p)));
    (report, json)
}

fn fairness_summary(out: &mut String, f: &FairnessJson) {
    let flag = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(
        out,
        "proportional {}, exact {}, equitable {}, envy-free {}, super envy-free {}",
        flag(f.proportional),
        flag(f.exact_division),
        flag(f.equitable),
        flag(f.envy_free),
        flag(f.super_envy_free)
    );
    if let Some(h) = &f.hyper_envy_free {
        let delta = h.delta.as_deref().unwrap_or("none");
        let _ = writeln!(out, "hyper envy-free {} (delta {delta})", flag(h.holds));
    }
    if let Some(r) = &f.relation_satisfied {
        let _ = writeln!(out, "relation matrix satisfied {}", flag(r.holds));
    }
    let _ = writeln!(out, "distance to identity {}", f.rawlsian_distance);
}

/// Weights for the requested route, or `None` with a reason when the
/// requested delta cannot be realized.
fn construct(
    problem: &Problem,
    k: &GoalMatrix,
    route: Route,
) -> CliResult<Result<(WeightSystem, DeltaValue), String>> {
    let p = &problem.target;
    let spec = problem.delta.clone().unwrap_or(DeltaSpec::Max);
    match route {
        Route::Lp => {
            let mode = match &spec {
                DeltaSpec::Max => DeltaMode::MaximizeDelta,
                DeltaSpec::Fixed(d) => DeltaMode::FixedDelta(d.clone()),
            };
            match solve_alpha(&problem.profile, k, p, &mode) {
                Ok(found) => Ok(Ok(found)),
                Err(Error::Infeasible) => Ok(Err(match spec {
                    DeltaSpec::Fixed(d) => format!("no weights realize P + delta K at delta = {d}"),
                    DeltaSpec::Max => "no weights realize P + delta K for any delta >= 0".into(),
                })),
                Err(e) => Err(CliError::core("weight system", e)),
            }
        }
        Route::Stochastic => {
            let delta = match spec {
                DeltaSpec::Fixed(d) => d,
                DeltaSpec::Max => {
                    let g_plus = pseudo_inverse(&problem.profile.gram_matrix());
                    match delta_bound(&g_plus, k, p).map_err(|e| CliError::core("delta bound", e))? {
                        DeltaBound::Finite(b) => b,
                        DeltaBound::Unbounded => {
                            return Err(CliError::Usage(
                                "the delta bound is unbounded for this goal; give a fixed delta".into(),
                            ))
                        }
                    }
                }
            };
            match theorem1_weights(&problem.profile, k, p, &delta) {
                Ok((w, _)) => Ok(Ok((w, DeltaValue::Value(delta)))),
                Err(e @ Error::DeltaTooLarge { .. }) => Ok(Err(e.to_string())),
                Err(e) => Err(CliError::core("stochastic factor", e)),
            }
        }
    }
}

pub fn cmd_solve(problem: &Problem, tol: &Rational, route: Route) -> CliResult<Outcome<SolveReport>> {
    if problem.goal.is_none() && problem.relation.is_none() {
        return Err(CliError::Usage("solve needs a goal matrix \"k\" or a relation matrix \"r\"".into()));
    }
    let p = &problem.target;
    let mut summary = String::new();
    let mut report = SolveReport {
        problem: problem.to_file(),
        verdict: verdict(true),
        reason: None,
        analysis: gram_report(&problem.profile, None, p, tol)?,
        feasibility: None,
        construction: None,
    };

    let mut witness = None;
    if let Some(r) = &problem.relation {
        let solution = solve_relations(r, &problem.profile.measure_relations())
            .map_err(|e| CliError::core("relation matrix", e))?;
        match solution {
            RelationSolution::Feasible { k, margin } => {
                report.feasibility = Some(FeasibilityReport {
                    verdict: verdict(true),
                    k: Some(matrix_strings(k.matrix())),
                    margin: Some(match margin {
                        Margin::Strict(t) => t.to_string(),
                        Margin::Unconstrained => "unconstrained".into(),
                    }),
                });
                witness = Some(k);
            }
            RelationSolution::Infeasible => {
                report.feasibility = Some(FeasibilityReport {
                    verdict: verdict(false),
                    k: None,
                    margin: None,
                });
                report.verdict = verdict(false);
                report.reason = Some("no proper goal matrix has the requested signs".into());
            }
        }
    }

    if report.verdict == verdict(true) {
        let k = problem.goal.clone().or(witness).expect("goal or feasible relation witness");
        report.analysis = gram_report(&problem.profile, Some(&k), p, tol)?;
        match construct(problem, &k, route)? {
            Ok((w, delta)) => {
                let part = build_from_weights(&problem.profile, &w).map_err(|e| CliError::core("partition", e))?;
                let m = sharing_matrix(&problem.profile, &part).map_err(|e| CliError::core("sharing matrix", e))?;
                let expected = match &delta {
                    DeltaValue::Value(d) => k.target_matrix(p, d),
                    DeltaValue::Unconstrained => Ok(p.matrix()),
                }
                .map_err(|e| CliError::core("target matrix", e))?;
                if *m.matrix() != expected {
                    return Err(CliError::core(
                        "sharing matrix",
                        Error::Internal("partition does not realize P + delta K".into()),
                    ));
                }
                let (_, fair) = fairness(problem, Some(&k), &m);
                report.construction = Some(ConstructionReport {
                    route: match route {
                        Route::Lp => "lp",
                        Route::Stochastic => "stochastic",
                    }
                    .into(),
                    k: matrix_strings(k.matrix()),
                    p: strings(p.as_slice()),
                    delta: delta.to_string(),
                    weights: w.rows().iter().map(|r| strings(r)).collect(),
                    partition: PartitionFile::from_partition(&part),
                    sharing_matrix: matrix_strings(m.matrix()),
                    fairness: fair,
                });
            }
            Err(reason) => {
                report.verdict = verdict(false);
                report.reason = Some(reason);
            }
        }
    }

    gram_summary(&mut summary, &report.analysis);
    if let Some(f) = &report.feasibility {
        let _ = writeln!(summary, "relation matrix: {}", f.verdict);
        if let Some(k) = &f.k {
            format_matrix(&mut summary, "goal matrix", k);
        }
    }
    let _ = writeln!(summary, "verdict: {}", report.verdict);
    if let Some(reason) = &report.reason {
        let _ = writeln!(summary, "reason: {reason}");
    }
    if let Some(c) = &report.construction {
        let _ = writeln!(summary, "delta: {}", c.delta);
        for (j, pieces) in c.partition.pieces.iter().enumerate() {
            let list: Vec<String> = pieces.iter().map(|[lo, hi]| format!("[{lo}, {hi}]")).collect();
            let _ = writeln!(summary, "X{}: {}", j + 1, list.join(" u "));
        }
        format_matrix(&mut summary, "sharing matrix", &c.sharing_matrix);
        fairness_summary(&mut summary, &c.fairness);
    }
    let satisfied = report.verdict == verdict(true);
    Ok(Outcome {
        report,
        summary,
        satisfied,
    })
}

pub fn cmd_verify(problem: &Problem, partition: &PartitionFile, require: &[Predicate]) -> CliResult<Outcome<VerifyReport>> {
    let part = partition.to_partition()?;
    let m = sharing_matrix(&problem.profile, &part).map_err(|e| CliError::core("partition", e))?;
    let (report, json) = fairness(problem, problem.goal.as_ref(), &m);

    let mut failed = Vec::new();
    for &pred in require {
        let holds = match pred {
            Predicate::Proportional => report.proportional,
            Predicate::Exact => report.exact_division,
            Predicate::Equitable => report.equitable,
            Predicate::EnvyFree => report.envy_free,
            Predicate::SuperEnvyFree => report.super_envy_free,
            Predicate::HyperEnvyFree => {
                report
                    .hyper_envy_free
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("hyper-envy-free needs a goal matrix \"k\" in the problem".into()))?
                    .holds
            }
            Predicate::Relation => report
                .relation_satisfied
                .ok_or_else(|| CliError::Usage("relation needs a relation matrix \"r\" in the problem".into()))?,
        };
        if !holds {
            failed.push(pred.name().to_string());
        }
    }

    let verify = VerifyReport {
        partition: PartitionFile::from_partition(&part),
        sharing_matrix: matrix_strings(m.matrix()),
        fairness: json,
        failed,
    };
    let mut summary = String::new();
    format_matrix(&mut summary, "sharing matrix", &verify.sharing_matrix);
    fairness_summary(&mut summary, &verify.fairness);
    if !verify.failed.is_empty() {
        let _ = writeln!(summary, "failed: {}", verify.failed.join(", "));
    }
    let satisfied = verify.failed.is_empty();
    Ok(Outcome {
        report: verify,
        summary,
        satisfied,
    })
}
