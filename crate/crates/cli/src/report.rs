//! Serializable report documents; every number is an exact rational string.

use hyperenvy::hyperfree::{GoalMatrix, TargetPoint};
use hyperenvy::partition::DeltaValue;
use hyperenvy::relations::RelationMatrix;
use hyperenvy::verifier::FairnessReport;
use serde::{Deserialize, Serialize};

use crate::problem::{matrix_strings, strings, PartitionFile, ProblemFile};

pub type Matrix = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnclosureReport {
    pub lo: String,
    pub hi: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramReport {
    pub players: usize,
    pub gram: Matrix,
    pub kernel: Vec<Vec<String>>,
    pub pseudo_inverse: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_plus_k: Option<Matrix>,
    /// Rational, or `"unbounded"` when `G+ K = 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_bound: Option<String>,
    /// Present only when the Gram matrix is nonsingular and `K != 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corollary_bound: Option<EnclosureReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperReport {
    pub holds: bool,
    /// Rational, `"unconstrained"`, or absent when no single delta fits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    pub k: Matrix,
    pub p: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub holds: bool,
    pub r: Matrix,
    pub p: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FairnessJson {
    pub proportional: bool,
    pub exact_division: bool,
    pub equitable: bool,
    pub envy_free: bool,
    pub super_envy_free: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyper_envy_free: Option<HyperReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation_satisfied: Option<RelationReport>,
    pub rawlsian_distance: String,
}

pub fn relation_strings(r: &RelationMatrix) -> Matrix {
    r.to_rows()
        .iter()
        .map(|row| row.iter().map(|x| x.symbol().to_string()).collect())
        .collect()
}

impl FairnessJson {
    pub fn new(
        report: &FairnessReport,
        goal: Option<(&GoalMatrix, &TargetPoint)>,
        relation: Option<(&RelationMatrix, &TargetPoint)>,
    ) -> Self {
        FairnessJson {
            proportional: report.proportional,
            exact_division: report.exact_division,
            equitable: report.equitable,
            envy_free: report.envy_free,
            super_envy_free: report.super_envy_free,
            hyper_envy_free: report.hyper_envy_free.as_ref().zip(goal).map(|(h, (k, p))| HyperReport {
                holds: h.holds,
                delta: h.delta.as_ref().map(DeltaValue::to_string),
                k: matrix_strings(k.matrix()),
                p: strings(p.as_slice()),
            }),
            relation_satisfied: report.relation_satisfied.zip(relation).map(|(holds, (r, p))| RelationReport {
                holds,
                r: relation_strings(r),
                p: strings(p.as_slice()),
            }),
            rawlsian_distance: report.rawlsian_distance.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    /// `"feasible"` or `"infeasible"`.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Matrix>,
    /// Rational strictness margin, or `"unconstrained"` without strict entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionReport {
    /// `"lp"` or `"stochastic"`.
    pub route: String,
    pub k: Matrix,
    pub p: Vec<String>,
    pub delta: String,
    /// One row per atom of the common refinement, one weight per player.
    pub weights: Vec<Vec<String>>,
    pub partition: PartitionFile,
    pub sharing_matrix: Matrix,
    pub fairness: FairnessJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub problem: ProblemFile,
    /// `"feasible"` or `"infeasible"`.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub analysis: GramReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasibility: Option<FeasibilityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub partition: PartitionFile,
    pub sharing_matrix: Matrix,
    pub fairness: FairnessJson,
    /// Requested predicates that failed.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failed: Vec<String>,
}
