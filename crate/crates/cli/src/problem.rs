//! Problem and partition documents. Every number is an exact rational
//! written as a string, `"num/den"` or an integer.

use hyperenvy::hyperfree::{GoalMatrix, TargetPoint};
use hyperenvy::linalg::{parse_rational, RatMatrix, Rational};
use hyperenvy::measures::{Interval, MeasureProfile, StepDensity};
use hyperenvy::partition::Partition;
use hyperenvy::relations::{Relation, RelationMatrix};
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySpec {
    pub breakpoints: Vec<String>,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub players: usize,
    pub densities: Vec<DensitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaSpec {
    Max,
    Fixed(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub profile: MeasureProfile,
    pub target: TargetPoint,
    /// Whether `p` was given explicitly rather than defaulted to uniform.
    pub explicit_target: bool,
    pub goal: Option<GoalMatrix>,
    pub relation: Option<RelationMatrix>,
    pub delta: Option<DeltaSpec>,
}

pub fn rational(path: &str, text: &str) -> CliResult<Rational> {
    parse_rational(text).map_err(|_| CliError::field(path, format!("invalid rational {text:?}")))
}

fn rationals(path: &str, items: &[String]) -> CliResult<Vec<Rational>> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| rational(&format!("{path}[{i}]"), s))
        .collect()
}

fn square_rows<T: Clone>(path: &str, rows: &[Vec<T>], n: usize) -> CliResult<()> {
    if rows.len() != n {
        return Err(CliError::field(path, format!("expected {n} rows, found {}", rows.len())));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(CliError::field(
                format!("{path}[{i}]"),
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
    }
    Ok(())
}

pub fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| strings(r)).collect()
}

pub fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

impl ProblemFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Problem {
    pub fn parse(text: &str) -> CliResult<Self> {
        Self::from_file(&ProblemFile::parse(text)?)
    }

    pub fn from_file(file: &ProblemFile) -> CliResult<Self> {
        let n = file.players;
        if n == 0 {
            return Err(CliError::field("players", "need at least one player"));
        }
        if file.densities.len() != n {
            return Err(CliError::field(
                "densities",
                format!("{n} players need {n} densities, found {}", file.densities.len()),
            ));
        }
        let densities = file
            .densities
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let path = format!("densities[{i}]");
                let bp = rationals(&format!("{path}.breakpoints"), &d.breakpoints)?;
                let values = rationals(&format!("{path}.values"), &d.values)?;
                StepDensity::new(bp, values).map_err(|e| CliError::field(path, e))
            })
            .collect::<CliResult<Vec<_>>>()?;
        let profile = MeasureProfile::new(densities).map_err(|e| CliError::field("densities", e))?;

        let target = match &file.p {
            Some(p) => TargetPoint::new(rationals("p", p)?).map_err(|e| CliError::field("p", e))?,
            None => TargetPoint::uniform(n),
        };
        if target.len() != n {
            return Err(CliError::field("p", format!("expected {n} entries, found {}", target.len())));
        }

        let goal = match &file.k {
            Some(rows) => {
                square_rows("k", rows, n)?;
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| rationals(&format!("k[{i}]"), r))
                    .collect::<CliResult<Vec<_>>>()?;
                let m = RatMatrix::from_rows(rows).map_err(|e| CliError::field("k", e))?;
                Some(GoalMatrix::new(m).map_err(|e| CliError::field("k", e))?)
            }
            None => None,
        };

        let relation = match &file.r {
            Some(rows) => {
                square_rows("r", rows, n)?;
                let grid = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        r.iter()
                            .enumerate()
                            .map(|(j, s)| {
                                s.parse::<Relation>()
                                    .map_err(|_| CliError::field(format!("r[{i}][{j}]"), format!("expected \"<\", \"=\" or \">\", found {s:?}")))
                            })
                            .collect::<CliResult<Vec<_>>>()
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                Some(RelationMatrix::new(grid).map_err(|e| CliError::field("r", e))?)
            }
            None => None,
        };

        let delta = match file.delta.as_deref() {
            None => None,
            Some("max") => Some(DeltaSpec::Max),
            Some(s) => {
                let d = rational("delta", s)?;
                if d.is_negative() {
                    return Err(CliError::field("delta", "must be nonnegative"));
                }
                Some(DeltaSpec::Fixed(d))
            }
        };

        Ok(Problem {
            profile,
            target,
            explicit_target: file.p.is_some(),
            goal,
            relation,
            delta,
        })
    }

    /// Canonical document: reduced rationals, no redundant signs or zeros.
    pub fn to_file(&self) -> ProblemFile {
        ProblemFile {
            players: self.profile.players(),
            densities: self
                .profile
                .densities()
                .iter()
                .map(|d| DensitySpec {
                    breakpoints: strings(d.breakpoints()),
                    values: strings(d.values()),
                })
                .collect(),
            p: self.explicit_target.then(|| strings(self.target.as_slice())),
            k: self.goal.as_ref().map(|k| matrix_strings(k.matrix())),
            r: self.relation.as_ref().map(|r| {
                r.to_rows()
                    .iter()
                    .map(|row| row.iter().map(|x| x.symbol().to_string()).collect())
                    .collect()
            }),
            delta: self.delta.as_ref().map(|d| match d {
                DeltaSpec::Max => "max".to_string(),
                DeltaSpec::Fixed(v) => v.to_string(),
            }),
        }
    }
}

/// Per-player lists of `[lo, hi]` intervals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionFile {
    pub pieces: Vec<Vec<[String; 2]>>,
}

impl PartitionFile {
    pub fn from_partition(part: &Partition) -> Self {
        PartitionFile {
            pieces: part
                .all_pieces()
                .iter()
                .map(|ps| ps.iter().map(|iv| [iv.lo.to_string(), iv.hi.to_string()]).collect())
                .collect(),
        }
    }

    /// Accepts a bare partition document or a solve report embedding one.
    pub fn parse(text: &str) -> CliResult<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let inner = if value.get("pieces").is_some() {
            value
        } else if let Some(p) = value.pointer("/construction/partition") {
            p.clone()
        } else {
            return Err(CliError::field("pieces", "missing; expected a partition or a solve report"));
        };
        Ok(serde_json::from_value(inner)?)
    }

    pub fn to_partition(&self) -> CliResult<Partition> {
        let pieces = self
            .pieces
            .iter()
            .enumerate()
            .map(|(j, ps)| {
                ps.iter()
                    .enumerate()
                    .map(|(t, [lo, hi])| {
                        let path = format!("pieces[{j}][{t}]");
                        let lo = rational(&format!("{path}[0]"), lo)?;
                        let hi = rational(&format!("{path}[1]"), hi)?;
                        Interval::new(lo, hi).map_err(|e| CliError::field(path, e))
                    })
                    .collect::<CliResult<Vec<_>>>()
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Partition::new(pieces))
    }
}
