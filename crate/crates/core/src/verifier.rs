//! Independent audit of a partition: its exact sharing matrix and every
//! fairness predicate evaluated on it.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hyperfree::{GoalMatrix, TargetPoint};
use crate::linalg::{RatMatrix, Rational};
use crate::measures::MeasureProfile;
use crate::partition::{DeltaValue, Partition};
use crate::relations::RelationMatrix;

/// `M = (mu_i(X_j))`: nonnegative with unit row sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharingMatrix(RatMatrix);

impl SharingMatrix {
    pub fn new(m: RatMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if !m.is_row_stochastic() {
            return Err(Error::NotSharingMatrix("rows must be nonnegative and sum to one".into()));
        }
        Ok(SharingMatrix(m))
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }
}

pub fn sharing_matrix(profile: &MeasureProfile, part: &Partition) -> Result<SharingMatrix> {
    let n = profile.players();
    if part.players() != n {
        return Err(Error::DimensionMismatch(format!(
            "partition has {} players, profile has {n}",
            part.players()
        )));
    }
    part.validate()?;
    let mut m = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Rational::zero();
            for iv in part.pieces(j) {
                acc += profile.measure_of(i, iv)?;
            }
            m[(i, j)] = acc;
        }
    }
    SharingMatrix::new(m)
}

#[derive(Debug, Clone, Default)]
pub struct FairnessOptions {
    /// Goal `K` and target `p` for the hyper envy-free predicate.
    pub goal: Option<(GoalMatrix, TargetPoint)>,
    /// Relation grid and target `p` for the `m_ij r_ij p_j` predicate.
    pub relation: Option<(RelationMatrix, TargetPoint)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperEnvyFreeCheck {
    pub holds: bool,
    /// The single delta with `M = P + delta K`, when one exists.
    pub delta: Option<DeltaValue>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FairnessReport {
    pub proportional: bool,
    pub exact_division: bool,
    pub equitable: bool,
    pub envy_free: bool,
    pub super_envy_free: bool,
    pub hyper_envy_free: Option<HyperEnvyFreeCheck>,
    pub relation_satisfied: Option<bool>,
    pub rawlsian_distance: Rational,
}

/// `max_i sum_j |m_ij - [i == j]|`, the infinity-norm distance to the identity.
pub fn rawlsian_distance(m: &SharingMatrix) -> Rational {
    let a = m.matrix();
    (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| {
                    if i == j {
                        (&a[(i, j)] - Rational::one()).abs()
                    } else {
                        a[(i, j)].abs()
                    }
                })
                .sum::<Rational>()
        })
        .max()
        .unwrap_or_else(Rational::zero)
}

fn hyper_check(m: &RatMatrix, k: &GoalMatrix, p: &TargetPoint) -> HyperEnvyFreeCheck {
    let n = m.rows();
    if k.size() != n || p.len() != n {
        return HyperEnvyFreeCheck { holds: false, delta: None };
    }
    let target = p.matrix();
    let km = k.matrix();
    let Some((i0, j0)) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !km[(i, j)].is_zero())
    else {
        return HyperEnvyFreeCheck {
            holds: *m == target,
            delta: (*m == target).then_some(DeltaValue::Unconstrained),
        };
    };
    let delta = (&m[(i0, j0)] - &target[(i0, j0)]) / &km[(i0, j0)];
    let consistent = (0..n).all(|i| (0..n).all(|j| m[(i, j)] == &target[(i, j)] + &km[(i, j)] * &delta));
    if !consistent {
        return HyperEnvyFreeCheck { holds: false, delta: None };
    }
    HyperEnvyFreeCheck {
        holds: delta.is_positive(),
        delta: Some(DeltaValue::Value(delta)),
    }
}

pub fn check_fairness(m: &SharingMatrix, opts: &FairnessOptions) -> FairnessReport {
    let a = m.matrix();
    let n = a.rows();
    let share = Rational::new(1.into(), n.into());
    let pairs = || (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));

    let proportional = (0..n).all(|i| a[(i, i)] >= share);
    let exact_division = a.entries().all(|x| *x == share);
    let equitable = (0..n).all(|i| a[(i, i)] == a[(0, 0)]);
    let envy_free = pairs().all(|(i, j)| a[(i, i)] >= a[(i, j)]);
    let super_envy_free = pairs().all(|(i, j)| {
        if i == j {
            a[(i, i)] > share
        } else {
            a[(i, j)] < share
        }
    });

    let hyper_envy_free = opts.goal.as_ref().map(|(k, p)| hyper_check(a, k, p));
    let relation_satisfied = opts.relation.as_ref().map(|(r, p)| {
        r.size() == n
            && p.len() == n
            && pairs().all(|(i, j)| r.get(i, j).holds(&(&a[(i, j)] - &p.as_slice()[j])))
    });

    FairnessReport {
        proportional,
        exact_division,
        equitable,
        envy_free,
        super_envy_free,
        hyper_envy_free,
        relation_satisfied,
        rawlsian_distance: rawlsian_distance(m),
    }
}
