//! Proper goal matrices, the explicit delta bound and the stochastic factor
//! `S = G+ (P + delta K)` that turns the Gram division into a hyper
//! envy-free one.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, max_abs, rank, smallest_eigenvalue, Enclosure, RatMatrix, Rational};

/// Target point `p` with positive entries summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetPoint(Vec<Rational>);

impl TargetPoint {
    pub fn new(p: Vec<Rational>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidTarget("empty target point".into()));
        }
        if let Some(bad) = p.iter().find(|x| !x.is_positive()) {
            return Err(Error::InvalidTarget(format!("entry {bad} is not positive")));
        }
        let sum: Rational = p.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidTarget(format!("entries sum to {sum}, expected 1")));
        }
        Ok(TargetPoint(p))
    }

    pub fn uniform(n: usize) -> Self {
        let share = Rational::new(1.into(), n.into());
        TargetPoint(vec![share; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn min(&self) -> Rational {
        self.0.iter().min().cloned().expect("target point is nonempty")
    }

    /// The matrix `P` whose rows all equal `p`.
    pub fn matrix(&self) -> RatMatrix {
        let n = self.0.len();
        let rows = (0..n).map(|_| self.0.clone()).collect();
        RatMatrix::from_rows(rows).expect("square by construction")
    }
}

/// Square matrix `K` with zero row sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalMatrix(RatMatrix);

impl GoalMatrix {
    pub fn new(k: RatMatrix) -> Result<Self> {
        if !k.is_square() {
            return Err(Error::NotSquare {
                rows: k.rows(),
                cols: k.cols(),
            });
        }
        if let Some((row, sum)) = k.row_sums().into_iter().enumerate().find(|(_, s)| !s.is_zero()) {
            return Err(Error::InvalidGoal(format!("row {row} sums to {sum}")));
        }
        Ok(GoalMatrix(k))
    }

    pub fn zero(n: usize) -> Self {
        GoalMatrix(RatMatrix::zeros(n, n))
    }

    /// `k_ii = 1`, `k_ij = -1/(n-1)`: the super envy-free goal.
    pub fn super_envy_free(n: usize) -> Self {
        assert!(n >= 2, "super envy-free goal needs at least two players");
        let off = -Rational::new(1.into(), (n - 1).into());
        let mut k = RatMatrix::filled(n, n, off);
        for i in 0..n {
            k[(i, i)] = Rational::one();
        }
        GoalMatrix(k)
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.0
    }

    pub fn scaled(&self, c: &Rational) -> GoalMatrix {
        GoalMatrix(self.0.scale(c))
    }

    /// `P + delta K`.
    pub fn target_matrix(&self, p: &TargetPoint, delta: &Rational) -> Result<RatMatrix> {
        if p.len() != self.size() {
            return Err(Error::DimensionMismatch(format!(
                "target point has {} entries for a {}x{} goal matrix",
                p.len(),
                self.size(),
                self.size()
            )));
        }
        p.matrix().try_add(&self.0.scale(delta))
    }
}

/// Outcome of a properness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Properness {
    Proper,
    /// Row `row` of `K` sums to `sum` instead of zero.
    RowSum { row: usize, sum: Rational },
    /// `sum_i lambda_i k_ij = value != 0` for relation number `relation`.
    Relation {
        relation: usize,
        column: usize,
        value: Rational,
    },
}

impl Properness {
    pub fn is_proper(&self) -> bool {
        matches!(self, Properness::Proper)
    }
}

impl fmt::Display for Properness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Properness::Proper => write!(f, "proper"),
            Properness::RowSum { row, sum } => write!(f, "row {row} sums to {sum}"),
            Properness::Relation { relation, column, value } => {
                write!(f, "relation {relation} pairs with column {column} to {value}")
            }
        }
    }
}

/// Checks that `K` has zero row sums and that every measure relation
/// annihilates every column of `K`.
pub fn is_proper(k: &RatMatrix, relations: &[Vec<Rational>]) -> Result<Properness> {
    if !k.is_square() {
        return Err(Error::NotSquare {
            rows: k.rows(),
            cols: k.cols(),
        });
    }
    let n = k.rows();
    if let Some(bad) = relations.iter().position(|l| l.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "relation {bad} has {} coefficients for {n} players",
            relations[bad].len()
        )));
    }
    for (row, sum) in k.row_sums().into_iter().enumerate() {
        if !sum.is_zero() {
            return Ok(Properness::RowSum { row, sum });
        }
    }
    for (relation, lambda) in relations.iter().enumerate() {
        for column in 0..n {
            let value: Rational = (0..n).map(|i| &lambda[i] * &k[(i, column)]).sum();
            if !value.is_zero() {
                return Ok(Properness::Relation { relation, column, value });
            }
        }
    }
    Ok(Properness::Proper)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaBound {
    Finite(Rational),
    /// `G+ K = 0`: every delta keeps the factor stochastic.
    Unbounded,
}

impl DeltaBound {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            DeltaBound::Finite(b) => Some(b),
            DeltaBound::Unbounded => None,
        }
    }

    /// True when `delta` lies within the bound.
    pub fn admits(&self, delta: &Rational) -> bool {
        self.finite().is_none_or(|b| delta <= b)
    }
}

impl fmt::Display for DeltaBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaBound::Finite(b) => write!(f, "{b}"),
            DeltaBound::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// `min_i p_i / max_ij |(G+ K)_ij|`.
pub fn delta_bound(g_plus: &RatMatrix, k: &GoalMatrix, p: &TargetPoint) -> Result<DeltaBound> {
    if p.len() != k.size() {
        return Err(Error::DimensionMismatch("target point and goal matrix sizes differ".into()));
    }
    let gk = g_plus.try_mul(k.matrix())?;
    let largest = max_abs(gk.entries().cloned());
    if largest.is_zero() {
        return Ok(DeltaBound::Unbounded);
    }
    Ok(DeltaBound::Finite(p.min() / largest))
}

/// Enclosure of `min_i p_i * sigma_min(G) / (n max_ij |k_ij|)`, the weaker
/// bound expressed through the distance from `G` to the singular matrices.
///
/// The distance is taken in the spectral norm, where it equals the smallest
/// singular value; for the symmetric positive definite Gram matrix that is its
/// smallest eigenvalue.
pub fn corollary_bound(g: &RatMatrix, k: &GoalMatrix, p: &TargetPoint, tol: &Rational) -> Result<Enclosure> {
    let n = k.size();
    if g.rows() != n || p.len() != n {
        return Err(Error::DimensionMismatch("Gram matrix, goal and target sizes differ".into()));
    }
    if rank(g) < n {
        return Err(Error::Singular);
    }
    let largest = max_abs(k.matrix().entries().cloned());
    if largest.is_zero() {
        return Err(Error::ZeroGoal);
    }
    let scale = p.min() / (Rational::from_integer(n.into()) * largest);
    // Shrink the tolerance so the scaled enclosure still has width <= tol.
    let inner_tol = if scale > Rational::one() { tol / &scale } else { tol.clone() };
    let sigma = smallest_eigenvalue(g, &inner_tol)?;
    Ok(Enclosure {
        lo: &sigma.lo * &scale,
        hi: &sigma.hi * &scale,
    })
}

/// Row-stochastic `S` with `G S = P + delta K`, which exhibits `P + delta K`
/// as a sharing matrix obtained from the Gram division.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperFreeCertificate {
    pub delta: Rational,
    pub stochastic_factor: RatMatrix,
    pub target: RatMatrix,
}

pub fn stochastic_factor(
    g: &RatMatrix,
    g_plus: &RatMatrix,
    k: &GoalMatrix,
    p: &TargetPoint,
    delta: &Rational,
) -> Result<HyperFreeCertificate> {
    if delta.is_negative() {
        return Err(Error::NegativeDelta(delta.clone()));
    }
    let n = k.size();
    if g.rows() != n || g_plus.rows() != n || p.len() != n {
        return Err(Error::DimensionMismatch("Gram matrix, goal and target sizes differ".into()));
    }
    let verdict = is_proper(k.matrix(), &kernel_basis(g))?;
    if !verdict.is_proper() {
        return Err(Error::ImproperK(verdict.to_string()));
    }
    let target = k.target_matrix(p, delta)?;
    let s = g_plus.try_mul(&target)?;
    for i in 0..n {
        for j in 0..n {
            if s[(i, j)].is_negative() {
                return Err(Error::DeltaTooLarge {
                    delta: Box::new(delta.clone()),
                    row: i,
                    col: j,
                    value: Box::new(s[(i, j)].clone()),
                });
            }
        }
    }
    if !s.row_sums().iter().all(One::is_one) {
        return Err(Error::Internal("stochastic factor rows do not sum to one".into()));
    }
    if g.try_mul(&s)? != target {
        return Err(Error::Internal("G S differs from P + delta K".into()));
    }
    Ok(HyperFreeCertificate {
        delta: delta.clone(),
        stochastic_factor: s,
        target,
    })
}

/// Recovers `K = (m - P_uniform) / delta` from a sharing matrix and reports
/// whether it is proper, which must hold for every realizable `m`.
pub fn necessary_condition_check(m: &RatMatrix, delta: &Rational, relations: &[Vec<Rational>]) -> Result<bool> {
    if !delta.is_positive() {
        return Err(Error::NonPositiveDelta(delta.clone()));
    }
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_row_stochastic() {
        return Err(Error::NotSharingMatrix(
            "rows must be nonnegative and sum to one".into(),
        ));
    }
    let p = TargetPoint::uniform(m.rows()).matrix();
    let k = m.try_sub(&p)?.scale(&delta.recip());
    Ok(is_proper(&k, relations)?.is_proper())
}
