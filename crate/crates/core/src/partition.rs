//! Explicit interval partitions of `[0, 1]`.
//!
//! Cutting an atom into consecutive pieces whose lengths are fractions
//! `alpha_1, ..., alpha_n` of the atom hands every player exactly the same
//! fractions of every measure, because all densities are constant on an
//! atom. Any per-atom weight system therefore turns into a partition with a
//! predictable sharing matrix.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hyperfree::{is_proper, stochastic_factor, GoalMatrix, HyperFreeCertificate, TargetPoint};
use crate::linalg::{pseudo_inverse, Comparison, LpBuilder, LpOutcome, Rational, Sense};
use crate::measures::{measure_relations, Interval, MeasureProfile};

/// `weights[atom][player]`: the fraction of each atom given to each player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    weights: Vec<Vec<Rational>>,
}

impl WeightSystem {
    pub fn new(weights: Vec<Vec<Rational>>) -> Result<Self> {
        for (atom, row) in weights.iter().enumerate() {
            if let Some(v) = row.iter().find(|v| v.is_negative()) {
                return Err(Error::InvalidWeights(format!("atom {atom} has negative weight {v}")));
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::InvalidWeights(format!("weights of atom {atom} sum to {sum}")));
            }
        }
        Ok(WeightSystem { weights })
    }

    /// Same weights `w` on every atom.
    pub fn constant(atoms: usize, w: &[Rational]) -> Result<Self> {
        Self::new(vec![w.to_vec(); atoms])
    }

    pub fn num_atoms(&self) -> usize {
        self.weights.len()
    }

    pub fn atom(&self, atom: usize) -> &[Rational] {
        &self.weights[atom]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.weights
    }
}

/// One list of intervals per player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pieces: Vec<Vec<Interval>>,
}

impl Partition {
    /// Wraps per-player interval lists without checking them; see
    /// [`Partition::validate`].
    pub fn new(pieces: Vec<Vec<Interval>>) -> Self {
        Partition { pieces }
    }

    pub fn players(&self) -> usize {
        self.pieces.len()
    }

    pub fn pieces(&self, player: usize) -> &[Interval] {
        &self.pieces[player]
    }

    pub fn all_pieces(&self) -> &[Vec<Interval>] {
        &self.pieces
    }

    pub fn total_length(&self) -> Rational {
        self.pieces.iter().flatten().map(Interval::length).sum()
    }

    /// Checks that the pieces lie in `[0, 1]`, have pairwise disjoint
    /// interiors and leave no gap. Shared endpoints are allowed.
    pub fn validate(&self) -> Result<()> {
        let mut all: Vec<&Interval> = self
            .pieces
            .iter()
            .flatten()
            .filter(|iv| iv.hi > iv.lo)
            .collect();
        if let Some(bad) = self.pieces.iter().flatten().find(|iv| !iv.within_unit() || iv.lo > iv.hi) {
            return Err(Error::IntervalOutOfRange {
                lo: Box::new(bad.lo.clone()),
                hi: Box::new(bad.hi.clone()),
            });
        }
        all.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
        let mut reach = Rational::zero();
        let mut last: Option<&Interval> = None;
        for iv in all {
            if iv.lo > reach {
                return Err(Error::CoverageGap {
                    lo: Box::new(reach),
                    hi: Box::new(iv.lo.clone()),
                });
            }
            if iv.lo < reach {
                let prev = last.expect("reach > 0 implies a previous interval");
                return Err(Error::Overlap {
                    a_lo: Box::new(prev.lo.clone()),
                    a_hi: Box::new(prev.hi.clone()),
                    b_lo: Box::new(iv.lo.clone()),
                    b_hi: Box::new(iv.hi.clone()),
                });
            }
            reach = iv.hi.clone();
            last = Some(iv);
        }
        if reach < Rational::one() {
            return Err(Error::CoverageGap {
                lo: Box::new(reach),
                hi: Box::new(Rational::one()),
            });
        }
        Ok(())
    }
}

/// Cuts each atom left to right into pieces of length `w[atom][j] * len(atom)`
/// in player order. Contiguous pieces of one player are merged and empty
/// pieces dropped.
pub fn build_from_weights(profile: &MeasureProfile, w: &WeightSystem) -> Result<Partition> {
    let n = profile.players();
    if w.num_atoms() != profile.num_atoms() {
        return Err(Error::InvalidWeights(format!(
            "{} weight rows for {} atoms",
            w.num_atoms(),
            profile.num_atoms()
        )));
    }
    if let Some(bad) = w.rows().iter().position(|r| r.len() != n) {
        return Err(Error::InvalidWeights(format!(
            "atom {bad} has {} weights for {n} players",
            w.atom(bad).len()
        )));
    }
    let mut pieces: Vec<Vec<Interval>> = vec![Vec::new(); n];
    for (atom, iv) in profile.atoms().iter().enumerate() {
        let len = iv.length();
        let mut cursor = iv.lo.clone();
        for (j, alpha) in w.atom(atom).iter().enumerate() {
            if alpha.is_zero() {
                continue;
            }
            // the last nonzero piece ends exactly at the atom boundary
            let end = if w.atom(atom)[j + 1..].iter().all(Zero::is_zero) {
                iv.hi.clone()
            } else {
                &cursor + alpha * &len
            };
            match pieces[j].last_mut() {
                Some(prev) if prev.hi == cursor => prev.hi = end.clone(),
                _ => pieces[j].push(Interval {
                    lo: cursor.clone(),
                    hi: end.clone(),
                }),
            }
            cursor = end;
        }
    }
    Ok(Partition { pieces })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaMode {
    MaximizeDelta,
    FixedDelta(Rational),
}

/// Delta reached by [`solve_alpha`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaValue {
    Value(Rational),
    /// `K = 0`: the target `P` does not depend on delta.
    Unconstrained,
}

impl DeltaValue {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            DeltaValue::Value(v) => Some(v),
            DeltaValue::Unconstrained => None,
        }
    }
}

impl std::fmt::Display for DeltaValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DeltaValue::Value(v) => write!(f, "{v}"),
            DeltaValue::Unconstrained => f.write_str("unconstrained"),
        }
    }
}

/// Finds per-atom weights realizing `P + delta K` as a sharing matrix:
/// `sum_I alpha_{j,I} mu_i(I) = p_j + k_ij delta` for all `i, j`.
///
/// Atoms where every density vanishes are left out of the LP and given
/// wholly to the first player.
pub fn solve_alpha(
    profile: &MeasureProfile,
    k: &GoalMatrix,
    p: &TargetPoint,
    mode: &DeltaMode,
) -> Result<(WeightSystem, DeltaValue)> {
    let n = profile.players();
    if k.size() != n || p.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "profile has {n} players, goal is {0}x{0}, target has {1} entries",
            k.size(),
            p.len()
        )));
    }
    let verdict = is_proper(k.matrix(), &measure_relations(profile))?;
    if !verdict.is_proper() {
        return Err(Error::ImproperK(verdict.to_string()));
    }
    let (mode, unconstrained) = match mode {
        DeltaMode::FixedDelta(d) if d.is_negative() => return Err(Error::NegativeDelta(d.clone())),
        DeltaMode::MaximizeDelta if k.matrix().is_zero() => (DeltaMode::FixedDelta(Rational::zero()), true),
        other => (other.clone(), false),
    };

    let live: Vec<usize> = (0..profile.num_atoms()).filter(|&a| !profile.is_null_atom(a)).collect();
    let var = |slot: usize, j: usize| slot * n + j;
    let delta_var = live.len() * n;
    let maximize = mode == DeltaMode::MaximizeDelta;
    let mut lp = LpBuilder::new(delta_var + usize::from(maximize));

    for slot in 0..live.len() {
        lp.add_sparse((0..n).map(|j| (var(slot, j), Rational::one())), Comparison::Eq, Rational::one());
    }
    for i in 0..n {
        for j in 0..n {
            let terms = live
                .iter()
                .enumerate()
                .map(|(slot, &atom)| (var(slot, j), profile.atom_measure(i, atom)))
                .filter(|(_, c)| !c.is_zero());
            let kij = k.matrix()[(i, j)].clone();
            match &mode {
                DeltaMode::MaximizeDelta => {
                    lp.add_sparse(terms.chain([(delta_var, -kij)]), Comparison::Eq, p.as_slice()[j].clone());
                }
                DeltaMode::FixedDelta(d) => {
                    lp.add_sparse(terms, Comparison::Eq, &p.as_slice()[j] + kij * d);
                }
            }
        }
    }
    let mut objective = vec![Rational::zero(); lp.num_vars()];
    if maximize {
        objective[delta_var] = Rational::one();
    }

    let (witness, delta) = match lp.solve(Sense::Maximize, objective)? {
        LpOutcome::Optimal { value, witness } => {
            let delta = match &mode {
                _ if unconstrained => DeltaValue::Unconstrained,
                DeltaMode::MaximizeDelta => DeltaValue::Value(value),
                DeltaMode::FixedDelta(d) => DeltaValue::Value(d.clone()),
            };
            (witness, delta)
        }
        LpOutcome::Infeasible => return Err(Error::Infeasible),
        LpOutcome::Unbounded => {
            // With K != 0 some k_ij delta term is bounded by the measures.
            return Err(Error::Internal("delta unbounded for a nonzero goal".into()));
        }
    };

    let mut first_player = vec![Rational::zero(); n];
    first_player[0] = Rational::one();
    let mut rows = vec![first_player; profile.num_atoms()];
    for (slot, &atom) in live.iter().enumerate() {
        rows[atom] = (0..n).map(|j| witness[var(slot, j)].clone()).collect();
    }
    Ok((WeightSystem::new(rows)?, delta))
}

/// Per-atom weights `w_{j,I} = sum_k S_kj f_k(I)` that compose the Gram
/// division with the stochastic factor `S`, plus the certificate for `S`.
pub fn theorem1_weights(
    profile: &MeasureProfile,
    k: &GoalMatrix,
    p: &TargetPoint,
    delta: &Rational,
) -> Result<(WeightSystem, HyperFreeCertificate)> {
    let n = profile.players();
    if k.size() != n || p.len() != n {
        return Err(Error::DimensionMismatch("profile, goal and target sizes differ".into()));
    }
    let g = profile.gram_matrix();
    let g_plus = pseudo_inverse(&g);
    let cert = stochastic_factor(&g, &g_plus, k, p, delta)?;
    let s = &cert.stochastic_factor;
    let rows = (0..profile.num_atoms())
        .map(|atom| {
            if profile.is_null_atom(atom) {
                let mut w = vec![Rational::zero(); n];
                w[0] = Rational::one();
                return w;
            }
            let f = profile.rn_weights(atom);
            (0..n)
                .map(|j| (0..n).map(|kk| &s[(kk, j)] * &f[kk]).sum())
                .collect()
        })
        .collect();
    Ok((WeightSystem::new(rows)?, cert))
}

/// Realizes `P + delta K` through the Gram division and the stochastic
/// factor; requires `delta` within the explicit bound (or at least small
/// enough for the factor to stay nonnegative).
pub fn build_via_theorem1(profile: &MeasureProfile, k: &GoalMatrix, p: &TargetPoint, delta: &Rational) -> Result<Partition> {
    let (w, _) = theorem1_weights(profile, k, p, delta)?;
    build_from_weights(profile, &w)
}
