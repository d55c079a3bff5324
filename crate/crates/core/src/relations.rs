//! Sign-pattern feasibility: is there a proper `K` with `k_ij r_ij 0` for a
//! given grid of relations `r_ij` in `{<, =, >}`?
//!
//! Decided by one exact LP. Free entries are split into nonnegative parts,
//! strictness becomes a common margin `t` that the LP maximizes, and the box
//! `|k_ij| <= 1` keeps that margin finite.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hyperfree::{is_proper, GoalMatrix};
use crate::linalg::{LpBuilder, LpOutcome, Comparison, RatMatrix, Rational, Sense};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Lt,
    Eq,
    Gt,
}

impl Relation {
    /// Whether `value` stands in this relation to zero.
    pub fn holds(self, value: &Rational) -> bool {
        match self {
            Relation::Lt => value.is_negative(),
            Relation::Eq => value.is_zero(),
            Relation::Gt => value.is_positive(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Eq => "=",
            Relation::Gt => ">",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "<" => Ok(Relation::Lt),
            "=" => Ok(Relation::Eq),
            ">" => Ok(Relation::Gt),
            other => Err(Error::InvalidGoal(format!("unknown relation {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationMatrix {
    n: usize,
    cells: Vec<Relation>,
}

impl RelationMatrix {
    pub fn new(rows: Vec<Vec<Relation>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: rows[bad].len(),
            });
        }
        Ok(RelationMatrix {
            n,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    /// `>` on the diagonal and `<` elsewhere.
    pub fn super_envy_free(n: usize) -> Self {
        let cells = (0..n * n)
            .map(|idx| if idx / n == idx % n { Relation::Gt } else { Relation::Lt })
            .collect();
        RelationMatrix { n, cells }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Relation {
        self.cells[i * self.n + j]
    }

    pub fn has_strict(&self) -> bool {
        self.cells.iter().any(|r| *r != Relation::Eq)
    }

    pub fn to_rows(&self) -> Vec<Vec<Relation>> {
        self.cells.chunks(self.n).map(<[Relation]>::to_vec).collect()
    }
}

impl fmt::Display for RelationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.cells.chunks(self.n) {
            let cells: Vec<&str> = row.iter().map(|r| r.symbol()).collect();
            writeln!(f, "[ {} ]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Strictness margin of a feasible sign pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Margin {
    /// Every strict entry satisfies `|k_ij| >= margin` with all `|k_ij| <= 1`.
    Strict(Rational),
    /// The pattern has no strict entry; `K = 0` is the answer.
    Unconstrained,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationSolution {
    Feasible { k: GoalMatrix, margin: Margin },
    Infeasible,
}

impl RelationSolution {
    pub fn is_feasible(&self) -> bool {
        matches!(self, RelationSolution::Feasible { .. })
    }

    pub fn goal(&self) -> Option<&GoalMatrix> {
        match self {
            RelationSolution::Feasible { k, .. } => Some(k),
            RelationSolution::Infeasible => None,
        }
    }
}

/// Searches for a proper `K` with the sign pattern `r`, maximizing the margin
/// by which strict entries clear zero.
pub fn solve_relations(r: &RelationMatrix, relations: &[Vec<Rational>]) -> Result<RelationSolution> {
    let n = r.size();
    if let Some(bad) = relations.iter().position(|l| l.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "relation {bad} has {} coefficients for {n} players",
            relations[bad].len()
        )));
    }
    if !r.has_strict() {
        return Ok(RelationSolution::Feasible {
            k: GoalMatrix::zero(n),
            margin: Margin::Unconstrained,
        });
    }

    // k_ij = x[pos(i,j)] - x[neg(i,j)], margin t = x[2 n^2]
    let pos = |i: usize, j: usize| 2 * (i * n + j);
    let neg = |i: usize, j: usize| 2 * (i * n + j) + 1;
    let t = 2 * n * n;
    let one = Rational::one;
    let mut lp = LpBuilder::new(t + 1);

    let entry = |i: usize, j: usize, c: Rational| [(pos(i, j), c.clone()), (neg(i, j), -c)];
    for i in 0..n {
        lp.add_sparse((0..n).flat_map(|j| entry(i, j, one())), Comparison::Eq, Rational::zero());
    }
    for lambda in relations {
        for j in 0..n {
            let terms = (0..n)
                .filter(|&i| !lambda[i].is_zero())
                .flat_map(|i| entry(i, j, lambda[i].clone()));
            lp.add_sparse(terms, Comparison::Eq, Rational::zero());
        }
    }
    for i in 0..n {
        for j in 0..n {
            let k = entry(i, j, one());
            match r.get(i, j) {
                Relation::Eq => lp.add_sparse(k, Comparison::Eq, Rational::zero()),
                Relation::Gt => lp.add_sparse(k.into_iter().chain([(t, -one())]), Comparison::Ge, Rational::zero()),
                Relation::Lt => lp.add_sparse(k.into_iter().chain([(t, one())]), Comparison::Le, Rational::zero()),
            };
            lp.add_sparse([(pos(i, j), one())], Comparison::Le, one());
            lp.add_sparse([(neg(i, j), one())], Comparison::Le, one());
        }
    }
    let mut objective = vec![Rational::zero(); t + 1];
    objective[t] = one();

    match lp.solve(Sense::Maximize, objective)? {
        LpOutcome::Optimal { value, witness } if value.is_positive() => {
            let mut k = RatMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    k[(i, j)] = &witness[pos(i, j)] - &witness[neg(i, j)];
                }
            }
            Ok(RelationSolution::Feasible {
                k: GoalMatrix::new(k)?,
                margin: Margin::Strict(value),
            })
        }
        LpOutcome::Optimal { .. } => Ok(RelationSolution::Infeasible),
        // t = 0, K = 0 is always feasible and t is capped by the box.
        LpOutcome::Infeasible | LpOutcome::Unbounded => {
            Err(Error::Internal("relation LP lost its trivial solution or its box".into()))
        }
    }
}

/// True iff `k` is proper for `relations` and every entry has the sign that
/// `r` prescribes.
pub fn verify_relation_solution(k: &GoalMatrix, r: &RelationMatrix, relations: &[Vec<Rational>]) -> bool {
    let n = r.size();
    if k.size() != n {
        return false;
    }
    let proper = matches!(is_proper(k.matrix(), relations), Ok(v) if v.is_proper());
    proper && (0..n).all(|i| (0..n).all(|j| r.get(i, j).holds(&k.matrix()[(i, j)])))
}
