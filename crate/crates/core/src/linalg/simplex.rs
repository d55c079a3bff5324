//! Exact two-phase simplex over the rationals.
//!
//! Problems are in standard form: optimize `c x` subject to `A x = b`,
//! `x >= 0`. Pivoting follows Bland's rule (lowest eligible index enters,
//! ties in the ratio test go to the lowest basic index), which rules out
//! cycling on degenerate vertices.

use num_traits::{Signed, Zero};

use super::{dot, RatMatrix, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: RatMatrix,
    pub rhs: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        witness: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpProblem {
    pub fn new(
        sense: Sense,
        objective: Vec<Rational>,
        constraints: RatMatrix,
        rhs: Vec<Rational>,
    ) -> Result<Self> {
        if objective.len() != constraints.cols() {
            return Err(Error::DimensionMismatch(format!(
                "objective has {} coefficients for {} variables",
                objective.len(),
                constraints.cols()
            )));
        }
        if rhs.len() != constraints.rows() {
            return Err(Error::DimensionMismatch(format!(
                "rhs has {} entries for {} constraints",
                rhs.len(),
                constraints.rows()
            )));
        }
        Ok(LpProblem {
            sense,
            objective,
            constraints,
            rhs,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.constraints.cols()
    }

    /// True when `x` satisfies every equality and sign constraint exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().all(|v| !v.is_negative())
            && (0..self.constraints.rows())
                .all(|i| dot(self.constraints.row(i), x) == self.rhs[i])
    }
}

struct Tableau {
    // rows x (cols + 1); last column is the right-hand side
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.t[i][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for v in self.t[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Minimizes `cost . x` over columns `< allowed`.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> Phase {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = &cost[j]
                    - self
                        .t
                        .iter()
                        .zip(&self.basis)
                        .map(|(r, &b)| &cost[b] * &r[j])
                        .sum::<Rational>();
                reduced.is_negative()
            });
            let Some(col) = entering else {
                return Phase::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return Phase::Unbounded,
            }
        }
    }

    fn solution(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.rhs(i).clone();
            }
        }
        x
    }
}

pub fn simplex_solve(problem: &LpProblem) -> Result<LpOutcome> {
    let a = &problem.constraints;
    let (m, n) = (a.rows(), a.cols());
    if problem.objective.len() != n || problem.rhs.len() != m {
        return Err(Error::DimensionMismatch(
            "objective or rhs does not match the constraint matrix".into(),
        ));
    }

    // Phase 1 tableau: [A | I | b] with every row flipped so b >= 0.
    let cols = n + m;
    let mut t = Vec::with_capacity(m);
    for i in 0..m {
        let flip = problem.rhs[i].is_negative();
        let mut row = Vec::with_capacity(cols + 1);
        for j in 0..n {
            row.push(if flip { -a[(i, j)].clone() } else { a[(i, j)].clone() });
        }
        for k in 0..m {
            row.push(if k == i { Rational::from_integer(1.into()) } else { Rational::zero() });
        }
        row.push(problem.rhs[i].abs());
        t.push(row);
    }
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        cols,
    };

    let mut phase1_cost = vec![Rational::zero(); cols];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = Rational::from_integer(1.into());
    }
    // Phase 1 is bounded below by zero, so it always terminates optimal.
    let _ = tab.optimize(&phase1_cost, cols);
    let infeasibility: Rational = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n)
        .map(|(i, _)| tab.rhs(i).clone())
        .sum();
    if infeasibility.is_positive() {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive zero-level artificials out of the basis; rows where that is
    // impossible are linear combinations of the others and get dropped.
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                Some(j) => {
                    tab.pivot(i, j);
                    i += 1;
                }
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    let mut cost: Vec<Rational> = match problem.sense {
        Sense::Minimize => problem.objective.clone(),
        Sense::Maximize => problem.objective.iter().map(|c| -c).collect(),
    };
    cost.resize(cols, Rational::zero());
    match tab.optimize(&cost, n) {
        Phase::Unbounded => Ok(LpOutcome::Unbounded),
        Phase::Optimal => {
            let witness = tab.solution(n);
            let value = dot(&problem.objective, &witness);
            debug_assert!(problem.is_feasible(&witness));
            Ok(LpOutcome::Optimal { value, witness })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Le,
    Eq,
    Ge,
}

/// Collects rows of the form `coeffs . x (<=|=|>=) rhs` over nonnegative
/// variables and lowers them to standard form by appending slack columns.
#[derive(Debug, Clone)]
pub struct LpBuilder {
    num_vars: usize,
    rows: Vec<(Vec<Rational>, Comparison, Rational)>,
}

impl LpBuilder {
    pub fn new(num_vars: usize) -> Self {
        LpBuilder {
            num_vars,
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, cmp: Comparison, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars, "constraint row has wrong length");
        self.rows.push((coeffs, cmp, rhs));
        self
    }

    /// Adds a row from sparse `(index, coefficient)` terms.
    pub fn add_sparse(
        &mut self,
        terms: impl IntoIterator<Item = (usize, Rational)>,
        cmp: Comparison,
        rhs: Rational,
    ) -> &mut Self {
        let mut coeffs = vec![Rational::zero(); self.num_vars];
        for (j, c) in terms {
            coeffs[j] += c;
        }
        self.add(coeffs, cmp, rhs)
    }

    pub fn build(&self, sense: Sense, objective: Vec<Rational>) -> Result<LpProblem> {
        if objective.len() != self.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "objective has {} coefficients for {} variables",
                objective.len(),
                self.num_vars
            )));
        }
        let slacks = self.rows.iter().filter(|r| r.1 != Comparison::Eq).count();
        let total = self.num_vars + slacks;
        let mut a = RatMatrix::zeros(self.rows.len(), total);
        let mut rhs = Vec::with_capacity(self.rows.len());
        let mut next_slack = self.num_vars;
        for (i, (coeffs, cmp, b)) in self.rows.iter().enumerate() {
            for (j, c) in coeffs.iter().enumerate() {
                a[(i, j)] = c.clone();
            }
            match cmp {
                Comparison::Eq => {}
                Comparison::Le => {
                    a[(i, next_slack)] = Rational::from_integer(1.into());
                    next_slack += 1;
                }
                Comparison::Ge => {
                    a[(i, next_slack)] = Rational::from_integer((-1).into());
                    next_slack += 1;
                }
            }
            rhs.push(b.clone());
        }
        let mut obj = objective;
        obj.resize(total, Rational::zero());
        LpProblem::new(sense, obj, a, rhs)
    }

    /// Builds, solves and truncates the witness to the original variables.
    pub fn solve(&self, sense: Sense, objective: Vec<Rational>) -> Result<LpOutcome> {
        let problem = self.build(sense, objective)?;
        Ok(match simplex_solve(&problem)? {
            LpOutcome::Optimal { value, mut witness } => {
                witness.truncate(self.num_vars);
                LpOutcome::Optimal { value, witness }
            }
            other => other,
        })
    }
}
