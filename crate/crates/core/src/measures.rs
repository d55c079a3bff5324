//! Piecewise-constant probability densities on `[0, 1]`.
//!
//! A [`MeasureProfile`] holds one density per player together with the
//! common refinement of their breakpoints ("atoms"). On each atom every
//! density is constant, which is what makes every quantity downstream a
//! finite exact sum.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, RatMatrix, Rational};

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::IntervalOutOfRange {
                lo: Box::new(lo),
                hi: Box::new(hi),
            });
        }
        Ok(Interval { lo, hi })
    }

    pub fn unit() -> Self {
        Interval {
            lo: Rational::zero(),
            hi: Rational::one(),
        }
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Length of the intersection with `other` (zero if disjoint).
    pub fn overlap(&self, other: &Interval) -> Rational {
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        if hi > lo {
            hi - lo
        } else {
            Rational::zero()
        }
    }

    pub fn within_unit(&self) -> bool {
        !self.lo.is_negative() && self.hi <= Rational::one()
    }
}

/// Step function on `[0, 1]` integrating to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepDensity {
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
}

impl StepDensity {
    /// `values[k]` is the density on `[breakpoints[k], breakpoints[k + 1]]`.
    pub fn new(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        Self::check_shape(&breakpoints, &values)?;
        let mass = Self::mass_of(&breakpoints, &values);
        if !mass.is_one() {
            return Err(Error::InvalidDensity(format!("total mass is {mass}, expected 1")));
        }
        Ok(StepDensity { breakpoints, values })
    }

    /// Like [`StepDensity::new`] but rescales the values to unit mass.
    pub fn normalized(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        Self::check_shape(&breakpoints, &values)?;
        let mass = Self::mass_of(&breakpoints, &values);
        if mass.is_zero() {
            return Err(Error::InvalidDensity("density has zero mass".into()));
        }
        let values = values.into_iter().map(|v| v / &mass).collect();
        Ok(StepDensity { breakpoints, values })
    }

    /// Indicator of `[lo, hi]` scaled to unit mass.
    pub fn uniform_on(lo: Rational, hi: Rational) -> Result<Self> {
        if lo.is_negative() || hi > Rational::one() || lo >= hi {
            return Err(Error::InvalidDensity(format!("[{lo}, {hi}] is not a proper subinterval of [0, 1]")));
        }
        let height = (&hi - &lo).recip();
        let mut breakpoints = vec![Rational::zero()];
        let mut values = Vec::new();
        if lo.is_positive() {
            breakpoints.push(lo.clone());
            values.push(Rational::zero());
        }
        values.push(height);
        if hi < Rational::one() {
            breakpoints.push(hi);
            values.push(Rational::zero());
        }
        breakpoints.push(Rational::one());
        Self::new(breakpoints, values)
    }

    fn check_shape(breakpoints: &[Rational], values: &[Rational]) -> Result<()> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidDensity("need at least two breakpoints".into()));
        }
        if !breakpoints[0].is_zero() || !breakpoints[breakpoints.len() - 1].is_one() {
            return Err(Error::InvalidDensity("breakpoints must start at 0 and end at 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDensity("breakpoints must be strictly increasing".into()));
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidDensity(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| v.is_negative()) {
            return Err(Error::InvalidDensity(format!("negative value {v}")));
        }
        Ok(())
    }

    fn mass_of(breakpoints: &[Rational], values: &[Rational]) -> Rational {
        breakpoints
            .windows(2)
            .zip(values)
            .map(|(w, v)| v * (&w[1] - &w[0]))
            .sum()
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Density value on the cell containing the open interval `(lo, hi)`.
    fn value_on(&self, lo: &Rational, hi: &Rational) -> Rational {
        let k = self
            .breakpoints
            .windows(2)
            .position(|w| &w[0] <= lo && hi <= &w[1])
            .expect("atom lies inside one cell");
        self.values[k].clone()
    }
}

/// Densities of all players together with their common refinement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureProfile {
    densities: Vec<StepDensity>,
    atoms: Vec<Interval>,
    // values[atom][player]
    values: Vec<Vec<Rational>>,
}

impl MeasureProfile {
    pub fn new(densities: Vec<StepDensity>) -> Result<Self> {
        common_refinement(densities)
    }

    pub fn players(&self) -> usize {
        self.densities.len()
    }

    pub fn densities(&self) -> &[StepDensity] {
        &self.densities
    }

    pub fn atoms(&self) -> &[Interval] {
        &self.atoms
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    /// Constant density values of every player on `atom`.
    pub fn atom_values(&self, atom: usize) -> &[Rational] {
        &self.values[atom]
    }

    /// `mu_player(atom)`.
    pub fn atom_measure(&self, player: usize, atom: usize) -> Rational {
        &self.values[atom][player] * self.atoms[atom].length()
    }

    /// Measure of `atom` under the sum of all players' measures.
    pub fn total_atom_measure(&self, atom: usize) -> Rational {
        self.values[atom].iter().sum::<Rational>() * self.atoms[atom].length()
    }

    /// True when every density vanishes on `atom`.
    pub fn is_null_atom(&self, atom: usize) -> bool {
        self.values[atom].iter().all(Zero::is_zero)
    }

    pub fn measure_of(&self, player: usize, iv: &Interval) -> Result<Rational> {
        measure_of(self, player, iv)
    }

    pub fn rn_weights(&self, atom: usize) -> Vec<Rational> {
        rn_weights(self, atom)
    }

    pub fn gram_matrix(&self) -> RatMatrix {
        gram_matrix(self)
    }

    pub fn measure_relations(&self) -> Vec<Vec<Rational>> {
        measure_relations(self)
    }
}

/// Merges the breakpoints of all densities into atoms and tabulates every
/// density's value on each atom.
pub fn common_refinement(densities: Vec<StepDensity>) -> Result<MeasureProfile> {
    if densities.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let mut cuts: Vec<Rational> = densities
        .iter()
        .flat_map(|d| d.breakpoints.iter().cloned())
        .collect();
    cuts.sort();
    cuts.dedup();
    let atoms: Vec<Interval> = cuts
        .windows(2)
        .map(|w| Interval {
            lo: w[0].clone(),
            hi: w[1].clone(),
        })
        .collect();
    let values = atoms
        .iter()
        .map(|a| densities.iter().map(|d| d.value_on(&a.lo, &a.hi)).collect())
        .collect();
    Ok(MeasureProfile {
        densities,
        atoms,
        values,
    })
}

/// `mu_player(iv)`, the integral of the player's density over `iv`.
pub fn measure_of(profile: &MeasureProfile, player: usize, iv: &Interval) -> Result<Rational> {
    if player >= profile.players() {
        return Err(Error::PlayerOutOfRange {
            player,
            players: profile.players(),
        });
    }
    if !iv.within_unit() || iv.lo > iv.hi {
        return Err(Error::IntervalOutOfRange {
            lo: Box::new(iv.lo.clone()),
            hi: Box::new(iv.hi.clone()),
        });
    }
    Ok(profile
        .atoms
        .iter()
        .zip(&profile.values)
        .map(|(atom, vals)| &vals[player] * atom.overlap(iv))
        .sum())
}

/// Radon-Nikodym weights `f_i = phi_i / sum_k phi_k` on one atom; all zero
/// on an atom where every density vanishes.
pub fn rn_weights(profile: &MeasureProfile, atom: usize) -> Vec<Rational> {
    let vals = &profile.values[atom];
    let total: Rational = vals.iter().sum();
    if total.is_zero() {
        return vec![Rational::zero(); vals.len()];
    }
    vals.iter().map(|v| v / &total).collect()
}

/// `G_ij = sum over atoms of f_i f_j mu(atom)`.
pub fn gram_matrix(profile: &MeasureProfile) -> RatMatrix {
    let n = profile.players();
    let mut g = RatMatrix::zeros(n, n);
    for atom in 0..profile.num_atoms() {
        let mu = profile.total_atom_measure(atom);
        if mu.is_zero() {
            continue;
        }
        let f = rn_weights(profile, atom);
        for i in 0..n {
            if f[i].is_zero() {
                continue;
            }
            let fi_mu = &f[i] * &mu;
            for j in i..n {
                let v = &fi_mu * &f[j];
                g[(i, j)] += &v;
                if i != j {
                    g[(j, i)] += v;
                }
            }
        }
    }
    g
}

/// Basis of the linear relations `sum_i lambda_i mu_i = 0`, i.e. the kernel
/// of the Gram matrix in canonical integer form.
pub fn measure_relations(profile: &MeasureProfile) -> Vec<Vec<Rational>> {
    kernel_basis(&gram_matrix(profile))
}
