//! Exact dense linear algebra over the rationals.
//!
//! Everything here works on [`Rational`] values and never rounds: elimination,
//! kernel bases, rank factorization, the Moore-Penrose pseudo-inverse, the
//! characteristic polynomial with root isolation, and a two-phase simplex.

mod charpoly;
mod elimination;
mod matrix;
mod simplex;

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use charpoly::{char_poly, eval_poly, smallest_eigenvalue, Enclosure, SturmSequence};
pub use elimination::{inverse, kernel_basis, pseudo_inverse, rank, rank_factorization, rref, Rref};
pub use matrix::RatMatrix;
pub use simplex::{simplex_solve, Comparison, LpBuilder, LpOutcome, LpProblem, Sense};

/// Arbitrary-precision fraction, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Shorthand for `num / den` with small integer parts.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"num/den"` or a bare integer. Decimal and exponent notation are
/// rejected so that no floating-point value can enter the exact path.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let valid_part = |s: &str, allow_sign: bool| {
        let digits = if allow_sign {
            s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    let well_formed = match trimmed.split_once('/') {
        Some((num, den)) => valid_part(num, true) && valid_part(den, false),
        None => valid_part(trimmed, true),
    };
    if !well_formed {
        return Err(Error::InvalidRational(text.to_string()));
    }
    Rational::from_str(trimmed).map_err(|_| Error::InvalidRational(text.to_string()))
}

/// Scales a vector so its entries are coprime integers with a positive first
/// nonzero entry. The zero vector is returned unchanged.
pub fn integer_canonical(v: &[Rational]) -> Vec<Rational> {
    use num_integer::Integer;

    let Some(lead) = v.iter().find(|x| !x.is_zero()) else {
        return v.to_vec();
    };
    let scaled: Vec<Rational> = v.iter().map(|x| x / lead).collect();
    let lcm = scaled
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = scaled
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &gcd))
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn max_abs(values: impl IntoIterator<Item = Rational>) -> Rational {
    values
        .into_iter()
        .map(|x| x.abs())
        .fold(Rational::zero(), |acc, x| if x > acc { x } else { acc })
}
