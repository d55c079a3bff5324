//! Characteristic polynomials and exact real-root isolation.
//!
//! Polynomials are coefficient vectors in ascending order: `p[k]` multiplies
//! `x^k`.

use num_traits::{One, Signed, Zero};

use super::{RatMatrix, Rational};
use crate::error::{Error, Result};

/// Coefficients of `det(x I - m)` by the Faddeev-LeVerrier recurrence.
pub fn char_poly(m: &RatMatrix) -> Result<Vec<Rational>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut acc = RatMatrix::zeros(n, n);
    let identity = RatMatrix::identity(n);
    for k in 1..=n {
        acc = &(m * &acc) + &identity.scale(&coeffs[n - k + 1]);
        let am = m * &acc;
        coeffs[n - k] = -am.trace() / Rational::from_integer(k.into());
    }
    Ok(coeffs)
}

pub fn eval_poly(p: &[Rational], x: &Rational) -> Rational {
    p.iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn derivative(p: &[Rational]) -> Vec<Rational> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Rational::from_integer(k.into()))
        .collect()
}

/// Quotient and remainder of polynomial long division. `divisor` must be nonzero.
fn div_rem(dividend: &[Rational], divisor: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let divisor = trim(divisor.to_vec());
    let mut rem = trim(dividend.to_vec());
    let d = divisor.len() - 1;
    let lead = divisor[d].clone();
    if rem.len() < divisor.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - d];
    while rem.len() >= divisor.len() {
        let shift = rem.len() - divisor.len();
        let factor = rem.last().unwrap() / &lead;
        for (k, c) in divisor.iter().enumerate() {
            rem[shift + k] -= &factor * c;
        }
        quot[shift] = factor;
        rem.pop();
        rem = trim(rem);
    }
    (quot, rem)
}

fn monic(p: Vec<Rational>) -> Vec<Rational> {
    match p.last().cloned() {
        Some(lead) if !lead.is_zero() => p.into_iter().map(|c| c / &lead).collect(),
        _ => p,
    }
}

fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

/// `p / gcd(p, p')`: same roots as `p`, each with multiplicity one.
pub fn square_free_part(p: &[Rational]) -> Vec<Rational> {
    let p = trim(p.to_vec());
    if p.len() <= 2 {
        return p;
    }
    let g = gcd(&p, &derivative(&p));
    div_rem(&p, &g).0
}

/// Sturm chain of a square-free polynomial.
#[derive(Debug, Clone)]
pub struct SturmSequence {
    chain: Vec<Vec<Rational>>,
}

impl SturmSequence {
    pub fn new(p: &[Rational]) -> Self {
        let p0 = trim(p.to_vec());
        let mut chain = vec![p0.clone()];
        let mut prev = p0;
        let mut cur = trim(derivative(&prev));
        while !cur.is_empty() {
            chain.push(cur.clone());
            let (_, r) = div_rem(&prev, &cur);
            prev = cur;
            cur = r.into_iter().map(|c| -c).collect();
        }
        SturmSequence { chain }
    }

    fn variations(&self, x: &Rational) -> usize {
        let signs: Vec<bool> = self
            .chain
            .iter()
            .map(|p| eval_poly(p, x))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }

    pub fn polynomial(&self) -> &[Rational] {
        &self.chain[0]
    }
}

/// Rational interval `[lo, hi]` known to contain a real number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Encloses the smallest nonzero eigenvalue of a symmetric positive
/// semidefinite matrix (the smallest eigenvalue when `m` is nonsingular) in
/// an interval of width at most `tol`.
///
/// Works on the characteristic polynomial with its zero roots divided out and
/// repeated roots collapsed, bisecting with Sturm counts so even-multiplicity
/// eigenvalues are found too.
pub fn smallest_eigenvalue(m: &RatMatrix, tol: &Rational) -> Result<Enclosure> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !tol.is_positive() {
        return Err(Error::NonPositiveTolerance);
    }
    let p = char_poly(m)?;
    let zeros = p.iter().take_while(|c| c.is_zero()).count();
    let reduced = p[zeros..].to_vec();
    if reduced.len() <= 1 {
        return Err(Error::NoNonzeroEigenvalue);
    }
    let sturm = SturmSequence::new(&square_free_part(&reduced));

    // Every eigenvalue is bounded in modulus by the largest absolute row sum.
    let bound = (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.abs()).sum::<Rational>())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    let mut lo = Rational::zero();
    let mut hi = bound + Rational::one();
    if sturm.count_roots(&lo, &hi) == 0 {
        return Err(Error::NoNonzeroEigenvalue);
    }
    let two = Rational::from_integer(2.into());
    // Invariant: no root in (0, lo], at least one root in (lo, hi].
    while &hi - &lo > *tol || sturm.count_roots(&lo, &hi) != 1 {
        let mid = (&lo + &hi) / &two;
        if sturm.count_roots(&lo, &mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Enclosure { lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use proptest::prelude::*;

    fn example_gram() -> RatMatrix {
        RatMatrix::from_rows(vec![
            vec![rat(10, 11), int(0), rat(1, 11)],
            vec![int(0), rat(10, 19), rat(9, 19)],
            vec![rat(1, 11), rat(9, 19), rat(91, 209)],
        ])
        .unwrap()
    }

    /// det(x I - m) for 3x3 by cofactor expansion over polynomial entries.
    fn cofactor_char_poly_3x3(m: &RatMatrix) -> Vec<Rational> {
        type Poly = Vec<Rational>;
        let mul = |a: &Poly, b: &Poly| {
            let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        let add = |a: &Poly, b: &Poly| {
            let mut out = vec![Rational::zero(); a.len().max(b.len())];
            for (i, x) in a.iter().enumerate() {
                out[i] += x;
            }
            for (i, x) in b.iter().enumerate() {
                out[i] += x;
            }
            out
        };
        let neg = |a: &Poly| a.iter().map(|x| -x).collect::<Poly>();
        let entry = |i: usize, j: usize| -> Poly {
            if i == j {
                vec![-m[(i, j)].clone(), Rational::one()]
            } else {
                vec![-m[(i, j)].clone()]
            }
        };
        let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
            add(
                &mul(&entry(r0, c0), &entry(r1, c1)),
                &neg(&mul(&entry(r0, c1), &entry(r1, c0))),
            )
        };
        let t0 = mul(&entry(0, 0), &minor(1, 2, 1, 2));
        let t1 = neg(&mul(&entry(0, 1), &minor(1, 2, 0, 2)));
        let t2 = mul(&entry(0, 2), &minor(1, 2, 0, 1));
        trim(add(&add(&t0, &t1), &t2))
    }

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(
            char_poly(&RatMatrix::identity(2)).unwrap(),
            vec![int(1), int(-2), int(1)]
        );
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        assert_eq!(
            char_poly(&RatMatrix::diagonal(&[int(1), int(2), int(3)])).unwrap(),
            vec![int(-6), int(11), int(-6), int(1)]
        );
        assert!(char_poly(&RatMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn example_gram_matches_cofactor_expansion() {
        let g = example_gram();
        let p = char_poly(&g).unwrap();
        assert_eq!(p, cofactor_char_poly_3x3(&g));
        assert!(p[0].is_zero());
        assert!(!p[1].is_zero());
    }

    #[test]
    fn smallest_eigenvalue_simple() {
        let tol = rat(1, 1 << 20);
        let e = smallest_eigenvalue(&RatMatrix::identity(3), &tol).unwrap();
        assert!(e.contains(&int(1)) && e.width() <= tol);
        let e = smallest_eigenvalue(&RatMatrix::diagonal(&[rat(1, 4), int(3)]), &tol).unwrap();
        assert!(e.contains(&rat(1, 4)) && e.width() <= tol);
    }

    #[test]
    fn smallest_eigenvalue_singular_example() {
        let g = example_gram();
        let tol = rat(1, 1 << 40);
        let e = smallest_eigenvalue(&g, &tol).unwrap();
        assert!(e.width() <= tol);
        // The nonzero eigenvalues are the roots of p(x)/x = x^2 + p2 x + p1.
        let p = char_poly(&g).unwrap();
        let q = &p[1..];
        assert!(eval_poly(q, &e.lo) * eval_poly(q, &e.hi) <= int(0));
        assert!(e.lo > int(0));
        // brute-force sign scan at a coarse grid below lo finds no root
        let steps = 1000;
        let mut prev = eval_poly(q, &int(0));
        for k in 1..=steps {
            let x = &e.lo * rat(k, steps);
            let v = eval_poly(q, &x);
            assert!((&prev * &v) > int(0));
            prev = v;
        }
    }

    #[test]
    fn errors() {
        let tol = rat(1, 100);
        let ns = RatMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(0), int(1)]]).unwrap();
        assert_eq!(smallest_eigenvalue(&ns, &tol), Err(Error::NotSymmetric));
        assert_eq!(
            smallest_eigenvalue(&RatMatrix::zeros(2, 2), &tol),
            Err(Error::NoNonzeroEigenvalue)
        );
        assert_eq!(
            smallest_eigenvalue(&RatMatrix::identity(2), &int(0)),
            Err(Error::NonPositiveTolerance)
        );
    }

    #[test]
    fn repeated_eigenvalue_found() {
        // eigenvalues 2, 2, 5: the double root gives no sign change of char_poly
        let m = RatMatrix::diagonal(&[int(2), int(5), int(2)]);
        let e = smallest_eigenvalue(&m, &rat(1, 1000)).unwrap();
        assert!(e.contains(&int(2)));
    }

    proptest! {
        #[test]
        fn enclosure_brackets_root_of_square_free_part(
            entries in proptest::collection::vec(-3i64..=3, 9),
            tol_exp in 4u32..30,
        ) {
            // B^T B is symmetric PSD
            let b = RatMatrix::from_vec(3, 3, entries.into_iter().map(int).collect()).unwrap();
            let m = &b.transpose() * &b;
            let tol = Rational::new(1.into(), num_bigint::BigInt::from(2).pow(tol_exp));
            match smallest_eigenvalue(&m, &tol) {
                Ok(e) => {
                    prop_assert!(e.width() <= tol);
                    let p = char_poly(&m).unwrap();
                    let zeros = p.iter().take_while(|c| c.is_zero()).count();
                    let s = square_free_part(&p[zeros..]);
                    prop_assert!(eval_poly(&s, &e.lo) * eval_poly(&s, &e.hi) <= int(0));
                }
                Err(err) => {
                    prop_assert_eq!(err, Error::NoNonzeroEigenvalue);
                    prop_assert!(m.is_zero());
                }
            }
        }
    }
}
