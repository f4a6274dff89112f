//! Exact arithmetic for 2×2 projective matrices over the rationals.
//!
//! Every [`ProjectiveMatrix`] is stored as its canonical representative: a
//! primitive integer matrix whose first nonzero entry (in the order
//! `m11, m12, m21, m22`) is positive. Two matrices are equal in PGL₂(ℚ) iff
//! their canonical representatives are equal, so the derived `Eq`/`Hash`
//! impls are exactly scalar-class equality.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("matrix is singular (determinant 0)")]
    SingularMatrix,
    #[error("valuation of 0 is undefined")]
    UndefinedValuation,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cannot parse matrix entry {0:?}")]
    BadEntry(String),
}

/// A nonsingular 2×2 matrix up to nonzero scalar, in canonical primitive form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectiveMatrix {
    entries: [BigInt; 4],
}

impl ProjectiveMatrix {
    pub fn identity() -> Self {
        Self {
            entries: [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()],
        }
    }

    /// Canonical form of the integer matrix `[[m11, m12], [m21, m22]]`.
    pub fn from_integers(
        m11: impl Into<BigInt>,
        m12: impl Into<BigInt>,
        m21: impl Into<BigInt>,
        m22: impl Into<BigInt>,
    ) -> Result<Self, ExactError> {
        Self::from_entries([m11.into(), m12.into(), m21.into(), m22.into()])
    }

    /// Canonical form of a row-major integer entry array.
    pub fn from_entries(entries: [BigInt; 4]) -> Result<Self, ExactError> {
        if det_of(&entries).is_zero() {
            return Err(ExactError::SingularMatrix);
        }
        Ok(Self::normalize(entries))
    }

    /// Parses four decimal integers in row-major order.
    pub fn from_decimal(entries: [&str; 4]) -> Result<Self, ExactError> {
        let parse =
            |s: &str| BigInt::from_str(s.trim()).map_err(|_| ExactError::BadEntry(s.to_string()));
        Self::from_entries([
            parse(entries[0])?,
            parse(entries[1])?,
            parse(entries[2])?,
            parse(entries[3])?,
        ])
    }

    // Caller guarantees a nonzero determinant.
    fn normalize(mut entries: [BigInt; 4]) -> Self {
        let content = entries.iter().fold(BigInt::zero(), |acc, e| acc.gcd(e));
        if !content.is_one() {
            for e in entries.iter_mut() {
                *e /= &content;
            }
        }
        let leading_negative = entries
            .iter()
            .find(|e| !e.is_zero())
            .is_some_and(|e| e.is_negative());
        if leading_negative {
            for e in entries.iter_mut() {
                *e = -std::mem::take(e);
            }
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[BigInt; 4] {
        &self.entries
    }

    pub fn m11(&self) -> &BigInt {
        &self.entries[0]
    }

    pub fn m12(&self) -> &BigInt {
        &self.entries[1]
    }

    pub fn m21(&self) -> &BigInt {
        &self.entries[2]
    }

    pub fn m22(&self) -> &BigInt {
        &self.entries[3]
    }

    /// Determinant of the canonical representative.
    pub fn det(&self) -> BigInt {
        det_of(&self.entries)
    }

    /// Trace of the canonical representative.
    pub fn trace(&self) -> BigInt {
        &self.entries[0] + &self.entries[3]
    }

    pub fn is_identity(&self) -> bool {
        self.entries[1].is_zero()
            && self.entries[2].is_zero()
            && self.entries[0].is_one()
            && self.entries[3].is_one()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &rhs.entries;
        Self::normalize([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    /// The adjugate `[[m22, -m12], [-m21, m11]]`, which is the inverse in PGL₂.
    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = &self.entries;
        Self::normalize([d.clone(), -b, -c, a.clone()])
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::identity();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Total bit length of the entries; used for memory accounting.
    pub fn bit_size(&self) -> u64 {
        self.entries.iter().map(|e| e.bits()).sum()
    }
}

fn det_of(entries: &[BigInt; 4]) -> BigInt {
    &entries[0] * &entries[3] - &entries[1] * &entries[2]
}

impl Mul for &ProjectiveMatrix {
    type Output = ProjectiveMatrix;

    fn mul(self, rhs: &ProjectiveMatrix) -> ProjectiveMatrix {
        ProjectiveMatrix::mul(self, rhs)
    }
}

impl fmt::Display for ProjectiveMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.entries;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

impl fmt::Debug for ProjectiveMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Canonical projective class of a nonsingular rational matrix `[[r11, r12], [r21, r22]]`.
pub fn canonicalize(raw: &[[BigRational; 2]; 2]) -> Result<ProjectiveMatrix, ExactError> {
    let cells = [&raw[0][0], &raw[0][1], &raw[1][0], &raw[1][1]];
    let common = cells
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let scaled = cells.map(|r| r.numer() * (&common / r.denom()));
    ProjectiveMatrix::from_entries(scaled)
}

/// Largest `e` with `p^e | n`.
pub fn valuation(n: &BigInt, p: u64) -> Result<u32, ExactError> {
    if n.is_zero() {
        return Err(ExactError::UndefinedValuation);
    }
    if !is_prime(p) {
        return Err(ExactError::NotPrime(p));
    }
    Ok(valuation_unchecked(n, p))
}

// n ≠ 0 and p prime.
pub(crate) fn valuation_unchecked(n: &BigInt, p: u64) -> u32 {
    if p == 2 {
        return n.trailing_zeros().unwrap_or(0) as u32;
    }
    let p = BigInt::from(p);
    let mut m = n.magnitude().clone().into();
    let mut e = 0;
    loop {
        let (q, r) = BigInt::div_rem(&m, &p);
        if !r.is_zero() {
            return e;
        }
        m = q;
        e += 1;
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of a nonzero integer, by trial division. Intended
/// for the small determinants of generating sets.
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut m = n.magnitude().clone();
    let mut primes = Vec::new();
    let mut d = 2u64;
    while !m.is_one() && !m.is_zero() {
        let big_d = num_bigint::BigUint::from(d);
        if &big_d * &big_d > m {
            primes.push(u64::try_from(&m).expect("prime factor exceeds u64"));
            break;
        }
        if (&m % &big_d).is_zero() {
            primes.push(d);
            while (&m % &big_d).is_zero() {
                m /= &big_d;
            }
        }
        d += 1;
    }
    primes
}

/// Sign of a big integer as -1, 0 or 1.
pub fn signum(n: &BigInt) -> i8 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> ProjectiveMatrix {
        ProjectiveMatrix::from_integers(a, b, c, d).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn canonicalize_scalar_identity() {
        assert_eq!(m(2, 0, 0, 2), ProjectiveMatrix::identity());
    }

    #[test]
    fn canonicalize_scaled_generator() {
        let third = q(1, 3);
        let raw = [[q(9, 1) * &third, q(0, 1)], [q(0, 1), third.clone()]];
        assert_eq!(canonicalize(&raw).unwrap(), m(9, 0, 0, 1));
    }

    #[test]
    fn canonicalize_sign() {
        let c = m(-1, 0, 0, 1);
        assert_eq!(c.entries(), &[1.into(), 0.into(), 0.into(), (-1).into()]);
        let c = m(0, -3, 6, 9);
        assert_eq!(c.entries(), &[0.into(), 1.into(), (-2).into(), (-3).into()]);
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(
            ProjectiveMatrix::from_integers(1, 2, 2, 4),
            Err(ExactError::SingularMatrix)
        );
        let raw = [[q(1, 2), q(1, 3)], [q(3, 2), q(1, 1)]];
        assert_eq!(canonicalize(&raw), Err(ExactError::SingularMatrix));
    }

    #[test]
    fn product_and_inverse() {
        assert_eq!(m(9, 0, 0, 1).mul(&m(82, 2, 9, 1)), m(738, 18, 9, 1));
        assert_eq!(m(9, 0, 0, 1).inverse(), m(1, 0, 0, 9));
        assert_eq!(m(82, 2, 9, 1).inverse(), m(1, -2, -9, 82));
        let g = m(82, 2, 9, 1);
        assert!(g.mul(&g.inverse()).is_identity());
        assert_eq!(ProjectiveMatrix::identity().mul(&g), g);
    }

    #[test]
    fn det_and_trace() {
        assert_eq!(m(82, 2, 9, 1).det(), 64.into());
        assert_eq!(m(0, -1, 1, 0).trace(), 0.into());
        assert_eq!(ProjectiveMatrix::identity().det(), 1.into());
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&64.into(), 2), Ok(6));
        assert_eq!(valuation(&9.into(), 3), Ok(2));
        assert_eq!(valuation(&9.into(), 2), Ok(0));
        assert_eq!(valuation(&(-48).into(), 2), Ok(4));
        assert_eq!(valuation(&0.into(), 2), Err(ExactError::UndefinedValuation));
        assert_eq!(valuation(&8.into(), 4), Err(ExactError::NotPrime(4)));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let g = m(1, 1, -1, 0);
        assert!(g.pow(3).is_identity());
        assert!(!g.pow(2).is_identity());
        let h = m(82, 2, 9, 1);
        assert_eq!(h.pow(5), h.mul(&h).mul(&h).mul(&h).mul(&h));
    }

    #[test]
    fn factorization() {
        assert_eq!(prime_factors(&BigInt::from(-72)), vec![2, 3]);
        assert_eq!(prime_factors(&BigInt::from(1)), Vec::<u64>::new());
        assert_eq!(prime_factors(&BigInt::from(2 * 49 * 13)), vec![2, 7, 13]);
    }
}
