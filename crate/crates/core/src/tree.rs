//! Bruhat–Tits tree of PGL₂(ℚ_p).
//!
//! Vertices are homothety classes of rank-2 ℤ_p-lattices; the base vertex is
//! the class of the standard lattice ℤ_p², whose stabilizer in PGL₂(ℤ[1/6])
//! (taken at p = 2 and p = 3 together) is PGL₂(ℤ).
//!
//! A vertex at distance `n ≥ 1` from the base has a unique representative
//! `L` with `p^n ℤ_p² ⊂ L ⊂ ℤ_p²`, `L ⊄ p ℤ_p²`, and `L / p^n ℤ_p²` cyclic,
//! spanned by a primitive vector `(x, y)`. The [`VertexKey`] records that
//! line in `(ℤ/p^n)²` as a residue: `x/y` when `y` is a unit (branch 0),
//! `y/x` otherwise (branch 1, residue divisible by `p`).

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{is_prime, prime_factors, valuation_unchecked, ProjectiveMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("determinant {det} has prime factor {prime} outside {{2, 3}}")]
    OutsideDomain { det: BigInt, prime: u64 },
}

/// A prime `p`; the tree is `(p + 1)`-regular.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeContext(u64);

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self, TreeError> {
        if is_prime(p) {
            Ok(Self(p))
        } else {
            Err(TreeError::NotPrime(p))
        }
    }

    pub const TWO: PrimeContext = PrimeContext(2);
    pub const THREE: PrimeContext = PrimeContext(3);

    pub fn p(self) -> u64 {
        self.0
    }

    pub fn valence(self) -> u64 {
        self.0 + 1
    }
}

/// Canonical coordinates `(p, n, branch, residue)` of a vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexKey {
    pub p: u64,
    pub n: u32,
    pub branch: u8,
    pub residue: BigUint,
}

impl VertexKey {
    pub fn base(p: u64) -> Self {
        Self {
            p,
            n: 0,
            branch: 0,
            residue: BigUint::zero(),
        }
    }

    pub fn is_base(&self) -> bool {
        self.n == 0
    }

    pub fn is_valid(&self) -> bool {
        if !is_prime(self.p) || self.branch > 1 {
            return false;
        }
        if self.n == 0 {
            return self.branch == 0 && self.residue.is_zero();
        }
        let p = BigUint::from(self.p);
        let modulus = p.pow(self.n);
        if self.residue >= modulus {
            return false;
        }
        self.branch == 0 || (&self.residue % &p).is_zero()
    }

    /// All valid keys at distance `n`, in increasing order.
    pub fn sphere(p: u64, n: u32) -> Vec<VertexKey> {
        if n == 0 {
            return vec![Self::base(p)];
        }
        let modulus = BigUint::from(p).pow(n);
        let mut keys = Vec::new();
        let mut r = BigUint::zero();
        while r < modulus {
            keys.push(VertexKey {
                p,
                n,
                branch: 0,
                residue: r.clone(),
            });
            r += 1u32;
        }
        let mut r = BigUint::zero();
        while r < modulus {
            keys.push(VertexKey {
                p,
                n,
                branch: 1,
                residue: r.clone(),
            });
            r += p;
        }
        keys
    }
}

impl fmt::Display for VertexKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.p, self.n, self.branch, self.residue
        )
    }
}

/// Serialized as the tuple `[p, n, branch, "residue"]`; residues overflow 64 bits.
impl Serialize for VertexKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.p, self.n, self.branch, self.residue.to_string()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (p, n, branch, residue) = <(u64, u32, u8, String)>::deserialize(d)?;
        let residue = residue
            .parse::<BigUint>()
            .map_err(|_| serde::de::Error::custom(format!("bad residue {residue:?}")))?;
        let key = VertexKey {
            p,
            n,
            branch,
            residue,
        };
        if !key.is_valid() {
            return Err(serde::de::Error::custom(format!(
                "invalid vertex key {key}"
            )));
        }
        Ok(key)
    }
}

fn min_valuation(g: &ProjectiveMatrix, p: u64) -> u32 {
    g.entries()
        .iter()
        .filter(|e| !e.is_zero())
        .map(|e| valuation_unchecked(e, p))
        .min()
        .expect("nonsingular matrix has a nonzero entry")
}

/// Distance from the base vertex to its image under `g`:
/// `v_p(det g) − 2·min v_p(entries)`.
pub fn displacement(g: &ProjectiveMatrix, ctx: PrimeContext) -> u32 {
    let p = ctx.p();
    valuation_unchecked(&g.det(), p) - 2 * min_valuation(g, p)
}

/// Coordinates of `g · base` in the tree at `ctx`.
pub fn vertex_key(g: &ProjectiveMatrix, ctx: PrimeContext) -> VertexKey {
    let p = ctx.p();
    let n = displacement(g, ctx);
    if n == 0 {
        return VertexKey::base(p);
    }
    let big_p = BigInt::from(p);
    let shift = big_p.pow(min_valuation(g, p));
    let local: Vec<BigInt> = g.entries().iter().map(|e| e / &shift).collect();
    let unit = |e: &BigInt| !e.is_multiple_of(&big_p);
    // Any column with a unit entry is primitive and spans L modulo p^n.
    let (x, y) = if unit(&local[0]) || unit(&local[2]) {
        (&local[0], &local[2])
    } else {
        (&local[1], &local[3])
    };
    let modulus = big_p.pow(n);
    let (branch, num, den) = if unit(y) { (0, x, y) } else { (1, y, x) };
    let inv = den
        .mod_floor(&modulus)
        .modinv(&modulus)
        .expect("unit residue is invertible");
    let residue = (num * inv)
        .mod_floor(&modulus)
        .to_biguint()
        .expect("reduced residue is nonnegative");
    VertexKey {
        p,
        n,
        branch,
        residue,
    }
}

fn check_two_three_smooth(g: &ProjectiveMatrix) -> Result<(), TreeError> {
    let det = g.det();
    match prime_factors(&det).into_iter().find(|&q| q != 2 && q != 3) {
        Some(prime) => Err(TreeError::OutsideDomain { det, prime }),
        None => Ok(()),
    }
}

/// Whether `g ∈ PGL₂(ℤ[1/6])` fixes the base vertex of both `T₃` and `T₄`,
/// i.e. lies in PGL₂(ℤ).
pub fn is_vertex_stabilizer(g: &ProjectiveMatrix) -> Result<bool, TreeError> {
    check_two_three_smooth(g)?;
    Ok(g.det().magnitude().is_one())
}

/// Images of the base vertices of the trees at 2 and 3.
pub fn vertex_pair(g: &ProjectiveMatrix) -> Result<(VertexKey, VertexKey), TreeError> {
    check_two_three_smooth(g)?;
    Ok((
        vertex_key(g, PrimeContext::TWO),
        vertex_key(g, PrimeContext::THREE),
    ))
}

/// Vertex keys at each prime of `primes`; the search index for groups
/// whose determinants are supported on `primes`.
pub fn vertex_tuple(g: &ProjectiveMatrix, primes: &[PrimeContext]) -> Vec<VertexKey> {
    primes.iter().map(|&ctx| vertex_key(g, ctx)).collect()
}
