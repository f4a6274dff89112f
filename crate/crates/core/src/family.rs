//! The one-parameter family of representations of ⟨a, b | [a,b]² = 1⟩ into
//! PGL₂(ℚ), sending `a ↦ [[t,0],[0,1]]` and `b ↦ [[1+t², 2],[t, 1]]`.
//!
//! The commutator of the two images always has trace zero, so its square is
//! scalar and the relator holds projectively. At `t = 9` the family gives the
//! Long–Reid generators `[[9,0],[0,1]]` and `[[82,2],[9,1]]`, whose
//! determinant-one forms are `(1/3)·[[9,0],[0,1]]` and `(1/8)·[[82,2],[9,1]]`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::{canonicalize, BigRational, ExactError, ProjectiveMatrix};
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("parameter t = {0} is degenerate (t must avoid 0, 1 and -1)")]
    DegenerateParameter(BigRational),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Images of `a` and `b`, with their inverses cached for word evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generators {
    images: [ProjectiveMatrix; 4],
}

impl Generators {
    pub fn new(gen_a: ProjectiveMatrix, gen_b: ProjectiveMatrix) -> Self {
        let a_inv = gen_a.inverse();
        let b_inv = gen_b.inverse();
        Self {
            images: [gen_a, a_inv, gen_b, b_inv],
        }
    }

    pub fn gen_a(&self) -> &ProjectiveMatrix {
        &self.images[0]
    }

    pub fn gen_b(&self) -> &ProjectiveMatrix {
        &self.images[2]
    }

    pub fn image(&self, letter: Letter) -> &ProjectiveMatrix {
        &self.images[letter as usize]
    }

    /// Left-to-right product of the letter images; the empty word gives the identity.
    pub fn evaluate(&self, word: &Word) -> ProjectiveMatrix {
        word.letters()
            .iter()
            .fold(ProjectiveMatrix::identity(), |acc, &l| {
                acc.mul(self.image(l))
            })
    }

    /// Primes dividing either generator determinant. Every element of the
    /// generated group has a determinant supported on these primes.
    pub fn determinant_primes(&self) -> Vec<u64> {
        let mut primes = crate::exact::prime_factors(&self.gen_a().det());
        primes.extend(crate::exact::prime_factors(&self.gen_b().det()));
        primes.sort_unstable();
        primes.dedup();
        primes
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepFamily {
    t: BigRational,
    generators: Generators,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatorCheck {
    pub commutator: ProjectiveMatrix,
    pub trace_zero: bool,
    pub square_trivial: bool,
}

impl RepFamily {
    pub fn new(t: BigRational) -> Result<Self, FamilyError> {
        if t.is_zero() || t.abs().is_one() {
            return Err(FamilyError::DegenerateParameter(t));
        }
        let zero = BigRational::zero;
        let one = BigRational::one;
        let gen_a = canonicalize(&[[t.clone(), zero()], [zero(), one()]])?;
        let gen_b = canonicalize(&[
            [one() + &t * &t, BigRational::from_integer(2.into())],
            [t.clone(), one()],
        ])?;
        Ok(Self {
            t,
            generators: Generators::new(gen_a, gen_b),
        })
    }

    pub fn long_reid() -> Self {
        Self::new(BigRational::from_integer(9.into())).expect("t = 9 is a valid parameter")
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }

    pub fn generators(&self) -> &Generators {
        &self.generators
    }

    pub fn gen_a(&self) -> &ProjectiveMatrix {
        self.generators.gen_a()
    }

    pub fn gen_b(&self) -> &ProjectiveMatrix {
        self.generators.gen_b()
    }

    /// Whether `gen_b` satisfies `2·b11·b22 = (t + 1/t)·b12·b21`.
    pub fn check_constraint(&self) -> bool {
        constraint_holds(&self.t, self.gen_b())
    }

    /// Checks that `[a,b] = a·b·a⁻¹·b⁻¹` has trace zero and a scalar square.
    pub fn check_relator(&self) -> RelatorCheck {
        let a = self.gen_a();
        let b = self.gen_b();
        let commutator = a.mul(b).mul(&a.inverse()).mul(&b.inverse());
        RelatorCheck {
            trace_zero: commutator.trace().is_zero(),
            square_trivial: commutator.mul(&commutator).is_identity(),
            commutator,
        }
    }

    pub fn evaluate_word(&self, word: &Word) -> ProjectiveMatrix {
        self.generators.evaluate(word)
    }
}

pub fn make_family(t: BigRational) -> Result<RepFamily, FamilyError> {
    RepFamily::new(t)
}

/// The constraint `2·b11·b22 = (t + 1/t)·b12·b21` on an arbitrary `b`.
/// It is homogeneous of degree two, so it holds for a whole scalar class or for none of it.
pub fn constraint_holds(t: &BigRational, b: &ProjectiveMatrix) -> bool {
    let lhs = BigRational::from_integer(BigInt::from(2) * b.m11() * b.m22());
    let rhs = (t + t.recip()) * BigRational::from_integer(b.m12() * b.m21());
    lhs == rhs
}

pub fn long_reid_generators() -> (ProjectiveMatrix, ProjectiveMatrix) {
    let fam = RepFamily::long_reid();
    (fam.gen_a().clone(), fam.gen_b().clone())
}

/// `g / sqrt(det g)` when the canonical determinant is a positive perfect square,
/// which is the determinant-one representative in PSL₂(ℚ).
pub fn unimodular_form(g: &ProjectiveMatrix) -> Option<[[BigRational; 2]; 2]> {
    let det = g.det();
    if !det.is_positive() {
        return None;
    }
    let root = det.sqrt();
    if &root * &root != det {
        return None;
    }
    let cell = |e: &BigInt| BigRational::new(e.clone(), root.clone());
    Some([
        [cell(g.m11()), cell(g.m12())],
        [cell(g.m21()), cell(g.m22())],
    ])
}
