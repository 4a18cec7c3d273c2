//! Exact scalar arithmetic.
//!
//! Every coefficient ring used by the Lie algebra engine implements [`Ring`]:
//! the ring value is a lightweight context (modulus, defining polynomial) and
//! elements are plain values manipulated through it. Contexts are immutable and
//! cheap to clone, so algebras can be shared read-only across worker threads.

pub mod bigint_serde;
mod ext;
mod hnf;
mod integer;
mod linalg;
mod numfield;
mod prime;
mod rational;

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use rand::Rng as RandRng;

pub use ext::{ExtElem, ExtField};
pub use hnf::{hnf, hnf_solve};
pub use integer::{Integers, Rationals};
pub use linalg::{kernel, Echelon};
pub use numfield::{discriminant, GaloisAction, NumberField, NumberFieldInteger};
pub use prime::{is_prime, mod_inv, mod_pow, primes_up_to, PrimeField};
pub use rational::{primitive_integer_vector, RankKernel, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large (must be below 2^32)")]
    ModulusTooLarge(u64),
    #[error("polynomial is reducible over F_{p} (root at {root})")]
    NotIrreducible { p: u64, root: u64 },
    #[error("unsupported extension degree {0} (expected 1, 2 or 3)")]
    InvalidDegree(usize),
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("prime {p} is not inert: defining polynomial has root {root} mod {p}")]
    NotInert { p: u64, root: u64 },
    #[error("prime {0} divides the discriminant")]
    Ramified(u64),
    #[error("no Galois automorphism of order {0} found among integral candidates")]
    NotGalois(usize),
    #[error("Galois action check failed: {0}")]
    BadGaloisAction(String),
}

/// A commutative ring with identity, given as a context object.
pub trait Ring: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Image of a rational integer under the canonical map `Z -> R`.
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

pub trait Field: Ring {
    /// `None` exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

pub trait FiniteField: Field {
    /// Number of elements.
    fn order(&self) -> u128;
    fn random<G: RandRng + ?Sized>(&self, rng: &mut G) -> Self::Elem;
}
