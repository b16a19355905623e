//! Exact coefficient fields: the rationals, the Eisenstein field Q(zeta_3),
//! and prime fields F_q with q = 1 (mod 3), together with the specialization
//! homomorphisms between them.
//!
//! All geometry in this crate is generic over [`Field`]. The trait is
//! deliberately *not* built on `num_traits::Zero`/`One`: the prime field
//! carries its modulus at runtime, so neutral elements can only be produced
//! from an existing element of the same field (`zero_like`, `one_like`).

use std::fmt;
use std::hash::Hash;

use thiserror::Error;

mod eis;
mod fp;
mod intutil;
mod scalar;

pub use eis::Eis;
pub use fp::Fp;
pub use scalar::{parse_scalar, scalar_arith, ArithOp, Scalar, SpecializationMap};

pub(crate) use intutil::{divisors_bounded, perfect_cube_root, perfect_square_root};

/// Errors raised by scalar arithmetic and field construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands lie in different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("modulus {0} is not a prime with q = 1 (mod 3)")]
    BadModulus(u64),
    #[error("denominator divisible by the specialization prime {0}")]
    DenominatorDivisibleByQ(u64),
    #[error("element {0} is not in the domain of the specialization map")]
    NotSpecializable(String),
    #[error("cannot parse scalar from {0:?}")]
    Parse(String),
}

/// An exact field with decidable equality and canonical representatives.
///
/// `Ord` and `Hash` agree with `Eq` and are used to key deterministic
/// collections (Pluecker sets, divisor ledgers); the order itself carries no
/// algebraic meaning.
pub trait Field:
    Clone + PartialEq + Eq + Hash + PartialOrd + Ord + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// The zero of the field `self` belongs to.
    fn zero_like(&self) -> Self;

    /// The one of the field `self` belongs to.
    fn one_like(&self) -> Self;

    fn is_zero(&self) -> bool;

    fn is_one(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;

    fn sub(&self, rhs: &Self) -> Self;

    fn mul(&self, rhs: &Self) -> Self;

    fn neg(&self) -> Self;

    /// Multiplicative inverse; errors exactly on zero.
    fn inv(&self) -> Result<Self, FieldError>;

    fn div(&self, rhs: &Self) -> Result<Self, FieldError> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Embeds an integer into the field `self` belongs to.
    fn embed_int(&self, n: i64) -> Self;

    /// A primitive cube root of unity, when the field contains one.
    ///
    /// The choice is canonical per field so that labellings derived from it
    /// are reproducible.
    fn omega(&self) -> Option<Self>;

    /// Whether the element lies in the prime subfield (Q inside Q(w);
    /// trivially true in F_q). Used to prefer "plain" designated roots.
    fn in_prime_subfield(&self) -> bool;

    /// All `y` in the field with `y^3 = self` (0, 1, or 3 elements).
    fn cube_roots(&self) -> Vec<Self>;

    /// All `y` with `y^2 = self` (0, 1, or 2 elements).
    fn square_roots(&self) -> Vec<Self>;

    /// Every element of the field, when the field is finite.
    fn enumerate(&self) -> Option<Vec<Self>>;

    /// Textual encoding per the serialization grammar of this crate.
    fn encode(&self) -> String;

    /// Short human-readable name of the field ("Q(w)", "F_13", ...).
    fn field_name(&self) -> String;

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_matches_repeated_mul() {
        let x = Eis::from_int(3);
        let mut acc = x.one_like();
        for e in 0..8u64 {
            assert_eq!(x.pow(e), acc);
            acc = acc.mul(&x);
        }
    }
}
