//! The serialization-level scalar: a tagged value in Q, Q(w), or F_q,
//! with the textual encoding used by scene files and the CLI, plus the
//! reduction homomorphism Q(w) -> F_q.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::{Eis, Field, FieldError, Fp};

/// Binary field operation selector for [`scalar_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A scalar in one of the three supported coefficient fields.
///
/// Encodings: rationals as `p/q` or `p`; Eisenstein elements as `a+b*w`
/// (the `*w` part always present, so the kind round-trips); prime-field
/// elements as `r mod q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Eisenstein(Eis),
    PrimeField(Fp),
}

impl Scalar {
    pub fn kind(&self) -> &'static str {
        match self {
            Scalar::Rational(_) => "rational",
            Scalar::Eisenstein(_) => "eisenstein",
            Scalar::PrimeField(_) => "prime-field",
        }
    }

    pub fn field_name(&self) -> String {
        match self {
            Scalar::Rational(_) => "Q".into(),
            Scalar::Eisenstein(x) => x.field_name(),
            Scalar::PrimeField(x) => x.field_name(),
        }
    }

    pub fn encode(&self) -> String {
        match self {
            Scalar::Rational(r) => r.to_string(),
            Scalar::Eisenstein(x) => x.encode(),
            Scalar::PrimeField(x) => x.encode(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Eisenstein(x) => Field::is_zero(x),
            Scalar::PrimeField(x) => Field::is_zero(x),
        }
    }

    /// All cube roots within the scalar's own field.
    pub fn cube_roots(&self) -> Vec<Scalar> {
        match self {
            Scalar::Rational(r) => rational_cube_root(r)
                .into_iter()
                .map(Scalar::Rational)
                .collect(),
            Scalar::Eisenstein(x) => x.cube_roots().into_iter().map(Scalar::Eisenstein).collect(),
            Scalar::PrimeField(x) => x.cube_roots().into_iter().map(Scalar::PrimeField).collect(),
        }
    }
}

fn rational_cube_root(r: &BigRational) -> Option<BigRational> {
    let n = super::perfect_cube_root(r.numer())?;
    let d = super::perfect_cube_root(r.denom())?;
    Some(BigRational::new(n, d))
}

/// Field arithmetic on tagged scalars. Both operands must carry the same
/// kind (and the same modulus for prime fields).
pub fn scalar_arith(x: &Scalar, y: &Scalar, op: ArithOp) -> Result<Scalar, FieldError> {
    match (x, y) {
        (Scalar::Rational(a), Scalar::Rational(b)) => {
            let r = match op {
                ArithOp::Add => a + b,
                ArithOp::Sub => a - b,
                ArithOp::Mul => a * b,
                ArithOp::Div => {
                    if b.is_zero() {
                        return Err(FieldError::DivisionByZero);
                    }
                    a / b
                }
            };
            Ok(Scalar::Rational(r))
        }
        (Scalar::Eisenstein(a), Scalar::Eisenstein(b)) => {
            let r = match op {
                ArithOp::Add => a.add(b),
                ArithOp::Sub => a.sub(b),
                ArithOp::Mul => a.mul(b),
                ArithOp::Div => a.div(b)?,
            };
            Ok(Scalar::Eisenstein(r))
        }
        (Scalar::PrimeField(a), Scalar::PrimeField(b)) => {
            if a.modulus() != b.modulus() {
                return Err(FieldError::FieldMismatch(
                    x.field_name(),
                    y.field_name(),
                ));
            }
            let r = match op {
                ArithOp::Add => a.add(b),
                ArithOp::Sub => a.sub(b),
                ArithOp::Mul => a.mul(b),
                ArithOp::Div => a.div(b)?,
            };
            Ok(Scalar::PrimeField(r))
        }
        _ => Err(FieldError::FieldMismatch(x.field_name(), y.field_name())),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    let bad = || FieldError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n = BigInt::from_str(s.trim()).map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Parses the textual scalar encoding; the kind is inferred from the syntax.
pub fn parse_scalar(s: &str) -> Result<Scalar, FieldError> {
    let s = s.trim();
    let bad = || FieldError::Parse(s.to_string());
    if let Some((r, q)) = s.split_once(" mod ") {
        let r: i128 = r.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        return Ok(Scalar::PrimeField(Fp::new(r, q)?));
    }
    if let Some(body) = s.strip_suffix("*w") {
        // Split `a+b` / `a-b` at the last sign not in leading position.
        let chars: Vec<(usize, char)> = body.char_indices().collect();
        let (i, sign) = chars
            .iter()
            .rev()
            .find(|(i, c)| *i > 0 && (*c == '+' || *c == '-') && !body[..*i].ends_with('/'))
            .copied()
            .ok_or_else(bad)?;
        let a = parse_rational(&body[..i])?;
        let b = parse_rational(&body[i + 1..])?;
        let b = if sign == '-' { -b } else { b };
        return Ok(Scalar::Eisenstein(Eis::new(a, b)));
    }
    Ok(Scalar::Rational(parse_rational(s)?))
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.encode())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_scalar(&s).map_err(serde::de::Error::custom)
    }
}

/// The reduction homomorphism Q(w) -> F_q determined by a prime
/// `q = 1 (mod 3)` and a chosen image `omega` of `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecializationMap {
    q: u64,
    omega_residue: u64,
}

impl SpecializationMap {
    /// Map with the canonical omega (smallest order-3 residue produced by
    /// the deterministic search in [`Fp::omega`]).
    pub fn new(q: u64) -> Result<Self, FieldError> {
        Fp::check_modulus(q)?;
        let omega = Fp::new(0, q)?.omega().expect("q = 1 mod 3");
        Ok(SpecializationMap {
            q,
            omega_residue: omega.residue(),
        })
    }

    /// Map with an explicit omega; it must satisfy omega^3 = 1, omega != 1.
    pub fn with_omega(q: u64, omega: u64) -> Result<Self, FieldError> {
        Fp::check_modulus(q)?;
        let w = Fp::new(omega as i128, q)?;
        if w.pow_u64(3).is_one() && !w.is_one() {
            Ok(SpecializationMap {
                q,
                omega_residue: omega % q,
            })
        } else {
            Err(FieldError::NotSpecializable(format!(
                "omega = {} has no order 3 mod {}",
                omega, q
            )))
        }
    }

    pub fn prime(&self) -> u64 {
        self.q
    }

    pub fn omega(&self) -> Fp {
        Fp::reduce(self.omega_residue as i128, self.q)
    }

    pub fn apply_rational(&self, r: &BigRational) -> Result<Fp, FieldError> {
        let q = BigInt::from(self.q);
        if (r.denom() % &q).is_zero() {
            return Err(FieldError::DenominatorDivisibleByQ(self.q));
        }
        let n = Fp::reduce(
            (r.numer() % &q).to_i128().expect("reduced numerator fits"),
            self.q,
        );
        let d = Fp::reduce(
            (r.denom() % &q).to_i128().expect("reduced denominator fits"),
            self.q,
        );
        n.div(&d)
    }

    /// `a + b*w  |->  a + b*omega`.
    pub fn apply(&self, x: &Eis) -> Result<Fp, FieldError> {
        let a = self.apply_rational(x.rat_part())?;
        let b = self.apply_rational(x.zeta_part())?;
        Ok(a.add(&b.mul(&self.omega())))
    }

    pub fn apply_scalar(&self, x: &Scalar) -> Result<Fp, FieldError> {
        match x {
            Scalar::Rational(r) => self.apply_rational(r),
            Scalar::Eisenstein(e) => self.apply(e),
            Scalar::PrimeField(f) if f.modulus() == self.q => Ok(*f),
            Scalar::PrimeField(_) => Err(FieldError::NotSpecializable(x.encode())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eis(s: &str) -> Scalar {
        parse_scalar(s).unwrap()
    }

    #[test]
    fn encoding_round_trips_bit_exact() {
        for s in [
            "0", "2", "-7", "3/4", "-1/2", "2+0*w", "-1/2+3*w", "0-1*w", "1/3-2/5*w",
            "7 mod 13", "0 mod 7",
        ] {
            let v = parse_scalar(s).unwrap();
            assert_eq!(v.encode(), s, "round trip of {s}");
        }
    }

    #[test]
    fn kinds_are_preserved() {
        assert_eq!(eis("2").kind(), "rational");
        assert_eq!(eis("2+0*w").kind(), "eisenstein");
        assert_eq!(eis("2 mod 13").kind(), "prime-field");
    }

    #[test]
    fn mismatched_fields_error() {
        let r = scalar_arith(&eis("2"), &eis("2+0*w"), ArithOp::Add);
        assert!(matches!(r, Err(FieldError::FieldMismatch(_, _))));
        let r = scalar_arith(&eis("2 mod 7"), &eis("2 mod 13"), ArithOp::Add);
        assert!(matches!(r, Err(FieldError::FieldMismatch(_, _))));
    }

    #[test]
    fn division_by_zero_errors() {
        let r = scalar_arith(&eis("1"), &eis("0"), ArithOp::Div);
        assert!(matches!(r, Err(FieldError::DivisionByZero)));
    }

    #[test]
    fn specialize_zeta_to_3_mod_13() {
        let m = SpecializationMap::new(13).unwrap();
        assert_eq!(m.omega().residue(), 3);
        let img = m.apply(&Eis::zeta()).unwrap();
        assert_eq!(img.residue(), 3);
    }

    #[test]
    fn specialize_one_half_mod_13() {
        let m = SpecializationMap::new(13).unwrap();
        let img = m
            .apply(&Eis::from_frac(1, 2))
            .unwrap();
        assert_eq!(img.residue(), 7);
    }

    #[test]
    fn specialize_kills_zeta_polynomial() {
        // w^2 + w + 1 = 0 maps to 0 under any specialization.
        for q in [7u64, 13, 19, 31] {
            let m = SpecializationMap::new(q).unwrap();
            let w = Eis::zeta();
            let x = w.mul(&w).add(&w).add(&w.one_like());
            assert!(m.apply(&x).unwrap().is_zero());
        }
    }

    #[test]
    fn specialize_rejects_bad_denominator() {
        let m = SpecializationMap::new(13).unwrap();
        let r = m.apply(&Eis::from_frac(1, 13));
        assert!(matches!(r, Err(FieldError::DenominatorDivisibleByQ(13))));
    }

    #[test]
    fn rational_cube_roots() {
        assert_eq!(eis("8").cube_roots(), vec![eis("2")]);
        assert_eq!(eis("-27/8").cube_roots(), vec![eis("-3/2")]);
        assert!(eis("2").cube_roots().is_empty());
    }
}
