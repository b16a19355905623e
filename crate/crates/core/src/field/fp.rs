//! Prime fields F_q with q = 1 (mod 3), the targets of the specialization
//! maps used for exhaustive finite-field cross-checks.
//!
//! The modulus is a runtime value carried by every element. Mixing elements
//! of different moduli in the total arithmetic ops is a programming error and
//! panics; the fallible [`Scalar`](super::Scalar) layer reports it as a field
//! mismatch instead.

use std::fmt;

use super::intutil::is_prime_u64;
use super::{Field, FieldError};

/// Residue `r` modulo a prime `q = 1 (mod 3)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    r: u64,
    q: u64,
}

impl Fp {
    /// Checks the modulus invariant: prime and congruent to 1 mod 3.
    pub fn check_modulus(q: u64) -> Result<(), FieldError> {
        if q % 3 == 1 && is_prime_u64(q) {
            Ok(())
        } else {
            Err(FieldError::BadModulus(q))
        }
    }

    pub fn new(value: i128, q: u64) -> Result<Self, FieldError> {
        Self::check_modulus(q)?;
        Ok(Self::reduce(value, q))
    }

    /// Reduces `value` mod `q` without re-validating the modulus.
    pub(crate) fn reduce(value: i128, q: u64) -> Self {
        let m = q as i128;
        let r = ((value % m) + m) % m;
        Fp { r: r as u64, q }
    }

    pub fn residue(&self) -> u64 {
        self.r
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    fn assert_same_field(&self, rhs: &Self) {
        assert_eq!(
            self.q, rhs.q,
            "prime-field arithmetic across moduli ({} vs {})",
            self.q, rhs.q
        );
    }

    fn powmod(base: u64, mut e: u64, q: u64) -> u64 {
        let mut acc = 1u128;
        let mut b = base as u128 % q as u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % q as u128;
            }
            b = b * b % q as u128;
            e >>= 1;
        }
        acc as u64
    }

    /// `self^e` for a raw exponent (avoids the generic double-and-add).
    pub fn pow_u64(&self, e: u64) -> Self {
        Fp {
            r: Self::powmod(self.r, e, self.q),
            q: self.q,
        }
    }

    /// Smallest cubic non-residue, used to seed cube-root extraction.
    fn cubic_nonresidue(q: u64) -> u64 {
        let e = (q - 1) / 3;
        (2..q)
            .find(|&u| Self::powmod(u, e, q) != 1)
            .expect("F_q with q = 1 mod 3 has a cubic non-residue")
    }
}

impl Field for Fp {
    fn zero_like(&self) -> Self {
        Fp { r: 0, q: self.q }
    }

    fn one_like(&self) -> Self {
        Fp { r: 1, q: self.q }
    }

    fn is_zero(&self) -> bool {
        self.r == 0
    }

    fn is_one(&self) -> bool {
        self.r == 1
    }

    fn add(&self, rhs: &Self) -> Self {
        self.assert_same_field(rhs);
        let mut r = self.r + rhs.r;
        if r >= self.q {
            r -= self.q;
        }
        Fp { r, q: self.q }
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.assert_same_field(rhs);
        let r = if self.r >= rhs.r {
            self.r - rhs.r
        } else {
            self.r + self.q - rhs.r
        };
        Fp { r, q: self.q }
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.assert_same_field(rhs);
        Fp {
            r: (self.r as u128 * rhs.r as u128 % self.q as u128) as u64,
            q: self.q,
        }
    }

    fn neg(&self) -> Self {
        Fp {
            r: if self.r == 0 { 0 } else { self.q - self.r },
            q: self.q,
        }
    }

    fn inv(&self) -> Result<Self, FieldError> {
        if self.r == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow_u64(self.q - 2))
    }

    fn embed_int(&self, n: i64) -> Self {
        Self::reduce(n as i128, self.q)
    }

    fn omega(&self) -> Option<Self> {
        let q = self.q;
        let e = (q - 1) / 3;
        let w = (2..q)
            .map(|c| Self::powmod(c, e, q))
            .find(|&w| w != 1)
            .expect("q = 1 mod 3 guarantees an order-3 element");
        Some(Fp { r: w, q })
    }

    fn in_prime_subfield(&self) -> bool {
        true
    }

    fn cube_roots(&self) -> Vec<Self> {
        let q = self.q;
        if self.r == 0 {
            return vec![self.zero_like()];
        }
        let e = (q - 1) / 3;
        if Self::powmod(self.r, e, q) != 1 {
            return vec![];
        }
        // Adleman-Manders-Miller: split q - 1 = 3^s * m with 3 not dividing m.
        let mut s = 0u32;
        let mut m = q - 1;
        while m % 3 == 0 {
            m /= 3;
            s += 1;
        }
        let y0 = if m == 1 {
            1u64
        } else {
            // alpha = 3^{-1} mod m, so (x^alpha)^3 = x * (x^m)^k.
            let mut alpha = 0u64;
            for cand in 0..m {
                if cand as u128 * 3 % m as u128 == 1 {
                    alpha = cand;
                    break;
                }
            }
            Self::powmod(self.r, alpha, q)
        };
        // h = y0^3 / x lies in the 3-Sylow subgroup generated by g.
        let x_inv = Self::powmod(self.r, q - 2, q);
        let y0_cubed = Self::powmod(y0, 3, q);
        let h = (y0_cubed as u128 * x_inv as u128 % q as u128) as u64;
        let g = Self::powmod(Self::cubic_nonresidue(q), m, q);
        let g_inv = Self::powmod(g, q - 2, q);
        let gamma = Self::powmod(g, 3u64.pow(s - 1), q);
        // Base-3 discrete log of h in the Sylow subgroup.
        let mut exp = 0u64;
        let mut pow3 = 1u64;
        let mut shifted = h;
        for i in 0..s {
            let t = Self::powmod(shifted, 3u64.pow(s - 1 - i), q);
            let digit = (0..3u64)
                .find(|&d| Self::powmod(gamma, d, q) == t)
                .expect("element of order-3^s subgroup");
            exp += digit * pow3;
            shifted =
                (shifted as u128 * Self::powmod(g_inv, digit * pow3, q) as u128 % q as u128) as u64;
            pow3 *= 3;
        }
        debug_assert_eq!(exp % 3, 0, "cube in cyclic 3-group has exponent 0 mod 3");
        let z = Self::powmod(g_inv, exp / 3, q);
        let y = (y0 as u128 * z as u128 % q as u128) as u64;
        let omega = Field::omega(self).unwrap().r;
        let y1 = (y as u128 * omega as u128 % q as u128) as u64;
        let y2 = (y1 as u128 * omega as u128 % q as u128) as u64;
        let mut roots = vec![
            Fp { r: y, q },
            Fp { r: y1, q },
            Fp { r: y2, q },
        ];
        roots.sort();
        debug_assert!(roots
            .iter()
            .all(|r| r.pow_u64(3).r == self.r));
        roots
    }

    fn square_roots(&self) -> Vec<Self> {
        let q = self.q;
        if self.r == 0 {
            return vec![self.zero_like()];
        }
        if Self::powmod(self.r, (q - 1) / 2, q) != 1 {
            return vec![];
        }
        let root = if q % 4 == 3 {
            Self::powmod(self.r, (q + 1) / 4, q)
        } else {
            // Tonelli-Shanks.
            let mut s = 0u32;
            let mut m = q - 1;
            while m % 2 == 0 {
                m /= 2;
                s += 1;
            }
            let z = (2..q)
                .find(|&z| Self::powmod(z, (q - 1) / 2, q) == q - 1)
                .expect("odd prime has a quadratic non-residue");
            let mut c = Self::powmod(z, m, q);
            let mut t = Self::powmod(self.r, m, q);
            let mut r = Self::powmod(self.r, (m + 1) / 2, q);
            let mut e = s;
            while t != 1 {
                let mut i = 0u32;
                let mut t2 = t;
                while t2 != 1 {
                    t2 = (t2 as u128 * t2 as u128 % q as u128) as u64;
                    i += 1;
                }
                let b = Self::powmod(c, 1 << (e - i - 1), q);
                r = (r as u128 * b as u128 % q as u128) as u64;
                c = (b as u128 * b as u128 % q as u128) as u64;
                t = (t as u128 * c as u128 % q as u128) as u64;
                e = i;
            }
            r
        };
        let mut out = vec![Fp { r: root, q }, Fp { r: root, q }.neg()];
        out.sort();
        out.dedup();
        out
    }

    fn enumerate(&self) -> Option<Vec<Self>> {
        if self.q > 1 << 20 {
            return None;
        }
        Some((0..self.q).map(|r| Fp { r, q: self.q }).collect())
    }

    fn encode(&self) -> String {
        format!("{} mod {}", self.r, self.q)
    }

    fn field_name(&self) -> String {
        format!("F_{}", self.q)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.r)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.r, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(r: i128, q: u64) -> Fp {
        Fp::new(r, q).unwrap()
    }

    #[test]
    fn modulus_validation() {
        assert!(Fp::check_modulus(7).is_ok());
        assert!(Fp::check_modulus(13).is_ok());
        assert!(Fp::check_modulus(5).is_err());
        assert!(Fp::check_modulus(9).is_err());
        assert!(Fp::check_modulus(11).is_err());
    }

    #[test]
    fn seven_times_two_is_one_mod_13() {
        assert!(fp(7, 13).mul(&fp(2, 13)).is_one());
    }

    #[test]
    fn omega_mod_13_is_3() {
        let w = fp(0, 13).omega().unwrap();
        assert_eq!(w.residue(), 3);
        assert!(w.pow_u64(3).is_one());
    }

    #[test]
    fn cube_roots_match_exhaustion() {
        for q in [7u64, 13, 19, 31, 37, 43, 61, 67, 73, 79, 97, 103, 109, 127] {
            for x in 0..q {
                let elem = fp(x as i128, q);
                let mut expected: Vec<Fp> = (0..q)
                    .map(|y| fp(y as i128, q))
                    .filter(|y| y.pow_u64(3) == elem)
                    .collect();
                expected.sort();
                assert_eq!(elem.cube_roots(), expected, "x={} q={}", x, q);
            }
        }
    }

    #[test]
    fn cube_roots_of_8_mod_13() {
        let roots = fp(8, 13).cube_roots();
        let rs: Vec<u64> = roots.iter().map(|r| r.residue()).collect();
        assert_eq!(rs, vec![2, 5, 6]);
    }

    #[test]
    fn square_roots_match_exhaustion() {
        for q in [7u64, 13, 61, 73] {
            for x in 0..q {
                let elem = fp(x as i128, q);
                let mut expected: Vec<Fp> = (0..q)
                    .map(|y| fp(y as i128, q))
                    .filter(|y| y.mul(y) == elem)
                    .collect();
                expected.sort();
                assert_eq!(elem.square_roots(), expected, "x={} q={}", x, q);
            }
        }
    }
}
