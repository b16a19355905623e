//! The Eisenstein field Q(w), w a primitive cube root of unity.
//!
//! Elements are stored as `a + b*w` with rational `a`, `b` and the relation
//! `w^2 = -1 - w`. This is a rank-2 module over Q; no general number field
//! tower is implemented. Cube and square roots are found by reducing to
//! rational root searches on the trace: if `y^3 = x` then `s = Tr(y)`
//! satisfies `s^3 - 3*N(y)*s - Tr(x) = 0` with `N(y)^3 = N(x)`, so `s` is a
//! rational root of an explicit integer cubic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use super::intutil::{divisors_bounded, perfect_cube_root, perfect_square_root};
use super::{Field, FieldError};

/// An element `a + b*w` of Q(w), `w^2 + w + 1 = 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Eis {
    a: BigRational,
    b: BigRational,
}

impl Eis {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Eis { a, b }
    }

    pub fn from_rat(a: BigRational) -> Self {
        Eis {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Eis::from_rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Eis::from_rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The generator w.
    pub fn zeta() -> Self {
        Eis {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }

    pub fn rat_part(&self) -> &BigRational {
        &self.a
    }

    pub fn zeta_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// As a rational number, when the w-part vanishes.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.a.clone())
    }

    /// Galois conjugate w -> w^2, i.e. `a + b*w -> (a-b) - b*w`.
    pub fn conj(&self) -> Self {
        Eis {
            a: &self.a - &self.b,
            b: -self.b.clone(),
        }
    }

    /// Field norm `x * conj(x) = a^2 - a*b + b^2`, a nonnegative rational.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    /// Field trace `x + conj(x) = 2a - b`.
    pub fn trace(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(2)) * &self.a - &self.b
    }
}

fn rational_cbrt(r: &BigRational) -> Option<BigRational> {
    let n = perfect_cube_root(r.numer())?;
    let d = perfect_cube_root(r.denom())?;
    Some(BigRational::new(n, d))
}

fn rational_sqrt_nonneg(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = perfect_square_root(r.numer())?;
    let d = perfect_square_root(r.denom())?;
    Some(BigRational::new(n, d))
}

/// Rational roots of `T^3 + p*T + q` by the divisor test on the cleared
/// integer form.
fn rational_roots_depressed_cubic(p: &BigRational, q: &BigRational) -> Vec<BigRational> {
    let eval = |s: &BigRational| s * s * s + p * s + q;
    let mut roots: Vec<BigRational> = Vec::new();
    let mut push = |s: BigRational, roots: &mut Vec<BigRational>| {
        if eval(&s).is_zero() && !roots.contains(&s) {
            roots.push(s);
        }
    };
    if q.is_zero() {
        push(BigRational::zero(), &mut roots);
        // Remaining factor T^2 + p.
        if let Some(r) = rational_sqrt_nonneg(&-p.clone()) {
            push(r.clone(), &mut roots);
            push(-r, &mut roots);
        }
        return roots;
    }
    let lcm_den = p.denom().lcm(q.denom());
    // L*T^3 + (p*L)*T + q*L with integer coefficients.
    let a3 = lcm_den.clone();
    let a0 = (q * BigRational::from_integer(lcm_den)).to_integer();
    let num_divs = divisors_bounded(a0.magnitude(), 4096);
    let den_divs = divisors_bounded(a3.magnitude(), 4096);
    for n in &num_divs {
        for d in &den_divs {
            let cand = BigRational::new(BigInt::from(n.clone()), BigInt::from(d.clone()));
            push(cand.clone(), &mut roots);
            push(-cand, &mut roots);
            if roots.len() == 3 {
                return roots;
            }
        }
    }
    roots
}

impl Field for Eis {
    fn zero_like(&self) -> Self {
        Eis::from_rat(BigRational::zero())
    }

    fn one_like(&self) -> Self {
        Eis::from_rat(BigRational::one())
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        Eis {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Eis {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        // (a+bw)(c+dw) = ac - bd + (ad + bc - bd) w, using w^2 = -1-w.
        let ac = &self.a * &rhs.a;
        let bd = &self.b * &rhs.b;
        let ad_bc = &self.a * &rhs.b + &self.b * &rhs.a;
        Eis {
            a: ac - &bd,
            b: ad_bc - bd,
        }
    }

    fn neg(&self) -> Self {
        Eis {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }

    fn inv(&self) -> Result<Self, FieldError> {
        if Field::is_zero(self) {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conj();
        Ok(Eis {
            a: c.a / &n,
            b: c.b / &n,
        })
    }

    fn embed_int(&self, n: i64) -> Self {
        Eis::from_int(n)
    }

    fn omega(&self) -> Option<Self> {
        Some(Eis::zeta())
    }

    fn in_prime_subfield(&self) -> bool {
        self.b.is_zero()
    }

    fn cube_roots(&self) -> Vec<Self> {
        if Field::is_zero(self) {
            return vec![self.zero_like()];
        }
        let norm_root = match rational_cbrt(&self.norm()) {
            Some(c) => c,
            None => return vec![],
        };
        // Tr(y) is a rational root of T^3 - 3c T - Tr(x).
        let three = BigRational::from_integer(BigInt::from(3));
        let p = -(&three * &norm_root);
        let q = -self.trace();
        for s in rational_roots_depressed_cubic(&p, &q) {
            // Recover y = a' + b'w from trace s and norm c:
            // s^2 + 3 b'^2 = 4c, a' = (s + b')/2.
            let disc = (BigRational::from_integer(BigInt::from(4)) * &norm_root - &s * &s) / &three;
            let Some(b_mag) = rational_sqrt_nonneg(&disc) else {
                continue;
            };
            for b in [b_mag.clone(), -b_mag] {
                let a = (&s + &b) / BigRational::from_integer(BigInt::from(2));
                let y = Eis { a, b: b.clone() };
                if y.mul(&y).mul(&y) == *self {
                    let w = Eis::zeta();
                    let w2 = w.mul(&w);
                    return vec![y.clone(), y.mul(&w), y.mul(&w2)];
                }
            }
        }
        vec![]
    }

    fn square_roots(&self) -> Vec<Self> {
        if Field::is_zero(self) {
            return vec![self.zero_like()];
        }
        let norm_root = match rational_sqrt_nonneg(&self.norm()) {
            Some(c) => c,
            None => return vec![],
        };
        let two = BigRational::from_integer(BigInt::from(2));
        let three = BigRational::from_integer(BigInt::from(3));
        let four = BigRational::from_integer(BigInt::from(4));
        let mut out: Vec<Eis> = Vec::new();
        // Tr(y)^2 = Tr(x) + 2*N(y).
        let s_sq = self.trace() + &two * &norm_root;
        let Some(s_mag) = rational_sqrt_nonneg(&s_sq) else {
            return vec![];
        };
        for s in [s_mag.clone(), -s_mag] {
            let disc = (&four * &norm_root - &s * &s) / &three;
            let Some(b_mag) = rational_sqrt_nonneg(&disc) else {
                continue;
            };
            for b in [b_mag.clone(), -b_mag] {
                let a = (&s + &b) / &two;
                let y = Eis { a, b: b.clone() };
                if y.mul(&y) == *self && !out.contains(&y) {
                    out.push(y);
                }
            }
        }
        out.sort();
        out
    }

    fn enumerate(&self) -> Option<Vec<Self>> {
        None
    }

    fn encode(&self) -> String {
        let b = &self.b;
        if b.is_negative() {
            format!("{}-{}*w", self.a, -b.clone())
        } else {
            format!("{}+{}*w", self.a, b)
        }
    }

    fn field_name(&self) -> String {
        "Q(w)".to_string()
    }
}

impl fmt::Display for Eis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}", self.encode())
        }
    }
}

impl fmt::Debug for Eis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Eis({})", self.encode())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta() -> Eis {
        Eis::zeta()
    }

    #[test]
    fn zeta_relation() {
        // w^2 + w + 1 = 0
        let w = zeta();
        let lhs = w.mul(&w).add(&w).add(&w.one_like());
        assert!(Field::is_zero(&lhs));
        // w * w^2 = 1
        assert!(w.mul(&w.mul(&w)).is_one());
    }

    #[test]
    fn one_minus_zeta_sq_over_one_minus_zeta() {
        // (1 - w^2)/(1 - w) = 1 + w = -w^2
        let w = zeta();
        let one = w.one_like();
        let num = one.sub(&w.mul(&w));
        let den = one.sub(&w);
        let q = num.div(&den).unwrap();
        assert_eq!(q, one.add(&w));
        assert_eq!(q, w.mul(&w).neg());
    }

    #[test]
    fn cube_roots_of_eight() {
        let roots = Eis::from_int(8).cube_roots();
        assert_eq!(roots.len(), 3);
        let two = Eis::from_int(2);
        let w = zeta();
        assert!(roots.contains(&two));
        assert!(roots.contains(&two.mul(&w)));
        assert!(roots.contains(&two.mul(&w.mul(&w))));
        for r in &roots {
            assert_eq!(r.mul(r).mul(r), Eis::from_int(8));
        }
    }

    #[test]
    fn cube_roots_of_zeta_do_not_exist() {
        assert!(zeta().cube_roots().is_empty());
        assert!(Eis::from_int(2).cube_roots().is_empty());
    }

    #[test]
    fn cube_roots_of_rational_cube_with_denominator() {
        let x = Eis::from_frac(-27, 8);
        let roots = x.cube_roots();
        assert_eq!(roots.len(), 3);
        assert!(roots.contains(&Eis::from_frac(-3, 2)));
    }

    #[test]
    fn cube_roots_of_nonrational_cube() {
        // (1 + 2w)^3 = -3 * (1 + 2w) * ... compute directly and invert.
        let y = Eis::new(
            BigRational::from_integer(BigInt::from(1)),
            BigRational::from_integer(BigInt::from(2)),
        );
        let x = y.mul(&y).mul(&y);
        let roots = x.cube_roots();
        assert_eq!(roots.len(), 3);
        assert!(roots.contains(&y));
    }

    #[test]
    fn square_roots_of_minus_three() {
        // -3 = (1 + 2w)^2
        let roots = Eis::from_int(-3).square_roots();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert_eq!(r.mul(r), Eis::from_int(-3));
        }
        assert!(Eis::from_int(2).square_roots().is_empty());
        assert_eq!(Eis::from_int(9).square_roots().len(), 2);
    }

    #[test]
    fn encoding_is_stable() {
        let x = Eis::new(
            BigRational::new(BigInt::from(-1), BigInt::from(2)),
            BigRational::from_integer(BigInt::from(3)),
        );
        assert_eq!(x.encode(), "-1/2+3*w");
        assert_eq!(Eis::from_int(2).encode(), "2+0*w");
        assert_eq!(zeta().neg().encode(), "0-1*w");
    }
}
