//! Integer helpers behind the exact scalar routines: perfect power tests,
//! factorization by trial division plus Pollard rho, and divisor enumeration
//! for rational root searches.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact cube root of a signed integer, if it is a perfect cube.
pub fn perfect_cube_root(n: &BigInt) -> Option<BigInt> {
    if n.is_zero() {
        return Some(BigInt::zero());
    }
    let mag = n.magnitude().nth_root(3);
    let candidate = BigInt::from(mag.clone());
    let candidate = if n.is_negative() { -candidate } else { candidate };
    if &(&candidate * &candidate * &candidate) == n {
        Some(candidate)
    } else {
        None
    }
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn perfect_square_root(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    if n.is_zero() {
        return Some(BigInt::zero());
    }
    let mag = n.magnitude().sqrt();
    let candidate = BigInt::from(mag);
    if &(&candidate * &candidate) == n {
        Some(candidate)
    } else {
        None
    }
}

fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    // m < 2^64 in all call sites, so the product fits in u128.
    a * b % m
}

fn powmod(mut a: u128, mut e: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a as u128, d as u128, n as u128);
        if x == 1 || x == (n - 1) as u128 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n as u128);
            if x == (n - 1) as u128 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    // Brent's variant; n is odd, composite, and not a prime power of 2.
    let mut c = 1u64;
    loop {
        let f = |x: u128| (mulmod(x, x, n as u128) + c as u128) % n as u128;
        let mut x = 2u128;
        let mut y = 2u128;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = if x > y { x - y } else { y - x };
            d = (diff as u64).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factorize_u64(mut n: u64, out: &mut Vec<(u64, u32)>) {
    let push = |p: u64, out: &mut Vec<(u64, u32)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    for p in [2u64, 3, 5, 7, 11, 13] {
        while n % p == 0 {
            push(p, out);
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            push(m, out);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
}

/// Prime factorization of a positive integer.
///
/// Trial division handles the small part; anything left beyond `u64` range is
/// split by trial division only (scene data never produces such inputs, but
/// the routine stays total by falling back to successive trial division).
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "factorize(0)");
    let mut n = n.clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let push = |p: BigUint, out: &mut Vec<(BigUint, u32)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    let mut d = 2u64;
    while BigUint::from(d) * BigUint::from(d) <= n && d < 1 << 20 {
        while (&n % d).is_zero() {
            push(BigUint::from(d), &mut out);
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n.is_one() {
        return out;
    }
    if let Some(small) = n.to_u64() {
        let mut fs = Vec::new();
        factorize_u64(small, &mut fs);
        for (p, e) in fs {
            for _ in 0..e {
                push(BigUint::from(p), &mut out);
            }
        }
        return out;
    }
    // Large leftover: keep dividing by increasing odd numbers. Slow but total.
    let mut d = BigUint::from((1u64 << 20) | 1);
    while &d * &d <= n {
        while (&n % &d).is_zero() {
            push(d.clone(), &mut out);
            n /= &d;
        }
        d += 2u32;
    }
    if !n.is_one() {
        push(n, &mut out);
    }
    out
}

/// All positive divisors of `n`, up to `cap` of them (deterministic order).
pub fn divisors_bounded(n: &BigUint, cap: usize) -> Vec<BigUint> {
    if n.is_zero() {
        return vec![];
    }
    let mut divs = vec![BigUint::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                if next.len() > cap {
                    break;
                }
                pk *= &p;
            }
        }
        divs = next;
        if divs.len() > cap {
            divs.truncate(cap);
            break;
        }
    }
    divs.sort();
    divs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root_detection() {
        assert_eq!(perfect_cube_root(&BigInt::from(27)), Some(BigInt::from(3)));
        assert_eq!(perfect_cube_root(&BigInt::from(-8)), Some(BigInt::from(-2)));
        assert_eq!(perfect_cube_root(&BigInt::from(9)), None);
    }

    #[test]
    fn factorize_small() {
        let fs = factorize(&BigUint::from(360u32));
        assert_eq!(
            fs,
            vec![
                (BigUint::from(2u32), 3),
                (BigUint::from(3u32), 2),
                (BigUint::from(5u32), 1)
            ]
        );
    }

    #[test]
    fn divisors_of_12() {
        let ds: Vec<u64> = divisors_bounded(&BigUint::from(12u32), 100)
            .iter()
            .map(|d| d.to_u64().unwrap())
            .collect();
        assert_eq!(ds, vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime_u64(13));
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(1_000_000_007u64 * 3));
    }
}
