//! Exact integer, modular and fixed-precision p-adic arithmetic.
//!
//! Everything here works on `u64` residues with `u128` intermediate products,
//! which covers every modulus that shows up at desk scale (conductors and
//! level moduli well below `10^7`, p-adic moduli `p^N < 2^63`).

mod padic;
mod units;

pub use padic::{padic_log, teichmuller_lift, PadicNumber};
pub use units::{CyclicFactor, UnitGroupStructure};

use crate::error::{Error, Result};
use num_integer::Integer;

/// Largest modulus accepted by the modular helpers.
pub const MAX_MODULUS: u64 = 1 << 63;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    let (a, b) = (a % m, b % m);
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn reduce_signed(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(reduce_signed(e.x, m))
}

/// Chinese remaindering of `a mod m` and `b mod n` for coprime `m, n`.
pub fn crt_pair(a: u64, m: u64, b: u64, n: u64) -> u64 {
    debug_assert_eq!(m.gcd(&n), 1);
    let mn = m * n;
    // x = a + m * ((b - a) * m^{-1} mod n)
    let m_inv = inv_mod(m % n, n).expect("coprime moduli");
    let t = mul_mod(sub_mod(b, a % n, n), m_inv, n);
    add_mod(a % mn, mul_mod(m, t, mn), mn)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, primes in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// p-adic valuation of a nonzero integer.
pub fn v_p(n: i128, p: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::domain("v_p(0) is undefined"));
    }
    if p < 2 {
        return Err(Error::domain(format!("{p} is not a prime")));
    }
    let mut n = n.unsigned_abs();
    let p = p as u128;
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    Ok(v)
}

/// `p^k`, failing when the result would not fit below [`MAX_MODULUS`].
pub fn checked_pow(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k)
        .filter(|&v| v < MAX_MODULUS)
        .ok_or_else(|| Error::precision(format!("{p}^{k} does not fit in 63 bits")))
}

/// Multiplicative order of `a` modulo `m`.
pub fn mul_order(a: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::domain("modulus must be positive"));
    }
    if m == 1 {
        return Ok(1);
    }
    if a.gcd(&m) != 1 {
        return Err(Error::domain(format!("gcd({a}, {m}) > 1")));
    }
    let mut order = euler_phi(m);
    for (l, _) in factorize(order) {
        while order.is_multiple_of(l) && pow_mod(a, order / l, m) == 1 {
            order /= l;
        }
    }
    Ok(order)
}

/// Smallest generator of the cyclic group `(Z/l^k)^x` for an odd prime `l`.
pub fn smallest_primitive_root(l: u64, k: u32) -> u64 {
    let m = l.pow(k);
    let phi = m / l * (l - 1);
    let factors = factorize(phi);
    (2..m).find(|&g| g % l != 0 && factors.iter().all(|&(r, _)| pow_mod(g, phi / r, m) != 1)).unwrap_or(1)
}

/// Exponent `e` such that `p^e` exactly divides the order of a cyclic group
/// of order `n`, together with the prime-to-p part.
pub fn split_p_part(n: u64, p: u64) -> (u32, u64) {
    let mut e = 0;
    let mut rest = n;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (e, rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(v_p(360, 3).unwrap(), 2);
        assert_eq!(v_p(1, 3).unwrap(), 0);
        assert_eq!(v_p(14640, 5).unwrap(), 1);
        assert_eq!(v_p(-45, 3).unwrap(), 2);
        assert!(matches!(v_p(0, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn order_examples() {
        assert_eq!(mul_order(7, 9).unwrap(), 3);
        assert_eq!(mul_order(1, 15).unwrap(), 1);
        assert_eq!(mul_order(2, 5).unwrap(), 4);
        assert!(mul_order(6, 9).is_err());
    }

    #[test]
    fn crt_and_inverse() {
        assert_eq!(crt_pair(2, 5, 3, 7), 17);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(3, 9), None);
        assert_eq!(smallest_primitive_root(3, 2), 2);
        assert_eq!(smallest_primitive_root(7, 1), 3);
        assert_eq!(smallest_primitive_root(37, 1), 2);
    }

    proptest! {
        #[test]
        fn valuation_is_additive(m in 1i64..1_000_000, n in 1i64..1_000_000, p in prop::sample::select(vec![3u64, 5, 7, 11])) {
            let lhs = v_p(m as i128 * n as i128, p).unwrap();
            prop_assert_eq!(lhs, v_p(m as i128, p).unwrap() + v_p(n as i128, p).unwrap());
        }

        #[test]
        fn order_divides_phi(a in 1u64..500, m in 2u64..500) {
            prop_assume!(a.gcd(&m) == 1);
            let ord = mul_order(a, m).unwrap();
            prop_assert_eq!(euler_phi(m) % ord, 0);
            prop_assert_eq!(pow_mod(a, ord, m), 1);
        }
    }
}
