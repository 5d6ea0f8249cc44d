use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// `zeta_N^k` for the abstract compatible system of roots of unity
/// (`zeta_{NM}^M = zeta_N`), stored in lowest terms.
///
/// Equivalently an element `k/N` of `Q/Z`; products add fractions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    order: u64,
    exponent: u64,
}

impl fmt::Debug for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            write!(f, "1")
        } else {
            write!(f, "z{}^{}", self.order, self.exponent)
        }
    }
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { order: 1, exponent: 0 };

    /// `zeta_n^k`, with `n >= 1`.
    pub fn new(n: u64, k: i64) -> Self {
        assert!(n >= 1, "root of unity of order 0");
        let k = k.rem_euclid(n as i64) as u64;
        let g = k.gcd(&n);
        if k == 0 {
            return Self::ONE;
        }
        Self { order: n / g, exponent: k / g }
    }

    pub fn minus_one() -> Self {
        Self::new(2, 1)
    }

    /// Exact order of this root.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Exponent `k` with `self = zeta_{order}^k` and `gcd(k, order) = 1`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    /// Exponent relative to a multiple `n` of the order.
    pub fn exponent_in(&self, n: u64) -> u64 {
        assert_eq!(n % self.order, 0, "{n} is not a multiple of the order {}", self.order);
        self.exponent * (n / self.order)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order.lcm(&other.order);
        let k = self.exponent_in(n) + other.exponent_in(n);
        Self::new(n, (k % n) as i64)
    }

    pub fn pow(&self, e: i64) -> Self {
        let n = self.order as i128;
        let k = (self.exponent as i128 * e as i128).rem_euclid(n);
        Self::new(self.order, k as i64)
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    /// Splits `self = (p-power part) * (prime-to-p part)`.
    pub fn split(&self, p: u64) -> (Self, Self) {
        let mut pa = 1u64;
        let mut n0 = self.order;
        while n0.is_multiple_of(p) {
            n0 /= p;
            pa *= p;
        }
        if pa == 1 {
            return (Self::ONE, *self);
        }
        if n0 == 1 {
            return (*self, Self::ONE);
        }
        // k/n = kp/pa + k0/n0 with kp = k n0^{-1} mod pa, k0 = k pa^{-1} mod n0.
        let k = self.exponent as i128;
        let inv = |a: u64, m: u64| {
            let e = (a as i128).extended_gcd(&(m as i128));
            e.x.rem_euclid(m as i128)
        };
        let kp = (k * inv(n0 % pa, pa)).rem_euclid(pa as i128);
        let k0 = (k * inv(pa % n0, n0)).rem_euclid(n0 as i128);
        (Self::new(pa, kp as i64), Self::new(n0, k0 as i64))
    }

    pub fn p_part(&self, p: u64) -> Self {
        self.split(p).0
    }

    pub fn prime_to_p_part(&self, p: u64) -> Self {
        self.split(p).1
    }

    /// True when the order is a power of `p` (including order 1).
    pub fn has_p_power_order(&self, p: u64) -> bool {
        let mut n = self.order;
        while n.is_multiple_of(p) {
            n /= p;
        }
        n == 1
    }
}
