use std::fmt;

use super::{checked_pow, inv_mod, mul_mod, pow_mod, reduce_signed, sub_mod};
use crate::error::{Error, Result};

/// An element of `Z_p` known modulo `p^N`.
///
/// The residue is always reduced mod `p^N`. The valuation is `None` when the
/// residue is zero, i.e. the element is zero at this precision.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    p: u64,
    precision: u32,
    residue: u64,
    valuation: Option<u32>,
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.residue, self.p, self.precision)
    }
}

fn valuation_of(residue: u64, p: u64) -> Option<u32> {
    if residue == 0 {
        return None;
    }
    let (mut r, mut v) = (residue, 0);
    while r % p == 0 {
        r /= p;
        v += 1;
    }
    Some(v)
}

impl PadicNumber {
    pub fn new(value: i128, p: u64, precision: u32) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) {
            return Err(Error::domain(format!("p = {p} must be an odd prime")));
        }
        if precision == 0 {
            return Err(Error::domain("precision must be positive"));
        }
        let modulus = checked_pow(p, precision)?;
        let residue = reduce_signed(value, modulus);
        Ok(Self { p, precision, residue, valuation: valuation_of(residue, p) })
    }

    fn from_parts(p: u64, precision: u32, residue: u64) -> Self {
        Self { p, precision, residue, valuation: valuation_of(residue, p) }
    }

    pub fn one(p: u64, precision: u32) -> Result<Self> {
        Self::new(1, p, precision)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.precision)
    }

    /// Known valuation, or `None` if the element is zero at this precision.
    pub fn valuation(&self) -> Option<u32> {
        self.valuation
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }

    pub fn is_unit(&self) -> bool {
        self.valuation == Some(0)
    }

    /// Drop to a lower precision.
    pub fn truncate(&self, precision: u32) -> Self {
        let precision = precision.min(self.precision).max(1);
        Self::from_parts(self.p, precision, self.residue % self.p.pow(precision))
    }

    fn check_same_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing p-adic numbers for different primes");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_prime(other);
        let n = self.precision.min(other.precision);
        let m = self.p.pow(n);
        Self::from_parts(self.p, n, ((self.residue % m) + (other.residue % m)) % m)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same_prime(other);
        let n = self.precision.min(other.precision);
        let m = self.p.pow(n);
        Self::from_parts(self.p, n, sub_mod(self.residue, other.residue, m))
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        Self::from_parts(self.p, self.precision, (m - self.residue) % m)
    }

    /// Product; the precision is what the factors actually determine, capped
    /// at the larger input precision.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_prime(other);
        let va = self.valuation.unwrap_or(self.precision);
        let vb = other.valuation.unwrap_or(other.precision);
        let n = (self.precision + vb).min(other.precision + va).min(self.precision.max(other.precision));
        let m = self.p.pow(n);
        Self::from_parts(self.p, n, mul_mod(self.residue % m, other.residue % m, m))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::from_parts(self.p, self.precision, 1 % self.modulus());
        let mut base = *self;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit, at the same precision.
    pub fn unit_inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::domain(format!("{self:?} is not a p-adic unit")));
        }
        let m = self.modulus();
        Ok(Self::from_parts(self.p, self.precision, inv_mod(self.residue, m).unwrap()))
    }

    /// Exact division by `p^k`; loses `k` digits of precision.
    pub fn div_by_p_power(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(*self);
        }
        if k >= self.precision {
            return Err(Error::precision(format!("dividing {self:?} by {}^{k} leaves no digits", self.p)));
        }
        if let Some(v) = self.valuation {
            if v < k {
                return Err(Error::domain(format!("{self:?} is not divisible by {}^{k}", self.p)));
            }
        }
        Ok(Self::from_parts(self.p, self.precision - k, self.residue / self.p.pow(k)))
    }

    /// Quotient `self / other` when it lies in `Z_p`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other);
        let w =
            other.valuation.ok_or_else(|| Error::precision("division by an element that is zero at this precision"))?;
        let num = self.div_by_p_power(w)?;
        let den = other.div_by_p_power(w)?;
        let n = num.precision.min(den.precision);
        Ok(num.truncate(n).mul(&den.truncate(n).unit_inverse()?))
    }

    /// The residue as an integer in `(-p^N/2, p^N/2]`.
    pub fn symmetric_residue(&self) -> i128 {
        let m = self.modulus() as i128;
        let r = self.residue as i128;
        if 2 * r > m {
            r - m
        } else {
            r
        }
    }
}

/// The Teichmuller representative of `a` modulo `p^N`: the unique root of
/// `x^{p-1} = 1` congruent to `a` mod `p`.
pub fn teichmuller_lift(a: i128, p: u64, precision: u32) -> Result<PadicNumber> {
    let x0 = PadicNumber::new(a, p, precision)?;
    if x0.residue % p == 0 {
        return Err(Error::domain(format!("{a} is divisible by {p}")));
    }
    let m = x0.modulus();
    let mut x = x0.residue;
    // x -> x^p gains one correct digit per step.
    for _ in 0..=precision {
        let next = pow_mod(x, p, m);
        if next == x {
            break;
        }
        x = next;
    }
    Ok(PadicNumber::from_parts(p, precision, x))
}

/// `log_p(u)` for a principal unit `u`, correct modulo `p^min(N, prec(u))`.
///
/// The series is summed at `N + floor(log_p N) + 2` digits so that the
/// divisions by `k` in `sum (-1)^{k+1} (u-1)^k / k` never eat into the
/// requested digits.
pub fn padic_log(u: &PadicNumber, precision: u32) -> Result<PadicNumber> {
    let p = u.p;
    if u.residue % p != 1 % p {
        return Err(Error::domain(format!("{u:?} is not congruent to 1 mod {p}")));
    }
    let target = precision.min(u.precision);
    let mut guard = 2;
    let mut t = target as u64;
    while t >= p {
        t /= p;
        guard += 1;
    }
    let work = target + guard;
    let work_mod = checked_pow(p, work)?;
    let x = u.residue - 1;
    if x == 0 {
        return Ok(PadicNumber::from_parts(p, target, 0));
    }
    let mut sum = 0u64;
    let mut k = 1u64;
    loop {
        let vk = split_valuation(k, p);
        // v((u-1)^k / k) >= k - v_p(k)
        if k >= vk.0 as u64 + work as u64 {
            break;
        }
        let big = checked_pow(p, work + vk.0)?;
        let num = pow_mod(x, k, big);
        let term = (num / p.pow(vk.0)) % work_mod;
        let term = mul_mod(term, inv_mod(vk.1 % work_mod, work_mod).unwrap(), work_mod);
        sum = if k % 2 == 1 { (sum + term) % work_mod } else { sub_mod(sum, term, work_mod) };
        k += 1;
    }
    Ok(PadicNumber::from_parts(p, target, sum % p.pow(target)))
}

fn split_valuation(k: u64, p: u64) -> (u32, u64) {
    let (mut v, mut r) = (0, k);
    while r % p == 0 {
        r /= p;
        v += 1;
    }
    (v, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller_lift(2, 5, 2).unwrap().residue(), 7);
        assert_eq!(teichmuller_lift(1, 7, 5).unwrap().residue(), 1);
        assert_eq!(teichmuller_lift(13, 3, 2).unwrap().residue(), 1);
        assert!(matches!(teichmuller_lift(10, 5, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn log_examples() {
        let four = PadicNumber::new(4, 3, 3).unwrap();
        assert_eq!(padic_log(&four, 3).unwrap().residue(), 21);
        let one = PadicNumber::one(7, 6).unwrap();
        assert!(padic_log(&one, 6).unwrap().is_zero());
        let six = PadicNumber::new(6, 5, 2).unwrap();
        assert_eq!(padic_log(&six, 2).unwrap().residue(), 5);
        let two = PadicNumber::new(2, 5, 2).unwrap();
        assert!(matches!(padic_log(&two, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn division_tracks_precision() {
        let a = PadicNumber::new(18, 3, 5).unwrap();
        let b = PadicNumber::new(3, 3, 5).unwrap();
        let q = a.div(&b).unwrap();
        assert_eq!(q.residue(), 6);
        assert_eq!(q.precision(), 4);
        assert!(b.div(&a).is_err());
    }

    proptest! {
        #[test]
        fn teichmuller_is_root_of_unity(a in 1i64..10_000, p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 37]), n in 1u32..6) {
            prop_assume!(!(a as u64).is_multiple_of(p));
            let t = teichmuller_lift(a as i128, p, n).unwrap();
            prop_assert_eq!(t.residue() % p, a as u64 % p);
            prop_assert_eq!(pow_mod(t.residue(), p - 1, t.modulus()), 1);
        }

        #[test]
        fn log_is_a_homomorphism(x in 0u64..1_000_000, y in 0u64..1_000_000, p in prop::sample::select(vec![3u64, 5, 7, 37])) {
            let n = 5;
            let m = p.pow(n);
            let u = PadicNumber::new((1 + p * x) as i128, p, n).unwrap();
            let v = PadicNumber::new((1 + p * y) as i128, p, n).unwrap();
            let lhs = padic_log(&u.mul(&v), n).unwrap();
            let rhs = padic_log(&u, n).unwrap().add(&padic_log(&v, n).unwrap());
            prop_assert_eq!(lhs.residue() % m, rhs.residue() % m);
            // v_p(log u) = v_p(u - 1)
            let lu = padic_log(&u, n).unwrap();
            prop_assert_eq!(lu.valuation(), PadicNumber::new((p * x) as i128, p, n).unwrap().valuation());
        }
    }
}
