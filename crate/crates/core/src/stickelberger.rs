//! Stickelberger elements and the minus-part lambda invariant of odd characters.

use serde::Serialize;

use crate::arith::{checked_pow, inv_mod, mul_mod, split_p_part, teichmuller_lift};
use crate::characters::{CoefficientRing, DirichletCharacter, RingElement, RootOfUnity};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 8;
const MAX_LEVEL: u32 = 4;

/// `theta_n = sum_a (-a/M_n) chi^{-1}(a) (1+T)^{c_n(a)}` modulo
/// `((1+T)^{p^n} - 1, p^N)`, with `M_n = f' p^{n+1}` and `<a> = kappa_0^{c_n(a)}`.
#[derive(Debug, Clone)]
pub struct StickelbergerSeries {
    pub level: u32,
    pub ring: CoefficientRing,
    /// Coefficient of `(1+T)^k`, `k < p^n`.
    pub coefficients: Vec<RingElement>,
}

fn check_odd_nontrivial(chi: &DirichletCharacter) -> Result<()> {
    if chi.is_even() {
        return Err(Error::domain("the Stickelberger series needs an odd character"));
    }
    if chi.is_teichmuller() {
        return Err(Error::domain("omega has no Stickelberger lambda here"));
    }
    Ok(())
}

pub fn stickelberger_series(chi: &DirichletCharacter, n: u32, precision: u32) -> Result<StickelbergerSeries> {
    check_odd_nontrivial(chi)?;
    let p = chi.prime();
    let cond = chi.conductor();
    let (_, f_prime) = split_p_part(cond, p);
    let pn1 = checked_pow(p, n + 1)?;
    let pn = pn1 / p;
    let big_m = f_prime.checked_mul(pn1).ok_or_else(|| Error::domain("level modulus overflows"))?;

    // numerators are summed with n + 1 extra digits, then divided by p^{n+1}
    let hi = CoefficientRing::new(p, chi.order(), precision + n + 1)?;
    let ring = CoefficientRing::new(p, chi.order(), precision)?;

    // k for each <a> = 1 mod p, indexed by (<a> - 1)/p
    let mut kappa_log = vec![0u64; pn as usize];
    let mut x = 1u64;
    for k in 0..pn {
        kappa_log[((x - 1) / p) as usize] = k;
        x = mul_mod(x, 1 + p, pn1);
    }
    let teich_inv: Vec<u64> = (0..p)
        .map(|a| {
            if a == 0 {
                0
            } else {
                let t = teichmuller_lift(a as i128, p, n + 1).unwrap().residue();
                inv_mod(t, pn1).unwrap()
            }
        })
        .collect();

    // chi^{-1} on residues mod the conductor
    let roots: Vec<Option<RingElement>> =
        (0..cond).map(|a| chi.evaluate(a as i64).map(|z| hi.root(&z.inverse()).unwrap())).collect();

    let mut acc = vec![hi.zero(); pn as usize];
    for a in 1..big_m {
        if a % p == 0 {
            continue;
        }
        let Some(r) = &roots[(a % cond) as usize] else { continue };
        if f_prime > 1 && num_integer::gcd(a, f_prime) != 1 {
            continue;
        }
        let angle = mul_mod(a % pn1, teich_inv[(a % p) as usize], pn1);
        let k = kappa_log[((angle - 1) / p) as usize] as usize;
        acc[k] = hi.add(&acc[k], &hi.scale(r, a));
    }

    let scale = ring.modulus() - inv_mod(f_prime % ring.modulus(), ring.modulus()).expect("f' is prime to p");
    let coefficients = acc
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let c = hi.div_by_p_power(c, n + 1).map_err(|_| {
                Error::inconsistency(format!("Stickelberger coefficient {k} at level {n} is not integral"))
            })?;
            Ok(ring.scale(&ring.from_coords(c.coords().to_vec()), scale))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StickelbergerSeries { level: n, ring, coefficients })
}

impl StickelbergerSeries {
    /// Visits the `T`-coefficients in order until `visit` returns false, using
    /// `binom(k, j+1) = sum_{i<k} binom(i, j)`.
    fn walk_t_coefficients(&self, mut visit: impl FnMut(usize, RingElement) -> bool) {
        let ring = &self.ring;
        let m = ring.modulus();
        let mut binom = vec![1u64; self.coefficients.len()];
        for j in 0..binom.len() {
            if j > 0 {
                let mut run = 0u64;
                for b in binom.iter_mut() {
                    let old = *b;
                    *b = run;
                    run = (run + old) % m;
                }
            }
            let mut s = ring.zero();
            for (c, &b) in self.coefficients.iter().zip(&binom) {
                if b != 0 {
                    s = ring.add(&s, &ring.scale(c, b));
                }
            }
            if !visit(j, s) {
                return;
            }
        }
    }

    /// Coefficients of `T^j` for `j < count`.
    pub fn t_coefficients(&self, count: usize) -> Vec<RingElement> {
        let mut out = Vec::new();
        self.walk_t_coefficients(|j, c| {
            if j < count {
                out.push(c);
            }
            j + 1 < count
        });
        out
    }

    /// Index of the first unit `T`-coefficient, if one occurs below `p^n`.
    pub fn first_unit(&self) -> Option<usize> {
        let mut found = None;
        self.walk_t_coefficients(|j, c| {
            if self.ring.is_unit(&c) {
                found = Some(j);
            }
            found.is_none()
        });
        found
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaMinus {
    /// Lambda over `O_chi[[T]]`.
    pub lambda: u64,
    pub mu_zero: bool,
    pub levels_used: Vec<u32>,
    pub precision: u32,
}

impl LambdaMinus {
    /// The `Z_p`-rank of the `chi`-part, `d_chi * lambda`.
    pub fn zp_rank(&self, chi: &DirichletCharacter) -> u64 {
        self.lambda * chi.d_chi()
    }
}

/// `lambda^-_chi`, confirmed at two consecutive levels `n, n+1` with `p^n > lambda`.
pub fn lambda_minus(chi: &DirichletCharacter) -> Result<LambdaMinus> {
    lambda_minus_with(chi, DEFAULT_PRECISION)
}

pub fn lambda_minus_with(chi: &DirichletCharacter, precision: u32) -> Result<LambdaMinus> {
    check_odd_nontrivial(chi)?;
    let mut n = 1;
    let mut prev: Option<(u32, usize)> = None;
    while n <= MAX_LEVEL {
        let series = stickelberger_series(chi, n, precision)?;
        match (series.first_unit(), prev) {
            (None, _) => prev = None,
            (Some(l), Some((n0, l0))) if l == l0 => {
                return Ok(LambdaMinus { lambda: l as u64, mu_zero: true, levels_used: vec![n0, n], precision });
            }
            (Some(l), Some(_)) => {
                return Err(Error::precision(format!(
                    "lambda changed from level {} to {n} ({l}); retry at precision {}",
                    n - 1,
                    2 * precision
                )));
            }
            (Some(l), None) => prev = Some((n, l)),
        }
        n += 1;
    }
    Err(Error::inconsistency(format!("no unit coefficient up to level {MAX_LEVEL}: mu would be positive")))
}

/// `B_{1,chi} = (1/f) sum_{a=1}^{f} a chi(a)`, exact in `Q(mu_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliB1 {
    pub order: u64,
    /// Numerator in the power basis `1, z, ..., z^{phi(n)-1}` of `Z[mu_n]`.
    pub numerator: Vec<i128>,
    pub denominator: u64,
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_poly(n: u64) -> Vec<i128> {
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = poly_div_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn poly_div_exact(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i128; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db];
        q[k] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] -= c * bi;
        }
    }
    q
}

fn poly_rem(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = r.pop().unwrap();
        let k = r.len() - db;
        for (i, &bi) in b[..db].iter().enumerate() {
            r[k + i] -= c * bi;
        }
    }
    r.resize(db, 0);
    r
}

pub fn bernoulli_b1(chi: &DirichletCharacter) -> Result<BernoulliB1> {
    if chi.is_even() {
        return Err(Error::domain("B_{1,chi} vanishes for even chi"));
    }
    let n = chi.order();
    let f = chi.conductor();
    let mut sum = vec![0i128; n as usize];
    for a in 1..=f {
        if let Some(z) = chi.evaluate(a as i64) {
            sum[z.exponent_in(n) as usize] += a as i128;
        }
    }
    Ok(BernoulliB1 { order: n, numerator: poly_rem(&sum, &cyclotomic_poly(n)), denominator: f })
}

impl BernoulliB1 {
    /// The value as a rational number when it lies in `Q`.
    pub fn as_rational(&self) -> Option<(i128, u64)> {
        if self.numerator[1..].iter().any(|&c| c != 0) {
            return None;
        }
        let num = self.numerator[0];
        let g = num_integer::gcd(num.unsigned_abs(), self.denominator as u128) as i128;
        Some((num / g, self.denominator / g as u64))
    }

    /// Image of the numerator in `O_chi` modulo `p^N`.
    pub fn numerator_in(&self, ring: &CoefficientRing) -> Result<RingElement> {
        let mut s = ring.zero();
        for (k, &c) in self.numerator.iter().enumerate() {
            if c != 0 {
                let z = ring.root(&RootOfUnity::new(self.order, k as i64))?;
                s = ring.add(&s, &ring.mul(&z, &ring.from_signed(c)));
            }
        }
        Ok(s)
    }

    /// `v_p(B_{1,chi})` as `(v_pi, e)`, meaning `v_pi / e`; `None` if the
    /// numerator vanishes at this precision.
    pub fn p_valuation(&self, p: u64, precision: u32) -> Result<Option<(i64, u64)>> {
        let ring = CoefficientRing::new(p, self.order, precision)?;
        let e = ring.ramification_index() as i64;
        let (vd, _) = split_p_part(self.denominator, p);
        Ok(ring.valuation(&self.numerator_in(&ring)?).map(|v| (v as i64 - e * vd as i64, e as u64)))
    }

    /// `p` divides `B_{1,chi}` in `O_chi`.
    pub fn divisible_by_p(&self, p: u64, precision: u32) -> Result<bool> {
        Ok(match self.p_valuation(p, precision)? {
            None => true,
            Some((v, e)) => v >= e as i64,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega(p: u64) -> DirichletCharacter {
        DirichletCharacter::teichmuller(p)
    }

    #[test]
    fn series_examples() {
        let s = stickelberger_series(&omega(5).pow(3), 2, 8).unwrap();
        let t = s.t_coefficients(2);
        assert!(s.ring.is_unit(&t[0]));

        let s = stickelberger_series(&omega(37).pow(5), 2, 8).unwrap();
        let t = s.t_coefficients(2);
        assert_eq!(t[0].coords()[0] % 37, 0);
        assert!(s.ring.is_unit(&t[1]));

        assert!(stickelberger_series(&omega(5).pow(2), 2, 8).is_err());
        assert!(stickelberger_series(&omega(5), 2, 8).is_err());
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_minus(&omega(5).pow(3)).unwrap().lambda, 0);
        assert_eq!(lambda_minus(&omega(7).pow(5)).unwrap().lambda, 0);
        let l = lambda_minus(&omega(37).pow(5)).unwrap();
        assert_eq!(l.lambda, 1);
        assert!(l.mu_zero);
    }

    #[test]
    fn bernoulli_examples() {
        let chi3 = DirichletCharacter::from_values(5, 3, vec![RootOfUnity::minus_one()]).unwrap();
        assert_eq!(bernoulli_b1(&chi3).unwrap().as_rational(), Some((-1, 3)));
        let b = bernoulli_b1(&omega(37).pow(31)).unwrap();
        assert!(b.divisible_by_p(37, 6).unwrap());
        let b = bernoulli_b1(&omega(5)).unwrap();
        assert_eq!(b.p_valuation(5, 6).unwrap(), Some((0, 1)));
        assert!(bernoulli_b1(&omega(5).pow(2)).is_err());
    }

    #[test]
    fn constant_term_is_b1_of_inverse() {
        for p in [5u64, 7, 11] {
            for i in (3..p - 1).step_by(2) {
                let chi = omega(p).pow(i as i64);
                let s = stickelberger_series(&chi, 1, 6).unwrap();
                let t0 = &s.t_coefficients(1)[0];
                let b = bernoulli_b1(&chi.inverse()).unwrap();
                let num = b.numerator_in(&s.ring).unwrap();
                // theta(0) = -B_{1,chi^{-1}} exactly
                let expect = s.ring.neg(&s.ring.div_by_p_power(&num, 1).unwrap());
                assert_eq!(s.ring.residue(t0), s.ring.residue(&expect), "p={p} i={i}");
            }
        }
    }

    #[test]
    fn nonrational_field_series() {
        let field = crate::characters::FieldSpec::full_cyclotomic(5, 7).unwrap();
        for chi in crate::characters::enumerate_characters(&field) {
            if chi.is_odd() && !chi.is_teichmuller() {
                let l = lambda_minus(&chi).unwrap();
                assert!(l.mu_zero);
            }
        }
    }
}
