//! Decomposition data of a prime `q != p` in `K_inf / Q`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{
    checked_pow, crt_pair, inv_mod, is_prime, mul_order, padic_log, pow_mod, split_p_part, teichmuller_lift, v_p,
    PadicNumber,
};
use crate::characters::{DirichletCharacter, FieldSpec, RootOfUnity};
use crate::error::{Error, Result};

fn check_q(q: u64, p: u64) -> Result<()> {
    if q == p {
        return Err(Error::domain(format!("q = {q} must differ from p")));
    }
    if !is_prime(q) {
        return Err(Error::domain(format!("q = {q} is not prime")));
    }
    Ok(())
}

/// `m_q = v_p(q^{p-1} - 1) - 1`, so that `p^{m_q}` primes of `Q_inf` lie over `q`.
pub fn m_index(q: u64, p: u64) -> Result<u32> {
    check_q(q, p)?;
    // enough digits for any q < 2^63: v_p(q^{p-1} - 1) <= log_p(q) + 1
    let mut k = 1u32;
    while let Ok(m) = checked_pow(p, k + 1) {
        if m > u64::MAX / 4 {
            break;
        }
        k += 1;
    }
    let modulus = checked_pow(p, k)?;
    let r = pow_mod(q % modulus, p - 1, modulus);
    let d = (r as i128 - 1).rem_euclid(modulus as i128);
    if d == 0 {
        return Err(Error::precision(format!("q^(p-1) = 1 mod {p}^{k}")));
    }
    Ok(v_p(d, p)? - 1)
}

/// `chi(I_q) = 1`, i.e. `q` does not divide the conductor.
pub fn inertia_trivial(chi: &DirichletCharacter, q: u64) -> bool {
    !chi.conductor().is_multiple_of(q)
}

/// `chi^{-1} omega (sigma_0) = 1`: the value of `chi^{-1} omega` at `q` has
/// p-power order.
pub fn sigma0_ok(chi: &DirichletCharacter, q: u64) -> Result<bool> {
    if !inertia_trivial(chi, q) {
        return Ok(false);
    }
    let p = chi.prime();
    let psi = chi.compose(&DirichletCharacter::teichmuller(p), -1, 1);
    let v = psi.evaluate(q as i64).ok_or_else(|| Error::inconsistency(format!("chi^-1 omega vanishes at q = {q}")))?;
    Ok(v.has_p_power_order(p))
}

/// `x_q / p^{m_q} mod p^a`, where `<q> = kappa_0^{x_q}` and `kappa_0 = 1 + p`.
pub fn gamma_unit(q: u64, p: u64, a: u32, precision: u32) -> Result<PadicNumber> {
    let m = m_index(q, p)?;
    let need = m + a + 2;
    if precision < need {
        return Err(Error::precision(format!("precision {precision} is below m_q + a + 2 = {need}")));
    }
    let qn = PadicNumber::new(q as i128, p, precision)?;
    let angle = qn.mul(&teichmuller_lift(q as i128, p, precision)?.unit_inverse()?);
    let num = padic_log(&angle, precision)?;
    let den = padic_log(&PadicNumber::new(1 + p as i128, p, precision)?, precision)?;
    let x = num.div(&den)?;
    if x.valuation() != Some(m) {
        return Err(Error::precision(format!("log<{q}>/log(1+{p}) has valuation {:?}, expected {m}", x.valuation())));
    }
    let u = x.div_by_p_power(m)?;
    if u.precision() < a.max(1) {
        return Err(Error::precision(format!("unit u known to {} digits, {a} needed", u.precision())));
    }
    Ok(u.truncate(a.max(1)))
}

/// `chi^{-1}(sigma_p)`, where `gamma^{p^m} sigma_p` generates the p-part of
/// the decomposition group of `q`.
pub fn sigma_p_value(chi: &DirichletCharacter, q: u64, precision: u32) -> Result<RootOfUnity> {
    let p = chi.prime();
    if !inertia_trivial(chi, q) {
        return Err(Error::domain(format!("q = {q} ramifies in the field of chi")));
    }
    let value = chi.evaluate(q as i64).expect("q prime to the conductor");
    let zp = value.p_part(p);
    if zp.is_one() {
        return Ok(RootOfUnity::ONE);
    }
    let (a, _) = split_p_part(zp.order(), p);
    let u = gamma_unit(q, p, a, precision)?;
    let pa = zp.order();
    let uinv = inv_mod(u.residue() % pa, pa).expect("u is a unit");
    Ok(zp.pow(-(uinv as i64)))
}

/// `(f_n, r_n, e_n)` for a prime over `q` in the inertia field of `K_n / Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplittingData {
    pub residue_degree: u64,
    pub prime_count: u64,
    pub p_exponent: u32,
}

/// The inertia quotient `G'' = (Z/f' p^{n+1})^x / H'` of `Gal(K_n/Q)` at `q`,
/// with `f'` the prime-to-`q` part of `f`.
#[derive(Debug, Clone)]
pub struct InertiaQuotient {
    pub f_prime: u64,
    pub modulus: u64,
    pub h: Vec<u64>,
}

impl InertiaQuotient {
    pub fn new(field: &FieldSpec, q: u64, n: u32) -> Result<Self> {
        let mut f_prime = field.f();
        while f_prime.is_multiple_of(q) {
            f_prime /= q;
        }
        let pk = checked_pow(field.p(), n + 1)?;
        let modulus = f_prime * pk;
        let mut h: Vec<u64> = field
            .h_elements()
            .iter()
            .map(|&x| if f_prime == 1 { 1 % modulus } else { crt_pair(x % f_prime, f_prime, 1, pk) })
            .collect();
        h.sort_unstable();
        h.dedup();
        Ok(Self { f_prime, modulus, h })
    }

    pub fn order(&self) -> u64 {
        crate::arith::euler_phi(self.modulus) / self.h.len() as u64
    }

    /// Canonical representative of the class of `a`: the least element of `aH'`.
    pub fn canonical(&self, a: u64) -> u64 {
        self.h.iter().map(|&h| crate::arith::mul_mod(a % self.modulus, h, self.modulus)).min().unwrap_or(0)
    }

    /// Order of the class of `a`.
    pub fn class_order(&self, a: u64) -> u64 {
        let m = self.modulus;
        let one = self.canonical(1);
        let mut x = a % m;
        let mut k = 1;
        while self.canonical(x) != one {
            x = crate::arith::mul_mod(x, a, m);
            k += 1;
        }
        k
    }
}

pub fn splitting_count(field: &FieldSpec, q: u64, n: u32) -> Result<SplittingData> {
    let p = field.p();
    check_q(q, p)?;
    let quotient = InertiaQuotient::new(field, q, n)?;
    let f_n = quotient.class_order(q);
    let r_n = quotient.order() / f_n;
    let e_n = v_p_of_power_minus_one(q, f_n, p)?;
    Ok(SplittingData { residue_degree: f_n, prime_count: r_n, p_exponent: e_n })
}

/// `v_p(q^k - 1)` via lifting the exponent.
pub(crate) fn v_p_of_power_minus_one(q: u64, k: u64, p: u64) -> Result<u32> {
    let t = mul_order(q % p, p)?;
    if !k.is_multiple_of(t) {
        return Ok(0);
    }
    let mut digits = 1u32;
    while checked_pow(p, digits + 1).is_ok_and(|m| m < 1 << 62) {
        digits += 1;
    }
    let modulus = checked_pow(p, digits)?;
    let r = pow_mod(q % modulus, t, modulus);
    let v0 = v_p((r as i128 - 1).rem_euclid(modulus as i128), p)
        .map_err(|_| Error::precision(format!("{q}^{t} = 1 mod {p}^{digits}")))?;
    Ok(v0 + v_p((k / t) as i128, p)?)
}

/// Number of primes above `q` in the `n`-th layer of the cyclotomic Z_p-extension of Q.
pub fn rational_tower_count(q: u64, p: u64, n: u32) -> Result<u64> {
    check_q(q, p)?;
    let pn = checked_pow(p, n)?;
    let m = pn * p;
    let angle = crate::arith::mul_mod(q % m, inv_mod(teichmuller_lift(q as i128, p, n + 1)?.residue(), m).unwrap(), m);
    Ok(pn / mul_order(angle, m)?)
}

/// Per-character decomposition data at `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterFrobenius {
    pub inertia_trivial: bool,
    pub sigma0_ok: bool,
    pub sigma_p_exponent: Option<RootOfUnity>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrobeniusProfile {
    pub q: u64,
    pub m_q: u32,
    pub ramified: bool,
    pub per_chi: BTreeMap<String, CharacterFrobenius>,
}

impl FrobeniusProfile {
    /// Profile of `q` over the given labelled characters.
    pub fn new(field: &FieldSpec, q: u64, chars: &[(String, DirichletCharacter)], precision: u32) -> Result<Self> {
        let m_q = m_index(q, field.p())?;
        let mut per_chi = BTreeMap::new();
        for (label, chi) in chars {
            let it = inertia_trivial(chi, q);
            let s0 = sigma0_ok(chi, q)?;
            let sp =
                if it && s0 { Some(sigma_p_value(chi, q, precision.max(default_precision(m_q, chi)))?) } else { None };
            per_chi
                .insert(label.clone(), CharacterFrobenius { inertia_trivial: it, sigma0_ok: s0, sigma_p_exponent: sp });
        }
        Ok(Self { q, m_q, ramified: field.f().is_multiple_of(q), per_chi })
    }
}

/// `m_q + a + 8`, where `p^a` is the p-part of the order of `chi`.
pub fn default_precision(m_q: u32, chi: &DirichletCharacter) -> u32 {
    let (a, _) = split_p_part(chi.order(), chi.prime());
    m_q + a + 8
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;
    use proptest::prelude::*;

    fn chi8(p: u64) -> DirichletCharacter {
        DirichletCharacter::from_values(p, 8, vec![RootOfUnity::ONE, RootOfUnity::minus_one()]).unwrap()
    }

    #[test]
    fn m_index_examples() {
        assert_eq!(m_index(19, 3).unwrap(), 1);
        assert_eq!(m_index(7, 3).unwrap(), 0);
        assert_eq!(m_index(163, 3).unwrap(), 3);
        assert_eq!(m_index(7, 5).unwrap(), 1);
        assert_eq!(m_index(11, 5).unwrap(), 0);
        assert!(m_index(5, 5).is_err());
    }

    #[test]
    fn inertia_examples() {
        assert!(inertia_trivial(&chi8(3), 7));
        assert!(!inertia_trivial(&chi8(3), 2));
        let cubic = DirichletCharacter::from_values(3, 7, vec![RootOfUnity::new(3, 1)]).unwrap();
        assert!(!inertia_trivial(&cubic, 7));
    }

    #[test]
    fn sigma0_examples() {
        for p in [3u64, 5, 7] {
            let eps = DirichletCharacter::trivial(p);
            for q in [2u64, 7, 11, 13, 19, 31, 43] {
                if q != p {
                    assert_eq!(sigma0_ok(&eps, q).unwrap(), q % p == 1, "p={p} q={q}");
                }
            }
        }
        assert!(sigma0_ok(&chi8(3), 5).unwrap());
        assert!(sigma0_ok(&chi8(3), 7).unwrap());
        assert!(!sigma0_ok(&chi8(3), 13).unwrap());
    }

    #[test]
    fn sigma_p_examples() {
        let omega = DirichletCharacter::teichmuller(5);
        assert!(sigma_p_value(&omega.pow(3), 7, 10).unwrap().is_one());
        let cubic = DirichletCharacter::from_values(3, 7, vec![RootOfUnity::new(3, 1)]).unwrap();
        assert!(sigma_p_value(&cubic, 13, 10).unwrap().is_one());
    }

    #[test]
    fn sigma_p_hand_computation() {
        // p = 3, cubic chi of conductor 7 sending 3 to zeta_3, q = 31.
        // 31 = 3 mod 7, so chi(31) = zeta_3. <31> = 31/teich(31); u = x / 3^m.
        let chi = DirichletCharacter::from_values(3, 7, vec![RootOfUnity::new(3, 1)]).unwrap();
        let q = 31;
        assert_eq!(chi.evaluate(31), Some(RootOfUnity::new(3, 1)));
        let m = m_index(q, 3).unwrap();
        assert_eq!(m, 0);
        // brute force: find x mod 3^(m+1+1) with (1+3)^x = <31> mod 3^(m+2)
        let pk = 27u64;
        let angle = 31 % pk * inv_mod(teichmuller_lift(31, 3, 3).unwrap().residue(), pk).unwrap() % pk;
        let x = (0..9).find(|&x| pow_mod(4, x, pk) == angle).unwrap();
        let u = x % 3;
        let expected = RootOfUnity::new(3, 1).pow(-(inv_mod(u, 3).unwrap() as i64));
        assert_eq!(sigma_p_value(&chi, q, 10).unwrap(), expected);
    }

    #[test]
    fn splitting_examples() {
        let q3 = FieldSpec::cyclotomic(3).unwrap();
        let s = splitting_count(&q3, 7, 1).unwrap();
        assert_eq!((s.residue_degree, s.prime_count, s.p_exponent), (3, 2, 2));
        let s = splitting_count(&q3, 19, 2).unwrap();
        assert_eq!((s.residue_degree, s.prime_count, s.p_exponent), (3, 6, 3));
        let f7 = FieldSpec::full_cyclotomic(3, 7).unwrap();
        let s = splitting_count(&f7, 7, 0).unwrap();
        assert_eq!((s.residue_degree, s.prime_count, s.p_exponent), (1, 2, 1));
    }

    #[test]
    fn rational_tower_remark() {
        for (p, q, expected) in [(3u64, 7u64, 1u64), (3, 19, 3), (3, 163, 27), (5, 7, 5)] {
            let m = m_index(q, p).unwrap();
            assert_eq!(rational_tower_count(q, p, m + 1).unwrap(), expected);
            assert_eq!(p.pow(m), expected);
        }
    }

    #[test]
    fn tower_count_stabilizes_at_p_to_the_m() {
        for p in [3u64, 5, 7] {
            for q in [2u64, 11, 13, 17, 19, 31, 37, 41, 43, 163, 271] {
                if q == p {
                    continue;
                }
                let m = m_index(q, p).unwrap();
                for n in m..m + 3 {
                    assert_eq!(rational_tower_count(q, p, n).unwrap(), p.pow(m), "p={p} q={q} n={n}");
                }
            }
        }
    }

    #[test]
    fn prime_count_matches_admissible_classes() {
        // r_n at a stable level equals the sum of d_chi p^{m_q} over classes with
        // chi(I_q) = 1 and the sigma_0 condition
        let fields = [
            FieldSpec::cyclotomic(3).unwrap(),
            FieldSpec::cyclotomic(5).unwrap(),
            FieldSpec::full_cyclotomic(3, 7).unwrap(),
            FieldSpec::new(3, 8, vec![7]).unwrap(),
            FieldSpec::full_cyclotomic(5, 8).unwrap(),
            FieldSpec::new(3, 7, vec![6]).unwrap(),
        ];
        for field in &fields {
            let p = field.p();
            let reps = crate::characters::class_representatives(field);
            for q in [2u64, 7, 11, 13, 19, 29, 31, 37] {
                if q == p {
                    continue;
                }
                let m = m_index(q, p).unwrap();
                let expected: u64 =
                    reps.iter().filter(|c| sigma0_ok(c, q).unwrap()).map(|c| c.d_chi() * p.pow(m)).sum();
                let n = m + 3;
                let s = splitting_count(field, q, n).unwrap();
                assert_eq!(s.prime_count, expected, "{field:?} q={q}");
            }
        }
    }

    #[test]
    fn profile_serializes() {
        let field = FieldSpec::cyclotomic(5).unwrap();
        let chars: Vec<_> =
            enumerate_characters(&field).into_iter().enumerate().map(|(i, c)| (c.label(i), c)).collect();
        let prof = FrobeniusProfile::new(&field, 11, &chars, 10).unwrap();
        assert_eq!(prof.m_q, 0);
        assert!(prof.per_chi["omega"].sigma0_ok);
        assert!(!prof.per_chi["omega^3"].sigma0_ok || 11 % 5 == 1);
        let json = serde_json::to_value(&prof).unwrap();
        assert_eq!(json["q"], 11);
    }

    proptest! {
        #[test]
        fn sigma_p_stable_under_precision(k in 0usize..8, extra in 0u32..6) {
            let field = FieldSpec::full_cyclotomic(3, 7).unwrap();
            let chars = enumerate_characters(&field);
            let chi = &chars[k % chars.len()];
            for q in [13u64, 31, 43, 73, 97] {
                if inertia_trivial(chi, q) && sigma0_ok(chi, q).unwrap() {
                    let m = m_index(q, 3).unwrap();
                    let base = default_precision(m, chi);
                    prop_assert_eq!(sigma_p_value(chi, q, base).unwrap(), sigma_p_value(chi, q, base + extra).unwrap());
                }
            }
        }
    }
}
