//! Dirichlet characters of `G = Gal(K/Q)` for `K = F(mu_p)`.
//!
//! Characters are stored primitively: the modulus is the conductor, and the
//! character is given by its values on the fixed generators of
//! `(Z/cond)^x` (see [`UnitGroupStructure`]). Values are abstract roots of
//! unity; the only p-adic pinning is `zeta_{p-1} := omega(g)` for the
//! smallest primitive root `g` mod p.

mod coeff;
mod field;
mod roots;

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

pub use coeff::{CoefficientRing, RingElement};
pub use field::FieldSpec;
pub use roots::RootOfUnity;

use crate::arith::{crt_pair, euler_phi, factorize, mul_order, split_p_part, UnitGroupStructure};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// A primitive Dirichlet character, viewed p-adically for a fixed odd prime.
#[derive(Clone)]
pub struct DirichletCharacter {
    p: u64,
    group: Arc<UnitGroupStructure>,
    values: Vec<RootOfUnity>,
    order: u64,
    parity: Parity,
    d_chi: u64,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.conductor() == other.conductor() && self.values == other.values
    }
}

impl Eq for DirichletCharacter {}

impl std::hash::Hash for DirichletCharacter {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.conductor().hash(state);
        self.values.hash(state);
    }
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi(cond={}, values={:?})", self.conductor(), self.values)
    }
}

/// Serialized form used in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterSummary {
    pub modulus: u64,
    pub generator_exponents: Vec<u64>,
    pub order: u64,
    pub conductor: u64,
    pub parity: Parity,
    pub d_chi: u64,
}

impl DirichletCharacter {
    /// Character mod `modulus` sending the `i`-th generator of
    /// `unit_group(modulus)` to `values[i]`; reduced to its primitive form.
    pub fn from_values(p: u64, modulus: u64, values: Vec<RootOfUnity>) -> Result<Self> {
        let group = UnitGroupStructure::new(modulus)?;
        if values.len() != group.factors().len() {
            return Err(Error::domain(format!(
                "{} generator values given for a group with {} generators",
                values.len(),
                group.factors().len()
            )));
        }
        for (v, fac) in values.iter().zip(group.factors()) {
            if fac.order % v.order() != 0 {
                return Err(Error::domain(format!(
                    "value {v:?} has order not dividing the generator order {}",
                    fac.order
                )));
            }
        }
        Ok(Self::primitive_from(p, &group, &values))
    }

    /// Character mod `modulus` with `chi(g_i) = zeta_{n_i}^{k_i}`.
    pub fn from_exponents(p: u64, modulus: u64, exponents: &[u64]) -> Result<Self> {
        let group = UnitGroupStructure::new(modulus)?;
        if exponents.len() != group.factors().len() {
            return Err(Error::domain("exponent vector has the wrong length"));
        }
        let values = group.factors().iter().zip(exponents).map(|(f, &k)| RootOfUnity::new(f.order, k as i64)).collect();
        Self::from_values(p, modulus, values)
    }

    pub fn trivial(p: u64) -> Self {
        Self::from_values(p, 1, Vec::new()).expect("trivial character")
    }

    /// The Teichmuller character `omega` mod p.
    pub fn teichmuller(p: u64) -> Self {
        Self::from_values(p, p, vec![RootOfUnity::new(p - 1, 1)]).expect("omega")
    }

    fn evaluate_raw(group: &UnitGroupStructure, values: &[RootOfUnity], a: u64) -> RootOfUnity {
        let e = group.dlog(a).expect("unit");
        values.iter().zip(e).fold(RootOfUnity::ONE, |acc, (v, k)| acc.mul(&v.pow(k as i64)))
    }

    fn primitive_from(p: u64, group: &UnitGroupStructure, values: &[RootOfUnity]) -> Self {
        let modulus = group.modulus();
        // conductor, one prime component at a time
        let mut conductor = 1u64;
        for (l, k) in factorize(modulus) {
            let lk = l.pow(k);
            let other = modulus / lk;
            let lift = |a: u64| if other == 1 { a % lk } else { crt_pair(a, lk, 1, other) };
            let mut j = 0;
            'level: while j < k {
                let lj = l.pow(j);
                // chi trivial on {a = 1 mod l^j} inside (Z/l^k)^x ?
                let mut a = 1 % lk;
                loop {
                    if a.gcd(&l) == 1 && !Self::evaluate_raw(group, values, lift(a)).is_one() {
                        j += 1;
                        continue 'level;
                    }
                    a += lj;
                    if a >= lk.max(2) || lj == lk {
                        break;
                    }
                }
                break;
            }
            conductor *= l.pow(j);
        }
        let prim_group = UnitGroupStructure::new(conductor).expect("conductor");
        let full = modulus / conductor;
        // part of the modulus coprime to the conductor
        let mut rest = full;
        let mut same = conductor;
        loop {
            let g = rest.gcd(&conductor);
            if g == 1 {
                break;
            }
            rest /= g;
            same *= g;
        }
        let prim_values: Vec<RootOfUnity> = prim_group
            .factors()
            .iter()
            .map(|f| {
                let a = if rest == 1 { f.generator } else { crt_pair(f.generator, same, 1, rest) };
                Self::evaluate_raw(group, values, a)
            })
            .collect();
        Self::with_cache(p, Arc::new(prim_group), prim_values)
    }

    fn with_cache(p: u64, group: Arc<UnitGroupStructure>, values: Vec<RootOfUnity>) -> Self {
        let order = values.iter().fold(1u64, |acc, v| acc.lcm(&v.order()));
        let m = group.modulus();
        let minus = if m <= 2 { RootOfUnity::ONE } else { Self::evaluate_raw(&group, &values, m - 1) };
        let parity = if minus.is_one() { Parity::Even } else { Parity::Odd };
        let (a, n0) = split_p_part(order, p);
        let d_chi = if a == 0 { 1 } else { euler_phi(p.pow(a)) } * mul_order(p % n0.max(1), n0).unwrap();
        Self { p, group, values, order, parity, d_chi }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn conductor(&self) -> u64 {
        self.group.modulus()
    }

    pub fn modulus(&self) -> u64 {
        self.conductor()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_odd(&self) -> bool {
        self.parity == Parity::Odd
    }

    pub fn is_even(&self) -> bool {
        self.parity == Parity::Even
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_teichmuller(&self) -> bool {
        *self == Self::teichmuller(self.p)
    }

    /// `[Q_p(chi) : Q_p]`.
    pub fn d_chi(&self) -> u64 {
        self.d_chi
    }

    pub fn generator_values(&self) -> &[RootOfUnity] {
        &self.values
    }

    pub fn unit_group(&self) -> &UnitGroupStructure {
        &self.group
    }

    /// `chi(a)`, or `None` when `gcd(a, conductor) > 1`.
    pub fn evaluate(&self, a: i64) -> Option<RootOfUnity> {
        let m = self.conductor();
        let r = a.rem_euclid(m as i64) as u64;
        if m > 1 && r.gcd(&m) != 1 {
            return None;
        }
        if m == 1 {
            return Some(RootOfUnity::ONE);
        }
        Some(Self::evaluate_raw(&self.group, &self.values, r))
    }

    /// The primitive character inducing `chi^{e1} psi^{e2}`.
    pub fn compose(&self, psi: &Self, e1: i64, e2: i64) -> Self {
        assert_eq!(self.p, psi.p, "characters for different primes");
        let l = self.conductor().lcm(&psi.conductor());
        let group = UnitGroupStructure::new(l).expect("modulus");
        let values: Vec<RootOfUnity> = group
            .factors()
            .iter()
            .map(|f| {
                let a = f.generator as i64;
                let x = self.evaluate(a).expect("unit").pow(e1);
                let y = psi.evaluate(a).expect("unit").pow(e2);
                x.mul(&y)
            })
            .collect();
        Self::primitive_from(self.p, &group, &values)
    }

    pub fn pow(&self, e: i64) -> Self {
        self.compose(self, e, 0)
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    /// True if `chi(h) = 1` for every `h` in the field's subgroup `H`.
    pub fn is_trivial_on_h(&self, field: &FieldSpec) -> bool {
        let m = field.base_modulus();
        field.h_lifted(m).into_iter().all(|h| self.evaluate(h as i64).is_some_and(|v| v.is_one()))
    }

    pub fn summary(&self) -> CharacterSummary {
        let exps = self.values.iter().zip(self.group.factors()).map(|(v, f)| v.exponent_in(f.order)).collect();
        CharacterSummary {
            modulus: self.conductor(),
            generator_exponents: exps,
            order: self.order,
            conductor: self.conductor(),
            parity: self.parity,
            d_chi: self.d_chi,
        }
    }

    /// `k` with `chi = omega^k`, if `chi` is a power of `omega`.
    pub fn omega_exponent(&self) -> Option<u64> {
        match self.conductor() {
            1 => Some(0),
            c if c == self.p => Some(self.values[0].exponent_in(self.p - 1)),
            _ => None,
        }
    }

    /// Report label: `eps`, `omega`, `omega^k`, or `chi<index>` with the
    /// index into the enumeration order.
    pub fn label(&self, index: usize) -> String {
        match self.omega_exponent() {
            Some(0) => "eps".to_string(),
            Some(1) => "omega".to_string(),
            Some(k) => format!("omega^{k}"),
            None => format!("chi{index}"),
        }
    }

    /// The p-adic coefficient ring `O_chi` at precision `N`.
    pub fn coefficient_ring(&self, precision: u32) -> Result<CoefficientRing> {
        CoefficientRing::new(self.p, self.order, precision)
    }
}

/// Every character of `G = Gal(K/Q)`, in lexicographic order of exponent
/// vectors on the generators of `(Z/fp)^x`.
pub fn enumerate_characters(field: &FieldSpec) -> Vec<DirichletCharacter> {
    let m = field.base_modulus();
    let group = UnitGroupStructure::new(m).expect("modulus");
    let orders = group.orders();
    let h = field.h_lifted(m);
    let h_logs: Vec<Vec<u64>> = h.iter().map(|&x| group.dlog(x).expect("unit")).collect();
    let mut out = Vec::new();
    let mut exps = vec![0u64; orders.len()];
    loop {
        let values: Vec<RootOfUnity> = orders.iter().zip(&exps).map(|(&n, &k)| RootOfUnity::new(n, k as i64)).collect();
        let trivial_on_h = h_logs
            .iter()
            .all(|hl| values.iter().zip(hl).fold(RootOfUnity::ONE, |acc, (v, &e)| acc.mul(&v.pow(e as i64))).is_one());
        if trivial_on_h {
            out.push(DirichletCharacter::primitive_from(field.p(), &group, &values));
        }
        // odometer, last coordinate fastest
        let mut i = orders.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
        }
    }
}

/// `Gal(Q_p(mu_n)/Q_p)` as a set of exponents `t mod n`.
fn local_galois_exponents(n: u64, p: u64) -> Vec<u64> {
    let (_, n0) = split_p_part(n, p);
    let mut frob = Vec::new();
    let mut x = 1 % n0.max(1);
    loop {
        frob.push(x);
        x = x * (p % n0.max(1)) % n0.max(1);
        if x == 1 % n0.max(1) {
            break;
        }
    }
    (1..=n).filter(|t| t.gcd(&n) == 1 && frob.contains(&(t % n0.max(1)))).map(|t| t % n).collect()
}

/// Partition of a full dual group into `Q_p`-conjugacy classes, as lists of
/// indices into `chars`. The first index of each class is its representative.
pub fn conjugacy_classes(chars: &[DirichletCharacter], p: u64) -> Vec<Vec<usize>> {
    let mut assigned = vec![false; chars.len()];
    let mut classes = Vec::new();
    for i in 0..chars.len() {
        if assigned[i] {
            continue;
        }
        let chi = &chars[i];
        let mut class = vec![i];
        assigned[i] = true;
        for t in local_galois_exponents(chi.order(), p) {
            let conj = chi.pow(t as i64);
            if let Some(j) = chars.iter().position(|c| *c == conj) {
                if !assigned[j] {
                    assigned[j] = true;
                    class.push(j);
                }
            }
        }
        classes.push(class);
    }
    classes
}

/// One representative per conjugacy class, in enumeration order.
pub fn class_representatives(field: &FieldSpec) -> Vec<DirichletCharacter> {
    let chars = enumerate_characters(field);
    conjugacy_classes(&chars, field.p()).into_iter().map(|c| chars[c[0]].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::teichmuller_lift;
    use proptest::prelude::*;

    fn chi8(p: u64) -> DirichletCharacter {
        // quadratic character of Q(sqrt 2): trivial on 7, -1 on 3 and 5
        DirichletCharacter::from_values(p, 8, vec![RootOfUnity::ONE, RootOfUnity::minus_one()]).unwrap()
    }

    #[test]
    fn enumeration_for_q_mu5() {
        let chars = enumerate_characters(&FieldSpec::cyclotomic(5).unwrap());
        let omega = DirichletCharacter::teichmuller(5);
        let expected: Vec<_> = (0..4).map(|i| omega.pow(i)).collect();
        assert_eq!(chars, expected);
        assert!(chars[0].is_trivial());
        assert_eq!(chars.iter().map(|c| c.conductor()).collect::<Vec<_>>(), vec![1, 5, 5, 5]);
    }

    #[test]
    fn enumeration_small_fields() {
        let chars = enumerate_characters(&FieldSpec::cyclotomic(3).unwrap());
        assert_eq!(chars, vec![DirichletCharacter::trivial(3), DirichletCharacter::teichmuller(3)]);

        let field = FieldSpec::new(3, 8, vec![7]).unwrap();
        let chars = enumerate_characters(&field);
        assert_eq!(chars.len(), 4);
        let omega = DirichletCharacter::teichmuller(3);
        let x8 = chi8(3);
        for expected in [DirichletCharacter::trivial(3), x8.clone(), omega.clone(), x8.compose(&omega, 1, 1)] {
            assert!(chars.contains(&expected), "{expected:?} missing");
        }
    }

    #[test]
    fn evaluation() {
        let x8 = chi8(3);
        assert_eq!(x8.evaluate(5), Some(RootOfUnity::minus_one()));
        assert_eq!(x8.evaluate(7), Some(RootOfUnity::ONE));
        assert_eq!(x8.evaluate(6), None);
        assert!(x8.is_even());
        let omega = DirichletCharacter::teichmuller(5);
        assert_eq!(omega.evaluate(2), Some(RootOfUnity::new(4, 1)));
        assert_eq!(omega.evaluate(10), None);
    }

    #[test]
    fn composition() {
        let omega = DirichletCharacter::teichmuller(7);
        assert!(omega.compose(&omega, 1, -1).is_trivial());
        let x8 = chi8(3);
        let eps = DirichletCharacter::trivial(3);
        assert_eq!(eps.compose(&x8, 0, 1), x8);
        let c = x8.compose(&DirichletCharacter::teichmuller(3), 1, 1);
        assert_eq!((c.conductor(), c.order(), c.parity()), (24, 2, Parity::Odd));
    }

    #[test]
    fn conjugacy_class_examples() {
        let chars = enumerate_characters(&FieldSpec::cyclotomic(5).unwrap());
        let classes = conjugacy_classes(&chars, 5);
        assert_eq!(classes, vec![vec![0], vec![1], vec![2], vec![3]]);

        let cubic = FieldSpec::new(5, 7, vec![6]).unwrap();
        let chars = enumerate_characters(&cubic);
        let classes = conjugacy_classes(&chars, 5);
        let cubic_class: Vec<_> = classes.iter().filter(|c| chars[c[0]].order() == 3).collect();
        assert_eq!(cubic_class.len(), 1);
        assert_eq!(cubic_class[0].len(), 2);

        let cubic7 = FieldSpec::new(7, 9, vec![8]).unwrap();
        let chars = enumerate_characters(&cubic7);
        let classes = conjugacy_classes(&chars, 7);
        for c in &classes {
            if chars[c[0]].order() == 3 {
                assert_eq!(c.len(), 1);
            }
        }
    }

    fn test_fields() -> Vec<FieldSpec> {
        vec![
            FieldSpec::cyclotomic(3).unwrap(),
            FieldSpec::cyclotomic(5).unwrap(),
            FieldSpec::cyclotomic(7).unwrap(),
            FieldSpec::full_cyclotomic(3, 7).unwrap(),
            FieldSpec::full_cyclotomic(5, 7).unwrap(),
            FieldSpec::full_cyclotomic(3, 8).unwrap(),
            FieldSpec::full_cyclotomic(5, 8).unwrap(),
            FieldSpec::new(3, 8, vec![7]).unwrap(),
            FieldSpec::new(3, 7, vec![6]).unwrap(),
            FieldSpec::new(5, 11, vec![10]).unwrap(),
            FieldSpec::new(3, 19, vec![7]).unwrap(),
        ]
    }

    #[test]
    fn class_degrees_sum_to_group_order() {
        for field in test_fields() {
            let chars = enumerate_characters(&field);
            assert_eq!(chars.len() as u64, field.group_order());
            let classes = conjugacy_classes(&chars, field.p());
            let total: u64 = classes.iter().map(|c| chars[c[0]].d_chi()).sum();
            assert_eq!(total, field.group_order(), "{field:?}");
            for class in &classes {
                let rep = &chars[class[0]];
                assert_eq!(class.len() as u64, rep.d_chi());
                for &j in class {
                    let c = &chars[j];
                    assert_eq!((c.d_chi(), c.conductor(), c.parity()), (rep.d_chi(), rep.conductor(), rep.parity()));
                }
            }
            for c in &chars {
                assert!(c.is_trivial_on_h(&field));
            }
        }
    }

    #[test]
    fn kernel_is_exactly_h_for_faithful_characters() {
        // the intersection of all kernels inside (Z/f)^x is H itself
        for field in test_fields() {
            let chars = enumerate_characters(&field);
            let f = field.f();
            for a in 1..f.max(2) {
                if a.gcd(&f) != 1 {
                    continue;
                }
                let lifted = if f == 1 { 1 } else { crt_pair(a, f, 1, field.p()) };
                let in_all_kernels = chars.iter().all(|c| c.evaluate(lifted as i64).unwrap().is_one());
                assert_eq!(in_all_kernels, field.h_contains(a), "{field:?} a={a}");
            }
        }
    }

    #[test]
    fn omega_pinning_and_parity() {
        for p in [3u64, 5, 7, 11, 13, 37] {
            let omega = DirichletCharacter::teichmuller(p);
            assert!(omega.is_odd());
            assert!(DirichletCharacter::trivial(p).is_even());
            assert!(omega.pow(p as i64 - 1).is_trivial());
            let ring = omega.coefficient_ring(4).unwrap();
            for a in 1..p {
                let v = ring.root(&omega.evaluate(a as i64).unwrap()).unwrap();
                assert_eq!(v.coords()[0] % p, a);
                assert_eq!(v.coords()[0], teichmuller_lift(a as i128, p, 4).unwrap().residue());
            }
        }
    }

    proptest! {
        #[test]
        fn evaluation_is_multiplicative(idx in 0usize..64, a in 1i64..10_000, b in 1i64..10_000) {
            let field = FieldSpec::full_cyclotomic(5, 7).unwrap();
            let chars = enumerate_characters(&field);
            let chi = &chars[idx % chars.len()];
            let m = chi.conductor() as i64;
            match (chi.evaluate(a), chi.evaluate(b), chi.evaluate(a * b)) {
                (Some(x), Some(y), Some(z)) => prop_assert_eq!(x.mul(&y), z),
                (x, y, z) => {
                    prop_assert!(z.is_none());
                    prop_assert!(x.is_none() || y.is_none());
                    prop_assert!(a.gcd(&m) > 1 || b.gcd(&m) > 1);
                }
            }
        }
    }
}
