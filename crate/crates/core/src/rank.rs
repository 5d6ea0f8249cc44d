//! Z_p-ranks of the chi-quotients of the tame Iwasawa module `X_S(K_inf)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::annihilators::{annihilator, lcm_degree, AnnihilatorPoly};
use crate::arith::is_prime;
use crate::characters::{conjugacy_classes, enumerate_characters, DirichletCharacter, FieldSpec, Parity};
use crate::error::{Error, Result};
use crate::frobenius::m_index;
use crate::stickelberger::lambda_minus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    InputTable,
    ConjecturalGreenberg,
    StickelbergerComputed,
    UnconditionalZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LambdaValue {
    pub value: u64,
    pub provenance: Provenance,
    pub conjectural: bool,
}

/// Where `lambda_chi = rank X(K_inf)_chi` comes from.
///
/// Lookup order: `eps` and `omega` are always 0 (the omega-part of the class
/// groups in the cyclotomic tower is trivial); then the table (by label, by `chi<index>`,
/// then the key `all`); then Stickelberger elements for odd `chi != omega`;
/// then Greenberg's conjecture for even `chi` when allowed.
#[derive(Debug, Clone, Default)]
pub struct LambdaProvider {
    pub table: BTreeMap<String, u64>,
    pub assume_greenberg: bool,
    pub use_stickelberger: bool,
}

impl LambdaProvider {
    pub fn table(table: BTreeMap<String, u64>) -> Self {
        Self { table, assume_greenberg: false, use_stickelberger: true }
    }

    /// Every lambda equal to `value`.
    pub fn constant(value: u64) -> Self {
        Self::table(BTreeMap::from([("all".to_string(), value)]))
    }

    pub fn greenberg() -> Self {
        Self { table: BTreeMap::new(), assume_greenberg: true, use_stickelberger: true }
    }

    pub fn with_greenberg(mut self, yes: bool) -> Self {
        self.assume_greenberg |= yes;
        self
    }

    pub fn resolve(&self, chi: &DirichletCharacter, label: &str, index: usize) -> Result<LambdaValue> {
        let value = |value, provenance| LambdaValue {
            value,
            provenance,
            conjectural: provenance == Provenance::ConjecturalGreenberg,
        };
        if chi.is_trivial() || chi.is_teichmuller() {
            return Ok(value(0, Provenance::UnconditionalZero));
        }
        let from_table =
            self.table.get(label).or_else(|| self.table.get(&format!("chi{index}"))).or_else(|| self.table.get("all"));
        if let Some(&v) = from_table {
            return Ok(value(v, Provenance::InputTable));
        }
        if chi.is_odd() && self.use_stickelberger {
            let l = lambda_minus(chi)?;
            return Ok(value(l.zp_rank(chi), Provenance::StickelbergerComputed));
        }
        if chi.is_even() && self.assume_greenberg {
            return Ok(value(0, Provenance::ConjecturalGreenberg));
        }
        Err(Error::LambdaUnavailable(label.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankRecord {
    pub character: String,
    pub d_chi: u64,
    pub parity: Parity,
    #[serde(rename = "S_chi")]
    pub s_chi: Vec<u64>,
    pub m_map: BTreeMap<u64, u32>,
    pub annihilators: Vec<AnnihilatorPoly>,
    #[serde(rename = "degF")]
    pub deg_f: u64,
    #[serde(rename = "P_chi")]
    pub p_chi: u64,
    pub lambda: LambdaValue,
    pub rank: u64,
}

impl RankRecord {
    /// The rank recomputed from the other fields.
    pub fn expected_rank(&self) -> u64 {
        if self.s_chi.is_empty() {
            return self.lambda.value;
        }
        let p = self.annihilators.first().map(|a| a.p).unwrap_or(1);
        let tame: u64 = self.m_map.values().map(|&m| self.d_chi * p.pow(m)).sum();
        self.lambda.value + tame - self.p_chi
    }
}

pub(crate) fn validate_s(s: &[u64], p: u64) -> Result<()> {
    if s.contains(&p) {
        return Err(Error::Config("S must not contain p".into()));
    }
    for (i, &q) in s.iter().enumerate() {
        if !is_prime(q) {
            return Err(Error::Config(format!("S entry {q} is not prime")));
        }
        if s[..i].contains(&q) {
            return Err(Error::Config(format!("S entry {q} is repeated")));
        }
    }
    Ok(())
}

/// `S_chi = { q in S : chi(I_q) = 1, chi^{-1} omega (sigma_0) = 1 }`, in the order of `S`.
pub fn s_chi(chi: &DirichletCharacter, s: &[u64]) -> Result<Vec<u64>> {
    validate_s(s, chi.prime())?;
    let mut out = Vec::new();
    for &q in s {
        if crate::frobenius::inertia_trivial(chi, q) && crate::frobenius::sigma0_ok(chi, q)? {
            out.push(q);
        }
    }
    Ok(out)
}

/// `P_chi`: 1 for omega, 0 for other odd characters, `d_chi deg F` for even ones.
pub fn p_chi(chi: &DirichletCharacter, deg_f: u64) -> u64 {
    if chi.is_teichmuller() {
        1
    } else if chi.is_odd() {
        0
    } else {
        chi.d_chi() * deg_f
    }
}

pub fn rank_chi(
    chi: &DirichletCharacter,
    label: &str,
    index: usize,
    s: &[u64],
    lambda: &LambdaProvider,
) -> Result<RankRecord> {
    let p = chi.prime();
    let sc = s_chi(chi, s)?;
    let lam = lambda.resolve(chi, label, index)?;
    let mut m_map = BTreeMap::new();
    let mut annihilators = Vec::new();
    for &q in &sc {
        m_map.insert(q, m_index(q, p)?);
        annihilators.push(annihilator(chi, q)?.expect("q lies in S_chi"));
    }
    let (deg_f, pc, rank) = if sc.is_empty() {
        (0, 0, lam.value)
    } else {
        let deg_f = lcm_degree(&annihilators);
        let pc = p_chi(chi, deg_f);
        let tame: u64 = m_map.values().map(|&m| chi.d_chi() * p.pow(m)).sum();
        (deg_f, pc, lam.value + tame - pc)
    };
    Ok(RankRecord {
        character: label.to_string(),
        d_chi: chi.d_chi(),
        parity: chi.parity(),
        s_chi: sc,
        m_map,
        annihilators,
        deg_f,
        p_chi: pc,
        lambda: lam,
        rank,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankTotal {
    pub records: Vec<RankRecord>,
    pub total: u64,
    pub conjectural: bool,
}

/// One record per conjugacy class of characters of `Gal(K/Q)`.
pub fn rank_total(field: &FieldSpec, s: &[u64], lambda: &LambdaProvider) -> Result<RankTotal> {
    validate_s(s, field.p())?;
    let chars = enumerate_characters(field);
    let mut records = Vec::new();
    for class in conjugacy_classes(&chars, field.p()) {
        let i = class[0];
        records.push(rank_chi(&chars[i], &chars[i].label(i), i, s, lambda)?);
    }
    let total = records.iter().map(|r| r.rank).sum();
    let conjectural = records.iter().any(|r| r.lambda.conjectural);
    Ok(RankTotal { records, total, conjectural })
}

/// The rank over the cyclotomic Z_p-extension of Q:
/// `sum p^{m_q} - max p^{m_q}` over `q in S` with `q = 1 mod p`.
pub fn rank_rational(s: &[u64], p: u64) -> Result<u64> {
    validate_s(s, p)?;
    let degs: Vec<u64> =
        s.iter().filter(|&&q| q % p == 1).map(|&q| m_index(q, p).map(|m| p.pow(m))).collect::<Result<_>>()?;
    Ok(degs.iter().sum::<u64>() - degs.iter().max().copied().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::RootOfUnity;
    use proptest::prelude::*;

    fn omega(p: u64) -> DirichletCharacter {
        DirichletCharacter::teichmuller(p)
    }

    fn chi8(p: u64) -> DirichletCharacter {
        DirichletCharacter::from_values(p, 8, vec![RootOfUnity::ONE, RootOfUnity::minus_one()]).unwrap()
    }

    #[test]
    fn s_chi_examples() {
        assert_eq!(s_chi(&omega(5), &[7, 11]).unwrap(), vec![7, 11]);
        assert_eq!(s_chi(&omega(5).pow(3), &[7, 11]).unwrap(), vec![11]);
        assert_eq!(s_chi(&chi8(3), &[5, 7, 13]).unwrap(), vec![5, 7]);
        assert_eq!(s_chi(&omega(3), &[3, 7]).unwrap_err(), Error::Config("S must not contain p".into()));
    }

    #[test]
    fn rank_chi_examples() {
        let zero = LambdaProvider::constant(0);
        let w = omega(5);
        let ranks: Vec<u64> = (0..4).map(|i| rank_chi(&w.pow(i), "x", 0, &[7, 11], &zero).unwrap().rank).collect();
        assert_eq!(ranks, vec![0, 5, 0, 1]);
        let r = rank_chi(&DirichletCharacter::trivial(5), "eps", 0, &[7, 11], &zero).unwrap();
        assert_eq!((r.s_chi.clone(), r.deg_f, r.p_chi), (vec![11], 1, 1));
        let r = rank_chi(&w.pow(2), "omega^2", 2, &[], &LambdaProvider::constant(4)).unwrap();
        assert_eq!(r.rank, 4);
    }

    #[test]
    fn totals() {
        let t = rank_total(&FieldSpec::cyclotomic(5).unwrap(), &[7, 11], &LambdaProvider::constant(0)).unwrap();
        assert_eq!(t.records.iter().map(|r| r.rank).collect::<Vec<_>>(), vec![0, 5, 0, 1]);
        assert_eq!(t.total, 6);
        assert!(!t.conjectural);
        let t = rank_total(&FieldSpec::cyclotomic(3).unwrap(), &[5], &LambdaProvider::constant(0)).unwrap();
        assert_eq!(t.total, 0);
        let t = rank_total(&FieldSpec::cyclotomic(7).unwrap(), &[], &LambdaProvider::constant(2)).unwrap();
        assert_eq!(t.total, 2 * 4); // eps and omega stay 0
    }

    #[test]
    fn quadratic_field_example() {
        let field = FieldSpec::new(3, 8, vec![7]).unwrap();
        let provider = LambdaProvider::greenberg();
        let t = rank_total(&field, &[5, 7, 13], &provider).unwrap();
        let rec = t.records.iter().find(|r| r.parity == Parity::Even && r.character != "eps").unwrap();
        assert_eq!(rec.s_chi, vec![5, 7]);
        assert_eq!(rec.deg_f, 1);
        assert_eq!(rec.rank, 1);
        assert!(rec.lambda.conjectural);
        assert!(t.conjectural);
    }

    #[test]
    fn lambda_resolution() {
        let p = LambdaProvider::default();
        let field = FieldSpec::new(3, 8, vec![7]).unwrap();
        let chars = enumerate_characters(&field);
        let even = chars.iter().position(|c| c.is_even() && !c.is_trivial()).unwrap();
        assert!(matches!(p.resolve(&chars[even], "chi1", even), Err(Error::LambdaUnavailable(_))));
        let v = p.resolve(&omega(5), "omega", 1).unwrap();
        assert_eq!((v.value, v.provenance), (0, Provenance::UnconditionalZero));
        let st = LambdaProvider::table(BTreeMap::new());
        let v = st.resolve(&omega(37).pow(5), "omega^5", 5).unwrap();
        assert_eq!((v.value, v.provenance), (1, Provenance::StickelbergerComputed));
        let v = st.resolve(&DirichletCharacter::trivial(5), "eps", 0).unwrap();
        assert_eq!(v.provenance, Provenance::UnconditionalZero);
    }

    #[test]
    fn rational_examples() {
        assert_eq!(rank_rational(&[7, 13], 3).unwrap(), 1);
        assert_eq!(rank_rational(&[5], 3).unwrap(), 0);
        assert_eq!(rank_rational(&[7, 19], 3).unwrap(), 1);
    }

    const PRIMES: [u64; 24] =
        [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 163];

    fn prime_set(p: u64) -> impl Strategy<Value = Vec<u64>> {
        prop::sample::subsequence(PRIMES.iter().copied().filter(move |&q| q != p).collect::<Vec<_>>(), 0..8)
    }

    proptest! {
        #[test]
        fn trivial_character_matches_rational(p in prop::sample::select(vec![3u64, 5, 7]), seed in 0u64..1000) {
            let s: Vec<u64> = PRIMES.iter().copied().filter(|&q| q != p && (q * 31 + seed) % 3 == 0).collect();
            let r = rank_chi(&DirichletCharacter::trivial(p), "eps", 0, &s, &LambdaProvider::default()).unwrap();
            prop_assert_eq!(r.rank, rank_rational(&s, p).unwrap());
        }

        #[test]
        fn monotone_in_s(s in prime_set(5), extra in prop::sample::select(vec![2u64, 11, 31, 41, 61])) {
            let zero = LambdaProvider::constant(0);
            let mut bigger = s.clone();
            if !bigger.contains(&extra) { bigger.push(extra); }
            for i in 0..4 {
                let chi = omega(5).pow(i);
                let a = rank_chi(&chi, "x", 0, &s, &zero).unwrap();
                let b = rank_chi(&chi, "x", 0, &bigger, &zero).unwrap();
                prop_assert!(a.rank <= b.rank);
                prop_assert!(a.rank >= a.lambda.value);
                prop_assert_eq!(a.rank, a.expected_rank());
            }
        }

        #[test]
        fn even_single_prime_gives_lambda(q in prop::sample::select(vec![7u64, 13, 19, 31, 37, 43, 61, 73]), lam in 0u64..4) {
            let field = FieldSpec::new(3, 8, vec![7]).unwrap();
            let chars = enumerate_characters(&field);
            for (i, chi) in chars.iter().enumerate() {
                if chi.is_even() {
                    let r = rank_chi(chi, "x", i, &[q], &LambdaProvider::constant(lam)).unwrap();
                    if r.s_chi.len() == 1 {
                        prop_assert_eq!(r.rank, r.lambda.value);
                    }
                }
            }
        }
    }
}
