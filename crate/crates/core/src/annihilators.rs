//! The annihilators `f_{q,chi}(T) = (1+T)^{p^m} - zeta kappa_0^{p^m}` and the
//! degree of their lcm.

use serde::Serialize;

use crate::characters::{DirichletCharacter, RootOfUnity};
use crate::error::Result;
use crate::frobenius::{default_precision, inertia_trivial, m_index, sigma0_ok, sigma_p_value};

/// `(1+T)^{p^m} - zeta kappa_0^{p^m}`, kept symbolically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnnihilatorPoly {
    pub p: u64,
    pub m: u32,
    pub zeta: RootOfUnity,
}

#[derive(Serialize)]
struct AnnihilatorRepr {
    m: u32,
    zeta_order: u64,
    zeta_exponent: u64,
}

impl Serialize for AnnihilatorPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AnnihilatorRepr { m: self.m, zeta_order: self.zeta.order(), zeta_exponent: self.zeta.exponent() }.serialize(s)
    }
}

impl AnnihilatorPoly {
    pub fn new(p: u64, m: u32, zeta: RootOfUnity) -> Self {
        assert!(zeta.has_p_power_order(p), "zeta must have p-power order");
        Self { p, m, zeta }
    }

    pub fn degree(&self) -> u64 {
        self.p.pow(self.m)
    }

    /// Roots as `kappa_0 * exp(2 pi i t / p^{a+m})` for `t = k + j p^a`; returns
    /// the exponents `t` together with the denominator `p^{a+m}`.
    pub fn root_exponents(&self) -> (Vec<u64>, u64) {
        let pa = self.zeta.order();
        let den = pa * self.p.pow(self.m);
        let k = self.zeta.exponent_in(pa);
        ((0..self.degree()).map(|j| (k + j * pa) % den).collect(), den)
    }
}

/// `f_{q,chi}` when `q` lies in `S_chi`, `None` otherwise.
pub fn annihilator(chi: &DirichletCharacter, q: u64) -> Result<Option<AnnihilatorPoly>> {
    if !inertia_trivial(chi, q) || !sigma0_ok(chi, q)? {
        return Ok(None);
    }
    let p = chi.prime();
    let m = m_index(q, p)?;
    let zeta = sigma_p_value(chi, q, default_precision(m, chi))?;
    Ok(Some(AnnihilatorPoly::new(p, m, zeta)))
}

/// Root set of `a` is contained in the root set of `b`.
pub fn contains(a: &AnnihilatorPoly, b: &AnnihilatorPoly) -> bool {
    a.p == b.p && a.m <= b.m && a.zeta.pow(a.p.pow(b.m - a.m) as i64) == b.zeta
}

/// `deg lcm`: the root sets form a laminar family, so this is the sum of
/// `p^m` over the maximal members.
pub fn lcm_degree(polys: &[AnnihilatorPoly]) -> u64 {
    let mut uniq: Vec<AnnihilatorPoly> = polys.to_vec();
    uniq.sort();
    uniq.dedup();
    uniq.iter()
        .enumerate()
        .filter(|(i, a)| !uniq.iter().enumerate().any(|(j, b)| j != *i && contains(a, b)))
        .map(|(_, a)| a.degree())
        .sum()
}

/// `lcm_degree` by materializing every root in C and merging within `1e-9`.
pub fn lcm_degree_oracle(polys: &[AnnihilatorPoly]) -> u64 {
    distinct_complex_roots(polys).len() as u64
}

/// Complex roots of the product, merged within `1e-9`; `kappa_0` is replaced
/// by a generic real number.
pub fn distinct_complex_roots(polys: &[AnnihilatorPoly]) -> Vec<(f64, f64)> {
    let k0 = std::f64::consts::E / 2.0;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for f in polys {
        let (ts, den) = f.root_exponents();
        for t in ts {
            let theta = 2.0 * std::f64::consts::PI * t as f64 / den as f64;
            let z = (k0 * theta.cos(), k0 * theta.sin());
            if !out.iter().any(|w| (w.0 - z.0).hypot(w.1 - z.1) < 1e-9) {
                out.push(z);
            }
        }
    }
    out
}

/// Complex root sets of `a` and `b` are disjoint.
pub fn disjoint_roots(a: &AnnihilatorPoly, b: &AnnihilatorPoly) -> bool {
    let ra = distinct_complex_roots(std::slice::from_ref(a));
    let rb = distinct_complex_roots(std::slice::from_ref(b));
    !ra.iter().any(|x| rb.iter().any(|y| (x.0 - y.0).hypot(x.1 - y.1) < 1e-9))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::DirichletCharacter;
    use proptest::prelude::*;

    fn poly(p: u64, m: u32, n: u64, k: i64) -> AnnihilatorPoly {
        AnnihilatorPoly::new(p, m, RootOfUnity::new(n, k))
    }

    #[test]
    fn annihilator_examples() {
        let eps = DirichletCharacter::trivial(3);
        assert_eq!(annihilator(&eps, 19).unwrap(), Some(poly(3, 1, 1, 0)));
        let w3 = DirichletCharacter::teichmuller(5).pow(3);
        assert_eq!(annihilator(&w3, 7).unwrap(), None);
        assert_eq!(annihilator(&w3, 11).unwrap(), Some(poly(5, 0, 1, 0)));
        let w = DirichletCharacter::teichmuller(5);
        assert_eq!(annihilator(&w, 7).unwrap(), Some(poly(5, 1, 1, 0)));
    }

    #[test]
    fn containment_examples() {
        assert!(contains(&poly(3, 0, 1, 0), &poly(3, 1, 1, 0)));
        assert!(!contains(&poly(3, 0, 1, 0), &poly(3, 1, 3, 1)));
        assert!(contains(&poly(3, 0, 3, 1), &poly(3, 0, 3, 1)));
    }

    #[test]
    fn lcm_examples() {
        let cases = [
            (vec![poly(3, 0, 1, 0), poly(3, 1, 1, 0)], 3),
            (vec![poly(3, 0, 1, 0), poly(3, 0, 3, 1)], 2),
            (vec![poly(3, 1, 1, 0)], 3),
            (vec![poly(3, 0, 1, 0), poly(3, 1, 3, 1)], 4),
        ];
        for (family, expected) in cases {
            assert_eq!(lcm_degree(&family), expected, "{family:?}");
            assert_eq!(lcm_degree_oracle(&family), expected, "{family:?}");
        }
    }

    fn family() -> impl Strategy<Value = Vec<AnnihilatorPoly>> {
        prop::sample::select(vec![3u64, 5]).prop_flat_map(|p| {
            prop::collection::vec((0u32..=2, 0u32..=2, 0i64..25), 1..6)
                .prop_map(move |v| v.into_iter().map(|(m, a, k)| poly(p, m, p.pow(a), k)).collect())
        })
    }

    proptest! {
        #[test]
        fn lcm_agrees_with_oracle(fam in family()) {
            prop_assert_eq!(lcm_degree(&fam), lcm_degree_oracle(&fam));
            for a in &fam {
                for b in &fam {
                    prop_assert!(contains(a, b) || contains(b, a) || disjoint_roots(a, b));
                }
            }
        }

        #[test]
        fn lcm_bounds_and_symmetry(fam in family(), rot in 0usize..6) {
            let d = lcm_degree(&fam);
            let max = fam.iter().map(|f| f.degree()).max().unwrap();
            let sum: u64 = fam.iter().map(|f| f.degree()).sum();
            prop_assert!(max <= d && d <= sum);
            let mut shuffled = fam.clone();
            shuffled.rotate_left(rot % fam.len());
            shuffled.push(fam[0]);
            prop_assert_eq!(lcm_degree(&shuffled), d);
        }

        #[test]
        fn trivial_zetas_give_max(ms in prop::collection::vec(0u32..=3, 1..6)) {
            let fam: Vec<_> = ms.iter().map(|&m| poly(3, m, 1, 0)).collect();
            prop_assert_eq!(lcm_degree(&fam), 3u64.pow(*ms.iter().max().unwrap()));
        }
    }
}
