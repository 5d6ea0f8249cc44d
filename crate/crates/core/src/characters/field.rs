use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{crt_pair, euler_phi, is_prime, mul_mod};
use crate::error::{Error, Result};

/// The abelian field `K = F(mu_p)`, where `F` is the subfield of `Q(mu_f)`
/// fixed by a subgroup `H` of `(Z/fZ)^x`.
///
/// `Gal(K/Q) = (Z/fZ)^x / H  x  (Z/pZ)^x`, and the `n`-th layer of the
/// cyclotomic Z_p-tower is `K_n = F(mu_{p^{n+1}})` with modulus `f p^{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    p: u64,
    f: u64,
    #[serde(rename = "H")]
    h_generators: Vec<u64>,
    #[serde(skip)]
    h_elements: BTreeSet<u64>,
}

impl FieldSpec {
    pub fn new(p: u64, f: u64, h_generators: Vec<u64>) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::Config(format!("p = {p} must be an odd prime")));
        }
        if f == 0 {
            return Err(Error::Config("f must be positive".into()));
        }
        if f.gcd(&p) != 1 {
            return Err(Error::Config(format!("gcd(f, p) = gcd({f}, {p}) must be 1")));
        }
        for &h in &h_generators {
            if f > 1 && h.gcd(&f) != 1 {
                return Err(Error::Config(format!("H generator {h} is not a unit mod {f}")));
            }
        }
        let h_generators: Vec<u64> = h_generators.iter().map(|h| h % f.max(1)).collect();
        let h_elements = subgroup_closure(&h_generators, f);
        Ok(Self { p, f, h_generators, h_elements })
    }

    /// `K = Q(mu_p)`.
    pub fn cyclotomic(p: u64) -> Result<Self> {
        Self::new(p, 1, Vec::new())
    }

    /// `K = Q(mu_{fp})`.
    pub fn full_cyclotomic(p: u64, f: u64) -> Result<Self> {
        Self::new(p, f, Vec::new())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u64 {
        self.f
    }

    pub fn h_generators(&self) -> &[u64] {
        &self.h_generators
    }

    /// Elements of `H` as residues mod `f`.
    pub fn h_elements(&self) -> &BTreeSet<u64> {
        &self.h_elements
    }

    pub fn h_contains(&self, a: u64) -> bool {
        self.h_elements.contains(&(a % self.f))
    }

    /// `|G| = phi(f)/|H| * (p - 1)`.
    pub fn group_order(&self) -> u64 {
        euler_phi(self.f) / self.h_elements.len() as u64 * (self.p - 1)
    }

    /// Modulus `f p` of `Gal(K/Q)`.
    pub fn base_modulus(&self) -> u64 {
        self.f * self.p
    }

    /// Modulus `f p^{n+1}` of `Gal(K_n/Q)`.
    pub fn level_modulus(&self, n: u32) -> u64 {
        self.f * self.p.pow(n + 1)
    }

    /// Elements of `H` embedded in `(Z/fp^{n+1})^x` (trivial at `p`).
    pub fn h_lifted(&self, modulus: u64) -> Vec<u64> {
        let pk = modulus / self.f;
        self.h_elements.iter().map(|&h| if self.f == 1 { 1 % modulus } else { crt_pair(h, self.f, 1, pk) }).collect()
    }
}

/// The subgroup of `(Z/mZ)^x` generated by `gens`.
pub(crate) fn subgroup_closure(gens: &[u64], m: u64) -> BTreeSet<u64> {
    let mut set = BTreeSet::new();
    set.insert(1 % m.max(1));
    if m <= 1 {
        return set;
    }
    let mut frontier = vec![1 % m];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = mul_mod(x, g % m, m);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}
