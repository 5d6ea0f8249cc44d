use std::collections::HashMap;

use num_integer::Integer;

use super::{crt_pair, euler_phi, factorize, inv_mod, mul_mod, pow_mod, smallest_primitive_root};
use crate::error::{Error, Result};

/// One cyclic factor of `(Z/MZ)^x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicFactor {
    /// Generator as a residue mod `M` (trivial at the other prime-power components).
    pub generator: u64,
    pub order: u64,
    /// The prime-power component this factor lives in.
    pub prime: u64,
    pub prime_power: u64,
    /// The generator reduced to the component modulus.
    pub local_generator: u64,
}

/// `(Z/MZ)^x` as a product of cyclic groups, with discrete logarithms.
///
/// Components are ordered by increasing prime. Each odd prime power
/// contributes its smallest primitive root; `2^k` contributes `-1` and,
/// for `k >= 3`, the element `3` of order `2^(k-2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGroupStructure {
    modulus: u64,
    factors: Vec<CyclicFactor>,
}

impl UnitGroupStructure {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::domain("modulus must be positive"));
        }
        let mut factors = Vec::new();
        for (l, k) in factorize(modulus) {
            let lk = l.pow(k);
            let other = modulus / lk;
            let lift = |g: u64| if other == 1 { g % lk } else { crt_pair(g, lk, 1, other) };
            if l == 2 {
                if k >= 2 {
                    factors.push(CyclicFactor {
                        generator: lift(lk - 1),
                        order: 2,
                        prime: 2,
                        prime_power: lk,
                        local_generator: lk - 1,
                    });
                }
                if k >= 3 {
                    factors.push(CyclicFactor {
                        generator: lift(3),
                        order: lk / 4,
                        prime: 2,
                        prime_power: lk,
                        local_generator: 3,
                    });
                }
            } else {
                let g = smallest_primitive_root(l, k);
                factors.push(CyclicFactor {
                    generator: lift(g),
                    order: lk / l * (l - 1),
                    prime: l,
                    prime_power: lk,
                    local_generator: g,
                });
            }
        }
        Ok(Self { modulus, factors })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn factors(&self) -> &[CyclicFactor] {
        &self.factors
    }

    pub fn orders(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.order).collect()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().map(|f| f.order).product()
    }

    /// `prod g_i^{e_i} mod M`.
    pub fn exp(&self, exponents: &[u64]) -> u64 {
        assert_eq!(exponents.len(), self.factors.len());
        let m = self.modulus;
        self.factors.iter().zip(exponents).fold(1 % m, |acc, (f, &e)| mul_mod(acc, pow_mod(f.generator, e, m), m))
    }

    /// Exponent vector of a unit, each entry reduced to `[0, n_i)`.
    pub fn dlog(&self, a: u64) -> Result<Vec<u64>> {
        let m = self.modulus;
        if a.gcd(&m) != 1 && m > 1 {
            return Err(Error::domain(format!("{a} is not a unit mod {m}")));
        }
        let mut out = Vec::with_capacity(self.factors.len());
        let mut i = 0;
        while i < self.factors.len() {
            let f = &self.factors[i];
            let local = a % f.prime_power;
            if f.prime == 2 {
                // (Z/2^k)^x = <-1> x <3>, and <3> is the set of residues = 1, 3 mod 8.
                let minus = if f.prime_power == 4 { local == 3 } else { local % 8 >= 5 };
                out.push(minus as u64);
                if let Some(next) = self.factors.get(i + 1).filter(|g| g.prime == 2) {
                    let unsigned = if minus { next.prime_power - local } else { local };
                    out.push(discrete_log(3, unsigned, next.order, next.prime_power)?);
                    i += 1;
                }
            } else {
                out.push(discrete_log(f.local_generator, local, f.order, f.prime_power)?);
            }
            i += 1;
        }
        Ok(out)
    }

    pub fn phi(&self) -> u64 {
        euler_phi(self.modulus)
    }
}

/// Baby-step giant-step for `g^x = h (mod m)` in a cyclic group of order `n`;
/// plain enumeration for tiny groups.
pub(crate) fn discrete_log(g: u64, h: u64, n: u64, m: u64) -> Result<u64> {
    let h = h % m;
    if n <= 64 {
        let mut x = 1 % m;
        for e in 0..n {
            if x == h {
                return Ok(e);
            }
            x = mul_mod(x, g, m);
        }
        return Err(Error::domain(format!("{h} is not a power of {g} mod {m}")));
    }
    let step = (n as f64).sqrt().ceil() as u64;
    let mut baby = HashMap::with_capacity(step as usize);
    let mut x = 1 % m;
    for j in 0..step {
        baby.entry(x).or_insert(j);
        x = mul_mod(x, g, m);
    }
    let giant = inv_mod(pow_mod(g, step, m), m).ok_or_else(|| Error::domain(format!("{g} is not a unit mod {m}")))?;
    let mut y = h;
    for i in 0..=step {
        if let Some(&j) = baby.get(&y) {
            return Ok((i * step + j) % n);
        }
        y = mul_mod(y, giant, m);
    }
    Err(Error::domain(format!("{h} is not a power of {g} mod {m}")))
}
