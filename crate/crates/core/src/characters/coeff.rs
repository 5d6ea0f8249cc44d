//! A concrete model of `O_chi = Z_p[mu_n]` modulo `p^N`.
//!
//! For `n = p^a n0` with `p` not dividing `n0`, `O_chi = W[pi] / E(pi)` where
//! `W = Z_p[Y]/h(Y)` is unramified of degree `f = ord_{n0}(p)` and
//! `E(pi) = Phi_{p^a}(1 + pi)` is Eisenstein of degree `e = phi(p^a)`.
//! Elements are stored in the Z_p-basis `Y^i pi^j`, so p-divisibility is
//! coordinatewise and the pi-adic valuation is read off directly.
//!
//! Roots of unity are embedded as follows: `zeta_{p^a} = 1 + pi`, and
//! `zeta_{n0}` is the Teichmuller lift of a root of `h`. When `n0 | p - 1`
//! (so `f = 1`) the root is pinned to `omega(g)^{(p-1)/n0}` for the smallest
//! primitive root `g` mod p; otherwise `h` is the smallest monic irreducible
//! factor of `Phi_{n0}` mod p, and the lifted root is replaced by its power
//! whose power of order `gcd(n0, p - 1)` is `omega(g)^{(p-1)/gcd}`.

use crate::arith::{checked_pow, mul_order, pow_mod, smallest_primitive_root, split_p_part, teichmuller_lift};
use crate::error::{Error, Result};

use super::RootOfUnity;

/// Element of a [`CoefficientRing`], coordinates mod `p^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    coords: Vec<u64>,
}

impl RingElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

#[derive(Debug, Clone)]
pub struct CoefficientRing {
    p: u64,
    precision: u32,
    modulus: u64,
    order: u64,
    prime_to_p: u64,
    p_power: u64,
    f: usize,
    e: usize,
    /// Monic `h(Y)`, low degree first, `f + 1` entries.
    h: Vec<u64>,
    /// Monic `E(pi)`, low degree first, `e + 1` entries.
    eisenstein: Vec<u64>,
    zeta_n0_powers: Vec<RingElement>,
    zeta_pa_powers: Vec<RingElement>,
}

impl CoefficientRing {
    /// The ring generated over `Z_p` by the `n`-th roots of unity.
    pub fn new(p: u64, n: u64, precision: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("roots of unity of order 0"));
        }
        let modulus = checked_pow(p, precision)?;
        let (a, n0) = split_p_part(n, p);
        let p_power = p.pow(a);
        let f = mul_order(p % n0.max(1), n0)? as usize;
        let e = if a == 0 { 1 } else { (p_power / p * (p - 1)) as usize };

        let (h, zeta_n0) = if f == 1 {
            let g = smallest_primitive_root(p, 1);
            let r = pow_mod(g, (p - 1) / n0, p);
            let t = teichmuller_lift(r as i128, p, precision)?.residue();
            (vec![(modulus - r) % modulus, 1], t)
        } else {
            (smallest_factor_of_cyclotomic(n0, p, f)?, 0)
        };

        let eisenstein = eisenstein_poly(p, a, modulus);

        let mut ring = Self {
            p,
            precision,
            modulus,
            order: n,
            prime_to_p: n0,
            p_power,
            f,
            e,
            h,
            eisenstein,
            zeta_n0_powers: Vec::new(),
            zeta_pa_powers: Vec::new(),
        };

        let zeta_n0 = if f == 1 {
            ring.scalar(zeta_n0)
        } else {
            // Teichmuller lift of Y inside W: iterate x -> x^{p^f}.
            let mut x = ring.zero();
            x.coords[1] = 1;
            let q = (p as u128).pow(f as u32);
            for _ in 0..=precision {
                let next = ring.pow(&x, q);
                if next == x {
                    break;
                }
                x = next;
            }
            // replace the root by the power whose image in mu_{p-1} agrees with
            // omega(g)
            let g1 = num_integer::gcd(n0, p - 1);
            let g = smallest_primitive_root(p, 1);
            let target = ring.scalar(teichmuller_lift(pow_mod(g, (p - 1) / g1, p) as i128, p, precision)?.residue());
            let k = (1..n0)
                .filter(|&k| num_integer::gcd(k, n0) == 1)
                .find(|&k| ring.pow(&x, (k * (n0 / g1)) as u128) == target)
                .ok_or_else(|| Error::inconsistency("no root of unity matches the omega pinning"))?;
            ring.pow(&x, k as u128)
        };
        let mut zeta_pa = ring.one();
        if a > 0 {
            zeta_pa.coords[ring.f] = 1;
        }
        ring.zeta_n0_powers = ring.powers(&zeta_n0, n0 as usize);
        ring.zeta_pa_powers = ring.powers(&zeta_pa, p_power as usize);
        if !ring.pow(&zeta_n0, n0 as u128).eq(&ring.one()) {
            return Err(Error::inconsistency(format!("zeta_{n0} is not a root of unity in W")));
        }
        Ok(ring)
    }

    fn powers(&self, x: &RingElement, count: usize) -> Vec<RingElement> {
        let mut out = Vec::with_capacity(count);
        let mut acc = self.one();
        for _ in 0..count {
            out.push(acc.clone());
            acc = self.mul(&acc, x);
        }
        out
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Order `n` of the roots of unity generating the ring.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Rank over `Z_p`, which is `[Q_p(mu_n) : Q_p]`.
    pub fn rank(&self) -> usize {
        self.f * self.e
    }

    pub fn residue_degree(&self) -> usize {
        self.f
    }

    pub fn ramification_index(&self) -> usize {
        self.e
    }

    pub fn zero(&self) -> RingElement {
        RingElement { coords: vec![0; self.rank()] }
    }

    pub fn one(&self) -> RingElement {
        self.scalar(1)
    }

    pub fn scalar(&self, c: u64) -> RingElement {
        let mut z = self.zero();
        z.coords[0] = c % self.modulus;
        z
    }

    pub fn from_signed(&self, c: i128) -> RingElement {
        self.scalar(c.rem_euclid(self.modulus as i128) as u64)
    }

    pub fn from_coords(&self, coords: Vec<u64>) -> RingElement {
        assert_eq!(coords.len(), self.rank());
        RingElement { coords: coords.into_iter().map(|c| c % self.modulus).collect() }
    }

    /// Image of a root of unity whose order divides `n`.
    pub fn root(&self, z: &RootOfUnity) -> Result<RingElement> {
        if !self.order.is_multiple_of(z.order()) {
            return Err(Error::domain(format!("{z:?} does not lie in the ring of {}-th roots of unity", self.order)));
        }
        let (zp, z0) = z.split(self.p);
        let i0 = z0.exponent_in(self.prime_to_p) as usize;
        let ip = zp.exponent_in(self.p_power) as usize;
        Ok(self.mul(&self.zeta_n0_powers[i0], &self.zeta_pa_powers[ip]))
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let m = self.modulus;
        RingElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| ((*x as u128 + *y as u128) % m as u128) as u64)
                .collect(),
        }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let m = self.modulus;
        RingElement { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| (x + (m - y)) % m).collect() }
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        self.sub(&self.zero(), a)
    }

    pub fn scale(&self, a: &RingElement, c: u64) -> RingElement {
        let m = self.modulus as u128;
        RingElement { coords: a.coords.iter().map(|x| ((*x as u128 * (c as u128 % m)) % m) as u64).collect() }
    }

    fn w_mul_acc(&self, acc: &mut [u128], a: &[u64], b: &[u64]) {
        let m = self.modulus as u128;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] = (acc[i + j] + x as u128 * y as u128) % m;
            }
        }
    }

    /// Reduce a `W`-polynomial of degree `< 2f - 1` modulo `h`.
    fn w_reduce(&self, t: &mut Vec<u128>) {
        let m = self.modulus as u128;
        let f = self.f;
        for k in (f..t.len()).rev() {
            let c = t[k] % m;
            if c == 0 {
                continue;
            }
            for i in 0..f {
                let sub = c * self.h[i] as u128 % m;
                t[k - f + i] = (t[k - f + i] + m - sub) % m;
            }
            t[k] = 0;
        }
        t.truncate(f);
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let (f, e) = (self.f, self.e);
        let m = self.modulus as u128;
        // acc[j] is a W-coefficient of pi^j, still unreduced in Y.
        let mut acc: Vec<Vec<u128>> = vec![vec![0; 2 * f - 1]; 2 * e - 1];
        for j1 in 0..e {
            let x = &a.coords[j1 * f..(j1 + 1) * f];
            if x.iter().all(|&c| c == 0) {
                continue;
            }
            for j2 in 0..e {
                let y = &b.coords[j2 * f..(j2 + 1) * f];
                self.w_mul_acc(&mut acc[j1 + j2], x, y);
            }
        }
        let mut w: Vec<Vec<u128>> = acc
            .into_iter()
            .map(|mut t| {
                self.w_reduce(&mut t);
                t
            })
            .collect();
        // pi^e = -sum_{i<e} E_i pi^i
        for k in (e..w.len()).rev() {
            let top = std::mem::take(&mut w[k]);
            if top.iter().all(|&c| c == 0) {
                continue;
            }
            for i in 0..e {
                let ei = self.eisenstein[i] as u128;
                if ei == 0 {
                    continue;
                }
                for (y, &c) in top.iter().enumerate() {
                    w[k - e + i][y] = (w[k - e + i][y] + m - c * ei % m) % m;
                }
            }
        }
        let mut coords = Vec::with_capacity(f * e);
        for wj in w.into_iter().take(e) {
            coords.extend(wj.into_iter().map(|c| c as u64));
        }
        RingElement { coords }
    }

    pub fn pow(&self, x: &RingElement, mut k: u128) -> RingElement {
        let mut acc = self.one();
        let mut base = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, x: &RingElement) -> bool {
        x.coords.iter().all(|&c| c == 0)
    }

    /// Units are the elements with nonzero image in the residue field, i.e.
    /// whose `pi^0` coefficient is nonzero mod p.
    pub fn is_unit(&self, x: &RingElement) -> bool {
        x.coords[..self.f].iter().any(|&c| c % self.p != 0)
    }

    /// Valuation in powers of the uniformizer `pi` (`v_pi(p) = e`), or `None`
    /// when the element vanishes at this precision.
    pub fn valuation(&self, x: &RingElement) -> Option<u32> {
        let mut best: Option<u32> = None;
        for j in 0..self.e {
            let vw = x.coords[j * self.f..(j + 1) * self.f]
                .iter()
                .filter(|&&c| c != 0)
                .map(|&c| {
                    let (mut v, mut c) = (0u32, c);
                    while c % self.p == 0 {
                        c /= self.p;
                        v += 1;
                    }
                    v
                })
                .min();
            if let Some(v) = vw {
                let val = v * self.e as u32 + j as u32;
                best = Some(best.map_or(val, |b| b.min(val)));
            }
        }
        best
    }

    /// Divide every coordinate by `p^k`; fails unless all are divisible.
    pub fn div_by_p_power(&self, x: &RingElement, k: u32) -> Result<RingElement> {
        let pk = self.p.pow(k);
        if x.coords.iter().any(|c| c % pk != 0) {
            return Err(Error::domain(format!("element is not divisible by {}^{k}", self.p)));
        }
        Ok(RingElement { coords: x.coords.iter().map(|c| c / pk).collect() })
    }

    /// Matrix of multiplication by `x` in the basis `Y^i pi^j`: column `c` is
    /// `x * basis_c`.
    pub fn mult_matrix(&self, x: &RingElement) -> Vec<Vec<u64>> {
        let d = self.rank();
        let cols: Vec<Vec<u64>> = (0..d)
            .map(|c| {
                let mut b = self.zero();
                b.coords[c] = 1;
                self.mul(x, &b).coords
            })
            .collect();
        (0..d).map(|r| cols.iter().map(|col| col[r]).collect()).collect()
    }

    /// Reduction of `x` to the residue field `F_p[Y]/h`, as coordinates mod p.
    pub fn residue(&self, x: &RingElement) -> Vec<u64> {
        x.coords[..self.f].iter().map(|c| c % self.p).collect()
    }
}

/// `Phi_{p^a}(1 + pi)` with coefficients mod `modulus`; `pi` itself when `a = 0`.
fn eisenstein_poly(p: u64, a: u32, modulus: u64) -> Vec<u64> {
    if a == 0 {
        return vec![0, 1];
    }
    let m = modulus as u128;
    let mul = |x: &[u64], y: &[u64]| -> Vec<u64> {
        let mut out = vec![0u128; x.len() + y.len() - 1];
        for (i, &a) in x.iter().enumerate() {
            for (j, &b) in y.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % m;
            }
        }
        out.into_iter().map(|c| c as u64).collect()
    };
    // u = (1 + pi)^{p^{a-1}}
    let mut u = vec![1u64 % modulus];
    for _ in 0..p.pow(a - 1) {
        u = mul(&u, &[1, 1]);
    }
    let mut sum = vec![0u64; (u.len() - 1) * (p as usize - 1) + 1];
    let mut term = vec![1u64 % modulus];
    for _ in 0..p {
        for (i, &c) in term.iter().enumerate() {
            sum[i] = ((sum[i] as u128 + c as u128) % m) as u64;
        }
        if term.len() < sum.len() {
            term = mul(&term, &u);
        }
    }
    sum
}

fn poly_rem_mod_p(num: &[u64], den: &[u64], p: u64) -> Vec<u64> {
    // den monic
    let mut r: Vec<u64> = num.iter().map(|c| c % p).collect();
    let dd = den.len() - 1;
    while r.len() > dd {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * d % p) % p;
            }
        }
        r.pop();
    }
    while r.len() > 1 && *r.last().unwrap() == 0 {
        r.pop();
    }
    r
}

fn poly_div_exact_mod_p(num: &[u64], den: &[u64], p: u64) -> Vec<u64> {
    let dd = den.len() - 1;
    let mut r: Vec<u64> = num.iter().map(|c| c % p).collect();
    let mut q = vec![0u64; r.len().saturating_sub(dd).max(1)];
    while r.len() > dd {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        q[shift] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * d % p) % p;
            }
        }
        r.pop();
    }
    q
}

/// `Phi_n` mod p, low degree first.
fn cyclotomic_mod_p(n: u64, p: u64) -> Vec<u64> {
    let mut poly = vec![0u64; n as usize + 1];
    poly[0] = p - 1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_mod_p(d, p);
            poly = poly_div_exact_mod_p(&poly, &phi_d, p);
        }
    }
    poly
}

/// Smallest (by coefficient vector, top coefficient first) monic degree-`f`
/// divisor of `Phi_{n0}` mod p. All irreducible factors have degree `f`, so
/// any such divisor is irreducible.
fn smallest_factor_of_cyclotomic(n0: u64, p: u64, f: usize) -> Result<Vec<u64>> {
    let phi = cyclotomic_mod_p(n0, p);
    let count = (p as u128).pow(f as u32);
    if count > 10_000_000 {
        return Err(Error::domain(format!("residue field F_{p}^{f} is too large to search")));
    }
    for idx in 0..count {
        let mut cand = Vec::with_capacity(f + 1);
        let mut t = idx;
        for _ in 0..f {
            cand.push((t % p as u128) as u64);
            t /= p as u128;
        }
        cand.push(1);
        let rem = poly_rem_mod_p(&phi, &cand, p);
        if rem.iter().all(|&c| c == 0) {
            return Ok(cand);
        }
    }
    Err(Error::inconsistency(format!("no degree-{f} factor of Phi_{n0} mod {p}")))
}
