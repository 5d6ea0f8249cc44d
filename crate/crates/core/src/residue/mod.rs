//! Finite-level model of `R_q`, the limit of the p-parts of `(O_{K_n}/q)^x`.
//!
//! Primes of the inertia field of `K_n` above `q` are the cosets of the
//! Frobenius subgroup `D = <q>` in `G'' = (Z/f' p^{n+1})^x / H'`. The p-part
//! of each residue field is cyclic of order `p^{e_n}` with Frobenius acting
//! as multiplication by `q`, so the module is the induced module
//! `Ind_D^{G''} Z/p^{e_n}`. No number field arithmetic is needed.

mod lattice;

use std::collections::HashMap;

use serde::Serialize;

pub use lattice::Echelon;

use crate::arith::{
    checked_pow, crt_pair, mul_mod, pow_mod, smallest_primitive_root, teichmuller_lift, UnitGroupStructure,
};
use crate::characters::{CoefficientRing, DirichletCharacter, FieldSpec};
use crate::error::{Error, Result};
use crate::frobenius::{default_precision, m_index, sigma_p_value, splitting_count, InertiaQuotient, SplittingData};

/// Extra digits carried beyond `p^{e_n}` during elimination.
pub const GUARD: u32 = 4;

#[derive(Debug, Clone)]
pub struct ResidueModule {
    field: FieldSpec,
    q: u64,
    level: u32,
    splitting: SplittingData,
    quotient: InertiaQuotient,
    /// Coset representatives `t_c` of `D` in `G''`, canonical residues.
    reps: Vec<u64>,
    /// Canonical element of `G''` -> `(c, j)` with element `= t_c Frob^j`.
    coset_of: HashMap<u64, (usize, u64)>,
}

/// `g . e_c = q^{twist} e_{target}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CosetImage {
    pub target: usize,
    pub twist: u64,
}

pub fn residue_module(field: &FieldSpec, q: u64, n: u32) -> Result<ResidueModule> {
    let splitting = splitting_count(field, q, n)?;
    let quotient = InertiaQuotient::new(field, q, n)?;
    let m = quotient.modulus;
    let frob = quotient.canonical(q);
    let mut elements: Vec<u64> =
        (1..m.max(2)).filter(|&a| num_integer::gcd(a, m) == 1).map(|a| quotient.canonical(a)).collect();
    elements.sort_unstable();
    elements.dedup();
    let mut reps = Vec::new();
    let mut coset_of = HashMap::new();
    for &x in &elements {
        if coset_of.contains_key(&x) {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        let mut y = x;
        for j in 0..splitting.residue_degree {
            coset_of.insert(quotient.canonical(y), (c, j));
            y = mul_mod(y, frob, m);
        }
    }
    if reps.len() as u64 != splitting.prime_count {
        return Err(Error::inconsistency(format!(
            "{} cosets of <q> but splitting_count gives {} primes",
            reps.len(),
            splitting.prime_count
        )));
    }
    Ok(ResidueModule { field: field.clone(), q, level: n, splitting, quotient, reps, coset_of })
}

impl ResidueModule {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn splitting(&self) -> SplittingData {
        self.splitting
    }

    /// Number of primes above `q` (the rank over `Z/p^{e_n}`).
    pub fn cosets(&self) -> usize {
        self.reps.len()
    }

    pub fn exponent(&self) -> u32 {
        self.splitting.p_exponent
    }

    /// `log_p |M| = e_n r_n`.
    pub fn total_exponent(&self) -> u64 {
        self.exponent() as u64 * self.cosets() as u64
    }

    /// Full level modulus `f p^{n+1}`.
    pub fn level_modulus(&self) -> u64 {
        self.field.level_modulus(self.level)
    }

    /// Action of a unit `g` (mod the level modulus) on the coset basis.
    pub fn action(&self, g: u64) -> Vec<CosetImage> {
        let m = self.quotient.modulus;
        let g = g % m;
        self.reps
            .iter()
            .map(|&t| {
                let (target, twist) = self.coset_of[&self.quotient.canonical(mul_mod(g, t, m))];
                CosetImage { target, twist }
            })
            .collect()
    }

    /// Generators of `Gal(K_n/Q_n)` inside `(Z/f p^{n+1})^x`: lifts of the
    /// generators of `(Z/f)^x`, and `omega(g)` for the smallest primitive root `g`.
    pub fn galois_generators(&self) -> Vec<u64> {
        let f = self.field.f();
        let p = self.field.p();
        let pk = self.level_modulus() / f;
        let mut gens: Vec<u64> = if f > 1 {
            UnitGroupStructure::new(f)
                .expect("f")
                .factors()
                .iter()
                .map(|fac| crt_pair(fac.generator, f, 1, pk))
                .collect()
        } else {
            Vec::new()
        };
        let g = smallest_primitive_root(p, 1);
        let t = teichmuller_lift(g as i128, p, self.level + 1).expect("unit").residue();
        gens.push(if f > 1 { crt_pair(t, pk, 1, f) } else { t });
        gens
    }

    /// The class of `-1`.
    pub fn complex_conjugation(&self) -> u64 {
        self.level_modulus() - 1
    }

    /// `gamma` with `kappa(gamma) = 1 + p`, trivial on `F`.
    pub fn gamma(&self) -> u64 {
        let f = self.field.f();
        let pk = self.level_modulus() / f;
        let g = 1 + self.field.p();
        if f > 1 {
            crt_pair(g % pk, pk, 1, f)
        } else {
            g % pk
        }
    }
}

/// `M (x) O_chi` presented over `Z/p^{e_n + GUARD}`: basis `e_c (x) b_k` at
/// index `c d + k`.
pub struct ChiPresentation<'a> {
    module: &'a ResidueModule,
    chi: DirichletCharacter,
    ring: CoefficientRing,
    cap: u32,
    modulus: u64,
    d: usize,
    rows: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityPart {
    Plus,
    Minus,
}

impl<'a> ChiPresentation<'a> {
    pub fn new(module: &'a ResidueModule, chi: &DirichletCharacter) -> Result<Self> {
        if chi.prime() != module.field.p() {
            return Err(Error::domain("character and module for different primes"));
        }
        if !module.level_modulus().is_multiple_of(chi.conductor()) {
            return Err(Error::domain("character does not factor through the level"));
        }
        let cap = module.exponent() + GUARD;
        let ring = chi.coefficient_ring(cap)?;
        let d = ring.rank();
        let modulus = checked_pow(module.field.p(), cap)?;
        let mut pres = Self { module, chi: chi.clone(), ring, cap, modulus, d, rows: Vec::new() };
        for s in module.galois_generators() {
            let value = chi.evaluate(s as i64).ok_or_else(|| Error::inconsistency("Galois generator is not a unit"))?;
            let mat = pres.ring.mult_matrix(&pres.ring.root(&value)?);
            pres.add_twisted_rows(s, &mat, false);
        }
        let pe = checked_pow(module.field.p(), module.exponent())?;
        for i in 0..pres.dim() {
            let mut row = vec![0; pres.dim()];
            row[i] = pe % modulus;
            pres.rows.push(row);
        }
        Ok(pres)
    }

    pub fn dim(&self) -> usize {
        self.module.cosets() * self.d
    }

    pub fn ring(&self) -> &CoefficientRing {
        &self.ring
    }

    /// Vector of `g . (e_c (x) b_k)`.
    fn group_image(&self, images: &[CosetImage], c: usize, k: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        let im = images[c];
        v[im.target * self.d + k] = pow_mod(self.module.q, im.twist, self.modulus);
        v
    }

    /// Rows `g x - (1 (x) a) x` for every basis vector `x`, where `a` acts by
    /// `mat`; with `plus` the sign of the second term is flipped.
    fn add_twisted_rows(&mut self, g: u64, mat: &[Vec<u64>], plus: bool) {
        let images = self.module.action(g);
        for c in 0..self.module.cosets() {
            for k in 0..self.d {
                let mut row = self.group_image(&images, c, k);
                for (kk, mrow) in mat.iter().enumerate() {
                    let idx = c * self.d + kk;
                    let y = mrow[k] % self.modulus;
                    row[idx] =
                        if plus { (row[idx] + y) % self.modulus } else { (row[idx] + self.modulus - y) % self.modulus };
                }
                self.rows.push(row);
            }
        }
    }

    fn identity(&self) -> Vec<Vec<u64>> {
        (0..self.d).map(|i| (0..self.d).map(|j| (i == j) as u64).collect()).collect()
    }

    /// Adds `(1 - J)x` (for the plus part) or `(1 + J)x` (minus part).
    pub fn restrict_to(&mut self, part: ParityPart) {
        let j = self.module.complex_conjugation();
        let id = self.identity();
        self.add_twisted_rows(j, &id, part == ParityPart::Minus);
    }

    pub fn echelon(&self) -> Echelon {
        Echelon::new(self.module.field.p(), self.cap, self.dim(), self.rows.clone())
    }

    /// `log_p` of the order of the quotient.
    pub fn order_exponent(&self) -> Result<u32> {
        self.echelon()
            .quotient_exponent()
            .ok_or_else(|| Error::inconsistency("chi-quotient presentation is not finite"))
    }

    /// Every `f(gamma) x` lies in the relation span, for
    /// `f = (1+T)^{p^m} - zeta kappa_0^{p^m}` with `1 + T = gamma`.
    pub fn annihilated_by(&self, m: u32, zeta: &crate::characters::RootOfUnity) -> Result<bool> {
        let p = self.module.field.p();
        let gamma = self.module.gamma();
        let g = pow_mod(gamma, p.pow(m), self.module.level_modulus());
        let kappa = pow_mod((1 + p) % self.modulus, p.pow(m), self.modulus);
        let scalar = self.ring.scale(&self.ring.root(zeta)?, kappa);
        let mat = self.ring.mult_matrix(&scalar);
        let images = self.module.action(g);
        let ech = self.echelon();
        for c in 0..self.module.cosets() {
            for k in 0..self.d {
                let mut v = self.group_image(&images, c, k);
                for (kk, mrow) in mat.iter().enumerate() {
                    let idx = c * self.d + kk;
                    v[idx] = (v[idx] + self.modulus - mrow[k] % self.modulus) % self.modulus;
                }
                if !ech.contains(&v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.chi
    }
}

/// `log_p |M_chi|`.
pub fn chi_quotient_order(module: &ResidueModule, chi: &DirichletCharacter) -> Result<u32> {
    ChiPresentation::new(module, chi)?.order_exponent()
}

/// `log_p` of the orders of `M_chi`, `(M^+)_chi` and `(M^-)_chi`.
pub fn parity_parts(module: &ResidueModule, chi: &DirichletCharacter) -> Result<(u32, u32, u32)> {
    let full = chi_quotient_order(module, chi)?;
    let mut plus = ChiPresentation::new(module, chi)?;
    plus.restrict_to(ParityPart::Plus);
    let mut minus = ChiPresentation::new(module, chi)?;
    minus.restrict_to(ParityPart::Minus);
    Ok((full, plus.order_exponent()?, minus.order_exponent()?))
}

/// Smallest `n` with `f_{n+1} = p f_n`: from there on the primes above `q`
/// stay inert level to level.
pub fn stabilization_level(field: &FieldSpec, q: u64) -> Result<u32> {
    let p = field.p();
    for n in 0..24 {
        let a = splitting_count(field, q, n)?;
        let b = splitting_count(field, q, n + 1)?;
        if b.residue_degree == p * a.residue_degree {
            return Ok(n);
        }
    }
    Err(Error::inconsistency(format!("no stabilization level found for q = {q}")))
}

/// `Z_p`-rank of `(R_q)_chi` from the growth of `|M_chi|` between levels `n0 < n1`.
pub fn rank_estimate(field: &FieldSpec, q: u64, chi: &DirichletCharacter, n0: u32, n1: u32) -> Result<u64> {
    if n1 <= n0 {
        return Err(Error::domain("rank_estimate needs n1 > n0"));
    }
    let m0 = residue_module(field, q, n0)?;
    let m1 = residue_module(field, q, n1)?;
    let de = m1.exponent() as i64 - m0.exponent() as i64;
    let dx = chi_quotient_order(&m1, chi)? as i64 - chi_quotient_order(&m0, chi)? as i64;
    if de <= 0 || dx < 0 || dx % de != 0 {
        return Err(Error::inconsistency(format!(
            "chi-quotient grows by p^{dx} while e_n grows by {de} (q = {q}, levels {n0}..{n1})"
        )));
    }
    Ok((dx / de) as u64)
}

/// `rank_estimate` at the detected stabilization level and the next one.
pub fn rank_estimate_auto(field: &FieldSpec, q: u64, chi: &DirichletCharacter) -> Result<u64> {
    let n0 = stabilization_level(field, q)?;
    rank_estimate(field, q, chi, n0, n0 + 1)
}

/// Checks that `f_{q,chi}(gamma)` kills `M_chi` at level `n`.
pub fn verify_annihilator(field: &FieldSpec, q: u64, chi: &DirichletCharacter, n: u32) -> Result<bool> {
    let p = field.p();
    let m = m_index(q, p)?;
    let zeta = sigma_p_value(chi, q, default_precision(m, chi))?;
    let module = residue_module(field, q, n)?;
    ChiPresentation::new(&module, chi)?.annihilated_by(m, &zeta)
}

/// `log_p` of the cokernel of the norm map `(M_{n+1})_chi -> (M_n)_chi`.
pub fn norm_map_cokernel(field: &FieldSpec, q: u64, chi: &DirichletCharacter, n: u32) -> Result<u32> {
    let upper = residue_module(field, q, n + 1)?;
    let lower = residue_module(field, q, n)?;
    let pres = ChiPresentation::new(&lower, chi)?;
    let d = pres.d;
    let m = lower.quotient.modulus;
    let modulus = pres.modulus;
    let mut rows = pres.rows.clone();
    // e'_c maps to the prime below t'_c, with the Frobenius twist of that coset
    for &t in &upper.reps {
        let (target, twist) = lower.coset_of[&lower.quotient.canonical(t % m)];
        let scalar = pow_mod(lower.q, twist, modulus);
        for k in 0..d {
            let mut row = vec![0; pres.dim()];
            row[target * d + k] = scalar;
            rows.push(row);
        }
    }
    Echelon::new(field.p(), pres.cap, pres.dim(), rows)
        .quotient_exponent()
        .ok_or_else(|| Error::inconsistency("norm cokernel presentation is not finite"))
}
