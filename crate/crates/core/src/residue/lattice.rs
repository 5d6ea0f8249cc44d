//! Row spans over `Z/p^E`.

use crate::arith::{inv_mod, mul_mod, sub_mod};

fn valuation(x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let (mut x, mut v) = (x, 0);
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Echelon form of a set of relation rows in `(Z/p^E)^cols`, built with
/// minimal-valuation pivots.
///
/// When the span contains `p^e (Z/p^E)^cols` with `e < E`, the quotient is a
/// finite p-group whose order exponent is the sum of pivot valuations.
#[derive(Debug, Clone)]
pub struct Echelon {
    p: u64,
    cap: u32,
    modulus: u64,
    cols: usize,
    /// `(column, valuation, row)` in pivot order.
    pivots: Vec<(usize, u32, Vec<u64>)>,
}

impl Echelon {
    pub fn new(p: u64, cap: u32, cols: usize, mut rows: Vec<Vec<u64>>) -> Self {
        let modulus = p.pow(cap);
        let mut pivots = Vec::new();
        let mut free: Vec<bool> = vec![true; cols];
        loop {
            // entry of least valuation among the remaining rows and free columns
            let mut best: Option<(u32, usize, usize)> = None;
            for (r, row) in rows.iter().enumerate() {
                for (c, &x) in row.iter().enumerate() {
                    if x != 0 && free[c] {
                        let v = valuation(x, p, cap);
                        if best.is_none_or(|b| v < b.0) {
                            best = Some((v, r, c));
                            if v == 0 {
                                break;
                            }
                        }
                    }
                }
                if best.is_some_and(|b| b.0 == 0) {
                    break;
                }
            }
            let Some((v, r, c)) = best else { break };
            let prow = rows.swap_remove(r);
            let pv = p.pow(v);
            let unit_inv = inv_mod(prow[c] / pv, modulus).expect("unit part");
            for row in rows.iter_mut() {
                if row[c] == 0 {
                    continue;
                }
                let factor = mul_mod(row[c] / pv, unit_inv, modulus);
                for (x, &y) in row.iter_mut().zip(&prow) {
                    if y != 0 {
                        *x = sub_mod(*x, mul_mod(factor, y, modulus), modulus);
                    }
                }
            }
            rows.retain(|row| row.iter().any(|&x| x != 0));
            free[c] = false;
            pivots.push((c, v, prow));
        }
        Self { p, cap, modulus, cols, pivots }
    }

    /// `log_p` of the order of the quotient; `None` if it is infinite at this
    /// precision (some column has no pivot).
    pub fn quotient_exponent(&self) -> Option<u32> {
        if self.pivots.len() < self.cols {
            return None;
        }
        Some(self.pivots.iter().map(|p| p.1).sum())
    }

    /// Whether `x` lies in the row span.
    pub fn contains(&self, x: &[u64]) -> bool {
        let mut x: Vec<u64> = x.iter().map(|&a| a % self.modulus).collect();
        for (c, v, row) in &self.pivots {
            if x[*c] == 0 {
                continue;
            }
            if valuation(x[*c], self.p, self.cap) < *v {
                return false;
            }
            let pv = self.p.pow(*v);
            let factor = mul_mod(x[*c] / pv, inv_mod(row[*c] / pv, self.modulus).unwrap(), self.modulus);
            for (a, &y) in x.iter_mut().zip(row) {
                if y != 0 {
                    *a = sub_mod(*a, mul_mod(factor, y, self.modulus), self.modulus);
                }
            }
        }
        x.iter().all(|&a| a == 0)
    }
}
