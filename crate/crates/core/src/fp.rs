//! prime-field scalar helpers and small matrices over F_p. primes here are
//! tiny (counting enumerations are the bottleneck, not field ops), so trial
//! division and schoolbook elimination are plenty.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::mask::{card, elems, full_mask, submasks, Mask};
use crate::qmat::QMat;
use crate::rat::Rat;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// inverse of a nonzero residue mod a prime.
pub fn mod_inv(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero mod {p}");
    mod_pow(a, p - 2, p)
}

fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    let m = v % BigInt::from(p);
    let m = if m.sign() == num_bigint::Sign::Minus { m + BigInt::from(p) } else { m };
    m.to_u64().expect("reduced residue fits u64")
}

/// reduction of an exact rational mod p; None when p divides the denominator.
pub fn rat_mod(r: &Rat, p: u64) -> Option<u64> {
    let den = bigint_mod(r.denom(), p);
    if den == 0 {
        return None;
    }
    Some(bigint_mod(r.numer(), p) * mod_inv(den, p) % p)
}

/// Laurent exponent folded into [0, p-2] so that x^e = x^fold(e) for every
/// x in the multiplicative group.
pub fn fold_exp(e: i64, p: u64) -> u64 {
    let m = (p - 1) as i64;
    e.rem_euclid(m) as u64
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= v {
        if v.is_multiple_of(d) {
            out.push(d);
            while v.is_multiple_of(d) {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

/// an element of exact multiplicative order n in F_p; None unless n | p-1.
pub fn element_of_order(p: u64, n: u64) -> Option<u64> {
    if n == 0 || !(p - 1).is_multiple_of(n) {
        return None;
    }
    let factors = prime_factors(p - 1);
    let g = (2..p).find(|&g| factors.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1))?;
    Some(mod_pow(g, (p - 1) / n, p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMat {
    pub p: u64,
    rows: usize,
    cols: usize,
    a: Vec<u64>,
}

impl FpMat {
    pub fn new(p: u64, rows: usize, cols: usize) -> Self {
        assert!(is_prime(p), "{p} is not prime");
        FpMat { p, rows, cols, a: vec![0; rows * cols] }
    }

    /// entrywise reduction; None when p divides some denominator.
    pub fn from_qmat(m: &QMat, p: u64) -> Option<Self> {
        let mut out = FpMat::new(p, m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                out.a[r * m.cols() + c] = rat_mod(m.at(r, c), p)?;
            }
        }
        Some(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.a[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.a[r * self.cols + c] = v % self.p;
    }

    pub fn col_submatrix(&self, cols: &[usize]) -> FpMat {
        let mut m = FpMat::new(self.p, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.a[r * cols.len() + j] = self.at(r, c);
            }
        }
        m
    }

    fn rref(&self) -> (FpMat, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for pc in 0..m.cols {
            let Some(hit) = (pr..m.rows).find(|&r| m.at(r, pc) != 0) else { continue };
            for c in 0..m.cols {
                let (i, j) = (pr * m.cols + c, hit * m.cols + c);
                m.a.swap(i, j);
            }
            let inv = mod_inv(m.at(pr, pc), p);
            for c in pc..m.cols {
                m.a[pr * m.cols + c] = m.at(pr, c) * inv % p;
            }
            for r in 0..m.rows {
                if r != pr && m.at(r, pc) != 0 {
                    let f = m.at(r, pc);
                    for c in pc..m.cols {
                        let sub = f * m.at(pr, c) % p;
                        m.a[r * m.cols + c] = (m.at(r, c) + p - sub) % p;
                    }
                }
            }
            pivots.push(pc);
            pr += 1;
            if pr == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let (e, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u64; self.cols];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - e.at(r, fc)) % p;
                }
                v
            })
            .collect()
    }

    /// bases of the column matroid: d-subsets of columns with full rank,
    /// where d = rank of the whole matrix.
    pub fn column_bases(&self) -> (usize, Vec<Mask>) {
        let d = self.rank();
        let bases = submasks(full_mask(self.cols))
            .filter(|&s| card(s) == d)
            .filter(|&s| {
                let cols: Vec<usize> = elems(s).iter().map(|&i| i - 1).collect();
                self.col_submatrix(&cols).rank() == d
            })
            .collect();
        (d, bases)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn scalar_ops() {
        assert!(is_prime(13) && !is_prime(12) && !is_prime(1));
        assert_eq!(mod_pow(2, 10, 13), 1024 % 13);
        assert_eq!(mod_inv(3, 7) * 3 % 7, 1);
        assert_eq!(rat_mod(&rat(1, 2), 5), Some(3));
        assert_eq!(rat_mod(&rat(1, 5), 5), None);
        assert_eq!(rat_mod(&rat(-1, 1), 7), Some(6));
        assert_eq!(fold_exp(-1, 5), 3);
        assert_eq!(fold_exp(9, 5), 1);
    }

    #[test]
    fn orders() {
        let z = element_of_order(7, 3).unwrap();
        assert_eq!(mod_pow(z, 3, 7), 1);
        assert_ne!(z, 1);
        assert!(element_of_order(5, 3).is_none());
        let w = element_of_order(13, 4).unwrap();
        assert_eq!(mod_pow(w, 4, 13), 1);
        assert_ne!(mod_pow(w, 2, 13), 1);
    }

    #[test]
    fn matrix_rank_and_kernel() {
        let q = QMat::from_i64(&[&[1, 0, 1], &[0, 1, 1]]);
        let m = FpMat::from_qmat(&q, 5).unwrap();
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        let (d, bases) = m.column_bases();
        assert_eq!(d, 2);
        assert_eq!(bases.len(), 3);
    }
}
