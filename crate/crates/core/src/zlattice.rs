//! integer lattice computations: row Hermite normal form with its unimodular
//! transform, orthogonal-complement lattices, saturations, and sublattice
//! indices. arithmetic is arbitrary precision throughout.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::qmat::QMat;
use crate::rat::{to_bigint, Rat};

#[cfg(test)]
fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

fn to_small(rows: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|v| i64::try_from(v).expect("lattice entry exceeds i64"))
                .collect()
        })
        .collect()
}

/// row Hermite normal form. returns (H, U) with U unimodular and U * A = H;
/// pivots are positive, entries above a pivot are reduced into [0, pivot),
/// zero rows sink to the bottom.
pub fn hnf_rows(a: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let m = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pr = 0;
    for pc in 0..cols {
        loop {
            let mut best: Option<usize> = None;
            for r in pr..m {
                if !h[r][pc].is_zero()
                    && best.is_none_or(|b| h[r][pc].abs() < h[b][pc].abs())
                {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            h.swap(pr, b);
            u.swap(pr, b);
            let mut done = true;
            for r in pr + 1..m {
                if h[r][pc].is_zero() {
                    continue;
                }
                let q = div_floor_big(&h[r][pc], &h[pr][pc]);
                row_submul(&mut h, r, pr, &q);
                row_submul(&mut u, r, pr, &q);
                if !h[r][pc].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pr < m && !h[pr][pc].is_zero() {
            if h[pr][pc].is_negative() {
                row_negate(&mut h[pr]);
                row_negate(&mut u[pr]);
            }
            for r in 0..pr {
                if h[r][pc].is_zero() {
                    continue;
                }
                let q = div_floor_big(&h[r][pc], &h[pr][pc]);
                row_submul(&mut h, r, pr, &q);
                row_submul(&mut u, r, pr, &q);
            }
            pr += 1;
        }
    }
    (h, u)
}

/// rows[dst] -= q * rows[src], elementwise; the two indices are distinct.
fn row_submul(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    let (lo, hi) = rows.split_at_mut(dst.max(src));
    let (d, s) = if dst < src { (&mut lo[dst], &hi[0]) } else { (&mut hi[0], &lo[src]) };
    for (dv, sv) in d.iter_mut().zip(s.iter()) {
        *dv -= sv * q;
    }
}

fn row_negate(row: &mut [BigInt]) {
    for v in row.iter_mut() {
        *v = -std::mem::take(v);
    }
}

fn div_floor_big(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = (a / b, a % b);
    if r.is_zero() || (r.is_negative() == b.is_negative()) {
        q
    } else {
        q - BigInt::one()
    }
}

/// basis of {u in Z^n : u . r = 0 for every row r}. the result spans a
/// saturated lattice of rank n - rank(rows).
pub fn perp_lattice(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
    }
    // left kernel of rows^T: the U-rows aligned with zero H-rows
    let transpose: Vec<Vec<BigInt>> = (0..n)
        .map(|c| rows.iter().map(|r| BigInt::from(r[c])).collect())
        .collect();
    let (h, u) = hnf_rows(&transpose);
    let kernel: Vec<Vec<BigInt>> = h
        .iter()
        .zip(&u)
        .filter(|(hr, _)| hr.iter().all(Zero::is_zero))
        .map(|(_, ur)| ur.clone())
        .collect();
    to_small(&kernel)
}

/// basis of the saturation of the span of `rows` inside Z^n, i.e. the double
/// orthogonal complement.
pub fn saturate_span(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    perp_lattice(&perp_lattice(rows, n), n)
}

#[derive(Clone, Debug)]
pub struct LatticeComplement {
    /// basis of the saturated span of the input rays.
    pub span: Vec<Vec<i64>>,
    /// basis of the orthogonal complement lattice.
    pub perp: Vec<Vec<i64>>,
    /// index of span (+) perp inside Z^n; finite and positive.
    pub index: BigInt,
}

/// splits Z^n along the span of the rays: a basis of the saturated span, a
/// basis of the perpendicular lattice, and the index of their direct sum.
pub fn lattice_complement(rays: &[Vec<i64>], n: usize) -> LatticeComplement {
    let span = saturate_span(rays, n);
    let perp = perp_lattice(rays, n);
    assert_eq!(span.len() + perp.len(), n, "complement dimensions must add up");
    let stacked: Vec<Vec<Rat>> = span
        .iter()
        .chain(&perp)
        .map(|r| r.iter().map(|&v| crate::rat::rat_i(v)).collect())
        .collect();
    let det = QMat::from_rows(stacked).det();
    let index = to_bigint(&det).expect("integer matrix has integer determinant").abs();
    assert!(!index.is_zero(), "complement basis must be full rank");
    LatticeComplement { span, perp, index }
}

/// integer coordinates of v in the given lattice basis; None when v is not in
/// the generated lattice.
pub fn coords_in_basis(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<BigInt>> {
    let n = v.len();
    // solve c . basis = v, unknowns as a column vector against basis^T
    let bt: Vec<Vec<Rat>> = (0..n)
        .map(|c| basis.iter().map(|row| crate::rat::rat_i(row[c])).collect())
        .collect();
    let rhs: Vec<Rat> = v.iter().map(|&x| crate::rat::rat_i(x)).collect();
    let sol = QMat::from_rows(bt).solve(&rhs)?;
    sol.iter().map(to_bigint).collect()
}

/// index of the lattice generated by the (independent) rays inside the
/// saturation of their span; 1 means the rays form a basis of the saturation.
pub fn ray_saturation_index(rays: &[Vec<i64>], n: usize) -> BigInt {
    if rays.is_empty() {
        return BigInt::one();
    }
    let sat = saturate_span(rays, n);
    assert_eq!(sat.len(), rays.len(), "rays must be linearly independent");
    let coords: Vec<Vec<Rat>> = rays
        .iter()
        .map(|r| {
            coords_in_basis(&sat, r)
                .expect("ray lies in the saturation of its own span")
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect()
        })
        .collect();
    to_bigint(&QMat::from_rows(coords).det())
        .expect("integer determinant")
        .abs()
}
