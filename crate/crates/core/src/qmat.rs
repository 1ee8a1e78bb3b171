//! dense matrices over the exact rationals: reduced row echelon form, rank,
//! kernels, determinants, and maximal-minor (Pluecker) vectors. sizes here
//! are tiny (n <= 16 columns), so plain Gaussian elimination with exact
//! arithmetic is the whole story.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::mask::{card, elems, full_mask, submasks, Mask};
use crate::rat::{rat_i, rat_one, rat_zero, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    a: Vec<Rat>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, a: vec![rat_zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = rat_one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMat { rows: r, cols: c, a: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        QMat::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat_i(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.a[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rat {
        &mut self.a[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.a[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// columns picked by 0-based indices, in the given order.
    pub fn col_submatrix(&self, cols: &[usize]) -> QMat {
        let mut m = QMat::zero(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                *m.at_mut(r, j) = self.at(r, c).clone();
            }
        }
        m
    }

    /// reduced row echelon form and its pivot columns. zero rows sink to the
    /// bottom; pivots are exactly 1 with zeros above and below.
    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for pc in 0..m.cols {
            let Some(hit) = (pr..m.rows).find(|&r| !m.at(r, pc).is_zero()) else {
                continue;
            };
            m.swap_rows(pr, hit);
            let inv = m.at(pr, pc).recip();
            for c in pc..m.cols {
                let v = m.at(pr, c).clone() * &inv;
                *m.at_mut(pr, c) = v;
            }
            for r in 0..m.rows {
                if r != pr && !m.at(r, pc).is_zero() {
                    let f = m.at(r, pc).clone();
                    for c in pc..m.cols {
                        let v = m.at(r, c).clone() - m.at(pr, c).clone() * &f;
                        *m.at_mut(r, c) = v;
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

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.a.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// basis of {x : self * x = 0}, one vector per free column. empty kernel
    /// gives an empty list.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let (e, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![rat_zero(); self.cols];
                v[fc] = rat_one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -e.at(r, fc).clone();
                }
                v
            })
            .collect()
    }

    /// determinant of a square matrix by exact elimination.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let mut m = self.clone();
        let mut det = rat_one();
        for p in 0..m.rows {
            let Some(hit) = (p..m.rows).find(|&r| !m.at(r, p).is_zero()) else {
                return rat_zero();
            };
            if hit != p {
                m.swap_rows(p, hit);
                det = -det;
            }
            let piv = m.at(p, p).clone();
            det *= &piv;
            let inv = piv.recip();
            for r in p + 1..m.rows {
                if m.at(r, p).is_zero() {
                    continue;
                }
                let f = m.at(r, p).clone() * &inv;
                for c in p..m.cols {
                    let v = m.at(r, c).clone() - m.at(p, c).clone() * &f;
                    *m.at_mut(r, c) = v;
                }
            }
        }
        det
    }

    /// row spaces compared as subspaces; rref is a canonical form, so this is
    /// an exact equality test.
    pub fn row_space_eq(&self, other: &QMat) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let (a, pa) = self.rref();
        let (b, pb) = other.rref();
        if pa != pb {
            return false;
        }
        (0..pa.len()).all(|r| a.row(r) == b.row(r))
    }

    /// solves self * x = b; None when inconsistent. when the solution is not
    /// unique the free coordinates are set to zero.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMat::zero(self.rows, self.cols + 1);
        for (r, rhs) in b.iter().enumerate() {
            for c in 0..self.cols {
                *aug.at_mut(r, c) = self.at(r, c).clone();
            }
            *aug.at_mut(r, self.cols) = rhs.clone();
        }
        let (e, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![rat_zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = e.at(r, self.cols).clone();
        }
        Some(x)
    }
}

/// all maximal minors keyed by the column subset (1-based elements in the
/// mask), columns taken in ascending order. the matrix must have at least as
/// many columns as rows.
pub fn plucker(mat: &QMat) -> BTreeMap<Mask, Rat> {
    let d = mat.rows();
    let n = mat.cols();
    assert!(d <= n, "wide orientation required: rows <= cols");
    submasks(full_mask(n))
        .filter(|&s| card(s) == d)
        .map(|s| {
            let cols: Vec<usize> = elems(s).iter().map(|&i| i - 1).collect();
            (s, mat.col_submatrix(&cols).det())
        })
        .collect()
}
