//! Dense matrices over Q.
//!
//! The modular symbol machinery works in explicit rational coordinates:
//! relation quotients, boundary kernels, star eigenspaces and restrictions
//! of Hecke operators are all plain Gaussian eliminations.  Everything here
//! is exact; pivoting is by first nonzero entry, so results are
//! deterministic across runs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Dense rational matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>, cols: usize) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged rows");
        }
        let nrows = rows.len();
        RatMat {
            rows: nrows,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = RatMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let x = a * &other[(k, j)];
                    out[(i, j)] += x;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() {
                        acc += &self[(i, j)] * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x -= y;
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> RatMat {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x *= k;
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let x = &self[(r, j)] * &inv;
                self[(r, j)] = x;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let x = &self[(r, j)] * &f;
                        self[(i, j)] -= x;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel {x : A x = 0}, one column vector per free
    /// variable of the RREF, in ascending free-column order.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivot_of_col[f].is_some() {
                continue;
            }
            let mut x = vec![Rat::zero(); self.cols];
            x[f] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = -m[(r, f)].clone();
            }
            basis.push(x);
        }
        basis
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rat>], rows: usize) -> RatMat {
        for c in cols {
            assert_eq!(c.len(), rows, "ragged columns");
        }
        let mut m = RatMat::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    /// Solve A X = B for X where A has full column rank; None when B is not
    /// in the column span.  This is how operators get rewritten in the
    /// coordinates of an invariant subspace.
    pub fn solve_right(&self, b: &RatMat) -> Option<RatMat> {
        assert_eq!(self.rows, b.rows, "dimension mismatch");
        let ca = self.cols;
        let cb = b.cols;
        let mut aug = RatMat::zero(self.rows, ca + cb);
        for i in 0..self.rows {
            for j in 0..ca {
                aug[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..cb {
                aug[(i, ca + j)] = b[(i, j)].clone();
            }
        }
        let pivots = aug.rref();
        // Full column rank means the first ca pivots are exactly 0..ca.
        let rank_a = pivots.iter().take_while(|&&c| c < ca).count();
        assert_eq!(rank_a, ca, "solve_right: matrix does not have full column rank");
        if pivots.len() > rank_a {
            return None; // a pivot escaped into the right-hand block
        }
        let mut x = RatMat::zero(ca, cb);
        for r in 0..ca {
            for j in 0..cb {
                x[(r, j)] = aug[(r, ca + j)].clone();
            }
        }
        Some(x)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    /// Least common multiple of the entry denominators in row i.
    pub fn row_denominator_lcm(&self, i: usize) -> BigInt {
        let mut l = BigInt::one();
        for x in self.row(i) {
            l = num_integer::lcm(l, x.denom().clone());
        }
        l.abs()
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}
