//! Exact linear algebra over Z and over prime fields.
//!
//! Everything is arbitrary-precision: entry growth inside Hermite and Smith
//! eliminations overflows fixed-width integers even on small inputs, so all
//! matrices carry `BigInt` entries.  Row lattices are the central object:
//! `hnf` canonicalizes a spanning set, `snf` extracts the invariant factors
//! of Z^n modulo the row lattice, `saturate` computes the largest lattice
//! with the same rational span, and the mod-p routines answer membership
//! questions in the reduction of the lattice.

// Elimination passes touch two rows of one matrix at a time, which reads
// naturally with indices and poorly with iterators over disjoint borrows.
#![allow(clippy::needless_range_loop)]

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::Result;

/// Dense integer matrix, row major.  Zero rows and zero columns are legal;
/// several callers build matrices with no rows at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Invariant factors d_1 | d_2 | ... | d_r of a matrix, all positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithInvariants {
    divisors: Vec<BigUint>,
}

impl SmithInvariants {
    pub fn divisors(&self) -> &[BigUint] {
        &self.divisors
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Product of the invariant factors; 1 for the empty chain.
    pub fn product(&self) -> BigUint {
        let mut acc = BigUint::one();
        for d in &self.divisors {
            acc *= d;
        }
        acc
    }
}

/// Vector over F_p with every component reduced into [0, p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPVector {
    p: BigUint,
    components: Vec<BigUint>,
}

impl ModPVector {
    pub fn new(p: BigUint, components: Vec<BigUint>) -> Self {
        assert!(components.iter().all(|c| c < &p), "components not reduced");
        ModPVector { p, components }
    }

    pub fn prime(&self) -> &BigUint {
        &self.p
    }

    pub fn components(&self) -> &[BigUint] {
        &self.components
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged rows");
        }
        let nrows = rows.len();
        IntMatrix {
            rows: nrows,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]], cols: usize) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// New matrix with `v` appended as a final row.
    pub fn stack_row(&self, v: &[BigInt]) -> IntMatrix {
        assert_eq!(v.len(), self.cols, "stack_row: length mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(v);
        IntMatrix {
            rows: self.rows + 1,
            cols: self.cols,
            data,
        }
    }

    /// Row-style Hermite normal form of the row lattice.  Zero rows are
    /// dropped, pivots are positive, entries above each pivot are reduced
    /// into [0, pivot).  The result spans exactly the same lattice.
    pub fn hnf(&self) -> IntMatrix {
        let mut m = self.row_vecs();
        let rows = self.rows;
        let cols = self.cols;
        let mut pivot = 0usize;
        for col in 0..cols {
            if pivot >= rows {
                break;
            }
            // Euclidean elimination below the pivot position.
            loop {
                let best = (pivot..rows)
                    .filter(|&i| !m[i][col].is_zero())
                    .min_by_key(|&i| m[i][col].abs());
                let Some(best) = best else { break };
                m.swap(pivot, best);
                let mut clean = true;
                for i in pivot + 1..rows {
                    if !m[i][col].is_zero() {
                        let q = div_round(&m[i][col], &m[pivot][col]);
                        row_submul(&mut m, i, pivot, &q);
                        if !m[i][col].is_zero() {
                            clean = false;
                        }
                    }
                }
                if clean {
                    break;
                }
            }
            if pivot < rows && !m[pivot][col].is_zero() {
                if m[pivot][col].is_negative() {
                    negate_row(&mut m[pivot]);
                }
                let head = m[pivot][col].clone();
                for i in 0..pivot {
                    if !m[i][col].is_zero() {
                        let q = m[i][col].div_floor(&head);
                        row_submul(&mut m, i, pivot, &q);
                    }
                }
                pivot += 1;
            }
        }
        m.truncate(pivot);
        IntMatrix::from_rows(m, cols)
    }

    /// Rank of the rational row space.
    pub fn rank(&self) -> usize {
        self.hnf().rows
    }

    /// Invariant factor chain of the matrix (equivalently, the nontrivial
    /// structure of Z^cols modulo the row lattice).
    pub fn snf(&self) -> SmithInvariants {
        let (divisors, _, _) = self.smith_with_column_inverse();
        let inv = SmithInvariants { divisors };
        debug_assert!(inv
            .divisors
            .windows(2)
            .all(|w| (&w[1] % &w[0]).is_zero()));
        inv
    }

    /// Product of the Smith invariant factors: the index of the row lattice
    /// inside its saturation.  1 for the empty matrix.
    pub fn saturation_index(&self) -> BigUint {
        self.snf().product()
    }

    /// Saturation of the row lattice: the intersection of its rational span
    /// with Z^cols, returned in HNF.  Idempotent; the empty matrix saturates
    /// to itself.
    pub fn saturate(&self) -> IntMatrix {
        let (divisors, w, rank) = self.smith_with_column_inverse();
        debug_assert_eq!(divisors.len(), rank);
        // A = U^{-1} D W with U, W unimodular and D diagonal, so the row
        // lattice of A is spanned by d_i * w_i and its saturation by the
        // first `rank` rows of W.
        let rows = (0..rank).map(|i| w.row(i).to_vec()).collect();
        IntMatrix::from_rows(rows, self.cols).hnf()
    }

    /// Smith elimination tracking W = V^{-1} where A*V runs through the
    /// column operations.  Returns (positive divisor chain, W, rank).
    fn smith_with_column_inverse(&self) -> (Vec<BigUint>, IntMatrix, usize) {
        let mut a = self.row_vecs();
        let rows = self.rows;
        let cols = self.cols;
        let mut w = IntMatrix::identity(cols);
        let mut t = 0usize;
        while t < rows.min(cols) {
            // Move a minimal-magnitude nonzero entry of the trailing block
            // into the pivot seat.
            let Some((bi, bj)) = min_abs_entry(&a, t) else {
                break;
            };
            a.swap(t, bi);
            if bj != t {
                swap_cols(&mut a, t, bj);
                w.swap_rows(t, bj);
            }
            loop {
                let mut dirty = false;
                // Clear the pivot column with row operations.
                for i in t + 1..rows {
                    while !a[i][t].is_zero() {
                        let q = div_round(&a[i][t], &a[t][t]);
                        row_submul(&mut a, i, t, &q);
                        if !a[i][t].is_zero() {
                            a.swap(i, t);
                            dirty = true;
                        }
                    }
                }
                // Clear the pivot row with column operations, mirrored on w.
                for j in t + 1..cols {
                    while !a[t][j].is_zero() {
                        let q = div_round(&a[t][j], &a[t][t]);
                        col_submul(&mut a, j, t, &q);
                        w.row_addmul(t, j, &q);
                        if !a[t][j].is_zero() {
                            swap_cols(&mut a, j, t);
                            w.swap_rows(j, t);
                            dirty = true;
                        }
                    }
                }
                if dirty {
                    continue;
                }
                // The pivot must divide the whole trailing block for the
                // divisor chain to come out right.
                let pivot = a[t][t].clone();
                let bad = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &pivot).is_zero()));
                match bad {
                    Some(i) => {
                        // Fold the offending row into the pivot row and
                        // restart the clearing passes.
                        for j in 0..cols {
                            let x = a[i][j].clone();
                            a[t][j] += x;
                        }
                    }
                    None => break,
                }
            }
            if a[t][t].is_negative() {
                negate_row(&mut a[t]);
            }
            t += 1;
        }
        let divisors = (0..t)
            .map(|i| a[i][i].magnitude().clone())
            .collect::<Vec<_>>();
        (divisors, w, t)
    }

    /// Rank of the matrix over F_p.  p must be prime.
    pub fn rank_mod_p(&self, p: &BigUint) -> usize {
        check_prime(p);
        gauss_rank(self.reduce_mod(p), p)
    }

    /// Is v in the row space of self over F_p?  On success returns the
    /// witness coefficient vector c (one entry per row of self) with
    /// c * self = v mod p; otherwise None.  Free coefficients are pinned to
    /// zero, so the witness is deterministic.
    pub fn in_rowspace_mod_p(&self, v: &[BigInt], p: &BigUint) -> Option<ModPVector> {
        check_prime(p);
        assert_eq!(v.len(), self.cols, "in_rowspace_mod_p: length mismatch");
        // Solve x * A = v, i.e. A^T x = v^T, over F_p.
        let at: Vec<Vec<BigUint>> = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| reduce_entry(&self[(i, j)], p)).collect())
            .collect();
        let b: Vec<BigUint> = v.iter().map(|x| reduce_entry(x, p)).collect();
        let x = solve_mod_p(at, b, self.rows, p)?;
        let witness = ModPVector::new(p.clone(), x);
        assert!(
            self.witness_checks(&witness, v),
            "membership witness failed re-verification"
        );
        Some(witness)
    }

    fn witness_checks(&self, witness: &ModPVector, v: &[BigInt]) -> bool {
        let p = BigInt::from(witness.p.clone());
        (0..self.cols).all(|j| {
            let mut acc = BigInt::zero();
            for i in 0..self.rows {
                acc += BigInt::from(witness.components[i].clone()) * &self[(i, j)];
            }
            (acc - &v[j]).mod_floor(&p).is_zero()
        })
    }

    fn reduce_mod(&self, p: &BigUint) -> Vec<Vec<BigUint>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| reduce_entry(x, p)).collect())
            .collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    /// row_i += q * row_j.
    fn row_addmul(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for k in 0..self.cols {
            let x = &self.data[j * self.cols + k] * q;
            self.data[i * self.cols + k] += x;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

fn negate_row(row: &mut [BigInt]) {
    for x in row.iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// Quotient rounded to nearest, ties away from zero.  Keeps remainders at
/// most |b|/2 during the eliminations.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    if (&r * 2u8).abs() >= b.abs() {
        if a.is_negative() == b.is_negative() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// rows[i] -= q * rows[j].
fn row_submul(rows: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (a, b) = if i < j {
        let (lo, hi) = rows.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(i);
        (&mut hi[0], &lo[j])
    };
    for k in 0..a.len() {
        a[k] -= q * &b[k];
    }
}

/// col_j -= q * col_t.
fn col_submul(rows: &mut [Vec<BigInt>], j: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in rows.iter_mut() {
        let x = q * &row[t];
        row[j] -= x;
    }
}

fn swap_cols(rows: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in rows.iter_mut() {
        row.swap(i, j);
    }
}

fn min_abs_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.len() {
        for j in t..a[i].len() {
            if !a[i][j].is_zero()
                && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
            {
                best = Some((i, j));
            }
        }
    }
    best
}

fn reduce_entry(x: &BigInt, p: &BigUint) -> BigUint {
    let pp = BigInt::from(p.clone());
    x.mod_floor(&pp).magnitude().clone()
}

fn check_prime(p: &BigUint) {
    assert!(is_prime_biguint(p), "modulus {p} is not prime");
}

fn inv_mod(x: &BigUint, p: &BigUint) -> BigUint {
    let e = BigInt::from(x.clone()).extended_gcd(&BigInt::from(p.clone()));
    assert!(e.gcd.is_one(), "element not invertible");
    e.x.mod_floor(&BigInt::from(p.clone())).magnitude().clone()
}

fn mul_mod(a: &BigUint, b: &BigUint, p: &BigUint) -> BigUint {
    (a * b) % p
}

fn sub_mod(a: &BigUint, b: &BigUint, p: &BigUint) -> BigUint {
    if a >= b {
        (a - b) % p
    } else {
        p - ((b - a) % p)
    }
}

fn gauss_rank(mut m: Vec<Vec<BigUint>>, p: &BigUint) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = inv_mod(&m[rank][col], p);
        for j in col..cols {
            m[rank][j] = mul_mod(&m[rank][j], &inv, p);
        }
        for i in 0..rows {
            if i != rank && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in col..cols {
                    let s = mul_mod(&factor, &m[rank][j], p);
                    m[i][j] = sub_mod(&m[i][j], &s, p);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Solve M x = b over F_p where M is given by rows and has `unknowns`
/// columns.  Free variables are set to zero.
fn solve_mod_p(
    mut m: Vec<Vec<BigUint>>,
    mut b: Vec<BigUint>,
    unknowns: usize,
    p: &BigUint,
) -> Option<Vec<BigUint>> {
    let rows = m.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut rank = 0usize;
    for col in 0..unknowns {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        b.swap(rank, pr);
        let inv = inv_mod(&m[rank][col], p);
        for j in col..unknowns {
            m[rank][j] = mul_mod(&m[rank][j], &inv, p);
        }
        b[rank] = mul_mod(&b[rank], &inv, p);
        for i in 0..rows {
            if i != rank && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in col..unknowns {
                    let s = mul_mod(&factor, &m[rank][j], p);
                    m[i][j] = sub_mod(&m[i][j], &s, p);
                }
                let s = mul_mod(&factor, &b[rank], p);
                b[i] = sub_mod(&b[i], &s, p);
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    // Inconsistent if a zeroed-out row keeps a nonzero right-hand side.
    for i in rank..rows {
        if !b[i].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigUint::zero(); unknowns];
    for &(r, c) in &pivots {
        x[c] = b[r].clone();
    }
    Some(x)
}

/// Deterministic Miller-Rabin for the word-sized range, strong probable
/// prime test beyond it.  The witness set 2..=37 is known to be exact for
/// everything below 3.3 * 10^24, far past any index this crate factors.
pub(crate) fn is_prime_biguint(n: &BigUint) -> bool {
    let two = BigUint::from(2u8);
    if n < &two {
        return false;
    }
    for q in [2u8, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let q = BigUint::from(q);
        if n == &q {
            return true;
        }
        if (n % &q).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().expect("n - 1 > 0");
    let d = &nm1 >> s;
    'witness: for a in [2u8, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Exhaustive-search membership oracle: tries every coefficient vector in
/// [0, p)^rows.  Test support only; guarded so it cannot be misused on
/// anything large.
pub fn brute_force_membership(a: &IntMatrix, v: &[BigInt], p: u64) -> bool {
    assert!(a.rows() <= 4, "brute_force_membership: too many rows");
    assert!(p <= 7, "brute_force_membership: modulus too large");
    assert!(crate::arith::is_prime(p), "modulus must be prime");
    assert_eq!(v.len(), a.cols(), "brute_force_membership: length mismatch");
    let pp = BigInt::from(p);
    let rows = a.rows();
    let total = p.pow(rows as u32);
    for combo in 0..total {
        let mut c = combo;
        let coeffs: Vec<u64> = (0..rows)
            .map(|_| {
                let x = c % p;
                c /= p;
                x
            })
            .collect();
        let matches = (0..a.cols()).all(|j| {
            let mut acc = BigInt::zero();
            for (i, &ci) in coeffs.iter().enumerate() {
                acc += BigInt::from(ci) * &a[(i, j)];
            }
            (acc - &v[j]).mod_floor(&pp).is_zero()
        });
        if matches {
            return true;
        }
    }
    false
}

/// Factor a positive integer into prime powers: trial division up to 10^6,
/// then a Miller-Rabin classification of the cofactor.  A composite
/// cofactor beyond the trial range is reported as an error rather than
/// silently mis-factored; desk-scale saturation indices never get there.
pub fn factor_big(n: &BigUint) -> Result<Vec<(BigUint, u32)>> {
    use num_traits::ToPrimitive;
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor zero".into()));
    }
    let mut n = n.clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut p = 2u64;
    while p <= 1_000_000 && !n.is_one() {
        let bp = BigUint::from(p);
        if (&n % &bp).is_zero() {
            let mut e = 0u32;
            while (&n % &bp).is_zero() {
                n /= &bp;
                e += 1;
            }
            out.push((bp, e));
        }
        // Once p^2 exceeds the remainder, the remainder is prime.
        if let Some(small) = n.to_u64() {
            if small > 1 && p.checked_mul(p).is_some_and(|sq| sq > small) {
                out.push((BigUint::from(small), 1));
                n = BigUint::one();
                break;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        // Every prime factor of the cofactor now exceeds 10^6, so below
        // 10^12 it must be prime; past that, ask Miller-Rabin.
        if n < BigUint::from(10u64).pow(12) || is_prime_biguint(&n) {
            out.push((n, 1));
        } else {
            return Err(Error::FactorizationIncomplete(n));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}
