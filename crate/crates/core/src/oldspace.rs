//! The old subspace of S2(Gamma0(N)) in coefficient coordinates.
//!
//! A form g of level M with M | N, M < N enters level N through the
//! degeneracy maps beta_d for d | N/M, where beta_d sends sum a_n q^n to
//! sum a_n q^(dn).  Working with q-expansions truncated at the Sturm bound
//! B of level N, the old subspace becomes the row space of an integer
//! matrix: for every prime p | N take an integral basis of the
//! weight-2 forms of level N/p to precision B and add the beta_1 and
//! beta_p images of each basis row.  Forms of deeper levels N/(pq) are
//! already in the span because the level N/p basis contains their
//! beta_1 and beta_q images.
//!
//! Rows of the assembled matrix may be linearly dependent (the same deep
//! form is reachable through several primes); only the row space matters,
//! and each row remembers which source level and degeneracy produced it.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{self, Level};
use crate::linalg::IntMatrix;
use crate::modsym;

/// Coefficient shadow of beta_d on truncations: a length-`b` vector with
/// w_i = v_(i/d) when d | i and the source is long enough, zero otherwise.
pub fn degeneracy_image(v: &[BigInt], d: u64, b: usize) -> Vec<BigInt> {
    assert!(d >= 1, "degeneracy index must be positive");
    let d = usize::try_from(d).expect("degeneracy index fits a usize");
    (1..=b)
        .map(|i| {
            if i % d == 0 && i / d <= v.len() {
                v[i / d - 1].clone()
            } else {
                BigInt::zero()
            }
        })
        .collect()
}

/// Integer matrix whose row space is the truncated old subspace, together
/// with the origin of every row.
pub struct OldspaceMatrix {
    level: Level,
    precision: usize,
    matrix: IntMatrix,
    /// Per row: the source level N/p and the degeneracy index (1 or p).
    provenance: Vec<(Level, u64)>,
}

impl OldspaceMatrix {
    pub fn level(&self) -> Level {
        self.level
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn provenance(&self) -> &[(Level, u64)] {
        &self.provenance
    }
}

/// Assemble the oldspace matrix of level N at the Sturm bound of N.
///
/// Row order is deterministic: primes p | N ascending, within a prime the
/// rows of integral_basis(N/p, B) in order, and for each such row its
/// beta_1 image directly followed by its beta_p image.
pub fn oldspace_matrix(level: Level) -> OldspaceMatrix {
    let n = level.get();
    let b = arith::sturm_bound(level);
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut provenance: Vec<(Level, u64)> = Vec::new();
    for p in arith::factorize(n).primes() {
        let source = Level::new(n / p);
        // The Sturm bound is monotone under divisors, so asking for B
        // coefficients at the lower level can never be a precision error.
        let basis = modsym::integral_basis(source, b)
            .expect("level-N Sturm bound covers every divisor level");
        for i in 0..basis.rows() {
            let g = basis.row(i);
            rows.push(degeneracy_image(g, 1, b));
            provenance.push((source, 1));
            rows.push(degeneracy_image(g, p, b));
            provenance.push((source, p));
        }
    }
    let matrix = IntMatrix::from_rows(rows, b);
    assert_eq!(matrix.rows(), provenance.len());
    OldspaceMatrix {
        level,
        precision: b,
        matrix,
        provenance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn degeneracy_is_identity_for_d_one() {
        let v = big(&[1, -2, -1, 2]);
        assert_eq!(degeneracy_image(&v, 1, 4), v);
        // Truncation below the source length just drops entries.
        assert_eq!(degeneracy_image(&v, 1, 2), big(&[1, -2]));
        // Extension past the source pads with zeros.
        assert_eq!(degeneracy_image(&v, 1, 6), big(&[1, -2, -1, 2, 0, 0]));
    }

    #[test]
    fn degeneracy_spreads_coefficients() {
        let v = big(&[1, -2, -1, 2]);
        assert_eq!(degeneracy_image(&v, 2, 4), big(&[0, 1, 0, -2]));
        assert_eq!(degeneracy_image(&v, 3, 4), big(&[0, 0, 1, 0]));
        assert_eq!(degeneracy_image(&v, 2, 9), big(&[0, 1, 0, -2, 0, -1, 0, 2, 0]));
        assert_eq!(degeneracy_image(&v, 5, 4), big(&[0, 0, 0, 0]));
    }

    #[test]
    fn degeneracy_entries_satisfy_the_defining_identity() {
        let v = big(&[3, 1, 4, 1, 5, 9, 2, 6]);
        for d in 1..=6u64 {
            for b in 0..=20usize {
                let w = degeneracy_image(&v, d, b);
                assert_eq!(w.len(), b);
                for (i, x) in w.iter().enumerate() {
                    let i = i + 1;
                    if i % d as usize == 0 && i / d as usize <= v.len() {
                        assert_eq!(*x, v[i / d as usize - 1]);
                    } else {
                        assert_eq!(*x, BigInt::from(0));
                    }
                }
            }
        }
    }

    #[test]
    fn prime_level_oldspace_is_empty() {
        let m = oldspace_matrix(Level::new(11));
        assert_eq!(m.matrix().rows(), 0);
        assert_eq!(m.matrix().cols(), 1);
        assert_eq!(m.precision(), 1);
        assert!(m.provenance().is_empty());
    }

    #[test]
    fn oldspace_rows_at_level_twentytwo() {
        let m = oldspace_matrix(Level::new(22));
        assert_eq!(m.precision(), 4);
        assert_eq!(
            m.matrix(),
            &IntMatrix::from_i64_rows(&[&[1, -2, -1, 2], &[0, 1, 0, -2]], 4)
        );
        assert_eq!(
            m.provenance(),
            &[(Level::new(11), 1), (Level::new(11), 2)]
        );
    }

    #[test]
    fn oldspace_rows_at_level_thirtythree() {
        let m = oldspace_matrix(Level::new(33));
        assert_eq!(m.precision(), 6);
        assert_eq!(
            m.matrix(),
            &IntMatrix::from_i64_rows(
                &[&[1, -2, -1, 2, 1, 2], &[0, 0, 1, 0, 0, -2]],
                6
            )
        );
        assert_eq!(
            m.provenance(),
            &[(Level::new(11), 1), (Level::new(11), 3)]
        );
    }

    #[test]
    fn oldspace_row_space_is_saturated() {
        // The integral bases at the lower levels are saturated lattices
        // and the assembled old space stays saturated; the Smith route
        // depends on this, so pin it on several composite levels.
        for n in [22u64, 33, 26, 38, 44, 45, 57] {
            let m = oldspace_matrix(Level::new(n));
            let sat = m.matrix().saturate();
            assert_eq!(
                sat.hnf(),
                m.matrix().hnf(),
                "oldspace row space not saturated at level {n}"
            );
        }
    }

    #[test]
    fn oldspace_rank_is_bounded_by_the_genus() {
        for n in [22u64, 26, 33, 37, 44, 57] {
            let m = oldspace_matrix(Level::new(n));
            let rank = m.matrix().rank();
            let g = arith::genus_x0(Level::new(n)) as usize;
            assert!(rank <= g, "rank exceeds genus at level {n}");
        }
        // At N = 22 the newspace is trivial and the old space fills the
        // genus exactly.
        let m = oldspace_matrix(Level::new(22));
        assert_eq!(m.matrix().rank(), 2);
        assert_eq!(arith::genus_x0(Level::new(22)), 2);
    }

    #[test]
    fn sturm_bound_is_monotone_under_divisors() {
        // oldspace_matrix leans on this: the level-N bound is enough
        // precision for every integral basis at a proper divisor level.
        for n in 1..=400u64 {
            let b = arith::sturm_bound(Level::new(n));
            for p in arith::factorize(n).primes() {
                let lower = arith::sturm_bound(Level::new(n / p));
                assert!(lower <= b, "Sturm bound not monotone at {n} / {p}");
            }
        }
    }
}
