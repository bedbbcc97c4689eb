//! Weight-2 modular symbols for Gamma0(N).
//!
//! The space is presented by Manin symbols: one generator per point of
//! P^1(Z/N), modulo the two-term and three-term relations
//!
//!   x + xS = 0,    x + xT + xT^2 = 0,
//!
//! with S = [0,-1;1,0] and T = [0,-1;1,-1] acting on the right.  The
//! quotient V has dimension 2g + e - 1 where g is the genus of X0(N) and e
//! the number of cusps.  The boundary map sends a symbol to the difference
//! of the two cusps it joins; its kernel is the cuspidal subspace of
//! dimension 2g, on which the star involution (induced by [-1,0;0,1])
//! splits off a +1 eigenspace of dimension g.  Hecke operators act through
//! explicit matrix families and commute with all of this; their matrices
//! on the +1 cuspidal eigenspace carry the same eigenvalue data as the
//! space of cusp forms S2(Gamma0(N)), which is how `integral_basis`
//! recovers the lattice of integer-coefficient q-expansions.
//!
//! All linear algebra is exact over Q.  The expensive well-definedness
//! checks (relations respected by boundary, star and Hecke) run as
//! assertions in debug builds and in the test suite.

mod heilbronn;
mod p1;

pub use heilbronn::{heilbronn_matrices, merel_matrices};
pub use p1::{p1_list, p1_normalize};

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::{gcd, Integer};
use num_traits::{One, Zero};

use crate::arith::{self, Level};
use crate::error::Error;
use crate::linalg::IntMatrix;
use crate::ratmat::{rat, Rat, RatMat};
use crate::Result;

const S: [i64; 4] = [0, -1, 1, 0];
const T: [i64; 4] = [0, -1, 1, -1];
const T2: [i64; 4] = [-1, 1, -1, 0];
const STAR: [i64; 4] = [-1, 0, 0, 1];

/// (c, d) * [a b; c' d'] as a row vector, reduced mod N.
fn apply_matrix(c: u64, d: u64, m: &[i64; 4], n: u64) -> (u64, u64) {
    let nn = n as i128;
    let c = c as i128;
    let d = d as i128;
    let x = (c * m[0] as i128 + d * m[2] as i128).rem_euclid(nn) as u64;
    let y = (c * m[1] as i128 + d * m[3] as i128).rem_euclid(nn) as u64;
    (x, y)
}

/// The full modular symbol space for Gamma0(N) with its distinguished
/// subspaces and operators, everything in explicit rational coordinates.
pub struct ModSymSpace {
    level: Level,
    gens: Vec<(u64, u64)>,
    gen_index: BTreeMap<(u64, u64), usize>,
    /// Generator indices whose classes form the basis of the quotient V.
    basis_gens: Vec<usize>,
    /// dim x ngens; column i is the class of generator i in that basis.
    projection: RatMat,
    /// Inequivalent cusps hit by the generators, as reduced fractions.
    cusps: Vec<(i64, i64)>,
    /// ncusps x dim.
    boundary: RatMat,
    /// dim x 2g; columns span the kernel of the boundary.
    cuspidal: RatMat,
    /// 2g x 2g; the star involution in cuspidal coordinates.
    star_cuspidal: RatMat,
    /// 2g x g; columns span the +1 eigenspace of star.
    plus_basis: RatMat,
    hecke_cache: Mutex<BTreeMap<u64, RatMat>>,
}

impl ModSymSpace {
    pub fn build(level: Level) -> ModSymSpace {
        let n = level.get();
        let gens = p1_list(level);
        let ngens = gens.len();
        let gen_index: BTreeMap<(u64, u64), usize> =
            gens.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let class_of = |c: u64, d: u64| -> usize {
            let key = p1_normalize(c, d, level).expect("matrix image stays on P^1");
            gen_index[&key]
        };

        // Relation matrix: one two-term and one three-term row per
        // generator.  Redundant rows are harmless, the RREF absorbs them.
        let mut rel_rows: Vec<Vec<Rat>> = Vec::with_capacity(2 * ngens);
        for (i, &(c, d)) in gens.iter().enumerate() {
            let mut row = vec![Rat::zero(); ngens];
            row[i] += Rat::one();
            let (sc, sd) = apply_matrix(c, d, &S, n);
            row[class_of(sc, sd)] += Rat::one();
            rel_rows.push(row);

            let mut row = vec![Rat::zero(); ngens];
            row[i] += Rat::one();
            let (tc, td) = apply_matrix(c, d, &T, n);
            row[class_of(tc, td)] += Rat::one();
            let (uc, ud) = apply_matrix(c, d, &T2, n);
            row[class_of(uc, ud)] += Rat::one();
            rel_rows.push(row);
        }
        let mut rel = RatMat::from_rows(rel_rows, ngens);
        let pivots = rel.rref();
        let dim = ngens - pivots.len();

        let genus = arith::genus_x0(level) as usize;
        let ncusps_expected = arith::nu_infinity(level) as usize;
        assert_eq!(
            dim,
            2 * genus + ncusps_expected - 1,
            "dimension formula fails at level {n}"
        );

        // Free generators form the basis; pivot generators are rewritten.
        let mut is_pivot = vec![false; ngens];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let basis_gens: Vec<usize> = (0..ngens).filter(|&i| !is_pivot[i]).collect();
        let mut projection = RatMat::zero(dim, ngens);
        for (j, &f) in basis_gens.iter().enumerate() {
            projection[(j, f)] = Rat::one();
        }
        for (r, &pc) in pivots.iter().enumerate() {
            for (j, &f) in basis_gens.iter().enumerate() {
                projection[(j, pc)] = -rel[(r, f)].clone();
            }
        }

        // Boundary: each generator lifts to an SL2(Z) matrix whose columns
        // give the two cusps the symbol joins.
        let mut cusps: Vec<(i64, i64)> = Vec::new();
        let find_cusp = |cusps: &mut Vec<(i64, i64)>, x: (i64, i64)| -> usize {
            match cusps.iter().position(|&y| cusps_equivalent(x, y, n)) {
                Some(i) => i,
                None => {
                    cusps.push(x);
                    cusps.len() - 1
                }
            }
        };
        let mut gen_cusps: Vec<(usize, usize)> = Vec::with_capacity(ngens);
        for &(c, d) in &gens {
            let (head, tail) = boundary_cusps(c, d, n);
            let hi = find_cusp(&mut cusps, head);
            let ti = find_cusp(&mut cusps, tail);
            gen_cusps.push((hi, ti));
        }
        let ncusps = cusps.len();
        assert_eq!(ncusps, ncusps_expected, "cusp count fails at level {n}");

        let mut boundary = RatMat::zero(ncusps, dim);
        for (j, &f) in basis_gens.iter().enumerate() {
            let (hi, ti) = gen_cusps[f];
            boundary[(hi, j)] += Rat::one();
            boundary[(ti, j)] -= Rat::one();
        }
        // The boundary must factor through the relations: check it on
        // every generator, not only the basis ones.
        for (i, &(hi, ti)) in gen_cusps.iter().enumerate() {
            let through = boundary.mul_vec(&projection.column(i));
            for (k, value) in through.iter().enumerate() {
                let mut direct = Rat::zero();
                if k == hi {
                    direct += Rat::one();
                }
                if k == ti {
                    direct -= Rat::one();
                }
                assert_eq!(
                    *value, direct,
                    "boundary not well defined at level {n}, generator {i}"
                );
            }
        }

        let cuspidal_cols = boundary.kernel_basis();
        assert_eq!(
            cuspidal_cols.len(),
            2 * genus,
            "cuspidal dimension fails at level {n}"
        );
        let cuspidal = RatMat::from_columns(&cuspidal_cols, dim);

        // Star involution on V, checked on every generator.
        let mut star_v = RatMat::zero(dim, dim);
        for (j, &f) in basis_gens.iter().enumerate() {
            let (c, d) = gens[f];
            let (sc, sd) = apply_matrix(c, d, &STAR, n);
            let col = projection.column(class_of(sc, sd));
            for (i, x) in col.into_iter().enumerate() {
                star_v[(i, j)] = x;
            }
        }
        for (i, &(c, d)) in gens.iter().enumerate() {
            let (sc, sd) = apply_matrix(c, d, &STAR, n);
            let lhs = star_v.mul_vec(&projection.column(i));
            let rhs = projection.column(class_of(sc, sd));
            assert_eq!(lhs, rhs, "star not well defined at level {n}, generator {i}");
        }

        let star_cuspidal = cuspidal
            .solve_right(&star_v.mul(&cuspidal))
            .expect("star preserves the cuspidal subspace");
        assert!(
            star_cuspidal.mul(&star_cuspidal).is_identity(),
            "star is not an involution at level {n}"
        );

        let mut minus_identity = star_cuspidal.clone();
        for i in 0..minus_identity.rows() {
            minus_identity[(i, i)] -= Rat::one();
        }
        let plus_cols = minus_identity.kernel_basis();
        assert_eq!(plus_cols.len(), genus, "plus dimension fails at level {n}");
        let plus_basis = RatMat::from_columns(&plus_cols, 2 * genus);

        ModSymSpace {
            level,
            gens,
            gen_index,
            basis_gens,
            projection,
            cusps,
            boundary,
            cuspidal,
            star_cuspidal,
            plus_basis,
            hecke_cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn generators(&self) -> &[(u64, u64)] {
        &self.gens
    }

    /// Dimension of the full quotient V.
    pub fn dimension(&self) -> usize {
        self.basis_gens.len()
    }

    pub fn cuspidal_dimension(&self) -> usize {
        self.cuspidal.cols()
    }

    pub fn plus_dimension(&self) -> usize {
        self.plus_basis.cols()
    }

    pub fn cusps(&self) -> &[(i64, i64)] {
        &self.cusps
    }

    pub fn boundary_map(&self) -> &RatMat {
        &self.boundary
    }

    pub fn cuspidal_subspace(&self) -> &RatMat {
        &self.cuspidal
    }

    pub fn star_on_cuspidal(&self) -> &RatMat {
        &self.star_cuspidal
    }

    /// T_n in cuspidal coordinates (a 2g x 2g rational matrix); n = 1 is
    /// the identity.  Composite n are assembled from prime powers by the
    /// usual recurrences.
    pub fn hecke_matrix(&self, n: u64) -> RatMat {
        assert!(n >= 1, "hecke_matrix: n must be positive");
        let two_g = self.cuspidal.cols();
        if n == 1 {
            return RatMat::identity(two_g);
        }
        if let Some(m) = self.hecke_cache.lock().unwrap().get(&n) {
            return m.clone();
        }
        let f = arith::factorize(n);
        let result = if f.pairs().len() == 1 {
            let (p, e) = f.pairs()[0];
            self.hecke_prime_power(p, e)
        } else {
            let mut acc = RatMat::identity(two_g);
            for &(p, e) in f.pairs() {
                acc = acc.mul(&self.hecke_matrix(p.pow(e)));
            }
            acc
        };
        self.hecke_cache.lock().unwrap().insert(n, result.clone());
        result
    }

    fn hecke_prime_power(&self, p: u64, e: u32) -> RatMat {
        if e == 1 {
            return self.hecke_prime(p);
        }
        let tp = self.hecke_matrix(p);
        let prev = self.hecke_matrix(p.pow(e - 1));
        if self.level.get().is_multiple_of(p) {
            tp.mul(&prev)
        } else {
            let prev2 = self.hecke_matrix(p.pow(e - 2));
            tp.mul(&prev).sub(&prev2.scale(&rat(p as i64)))
        }
    }

    fn hecke_prime(&self, p: u64) -> RatMat {
        let mats = if self.level.get().is_multiple_of(p) {
            merel_matrices(p)
        } else {
            heilbronn_matrices(p)
        };
        let ambient = self.hecke_on_ambient(&mats);
        self.cuspidal
            .solve_right(&ambient.mul(&self.cuspidal))
            .expect("Hecke operators preserve the cuspidal subspace")
    }

    /// The operator sum_m [x * m] on V, built from the basis classes.
    fn hecke_on_ambient(&self, mats: &[[i64; 4]]) -> RatMat {
        let dim = self.dimension();
        let mut t = RatMat::zero(dim, dim);
        for (j, &f) in self.basis_gens.iter().enumerate() {
            let (c, d) = self.gens[f];
            let image = self.symbol_image(c, d, mats);
            for (i, x) in image.into_iter().enumerate() {
                t[(i, j)] = x;
            }
        }
        #[cfg(debug_assertions)]
        self.check_hecke_well_defined(mats, &t);
        t
    }

    /// Class of sum_m [(c, d) * m] in V.  Images falling off P^1 (their
    /// entries share a factor with N) contribute nothing.
    fn symbol_image(&self, c: u64, d: u64, mats: &[[i64; 4]]) -> Vec<Rat> {
        let n = self.level.get();
        let mut acc = vec![Rat::zero(); self.dimension()];
        for m in mats {
            let (cc, dd) = apply_matrix(c, d, m, n);
            if gcd(gcd(cc, n), dd) != 1 {
                continue;
            }
            let key = p1_normalize(cc, dd, self.level).expect("coprime checked");
            let col = self.gen_index[&key];
            for (i, x) in acc.iter_mut().enumerate() {
                *x += &self.projection[(i, col)];
            }
        }
        acc
    }

    /// The matrix family must act compatibly with the Manin relations:
    /// verify the ambient operator against the direct image of every
    /// generator, not just the basis ones.
    fn check_hecke_well_defined(&self, mats: &[[i64; 4]], t: &RatMat) {
        for i in 0..self.gens.len() {
            let (c, d) = self.gens[i];
            let direct = self.symbol_image(c, d, mats);
            let through = t.mul_vec(&self.projection.column(i));
            assert_eq!(
                direct, through,
                "Hecke action not well defined at level {}, generator {i}",
                self.level.get()
            );
        }
    }

    /// Basis of the lattice of integer-coefficient cusp forms in
    /// S2(Gamma0(N)), as a g x precision integer matrix of q-expansion
    /// coefficients (a_1 .. a_precision per row) in Hermite normal form.
    ///
    /// The rows of the matrix of n-th coefficients of the Hecke operators
    /// restricted to the plus cuspidal eigenspace span, after saturation,
    /// exactly this lattice; `precision` below the Sturm bound would make
    /// the truncation lossy and is rejected.
    pub fn integral_basis(&self, precision: usize) -> Result<IntMatrix> {
        let b_min = arith::sturm_bound(self.level);
        if precision < b_min {
            return Err(Error::PrecisionTooSmall {
                level: self.level.get(),
                precision,
                sturm_bound: b_min,
            });
        }
        let g = self.plus_basis.cols();
        if g == 0 {
            return Ok(IntMatrix::zero(0, precision));
        }
        let mut rows: Vec<Vec<Rat>> = vec![vec![Rat::zero(); precision]; g * g];
        for m in 1..=precision {
            let t = self.hecke_matrix(m as u64);
            let tp = self
                .plus_basis
                .solve_right(&t.mul(&self.plus_basis))
                .expect("Hecke operators commute with star");
            for i in 0..g {
                for j in 0..g {
                    rows[i * g + j][m - 1] = tp[(i, j)].clone();
                }
            }
        }
        // Clear denominators row by row; scaling rows does not change the
        // rational row space, and the saturation only depends on that.
        let int_rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|row| {
                let mut l = BigInt::one();
                for x in row {
                    l = l.lcm(x.denom());
                }
                row.iter()
                    .map(|x| x.numer() * (&l / x.denom()))
                    .collect()
            })
            .collect();
        let lattice = IntMatrix::from_rows(int_rows, precision).saturate();
        assert_eq!(
            lattice.rows(),
            g,
            "coefficient lattice rank differs from the genus at level {}",
            self.level.get()
        );
        Ok(lattice)
    }
}

/// Basis of integer-coefficient cusp forms of weight 2 for Gamma0(N) to
/// `precision` coefficients; see [`ModSymSpace::integral_basis`].
pub fn integral_basis(level: Level, precision: usize) -> Result<IntMatrix> {
    let b_min = arith::sturm_bound(level);
    if precision < b_min {
        return Err(Error::PrecisionTooSmall {
            level: level.get(),
            precision,
            sturm_bound: b_min,
        });
    }
    if arith::genus_x0(level) == 0 {
        return Ok(IntMatrix::zero(0, precision));
    }
    ModSymSpace::build(level).integral_basis(precision)
}

/// The two cusps joined by the symbol of (c : d): lift to [a b; c' d'] in
/// SL2(Z) and read off the columns a/c' and b/d'.
fn boundary_cusps(c: u64, d: u64, n: u64) -> ((i64, i64), (i64, i64)) {
    if n == 1 || c.is_multiple_of(n) {
        return ((1, 0), (0, 1));
    }
    let c = (c % n) as i64;
    let n = n as i64;
    // Slide d within its residue class until it is coprime to c; this must
    // happen within c steps because gcd(c, d, n) = 1.
    let mut d1 = (d as i64) % n;
    let mut steps = 0;
    while gcd(c, d1.rem_euclid(c)) != 1 {
        d1 += n;
        steps += 1;
        assert!(steps <= c, "no coprime lift of the symbol");
    }
    let (g, s) = p1::ext_gcd(d1, c);
    assert_eq!(g, 1);
    // s*d1 + t*c = 1 with the matrix [s, -t; c, d1] in SL2(Z).
    let t = (1 - (s as i128) * (d1 as i128)) / (c as i128);
    let t = i64::try_from(t).expect("Bezout coefficient fits");
    (reduce_cusp(s, c), reduce_cusp(-t, d1))
}

/// Reduce a/c to lowest terms with nonnegative denominator; infinity is
/// always (1, 0).
fn reduce_cusp(a: i64, c: i64) -> (i64, i64) {
    if c == 0 {
        return (1, 0);
    }
    let g = gcd(a.unsigned_abs(), c.unsigned_abs()) as i64;
    let (a, c) = (a / g, c / g);
    if c < 0 {
        (-a, -c)
    } else {
        (a, c)
    }
}

/// Gamma0(N)-equivalence of cusps a1/c1 and a2/c2, both reduced: with
/// s_i an inverse of a_i mod c_i, the cusps are equivalent exactly when
/// s1 c2 = s2 c1 mod gcd(c1 c2, N).  The choice of inverse does not
/// matter because c1 c2 vanishes mod the gcd.
fn cusps_equivalent(x: (i64, i64), y: (i64, i64), n: u64) -> bool {
    let (a1, c1) = x;
    let (a2, c2) = y;
    let s1 = cusp_inverse(a1, c1) as i128;
    let s2 = cusp_inverse(a2, c2) as i128;
    let g = gcd((c1 as i128) * (c2 as i128), n as i128);
    if g == 0 {
        // Both cusps are infinity.
        return true;
    }
    (s1 * (c2 as i128) - s2 * (c1 as i128)).rem_euclid(g) == 0
}

fn cusp_inverse(a: i64, c: i64) -> i64 {
    debug_assert!(c >= 0);
    if c == 0 {
        return 1;
    }
    if c == 1 {
        return 0;
    }
    let ar = a.rem_euclid(c);
    let (g, s) = p1::ext_gcd(ar, c);
    assert_eq!(g, 1, "cusp is not reduced");
    s.rem_euclid(c)
}
