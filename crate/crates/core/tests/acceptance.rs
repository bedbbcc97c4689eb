//! Acceptance gate: one test per release criterion, each ending in a
//! single PASS/FAIL line.  Every numeric threshold is pinned here as a
//! constant.  Criterion 8 (wall-clock performance) is reported but does
//! not fail the build; everything else asserts.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oldcong_core::congruence::{self, Method, Verdict};
use oldcong_core::linalg::brute_force_membership;
use oldcong_core::ratmat::{Rat, RatMat};
use oldcong_core::{
    arith, fixtures, integral_basis, oldspace_matrix, sturm_bound, witness_verifies, IntMatrix,
    Level, ModSymSpace,
};

const STURM_BOUND_BUDGET: Duration = Duration::from_millis(1);
const DIMENSION_SUITE_BUDGET: Duration = Duration::from_secs(60);
const PIPELINE_BUDGET: Duration = Duration::from_secs(10);
const STRETCH_BUDGET: Duration = Duration::from_secs(120);
const RANDOM_MATRIX_TRIALS: usize = 200;
const RNG_SEED: u64 = 0x01dc05eed;

#[test]
fn criterion_1_sturm_bounds_are_exact_and_fast() {
    let expected: [(u64, usize); 5] = [(11, 1), (22, 4), (33, 6), (42, 13), (1500, 597)];
    for &(n, b) in &expected {
        let start = Instant::now();
        let got = sturm_bound(Level::new(n));
        let elapsed = start.elapsed();
        assert_eq!(got, b, "sturm_bound({n})");
        assert!(
            elapsed < STURM_BOUND_BUDGET,
            "sturm_bound({n}) took {elapsed:?}"
        );
    }
    println!("criterion 1: PASS (sturm bounds 1, 4, 6, 13, 597 exact, each under 1 ms)");
}

#[test]
fn criterion_2_basis_row_counts_match_the_genus() {
    let start = Instant::now();
    let mut checked = 0usize;
    for n in 1..=60u64 {
        let level = Level::new(n);
        let genus = arith::genus_x0(level);
        if genus == 0 {
            continue;
        }
        let basis = integral_basis(level, sturm_bound(level)).expect("precision is sufficient");
        assert_eq!(
            basis.rows() as u64,
            genus,
            "integral_basis rank at level {n}"
        );
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < DIMENSION_SUITE_BUDGET,
        "dimension suite took {elapsed:?}"
    );
    println!(
        "criterion 2: PASS ({checked} levels N <= 60 with genus >= 1, rank == genus, {}.{:03} s < 60 s)",
        elapsed.as_secs(),
        elapsed.subsec_millis()
    );
}

#[test]
fn criterion_3_fixture_coefficients_lie_in_the_integral_basis_lattice() {
    for curve in fixtures::all() {
        let level = curve.level;
        let b = sturm_bound(level);
        let basis = integral_basis(level, b).expect("precision is sufficient");
        let vf = curve
            .coefficient_vector(b)
            .expect("fixture curves are minimal")
            .to_bigints();
        // Exact lattice membership: adjoining the vector must not change
        // the Hermite form.
        let h = basis.hnf();
        let h_extended = basis.stack_row(&vf).hnf();
        assert_eq!(
            h, h_extended,
            "coefficient vector escapes the lattice at level {}",
            level.get()
        );
    }
    println!("criterion 3: PASS (8 fixture curves, exact Z-lattice membership, no tolerance)");
}

#[test]
fn criterion_4_both_routes_agree_on_every_fixture() {
    for curve in fixtures::all() {
        let label = curve.label.clone().unwrap_or_default();
        let report = congruence::congruence_primes(&curve, Method::Both)
            .unwrap_or_else(|e| panic!("both-route run failed for {label}: {e}"));
        // The final list is always a sublist of the candidates.
        for p in &report.congruence_primes {
            assert!(
                report.candidates.iter().any(|c| &c.prime == p),
                "{label}: prime {p} missing from candidates"
            );
        }
        // Each reported prime carries an independently checkable witness.
        let old = oldspace_matrix(curve.level);
        let vf = curve
            .coefficient_vector(old.precision())
            .expect("fixture curves are minimal")
            .to_bigints();
        for (p, witness) in &report.witnesses {
            assert!(
                witness_verifies(witness, old.matrix(), &vf),
                "{label}: witness mod {p} fails"
            );
        }
    }
    println!("criterion 4: PASS (method both succeeds on all 8 fixtures; routes agree exactly)");
}

#[test]
fn criterion_5_prime_conductors_have_no_congruence_primes() {
    for n in [11u64, 17, 37] {
        let curve = fixtures::by_level(n);
        let report = congruence::congruence_primes(&curve, Method::Both)
            .unwrap_or_else(|e| panic!("pipeline failed at level {n}: {e}"));
        assert!(
            report.congruence_primes.is_empty(),
            "level {n} should have no congruence primes"
        );
        assert_eq!(
            report.congruence_exponent,
            Some(BigUint::one()),
            "level {n} congruence exponent"
        );
    }
    println!("criterion 5: PASS (conductors 11, 17, 37 give the empty prime list)");
}

#[test]
fn criterion_6_linear_algebra_survives_the_brute_force_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED);
    for trial in 0..RANDOM_MATRIX_TRIALS {
        let rows = rng.gen_range(1..=3usize);
        let cols = rng.gen_range(1..=4usize);
        let a = random_matrix(&mut rng, rows, cols);

        check_hnf_against_minors(&a, trial);
        check_snf_against_minors(&a, trial);
        check_saturation_against_minors(&a, trial);

        for p in [2u64, 3, 5] {
            // A vector drawn at random, usually outside the row space.
            let v: Vec<BigInt> = (0..cols).map(|_| BigInt::from(rng.gen_range(-5..=5i64))).collect();
            check_membership(&a, &v, p, trial);
            // A vector built from the rows, always inside it.
            let mut w = vec![BigInt::zero(); cols];
            for i in 0..rows {
                let c = BigInt::from(rng.gen_range(0..p));
                for j in 0..cols {
                    w[j] += &c * &a[(i, j)];
                }
            }
            check_membership(&a, &w, p, trial);
            assert!(
                a.in_rowspace_mod_p(&w, &BigUint::from(p)).is_some(),
                "trial {trial}: constructed combination rejected mod {p}"
            );
        }
    }
    println!(
        "criterion 6: PASS ({RANDOM_MATRIX_TRIALS} random matrices, hnf/snf/saturate vs minor \
         enumeration, membership vs brute force at p = 2, 3, 5, zero failures)"
    );
}

#[test]
fn criterion_7_hecke_operators_commute_and_t2_has_the_right_trace() {
    let mut levels_checked = 0usize;
    for n in 1..=60u64 {
        let level = Level::new(n);
        if arith::genus_x0(level) == 0 {
            continue;
        }
        let space = ModSymSpace::build(level);
        let operators: Vec<RatMat> = (1..=12).map(|m| space.hecke_matrix(m)).collect();
        for i in 0..operators.len() {
            for j in i + 1..operators.len() {
                assert_eq!(
                    operators[i].mul(&operators[j]),
                    operators[j].mul(&operators[i]),
                    "T_{} and T_{} do not commute at level {n}",
                    i + 1,
                    j + 1
                );
            }
        }
        let star = space.star_on_cuspidal();
        for (m, t) in operators.iter().enumerate() {
            assert_eq!(
                star.mul(t),
                t.mul(star),
                "star and T_{} do not commute at level {n}",
                m + 1
            );
        }
        levels_checked += 1;
    }

    let trace = trace_on_plus_subspace(Level::new(11), 2);
    assert_eq!(trace, Rat::from_integer(BigInt::from(-2)), "trace of T_2 at level 11");
    println!(
        "criterion 7: PASS (T_m T_n = T_n T_m for m, n <= 12 and star commutation on \
         {levels_checked} levels N <= 60; trace of T_2 on the plus space at 11 is -2)"
    );
}

#[test]
fn criterion_8_pipeline_timings_reported() {
    // Reported, not build-blocking: slow hardware must not turn a correct
    // build red, so this test prints its verdict instead of asserting.
    let mut all_ok = true;
    let mut lines = Vec::new();
    for curve in fixtures::all() {
        let label = curve.label.clone().unwrap_or_default();
        let start = Instant::now();
        let report = congruence::congruence_primes(&curve, Method::Both);
        let elapsed = start.elapsed();
        let ok = report.is_ok() && elapsed < PIPELINE_BUDGET;
        all_ok &= ok;
        lines.push(format!(
            "  {label}: {}.{:03} s ({})",
            elapsed.as_secs(),
            elapsed.subsec_millis(),
            if ok { "within 10 s" } else { "OVER 10 s" }
        ));
    }

    // Stretch target: a two-prime level near 300.  No rational newform
    // fixture is carried there, so the saturation route runs against a
    // synthetic primitive vector outside the rational old space.
    let stretch_level = Level::new(302);
    let start = Instant::now();
    let old = oldspace_matrix(stretch_level);
    let mut e1 = vec![BigInt::zero(); old.precision()];
    e1[0] = BigInt::one();
    let stretch = congruence::saturation_congruence_primes(&e1, old.matrix(), stretch_level);
    let elapsed = start.elapsed();
    let stretch_ok = stretch.is_ok() && elapsed < STRETCH_BUDGET;
    all_ok &= stretch_ok;
    lines.push(format!(
        "  stretch level 302 ({} oldspace rows): {}.{:03} s ({})",
        old.matrix().rows(),
        elapsed.as_secs(),
        elapsed.subsec_millis(),
        if stretch_ok { "within 120 s" } else { "OVER 120 s" }
    ));

    println!(
        "criterion 8: {} (performance is reported, never build-blocking)",
        if all_ok { "PASS" } else { "FAIL" }
    );
    for line in lines {
        println!("{line}");
    }
}

#[test]
fn criterion_9_local_factor_verdicts_are_all_consistent() {
    let mut verdicts_seen = 0usize;
    for curve in fixtures::all() {
        if curve.tamagawa.is_none() || curve.torsion_order.is_none() {
            continue;
        }
        let label = curve.label.clone().unwrap_or_default();
        let report = congruence::congruence_primes(&curve, Method::Both)
            .unwrap_or_else(|e| panic!("pipeline failed for {label}: {e}"));
        let verdicts = congruence::check_conjecture1(&report, &curve)
            .unwrap_or_else(|e| panic!("local-factor check failed for {label}: {e}"));
        for v in &verdicts {
            assert_eq!(
                v.verdict,
                Verdict::Consistent,
                "{label}: ell = {} flagged: {}",
                v.ell,
                v.reason
            );
            verdicts_seen += 1;
        }
    }
    assert!(verdicts_seen > 0, "the fixture set must exercise the check");
    println!(
        "criterion 9: PASS ({verdicts_seen} odd-prime verdicts across the fixtures, all consistent)"
    );
}

// ---------------------------------------------------------------------------
// Criterion 6 oracles.  Everything below recomputes the normal forms from
// first principles (minor enumeration, triangular solving, rational row
// reduction) so that a shared bug in the library cannot hide itself.

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> IntMatrix {
    let data: Vec<Vec<BigInt>> = (0..rows)
        .map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-5..=5i64))).collect())
        .collect();
    IntMatrix::from_rows(data, cols)
}

/// Determinant by Laplace expansion along the first row; k <= 4 here.
fn det(m: &[Vec<BigInt>]) -> BigInt {
    let k = m.len();
    if k == 0 {
        return BigInt::one();
    }
    if k == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigInt::zero();
    for j in 0..k {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = (1..k)
            .map(|i| {
                (0..k)
                    .filter(|&c| c != j)
                    .map(|c| m[i][c].clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// gcd of all k x k minors; zero when every minor vanishes.
fn determinantal_divisor(a: &IntMatrix, k: usize) -> BigUint {
    let mut g = BigInt::zero();
    for row_set in combinations(a.rows(), k) {
        for col_set in combinations(a.cols(), k) {
            let sub: Vec<Vec<BigInt>> = row_set
                .iter()
                .map(|&i| col_set.iter().map(|&j| a[(i, j)].clone()).collect())
                .collect();
            g = g.gcd(&det(&sub));
        }
    }
    g.magnitude().clone()
}

/// Smith chain from determinantal divisors: d_k = g_k / g_{k-1}.
fn smith_oracle(a: &IntMatrix) -> Vec<BigUint> {
    let mut chain = Vec::new();
    let mut prev = BigUint::one();
    for k in 1..=a.rows().min(a.cols()) {
        let g = determinantal_divisor(a, k);
        if g.is_zero() {
            break;
        }
        chain.push(&g / &prev);
        prev = g;
    }
    chain
}

fn to_ratmat(a: &IntMatrix) -> RatMat {
    let rows: Vec<Vec<Rat>> = (0..a.rows())
        .map(|i| (0..a.cols()).map(|j| Rat::from_integer(a[(i, j)].clone())).collect())
        .collect();
    RatMat::from_rows(rows, a.cols())
}

/// Rational row spaces compared through their reduced echelon forms.
fn same_rational_rowspace(a: &IntMatrix, b: &IntMatrix) -> bool {
    let mut ra = to_ratmat(a);
    let mut rb = to_ratmat(b);
    let pa = ra.rref();
    let pb = rb.rref();
    if pa != pb {
        return false;
    }
    for r in 0..pa.len() {
        for c in 0..a.cols() {
            if ra[(r, c)] != rb[(r, c)] {
                return false;
            }
        }
    }
    true
}

/// Echelon shape required of a Hermite form: strictly increasing positive
/// pivots, entries above each pivot reduced into [0, pivot), no zero rows.
fn assert_hermite_shape(h: &IntMatrix, trial: usize) {
    let mut last_pivot: Option<usize> = None;
    for i in 0..h.rows() {
        let pivot_col = (0..h.cols()).find(|&j| !h[(i, j)].is_zero());
        let Some(j) = pivot_col else {
            panic!("trial {trial}: Hermite form contains a zero row");
        };
        if let Some(prev) = last_pivot {
            assert!(j > prev, "trial {trial}: pivot columns not increasing");
        }
        last_pivot = Some(j);
        assert!(h[(i, j)].is_positive(), "trial {trial}: pivot not positive");
        for r in 0..i {
            assert!(
                !h[(r, j)].is_negative() && h[(r, j)] < h[(i, j)],
                "trial {trial}: entry above pivot not reduced"
            );
        }
    }
}

/// Integral membership in the lattice spanned by an echelon-form matrix:
/// peel off each pivot with an exact division, succeed when zero remains.
fn row_in_lattice(h: &IntMatrix, v: &[BigInt]) -> bool {
    let mut v = v.to_vec();
    for i in 0..h.rows() {
        let j = (0..h.cols()).find(|&j| !h[(i, j)].is_zero()).expect("no zero rows");
        if v[j].is_zero() {
            continue;
        }
        let (q, r) = v[j].div_rem(&h[(i, j)]);
        if !r.is_zero() {
            return false;
        }
        for c in 0..h.cols() {
            let t = &q * &h[(i, c)];
            v[c] -= t;
        }
    }
    v.iter().all(Zero::is_zero)
}

fn check_hnf_against_minors(a: &IntMatrix, trial: usize) {
    let h = a.hnf();
    assert_hermite_shape(&h, trial);
    assert!(
        same_rational_rowspace(a, &h),
        "trial {trial}: hnf changed the rational row space"
    );
    for i in 0..a.rows() {
        assert!(
            row_in_lattice(&h, a.row(i)),
            "trial {trial}: row {i} of the input escapes its Hermite lattice"
        );
    }
    // Containment plus an equal maximal determinantal divisor pins the
    // index of the sublattice to 1, so the lattices are equal.
    let r = h.rows();
    assert_eq!(
        determinantal_divisor(a, r),
        determinantal_divisor(&h, r),
        "trial {trial}: hnf changed the maximal determinantal divisor"
    );
}

fn check_snf_against_minors(a: &IntMatrix, trial: usize) {
    let got = a.snf().divisors().to_vec();
    let want = smith_oracle(a);
    assert_eq!(got, want, "trial {trial}: Smith chain disagrees with the minor gcds");
    for w in got.windows(2) {
        assert!(
            (&w[1] % &w[0]).is_zero(),
            "trial {trial}: Smith chain not a divisibility chain"
        );
    }
    let r = got.len();
    assert_eq!(
        a.saturation_index(),
        determinantal_divisor(a, r),
        "trial {trial}: saturation index is not the maximal determinantal divisor"
    );
}

fn check_saturation_against_minors(a: &IntMatrix, trial: usize) {
    let s = a.saturate();
    assert_hermite_shape(&s, trial);
    assert!(
        same_rational_rowspace(a, &s),
        "trial {trial}: saturation changed the rational row space"
    );
    for i in 0..a.rows() {
        assert!(
            row_in_lattice(&s, a.row(i)),
            "trial {trial}: input row {i} escapes the saturation"
        );
    }
    let r = s.rows();
    assert!(
        determinantal_divisor(&s, r).is_one() || r == 0,
        "trial {trial}: saturation is not saturated"
    );
    assert_eq!(s.saturate(), s, "trial {trial}: saturation is not idempotent");
}

fn check_membership(a: &IntMatrix, v: &[BigInt], p: u64, trial: usize) {
    let pb = BigUint::from(p);
    let got = a.in_rowspace_mod_p(v, &pb);
    let want = brute_force_membership(a, v, p);
    assert_eq!(
        got.is_some(),
        want,
        "trial {trial}: membership mod {p} disagrees with brute force"
    );
    if let Some(witness) = got {
        assert!(
            witness_verifies(&witness, a, v),
            "trial {trial}: witness mod {p} fails verification"
        );
    }
}

fn trace_on_plus_subspace(level: Level, n: u64) -> Rat {
    let space = ModSymSpace::build(level);
    let dim = space.cuspidal_dimension();
    let star = space.star_on_cuspidal();
    let fixed = star.sub(&RatMat::identity(dim)).kernel_basis();
    let k = RatMat::from_columns(&fixed, dim);
    let t = space.hecke_matrix(n);
    let restricted = k.solve_right(&t.mul(&k)).expect("plus space is Hecke-stable");
    let mut trace = Rat::from_integer(BigInt::zero());
    for i in 0..restricted.rows() {
        trace += restricted[(i, i)].clone();
    }
    trace
}
