//! Elliptic curves over Q and the coefficients of their newforms.
//!
//! A curve is stored as a minimal Weierstrass model [a1, a2, a3, a4, a6].
//! By modularity the L-series coefficients a_n of the attached newform are
//! computed from point counts: a_p = p + 1 - #E(F_p) at good primes,
//! a_p = p - #E_ns(F_p) at bad primes (+1, -1 or 0 for split, nonsplit and
//! additive reduction), and the usual Hecke recurrences extend these to all
//! n.  Counting is quadratic-character summation for p >= 5 and a direct
//! scan of the plane for p = 2, 3; both are exact and fast at the Sturm
//! bounds that matter here.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{self, Level};
use crate::error::Error;
use crate::Result;

/// An elliptic curve of known conductor, with whatever auxiliary data the
/// caller has: the modular degree feeds the divisibility route, Tamagawa
/// numbers and torsion feed the local-invariant check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRecord {
    pub label: Option<String>,
    pub level: Level,
    pub a_invariants: [i64; 5],
    pub modular_degree: Option<u64>,
    pub tamagawa: Option<BTreeMap<u64, u64>>,
    pub torsion_order: Option<u64>,
}

impl CurveRecord {
    /// Validates the model: nonzero discriminant, every prime of the level
    /// divides the discriminant, Tamagawa numbers keyed exactly by the
    /// primes of the level, and no blatant non-minimality at p >= 5.
    pub fn new(
        label: Option<String>,
        level: Level,
        a_invariants: [i64; 5],
        modular_degree: Option<u64>,
        tamagawa: Option<BTreeMap<u64, u64>>,
        torsion_order: Option<u64>,
    ) -> Result<Self> {
        let record = CurveRecord {
            label,
            level,
            a_invariants,
            modular_degree,
            tamagawa,
            torsion_order,
        };
        let disc = record.discriminant();
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        let level_primes: Vec<u64> = arith::factorize(level.get()).primes().collect();
        for &p in &level_primes {
            let bp = BigInt::from(p);
            if !(&disc % &bp).is_zero() {
                return Err(Error::InvalidInput(format!(
                    "prime {p} divides the level but not the discriminant"
                )));
            }
            // Minimality test, sufficient for p >= 5: a minimal model has
            // v_p(disc) < 12 or v_p(c4) < 4.
            if p >= 5 {
                let vd = valuation(&disc, p);
                if vd >= 12 {
                    let c4 = record.c4();
                    if c4.is_zero() || valuation(&c4, p) >= 4 {
                        return Err(Error::InvalidInput(format!(
                            "model is not minimal at {p}"
                        )));
                    }
                }
            }
        }
        if let Some(tam) = &record.tamagawa {
            let keys: Vec<u64> = tam.keys().copied().collect();
            if keys != level_primes {
                return Err(Error::InvalidInput(
                    "Tamagawa numbers must be keyed by exactly the primes of the level".into(),
                ));
            }
            if tam.values().any(|&c| c == 0) {
                return Err(Error::InvalidInput("Tamagawa numbers must be positive".into()));
            }
        }
        if record.modular_degree == Some(0) {
            return Err(Error::InvalidInput("modular degree must be positive".into()));
        }
        if record.torsion_order == Some(0) {
            return Err(Error::InvalidInput("torsion order must be positive".into()));
        }
        Ok(record)
    }

    fn b_invariants(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        let [a1, a2, a3, a4, a6] = self.a_invariants.map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3
            - &a4 * &a4;
        (b2, b4, b6, b8)
    }

    pub fn discriminant(&self) -> BigInt {
        let (b2, b4, b6, b8) = self.b_invariants();
        -(&b2 * &b2) * &b8 - 8 * (&b4 * &b4 * &b4) - 27 * (&b6 * &b6) + 9 * &b2 * &b4 * &b6
    }

    fn c4(&self) -> BigInt {
        let (b2, b4, _, _) = self.b_invariants();
        &b2 * &b2 - 24 * &b4
    }

    /// a_p for a prime of good reduction.
    pub fn ap_good(&self, p: u64) -> i64 {
        assert!(arith::is_prime(p), "ap_good: {p} is not prime");
        assert!(!self.level.get().is_multiple_of(p), "ap_good: {p} divides the level");
        let ap = if p < 5 {
            let affine = self.affine_points(p).len() as i64;
            p as i64 + 1 - (affine + 1)
        } else {
            -self.character_sum(p)
        };
        assert!(ap * ap <= 4 * p as i64, "Hasse bound violated at {p}");
        ap
    }

    /// a_p for a prime of bad reduction: p - #E_ns(F_p).  A minimal model
    /// always lands in {-1, 0, 1}; anything else is reported as an error.
    pub fn ap_bad(&self, p: u64) -> Result<i64> {
        assert!(arith::is_prime(p), "ap_bad: {p} is not prime");
        assert!(self.level.get().is_multiple_of(p), "ap_bad: {p} does not divide the level");
        let ns_affine = if p < 5 {
            self.affine_points(p)
                .into_iter()
                .filter(|&(x, y)| !self.is_singular_point(x, y, p))
                .count() as i64
        } else {
            self.nonsingular_affine_count(p)
        };
        let ap = p as i64 - (ns_affine + 1);
        if !(-1..=1).contains(&ap) {
            return Err(Error::NonMinimalModel { p, got: ap });
        }
        Ok(ap)
    }

    /// a_p at any prime.
    pub fn ap(&self, p: u64) -> Result<i64> {
        if self.level.get().is_multiple_of(p) {
            self.ap_bad(p)
        } else {
            Ok(self.ap_good(p))
        }
    }

    /// The first `precision` coefficients a_1 .. a_precision of the newform
    /// attached to the curve.
    pub fn coefficient_vector(&self, precision: usize) -> Result<CoeffVector> {
        let mut a = vec![0i64; precision + 1];
        if precision >= 1 {
            a[1] = 1;
        }
        let spf = smallest_prime_factors(precision);
        for n in 2..=precision {
            let p = spf[n];
            let mut m = n;
            let mut pk = 1usize;
            while m % p == 0 {
                m /= p;
                pk *= p;
            }
            a[n] = if m > 1 {
                // Multiplicativity across the coprime split n = p^k * m.
                a[pk] * a[m]
            } else if pk == p {
                self.ap(p as u64)?
            } else if self.level.get().is_multiple_of(p as u64) {
                a[p] * a[n / p]
            } else {
                a[p] * a[n / p] - (p as i64) * a[n / (p * p)]
            };
        }
        Ok(CoeffVector {
            level: self.level,
            coeffs: a[1..].to_vec(),
        })
    }

    /// All affine points of the (possibly singular) reduction mod p.
    fn affine_points(&self, p: u64) -> Vec<(i64, i64)> {
        let pm = p as i64;
        let [a1, a2, a3, a4, a6] = self.a_invariants.map(|x| x.rem_euclid(pm));
        let mut pts = Vec::new();
        for x in 0..pm {
            for y in 0..pm {
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = ((x * x) % pm) * x + a2 * x * x + a4 * x + a6;
                if (lhs - rhs).rem_euclid(pm) == 0 {
                    pts.push((x, y));
                }
            }
        }
        pts
    }

    fn is_singular_point(&self, x: i64, y: i64, p: u64) -> bool {
        let pm = p as i64;
        let [a1, a2, a3, a4, _] = self.a_invariants.map(|v| v.rem_euclid(pm));
        let fx = a1 * y - 3 * x * x - 2 * a2 * x - a4;
        let fy = 2 * y + a1 * x + a3;
        fx.rem_euclid(pm) == 0 && fy.rem_euclid(pm) == 0
    }

    /// Sum of the quadratic character over the completed-square cubic,
    /// which equals -a_p at good primes.  Only legal for p >= 5, where the
    /// substitution z = 2y + a1 x + a3 is invertible.
    fn character_sum(&self, p: u64) -> i64 {
        let pm = p as i128;
        let (b2, b4, b6, _) = self.b_invariants();
        let b2 = red_big(&b2, p);
        let b4 = red_big(&b4, p);
        let b6 = red_big(&b6, p);
        let chi = quadratic_character_table(p);
        let mut sum = 0i64;
        for x in 0..pm {
            // g(x) = 4x^3 + b2 x^2 + 2 b4 x + b6 mod p.
            let x2 = (x * x) % pm;
            let g = (4 * x2 % pm * x + b2 * x2 + 2 * b4 * x + b6).rem_euclid(pm);
            sum += chi[g as usize] as i64;
        }
        sum
    }

    /// Affine nonsingular point count of a bad reduction, p >= 5.
    fn nonsingular_affine_count(&self, p: u64) -> i64 {
        let pm = p as i128;
        let (b2, b4, b6, _) = self.b_invariants();
        let b2 = red_big(&b2, p);
        let b4 = red_big(&b4, p);
        let b6 = red_big(&b6, p);
        let chi = quadratic_character_table(p);
        let mut count = 0i64;
        for x in 0..pm {
            let x2 = (x * x) % pm;
            let g = (4 * x2 % pm * x + b2 * x2 + 2 * b4 * x + b6).rem_euclid(pm);
            // In z-coordinates the curve is z^2 = g(x); the only candidate
            // singular point above x is z = 0, singular iff g'(x) = 0 too.
            let gp = (12 * x2 + 2 * b2 * x + 2 * b4).rem_euclid(pm);
            count += 1 + chi[g as usize] as i64;
            if g == 0 && gp == 0 {
                count -= 1;
            }
        }
        count
    }
}

/// Coefficients a_1 .. a_B of a newform with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffVector {
    level: Level,
    coeffs: Vec<i64>,
}

impl CoeffVector {
    pub fn new(level: Level, coeffs: Vec<i64>) -> Self {
        assert!(coeffs.is_empty() || coeffs[0] == 1, "newforms are normalized: a_1 = 1");
        CoeffVector { level, coeffs }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// a_n, 1-indexed.
    pub fn get(&self, n: usize) -> i64 {
        assert!((1..=self.coeffs.len()).contains(&n), "coefficient index out of range");
        self.coeffs[n - 1]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn to_bigints(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(|&x| BigInt::from(x)).collect()
    }
}

/// chi[t] = 0, 1, -1 according to t being zero, a nonzero square, or a
/// nonsquare mod p.
fn quadratic_character_table(p: u64) -> Vec<i8> {
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for x in 1..p {
        chi[((x * x) % p) as usize] = 1;
    }
    chi
}

fn red_big(x: &BigInt, p: u64) -> i128 {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let m = x.mod_floor(&BigInt::from(p));
    m.to_i128().expect("reduced value fits")
}

fn valuation(x: &BigInt, p: u64) -> u32 {
    assert!(!x.is_zero());
    let bp = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0u32;
    while (&x % &bp).is_zero() {
        x /= &bp;
        v += 1;
    }
    v
}

/// spf[n] = smallest prime factor of n for n >= 2.
fn smallest_prime_factors(limit: usize) -> Vec<usize> {
    let mut spf: Vec<usize> = (0..=limit).collect();
    let mut i = 2;
    while i * i <= limit {
        if spf[i] == i {
            let mut j = i * i;
            while j <= limit {
                if spf[j] == j {
                    spf[j] = i;
                }
                j += i;
            }
        }
        i += 1;
    }
    spf
}
