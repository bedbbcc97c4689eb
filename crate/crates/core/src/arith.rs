//! Multiplicative invariants of Gamma0(N): factorization, the index
//! psi(N) = [SL2(Z) : Gamma0(N)], the Sturm bound, and the genus of X0(N).
//!
//! Everything here is exact integer arithmetic.  The Sturm bound in
//! particular is a floor of a rational number that is frequently within
//! 1/N of an integer, so it is evaluated with a single exact floor rather
//! than in floating point.

use crate::error::Error;

/// Level N of Gamma0(N).  Always >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Level(u64);

impl Level {
    /// Usage error if n = 0.
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "level must be a positive integer");
        Level(n)
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl From<Level> for u64 {
    fn from(level: Level) -> u64 {
        level.0
    }
}

impl TryFrom<u64> for Level {
    type Error = Error;
    fn try_from(n: u64) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidInput("level must be >= 1".into()));
        }
        Ok(Level(n))
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Prime factorization as (prime, exponent) pairs with ascending primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    /// Exponent of p in the factored integer (0 if p does not divide it).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.pairs
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn value(&self) -> u64 {
        self.pairs
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
            .max(1)
    }
}

/// Trial-division factorization.  Usage error if n = 0; n = 1 gives the
/// empty factorization.  Desk-scale levels make anything fancier pointless.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize: argument must be a positive integer");
    let mut pairs = Vec::new();
    let mut m = n;
    let mut p: u64 = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            pairs.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        pairs.push((m, 1));
    }
    Factorization { pairs }
}

/// Divisors of n in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors: argument must be a positive integer");
    let mut divs = vec![1u64];
    for &(p, e) in factorize(n).pairs() {
        let prev = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(prev.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    divs
}

pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi: argument must be a positive integer");
    let mut result = n;
    for p in factorize(n).primes() {
        result = result / p * (p - 1);
    }
    result
}

/// Deterministic trial-division primality check; fine for desk-scale inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut p = 3u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 2;
    }
    true
}

/// psi(N) = [SL2(Z) : Gamma0(N)] = N * prod_{p | N} (1 + 1/p).
pub fn psi_index(level: Level) -> u64 {
    let n = level.get();
    let mut result = n;
    for p in factorize(n).primes() {
        result = result / p * (p + 1);
    }
    result
}

/// Sturm bound for weight-2 forms on Gamma0(N):
/// B = floor(psi(N)/6 - (psi(N) - 1)/N), clamped at 0.
///
/// The argument of the floor is evaluated as the single exact rational
/// (psi*N - 6*psi + 6) / (6N); two floating-point divisions can land on the
/// wrong side of an integer here.  B = 0 (levels 1 and 2) is a legal result
/// and callers must cope with empty coefficient vectors rather than this
/// function rounding up.
pub fn sturm_bound(level: Level) -> usize {
    let n = psi_index(level) as i128;
    let nn = level.get() as i128;
    let floor = (n * nn - 6 * n + 6).div_euclid(6 * nn);
    floor.max(0) as usize
}

/// Number of solutions of x^2 + 1 = 0 mod N (elliptic points of order 2),
/// by the multiplicative formula.
pub fn nu2(level: Level) -> u64 {
    let mut count = 1u64;
    for &(p, e) in factorize(level.get()).pairs() {
        count *= match (p % 4, e) {
            (2, 1) => 1, // p = 2, e = 1: the solution x = 1
            (2, _) => 0, // 4 | N
            (1, _) => 2,
            (3, _) => 0,
            _ => unreachable!(),
        };
    }
    count
}

/// Number of solutions of x^2 + x + 1 = 0 mod N (elliptic points of order 3).
pub fn nu3(level: Level) -> u64 {
    let mut count = 1u64;
    for &(p, e) in factorize(level.get()).pairs() {
        count *= if p == 3 {
            if e == 1 {
                1
            } else {
                0
            }
        } else {
            match p % 3 {
                1 => 2,
                _ => 0, // p = 2 mod 3, and p = 2 itself
            }
        };
    }
    count
}

/// Number of cusps of X0(N): sum over d | N of phi(gcd(d, N/d)).
pub fn nu_infinity(level: Level) -> u64 {
    let n = level.get();
    divisors(n)
        .iter()
        .map(|&d| euler_phi(num_integer::gcd(d, n / d)))
        .sum()
}

/// Genus of the modular curve X0(N):
/// g = 1 + psi/12 - nu2/4 - nu3/3 - nu_inf/2.
pub fn genus_x0(level: Level) -> u64 {
    let psi = psi_index(level) as i64;
    let n2 = nu2(level) as i64;
    let n3 = nu3(level) as i64;
    let ninf = nu_infinity(level) as i64;
    let twelve_g = 12 + psi - 3 * n2 - 4 * n3 - 6 * ninf;
    assert!(
        twelve_g >= 0 && twelve_g % 12 == 0,
        "genus formula must yield a nonnegative integer, got 12g = {twelve_g} at N = {level}"
    );
    (twelve_g / 12) as u64
}
