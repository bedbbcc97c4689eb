//! The projective line over Z/N.
//!
//! Manin symbols for Gamma0(N) are indexed by P^1(Z/N): pairs (c : d) with
//! gcd(c, d, N) = 1 up to scaling by units of Z/N.  Each class contains a
//! unique representative whose first entry is the divisor gcd(c, N) of N
//! and whose second entry is minimal among the unit multiples fixing that
//! first entry; `p1_normalize` computes it and `p1_list` enumerates one
//! representative per class in sorted order.

use std::collections::BTreeSet;

use num_integer::gcd;

use crate::arith::{divisors, Level};
use crate::error::Error;
use crate::Result;

/// Canonical representative of (c : d) in P^1(Z/N).  Pairs with
/// gcd(c, d, N) > 1 do not define a point and are rejected.
pub fn p1_normalize(c: u64, d: u64, level: Level) -> Result<(u64, u64)> {
    let n = level.get();
    assert!(n < (1 << 31), "level too large for fixed-width arithmetic");
    if n == 1 {
        return Ok((0, 0));
    }
    let c = c % n;
    let d = d % n;
    if gcd(gcd(c, n), d) != 1 {
        return Err(Error::InvalidSymbol { c, d, level: n });
    }
    if c == 0 {
        return Ok((0, 1));
    }
    let g = gcd(c, n);
    // A unit u with u*c = g mod n: start from a Bezout coefficient of c,
    // which satisfies the congruence but need not be a unit, and walk the
    // residues u + k*(n/g), all of which still satisfy it, until one is
    // coprime to n.
    let (_, s) = ext_gcd(c as i64, n as i64);
    let step = n / g;
    let mut u = s.rem_euclid(n as i64) as u64;
    let mut guard = 0u64;
    while gcd(u, n) != 1 {
        u = (u + step) % n;
        guard += 1;
        assert!(guard <= g, "no unit in the Bezout residue class");
    }
    debug_assert_eq!((u * c) % n, g);
    // The units fixing the first entry g are exactly t = 1 mod n/g; take
    // the minimum of t*(u*d) over them.
    let d0 = (u * d) % n;
    let mut best = d0;
    let mut t = 1 + step;
    for _ in 1..g {
        let t_red = t % n;
        if gcd(t_red, n) == 1 {
            best = best.min((t_red * d0) % n);
        }
        t += step;
    }
    Ok((g, best))
}

/// All points of P^1(Z/N), one canonical representative each, sorted.
/// The count is the index psi(N) of Gamma0(N).
pub fn p1_list(level: Level) -> Vec<(u64, u64)> {
    let n = level.get();
    if n == 1 {
        return vec![(0, 0)];
    }
    let mut points = BTreeSet::new();
    points.insert((0, 1));
    for d in 0..n {
        points.insert((1, d));
    }
    for g in divisors(n) {
        if g == 1 || g == n {
            continue;
        }
        for d in 1..n {
            if gcd(g, d) == 1 {
                points.insert(p1_normalize(g, d, level).expect("coprime by construction"));
            }
        }
    }
    points.into_iter().collect()
}

/// Extended Euclid: returns (gcd, s) with s*a + t*b = gcd for some t.
pub(crate) fn ext_gcd(a: i64, b: i64) -> (i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 < 0 {
        (-r0, -s0)
    } else {
        (r0, s0)
    }
}
