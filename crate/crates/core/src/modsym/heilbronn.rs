//! Matrix families computing Hecke operators on Manin symbols.
//!
//! T_n acts on a Manin symbol by summing the symbol's right translates over
//! a suitable family of integer matrices of determinant n.  Two families
//! are used: the continued-fraction family (valid for primes not dividing
//! the level, and much smaller) and the full determinant-n family of
//! matrices [a b; c d] with a > b >= 0 and d > c >= 0, which works at every
//! n and in particular at primes dividing the level.  Both are exercised
//! against each other in the tests.

/// Continued-fraction family of determinant p, for p prime.  Only valid
/// for the T_p action when p does not divide the level.
pub fn heilbronn_matrices(p: u64) -> Vec<[i64; 4]> {
    assert!(crate::arith::is_prime(p), "heilbronn_matrices: {p} is not prime");
    let p = p as i64;
    let mut out: Vec<[i64; 4]> = Vec::new();
    out.push([1, 0, 0, p]);
    if p == 2 {
        out.push([2, 0, 0, 1]);
        out.push([2, 1, 0, 1]);
        out.push([1, 0, 1, 2]);
        return out;
    }
    for r in -(p - 1) / 2..=(p - 1) / 2 {
        let mut x1 = p;
        let mut x2 = -r;
        let mut y1 = 0i64;
        let mut y2 = 1i64;
        let mut a = -p;
        let mut b = r;
        out.push([x1, x2, y1, y2]);
        while b != 0 {
            let q = div_round(a, b);
            let c = a - b * q;
            a = -b;
            b = c;
            let x3 = q * x2 - x1;
            let y3 = q * y2 - y1;
            x1 = x2;
            x2 = x3;
            y1 = y2;
            y2 = y3;
            out.push([x1, x2, y1, y2]);
        }
    }
    debug_assert!(out.iter().all(|m| m[0] * m[3] - m[1] * m[2] == p));
    out
}

/// Nearest-integer quotient, ties away from zero.
fn div_round(a: i64, b: i64) -> i64 {
    let q = a / b;
    let r = a - b * q;
    if 2 * r.abs() >= b.abs() {
        q + if (a < 0) == (b < 0) { 1 } else { -1 }
    } else {
        q
    }
}

/// The determinant-n family [a b; c d] with a > b >= 0, d > c >= 0.  Valid
/// for the T_n action at every n, including primes dividing the level.
pub fn merel_matrices(n: u64) -> Vec<[i64; 4]> {
    assert!(n >= 1, "merel_matrices: n must be positive");
    let n = n as i64;
    let mut out = Vec::new();
    for a in 1..=n {
        for d in 1..=n {
            let m = a * d - n;
            if m < 0 || m > (a - 1) * (d - 1) {
                continue;
            }
            if m == 0 {
                for c in 0..d {
                    out.push([a, 0, c, d]);
                }
                for b in 1..a {
                    out.push([a, b, 0, d]);
                }
            } else {
                for b in 1..a {
                    if m % b == 0 {
                        let c = m / b;
                        if c < d {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
    }
    debug_assert!(out.iter().all(|m| m[0] * m[3] - m[1] * m[2] == n));
    out
}
