//! Congruence primes between a rational newform and the old subspace.
//!
//! Fix an elliptic curve E of conductor N with attached newform f.  A prime
//! p is a congruence prime (relative to the old subspace) when some
//! integer-coefficient form g in the span of the degeneracy images of
//! lower-level forms satisfies a_n(f) = a_n(g) mod p for every n.  Because
//! the integral old lattice is stable under truncation at the Sturm bound B,
//! this happens exactly when the truncated vector v(f) lies in the row
//! space of the oldspace matrix M modulo p, which is a finite linear
//! algebra question.
//!
//! Two candidate routes are implemented and cross-check each other:
//!
//! * the modular-degree route: a congruence prime must divide the modular
//!   degree of E or have square dividing N, so factoring an externally
//!   supplied degree yields a candidate list to filter by the membership
//!   test;
//! * the saturation route: stack v(f) on top of the saturated oldspace
//!   lattice and compute the index of the stacked lattice inside its own
//!   saturation.  Since v(f) is primitive (a_1 = 1) and the old lattice is
//!   saturated, the primes dividing that index are exactly the congruence
//!   primes, and the index itself is the congruence exponent.  This route
//!   needs no external data.
//!
//! `Method::Both` runs the two routes and insists on identical answers;
//! a mismatch means corrupt input (usually a wrong modular degree) or a
//! bug, and is reported as an error rather than a best guess.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};

use crate::arith::{self, Level};
use crate::curves::{CoeffVector, CurveRecord};
use crate::error::Error;
use crate::linalg::{self, IntMatrix, ModPVector};
use crate::oldspace::{oldspace_matrix, OldspaceMatrix};
use crate::Result;

/// Candidate generation strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Factor an externally supplied modular degree (plus primes whose
    /// square divides the level) and filter by the membership test.
    Theorem3,
    /// Saturation index of the stacked lattice; self-contained and exact.
    Smith,
    /// Run both and require identical prime lists.
    Both,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Theorem3 => "theorem3",
            Method::Smith => "smith",
            Method::Both => "both",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "theorem3" => Ok(Method::Theorem3),
            "smith" => Ok(Method::Smith),
            "both" => Ok(Method::Both),
            other => Err(Error::InvalidInput(format!(
                "unknown method {other:?}: expected theorem3, smith or both"
            ))),
        }
    }
}

/// Why a prime made the candidate list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    DividesModularDegree,
    SquareDividesLevel,
    DividesSaturationIndex,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::DividesModularDegree => "divides-modular-degree",
            Provenance::SquareDividesLevel => "square-divides-level",
            Provenance::DividesSaturationIndex => "divides-saturation-index",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidatePrime {
    pub prime: BigUint,
    pub provenance: Vec<Provenance>,
}

/// Verdict for one odd prime dividing the Tamagawa product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    /// Neither the torsion order nor the congruence primes explain the
    /// local factor; flag for manual inspection (expected never to fire).
    CounterexampleFlag,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent",
            Verdict::CounterexampleFlag => "counterexample-flag",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjecture1Verdict {
    pub ell: u64,
    pub verdict: Verdict,
    pub reason: String,
}

/// Everything the pipeline learned about one curve.
#[derive(Clone, Debug)]
pub struct CongruenceReport {
    pub level: Level,
    pub sturm_bound: usize,
    pub method: Method,
    /// Ascending candidate primes, each with every reason it qualified.
    pub candidates: Vec<CandidatePrime>,
    /// Ascending confirmed congruence primes; always a subset of the
    /// candidates.
    pub congruence_primes: Vec<BigUint>,
    /// Confirmed prime -> row combination of the oldspace matrix that is
    /// congruent to v(f) mod that prime.
    pub witnesses: BTreeMap<BigUint, ModPVector>,
    /// Saturation index of the stacked lattice (Smith-route runs only).
    pub congruence_exponent: Option<BigUint>,
    /// Per-odd-prime local-factor verdicts, when requested.
    pub conjecture1: Option<Vec<Conjecture1Verdict>>,
    /// Human-readable caveats attached along the way.
    pub notes: Vec<String>,
}

/// Membership test mod p: Some(witness) when v(f) is a mod-p combination
/// of the oldspace rows, i.e. when p is a congruence prime.
pub fn is_congruence_prime(
    vf: &CoeffVector,
    m: &OldspaceMatrix,
    p: &BigUint,
) -> Option<ModPVector> {
    assert_eq!(
        vf.len(),
        m.precision(),
        "coefficient vector and oldspace matrix use different precisions"
    );
    m.matrix().in_rowspace_mod_p(&vf.to_bigints(), p)
}

/// Candidate primes from an externally supplied modular degree: divisors
/// of the degree together with primes whose square divides the level.
pub fn candidate_primes_theorem3(modular_degree: u64, level: Level) -> Vec<CandidatePrime> {
    assert!(modular_degree >= 1, "modular degree must be positive");
    let mut reasons: BTreeMap<u64, Vec<Provenance>> = BTreeMap::new();
    for p in arith::factorize(modular_degree).primes() {
        reasons
            .entry(p)
            .or_default()
            .push(Provenance::DividesModularDegree);
    }
    for &(p, e) in arith::factorize(level.get()).pairs() {
        if e >= 2 {
            reasons
                .entry(p)
                .or_default()
                .push(Provenance::SquareDividesLevel);
        }
    }
    reasons
        .into_iter()
        .map(|(p, provenance)| CandidatePrime {
            prime: BigUint::from(p),
            provenance,
        })
        .collect()
}

/// Saturation route on raw parts: primes dividing the saturation index of
/// saturate(M) stacked with vf, plus the index itself.  The level only
/// labels the not-a-newform rejection.
///
/// M must be saturated before stacking: the index of the stacked lattice
/// in its saturation detects exactly the primes p with vf in the mod-p
/// row space of M only when the rows of M contribute nothing to the index
/// on their own.
pub fn saturation_congruence_primes(
    vf: &[BigInt],
    m: &IntMatrix,
    level: Level,
) -> Result<(Vec<BigUint>, BigUint)> {
    assert_eq!(vf.len(), m.cols(), "vector length must match matrix width");
    let stacked_rationally = m.stack_row(vf);
    if stacked_rationally.rank() == m.rank() {
        return Err(Error::NotANewform {
            level: level.get(),
        });
    }
    let stacked = m.saturate().stack_row(vf);
    let index = stacked.saturation_index();
    let primes = linalg::factor_big(&index)?
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    Ok((primes, index))
}

/// Saturation route on domain types; returns (ascending primes, index).
/// Under the preconditions (a_1(f) = 1 so v(f) is primitive; oldspace
/// lattice saturated) the primes are exactly the congruence primes.
pub fn candidate_primes_smith(
    vf: &CoeffVector,
    m: &OldspaceMatrix,
) -> Result<(Vec<BigUint>, BigUint)> {
    assert_eq!(
        vf.len(),
        m.precision(),
        "coefficient vector and oldspace matrix use different precisions"
    );
    saturation_congruence_primes(&vf.to_bigints(), m.matrix(), m.level())
}

/// One candidate route's output: candidates, confirmed primes, witnesses.
type RouteOutput = (
    Vec<CandidatePrime>,
    Vec<BigUint>,
    BTreeMap<BigUint, ModPVector>,
);

/// The full pipeline for one curve: assemble the oldspace matrix and the
/// coefficient vector at the Sturm bound, generate candidates by the
/// chosen route(s), and confirm each by the mod-p membership test.
pub fn congruence_primes(curve: &CurveRecord, method: Method) -> Result<CongruenceReport> {
    let level = curve.level;
    let b = arith::sturm_bound(level);
    if b == 0 || arith::genus_x0(level) == 0 {
        return Err(Error::DegenerateLevel {
            level: level.get(),
        });
    }
    let m = oldspace_matrix(level);
    let vf = curve.coefficient_vector(b)?;

    let mut notes: Vec<String> = Vec::new();
    if m.matrix().saturate().hnf() != m.matrix().hnf() {
        notes.push(
            "oldspace row space is not saturated; saturation-route primes may be spurious"
                .to_string(),
        );
    }

    let run_theorem3 = |notes: &mut Vec<String>| -> Result<RouteOutput> {
        let degree = curve.modular_degree.ok_or_else(|| {
            Error::MissingData(
                "modular_degree is required for the modular-degree route".to_string(),
            )
        })?;
        notes.push(
            "modular-degree candidates bound congruences to the whole orthogonal complement \
             of the newform; the old space lies inside it, so the list is a superset and the \
             membership test decides each prime"
                .to_string(),
        );
        let candidates = candidate_primes_theorem3(degree, level);
        let mut primes = Vec::new();
        let mut witnesses = BTreeMap::new();
        for c in &candidates {
            if let Some(w) = is_congruence_prime(&vf, &m, &c.prime) {
                primes.push(c.prime.clone());
                witnesses.insert(c.prime.clone(), w);
            }
        }
        Ok((candidates, primes, witnesses))
    };

    let run_smith = || -> Result<(RouteOutput, BigUint)> {
        let (primes, index) = candidate_primes_smith(&vf, &m)?;
        let candidates = primes
            .iter()
            .map(|p| CandidatePrime {
                prime: p.clone(),
                provenance: vec![Provenance::DividesSaturationIndex],
            })
            .collect();
        let mut witnesses = BTreeMap::new();
        for p in &primes {
            // The saturation route is exact, so the membership test must
            // confirm every prime it reports; a miss means the saturation
            // precondition was violated.
            let w = is_congruence_prime(&vf, &m, p).unwrap_or_else(|| {
                panic!(
                    "saturation-index prime {p} fails the membership test at level {}",
                    level.get()
                )
            });
            witnesses.insert(p.clone(), w);
        }
        Ok(((candidates, primes, witnesses), index))
    };

    let report = match method {
        Method::Theorem3 => {
            let (candidates, congruence_primes, witnesses) = run_theorem3(&mut notes)?;
            CongruenceReport {
                level,
                sturm_bound: b,
                method,
                candidates,
                congruence_primes,
                witnesses,
                congruence_exponent: None,
                conjecture1: None,
                notes,
            }
        }
        Method::Smith => {
            let ((candidates, congruence_primes, witnesses), index) = run_smith()?;
            CongruenceReport {
                level,
                sturm_bound: b,
                method,
                candidates,
                congruence_primes,
                witnesses,
                congruence_exponent: Some(index),
                conjecture1: None,
                notes,
            }
        }
        Method::Both => {
            let (t3_candidates, t3_primes, _) = run_theorem3(&mut notes)?;
            let ((smith_candidates, smith_primes, witnesses), index) = run_smith()?;
            if t3_primes != smith_primes {
                return Err(Error::RouteDisagreement {
                    level: level.get(),
                    theorem3: t3_primes,
                    smith: smith_primes,
                });
            }
            // Merge candidate provenance: a prime found by both routes
            // carries every reason.
            let mut merged: BTreeMap<BigUint, Vec<Provenance>> = BTreeMap::new();
            for c in t3_candidates.into_iter().chain(smith_candidates) {
                merged.entry(c.prime).or_default().extend(c.provenance);
            }
            let candidates = merged
                .into_iter()
                .map(|(prime, provenance)| CandidatePrime { prime, provenance })
                .collect();
            CongruenceReport {
                level,
                sturm_bound: b,
                method,
                candidates,
                congruence_primes: smith_primes,
                witnesses,
                congruence_exponent: Some(index),
                conjecture1: None,
                notes,
            }
        }
    };
    debug_assert!(report
        .congruence_primes
        .iter()
        .all(|p| report.candidates.iter().any(|c| c.prime == *p)));
    Ok(report)
}

/// Local-factor consistency check: every odd prime dividing the product
/// of the Tamagawa numbers must divide the torsion order or be a
/// congruence prime.  Returns one verdict per such prime (possibly none).
pub fn check_conjecture1(
    report: &CongruenceReport,
    curve: &CurveRecord,
) -> Result<Vec<Conjecture1Verdict>> {
    assert_eq!(
        report.level, curve.level,
        "report and curve describe different levels"
    );
    let tamagawa = curve.tamagawa.as_ref().ok_or_else(|| {
        Error::MissingData("tamagawa numbers are required for the local-factor check".to_string())
    })?;
    let torsion = curve.torsion_order.ok_or_else(|| {
        Error::MissingData("torsion_order is required for the local-factor check".to_string())
    })?;
    let mut product: u64 = 1;
    for &c in tamagawa.values() {
        product = product
            .checked_mul(c)
            .expect("Tamagawa product overflows u64");
    }
    let mut verdicts = Vec::new();
    for ell in arith::factorize(product).primes() {
        if ell == 2 {
            continue;
        }
        let (verdict, reason) = if torsion % ell == 0 {
            (
                Verdict::Consistent,
                format!("{ell} divides the torsion order {torsion}"),
            )
        } else if report
            .congruence_primes
            .iter()
            .any(|p| *p == BigUint::from(ell))
        {
            (
                Verdict::Consistent,
                format!(
                    "{ell} is a congruence prime at level {}",
                    report.level.get()
                ),
            )
        } else {
            (
                Verdict::CounterexampleFlag,
                format!(
                    "{ell} divides the Tamagawa product {product} but neither the torsion \
                     order {torsion} nor any congruence prime"
                ),
            )
        };
        verdicts.push(Conjecture1Verdict {
            ell,
            verdict,
            reason,
        });
    }
    Ok(verdicts)
}

/// Entrywise check that witness . M = vf mod p; the library asserts this
/// internally when producing witnesses, tests re-check it independently.
pub fn witness_verifies(
    witness: &ModPVector,
    m: &IntMatrix,
    vf: &[BigInt],
) -> bool {
    let p = BigInt::from(witness.prime().clone());
    let w = witness.components();
    if w.len() != m.rows() || vf.len() != m.cols() {
        return false;
    }
    (0..m.cols()).all(|j| {
        let mut acc = BigInt::from(0u32);
        for (i, wi) in w.iter().enumerate() {
            acc += BigInt::from(wi.clone()) * &m[(i, j)];
        }
        let diff = acc - &vf[j];
        (diff % &p) == BigInt::from(0u32)
    })
}
