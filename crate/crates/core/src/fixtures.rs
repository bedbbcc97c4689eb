//! Reference curves used across the test suite and benches.
//!
//! Eight optimal curves of small conductor, one per interesting level
//! shape: prime (11, 17, 37), twice a prime (14), products of two odd
//! primes (15, 33, 57) and a three-prime level (42).  Discriminants,
//! Tamagawa numbers and torsion orders were prepared independently of
//! this crate (direct point counting over small prime fields, the exact
//! group law for torsion enumeration, and the standard split/nonsplit
//! rule at multiplicative primes); modular degrees come from published
//! tables.  The constructor re-derives the discriminant, so a typo here
//! fails loudly at fixture load.

use std::collections::BTreeMap;

use crate::arith::Level;
use crate::curves::CurveRecord;

struct FixtureRow {
    label: &'static str,
    level: u64,
    ainvs: [i64; 5],
    modular_degree: u64,
    tamagawa: &'static [(u64, u64)],
    torsion_order: u64,
}

const FIXTURES: &[FixtureRow] = &[
    FixtureRow {
        label: "11a1",
        level: 11,
        ainvs: [0, -1, 1, -10, -20],
        modular_degree: 1,
        tamagawa: &[(11, 5)],
        torsion_order: 5,
    },
    FixtureRow {
        label: "14a1",
        level: 14,
        ainvs: [1, 0, 1, 4, -6],
        modular_degree: 1,
        tamagawa: &[(2, 2), (7, 3)],
        torsion_order: 6,
    },
    FixtureRow {
        label: "15a1",
        level: 15,
        ainvs: [1, 1, 1, -10, -10],
        modular_degree: 1,
        tamagawa: &[(3, 2), (5, 4)],
        torsion_order: 8,
    },
    FixtureRow {
        label: "17a1",
        level: 17,
        ainvs: [1, -1, 1, -1, -14],
        modular_degree: 1,
        tamagawa: &[(17, 4)],
        torsion_order: 4,
    },
    FixtureRow {
        label: "33a1",
        level: 33,
        ainvs: [1, 1, 0, -11, 0],
        modular_degree: 3,
        tamagawa: &[(3, 2), (11, 2)],
        torsion_order: 4,
    },
    FixtureRow {
        label: "37a1",
        level: 37,
        ainvs: [0, 0, 1, -1, 0],
        modular_degree: 2,
        tamagawa: &[(37, 1)],
        torsion_order: 1,
    },
    FixtureRow {
        label: "42a1",
        level: 42,
        ainvs: [1, 1, 1, -4, 5],
        modular_degree: 16,
        tamagawa: &[(2, 8), (3, 2), (7, 1)],
        torsion_order: 8,
    },
    FixtureRow {
        label: "57a1",
        level: 57,
        ainvs: [0, -1, 1, -2, 2],
        modular_degree: 2,
        tamagawa: &[(3, 2), (19, 1)],
        torsion_order: 1,
    },
];

fn build(row: &FixtureRow) -> CurveRecord {
    let tamagawa: BTreeMap<u64, u64> = row.tamagawa.iter().copied().collect();
    CurveRecord::new(
        Some(row.label.to_string()),
        Level::new(row.level),
        row.ainvs,
        Some(row.modular_degree),
        Some(tamagawa),
        Some(row.torsion_order),
    )
    .expect("fixture data is internally consistent")
}

/// All fixture curves, ordered by conductor.
pub fn all() -> Vec<CurveRecord> {
    FIXTURES.iter().map(build).collect()
}

/// Conductors present in the fixture set, ascending.
pub fn levels() -> Vec<u64> {
    FIXTURES.iter().map(|r| r.level).collect()
}

/// The fixture curve of the given conductor; panics if there is none.
pub fn by_level(level: u64) -> CurveRecord {
    FIXTURES
        .iter()
        .find(|r| r.level == level)
        .map(build)
        .unwrap_or_else(|| panic!("no fixture curve at level {level}"))
}
