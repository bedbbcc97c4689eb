//! Congruence primes between a rational newform and the old subspace.
//!
//! Given an elliptic curve E of conductor N, the attached weight-2 newform f
//! has integer coefficients.  A prime p is a congruence prime for f and the
//! old subspace of S2(Gamma0(N)) if some integer-coefficient old form g
//! satisfies a_n(f) = a_n(g) mod p for every n >= 1.  By the Sturm bound such
//! a congruence only has to be checked on the first B coefficients, which
//! turns the question into exact integer linear algebra:
//!
//! * `arith` - index, Sturm bound and genus formulas for X0(N),
//! * `linalg` - HNF/Smith/saturation machinery over Z and mod-p row reduction,
//! * `modsym` - weight-2 modular symbols for Gamma0(N), Hecke operators and
//!   the integral basis of S2(Gamma0(N)) as q-expansions,
//! * `curves` - coefficients a_n(E) by point counting,
//! * `oldspace` - degeneracy maps assembling the old-subspace lattice,
//! * `congruence` - candidate primes, membership tests and reports.

pub mod arith;
pub mod congruence;
pub mod curves;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod modsym;
pub mod oldspace;
pub mod ratmat;

pub use arith::{factorize, genus_x0, psi_index, sturm_bound, Factorization, Level};
pub use congruence::{
    candidate_primes_smith, candidate_primes_theorem3, check_conjecture1, congruence_primes,
    is_congruence_prime, saturation_congruence_primes, witness_verifies, CandidatePrime,
    CongruenceReport, Conjecture1Verdict, Method, Provenance, Verdict,
};
pub use curves::{CoeffVector, CurveRecord};
pub use error::Error;
pub use linalg::{IntMatrix, ModPVector, SmithInvariants};
pub use modsym::{
    heilbronn_matrices, integral_basis, merel_matrices, p1_list, p1_normalize, ModSymSpace,
};
pub use oldspace::{degeneracy_image, oldspace_matrix, OldspaceMatrix};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
