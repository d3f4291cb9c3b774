//! itcalc: exact-arithmetic computation of relative homological invariants
//! of bound quiver algebras over prime fields.
//!
//! The crate is layered bottom-up:
//! - [`exactlin`]: dense linear algebra over `F_p` and exact integer ranks;
//! - [`algebra`]: bound quivers with monomial admissible relation ideals;
//! - [`rep`]: the module category (hom spaces, covers, syzygies, Krull-Schmidt);
//! - [`relstruct`]: relatively split exact structures from a generator;
//! - [`itcore`]: relative Igusa-Todorov functions and d-Divisions;
//! - [`homotopy`]: bounded complexes, homotopy category homs, tilting checks;
//! - [`cli`]: the `itcalc` command-line front end.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod exactlin;
pub mod homotopy;
pub mod itcore;
pub mod relstruct;
pub mod rep;

pub use error::{Error, Result};

/// Default PRNG seed for all randomized internals; recorded in reports.
pub const DEFAULT_SEED: u64 = 0x4954_5f44;

/// A fresh PRNG at the default seed.
pub fn default_rng() -> rand_chacha::ChaCha8Rng {
    rng_with_seed(DEFAULT_SEED)
}

pub fn rng_with_seed(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
