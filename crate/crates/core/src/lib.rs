//! Syzygy bundles `Syz(X^a, Y^a, Z^a)` on the Fermat curve `X^n + Y^n + Z^n = 0`.
//!
//! The crate classifies these rank-2 bundles in characteristic `p` (and 0):
//!
//! - [`han_delta`]: the syzygy-gap function δ on rational triples, computed by
//!   scaling with powers of `p` against the odd lattice `L_odd`.
//! - [`classification`]: Hilbert-Kunz multiplicities, complete Hilbert-Kunz
//!   functions and the strongly-semistable / finite-pd / HN verdict.
//! - [`geometry`]: Frobenius reduction of syzygy modules, twisted Frobenius
//!   periodicity, Hilbert series, HN filtrations and the matrix factorization
//!   behind the periodic resolutions.
//! - [`oracle`]: brute-force linear algebra over `F_p` that every closed form
//!   is checked against. It never calls into the modules above.
//! - [`cli`]: the `fermat-syz` command-line front end.
//!
//! All arithmetic is exact.

pub mod arith;
pub mod classification;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod han_delta;
pub mod instance;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod series;

pub use classification::{Classification, Verdict};
pub use instance::FermatInstance;
pub use error::{Error, Result};
pub use han_delta::{han_delta, DeltaResult, DeltaWitness, OddLatticePoint, RationalTriple};
