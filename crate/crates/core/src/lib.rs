//! Structure analysis and sparsification of valued constraint satisfaction
//! instances.
//!
//! The library is organized around a pipeline: describe a valued relation
//! ([`relation::ValuedRelation`]), analyze its combinatorial structure
//! ([`relation`] for tuple-level structure, [`histogram`] for the symmetrized
//! view and the classification verdict), build or load instances over it
//! ([`instance`]), choose and execute a sampling plan ([`sparsify`]), and
//! check the result exhaustively ([`verify`]).
//!
//! All weight arithmetic is exact rational ([`Q`]); randomness comes from a
//! seeded counter generator ([`rng`]) so every run is reproducible.

pub mod error;
pub mod fixtures;
pub mod histogram;
pub mod instance;
pub mod relation;
pub mod rng;
pub mod sparsify;
pub mod verify;

/// Exact rational scalar used for clause weights and deviation bounds.
pub type Q = num::rational::Ratio<i128>;

/// Convenience constructor for an exact rational.
pub fn q(num: i128, den: i128) -> Q {
    Q::new(num, den)
}
