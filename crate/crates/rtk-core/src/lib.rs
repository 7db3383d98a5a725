//! Exact root systems, Weyl-module weight multiplicities, and the tables of
//! irreducible modules whose nonzero weights are multiplicity free.

pub mod roots;
pub mod weights;
pub mod tables;
pub mod forms;
pub mod omega;
pub mod subsystem;
pub mod exceptional;
pub mod verify;

pub use roots::{build_root_datum, Family, RootDatum, RootError, SimpleType, Weight};
pub use weights::{Characteristic, WeightError, WeightMultiset};
