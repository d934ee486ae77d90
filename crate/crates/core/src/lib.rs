//! Waring numbers over finite fields, spectra of power-residue Cayley
//! digraphs, and verified sum-of-powers decompositions in matrix rings and
//! finite commutative rings.

pub mod arith;
pub mod decomposition;
pub mod error;
pub mod field;
pub mod gamma;
pub mod hensel;
pub mod matrix;
pub mod poly;
pub mod ring;
pub mod spectral;
pub mod tables;

pub use error::{Result, WaringError};
pub use field::{build_field, field_of_order, FieldCtx, FqElem};
pub use gamma::{gamma, power_residues, GammaOutcome, GammaResult, PowerClass};
pub use decomposition::{Ambient, AmbientTag, Decomposition};
pub use matrix::{FqMatrix, MatrixSpace};
pub use poly::{FqPoly, PolyRing};
pub use ring::{RingElem, RingSpec, TableRing};
