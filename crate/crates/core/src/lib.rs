pub mod certify;
pub mod error;
pub mod factor;
pub mod field;
pub mod geometry;
pub mod oracle;
pub mod poly;
pub mod symbol;

pub use error::{Error, Result};
pub use field::{ExtElem, ExtensionField, PrimeField};
pub use poly::UniPoly;
pub use certify::{certify, search_primes, validate, Certificate, ConstructionParams, Verdict};
pub use geometry::{LineArrangement, LinearForm, ProjPoint};
pub use symbol::{LineFunction, LinePlace, PlaneFunction};
