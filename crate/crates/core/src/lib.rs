pub mod algebra;
pub mod dynamic;
pub mod av;
pub mod error;
pub mod exact;
pub mod fmod;
pub mod probe;
pub mod text;
pub mod verify;
pub mod weighting;

pub use error::{Error, Result};
pub use exact::{int, rat, LaurentVec, LinearElement, Poly, RatMatrix, Rational, Span};
