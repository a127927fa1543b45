//! Exact computations with the Cartier operator over `F_p(t)` and its
//! completions, and the explicit obstruction classes built from it for the
//! groups `Z/p` and `{t x^p = y^p - y}`.

pub mod cartier;
pub mod error;
pub mod gf;
pub mod obstruction;
pub mod poly;
pub mod ratfield;
pub mod report;
pub mod selftest;
pub mod series;

pub use cartier::{Differential, DifferentialPair};
pub use error::{Error, Result};
pub use gf::{FieldElement, GaloisField};
pub use poly::Poly;
pub use ratfield::{LocalEmbedding, Place, RationalFunction};
pub use series::{LaurentSeries, SeriesPoly};
