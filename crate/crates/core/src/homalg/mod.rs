//! Exact homological algebra over the integers.

pub mod complex;
mod json_int;
pub mod matrix;
pub mod random;
pub mod spectral;

pub use complex::{Direction, FilteredComplex, GradedComplex, GroupShape, Violation};
pub use matrix::IntMatrix;
pub use spectral::{limit, page, spectral_sequence, spectral_sequence_with, Page, PageDifferential, PageEntry, SpectralError, SpectralSequence};
