//! Exact construction and certification of balanced generalized weighing
//! matrices, complete orthogonal arrays, the `BW(1+18(9^{m+1}-1)/8, 9^{m+1}, 4*9^m)`
//! Kronecker family, and the five-class association scheme of a weighing matrix.

pub mod classical;
pub mod dmfile;
pub mod error;
pub mod exactmat;
pub mod family;
pub mod gf;
pub mod groupmat;
pub mod oa;
pub mod report;
pub mod scheme;
pub mod seeds;

pub use error::{Error, Result};
pub use exactmat::{IntMatrix, Matrix, SignedMatrix};
pub use gf::FiniteField;
pub use groupmat::{BgwCertificate, Cell, CyclicGroupMatrix};
pub use oa::OrthogonalArray;
pub use report::Report;
pub use scheme::AssociationScheme;
