//! Exact polynomial algebra: rationals, sparse polynomials, symbolic
//! determinants, Groebner bases, saturation, elimination and dimension.

pub mod error;
mod groebner;
pub mod ideal;
pub mod limits;
pub mod matrix;
pub mod monomial;
pub mod order;
pub mod parse;
pub mod poly;
pub mod qmatrix;
pub mod ring;
pub mod scalar;
pub mod subsets;

pub use error::{AlgebraError, LimitKind, Result};
pub use ideal::{ideal_equal, GroebnerBasis, Ideal};
pub use limits::{CancelToken, ResourceLimits};
pub use matrix::{Minor, PolyMatrix};
pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use poly::Polynomial;
pub use qmatrix::QMatrix;
pub use ring::Ring;
pub use scalar::Scalar;
