//! Classification of constant-coefficient differential operator systems by
//! their symbols: ellipticity, quasiellipticity and weak coercivity.

pub mod binary_form;
pub mod bivariate;
pub mod coercive2d;
pub mod coercive_nd;
pub mod ellipticity;
pub mod error;
pub mod gaussian;
pub mod interval;
pub mod linalg;
pub mod multiplier;
pub mod numeric;
pub mod parser;
pub mod poly;
pub mod sturm;
pub mod univariate;
pub mod witness;

pub use error::{Error, Result};
pub use gaussian::{GaussianRational, Rational};
pub use parser::{format_operator, parse_operator, parse_system, ParseDiagnostic, ParseErrorKind};
pub use poly::{MultiIndex, OperatorSystem, Polynomial, WeightVector};
