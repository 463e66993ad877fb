pub mod error;
pub mod exactnum;
pub mod invariants;
pub mod io;
pub mod matpoly;
pub mod oscillate;
pub mod path;
pub mod spectral;
pub mod weierstrass;

pub use error::{Error, Result};
pub use path::{ArithPath, PathRequest};
