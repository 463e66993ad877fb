pub mod pencil;
pub mod pmatrix;
pub mod qmatrix;

pub use pencil::{transpose_check, Orientation, Pencil};
pub use pmatrix::{adjugate_pencil, det_pencil, interpolate, minor, PMatrix};
pub use qmatrix::{det_rational, QMatrix};
