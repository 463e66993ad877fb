//! Exact arithmetic substrate: rationals, dense polynomials, gcd and
//! square-free machinery, Sturm isolation and factorization over the rationals.

pub mod factor;
pub mod gcd;
pub mod poly;
pub mod rat;
pub mod sturm;

pub use factor::{is_irreducible, kronecker_factor, DEFAULT_DEGREE_CAP};
pub use gcd::{poly_ext_gcd, poly_gcd, poly_gcd_many, squarefree_decompose, squarefree_part};
pub use poly::UPoly;
pub use rat::{format_rat, frac, int, parse_rat, Rat};
pub use sturm::{refine_root, sturm_isolate, RealRoot, RootKind, SturmChain};
