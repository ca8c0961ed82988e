//! Exact computation of Cartier-Manin coefficient matrices of hyperelliptic
//! curves over prime fields, with the TTV families `C-(t)` and `C+(t)` and
//! the genus of the triangular modular curves `X0_(5,inf,inf)(p)`.

pub mod curve;
pub mod error;
pub mod exec;
pub mod ffpoly;
pub mod matrix;
pub mod powercoeff;

pub use curve::{classify, coeff_matrix, odd_degree_model, p_rank_bound, Classification, CurveModel, Tag};
pub use error::{Error, Result};
pub use exec::Exec;
pub use ffpoly::{
    count_roots, is_prime, poly_gcd, poly_mul, primes_between, squarefree_part, DensePoly, Fp, Modulus, RootMode,
};
pub use matrix::{FpMatrix, PolyMatrix};
pub use powercoeff::{bipoly_pow_truncated, extract_coeff_entries, multinomial_coeff_oracle, BiPoly};
pub mod modcurve;
pub mod tables;
pub mod ttv;

pub use modcurve::{delta, genus, verify_genus_relation, GenusRecord};
pub use ttv::{
    congruence_remark_check, ddt, degree_lemma_check, family_polynomial, parametric_coeff_matrix, scan_family,
    verify_shape, Sign, SplitClass,
};
