//! The genus-one computation on the q-line of the local P^r flop, through
//! canonical coordinates, the connection Psi dPsi^{-1} and the R-matrix.

pub mod connection;
pub mod frame;
pub mod genus_one;
pub mod rmatrix;
pub mod spectrum;

pub use connection::{connection_form, xi_constant, BranchFlips, XiConstant};
pub use frame::{canonical_basis, term_c_minus_one, term_log_delta, FlatOneForm};
pub use genus_one::{genus_one_form, genus_one_table, GenusOneForm};
pub use rmatrix::{r1_diagonal, r1_offdiagonal, r_matrix_recursion, RMatrixOrder};
pub use spectrum::{build_spectrum, charpoly_coefficients, equiv_pairing, CanonicalFrame};
