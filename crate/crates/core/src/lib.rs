//! Generalized cyclotomic mappings over small finite fields.
//!
//! A mapping of index `ell` sends 0 to 0 and `x` in the cyclotomic coset
//! `C_i` to `γ^{k_i} · x^{r_i}`, where `γ` is a fixed primitive element of
//! `F_q` and the cosets `C_i = γ^i C_0` partition `F_q^*` into `ell` classes
//! of size `s = (q-1)/ell`. This crate builds the fields ([`field`]), the
//! mapping specs ([`cyclo`]), decides which specs permute `F_q` and inverts
//! them in closed form ([`permcheck`]), expands specs into reduced
//! polynomials mod `x^q - x` ([`polyform`]), and enumerates all permutation
//! specs, inverses and involutions of a given index ([`search`]).
//!
//! Every closed-form result has a brute-force counterpart (value tables,
//! pointwise inversion, Lagrange interpolation) so the two routes can be
//! checked against each other exhaustively at small field sizes.

pub mod cyclo;
pub mod error;
pub mod field;
pub mod permcheck;
pub mod polyform;
pub mod search;

pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElem};
