//! Exact coefficient arithmetic: `Z[A, A^-1]` and polynomials over it in `x`.

mod family;
mod laurent;
mod xpoly;

pub use family::{p_n, p_nk};
pub use laurent::LaurentPoly;
pub use xpoly::XPoly;
pub(crate) use xpoly::fmt_coeff;
