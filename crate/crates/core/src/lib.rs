//! Desk-scale quantities entering the Arakelov self-intersection of the
//! relative dualizing sheaf on the minimal regular model of `X_0(p^2)`.
//!
//! * [`numerics`]: exact rationals, complex special functions, Laurent pieces at `s = 1`.
//! * [`modular`]: genus, cusps, volume and index of `Gamma_0(p^2)`.
//! * [`eisenstein`]: scattering functions, their Laurent data, the lattice
//!   identity for `E_{inf,0}` and the parabolic series `L_M(s)`.
//! * [`quadforms`]: binary quadratic forms, Pell units, `Gamma_0(p^2)` classes,
//!   Epstein zeta functions and their residues.
//! * [`fiber`]: special-fiber intersection calculus and blow-downs.
//! * [`arakelov`]: assembly of `omega^2` and its ratio to `3 g log(p^2)`.

pub mod arakelov;
pub mod eisenstein;
mod error;
pub mod fiber;
pub mod modular;
pub mod numerics;
pub mod quadforms;

pub use error::{Error, Result};
