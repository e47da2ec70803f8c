//! Weight-zero Eisenstein data for `Gamma_0(p^2)` at the cusps `inf` and `0`.

mod kloosterman;
mod lattice;
mod parabolic;
mod scattering;

use serde::Serialize;

pub use kloosterman::{euler_phi, kloosterman_zero, totient_sieve};
pub use lattice::{lattice_sum, verify_es1, Es1Check, ES1_BUDGET};
pub use parabolic::{l_series, ParabolicLevel};
pub use scattering::{
    constant_a, gamma_prefactor, phi_closed, phi_series, scattering_expansion,
    scattering_expansion_by_product, ScatteringExpansion,
};

/// Cusp pair `(P, Q)` of a scattering function `phi_{P,Q}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CuspPair {
    InfInf,
    InfZero,
}
