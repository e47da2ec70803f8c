//! Exact rationals, complex special functions and truncated Laurent pieces.

mod laurent;
mod rat;
mod special;
mod sum;

pub use laurent::{extrapolate_at_one, laurent_mul, richardson, zeta_2sm1_laurent, LaurentPiece};
pub use rat::Rat;
pub use special::{
    digamma, gamma_fn, riemann_zeta, stieltjes_gamma1, zeta_and_derivative, zeta_prime_at_2,
    zeta_real,
};
pub use sum::{Neumaier, Truncated};

/// Complex numbers at binary64 precision.
pub type Cplx = num_complex::Complex64;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub(crate) fn finite(z: Cplx, what: &'static str) -> crate::Result<Cplx> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(crate::Error::NonFinite(what))
    }
}
