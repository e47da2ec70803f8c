//! Dirichlet series `L_M(s) = sum_{c > 0, M | c} phi(c) c^{-2s}` counting the double
//! cosets `B \ Gamma_0(M) / B` by their lower-left entry.

use crate::modular::require_prime;
use crate::numerics::{riemann_zeta, Cplx};
use crate::{Error, Result};

/// Level `M` of the series `L_M(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParabolicLevel {
    One,
    P,
}

/// `L_1(s) = zeta(2s-1)/zeta(2s)`; `L_p` from the Euler factor at `p`:
/// `L_p(s) = (p-1) p^{-2s} / (1 - p^{1-2s}) * sum_{p !| m} phi(m) m^{-2s}`.
pub fn l_series(level: ParabolicLevel, s: Cplx, p: u64) -> Result<Cplx> {
    require_prime(p)?;
    if s == Cplx::new(1.0, 0.0) {
        return Err(Error::Pole(1.0));
    }
    let l1 = riemann_zeta(2.0 * s - 1.0)? / riemann_zeta(2.0 * s)?;
    let out = match level {
        ParabolicLevel::One => l1,
        ParabolicLevel::P => {
            let pf = p as f64;
            let lp = pf.ln();
            let q = (-2.0 * s * lp).exp(); // p^{-2s}
            let q1 = ((1.0 - 2.0 * s) * lp).exp(); // p^{1-2s}
            // Local factor of zeta(2s-1)/zeta(2s) at p is (1 - p^{-2s})/(1 - p^{1-2s}).
            let coprime = l1 * (1.0 - q1) / (1.0 - q);
            (pf - 1.0) * q / (1.0 - q1) * coprime
        }
    };
    if out.is_finite() {
        Ok(out)
    } else {
        Err(Error::NonFinite("l_series"))
    }
}
