//! Scattering functions `phi_{inf,inf}` and `phi_{inf,0}` for `Gamma_0(p^2)`.

use std::f64::consts::PI;

use serde::Serialize;

use super::kloosterman::totient_sieve;
use super::CuspPair;
use crate::modular::{require_prime, require_prime_at_least, volume};
use crate::numerics::{
    gamma_fn, laurent_mul, riemann_zeta, zeta_2sm1_laurent, zeta_prime_at_2, Cplx,
    LaurentPiece, Neumaier, Truncated, EULER_GAMMA,
};
use crate::{Error, Result};

/// `sqrt(pi) Gamma(s - 1/2) / Gamma(s)`.
pub fn gamma_prefactor(s: Cplx) -> Result<Cplx> {
    Ok(PI.sqrt() * gamma_fn(s - 0.5)? / gamma_fn(s)?)
}

/// `sum_{k > K} k^{1-2s}` bounded by the integral (plus the `k = 1` term when `K = 0`).
fn power_tail(k: u64, s: f64) -> f64 {
    let e = 2.0 * s - 2.0;
    if k == 0 {
        1.0 + 1.0 / e
    } else {
        (k as f64).powf(-e) / e
    }
}

/// Truncated Dirichlet series `sqrt(pi) Gamma(s-1/2)/Gamma(s) sum_{c <= c_max} c^{-2s} S(0,0;c)`.
///
/// The tail bound uses `S(0,0;c) <= c / p^j` on the support of the sum
/// (`j = 0` for `inf,inf`, `j = 1` for `inf,0`), which is at most
/// `sum_{c > c_max} c^{1-2s}`.
pub fn phi_series(pair: CuspPair, s: f64, p: u64, c_max: u64) -> Result<Truncated> {
    require_prime(p)?;
    if !(s > 1.0) {
        return Err(Error::Domain(format!("phi_series needs s > 1, got {s}")));
    }
    let pref = gamma_prefactor(Cplx::new(s, 0.0))?.re;
    let pf = p as f64;
    let (sum, tail) = match pair {
        CuspPair::InfInf => {
            // c = p^2 k, phi(p^2 k) = p * phi(p k).
            let kmax = c_max / (p * p);
            let phi = totient_sieve(kmax as usize);
            let acc: Neumaier = (1..=kmax)
                .rev()
                .map(|k| {
                    let phk = phi[k as usize] as f64;
                    let phi_pk = if k % p == 0 { pf * phk } else { (pf - 1.0) * phk };
                    let c = (p * p * k) as f64;
                    pf * phi_pk * c.powf(-2.0 * s)
                })
                .collect();
            (acc.total(), pf.powf(2.0 - 4.0 * s) * power_tail(kmax, s))
        }
        CuspPair::InfZero => {
            // c = p n with p not dividing n, S = phi(n).
            let nmax = c_max / p;
            let phi = totient_sieve(nmax as usize);
            let acc: Neumaier = (1..=nmax)
                .rev()
                .filter(|n| n % p != 0)
                .map(|n| phi[n as usize] as f64 * ((p * n) as f64).powf(-2.0 * s))
                .collect();
            (acc.total(), pf.powf(-2.0 * s) * power_tail(nmax, s))
        }
    };
    Ok(Truncated {
        value: pref * sum,
        tail_bound: pref.abs() * tail,
    })
}

/// Closed form of the scattering function at complex `s`.
pub fn phi_closed(pair: CuspPair, s: Cplx, p: u64) -> Result<Cplx> {
    require_prime(p)?;
    if s == Cplx::new(1.0, 0.0) {
        return Err(Error::Pole(1.0));
    }
    let pf = p as f64;
    let p2s = (2.0 * s * pf.ln()).exp();
    let level = 1.0 / (p2s * (p2s - 1.0));
    let gamma_zeta = gamma_prefactor(s)? / riemann_zeta(2.0 * s)?;
    let z = riemann_zeta(2.0 * s - 1.0)?;
    let inf_inf = pf * (pf - 1.0) * level * gamma_zeta * z;
    let out = match pair {
        CuspPair::InfInf => inf_inf,
        CuspPair::InfZero => (p2s - pf) / (pf * (pf - 1.0)) * inf_inf,
    };
    if out.is_finite() {
        Ok(out)
    } else {
        Err(Error::NonFinite("phi_closed"))
    }
}

/// Derivative at `s = 1` of `sqrt(pi) Gamma(s-1/2) / (Gamma(s) zeta(2s))`.
///
/// Its log-derivative there is `psi(1/2) - psi(1) - 2 zeta'(2)/zeta(2)`.
pub fn constant_a() -> f64 {
    let zeta2 = PI * PI / 6.0;
    6.0 / PI * (-2.0 * 2f64.ln() - 2.0 * zeta_prime_at_2() / zeta2)
}

/// Laurent data at `s = 1` of a scattering function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringExpansion {
    pub pair: CuspPair,
    pub level: u64,
    pub piece: LaurentPiece,
}

/// Pole `1/v` and constant term from the closed formulas:
/// `C = (1/v)(2 gamma + a pi/6 - kappa log(p^2)/(p^2-1))` with
/// `kappa = 2p^2 - 1` for `inf,inf` and `p^2 - p - 1` for `inf,0`.
pub fn scattering_expansion(pair: CuspPair, p: u64) -> Result<ScatteringExpansion> {
    require_prime_at_least(p, 5, "scattering expansion needs p >= 5")?;
    let v = volume(p)?;
    let pf = p as f64;
    let p2 = pf * pf;
    let kappa = match pair {
        CuspPair::InfInf => 2.0 * p2 - 1.0,
        CuspPair::InfZero => p2 - pf - 1.0,
    };
    let constant = (2.0 * EULER_GAMMA + constant_a() * PI / 6.0 - kappa * p2.ln() / (p2 - 1.0)) / v;
    Ok(ScatteringExpansion {
        pair,
        level: p,
        piece: LaurentPiece::through_constant(1.0 / v, constant),
    })
}

/// Same data obtained by multiplying the Taylor/Laurent pieces of each factor.
pub fn scattering_expansion_by_product(pair: CuspPair, p: u64) -> Result<ScatteringExpansion> {
    require_prime_at_least(p, 5, "scattering expansion needs p >= 5")?;
    let pf = p as f64;
    let p2 = pf * pf;
    let lp2 = p2.ln();
    // 1/(p^{2s}(p^{2s}-1))
    let level = LaurentPiece::new(
        0.0,
        1.0 / (p2 * (p2 - 1.0)),
        -(2.0 * p2 - 1.0) * lp2 / (p2 * (p2 - 1.0) * (p2 - 1.0)),
    );
    let gamma_zeta = LaurentPiece::new(0.0, 6.0 / PI, constant_a());
    let scale = LaurentPiece::constant_series(pf * (pf - 1.0));
    let regular = laurent_mul(&laurent_mul(&scale, &level)?, &gamma_zeta)?;
    let mut piece = laurent_mul(&regular, &zeta_2sm1_laurent())?;
    if pair == CuspPair::InfZero {
        // (p^{2s} - p)/(p(p-1))
        let shift = LaurentPiece::new(0.0, 1.0, p2 * lp2 / (pf * (pf - 1.0)));
        piece = laurent_mul(&shift, &piece)?;
    }
    Ok(ScatteringExpansion {
        pair,
        level: p,
        piece,
    })
}
