//! Epstein zeta functions of definite forms, residues, and the level zeta functions.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use super::classes::enumerate_classes;
use super::form::{star_d, QuadForm};
use super::reduce::{definite_stab_order, fundamental_unit, reduce_definite};
use crate::modular::require_prime;
use crate::numerics::{gamma_fn, zeta_real, Cplx, Neumaier, Truncated};
use crate::{Error, Result};

fn small(v: &BigInt) -> Result<f64> {
    v.to_f64()
        .filter(|x| x.is_finite())
        .ok_or(Error::NonFinite("form coefficient"))
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!("Epstein sums need s > 1, got {s}")));
    }
    Ok(())
}

/// `K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt` by the trapezoid rule, for `x > 0`.
pub fn bessel_k(nu: f64, x: f64) -> f64 {
    assert!(x > 0.0, "bessel_k needs x > 0");
    let h = 0.05;
    let f = |t: f64| (-x * t.cosh() + nu.abs() * t).exp() * 0.5 * (1.0 + (-2.0 * nu.abs() * t).exp());
    let mut acc = Neumaier::new();
    acc.add(0.5 * f(0.0));
    let mut k = 1;
    loop {
        let v = f(k as f64 * h);
        acc.add(v);
        if v < 1e-30 * acc.total() && k as f64 * h > 1.0 {
            break;
        }
        k += 1;
    }
    h * acc.total()
}

/// Box sum `(1/|stab|) sum'_{max(|m|,|n|) <= box} Phi(n, -m)^{-s}` with a tail bound.
pub fn epstein_zeta_definite(phi: &QuadForm, s: f64, bound: u64) -> Result<Truncated> {
    check_s(s)?;
    let order = definite_stab_order(phi)? as f64;
    if bound == 0 {
        return Err(Error::Domain("box must be positive".into()));
    }
    let (a, b, c) = (small(&phi.a)?, small(&phi.b)?, small(&phi.c)?);
    let q = |m: i64, n: i64| {
        let (x, y) = (n as f64, -(m as f64));
        (a * x * x + b * x * y + c * y * y).powf(-s)
    };
    let bd = bound as i64;
    // Phi(-v) = Phi(v): rows m > 0 plus the half row m = 0, n > 0.
    let rows: Vec<f64> = (1..=bd)
        .into_par_iter()
        .map(|m| (-bd..=bd).map(|n| q(m, n)).collect::<Neumaier>().total())
        .collect();
    let mut acc: Neumaier = rows.into_iter().collect();
    (1..=bd).for_each(|n| acc.add(q(0, n)));
    let lmax = 0.5 * (a + c + ((a - c).powi(2) + b * b).sqrt());
    let lmin = (a * c - b * b / 4.0) / lmax;
    let tail = 8.0 * lmin.powf(-s) * (bound as f64).powf(2.0 - 2.0 * s) / (2.0 * s - 2.0);
    Ok(Truncated {
        value: 2.0 * acc.total() / order,
        tail_bound: tail / order,
    })
}

/// Same function via the Fourier expansion of the reduced form in one variable.
pub fn epstein_zeta_fast(phi: &QuadForm, s: f64) -> Result<f64> {
    check_s(s)?;
    let (red, _) = reduce_definite(phi)?;
    let order = definite_stab_order(&red)? as f64;
    let (a, b) = (small(&red.a)?, small(&red.b)?);
    let dabs = small(&red.disc().abs())?;
    let gs = gamma_fn(Cplx::new(s, 0.0))?.re;
    let g_half = gamma_fn(Cplx::new(s - 0.5, 0.0))?.re;
    let nu = s - 0.5;
    let mut acc = Neumaier::new();
    acc.add(2.0 * a.powf(-s) * zeta_real(2.0 * s)?);
    acc.add(
        2.0 * a.powf(-0.5) * (dabs / (4.0 * a)).powf(0.5 - s) * zeta_real(2.0 * s - 1.0)?
            * PI.sqrt()
            * g_half
            / gs,
    );
    let base = PI * dabs.sqrt() / a;
    let cutoff = 70.0;
    let mut n = 1u64;
    while base * n as f64 <= cutoff {
        let w = n as f64 * dabs.sqrt() / (2.0 * a);
        let mut k = 1u64;
        while base * (n * k) as f64 <= cutoff {
            let kf = k as f64;
            let term = 4.0 * a.powf(-s) * 2.0 * PI.powf(s) * kf.powf(nu) * w.powf(-nu)
                * bessel_k(nu, 2.0 * PI * kf * w)
                * (PI * kf * b * n as f64 / a).cos()
                / gs;
            acc.add(term);
            k += 1;
        }
        n += 1;
    }
    Ok(acc.total() / order)
}

/// Residue at `s = 1`: `2 pi / (sqrt|D| |stab|)` for definite forms, `log(eps)/sqrt(D)` otherwise.
pub fn residue_epstein(phi: &QuadForm) -> Result<f64> {
    let d = phi.disc();
    let df = small(&d)?;
    if d.is_negative() {
        let order = definite_stab_order(phi)? as f64;
        Ok(2.0 * PI / (df.abs().sqrt() * order))
    } else {
        let unit = fundamental_unit(phi)?;
        Ok(unit.log_unit() / df.sqrt())
    }
}

/// `(N d)^{-s} zeta_{Phi^{*d}}(s)` for a definite form of level `N`.
///
/// Indefinite Epstein values are not evaluated; use [`zeta_phi_d_residue`].
pub fn zeta_phi_d(phi: &QuadForm, n: u64, d: u64, s: f64) -> Result<f64> {
    let star = star_d(phi, d, n)?;
    if !star.disc().is_negative() {
        return Err(Error::Domain("values are only evaluated for definite forms".into()));
    }
    Ok(((n * d) as f64).powf(-s) * epstein_zeta_fast(&star, s)?)
}

/// Residue at `s = 1` of `zeta_{Phi,d}`.
pub fn zeta_phi_d_residue(phi: &QuadForm, n: u64, d: u64) -> Result<f64> {
    let star = star_d(phi, d, n)?;
    Ok(residue_epstein(&star)? / (n * d) as f64)
}

/// Residue at `s = 1` of the level zeta function
/// `(2 zeta(2s)(1 - p^{-2s}))^{-1} sum_{d | p} mu(d) sum_Phi zeta_{Phi,d}(s)`.
pub fn zeta_level_residue(l: i64, p: u64, bound: u64) -> Result<f64> {
    require_prime(p)?;
    let classes = enumerate_classes(l, p, bound)?;
    let n = p * p;
    let mut acc = Neumaier::new();
    for phi in &classes.reps {
        acc.add(zeta_phi_d_residue(phi, n, 1)?);
        acc.add(-zeta_phi_d_residue(phi, n, p)?);
    }
    let pf = p as f64;
    Ok(acc.total() / (2.0 * zeta_real(2.0)? * (1.0 - pf.powi(-2))))
}

/// Value at real `s > 1` of the level zeta function for `|l| < 2`.
pub fn zeta_level_value(l: i64, p: u64, s: f64, bound: u64) -> Result<f64> {
    require_prime(p)?;
    if l.abs() >= 2 {
        return Err(Error::Domain("values are only evaluated for |l| < 2".into()));
    }
    let classes = enumerate_classes(l, p, bound)?;
    let n = p * p;
    let mut acc = Neumaier::new();
    for phi in &classes.reps {
        acc.add(zeta_phi_d(phi, n, 1, s)?);
        acc.add(-zeta_phi_d(phi, n, p, s)?);
    }
    let pf = p as f64;
    Ok(acc.total() / (2.0 * zeta_real(2.0 * s)? * (1.0 - pf.powf(-2.0 * s))))
}

/// `sum_{Phi in Q_l(p^2)/Gamma_0(p^2)} log(eps_Phi) / sqrt(l^2 - 4)` for `|l| > 2`.
pub fn theta_class_weight(l: i64, p: u64, bound: u64) -> Result<f64> {
    if l.abs() <= 2 {
        return Err(Error::Domain(format!("theta weights need |l| > 2, got {l}")));
    }
    let classes = enumerate_classes(l, p, bound)?;
    let root = ((l * l - 4) as f64).sqrt();
    classes
        .reps
        .iter()
        .map(|phi| Ok(fundamental_unit(phi)?.log_unit() / root))
        .sum()
}
