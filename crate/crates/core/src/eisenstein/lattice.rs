//! Truncated lattice sums behind the Eisenstein identity at the cusp `0`.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::modular::require_prime;
use crate::numerics::{zeta_real, Cplx, Neumaier, Truncated};
use crate::{Error, Result};

/// Largest admissible error budget for [`verify_es1`].
pub const ES1_BUDGET: f64 = 1e-6;

/// Smallest eigenvalue of `[[a, b], [b, c]]` computed as `det / lambda_max`.
fn lambda_min(a: f64, b: f64, c: f64, det: f64) -> f64 {
    let lmax = 0.5 * (a + c + ((a - c).powi(2) + 4.0 * b * b).sqrt());
    det / lmax
}

/// Tail of `sum y^s Q(m, n)^{-s}` outside the box `max(|m|, |n|) <= bound`.
///
/// Each shell `max(|m|, |n|) = k` has `8k` points with `Q >= lambda k^2`.
fn box_tail(y: f64, s: f64, lambda: f64, bound: u64) -> f64 {
    let b = bound.max(1) as f64;
    8.0 * y.powf(s) * lambda.powf(-s) * b.powf(2.0 - 2.0 * s) / (2.0 * s - 2.0)
}

fn check_args(z: Cplx, s: f64) -> Result<()> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("z must lie in the upper half-plane, got {z}")));
    }
    if !(s > 1.0) {
        return Err(Error::Domain(format!("lattice sums need s > 1, got {s}")));
    }
    Ok(())
}

/// `sum'_{max(|m|,|n|) <= bound} y^s / |p^2 m z + t n|^{2s}` over `(m, n) != (0, 0)`.
pub fn lattice_sum(z: Cplx, s: f64, p: u64, t: u64, bound: u64) -> Result<Truncated> {
    check_args(z, s)?;
    require_prime(p)?;
    if t == 0 {
        return Err(Error::Domain("t must be positive".into()));
    }
    let (x, y) = (z.re, z.im);
    let p2 = (p * p) as f64;
    let tf = t as f64;
    let b = bound as i64;
    let term = |m: i64, n: i64| {
        let re = p2 * m as f64 * x + tf * n as f64;
        let im = p2 * m as f64 * y;
        (y / (re * re + im * im)).powf(s)
    };
    // (m, n) and (-m, -n) contribute equally: sum the half-plane m > 0 plus m = 0, n > 0.
    let rows: Vec<f64> = (1..=b)
        .into_par_iter()
        .map(|m| (-b..=b).map(|n| term(m, n)).collect::<Neumaier>().total())
        .collect();
    let mut acc: Neumaier = rows.into_iter().collect();
    (1..=b).for_each(|n| acc.add(term(0, n)));
    let a = p2 * p2 * z.norm_sqr();
    let lambda = lambda_min(a, p2 * tf * x, tf * tf, p2 * p2 * tf * tf * y * y);
    Ok(Truncated {
        value: 2.0 * acc.total(),
        tail_bound: box_tail(y, s, lambda, bound),
    })
}

/// Outcome of [`verify_es1`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Es1Check {
    /// Direct sum over coprime `(m, n)` with `p^2 | m`, `|m|, |n| <= bound`.
    pub lhs: f64,
    /// `(1/2) zeta(2s)^{-1} (1 - p^{-2s})^{-1} [S_1 - S_p]`.
    pub rhs: f64,
    pub residual: f64,
    /// Sum of the truncation bounds on both sides.
    pub budget: f64,
}

/// Compare the Eisenstein series at the cusp `0` with its lattice-sum expression.
pub fn verify_es1(z: Cplx, s: f64, p: u64, bound: u64) -> Result<Es1Check> {
    check_args(z, s)?;
    require_prime(p)?;
    let (x, y) = (z.re, z.im);
    let p2 = p * p;
    let b = bound as i64;
    let step = p2 as i64;
    let mmax = b / step;
    let term = |m: i64, n: i64| {
        let re = m as f64 * x + n as f64;
        let im = m as f64 * y;
        (y / (re * re + im * im)).powf(s)
    };
    let rows: Vec<f64> = (1..=mmax)
        .into_par_iter()
        .map(|k| {
            let m = k * step;
            (-b..=b)
                .filter(|n| m.gcd(n) == 1)
                .map(|n| term(m, n))
                .collect::<Neumaier>()
                .total()
        })
        .collect();
    let half: f64 = rows.into_iter().collect::<Neumaier>().total();
    // Row m = 0 contributes n = +-1; the factor 1/2 and the symmetry cancel.
    let lhs = half + term(0, 1);
    let lhs_tail = {
        let lambda = lambda_min(z.norm_sqr(), x, 1.0, y * y);
        0.5 * box_tail(y, s, lambda, bound)
    };

    let s1 = lattice_sum(z, s, p, 1, bound)?;
    let sp = lattice_sum(z, s, p, p, bound)?;
    let pref = 0.5 / (zeta_real(2.0 * s)? * (1.0 - (p as f64).powf(-2.0 * s)));
    let rhs = pref * (s1.value - sp.value);
    let budget = lhs_tail + pref * (s1.tail_bound + sp.tail_bound);
    if budget > ES1_BUDGET {
        return Err(Error::TruncationTooSmall {
            tail: budget,
            tol: ES1_BUDGET,
        });
    }
    Ok(Es1Check {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        budget,
    })
}
