//! Gamma, digamma and Riemann zeta (with derivative) at binary64.
//!
//! Zeta uses Euler–Maclaurin summation with `EM_N` explicit terms and
//! `BERNOULLI.len()` Bernoulli corrections. For `|s| <= 20` the first
//! omitted correction is below `1e-25` relative.

use std::f64::consts::PI;

use super::{finite, Cplx};
use crate::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// B_2, B_4, ..., B_24.
const BERNOULLI: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

const EM_N: u32 = 24;

fn is_nonpositive_integer(s: Cplx) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0
}

/// Complex Gamma function (Lanczos, reflection for `Re(s) < 1/2`).
pub fn gamma_fn(s: Cplx) -> Result<Cplx> {
    if is_nonpositive_integer(s) {
        return Err(Error::GammaPole(s.re));
    }
    finite(gamma_unchecked(s), "gamma")
}

fn gamma_unchecked(s: Cplx) -> Cplx {
    if s.re < 0.5 {
        let pi = Cplx::new(PI, 0.0);
        return pi / ((pi * s).sin() * gamma_unchecked(1.0 - s));
    }
    let z = s - 1.0;
    let mut x = Cplx::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// Digamma for real `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("digamma needs x > 0, got {x}")));
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut pow = inv2;
    let mut series = 0.0;
    for (k, b) in BERNOULLI.iter().take(8).enumerate() {
        series += b / (2.0 * (k as f64 + 1.0)) * pow;
        pow *= inv2;
    }
    Ok(acc + x.ln() - 0.5 / x - series)
}

/// Riemann zeta at complex `s != 1`.
pub fn riemann_zeta(s: Cplx) -> Result<Cplx> {
    if s == Cplx::new(1.0, 0.0) {
        return Err(Error::Pole(1.0));
    }
    finite(zeta_em(s).0, "zeta")
}

/// Riemann zeta at real `s != 1`.
pub fn zeta_real(s: f64) -> Result<f64> {
    riemann_zeta(Cplx::new(s, 0.0)).map(|z| z.re)
}

/// `(zeta(s), zeta'(s))` at complex `s != 1`.
pub fn zeta_and_derivative(s: Cplx) -> Result<(Cplx, Cplx)> {
    if s == Cplx::new(1.0, 0.0) {
        return Err(Error::Pole(1.0));
    }
    let (z, dz) = zeta_em(s);
    Ok((finite(z, "zeta")?, finite(dz, "zeta'")?))
}

/// `zeta'(2)`.
pub fn zeta_prime_at_2() -> f64 {
    zeta_em(Cplx::new(2.0, 0.0)).1.re
}

fn zeta_em(s: Cplx) -> (Cplx, Cplx) {
    let n = EM_N as f64;
    let ln_n = n.ln();
    let mut z = Cplx::new(0.0, 0.0);
    let mut dz = Cplx::new(0.0, 0.0);
    for k in 1..EM_N {
        let kf = k as f64;
        let term = (-s * kf.ln()).exp();
        z += term;
        dz -= term * kf.ln();
    }
    let n_pow = (-s * ln_n).exp(); // N^{-s}
    let sm1 = s - 1.0;
    z += n * n_pow / sm1 + 0.5 * n_pow;
    dz += n * n_pow * (-ln_n / sm1 - 1.0 / (sm1 * sm1)) - 0.5 * ln_n * n_pow;

    // sum_k B_2k/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    let mut poch = s;
    let mut dpoch = Cplx::new(1.0, 0.0);
    let mut fact = 2.0;
    let mut npow = n_pow / n;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let c = b / fact;
        z += c * poch * npow;
        dz += c * (dpoch - ln_n * poch) * npow;
        let j = 2 * k as u32 + 1;
        // poch *= (s + j)(s + j + 1)
        let f1 = s + j as f64;
        let f2 = s + (j + 1) as f64;
        dpoch = dpoch * f1 * f2 + poch * (f1 + f2);
        poch = poch * f1 * f2;
        fact *= (2 * k + 3) as f64 * (2 * k + 4) as f64;
        npow /= n * n;
    }
    (z, dz)
}

/// First Stieltjes constant: `zeta(s) = 1/(s-1) + gamma - gamma_1 (s-1) + ...`.
///
/// Computed as `-F'(1)` for `F(s) = zeta(s) - 1/(s-1)`, differentiating the
/// Euler–Maclaurin representation term by term.
pub fn stieltjes_gamma1() -> f64 {
    let n = EM_N as f64;
    let ln_n = n.ln();
    let mut df = 0.0;
    for k in 2..EM_N {
        let kf = k as f64;
        df -= kf.ln() / kf;
    }
    // (N^{1-s} - 1)/(s-1) has derivative ln^2 N / 2 at s = 1.
    df += 0.5 * ln_n * ln_n - 0.5 * ln_n / n;
    let mut poch = 1.0;
    let mut dpoch = 1.0;
    let mut fact = 2.0;
    let mut npow = 1.0 / (n * n);
    for (k, b) in BERNOULLI.iter().enumerate() {
        let c = b / fact;
        df += c * (dpoch - ln_n * poch) * npow;
        let j = (2 * k + 1) as f64;
        let (f1, f2) = (1.0 + j, 2.0 + j);
        dpoch = dpoch * f1 * f2 + poch * (f1 + f2);
        poch *= f1 * f2;
        fact *= (2 * k + 3) as f64 * (2 * k + 4) as f64;
        npow /= n * n;
    }
    -df
}

/// `zeta(s) - 1/(s-1)` at `s = 1`, i.e. Euler's constant.
#[cfg(test)]
pub(crate) fn zeta_regular_part_at_1() -> f64 {
    let n = EM_N as f64;
    let mut f = 0.0;
    for k in 1..EM_N {
        f += 1.0 / k as f64;
    }
    f += -n.ln() + 0.5 / n;
    let mut poch = 1.0;
    let mut fact = 2.0;
    let mut npow = 1.0 / (n * n);
    for (k, b) in BERNOULLI.iter().enumerate() {
        f += b / fact * poch * npow;
        let j = (2 * k + 1) as f64;
        poch *= (1.0 + j) * (2.0 + j);
        fact *= (2 * k + 3) as f64 * (2 * k + 4) as f64;
        npow /= n * n;
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::EULER_GAMMA;
    use proptest::prelude::*;

    fn c(re: f64) -> Cplx {
        Cplx::new(re, 0.0)
    }

    fn rel(a: Cplx, b: Cplx) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn gamma_special_values() {
        let sqrt_pi = PI.sqrt();
        assert!(rel(gamma_fn(c(1.0)).unwrap(), c(1.0)) < 1e-14);
        assert!(rel(gamma_fn(c(0.5)).unwrap(), c(sqrt_pi)) < 1e-13);
        assert!(rel(gamma_fn(c(2.5)).unwrap(), c(0.75 * sqrt_pi)) < 1e-13);
        assert!((gamma_fn(c(0.5)).unwrap().re - 1.772_453_850_9).abs() < 1e-10);
        assert!((gamma_fn(c(2.5)).unwrap().re - 1.329_340_388_2).abs() < 1e-10);
    }

    #[test]
    fn gamma_poles() {
        assert_eq!(gamma_fn(c(0.0)), Err(Error::GammaPole(0.0)));
        assert_eq!(gamma_fn(c(-3.0)), Err(Error::GammaPole(-3.0)));
        assert!(gamma_fn(c(-2.5)).is_ok());
    }

    #[test]
    fn zeta_even_values_and_pole() {
        assert!(rel(riemann_zeta(c(2.0)).unwrap(), c(PI * PI / 6.0)) < 1e-14);
        assert!(rel(riemann_zeta(c(4.0)).unwrap(), c(PI.powi(4) / 90.0)) < 1e-14);
        assert!(rel(riemann_zeta(c(6.0)).unwrap(), c(PI.powi(6) / 945.0)) < 1e-14);
        assert!(rel(riemann_zeta(c(8.0)).unwrap(), c(PI.powi(8) / 9450.0)) < 1e-14);
        assert_eq!(riemann_zeta(c(1.0)), Err(Error::Pole(1.0)));
    }

    /// Independent Euler–Maclaurin oracle: direct sum to 2000 plus the
    /// integral, midpoint and first Bernoulli corrections.
    fn zeta_oracle(s: f64) -> f64 {
        let n = 2000.0f64;
        let direct: f64 = (1..2000).map(|k| (k as f64).powf(-s)).rev().sum();
        direct + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s / 12.0 * n.powf(-s - 1.0)
    }

    #[test]
    fn zeta_three_against_oracle() {
        let oracle = zeta_oracle(3.0);
        let z = zeta_real(3.0).unwrap();
        assert!((z - oracle).abs() / oracle < 1e-12, "{z} vs {oracle}");
        assert!((z - 1.202_056_903_2).abs() < 1e-10);
    }

    #[test]
    fn zeta_continuation_strip() {
        // Known values: zeta(1/2) and zeta(0.9).
        assert!((zeta_real(0.5).unwrap() + 1.460_354_508_809_586_8).abs() < 1e-12);
        assert!((zeta_real(1.1).unwrap() - 10.584_448_464_950_81).abs() < 1e-11);
        // zeta(1/2 + 14.134725 i) is near the first nontrivial zero.
        let z = riemann_zeta(Cplx::new(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(z.norm() < 1e-9, "{z}");
    }

    /// Term-wise differentiated Euler–Maclaurin oracle for zeta'(2).
    #[test]
    fn zeta_prime_two_against_oracle() {
        let s = 2.0f64;
        let n = 2000.0f64;
        let ln_n = n.ln();
        let direct: f64 = (1..2000)
            .map(|k| -(k as f64).ln() * (k as f64).powf(-s))
            .rev()
            .sum();
        let oracle = direct
            + n.powf(1.0 - s) * (-ln_n / (s - 1.0) - 1.0 / ((s - 1.0) * (s - 1.0)))
            - 0.5 * ln_n * n.powf(-s)
            + (n.powf(-s - 1.0) - s * ln_n * n.powf(-s - 1.0)) / 12.0;
        let got = zeta_prime_at_2();
        assert!((got - oracle).abs() < 1e-10, "{got} vs {oracle}");
        assert!((got + 0.937_548_254_3).abs() < 1e-10);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for &s in &[1.3, 2.0, 3.5] {
            let h = 1e-5;
            let fd = (zeta_real(s + h).unwrap() - zeta_real(s - h).unwrap()) / (2.0 * h);
            let (_, d) = zeta_and_derivative(c(s)).unwrap();
            assert!((d.re - fd).abs() < 1e-8 * d.re.abs().max(1.0));
        }
    }

    #[test]
    fn digamma_values() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-14);
        let half = -EULER_GAMMA - 2.0 * 2f64.ln();
        assert!((digamma(0.5).unwrap() - half).abs() < 1e-14);
        assert!((digamma(0.5).unwrap() + 1.963_510_026_0).abs() < 1e-10);
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.0).is_err());
    }

    #[test]
    fn euler_and_stieltjes_constants() {
        assert!((zeta_regular_part_at_1() - EULER_GAMMA).abs() < 1e-15);
        assert!((stieltjes_gamma1() + 0.072_815_845_483_676_72).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn gamma_recurrence(re in 0.4f64..3.0, im in -2.0f64..2.0) {
            let s = Cplx::new(re, im);
            let lhs = gamma_fn(s + 1.0).unwrap();
            let rhs = s * gamma_fn(s).unwrap();
            prop_assert!(rel(lhs, rhs) < 1e-11);
        }

        #[test]
        fn zeta_even_integer_closed_forms(k in 1usize..6) {
            // zeta(2k) = (-1)^{k+1} B_{2k} (2 pi)^{2k} / (2 (2k)!)
            let b = BERNOULLI[k - 1];
            let fact: f64 = (1..=2 * k).map(|i| i as f64).product();
            let closed = (if k % 2 == 1 { 1.0 } else { -1.0 }) * b
                * (2.0 * PI).powi(2 * k as i32) / (2.0 * fact);
            let z = zeta_real(2.0 * k as f64).unwrap();
            prop_assert!((z - closed).abs() / closed < 1e-11);
        }
    }
}
