//! Assembly of the Arakelov self-intersection `omega^2` of `X_0(p^2)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::eisenstein::{scattering_expansion, CuspPair};
use crate::fiber::{canonical_degrees, edixhoven_fiber, minimal_model};
use crate::modular::{genus, primes_between, require_prime_at_least};
use crate::numerics::Rat;
use crate::{Error, Result};

/// Remainder carried by the Green's function estimate.
pub const GREEN_REMAINDER: &str = "o(log(p^2)/g)";

/// `s_p = (p^2 - 1)/24`.
pub fn s_p(p: u64) -> Result<Rat> {
    require_prime_at_least(p, 7, "s_p is used for p >= 7")?;
    Ok(Rat::new(p * p - 1, 24u64))
}

fn genus_above_one(p: u64) -> Result<u64> {
    require_prime_at_least(p, 7, "the minimal model needs p >= 7")?;
    let g = genus(p)?;
    if g <= 1 {
        return Err(Error::GenusTooSmall(g));
    }
    Ok(g)
}

/// Local intersections `<D_m, C'_n>` for `m, n` in `{0, inf}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DmCheck {
    pub p: u64,
    pub g: u64,
    pub s_p: Rat,
    /// Coefficient `-(g-1)/s_p` of `C'_m` in `V_m`.
    pub v_coefficient: Rat,
    /// `products[m][n] = <D_m, C'_n>`, index 0 for the cusp `0`, 1 for `inf`.
    pub products: [[Rat; 2]; 2],
}

impl DmCheck {
    pub fn orthogonal(&self) -> bool {
        self.products.iter().flatten().all(Rat::is_zero)
    }
}

/// `<D_m, C'_n>` with `D_m = K - (2g - 2) H_m + c C'_m` on the minimal model.
pub fn dm_products(p: u64, v_coefficient: Rat) -> Result<DmCheck> {
    let g = genus_above_one(p)?;
    let sp = s_p(p)?;
    let model = minimal_model(&edixhoven_fiber(p)?)?;
    let k = canonical_degrees(&model.fiber)?;
    let gm1 = Rat::int(g as i64 - 1);
    if k.iter().any(|kc| *kc != gm1) {
        return Err(Error::Mismatch(format!("K.C' = {k:?}, expected g - 1 = {gm1}")));
    }
    let inter = &model.fiber.inter;
    let h = |m: usize, n: usize| if m == n { Rat::one() } else { Rat::zero() };
    let two_g_minus_2 = Rat::int(2 * g as i64 - 2);
    let prod = |m: usize, n: usize| {
        &k[n] - &(&two_g_minus_2 * &h(m, n)) + &v_coefficient * &inter[m][n]
    };
    Ok(DmCheck {
        p,
        g,
        s_p: sp,
        products: [[prod(0, 0), prod(0, 1)], [prod(1, 0), prod(1, 1)]],
        v_coefficient,
    })
}

/// Orthogonality of `D_m` to both fiber components, with `V_m = -((g-1)/s_p) C'_m`.
pub fn check_dm_orthogonal(p: u64) -> Result<DmCheck> {
    let g = genus_above_one(p)?;
    let coefficient = -(Rat::int(g as i64 - 1) / s_p(p)?);
    dm_products(p, coefficient)
}

/// How `g_can(inf, 0)` is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GreenMode {
    /// `6 log(p^2) / (p (p+1))`.
    MainTerm,
    /// `-2 pi C_{inf,0}` from the scattering constant.
    Constants,
}

impl fmt::Display for GreenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GreenMode::MainTerm => "main_term",
            GreenMode::Constants => "constants",
        })
    }
}

impl FromStr for GreenMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "main_term" => Ok(GreenMode::MainTerm),
            "constants" => Ok(GreenMode::Constants),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// Estimate of `g_can(inf, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreenEstimate {
    pub p: u64,
    pub mode: GreenMode,
    pub value: f64,
    pub remainder_class: &'static str,
}

pub fn green_estimate(p: u64, mode: GreenMode) -> Result<GreenEstimate> {
    genus_above_one(p)?;
    let pf = p as f64;
    let value = match mode {
        GreenMode::MainTerm => 6.0 * (pf * pf).ln() / (pf * (pf + 1.0)),
        GreenMode::Constants => {
            -2.0 * PI * scattering_expansion(CuspPair::InfZero, p)?.piece.constant
        }
    };
    Ok(GreenEstimate {
        p,
        mode,
        value,
        remainder_class: GREEN_REMAINDER,
    })
}

/// `omega^2` split into its algebraic and analytic parts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaReport {
    pub p: u64,
    pub mode: GreenMode,
    pub g: u64,
    pub s_p: Rat,
    /// `(g^2 - 1)/s_p`, the coefficient of `log p` in the algebraic part.
    pub algebraic_coefficient: Rat,
    pub algebraic: f64,
    pub analytic: f64,
    pub total: f64,
    pub target: f64,
    pub ratio: f64,
    pub e_p_flag: &'static str,
}

/// The Neron-Tate contribution vanishes for `p = 11 mod 12` and is `O(log p)` otherwise.
pub fn e_p_flag(p: u64) -> &'static str {
    if p % 12 == 11 {
        "0"
    } else {
        "O(log p)"
    }
}

/// `analytic = 4 g (g-1) g_can(inf, 0)`, `algebraic = (g^2 - 1) log p / s_p`,
/// compared with `3 g log(p^2)`.
pub fn omega_sq(p: u64, mode: GreenMode) -> Result<OmegaReport> {
    let g = genus_above_one(p)?;
    let sp = s_p(p)?;
    let gi = g as i64;
    let coefficient = Rat::int(gi * gi - 1) / sp.clone();
    let lp = (p as f64).ln();
    let gf = g as f64;
    let algebraic = coefficient.to_f64() * lp;
    let analytic = 4.0 * gf * (gf - 1.0) * green_estimate(p, mode)?.value;
    let total = algebraic + analytic;
    let target = 3.0 * gf * 2.0 * lp;
    Ok(OmegaReport {
        p,
        mode,
        g,
        s_p: sp,
        algebraic_coefficient: coefficient,
        algebraic,
        analytic,
        total,
        target,
        ratio: total / target,
        e_p_flag: e_p_flag(p),
    })
}

/// One report per prime in a range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scan {
    pub rows: Vec<OmegaReport>,
    /// Prime with the largest `|ratio - 1|` and that residual.
    pub largest_residual: (u64, f64),
}

impl Scan {
    /// Largest `|ratio - 1|` over the rows with `lo <= p <= hi`.
    pub fn max_residual_in(&self, lo: u64, hi: u64) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| (lo..=hi).contains(&r.p))
            .map(|r| (r.ratio - 1.0).abs())
            .reduce(f64::max)
    }
}

pub fn scan(p_min: u64, p_max: u64, mode: GreenMode) -> Result<Scan> {
    if p_min < 11 {
        return Err(Error::Domain(format!("scan needs p_min >= 11, got {p_min}")));
    }
    let primes = primes_between(p_min, p_max);
    if primes.is_empty() {
        return Err(Error::EmptyRange(p_min, p_max));
    }
    let rows: Vec<OmegaReport> = primes
        .par_iter()
        .map(|&p| omega_sq(p, mode))
        .collect::<Result<_>>()?;
    let largest_residual = rows
        .iter()
        .map(|r| (r.p, (r.ratio - 1.0).abs()))
        .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    Ok(Scan {
        rows,
        largest_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::constant_a;
    use crate::modular::volume;
    use crate::numerics::EULER_GAMMA;

    #[test]
    fn s_p_values() {
        assert_eq!(s_p(11).unwrap(), Rat::int(5));
        assert_eq!(s_p(13).unwrap(), Rat::int(7));
        for p in primes_between(7, 400) {
            let sp = s_p(p).unwrap();
            assert!(sp.is_integer());
            let m = minimal_model(&edixhoven_fiber(p).unwrap()).unwrap();
            assert_eq!(m.fiber.inter[0][1], sp);
        }
    }

    #[test]
    fn orthogonality_and_negative_control() {
        for p in [11, 13] {
            let c = check_dm_orthogonal(p).unwrap();
            assert!(c.orthogonal());
            let bumped = &c.v_coefficient + &Rat::one();
            assert!(!dm_products(p, bumped).unwrap().orthogonal());
        }
        assert_eq!(check_dm_orthogonal(7), Err(Error::GenusTooSmall(1)));
    }

    #[test]
    fn green_modes() {
        let m = green_estimate(11, GreenMode::MainTerm).unwrap();
        assert!((m.value - 6.0 * 121f64.ln() / 132.0).abs() < 1e-15);
        assert_eq!(m.remainder_class, GREEN_REMAINDER);
        let c = green_estimate(11, GreenMode::Constants).unwrap();
        let c0 = scattering_expansion(CuspPair::InfZero, 11).unwrap().piece.constant;
        assert_eq!(c.value, -2.0 * PI * c0);
    }

    #[test]
    fn green_difference_symbolic() {
        for p in primes_between(11, 200) {
            let pf = p as f64;
            let lp2 = (pf * pf).ln();
            let main = green_estimate(p, GreenMode::MainTerm).unwrap().value;
            let cons = green_estimate(p, GreenMode::Constants).unwrap().value;
            let w = 6.0 / (pf * (pf + 1.0));
            let expected = -w * (2.0 * EULER_GAMMA + constant_a() * PI / 6.0) - w * lp2 * pf / (pf * pf - 1.0);
            assert!((cons - main - expected).abs() < 1e-12, "p = {p}");
            assert!((2.0 * PI / volume(p).unwrap() - w).abs() < 1e-15);
        }
    }

    #[test]
    fn relative_gap_shrinks() {
        let gap = |p| {
            let m = green_estimate(p, GreenMode::MainTerm).unwrap().value;
            let c = green_estimate(p, GreenMode::Constants).unwrap().value;
            (c - m).abs() / m
        };
        let ps = primes_between(11, 199);
        assert!(ps.windows(2).all(|w| gap(w[1]) < gap(w[0])));
    }

    #[test]
    fn algebraic_coefficients() {
        let r = omega_sq(11, GreenMode::MainTerm).unwrap();
        assert_eq!(r.g, 6);
        assert_eq!(r.algebraic_coefficient, Rat::int(7));
        assert!((r.algebraic - 7.0 * 11f64.ln()).abs() < 1e-12);
        let r = omega_sq(13, GreenMode::MainTerm).unwrap();
        assert_eq!(r.algebraic_coefficient, Rat::int(9));
        assert_eq!(r.algebraic_coefficient.clone() - Rat::int(2 * r.g as i64), Rat::int(-7));
        assert_eq!(r.e_p_flag, "O(log p)");
        assert_eq!(omega_sq(11, GreenMode::MainTerm).unwrap().e_p_flag, "0");
    }

    #[test]
    fn report_consistency() {
        for mode in [GreenMode::MainTerm, GreenMode::Constants] {
            let r = omega_sq(101, mode).unwrap();
            assert_eq!(r.total, r.algebraic + r.analytic);
            assert_eq!(r.ratio, r.total / r.target);
            assert!(r.algebraic > 0.0 && r.analytic > 0.0);
        }
    }

    #[test]
    fn ratio_closed_form() {
        // In main-term mode the ratio is 8(g-1)/(p(p+1)) + 4(g^2-1)/(g(p^2-1)).
        for p in primes_between(11, 3000) {
            let r = omega_sq(p, GreenMode::MainTerm).unwrap();
            let (g, pf) = (r.g as f64, p as f64);
            let closed = 8.0 * (g - 1.0) / (pf * (pf + 1.0)) + 4.0 * (g * g - 1.0) / (g * (pf * pf - 1.0));
            assert!((r.ratio - closed).abs() < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn large_prime_ratio() {
        let r = omega_sq(1009, GreenMode::MainTerm).unwrap();
        assert!((r.ratio - 1.0).abs() < 0.10);
    }

    #[test]
    fn scan_rows() {
        let s = scan(11, 199, GreenMode::MainTerm).unwrap();
        assert_eq!(s.rows[0], omega_sq(11, GreenMode::MainTerm).unwrap());
        assert_eq!(s.rows.len(), primes_between(11, 199).len());
        for r in &s.rows {
            if r.p >= 17 {
                assert!(r.ratio > 0.5 && r.ratio < 1.5, "p = {}", r.p);
            }
        }
        // The two smallest primes sit just below 1/2.
        assert!((s.rows[0].ratio - 0.4975).abs() < 1e-3);
        assert!((s.rows[1].ratio - 0.4945).abs() < 1e-3);
        assert_eq!(s.largest_residual.0, 13);
        assert!(matches!(scan(24, 28, GreenMode::MainTerm), Err(Error::EmptyRange(24, 28))));
        assert!(scan(5, 30, GreenMode::MainTerm).is_err());
    }

    #[test]
    fn residual_decreases_across_decades() {
        let r = |p| (omega_sq(p, GreenMode::MainTerm).unwrap().ratio - 1.0).abs();
        assert!(r(11) > r(101) && r(101) > r(1009));
    }
}
