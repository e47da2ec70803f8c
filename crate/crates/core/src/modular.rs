//! Level bookkeeping for `Gamma_0(p^2)`.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::numerics::Rat;
use crate::{Error, Result};

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub(crate) fn require_prime_at_least(p: u64, min: u64, reason: &'static str) -> Result<()> {
    require_prime(p)?;
    if p < min {
        return Err(Error::PrimeOutOfRange { p, reason });
    }
    Ok(())
}

/// The constant `c` in `g = 1 + ((p+1)(p-6) - 12c)/12`, by `p mod 12`.
pub fn c_of(p: u64) -> Result<Rat> {
    require_prime_at_least(p, 5, "genus formula needs p >= 5")?;
    Ok(match p % 12 {
        1 => Rat::new(7, 6),
        5 => Rat::new(1, 2),
        7 => Rat::new(2, 3),
        11 => Rat::zero(),
        _ => unreachable!("primes >= 5 are 1, 5, 7 or 11 mod 12"),
    })
}

/// Genus of `X_0(p^2)`.
pub fn genus(p: u64) -> Result<u64> {
    let c = c_of(p)?;
    let pi = p as i64;
    let g = Rat::one() + (Rat::int((pi + 1) * (pi - 6)) - Rat::int(12) * c) / Rat::int(12);
    g.to_i64()
        .and_then(|g| u64::try_from(g).ok())
        .ok_or_else(|| Error::Domain(format!("genus for p = {p} is not a non-negative integer")))
}

/// A cusp of `X_0(p^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cusp {
    Infinity,
    Zero,
    /// `1/(k p)` for `1 <= k <= p-1`.
    InvMultipleOfP(u64),
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cusp::Infinity => write!(f, "inf"),
            Cusp::Zero => write!(f, "0"),
            Cusp::InvMultipleOfP(kp) => write!(f, "1/{kp}"),
        }
    }
}

/// The `p + 1` cusps `inf, 0, 1/p, 1/(2p), ..., 1/((p-1)p)`.
pub fn cusps(p: u64) -> Result<Vec<Cusp>> {
    require_prime(p)?;
    let mut out = vec![Cusp::Infinity, Cusp::Zero];
    out.extend((1..p).map(|k| Cusp::InvMultipleOfP(k * p)));
    Ok(out)
}

/// Hyperbolic volume `(pi/3) p (p+1)`.
pub fn volume(p: u64) -> Result<f64> {
    require_prime(p)?;
    Ok(PI / 3.0 * p as f64 * (p as f64 + 1.0))
}

/// `[SL_2(Z) : Gamma_0(p^2)] = p (p+1)`.
pub fn index(p: u64) -> Result<u64> {
    require_prime(p)?;
    Ok(p * (p + 1))
}

/// All level data of `X_0(p^2)` for `p >= 7`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveLevel {
    pub p: u64,
    pub n: u64,
    pub residue: u64,
    pub c: Rat,
    pub genus: u64,
    pub volume: f64,
    pub index: u64,
}

impl CurveLevel {
    pub fn new(p: u64) -> Result<Self> {
        require_prime_at_least(p, 7, "X_0(p^2) data needs p >= 7")?;
        Ok(CurveLevel {
            p,
            n: p * p,
            residue: p % 12,
            c: c_of(p)?,
            genus: genus(p)?,
            volume: volume(p)?,
            index: index(p)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Genus from the residue-class formulas, `p = 12k + r`.
    fn genus_by_case(p: u64) -> u64 {
        let k = p / 12;
        match p % 12 {
            1 => 12 * k * k - 3 * k - 1,
            5 => 12 * k * k + 5 * k,
            7 => 12 * k * k + 9 * k + 1,
            11 => 12 * k * k + 17 * k + 6,
            _ => unreachable!(),
        }
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..50).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2,3,5,7
        assert!(!is_prime(12));
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus(13).unwrap(), 8);
        assert_eq!(genus(11).unwrap(), 6);
        assert_eq!(genus(23).unwrap(), 35);
        assert_eq!(genus(5).unwrap(), 0);
        assert_eq!(genus(7).unwrap(), 1);
        assert_eq!(genus(12), Err(Error::NotPrime(12)));
        assert!(matches!(genus(3), Err(Error::PrimeOutOfRange { .. })));
    }

    /// Solving the two genus formulas for `c` gives the frozen residue table.
    #[test]
    fn c_table_matches_case_formulas() {
        for p in primes_between(5, 500) {
            let g = genus_by_case(p) as i64;
            let pi = p as i64;
            let c = Rat::new((pi + 1) * (pi - 6) - 12 * (g - 1), 12);
            assert_eq!(c_of(p).unwrap(), c, "p = {p}");
        }
        assert_eq!(c_of(11).unwrap(), Rat::zero());
        assert_eq!(c_of(13).unwrap(), Rat::new(7, 6));
        assert_eq!(c_of(19).unwrap(), Rat::new(2, 3));
        assert_eq!(c_of(17).unwrap(), Rat::new(1, 2));
    }

    #[test]
    fn genus_identity_exact() {
        for p in primes_between(7, 500) {
            let g = genus(p).unwrap();
            assert_eq!(g, genus_by_case(p));
            let pi = p as i64;
            let lhs = Rat::int(12 * (g as i64 - 1));
            let rhs = Rat::int((pi + 1) * (pi - 6)) - Rat::int(12) * c_of(p).unwrap();
            assert_eq!(lhs, rhs);
            if p >= 11 {
                assert!(g > 1);
            }
        }
    }

    #[test]
    fn cusps_volume_index() {
        assert_eq!(cusps(5).unwrap().len(), 6);
        assert_eq!(cusps(7).unwrap().len(), 8);
        let c11 = cusps(11).unwrap();
        assert!(c11.contains(&Cusp::Infinity) && c11.contains(&Cusp::Zero));
        assert_eq!(c11[2].to_string(), "1/11");
        for p in primes_between(2, 100) {
            assert_eq!(cusps(p).unwrap().len() as u64, p + 1);
        }
        assert!((volume(11).unwrap() - 44.0 * PI).abs() < 1e-12);
        assert!((volume(11).unwrap() - 138.230_076_8).abs() < 1e-7);
        assert_eq!(index(13).unwrap(), 182);
        let ratio = volume(13).unwrap() / genus(13).unwrap() as f64;
        assert!(ratio.is_finite() && ratio > 0.0);
    }

    #[test]
    fn curve_level_bundle() {
        let l = CurveLevel::new(13).unwrap();
        assert_eq!((l.n, l.residue, l.genus, l.index), (169, 1, 8, 182));
        assert!(CurveLevel::new(5).is_err());
    }
}
