use serde::Serialize;

use super::special::stieltjes_gamma1;
use super::EULER_GAMMA;
use crate::{Error, Result};

const EXACT: i8 = i8::MAX;

/// Truncated Laurent expansion at `s = 1`:
/// `pole/(s-1) + constant + linear (s-1) + O((s-1)^{order+1})`.
///
/// `order` is the highest power of `(s-1)` whose coefficient is exact
/// (`i8::MAX` for exact constants).
/// When `order < 1` the stored `linear` is meaningless and reads as zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaurentPiece {
    pub pole: f64,
    pub constant: f64,
    linear: f64,
    pub order: i8,
}

impl LaurentPiece {
    pub fn new(pole: f64, constant: f64, linear: f64) -> Self {
        LaurentPiece {
            pole,
            constant,
            linear,
            order: 1,
        }
    }

    /// Piece known only through the constant term.
    pub fn through_constant(pole: f64, constant: f64) -> Self {
        LaurentPiece {
            pole,
            constant,
            linear: 0.0,
            order: 0,
        }
    }

    /// An exact constant: every higher coefficient is zero.
    pub fn constant_series(c: f64) -> Self {
        LaurentPiece {
            pole: 0.0,
            constant: c,
            linear: 0.0,
            order: EXACT,
        }
    }

    pub fn linear(&self) -> Option<f64> {
        (self.order >= 1).then_some(self.linear)
    }

    fn lowest_power(&self) -> i8 {
        if self.pole != 0.0 {
            -1
        } else {
            0
        }
    }

    /// Evaluate the truncated expansion at `s = 1 + h`.
    pub fn eval(&self, h: f64) -> f64 {
        let lin = self.linear().unwrap_or(0.0);
        self.pole / h + self.constant + lin * h
    }
}

/// Cauchy product of two pieces, tracking how far the result is exact.
pub fn laurent_mul(x: &LaurentPiece, y: &LaurentPiece) -> Result<LaurentPiece> {
    if x.pole != 0.0 && y.pole != 0.0 {
        return Err(Error::DoublePole);
    }
    let order = (x.order + y.lowest_power())
        .min(y.order + x.lowest_power())
        .min(1);
    let pole = x.pole * y.constant + x.constant * y.pole;
    let constant = x.pole * y.linear + x.constant * y.constant + x.linear * y.pole;
    // The (s-1)^1 coefficient would need order-2 data whenever a pole is present.
    let linear = if order >= 1 {
        x.constant * y.linear + x.linear * y.constant
    } else {
        0.0
    };
    let (pole_ok, const_ok) = (order >= -1, order >= 0);
    let order = if x.order == EXACT && y.order == EXACT {
        EXACT
    } else {
        order
    };
    Ok(LaurentPiece {
        pole: if pole_ok { pole } else { 0.0 },
        constant: if const_ok { constant } else { 0.0 },
        linear,
        order,
    })
}

/// `zeta(2s-1) = 1/(2(s-1)) + gamma_EM - 2 gamma_1 (s-1) + O((s-1)^2)`.
pub fn zeta_2sm1_laurent() -> LaurentPiece {
    LaurentPiece::new(0.5, EULER_GAMMA, -2.0 * stieltjes_gamma1())
}

/// Pole and constant term at `s = 1` of `f`, extrapolated from samples at `1 +- h`.
///
/// `h f(1 + h)` tends to the pole with an error linear in `h`; the symmetric mean
/// `(f(1 + h) + f(1 - h)) / 2` tends to the constant with an error even in `h`.
pub fn extrapolate_at_one(f: impl Fn(f64) -> f64, h0: f64, levels: usize) -> (f64, f64) {
    let pole = richardson(|h| h * f(1.0 + h), h0, levels, 1);
    let constant = richardson(|h| 0.5 * (f(1.0 + h) + f(1.0 - h)), h0, levels, 2);
    (pole, constant)
}

/// Richardson extrapolation to `h = 0` of `g(h0 / 2^k)`, `k < levels`, for an error
/// expansion in powers of `h^q`.
pub fn richardson(g: impl Fn(f64) -> f64, h0: f64, levels: usize, q: i32) -> f64 {
    assert!(levels > 0, "at least one sample");
    let mut t: Vec<f64> = (0..levels).map(|k| g(h0 / 2f64.powi(k as i32))).collect();
    for j in 1..levels {
        let w = 2f64.powi(q * j as i32);
        for k in (j..levels).rev() {
            t[k] = (w * t[k] - t[k - 1]) / (w - 1.0);
        }
    }
    t[levels - 1]
}
