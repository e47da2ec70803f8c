//! Reduction theory for `SL_2(Z)`-classes, fundamental units and stabilizers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::form::{transform, QuadForm, UnimodularMatrix};
use crate::{Error, Result};

/// Minimal positive solution of `x^2 - disc * y^2 = 4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PellSolution {
    #[serde(serialize_with = "crate::quadforms::form::ser_big_pub")]
    pub x: BigInt,
    #[serde(serialize_with = "crate::quadforms::form::ser_big_pub")]
    pub y: BigInt,
    pub disc: i64,
}

impl PellSolution {
    /// `ln((x + y sqrt(disc)) / 2)`, stable for large `x`.
    pub fn log_unit(&self) -> f64 {
        let lx = big_ln(&self.x);
        // eps = x (1 + sqrt(1 - 4/x^2)) / 2
        let xf = self.x.to_f64().unwrap_or(f64::INFINITY);
        let inv2 = if xf.is_finite() { 4.0 / (xf * xf) } else { 0.0 };
        lx + ((1.0 + (1.0 - inv2).sqrt()) / 2.0).ln()
    }
}

/// Natural log of a positive big integer.
pub(crate) fn big_ln(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    (n >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &r * &r == *n
    }
}

fn check_indefinite(phi: &QuadForm) -> Result<BigInt> {
    let d = phi.disc();
    if !d.is_positive() || is_square(&d) {
        return Err(Error::UnsupportedDiscriminant(d.to_i64().unwrap_or(i64::MAX)));
    }
    Ok(d)
}

fn check_definite(phi: &QuadForm) -> Result<()> {
    if !phi.disc().is_negative() || !phi.a.is_positive() {
        return Err(Error::Domain(format!("{phi} is not positive definite")));
    }
    Ok(())
}

/// Reduced positive definite form (`|b| <= a <= c`, `b >= 0` on the boundary) and `R`
/// with `phi o R` equal to it.
pub fn reduce_definite(phi: &QuadForm) -> Result<(QuadForm, UnimodularMatrix)> {
    check_definite(phi)?;
    let mut f = phi.untagged();
    let mut r = UnimodularMatrix::identity();
    let s = UnimodularMatrix::inversion();
    loop {
        // Bring b into (-a, a].
        let two_a = BigInt::from(2) * &f.a;
        let num: BigInt = &f.b + &f.a - 1;
        let k = -num.div_floor(&two_a);
        if !k.is_zero() {
            let t = UnimodularMatrix::translation(k);
            f = transform(&f, &t);
            r = r.mul(&t);
        }
        if f.c < f.a || (f.c == f.a && f.b.is_negative()) {
            f = transform(&f, &s);
            r = r.mul(&s);
            continue;
        }
        return Ok((f, r));
    }
}

/// Reducedness for indefinite forms: `|sqrt(D) - 2|a|| < b < sqrt(D)`.
fn is_reduced_indefinite(f: &QuadForm, s: &BigInt) -> bool {
    let two_a = BigInt::from(2) * f.a.abs();
    f.b.is_positive() && f.b <= *s && &two_a + &f.b > *s && &two_a - &f.b <= *s
}

/// One step `rho(a, b, c) = (c, r, (r^2 - D)/(4c))` and its matrix `[[0, -1], [1, t]]`.
fn rho(f: &QuadForm, d: &BigInt, s: &BigInt) -> (QuadForm, UnimodularMatrix) {
    let c_abs = f.c.abs();
    let two_c = BigInt::from(2) * &c_abs;
    // r = -b mod 2|c| lifted into the admissible window.
    let lo: BigInt = if c_abs <= *s {
        s - &two_c + 1
    } else {
        -&c_abs + 1
    };
    let off: BigInt = -&f.b - &lo;
    let r = &lo + off.mod_floor(&two_c);
    let t = (&r + &f.b) / (BigInt::from(2) * &f.c);
    let g = UnimodularMatrix::raw(Zero::zero(), -BigInt::one(), One::one(), t);
    let next = QuadForm::new(f.c.clone(), r.clone(), (&r * &r - d) / (BigInt::from(4) * &f.c));
    (next, g)
}

/// The reduced `rho`-cycle of an indefinite form, with the matrix reaching its first entry.
struct Cycle {
    forms: Vec<QuadForm>,
    /// `steps[i]` maps `forms[i]` to `forms[i + 1]` (cyclically).
    steps: Vec<UnimodularMatrix>,
    to_first: UnimodularMatrix,
}

fn cycle(phi: &QuadForm) -> Result<Cycle> {
    let d = check_indefinite(phi)?;
    let s = d.sqrt();
    let mut f = phi.untagged();
    let mut r = UnimodularMatrix::identity();
    while !is_reduced_indefinite(&f, &s) {
        let (g, m) = rho(&f, &d, &s);
        f = g;
        r = r.mul(&m);
    }
    let first = f.clone();
    let mut forms = vec![first.clone()];
    let mut steps = Vec::new();
    loop {
        let (g, m) = rho(&f, &d, &s);
        steps.push(m);
        if g == first {
            break;
        }
        forms.push(g.clone());
        f = g;
    }
    Ok(Cycle {
        forms,
        steps,
        to_first: r,
    })
}

/// Canonical representative of the `SL_2(Z)`-class of `phi` and `R` with `phi o R` equal to it.
///
/// Definite forms use the reduced form; indefinite forms the lexicographically least
/// entry of the reduced cycle.
pub fn canonical_form(phi: &QuadForm) -> Result<(QuadForm, UnimodularMatrix)> {
    let d = phi.disc();
    if d.is_negative() {
        return reduce_definite(phi);
    }
    let cyc = cycle(phi)?;
    let best = (0..cyc.forms.len())
        .min_by_key(|&i| cyc.forms[i].key())
        .expect("non-empty cycle");
    let mut r = cyc.to_first.clone();
    for m in &cyc.steps[..best] {
        r = r.mul(m);
    }
    Ok((cyc.forms[best].clone(), r))
}

/// Generator of the proper automorphs of an indefinite form, normalized to positive trace.
fn cycle_automorph(phi: &QuadForm) -> Result<UnimodularMatrix> {
    let cyc = cycle(phi)?;
    let mut u = UnimodularMatrix::identity();
    for m in &cyc.steps {
        u = u.mul(m);
    }
    // Conjugate back: phi o (R U R^{-1}) = phi.
    let r = &cyc.to_first;
    let mut g = r.mul(&u).mul(&r.inverse());
    if g.trace().is_negative() {
        g = g.neg();
    }
    Ok(g)
}

/// Minimal positive solution of `x^2 - disc y^2 = 4`, read off the principal cycle.
pub fn pell_min(disc: i64) -> Result<PellSolution> {
    let dd = BigInt::from(disc);
    if disc <= 0 || is_square(&dd) || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(Error::UnsupportedDiscriminant(disc));
    }
    let b0 = disc.rem_euclid(2);
    let principal = QuadForm::new(1, b0, (BigInt::from(b0 * b0) - &dd) / 4);
    let g = cycle_automorph(&principal)?;
    let x = g.trace();
    let y2: BigInt = (&x * &x - 4) / &dd;
    let y = y2.sqrt();
    debug_assert_eq!(&x * &x - &dd * &y * &y, BigInt::from(4));
    Ok(PellSolution { x, y, disc })
}

/// `U(x, y) = [[(x - y b)/2, -c y], [a y, (x + y b)/2]]` for the minimal solution of
/// `x^2 - D y^2 = 4`, `D = disc(phi)`.
///
/// `U` fixes `phi` and lies in `Gamma_0(N)` whenever `N | a`. For primitive forms it
/// generates `SL_2(Z)_phi` up to sign; for a form with content `g` it generates the
/// subgroup of automorphs `U'(x', y')` of the primitive part with `g | y'`.
pub fn stab_generator(phi: &QuadForm) -> Result<UnimodularMatrix> {
    let d = check_indefinite(phi)?;
    let dd = d.to_i64().ok_or(Error::UnsupportedDiscriminant(i64::MAX))?;
    let sol = pell_min(dd)?;
    let (x, y) = (&sol.x, &sol.y);
    let b = &phi.b;
    if (x - y * b).is_odd() {
        return Err(Error::ParityFailure {
            x: x.to_string(),
            y: y.to_string(),
            b: b.to_string(),
        });
    }
    let two = BigInt::from(2);
    Ok(UnimodularMatrix::raw(
        (x - y * b) / &two,
        -(&phi.c * y),
        &phi.a * y,
        (x + y * b) / &two,
    ))
}

/// Generator of `SL_2(Z)_phi / {+-1}` with positive trace, for any indefinite form.
pub fn sl2_stab_generator(phi: &QuadForm) -> Result<UnimodularMatrix> {
    cycle_automorph(phi)
}

/// Fundamental unit data of an indefinite form (via its primitive part).
pub fn fundamental_unit(phi: &QuadForm) -> Result<PellSolution> {
    let d = check_indefinite(phi)?;
    let g = phi.content();
    let dp = (&d / (&g * &g)).to_i64().ok_or(Error::UnsupportedDiscriminant(i64::MAX))?;
    pell_min(dp)
}

/// Automorphs of a reduced positive definite form; entries are bounded by 2 in absolute value.
pub(crate) fn definite_automorphs(reduced: &QuadForm) -> Vec<UnimodularMatrix> {
    let mut out = Vec::new();
    for x in -2i64..=2 {
        for y in -2i64..=2 {
            for z in -2i64..=2 {
                for t in -2i64..=2 {
                    if x * t - y * z != 1 {
                        continue;
                    }
                    let m = UnimodularMatrix::raw(x.into(), y.into(), z.into(), t.into());
                    if transform(reduced, &m) == *reduced {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// Order of `SL_2(Z)_Phi` for a positive definite form.
pub fn definite_stab_order(phi: &QuadForm) -> Result<usize> {
    let (r, _) = reduce_definite(phi)?;
    Ok(definite_automorphs(&r).len())
}

/// `|SL_2(Z)_Phi|` for the discriminants `-3` and `-4`.
pub fn stab_order_definite(disc: i64) -> Result<usize> {
    let f = match disc {
        -4 => QuadForm::new(1, 0, 1),
        -3 => QuadForm::new(1, 1, 1),
        _ => return Err(Error::UnsupportedDiscriminant(disc)),
    };
    definite_stab_order(&f)
}

/// All `SL_2(Z)`-classes of discriminant `disc` (positive definite only when `disc < 0`),
/// as canonical representatives in increasing order.
pub fn sl2_classes(disc: i64) -> Result<Vec<QuadForm>> {
    if !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(Error::UnsupportedDiscriminant(disc));
    }
    let mut reps = Vec::new();
    if disc < 0 {
        let n = -disc;
        let mut a = 1i64;
        while 3 * a * a <= n {
            for b in -a..=a {
                let num = b * b - disc;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a || ((b < 0) && (b.abs() == a || a == c)) {
                    continue;
                }
                reps.push(QuadForm::new(a, b, c));
            }
            a += 1;
        }
    } else {
        let dd = BigInt::from(disc);
        if is_square(&dd) || disc == 0 {
            return Err(Error::UnsupportedDiscriminant(disc));
        }
        let s = dd.sqrt().to_i64().expect("small");
        let mut seen = std::collections::BTreeSet::new();
        for b in 1..=s {
            if (b * b - disc) % 4 != 0 {
                continue;
            }
            let ac = (b * b - disc) / 4;
            // ac < 0; enumerate divisors a of |ac| with both signs.
            for a_abs in 1..=ac.abs() {
                if ac % a_abs != 0 {
                    continue;
                }
                for a in [a_abs, -a_abs] {
                    let f = QuadForm::new(a, b, ac / a);
                    if !is_reduced_indefinite(&f, &BigInt::from(s)) {
                        continue;
                    }
                    let (canon, _) = canonical_form(&f)?;
                    if seen.insert(canon.key()) {
                        reps.push(canon);
                    }
                }
            }
        }
    }
    reps.sort_by_key(|f| f.key());
    Ok(reps)
}
