use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::{Error, Result};

pub(crate) fn ser_big_pub<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    ser_big(v, s)
}

fn ser_big<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_opt_big<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(n) => s.serialize_str(&n.to_string()),
        None => s.serialize_none(),
    }
}

/// Binary quadratic form `a x^2 + b x y + c y^2`, optionally tagged with a level `N | a`.
/// Equality and hashing look at the coefficients only.
#[derive(Clone, Serialize)]
pub struct QuadForm {
    #[serde(serialize_with = "ser_big")]
    pub a: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub b: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub c: BigInt,
    #[serde(serialize_with = "ser_opt_big")]
    level: Option<BigInt>,
}

impl QuadForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        QuadForm {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            level: None,
        }
    }

    /// Form tagged with level `n`; fails unless `n | a`.
    pub fn with_level(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        n: impl Into<BigInt>,
    ) -> Result<Self> {
        let f = QuadForm::new(a, b, c);
        f.at_level(n)
    }

    pub fn at_level(mut self, n: impl Into<BigInt>) -> Result<Self> {
        let n = n.into();
        if !n.is_positive() || !self.a.is_multiple_of(&n) {
            return Err(Error::Divisibility(format!("level {n} does not divide a = {}", self.a)));
        }
        self.level = Some(n);
        Ok(self)
    }

    pub fn level(&self) -> Option<&BigInt> {
        self.level.as_ref()
    }

    pub fn untagged(&self) -> Self {
        QuadForm::new(self.a.clone(), self.b.clone(), self.c.clone())
    }

    pub fn disc(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Integer-linear scaling `k * Phi`.
    pub fn scaled(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        QuadForm::new(&self.a * &k, &self.b * &k, &self.c * &k)
    }

    pub fn coeffs(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c)
    }

    pub(crate) fn key(&self) -> (BigInt, BigInt, BigInt) {
        (self.a.clone(), self.b.clone(), self.c.clone())
    }
}

impl PartialEq for QuadForm {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && self.c == o.c
    }
}

impl Eq for QuadForm {}

impl std::hash::Hash for QuadForm {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        (&self.a, &self.b, &self.c).hash(h);
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

impl fmt::Debug for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.level {
            Some(n) => write!(f, "{self}@{n}"),
            None => write!(f, "{self}"),
        }
    }
}

/// Integer matrix `[[x, y], [z, t]]` of determinant one.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct UnimodularMatrix {
    #[serde(serialize_with = "ser_big")]
    pub x: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub y: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub z: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub t: BigInt,
}

impl UnimodularMatrix {
    pub fn new(
        x: impl Into<BigInt>,
        y: impl Into<BigInt>,
        z: impl Into<BigInt>,
        t: impl Into<BigInt>,
    ) -> Result<Self> {
        let m = UnimodularMatrix {
            x: x.into(),
            y: y.into(),
            z: z.into(),
            t: t.into(),
        };
        let det = &m.x * &m.t - &m.y * &m.z;
        if det.is_one() {
            Ok(m)
        } else {
            Err(Error::Mismatch(format!("determinant {det} != 1")))
        }
    }

    pub(crate) fn raw(x: BigInt, y: BigInt, z: BigInt, t: BigInt) -> Self {
        debug_assert!((&x * &t - &y * &z).is_one());
        UnimodularMatrix { x, y, z, t }
    }

    pub fn identity() -> Self {
        Self::raw(One::one(), Zero::zero(), Zero::zero(), One::one())
    }

    pub fn neg_identity() -> Self {
        Self::raw(-BigInt::one(), Zero::zero(), Zero::zero(), -BigInt::one())
    }

    /// `[[1, k], [0, 1]]`.
    pub fn translation(k: impl Into<BigInt>) -> Self {
        Self::raw(One::one(), k.into(), Zero::zero(), One::one())
    }

    /// `[[0, -1], [1, 0]]`.
    pub fn inversion() -> Self {
        Self::raw(Zero::zero(), -BigInt::one(), One::one(), Zero::zero())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::raw(
            &self.x * &o.x + &self.y * &o.z,
            &self.x * &o.y + &self.y * &o.t,
            &self.z * &o.x + &self.t * &o.z,
            &self.z * &o.y + &self.t * &o.t,
        )
    }

    pub fn inverse(&self) -> Self {
        Self::raw(self.t.clone(), -&self.y, -&self.z, self.x.clone())
    }

    pub fn neg(&self) -> Self {
        Self::raw(-&self.x, -&self.y, -&self.z, -&self.t)
    }

    pub fn trace(&self) -> BigInt {
        &self.x + &self.t
    }

    pub fn in_gamma0(&self, n: &BigInt) -> bool {
        self.z.is_multiple_of(n)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.x, self.y, self.z, self.t)
    }
}

impl fmt::Debug for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Right action `(Phi o delta)(v) = Phi(delta v)`.
///
/// The level tag survives exactly when `delta` lies in `Gamma_0(N)`.
pub fn transform(phi: &QuadForm, d: &UnimodularMatrix) -> QuadForm {
    let two = BigInt::from(2);
    let a = phi.eval(&d.x, &d.z);
    let b = &phi.b * (&d.x * &d.t + &d.y * &d.z) + two * (&phi.a * &d.x * &d.y + &phi.c * &d.z * &d.t);
    let c = phi.eval(&d.y, &d.t);
    let level = phi.level.as_ref().filter(|n| d.in_gamma0(n)).cloned();
    QuadForm { a, b, c, level }
}

/// `gamma = [[a, b], [c, d]] in Gamma_0(N)` to the form `[c, d - a, -b]` of level `N`.
pub fn form_of_matrix(g: &UnimodularMatrix, n: impl Into<BigInt>) -> Result<QuadForm> {
    let n = n.into();
    if !g.in_gamma0(&n) {
        return Err(Error::Divisibility(format!("{n} does not divide lower-left entry {}", g.z)));
    }
    QuadForm::with_level(g.z.clone(), &g.t - &g.x, -&g.y, n)
}

/// Inverse of [`form_of_matrix`]: `[a, b, c]` to `[[(l-b)/2, -c], [a, (l+b)/2]]`.
pub fn matrix_of_form(phi: &QuadForm, l: i64, n: impl Into<BigInt>) -> Result<UnimodularMatrix> {
    let n = n.into();
    let l = BigInt::from(l);
    let expected = &l * &l - 4;
    if phi.disc() != expected {
        return Err(Error::Mismatch(format!(
            "disc {} of {phi} is not l^2 - 4 = {expected}",
            phi.disc()
        )));
    }
    if !phi.a.is_multiple_of(&n) {
        return Err(Error::Divisibility(format!("{n} does not divide a = {}", phi.a)));
    }
    // b and l have the same parity because b^2 = l^2 - 4ac - 4.
    let two = BigInt::from(2);
    Ok(UnimodularMatrix::raw(
        (&l - &phi.b) / &two,
        -&phi.c,
        phi.a.clone(),
        (&l + &phi.b) / &two,
    ))
}

/// `[N a, b, c] -> [d a, b, (N/d) c]` from level `N` to level `d`.
pub fn star_d(phi: &QuadForm, d: u64, n: u64) -> Result<QuadForm> {
    if d == 0 || n % d != 0 {
        return Err(Error::Divisibility(format!("{d} does not divide {n}")));
    }
    let nb = BigInt::from(n);
    if !phi.a.is_multiple_of(&nb) {
        return Err(Error::Divisibility(format!("{n} does not divide a = {}", phi.a)));
    }
    let a = &phi.a / &nb * d;
    QuadForm::with_level(a, phi.b.clone(), &phi.c * (n / d), d)
}
