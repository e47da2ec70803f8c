//! Invariant suites behind `x0p2 verify`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt::Write as _;

use anyhow::{bail, Result};
use clap::ValueEnum;
use num_bigint::BigInt;
use serde::Serialize;
use x0p2::arakelov::check_dm_orthogonal;
use x0p2::eisenstein::{
    l_series, phi_closed, scattering_expansion, scattering_expansion_by_product, verify_es1,
    CuspPair, ParabolicLevel,
};
use x0p2::fiber::{canonical_degrees, derive_multiplicities, edixhoven_fiber, minimal_model};
use x0p2::modular::{genus, is_prime, volume};
use x0p2::numerics::{extrapolate_at_one, richardson, Cplx, Rat};
use x0p2::quadforms::{
    double_coset_classes, enumerate_classes, epstein_zeta_definite, epstein_zeta_fast, pell_min,
    residue_epstein, zeta_level_residue, zeta_level_value, QuadForm,
};

const PARABOLIC_REL: f64 = 1e-12;
const RESIDUE_TOL: f64 = 1e-8;
const CONSTANT_TOL: f64 = 1e-6;
const PRODUCT_REL: f64 = 1e-12;
const LEVEL_RESIDUE_REL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Eisenstein,
    Fiber,
    Quadforms,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub status: Status,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub detail: String,
}

/// Collects checks of one suite.
struct Log {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Log {
    fn push(&mut self, name: impl Into<String>, status: Status, residual: Option<f64>, tolerance: Option<f64>, detail: impl Into<String>) {
        self.checks.push(Check {
            suite: self.suite,
            name: name.into(),
            status,
            residual,
            tolerance,
            detail: detail.into(),
        });
    }

    fn exact(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(name, status, None, None, detail);
    }

    fn within(&mut self, name: impl Into<String>, residual: f64, tol: f64) {
        let status = if residual < tol { Status::Pass } else { Status::Fail };
        self.push(name, status, Some(residual), Some(tol), "");
    }

    fn error(&mut self, name: impl Into<String>, e: impl std::fmt::Display) {
        self.push(name, Status::Fail, None, None, e.to_string());
    }

    fn skip(&mut self, reason: &str) {
        self.push("suite", Status::Skip, None, None, reason);
    }
}

/// Settings shared by the suites.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Settings {
    pub prime: u64,
    /// Box bound for the lattice identity.
    pub lattice_bound: u64,
    /// Box bound for the class search.
    pub class_bound: u64,
    /// Tolerance of the lattice identity.
    pub precision: f64,
}

fn minimum_prime(suite: Suite) -> u64 {
    match suite {
        Suite::Eisenstein | Suite::All => 2,
        Suite::Quadforms => 5,
        Suite::Fiber => 7,
    }
}

fn label(suite: Suite) -> &'static str {
    match suite {
        Suite::Eisenstein => "eisenstein",
        Suite::Fiber => "fiber",
        Suite::Quadforms => "quadforms",
        Suite::All => "all",
    }
}

pub fn run(suite: Suite, s: &Settings) -> Result<Vec<Check>> {
    let p = s.prime;
    if !is_prime(p) {
        bail!("{p} is not prime");
    }
    if p < minimum_prime(suite) {
        bail!("suite {} needs p >= {}, got {p}", label(suite), minimum_prime(suite));
    }
    let suites = match suite {
        Suite::All => vec![Suite::Eisenstein, Suite::Fiber, Suite::Quadforms],
        one => vec![one],
    };
    let mut out = Vec::new();
    for one in suites {
        let mut log = Log {
            suite: label(one),
            checks: Vec::new(),
        };
        if p < minimum_prime(one) {
            log.skip(&format!("needs p >= {}", minimum_prime(one)));
        } else {
            match one {
                Suite::Eisenstein => eisenstein(&mut log, s),
                Suite::Fiber => fiber(&mut log, p),
                Suite::Quadforms => quadforms(&mut log, s),
                Suite::All => unreachable!("expanded above"),
            }
        }
        out.extend(log.checks);
    }
    Ok(out)
}

fn pair_label(pair: CuspPair) -> &'static str {
    match pair {
        CuspPair::InfInf => "inf,inf",
        CuspPair::InfZero => "inf,0",
    }
}

fn eisenstein(log: &mut Log, s: &Settings) {
    let p = s.prime;
    match verify_es1(Cplx::new(0.0, 1.0), 3.0, p, s.lattice_bound) {
        Ok(c) => {
            log.within("es1 residual at z = i, s = 3", c.residual, s.precision);
            log.within("es1 truncation budget", c.budget, s.precision);
        }
        Err(e) => log.error("es1 residual at z = i, s = 3", e),
    }

    let mut worst = 0f64;
    for x in [1.3, 1.7, 2.5] {
        let sc = Cplx::new(x, 0.0);
        match (l_series(ParabolicLevel::One, sc, p), l_series(ParabolicLevel::P, sc, p)) {
            (Ok(l1), Ok(lp)) => {
                let factor = ((2.0 * x * (p as f64).ln()).exp() - 1.0) / (p as f64 - 1.0);
                worst = worst.max((factor * lp - l1).norm() / l1.norm());
            }
            (Err(e), _) | (_, Err(e)) => return log.error("parabolic identity", e),
        }
    }
    log.within("parabolic identity L_1 = (p^2s-1)/(p-1) L_p", worst, PARABOLIC_REL);

    if p < 5 {
        log.push("scattering", Status::Skip, None, None, "needs p >= 5");
        return;
    }
    let v = volume(p).expect("prime checked");
    for pair in [CuspPair::InfInf, CuspPair::InfZero] {
        let name = pair_label(pair);
        let (closed, product) = match (scattering_expansion(pair, p), scattering_expansion_by_product(pair, p)) {
            (Ok(a), Ok(b)) => (a.piece, b.piece),
            (Err(e), _) | (_, Err(e)) => return log.error(format!("scattering {name}"), e),
        };
        let phi = |x: f64| phi_closed(pair, Cplx::new(x, 0.0), p).map_or(f64::NAN, |z| z.re);
        let (pole, constant) = extrapolate_at_one(phi, 0.05, 6);
        log.within(format!("phi_{name} residue = 1/v"), (pole - 1.0 / v).abs(), RESIDUE_TOL);
        log.within(format!("phi_{name} constant term"), (constant - closed.constant).abs(), CONSTANT_TOL);
        log.within(
            format!("phi_{name} closed vs product expansion"),
            (closed.constant - product.constant).abs() / closed.constant.abs(),
            PRODUCT_REL,
        );
    }
}

fn fiber(log: &mut Log, p: u64) {
    let f = match edixhoven_fiber(p) {
        Ok(f) => f,
        Err(e) => return log.error("fiber table", e),
    };
    let g = genus(p).expect("prime checked") as i64;
    log.exact("intersection matrix symmetric", f.is_symmetric(), "");
    log.exact("V.D = 0 for every component", f.fiber_products().iter().all(Rat::is_zero), "");
    match derive_multiplicities(&f.inter) {
        Ok(m) => log.exact("kernel spanned by multiplicities", m == f.multiplicities(), ""),
        Err(e) => log.error("kernel spanned by multiplicities", e),
    }
    match canonical_degrees(&f) {
        Ok(k) => {
            let sum: Rat = k.iter().zip(f.multiplicities()).map(|(a, m)| a * &m).sum();
            log.exact("adjunction sum = 2g-2", sum == Rat::int(2 * g - 2), format!("{sum} vs {}", 2 * g - 2));
        }
        Err(e) => log.error("adjunction sum = 2g-2", e),
    }
    let m = match minimal_model(&f) {
        Ok(m) => m,
        Err(e) => return log.error("minimal model", e),
    };
    let s = ((p * p - 1) / 24) as i64;
    log.exact(
        "minimal model matrix [[-s, s], [s, -s]]",
        m.fiber.integer_matrix() == Some(vec![vec![-s, s], vec![s, -s]]),
        format!("s = {s}, contracted {}", m.contracted.join(", ")),
    );
    let rows: Vec<&[Rat]> = m.pullback.rows.iter().map(|(_, v)| v.as_slice()).collect();
    let exceptional_zero = rows.iter().all(|v| {
        (2..f.len()).all(|x| {
            let mut e = vec![Rat::zero(); f.len()];
            e[x] = Rat::one();
            f.pair(v, &e).is_zero()
        })
    });
    log.exact("pullbacks orthogonal to contracted components", exceptional_zero, "");
    if rows.len() == 2 {
        let cross = f.pair(rows[0], rows[1]);
        log.exact("pullbacks meet in s_p", cross == Rat::int(s), cross.to_string());
    }
    if p >= 11 {
        match check_dm_orthogonal(p) {
            Ok(c) => {
                let cells: Vec<String> = c.products.iter().flatten().map(ToString::to_string).collect();
                log.exact("<D_m, C'> = 0", c.orthogonal(), cells.join(", "))
            }
            Err(e) => log.error("<D_m, C'> = 0", e),
        }
    }
}

fn legendre(a: i64, p: u64) -> i64 {
    let p = p as i64;
    let r = BigInt::from(a.rem_euclid(p)).modpow(&BigInt::from((p - 1) / 2), &BigInt::from(p));
    if r == BigInt::from(1) {
        1
    } else if r == BigInt::from(0) {
        0
    } else {
        -1
    }
}

fn brute_pell(d: i64) -> Option<(i64, i64)> {
    (1i64..=100_000).find_map(|y| {
        let x2 = 4 + d * y * y;
        let x = (x2 as f64).sqrt().round() as i64;
        (x * x == x2).then_some((x, y))
    })
}

fn quadforms(log: &mut Log, s: &Settings) {
    let p = s.prime;
    for (l, want) in [(0, 1 + legendre(-1, p)), (1, 1 + legendre(-3, p)), (-1, 1 + legendre(-3, p))] {
        let name = format!("class count l = {l}");
        let cosets = match double_coset_classes(l, p * p) {
            Ok(c) => c.len() as i64,
            Err(e) => {
                log.error(&name, e);
                continue;
            }
        };
        match enumerate_classes(l, p, s.class_bound) {
            Ok(c) => {
                let found = c.count() as i64;
                log.exact(name, found == want && cosets == want, format!("{found} found, {cosets} cosets, expected {want}"));
            }
            Err(e) => log.error(name, e),
        }
    }
    for d in [5i64, 12, 21] {
        let name = format!("Pell minimal solution, D = {d}");
        match (pell_min(d), brute_pell(d)) {
            (Ok(sol), Some((x, y))) => {
                let ok = sol.x == BigInt::from(x) && sol.y == BigInt::from(y);
                log.exact(name, ok, format!("({}, {})", sol.x, sol.y));
            }
            (Err(e), _) => log.error(name, e),
            (_, None) => log.error(name, "no brute-force solution"),
        }
    }
    let circle = QuadForm::new(1, 0, 1);
    match (epstein_zeta_fast(&circle, 2.0), epstein_zeta_definite(&circle, 2.0, 2000)) {
        (Ok(fast), Ok(boxed)) => {
            let r = (fast - boxed.value).abs();
            let status = if r <= boxed.tail_bound { Status::Pass } else { Status::Fail };
            log.push("Epstein [1,0,1] at s = 2 vs lattice sum", status, Some(r), Some(boxed.tail_bound), "");
        }
        (Err(e), _) | (_, Err(e)) => log.error("Epstein [1,0,1] at s = 2 vs lattice sum", e),
    }
    match residue_epstein(&circle) {
        Ok(r) => log.within("Epstein [1,0,1] residue = pi/4", (r - PI / 4.0).abs(), 1e-12),
        Err(e) => log.error("Epstein [1,0,1] residue = pi/4", e),
    }
    let name = "level zeta residue l = 0";
    match zeta_level_residue(0, p, s.class_bound) {
        Ok(res) => {
            let failure = RefCell::new(None);
            let value = |x: f64| {
                zeta_level_value(0, p, x, s.class_bound).unwrap_or_else(|e| {
                    failure.borrow_mut().get_or_insert(e.to_string());
                    f64::NAN
                })
            };
            // Values exist only for s > 1, so the pole comes from one side.
            let pole = richardson(|h| h * value(1.0 + h), 0.02, 5, 1);
            match failure.into_inner() {
                Some(e) => log.error(name, e),
                None => {
                    // No l = 0 classes when p = 3 mod 4; the function then vanishes.
                    let scale = if res == 0.0 { 1.0 } else { res.abs() };
                    log.within(name, (pole - res).abs() / scale, LEVEL_RESIDUE_REL)
                }
            }
        }
        Err(e) => log.error(name, e),
    }
}

pub fn summary(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        let status = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        let _ = write!(s, "{status} [{}] {}", c.suite, c.name);
        if let (Some(r), Some(t)) = (c.residual, c.tolerance) {
            let _ = write!(s, ": residual {r:e} (tolerance {t:e})");
        }
        if !c.detail.is_empty() {
            let _ = write!(s, " ({})", c.detail);
        }
        s.push('\n');
    }
    let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
    let _ = writeln!(s, "{} checks, {failed} failed", checks.len());
    s
}
