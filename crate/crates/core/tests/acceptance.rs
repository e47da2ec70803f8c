//! One pass/fail line per acceptance criterion. Exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use x0p2::arakelov::{check_dm_orthogonal, omega_sq, scan, GreenMode};
use x0p2::eisenstein::{
    l_series, phi_closed, scattering_expansion, totient_sieve, verify_es1, CuspPair,
    ParabolicLevel,
};
use x0p2::fiber::{canonical_degrees, edixhoven_fiber, kernel, minimal_model};
use x0p2::modular::{genus, primes_between, volume};
use x0p2::numerics::{Cplx, Neumaier, Rat};
use x0p2::quadforms::{
    default_class_bound, double_coset_classes, enumerate_classes, epstein_zeta_fast, pell_min,
    residue_epstein, QuadForm,
};

const ES1_RESIDUAL: f64 = 1e-6;
const ES1_SECONDS: u64 = 10;
const RESIDUE_TOL: f64 = 1e-8;
const CONSTANT_TOL: f64 = 1e-6;
const PARABOLIC_REL: f64 = 1e-12;
const FIBER_SECONDS: u64 = 1;
const EPSTEIN_TOL: f64 = 1e-8;
const RESIDUE_EPSTEIN_TOL: f64 = 1e-12;
const RATIO_BAND: (f64, f64) = (0.85, 1.15);
const SCAN_SECONDS: u64 = 30;
const SPLIT_REL: f64 = 0.15;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Richardson extrapolation to `h = 0` of samples at `h0 / 2^k`, error order `h^q`.
fn richardson(f: impl Fn(f64) -> f64, h0: f64, levels: usize, q: i32) -> f64 {
    let mut t: Vec<f64> = (0..levels).map(|k| f(h0 / 2f64.powi(k as i32))).collect();
    for j in 1..levels {
        let w = 2f64.powi(q * j as i32);
        for k in (j..levels).rev() {
            t[k] = (w * t[k] - t[k - 1]) / (w - 1.0);
        }
    }
    t[levels - 1]
}

fn phi(pair: CuspPair, s: f64, p: u64) -> f64 {
    phi_closed(pair, Cplx::new(s, 0.0), p).unwrap().re
}

fn pair_name(pair: CuspPair) -> &'static str {
    match pair {
        CuspPair::InfInf => "inf,inf",
        CuspPair::InfZero => "inf,0",
    }
}

fn es1_identity() -> Outcome {
    let mut worst = 0f64;
    let mut slowest = Duration::ZERO;
    for p in [3u64, 5, 7] {
        let t = Instant::now();
        let c = match verify_es1(Cplx::new(0.0, 1.0), 3.0, p, 300) {
            Ok(c) => c,
            Err(e) => return outcome(false, format!("p={p}: {e}")),
        };
        slowest = slowest.max(t.elapsed());
        if c.budget >= ES1_RESIDUAL {
            return outcome(false, format!("p={p}: truncation budget {:e}", c.budget));
        }
        worst = worst.max(c.residual);
    }
    outcome(
        worst < ES1_RESIDUAL && slowest < Duration::from_secs(ES1_SECONDS),
        format!("max residual {worst:e}, slowest {:.2}s", slowest.as_secs_f64()),
    )
}

fn scattering_residue() -> Outcome {
    let mut worst = 0f64;
    for p in [5u64, 7, 11, 13] {
        let target = 1.0 / volume(p).unwrap();
        for pair in [CuspPair::InfInf, CuspPair::InfZero] {
            let r = richardson(|h| h * phi(pair, 1.0 + h, p), 0.05, 6, 1);
            worst = worst.max((r - target).abs());
        }
    }
    outcome(worst < RESIDUE_TOL, format!("max |res - 1/v| {worst:e}"))
}

fn scattering_constant() -> Outcome {
    let mut worst = 0f64;
    for p in [5u64, 11] {
        for pair in [CuspPair::InfInf, CuspPair::InfZero] {
            let symbolic = scattering_expansion(pair, p).unwrap().piece.constant;
            // The pole cancels in the symmetric mean; the error is even in h.
            let numeric = richardson(|h| 0.5 * (phi(pair, 1.0 + h, p) + phi(pair, 1.0 - h, p)), 0.05, 5, 2);
            let err = (numeric - symbolic).abs();
            if err >= CONSTANT_TOL {
                return outcome(false, format!("p={p} {}: {numeric} vs {symbolic}", pair_name(pair)));
            }
            worst = worst.max(err);
        }
    }
    outcome(true, format!("max |C_num - C_sym| {worst:e}"))
}

/// `sum_{c <= c_max, p | c} phi(c) c^{-2s}` with its tail bound.
fn parabolic_direct(s: f64, p: u64, phi_table: &[u32]) -> (f64, f64) {
    let c_max = (phi_table.len() - 1) as u64;
    let acc: Neumaier = (1..=c_max / p)
        .rev()
        .map(|k| phi_table[(p * k) as usize] as f64 * ((p * k) as f64).powf(-2.0 * s))
        .collect();
    (acc.total(), (c_max as f64).powf(2.0 - 2.0 * s) / (2.0 * s - 2.0))
}

fn parabolic_identity() -> Outcome {
    let phi_table = totient_sieve(1_000_000);
    let mut worst = 0f64;
    for s in [1.3, 1.7, 2.5] {
        for p in [5u64, 7, 11] {
            let sc = Cplx::new(s, 0.0);
            let l1 = l_series(ParabolicLevel::One, sc, p).unwrap().re;
            let lp = l_series(ParabolicLevel::P, sc, p).unwrap().re;
            let pf = p as f64;
            let rel = ((pf.powf(2.0 * s) - 1.0) / (pf - 1.0) * lp - l1).abs() / l1.abs();
            worst = worst.max(rel);
            let (direct, tail) = parabolic_direct(s, p, &phi_table);
            if (lp - direct).abs() > tail + 1e-15 {
                return outcome(false, format!("s={s} p={p}: L_p off its direct sum"));
            }
        }
    }
    outcome(worst < PARABOLIC_REL, format!("max relative error {worst:e}"))
}

fn fiber_exactness() -> Outcome {
    let t = Instant::now();
    for p in [13u64, 17, 19, 23] {
        let f = edixhoven_fiber(p).unwrap();
        if !f.fiber_products().iter().all(Rat::is_zero) {
            return outcome(false, format!("p={p}: V.D != 0"));
        }
        let ker = kernel(&f.inter);
        let m = f.multiplicities();
        let proportional = ker.len() == 1 && {
            let k = &ker[0];
            let i = k.iter().position(|x| !x.is_zero()).unwrap();
            let scale = &m[i] / &k[i];
            k.iter().zip(&m).all(|(a, b)| &(a * &scale) == b)
        };
        if !proportional {
            return outcome(false, format!("p={p}: kernel is not span(V)"));
        }
        let g = genus(p).unwrap() as i64;
        let sum: Rat = canonical_degrees(&f)
            .unwrap()
            .iter()
            .zip(&m)
            .map(|(k, m)| k * m)
            .sum();
        if sum != Rat::int(2 * g - 2) {
            return outcome(false, format!("p={p}: adjunction sum {sum} != {}", 2 * g - 2));
        }
    }
    let dt = t.elapsed();
    outcome(
        dt < Duration::from_secs(FIBER_SECONDS),
        format!("p in 13,17,19,23 exact, {:.3}s", dt.as_secs_f64()),
    )
}

/// Pullback of `C20'` to the original fiber, written out by `p mod 12`.
fn expected_pullback(p: i64) -> Vec<Rat> {
    let (e, f) = match p % 12 {
        1 => (Rat::new(p - 1, 4), Rat::new(p - 1, 6)),
        5 => (Rat::new(p - 1, 4), Rat::new(p + 1, 6)),
        7 => (Rat::new(p + 1, 4), Rat::new(p - 1, 6)),
        _ => (Rat::new(p + 1, 4), Rat::new(p + 1, 6)),
    };
    vec![Rat::one(), Rat::zero(), Rat::new(p - 1, 2), e, f]
}

fn minimal_model_shape() -> Outcome {
    let primes = primes_between(7, 200);
    for &p in &primes {
        let m = match minimal_model(&edixhoven_fiber(p).unwrap()) {
            Ok(m) => m,
            Err(e) => return outcome(false, format!("p={p}: {e}")),
        };
        let s = ((p * p - 1) / 24) as i64;
        if m.fiber.integer_matrix() != Some(vec![vec![-s, s], vec![s, -s]]) {
            return outcome(false, format!("p={p}: matrix {:?}", m.fiber.inter));
        }
        let want = expected_pullback(p as i64);
        let mut mirrored = want.clone();
        mirrored.swap(0, 1);
        let c20 = &m.fiber.components[0].pullback;
        let c02 = &m.fiber.components[1].pullback;
        if c20 != &want || c02 != &mirrored {
            return outcome(false, format!("p={p}: pullbacks differ"));
        }
    }
    outcome(true, format!("{} primes in [7, 200]", primes.len()))
}

fn divisor_orthogonality() -> Outcome {
    let primes = primes_between(11, 200);
    for &p in &primes {
        match check_dm_orthogonal(p) {
            Ok(c) if c.orthogonal() => {}
            Ok(c) => return outcome(false, format!("p={p}: products {:?}", c.products)),
            Err(e) => return outcome(false, format!("p={p}: {e}")),
        }
    }
    outcome(true, format!("{} primes in [11, 200]", primes.len()))
}

fn legendre(a: i64, p: i64) -> i64 {
    let r = BigInt::from(a.rem_euclid(p)).modpow(&BigInt::from((p - 1) / 2), &BigInt::from(p));
    if r == BigInt::from(1) {
        1
    } else if r == BigInt::from(0) {
        0
    } else {
        -1
    }
}

fn brute_pell(d: i64) -> (i64, i64) {
    (1i64..)
        .find_map(|y| {
            let x2 = 4 + d * y * y;
            let x = (x2 as f64).sqrt().round() as i64;
            (x * x == x2).then_some((x, y))
        })
        .unwrap()
}

/// `(1/4) sum' (m^2 + n^2)^{-2}` as a row sum over `m` using
/// `sum_n (m^2 + n^2)^{-2} = pi/(2 m^3) coth(pi m) + pi^2/(2 m^2 sinh^2(pi m))`.
fn circle_double_sum() -> f64 {
    const APERY: f64 = 1.202_056_903_159_594_3;
    let zeta4 = PI.powi(4) / 90.0;
    let mut rows = PI / 2.0 * APERY;
    for m in (1..=40).rev() {
        let m = m as f64;
        let x = PI * m;
        rows += PI / 2.0 * (2.0 / (2.0 * x).exp_m1()) / m.powi(3)
            + PI * PI / (2.0 * m * m * x.sinh().powi(2));
    }
    (2.0 * zeta4 + 2.0 * rows) / 4.0
}

fn quadform_oracles() -> Outcome {
    for p in primes_between(5, 23) {
        let pi = p as i64;
        for (l, want) in [(0, 1 + legendre(-1, pi)), (1, 1 + legendre(-3, pi)), (-1, 1 + legendre(-3, pi))] {
            let cosets = double_coset_classes(l, p * p).unwrap().len() as i64;
            let found = match enumerate_classes(l, p, default_class_bound(p)) {
                Ok(c) => c.count() as i64,
                Err(e) => return outcome(false, format!("l={l} p={p}: {e}")),
            };
            if cosets != want || found != want {
                return outcome(false, format!("l={l} p={p}: {found}/{cosets} classes, want {want}"));
            }
        }
    }
    for d in [5i64, 12, 21] {
        let s = pell_min(d).unwrap();
        let (x, y) = brute_pell(d);
        if (s.x.clone(), s.y.clone()) != (BigInt::from(x), BigInt::from(y)) {
            return outcome(false, format!("pell {d}: ({}, {}) vs ({x}, {y})", s.x, s.y));
        }
    }
    let circle = QuadForm::new(1, 0, 1);
    let fast = epstein_zeta_fast(&circle, 2.0).unwrap();
    let oracle = circle_double_sum();
    let res = residue_epstein(&circle).unwrap();
    let pass = (fast - oracle).abs() < EPSTEIN_TOL && (res - PI / 4.0).abs() < RESIDUE_EPSTEIN_TOL;
    outcome(
        pass,
        format!("classes p in [5, 23], pell 5/12/21, |zeta - oracle| {:e}, residue {res}", (fast - oracle).abs()),
    )
}

fn asymptotic_convergence() -> Outcome {
    let t = Instant::now();
    let sc = match scan(11, 5000, GreenMode::MainTerm) {
        Ok(s) => s,
        Err(e) => return outcome(false, e.to_string()),
    };
    let dt = t.elapsed();
    let outside: Vec<u64> = sc
        .rows
        .iter()
        .filter(|r| r.p >= 500 && !(RATIO_BAND.0..=RATIO_BAND.1).contains(&r.ratio))
        .map(|r| r.p)
        .collect();
    let decades: Vec<f64> = [(11, 100), (101, 1000), (1001, 5000)]
        .iter()
        .map(|&(lo, hi)| sc.max_residual_in(lo, hi).unwrap())
        .collect();
    let monotone = decades.windows(2).all(|w| w[1] <= w[0]);
    outcome(
        outside.is_empty() && monotone && dt < Duration::from_secs(SCAN_SECONDS),
        format!(
            "{} primes outside band, decade maxima {:.4}/{:.4}/{:.4}, {:.2}s",
            outside.len(),
            decades[0],
            decades[1],
            decades[2],
            dt.as_secs_f64()
        ),
    )
}

fn constituent_split() -> Outcome {
    let mut worst = (0f64, 0f64);
    for p in primes_between(500, 5000) {
        let r = omega_sq(p, GreenMode::MainTerm).unwrap();
        let scale = r.g as f64 * (p as f64).ln();
        worst.0 = worst.0.max((r.analytic / scale / 4.0 - 1.0).abs());
        worst.1 = worst.1.max((r.algebraic / scale / 2.0 - 1.0).abs());
    }
    outcome(
        worst.0 <= SPLIT_REL && worst.1 <= SPLIT_REL,
        format!("max rel. deviation analytic {:.4}, algebraic {:.4}", worst.0, worst.1),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Eisenstein lattice identity at z = i, s = 3", es1_identity),
        ("scattering residue equals 1/v", scattering_residue),
        ("scattering constant terms", scattering_constant),
        ("parabolic identity L_1 vs L_p", parabolic_identity),
        ("special fiber exactness", fiber_exactness),
        ("minimal model and pullbacks", minimal_model_shape),
        ("divisor orthogonality", divisor_orthogonality),
        ("quadratic form oracles", quadform_oracles),
        ("asymptotic convergence of the ratio", asymptotic_convergence),
        ("constituent split", constituent_split),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name} ({})",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
