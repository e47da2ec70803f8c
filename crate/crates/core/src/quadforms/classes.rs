//! `Gamma_0(N)`-classes of forms `[N a, b, c]` of discriminant `l^2 - 4`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::form::{transform, QuadForm, UnimodularMatrix};
use super::reduce::{canonical_form, definite_automorphs, sl2_classes, sl2_stab_generator};
use crate::modular::require_prime;
use crate::{Error, Result};

/// Exact invariant of a `Gamma_0(N)`-class: the canonical `SL_2(Z)` representative
/// `Phi_0` and the orbit-least point of `P^1(Z/N)` under `SL_2(Z)_{Phi_0}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassKey {
    pub canonical: (BigInt, BigInt, BigInt),
    pub point: (u64, u64),
}

/// Representatives of `Q_l(N) / Gamma_0(N)` found by a certified box search.
#[derive(Debug, Clone, Serialize)]
pub struct ClassSet {
    pub l: i64,
    pub level: u64,
    pub reps: Vec<QuadForm>,
    /// Box bound used for the search.
    pub bound: u64,
}

impl ClassSet {
    pub fn count(&self) -> usize {
        self.reps.len()
    }
}

fn modn(v: &BigInt, n: u64) -> u64 {
    v.mod_floor(&BigInt::from(n)).to_u64().expect("reduced")
}

fn inv_mod(a: u64, n: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(n as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(n as i128) as u64)
}

/// Normalize a primitive column mod `N` to `(u, 1)` or `(1, w)`.
fn normalize(x: u64, z: u64, n: u64) -> (u64, u64) {
    if let Some(zi) = inv_mod(z, n) {
        ((x as u128 * zi as u128 % n as u128) as u64, 1)
    } else {
        let xi = inv_mod(x, n).expect("column is primitive mod N");
        (1, (z as u128 * xi as u128 % n as u128) as u64)
    }
}

type Mat = [u64; 4];

fn act(m: &Mat, pt: (u64, u64), n: u64) -> (u64, u64) {
    let n = n as u128;
    let (x, z) = (pt.0 as u128, pt.1 as u128);
    let nx = (m[0] as u128 * x + m[1] as u128 * z) % n;
    let nz = (m[2] as u128 * x + m[3] as u128 * z) % n;
    normalize(nx as u64, nz as u64, n as u64)
}

fn mat_mod(m: &UnimodularMatrix, n: u64) -> Mat {
    [modn(&m.x, n), modn(&m.y, n), modn(&m.z, n), modn(&m.t, n)]
}

fn mat_mul_mod(a: &Mat, b: &Mat, n: u64) -> Mat {
    let n = n as u128;
    let f = |i: usize, j: usize, k: usize, l: usize| {
        ((a[i] as u128 * b[j] as u128 + a[k] as u128 * b[l] as u128) % n) as u64
    };
    [f(0, 0, 1, 2), f(0, 1, 1, 3), f(2, 0, 3, 2), f(2, 1, 3, 3)]
}

/// Image of `SL_2(Z)_{Phi_0}` in `SL_2(Z/N)`.
fn stab_mod(phi0: &QuadForm, n: u64) -> Result<Vec<Mat>> {
    if phi0.disc() < BigInt::zero() {
        return Ok(definite_automorphs(phi0).iter().map(|m| mat_mod(m, n)).collect());
    }
    let u = mat_mod(&sl2_stab_generator(phi0)?, n);
    let id: Mat = [1 % n, 0, 0, 1 % n];
    let minus: Mat = [n - 1, 0, 0, n - 1].map(|v| v % n);
    let mut out = vec![id, minus];
    let mut g = u;
    while g != id && g != minus {
        out.push(g);
        out.push(mat_mul_mod(&g, &minus, n));
        g = mat_mul_mod(&g, &u, n);
    }
    Ok(out)
}

fn orbit_min(stab: &[Mat], pt: (u64, u64), n: u64) -> (u64, u64) {
    stab.iter().map(|m| act(m, pt, n)).min().expect("stabilizer contains identity")
}

fn key_with(phi: &QuadForm, n: u64, cache: &mut HashMap<(BigInt, BigInt, BigInt), Vec<Mat>>) -> Result<ClassKey> {
    if !phi.a.is_multiple_of(&BigInt::from(n)) {
        return Err(Error::Divisibility(format!("{n} does not divide a = {}", phi.a)));
    }
    let (phi0, r) = canonical_form(phi)?;
    // phi = phi0 o R^{-1}; the first column of R^{-1} is (t, -z).
    let pt = normalize(modn(&r.t, n), modn(&-&r.z, n), n);
    let k = phi0.key();
    if !cache.contains_key(&k) {
        cache.insert(k.clone(), stab_mod(&phi0, n)?);
    }
    Ok(ClassKey {
        point: orbit_min(&cache[&k], pt, n),
        canonical: k,
    })
}

/// Exact `Gamma_0(N)`-class invariant of a form with `N | a`.
pub fn class_key(phi: &QuadForm, n: u64) -> Result<ClassKey> {
    key_with(phi, n, &mut HashMap::new())
}

fn projective_line(n: u64) -> Vec<(u64, u64)> {
    let mut pts: Vec<(u64, u64)> = (0..n).map(|u| (u, 1)).collect();
    pts.extend((0..n).filter(|&w| inv_mod(w, n).is_none()).map(|w| (1, w)));
    pts.sort_unstable();
    pts.dedup();
    pts
}

fn disc_of(l: i64) -> Result<i64> {
    if l.abs() == 2 {
        return Err(Error::UnsupportedDiscriminant(0));
    }
    Ok(l * l - 4)
}

/// Classes of `Q_l(N)/Gamma_0(N)` from the double cosets
/// `SL_2(Z)_{Phi_0} \ SL_2(Z) / Gamma_0(N)` over the `SL_2(Z)`-classes `Phi_0`.
pub fn double_coset_classes(l: i64, n: u64) -> Result<Vec<(ClassKey, QuadForm)>> {
    let disc = disc_of(l)?;
    let nb = BigInt::from(n);
    let line = projective_line(n);
    let mut out = Vec::new();
    for phi0 in sl2_classes(disc)? {
        let stab = stab_mod(&phi0, n)?;
        let mut orbits = BTreeSet::new();
        for &(x, z) in &line {
            if phi0.eval(&x.into(), &z.into()).is_multiple_of(&nb) {
                orbits.insert(orbit_min(&stab, (x, z), n));
            }
        }
        for (x, z) in orbits {
            // (u, 1) completes with [[u, u - 1], [1, 1]]; (1, w) with [[1, 0], [w, 1]].
            let d = if z == 1 {
                UnimodularMatrix::raw(x.into(), BigInt::from(x) - 1, 1.into(), 1.into())
            } else {
                UnimodularMatrix::raw(1.into(), 0.into(), z.into(), 1.into())
            };
            let rep = transform(&phi0, &d).at_level(n)?;
            out.push((
                ClassKey {
                    canonical: phi0.key(),
                    point: (x, z),
                },
                rep,
            ));
        }
    }
    Ok(out)
}

/// Small generating set of `Gamma_0(N)`: `T^{+-1}` and `[[x, y], [N, t]]` with
/// `x t = 1 mod N`, `|x|, |t| <= N/2`, together with their inverses.
fn generators(n: i128) -> Vec<[i128; 4]> {
    let mut gens = vec![[1, 1, 0, 1], [1, -1, 0, 1]];
    let half = n / 2;
    for x in -half..=half {
        let Some(xi) = inv_mod(x.rem_euclid(n) as u64, n as u64) else { continue };
        let mut t = xi as i128;
        if t > half {
            t -= n;
        }
        let y = (x * t - 1) / n;
        gens.push([x, y, n, t]);
        gens.push([t, -y, -n, x]);
    }
    gens
}

fn act_i128(f: (i128, i128, i128), m: &[i128; 4]) -> (i128, i128, i128) {
    let (a, b, c) = f;
    let [x, y, z, t] = *m;
    let ev = |u: i128, v: i128| a * u * u + b * u * v + c * v * v;
    (ev(x, z), b * (x * t + y * z) + 2 * (a * x * y + c * z * t), ev(y, t))
}

fn size(f: &(i128, i128, i128)) -> i128 {
    f.0.abs() + f.1.abs() + f.2.abs()
}

/// Greedy descent in `|a| + |b| + |c|` along the generators; every step is a
/// `Gamma_0(N)` move, so the endpoint lies in the orbit of `f`.
fn descend(mut f: (i128, i128, i128), gens: &[[i128; 4]]) -> (i128, i128, i128) {
    loop {
        let best = gens
            .iter()
            .map(|g| act_i128(f, g))
            .min_by_key(|g| (size(g), *g))
            .expect("non-empty generating set");
        if size(&best) >= size(&f) {
            return f;
        }
        f = best;
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Search bound `2 p^2`; certifies every `|l| <= 7` case for `p < 40`.
pub fn default_class_bound(p: u64) -> u64 {
    2 * p * p
}

/// Brute-force partition of the forms `[p^2 a, b, c]` with `|a|, |b|, |c| <= bound`
/// (and `a > 0` when `l^2 < 4`) into `Gamma_0(p^2)`-orbits.
///
/// Orbits are merged along a fixed generating set, both by direct moves inside the
/// box and by a common endpoint of a greedy size descent. The result is certified: the
/// exact class invariants of the merged orbits must be pairwise distinct and must
/// exhaust the double cosets, otherwise [`Error::NotStabilized`] is returned.
pub fn enumerate_classes(l: i64, p: u64, bound: u64) -> Result<ClassSet> {
    require_prime(p)?;
    let disc = disc_of(l)? as i128;
    let n = (p * p) as i128;
    let bd = bound as i128;
    let a_range: Vec<i128> = if disc < 0 {
        (1..=bd).collect()
    } else {
        (-bd..=bd).filter(|&a| a != 0).collect()
    };
    let mut forms: Vec<(i128, i128, i128)> = a_range
        .par_iter()
        .flat_map_iter(|&a| {
            (-bd..=bd).filter_map(move |b| {
                let num = b * b - disc;
                let den = 4 * n * a;
                (num % den == 0 && (num / den).abs() <= bd).then(|| (n * a, b, num / den))
            })
        })
        .collect();
    forms.sort_unstable();
    let index: HashMap<(i128, i128, i128), usize> =
        forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let gens = generators(n);
    let edges: Vec<(usize, usize)> = forms
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, f)| {
            let index = &index;
            gens.iter().filter_map(move |g| index.get(&act_i128(*f, g)).map(|&j| (i, j)))
        })
        .collect();
    let ends: Vec<(i128, i128, i128)> = forms.par_iter().map(|f| descend(*f, &gens)).collect();
    let mut first_at: HashMap<(i128, i128, i128), usize> = HashMap::new();
    let mut descent_edges = Vec::new();
    for (i, e) in ends.into_iter().enumerate() {
        match first_at.get(&e) {
            Some(&j) => descent_edges.push((j, i)),
            None => {
                first_at.insert(e, i);
            }
        }
    }
    let mut parent: Vec<usize> = (0..forms.len()).collect();
    for (i, j) in edges.into_iter().chain(descent_edges) {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            // Keep the smaller index as root so the root is the lexicographic minimum.
            let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
            parent[hi] = lo;
        }
    }
    let roots: BTreeSet<usize> = (0..forms.len()).map(|i| find(&mut parent, i)).collect();
    let reps: Vec<QuadForm> = roots
        .iter()
        .map(|&r| {
            let (a, b, c) = forms[r];
            QuadForm::with_level(BigInt::from(a), BigInt::from(b), BigInt::from(c), n as u64)
        })
        .collect::<Result<_>>()?;

    let expected = double_coset_classes(l, n as u64)?;
    let mut cache = HashMap::new();
    let mut keys = BTreeMap::new();
    for rep in &reps {
        let k = key_with(rep, n as u64, &mut cache)?;
        if let Some(prev) = keys.insert(k, rep.clone()) {
            return Err(Error::NotStabilized(format!(
                "{prev} and {rep} are equivalent but were not merged at bound {bound}"
            )));
        }
    }
    if keys.len() != expected.len() {
        return Err(Error::NotStabilized(format!(
            "found {} of {} classes at bound {bound}",
            keys.len(),
            expected.len()
        )));
    }
    Ok(ClassSet {
        l,
        level: n as u64,
        reps,
        bound,
    })
}
