//! Intersection calculus on the special fiber at `p` of Edixhoven's model of `X_0(p^2)`.
//!
//! Numbers are local intersection numbers; the factor `log p` is left out.

use std::fmt;

use serde::Serialize;

use crate::modular::{genus, require_prime_at_least};
use crate::numerics::Rat;
use crate::{Error, Result};

/// Names of the five components of Edixhoven's fiber, in table order.
pub const EDIXHOVEN_NAMES: [&str; 5] = ["C20", "C02", "C11", "E", "F"];

/// A vertical prime divisor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    /// Label of the component it is the image of.
    pub name: String,
    /// Number of blow-downs the component has been carried through.
    pub primes: usize,
    pub multiplicity: u64,
    pub arith_genus: Rat,
    /// Total transform on the original model, over [`FiberModel::basis`].
    pub pullback: Vec<Rat>,
}

impl Component {
    /// `name` followed by one prime per blow-down.
    pub fn label(&self) -> String {
        format!("{}{}", self.name, "\u{2032}".repeat(self.primes))
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A special fiber: components with their symmetric intersection matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberModel {
    pub p: u64,
    /// Component names of the model the pullbacks refer to.
    pub basis: Vec<String>,
    pub components: Vec<Component>,
    pub inter: Vec<Vec<Rat>>,
}

/// Pullback of each surviving component, over the components of a source model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PullbackMap {
    pub basis: Vec<String>,
    pub rows: Vec<(String, Vec<Rat>)>,
}

impl PullbackMap {
    pub fn get(&self, label: &str) -> Option<&[Rat]> {
        self.rows
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v.as_slice())
    }
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

impl FiberModel {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.components
            .iter()
            .position(|c| c.name == name || c.label() == name)
    }

    pub fn multiplicities(&self) -> Vec<Rat> {
        self.components
            .iter()
            .map(|c| Rat::int(c.multiplicity))
            .collect()
    }

    /// Intersection of two divisors given by coefficient vectors.
    pub fn pair(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                acc = acc + ui * &(&self.inter[i][j] * vj);
            }
        }
        acc
    }

    /// `V_p . D` for every component `D`.
    pub fn fiber_products(&self) -> Vec<Rat> {
        let v = self.multiplicities();
        (0..self.len())
            .map(|j| {
                v.iter()
                    .enumerate()
                    .map(|(i, m)| m * &self.inter[i][j])
                    .sum()
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|i| (0..self.len()).all(|j| self.inter[i][j] == self.inter[j][i]))
    }

    /// 2x2 (or general) matrix as `i64` when every entry is integral.
    pub fn integer_matrix(&self) -> Option<Vec<Vec<i64>>> {
        self.inter
            .iter()
            .map(|row| row.iter().map(Rat::to_i64).collect())
            .collect()
    }
}

/// Edixhoven's fiber with the intersection table for `p mod 12`.
pub fn edixhoven_fiber(p: u64) -> Result<FiberModel> {
    require_prime_at_least(p, 7, "Edixhoven's model is used for p >= 7")?;
    let pi = p as i64;
    let (self20, off, e20, f20, m_e, m_f) = match p % 12 {
        1 => (-pi * (pi - 1), pi - 1, 0, 0, (pi - 1) / 2, (pi - 1) / 3),
        5 => (-(pi * pi - pi + 4), pi - 5, 0, 1, (pi - 1) / 2, (pi + 1) / 3),
        7 => (-(pi * pi - pi + 6), pi - 7, 1, 0, (pi + 1) / 2, (pi - 1) / 3),
        11 => (-(pi * pi - pi + 10), pi - 11, 1, 1, (pi + 1) / 2, (pi + 1) / 3),
        _ => unreachable!("primes >= 7 are 1, 5, 7 or 11 mod 12"),
    };
    let (s, o) = (r(self20, 12), r(off, 12));
    let (e, f) = (Rat::int(e20), Rat::int(f20));
    let one = Rat::one();
    let z = Rat::zero();
    let inter = vec![
        vec![s.clone(), o.clone(), o.clone(), e.clone(), f.clone()],
        vec![o.clone(), s, o.clone(), e.clone(), f.clone()],
        vec![o.clone(), o, -one.clone(), one.clone(), one.clone()],
        vec![e.clone(), e, one.clone(), Rat::int(-2), z.clone()],
        vec![f.clone(), f, one, z, Rat::int(-3)],
    ];
    let mults = [1, 1, pi - 1, m_e, m_f];
    let components = EDIXHOVEN_NAMES
        .iter()
        .zip(mults)
        .enumerate()
        .map(|(i, (name, m))| Component {
            name: name.to_string(),
            primes: 0,
            multiplicity: m as u64,
            arith_genus: Rat::zero(),
            pullback: (0..5).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect(),
        })
        .collect();
    Ok(FiberModel {
        p,
        basis: EDIXHOVEN_NAMES.iter().map(|s| s.to_string()).collect(),
        components,
        inter,
    })
}

/// Exact null space of a rational matrix.
pub fn kernel(m: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..rows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, piv);
        let inv = a[row][col].recip();
        for j in 0..cols {
            a[row][j] = &a[row][j] * &inv;
        }
        for i in 0..rows {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..cols {
                    let t = &f * &a[row][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rat::zero(); cols];
            v[free] = Rat::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][free].clone();
            }
            v
        })
        .collect()
}

/// Kernel vector of the intersection matrix, scaled so its first coordinate is 1.
pub fn derive_multiplicities(inter: &[Vec<Rat>]) -> Result<Vec<Rat>> {
    let ker = kernel(inter);
    if ker.len() != 1 {
        return Err(Error::KernelDimension(ker.len()));
    }
    let v = &ker[0];
    if v[0].is_zero() {
        return Err(Error::Mismatch("kernel vector vanishes on the first component".into()));
    }
    let s = v[0].recip();
    Ok(v.iter().map(|x| x * &s).collect())
}

/// `K . C = 2 p_a(C) - 2 - C^2` for every component, checked against
/// `sum m_C K . C = 2g - 2`.
pub fn canonical_degrees(f: &FiberModel) -> Result<Vec<Rat>> {
    let k: Vec<Rat> = f
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| Rat::int(2) * &c.arith_genus - Rat::int(2) - f.inter[i][i].clone())
        .collect();
    let total: Rat = k
        .iter()
        .zip(&f.components)
        .map(|(kc, c)| kc * &Rat::int(c.multiplicity))
        .sum();
    let g = genus(f.p)? as i64;
    let expected = Rat::int(2 * g - 2);
    if total != expected {
        return Err(Error::GenusMismatch {
            got: total.to_string(),
            expected: expected.to_string(),
        });
    }
    Ok(k)
}

/// Rational components of self-intersection `-1`.
pub fn contractible(f: &FiberModel) -> Vec<String> {
    f.components
        .iter()
        .enumerate()
        .filter(|(i, c)| c.arith_genus.is_zero() && f.inter[*i][*i] == Rat::int(-1))
        .map(|(_, c)| c.label())
        .collect()
}

/// Contract the `(-1)`-curve `x`: `pi^* D' = D + (D.X) X` and
/// `D' . E' = D . E + (D.X)(E.X)`.
pub fn blow_down(f: &FiberModel, x: &str) -> Result<(FiberModel, PullbackMap)> {
    let xi = f
        .index_of(x)
        .ok_or_else(|| Error::NotContractible(format!("{x} is not a component")))?;
    let xc = &f.components[xi];
    if !xc.arith_genus.is_zero() || f.inter[xi][xi] != Rat::int(-1) {
        return Err(Error::NotContractible(xc.label()));
    }
    let keep: Vec<usize> = (0..f.len()).filter(|&i| i != xi).collect();
    let dx: Vec<Rat> = (0..f.len()).map(|i| f.inter[i][xi].clone()).collect();
    let inter = keep
        .iter()
        .map(|&i| {
            keep.iter()
                .map(|&j| &f.inter[i][j] + &(&dx[i] * &dx[j]))
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    let components = keep
        .iter()
        .map(|&i| {
            let c = &f.components[i];
            let pullback = c
                .pullback
                .iter()
                .zip(&xc.pullback)
                .map(|(a, b)| a + &(&dx[i] * b))
                .collect();
            let gain = &dx[i] * &(&dx[i] - &Rat::one()) / Rat::int(2);
            let next = Component {
                name: c.name.clone(),
                primes: c.primes + 1,
                multiplicity: c.multiplicity,
                arith_genus: &c.arith_genus + &gain,
                pullback,
            };
            let local = (0..f.len())
                .map(|j| {
                    if j == i {
                        Rat::one()
                    } else if j == xi {
                        dx[i].clone()
                    } else {
                        Rat::zero()
                    }
                })
                .collect();
            rows.push((next.label(), local));
            next
        })
        .collect();
    Ok((
        FiberModel {
            p: f.p,
            basis: f.basis.clone(),
            components,
            inter,
        },
        PullbackMap {
            basis: f.components.iter().map(Component::label).collect(),
            rows,
        },
    ))
}

/// Result of contracting all `(-1)`-curves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalModel {
    pub fiber: FiberModel,
    /// Composed pullbacks over the original basis.
    pub pullback: PullbackMap,
    /// Labels of the contracted curves, in order.
    pub contracted: Vec<String>,
}

/// Contract `(-1)`-curves in component order until none is left; the model must end
/// with two components.
pub fn minimal_model(f: &FiberModel) -> Result<MinimalModel> {
    let mut cur = f.clone();
    let mut contracted = Vec::new();
    while let Some(x) = contractible(&cur).into_iter().next() {
        cur = blow_down(&cur, &x)?.0;
        contracted.push(x);
    }
    if cur.len() != 2 {
        return Err(Error::Contraction(cur.len()));
    }
    let pullback = PullbackMap {
        basis: f.basis.clone(),
        rows: cur
            .components
            .iter()
            .map(|c| (c.label(), c.pullback.clone()))
            .collect(),
    };
    Ok(MinimalModel {
        fiber: cur,
        pullback,
        contracted,
    })
}
