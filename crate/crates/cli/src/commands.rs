use std::fmt::Write as _;

use anyhow::Result;
use serde::Serialize;
use serde_json::json;
use x0p2::arakelov::{omega_sq, s_p, scan, GreenMode, OmegaReport};
use x0p2::fiber::{canonical_degrees, edixhoven_fiber, minimal_model, FiberModel, MinimalModel};
use x0p2::modular::{c_of, cusps, genus, index, volume};
use x0p2::numerics::Rat;

use crate::output::{Report, Table};

#[derive(Serialize)]
struct InfoResult {
    p: u64,
    level: u64,
    genus: u64,
    cusps: usize,
    cusp_list: Vec<String>,
    volume: f64,
    index: u64,
    c: Rat,
    s_p: Option<Rat>,
}

pub fn info(p: u64) -> Result<Report> {
    let g = genus(p)?;
    let r = InfoResult {
        p,
        level: p * p,
        genus: g,
        cusps: cusps(p)?.len(),
        cusp_list: cusps(p)?.iter().map(ToString::to_string).collect(),
        volume: volume(p)?,
        index: index(p)?,
        c: c_of(p)?,
        s_p: s_p(p).ok(),
    };
    let sp = r.s_p.as_ref().map_or("n/a".to_string(), ToString::to_string);
    let mut rep = Report::new("info", json!({ "prime": p }), &r)?;
    rep.text = format!(
        "X_0({}) at p = {p}\n  genus   {}\n  cusps   {} ({})\n  volume  {}\n  index   {}\n  c       {}\n  s_p     {sp}\n",
        r.level,
        r.genus,
        r.cusps,
        r.cusp_list.join(", "),
        r.volume,
        r.index,
        r.c,
    );
    rep.table = Table::key_value([
        ("p", p.to_string()),
        ("level", r.level.to_string()),
        ("genus", g.to_string()),
        ("cusps", r.cusps.to_string()),
        ("volume", r.volume.to_string()),
        ("index", r.index.to_string()),
        ("c", r.c.to_string()),
        ("s_p", sp),
    ]);
    Ok(rep)
}

#[derive(Serialize)]
struct FiberResult<'a> {
    p: u64,
    genus: u64,
    components: Vec<String>,
    multiplicities: Vec<u64>,
    arith_genera: Vec<&'a Rat>,
    intersection: &'a [Vec<Rat>],
    canonical_degrees: Vec<Rat>,
    adjunction_sum: Rat,
    two_g_minus_2: i64,
    minimal: Option<&'a MinimalModel>,
}

fn matrix_text(f: &FiberModel, out: &mut String) {
    let labels: Vec<String> = f.components.iter().map(|c| c.label()).collect();
    let cells: Vec<Vec<String>> = f
        .inter
        .iter()
        .map(|row| row.iter().map(ToString::to_string).collect())
        .collect();
    let width = labels
        .iter()
        .map(|l| l.chars().count())
        .chain(cells.iter().flatten().map(String::len))
        .max()
        .unwrap_or(1);
    let _ = write!(out, "  {:>width$}", "");
    for l in &labels {
        let _ = write!(out, " {l:>width$}");
    }
    out.push('\n');
    for (l, row) in labels.iter().zip(&cells) {
        let _ = write!(out, "  {l:>width$}");
        for c in row {
            let _ = write!(out, " {c:>width$}");
        }
        out.push('\n');
    }
}

pub fn fiber(p: u64, minimal: bool) -> Result<Report> {
    let f = edixhoven_fiber(p)?;
    let g = genus(p)?;
    let k = canonical_degrees(&f)?;
    let adjunction: Rat = k.iter().zip(f.multiplicities()).map(|(a, m)| a * &m).sum();
    let model = if minimal { Some(minimal_model(&f)?) } else { None };
    let r = FiberResult {
        p,
        genus: g,
        components: f.components.iter().map(|c| c.label()).collect(),
        multiplicities: f.components.iter().map(|c| c.multiplicity).collect(),
        arith_genera: f.components.iter().map(|c| &c.arith_genus).collect(),
        intersection: &f.inter,
        canonical_degrees: k.clone(),
        adjunction_sum: adjunction.clone(),
        two_g_minus_2: 2 * g as i64 - 2,
        minimal: model.as_ref(),
    };

    let mut text = format!("special fiber at p = {p}, genus {g}\n");
    matrix_text(&f, &mut text);
    for (c, kc) in f.components.iter().zip(&k) {
        let _ = writeln!(
            text,
            "  {}: multiplicity {}, arithmetic genus {}, K.C = {kc}",
            c.label(),
            c.multiplicity,
            c.arith_genus
        );
    }
    let _ = writeln!(text, "adjunction: sum m K.C = {adjunction}, 2g-2 = {}", 2 * g as i64 - 2);

    let mut table = Table::new(
        ["component", "multiplicity", "arith_genus", "canonical_degree"]
            .into_iter()
            .map(String::from)
            .chain(r.components.iter().cloned()),
    );
    for (i, c) in f.components.iter().enumerate() {
        table.push(
            [c.label(), c.multiplicity.to_string(), c.arith_genus.to_string(), k[i].to_string()]
                .into_iter()
                .chain(f.inter[i].iter().map(ToString::to_string)),
        );
    }

    if let Some(m) = &model {
        let _ = writeln!(text, "contracted: {}", m.contracted.join(", "));
        matrix_text(&m.fiber, &mut text);
        for (label, v) in &m.pullback.rows {
            let terms: Vec<String> = m
                .pullback
                .basis
                .iter()
                .zip(v)
                .filter(|(_, x)| !x.is_zero())
                .map(|(b, x)| if x == &Rat::one() { b.clone() } else { format!("{x} {b}") })
                .collect();
            let _ = writeln!(text, "  pi^* {label} = {}", terms.join(" + "));
        }
    }

    let mut rep = Report::new("fiber", json!({ "prime": p, "minimal": minimal }), &r)?;
    rep.text = text;
    rep.table = table;
    Ok(rep)
}

const SCAN_HEADER: [&str; 7] = ["p", "g", "algebraic", "analytic", "total", "target", "ratio"];

fn omega_row(r: &OmegaReport) -> [String; 7] {
    [
        r.p.to_string(),
        r.g.to_string(),
        r.algebraic.to_string(),
        r.analytic.to_string(),
        r.total.to_string(),
        r.target.to_string(),
        r.ratio.to_string(),
    ]
}

fn omega_text(rows: &[OmegaReport]) -> String {
    let mut s = format!(
        "{:>6} {:>8} {:>14} {:>14} {:>14} {:>14} {:>10}\n",
        "p", "g", "algebraic", "analytic", "total", "target", "ratio"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:>6} {:>8} {:>14.6} {:>14.6} {:>14.6} {:>14.6} {:>10.6}",
            r.p, r.g, r.algebraic, r.analytic, r.total, r.target, r.ratio
        );
    }
    s
}

pub fn omega(p: u64, mode: GreenMode) -> Result<Report> {
    let r = omega_sq(p, mode)?;
    let mut rep = Report::new("omega", json!({ "prime": p, "mode": mode }), &r)?;
    rep.text = format!(
        "{}algebraic coefficient (g^2-1)/s_p = {}, E_p = {}\n",
        omega_text(std::slice::from_ref(&r)),
        r.algebraic_coefficient,
        r.e_p_flag
    );
    rep.table = Table::new(SCAN_HEADER);
    rep.table.push(omega_row(&r));
    Ok(rep)
}

pub fn scan_range(pmin: u64, pmax: u64, mode: GreenMode) -> Result<Report> {
    let sc = scan(pmin, pmax, mode)?;
    let mut rep = Report::new(
        "scan",
        json!({ "pmin": pmin, "pmax": pmax, "mode": mode }),
        &sc,
    )?;
    let (worst_p, worst) = sc.largest_residual;
    rep.text = format!(
        "{}largest |ratio - 1| = {worst} at p = {worst_p}\n",
        omega_text(&sc.rows)
    );
    rep.table = Table::new(SCAN_HEADER);
    for r in &sc.rows {
        rep.table.push(omega_row(r));
    }
    Ok(rep)
}
