//! Word metrics on `Z × H3(Z)` that are asymptotic to each other but stay
//! an unbounded distance apart.

use serde::Serialize;

use crate::ball::{word_length_with, BfsOptions, GeneratingSet};
use crate::cc::bm_product_distance;
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};

/// Default cap on word lengths searched for a central element `(0,0;n)`.
fn central_cap(n: u64) -> usize {
    (5.0 * (n as f64).sqrt()).ceil() as usize + 8
}

/// Word length of `(0, 0; n)` in `H3(Z)` with the standard generators.
pub fn central_word_length(n: u64) -> Result<usize> {
    central_word_length_with(n, central_cap(n), &BfsOptions::default())
}

pub fn central_word_length_with(n: u64, cap: usize, opts: &BfsOptions) -> Result<usize> {
    let g = GroupSpec::heisenberg3();
    let gs = GeneratingSet::standard(&g);
    let z = i64::try_from(n).map_err(|_| Error::Overflow("central coordinate"))?;
    word_length_with(&gs, &Element::new(vec![0, 0], vec![z]), cap, opts)?
        .ok_or_else(|| Error::NotFound(format!("word length of (0,0;{n}) exceeds the cap {cap}")))
}

fn gen(v: i64, x: i64, y: i64, z: i64) -> Element {
    Element::new(vec![v, x, y], vec![z])
}

/// `Ω = {(1;(0,0,±1))^{±1}, a^{±1}, b^{±1}}` on `Z × H3` in coordinates
/// `(v, x, y; z)`.
pub fn omega_shifted() -> GeneratingSet {
    let elems = vec![gen(1, 0, 0, 1), gen(1, 0, 0, -1), gen(0, 1, 0, 0), gen(0, 0, 1, 0)];
    GeneratingSet::symmetric_closure(GroupSpec::heisenberg3_times_z(), elems).expect("valid generators")
}

/// `Ω₂ = {(1;e)^{±1}, a^{±1}, b^{±1}}`: the standard generators.
pub fn omega_standard() -> GeneratingSet {
    GeneratingSet::standard(&GroupSpec::heisenberg3_times_z())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapRow {
    pub n: u64,
    /// Word length of `(n;(0,0,n))` for `Ω`.
    pub rho_shifted: usize,
    /// Word length of `(n;(0,0,n))` for `Ω₂`.
    pub rho_standard: usize,
    pub gap: usize,
    pub central: usize,
    /// `central − 4√n`, recorded for observation only.
    pub central_excess: f64,
}

/// Gap `ρ_Ω₂ − ρ_Ω` at `(n;(0,0,n))`, each side found by its own search,
/// next to the word length of `(0,0;n)` in `H3`. Fails if `ρ_Ω ≠ n`.
pub fn bm_gap_c(n: u64, opts: &BfsOptions) -> Result<GapRow> {
    let z = i64::try_from(n).map_err(|_| Error::Overflow("central coordinate"))?;
    let target = gen(z, 0, 0, z);
    let central = central_word_length_with(n, central_cap(n), opts)?;
    let cap = n as usize + central_cap(n);
    let find = |gs: &GeneratingSet| {
        word_length_with(gs, &target, cap, opts)?
            .ok_or_else(|| Error::NotFound(format!("word length of {target} exceeds the cap {cap}")))
    };
    let rho_shifted = find(&omega_shifted())?;
    if rho_shifted != n as usize {
        return Err(Error::Infeasible(format!("expected word length {n} for {target}, found {rho_shifted}")));
    }
    let rho_standard = find(&omega_standard())?;
    Ok(GapRow {
        n,
        rho_shifted,
        rho_standard,
        gap: rho_standard - rho_shifted,
        central,
        central_excess: central as f64 - 4.0 * (n as f64).sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub rows: Vec<GapRow>,
    pub gap_equals_central: bool,
    pub strictly_increasing: bool,
    pub verdict: String,
}

pub fn bm_gap_report(ns: &[u64], opts: &BfsOptions) -> Result<GapReport> {
    let rows = ns.iter().map(|&n| bm_gap_c(n, opts)).collect::<Result<Vec<_>>>()?;
    let gap_equals_central = rows.iter().all(|r| r.gap == r.central);
    let strictly_increasing = rows.windows(2).all(|w| w[0].gap < w[1].gap);
    let verdict = if gap_equals_central && strictly_increasing {
        "gap equals the central word length and grows with n".to_string()
    } else {
        "gap check FAILED".to_string()
    };
    Ok(GapReport { rows, gap_equals_central, strictly_increasing, verdict })
}

/// 41 equally spaced points on `[-1.5, 1.5]`.
pub fn default_z0_grid() -> Vec<f64> {
    (0..41).map(|k| -1.5 + 3.0 * k as f64 / 40.0).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuasiNormRow {
    pub z0: f64,
    pub max_dev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuasiNormReport {
    pub n_max: u64,
    pub rows: Vec<QuasiNormRow>,
    pub min_max_dev: f64,
    pub argmin_z0: f64,
    /// `(n, ρ_Ω(n;(0,0,n)), ρ_Ω(n;(0,0,−n)))` checked by search.
    pub verified_lengths: Vec<(u64, usize, usize)>,
    pub verdict: String,
}

/// For each shift `z0`, the largest `|d_{z0} − n|` over `n ≤ n_max` at the
/// two elements `(n;(0,0,±n))`, whose word length for `Ω` is `n`.
pub fn bm_no_quasinorm_b(n_max: u64, z0_grid: &[f64], opts: &BfsOptions) -> Result<QuasiNormReport> {
    if n_max == 0 || z0_grid.is_empty() {
        return Err(Error::Invalid("need a positive radius and a non-empty grid".into()));
    }
    let gs = omega_shifted();
    let mut verified = Vec::new();
    for n in 1..=n_max.min(4) {
        let z = n as i64;
        let plus = word_length_with(&gs, &gen(z, 0, 0, z), 2 * n as usize, opts)?.unwrap_or(usize::MAX);
        let minus = word_length_with(&gs, &gen(z, 0, 0, -z), 2 * n as usize, opts)?.unwrap_or(usize::MAX);
        if plus != n as usize || minus != n as usize {
            return Err(Error::Infeasible(format!("test elements at n = {n} have lengths {plus}, {minus}")));
        }
        verified.push((n, plus, minus));
    }
    let rows: Vec<QuasiNormRow> = z0_grid
        .iter()
        .map(|&z0| {
            let max_dev = (1..=n_max)
                .map(|n| {
                    let t = n as f64;
                    let up = (bm_product_distance(z0, t, 0.0, 0.0, t) - t).abs();
                    let down = (bm_product_distance(z0, t, 0.0, 0.0, -t) - t).abs();
                    up.max(down)
                })
                .fold(0.0, f64::max);
            QuasiNormRow { z0, max_dev }
        })
        .collect();
    let best = rows.iter().min_by(|a, b| a.max_dev.total_cmp(&b.max_dev)).expect("non-empty grid");
    let (min_max_dev, argmin_z0) = (best.max_dev, best.z0);
    let verdict = format!(
        "no shift keeps both families bounded: best max deviation {min_max_dev:.6} at z0 = {argmin_z0}"
    );
    Ok(QuasiNormReport { n_max, rows, min_max_dev, argmin_z0, verified_lengths: verified, verdict })
}
