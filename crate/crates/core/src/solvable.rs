//! The semidirect products `Z ⋉ R²` with an irrational rotation: Liouville
//! rotation numbers that make the word-metric balls converge arbitrarily
//! slowly, and the two-cone limit shapes.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{pi, Interval};
use crate::quadrature::integrate;

/// Largest exponent handled with exact machine-word residues.
pub const MAX_EXPONENT: u32 = 40;

/// Direct scans and window searches stop after this many steps.
const SCAN_LIMIT: u64 = 20_000_000;

/// `α = Σ 3^(−n_i)` for a strictly increasing list of positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiouvilleAlpha {
    exponents: Vec<u32>,
    /// Radii at which the distance condition has been certified.
    pub witnesses: Vec<u64>,
}

impl LiouvilleAlpha {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.first() == Some(&0) || exponents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("exponents must be positive and strictly increasing".into()));
        }
        if exponents.last().is_some_and(|&e| e > MAX_EXPONENT) {
            return Err(Error::Precision(format!(
                "exponents above {MAX_EXPONENT} need more digits than this implementation carries"
            )));
        }
        Ok(LiouvilleAlpha { exponents, witnesses: Vec::new() })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn value(&self) -> f64 {
        self.exponents.iter().map(|&e| 3f64.powi(-(e as i32))).sum()
    }

    /// `α = A / 3^N` with `N` the last exponent.
    pub fn exact(&self) -> (u128, u128) {
        prefix_fraction(&self.exponents)
    }

    /// Greedy construction. Each witness is a radius with the `δ` it must
    /// satisfy. A new term `3^(−e)` gets the smallest `e` that certifies its
    /// own witness while moving `kα` by less than `δ_i/10` for `|k| ≤ n_i`
    /// at every earlier witness.
    pub fn greedy(witnesses: &[(u64, f64)]) -> Result<Self> {
        if witnesses.is_empty() {
            return Err(Error::Invalid("at least one witness radius is needed".into()));
        }
        let mut exps: Vec<u32> = Vec::new();
        for (j, &(n, delta)) in witnesses.iter().enumerate() {
            let start = exps.last().map_or(1, |e| e + 1);
            let chosen = (start..=MAX_EXPONENT).find(|&e| {
                let small = witnesses[..j]
                    .iter()
                    .all(|&(ni, di)| 1.5 * ni as f64 * 3f64.powi(-(e as i32)) < di / 10.0);
                if !small {
                    return false;
                }
                let mut trial = exps.clone();
                trial.push(e);
                let a = LiouvilleAlpha { exponents: trial, witnesses: vec![] };
                matches!(check_liouville(&a, n, delta), Ok(c) if c.holds)
            });
            match chosen {
                Some(e) => exps.push(e),
                None => {
                    return Err(Error::Infeasible(format!(
                        "no exponent up to {MAX_EXPONENT} certifies radius {n} at delta {delta}"
                    )))
                }
            }
        }
        let mut alpha = LiouvilleAlpha::new(exps)?;
        for &(n, delta) in witnesses {
            if check_liouville(&alpha, n, delta)?.holds {
                alpha.witnesses.push(n);
            }
        }
        Ok(alpha)
    }
}

fn prefix_fraction(exps: &[u32]) -> (u128, u128) {
    let Some(&last) = exps.last() else { return (0, 1) };
    let a = exps.iter().map(|&e| 3u128.pow(last - e)).sum();
    (a, 3u128.pow(last))
}

fn mod_inverse(a: u128, m: u128) -> u128 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(m as i128) as u128
}

/// Minimum over `0 ≤ k ≤ n` of `|2(kA mod M) − M|`, with the smallest `k`
/// attaining it. `None` when the search would be too long.
fn residue_minimum(a: u128, m: u128, n: u64) -> Option<(u128, u64)> {
    let half = (m - 1) / 2;
    if n as u128 >= m - 1 {
        let k = (half * mod_inverse(a, m)) % m;
        return Some((1, k.min(m - k) as u64));
    }
    if n <= SCAN_LIMIT {
        let (mut best, mut arg) = (m, 0u64);
        let mut r = 0u128;
        for k in 1..=n {
            r = (r + a) % m;
            let v = (2 * r).abs_diff(m);
            if v < best {
                best = v;
                arg = k;
                if v == 1 {
                    break;
                }
            }
        }
        return Some((best, arg));
    }
    // residues closest to M/2 first; residue M − r is reached by −k
    let inv = mod_inverse(a, m);
    for w in 0..SCAN_LIMIT.min(half as u64 + 1) {
        let r = half - w as u128;
        let k = (r * inv) % m;
        let kk = k.min(m - k);
        if kk >= 1 && kk <= n as u128 {
            return Some((2 * w as u128 + 1, kk as u64));
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LiouvilleCheck {
    pub holds: bool,
    /// Smallest `k > 0` at which the distance is (nearly) minimal.
    pub worst_k: u64,
    /// Enclosure of `min_{|k| ≤ n} d(kα, Z + 1/2)`.
    pub distance_lo: f64,
    pub distance_hi: f64,
}

/// Does `d(kα, Z + 1/2) ≥ 2δ` hold for every `|k| ≤ n`?
pub fn check_liouville(alpha: &LiouvilleAlpha, n: u64, delta: f64) -> Result<LiouvilleCheck> {
    if !(delta >= 0.0) {
        return Err(Error::Domain(format!("delta must be non-negative, got {delta}")));
    }
    let two_delta = Interval::point(2.0) * Interval::point(delta);
    let exps = &alpha.exponents;
    if exps.is_empty() || n == 0 {
        return Ok(LiouvilleCheck { holds: two_delta.hi <= 0.5, worst_k: 0, distance_lo: 0.5, distance_hi: 0.5 });
    }
    for j in 1..=exps.len() {
        let (a, m) = prefix_fraction(&exps[..j]);
        let Some((v, k)) = residue_minimum(a, m, n) else { continue };
        let d = Interval::from_u128(v) / (Interval::point(2.0) * Interval::from_u128(m));
        let tail = match exps.get(j) {
            Some(&e) => 1.5 * n as f64 * 3f64.powi(-(e as i32)) * (1.0 + 1e-12),
            None => 0.0,
        };
        let lo = (d.lo - tail).next_down();
        let hi = (d.hi + tail).next_up();
        if lo >= two_delta.hi {
            return Ok(LiouvilleCheck { holds: true, worst_k: k, distance_lo: lo, distance_hi: hi });
        }
        if hi < two_delta.lo {
            return Ok(LiouvilleCheck { holds: false, worst_k: k, distance_lo: lo, distance_hi: hi });
        }
    }
    Err(Error::Precision(format!(
        "cannot decide the distance bound at radius {n}; more digits of alpha are needed"
    )))
}

/// Default schedule `ε_n = 1 / ln(n + 2)`.
pub fn default_epsilon(n: u64) -> f64 {
    1.0 / ((n as f64) + 2.0).ln()
}

/// Lebesgue volume of the unit ball of `|k| + ‖x‖₀`.
pub const CONE_VOLUME_CONSTANT: f64 = 4.0 * PI / 3.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub n: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub worst_k: u64,
    /// Lower bound of `sqrt(1 + 3 sin²g) − (1 + δ²)` over the sector.
    pub margin: f64,
    /// Implied bound `(1 − ε)·c·n³` on the ball volume.
    pub volume_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rejection {
    pub n: u64,
    pub epsilon: f64,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CertificateReport {
    pub certified: Vec<Certificate>,
    pub rejected: Vec<Rejection>,
}

/// Rotation part of the certificate. A vector within angle `δ` of the
/// vertical axis, rotated by `π kα`, makes an angle of at least
/// `g = π·d − δ` with the horizontal axis, where `d` is the Liouville
/// distance. Its norm ratio `‖Rx‖/‖x‖₀ = sqrt(1 + 3cos²ψ)` is then at least
/// `sqrt(1 + 3 sin²g)`, since `sin` is increasing on `[0, π/2]`.
fn rotation_margin(distance_lo: f64, delta: Interval) -> Option<f64> {
    let g = pi() * Interval::point(distance_lo) - delta;
    if g.lo <= 0.0 {
        return None;
    }
    let g = Interval::new(g.lo, g.hi.min(std::f64::consts::FRAC_PI_2));
    let s = g.sin_monotone().square();
    let ratio = (Interval::point(1.0) + Interval::point(3.0) * s).sqrt();
    let m = ratio - (Interval::point(1.0) + delta.square());
    Some(m.lo)
}

/// Certifies the lower-bound chain for each `(n, ε_n)`.
pub fn slow_speed_certificate(alpha: &LiouvilleAlpha, candidates: &[(u64, f64)]) -> Result<CertificateReport> {
    let mut report = CertificateReport::default();
    for &(n, eps) in candidates {
        if !(eps >= 0.0 && eps < 1.0) {
            return Err(Error::Domain(format!("epsilon must lie in [0, 1), got {eps}")));
        }
        let volume_bound = (1.0 - eps) * CONE_VOLUME_CONSTANT * (n as f64).powi(3);
        let delta = (Interval::point(4.0) * Interval::point(eps)).cbrt();
        let reject = |reason: String| Rejection { n, epsilon: eps, reason };
        if eps == 0.0 {
            report.certified.push(Certificate { n, epsilon: 0.0, delta: 0.0, worst_k: 0, margin: 0.0, volume_bound });
            continue;
        }
        let check = match check_liouville(alpha, n, delta.hi) {
            Ok(c) => c,
            Err(e) => {
                report.rejected.push(reject(e.to_string()));
                continue;
            }
        };
        if !check.holds {
            report.rejected.push(reject(format!(
                "distance {:.6e} at k = {} is below 2 delta = {:.6e}",
                check.distance_hi,
                check.worst_k,
                2.0 * delta.hi
            )));
            continue;
        }
        match rotation_margin(check.distance_lo, delta) {
            Some(m) if m >= 0.0 => report.certified.push(Certificate {
                n,
                epsilon: eps,
                delta: delta.hi,
                worst_k: check.worst_k,
                margin: m,
                volume_bound,
            }),
            Some(m) => report.rejected.push(reject(format!("rotation margin {m:.3e} is negative"))),
            None => report.rejected.push(reject("rotated sector reaches the horizontal axis".into())),
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConeShape {
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
}

fn convex_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[f64; 2]> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    hull
}

/// Radii of the two-cone limit shape for `Ω = (0, Ω0) ∪ (1, Ω1)^{±1}`:
/// `r0` is the largest norm in `Ω0`, `r1` half the diameter of `Ω1` and
/// `r2` the mean over directions of the largest projection of `Ω1`.
pub fn cone_shape(omega0: &[[f64; 2]], omega1: &[[f64; 2]]) -> Result<ConeShape> {
    if omega1.is_empty() {
        return Err(Error::Invalid("the set at level one must be non-empty".into()));
    }
    let scale = omega0.iter().chain(omega1).map(|p| p[0].abs().max(p[1].abs())).fold(1.0, f64::max);
    for p in omega0 {
        let mirrored = omega0
            .iter()
            .any(|q| (p[0] + q[0]).abs() <= 1e-12 * scale && (p[1] + q[1]).abs() <= 1e-12 * scale);
        if !mirrored {
            return Err(Error::Invalid(format!("the level-zero set is not symmetric: ({}, {}) has no mirror", p[0], p[1])));
        }
    }
    let r0 = omega0.iter().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max);
    let mut diam: f64 = 0.0;
    for (i, a) in omega1.iter().enumerate() {
        for b in &omega1[i + 1..] {
            diam = diam.max((a[0] - b[0]).hypot(a[1] - b[1]));
        }
    }
    let r1 = diam / 2.0;
    let hull = convex_hull(omega1);
    if hull.len() < 2 {
        return Ok(ConeShape { r0, r1, r2: 0.0 });
    }
    let two_pi = 2.0 * PI;
    // the maximizing point changes at the outward normals of the hull edges
    let breaks: Vec<f64> = (0..hull.len())
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
            (-(b[0] - a[0])).atan2(b[1] - a[1]).rem_euclid(two_pi)
        })
        .collect();
    let support = |t: f64| {
        let (s, c) = t.sin_cos();
        hull.iter().map(|p| p[0] * c + p[1] * s).fold(f64::NEG_INFINITY, f64::max)
    };
    let est = integrate(&support, 0.0, two_pi, &breaks, 1e-14 * scale, 1e-13, 10_000)?;
    let r2 = est.value / two_pi;
    let perimeter: f64 = (0..hull.len())
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
            (b[0] - a[0]).hypot(b[1] - a[1])
        })
        .sum();
    let closed = perimeter / two_pi;
    if (r2 - closed).abs() > 1e-10 * scale {
        return Err(Error::NonConvergence {
            msg: "projection integral disagrees with the hull perimeter".into(),
            achieved: (r2 - closed).abs(),
        });
    }
    if r2 > r1 * (1.0 + 1e-12) {
        return Err(Error::NonConvergence { msg: "mean projection exceeds half the diameter".into(), achieved: r2 - r1 });
    }
    Ok(ConeShape { r0, r1, r2 })
}
