//! Volumes of limit unit balls.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dido::PiecewiseQuadratic;
use crate::error::{Error, Result};
use crate::norm::{PolygonalNorm, Q};
use crate::profile::z_profile_h5_sup;
use crate::quadrature::{compensated_sum, integrate, Estimate};

/// Exact volume `∫∫ 2 z` of the limit ball of `H3` for the norm `P`.
pub fn shape_volume_h3(p: &PolygonalNorm) -> Result<Q> {
    Ok(PiecewiseQuadratic::compile(p)?.volume())
}

/// `2009/21870 + ln 2 / 32805`.
pub fn h5_reference_volume() -> f64 {
    2009.0 / 21870.0 + std::f64::consts::LN_2 / 32805.0
}

/// Quadratic `a e² + b e + c` interpolating `f` at the ends and midpoint.
fn fit(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64, f64) {
    let (f0, fm, f1) = (f(lo), f(0.5 * (lo + hi)), f(hi));
    let h = 0.5 * (hi - lo);
    // in u = e - mid
    let a = (f0 - 2.0 * fm + f1) / (2.0 * h * h);
    let b = (f1 - f0) / (2.0 * h);
    let c = fm;
    let mid = 0.5 * (lo + hi);
    (a, b - 2.0 * a * mid, c - b * mid + a * mid * mid)
}

fn roots_in(a: f64, b: f64, c: f64, lo: f64, hi: f64, out: &mut Vec<f64>) {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return;
    }
    if a.abs() <= 1e-14 * scale {
        if b != 0.0 {
            out.push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            let qq = -0.5 * (b + b.signum() * sq);
            if qq != 0.0 {
                out.push(qq / a);
                out.push(c / qq);
            } else {
                out.push(0.0);
            }
        }
    }
    out.retain(|r| *r > lo && *r < hi);
}

/// The profile on the fundamental domain in the coordinates
/// `s_i = x_i + y_i`, `e_i = x_i − y_i`: the larger of the two candidates in
/// which one factor is a straight staircase.
struct H5Slice {
    s1: f64,
    s2: f64,
    e1: f64,
    m: f64,
    hi_const: f64,
    lo_const: f64,
}

impl H5Slice {
    fn new(s1: f64, s2: f64, e1: f64) -> Self {
        let m = (1.0 - s1 - s2) / 2.0;
        // first factor of the t = 1 - s2 candidate
        let t = 1.0 - s2;
        let x1 = 0.5 * (s1 + e1);
        let xy1 = 0.25 * (s1 * s1 - e1 * e1);
        let hi_const = if e1 > m {
            x1 * (t - x1) / 2.0
        } else {
            (t + s1).powi(2) / 16.0 - xy1 / 2.0
        };
        H5Slice { s1, s2, e1, m, hi_const, lo_const: xy1 / 2.0 }
    }

    fn f_lo(&self, e2: f64) -> f64 {
        let t = 1.0 - self.s1;
        let x2 = 0.5 * (self.s2 + e2);
        let xy2 = 0.25 * (self.s2 * self.s2 - e2 * e2);
        let second = if e2 > self.m { x2 * (t - x2) / 2.0 } else { (t + self.s2).powi(2) / 16.0 - xy2 / 2.0 };
        self.lo_const + second
    }

    fn f_hi(&self, e2: f64) -> f64 {
        self.hi_const + 0.25 * (self.s2 * self.s2 - e2 * e2) / 2.0
    }

    fn z(&self, e2: f64) -> f64 {
        self.f_lo(e2).max(self.f_hi(e2))
    }

    /// `∫ z de₂` over `[e1, s2]`, exact up to rounding: the integrand is
    /// split where a branch changes or the two candidates cross, and each
    /// quadratic piece is integrated by Simpson's rule.
    fn integral(&self) -> f64 {
        let (lo, hi) = (self.e1, self.s2);
        if !(hi > lo) {
            return 0.0;
        }
        let mut cuts = vec![lo, hi];
        if self.m > lo && self.m < hi {
            cuts.push(self.m);
        }
        cuts.sort_by(f64::total_cmp);
        let mut fine = Vec::new();
        for w in cuts.windows(2) {
            fine.push(w[0]);
            let diff = |e: f64| self.f_lo(e) - self.f_hi(e);
            let (a, b, c) = fit(&diff, w[0], w[1]);
            let mut r = Vec::new();
            roots_in(a, b, c, w[0], w[1], &mut r);
            fine.extend(r);
        }
        fine.push(hi);
        fine.sort_by(f64::total_cmp);
        compensated_sum(fine.windows(2).map(|w| {
            let (a, b) = (w[0], w[1]);
            (b - a) / 6.0 * (self.z(a) + 4.0 * self.z(0.5 * (a + b)) + self.z(b))
        }))
    }
}

/// Volume of the `H5` limit ball by nested adaptive quadrature over the
/// fundamental domain, times the 128-fold symmetry and the ¼ Jacobian of
/// the `(s, e)` coordinates.
pub fn shape_volume_h5() -> Result<Estimate> {
    shape_volume_h5_with(1e-11)
}

/// Tolerances below `1e-14` cannot be met in double precision and are
/// refused up front.
pub fn shape_volume_h5_with(tol: f64) -> Result<Estimate> {
    if !(tol >= 1e-14) {
        return Err(Error::NonConvergence {
            msg: format!("tolerance {tol:e} is below what double precision can resolve"),
            achieved: 1e-14,
        });
    }
    const PANELS: usize = 32;
    const MAXI: usize = 2000;
    let inner_e1 = |s1: f64, s2: f64| -> Result<Estimate> {
        let top = s1.min(s2);
        let m = (1.0 - s1 - s2) / 2.0;
        // kinks: the t = 1 - s2 candidate changes branch at e1 = m; the
        // crossing curve of the two candidates meets e2 = s2 where
        // e1² = s2² − (s1 − s2)(1 − s1 − s2).
        let mut br = vec![m];
        let k = s2 * s2 - (s1 - s2) * (1.0 - s1 - s2);
        if k > 0.0 {
            br.push(k.sqrt());
        }
        let f = |e1: f64| H5Slice::new(s1, s2, e1).integral();
        integrate(&f, 0.0, top, &br, tol * 1e-2, tol, MAXI)
    };
    let mid = |s1: f64| -> Result<Estimate> {
        let err = std::cell::RefCell::new(None);
        let f = |s2: f64| match inner_e1(s1, s2) {
            Ok(e) => e.value,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                0.0
            }
        };
        let top = 1.0 - s1;
        let r = integrate(&f, 0.0, top, &[s1, (1.0 - s1) / 3.0, (1.0 - s1) / 2.0], tol * 1e-2, tol, MAXI);
        match err.into_inner() {
            Some(e) => Err(e),
            None => r,
        }
    };
    let panels: Vec<Result<Estimate>> = (0..PANELS)
        .into_par_iter()
        .map(|k| {
            let a = k as f64 / PANELS as f64;
            let b = (k + 1) as f64 / PANELS as f64;
            let err = std::cell::RefCell::new(None);
            let f = |s1: f64| match mid(s1) {
                Ok(e) => e.value,
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    0.0
                }
            };
            let r = integrate(&f, a, b, &[1.0 / 3.0, 0.5], tol * 1e-3, tol, MAXI);
            match err.into_inner() {
                Some(e) => Err(e),
                None => r,
            }
        })
        .collect();
    let mut vals = Vec::with_capacity(PANELS);
    let mut error = 0.0;
    for p in panels {
        let p = p?;
        vals.push(p.value);
        error += p.error;
    }
    let factor = 128.0 * 2.0 * 0.25;
    Ok(Estimate { value: factor * compensated_sum(vals), error: factor * error })
}

/// Monte-Carlo estimate of the `H5` volume and its standard error, using
/// uniform samples of the ℓ¹ ball and the sup-over-`t` profile.
pub fn mc_volume_h5(samples: usize, seed: u64) -> (f64, f64) {
    const CHUNK: usize = 1 << 16;
    let chunks = samples.div_ceil(CHUNK);
    let sums: Vec<(f64, f64, usize)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let n = CHUNK.min(samples - c * CHUNK);
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let p = sample_l1_ball(&mut rng);
                let z = 2.0 * z_profile_h5_sup(p).expect("sample lies in the ball");
                s += z;
                s2 += z * z;
            }
            (s, s2, n)
        })
        .collect();
    let n: usize = sums.iter().map(|x| x.2).sum();
    let s = compensated_sum(sums.iter().map(|x| x.0));
    let s2 = compensated_sum(sums.iter().map(|x| x.1));
    let mean = s / n as f64;
    let var = (s2 / n as f64 - mean * mean).max(0.0);
    let ball = 2.0 / 3.0;
    (ball * mean, ball * (var / n as f64).sqrt())
}

/// Uniform point of `{Σ|p_i| ≤ 1}` in R⁴: normalized exponential spacings
/// give a uniform point of the simplex, then random signs.
fn sample_l1_ball(rng: &mut ChaCha8Rng) -> [f64; 4] {
    let e: [f64; 5] = std::array::from_fn(|_| -(1.0 - rng.gen::<f64>()).ln());
    let total: f64 = e.iter().sum();
    std::array::from_fn(|i| {
        let v = e[i] / total;
        if rng.gen::<bool>() {
            -v
        } else {
            v
        }
    })
}
