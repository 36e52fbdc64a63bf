//! Homogeneous Carnot-Carathéodory distance read off a limit shape, and
//! finite-radius comparisons between word metrics and that distance.

use std::sync::OnceLock;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::ball::{Ball, BfsOptions, GeneratingSet};
use crate::error::{Error, Result};
use crate::grading::RealPoint;
use crate::shape::{LimitNorm, LimitShape};

const REL_TOL: f64 = 1e-12;

/// Is `δ_{1/t}(p)` inside the shape?
fn inside_at(shape: &LimitShape, h: &[f64], w: f64, t: f64) -> bool {
    let hs: Vec<f64> = h.iter().map(|x| x / t).collect();
    if shape.horizontal_norm(&hs) > 1.0 {
        return false;
    }
    match shape.profile(&hs) {
        Some(z) => w / (t * t) <= z,
        None => false,
    }
}

/// Distance from the identity to `p` (exponential coordinates) in the
/// homogeneous metric whose unit ball is `shape`.
pub fn cc_distance(shape: &LimitShape, p: &RealPoint) -> f64 {
    let nh = shape.horizontal_norm(&p.h);
    let w: f64 = p.v.iter().map(|x| x.abs()).sum();
    if w == 0.0 || shape.is_abelian() {
        return nh;
    }
    let mut lo = nh.max((w / shape.z_max()).sqrt());
    let mut hi = nh + (w / shape.z_origin()).sqrt();
    if inside_at(shape, &p.h, w, lo) {
        return lo;
    }
    // a little slack so rounding at the upper end cannot break the bracket
    while !inside_at(shape, &p.h, w, hi) {
        hi *= 1.0 + 1e-9;
    }
    while hi - lo > REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside_at(shape, &p.h, w, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn h3_shape() -> &'static LimitShape {
    static SHAPE: OnceLock<LimitShape> = OnceLock::new();
    SHAPE.get_or_init(LimitShape::h3_standard)
}

/// CC distance on `R × H3` for the horizontal space spanned by the `R`
/// direction shifted by `z0` in the centre: `|v| + d(x, y, z − v·z0)`.
pub fn bm_product_distance(z0: f64, v: f64, x: f64, y: f64, z: f64) -> f64 {
    v.abs() + cc_distance(h3_shape(), &RealPoint::new(vec![x, y], vec![z - v * z0]))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub max_dev: f64,
    pub mean_dev: f64,
    pub hausdorff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Mesh resolution behind the Hausdorff column.
    pub resolution: usize,
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,max_dev,mean_dev,hausdorff\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{}\n",
                r.n,
                r.max_dev,
                r.mean_dev,
                r.hausdorff
            ));
        }
        s
    }
}

/// Spheres larger than this are subsampled with a fixed stride.
pub const SPHERE_SAMPLE_LIMIT: usize = 200_000;

pub const DEFAULT_RESOLUTION: usize = 48;

fn row_point(shape: &LimitShape, ball: &Ball, i: usize) -> RealPoint {
    shape.group.to_exp(&ball.element(i))
}

fn sphere_deviation(shape: &LimitShape, ball: &Ball, n: usize, start: usize) -> (f64, f64) {
    let len = ball.sphere_len(n);
    let stride = len.div_ceil(SPHERE_SAMPLE_LIMIT).max(1);
    let idx: Vec<usize> = (0..len).step_by(stride).map(|k| start + k).collect();
    let devs: Vec<f64> = idx
        .par_iter()
        .map(|&i| {
            let d = cc_distance(shape, &row_point(shape, ball, i));
            (n as f64 / d - 1.0).abs()
        })
        .collect();
    let max = devs.iter().cloned().fold(0.0, f64::max);
    let mean = crate::quadrature::compensated_sum(devs.iter().cloned()) / devs.len() as f64;
    (max, mean)
}

/// Compares the word length on the spheres `S(n)` with the CC distance and
/// the rescaled balls with the shape, for every `n` in `radii`.
pub fn pansu_convergence(
    gs: &GeneratingSet,
    shape: &LimitShape,
    radii: &[usize],
    opts: &BfsOptions,
) -> Result<ConvergenceReport> {
    if radii.windows(2).any(|w| w[0] >= w[1]) || radii.first() == Some(&0) {
        return Err(Error::Invalid("radii must be positive and strictly increasing".into()));
    }
    let nmax = *radii.last().ok_or_else(|| Error::Invalid("no radii given".into()))?;
    let ball = Ball::enumerate(gs, nmax, opts)?;
    if ball.truncated {
        return Err(Error::Budget(format!("ball of radius {nmax} exceeds the memory budget")));
    }
    let starts: Vec<usize> = {
        let t = ball.table();
        t.rows.iter().map(|r| (r.ball - r.sphere) as usize).collect()
    };
    let rows = opts.run(|| -> Result<Vec<ConvergenceRow>> {
        radii
            .iter()
            .map(|&n| {
                let (max_dev, mean_dev) = sphere_deviation(shape, &ball, n, starts[n]);
                let hausdorff = ball_hausdorff(shape, &ball, n, DEFAULT_RESOLUTION)?;
                Ok(ConvergenceRow { n, max_dev, mean_dev, hausdorff })
            })
            .collect()
    })??;
    Ok(ConvergenceReport { rows, resolution: DEFAULT_RESOLUTION })
}

/// Uniform grid over points of dimension at most 3 for nearest-neighbour
/// queries.
struct PointGrid {
    cell: f64,
    pts: Vec<[f64; 3]>,
    buckets: FxHashMap<[i64; 3], Vec<u32>>,
}

impl PointGrid {
    fn new(pts: Vec<[f64; 3]>, cell: f64) -> Self {
        let mut buckets: FxHashMap<[i64; 3], Vec<u32>> = FxHashMap::default();
        for (i, p) in pts.iter().enumerate() {
            buckets.entry(Self::key(p, cell)).or_default().push(i as u32);
        }
        PointGrid { cell, pts, buckets }
    }

    fn key(p: &[f64; 3], cell: f64) -> [i64; 3] {
        p.map(|x| (x / cell).floor() as i64)
    }

    fn nearest(&self, p: &[f64; 3]) -> f64 {
        let k = Self::key(p, self.cell);
        let mut best = f64::INFINITY;
        for r in 0i64.. {
            // every point outside shell r is at least r·cell away
            if best <= r as f64 * self.cell || r > 1 << 20 {
                break;
            }
            for dx in -r..=r {
                for dy in -r..=r {
                    for dz in -r..=r {
                        if dx.abs().max(dy.abs()).max(dz.abs()) != r {
                            continue;
                        }
                        if let Some(b) = self.buckets.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                            for &i in b {
                                let q = &self.pts[i as usize];
                                let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
                                best = best.min(d);
                            }
                        }
                    }
                }
            }
        }
        best
    }
}

fn to3(p: &RealPoint) -> [f64; 3] {
    [p.h[0], p.h[1], p.v.first().copied().unwrap_or(0.0)]
}

/// Boundary and interior samples of a planar shape with at most one central
/// coordinate.
fn shape_samples(shape: &LimitShape, resolution: usize) -> Result<(Vec<[f64; 3]>, Vec<[f64; 3]>)> {
    let LimitNorm::Planar(p) = &shape.norm else {
        return Err(Error::Unsupported("Hausdorff estimates need a planar shape".into()));
    };
    if shape.group.c() > 1 {
        return Err(Error::Unsupported("Hausdorff estimates need at most one central coordinate".into()));
    }
    let r = resolution.max(1);
    let vs = p.vertices_f64();
    let mut rim = Vec::new();
    for k in 0..vs.len() {
        let (a, b) = (vs[k], vs[(k + 1) % vs.len()]);
        for s in 0..r {
            let t = s as f64 / r as f64;
            rim.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    let zmax = |h: [f64; 2]| shape.profile(&h).unwrap_or(0.0);
    let (mut boundary, mut all) = (Vec::new(), Vec::new());
    let levels = if shape.is_abelian() { 0 } else { r };
    for k in 0..=r {
        let f = k as f64 / r as f64;
        let ring: Vec<[f64; 2]> = if k == 0 { vec![[0.0, 0.0]] } else { rim.iter().map(|b| [b[0] * f, b[1] * f]).collect() };
        for h in ring {
            let z = zmax(h);
            for j in 0..=2 * levels {
                let s = if levels == 0 { 0.0 } else { j as f64 / levels as f64 - 1.0 };
                let pt = [h[0], h[1], s * z];
                let on_boundary = k == r || j == 0 || j == 2 * levels;
                if on_boundary {
                    boundary.push(pt);
                }
                all.push(pt);
            }
        }
    }
    Ok((boundary, all))
}

fn ball_hausdorff(shape: &LimitShape, ball: &Ball, n: usize, resolution: usize) -> Result<f64> {
    let (boundary, samples) = shape_samples(shape, resolution)?;
    let t = 1.0 / n as f64;
    let count = ball.table().ball(n).unwrap_or(0) as usize;
    let cloud: Vec<[f64; 3]> = (0..count)
        .into_par_iter()
        .map(|i| {
            let p = row_point(shape, ball, i);
            to3(&crate::grading::dilate_unchecked(t, &p))
        })
        .collect();
    let bgrid = PointGrid::new(boundary, 2.0 / resolution as f64);
    let outward = cloud
        .par_iter()
        .map(|p| {
            let rp = RealPoint::new(vec![p[0], p[1]], if shape.group.c() == 1 { vec![p[2]] } else { vec![] });
            if shape.contains(&rp) {
                0.0
            } else {
                bgrid.nearest(p)
            }
        })
        .reduce(|| 0.0, f64::max);
    let cgrid = PointGrid::new(cloud, t.max(1e-3));
    let inward = samples.par_iter().map(|p| cgrid.nearest(p)).reduce(|| 0.0, f64::max);
    Ok(outward.max(inward))
}

/// Sampled two-sided Hausdorff distance between `δ_{1/n}(B(n))` and the
/// shape, in exponential coordinates with the Euclidean metric. The shape is
/// sampled at the given resolution, which bounds the achievable accuracy.
pub fn rescaled_ball_hausdorff(
    gs: &GeneratingSet,
    shape: &LimitShape,
    n: usize,
    resolution: usize,
    opts: &BfsOptions,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("radius must be positive".into()));
    }
    let ball = Ball::enumerate(gs, n, opts)?;
    if ball.truncated {
        return Err(Error::Budget(format!("ball of radius {n} exceeds the memory budget")));
    }
    opts.run(|| ball_hausdorff(shape, &ball, n, resolution))?
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::dilate;
    use crate::group::GroupSpec;
    use crate::norm::PolygonalNorm;
    use crate::quasinorm::{planar_quasinorm, quasinorm};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng) -> RealPoint {
        let s = rng.gen_range(-3.0..3.0f64);
        RealPoint::new(vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)], vec![s * s.abs()])
    }

    #[test]
    fn known_distances() {
        let s = LimitShape::h3_standard();
        assert!((cc_distance(&s, &RealPoint::new(vec![0.0, 0.0], vec![1.0])) - 4.0).abs() < 1e-11);
        assert!((cc_distance(&s, &RealPoint::new(vec![1.0, 0.0], vec![0.0])) - 1.0).abs() < 1e-15);
        assert_eq!(cc_distance(&s, &RealPoint::origin(2, 1)), 0.0);
        // farthest central point over (1/2, 0) has area 1/8
        let d = cc_distance(&s, &RealPoint::new(vec![0.5, 0.0], vec![0.125]));
        assert!((d - 1.0).abs() < 1e-11);
    }

    #[test]
    fn scaling_symmetry_and_projection_bound() {
        let s = LimitShape::h3_standard();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let p = random_point(&mut rng);
            let t = rng.gen_range(0.05..20.0);
            let d = cc_distance(&s, &p);
            let dt = cc_distance(&s, &dilate(t, &p).unwrap());
            assert!((dt / (t * d) - 1.0).abs() < 1e-9);
            assert!((cc_distance(&s, &p.neg()) / d - 1.0).abs() < 1e-11);
            assert!(s.horizontal_norm(&p.h) <= d * (1.0 + 1e-12));
        }
    }

    #[test]
    fn quasinorm_sandwich() {
        let s = LimitShape::h3_standard();
        let qn = planar_quasinorm(&GroupSpec::heisenberg3(), &PolygonalNorm::l1(), 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for _ in 0..20_000 {
            let p = random_point(&mut rng);
            let r = cc_distance(&s, &p) / quasinorm(&qn, &p);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        assert!(lo > 0.2 && hi < 5.0, "{lo} {hi}");
    }

    #[test]
    fn product_distance() {
        for t in [1.0, 4.0, 16.0, 64.0f64] {
            let d0 = bm_product_distance(0.0, t, 0.0, 0.0, t);
            let d1 = bm_product_distance(1.0, t, 0.0, 0.0, t);
            assert!((d0 - (t + 4.0 * t.sqrt())).abs() < 1e-9 * d0);
            assert_eq!(d1, t);
        }
    }

    #[test]
    fn abelian_convergence_and_hausdorff() {
        let gs = GeneratingSet::standard(&GroupSpec::abelian(2));
        let shape = LimitShape::from_generators(&gs).unwrap();
        let rep = pansu_convergence(&gs, &shape, &[5, 10, 20], &BfsOptions::default()).unwrap();
        for r in &rep.rows {
            assert!(r.max_dev <= 2.0 / r.n as f64 + 1e-12);
            assert!(r.mean_dev <= r.max_dev);
        }
        let h = rescaled_ball_hausdorff(&gs, &shape, 20, 64, &BfsOptions::default()).unwrap();
        assert!(h <= 2.0 / 20.0, "{h}");
        assert!(rep.to_csv().starts_with("n,max_dev,mean_dev,hausdorff\n5,"));
    }

    #[test]
    fn h3_hausdorff_decreases() {
        let gs = GeneratingSet::standard(&GroupSpec::heisenberg3());
        let shape = LimitShape::h3_standard();
        let o = BfsOptions::default();
        let h8 = rescaled_ball_hausdorff(&gs, &shape, 8, 32, &o).unwrap();
        let h32 = rescaled_ball_hausdorff(&gs, &shape, 32, 32, &o).unwrap();
        assert!(h32 < h8, "{h8} {h32}");
    }

    #[test]
    fn self_distance_within_resolution() {
        let shape = LimitShape::h3_standard();
        let (b, all) = shape_samples(&shape, 24).unwrap();
        let g = PointGrid::new(all.clone(), 0.05);
        let worst = b.iter().map(|p| g.nearest(p)).fold(0.0, f64::max);
        assert_eq!(worst, 0.0);
        let coarse = PointGrid::new(shape_samples(&shape, 12).unwrap().1, 0.05);
        let d = all.iter().map(|p| coarse.nearest(p)).fold(0.0, f64::max);
        assert!(d <= 2.0 / 12.0, "{d}");
    }
}
