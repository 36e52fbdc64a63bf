//! Closed-form vertical profiles of the limit unit balls of `H3` and `H5`
//! with their standard generators (ℓ¹ horizontal norm).

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::norm::{q, Q};

const DOMAIN_TOL: f64 = 1e-12;

/// `t² z(x/t, y/t)` on the sector `0 ≤ y ≤ x`, `x + y ≤ t`.
fn zt_sector(t: f64, x: f64, y: f64) -> f64 {
    if y < 3.0 * x - t {
        x * (t - x) / 2.0
    } else {
        let s = t + x + y;
        s * s / 16.0 - x * y / 2.0
    }
}

fn sector(x: f64, y: f64) -> (f64, f64) {
    let (a, b) = (x.abs(), y.abs());
    if a >= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Maximal sweep area of an ℓ¹ path of length `t` from the origin to
/// `(x, y)`. Requires `|x| + |y| ≤ t`.
pub fn z_scaled_h3(t: f64, x: f64, y: f64) -> f64 {
    let (a, b) = sector(x, y);
    zt_sector(t, a, b).max(0.0)
}

/// Vertical extent of the `H3` limit ball above `(x, y)`.
pub fn z_profile_h3(x: f64, y: f64) -> Result<f64> {
    if !(x.abs() + y.abs() <= 1.0 + DOMAIN_TOL) {
        return Err(Error::Domain(format!("({x}, {y}) lies outside the unit ℓ¹ ball")));
    }
    Ok(z_scaled_h3(1.0, x, y))
}

/// Exact rational evaluation of the `H3` profile.
pub fn z_profile_h3_exact(x: &Q, y: &Q) -> Result<Q> {
    let (mut a, mut b) = (x.abs(), y.abs());
    if &a + &b > q(1) {
        return Err(Error::Domain("point lies outside the unit ℓ¹ ball".into()));
    }
    if b > a {
        std::mem::swap(&mut a, &mut b);
    }
    if b < &a * q(3) - q(1) {
        Ok(&a * (q(1) - &a) / q(2))
    } else {
        let s = q(1) + &a + &b;
        Ok(&s * &s / q(16) - &a * &b / q(2))
    }
}

/// Maps a point of R⁴ into the fundamental domain
/// `0 ≤ y_i ≤ x_i`, `x₂ − y₂ ≥ x₁ − y₁` using the symmetries of the profile.
pub fn reduce_h5(p: [f64; 4]) -> [f64; 4] {
    let (x1, y1) = sector(p[0], p[1]);
    let (x2, y2) = sector(p[2], p[3]);
    if x2 - y2 >= x1 - y1 {
        [x1, y1, x2, y2]
    } else {
        [x2, y2, x1, y1]
    }
}

fn check_h5(p: [f64; 4]) -> Result<()> {
    let n: f64 = p.iter().map(|v| v.abs()).sum();
    if !(n <= 1.0 + DOMAIN_TOL) {
        return Err(Error::Domain(format!("{p:?} lies outside the unit ℓ¹ ball")));
    }
    Ok(())
}

/// Closed form of the `H5` profile by regions of the fundamental domain.
pub fn z_profile_h5(p: [f64; 4]) -> Result<f64> {
    check_h5(p)?;
    let [x1, y1, x2, y2] = reduce_h5(p);
    let d = |xa: f64, ya: f64, xb: f64, _yb: f64| xa * ya / 2.0 + xb / 2.0 * (1.0 - xa - ya - xb);
    let c = |xa: f64, ya: f64, xb: f64, yb: f64| {
        let s = 1.0 + xa + ya - xb - yb;
        s * s / 16.0 + (xb * yb - xa * ya) / 2.0
    };
    let d1 = d(x1, y1, x2, y2);
    let d2 = d(x2, y2, x1, y1);
    let c1 = c(x1, y1, x2, y2);
    let c2 = c(x2, y2, x1, y1);
    let m = (1.0 - x1 - x2 - y1 - y2) / 2.0;
    let z = if m <= x1 - y1 {
        d1.max(d2)
    } else if m < x2 - y2 {
        d1.max(c1)
    } else {
        c1.max(c2)
    };
    Ok(z.max(0.0))
}

/// `sup_t z_t(v₁) + z_{1−t}(v₂)` by direct maximization over `t`: every
/// breakpoint of the piecewise quadratic and every interior critical point
/// of each quadratic piece is evaluated.
pub fn z_profile_h5_sup(p: [f64; 4]) -> Result<f64> {
    check_h5(p)?;
    let (x1, y1) = sector(p[0], p[1]);
    let (x2, y2) = sector(p[2], p[3]);
    let s1 = x1 + y1;
    let s2 = x2 + y2;
    let lo = s1;
    let hi = (1.0 - s2).max(lo);
    let g = |t: f64| zt_sector(t, x1, y1) + zt_sector(1.0 - t, x2, y2);
    let mut knots = vec![lo, hi];
    for b in [3.0 * x1 - y1, 1.0 - 3.0 * x2 + y2] {
        if b > lo && b < hi {
            knots.push(b);
        }
    }
    knots.sort_by(f64::total_cmp);
    let mut best = f64::NEG_INFINITY;
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        best = best.max(g(a)).max(g(b));
        if b - a > 1e-15 {
            let h = (b - a) / 2.0;
            let (fa, fm, fb) = (g(a), g(a + h), g(b));
            let curv = fa - 2.0 * fm + fb;
            if curv < 0.0 {
                let t = a + h + h * (fa - fb) / (2.0 * curv);
                if t > a && t < b {
                    best = best.max(g(t));
                }
            }
        }
    }
    if knots.len() == 1 || lo == hi {
        best = best.max(g(lo));
    }
    Ok(best.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::qf;

    #[test]
    fn h3_examples() {
        assert_eq!(z_profile_h3(0.0, 0.0).unwrap(), 1.0 / 16.0);
        assert_eq!(z_profile_h3(0.5, 0.0).unwrap(), 1.0 / 8.0);
        assert_eq!(z_profile_h3(1.0, 0.0).unwrap(), 0.0);
        assert!(z_profile_h3(0.8, 0.3).is_err());
    }

    #[test]
    fn h3_symmetries_and_tie() {
        for (x, y) in [(0.3, 0.1), (0.2, -0.45), (-0.6, 0.05)] {
            let z = z_profile_h3(x, y).unwrap();
            assert_eq!(z, z_profile_h3(-x, y).unwrap());
            assert_eq!(z, z_profile_h3(x, -y).unwrap());
            assert_eq!(z, z_profile_h3(y, x).unwrap());
        }
        // the two branches agree on y = 3x - 1
        for k in 1..10 {
            let x = qf(1, 3) + qf(k, 60);
            let y = &x * q(3) - q(1);
            if y > x {
                continue;
            }
            let first = &x * (q(1) - &x) / q(2);
            let s = q(1) + &x + &y;
            assert_eq!(first, &s * &s / q(16) - &x * &y / q(2));
        }
    }

    #[test]
    fn h5_examples() {
        assert_eq!(z_profile_h5([0.0; 4]).unwrap(), 1.0 / 16.0);
        assert_eq!(z_profile_h5([0.5, 0.0, 0.0, 0.0]).unwrap(), 1.0 / 8.0);
        assert_eq!(z_profile_h5_sup([0.0; 4]).unwrap(), 1.0 / 16.0);
        assert_eq!(z_profile_h5_sup([0.5, 0.0, 0.0, 0.0]).unwrap(), 1.0 / 8.0);
        assert!(z_profile_h5([0.5, 0.5, 0.1, 0.0]).is_err());
    }

    #[test]
    fn h5_restricts_to_h3() {
        for (x, y) in [(0.1, 0.05), (0.4, 0.2), (0.7, 0.1), (0.0, 0.3)] {
            let h3 = z_profile_h3(x, y).unwrap();
            assert!((z_profile_h5([x, y, 0.0, 0.0]).unwrap() - h3).abs() < 1e-15);
            assert!((z_profile_h5([0.0, 0.0, y, x]).unwrap() - h3).abs() < 1e-15);
        }
    }

    #[test]
    fn h5_closed_form_matches_sup() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut n = 0;
        let mut worst: f64 = 0.0;
        while n < 10_000 {
            let p: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            if p.iter().map(|v| v.abs()).sum::<f64>() > 1.0 {
                continue;
            }
            n += 1;
            let a = z_profile_h5(p).unwrap();
            let b = z_profile_h5_sup(p).unwrap();
            worst = worst.max((a - b).abs());
        }
        assert!(worst < 1e-12, "worst {worst}");
    }
}
