//! Brute-force Dido oracle: dynamic programming over lattice paths whose
//! steps are the vertices of the unit polygon.
//!
//! Any direction of the plane is a positive combination of two adjacent
//! vertices with the same norm length, so vertex-step paths approximate
//! every path of a given length. One table gives every endpoint at once.
//! This does not use the isoperimetrix in any way.

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::norm::PolygonalNorm;

const UNREACHED: i64 = i64::MIN;

pub struct DidoDp {
    steps: usize,
    /// Lattice units per unit of length times `steps`.
    scale: i64,
    half: i64,
    width: usize,
    last: Vec<i64>,
    prev: Vec<i64>,
}

impl DidoDp {
    /// Runs `steps` rounds of the recursion for paths of unit length.
    pub fn new(p: &PolygonalNorm, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::Domain("need at least two steps".into()));
        }
        let den = p
            .vertices()
            .iter()
            .flat_map(|v| v.iter())
            .fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
        let den = den.to_i64().ok_or(Error::Overflow("vertex denominators"))?;
        let vecs: Vec<[i64; 2]> = p
            .vertices()
            .iter()
            .map(|v| {
                let f = |x: &crate::norm::Q| (x * crate::norm::q(den)).to_integer().to_i64().unwrap();
                [f(&v[0]), f(&v[1])]
            })
            .collect();
        let reach = vecs.iter().map(|v| v[0].abs().max(v[1].abs())).max().unwrap() * steps as i64;
        let width = (2 * reach + 1) as usize;
        if width.checked_mul(width).map_or(true, |c| c > 60_000_000) {
            return Err(Error::Budget(format!("DP grid {width}x{width} is too large")));
        }
        let idx = |x: i64, y: i64| ((y + reach) as usize) * width + (x + reach) as usize;
        let mut cur = vec![UNREACHED; width * width];
        cur[idx(0, 0)] = 0;
        let mut prev = cur.clone();
        for t in 0..steps {
            let bound = vecs.iter().map(|v| v[0].abs().max(v[1].abs())).max().unwrap() * (t as i64 + 1);
            let mut next = vec![UNREACHED; width * width];
            next.par_chunks_mut(width).enumerate().for_each(|(row, out)| {
                let y = row as i64 - reach;
                if y.abs() > bound {
                    return;
                }
                for x in -bound..=bound {
                    let mut best = UNREACHED;
                    for s in &vecs {
                        let (px, py) = (x - s[0], y - s[1]);
                        if px.abs() > reach || py.abs() > reach {
                            continue;
                        }
                        let v = cur[((py + reach) as usize) * width + (px + reach) as usize];
                        if v != UNREACHED {
                            best = best.max(v + x * s[1] - y * s[0]);
                        }
                    }
                    out[(x + reach) as usize] = best;
                }
            });
            prev = std::mem::replace(&mut cur, next);
        }
        Ok(DidoDp { steps, scale: den * steps as i64, half: reach, width, last: cur, prev })
    }

    fn at(&self, table: &[i64], x: i64, y: i64) -> i64 {
        if x.abs() > self.half || y.abs() > self.half {
            return UNREACHED;
        }
        table[((y + self.half) as usize) * self.width + (x + self.half) as usize]
    }

    /// Approximate maximal sweep area for unit length ending at `v`.
    ///
    /// Paths of `steps` and `steps − 1` steps are both admitted so that both
    /// lattice parities are reachable; among the reachable cells next to the
    /// target the closest one is used.
    pub fn z(&self, v: [f64; 2]) -> Option<f64> {
        let tx = v[0] * self.scale as f64;
        let ty = v[1] * self.scale as f64;
        let (cx, cy) = (tx.round() as i64, ty.round() as i64);
        let mut best: Option<(f64, i64)> = None;
        for dy in -1..=1 {
            for dx in -1..=1 {
                let (x, y) = (cx + dx, cy + dy);
                let val = self.at(&self.last, x, y).max(self.at(&self.prev, x, y));
                if val == UNREACHED {
                    continue;
                }
                let dist = (x as f64 - tx).powi(2) + (y as f64 - ty).powi(2);
                best = match best {
                    Some((d, b)) if d < dist - 1e-9 => Some((d, b)),
                    Some((d, b)) if (d - dist).abs() <= 1e-9 => Some((d, b.max(val))),
                    _ => Some((dist, val)),
                };
            }
        }
        let s = self.scale as f64;
        best.map(|(_, val)| val as f64 / (2.0 * s * s))
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

/// Exact doubled area is an integer; convenience for tests on tiny grids.
pub fn brute_force_doubled_area(steps: &[[i64; 2]], k: usize, end: [i64; 2]) -> Option<i64> {
    fn rec(steps: &[[i64; 2]], k: usize, p: [i64; 2], acc: i64, end: [i64; 2], best: &mut Option<i64>) {
        if k == 0 {
            if p == end {
                *best = Some(best.map_or(acc, |b| b.max(acc)));
            }
            return;
        }
        for s in steps {
            let q = [p[0] + s[0], p[1] + s[1]];
            rec(steps, k - 1, q, acc + p[0] * s[1] - p[1] * s[0], end, best);
        }
    }
    let mut best = None;
    rec(steps, k, [0, 0], 0, end, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_exhaustive_search_on_small_grid() {
        let p = PolygonalNorm::l1();
        let dp = DidoDp::new(&p, 6).unwrap();
        let steps = [[1, 0], [0, 1], [-1, 0], [0, -1]];
        for x in -6i64..=6 {
            for y in -6i64..=6 {
                if (x + y).rem_euclid(2) != 0 || x.abs() + y.abs() > 6 {
                    continue;
                }
                let brute = brute_force_doubled_area(&steps, 6, [x, y]).unwrap();
                assert_eq!(dp.at(&dp.last, x, y), brute, "at {x},{y}");
            }
        }
    }

    #[test]
    fn l1_closed_loop_and_chord() {
        let dp = DidoDp::new(&PolygonalNorm::l1(), 200).unwrap();
        assert!((dp.z([0.0, 0.0]).unwrap() - 1.0 / 16.0).abs() < 1e-3);
        assert!((dp.z([0.5, 0.0]).unwrap() - 1.0 / 8.0).abs() < 1e-3);
        assert!(dp.z([1.0, 0.0]).unwrap().abs() < 1e-3);
    }
}
