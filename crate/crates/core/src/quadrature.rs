//! Globally adaptive Gauss–Kronrod (7/15) quadrature on an interval with
//! user supplied breakpoints.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Estimate { value: k * h, error: ((k - g) * h).abs() }
}

/// Neumaier-compensated sum.
pub fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Integrates `f` over `[a, b]` until the summed error estimate is below
/// `max(abs_tol, rel_tol·|I|)`. Breakpoints inside `(a, b)` start as
/// interval boundaries, which keeps known kinks off the quadrature nodes.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<Estimate> {
    if !(b > a) {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|x| *x > a && *x < b).collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * (1.0 + y.abs()));
    let mut parts: Vec<(f64, f64, Estimate)> =
        cuts.windows(2).map(|w| (w[0], w[1], gk15(f, w[0], w[1]))).collect();
    loop {
        let value = compensated_sum(parts.iter().map(|p| p.2.value));
        let error: f64 = parts.iter().map(|p| p.2.error).sum();
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Estimate { value, error });
        }
        if parts.len() >= max_intervals {
            return Err(Error::NonConvergence {
                msg: format!("quadrature on [{a}, {b}] needs more than {max_intervals} intervals"),
                achieved: error,
            });
        }
        let (worst, _) = parts
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, p)| if p.2.error > acc.1 { (i, p.2.error) } else { acc });
        let (l, r, _) = parts[worst];
        let m = 0.5 * (l + r);
        if !(m > l && m < r) {
            return Err(Error::NonConvergence {
                msg: "quadrature interval can no longer be bisected".into(),
                achieved: error,
            });
        }
        parts[worst] = (l, m, gk15(f, l, m));
        parts.insert(worst + 1, (m, r, gk15(f, m, r)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let e = integrate(&|x: f64| x.powi(10) - 3.0 * x, 0.0, 2.0, &[], 1e-14, 0.0, 10).unwrap();
        assert!((e.value - (2f64.powi(11) / 11.0 - 6.0)).abs() < 1e-11);
    }

    #[test]
    fn kinks_and_singular_derivatives() {
        let f = |x: f64| (x - 0.3).abs();
        let e = integrate(&f, 0.0, 1.0, &[0.3], 1e-14, 0.0, 10).unwrap();
        assert!((e.value - (0.045 + 0.245)).abs() < 1e-14);
        let g = |x: f64| x.sqrt();
        let e = integrate(&g, 0.0, 1.0, &[], 1e-12, 0.0, 200).unwrap();
        assert!((e.value - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        let f = |x: f64| if x < 0.123_456_7 { 0.0 } else { 1.0 };
        let r = integrate(&f, 0.0, 1.0, &[], 1e-15, 0.0, 5);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn compensated_summation() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(xs), 2.0);
    }
}
