//! Closed intervals of doubles with outward rounding.
//!
//! Each operation computes the rounded result and then widens it by one
//! ulp per side (two for the library transcendental functions), which
//! covers the rounding error of correctly rounded or faithfully rounded
//! primitives.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |x, _| x.next_down())
}

fn up(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |x, _| x.next_up())
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Encloses an integer that may not be representable as a double.
    pub fn from_u128(x: u128) -> Self {
        let f = x as f64;
        if f as u128 == x && f < 9.0e15 {
            Interval::point(f)
        } else {
            Interval { lo: f.next_down(), hi: f.next_up() }
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn sqrt(self) -> Self {
        Interval { lo: down(self.lo.max(0.0).sqrt(), 1).max(0.0), hi: up(self.hi.max(0.0).sqrt(), 1) }
    }

    pub fn abs(self) -> Self {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval { lo: 0.0, hi: self.hi.max(-self.lo) }
        }
    }

    /// `sin` on an interval inside `[-π/2, π/2]`, where it is increasing.
    pub fn sin_monotone(self) -> Self {
        assert!(self.lo >= -1.5707963267948966 && self.hi <= 1.5707963267948966);
        Interval { lo: down(self.lo.sin(), 2).max(-1.0), hi: up(self.hi.sin(), 2).min(1.0) }
    }

    /// `cos` on an interval inside `[0, π]`, where it is decreasing.
    pub fn cos_monotone(self) -> Self {
        assert!(self.lo >= 0.0 && self.hi <= std::f64::consts::PI);
        Interval { lo: down(self.hi.cos(), 2).max(-1.0), hi: up(self.lo.cos(), 2).min(1.0) }
    }

    pub fn cbrt(self) -> Self {
        Interval { lo: down(self.lo.cbrt(), 2), hi: up(self.hi.cbrt(), 2) }
    }

    pub fn min(self, o: Self) -> Self {
        Interval { lo: self.lo.min(o.lo), hi: self.hi.min(o.hi) }
    }

    pub fn square(self) -> Self {
        let a = self.abs();
        Interval { lo: down(a.lo * a.lo, 1).max(0.0), hi: up(a.hi * a.hi, 1) }
    }
}

/// `π` enclosed between neighbouring doubles.
pub fn pi() -> Interval {
    let p = std::f64::consts::PI;
    Interval { lo: p.next_down(), hi: p.next_up() }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval { lo: down(self.lo + o.lo, 1), hi: up(self.hi + o.hi, 1) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        self + (-o)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo: down(lo, 1), hi: up(hi, 1) }
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, o: Interval) -> Interval {
        assert!(o.lo > 0.0 || o.hi < 0.0, "division by an interval containing zero");
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo: down(lo, 1), hi: up(hi, 1) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encloses_exact_values() {
        let third = Interval::point(1.0) / Interval::point(3.0);
        assert!(third.lo < 1.0 / 3.0 + 1e-17 && third.hi > 1.0 / 3.0 - 1e-17);
        let s = (third * Interval::point(3.0)).sqrt();
        assert!(s.contains(1.0));
        let big = Interval::from_u128(3u128.pow(40));
        assert!(big.lo < 3f64.powi(40) && big.hi > 3f64.powi(40) || big.contains(3f64.powi(40)));
        let c = (pi() / Interval::point(3.0)).cos_monotone();
        assert!(c.contains(0.5));
        let sn = (pi() / Interval::point(6.0)).sin_monotone();
        assert!(sn.contains(0.5));
        assert!(Interval::new(-2.0, 1.0).abs() == Interval::new(0.0, 2.0));
    }
}
