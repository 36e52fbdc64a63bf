//! Two-step nilpotent groups in Mal'cev normal-form coordinates.
//!
//! A group is given by a horizontal dimension `m`, a central dimension `c`
//! and an integer tensor `Q` of shape `m × m × c`. Elements are pairs
//! `(a, z)` with `a ∈ Z^m`, `z ∈ Z^c` and the product
//!
//! ```text
//! (a, z) · (a', z') = (a + a', z + z' + Q(a, a'))
//! ```
//!
//! The Lie bracket is `B(a, a') = Q(a, a') − Q(a', a)`. Exponential
//! coordinates of the ambient real group are `(a, z − ½ Q(a, a))`, in which
//! the law becomes the graded one `(a + a', w + w' + ½ B(a, a'))`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grading::{GradingDims, RealPoint};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    m: usize,
    c: usize,
    /// Row-major `q[(i * m + j) * c + k]`.
    q: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub a: Vec<i64>,
    pub z: Vec<BigInt>,
}

impl Element {
    pub fn identity(m: usize, c: usize) -> Self {
        Element { a: vec![0; m], z: vec![BigInt::zero(); c] }
    }

    pub fn new(a: Vec<i64>, z: Vec<i64>) -> Self {
        Element { a, z: z.into_iter().map(BigInt::from).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.a.iter().all(|x| *x == 0) && self.z.iter().all(Zero::is_zero)
    }

    /// Central coordinates as machine integers, if they fit.
    pub fn z_i64(&self) -> Option<Vec<i64>> {
        self.z.iter().map(|z| z.to_i64()).collect()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.a.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ";")?;
        for (i, x) in self.z.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl GroupSpec {
    /// Builds a group from its cocycle and checks that the bracket spans the
    /// declared central layer.
    pub fn new(m: usize, c: usize, q: Vec<i64>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("horizontal dimension must be positive".into()));
        }
        if q.len() != m * m * c {
            return Err(Error::Invalid(format!(
                "cocycle has {} entries, expected {}",
                q.len(),
                m * m * c
            )));
        }
        let g = GroupSpec { m, c, q };
        if c > 0 {
            let rank = g.bracket_rank();
            if rank < c {
                return Err(Error::Invalid(format!(
                    "bracket image has rank {rank} but central layer has dimension {c}"
                )));
            }
        }
        Ok(g)
    }

    pub fn abelian(m: usize) -> Self {
        GroupSpec { m, c: 0, q: Vec::new() }
    }

    pub fn heisenberg3() -> Self {
        let mut q = vec![0; 4];
        q[1] = 1; // Q(e0, e1) = 1
        GroupSpec { m: 2, c: 1, q }
    }

    /// Coordinates `(x1, y1, x2, y2; z)`.
    pub fn heisenberg5() -> Self {
        let mut q = vec![0; 16];
        q[1] = 1; // Q(e0, e1)
        q[2 * 4 + 3] = 1; // Q(e2, e3)
        GroupSpec { m: 4, c: 1, q }
    }

    /// `Z × H3(Z)` with coordinates `(v, x, y; z)`.
    pub fn heisenberg3_times_z() -> Self {
        let mut q = vec![0; 9];
        q[3 + 2] = 1; // Q(e1, e2)
        GroupSpec { m: 3, c: 1, q }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "H3" => Some(Self::heisenberg3()),
            "H5" => Some(Self::heisenberg5()),
            "H3xZ" | "ZxH3" => Some(Self::heisenberg3_times_z()),
            "Z" => Some(Self::abelian(1)),
            "Z2" => Some(Self::abelian(2)),
            _ => None,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn is_abelian(&self) -> bool {
        self.c == 0
    }

    pub fn q(&self, i: usize, j: usize, k: usize) -> i64 {
        self.q[(i * self.m + j) * self.c + k]
    }

    pub fn bracket_coeff(&self, i: usize, j: usize, k: usize) -> i64 {
        self.q(i, j, k) - self.q(j, i, k)
    }

    pub fn grading(&self) -> GradingDims {
        if self.c == 0 {
            GradingDims::new(vec![self.m]).expect("m > 0")
        } else {
            GradingDims::new(vec![self.m, self.c]).expect("m, c > 0")
        }
    }

    pub fn identity(&self) -> Element {
        Element::identity(self.m, self.c)
    }

    fn check(&self, g: &Element) -> Result<()> {
        if g.a.len() != self.m || g.z.len() != self.c {
            return Err(Error::Contract(format!(
                "element {g} does not have shape ({}; {})",
                self.m, self.c
            )));
        }
        Ok(())
    }

    /// `Q(a, b)` evaluated exactly.
    pub fn cocycle(&self, a: &[i64], b: &[i64]) -> Vec<BigInt> {
        (0..self.c)
            .map(|k| {
                let mut acc = BigInt::zero();
                for i in 0..self.m {
                    if a[i] == 0 {
                        continue;
                    }
                    for j in 0..self.m {
                        let q = self.q(i, j, k);
                        if q != 0 && b[j] != 0 {
                            acc += BigInt::from(q) * a[i] * b[j];
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// `B(a, b) = Q(a, b) − Q(b, a)`.
    pub fn bracket(&self, a: &[i64], b: &[i64]) -> Vec<BigInt> {
        let ab = self.cocycle(a, b);
        let ba = self.cocycle(b, a);
        ab.into_iter().zip(ba).map(|(x, y)| x - y).collect()
    }

    pub fn multiply(&self, g: &Element, h: &Element) -> Result<Element> {
        self.check(g)?;
        self.check(h)?;
        let a = g
            .a
            .iter()
            .zip(&h.a)
            .map(|(x, y)| x.checked_add(*y).ok_or(Error::Overflow("horizontal coordinate")))
            .collect::<Result<Vec<_>>>()?;
        let q = self.cocycle(&g.a, &h.a);
        let z = g
            .z
            .iter()
            .zip(&h.z)
            .zip(q)
            .map(|((x, y), w)| x + y + w)
            .collect();
        Ok(Element { a, z })
    }

    pub fn inverse(&self, g: &Element) -> Result<Element> {
        self.check(g)?;
        let a = g
            .a
            .iter()
            .map(|x| x.checked_neg().ok_or(Error::Overflow("horizontal coordinate")))
            .collect::<Result<Vec<_>>>()?;
        let qaa = self.cocycle(&g.a, &g.a);
        let z = g.z.iter().zip(qaa).map(|(z, w)| w - z).collect();
        Ok(Element { a, z })
    }

    /// `[g, h] = g h g⁻¹ h⁻¹ = (0, B(g.a, h.a))`.
    pub fn commutator(&self, g: &Element, h: &Element) -> Result<Element> {
        self.check(g)?;
        self.check(h)?;
        Ok(Element { a: vec![0; self.m], z: self.bracket(&g.a, &h.a) })
    }

    /// Projection to the abelianization.
    pub fn pi1(&self, g: &Element) -> Result<Vec<i64>> {
        self.check(g)?;
        Ok(g.a.clone())
    }

    pub fn power(&self, g: &Element, n: u64) -> Result<Element> {
        let mut acc = self.identity();
        for _ in 0..n {
            acc = self.multiply(&acc, g)?;
        }
        Ok(acc)
    }

    /// Exponential coordinates of a lattice element in the ambient real group.
    pub fn to_exp(&self, g: &Element) -> RealPoint {
        let qaa = self.cocycle(&g.a, &g.a);
        let h = g.a.iter().map(|x| *x as f64).collect();
        let v = g
            .z
            .iter()
            .zip(qaa)
            .map(|(z, q)| big_to_f64(z) - 0.5 * big_to_f64(&q))
            .collect();
        RealPoint { h, v }
    }

    /// Real `Q(a, b)`.
    pub fn cocycle_real(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        (0..self.c)
            .map(|k| {
                let mut acc = 0.0;
                for i in 0..self.m {
                    for j in 0..self.m {
                        let q = self.q(i, j, k);
                        if q != 0 {
                            acc += q as f64 * a[i] * b[j];
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// Graded (stratified) product in exponential coordinates.
    pub fn mul_graded(&self, x: &RealPoint, y: &RealPoint) -> RealPoint {
        let ab = self.cocycle_real(&x.h, &y.h);
        let ba = self.cocycle_real(&y.h, &x.h);
        RealPoint {
            h: x.h.iter().zip(&y.h).map(|(a, b)| a + b).collect(),
            v: (0..self.c).map(|k| x.v[k] + y.v[k] + 0.5 * (ab[k] - ba[k])).collect(),
        }
    }

    /// Normal-form product extended to real coordinates.
    pub fn mul_normal_real(&self, x: &RealPoint, y: &RealPoint) -> RealPoint {
        let ab = self.cocycle_real(&x.h, &y.h);
        RealPoint {
            h: x.h.iter().zip(&y.h).map(|(a, b)| a + b).collect(),
            v: (0..self.c).map(|k| x.v[k] + y.v[k] + ab[k]).collect(),
        }
    }

    fn bracket_rank(&self) -> usize {
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for i in 0..self.m {
            for j in (i + 1)..self.m {
                rows.push(
                    (0..self.c)
                        .map(|k| BigRational::from_integer(self.bracket_coeff(i, j, k).into()))
                        .collect(),
                );
            }
        }
        rational_rank(rows, self.c)
    }

    /// Text form: a header line `m c`, then one `i j k value` line per
    /// nonzero cocycle entry (indices zero-based).
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.m, self.c);
        for i in 0..self.m {
            for j in 0..self.m {
                for k in 0..self.c {
                    let v = self.q(i, j, k);
                    if v != 0 {
                        s.push_str(&format!("{i} {j} {k} {v}\n"));
                    }
                }
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut q = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let perr = |msg: String| Error::Parse { line: lineno + 1, msg };
            match header {
                None => {
                    if toks.len() != 2 {
                        return Err(perr("expected header `m c`".into()));
                    }
                    let m = toks[0].parse::<usize>().map_err(|e| perr(e.to_string()))?;
                    let c = toks[1].parse::<usize>().map_err(|e| perr(e.to_string()))?;
                    header = Some((m, c));
                    q = vec![0i64; m * m * c];
                }
                Some((m, c)) => {
                    if toks.len() != 4 {
                        return Err(perr("expected `i j k value`".into()));
                    }
                    let idx = |t: &str, bound: usize| -> Result<usize> {
                        let v = t.parse::<usize>().map_err(|e| perr(e.to_string()))?;
                        if v >= bound {
                            return Err(perr(format!("index {v} out of range")));
                        }
                        Ok(v)
                    };
                    let i = idx(toks[0], m)?;
                    let j = idx(toks[1], m)?;
                    let k = idx(toks[2], c)?;
                    let v = toks[3].parse::<i64>().map_err(|e| perr(e.to_string()))?;
                    q[(i * m + j) * c + k] = v;
                }
            }
        }
        let (m, c) = header.ok_or(Error::Parse { line: 0, msg: "empty group file".into() })?;
        GroupSpec::new(m, c, q)
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupSpec::preset(s).map_or_else(|| GroupSpec::parse(s), Ok)
    }
}

pub(crate) fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn rational_rank(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> usize {
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &pivot;
                for k in col..ncols {
                    let d = &f * &rows[rank][k];
                    rows[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: &[i64], z: &[i64]) -> Element {
        Element::new(a.to_vec(), z.to_vec())
    }

    #[test]
    fn h3_product_and_inverse() {
        let g = GroupSpec::heisenberg3();
        let x = e(&[1, 0], &[0]);
        let y = e(&[0, 1], &[0]);
        assert_eq!(g.multiply(&x, &y).unwrap(), e(&[1, 1], &[1]));
        assert_eq!(g.multiply(&x, &g.identity()).unwrap(), x);
        assert_eq!(g.inverse(&x).unwrap(), e(&[-1, 0], &[0]));
        assert_eq!(g.inverse(&g.identity()).unwrap(), g.identity());
        let w = e(&[1, 1], &[1]);
        let wi = g.inverse(&w).unwrap();
        assert_eq!(wi, e(&[-1, -1], &[0]));
        assert!(g.multiply(&w, &wi).unwrap().is_identity());
    }

    #[test]
    fn h3_commutator_is_central_generator() {
        let g = GroupSpec::heisenberg3();
        let a = e(&[1, 0], &[0]);
        let b = e(&[0, 1], &[0]);
        let ai = g.inverse(&a).unwrap();
        let bi = g.inverse(&b).unwrap();
        let chained = [&b, &ai, &bi]
            .iter()
            .try_fold(a.clone(), |acc, x| g.multiply(&acc, x))
            .unwrap();
        assert_eq!(chained, e(&[0, 0], &[1]));
        assert_eq!(g.commutator(&a, &b).unwrap(), chained);
        assert!(g.commutator(&a, &a).unwrap().is_identity());
    }

    #[test]
    fn h5_cross_pairs_commute() {
        let g = GroupSpec::heisenberg5();
        let a1 = e(&[1, 0, 0, 0], &[0]);
        let a2 = e(&[0, 0, 1, 0], &[0]);
        let b2 = e(&[0, 0, 0, 1], &[0]);
        assert!(g.commutator(&a1, &a2).unwrap().is_identity());
        assert!(g.commutator(&a1, &b2).unwrap().is_identity());
        let b1 = e(&[0, 1, 0, 0], &[0]);
        assert_eq!(g.commutator(&a2, &b2).unwrap(), g.commutator(&a1, &b1).unwrap());
    }

    #[test]
    fn shape_mismatch_is_contract_error() {
        let g = GroupSpec::heisenberg3();
        let bad = e(&[1, 0, 0], &[0]);
        assert!(matches!(g.multiply(&bad, &g.identity()), Err(Error::Contract(_))));
    }

    #[test]
    fn rejects_degenerate_central_layer() {
        // Q symmetric: bracket vanishes, so the declared central layer is not [N, N].
        let q = vec![0, 1, 1, 0];
        assert!(GroupSpec::new(2, 1, q).is_err());
    }

    #[test]
    fn associativity_exhaustive_h3() {
        let g = GroupSpec::heisenberg3();
        let r = -3..=3;
        let mut elems = Vec::new();
        for x in r.clone() {
            for y in r.clone() {
                for z in [-3i64, 0, 2] {
                    elems.push(e(&[x, y], &[z]));
                }
            }
        }
        for a in elems.iter().step_by(5) {
            for b in elems.iter().step_by(3) {
                let ab = g.multiply(a, b).unwrap();
                for c in elems.iter().step_by(7) {
                    let l = g.multiply(&ab, c).unwrap();
                    let rr = g.multiply(a, &g.multiply(b, c).unwrap()).unwrap();
                    assert_eq!(l, rr);
                }
            }
        }
    }

    #[test]
    fn text_round_trip_and_presets() {
        for name in ["H3", "H5", "H3xZ"] {
            let g = GroupSpec::preset(name).unwrap();
            assert_eq!(GroupSpec::parse(&g.to_text()).unwrap(), g);
        }
        let g: GroupSpec = "# heisenberg\n2 1\n0 1 0 1\n".parse().unwrap();
        assert_eq!(g, GroupSpec::heisenberg3());
        assert!(matches!(GroupSpec::parse("2 1\n0 5 0 1\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn exp_coordinates_linearize_the_law() {
        let g = GroupSpec::heisenberg3();
        let x = e(&[2, 3], &[5]);
        let y = e(&[-1, 4], &[-2]);
        let xy = g.multiply(&x, &y).unwrap();
        let lhs = g.to_exp(&xy);
        let rhs = g.mul_graded(&g.to_exp(&x), &g.to_exp(&y));
        assert_eq!(lhs, rhs);
    }
}
