//! Centrally symmetric polygonal norms on the plane, in exact rational
//! arithmetic, with their polars and isoperimetrices.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type QPoint = [Q; 2];

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qpt(x: i64, y: i64) -> QPoint {
    [q(x), q(y)]
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Formats a rational as `p/q`, or `p` for integers.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Q::new(n, d))
    } else if let Ok(n) = s.parse::<BigInt>() {
        Ok(Q::from_integer(n))
    } else {
        // decimal literal, read exactly
        let (int, frac) = s.split_once('.').ok_or_else(bad)?;
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(n, d);
        Ok(if neg { -v } else { v })
    }
}

pub(crate) fn cross(a: &QPoint, b: &QPoint) -> Q {
    &a[0] * &b[1] - &a[1] * &b[0]
}

pub(crate) fn sub(a: &QPoint, b: &QPoint) -> QPoint {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

fn orient(o: &QPoint, a: &QPoint, b: &QPoint) -> Q {
    cross(&sub(a, o), &sub(b, o))
}

/// Unit ball of a norm on R², stored as its vertices in counter-clockwise
/// order. Vertex `i + n/2` is the negative of vertex `i`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<[String; 2]>", into = "Vec<[String; 2]>")]
pub struct PolygonalNorm {
    vertices: Vec<QPoint>,
    facets: Vec<QPoint>,
    vf: Vec<[f64; 2]>,
    ff: Vec<[f64; 2]>,
}

impl PartialEq for PolygonalNorm {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for PolygonalNorm {}

impl fmt::Debug for PolygonalNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> =
            self.vertices.iter().map(|v| format!("({}, {})", fmt_q(&v[0]), fmt_q(&v[1]))).collect();
        write!(f, "PolygonalNorm[{}]", vs.join(", "))
    }
}

impl PolygonalNorm {
    /// Validates a counter-clockwise vertex list. The list is rotated so the
    /// first vertex is canonical (largest x, then smallest y).
    pub fn new(vertices: Vec<QPoint>) -> Result<Self> {
        let n = vertices.len();
        if n < 4 || n % 2 != 0 {
            return Err(Error::Invalid(format!(
                "a centrally symmetric polygon needs an even number >= 4 of vertices, got {n}"
            )));
        }
        for i in 0..n {
            let o = orient(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
            if !o.is_positive() {
                return Err(Error::Invalid(
                    "vertices must be strictly convex and counter-clockwise".into(),
                ));
            }
        }
        for i in 0..n / 2 {
            let a = &vertices[i];
            let b = &vertices[i + n / 2];
            if a[0] != -b[0].clone() || a[1] != -b[1].clone() {
                return Err(Error::Invalid("polygon is not centrally symmetric".into()));
            }
        }
        // Convex and turning once around the origin: the origin is interior.
        for i in 0..n {
            if !cross(&vertices[i], &vertices[(i + 1) % n]).is_positive() {
                return Err(Error::Invalid("polygon winds more than once".into()));
            }
        }
        let start = (0..n)
            .max_by(|&i, &j| {
                let (a, b) = (&vertices[i], &vertices[j]);
                a[0].cmp(&b[0]).then(b[1].cmp(&a[1]))
            })
            .expect("non-empty");
        let mut v = vertices;
        v.rotate_left(start);
        let facets: Vec<QPoint> = (0..n)
            .map(|k| {
                let a = &v[k];
                let b = &v[(k + 1) % n];
                let det = cross(a, b);
                [(&b[1] - &a[1]) / &det, (&a[0] - &b[0]) / &det]
            })
            .collect();
        let to_f = |p: &QPoint| [q_to_f64(&p[0]), q_to_f64(&p[1])];
        Ok(PolygonalNorm {
            vf: v.iter().map(to_f).collect(),
            ff: facets.iter().map(to_f).collect(),
            vertices: v,
            facets,
        })
    }

    /// Exact convex hull of a point set. Interior and collinear boundary
    /// points are dropped.
    pub fn hull(points: &[QPoint]) -> Result<Self> {
        let mut pts: Vec<QPoint> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() < 3 {
            return Err(Error::Invalid("hull is degenerate: fewer than three points".into()));
        }
        let mut lower: Vec<QPoint> = Vec::new();
        for p in &pts {
            while lower.len() >= 2
                && !orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
            {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<QPoint> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2
                && !orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
            {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() < 3 {
            return Err(Error::Invalid("hull is degenerate: points are collinear".into()));
        }
        PolygonalNorm::new(lower)
    }

    /// `|x| + |y|`.
    pub fn l1() -> Self {
        PolygonalNorm::new(vec![qpt(1, 0), qpt(0, 1), qpt(-1, 0), qpt(0, -1)]).expect("valid")
    }

    /// `max(|x|, |y|)`.
    pub fn linf() -> Self {
        PolygonalNorm::new(vec![qpt(1, -1), qpt(1, 1), qpt(-1, 1), qpt(-1, -1)]).expect("valid")
    }

    /// Regular `2k`-gon inscribed in the unit circle with vertices rounded
    /// to rationals with denominator `den`.
    pub fn regular(k: usize, den: i64) -> Result<Self> {
        let n = 2 * k;
        let mut pts = Vec::with_capacity(n);
        for i in 0..k {
            let th = std::f64::consts::PI * i as f64 / k as f64;
            let x = (th.cos() * den as f64).round() as i64;
            let y = (th.sin() * den as f64).round() as i64;
            pts.push([qf(x, den), qf(y, den)]);
            pts.push([qf(-x, den), qf(-y, den)]);
        }
        PolygonalNorm::hull(&pts)
    }

    pub fn vertices(&self) -> &[QPoint] {
        &self.vertices
    }

    pub fn vertices_f64(&self) -> &[[f64; 2]] {
        &self.vf
    }

    /// Facet normals `f_k` with `f_k · p = 1` on edge `k` (from vertex `k`
    /// to vertex `k+1`). These are the vertices of the polar polygon.
    pub fn facets(&self) -> &[QPoint] {
        &self.facets
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn norm(&self, v: [f64; 2]) -> f64 {
        self.ff.iter().map(|f| f[0] * v[0] + f[1] * v[1]).fold(0.0, f64::max)
    }

    pub fn norm_exact(&self, v: &QPoint) -> Q {
        self.facets
            .iter()
            .map(|f| &f[0] * &v[0] + &f[1] * &v[1])
            .max()
            .expect("non-empty")
    }

    /// Support function of the unit ball, `max_k p_k · u`.
    pub fn support(&self, u: [f64; 2]) -> f64 {
        self.vf.iter().map(|p| p[0] * u[0] + p[1] * u[1]).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn scale(&self, s: &Q) -> Result<Self> {
        if !s.is_positive() {
            return Err(Error::Domain("scale factor must be positive".into()));
        }
        PolygonalNorm::new(self.vertices.iter().map(|p| [&p[0] * s, &p[1] * s]).collect())
    }

    /// Applies an invertible linear map `[[a, b], [c, d]]` to the unit ball.
    pub fn transform(&self, m: [[Q; 2]; 2]) -> Result<Self> {
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if det.is_zero() {
            return Err(Error::Domain("singular linear map".into()));
        }
        let mut pts: Vec<QPoint> = self
            .vertices
            .iter()
            .map(|p| {
                [&m[0][0] * &p[0] + &m[0][1] * &p[1], &m[1][0] * &p[0] + &m[1][1] * &p[1]]
            })
            .collect();
        if det.is_negative() {
            pts.reverse();
        }
        PolygonalNorm::new(pts)
    }

    pub fn polar(&self) -> Self {
        PolygonalNorm::new(self.facets.clone()).expect("polar of a valid polygon is valid")
    }

    /// The polar polygon turned by a quarter turn counter-clockwise. Arcs of
    /// its scaled copies are the extremal curves of the Dido problem.
    pub fn isoperimetrix(&self) -> Self {
        let rotated = self.facets.iter().map(|f| [-f[1].clone(), f[0].clone()]).collect();
        PolygonalNorm::new(rotated).expect("rotation preserves validity")
    }

    pub fn area(&self) -> Q {
        let n = self.len();
        let twice: Q = (0..n).map(|i| cross(&self.vertices[i], &self.vertices[(i + 1) % n])).sum();
        twice / q(2)
    }

    /// Length of the boundary of `other` measured in this norm.
    pub fn perimeter_of(&self, other: &PolygonalNorm) -> Q {
        let n = other.len();
        (0..n)
            .map(|i| self.norm_exact(&sub(&other.vertices[(i + 1) % n], &other.vertices[i])))
            .sum()
    }

    pub fn contains(&self, v: [f64; 2], tol: f64) -> bool {
        self.norm(v) <= 1.0 + tol
    }

    fn to_strings(&self) -> Vec<[String; 2]> {
        self.vertices.iter().map(|p| [fmt_q(&p[0]), fmt_q(&p[1])]).collect()
    }
}

impl TryFrom<Vec<[String; 2]>> for PolygonalNorm {
    type Error = Error;

    fn try_from(v: Vec<[String; 2]>) -> Result<Self> {
        let pts = v
            .iter()
            .map(|[x, y]| Ok([parse_q(x)?, parse_q(y)?]))
            .collect::<Result<Vec<_>>>()?;
        PolygonalNorm::new(pts)
    }
}

impl From<PolygonalNorm> for Vec<[String; 2]> {
    fn from(p: PolygonalNorm) -> Self {
        p.to_strings()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_basics() {
        let p = PolygonalNorm::l1();
        assert_eq!(p.vertices()[0], qpt(1, 0));
        assert_eq!(p.norm([0.3, -0.4]), 0.7);
        assert_eq!(p.norm_exact(&[qf(1, 2), qf(-1, 3)]), qf(5, 6));
        assert_eq!(p.area(), q(2));
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = vec![
            qpt(1, 0),
            qpt(-1, 0),
            qpt(0, 1),
            qpt(0, -1),
            qpt(0, 0),
            [qf(1, 2), qf(1, 2)],
            [qf(1, 4), qf(-1, 4)],
        ];
        assert_eq!(PolygonalNorm::hull(&pts).unwrap(), PolygonalNorm::l1());
        assert!(PolygonalNorm::hull(&[qpt(1, 1), qpt(-1, -1), qpt(2, 2)]).is_err());
    }

    #[test]
    fn rejects_bad_polygons() {
        assert!(PolygonalNorm::new(vec![qpt(1, 0), qpt(0, 1), qpt(-1, 0)]).is_err());
        // clockwise
        assert!(PolygonalNorm::new(vec![qpt(1, 0), qpt(0, -1), qpt(-1, 0), qpt(0, 1)]).is_err());
        // not symmetric
        assert!(PolygonalNorm::new(vec![qpt(2, 0), qpt(0, 1), qpt(-1, 0), qpt(0, -1)]).is_err());
    }

    #[test]
    fn l1_isoperimetrix_is_linf_square() {
        let p = PolygonalNorm::l1();
        assert_eq!(p.polar(), PolygonalNorm::linf());
        assert_eq!(p.isoperimetrix(), PolygonalNorm::linf());
    }

    #[test]
    fn bipolar_is_identity() {
        for p in [PolygonalNorm::l1(), PolygonalNorm::linf(), PolygonalNorm::regular(5, 1000).unwrap()]
        {
            assert_eq!(p.polar().polar(), p);
            assert_eq!(p.isoperimetrix().isoperimetrix(), p);
        }
    }

    #[test]
    fn near_disc_isoperimetrix_is_near_circular() {
        let p = PolygonalNorm::regular(36, 1_000_000).unwrap();
        let i = p.isoperimetrix();
        for v in i.vertices_f64() {
            let r = (v[0] * v[0] + v[1] * v[1]).sqrt();
            assert!((r - 1.0).abs() < 0.01, "radius {r}");
        }
    }

    #[test]
    fn isoperimetrix_perimeter_is_twice_its_area() {
        for p in [PolygonalNorm::l1(), PolygonalNorm::regular(3, 97).unwrap()] {
            let i = p.isoperimetrix();
            assert_eq!(p.perimeter_of(&i), q(2) * i.area());
        }
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_q("3/4").unwrap(), qf(3, 4));
        assert_eq!(parse_q("-2").unwrap(), q(-2));
        assert_eq!(parse_q("-0.25").unwrap(), qf(-1, 4));
        assert!(parse_q("1/0").is_err());
        assert_eq!(fmt_q(&qf(31, 72)), "31/72");
    }

    #[test]
    fn serde_round_trip() {
        let p = PolygonalNorm::regular(3, 7).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: PolygonalNorm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
