//! Dido's problem for a polygonal norm: among planar paths of given norm
//! length from the origin to `v`, maximize the signed area enclosed with
//! the chord back to the origin.
//!
//! Optimal paths follow arcs of a translated, scaled copy of the
//! isoperimetrix. An arc is described by the edge `i` it starts on, the
//! number `d` of isoperimetrix vertices it passes, and three unknowns: the
//! scale `r`, the offset `σ` of the start along edge `i` and the offset `υ`
//! of the end along edge `i + d`. The endpoint and the length give a 3×3
//! linear system; each configuration is solved exactly and the best one
//! wins.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::norm::{cross, fmt_q, q, q_to_f64, sub, PolygonalNorm, QPoint, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Multiplicity {
    Finite(usize),
    Continuum,
}

impl Multiplicity {
    pub fn is_unique(&self) -> bool {
        *self == Multiplicity::Finite(1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DidoSolution {
    pub area: Q,
    pub multiplicity: Multiplicity,
    /// One optimal path as a polyline starting at the origin.
    pub path: Vec<QPoint>,
}

pub(crate) struct Iso {
    n: usize,
    q: Vec<QPoint>,
    e: Vec<QPoint>,
    mu: Vec<Q>,
}

impl Iso {
    pub(crate) fn new(p: &PolygonalNorm) -> Self {
        let iso = p.isoperimetrix();
        let qv = iso.vertices().to_vec();
        let n = qv.len();
        let e: Vec<QPoint> = (0..n).map(|k| sub(&qv[(k + 1) % n], &qv[k])).collect();
        let mu = e.iter().map(|x| p.norm_exact(x)).collect();
        Iso { n, q: qv, e, mu }
    }

    /// Columns of the linear system for configuration `(i, d)`; the right
    /// hand side is `(v.x, v.y, L)`.
    fn matrix(&self, i: usize, d: usize) -> [[Q; 3]; 3] {
        let n = self.n;
        let j = (i + d) % n;
        let dq = sub(&self.q[j], &self.q[i]);
        let between: Q = (1..d).map(|k| self.mu[(i + k) % n].clone()).sum();
        let (ei, ej) = (&self.e[i], &self.e[j]);
        [
            [dq[0].clone(), -ei[0].clone(), ej[0].clone()],
            [dq[1].clone(), -ei[1].clone(), ej[1].clone()],
            [&self.mu[i] + &between, -self.mu[i].clone(), self.mu[j].clone()],
        ]
    }

    /// Polyline of configuration `(i, d)` for parameters `(r, σ, υ)`.
    fn path(&self, i: usize, d: usize, x: &[Q; 3], v: &QPoint) -> Vec<QPoint> {
        let n = self.n;
        let [r, s, _] = x;
        let c = [
            -(r * &self.q[i][0]) - s * &self.e[i][0],
            -(r * &self.q[i][1]) - s * &self.e[i][1],
        ];
        let mut pts = Vec::with_capacity(d + 2);
        pts.push([Q::zero(), Q::zero()]);
        for k in 1..=d {
            let qk = &self.q[(i + k) % n];
            pts.push([&c[0] + r * &qk[0], &c[1] + r * &qk[1]]);
        }
        pts.push(v.clone());
        pts
    }
}

/// Signed area enclosed by a polyline from the origin closed by its chord.
pub fn sweep_area(path: &[QPoint]) -> Q {
    let mut a = Q::zero();
    for w in path.windows(2) {
        a += cross(&w[0], &w[1]);
    }
    if let (Some(first), Some(last)) = (path.first(), path.last()) {
        a += cross(last, first);
    }
    a / q(2)
}

/// Drops repeated points and interior vertices of straight runs.
pub fn normalize_path(path: &[QPoint]) -> Vec<QPoint> {
    let mut out: Vec<QPoint> = Vec::with_capacity(path.len());
    for p in path {
        if out.last() == Some(p) {
            continue;
        }
        if out.len() >= 2 {
            let a = &out[out.len() - 2];
            let b = &out[out.len() - 1];
            let ab = sub(b, a);
            let bp = sub(p, b);
            let dot = &ab[0] * &bp[0] + &ab[1] * &bp[1];
            if cross(&ab, &bp).is_zero() && dot.is_positive() {
                out.pop();
            }
        }
        out.push(p.clone());
    }
    out
}

pub(crate) enum LinSol {
    Unique([Q; 3]),
    Line { x0: [Q; 3], dir: [Q; 3] },
    Inconsistent,
    Degenerate,
}

pub(crate) fn solve3(a: &[[Q; 3]; 3], b: &[Q; 3]) -> LinSol {
    let mut m: Vec<Vec<Q>> = (0..3)
        .map(|i| {
            let mut r = a[i].to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..3 {
        let Some(p) = (row..3).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let piv = m[row][col].clone();
        for k in col..4 {
            m[row][k] = &m[row][k] / &piv;
        }
        for r in 0..3 {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in col..4 {
                    let d = &f * &m[row][k];
                    m[r][k] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if (row..3).any(|r| !m[r][3].is_zero()) {
        return LinSol::Inconsistent;
    }
    match row {
        3 => LinSol::Unique([m[0][3].clone(), m[1][3].clone(), m[2][3].clone()]),
        2 => {
            let free = (0..3).find(|c| !pivots.contains(c)).expect("one free column");
            let mut x0: [Q; 3] = Default::default();
            let mut dir: [Q; 3] = Default::default();
            dir[free] = q(1);
            for (r, &c) in pivots.iter().enumerate() {
                x0[c] = m[r][3].clone();
                dir[c] = -m[r][free].clone();
            }
            LinSol::Line { x0, dir }
        }
        _ => LinSol::Degenerate,
    }
}

fn feasible(x: &[Q; 3]) -> bool {
    let [r, s, u] = x;
    !r.is_negative() && !s.is_negative() && !u.is_negative() && s <= r && u <= r
}

/// Linear forms `r, σ, r − σ, υ, r − υ` which must be non-negative.
fn constraint_rows(x: &[Q; 3]) -> [Q; 5] {
    let [r, s, u] = x;
    [r.clone(), s.clone(), r - s, u.clone(), r - u]
}

struct Candidate {
    area: Q,
    path: Vec<QPoint>,
    continuum: bool,
}

fn axpy(x0: &[Q; 3], s: &Q, dir: &[Q; 3]) -> [Q; 3] {
    [&x0[0] + s * &dir[0], &x0[1] + s * &dir[1], &x0[2] + s * &dir[2]]
}

/// Maximizes the area over a one-parameter family of solutions.
fn line_candidates(
    iso: &Iso,
    i: usize,
    d: usize,
    v: &QPoint,
    x0: &[Q; 3],
    dir: &[Q; 3],
    out: &mut Vec<Candidate>,
) {
    let a = constraint_rows(x0);
    let b = constraint_rows(dir);
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for k in 0..5 {
        if b[k].is_zero() {
            if a[k].is_negative() {
                return;
            }
            continue;
        }
        let t = -&a[k] / &b[k];
        if b[k].is_positive() {
            lo = Some(lo.map_or(t.clone(), |l| l.max(t)));
        } else {
            hi = Some(hi.map_or(t.clone(), |h| h.min(t)));
        }
    }
    // A family can be unbounded when it only slides the scale while the
    // traced polyline stays put; the area is then constant.
    let (lo, hi) = match (lo, hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        (Some(lo), None) => (lo.clone(), lo + q(1)),
        (None, Some(hi)) => (&hi - q(1), hi),
        (None, None) => (q(0), q(1)),
    };
    if lo > hi {
        return;
    }
    let area_at = |s: &Q| {
        let x = axpy(x0, s, dir);
        let path = iso.path(i, d, &x, v);
        (sweep_area(&path), path)
    };
    let (a0, _) = area_at(&q(0));
    let (a1, _) = area_at(&q(1));
    let (am, _) = area_at(&q(-1));
    let qa = (&a1 + &am - &a0 * q(2)) / q(2);
    let qb = (&a1 - &am) / q(2);
    if qa.is_zero() && qb.is_zero() && lo < hi {
        let (area, p_lo) = area_at(&lo);
        let (_, p_hi) = area_at(&hi);
        let continuum = normalize_path(&p_lo) != normalize_path(&p_hi);
        out.push(Candidate { area, path: p_lo, continuum });
        return;
    }
    let mut ss = vec![lo.clone(), hi.clone()];
    if qa.is_negative() {
        let s = -&qb / (&qa * q(2));
        if s > lo && s < hi {
            ss.push(s);
        }
    }
    for s in ss {
        let (area, path) = area_at(&s);
        out.push(Candidate { area, path, continuum: false });
    }
}

/// Maximal sweep area over paths of `P`-length `l` from the origin to `v`.
pub fn dido_max_area(p: &PolygonalNorm, v: &QPoint, l: &Q) -> Result<DidoSolution> {
    if !l.is_positive() {
        return Err(Error::Domain(format!("length must be positive, got {}", fmt_q(l))));
    }
    let nv = p.norm_exact(v);
    if &nv > l {
        return Err(Error::Infeasible(format!(
            "endpoint has norm {} > length {}",
            fmt_q(&nv),
            fmt_q(l)
        )));
    }
    let iso = Iso::new(p);
    let mut cands = Vec::new();
    if &nv == l {
        cands.push(Candidate {
            area: Q::zero(),
            path: vec![[Q::zero(), Q::zero()], v.clone()],
            continuum: false,
        });
    }
    let rhs = [v[0].clone(), v[1].clone(), l.clone()];
    for i in 0..iso.n {
        for d in 1..=iso.n {
            match solve3(&iso.matrix(i, d), &rhs) {
                LinSol::Unique(x) => {
                    if feasible(&x) {
                        let path = iso.path(i, d, &x, v);
                        cands.push(Candidate { area: sweep_area(&path), path, continuum: false });
                    }
                }
                LinSol::Line { x0, dir } => line_candidates(&iso, i, d, v, &x0, &dir, &mut cands),
                LinSol::Inconsistent => {}
                LinSol::Degenerate => {
                    return Err(Error::Unsupported("rank-deficient Dido configuration".into()))
                }
            }
        }
    }
    let best = cands
        .iter()
        .map(|c| c.area.clone())
        .max()
        .ok_or_else(|| Error::Infeasible("no admissible path configuration".into()))?;
    let optimal: Vec<&Candidate> = cands.iter().filter(|c| c.area == best).collect();
    let multiplicity = if optimal.iter().any(|c| c.continuum) {
        Multiplicity::Continuum
    } else {
        let mut paths: Vec<Vec<QPoint>> = optimal.iter().map(|c| normalize_path(&c.path)).collect();
        paths.sort();
        paths.dedup();
        Multiplicity::Finite(paths.len())
    };
    Ok(DidoSolution { area: best, multiplicity, path: normalize_path(&optimal[0].path) })
}

/// Quadratic polynomial in `(x, y)`: coefficients of
/// `x², xy, y², x, y, 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadratic(pub [Q; 6]);

impl Quadratic {
    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        let c = &self.0;
        &c[0] * x * x + &c[1] * x * y + &c[2] * y * y + &c[3] * x + &c[4] * y + &c[5]
    }

    pub fn eval_f64(c: &[f64; 6], x: f64, y: f64) -> f64 {
        c[0] * x * x + c[1] * x * y + c[2] * y * y + c[3] * x + c[4] * y + c[5]
    }

    pub fn to_f64(&self) -> [f64; 6] {
        std::array::from_fn(|k| q_to_f64(&self.0[k]))
    }
}

/// Affine function `c0 + cx·x + cy·y`.
#[derive(Clone, Debug)]
struct Affine([Q; 3]);

impl Affine {
    fn constant(c: Q) -> Self {
        Affine([c, Q::zero(), Q::zero()])
    }

    fn add(&self, o: &Affine) -> Affine {
        Affine(std::array::from_fn(|k| &self.0[k] + &o.0[k]))
    }

    fn scale(&self, s: &Q) -> Affine {
        Affine(std::array::from_fn(|k| &self.0[k] * s))
    }

    fn mul(&self, o: &Affine) -> Quadratic {
        let [a0, ax, ay] = &self.0;
        let [b0, bx, by] = &o.0;
        Quadratic([
            ax * bx,
            ax * by + ay * bx,
            ay * by,
            a0 * bx + ax * b0,
            a0 * by + ay * b0,
            a0 * b0,
        ])
    }
}

fn quad_sub(a: &Quadratic, b: &Quadratic) -> Quadratic {
    Quadratic(std::array::from_fn(|k| &a.0[k] - &b.0[k]))
}

fn quad_add(a: &Quadratic, b: &Quadratic) -> Quadratic {
    Quadratic(std::array::from_fn(|k| &a.0[k] + &b.0[k]))
}

fn inverse3(m: &[[Q; 3]; 3]) -> Option<[[Q; 3]; 3]> {
    let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    if det.is_zero() {
        return None;
    }
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| {
        &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0]
    };
    let adj = [
        [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
        [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
        [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
    ];
    Some(std::array::from_fn(|i| std::array::from_fn(|j| &adj[i][j] / &det)))
}

/// A convex polygon `region` on which the profile equals `quad`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub region: Vec<QPoint>,
    pub quad: Quadratic,
    pub config: (usize, usize),
    region_f: Vec<[f64; 2]>,
    quad_f: [f64; 6],
}

/// Clips a convex counter-clockwise polygon to `a + b·x + c·y ≥ 0`.
pub(crate) fn clip(poly: &[QPoint], h: &[Q; 3]) -> Vec<QPoint> {
    let val = |p: &QPoint| &h[0] + &h[1] * &p[0] + &h[2] * &p[1];
    let n = poly.len();
    let mut out = Vec::new();
    for k in 0..n {
        let a = &poly[k];
        let b = &poly[(k + 1) % n];
        let (va, vb) = (val(a), val(b));
        if !va.is_negative() {
            out.push(a.clone());
        }
        if (va.is_negative() && vb.is_positive()) || (va.is_positive() && vb.is_negative()) {
            let t = &va / (&va - &vb);
            out.push([&a[0] + &t * (&b[0] - &a[0]), &a[1] + &t * (&b[1] - &a[1])]);
        }
    }
    let mut clean: Vec<QPoint> = Vec::new();
    for p in out {
        if clean.last() != Some(&p) {
            clean.push(p);
        }
    }
    while clean.len() > 1 && clean.first() == clean.last() {
        clean.pop();
    }
    // drop collinear vertices
    let mut changed = true;
    while changed && clean.len() >= 3 {
        changed = false;
        let m = clean.len();
        for k in 0..m {
            let a = &clean[(k + m - 1) % m];
            let b = &clean[k];
            let c = &clean[(k + 1) % m];
            if cross(&sub(b, a), &sub(c, b)).is_zero() {
                clean.remove(k);
                changed = true;
                break;
            }
        }
    }
    clean
}

pub(crate) fn polygon_area(poly: &[QPoint]) -> Q {
    let n = poly.len();
    if n < 3 {
        return Q::zero();
    }
    (0..n).map(|k| cross(&poly[k], &poly[(k + 1) % n])).sum::<Q>() / q(2)
}

fn intersect_convex(a: &[QPoint], b: &[QPoint]) -> Vec<QPoint> {
    let mut cur = a.to_vec();
    let n = b.len();
    for k in 0..n {
        if cur.len() < 3 {
            break;
        }
        let p = &b[k];
        let e = sub(&b[(k + 1) % n], p);
        // cross(e, x - p) >= 0
        let h = [&e[1] * &p[0] - &e[0] * &p[1], -e[1].clone(), e[0].clone()];
        cur = clip(&cur, &h);
    }
    cur
}

/// The Dido profile at unit length as an exact piecewise quadratic on the
/// unit ball of `P`: the pieces tile the ball and the profile is the
/// quadratic of whichever piece contains the point.
#[derive(Clone, Debug)]
pub struct PiecewiseQuadratic {
    pub polygon: PolygonalNorm,
    pub pieces: Vec<Piece>,
}

impl PiecewiseQuadratic {
    pub fn compile(p: &PolygonalNorm) -> Result<Self> {
        let iso = Iso::new(p);
        let ball: Vec<QPoint> = p.vertices().to_vec();
        let x = Affine([Q::zero(), q(1), Q::zero()]);
        let y = Affine([Q::zero(), Q::zero(), q(1)]);
        let mut pieces: Vec<Piece> = Vec::new();
        for i in 0..iso.n {
            for d in 1..=iso.n {
                let Some(inv) = inverse3(&iso.matrix(i, d)) else { continue };
                // (r, σ, υ) = inv · (x, y, 1)
                let unk: Vec<Affine> = (0..3)
                    .map(|k| Affine([inv[k][2].clone(), inv[k][0].clone(), inv[k][1].clone()]))
                    .collect();
                let (r, s, u) = (&unk[0], &unk[1], &unk[2]);
                let neg = |a: &Affine| a.scale(&q(-1));
                let cons = [r.clone(), s.clone(), r.add(&neg(s)), u.clone(), r.add(&neg(u))];
                let mut region = ball.clone();
                for h in &cons {
                    region = clip(&region, &h.0);
                    if region.len() < 3 {
                        break;
                    }
                }
                if region.len() < 3 || polygon_area(&region).is_zero() {
                    continue;
                }
                let n = iso.n;
                let cx = neg(&r.scale(&iso.q[i][0])).add(&neg(&s.scale(&iso.e[i][0])));
                let cy = neg(&r.scale(&iso.q[i][1])).add(&neg(&s.scale(&iso.e[i][1])));
                let mut pts: Vec<(Affine, Affine)> =
                    vec![(Affine::constant(Q::zero()), Affine::constant(Q::zero()))];
                for k in 1..=d {
                    let qk = &iso.q[(i + k) % n];
                    pts.push((cx.add(&r.scale(&qk[0])), cy.add(&r.scale(&qk[1]))));
                }
                pts.push((x.clone(), y.clone()));
                let mut twice = Quadratic(Default::default());
                for w in 0..pts.len() {
                    let (a, b) = (&pts[w], &pts[(w + 1) % pts.len()]);
                    twice = quad_add(&twice, &quad_sub(&a.0.mul(&b.1), &a.1.mul(&b.0)));
                }
                let quad = Quadratic(std::array::from_fn(|k| &twice.0[k] / q(2)));
                pieces.push(Piece {
                    region_f: region.iter().map(|p| [q_to_f64(&p[0]), q_to_f64(&p[1])]).collect(),
                    quad_f: quad.to_f64(),
                    region,
                    quad,
                    config: (i, d),
                });
            }
        }
        let covered: Q = pieces.iter().map(|pc| polygon_area(&pc.region)).sum();
        for a in 0..pieces.len() {
            for b in (a + 1)..pieces.len() {
                let inter = intersect_convex(&pieces[a].region, &pieces[b].region);
                if polygon_area(&inter).is_positive() {
                    return Err(Error::Unsupported(format!(
                        "Dido configurations {:?} and {:?} are both admissible on an open set",
                        pieces[a].config, pieces[b].config
                    )));
                }
            }
        }
        if covered != p.area() {
            return Err(Error::Unsupported(format!(
                "Dido configurations cover area {} of {}",
                fmt_q(&covered),
                fmt_q(&p.area())
            )));
        }
        Ok(PiecewiseQuadratic { polygon: p.clone(), pieces })
    }

    /// Profile value at a point of the unit ball. Points outside the ball
    /// (beyond a relative tolerance of 1e-12) give `None`.
    pub fn eval(&self, v: [f64; 2]) -> Option<f64> {
        const TOL: f64 = 1e-12;
        if self.polygon.norm(v) > 1.0 + TOL {
            return None;
        }
        let mut best: Option<f64> = None;
        for pc in &self.pieces {
            let m = pc.region_f.len();
            let inside = (0..m).all(|k| {
                let a = pc.region_f[k];
                let b = pc.region_f[(k + 1) % m];
                let e = [b[0] - a[0], b[1] - a[1]];
                let scale = e[0].abs() + e[1].abs();
                e[0] * (v[1] - a[1]) - e[1] * (v[0] - a[0]) >= -TOL * scale
            });
            if inside {
                let z = Quadratic::eval_f64(&pc.quad_f, v[0], v[1]);
                best = Some(best.map_or(z, |b: f64| b.max(z)));
            }
        }
        best.map(|z| z.max(0.0))
    }

    pub fn eval_exact(&self, v: &QPoint) -> Option<Q> {
        if self.polygon.norm_exact(v) > q(1) {
            return None;
        }
        self.pieces
            .iter()
            .filter(|pc| {
                let m = pc.region.len();
                (0..m).all(|k| {
                    let a = &pc.region[k];
                    let e = sub(&pc.region[(k + 1) % m], a);
                    !cross(&e, &sub(v, a)).is_negative()
                })
            })
            .map(|pc| pc.quad.eval(&v[0], &v[1]))
            .max()
    }

    /// `∫∫ 2 z` over the unit ball, exactly.
    pub fn volume(&self) -> Q {
        let mut total = Q::zero();
        let third = crate::norm::qf(1, 3);
        let half = crate::norm::qf(1, 2);
        for pc in &self.pieces {
            let r = &pc.region;
            for k in 1..r.len() - 1 {
                let tri = [&r[0], &r[k], &r[k + 1]];
                let area = cross(&sub(tri[1], tri[0]), &sub(tri[2], tri[0])) / q(2);
                let mut s = Q::zero();
                for e in 0..3 {
                    let (a, b) = (tri[e], tri[(e + 1) % 3]);
                    let mx = (&a[0] + &b[0]) * &half;
                    let my = (&a[1] + &b[1]) * &half;
                    s += pc.quad.eval(&mx, &my);
                }
                total += area * &third * s;
            }
        }
        total * q(2)
    }

    /// Largest profile value, attained at a vertex of a piece or at an
    /// interior critical point of its quadratic.
    pub fn max_value(&self) -> f64 {
        let mut best: f64 = 0.0;
        for pc in &self.pieces {
            for v in &pc.region_f {
                best = best.max(Quadratic::eval_f64(&pc.quad_f, v[0], v[1]));
            }
            let c = &pc.quad_f;
            let det = 4.0 * c[0] * c[2] - c[1] * c[1];
            if det.abs() > 1e-15 {
                let x = (-2.0 * c[2] * c[3] + c[1] * c[4]) / det;
                let y = (-2.0 * c[0] * c[4] + c[1] * c[3]) / det;
                if let Some(z) = self.eval([x, y]) {
                    best = best.max(z);
                }
            }
            // edge critical points
            let m = pc.region_f.len();
            for k in 0..m {
                let a = pc.region_f[k];
                let b = pc.region_f[(k + 1) % m];
                let f = |t: f64| {
                    Quadratic::eval_f64(c, a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
                };
                let (f0, fh, f1) = (f(0.0), f(0.5), f(1.0));
                let qa = 2.0 * (f1 + f0 - 2.0 * fh);
                let qb = f1 - f0 - qa;
                if qa < 0.0 {
                    let t = -qb / (2.0 * qa);
                    if (0.0..=1.0).contains(&t) {
                        best = best.max(f(t));
                    }
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::{qf, qpt};

    #[test]
    fn l1_examples() {
        let p = PolygonalNorm::l1();
        let one = q(1);
        let s = dido_max_area(&p, &qpt(0, 0), &one).unwrap();
        assert_eq!(s.area, qf(1, 16));
        assert_eq!(s.multiplicity, Multiplicity::Continuum);
        assert_eq!(dido_max_area(&p, &qpt(1, 0), &one).unwrap().area, q(0));
        assert_eq!(dido_max_area(&p, &[qf(1, 2), q(0)], &one).unwrap().area, qf(1, 8));
        assert!(matches!(
            dido_max_area(&p, &[qf(3, 2), q(0)], &one),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn homogeneity_in_length() {
        let p = PolygonalNorm::regular(3, 13).unwrap();
        for (x, y) in [(1, 5), (-2, 3), (4, -1), (0, 0)] {
            let v = [qf(x, 10), qf(y, 10)];
            let l = qf(7, 3);
            let big = dido_max_area(&p, &v, &l).unwrap().area;
            let vs = [&v[0] / &l, &v[1] / &l];
            let small = dido_max_area(&p, &vs, &q(1)).unwrap().area;
            assert_eq!(big, small * &l * &l);
        }
    }

    #[test]
    fn optimal_path_has_requested_length_and_area() {
        let p = PolygonalNorm::regular(4, 50).unwrap();
        let v = [qf(1, 5), qf(-1, 7)];
        let s = dido_max_area(&p, &v, &q(1)).unwrap();
        let len: Q = s.path.windows(2).map(|w| p.norm_exact(&sub(&w[1], &w[0]))).sum();
        assert_eq!(len, q(1));
        assert_eq!(sweep_area(&s.path), s.area);
        assert_eq!(s.path.last().unwrap(), &v);
    }

    #[test]
    fn compiled_l1_profile_volume() {
        let pq = PiecewiseQuadratic::compile(&PolygonalNorm::l1()).unwrap();
        assert_eq!(pq.volume(), qf(31, 72));
        // the top is at (1/2, 0), above the closed-loop value 1/16 at the origin
        assert!((pq.max_value() - 1.0 / 8.0).abs() < 1e-15, "{}", pq.max_value());
    }

    #[test]
    fn compiled_matches_pointwise() {
        for p in [PolygonalNorm::l1(), PolygonalNorm::regular(3, 11).unwrap()] {
            let pq = PiecewiseQuadratic::compile(&p).unwrap();
            for a in -6..=6 {
                for b in -6..=6 {
                    let v = [qf(a, 9), qf(b, 9)];
                    if p.norm_exact(&v) > q(1) {
                        continue;
                    }
                    let exact = dido_max_area(&p, &v, &q(1)).unwrap().area;
                    assert_eq!(pq.eval_exact(&v).unwrap(), exact, "{p:?} at {a}/9,{b}/9");
                }
            }
        }
    }

    #[test]
    fn uniqueness_locus_l1() {
        let p = PolygonalNorm::l1();
        let one = q(1);
        let mult = |x: Q, y: Q| dido_max_area(&p, &[x, y], &one).unwrap().multiplicity;
        // a square sliding along the chord keeps the same area
        assert_eq!(mult(qf(1, 5), q(0)), Multiplicity::Continuum);
        assert_eq!(mult(q(0), qf(-1, 4)), Multiplicity::Continuum);
        assert!(mult(qf(1, 5), qf(1, 7)).is_unique());
        assert!(mult(qf(1, 2), q(0)).is_unique());
        assert!(mult(qf(1, 2), qf(1, 2)).is_unique());
    }
}
