//! Limit shapes: the unit ball of the asymptotic subFinsler metric, given
//! by a horizontal unit ball and a vertical profile over it.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::ball::GeneratingSet;
use crate::dido::PiecewiseQuadratic;
use crate::error::{Error, Result};
use crate::grading::RealPoint;
use crate::group::GroupSpec;
use crate::norm::{fmt_q, q, PolygonalNorm, QPoint};
use crate::profile::z_profile_h5;

#[derive(Clone, Debug, PartialEq)]
pub enum LimitNorm {
    Planar(PolygonalNorm),
    /// Unit ball `Σ|x_i| ≤ 1` in the given dimension.
    CrossPolytope(usize),
}

impl LimitNorm {
    pub fn eval(&self, h: &[f64]) -> f64 {
        match self {
            LimitNorm::Planar(p) => p.norm([h[0], h[1]]),
            LimitNorm::CrossPolytope(_) => h.iter().map(|x| x.abs()).sum(),
        }
    }
}

/// Unit ball of the limit norm: the convex hull of the horizontal parts of
/// the generators.
pub fn limit_norm(gs: &GeneratingSet) -> Result<LimitNorm> {
    let m = gs.group().m();
    match m {
        2 => {
            let pts: Vec<QPoint> = gs.elems().iter().map(|g| [q(g.a[0]), q(g.a[1])]).collect();
            Ok(LimitNorm::Planar(PolygonalNorm::hull(&pts)?))
        }
        _ if m >= 3 => {
            let inside = gs.elems().iter().all(|g| g.a.iter().map(|x| x.abs()).sum::<i64>() <= 1);
            let has_axes = (0..m).all(|i| {
                [1, -1].iter().all(|s| {
                    gs.elems().iter().any(|g| {
                        g.a.iter().enumerate().all(|(j, x)| *x == if j == i { *s } else { 0 })
                    })
                })
            });
            if inside && has_axes {
                Ok(LimitNorm::CrossPolytope(m))
            } else {
                Err(Error::Unsupported(format!(
                    "limit norms in dimension {m} are only supported for the cross-polytope"
                )))
            }
        }
        _ => Err(Error::Unsupported("one-dimensional abelianization".into())),
    }
}

#[derive(Clone, Debug)]
pub enum ZProfile {
    /// `|b| · z_P` where `z_P` is the Dido profile of the polygon and `b`
    /// the bracket of the two horizontal basis vectors.
    Planar { dido: PiecewiseQuadratic, bracket: f64 },
    /// Standard generators of `H5`.
    H5Standard,
    /// No centre.
    Abelian,
}

#[derive(Clone, Debug)]
pub struct LimitShape {
    pub group: GroupSpec,
    pub norm: LimitNorm,
    pub profile: ZProfile,
    z_max: f64,
    z_origin: f64,
}

impl LimitShape {
    pub fn new(group: GroupSpec, norm: LimitNorm) -> Result<Self> {
        let profile = match (&norm, group.m(), group.c()) {
            (LimitNorm::Planar(_), 2, 0) => ZProfile::Abelian,
            (LimitNorm::CrossPolytope(_), _, 0) => ZProfile::Abelian,
            (LimitNorm::Planar(p), 2, 1) => {
                let b = group.bracket_coeff(0, 1, 0) as f64;
                ZProfile::Planar { dido: PiecewiseQuadratic::compile(p)?, bracket: b.abs() }
            }
            (LimitNorm::CrossPolytope(4), 4, 1) if group == GroupSpec::heisenberg5() => {
                ZProfile::H5Standard
            }
            _ => {
                return Err(Error::Unsupported(
                    "limit shapes are available for planar two-step groups and standard H5".into(),
                ))
            }
        };
        let (z_max, z_origin) = match &profile {
            ZProfile::Planar { dido, bracket } => {
                (bracket * dido.max_value(), bracket * dido.eval([0.0, 0.0]).unwrap_or(0.0))
            }
            // attained at (1/2, 0, 0, 0)
            ZProfile::H5Standard => (0.125, 0.0625),
            ZProfile::Abelian => (0.0, 0.0),
        };
        Ok(LimitShape { group, norm, profile, z_max, z_origin })
    }

    pub fn from_generators(gs: &GeneratingSet) -> Result<Self> {
        LimitShape::new(gs.group().clone(), limit_norm(gs)?)
    }

    pub fn h3_standard() -> Self {
        LimitShape::from_generators(&GeneratingSet::standard(&GroupSpec::heisenberg3()))
            .expect("standard H3 shape")
    }

    pub fn h5_standard() -> Self {
        LimitShape::from_generators(&GeneratingSet::standard(&GroupSpec::heisenberg5()))
            .expect("standard H5 shape")
    }

    pub fn horizontal_norm(&self, h: &[f64]) -> f64 {
        self.norm.eval(h)
    }

    /// Vertical extent above a point of the horizontal unit ball.
    pub fn profile(&self, h: &[f64]) -> Option<f64> {
        match &self.profile {
            ZProfile::Planar { dido, bracket } => dido.eval([h[0], h[1]]).map(|z| z * bracket),
            ZProfile::H5Standard => z_profile_h5([h[0], h[1], h[2], h[3]]).ok(),
            ZProfile::Abelian => (self.norm.eval(h) <= 1.0 + 1e-12).then_some(0.0),
        }
    }

    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    pub fn z_origin(&self) -> f64 {
        self.z_origin
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self.profile, ZProfile::Abelian)
    }

    pub fn contains(&self, p: &RealPoint) -> bool {
        if self.norm.eval(&p.h) > 1.0 + 1e-12 {
            return false;
        }
        let w: f64 = p.v.iter().map(|x| x.abs()).sum();
        match self.profile(&p.h) {
            Some(z) => w <= z + 1e-12,
            None => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

impl Mesh {
    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut e = BTreeSet::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                e.insert((a.min(b), a.max(b)));
            }
        }
        e
    }
}

/// Horizontal points `(k/r)·B_j` with `B_j` running over the polygon
/// boundary, every edge cut into `r` pieces. Ring `r` is the boundary.
fn planar_grid(p: &PolygonalNorm, r: usize) -> Vec<Vec<[f64; 2]>> {
    let vs = p.vertices_f64();
    let n = vs.len();
    let mut boundary = Vec::with_capacity(n * r);
    for k in 0..n {
        let (a, b) = (vs[k], vs[(k + 1) % n]);
        for s in 0..r {
            let t = s as f64 / r as f64;
            boundary.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    (1..=r)
        .map(|k| {
            let f = k as f64 / r as f64;
            boundary.iter().map(|b| [b[0] * f, b[1] * f]).collect()
        })
        .collect()
}

/// Triangulated boundary `{(v, ±z(v))}` of a planar limit shape, with
/// vertical walls over the rim where the profile is positive.
pub fn shape_boundary_mesh(shape: &LimitShape, resolution: usize) -> Result<Mesh> {
    let LimitNorm::Planar(p) = &shape.norm else {
        return Err(Error::Unsupported("boundary meshes are drawn for planar shapes only".into()));
    };
    if shape.group.c() != 1 {
        return Err(Error::Unsupported("boundary meshes need a one-dimensional centre".into()));
    }
    let r = resolution.max(1);
    let rings = planar_grid(p, r);
    let width = rings[0].len();
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let z = |v: [f64; 2]| shape.profile(&v).unwrap_or(0.0);
    let index = |vertices: &mut Vec<[f64; 3]>, v: [f64; 3]| {
        vertices.push(v);
        vertices.len() - 1
    };
    let sheet = |sign: f64, vertices: &mut Vec<[f64; 3]>| -> (usize, Vec<Vec<usize>>) {
        let c = index(vertices, [0.0, 0.0, sign * z([0.0, 0.0])]);
        let ids = rings
            .iter()
            .map(|ring| ring.iter().map(|v| index(vertices, [v[0], v[1], sign * z(*v)])).collect())
            .collect();
        (c, ids)
    };
    let (ct, top) = sheet(1.0, &mut vertices);
    let (cb, bottom) = sheet(-1.0, &mut vertices);
    // share rim vertices where the profile vanishes
    let mut bottom = bottom;
    for j in 0..width {
        let (t, b) = (top[r - 1][j], bottom[r - 1][j]);
        if vertices[t][2] == 0.0 && vertices[b][2] == 0.0 {
            bottom[r - 1][j] = t;
        }
    }
    for (c, ids, flip) in [(ct, &top, false), (cb, &bottom, true)] {
        let mut push = |a: usize, b: usize, d: usize| {
            triangles.push(if flip { [a, d, b] } else { [a, b, d] });
        };
        for j in 0..width {
            push(c, ids[0][j], ids[0][(j + 1) % width]);
        }
        for k in 1..r {
            let (inner, outer) = (&ids[k - 1], &ids[k]);
            for j in 0..width {
                let jn = (j + 1) % width;
                push(inner[j], outer[j], outer[jn]);
                push(inner[j], outer[jn], inner[jn]);
            }
        }
    }
    for j in 0..width {
        let jn = (j + 1) % width;
        let (t0, t1) = (top[r - 1][j], top[r - 1][jn]);
        let (b0, b1) = (bottom[r - 1][j], bottom[r - 1][jn]);
        if t0 != b0 || t1 != b1 {
            if t0 != b0 {
                triangles.push([t0, b0, b1]);
            }
            if t1 != b1 {
                triangles.push([t0, b1, t1]);
            }
        }
    }
    // drop unused vertices (rim duplicates) and renumber
    let mut used = vec![false; vertices.len()];
    for t in &triangles {
        for v in t {
            used[*v] = true;
        }
    }
    let mut map = vec![usize::MAX; vertices.len()];
    let mut kept = Vec::new();
    for (i, v) in vertices.into_iter().enumerate() {
        if used[i] {
            map[i] = kept.len();
            kept.push(v);
        }
    }
    let triangles = triangles.into_iter().map(|t| t.map(|v| map[v])).collect();
    Ok(Mesh { vertices: kept, triangles })
}

#[derive(Serialize)]
struct ProfileSample {
    x: f64,
    y: f64,
    z: f64,
}

#[derive(Serialize)]
struct ShapeJson {
    group: String,
    polygon: Vec<[String; 2]>,
    isoperimetrix: Vec<[String; 2]>,
    z_origin: f64,
    z_max: f64,
    profile_samples: Vec<ProfileSample>,
}

/// JSON description: polygon vertices as exact rationals and profile samples
/// on the grid of the given resolution.
pub fn shape_json(shape: &LimitShape, resolution: usize) -> Result<String> {
    let LimitNorm::Planar(p) = &shape.norm else {
        return Err(Error::Unsupported("JSON export is for planar shapes only".into()));
    };
    let fmt = |pts: &[QPoint]| pts.iter().map(|v| [fmt_q(&v[0]), fmt_q(&v[1])]).collect();
    let mut samples = vec![ProfileSample { x: 0.0, y: 0.0, z: shape.profile(&[0.0, 0.0]).unwrap_or(0.0) }];
    for ring in planar_grid(p, resolution.max(1)) {
        for v in ring {
            samples.push(ProfileSample { x: v[0], y: v[1], z: shape.profile(&v).unwrap_or(0.0) });
        }
    }
    let out = ShapeJson {
        group: shape.group.to_text(),
        polygon: fmt(p.vertices()),
        isoperimetrix: fmt(p.isoperimetrix().vertices()),
        z_origin: shape.z_origin,
        z_max: shape.z_max,
        profile_samples: samples,
    };
    serde_json::to_string_pretty(&out).map_err(|e| Error::Io(e.to_string()))
}

/// Stroke-only orthographic wireframe of the boundary mesh. The output
/// depends only on the shape and the resolution.
pub fn shape_svg(shape: &LimitShape, resolution: usize) -> Result<String> {
    let mesh = shape_boundary_mesh(shape, resolution)?;
    let (phi, theta) = (std::f64::consts::PI / 6.0, std::f64::consts::PI / 3.0);
    // stretch the thin vertical direction so the body is visible
    let zscale = 0.5 / shape.z_max.max(1e-9);
    let project = |v: &[f64; 3]| {
        let u = v[0] * phi.cos() - v[1] * phi.sin();
        let w = v[0] * phi.sin() + v[1] * phi.cos();
        let y = -(v[2] * zscale * theta.sin() + w * theta.cos());
        [u, y]
    };
    let pts: Vec<[f64; 2]> = mesh.vertices.iter().map(project).collect();
    let mut s = String::new();
    s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.2 -1.2 2.4 2.4\">\n");
    s.push_str("<g fill=\"none\" stroke=\"black\" stroke-width=\"0.004\">\n");
    for (a, b) in mesh.edges() {
        let (p, q) = (pts[a], pts[b]);
        let _ = writeln!(
            s,
            "<line x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\"/>",
            p[0], p[1], q[0], q[1]
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}
