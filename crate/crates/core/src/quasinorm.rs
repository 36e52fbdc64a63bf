//! Homogeneous quasi-norms `|x| = max_p (λ_p ‖π_p x‖_p)^{1/p}` and the
//! rescaling of the layer weights that makes them subadditive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grading::RealPoint;
use crate::group::GroupSpec;
use crate::norm::PolygonalNorm;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LayerNorm {
    /// Planar polygonal norm (layer of dimension 2 only).
    Polygon(PolygonalNorm),
    L1,
    LInf,
    /// `sqrt(Σ w_i x_i²)` with positive weights.
    WeightedEuclidean(Vec<f64>),
}

impl LayerNorm {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            LayerNorm::Polygon(p) => p.norm([x[0], x[1]]),
            LayerNorm::L1 => x.iter().map(|v| v.abs()).sum(),
            LayerNorm::LInf => x.iter().fold(0.0, |a, v| a.max(v.abs())),
            LayerNorm::WeightedEuclidean(w) => {
                x.iter().zip(w).map(|(v, w)| w * v * v).sum::<f64>().sqrt()
            }
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        match self {
            LayerNorm::Polygon(_) if dim != 2 => Err(Error::Contract(format!(
                "polygonal norm used on a layer of dimension {dim}"
            ))),
            LayerNorm::WeightedEuclidean(w) if w.len() != dim => Err(Error::Contract(format!(
                "{} weights for a layer of dimension {dim}",
                w.len()
            ))),
            LayerNorm::WeightedEuclidean(w) if w.iter().any(|x| !(*x > 0.0) || !x.is_finite()) => {
                Err(Error::Invalid("degenerate layer norm: weights must be positive".into()))
            }
            _ => Ok(()),
        }
    }

    /// Extreme points of the unit ball, when it is a polytope.
    fn unit_vertices(&self, dim: usize) -> Option<Vec<Vec<f64>>> {
        match self {
            LayerNorm::Polygon(p) => Some(p.vertices_f64().iter().map(|v| v.to_vec()).collect()),
            LayerNorm::L1 => Some(
                (0..dim)
                    .flat_map(|i| {
                        [1.0, -1.0].map(|s| {
                            let mut e = vec![0.0; dim];
                            e[i] = s;
                            e
                        })
                    })
                    .collect(),
            ),
            LayerNorm::LInf => Some(
                (0..1usize << dim)
                    .map(|mask| {
                        (0..dim).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect()
                    })
                    .collect(),
            ),
            LayerNorm::WeightedEuclidean(_) => None,
        }
    }
}

/// Which product the subadditivity guarantee refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupLaw {
    /// Exponential coordinates, `(a + a', w + w' + ½ B(a, a'))`.
    Graded,
    /// Normal-form coordinates, `(a + a', z + z' + Q(a, a'))`.
    NormalForm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiNormSpec {
    pub layer_norms: Vec<LayerNorm>,
    pub lambdas: Vec<f64>,
    pub law: GroupLaw,
    /// `C` with `|x⁻¹| ≤ C |x|` under `law`.
    pub inverse_constant: f64,
}

impl QuasiNormSpec {
    pub fn new(layer_norms: Vec<LayerNorm>, lambdas: Vec<f64>) -> Result<Self> {
        if layer_norms.is_empty() || layer_norms.len() != lambdas.len() {
            return Err(Error::Invalid("one weight per layer norm is required".into()));
        }
        if lambdas[0] != 1.0 {
            return Err(Error::Invalid("the first layer weight must be 1".into()));
        }
        if lambdas.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
            return Err(Error::Invalid("layer weights must be positive".into()));
        }
        Ok(QuasiNormSpec { layer_norms, lambdas, law: GroupLaw::Graded, inverse_constant: 1.0 })
    }

    pub fn eval(&self, p: &RealPoint) -> f64 {
        quasinorm(self, p)
    }
}

pub fn quasinorm(spec: &QuasiNormSpec, p: &RealPoint) -> f64 {
    let mut r = spec.lambdas[0] * spec.layer_norms[0].eval(&p.h);
    if spec.layer_norms.len() > 1 && !p.v.is_empty() {
        r = r.max((spec.lambdas[1] * spec.layer_norms[1].eval(&p.v)).sqrt());
    }
    r
}

/// Maximum of `‖form(u, v)‖` over pairs of unit horizontal vectors.
///
/// For a polytope unit ball the maximum of a convex function of a bilinear
/// map sits at a pair of vertices. For a Euclidean ball each central
/// component is bounded by the Frobenius norm of its normalized matrix.
fn bilinear_bound(
    m: usize,
    c: usize,
    form: impl Fn(usize, usize, usize) -> f64,
    horiz: &LayerNorm,
    central: &LayerNorm,
) -> f64 {
    if let Some(verts) = horiz.unit_vertices(m) {
        let mut best: f64 = 0.0;
        for u in &verts {
            for v in &verts {
                let val: Vec<f64> = (0..c)
                    .map(|k| {
                        let mut s = 0.0;
                        for i in 0..m {
                            for j in 0..m {
                                s += form(i, j, k) * u[i] * v[j];
                            }
                        }
                        s
                    })
                    .collect();
                best = best.max(central.eval(&val));
            }
        }
        best
    } else {
        let LayerNorm::WeightedEuclidean(w) = horiz else { unreachable!() };
        (0..c)
            .map(|k| {
                let fro: f64 = (0..m)
                    .flat_map(|i| (0..m).map(move |j| (i, j)))
                    .map(|(i, j)| {
                        let e = form(i, j, k) / (w[i] * w[j]).sqrt();
                        e * e
                    })
                    .sum::<f64>()
                    .sqrt();
                let mut ek = vec![0.0; c];
                ek[k] = 1.0;
                fro * central.eval(&ek)
            })
            .sum()
    }
}

/// Chooses `λ₂` so that `|x y| ≤ |x| + |y|` for the resulting quasi-norm.
///
/// With `epsilon == 0` the product is the graded one in exponential
/// coordinates; otherwise it is the normal-form product. In a two-step group
/// both laws are dilation equivariant, so the single cross term
/// `λ₂ ‖β(a, a')‖ ≤ 2 |x| |y|` is all that must be absorbed and the
/// inequality holds with no additive slack.
pub fn rescale_quasinorm(
    g: &GroupSpec,
    layer_norms: Vec<LayerNorm>,
    epsilon: f64,
) -> Result<QuasiNormSpec> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::Domain(format!("epsilon must be non-negative, got {epsilon}")));
    }
    let layers = if g.is_abelian() { 1 } else { 2 };
    if layer_norms.len() != layers {
        return Err(Error::Contract(format!(
            "group has {layers} layers but {} layer norms were given",
            layer_norms.len()
        )));
    }
    layer_norms[0].validate(g.m())?;
    let law = if epsilon == 0.0 { GroupLaw::Graded } else { GroupLaw::NormalForm };
    if g.is_abelian() {
        return Ok(QuasiNormSpec { layer_norms, lambdas: vec![1.0], law, inverse_constant: 1.0 });
    }
    layer_norms[1].validate(g.c())?;
    let (m, c) = (g.m(), g.c());
    let (bound, diag) = match law {
        GroupLaw::Graded => {
            let b = bilinear_bound(
                m,
                c,
                |i, j, k| 0.5 * g.bracket_coeff(i, j, k) as f64,
                &layer_norms[0],
                &layer_norms[1],
            );
            (b, 0.0)
        }
        GroupLaw::NormalForm => {
            let b = bilinear_bound(
                m,
                c,
                |i, j, k| g.q(i, j, k) as f64,
                &layer_norms[0],
                &layer_norms[1],
            );
            (b, b)
        }
    };
    if !(bound > 0.0) {
        return Err(Error::Invalid("bracket vanishes on the unit ball".into()));
    }
    let lambda2 = 2.0 / bound;
    Ok(QuasiNormSpec {
        layer_norms,
        lambdas: vec![1.0, lambda2],
        law,
        inverse_constant: (1.0 + lambda2 * diag).sqrt(),
    })
}

/// The rescaled quasi-norm with a planar polygonal horizontal norm and the
/// absolute value on a one-dimensional centre.
pub fn planar_quasinorm(g: &GroupSpec, p: &PolygonalNorm, epsilon: f64) -> Result<QuasiNormSpec> {
    rescale_quasinorm(g, vec![LayerNorm::Polygon(p.clone()), LayerNorm::L1], epsilon)
}

/// Exact `C₂ = max ‖½B(u, v)‖` over vertex pairs of a rational polygon.
pub fn bracket_constant_exact(g: &GroupSpec, p: &PolygonalNorm) -> Result<crate::norm::Q> {
    use crate::norm::{q, Q};
    use num_traits::{Signed, Zero};
    if g.m() != 2 || g.c() != 1 {
        return Err(Error::Contract("exact bracket constant needs m = 2, c = 1".into()));
    }
    let b = q(g.bracket_coeff(0, 1, 0));
    let mut best = Q::zero();
    for u in p.vertices() {
        for v in p.vertices() {
            let val = (&b * (&u[0] * &v[1] - &u[1] * &v[0]) / q(2)).abs();
            if val > best {
                best = val;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::dilate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_point(rng: &mut ChaCha8Rng, m: usize, c: usize, s: f64) -> RealPoint {
        RealPoint::new(
            (0..m).map(|_| rng.gen_range(-s..s)).collect(),
            (0..c).map(|_| rng.gen_range(-s..s)).collect(),
        )
    }

    #[test]
    fn evaluation_examples() {
        let spec = QuasiNormSpec::new(vec![LayerNorm::Polygon(PolygonalNorm::l1()), LayerNorm::L1], vec![1.0, 1.0])
            .unwrap();
        assert_eq!(quasinorm(&spec, &RealPoint::origin(2, 1)), 0.0);
        assert_eq!(quasinorm(&spec, &RealPoint::new(vec![0.0, 0.0], vec![4.0])), 2.0);
        assert!(QuasiNormSpec::new(vec![LayerNorm::L1], vec![2.0]).is_err());
        assert!(QuasiNormSpec::new(vec![LayerNorm::L1, LayerNorm::L1], vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn homogeneity() {
        let g = GroupSpec::heisenberg3();
        let spec = planar_quasinorm(&g, &PolygonalNorm::l1(), 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let p = rand_point(&mut rng, 2, 1, 3.0);
            let t = rng.gen_range(0.01..50.0);
            let lhs = quasinorm(&spec, &dilate(t, &p).unwrap());
            let rhs = t * quasinorm(&spec, &p);
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn h3_lambdas() {
        let g = GroupSpec::heisenberg3();
        let graded = planar_quasinorm(&g, &PolygonalNorm::l1(), 0.0).unwrap();
        assert_eq!(graded.lambdas, vec![1.0, 4.0]);
        assert_eq!(graded.inverse_constant, 1.0);
        let normal = planar_quasinorm(&g, &PolygonalNorm::l1(), 0.1).unwrap();
        assert_eq!(normal.lambdas, vec![1.0, 2.0]);
        assert_eq!(bracket_constant_exact(&g, &PolygonalNorm::l1()).unwrap(), crate::norm::qf(1, 2));
    }

    #[test]
    fn abelian_is_a_norm() {
        let g = GroupSpec::abelian(3);
        let spec = rescale_quasinorm(&g, vec![LayerNorm::L1], 0.5).unwrap();
        assert_eq!(spec.lambdas, vec![1.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let x = rand_point(&mut rng, 3, 0, 5.0);
            let y = rand_point(&mut rng, 3, 0, 5.0);
            let s = RealPoint::new(x.h.iter().zip(&y.h).map(|(a, b)| a + b).collect(), vec![]);
            assert!(quasinorm(&spec, &s) <= quasinorm(&spec, &x) + quasinorm(&spec, &y) + 1e-12);
        }
    }

    #[test]
    fn normal_form_law_with_slack() {
        let g = GroupSpec::heisenberg3();
        let spec = planar_quasinorm(&g, &PolygonalNorm::l1(), 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100_000 {
            let x = rand_point(&mut rng, 2, 1, 2.0);
            let y = rand_point(&mut rng, 2, 1, 2.0);
            let xy = g.mul_normal_real(&x, &y);
            assert!(quasinorm(&spec, &xy) <= quasinorm(&spec, &x) + quasinorm(&spec, &y) + 0.1);
        }
    }

    #[test]
    fn inverse_bound_normal_form() {
        let g = GroupSpec::heisenberg3();
        let spec = planar_quasinorm(&g, &PolygonalNorm::l1(), 0.1).unwrap();
        let c = spec.inverse_constant;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let x = rand_point(&mut rng, 2, 1, 2.0);
            let qaa = g.cocycle_real(&x.h, &x.h);
            let inv = RealPoint::new(x.h.iter().map(|a| -a).collect(), vec![qaa[0] - x.v[0]]);
            assert!(quasinorm(&spec, &inv) <= c * quasinorm(&spec, &x) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn euclidean_layer_bound_is_safe() {
        let g = GroupSpec::heisenberg5();
        let spec = rescale_quasinorm(
            &g,
            vec![LayerNorm::WeightedEuclidean(vec![1.0, 2.0, 0.5, 1.0]), LayerNorm::L1],
            0.0,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20_000 {
            let x = rand_point(&mut rng, 4, 1, 1.0);
            let y = rand_point(&mut rng, 4, 1, 1.0);
            let xy = g.mul_graded(&x, &y);
            assert!(
                quasinorm(&spec, &xy) <= (quasinorm(&spec, &x) + quasinorm(&spec, &y)) * (1.0 + 1e-12)
            );
        }
        assert!(rescale_quasinorm(
            &g,
            vec![LayerNorm::WeightedEuclidean(vec![1.0, 0.0, 1.0, 1.0]), LayerNorm::L1],
            0.0
        )
        .is_err());
    }
}
