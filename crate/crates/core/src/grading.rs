//! Gradings, homogeneous dimension and dilations on the ambient real group.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingDims {
    dims: Vec<usize>,
}

impl GradingDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Invalid("grading needs at least one layer".into()));
        }
        if dims.iter().any(|d| *d == 0) {
            return Err(Error::Invalid("grading layers must have positive dimension".into()));
        }
        Ok(GradingDims { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}

/// `Σ i · dim m_i`, the exponent of polynomial volume growth.
pub fn homogeneous_dimension(g: &GradingDims) -> usize {
    g.dims.iter().enumerate().map(|(i, d)| (i + 1) * d).sum()
}

/// Growth degree of `Z ⋉ R^n` from the sizes of the Jordan blocks of the
/// twisting matrix: `1 + Σ_k k(k+1)/2 · n_k`.
pub fn homogeneous_dimension_jordan(block_counts: &BTreeMap<usize, usize>) -> usize {
    1 + block_counts.iter().map(|(k, n)| k * (k + 1) / 2 * n).sum::<usize>()
}

/// A point of the real two-layer group: horizontal part `h`, central part `v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealPoint {
    pub h: Vec<f64>,
    pub v: Vec<f64>,
}

impl RealPoint {
    pub fn new(h: Vec<f64>, v: Vec<f64>) -> Self {
        RealPoint { h, v }
    }

    pub fn origin(m: usize, c: usize) -> Self {
        RealPoint { h: vec![0.0; m], v: vec![0.0; c] }
    }

    pub fn is_origin(&self) -> bool {
        self.h.iter().chain(&self.v).all(|x| *x == 0.0)
    }

    pub fn neg(&self) -> Self {
        RealPoint {
            h: self.h.iter().map(|x| -x).collect(),
            v: self.v.iter().map(|x| -x).collect(),
        }
    }
}

/// `δ_t`: horizontal coordinates scale by `t`, central ones by `t²`.
pub fn dilate(t: f64, p: &RealPoint) -> Result<RealPoint> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("dilation factor must be positive, got {t}")));
    }
    Ok(dilate_unchecked(t, p))
}

pub(crate) fn dilate_unchecked(t: f64, p: &RealPoint) -> RealPoint {
    let t2 = t * t;
    RealPoint {
        h: p.h.iter().map(|x| x * t).collect(),
        v: p.v.iter().map(|x| x * t2).collect(),
    }
}
