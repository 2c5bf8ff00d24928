//! Ricci operator of a metric Lie algebra.
//!
//! In an orthonormal frame `{f_i}` the metric adjoint is the transpose, and
//!
//! ```text
//! Ric = -1/2 sum_i ad(f_i)^T ad(f_i) + 1/4 sum_i ad(f_i) ad(f_i)^T - 1/2 B - (ad H)^s
//! ```
//!
//! with `B_ij = trace(ad f_i ad f_j)`, `H_i = trace ad(f_i)` and
//! `(ad H)^s = (ad H + ad H^T) / 2`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::metric::{ad_matrix, symmetrize, MetricLieAlgebra};
use crate::signature::{classify, sym_eigenvalues, SignatureTuple};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RicciData {
    #[serde(serialize_with = "ser_matrix")]
    pub ric: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
    pub signature: SignatureTuple,
    pub scalar: f64,
}

fn ser_matrix<S: serde::Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    rows.serialize(s)
}

impl RicciData {
    /// Classifies a symmetric operator.
    pub fn from_matrix(mut ric: DMatrix<f64>) -> RicciData {
        symmetrize(&mut ric);
        let eigenvalues =
            sym_eigenvalues(&ric).expect("cyclic Jacobi converges on finite symmetric input");
        let signature = classify(&eigenvalues, sup_norm(&ric));
        let scalar = ric.trace();
        RicciData {
            ric,
            eigenvalues,
            signature,
            scalar,
        }
    }

    pub fn norm_inf(&self) -> f64 {
        sup_norm(&self.ric)
    }
}

/// Max absolute row sum.
pub fn sup_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn ads(m: &MetricLieAlgebra) -> Vec<DMatrix<f64>> {
    (0..m.dim())
        .map(|i| ad_matrix(m.constants(), i).expect("index in range"))
        .collect()
}

fn killing_from(ads: &[DMatrix<f64>]) -> DMatrix<f64> {
    let n = ads.len();
    let mut b = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            // trace(X Y) = sum_kl X_kl Y_lk
            let v = ads[i].component_mul(&ads[j].transpose()).sum();
            b[(i, j)] = v;
            b[(j, i)] = v;
        }
    }
    b
}

/// `B_ij = trace(ad f_i * ad f_j)`.
pub fn killing_operator(m: &MetricLieAlgebra) -> DMatrix<f64> {
    killing_from(&ads(m))
}

/// `H` with `trace ad(X) = <X, H>`.
pub fn mean_curvature_vector(m: &MetricLieAlgebra) -> DVector<f64> {
    let t = m.constants();
    DVector::from_fn(m.dim(), |i, _| t.ad_trace(i))
}

/// Assembled Ricci matrix before eigen-analysis.
pub fn ricci_matrix(m: &MetricLieAlgebra) -> DMatrix<f64> {
    let n = m.dim();
    let ads = ads(m);
    let mut ric = DMatrix::zeros(n, n);
    let mut ad_h = DMatrix::zeros(n, n);
    let h = mean_curvature_vector(m);
    for (i, ad) in ads.iter().enumerate() {
        ric -= 0.5 * ad.tr_mul(ad);
        ric += 0.25 * ad * ad.transpose();
        if h[i] != 0.0 {
            ad_h += h[i] * ad;
        }
    }
    ric -= 0.5 * killing_from(&ads);
    ric -= 0.5 * (&ad_h + ad_h.transpose());
    debug_assert!({
        let asym = (&ric - ric.transpose()).amax();
        asym <= 1e-12 * (1.0 + sup_norm(&ric))
    });
    symmetrize(&mut ric);
    ric
}

pub fn ricci_operator(m: &MetricLieAlgebra) -> RicciData {
    RicciData::from_matrix(ricci_matrix(m))
}

pub fn scalar_curvature(m: &MetricLieAlgebra) -> f64 {
    ricci_matrix(m).trace()
}
