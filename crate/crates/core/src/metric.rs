//! Inner products on Lie algebras and orthonormal frames.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{check_jacobi, StructureTensor};
use crate::error::{Error, Result};

/// Diagonal shift added to every sampled inner product.
pub const SPD_SHIFT: f64 = 1e-3;

/// A symmetric positive definite Gram matrix `q_ij = <e_i, e_j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProduct {
    q: DMatrix<f64>,
    chol: DMatrix<f64>,
}

impl InnerProduct {
    /// Validates exact symmetry and the Cholesky pivot test
    /// `L_ii^2 > 1e-12 * trace(q) / n`.
    pub fn new(q: DMatrix<f64>) -> Result<Self> {
        let n = q.nrows();
        if n == 0 || q.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n.max(1),
                found: q.ncols(),
            });
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("non-finite inner product entry".into()));
        }
        if q != q.transpose() {
            return Err(Error::NotSymmetric);
        }
        let floor = 1e-12 * q.trace() / n as f64;
        let chol = cholesky_lower(&q, floor)?;
        Ok(InnerProduct { q, chol })
    }

    pub fn identity(n: usize) -> Self {
        InnerProduct::new(DMatrix::identity(n, n)).expect("identity is SPD")
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        InnerProduct::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)))
    }

    /// Row-major `n * n` entries.
    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        InnerProduct::new(DMatrix::from_row_slice(n, n, entries))
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        self.q.transpose().iter().copied().collect()
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.q
    }

    /// Lower-triangular `L` with `q = L L^T`.
    pub fn cholesky(&self) -> &DMatrix<f64> {
        &self.chol
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        InnerProduct::new(&self.q * c)
    }

    /// `(1 - s) * self + s * other`; SPD for `s` in `[0, 1]`.
    pub fn lerp(&self, other: &InnerProduct, s: f64) -> Result<Self> {
        let mut m = &self.q * (1.0 - s) + &other.q * s;
        symmetrize(&mut m);
        InnerProduct::new(m)
    }
}

impl Serialize for InnerProduct {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_row_major().serialize(s)
    }
}

impl<'de> Deserialize<'de> for InnerProduct {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        let n = (v.len() as f64).sqrt().round() as usize;
        InnerProduct::from_row_major(n, &v).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

fn cholesky_lower(q: &DMatrix<f64>, floor: f64) -> Result<DMatrix<f64>> {
    let n = q.nrows();
    let mut l = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut pivot = q[(j, j)];
        for k in 0..j {
            pivot -= l[(j, k)] * l[(j, k)];
        }
        if !(pivot > floor) {
            return Err(Error::NotPositiveDefinite { index: j, pivot });
        }
        let d = pivot.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = q[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// A Lie algebra written in an orthonormal frame.
///
/// `frame` holds `A` with `f_j = sum_i A_ij e_i`; `constants` are the
/// structure constants with respect to `{f_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricLieAlgebra {
    constants: StructureTensor,
    frame: DMatrix<f64>,
}

impl MetricLieAlgebra {
    /// Declares the basis of `t` orthonormal.
    pub fn orthonormal(t: StructureTensor) -> Self {
        let n = t.dim();
        MetricLieAlgebra {
            constants: t,
            frame: DMatrix::identity(n, n),
        }
    }

    pub fn constants(&self) -> &StructureTensor {
        &self.constants
    }

    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.constants.dim()
    }
}

/// Orthonormalizes `{e_i}` with respect to `q` through the Cholesky factor:
/// with `q = L L^T` the frame is `A = L^{-T}`, and
/// `C'^k_ij = sum A_pi A_qj (A^-1)_kr C^r_pq` where `A^-1 = L^T`.
pub fn orthonormal_frame(t: &StructureTensor, q: &InnerProduct) -> Result<MetricLieAlgebra> {
    let n = t.dim();
    if q.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: q.dim(),
        });
    }
    let l = q.cholesky();
    let a = l
        .transpose()
        .solve_upper_triangular(&DMatrix::identity(n, n))
        .ok_or(Error::NotPositiveDefinite {
            index: 0,
            pivot: 0.0,
        })?;
    let c = t.raw();
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;

    // t1[i,q,r] = sum_p A_pi C[p,q,r]; A is upper triangular so p <= i.
    let mut t1 = vec![0.0; n * n * n];
    for i in 0..n {
        for p in 0..=i {
            let w = a[(p, i)];
            if w == 0.0 {
                continue;
            }
            for qq in 0..n {
                for r in 0..n {
                    t1[idx(i, qq, r)] += w * c[idx(p, qq, r)];
                }
            }
        }
    }
    // t2[i,j,r] = sum_q A_qj t1[i,q,r]
    let mut t2 = vec![0.0; n * n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            for qq in 0..=j {
                let w = a[(qq, j)];
                if w == 0.0 {
                    continue;
                }
                for r in 0..n {
                    t2[idx(i, j, r)] += w * t1[idx(i, qq, r)];
                }
            }
        }
    }
    // out[i,j,k] = sum_r L^T_kr t2[i,j,r]; L^T is upper triangular so r >= k.
    let mut out = vec![0.0; n * n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                let mut s = 0.0;
                for r in k..n {
                    s += l[(r, k)] * t2[idx(i, j, r)];
                }
                out[idx(i, j, k)] = s;
            }
        }
    }
    Ok(MetricLieAlgebra {
        constants: StructureTensor::from_upper(n, &out),
        frame: a,
    })
}

/// Parameters of the five-parameter orthonormal frames of `A4_9^beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct A49Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub f: f64,
    pub beta: f64,
}

impl A49Params {
    pub fn new(a: f64, b: f64, c: f64, d: f64, f: f64, beta: f64) -> Result<Self> {
        let p = A49Params { a, b, c, d, f, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.a, self.b, self.c, self.d, self.f, self.beta];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("non-finite A4_9 parameter".into()));
        }
        if !(self.a > 0.0) {
            return Err(Error::InvalidParams(format!("a must be > 0 (got {})", self.a)));
        }
        if !(self.b > 0.0) {
            return Err(Error::InvalidParams(format!("b must be > 0 (got {})", self.b)));
        }
        if !(self.beta > -1.0 && self.beta <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "beta must lie in (-1, 1] (got {})",
                self.beta
            )));
        }
        Ok(())
    }
}

/// The orthonormal frame of `A4_9^beta` with nonzero constants
/// `C^1_14 = a(1+beta)`, `C^1_23 = b`, `C^1_24 = c`, `C^2_24 = a`,
/// `C^1_34 = d`, `C^2_34 = f(1-beta)`, `C^3_34 = a beta`.
pub fn canonical_a49(p: &A49Params) -> Result<MetricLieAlgebra> {
    p.validate()?;
    let A49Params { a, b, c, d, f, beta } = *p;
    let entries: Vec<_> = [
        (0, 3, 0, a * (beta + 1.0)),
        (1, 2, 0, b),
        (1, 3, 0, c),
        (1, 3, 1, a),
        (2, 3, 0, d),
        (2, 3, 1, f * (1.0 - beta)),
        (2, 3, 2, a * beta),
    ]
    .into_iter()
    .filter(|e| e.3 != 0.0)
    .collect();
    let t = StructureTensor::from_brackets(4, &entries)?;
    debug_assert!(check_jacobi(&t));
    Ok(MetricLieAlgebra::orthonormal(t))
}

/// Seeded sampler of `M M^T + SPD_SHIFT * I` with `M_ij ~ U[-1, 1]`.
///
/// Draws come from ChaCha8 seeded with `seed`; sample `index` uses stream
/// `index`, so any subset of samples can be regenerated independently.
#[derive(Debug, Clone, Copy)]
pub struct SpdSampler {
    pub dim: usize,
    pub seed: u64,
}

impl SpdSampler {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim >= 1);
        SpdSampler { dim, seed }
    }

    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    pub fn sample(&self, index: u64) -> InnerProduct {
        let n = self.dim;
        let mut rng = self.rng(index);
        let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..=1.0));
        let mut q = &m * m.transpose();
        for i in 0..n {
            q[(i, i)] += SPD_SHIFT;
        }
        symmetrize(&mut q);
        InnerProduct::new(q).expect("M M^T + shift * I is positive definite")
    }
}

pub fn sample_spd(dim: usize, seed: u64) -> InnerProduct {
    SpdSampler::new(dim, seed).sample(0)
}

/// `(ad e_i)_kj = C^k_ij`: column `j` holds `[e_i, e_j]`.
pub fn ad_matrix(t: &StructureTensor, i: usize) -> Result<DMatrix<f64>> {
    let n = t.dim();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, dim: n });
    }
    Ok(DMatrix::from_fn(n, n, |k, j| t.get(i, j, k)))
}
