//! Closed-form Ricci data of the orthonormal `A4_9^beta` frames, with
//! checks of each formula against the general curvature engine.
//!
//! With `l = 2a(1+beta)`, `om = 1-beta` and
//! `r = 4a^2(beta^2+beta+1) + c^2 + d^2 + f^2 om^2`, the Ricci operator of
//! [`canonical_a49`] is `Ric = M / 2` where
//!
//! ```text
//! M11 = b^2 + c^2 + d^2 - 4a^2(1+beta)^2
//! M12 = -a c beta + d f om - c l
//! M13 = -d (a + l)
//! M14 = 0
//! M22 = -2 a l - b^2 - c^2 + f^2 om^2
//! M23 = -c d - a f om^2 - f l om
//! M24 = b d
//! M33 = -4a^2 beta(1+beta) - b^2 - d^2 - f^2 om^2
//! M34 = -b c
//! M44 = -r
//! ```

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, Matrix2};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::LieAlgebraSpec;
use crate::curvature::{ricci_operator, sup_norm, RicciData};
use crate::error::{Error, Result};
use crate::metric::{canonical_a49, A49Params, SpdSampler};
use crate::search::{
    a49_frame_search, zero_crossing_bisect, A49Curve, Witness, WitnessRecord,
    WitnessSource, SCHEMA,
};
use crate::signature::{signature_index, sym_eigenvalues, SignatureIndex};
use crate::table3::{builtin_witnesses, CellState};

/// The explicit Ricci matrix in the orthonormal frame.
pub fn explicit_ric_a49(p: &A49Params) -> Result<DMatrix<f64>> {
    p.validate()?;
    let A49Params { a, b, c, d, f, beta } = *p;
    let l = 2.0 * a * (1.0 + beta);
    let om = 1.0 - beta;
    let r = 4.0 * a * a * (beta * beta + beta + 1.0) + c * c + d * d + f * f * om * om;
    let m11 = b * b + c * c + d * d - 4.0 * a * a * (1.0 + beta).powi(2);
    let m12 = -a * c * beta + d * f * om - c * l;
    let m13 = -d * (a + l);
    let m22 = -2.0 * a * l - b * b - c * c + f * f * om * om;
    let m23 = -c * d - a * f * om * om - f * l * om;
    let m24 = b * d;
    let m33 = -4.0 * a * a * beta * (1.0 + beta) - b * b - d * d - f * f * om * om;
    let m34 = -b * c;
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        m11, m12, m13, 0.0,
        m12, m22, m23, m24,
        m13, m23, m33, m34,
        0.0, m24, m34, -r,
    ]);
    Ok(m * 0.5)
}

/// `||explicit - engine||_inf / (1 + ||Ric||_inf)`.
pub fn master_residual(p: &A49Params) -> Result<f64> {
    let e = explicit_ric_a49(p)?;
    let g = ricci_operator(&canonical_a49(p)?).ric;
    Ok(sup_norm(&(&e - &g)) / (1.0 + sup_norm(&g)))
}

fn delete(m: &DMatrix<f64>, rows: &[usize]) -> DMatrix<f64> {
    let keep: Vec<usize> = (0..m.nrows()).filter(|i| !rows.contains(i)).collect();
    DMatrix::from_fn(keep.len(), keep.len(), |i, j| m[(keep[i], keep[j])])
}

/// `(lhs, rhs)` of `4 (det Ric_{1,2} + det Ric_{1,3}) = polynomial`, where
/// `Ric_{i,j}` deletes rows and columns `i` and `j` (1-based).
pub fn det_submatrix_identity(p: &A49Params) -> Result<(f64, f64)> {
    let ric = explicit_ric_a49(p)?;
    let lhs = 4.0 * (delete(&ric, &[0, 1]).determinant() + delete(&ric, &[0, 2]).determinant());
    let A49Params { a, b, c, d, f, beta } = *p;
    let (a2, b2, c2, d2) = (a * a, b * b, c * c, d * d);
    let q = beta * beta + beta + 1.0;
    let fb = f * f * (beta - 1.0).powi(2);
    let rhs = 16.0 * (1.0 + beta).powi(2) * q * a2 * a2
        + (8.0 * q * b2
            + 4.0 * (3.0 * beta + 2.0 + 2.0 * beta * beta) * (c2 + d2)
            + 4.0 * f * f * (beta * beta - 1.0).powi(2))
            * a2
        + c2 * c2
        + d2 * d2
        + (2.0 * fb + c2 + d2) * b2
        + (fb + 2.0 * d2) * c2
        + fb * d2;
    Ok((lhs, rhs))
}

/// Monic coefficients `[1, c1, c2, c3, c4]` of `t^4 + c1 t^3 + ...`.
pub type Quartic = [f64; 5];

fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        for (j, y) in q.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn quartic(factors: &[&[f64]]) -> Quartic {
    let p = factors.iter().fold(vec![1.0], |acc, f| poly_mul(&acc, f));
    p.try_into().expect("factors multiply to degree four")
}

/// Characteristic polynomial of `2 Ric` at `a = 1`, `b = 2(1+beta)`, `c = d = 0`.
pub fn charpoly_case_b2(beta: f64, f: f64) -> Quartic {
    let om = 1.0 - beta;
    let f2 = f * f;
    let lin = [1.0, 4.0 * (beta * beta + beta + 1.0) + f2 * om * om];
    let quad = [
        1.0,
        12.0 * (1.0 + beta).powi(2),
        -om.powi(4) * f2 * f2 - (5.0 * beta * beta + 6.0 * beta + 5.0) * om * om * f2
            + 16.0 * (2.0 + beta) * (1.0 + 2.0 * beta) * (1.0 + beta).powi(2),
    ];
    quartic(&[&[1.0, 0.0], &lin, &quad])
}

/// Characteristic polynomial of `2 Ric` at `a = 1`, `b = 3(1+beta)`, `c = d = 0`.
pub fn charpoly_case_b3(beta: f64, f: f64) -> Quartic {
    let om = 1.0 - beta;
    let f2 = f * f;
    let lin1 = [1.0, -5.0 * (1.0 + beta).powi(2)];
    let lin2 = [1.0, 4.0 * (beta * beta + beta + 1.0) + f2 * om * om];
    let quad = [
        1.0,
        22.0 * (1.0 + beta).powi(2),
        -om.powi(4) * f2 * f2 - (5.0 * beta * beta + 6.0 * beta + 5.0) * om * om * f2
            + (9.0 * beta + 13.0) * (13.0 * beta + 9.0) * (beta + 1.0).powi(2),
    ];
    quartic(&[&lin1, &lin2, &quad])
}

/// Characteristic polynomial of `2 Ric` at `a = b = 1`, `c = d = f = 0`.
pub fn charpoly_case_ab1(beta: f64) -> Quartic {
    quartic(&[
        &[1.0, (2.0 * beta + 3.0) * (2.0 * beta + 1.0)],
        &[1.0, 4.0 * (beta * beta + beta + 1.0)],
        &[1.0, (2.0 * beta + 1.0).powi(2)],
        &[1.0, 5.0 + 4.0 * beta],
    ])
}

/// Monic characteristic polynomial of a symmetric 4x4 matrix, rebuilt from
/// its eigenvalues. Also returns the largest eigenvalue magnitude.
pub fn charpoly_from_eigenvalues(m: &DMatrix<f64>) -> Result<(Quartic, f64)> {
    if m.nrows() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: m.nrows(),
        });
    }
    let eigs = sym_eigenvalues(m)?;
    let factors: Vec<[f64; 2]> = eigs.iter().map(|&mu| [1.0, -mu]).collect();
    let refs: Vec<&[f64]> = factors.iter().map(|f| f.as_slice()).collect();
    let scale = eigs.iter().fold(0.0f64, |s, mu| s.max(mu.abs()));
    Ok((quartic(&refs), scale))
}

/// `max_k |p_k - q_k| / (|q_k| + s^k)`: coefficient `k` is a degree-`k`
/// symmetric function of roots bounded by `s`, so this is a relative error
/// that stays meaningful when a coefficient vanishes.
pub fn coefficient_residual(p: &Quartic, q: &Quartic, s: f64) -> f64 {
    (1..5)
        .map(|k| {
            let denom = q[k].abs() + s.powi(k as i32);
            if denom == 0.0 {
                (p[k] - q[k]).abs()
            } else {
                (p[k] - q[k]).abs() / denom
            }
        })
        .fold(0.0, f64::max)
}

/// `10 (1 + a + b)`, the concrete stand-in for an arbitrarily large `f`.
pub fn big_f(a: f64, b: f64) -> f64 {
    10.0 * (1.0 + a + b)
}

/// Constant term of the quadratic factor shared by the `b2` and `b3` cases;
/// it turns negative once `(1-beta)^4 f^4` dominates.
pub fn quadratic_constant(beta: f64, f: f64, b_case: u8) -> f64 {
    let om = 1.0 - beta;
    let tail = if b_case == 2 {
        16.0 * (2.0 + beta) * (1.0 + 2.0 * beta) * (1.0 + beta).powi(2)
    } else {
        (9.0 * beta + 13.0) * (13.0 * beta + 9.0) * (beta + 1.0).powi(2)
    };
    -om.powi(4) * f.powi(4) - (5.0 * beta * beta + 6.0 * beta + 5.0) * om * om * f * f + tail
}

/// Frame parameters with `beta <= -1/2` together with a rotation angle `t`
/// acting on coordinates 2 and 3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaTwoFrame {
    pub t: f64,
    pub params: A49Params,
}

impl LemmaTwoFrame {
    pub fn new(t: f64, params: A49Params) -> Result<Self> {
        params.validate()?;
        if params.beta > -0.5 || !t.is_finite() {
            return Err(Error::InvalidParams(format!(
                "need beta in (-1, -1/2] and finite t (got beta={}, t={t})",
                params.beta
            )));
        }
        Ok(LemmaTwoFrame { t, params })
    }

    pub fn beta(&self) -> f64 {
        self.params.beta
    }
}

/// `Q D Q^T` with `D = diag(-3 beta, -1-2 beta, 1-beta, 0)` and
/// `Q` rotating coordinates 2, 3 by `[[cos t, sin t], [-sin t, cos t]]`.
pub fn rotated_weight(beta: f64, t: f64) -> DMatrix<f64> {
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        -3.0 * beta,
        -1.0 - 2.0 * beta,
        1.0 - beta,
        0.0,
    ]));
    let mut q = DMatrix::identity(4, 4);
    let (s, c) = t.sin_cos();
    q[(1, 1)] = c;
    q[(1, 2)] = s;
    q[(2, 1)] = -s;
    q[(2, 2)] = c;
    &q * d * q.transpose()
}

pub fn lemma2_h1(p: &A49Params, t: f64) -> f64 {
    let beta = p.beta;
    (2.0 + beta) * (t.cos() * p.c - t.sin() * p.d).powi(2) - (1.0 + 2.0 * beta) * (p.c * p.c + p.d * p.d)
}

pub fn lemma2_h2(p: &A49Params, t: f64) -> f64 {
    let (a, f, beta) = (p.a, p.f, p.beta);
    4.0 * (1.0 + beta) * ((5.0 - t.cos().powi(2)) * beta * (1.0 + beta) + (2.0 * t).cos()) * a * a
        - (2.0 * t).sin() * (1.0 - beta) * (3.0 + beta) * (2.0 + beta) * a * f
        - (2.0 + beta) * (1.0 - beta).powi(2) * (2.0 * t).cos() * f * f
}

/// `(2 trace(Ric D(t)), h1(t), h2(t))`.
pub fn lemma2_decomposition(fr: &LemmaTwoFrame) -> Result<(f64, f64, f64)> {
    let ric = explicit_ric_a49(&fr.params)?;
    let lhs = 2.0 * (ric * rotated_weight(fr.beta(), fr.t)).trace();
    Ok((lhs, lemma2_h1(&fr.params, fr.t), lemma2_h2(&fr.params, fr.t)))
}

/// `t0` with `cos 2t0 > 0` and `a sin 2t0 + f cos 2t0 = 0`.
pub fn lemma2_t0(a: f64, f: f64) -> f64 {
    -0.5 * (f / a).atan()
}

/// Closed form of `h2(t0)` after eliminating `f`.
pub fn lemma2_h2_at_t0(a: f64, beta: f64, t0: f64) -> f64 {
    4.0 * a * a * (1.0 + beta) / (2.0 * t0).cos()
        * ((9.0 * t0.cos().powi(2) - 5.0) * beta * (1.0 + beta) + 1.0)
}

/// `h1(t0) + h2(t0)`; positive for `beta in (-1, -1/2)`, which forces a
/// positive Ricci eigenvalue.
pub fn lemma2_t0_certificate(p: &A49Params) -> Result<f64> {
    p.validate()?;
    if !(p.beta < -0.5) {
        return Err(Error::InvalidParams(format!(
            "certificate needs beta in (-1, -1/2) (got {})",
            p.beta
        )));
    }
    let t0 = lemma2_t0(p.a, p.f);
    Ok(lemma2_h1(p, t0) + lemma2_h2(p, t0))
}

/// Blocks of `2 Ric` at `beta = -1/2`, `c = f = 0`, on coordinates (1, 3)
/// and (2, 4).
pub fn beta_half_blocks(a: f64, b: f64, d: f64) -> (Matrix2<f64>, Matrix2<f64>) {
    let (a2, b2, d2) = (a * a, b * b, d * d);
    let first = Matrix2::new(b2 + d2 - a2, -2.0 * a * d, -2.0 * a * d, -b2 - d2 + a2);
    let second = Matrix2::new(-b2 - 2.0 * a2, b * d, b * d, -3.0 * a2 - d2);
    (first, second)
}

/// `2 Ric` at `c = d = 0`, `b = 2a` is `diag(outer[0], A, outer[1])`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegHalfBlocks {
    pub a_block: Matrix2<f64>,
    pub outer: [f64; 2],
}

impl NegHalfBlocks {
    pub fn trace_formula(a: f64, beta: f64) -> f64 {
        -4.0 * a * a * (3.0 + 2.0 * beta + beta * beta)
    }

    pub fn det_formula(a: f64, f: f64, beta: f64) -> f64 {
        let om = 1.0 - beta;
        -om.powi(4) * f.powi(4) - a * a * (5.0 * beta * beta + 6.0 * beta + 5.0) * om * om * f * f
            + 16.0 * a.powi(4) * (2.0 + beta) * (1.0 + beta + beta * beta)
    }

    /// The full `2 Ric`.
    pub fn assemble(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 0)] = self.outer[0];
        m[(3, 3)] = self.outer[1];
        for i in 0..2 {
            for j in 0..2 {
                m[(1 + i, 1 + j)] = self.a_block[(i, j)];
            }
        }
        m
    }
}

pub fn neg_half_open_blocks(a: f64, f: f64, beta: f64) -> NegHalfBlocks {
    let om = 1.0 - beta;
    let q = 1.0 + beta + beta * beta;
    let off = -a * f * (3.0 + beta) * om;
    NegHalfBlocks {
        a_block: Matrix2::new(
            -4.0 * a * a * (2.0 + beta) + f * f * om * om,
            off,
            off,
            -4.0 * a * a * q - f * f * om * om,
        ),
        outer: [-4.0 * a * a * beta * (2.0 + beta), -4.0 * a * a * q - f * f * om * om],
    }
}

/// At `beta = 1` the submatrix deleting row and column 1 is negative definite.
pub fn beta1_submatrix_check(a: f64, b: f64, c: f64, d: f64) -> Result<bool> {
    Ok(beta1_submatrix_top(a, b, c, d)? < 0.0)
}

/// Largest eigenvalue of that submatrix.
pub fn beta1_submatrix_top(a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    let ric = explicit_ric_a49(&A49Params::new(a, b, c, d, 0.0, 1.0)?)?;
    let eigs = sym_eigenvalues(&delete(&ric, &[0]))?;
    Ok(eigs[eigs.len() - 1])
}

/// `(a, b, c, d)` rows realizing signatures 1, 2, 3 at `beta = 1`.
pub const BETA_ONE_ROWS: [(u8, [f64; 4]); 3] = [
    (1, [1.0, 1.0, 0.0, 0.0]),
    (2, [1.0, 4.0, 0.0, 0.0]),
    (3, [1.0, 6.0, 0.0, 0.0]),
];

/// Which part of `(-1, 1]` a value of beta falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `(-1, -1/2)`
    Low,
    /// `-1/2`
    Half,
    /// `(-1/2, 1)`
    Middle,
    /// `1`
    One,
}

impl Regime {
    pub fn of(beta: f64) -> Result<Regime> {
        if !(beta > -1.0 && beta <= 1.0) {
            return Err(Error::InvalidParams(format!("beta must lie in (-1, 1] (got {beta})")));
        }
        Ok(if beta < -0.5 {
            Regime::Low
        } else if beta == -0.5 {
            Regime::Half
        } else if beta < 1.0 {
            Regime::Middle
        } else {
            Regime::One
        })
    }

    /// Signature indices realized in this regime.
    pub fn expected(self) -> BTreeSet<u8> {
        let v: &[u8] = match self {
            Regime::Low => &[3, 5, 6],
            Regime::Half => &[3, 4, 5, 6],
            Regime::Middle => &[1, 2, 3, 4, 5, 6],
            Regime::One => &[1, 2, 3],
        };
        v.iter().copied().collect()
    }
}

pub const PROP1_GRID: [f64; 9] = [-0.9, -0.75, -0.6, -0.5, -0.25, 0.0, 0.5, 0.9, 1.0];

fn frame(a: f64, b: f64, c: f64, d: f64, f: f64, beta: f64) -> A49Params {
    A49Params { a, b, c, d, f, beta }
}

/// Bisects `f` along `a = 1`, `c = d = 0` with fixed `b`, tracking the third
/// eigenvalue from `f = 0` to `f = big_f`.
fn bisect_f(beta: f64, b: f64, note: &str) -> Result<WitnessRecord> {
    let at = move |f| frame(1.0, b, 0.0, 0.0, f, beta);
    let (s, r) = zero_crossing_bisect(&A49Curve(at), 2, 0.0, big_f(1.0, b))?;
    Ok(WitnessRecord {
        witness: Witness::A49(at(s)),
        signature: r.signature,
        source: WitnessSource::Bisection {
            parameter: s,
            eig_index: 2,
            note: note.into(),
        },
    })
}

/// Closed-form frames and bisection witnesses for one value of beta.
fn closed_form_witnesses(beta: f64) -> Result<Vec<WitnessRecord>> {
    let mut out = Vec::new();
    let mut push = |p: A49Params, note: &str| -> Result<()> {
        let r = ricci_operator(&canonical_a49(&p)?);
        out.push(WitnessRecord {
            witness: Witness::A49(p),
            signature: r.signature,
            source: WitnessSource::Constructed { note: note.into() },
        });
        Ok(())
    };
    match Regime::of(beta)? {
        Regime::Middle => {
            let b2 = 2.0 * (1.0 + beta);
            let b3 = 3.0 * (1.0 + beta);
            push(frame(1.0, 1.0, 0.0, 0.0, 0.0, beta), "a = b = 1, c = d = f = 0")?;
            push(frame(1.0, b2, 0.0, 0.0, 0.0, beta), "a = 1, b = 2(1+beta), f = 0")?;
            push(
                frame(1.0, b2, 0.0, 0.0, big_f(1.0, b2), beta),
                "a = 1, b = 2(1+beta), f = 10(1+a+b)",
            )?;
            push(frame(1.0, b3, 0.0, 0.0, 0.0, beta), "a = 1, b = 3(1+beta), f = 0")?;
            push(
                frame(1.0, b3, 0.0, 0.0, big_f(1.0, b3), beta),
                "a = 1, b = 3(1+beta), f = 10(1+a+b)",
            )?;
            out.push(bisect_f(beta, b2, "f along a = 1, b = 2(1+beta), c = d = 0")?);
        }
        Regime::Low | Regime::Half => {
            push(frame(1.0, 2.0, 0.0, 0.0, 0.0, beta), "a = 1, b = 2a, f = 0")?;
            push(
                frame(1.0, 2.0, 0.0, 0.0, big_f(1.0, 2.0), beta),
                "a = 1, b = 2a, f = 10(1+a+b)",
            )?;
            out.push(bisect_f(beta, 2.0, "f along a = 1, b = 2a, c = d = 0")?);
        }
        // Covered by the witness file.
        Regime::One => {}
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop1Row {
    pub beta: f64,
    pub regime: Regime,
    pub expected: BTreeSet<u8>,
    pub cells: Vec<CellState>,
    pub witnesses: BTreeMap<SignatureIndex, WitnessRecord>,
    pub samples_used: u64,
    pub near_zero_skipped: u64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop1Report {
    pub schema: String,
    pub budget: u64,
    pub seed: u64,
    pub rows: Vec<Prop1Row>,
    pub pass: bool,
}

/// Witnesses every signature of each regime and searches the frames for
/// anything outside it.
pub fn verify_prop1(grid: &[f64], budget: u64, seed: u64) -> Result<Prop1Report> {
    let file = builtin_witnesses();
    let mut rows = Vec::new();
    for &beta in grid {
        let regime = Regime::of(beta)?;
        let expected = regime.expected();
        let search = a49_frame_search(beta, budget, seed)?;
        let mut witnesses = search.found;
        let spec = LieAlgebraSpec::a49(beta);
        let mut extra = closed_form_witnesses(beta)?;
        for e in file.entries.iter().filter(|e| e.algebra == spec) {
            if let Witness::A49(p) = &e.witness {
                let r = ricci_operator(&canonical_a49(p)?);
                extra.push(WitnessRecord {
                    witness: e.witness.clone(),
                    signature: r.signature,
                    source: WitnessSource::Constructed {
                        note: e.note.clone(),
                    },
                });
            }
        }
        for rec in extra {
            let idx = signature_index(&rec.signature)?;
            witnesses.entry(idx).or_insert(rec);
        }
        let cells: Vec<CellState> = SignatureIndex::all()
            .map(|i| CellState::of(expected.contains(&i.get()), witnesses.contains_key(&i)))
            .collect();
        let pass = cells.iter().all(|c| c.ok());
        rows.push(Prop1Row {
            beta,
            regime,
            expected,
            cells,
            witnesses,
            samples_used: search.samples_used,
            near_zero_skipped: search.near_zero_skipped,
            pass,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(Prop1Report {
        schema: SCHEMA.to_string(),
        budget,
        seed,
        rows,
        pass,
    })
}

impl Prop1Report {
    /// One grid row per value of beta.
    pub fn to_csv(&self) -> String {
        crate::table3::grid_csv(self.rows.iter().map(|r| {
            (
                LieAlgebraSpec::a49(r.beta).label(),
                r.cells.iter().map(|c| c.as_str()).collect(),
            )
        }))
    }
}

/// One checked formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaRecord {
    pub formula: String,
    pub samples: u64,
    /// Largest relative residual for identities; zero for sign checks.
    pub max_residual: f64,
    /// Smallest observed value for positivity checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_value: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformanceReport {
    pub schema: String,
    pub seed: u64,
    pub records: Vec<FormulaRecord>,
    pub pass: bool,
}

/// Random frame with `beta` drawn from `lo + (hi - lo) * (1 - u)`, `u in [0, 1)`,
/// i.e. from `(lo, hi]`.
pub fn sample_frame(seed: u64, index: u64, lo: f64, hi: f64) -> A49Params {
    let mut rng = SpdSampler::new(1, seed).rng(index);
    let beta = hi - (hi - lo) * rng.random_range(0.0..1.0);
    let beta = if beta <= lo { hi } else { beta };
    let mut p = crate::search::sample_a49_params(beta, seed ^ 0x5eed, index);
    p.beta = beta;
    p
}

fn record(formula: &str, samples: u64, max_residual: f64, tolerance: f64) -> FormulaRecord {
    FormulaRecord {
        formula: formula.into(),
        samples,
        max_residual,
        min_value: None,
        tolerance,
        pass: max_residual <= tolerance,
    }
}

fn positivity(formula: &str, samples: u64, min_value: f64, ok: bool) -> FormulaRecord {
    FormulaRecord {
        formula: formula.into(),
        samples,
        max_residual: 0.0,
        min_value: Some(min_value),
        tolerance: 0.0,
        pass: ok,
    }
}

/// Draws of `beta` in `(-1/2, 1)` for the characteristic polynomial suites.
fn charpoly_betas(seed: u64, n: u64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let mut rng = SpdSampler::new(2, seed).rng(i);
            -0.5 + 1.5 * rng.random_range(0.001..0.999)
        })
        .collect()
}

/// Returns the worst coefficient residual over `betas x f_values` for one case.
pub fn charpoly_suite(
    case: u8,
    betas: &[f64],
    f_values: &[f64],
) -> Result<(u64, f64)> {
    let mut worst = 0.0f64;
    let mut n = 0;
    for &beta in betas {
        let fs: &[f64] = if case == 1 { &[0.0] } else { f_values };
        for &f in fs {
            let (b, closed) = match case {
                1 => (1.0, charpoly_case_ab1(beta)),
                2 => (2.0 * (1.0 + beta), charpoly_case_b2(beta, f)),
                _ => (3.0 * (1.0 + beta), charpoly_case_b3(beta, f)),
            };
            let ric2 = explicit_ric_a49(&frame(1.0, b, 0.0, 0.0, f, beta))? * 2.0;
            let (eig, s) = charpoly_from_eigenvalues(&ric2)?;
            worst = worst.max(coefficient_residual(&eig, &closed, s));
            n += 1;
        }
    }
    Ok((n, worst))
}

/// Every closed-form check with `n` random draws each.
pub fn verify_identities(seed: u64, n: u64) -> Result<ConformanceReport> {
    let mut records = Vec::new();

    let mut worst = 0.0f64;
    for i in 0..n {
        worst = worst.max(master_residual(&sample_frame(seed, i, -1.0, 1.0))?);
    }
    records.push(record("explicit_ric_a49 vs general formula", n, worst, 1e-10));

    let mut worst = 0.0f64;
    let mut min_rhs = f64::INFINITY;
    let mut min_gap = f64::INFINITY;
    for i in 0..n {
        let p = sample_frame(seed.wrapping_add(1), i, -1.0, 1.0);
        let (lhs, rhs) = det_submatrix_identity(&p)?;
        worst = worst.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
        min_rhs = min_rhs.min(rhs);
        let r = ricci_operator(&canonical_a49(&p)?);
        min_gap = min_gap.min(-r.eigenvalues[1] / r.norm_inf().max(1.0) - 1e-9);
    }
    records.push(record("det_submatrix_identity", n, worst, 1e-9));
    records.push(positivity("det_submatrix_identity rhs > 0", n, min_rhs, min_rhs > 0.0));
    records.push(positivity(
        "second eigenvalue below -eps",
        n,
        min_gap,
        min_gap > 0.0,
    ));

    let betas = charpoly_betas(seed, 50);
    let f_values: Vec<f64> = (0..10).map(|k| 0.5 * k as f64).collect();
    for (case, name) in [(2, "charpoly_case_b2"), (3, "charpoly_case_b3"), (1, "charpoly_case_ab1")] {
        let (count, worst) = charpoly_suite(case, &betas, &f_values)?;
        records.push(record(name, count, worst, 1e-9));
    }

    let mut worst = 0.0f64;
    let mut min_h1 = f64::INFINITY;
    for i in 0..n {
        let p = sample_frame(seed.wrapping_add(2), i, -1.0, -0.5);
        let t = SpdSampler::new(3, seed).rng(i).random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let (lhs, h1, h2) = lemma2_decomposition(&LemmaTwoFrame::new(t, p)?)?;
        worst = worst.max((lhs - h1 - h2).abs() / (1.0 + lhs.abs()));
        min_h1 = min_h1.min(h1);
    }
    records.push(record("lemma2_decomposition", n, worst, 1e-9));
    records.push(positivity("lemma2_h1 >= 0", n, min_h1, min_h1 >= -1e-12));

    let mut min_cert = f64::INFINITY;
    let mut worst = 0.0f64;
    let mut min_top = f64::INFINITY;
    for i in 0..n {
        let mut p = sample_frame(seed.wrapping_add(3), i, -1.0, -0.5);
        if p.beta == -0.5 {
            p.beta = -0.75;
        }
        let cert = lemma2_t0_certificate(&p)?;
        min_cert = min_cert.min(cert);
        let t0 = lemma2_t0(p.a, p.f);
        let closed = lemma2_h2_at_t0(p.a, p.beta, t0);
        worst = worst.max((closed - lemma2_h2(&p, t0)).abs() / (1.0 + closed.abs()));
        let r = ricci_operator(&canonical_a49(&p)?);
        min_top = min_top.min(r.eigenvalues[3] / r.norm_inf());
    }
    records.push(positivity("lemma2_t0_certificate > 0", n, min_cert, min_cert > 0.0));
    records.push(record("lemma2_h2_at_t0", n, worst, 1e-9));
    records.push(positivity(
        "largest eigenvalue > 0 below beta = -1/2",
        n,
        min_top,
        min_top > 0.0,
    ));

    let mut worst = 0.0f64;
    let mut min_margin = f64::INFINITY;
    for i in 0..n {
        let p = sample_frame(seed.wrapping_add(4), i, -1.0, 1.0);
        let ric2 = explicit_ric_a49(&frame(p.a, p.b, 0.0, p.d, 0.0, -0.5))? * 2.0;
        let (b1, b2) = beta_half_blocks(p.a, p.b, p.d);
        let assembled = [
            (b1[(0, 0)], ric2[(0, 0)]),
            (b1[(0, 1)], ric2[(0, 2)]),
            (b1[(1, 1)], ric2[(2, 2)]),
            (b2[(0, 0)], ric2[(1, 1)]),
            (b2[(0, 1)], ric2[(1, 3)]),
            (b2[(1, 1)], ric2[(3, 3)]),
        ];
        let scale = 1.0 + sup_norm(&ric2);
        for (x, y) in assembled {
            worst = worst.max((x - y).abs() / scale);
        }
        worst = worst.max(b1.trace().abs() / scale);
        let e = b2.symmetric_eigen().eigenvalues;
        min_margin = min_margin.min(-e.max());
    }
    records.push(record("beta_half_blocks", n, worst, 1e-12));
    records.push(positivity("beta_half second block negative definite", n, min_margin, min_margin > 0.0));

    let mut worst = 0.0f64;
    for i in 0..n {
        let p = sample_frame(seed.wrapping_add(5), i, -1.0, -0.5);
        let blocks = neg_half_open_blocks(p.a, p.f, p.beta);
        let ric2 = explicit_ric_a49(&frame(p.a, 2.0 * p.a, 0.0, 0.0, p.f, p.beta))? * 2.0;
        let scale = 1.0 + sup_norm(&ric2);
        worst = worst.max(sup_norm(&(blocks.assemble() - &ric2)) / scale);
        let tr = NegHalfBlocks::trace_formula(p.a, p.beta);
        let det = NegHalfBlocks::det_formula(p.a, p.f, p.beta);
        worst = worst.max((blocks.a_block.trace() - tr).abs() / scale);
        worst = worst.max((blocks.a_block.determinant() - det).abs() / (scale * scale));
    }
    records.push(record("neg_half_open_blocks", n, worst, 1e-10));

    let mut margin = f64::INFINITY;
    let rows = BETA_ONE_ROWS.iter().map(|(_, r)| *r);
    let draws = (0..n).map(|i| {
        let p = sample_frame(seed.wrapping_add(6), i, 0.0, 1.0);
        [p.a, p.b, p.c, p.d]
    });
    for [a, b, c, d] in rows.chain(draws) {
        margin = margin.min(-beta1_submatrix_top(a, b, c, d)?);
    }
    records.push(positivity(
        "beta = 1 submatrix negative definite",
        n + 3,
        margin,
        margin > 0.0,
    ));

    let pass = records.iter().all(|r| r.pass);
    Ok(ConformanceReport {
        schema: SCHEMA.to_string(),
        seed,
        records,
        pass,
    })
}

/// Ricci data of a frame through the general engine.
pub fn frame_ricci(p: &A49Params) -> Result<RicciData> {
    Ok(ricci_operator(&canonical_a49(p)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(p: A49Params) -> String {
        frame_ricci(&p).unwrap().signature.to_string()
    }

    #[test]
    fn explicit_examples() {
        let m = explicit_ric_a49(&frame(1.0, 1.0, 0.0, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!(m.diagonal().as_slice(), &[-7.5, -4.5, -4.5, -6.0]);
        let m = explicit_ric_a49(&frame(1.0, 4.0, 0.0, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!(m.diagonal().as_slice(), &[0.0, -12.0, -12.0, -6.0]);
    }

    #[test]
    fn master_oracle_sample() {
        for i in 0..200 {
            let p = sample_frame(3, i, -1.0, 1.0);
            assert!(master_residual(&p).unwrap() <= 1e-10, "{p:?}");
        }
    }

    #[test]
    fn det_identity_example() {
        let (lhs, rhs) = det_submatrix_identity(&frame(1.0, 1.0, 0.0, 0.0, 0.0, 0.0)).unwrap();
        assert!((lhs - 24.0).abs() < 1e-12 && (rhs - 24.0).abs() < 1e-12);
    }

    #[test]
    fn f_terms_vanish_at_beta_one() {
        let base = det_submatrix_identity(&frame(0.7, 1.3, 0.2, -0.4, 0.0, 1.0)).unwrap();
        let with_f = det_submatrix_identity(&frame(0.7, 1.3, 0.2, -0.4, 5.0, 1.0)).unwrap();
        assert_eq!(base.1, with_f.1);
    }

    #[test]
    fn charpoly_examples() {
        // t (t + 4)(t + 4)(t + 8)
        let p = charpoly_case_b2(0.0, 0.0);
        assert_eq!(p, [1.0, 16.0, 80.0, 128.0, 0.0]);
        // (t + 3)(t + 4)(t + 1)(t + 5)
        assert_eq!(charpoly_case_ab1(0.0), [1.0, 13.0, 59.0, 107.0, 60.0]);
        let (n, worst) = charpoly_suite(2, &[0.5], &[1.0]).unwrap();
        assert_eq!(n, 1);
        assert!(worst <= 1e-9);
        let (_, worst) = charpoly_suite(3, &[0.25], &[2.0]).unwrap();
        assert!(worst <= 1e-9);
        let (_, worst) = charpoly_suite(1, &[0.9], &[]).unwrap();
        assert!(worst <= 1e-9);
    }

    #[test]
    fn charpoly_signatures() {
        assert_eq!(sig(frame(1.0, 1.0, 0.0, 0.0, 0.0, 0.0)), "(-,-,-,-)");
        assert_eq!(sig(frame(1.0, 2.0, 0.0, 0.0, 0.0, 0.0)), "(-,-,-,0)");
        assert_eq!(sig(frame(1.0, 2.0, 0.0, 0.0, big_f(1.0, 2.0), 0.0)), "(-,-,0,+)");
        assert_eq!(sig(frame(1.0, 3.0, 0.0, 0.0, 0.0, 0.0)), "(-,-,-,+)");
        assert_eq!(sig(frame(1.0, 3.0, 0.0, 0.0, big_f(1.0, 3.0), 0.0)), "(-,-,+,+)");
        assert!(quadratic_constant(0.9, big_f(1.0, 3.8), 2) < 0.0);
        assert!(quadratic_constant(0.9, big_f(1.0, 5.7), 3) < 0.0);
    }

    #[test]
    fn ab1_root_degenerates_at_half() {
        let p = charpoly_case_ab1(-0.5 + 1e-9);
        assert!(p[4].abs() < 1e-15);
    }

    #[test]
    fn b2_bisection_gives_double_zero() {
        let curve = A49Curve(|f| frame(1.0, 2.0, 0.0, 0.0, f, 0.0));
        let (_, r) = zero_crossing_bisect(&curve, 2, 0.0, big_f(1.0, 2.0)).unwrap();
        assert_eq!(r.signature.to_string(), "(-,-,0,0)");
    }

    #[test]
    fn lemma2_examples() {
        let p = frame(1.3, 0.7, 0.0, 0.4, 0.0, -0.5);
        let (lhs, h1, h2) = lemma2_decomposition(&LemmaTwoFrame::new(0.0, p).unwrap()).unwrap();
        assert!(h1.abs() < 1e-15);
        assert!((lhs - h1 - h2).abs() < 1e-12);
        let q = A49Params { b: 3.1, ..p };
        let (lhs_b, _, _) = lemma2_decomposition(&LemmaTwoFrame::new(0.0, q).unwrap()).unwrap();
        assert!((lhs - lhs_b).abs() < 1e-12);
        assert!(LemmaTwoFrame::new(0.0, frame(1.0, 1.0, 0.0, 0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn t0_certificate_examples() {
        let p = frame(1.0, 1.0, 0.0, 0.0, 1.0, -0.75);
        assert!(lemma2_t0_certificate(&p).unwrap() > 0.0);
        let p0 = frame(0.8, 1.0, 0.3, 0.0, 0.0, -0.75);
        let expected = 4.0 * 0.64 * 0.25 * (4.0 * -0.75 * 0.25 + 1.0) + lemma2_h1(&p0, 0.0);
        assert!((lemma2_t0_certificate(&p0).unwrap() - expected).abs() < 1e-12);
        assert!(lemma2_t0_certificate(&frame(1.0, 1.0, 0.0, 0.0, 0.0, -0.5)).is_err());
    }

    #[test]
    fn beta_half_block_examples() {
        let (b1, _) = beta_half_blocks(1.0, 1.0, 0.0);
        assert_eq!(b1, Matrix2::zeros());
        assert_eq!(sig(frame(1.0, 1.0, 0.0, 0.0, 0.0, -0.5)), "(-,-,0,0)");
        assert_eq!(sig(frame(1.0, 2.0, 0.0, 1.0, 0.0, -0.5)), "(-,-,-,+)");
        let (b1, _) = beta_half_blocks(1.0, 2.0, 1.0);
        let e = b1.symmetric_eigen().eigenvalues;
        assert!(e.min() < 0.0 && e.max() > 0.0);
    }

    #[test]
    fn neg_half_open_examples() {
        let b = neg_half_open_blocks(1.0, 0.0, -0.75);
        assert!((b.a_block.determinant() - 16.0 * 1.25 * 0.8125).abs() < 1e-12);
        assert_eq!(sig(frame(1.0, 2.0, 0.0, 0.0, 0.0, -0.75)), "(-,-,-,+)");
        let big = neg_half_open_blocks(1.0, big_f(1.0, 2.0), -0.75);
        assert!(big.a_block.determinant() < 0.0);
        assert_eq!(sig(frame(1.0, 2.0, 0.0, 0.0, big_f(1.0, 2.0), -0.75)), "(-,-,+,+)");
        let curve = A49Curve(|f| frame(1.0, 2.0, 0.0, 0.0, f, -0.75));
        let (_, r) = zero_crossing_bisect(&curve, 2, 0.0, big_f(1.0, 2.0)).unwrap();
        assert_eq!(r.signature.to_string(), "(-,-,0,+)");
    }

    #[test]
    fn beta_one_rows() {
        for (idx, [a, b, c, d]) in BETA_ONE_ROWS {
            let r = frame_ricci(&frame(a, b, c, d, 0.0, 1.0)).unwrap();
            assert_eq!(signature_index(&r.signature).unwrap().get(), idx);
            assert!(beta1_submatrix_check(a, b, c, d).unwrap());
        }
        let r = frame_ricci(&frame(1.0, 4.0, 0.0, 0.0, 0.0, 1.0)).unwrap();
        assert!(r.eigenvalues.iter().any(|l| l.abs() < 1e-12));
    }

    #[test]
    fn regimes() {
        assert_eq!(Regime::of(-0.9).unwrap(), Regime::Low);
        assert_eq!(Regime::of(-0.5).unwrap(), Regime::Half);
        assert_eq!(Regime::of(0.0).unwrap(), Regime::Middle);
        assert_eq!(Regime::of(1.0).unwrap(), Regime::One);
        assert!(Regime::of(-1.0).is_err());
    }
}
