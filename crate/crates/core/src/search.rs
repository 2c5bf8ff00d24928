//! Realizability search: seeded sampling of inner products, zero-crossing
//! bisection along one-parameter families, and witness bookkeeping.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{build_algebra, is_unimodular, LieAlgebraSpec, StructureTensor};
use crate::curvature::{ricci_operator, RicciData};
use crate::error::{Error, Result};
use crate::metric::{canonical_a49, orthonormal_frame, A49Params, InnerProduct, SpdSampler};
use crate::signature::{signature_index, zero_threshold, Sign, SignatureIndex, SignatureTuple};

pub const SCHEMA: &str = "ricci-sig/1";

/// Samples per parallel partition. Partitions are merged in index order, so
/// reports do not depend on the thread count.
const PARTITION: u64 = 4096;

/// A concrete point of the search space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Inner product on the catalog basis, row-major.
    Metric(InnerProduct),
    /// Orthonormal `A4_9^beta` frame.
    A49(A49Params),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessSource {
    Sample { index: u64 },
    Constructed { note: String },
    Bisection { parameter: f64, eig_index: usize, note: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub witness: Witness,
    pub signature: SignatureTuple,
    pub source: WitnessSource,
}

/// Recomputes the Ricci data of a witness on the given algebra.
pub fn evaluate_witness(spec: &LieAlgebraSpec, w: &Witness) -> Result<RicciData> {
    match w {
        Witness::Metric(q) => {
            let t = build_algebra(spec)?;
            Ok(ricci_operator(&orthonormal_frame(&t, q)?))
        }
        Witness::A49(p) => {
            let beta = spec.param("beta");
            if spec.family != crate::algebra::Family::A49 || beta != Some(p.beta) {
                return Err(Error::InvalidParams(format!(
                    "A4_9 frame with beta={} does not belong to {spec}",
                    p.beta
                )));
            }
            Ok(ricci_operator(&canonical_a49(p)?))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    /// `M M^T + shift` inner products on the catalog basis.
    Spd,
    /// Random parameters of the orthonormal `A4_9^beta` frames.
    A49Frames,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub schema: String,
    pub algebra: LieAlgebraSpec,
    pub channel: Channel,
    pub found: BTreeMap<SignatureIndex, WitnessRecord>,
    pub samples_used: u64,
    /// Samples whose zero eigenvalues were only numerically small and were
    /// therefore not accepted as witnesses.
    pub near_zero_skipped: u64,
    pub seed: u64,
}

impl SearchReport {
    pub fn indices(&self) -> Vec<u8> {
        self.found.keys().map(|k| k.get()).collect()
    }

    /// Re-evaluates every witness and checks its stored signature.
    pub fn replay(&self) -> Result<bool> {
        for (idx, rec) in &self.found {
            let r = evaluate_witness(&self.algebra, &rec.witness)?;
            if r.signature != rec.signature || signature_index(&r.signature)? != *idx {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Relative size below which a sampled zero eigenvalue counts as structural.
/// Chance near-zeros of ill-conditioned samples sit far above this.
pub const STRUCTURAL_ZERO: f64 = 1e-12;

/// True when every eigenvalue classified as zero is exactly degenerate up to
/// rounding.
pub fn zeros_are_structural(r: &RicciData) -> bool {
    let cut = STRUCTURAL_ZERO * r.norm_inf().max(1.0);
    r.signature
        .signs()
        .iter()
        .zip(&r.eigenvalues)
        .all(|(s, l)| *s != Sign::Zero || l.abs() <= cut)
}

type Hits = BTreeMap<SignatureIndex, (u64, Witness, SignatureTuple)>;

/// Scans `budget` samples in parallel partitions, keeping for each signature
/// the lowest sample index that produced it. Returns the hits and the number
/// of samples dropped for non-structural zeros.
fn scan<F>(budget: u64, eval: F) -> Result<(Hits, u64)>
where
    F: Fn(u64) -> Result<(Witness, RicciData)> + Sync,
{
    let parts = budget.div_ceil(PARTITION);
    let partials: Vec<Result<(Hits, u64)>> = (0..parts)
        .into_par_iter()
        .map(|p| {
            let mut local = BTreeMap::new();
            let mut skipped = 0;
            for i in (p * PARTITION)..((p + 1) * PARTITION).min(budget) {
                let (w, r) = eval(i)?;
                if !zeros_are_structural(&r) {
                    skipped += 1;
                    continue;
                }
                let idx = signature_index(&r.signature)?;
                local.entry(idx).or_insert((i, w, r.signature));
            }
            Ok((local, skipped))
        })
        .collect();
    let mut merged = BTreeMap::new();
    let mut skipped = 0;
    for part in partials {
        let (hits, n) = part?;
        skipped += n;
        for (k, v) in hits {
            merged.entry(k).or_insert(v);
        }
    }
    Ok((merged, skipped))
}

fn into_found(m: Hits) -> BTreeMap<SignatureIndex, WitnessRecord> {
    m.into_iter()
        .map(|(k, (index, witness, signature))| {
            (
                k,
                WitnessRecord {
                    witness,
                    signature,
                    source: WitnessSource::Sample { index },
                },
            )
        })
        .collect()
}

/// Samples `budget` seeded inner products and records the first witness of
/// every signature encountered.
pub fn realizability_search(spec: &LieAlgebraSpec, budget: u64, seed: u64) -> Result<SearchReport> {
    if budget == 0 {
        return Err(Error::InvalidParams("budget must be at least 1".into()));
    }
    let t = build_algebra(spec)?;
    let sampler = SpdSampler::new(t.dim(), seed);
    let (found, skipped) = scan(budget, |i| {
        let q = sampler.sample(i);
        let r = ricci_operator(&orthonormal_frame(&t, &q)?);
        Ok((Witness::Metric(q), r))
    })?;
    Ok(SearchReport {
        schema: SCHEMA.to_string(),
        algebra: spec.clone(),
        channel: Channel::Spd,
        found: into_found(found),
        samples_used: budget,
        near_zero_skipped: skipped,
        seed,
    })
}

/// Draws orthonormal `A4_9^beta` frames with `a ~ U(0.05, 1]`,
/// `b ~ U(0.05, 5]` and `c, d, f ~ U[-3, 3]`.
pub fn sample_a49_params(beta: f64, seed: u64, index: u64) -> A49Params {
    let mut rng = SpdSampler::new(1, seed).rng(index);
    A49Params {
        a: 1.0 - rng.random_range(0.0..0.95),
        b: 5.0 - rng.random_range(0.0..4.95),
        c: rng.random_range(-3.0..=3.0),
        d: rng.random_range(-3.0..=3.0),
        f: rng.random_range(-3.0..=3.0),
        beta,
    }
}

/// Random search over the orthonormal `A4_9^beta` frames.
pub fn a49_frame_search(beta: f64, budget: u64, seed: u64) -> Result<SearchReport> {
    if budget == 0 {
        return Err(Error::InvalidParams("budget must be at least 1".into()));
    }
    let spec = LieAlgebraSpec::a49(beta);
    spec.validate()?;
    let (found, skipped) = scan(budget, |i| {
        let p = sample_a49_params(beta, seed, i);
        let r = ricci_operator(&canonical_a49(&p)?);
        Ok((Witness::A49(p), r))
    })?;
    Ok(SearchReport {
        schema: SCHEMA.to_string(),
        algebra: spec,
        channel: Channel::A49Frames,
        found: into_found(found),
        samples_used: budget,
        near_zero_skipped: skipped,
        seed,
    })
}

/// A one-parameter family of metric Lie algebras.
pub trait RicciCurve {
    fn witness_at(&self, s: f64) -> Result<Witness>;
    fn ricci_at(&self, s: f64) -> Result<RicciData>;
}

/// `s -> params(s)` through the orthonormal `A4_9^beta` frames.
pub struct A49Curve<F>(pub F);

impl<F: Fn(f64) -> A49Params> RicciCurve for A49Curve<F> {
    fn witness_at(&self, s: f64) -> Result<Witness> {
        Ok(Witness::A49((self.0)(s)))
    }

    fn ricci_at(&self, s: f64) -> Result<RicciData> {
        Ok(ricci_operator(&canonical_a49(&(self.0)(s))?))
    }
}

/// The straight segment `(1 - s) q0 + s q1` of inner products on a fixed algebra.
pub struct MetricSegment<'a> {
    pub algebra: &'a StructureTensor,
    pub from: &'a InnerProduct,
    pub to: &'a InnerProduct,
}

impl RicciCurve for MetricSegment<'_> {
    fn witness_at(&self, s: f64) -> Result<Witness> {
        Ok(Witness::Metric(self.from.lerp(self.to, s)?))
    }

    fn ricci_at(&self, s: f64) -> Result<RicciData> {
        let q = self.from.lerp(self.to, s)?;
        Ok(ricci_operator(&orthonormal_frame(self.algebra, &q)?))
    }
}

const BISECT_MAX_ITER: usize = 200;
const BISECT_TOL: f64 = 1e-10;

fn strict_sign(l: f64, scale: f64) -> Sign {
    if l.abs() <= 1e-12 * scale.max(1.0) {
        Sign::Zero
    } else if l < 0.0 {
        Sign::Neg
    } else {
        Sign::Pos
    }
}

/// Locates a parameter where eigenvalue `eig_index` (ascending order) of the
/// Ricci operator vanishes, to `|lambda| <= 1e-10 * ||Ric||_inf`.
///
/// The eigenvalue must be strictly signed at `lo` and must not carry the
/// same sign at `hi` (it may already sit on a structural zero there). The
/// bracket end that keeps the sign of `lo` is the one returned, so the
/// signature is read on the side where the crossing completes.
pub fn zero_crossing_bisect<C: RicciCurve + ?Sized>(
    curve: &C,
    eig_index: usize,
    lo: f64,
    hi: f64,
) -> Result<(f64, RicciData)> {
    let r_lo = curve.ricci_at(lo)?;
    let r_hi = curve.ricci_at(hi)?;
    let n = r_lo.eigenvalues.len();
    if eig_index >= n {
        return Err(Error::IndexOutOfRange {
            index: eig_index,
            dim: n,
        });
    }
    let s_lo = strict_sign(r_lo.eigenvalues[eig_index], r_lo.norm_inf());
    let s_hi = strict_sign(r_hi.eigenvalues[eig_index], r_hi.norm_inf());
    if s_lo == Sign::Zero || s_lo == s_hi {
        return Err(Error::NoSignChange);
    }
    let (mut keep, mut keep_r, mut other) = (lo, r_lo, hi);
    for _ in 0..BISECT_MAX_ITER {
        if keep_r.eigenvalues[eig_index].abs() <= BISECT_TOL * keep_r.norm_inf() {
            return Ok((keep, keep_r));
        }
        let mid = 0.5 * (keep + other);
        if mid == keep || mid == other {
            break;
        }
        let r_mid = curve.ricci_at(mid)?;
        if strict_sign(r_mid.eigenvalues[eig_index], r_mid.norm_inf()) == s_lo {
            keep = mid;
            keep_r = r_mid;
        } else {
            other = mid;
        }
    }
    Err(Error::NoConvergence {
        iterations: BISECT_MAX_ITER,
    })
}

/// Range of the scalar curvature over seeded inner products.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarSurvey {
    pub algebra: LieAlgebraSpec,
    pub samples: u64,
    pub seed: u64,
    pub min: f64,
    pub max: f64,
    /// Largest `S / max(1, ||Ric||_inf)`.
    pub max_ratio: f64,
}

pub fn scalar_curvature_survey(spec: &LieAlgebraSpec, budget: u64, seed: u64) -> Result<ScalarSurvey> {
    let t = build_algebra(spec)?;
    let sampler = SpdSampler::new(t.dim(), seed);
    let vals: Vec<Result<(f64, f64)>> = (0..budget)
        .into_par_iter()
        .map(|i| {
            let r = ricci_operator(&orthonormal_frame(&t, &sampler.sample(i))?);
            Ok((r.scalar, r.scalar / r.norm_inf().max(1.0)))
        })
        .collect();
    let (mut min, mut max, mut max_ratio) = (f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in vals {
        let (s, ratio) = v?;
        min = min.min(s);
        max = max.max(s);
        max_ratio = max_ratio.max(ratio);
    }
    Ok(ScalarSurvey {
        algebra: spec.clone(),
        samples: budget,
        seed,
        min,
        max,
        max_ratio,
    })
}

/// Checks that every sampled metric has two eigenvalues below `-eps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativePairReport {
    pub algebra: LieAlgebraSpec,
    pub samples: u64,
    pub seed: u64,
    pub pass: bool,
    /// Largest observed `lambda_2 / ||Ric||_inf`.
    pub worst_second_eigenvalue: f64,
    pub first_failure: Option<u64>,
}

/// Every sampled metric must have `lambda_2 < -eps`. `A4_9` is sampled
/// through its orthonormal frames, everything else through raw inner products.
pub fn negative_pair_property(spec: &LieAlgebraSpec, budget: u64, seed: u64) -> Result<NegativePairReport> {
    let t = build_algebra(spec)?;
    if is_unimodular(&t) {
        return Err(Error::NotNonUnimodular(spec.label()));
    }
    let sampler = SpdSampler::new(t.dim(), seed);
    let is_a49 = spec.family == crate::algebra::Family::A49;
    let beta = spec.param("beta").unwrap_or(0.0);
    let results: Vec<Result<(u64, bool, f64)>> = (0..budget)
        .into_par_iter()
        .map(|i| {
            let r = if is_a49 {
                ricci_operator(&canonical_a49(&sample_a49_params(beta, seed, i))?)
            } else {
                ricci_operator(&orthonormal_frame(&t, &sampler.sample(i))?)
            };
            let scale = r.norm_inf();
            let l2 = r.eigenvalues[1];
            Ok((i, l2 < -zero_threshold(scale), l2 / scale))
        })
        .collect();
    let mut worst = f64::NEG_INFINITY;
    let mut first_failure = None;
    for res in results {
        let (i, ok, ratio) = res?;
        worst = worst.max(ratio);
        if !ok && first_failure.is_none() {
            first_failure = Some(i);
        }
    }
    Ok(NegativePairReport {
        algebra: spec.clone(),
        samples: budget,
        seed,
        pass: first_failure.is_none(),
        worst_second_eigenvalue: worst,
        first_failure,
    })
}
