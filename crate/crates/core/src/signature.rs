//! Symmetric eigenvalues and Ricci signatures.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
///
/// Input must be symmetric to `1e-9 * max|m_ij|`; it is symmetrized before
/// rotating. Sweeps stop once the off-diagonal Frobenius norm drops below
/// `1e-13 * ||m||_F`.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.ncols(),
        });
    }
    let scale = m.amax();
    if !scale.is_finite() {
        return Err(Error::NoConvergence { iterations: 0 });
    }
    let mut a = m.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            if (a[(i, j)] - a[(j, i)]).abs() > 1e-9 * scale {
                return Err(Error::NotSymmetric);
            }
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    let tol = 1e-13 * a.norm();

    let off = |a: &DMatrix<f64>| {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * a[(i, j)] * a[(i, j)];
            }
        }
        s.sqrt()
    };

    let mut converged = off(&a) <= tol;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                iterations: MAX_SWEEPS,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
            }
        }
        converged = off(&a) <= tol;
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eigs.sort_by(f64::total_cmp);
    Ok(eigs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }

    fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '-' => Some(Sign::Neg),
            '0' => Some(Sign::Zero),
            '+' => Some(Sign::Pos),
            _ => None,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.symbol().to_string())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let mut chars = s.chars();
        match (chars.next().and_then(Sign::from_symbol), chars.next()) {
            (Some(sign), None) => Ok(sign),
            _ => Err(serde::de::Error::custom(format!("bad sign `{s}`"))),
        }
    }
}

/// Signs of the eigenvalues in ascending order, e.g. `(-,-,0,+)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Sign>", into = "Vec<Sign>")]
pub struct SignatureTuple(Vec<Sign>);

impl SignatureTuple {
    /// Rejects sequences that are not of the shape `-* 0* +*`.
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParams(format!(
                "signature {} is not sorted",
                signs.iter().map(|s| s.symbol()).collect::<String>()
            )));
        }
        Ok(SignatureTuple(signs))
    }

    pub fn from_counts(neg: usize, zero: usize, pos: usize) -> Self {
        let mut v = vec![Sign::Neg; neg];
        v.extend(std::iter::repeat_n(Sign::Zero, zero));
        v.extend(std::iter::repeat_n(Sign::Pos, pos));
        SignatureTuple(v)
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, s: Sign) -> usize {
        self.0.iter().filter(|&&x| x == s).count()
    }

    pub fn has_zero(&self) -> bool {
        self.count(Sign::Zero) > 0
    }
}

impl TryFrom<Vec<Sign>> for SignatureTuple {
    type Error = Error;
    fn try_from(v: Vec<Sign>) -> Result<Self> {
        SignatureTuple::new(v)
    }
}

impl From<SignatureTuple> for Vec<Sign> {
    fn from(s: SignatureTuple) -> Self {
        s.0
    }
}

impl fmt::Display for SignatureTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.symbol().to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for SignatureTuple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let signs = inner
            .split(',')
            .map(|p| {
                let p = p.trim();
                let mut cs = p.chars();
                match (cs.next().and_then(Sign::from_symbol), cs.next()) {
                    (Some(sign), None) => Ok(sign),
                    _ => Err(Error::InvalidParams(format!("bad signature `{s}`"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        SignatureTuple::new(signs)
    }
}

/// Zero threshold for eigenvalues of an operator of sup-norm `scale`.
pub fn zero_threshold(scale: f64) -> f64 {
    1e-9 * scale.max(1.0)
}

/// Sign pattern of sorted eigenvalues; `|lambda| <= 1e-9 * max(1, scale)` counts as zero.
pub fn classify(eigs: &[f64], scale: f64) -> SignatureTuple {
    let eps = zero_threshold(scale);
    let signs = eigs
        .iter()
        .map(|&l| {
            if l.abs() <= eps {
                Sign::Zero
            } else if l < 0.0 {
                Sign::Neg
            } else {
                Sign::Pos
            }
        })
        .collect();
    SignatureTuple::new(signs).expect("eigenvalues must be sorted ascending")
}

/// Row number (1..=15) in the table of four-dimensional signatures.
///
/// Rows run lexicographically with `- < 0 < +`:
/// 1 `(-,-,-,-)`, 2 `(-,-,-,0)`, 3 `(-,-,-,+)`, 4 `(-,-,0,0)`, 5 `(-,-,0,+)`,
/// 6 `(-,-,+,+)`, 7 `(-,0,0,0)`, 8 `(-,0,0,+)`, 9 `(-,0,+,+)`, 10 `(-,+,+,+)`,
/// 11 `(0,0,0,0)`, 12 `(0,0,0,+)`, 13 `(0,0,+,+)`, 14 `(0,+,+,+)`, 15 `(+,+,+,+)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignatureIndex(u8);

impl SignatureIndex {
    pub fn new(idx: u8) -> Result<Self> {
        if (1..=15).contains(&idx) {
            Ok(SignatureIndex(idx))
        } else {
            Err(Error::InvalidParams(format!("signature index {idx} outside 1..=15")))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = SignatureIndex> {
        (1..=15).map(SignatureIndex)
    }

    pub fn tuple(self) -> SignatureTuple {
        all_signatures(4)[(self.0 - 1) as usize].clone()
    }
}

impl fmt::Display for SignatureIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Every sorted sign pattern of length `n`, in table order.
pub fn all_signatures(n: usize) -> Vec<SignatureTuple> {
    let mut out = Vec::new();
    for neg in (0..=n).rev() {
        for zero in (0..=(n - neg)).rev() {
            out.push(SignatureTuple::from_counts(neg, zero, n - neg - zero));
        }
    }
    out
}

pub fn signature_index(s: &SignatureTuple) -> Result<SignatureIndex> {
    if s.len() != 4 {
        return Err(Error::NotFourDimensional(s.len()));
    }
    let pos = all_signatures(4)
        .iter()
        .position(|t| t == s)
        .expect("sorted tuples are all listed");
    Ok(SignatureIndex(pos as u8 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(s: &str) -> SignatureTuple {
        s.parse().unwrap()
    }

    #[test]
    fn diagonal_and_swap() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 2.0, 0.0]));
        assert_eq!(sym_eigenvalues(&d).unwrap(), vec![0.0, 1.0, 2.0, 3.0]);
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 1)] = 1.0;
        m[(1, 0)] = 1.0;
        let e = sym_eigenvalues(&m).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-14 && (e[3] - 1.0).abs() < 1e-14);
        assert!(e[1].abs() < 1e-14 && e[2].abs() < 1e-14);
    }

    #[test]
    fn a49_beta0_example() {
        // 2 Ric at a = 1, b = 2, c = d = f = 0, beta = 0.
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.0, -8.0, -4.0, -4.0]));
        assert_eq!(sym_eigenvalues(&m).unwrap(), vec![-8.0, -4.0, -4.0, 0.0]);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(sym_eigenvalues(&m), Err(Error::NotSymmetric)));
    }

    #[test]
    fn classification_thresholds() {
        assert_eq!(classify(&[-1.0, -1e-12, 0.5, 2.0], 2.0), sig("(-,0,+,+)"));
        let zero = classify(&[0.0; 4], 0.0);
        assert_eq!(zero, sig("(0,0,0,0)"));
        assert_eq!(signature_index(&zero).unwrap().get(), 11);
        let neg = classify(&[-7.5, -6.0, -4.5, -4.5], 7.5);
        assert_eq!(neg.to_string(), "(-,-,-,-)");
        assert_eq!(signature_index(&neg).unwrap().get(), 1);
        // 1e-9 * 1000 = 1e-6
        assert_eq!(classify(&[-1.0, 5e-7, 1.0, 1000.0], 1000.0), sig("(-,0,+,+)"));
    }

    #[test]
    fn table_rows() {
        assert_eq!(signature_index(&sig("(-,-,0,+)")).unwrap().get(), 5);
        assert_eq!(signature_index(&sig("(0,0,0,0)")).unwrap().get(), 11);
        assert_eq!(signature_index(&sig("(+,+,+,+)")).unwrap().get(), 15);
        assert_eq!(signature_index(&sig("(-,0,0,0)")).unwrap().get(), 7);
        assert_eq!(signature_index(&sig("(0,0,+,+)")).unwrap().get(), 13);
        assert!(matches!(
            signature_index(&sig("(-,+)")),
            Err(Error::NotFourDimensional(2))
        ));
        for idx in SignatureIndex::all() {
            assert_eq!(signature_index(&idx.tuple()).unwrap(), idx);
        }
        assert_eq!(all_signatures(4).len(), 15);
    }

    #[test]
    fn parse_and_serialize() {
        let s = sig("(-,-,0,+)");
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"["-","-","0","+"]"#);
        let back: SignatureTuple = serde_json::from_str(r#"["-","-","0","+"]"#).unwrap();
        assert_eq!(back, s);
        assert!("(+,-)".parse::<SignatureTuple>().is_err());
        assert!(serde_json::from_str::<SignatureTuple>(r#"["+","-"]"#).is_err());
    }
}
