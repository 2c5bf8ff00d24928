//! Real Lie algebras given by structure constants, and the catalog of the
//! 24 four-dimensional families.
//!
//! Basis indices are 0-based in code. Everything user-facing (aliases,
//! JSON algebra files, printed brackets) uses 1-based `e1 .. en`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bracket coefficients `C^k_{ij}` with `[e_i, e_j] = sum_k C^k_{ij} e_k`.
///
/// Antisymmetry in `(i, j)` is exact: every constructor writes the mirror
/// entry itself.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTensor {
    dim: usize,
    c: Vec<f64>,
}

impl StructureTensor {
    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        StructureTensor {
            dim,
            c: vec![0.0; dim * dim * dim],
        }
    }

    /// Builds a tensor from `(i, j, k, value)` entries meaning `C^k_{ij} = value`
    /// (0-based). The mirror `C^k_{ji}` is filled in; `i == j` entries are rejected.
    pub fn from_brackets(dim: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut t = StructureTensor::zero(dim);
        for &(i, j, k, v) in entries {
            for idx in [i, j, k] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            if i == j {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket [e{0}, e{0}] must vanish",
                    i + 1
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidAlgebra("non-finite structure constant".into()));
            }
            t.set(i, j, k, v);
        }
        Ok(t)
    }

    /// Builds a tensor from a dense `(i, j, k)` array, keeping the `i < j`
    /// half and mirroring it.
    pub(crate) fn from_upper(dim: usize, dense: &[f64]) -> Self {
        let mut t = StructureTensor::zero(dim);
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in 0..dim {
                    let v = dense[(i * dim + j) * dim + k];
                    if v != 0.0 {
                        t.set(i, j, k, v);
                    }
                }
            }
        }
        t
    }

    fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let n = self.dim;
        self.c[(i * n + j) * n + k] = v;
        self.c[(j * n + i) * n + k] = -v;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `C^k_{ij}`.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    pub(crate) fn raw(&self) -> &[f64] {
        &self.c
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|&v| v == 0.0)
    }

    /// Nonzero `i < j` entries as `(i, j, k, value)`, 0-based.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, usize, f64)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    if v != 0.0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    /// Largest absolute Jacobi residual over all `(i, j, l, m)`.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        let mut s = 0.0;
                        for k in 0..n {
                            s += self.get(i, j, k) * self.get(k, l, m)
                                + self.get(j, l, k) * self.get(k, i, m)
                                + self.get(l, i, k) * self.get(k, j, m);
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// `trace ad(e_i) = sum_k C^k_{ik}`.
    pub fn ad_trace(&self, i: usize) -> f64 {
        (0..self.dim).map(|k| self.get(i, k, k)).sum()
    }
}

/// True iff the Jacobi identity holds to `1e-12 * (1 + max|C|^2)`.
pub fn check_jacobi(t: &StructureTensor) -> bool {
    let m = t.max_abs();
    t.jacobi_residual() <= 1e-12 * (1.0 + m * m)
}

/// True iff every `trace ad(e_i)` vanishes to 1e-12.
pub fn is_unimodular(t: &StructureTensor) -> bool {
    (0..t.dim()).all(|i| t.ad_trace(i).abs() <= 1e-12)
}

/// `[x, y]_k = sum_{ij} x_i y_j C^k_{ij}`.
pub fn bracket(t: &StructureTensor, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let n = t.dim();
    for v in [x, y] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    let mut out = vec![0.0; n];
    for i in 0..n {
        if x[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            let w = x[i] * y[j];
            if w == 0.0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += w * t.get(i, j, k);
            }
        }
    }
    Ok(out)
}

/// The 24 families of real four-dimensional Lie algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "4A1")]
    A1x4,
    #[serde(rename = "A2+2A1")]
    A2x2A1,
    #[serde(rename = "2A2")]
    A2x2,
    #[serde(rename = "A3_1+A1")]
    A31,
    #[serde(rename = "A3_2+A1")]
    A32,
    #[serde(rename = "A3_3+A1")]
    A33,
    #[serde(rename = "A3_4+A1")]
    A34,
    #[serde(rename = "A3_5+A1")]
    A35,
    #[serde(rename = "A3_6+A1")]
    A36,
    #[serde(rename = "A3_7+A1")]
    A37,
    #[serde(rename = "A3_8+A1")]
    A38,
    #[serde(rename = "A3_9+A1")]
    A39,
    #[serde(rename = "A4_1")]
    A41,
    #[serde(rename = "A4_2")]
    A42,
    #[serde(rename = "A4_3")]
    A43,
    #[serde(rename = "A4_4")]
    A44,
    #[serde(rename = "A4_5")]
    A45,
    #[serde(rename = "A4_6")]
    A46,
    #[serde(rename = "A4_7")]
    A47,
    #[serde(rename = "A4_8")]
    A48,
    #[serde(rename = "A4_9")]
    A49,
    #[serde(rename = "A4_10")]
    A410,
    #[serde(rename = "A4_11")]
    A411,
    #[serde(rename = "A4_12")]
    A412,
}

impl Family {
    pub const ALL: [Family; 24] = [
        Family::A1x4,
        Family::A2x2A1,
        Family::A2x2,
        Family::A31,
        Family::A32,
        Family::A33,
        Family::A34,
        Family::A35,
        Family::A36,
        Family::A37,
        Family::A38,
        Family::A39,
        Family::A41,
        Family::A42,
        Family::A43,
        Family::A44,
        Family::A45,
        Family::A46,
        Family::A47,
        Family::A48,
        Family::A49,
        Family::A410,
        Family::A411,
        Family::A412,
    ];

    /// Stable ASCII alias used on the command line and in reports.
    pub fn alias(self) -> &'static str {
        match self {
            Family::A1x4 => "4A1",
            Family::A2x2A1 => "A2+2A1",
            Family::A2x2 => "2A2",
            Family::A31 => "A3_1+A1",
            Family::A32 => "A3_2+A1",
            Family::A33 => "A3_3+A1",
            Family::A34 => "A3_4+A1",
            Family::A35 => "A3_5+A1",
            Family::A36 => "A3_6+A1",
            Family::A37 => "A3_7+A1",
            Family::A38 => "A3_8+A1",
            Family::A39 => "A3_9+A1",
            Family::A41 => "A4_1",
            Family::A42 => "A4_2",
            Family::A43 => "A4_3",
            Family::A44 => "A4_4",
            Family::A45 => "A4_5",
            Family::A46 => "A4_6",
            Family::A47 => "A4_7",
            Family::A48 => "A4_8",
            Family::A49 => "A4_9",
            Family::A410 => "A4_10",
            Family::A411 => "A4_11",
            Family::A412 => "A4_12",
        }
    }

    pub fn from_alias(s: &str) -> Result<Family> {
        let norm = s.trim().replace(',', "_").to_ascii_uppercase();
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.alias().to_ascii_uppercase() == norm)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }

    /// Names of the real parameters, in conventional order.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            Family::A35 | Family::A37 | Family::A42 | Family::A411 => &["alpha"],
            Family::A45 | Family::A46 => &["alpha", "beta"],
            Family::A49 => &["beta"],
            _ => &[],
        }
    }

    pub fn constraints(self) -> Vec<Constraint> {
        use Constraint::*;
        let gt = |param, value| Gt { param, value };
        match self {
            Family::A35 => vec![gt("alpha", 0.0), Lt { param: "alpha", value: 1.0 }],
            Family::A37 | Family::A411 => vec![gt("alpha", 0.0)],
            Family::A42 => vec![Ne { param: "alpha", value: 0.0 }],
            Family::A45 => vec![
                ProductNonZero { left: "alpha", right: "beta" },
                Ge { param: "alpha", value: -1.0 },
                Ordered { left: "alpha", right: "beta" },
                Le { param: "beta", value: 1.0 },
            ],
            Family::A46 => vec![
                Ne { param: "alpha", value: 0.0 },
                Ge { param: "beta", value: 0.0 },
            ],
            Family::A49 => vec![gt("beta", -1.0), Le { param: "beta", value: 1.0 }],
            _ => Vec::new(),
        }
    }

    /// Nonzero `i < j` brackets `[e_i, e_j] = sum v e_k` as `(i, j, k, v)`, 1-based.
    fn brackets(self, alpha: f64, beta: f64) -> Vec<(usize, usize, usize, f64)> {
        match self {
            Family::A1x4 => vec![],
            Family::A2x2A1 => vec![(1, 2, 2, 1.0)],
            Family::A2x2 => vec![(1, 2, 2, 1.0), (3, 4, 4, 1.0)],
            Family::A31 => vec![(2, 3, 1, 1.0)],
            Family::A32 => vec![(1, 3, 1, 1.0), (2, 3, 1, 1.0), (2, 3, 2, 1.0)],
            Family::A33 => vec![(1, 3, 1, 1.0), (2, 3, 2, 1.0)],
            Family::A34 => vec![(1, 3, 1, 1.0), (2, 3, 2, -1.0)],
            Family::A35 => vec![(1, 3, 1, 1.0), (2, 3, 2, alpha)],
            Family::A36 => vec![(1, 3, 2, -1.0), (2, 3, 1, 1.0)],
            Family::A37 => vec![
                (1, 3, 1, alpha),
                (1, 3, 2, -1.0),
                (2, 3, 1, 1.0),
                (2, 3, 2, alpha),
            ],
            // [e3, e1] = e2 is stored as [e1, e3] = -e2.
            Family::A38 => vec![(1, 2, 3, -1.0), (1, 3, 2, -1.0), (2, 3, 1, 1.0)],
            Family::A39 => vec![(1, 2, 3, 1.0), (1, 3, 2, -1.0), (2, 3, 1, 1.0)],
            Family::A41 => vec![(2, 4, 1, 1.0), (3, 4, 2, 1.0)],
            Family::A42 => vec![(1, 4, 1, alpha), (2, 4, 2, 1.0), (3, 4, 2, 1.0), (3, 4, 3, 1.0)],
            Family::A43 => vec![(1, 4, 1, 1.0), (3, 4, 2, 1.0)],
            Family::A44 => vec![
                (1, 4, 1, 1.0),
                (2, 4, 1, 1.0),
                (2, 4, 2, 1.0),
                (3, 4, 2, 1.0),
                (3, 4, 3, 1.0),
            ],
            Family::A45 => vec![(1, 4, 1, 1.0), (2, 4, 2, alpha), (3, 4, 3, beta)],
            Family::A46 => vec![
                (1, 4, 1, alpha),
                (2, 4, 2, beta),
                (2, 4, 3, -1.0),
                (3, 4, 2, 1.0),
                (3, 4, 3, beta),
            ],
            Family::A47 => vec![
                (2, 3, 1, 1.0),
                (1, 4, 1, 2.0),
                (2, 4, 2, 1.0),
                (3, 4, 2, 1.0),
                (3, 4, 3, 1.0),
            ],
            Family::A48 => vec![(2, 3, 1, 1.0), (2, 4, 2, 1.0), (3, 4, 3, -1.0)],
            Family::A49 => vec![
                (2, 3, 1, 1.0),
                (1, 4, 1, 1.0 + beta),
                (2, 4, 2, 1.0),
                (3, 4, 3, beta),
            ],
            Family::A410 => vec![(2, 3, 1, 1.0), (2, 4, 3, -1.0), (3, 4, 2, 1.0)],
            Family::A411 => vec![
                (2, 3, 1, 1.0),
                (1, 4, 1, 2.0 * alpha),
                (2, 4, 2, alpha),
                (2, 4, 3, -1.0),
                (3, 4, 2, 1.0),
                (3, 4, 3, alpha),
            ],
            Family::A412 => vec![(1, 3, 1, 1.0), (2, 3, 2, 1.0), (1, 4, 2, -1.0), (2, 4, 1, 1.0)],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.alias())
    }
}

/// A machine-readable parameter constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    Gt { param: &'static str, value: f64 },
    Ge { param: &'static str, value: f64 },
    Lt { param: &'static str, value: f64 },
    Le { param: &'static str, value: f64 },
    Ne { param: &'static str, value: f64 },
    /// `left * right != 0`
    ProductNonZero { left: &'static str, right: &'static str },
    /// `left <= right`
    Ordered { left: &'static str, right: &'static str },
}

impl Constraint {
    fn holds(&self, params: &BTreeMap<String, f64>) -> bool {
        let v = |p: &str| params.get(p).copied().unwrap_or(f64::NAN);
        match *self {
            Constraint::Gt { param, value } => v(param) > value,
            Constraint::Ge { param, value } => v(param) >= value,
            Constraint::Lt { param, value } => v(param) < value,
            Constraint::Le { param, value } => v(param) <= value,
            Constraint::Ne { param, value } => v(param) != value,
            Constraint::ProductNonZero { left, right } => v(left) * v(right) != 0.0,
            Constraint::Ordered { left, right } => v(left) <= v(right),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Gt { param, value } => write!(f, "{param} > {value}"),
            Constraint::Ge { param, value } => write!(f, "{param} >= {value}"),
            Constraint::Lt { param, value } => write!(f, "{param} < {value}"),
            Constraint::Le { param, value } => write!(f, "{param} <= {value}"),
            Constraint::Ne { param, value } => write!(f, "{param} != {value}"),
            Constraint::ProductNonZero { left, right } => write!(f, "{left}*{right} != 0"),
            Constraint::Ordered { left, right } => write!(f, "{left} <= {right}"),
        }
    }
}

/// A catalog family together with its parameter values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LieAlgebraSpec {
    pub family: Family,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

impl LieAlgebraSpec {
    pub fn new(family: Family) -> Self {
        LieAlgebraSpec {
            family,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn alpha(family: Family, alpha: f64) -> Self {
        LieAlgebraSpec::new(family).with("alpha", alpha)
    }

    pub fn a49(beta: f64) -> Self {
        LieAlgebraSpec::new(Family::A49).with("beta", beta)
    }

    /// `A4_2^{-2}`, the unimodular member of `A4_2^alpha`.
    pub fn a42_unimodular() -> Self {
        LieAlgebraSpec::alpha(Family::A42, -2.0)
    }

    /// `A4_5^{alpha, -1-alpha}`, unimodular for every admissible alpha in `[-1, -1/2]`.
    pub fn a45_unimodular(alpha: f64) -> Self {
        LieAlgebraSpec::new(Family::A45)
            .with("alpha", alpha)
            .with("beta", -1.0 - alpha)
    }

    /// `A4_6^{-2 beta, beta}`.
    pub fn a46_unimodular(beta: f64) -> Self {
        LieAlgebraSpec::new(Family::A46)
            .with("alpha", -2.0 * beta)
            .with("beta", beta)
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }

    pub fn validate(&self) -> Result<()> {
        let family = self.family.alias().to_string();
        let expected = self.family.params();
        for p in expected {
            match self.params.get(*p) {
                None => {
                    return Err(Error::MissingParameter {
                        family,
                        param: p.to_string(),
                    })
                }
                Some(v) if !v.is_finite() => {
                    return Err(Error::ParameterOutOfRange {
                        family,
                        constraint: format!("{p} must be finite"),
                    })
                }
                Some(_) => {}
            }
        }
        if let Some(extra) = self.params.keys().find(|k| !expected.contains(&k.as_str())) {
            return Err(Error::UnexpectedParameter {
                family,
                param: extra.clone(),
            });
        }
        if let Some(c) = self
            .family
            .constraints()
            .into_iter()
            .find(|c| !c.holds(&self.params))
        {
            return Err(Error::ParameterOutOfRange {
                family,
                constraint: c.to_string(),
            });
        }
        Ok(())
    }

    /// Short label such as `A4_9[beta=0.5]`.
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            return self.family.alias().to_string();
        }
        let ps: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", short_float(*v)))
            .collect();
        format!("{}[{}]", self.family.alias(), ps.join(","))
    }
}

/// At most ten decimals, trailing zeros dropped: `-0.1` rather than
/// `-0.09999999999999998`.
pub(crate) fn short_float(v: f64) -> String {
    let s = format!("{v:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" => "0".to_string(),
        _ => s.to_string(),
    }
}

impl fmt::Display for LieAlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A few admissible parameter choices per family, including the unimodular
/// slices. Parameter-free families appear once.
pub fn representative_specs() -> Vec<LieAlgebraSpec> {
    let mut out = Vec::new();
    for f in Family::ALL {
        match f {
            Family::A35 => out.extend([0.3, 0.7].map(|a| LieAlgebraSpec::alpha(f, a))),
            Family::A37 | Family::A411 => out.extend([0.5, 2.0].map(|a| LieAlgebraSpec::alpha(f, a))),
            Family::A42 => out.extend([-2.0, -0.5, 1.0, 3.0].map(|a| LieAlgebraSpec::alpha(f, a))),
            Family::A45 => {
                for (a, b) in [(-0.9, -0.1), (-0.5, -0.5), (-1.0, 0.5), (0.3, 0.6), (1.0, 1.0)] {
                    out.push(LieAlgebraSpec::new(f).with("alpha", a).with("beta", b));
                }
            }
            Family::A46 => {
                for (a, b) in [(-0.2, 0.1), (1.0, 0.5), (-1.0, 0.0), (2.0, 1.0)] {
                    out.push(LieAlgebraSpec::new(f).with("alpha", a).with("beta", b));
                }
            }
            Family::A49 => out.extend([-0.75, -0.5, 0.0, 0.5, 1.0].map(LieAlgebraSpec::a49)),
            _ => out.push(LieAlgebraSpec::new(f)),
        }
    }
    out
}

pub fn build_algebra(spec: &LieAlgebraSpec) -> Result<StructureTensor> {
    spec.validate()?;
    let alpha = spec.param("alpha").unwrap_or(0.0);
    let beta = spec.param("beta").unwrap_or(0.0);
    let entries: Vec<_> = spec
        .family
        .brackets(alpha, beta)
        .into_iter()
        .filter(|e| e.3 != 0.0)
        .map(|(i, j, k, v)| (i - 1, j - 1, k - 1, v))
        .collect();
    StructureTensor::from_brackets(4, &entries)
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub family: Family,
    pub params: Vec<&'static str>,
    pub constraints: Vec<Constraint>,
}

pub fn list_catalog() -> Vec<CatalogEntry> {
    Family::ALL
        .iter()
        .map(|&family| CatalogEntry {
            family,
            params: family.params().to_vec(),
            constraints: family.constraints(),
        })
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
struct AlgebraFile {
    dim: usize,
    brackets: Vec<BracketEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BracketEntry {
    i: usize,
    j: usize,
    out: BTreeMap<String, f64>,
}

/// Parses the JSON algebra-definition format
/// `{"dim": n, "brackets": [{"i": 1, "j": 2, "out": {"3": 1.0}}, ...]}`
/// (1-based, `i < j` only) and checks the Jacobi identity.
pub fn algebra_from_json(text: &str) -> Result<StructureTensor> {
    let file: AlgebraFile = serde_json::from_str(text)?;
    if file.dim == 0 {
        return Err(Error::InvalidAlgebra("dim must be positive".into()));
    }
    let n = file.dim;
    let mut entries = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for b in &file.brackets {
        if b.i == 0 || b.j == 0 || b.i > n || b.j > n {
            return Err(Error::InvalidAlgebra(format!(
                "bracket indices ({}, {}) outside 1..={n}",
                b.i, b.j
            )));
        }
        if b.i >= b.j {
            return Err(Error::InvalidAlgebra(format!(
                "bracket ({}, {}) must have i < j",
                b.i, b.j
            )));
        }
        if !seen.insert((b.i, b.j)) {
            return Err(Error::InvalidAlgebra(format!(
                "bracket ({}, {}) listed twice",
                b.i, b.j
            )));
        }
        for (k, &v) in &b.out {
            let k: usize = k
                .parse()
                .map_err(|_| Error::InvalidAlgebra(format!("bad output index `{k}`")))?;
            if k == 0 || k > n {
                return Err(Error::InvalidAlgebra(format!("output index {k} outside 1..={n}")));
            }
            entries.push((b.i - 1, b.j - 1, k - 1, v));
        }
    }
    let t = StructureTensor::from_brackets(n, &entries)?;
    if !check_jacobi(&t) {
        return Err(Error::InvalidAlgebra(format!(
            "Jacobi identity fails (residual {:e})",
            t.jacobi_residual()
        )));
    }
    Ok(t)
}

/// Writes a tensor in the JSON algebra-definition format.
pub fn algebra_to_json(t: &StructureTensor) -> String {
    let mut grouped: BTreeMap<(usize, usize), BTreeMap<String, f64>> = BTreeMap::new();
    for (i, j, k, v) in t.nonzero_brackets() {
        grouped
            .entry((i + 1, j + 1))
            .or_default()
            .insert((k + 1).to_string(), v);
    }
    let file = AlgebraFile {
        dim: t.dim(),
        brackets: grouped
            .into_iter()
            .map(|((i, j), out)| BracketEntry { i, j, out })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("algebra file serializes")
}
