//! Strategies and property bodies shared by the property suite and the
//! acceptance runner.
#![allow(dead_code)]

use nalgebra::DMatrix;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use ricci_core::algebra::{bracket, build_algebra, check_jacobi, Family, LieAlgebraSpec};
use ricci_core::curvature::{ricci_operator, sup_norm};
use ricci_core::metric::{orthonormal_frame, InnerProduct, SPD_SHIFT};
use ricci_core::search::zeros_are_structural;
use ricci_core::signature::sym_eigenvalues;

/// Maps two unit draws onto admissible parameters of `family`.
pub fn spec_from(family: Family, u: f64, v: f64) -> LieAlgebraSpec {
    let nonzero = |x: f64, fallback: f64| if x.abs() < 1e-3 { fallback } else { x };
    match family {
        Family::A35 => LieAlgebraSpec::alpha(family, 0.01 + 0.98 * u),
        Family::A37 | Family::A411 => LieAlgebraSpec::alpha(family, 0.01 + 5.0 * u),
        Family::A42 => LieAlgebraSpec::alpha(family, nonzero(-5.0 + 10.0 * u, 0.5)),
        Family::A45 => {
            let alpha = nonzero(-1.0 + 2.0 * u, -0.5);
            let beta = nonzero(alpha + (1.0 - alpha) * v, 1.0);
            LieAlgebraSpec::new(family).with("alpha", alpha).with("beta", beta)
        }
        Family::A46 => LieAlgebraSpec::new(family)
            .with("alpha", nonzero(-5.0 + 10.0 * u, 1.0))
            .with("beta", 5.0 * v),
        Family::A49 => LieAlgebraSpec::a49(1.0 - 1.999 * u),
        _ => LieAlgebraSpec::new(family),
    }
}

pub fn any_spec() -> impl Strategy<Value = LieAlgebraSpec> {
    (0..Family::ALL.len(), 0.0..1.0f64, 0.0..1.0f64)
        .prop_map(|(i, u, v)| spec_from(Family::ALL[i], u, v))
}

/// `M M^T + shift * I` with `M_ij` in `[-1, 1]`.
pub fn any_metric() -> impl Strategy<Value = InnerProduct> {
    prop::collection::vec(-1.0..1.0f64, 16).prop_map(|m| {
        let m = DMatrix::from_row_slice(4, 4, &m);
        let mut q = &m * m.transpose();
        for i in 0..4 {
            q[(i, i)] += SPD_SHIFT;
        }
        let q = DMatrix::from_fn(4, 4, |i, j| if i <= j { q[(i, j)] } else { q[(j, i)] });
        InnerProduct::new(q).expect("shifted Gram matrix is SPD")
    })
}

pub fn any_vec4() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, 4)
}

/// Orthogonal matrix from Gram-Schmidt on a random square matrix.
pub fn any_orthogonal() -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-1.0..1.0f64, 16)
        .prop_filter_map("well conditioned", |m| {
            let m = DMatrix::from_row_slice(4, 4, &m);
            let qr = m.qr();
            let r = qr.r();
            (0..4).all(|i| r[(i, i)].abs() > 1e-3).then(|| qr.q())
        })
}

pub fn any_symmetric() -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-5.0..5.0f64, 16).prop_map(|m| {
        let m = DMatrix::from_row_slice(4, 4, &m);
        (&m + m.transpose()) * 0.5
    })
}

type Prop = Result<(), TestCaseError>;

pub fn jacobi_holds(spec: &LieAlgebraSpec) -> Prop {
    let t = build_algebra(spec).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(check_jacobi(&t), "{spec}");
    Ok(())
}

pub fn bracket_bilinear(spec: &LieAlgebraSpec, x: &[f64], y: &[f64], z: &[f64], c: f64) -> Prop {
    let t = build_algebra(spec).unwrap();
    let xy: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + c * b).collect();
    let lhs = bracket(&t, &xy, z).unwrap();
    let xz = bracket(&t, x, z).unwrap();
    let yz = bracket(&t, y, z).unwrap();
    let zx = bracket(&t, z, x).unwrap();
    let tol = 1e-12 * (1.0 + t.max_abs()) * 64.0;
    for k in 0..4 {
        prop_assert!((lhs[k] - xz[k] - c * yz[k]).abs() <= tol);
        prop_assert!((xz[k] + zx[k]).abs() <= tol);
    }
    Ok(())
}

/// `Ric(c q) = Ric(q) / c` entrywise, to `1e-9` relative.
pub fn scaling_law(spec: &LieAlgebraSpec, q: &InnerProduct, c: f64) -> Prop {
    let t = build_algebra(spec).unwrap();
    let r1 = ricci_operator(&orthonormal_frame(&t, q).unwrap());
    let r2 = ricci_operator(&orthonormal_frame(&t, &q.scaled(c).unwrap()).unwrap());
    let diff = sup_norm(&(&r1.ric / c - &r2.ric));
    prop_assert!(diff <= 1e-9 * (1.0 + sup_norm(&r1.ric) / c), "diff {diff}");
    if zeros_are_structural(&r1) && zeros_are_structural(&r2) {
        let near = r1
            .eigenvalues
            .iter()
            .any(|l| l.abs() > 1e-12 * r1.norm_inf() && l.abs() < 1e-6 * r1.norm_inf());
        if !near {
            prop_assert_eq!(r1.signature, r2.signature);
        }
    }
    Ok(())
}

/// Frame constants scale as `C'(c q) = C'(q) / sqrt(c)`.
pub fn frame_scaling(spec: &LieAlgebraSpec, q: &InnerProduct, c: f64) -> Prop {
    let t = build_algebra(spec).unwrap();
    let m1 = orthonormal_frame(&t, q).unwrap();
    let m2 = orthonormal_frame(&t, &q.scaled(c).unwrap()).unwrap();
    let s = c.sqrt();
    let scale = 1.0 + m1.constants().max_abs();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let d = m1.constants().get(i, j, k) / s - m2.constants().get(i, j, k);
                prop_assert!(d.abs() <= 1e-10 * scale, "({i},{j},{k}) off by {d}");
            }
        }
    }
    Ok(())
}

/// Eigenvalues of `O S O^T` equal those of `S`.
pub fn conjugation_invariance(s: &DMatrix<f64>, o: &DMatrix<f64>) -> Prop {
    let mut rotated = o * s * o.transpose();
    let sym = (&rotated + rotated.transpose()) * 0.5;
    rotated.copy_from(&sym);
    let e1 = sym_eigenvalues(s).unwrap();
    let e2 = sym_eigenvalues(&rotated).unwrap();
    let tol = 1e-10 * (1.0 + sup_norm(s));
    for (a, b) in e1.iter().zip(&e2) {
        prop_assert!((a - b).abs() <= tol, "{e1:?} vs {e2:?}");
    }
    Ok(())
}

/// `trace(Ric) = sum of eigenvalues = S`.
pub fn trace_matches_eigenvalues(spec: &LieAlgebraSpec, q: &InnerProduct) -> Prop {
    let t = build_algebra(spec).unwrap();
    let r = ricci_operator(&orthonormal_frame(&t, q).unwrap());
    let sum: f64 = r.eigenvalues.iter().sum();
    prop_assert!((sum - r.ric.trace()).abs() <= 1e-10 * (1.0 + r.norm_inf()));
    prop_assert!((r.scalar - r.ric.trace()).abs() <= 1e-12 * (1.0 + r.norm_inf()));
    Ok(())
}
