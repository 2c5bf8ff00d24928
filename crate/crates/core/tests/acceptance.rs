//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::Rng;

use common::*;
use ricci_core::a49::{
    charpoly_suite, det_submatrix_identity, lemma2_decomposition, lemma2_t0_certificate,
    master_residual, sample_frame, verify_prop1, LemmaTwoFrame, BETA_ONE_ROWS, PROP1_GRID,
};
use ricci_core::algebra::{build_algebra, representative_specs, Family, LieAlgebraSpec};
use ricci_core::curvature::ricci_operator;
use ricci_core::metric::{canonical_a49, orthonormal_frame, A49Params, InnerProduct, SpdSampler};
use ricci_core::search::{negative_pair_property, scalar_curvature_survey};
use ricci_core::signature::{signature_index, zero_threshold};
use ricci_core::table3::{expected_csv, verify_table3};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit: Duration, start: Instant, out: Outcome) -> Outcome {
    let took = start.elapsed();
    let out = out.map(|d| format!("{d}, {:.2}s", took.as_secs_f64()));
    match out {
        Ok(d) if took > limit => Err(format!("{d} exceeds {}s", limit.as_secs())),
        other => other,
    }
}

fn err(e: ricci_core::Error) -> String {
    e.to_string()
}

fn master_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        worst = worst.max(master_residual(&sample_frame(11, i, -1.0, 1.0)).map_err(err)?);
    }
    check(worst <= 1e-10, format!("worst residual {worst:.2e} over 1000 frames"))
}

fn beta_one_rows() -> Outcome {
    let mut seen = Vec::new();
    for (idx, [a, b, c, d]) in BETA_ONE_ROWS {
        let r = ricci_operator(&canonical_a49(&A49Params::new(a, b, c, d, 0.0, 1.0).map_err(err)?).map_err(err)?);
        let got = signature_index(&r.signature).map_err(err)?.get();
        if got != idx {
            return Err(format!("b={b}: got signature {got}, want {idx}"));
        }
        if b == 4.0 {
            let zero = r.eigenvalues[3].abs();
            if zero > 1e-12 * r.norm_inf().max(1.0) {
                return Err(format!("b=4 zero eigenvalue is {zero:.2e}"));
            }
        }
        seen.push(format!("{}", r.signature));
    }
    Ok(format!("signatures {}", seen.join(" ")))
}

fn charpolys() -> Outcome {
    let betas: Vec<f64> = (0..50)
        .map(|i| {
            let mut rng = SpdSampler::new(2, 21).rng(i);
            -0.5 + 1.5 * rng.random_range(0.001..0.999)
        })
        .collect();
    let fs: Vec<f64> = (0..10).map(|k| 0.5 * k as f64).collect();
    let mut parts = Vec::new();
    let mut ok = true;
    for (case, name) in [(2, "b2"), (3, "b3"), (1, "ab1")] {
        let (n, worst) = charpoly_suite(case, &betas, &fs).map_err(err)?;
        ok &= worst <= 1e-9;
        parts.push(format!("{name} {worst:.1e} ({n})"));
    }
    check(ok, parts.join(", "))
}

fn determinant_identity() -> Outcome {
    let (mut worst, mut min_rhs, mut worst_l2) = (0.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..1000 {
        let p = sample_frame(12, i, -1.0, 1.0);
        let (lhs, rhs) = det_submatrix_identity(&p).map_err(err)?;
        worst = worst.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
        min_rhs = min_rhs.min(rhs);
        let r = ricci_operator(&canonical_a49(&p).map_err(err)?);
        worst_l2 = worst_l2.max(r.eigenvalues[1] + zero_threshold(r.norm_inf()));
    }
    check(
        worst <= 1e-9 && min_rhs > 0.0 && worst_l2 < 0.0,
        format!("residual {worst:.1e}, min rhs {min_rhs:.3e}, max lambda2+eps {worst_l2:.3e}"),
    )
}

fn lemma_suite() -> Outcome {
    let (mut worst, mut min_h1) = (0.0f64, f64::INFINITY);
    for i in 0..1000 {
        let p = sample_frame(13, i, -1.0, -0.5);
        let t = SpdSampler::new(3, 13).rng(i).random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let (lhs, h1, h2) = lemma2_decomposition(&LemmaTwoFrame::new(t, p).map_err(err)?).map_err(err)?;
        worst = worst.max((lhs - h1 - h2).abs() / (1.0 + lhs.abs()));
        min_h1 = min_h1.min(h1);
    }
    let (mut min_cert, mut min_top) = (f64::INFINITY, f64::INFINITY);
    let mut draws = 0;
    let mut i = 0;
    while draws < 1000 {
        let p = sample_frame(14, i, -1.0, -0.5);
        i += 1;
        if p.beta >= -0.5 {
            continue;
        }
        draws += 1;
        min_cert = min_cert.min(lemma2_t0_certificate(&p).map_err(err)?);
        let r = ricci_operator(&canonical_a49(&p).map_err(err)?);
        min_top = min_top.min(r.eigenvalues[3] - zero_threshold(r.norm_inf()));
    }
    check(
        worst <= 1e-9 && min_h1 >= -1e-12 && min_cert > 0.0 && min_top > 0.0,
        format!("residual {worst:.1e}, min h1 {min_h1:.2e}, min certificate {min_cert:.2e}, min lambda4-eps {min_top:.2e}"),
    )
}

fn prop1() -> Outcome {
    let rep = verify_prop1(&PROP1_GRID, 100_000, 1).map_err(err)?;
    let failed: Vec<String> = rep.rows.iter().filter(|r| !r.pass).map(|r| r.beta.to_string()).collect();
    check(rep.pass, format!("{} betas, failing {:?}", rep.rows.len(), failed))
}

fn table3() -> Outcome {
    let rep = verify_table3(100_000, 1).map_err(err)?;
    let failed: Vec<&str> = rep.rows.iter().filter(|r| !r.pass).map(|r| r.label.as_str()).collect();
    let csv_ok = rep.to_csv() == expected_csv();
    check(
        rep.pass && csv_ok,
        format!("{} rows, failing {failed:?}, csv matches: {csv_ok}", rep.rows.len()),
    )
}

fn curvature_signs() -> Outcome {
    let mut problems = Vec::new();
    let mut non_unimodular = 0;
    for spec in representative_specs() {
        let s = scalar_curvature_survey(&spec, 10_000, 3).map_err(err)?;
        match spec.family {
            Family::A1x4 => {
                if s.min != 0.0 || s.max != 0.0 {
                    problems.push(format!("{spec}: S in [{}, {}]", s.min, s.max));
                }
            }
            Family::A36 => {
                if s.max_ratio > 1e-9 {
                    problems.push(format!("{spec}: max S ratio {}", s.max_ratio));
                }
            }
            Family::A39 => {
                if !(s.min < 0.0 && s.max > 0.0) {
                    problems.push(format!("{spec}: S in [{}, {}]", s.min, s.max));
                }
            }
            _ => {
                if s.max >= 0.0 {
                    problems.push(format!("{spec}: max S {}", s.max));
                }
            }
        }
        let t = build_algebra(&spec).map_err(err)?;
        if !ricci_core::algebra::is_unimodular(&t) {
            non_unimodular += 1;
            let rep = negative_pair_property(&spec, 10_000, 4).map_err(err)?;
            if !rep.pass {
                problems.push(format!("{spec}: negative pair fails at {:?}", rep.first_failure));
            }
        }
    }
    let t = build_algebra(&LieAlgebraSpec::new(Family::A39)).map_err(err)?;
    let s = ricci_operator(&orthonormal_frame(&t, &InnerProduct::identity(4)).map_err(err)?).scalar;
    if (s - 1.5).abs() > 1e-12 {
        problems.push(format!("A3_9+A1 identity metric: S = {s}"));
    }
    check(
        problems.is_empty(),
        format!("{} algebras, {non_unimodular} negative-pair checks, problems {problems:?}", representative_specs().len()),
    )
}

fn invariants() -> Outcome {
    let config = Config { cases: 512, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let results = [
        ("jacobi", runner.run(&any_spec(), |s| jacobi_holds(&s)).map_err(|e| e.to_string())),
        (
            "scaling",
            runner
                .run(&(any_spec(), any_metric(), 0.05..20.0f64), |(s, q, c)| scaling_law(&s, &q, c))
                .map_err(|e| e.to_string()),
        ),
        (
            "conjugation",
            runner
                .run(&(any_symmetric(), any_orthogonal()), |(s, o)| conjugation_invariance(&s, &o))
                .map_err(|e| e.to_string()),
        ),
        (
            "trace",
            runner
                .run(&(any_spec(), any_metric()), |(s, q)| trace_matches_eigenvalues(&s, &q))
                .map_err(|e| e.to_string()),
        ),
    ];
    let fails: Vec<String> = results
        .into_iter()
        .filter_map(|(name, r)| r.err().map(|e| format!("{name}: {e}")))
        .collect();
    check(fails.is_empty(), format!("4 properties x 512 cases, failures {fails:?}"))
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let criteria: [Criterion; 9] = [
        ("master oracle", s(1), master_oracle),
        ("beta = 1 frame rows", s(1), beta_one_rows),
        ("characteristic polynomials", s(2), charpolys),
        ("determinant identity", s(10), determinant_identity),
        ("h1 + h2 decomposition and t0 certificate", s(10), lemma_suite),
        ("A4_9 regimes", s(60), prop1),
        ("four-dimensional realizability grid", s(300), table3),
        ("scalar curvature and negative pair", s(120), curvature_signs),
        ("unit invariants", s(60), invariants),
    ];
    let mut all = true;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = within(limit, start, f());
        all &= out.is_ok();
        match out {
            Ok(d) => println!("PASS {} {name}: {d}", i + 1),
            Err(d) => println!("FAIL {} {name}: {d}", i + 1),
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
