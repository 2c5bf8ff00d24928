use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ricci_core::a49::{verify_identities, verify_prop1, ConformanceReport, PROP1_GRID};
use ricci_core::algebra::{
    algebra_from_json, build_algebra, list_catalog, Family, LieAlgebraSpec, StructureTensor,
};
use ricci_core::curvature::{ricci_operator, RicciData};
use ricci_core::metric::{canonical_a49, orthonormal_frame, A49Params, InnerProduct};
use ricci_core::search::{a49_frame_search, realizability_search, SearchReport};
use ricci_core::signature::{signature_index, Sign, SignatureTuple};
use ricci_core::table3::{search_csv, verify_table3};

#[derive(Parser)]
#[command(name = "ricci-sig", version, about = "Ricci signatures of left-invariant metrics on 4-dimensional Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Output::Table)]
    output: Output,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out_file: Option<PathBuf>,

    /// Leave the timestamp out of JSON reports so reruns are byte-identical.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List the algebra families, their parameters and constraints.
    Catalog,
    /// Ricci operator of one metric.
    Ricci(RicciArgs),
    /// Random search for realizable signatures.
    Search(SearchArgs),
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Args)]
struct AlgebraArgs {
    /// Family alias (e.g. A3_5+A1) or path to a JSON algebra file.
    #[arg(long)]
    algebra: String,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
}

#[derive(Args)]
struct RicciArgs {
    #[command(flatten)]
    algebra: AlgebraArgs,
    /// `identity`, a path to a JSON array, or 16 row-major numbers.
    #[arg(long, num_args = 1..=16, allow_negative_numbers = true, value_delimiter = ',')]
    metric: Vec<String>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    d: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    f: Option<f64>,
    /// Absolute zero threshold for the signature, replacing the default.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    algebra: AlgebraArgs,
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    #[arg(long)]
    seed: u64,
    /// Sample canonical A4_9 frames instead of raw inner products.
    #[arg(long)]
    frames: bool,
}

#[derive(Subcommand)]
enum Suite {
    /// Realizability grid for the unimodular rows.
    Table3 {
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Signature sets of A4_9 across its regimes.
    Prop1 {
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long)]
        seed: u64,
        /// Comma-separated beta values; defaults to the standard grid.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        grid: Vec<f64>,
    },
    /// Closed-form identities of the A4_9 frames.
    Identities {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        /// Residual tolerance replacing the per-formula defaults.
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

/// Input problems exit with 2, failed verifications with 1.
enum Failure {
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Report {
    json: Value,
    table: String,
    csv: String,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rep) => match emit(&cli, rep) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(Failure::Input(e)) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, rep: Report) -> Result<bool, Failure> {
    let text = match cli.output {
        Output::Table => rep.table,
        Output::Csv => rep.csv,
        Output::Json => {
            let mut v = rep.json;
            if !cli.no_timestamp {
                let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                if let Value::Object(m) = &mut v {
                    m.insert("timestamp".into(), json!(secs));
                }
            }
            serde_json::to_string_pretty(&v)? + "\n"
        }
    };
    match &cli.out_file {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(rep.pass)
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Catalog => Ok(catalog()),
        Command::Ricci(args) => ricci(args),
        Command::Search(args) => search(args),
        Command::Verify { suite } => verify(suite),
    }
}

enum Algebra {
    Catalog(LieAlgebraSpec),
    File(StructureTensor),
}

fn parse_algebra(args: &AlgebraArgs) -> Result<Algebra, Failure> {
    if let Ok(family) = Family::from_alias(&args.algebra) {
        let mut spec = LieAlgebraSpec::new(family);
        for (name, v) in [("alpha", args.alpha), ("beta", args.beta)] {
            if let Some(v) = v {
                spec = spec.with(name, v);
            }
        }
        spec.validate()?;
        return Ok(Algebra::Catalog(spec));
    }
    let path = Path::new(&args.algebra);
    if !path.exists() {
        return Err(Failure::Input(format!(
            "`{}` is neither a family alias nor a file (see `ricci-sig catalog`)",
            args.algebra
        )));
    }
    let text = std::fs::read_to_string(path)?;
    // A file holds either a catalog spec or an explicit bracket table.
    if let Ok(spec) = serde_json::from_str::<LieAlgebraSpec>(&text) {
        spec.validate()?;
        return Ok(Algebra::Catalog(spec));
    }
    Ok(Algebra::File(algebra_from_json(&text)?))
}

fn catalog_spec(args: &AlgebraArgs) -> Result<LieAlgebraSpec, Failure> {
    match parse_algebra(args)? {
        Algebra::Catalog(spec) => Ok(spec),
        Algebra::File(_) => Err(Failure::Input("search and verification need a catalog algebra".into())),
    }
}

fn csv_text(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}

fn catalog() -> Report {
    let entries = list_catalog();
    let mut table = format!("{:<8} {:<12} constraints\n", "family", "params");
    let mut rows = vec![vec!["family".to_string(), "params".into(), "constraints".into()]];
    for e in &entries {
        let params = e.params.join(",");
        let cons: Vec<String> = e.constraints.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(table, "{:<8} {:<12} {}", e.family.alias(), params, cons.join("; "));
        rows.push(vec![e.family.alias().into(), params, cons.join("; ")]);
    }
    Report {
        json: json!({ "schema": ricci_core::search::SCHEMA, "families": entries }),
        table,
        csv: csv_text(rows),
        pass: true,
    }
}

fn parse_metric(words: &[String], dim: usize) -> Result<InnerProduct, Failure> {
    match words {
        [] => Ok(InnerProduct::identity(dim)),
        [w] if w == "identity" => Ok(InnerProduct::identity(dim)),
        [w] if Path::new(w).exists() => {
            let v: Vec<f64> = serde_json::from_str(&std::fs::read_to_string(w)?)?;
            Ok(InnerProduct::from_row_major(dim, &v)?)
        }
        _ => {
            let v = words
                .iter()
                .map(|w| w.trim().parse::<f64>().map_err(|_| Failure::Input(format!("bad metric entry `{w}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(InnerProduct::from_row_major(dim, &v)?)
        }
    }
}

fn reclassify(r: &RicciData, eps: f64) -> Result<SignatureTuple, Failure> {
    let signs = r
        .eigenvalues
        .iter()
        .map(|&l| if l < -eps { Sign::Neg } else if l > eps { Sign::Pos } else { Sign::Zero })
        .collect();
    Ok(SignatureTuple::new(signs)?)
}

fn ricci(args: &RicciArgs) -> Result<Report, Failure> {
    let algebra = parse_algebra(&args.algebra)?;
    let frame = [args.a, args.b, args.c, args.d, args.f];
    let use_frame = frame.iter().any(Option::is_some);
    let (label, r) = match algebra {
        Algebra::Catalog(spec) if use_frame => {
            if spec.family != Family::A49 {
                return Err(Failure::Input("--a/--b/--c/--d/--f only apply to A4_9".into()));
            }
            if !args.metric.is_empty() {
                return Err(Failure::Input("give either --metric or frame parameters, not both".into()));
            }
            let beta = spec.param("beta").unwrap_or(f64::NAN);
            let [a, b, c, d, f] = frame.map(|v| v.unwrap_or(0.0));
            let p = A49Params::new(if args.a.is_some() { a } else { 1.0 }, if args.b.is_some() { b } else { 1.0 }, c, d, f, beta)?;
            (spec.label(), ricci_operator(&canonical_a49(&p)?))
        }
        Algebra::Catalog(spec) => {
            let t = build_algebra(&spec)?;
            let q = parse_metric(&args.metric, 4)?;
            (spec.label(), ricci_operator(&orthonormal_frame(&t, &q)?))
        }
        Algebra::File(t) => {
            if use_frame {
                return Err(Failure::Input("frame parameters need --algebra A4_9".into()));
            }
            let q = parse_metric(&args.metric, t.dim())?;
            (args.algebra.algebra.clone(), ricci_operator(&orthonormal_frame(&t, &q)?))
        }
    };
    let signature = match args.tolerance {
        Some(eps) if !(eps > 0.0) => return Err(Failure::Input("--tolerance must be positive".into())),
        Some(eps) => reclassify(&r, eps)?,
        None => r.signature.clone(),
    };
    let index = signature_index(&signature).ok().map(|i| i.get());

    let mut table = format!("algebra    {label}\n");
    let _ = writeln!(table, "signature  {signature}");
    if let Some(i) = index {
        let _ = writeln!(table, "index      {i}");
    }
    let _ = writeln!(table, "scalar     {}", r.scalar);
    let eigs: Vec<String> = r.eigenvalues.iter().map(|v| format!("{v:.12}")).collect();
    let _ = writeln!(table, "eigenvalues {}", eigs.join("  "));
    table.push_str("Ric\n");
    for row in r.ric.row_iter() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>16.10}")).collect();
        let _ = writeln!(table, "{}", cells.join(" "));
    }

    let mut rows = vec![vec!["algebra".to_string(), "signature".into(), "index".into(), "scalar".into()]];
    let n = r.eigenvalues.len();
    rows[0].extend((1..=n).map(|k| format!("lambda{k}")));
    let mut line = vec![label.clone(), signature.to_string(), index.map(|i| i.to_string()).unwrap_or_default(), r.scalar.to_string()];
    line.extend(r.eigenvalues.iter().map(|v| v.to_string()));
    rows.push(line);

    Ok(Report {
        json: json!({
            "schema": ricci_core::search::SCHEMA,
            "algebra": label,
            "ric": serde_json::to_value(&r)?["ric"],
            "eigenvalues": r.eigenvalues,
            "signature": signature.to_string(),
            "index": index,
            "scalar": r.scalar,
        }),
        table,
        csv: csv_text(rows),
        pass: true,
    })
}

fn search_table(rep: &SearchReport) -> String {
    let mut s = format!(
        "{}  samples {}  seed {}  near-zero skipped {}\n",
        rep.algebra.label(),
        rep.samples_used,
        rep.seed,
        rep.near_zero_skipped
    );
    for (idx, rec) in &rep.found {
        let _ = writeln!(s, "{:>3}  {}", idx.get(), rec.signature);
    }
    s
}

fn search(args: &SearchArgs) -> Result<Report, Failure> {
    let spec = catalog_spec(&args.algebra)?;
    if args.budget == 0 {
        return Err(Failure::Input("--budget must be at least 1".into()));
    }
    let rep = if args.frames {
        let beta = match (spec.family, spec.param("beta")) {
            (Family::A49, Some(b)) => b,
            _ => return Err(Failure::Input("--frames needs --algebra A4_9 --beta".into())),
        };
        a49_frame_search(beta, args.budget, args.seed)?
    } else {
        realizability_search(&spec, args.budget, args.seed)?
    };
    Ok(Report {
        json: serde_json::to_value(&rep)?,
        table: search_table(&rep),
        csv: search_csv(&rep),
        pass: true,
    })
}

fn identities_table(rep: &ConformanceReport) -> (String, String) {
    let mut table = String::new();
    let mut rows = vec![vec![
        "formula".to_string(),
        "samples".into(),
        "max_residual".into(),
        "min_value".into(),
        "tolerance".into(),
        "pass".into(),
    ]];
    for r in &rep.records {
        let value = match r.min_value {
            Some(v) => format!("min {v:.3e}"),
            None => format!("max {:.3e} <= {:.0e}", r.max_residual, r.tolerance),
        };
        let _ = writeln!(table, "{:<4} {:<45} {:>6}  {}", if r.pass { "ok" } else { "FAIL" }, r.formula, r.samples, value);
        rows.push(vec![
            r.formula.clone(),
            r.samples.to_string(),
            r.max_residual.to_string(),
            r.min_value.map(|v| v.to_string()).unwrap_or_default(),
            r.tolerance.to_string(),
            r.pass.to_string(),
        ]);
    }
    (table, csv_text(rows))
}

fn verify(suite: &Suite) -> Result<Report, Failure> {
    match suite {
        Suite::Table3 { budget, seed } => {
            if *budget == 0 {
                return Err(Failure::Input("--budget must be at least 1".into()));
            }
            let rep = verify_table3(*budget, *seed)?;
            let mut table = rep.to_csv().replace(',', " ");
            let bad: Vec<&str> = rep.rows.iter().filter(|r| !r.pass).map(|r| r.label.as_str()).collect();
            let _ = writeln!(table, "{}", if bad.is_empty() { "all rows pass".to_string() } else { format!("failing: {}", bad.join(", ")) });
            Ok(Report { json: serde_json::to_value(&rep)?, table, csv: rep.to_csv(), pass: rep.pass })
        }
        Suite::Prop1 { budget, seed, grid } => {
            if *budget == 0 {
                return Err(Failure::Input("--budget must be at least 1".into()));
            }
            let grid = if grid.is_empty() { PROP1_GRID.to_vec() } else { grid.clone() };
            let rep = verify_prop1(&grid, *budget, *seed)?;
            let mut table = String::new();
            for r in &rep.rows {
                let seen: Vec<String> = r.witnesses.keys().map(|k| k.get().to_string()).collect();
                let _ = writeln!(table, "{:<4} beta {:<6} {:?}  witnessed {}", if r.pass { "ok" } else { "FAIL" }, r.beta, r.regime, seen.join(","));
            }
            Ok(Report { json: serde_json::to_value(&rep)?, table, csv: rep.to_csv(), pass: rep.pass })
        }
        Suite::Identities { seed, samples, tolerance } => {
            if *samples == 0 {
                return Err(Failure::Input("--samples must be at least 1".into()));
            }
            let mut rep = verify_identities(*seed, *samples)?;
            if let Some(tol) = *tolerance {
                if !(tol > 0.0) {
                    return Err(Failure::Input("--tolerance must be positive".into()));
                }
                for r in rep.records.iter_mut().filter(|r| r.min_value.is_none()) {
                    r.tolerance = tol;
                    r.pass = r.max_residual <= tol;
                }
                rep.pass = rep.records.iter().all(|r| r.pass);
            }
            let (table, csv) = identities_table(&rep);
            Ok(Report { json: serde_json::to_value(&rep)?, table, csv, pass: rep.pass })
        }
    }
}
