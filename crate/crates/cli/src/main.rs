//! `foundry`: foundations of matroids and morphisms of pastures from the
//! command line.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use foundry_core::field::FiniteField;
use foundry_core::foundation::{compute_foundation, FoundationResult};
use foundry_core::matroid::Matroid;
use foundry_core::morphism::{find_isomorphism, search_morphisms, PastureMorphism, SearchOptions, SearchStats};
use foundry_core::pasture::{Hexagon, Pasture};
use foundry_core::representation::{
    gp_from_morphism, gp_to_matrix, is_orientable, non_representability_certificate, Certificate,
};
use foundry_core::Error;

#[derive(Parser, Debug)]
#[command(name = "foundry", version, about = "Foundations of matroids and pasture morphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    output: Format,
    /// Print search statistics.
    #[arg(long, global = true)]
    stats: bool,
    /// Worker threads (default 1).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct MatroidArg {
    /// Named matroid, JSON file, or `-` for JSON on stdin.
    #[arg(long)]
    matroid: String,
    /// Override the base basis, e.g. `0,1,3`.
    #[arg(long, value_delimiter = ',')]
    basis: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
struct SourceArg {
    /// Use the foundation of this matroid as the source.
    #[arg(long, conflicts_with = "source")]
    matroid: Option<String>,
    #[arg(long, value_delimiter = ',', requires = "matroid")]
    basis: Option<Vec<usize>>,
    /// Source pasture spec.
    #[arg(long, required_unless_present = "matroid")]
    source: Option<String>,
    /// Target pasture: `gf:<q>`, `sign`, `krasner`, `f1pm`, `U`, `D`, `H`,
    /// `F3`, `P0` or `file:<path>`.
    #[arg(long)]
    target: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the foundation of a matroid.
    Foundation {
        #[command(flatten)]
        matroid: MatroidArg,
        /// Include the projection matrix.
        #[arg(long)]
        rho: bool,
    },
    /// Enumerate pasture morphisms.
    Morphisms {
        #[command(flatten)]
        pair: SourceArg,
        #[arg(long)]
        find_one: bool,
        #[arg(long)]
        find_iso: bool,
        /// Print only the number of morphisms.
        #[arg(long)]
        count: bool,
    },
    /// Representations over a finite field, as matrices.
    Representations {
        #[command(flatten)]
        matroid: MatroidArg,
        /// `gf:<q>`.
        #[arg(long)]
        target: String,
    },
    /// Whether the matroid is orientable.
    Orientable {
        #[command(flatten)]
        matroid: MatroidArg,
    },
    /// Search for a certificate of non-representability.
    Certificate {
        #[command(flatten)]
        matroid: MatroidArg,
    },
    /// Test whether two pastures are isomorphic.
    Iso {
        #[command(flatten)]
        pair: SourceArg,
    },
}

/// Failures of the driver, split by exit code.
enum Failure {
    Input(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_parse_error() || matches!(e, Error::UnknownName { .. }) {
            Failure::Input(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let threads = cli.common.jobs.unwrap_or(1).max(1);
    if rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_err() {
        eprintln!("error: could not start worker threads");
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_matroid(spec: &str) -> Result<Matroid, Failure> {
    if spec == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(Matroid::from_json_str(&s)?);
    }
    match Matroid::named(spec) {
        Ok(m) => Ok(m),
        Err(Error::UnknownName { .. }) if Path::new(spec).is_file() => {
            Ok(Matroid::from_json_str(&std::fs::read_to_string(spec)?)?)
        }
        Err(e) => Err(e.into()),
    }
}

fn load_pasture(spec: &str) -> Result<Pasture, Failure> {
    if let Some(path) = spec.strip_prefix("file:") {
        return Ok(Pasture::from_json_str(&std::fs::read_to_string(path)?)?);
    }
    if let Some(q) = spec.strip_prefix("gf:") {
        let q: u64 = q.parse().map_err(|_| Failure::Input(format!("bad field size {q:?}")))?;
        return Ok(Pasture::gf(q)?);
    }
    Ok(Pasture::builtin(spec)?)
}

fn foundation_of(arg: &MatroidArg) -> Result<(Matroid, FoundationResult), Failure> {
    let m = load_matroid(&arg.matroid)?;
    let fr = compute_foundation(&m, arg.basis.as_deref())?;
    Ok((m, fr))
}

fn source_and_target(pair: &SourceArg) -> Result<(Pasture, Pasture), Failure> {
    let source = match (&pair.matroid, &pair.source) {
        (Some(name), _) => {
            let arg = MatroidArg { matroid: name.clone(), basis: pair.basis.clone() };
            foundation_of(&arg)?.1.foundation
        }
        (None, Some(spec)) => load_pasture(spec)?,
        (None, None) => return Err(Failure::Input("a source is required".to_string())),
    };
    Ok((source, load_pasture(&pair.target)?))
}

fn render_rows(rows: &[Vec<i64>]) -> String {
    rows.iter()
        .map(|r| format!("| {} |", r.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")))
        .collect::<Vec<_>>()
        .join("\n")
}

fn render_hexagon(h: &Hexagon) -> String {
    let pairs: Vec<String> = h.pairs().iter().map(|(x, y)| format!("({x:?}, {y:?})")).collect();
    format!("{} {}", h.hexagon_type(), pairs.join(" "))
}

fn stats_text(stats: &SearchStats) -> String {
    let [p1, p2, p3, p4] = stats.pair_counts;
    format!(
        "torsion maps: {}\nnodes: {}\nleaves: {}\nassembled: {}\npairs: p1={p1} p2={p2} p3={p3} p4={p4}\n",
        stats.torsion_maps, stats.nodes, stats.leaves, stats.assembled
    )
}

fn emit_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let format = cli.common.output;
    let started = Instant::now();
    let mut out = String::new();
    match &cli.command {
        Command::Foundation { matroid, rho } => {
            let (_, fr) = foundation_of(matroid)?;
            let p = &fr.foundation;
            if format == Format::Json {
                let mut v = serde_json::to_value(fr.to_json()).expect("serializable");
                v["summary"] = json!(p.summary());
                if !rho {
                    v.as_object_mut().unwrap().remove("rhoZero");
                }
                return Ok(emit_json(&v));
            }
            writeln!(out, "{}", p.summary()).unwrap();
            writeln!(out, "epsilon: {:?}", p.epsilon()).unwrap();
            writeln!(out, "basis: {:?}", fr.b0).unwrap();
            for h in p.hexagons() {
                writeln!(out, "{}", render_hexagon(h)).unwrap();
            }
            if *rho {
                writeln!(out, "rho:\n{}", render_rows(&fr.rho_zero.reduced_rows(p.group()))).unwrap();
            }
        }
        Command::Morphisms { pair, find_one, find_iso, count } => {
            let (source, target) = source_and_target(pair)?;
            let opts = SearchOptions { find_one: *find_one, find_iso: *find_iso };
            let res = search_morphisms(&source, &target, opts)?;
            let n = res.morphisms.len();
            if format == Format::Json {
                let mut v = json!({ "count": n });
                if !count {
                    v["morphisms"] = json!(res.morphisms);
                }
                if cli.common.stats {
                    v["stats"] = json!(res.stats);
                }
                out = emit_json(&v);
            } else {
                if *count {
                    writeln!(out, "{n}").unwrap();
                } else {
                    for f in &res.morphisms {
                        writeln!(out, "{}\n", render_rows(&f.matrix)).unwrap();
                    }
                    writeln!(out, "{n} morphism{}", if n == 1 { "" } else { "s" }).unwrap();
                }
                if cli.common.stats {
                    out.push_str(&stats_text(&res.stats));
                }
            }
        }
        Command::Representations { matroid, target } => {
            let q: u64 = target
                .strip_prefix("gf:")
                .and_then(|q| q.parse().ok())
                .ok_or_else(|| Failure::Input(format!("expected gf:<q>, got {target:?}")))?;
            let field = FiniteField::new(q)?;
            let pasture = Pasture::from_field(&field);
            let (m, fr) = foundation_of(matroid)?;
            let res = search_morphisms(&fr.foundation, &pasture, SearchOptions::default())?;
            let matrices = res
                .morphisms
                .iter()
                .map(|f| gp_to_matrix(&gp_from_morphism(&m, &fr, f, &pasture), &field, &fr.b0))
                .collect::<Result<Vec<_>, _>>()?;
            if format == Format::Json {
                let mut v = json!({ "matrices": matrices.iter().map(|a| a.to_json()).collect::<Vec<_>>() });
                if cli.common.stats {
                    v["stats"] = json!(res.stats);
                }
                out = emit_json(&v);
            } else {
                for a in &matrices {
                    writeln!(out, "{}\n", a.render()).unwrap();
                }
                let n = matrices.len();
                writeln!(out, "{n} representation{}", if n == 1 { "" } else { "s" }).unwrap();
                if cli.common.stats {
                    out.push_str(&stats_text(&res.stats));
                }
            }
        }
        Command::Orientable { matroid } => {
            let m = load_matroid(&matroid.matroid)?;
            let yes = is_orientable(&m)?;
            out = match format {
                Format::Json => emit_json(&json!({ "orientable": yes })),
                Format::Text => format!("{}\n", if yes { "yes" } else { "no" }),
            };
        }
        Command::Certificate { matroid } => {
            let m = load_matroid(&matroid.matroid)?;
            let cert = non_representability_certificate(&m)?;
            let (kind, f): (&str, Option<&PastureMorphism>) = match &cert {
                Certificate::OneIsFundamental => ("one-is-fundamental", None),
                Certificate::P0Morphism(f) => ("p0-morphism", Some(f)),
                Certificate::None => ("none", None),
            };
            if format == Format::Json {
                let mut v = json!({ "certificate": kind });
                if let Some(f) = f {
                    v["morphism"] = json!(f);
                }
                out = emit_json(&v);
            } else {
                writeln!(out, "{kind}").unwrap();
                if let Some(f) = f {
                    writeln!(out, "{}", render_rows(&f.matrix)).unwrap();
                }
            }
        }
        Command::Iso { pair } => {
            let (source, target) = source_and_target(pair)?;
            let f = find_isomorphism(&source, &target)?;
            if format == Format::Json {
                out = emit_json(&json!({ "isomorphic": f.is_some(), "morphism": f }));
            } else {
                match f {
                    Some(f) => writeln!(out, "isomorphic\n{}", render_rows(&f.matrix)).unwrap(),
                    None => writeln!(out, "not isomorphic").unwrap(),
                }
            }
        }
    }
    if cli.common.stats {
        eprintln!("elapsed: {:.3} s", started.elapsed().as_secs_f64());
    }
    Ok(out)
}
