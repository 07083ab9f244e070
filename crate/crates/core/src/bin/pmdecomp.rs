//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failed, 2 bad input, 3 internal error.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use pmdecomp::bench::run_bench;
use pmdecomp::decompose::{decompose, DecomposeError, Options, Strategy};
use pmdecomp::generate::{default_mix_ops, gen_grid, gen_intervals, gen_random_er, mix, GeneratorSpec};
use pmdecomp::graded::GradedMatrix;
use pmdecomp::hom::{alpha_quotient, hom_space};
use pmdecomp::report::{
    self, read_json, read_scc, verify_artifacts, write_artifacts, write_json, ArtifactError, Certificate, Report,
};
use pmdecomp::scc::write_scc2020;
use pmdecomp::subspace::{count_dec, dec_cardinality};
use pmdecomp::Field;

#[derive(Parser)]
#[command(name = "pmdecomp", version, about = "Decompose bigraded persistence modules given by minimal presentations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Prime field order.
    #[arg(long, global = true, default_value_t = 2)]
    field: u32,
    /// exhaustive, aida or interval-auto.
    #[arg(long, global = true, default_value = "aida")]
    strategy: Strategy,
    /// Solve clearing systems without reducing batch columns first.
    #[arg(long, global = true)]
    no_sweep: bool,
    /// Recompute Hom spaces for every batch instead of caching them.
    #[arg(long, global = true)]
    no_homset: bool,
    /// Check the certificate after decomposing.
    #[arg(long, global = true)]
    verify: bool,
    /// Also write the JSON report to this path.
    #[arg(long, global = true)]
    stats: Option<PathBuf>,
    /// Worker threads for independent benchmark instances.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a presentation; writes summands, certificate and report.
    Decompose {
        input: PathBuf,
        /// Output directory for the run artifacts.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check summand files and a certificate against the original presentation.
    Verify {
        original: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
        /// Summand files in certificate order; defaults to those next to the certificate.
        summands: Vec<PathBuf>,
    },
    /// Write a random presentation and, for interval sums, its ground truth.
    Generate {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
    },
    /// Time the optimisation toggles on generated or given instances.
    Bench {
        /// Directory of scc2020 files; otherwise interval sums are generated.
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Interval counts of generated instances.
        #[arg(long, value_delimiter = ',', default_value = "125,250,500")]
        sizes: Vec<usize>,
        /// Generated instances per size.
        #[arg(long, default_value_t = 1)]
        instances: usize,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        /// Write the table as JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Dimensions of Hom between two presentations, optionally at a degree.
    Hom {
        source: PathBuf,
        target: PathBuf,
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<i64>>,
        /// Print the basis maps.
        #[arg(long)]
        dump: bool,
    },
    /// Count the decompositions of F_q^k tried by the exhaustive search.
    EnumDec { k: usize },
}

#[derive(Subcommand)]
enum GenKind {
    /// Mixed direct sum of `n` intervals.
    Intervals {
        #[arg(long)]
        n: usize,
        /// Mixing operations; defaults to ten per generator and relation.
        #[arg(long)]
        mix_ops: Option<usize>,
    },
    RandomEr {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    RandomGrid {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        grid: i64,
        #[arg(long)]
        p: f64,
    },
}

enum Failure {
    Verify(String),
    Input(String),
    Internal(String),
}

impl From<ArtifactError> for Failure {
    fn from(e: ArtifactError) -> Self {
        if e.is_verification_failure() {
            Failure::Verify(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<DecomposeError> for Failure {
    fn from(e: DecomposeError) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn field(g: &Global) -> Result<Field, Failure> {
    Field::new(g.field).map_err(|e| Failure::Input(e.to_string()))
}

fn options(g: &Global) -> Options {
    Options { strategy: g.strategy, sweep: !g.no_sweep, keep_homs: !g.no_homset, ..Options::default() }
}

fn print_json(v: &impl serde::Serialize) {
    emit(&(serde_json::to_string_pretty(v).expect("serializable") + "\n"));
}

fn cmd_decompose(g: &Global, input: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let f = field(g)?;
    let start = Instant::now();
    let m = read_scc(input, f)?;
    let parse = start.elapsed().as_secs_f64();
    let d = decompose(&m, &options(g))?;
    let mut rep = Report::new(&m, &d);
    rep.timings.parse = parse;
    if g.verify {
        let start = Instant::now();
        let ok = pmdecomp::decompose::verify(&d);
        rep.timings.verify = Some(start.elapsed().as_secs_f64());
        rep.verified = Some(ok.is_ok());
        if let Err(e) = ok {
            return Err(Failure::Internal(format!("certificate check failed: {e}")));
        }
    }
    if let Some(dir) = out {
        write_artifacts(dir, &d)?;
        write_json(&dir.join(report::REPORT_FILE), &rep)?;
    }
    if let Some(path) = &g.stats {
        write_json(path, &rep)?;
    }
    print_json(&rep);
    Ok(())
}

fn cmd_verify(original: &Path, cert_path: &Path, summands: &[PathBuf]) -> Result<(), Failure> {
    let cert: Certificate = read_json(cert_path)?;
    let m = read_scc(original, cert.field)?;
    let paths: Vec<PathBuf> = if summands.is_empty() {
        let dir = cert_path.parent().unwrap_or(Path::new("."));
        (0..cert.summands.len()).map(|i| dir.join(report::summand_file_name(i))).collect()
    } else {
        summands.to_vec()
    };
    let parts = paths.iter().map(|p| read_scc(p, cert.field)).collect::<Result<Vec<_>, _>>()?;
    verify_artifacts(&m, &parts, &cert)?;
    emit("ok\n");
    Ok(())
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            emit(text);
            Ok(())
        }
    }
}

fn cmd_generate(g: &Global, kind: &GenKind, out: Option<&Path>) -> Result<(), Failure> {
    let f = field(g)?;
    let (m, sidecar) = match *kind {
        GenKind::Intervals { n, mix_ops } => {
            let inst = gen_intervals(n, g.seed, f);
            let ops = mix_ops.unwrap_or_else(|| default_mix_ops(&inst.matrix));
            let spec = GeneratorSpec::Intervals { n, mix_ops: ops };
            let m = mix(&inst.matrix, ops, g.seed.wrapping_add(1));
            (m, Some(json!({ "seed": g.seed, "field": f, "generator": spec, "summands": inst.truth })))
        }
        GenKind::RandomEr { m, n, p } => (gen_random_er(m, n, p, g.seed, f), None),
        GenKind::RandomGrid { m, n, grid, p } => (gen_grid(m, n, grid, p, g.seed, f), None),
    };
    write_or_print(out, &write_scc2020(&m))?;
    if let (Some(sidecar), Some(out)) = (sidecar, out) {
        write_json(&out.with_extension("truth.json"), &sidecar)?;
    }
    Ok(())
}

fn bench_inputs(
    g: &Global,
    dir: Option<&Path>,
    sizes: &[usize],
    instances: usize,
) -> Result<Vec<(String, GradedMatrix)>, Failure> {
    let f = field(g)?;
    if let Some(dir) = dir {
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "scc"))
            .collect();
        files.sort();
        return files
            .iter()
            .map(|p| Ok((p.file_name().unwrap().to_string_lossy().into_owned(), read_scc(p, f)?)))
            .collect();
    }
    let mut out = Vec::new();
    for &n in sizes {
        for i in 0..instances as u64 {
            let seed = g.seed.wrapping_add(i);
            let inst = gen_intervals(n, seed, f);
            let m = mix(&inst.matrix, default_mix_ops(&inst.matrix), seed.wrapping_add(1));
            out.push((format!("intervals-{n}-{seed}"), m));
        }
    }
    Ok(out)
}

fn cmd_hom(g: &Global, source: &Path, target: &Path, alpha: Option<&[i64]>, dump: bool) -> Result<(), Failure> {
    let f = field(g)?;
    let (mc, mb) = (read_scc(source, f)?, read_scc(target, f)?);
    let h = hom_space(&mc, &mb);
    let mut out = json!({ "dim_hom": h.dim() });
    if let Some(a) = alpha {
        if a.len() != mc.dim() {
            return Err(Failure::Input(format!("--alpha needs {} coordinates", mc.dim())));
        }
        out["dim_hom_alpha"] = json!(alpha_quotient(&h, &mc, &mb, a).dim());
    }
    print_json(&out);
    if dump {
        for (i, e) in h.elements.iter().enumerate() {
            emit(&format!("# map {i}\nQ =\n{}P =\n{}", e.q_dense(f, mb.num_rows()), e.p_dense(f, mb.num_cols())));
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Decompose { input, out } => cmd_decompose(g, input, out.as_deref()),
        Command::Verify { original, certificate, summands } => cmd_verify(original, certificate, summands),
        Command::Generate { kind, out } => cmd_generate(g, kind, out.as_deref()),
        Command::Bench { dir, sizes, instances, repeats, json } => {
            let inputs = bench_inputs(g, dir.as_deref(), sizes, *instances)?;
            let table = run_bench(&inputs, g.strategy, *repeats, g.threads)?;
            emit(&table.to_text());
            if let Some(p) = json {
                write_json(p, &table)?;
            }
            if table.rows.iter().any(|r| !r.consistent) {
                return Err(Failure::Internal("optimisation toggles changed the result".into()));
            }
            Ok(())
        }
        Command::Hom { source, target, alpha, dump } => cmd_hom(g, source, target, alpha.as_deref(), *dump),
        Command::EnumDec { k } => {
            let f = field(g)?;
            let start = Instant::now();
            let count = count_dec(*k, f);
            let secs = start.elapsed().as_secs_f64();
            print_json(&json!({
                "k": k,
                "q": f.q(),
                "enumerated": count,
                "closed_form": dec_cardinality(*k as u32, f.q() as u64).to_string(),
                "seconds": secs,
            }));
            Ok(())
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
