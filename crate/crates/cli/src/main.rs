use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;

use scargraph::base::{lps_graph, random_high_girth, validate_base, LpsParams};
use scargraph::certificate::{verify_certificate, Certificate};
use scargraph::io::{load_graph, save_graph};
use scargraph::pairing::{pair_trees, pairing_girth_bound};
use scargraph::pipeline::{certified_set, qe_table, run_pipeline, RandomBase, RunConfig};
use scargraph::spectral::{spectral_summary, Method, SpectralOptions};
use scargraph::tree::level_sizes;
use scargraph::Error;

#[derive(Parser)]
#[command(name = "scargraph", version, about = "Build and certify high-girth graphs with localized eigenvectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate or validate a base graph.
    #[command(subcommand)]
    Base(BaseCommand),
    /// Pair the leaves of two d-ary trees for high girth.
    Pair {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full construction and write the graph and its certificate.
    Construct(ConstructArgs),
    /// Extreme eigenvalues of a graph.
    Spectrum {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        how_many: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Force the iterative solver even on small graphs.
        #[arg(long)]
        iterative: bool,
    },
    /// Per-eigenvector localization table for a certified graph.
    Qe {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute every certified quantity and diff against the certificate.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Summarize a certificate.
    Report {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum BaseCommand {
    /// LPS Ramanujan graph X^{p,q}.
    Lps {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Seeded random regular graph with girth raised by edge switches.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        min_girth: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a base graph's suitability for radius r.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["base", "lps", "family", "random_n"])))]
#[command(group(ArgGroup::new("radius").required(true).args(["r", "alpha"])))]
struct ConstructArgs {
    /// Base graph edge list.
    #[arg(long)]
    base: Option<PathBuf>,
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    lps: Option<Vec<u64>>,
    /// mcgee, petersen or heawood.
    #[arg(long)]
    family: Option<String>,
    /// Random regular base: vertex count (with --random-degree, --random-girth).
    #[arg(long, requires_all = ["random_degree", "random_girth"])]
    random_n: Option<usize>,
    #[arg(long)]
    random_degree: Option<usize>,
    #[arg(long)]
    random_girth: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 1)]
    sites: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0x5eed)]
    spectral_seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Also write the QE table (graphs up to 4096 vertices).
    #[arg(long)]
    qe: Option<PathBuf>,
}

/// A run that completed but whose checks failed.
struct CheckFailed;

enum Failure {
    Checks,
    Usage(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<CheckFailed> for Failure {
    fn from(_: CheckFailed) -> Self {
        Failure::Checks
    }
}

type Outcome = std::result::Result<(), Failure>;

fn print_json<T: Serialize>(value: &T) -> Outcome {
    println!("{}", serde_json::to_string_pretty(value).map_err(Error::from)?);
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(Error::from)?;
    Ok(())
}

fn read_cert(path: &Path) -> Result<Certificate, Error> {
    Certificate::from_json(&std::fs::read_to_string(path)?)
}

fn pass_if(ok: bool) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(CheckFailed.into())
    }
}

fn base(cmd: BaseCommand) -> Outcome {
    match cmd {
        BaseCommand::Lps { p, q, out } => {
            let g = lps_graph(&LpsParams::new(p, q)?)?;
            save_graph(&g, &out)?;
            eprintln!("wrote {} ({} vertices, {} edges)", out.display(), g.n(), g.edge_count());
            Ok(())
        }
        BaseCommand::Random {
            n,
            degree,
            min_girth,
            seed,
            out,
        } => {
            let g = random_high_girth(n, degree, min_girth, seed)?;
            save_graph(&g, &out)?;
            eprintln!("wrote {} ({} vertices, {} edges)", out.display(), g.n(), g.edge_count());
            Ok(())
        }
        BaseCommand::Validate { graph, d, r, tol } => {
            let g = load_graph(&graph)?;
            let report = validate_base(&g, d, r, tol);
            print_json(&report)?;
            pass_if(report.passes())
        }
    }
}

fn pair(d: usize, depth: usize, seed: u64, out: Option<PathBuf>) -> Outcome {
    let p = pair_trees(d, depth, seed)?;
    let leaves = level_sizes(d, depth).map_or(0, |s| s[depth]);
    let bound = pairing_girth_bound(d, leaves);
    let json = p.to_json()?;
    match out {
        Some(path) => write_file(&path, &(json + "\n"))?,
        None => println!("{json}"),
    }
    eprintln!("girth {} (bound {bound}), {} swaps", p.achieved_girth, p.swap_count);
    pass_if(p.achieved_girth.finite().map_or(true, |g| g >= bound))
}

fn construct(a: ConstructArgs) -> Outcome {
    let random = match (a.random_n, a.random_degree, a.random_girth) {
        (Some(n), Some(degree), Some(min_girth)) => Some(RandomBase { n, degree, min_girth }),
        _ => None,
    };
    let cfg = RunConfig {
        d: a.d,
        r: a.r,
        alpha: a.alpha,
        sites: a.sites,
        lps: a.lps.map(|v| (v[0], v[1])),
        base_file: a.base,
        family: a.family,
        random,
        seed: a.seed,
        spectral_seed: a.spectral_seed,
        tol: a.tol,
        out_graph: a.out,
        out_cert: a.cert,
        out_qe: a.qe,
    };
    let out = run_pipeline(&cfg)?;
    eprint!("{}", summary(&out.certificate));
    pass_if(out.passed())
}

fn spectrum(graph: &Path, how_many: usize, tol: f64, seed: u64, iterative: bool) -> Outcome {
    let g = load_graph(graph)?;
    let s = spectral_summary(
        &g,
        &SpectralOptions {
            how_many,
            tol,
            seed,
            method: iterative.then_some(Method::Iterative),
            ..SpectralOptions::default()
        },
    )?;
    print_json(&s)
}

fn qe(graph: &Path, cert: &Path, out: &Path) -> Outcome {
    let g = load_graph(graph)?;
    let cert = read_cert(cert)?;
    let table = qe_table(&g, &certified_set(&cert))?;
    write_file(out, &table.to_csv())?;
    eprintln!("{} rows, QE average {}", table.rows.len(), table.average);
    Ok(())
}

fn verify(graph: &Path, cert: &Path) -> Outcome {
    let g = load_graph(graph)?;
    let cert = read_cert(cert)?;
    let report = verify_certificate(&g, &cert);
    if report.ok {
        println!("PASS: all certified quantities reproduced");
    } else {
        for m in &report.mismatches {
            println!("FAIL {}: certified {}, measured {}", m.field, m.certified, m.measured);
        }
    }
    pass_if(report.ok)
}

fn summary(c: &Certificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "d = {}, r = {}, sites = {}, alpha = {:.4}", c.d, c.r, c.k, c.alpha);
    let _ = writeln!(s, "M = {} (base m = {}), girth {} (bound {})", c.vertex_count, c.m, c.girth, c.girth_bound);
    let _ = writeln!(
        s,
        "nontrivial spectral radius {:.6} vs threshold {:.6} ({:?})",
        c.lambda_max_nontrivial, c.spectral_threshold, c.spectral_method
    );
    for l in &c.localized {
        let _ = writeln!(
            s,
            "  site {} lambda {:+.6} support {} residual {:e}",
            l.site, l.lambda, l.support_size, l.residual
        );
    }
    for check in &c.checks {
        let tag = match (check.ok, check.asserted) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "NOTE",
        };
        let _ = writeln!(s, "{tag} {}: {}", check.name, check.detail);
    }
    let _ = writeln!(s, "{}", if c.passed { "certified" } else { "NOT certified" });
    s
}

fn report(cert: &Path, json: bool) -> Outcome {
    let c = read_cert(cert)?;
    if json {
        print_json(&c.checks)?;
    } else {
        print!("{}", summary(&c));
    }
    pass_if(c.passed)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Base(cmd) => base(cmd),
        Command::Pair { d, depth, seed, out } => pair(d, depth, seed, out),
        Command::Construct(a) => construct(a),
        Command::Spectrum {
            graph,
            how_many,
            tol,
            seed,
            iterative,
        } => spectrum(&graph, how_many, tol, seed, iterative),
        Command::Qe { graph, cert, out } => qe(&graph, &cert, &out),
        Command::Verify { graph, cert } => verify(&graph, &cert),
        Command::Report { cert, json } => report(&cert, json),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
