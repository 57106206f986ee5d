mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use twoclub_core::analysis::{self, branching_number, empirical_branching, DEFAULT_TOLERANCE};
use twoclub_core::generate::{self, GeneratorSpec, Model};
use twoclub_core::io::{parse_graph, write_graph};
use twoclub_core::reduction::{reduce_exhaustively, Instance};
use twoclub_core::solver::{self, CaseId, SearchStats};
use twoclub_core::{oracle, Error, Graph};

use report::{labelled, one_based, render_edges, ReportedRule, RunReport, Status, Timings, TOOL_VERSION};

#[derive(Parser)]
#[command(name = "twoclub", version, about = "Exact 2-club cluster edge deletion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether at most K deletions suffice, or find the minimum.
    Solve {
        file: PathBuf,
        #[arg(long, conflicts_with = "minimize", required_unless_present = "minimize")]
        k: Option<usize>,
        #[arg(long)]
        minimize: bool,
        #[arg(long)]
        json: bool,
        /// Omit wall-clock timings so output is reproducible.
        #[arg(long)]
        no_timings: bool,
    },
    /// Minimum by exhaustive subset enumeration.
    Oracle {
        file: PathBuf,
        /// Largest deletion count to try (default: edge count).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Compare the solver against the oracle on seeded random graphs.
    Verify {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a generated instance.
    Gen {
        #[arg(long, value_enum)]
        model: GenModel,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        /// Comma-separated club sizes (planted).
        #[arg(long, value_delimiter = ',')]
        clubs: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        noise: usize,
        /// Case name such as case3 or case4.2.1 (case).
        #[arg(long = "case")]
        case_name: Option<String>,
        #[arg(long, default_value_t = 0)]
        decorations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search statistics of a decision run.
    Stats {
        file: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Check the gap in Liu et al.'s Case 2.2.4 rule.
    CheckLiu {
        /// Decorated gadgets to try in the witness search (0 skips it).
        #[arg(long, default_value_t = 0)]
        search_budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Branching vectors and numbers of every rule.
    Recurrences,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenModel {
    Random,
    Planted,
    Case,
}

enum Failure {
    Input(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CertificateRejected => Failure::Invariant(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let outcome = match cli.command {
        Command::Solve {
            file,
            k,
            minimize,
            json,
            no_timings,
        } => solve(&file, if minimize { None } else { k }, json, no_timings),
        Command::Oracle { file, cap } => oracle_cmd(&file, cap),
        Command::Verify { n_max, samples, seed } => verify(n_max, samples, seed),
        Command::Gen {
            model,
            n,
            p,
            clubs,
            noise,
            case_name,
            decorations,
            seed,
            output,
        } => gen(model, n, p, clubs, noise, case_name, decorations, seed, output),
        Command::Stats { file, k } => stats(&file, k),
        Command::CheckLiu {
            search_budget,
            seed,
            json,
        } => check_liu(search_budget, seed, json),
        Command::Recurrences => {
            recurrences();
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violation: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn solve(file: &Path, k: Option<usize>, json: bool, no_timings: bool) -> CliResult {
    let mut timings = Timings::default();
    let t = Instant::now();
    let g = read_graph(file)?;
    timings.parse_ms = ms(t);

    let t = Instant::now();
    let (status, k_used, solution, stats) = match k {
        Some(k) => {
            let d = solver::solve_decision(&Instance::new(g.clone(), k as i64))?;
            let status = if d.answer { Status::Yes } else { Status::No };
            (status, k, d.solution, d.stats)
        }
        None => {
            let m = solver::solve_minimize(&g)?;
            (Status::Opt, m.opt, Some(m.solution), m.stats)
        }
    };
    timings.solve_ms = ms(t);

    let t = Instant::now();
    if let Some(sol) = &solution {
        if !solver::verify_solution(&g, sol)? || sol.cost() > k_used {
            return Err(Failure::Invariant("certificate failed verification".into()));
        }
    }
    timings.verify_ms = ms(t);

    let root = reduce_exhaustively(Instance::new(g.clone(), k_used as i64));
    let deleted = solution.as_ref().map(|s| &s.deleted);
    let report = RunReport {
        status,
        k_used,
        deleted_edges: deleted.map(one_based).unwrap_or_default(),
        deleted_labels: deleted.and_then(|d| labelled(&g, d)),
        stats,
        reductions: root.rule_log.iter().map(ReportedRule::from).collect(),
        timings: (!no_timings).then_some(timings),
        tool_version: TOOL_VERSION,
    };
    if json {
        print_json(&report);
    } else {
        let status = match report.status {
            Status::Yes => "yes",
            Status::No => "no",
            Status::Opt => "opt",
        };
        println!("status: {status}");
        println!("k: {}", report.k_used);
        if solution.is_some() {
            println!("deleted: {}", render_edges(&g, &report.deleted_edges));
        }
        println!("nodes expanded: {}", report.stats.nodes_expanded);
    }
    Ok(())
}

#[derive(Serialize)]
struct OracleReport {
    opt: Option<usize>,
    witness: Option<Vec<[usize; 2]>>,
    subsets_examined: u64,
}

fn oracle_cmd(file: &Path, cap: Option<usize>) -> CliResult {
    let g = read_graph(file)?;
    let r = oracle::opt_bruteforce(&g, cap.unwrap_or(g.edge_count()))?;
    print_json(&OracleReport {
        opt: r.opt,
        witness: r.witness.as_deref().map(one_based),
        subsets_examined: r.subsets_examined,
    });
    Ok(())
}

#[derive(Serialize)]
struct Mismatch {
    sample: usize,
    vertices: usize,
    edges: Vec<[usize; 2]>,
    solver: Option<usize>,
    oracle: Option<usize>,
}

#[derive(Serialize)]
struct VerifyReport {
    samples: usize,
    mismatches: Vec<Mismatch>,
    nodes_expanded: u64,
    fallback_nodes: u64,
}

fn verify(n_max: usize, samples: usize, seed: u64) -> CliResult {
    if !(1..=64).contains(&n_max) {
        return Err(Failure::Input("--n-max must lie in 1..=64".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jobs: Vec<(usize, f64, u64)> = (0..samples)
        .map(|_| {
            let n = rng.gen_range(1..=n_max);
            let p = [0.2, 0.35, 0.5][rng.gen_range(0..3)];
            (n, p, rng.gen())
        })
        .collect();
    let results: Vec<(Option<Mismatch>, SearchStats)> = jobs
        .into_par_iter()
        .enumerate()
        .map(|(sample, (n, p, s))| {
            let g = generate::random_graph(n, p, &mut ChaCha8Rng::seed_from_u64(s)).expect("valid p");
            let (got, stats) = match solver::solve_minimize(&g) {
                Ok(m) => (Some(m.opt), m.stats),
                Err(_) => (None, SearchStats::default()),
            };
            let want = oracle::opt_3k(&g, g.edge_count()).ok().flatten();
            let mismatch = (got != want || got.is_none()).then(|| Mismatch {
                sample,
                vertices: n,
                edges: one_based(&g.edges().collect::<Vec<_>>()),
                solver: got,
                oracle: want,
            });
            (mismatch, stats)
        })
        .collect();
    let mut total = SearchStats::default();
    let mut mismatches = Vec::new();
    for (m, s) in results {
        total.merge(&s);
        mismatches.extend(m);
    }
    let failed = !mismatches.is_empty();
    print_json(&VerifyReport {
        samples,
        mismatches,
        nodes_expanded: total.nodes_expanded,
        fallback_nodes: total.fallback_count,
    });
    if failed {
        return Err(Failure::Invariant("solver and oracle disagree".into()));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn gen(
    model: GenModel,
    n: Option<usize>,
    p: Option<f64>,
    clubs: Vec<usize>,
    noise: usize,
    case_name: Option<String>,
    decorations: usize,
    seed: u64,
    output: Option<PathBuf>,
) -> CliResult {
    let missing = |flag: &str| Failure::Input(format!("--{flag} is required for this model"));
    let model = match model {
        GenModel::Random => Model::Random {
            n: n.ok_or_else(|| missing("n"))?,
            p: p.ok_or_else(|| missing("p"))?,
        },
        GenModel::Planted => {
            if clubs.is_empty() {
                return Err(missing("clubs"));
            }
            Model::Planted {
                club_sizes: clubs,
                noise_edges: noise,
            }
        }
        GenModel::Case => {
            let name = case_name.ok_or_else(|| missing("case"))?;
            let case = CaseId::from_name(&name).ok_or_else(|| Failure::Input(format!("unknown case `{name}`")))?;
            Model::CaseFixture { case, decorations }
        }
    };
    let out = generate::generate(&GeneratorSpec { model, seed })?;
    let mut text = String::new();
    if let Some(bound) = out.planted_upper_bound {
        text.push_str(&format!("c planted: opt <= {bound}\n"));
    }
    text.push_str(&write_graph(&out.graph));
    match output {
        Some(path) => fs::write(&path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct StatsReport {
    k: usize,
    answer: bool,
    stats: SearchStats,
    empirical_branching: f64,
}

fn stats(file: &Path, k: usize) -> CliResult {
    let g = read_graph(file)?;
    let d = solver::solve_decision(&Instance::new(g, k as i64))?;
    print_json(&StatsReport {
        k,
        answer: d.answer,
        empirical_branching: empirical_branching(&d.stats, k),
        stats: d.stats,
    });
    Ok(())
}

#[derive(Serialize)]
struct LiuReport {
    #[serde(flatten)]
    gap: analysis::LiuGapReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_search: Option<analysis::WitnessSearch>,
}

fn check_liu(search_budget: usize, seed: u64, json: bool) -> CliResult {
    let report = LiuReport {
        gap: analysis::liu_gap_report(DEFAULT_TOLERANCE),
        witness_search: if search_budget > 0 {
            Some(analysis::liu_witness_search(search_budget, seed)?)
        } else {
            None
        },
    };
    if json {
        print_json(&report);
        return Ok(());
    }
    println!(
        "gap: {}; fixed vector number: {:.3}",
        report.gap.gap, report.gap.fixed_number
    );
    println!(
        "published {} -> {:.3}; with {{1,4}} {} -> {:.3}, gap: {}",
        report.gap.original_vector,
        report.gap.original_number,
        report.gap.fixed_vector,
        report.gap.fixed_number,
        report.gap.gap_after_fix
    );
    if let Some(ws) = &report.witness_search {
        let s = &ws.standalone;
        println!(
            "bare gadget: opt {:?}, best branch {:?}, {:?}",
            s.opt, s.best_branch_value, s.verdict
        );
        match &ws.witness {
            Some(w) => println!(
                "witness after {} tries: {} vertices, {} edges, {:?}",
                ws.tried,
                w.vertex_count,
                w.edges.len(),
                w.completeness.verdict
            ),
            None => println!("no witness within {} tries", ws.tried),
        }
    }
    Ok(())
}

fn recurrences() {
    for r in analysis::recurrences() {
        println!(
            "{} | {} | {:.3}",
            r.name,
            r.vector.compact(),
            branching_number(&r.vector, DEFAULT_TOLERANCE)
        );
    }
}
