//! Command-line front end: parse group and link files, run invariants,
//! reductions, dimensions, pairings and oracle cross-checks; emit exact
//! results as text or JSON.
//!
//! Exit codes: 0 on success, 1 on domain errors (guards, contract
//! violations), 2 on usage errors (bad arguments, unreadable or unparseable
//! files).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use dwgns::gns::rank_and_radical;
use dwgns::invariant::{eta, invariant_closed, invariant_s3, reduce};
use dwgns::link::{link_to_json, parse_link_file, Label, LabeledLinkingData};
use dwgns::tqft::{parse_arcs, surface_pairing_matrix, SurfaceObject};
use dwgns::zmatrix::{brute_force_count, count_solutions, smith_normal_form, IntMatrix};
use dwgns::{Error, FiniteAbelianGroup, Rational};

#[derive(Parser)]
#[command(
    name = "dwgns",
    version,
    about = "Exact abelian Dijkgraaf-Witten invariants and TQFT spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Gauge group spec, e.g. Z2 or Z2xZ4
    #[arg(long)]
    group: String,
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// S^3 state of an all-Wilson link file
    Invariant {
        #[command(flatten)]
        common: Common,
        /// Link file (JSON)
        link: PathBuf,
    },
    /// State of the closed manifold presented by a link file with surgery
    /// components
    Closed {
        #[command(flatten)]
        common: Common,
        link: PathBuf,
    },
    /// Reduce an all-Wilson link to zero linking matrix, printing the move
    /// trace and the resulting value
    Reduce {
        #[command(flatten)]
        common: Common,
        link: PathBuf,
    },
    /// Dimension of the TQFT vector space of a labelled surface
    Dim {
        #[command(flatten)]
        common: Common,
        /// Surface genus
        #[arg(long)]
        genus: usize,
        /// Arc label file (JSON list of [[a...],[b...]] pairs)
        #[arg(long)]
        arcs: Option<PathBuf>,
    },
    /// Full handlebody pairing matrix of a labelled surface
    Pairing {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        arcs: Option<PathBuf>,
    },
    /// The surgery constant I(S^3) / I(S^1 x S^2)
    Eta {
        #[command(flatten)]
        common: Common,
    },
    /// Randomized cross-checks of the fast counting path against brute
    /// force, deterministic for a given seed
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Number of trials per check
        #[arg(long)]
        trials: usize,
        /// RNG seed
        #[arg(long)]
        seed: u64,
    },
}

enum CliError {
    Usage(String),
    Domain(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_parse_error() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_group(spec: &str) -> Result<FiniteAbelianGroup, CliError> {
    Ok(FiniteAbelianGroup::parse(spec)?)
}

fn load_link(path: &Path, g: &FiniteAbelianGroup) -> Result<LabeledLinkingData, CliError> {
    Ok(parse_link_file(&read_file(path)?, g)?)
}

fn load_surface(
    genus: usize,
    arcs: &Option<PathBuf>,
    g: &FiniteAbelianGroup,
) -> Result<SurfaceObject, CliError> {
    let arcs = match arcs {
        Some(path) => parse_arcs(&read_file(path)?, g)?,
        None => Vec::new(),
    };
    Ok(SurfaceObject::new(genus, arcs))
}

fn arcs_json(s: &SurfaceObject) -> serde_json::Value {
    let arcs: Vec<serde_json::Value> = s
        .arcs()
        .iter()
        .map(|l| serde_json::json!([l.a.residues(), l.b.residues()]))
        .collect();
    serde_json::json!(arcs)
}

fn emit(format: Format, text: String, json: serde_json::Value) {
    match format {
        Format::Text => println!("{text}"),
        Format::Json => println!("{json}"),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Invariant { common, link } => {
            let g = parse_group(&common.group)?;
            let data = load_link(&link, &g)?;
            let value = invariant_s3(&data, &g)?;
            emit(
                common.format,
                value.to_string(),
                serde_json::json!({
                    "command": "invariant",
                    "group": common.group,
                    "link": link_to_json(&data),
                    "result": value.to_string(),
                }),
            );
        }
        Command::Closed { common, link } => {
            let g = parse_group(&common.group)?;
            let data = load_link(&link, &g)?;
            let value = invariant_closed(&data, &g)?;
            emit(
                common.format,
                value.to_string(),
                serde_json::json!({
                    "command": "closed",
                    "group": common.group,
                    "link": link_to_json(&data),
                    "result": value.to_string(),
                }),
            );
        }
        Command::Reduce { common, link } => {
            let g = parse_group(&common.group)?;
            let data = load_link(&link, &g)?;
            let (sum, trace) = reduce(&data, &g)?;
            let value = sum.evaluate(|t| invariant_s3(t, &g))?;
            let mut text = String::new();
            for mv in &trace {
                text.push_str(&mv.to_string());
                text.push('\n');
            }
            text.push_str(&value.to_string());
            emit(
                common.format,
                text,
                serde_json::json!({
                    "command": "reduce",
                    "group": common.group,
                    "link": link_to_json(&data),
                    "moves": trace.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                    "reduced": sum.terms().iter().map(|(_, d)| link_to_json(d)).collect::<Vec<_>>(),
                    "result": value.to_string(),
                }),
            );
        }
        Command::Dim {
            common,
            genus,
            arcs,
        } => {
            let g = parse_group(&common.group)?;
            let surface = load_surface(genus, &arcs, &g)?;
            let p = surface_pairing_matrix(&surface, &g)?;
            let dim = rank_and_radical(&p).0;
            emit(
                common.format,
                dim.to_string(),
                serde_json::json!({
                    "command": "dim",
                    "group": common.group,
                    "genus": genus,
                    "arcs": arcs_json(&surface),
                    "result": dim,
                }),
            );
        }
        Command::Pairing {
            common,
            genus,
            arcs,
        } => {
            let g = parse_group(&common.group)?;
            let surface = load_surface(genus, &arcs, &g)?;
            let p = surface_pairing_matrix(&surface, &g)?;
            let mut text = String::new();
            for i in 0..p.rows() {
                for j in 0..p.cols() {
                    if j > 0 {
                        text.push(' ');
                    }
                    text.push_str(&p[(i, j)].to_string());
                }
                if i + 1 < p.rows() {
                    text.push('\n');
                }
            }
            emit(
                common.format,
                text,
                serde_json::json!({
                    "command": "pairing",
                    "group": common.group,
                    "genus": genus,
                    "arcs": arcs_json(&surface),
                    "result": p.to_json(),
                }),
            );
        }
        Command::Eta { common } => {
            let g = parse_group(&common.group)?;
            let value = eta(&g);
            emit(
                common.format,
                value.to_string(),
                serde_json::json!({
                    "command": "eta",
                    "group": common.group,
                    "result": value.to_string(),
                }),
            );
        }
        Command::Oracle {
            common,
            trials,
            seed,
        } => {
            let g = parse_group(&common.group)?;
            let report = run_oracle(&g, trials, seed)?;
            emit(
                common.format,
                report.text(),
                serde_json::json!({
                    "command": "oracle",
                    "group": common.group,
                    "trials": trials,
                    "seed": seed,
                    "count_agreements": report.count_ok,
                    "snf_valid": report.snf_ok,
                    "invariant_agreements": report.invariant_ok,
                    "result": if report.all_ok() { "pass" } else { "fail" },
                }),
            );
            if !report.all_ok() {
                return Err(CliError::Domain("oracle comparison failed".into()));
            }
        }
    }
    Ok(())
}

struct OracleReport {
    trials: usize,
    count_ok: usize,
    snf_ok: usize,
    invariant_ok: usize,
    first_failure: Option<String>,
}

impl OracleReport {
    fn all_ok(&self) -> bool {
        self.count_ok == self.trials
            && self.snf_ok == self.trials
            && self.invariant_ok == self.trials
    }

    fn text(&self) -> String {
        let mut out = format!(
            "count_solutions vs brute force: {}/{} agree\n\
             snf postconditions: {}/{} valid\n\
             invariant_s3 vs homomorphism count: {}/{} agree",
            self.count_ok, self.trials, self.snf_ok, self.trials, self.invariant_ok, self.trials
        );
        match &self.first_failure {
            None => out.push_str(&format!("\nall {} checks passed", 3 * self.trials)),
            Some(f) => out.push_str(&format!("\nFAILED: {f}")),
        }
        out
    }
}

/// Brute-force bundle count for an all-Wilson link: meridian constraints
/// enumerated exhaustively, divided by |G|.
fn hom_count_oracle(d: &LabeledLinkingData, g: &FiniteAbelianGroup) -> Result<Rational, Error> {
    let n = d.component_count();
    let mut rows = IntMatrix::zeros(2 * n, n);
    let mut targets = Vec::with_capacity(2 * n);
    for i in 0..n {
        let label = d.wilson_label(i)?;
        rows[(2 * i, i)] = BigInt::from(1);
        targets.push(label.a.clone());
        for j in 0..n {
            rows[(2 * i + 1, j)] = d.matrix()[(i, j)].clone();
        }
        targets.push(label.b.clone());
    }
    let count = brute_force_count(&rows, &targets, g)?;
    Ok(Rational::new(count, BigInt::from(g.order())))
}

fn run_oracle(g: &FiniteAbelianGroup, trials: usize, seed: u64) -> Result<OracleReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OracleReport {
        trials,
        count_ok: 0,
        snf_ok: 0,
        invariant_ok: 0,
        first_failure: None,
    };
    let note_failure = |slot: &mut Option<String>, msg: String| {
        if slot.is_none() {
            *slot = Some(msg);
        }
    };

    for trial in 0..trials {
        // Random integer system over G.
        let rows = rng.random_range(0..=3usize);
        let cols = rng.random_range(0..=3usize);
        let m = IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.random_range(-4i64..=4)));
        let t: Vec<_> = (0..rows)
            .map(|_| g.element_at(rng.random_range(0..g.order())))
            .collect();

        let snf = smith_normal_form(&m);
        if snf.verify(&m) {
            report.snf_ok += 1;
        } else {
            note_failure(
                &mut report.first_failure,
                format!("trial {trial}: SNF postconditions"),
            );
        }
        let fast = count_solutions(&m, &t, g)?;
        let slow = brute_force_count(&m, &t, g)?;
        if fast == slow {
            report.count_ok += 1;
        } else {
            note_failure(
                &mut report.first_failure,
                format!("trial {trial}: count_solutions {fast} != brute force {slow}"),
            );
        }

        // Random all-Wilson link in S^3.
        let n = rng.random_range(1..=3usize);
        let mut lm = IntMatrix::zeros(n, n);
        for i in 0..n {
            lm[(i, i)] = BigInt::from(rng.random_range(-3i64..=3));
            for j in i + 1..n {
                let v = BigInt::from(rng.random_range(-3i64..=3));
                lm[(i, j)] = v.clone();
                lm[(j, i)] = v;
            }
        }
        let labels: Vec<Label> = (0..n)
            .map(|_| {
                Label::new(
                    g.element_at(rng.random_range(0..g.order())),
                    g.element_at(rng.random_range(0..g.order())),
                )
            })
            .collect();
        let d = LabeledLinkingData::all_wilson(lm, labels)?;
        let direct = invariant_s3(&d, g)?;
        let oracle = hom_count_oracle(&d, g)?;
        if direct == oracle {
            report.invariant_ok += 1;
        } else {
            note_failure(
                &mut report.first_failure,
                format!("trial {trial}: invariant_s3 {direct} != oracle {oracle}"),
            );
        }
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
