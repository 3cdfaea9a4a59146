// SPDX-License-Identifier: Apache-2.0

mod config;
mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use edfkit::bounds::{bound_for_profile, DEFAULT_PARTITION_CAP};
use edfkit::catalog::CatalogStore;
use edfkit::search::DEFAULT_BUDGET;
use edfkit::{
    builtin_pdf, construct_a, construct_b, construct_c, construct_d, improved_bound,
    min_lambda_search, monte_carlo_attack, parse_document, parse_family, rho_delta,
    strongly_optimal_search, verify_kind, EdfError, Family, FamilyDocument, GroupElement,
    PrimeField, PropertyKind, SearchOptions,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Config;

/// Budget for the strong-optimality search behind `rho` unless configured.
const DEFAULT_CLASSIFY_BUDGET: u64 = 1_000_000;

#[derive(Parser)]
#[command(
    name = "edfkit",
    version,
    about = "Weighted external difference families and weak AMD codes"
)]
struct Cli {
    /// Render reports as text instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family from one of the explicit constructions.
    #[command(subcommand)]
    Construct(Construct),
    /// Check a family file against one property.
    Verify {
        #[arg(long)]
        kind: PropertyKind,
        file: PathBuf,
        /// Bound for `bedf`.
        #[arg(long)]
        lambda: Option<u64>,
        /// Per-block bounds for `bgsedf`, comma separated.
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<u64>>,
        /// Include the full difference count table.
        #[arg(long)]
        detail: bool,
    },
    /// Closed-form bounds for n, m and a (or a size profile K).
    Bound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: usize,
        #[arg(long, required_unless_present = "sizes")]
        a: Option<u64>,
        #[arg(long = "K", value_delimiter = ',', conflicts_with = "a")]
        sizes: Option<Vec<u64>>,
        /// Largest a for which partitions are enumerated.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Exact tampering probabilities of the code given by a family file.
    Rho {
        file: PathBuf,
        /// Report a single offset instead of the full profile.
        #[arg(long)]
        delta: Option<String>,
        /// Simulate TRIALS games with SEED at the offset (default: the best one).
        #[arg(long, num_args = 2, value_names = ["TRIALS", "SEED"])]
        mc: Option<Vec<u64>>,
        /// Node budget for deciding strong optimality by search.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Exhaustive search for the least lambda in Z_n.
    Search {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: usize,
        #[arg(long = "K", value_delimiter = ',', required_unless_present = "a")]
        sizes: Option<Vec<u64>>,
        #[arg(long, conflicts_with = "sizes")]
        a: Option<u64>,
        #[arg(long)]
        budget: Option<u64>,
        /// Also quotient by multiplication with units of Z_n.
        #[arg(long)]
        unit_reduction: bool,
    },
    /// Manage a directory of verified families.
    Catalog {
        #[arg(long)]
        dir: Option<PathBuf>,
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Cyclotomic classes of index e over F_p.
    Cyclotomy {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u64,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// Z_2 x F_q from quartic classes; q = 4k+1 prime, k odd.
    A {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        out: FlattenArg,
    },
    /// Z_2 x Z_n1 from quadratic residues; n1 an odd prime.
    B {
        #[arg(long)]
        n1: u64,
        #[command(flatten)]
        out: FlattenArg,
    },
    /// Z_3 x F_q from quadratic classes; q = 4k+1 prime, k odd.
    C {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        out: FlattenArg,
    },
    /// SWEDF from a partitioned difference family over Z_(k-1) x Z_(tk+1).
    D {
        /// Family file or built-in name such as `paper-z15`.
        #[arg(long)]
        pdf: String,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        t: u64,
        #[command(flatten)]
        out: FlattenArg,
    },
}

#[derive(Args)]
struct FlattenArg {
    /// Present the output over Z_n via CRT.
    #[arg(long)]
    flatten: bool,
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Verify a family and store it under NAME.
    Add {
        name: String,
        /// Family file or built-in name.
        source: String,
    },
    List,
    /// Re-verify every entry and compare digests.
    VerifyAll,
}

enum Failure {
    Usage(String),
    Edf(EdfError),
}

impl From<EdfError> for Failure {
    fn from(e: EdfError) -> Self {
        match e {
            EdfError::Io(_) => Failure::Usage(e.to_string()),
            e => Failure::Edf(e),
        }
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports always serialize")
}

fn read_family(path: &Path) -> Result<Family, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_family(&text)?)
}

/// A path when it exists, otherwise a built-in family name.
fn family_source(source: &str) -> Result<FamilyDocument, Failure> {
    let path = Path::new(source);
    if path.exists() {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {source}: {e}")))?;
        return Ok(parse_document(&text)?);
    }
    match builtin_pdf(source) {
        Ok(family) => Ok(FamilyDocument::new(family)),
        Err(_) => Err(Failure::Usage(format!(
            "`{source}` is neither a file nor a built-in family"
        ))),
    }
}

fn parse_delta(text: &str, family: &Family) -> Result<GroupElement, Failure> {
    let cleaned = text.trim().trim_start_matches('(').trim_end_matches(')');
    let coords = cleaned
        .split(',')
        .map(|c| c.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::Usage(format!("cannot parse offset `{text}`")))?;
    if coords.len() != family.group().factors().len() {
        return Err(Failure::Usage(format!(
            "offset `{text}` has {} coordinates but the group has {} factors",
            coords.len(),
            family.group().factors().len()
        )));
    }
    Ok(family.group().element(&coords)?)
}

fn construct(cmd: Construct) -> Outcome {
    let (result, flatten) = match cmd {
        Construct::A { q, out } => (construct_a(q)?, out.flatten),
        Construct::B { n1, out } => (construct_b(n1)?, out.flatten),
        Construct::C { q, out } => (construct_c(q)?, out.flatten),
        Construct::D { pdf, k, t, out } => {
            let doc = family_source(&pdf)?;
            (construct_d(&doc.family, k, t)?, out.flatten)
        }
    };
    let mut value = to_value(&result);
    if flatten {
        value["family"] = to_value(&result.flattened()?);
    }
    Ok((value, true))
}

fn verify(
    kind: PropertyKind,
    file: &Path,
    lambda: Option<u64>,
    lambdas: Option<Vec<u64>>,
    detail: bool,
) -> Outcome {
    let family = read_family(file)?;
    if kind == PropertyKind::Bedf && lambda.is_none() {
        return Err(Failure::Usage("--kind bedf needs --lambda".into()));
    }
    if kind == PropertyKind::Bgsedf && lambdas.is_none() {
        return Err(Failure::Usage("--kind bgsedf needs --lambdas".into()));
    }
    let mut report = verify_kind(&family, kind, lambda, lambdas.as_deref())?;
    if !detail {
        report.detail = None;
    }
    Ok((to_value(&report), report.holds))
}

fn rho(file: &Path, delta: Option<String>, mc: Option<Vec<u64>>, budget: u64) -> Outcome {
    let family = read_family(file)?;
    let delta = delta.map(|d| parse_delta(&d, &family)).transpose()?;
    let mut value = match &delta {
        Some(d) => json!({"delta": d, "rho": rho_delta(&family, d)?.to_string()}),
        None => to_value(&edfkit::amd::rho_profile_classified(&family, budget)?),
    };
    if let Some(mc) = mc {
        let target = match delta {
            Some(d) => d,
            None => edfkit::rho_profile(&family)?.best_deltas[0].clone(),
        };
        value["monte_carlo"] = to_value(&monte_carlo_attack(&family, &target, mc[0], mc[1])?);
    }
    Ok((value, true))
}

fn search(
    n: u64,
    m: usize,
    sizes: Option<Vec<u64>>,
    a: Option<u64>,
    options: SearchOptions,
) -> Outcome {
    let result = match (sizes, a) {
        (Some(sizes), _) => min_lambda_search(n, m, &sizes, options)?,
        (None, Some(a)) => strongly_optimal_search(n, m, a, options)?,
        (None, None) => return Err(Failure::Usage("give --K or --a".into())),
    };
    Ok((to_value(&result), result.exhausted))
}

fn catalog(dir: PathBuf, action: CatalogAction) -> Outcome {
    let store = CatalogStore::open(dir);
    match action {
        CatalogAction::Add { name, source } => {
            let doc = family_source(&source)?;
            let entry = store.add(&name, &doc)?;
            Ok((json!({"name": name, "entry": entry}), true))
        }
        CatalogAction::List => {
            let entries: serde_json::Map<String, Value> = store
                .list()?
                .into_iter()
                .map(|(name, entry)| (name, to_value(&entry)))
                .collect();
            Ok((Value::Object(entries), true))
        }
        CatalogAction::VerifyAll => {
            let checks = store.verify_all()?;
            let ok = checks.iter().all(|c| c.ok);
            Ok((json!({"ok": ok, "entries": checks}), ok))
        }
    }
}

fn cyclotomy(p: u64, e: u64) -> Outcome {
    let field = PrimeField::new(p)?;
    let classes: Vec<Vec<u64>> = field.classes(e)?.into_iter().map(|c| c.elements).collect();
    Ok((
        json!({"p": p, "alpha": field.alpha(), "e": e, "classes": classes}),
        true,
    ))
}

fn run(cli: Cli, config: Config) -> Outcome {
    match cli.command {
        Command::Construct(cmd) => construct(cmd),
        Command::Verify {
            kind,
            file,
            lambda,
            lambdas,
            detail,
        } => verify(kind, &file, lambda, lambdas, detail),
        Command::Bound {
            n,
            m,
            a,
            sizes,
            cap,
        } => {
            let cap = cap.or(config.partition_cap).or(Some(DEFAULT_PARTITION_CAP));
            let report = match (sizes, a) {
                (Some(sizes), _) => bound_for_profile(n, m, &sizes, cap)?,
                (None, Some(a)) => improved_bound(n, m, a, cap)?,
                (None, None) => return Err(Failure::Usage("give --a or --K".into())),
            };
            Ok((to_value(&report), true))
        }
        Command::Rho {
            file,
            delta,
            mc,
            budget,
        } => {
            let budget = budget
                .or(config.classify_budget)
                .unwrap_or(DEFAULT_CLASSIFY_BUDGET);
            rho(&file, delta, mc, budget)
        }
        Command::Search {
            n,
            m,
            sizes,
            a,
            budget,
            unit_reduction,
        } => {
            let options = SearchOptions {
                budget: budget.or(config.search_budget).unwrap_or(DEFAULT_BUDGET),
                unit_reduction,
            };
            search(n, m, sizes, a, options)
        }
        Command::Catalog { dir, action } => {
            let dir = dir
                .or(config.catalog_dir)
                .unwrap_or_else(|| PathBuf::from("catalog"));
            catalog(dir, action)
        }
        Command::Cyclotomy { p, e } => cyclotomy(p, e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match Config::load() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("edfkit: {msg}");
            return ExitCode::from(2);
        }
    };
    let human = cli.human || config.human.unwrap_or(false);
    match run(cli, config) {
        Ok((value, success)) => {
            let text = if human {
                render::human(&value)
            } else {
                serde_json::to_string_pretty(&value).expect("values always serialize") + "\n"
            };
            // A closed pipe downstream is not a failure of the command.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("edfkit: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Edf(e)) => {
            eprintln!("edfkit: {e}");
            ExitCode::from(3)
        }
    }
}
