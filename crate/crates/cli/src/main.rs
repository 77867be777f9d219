//! `relkit`: permutation groups acting on subsets, from the command line.
//!
//! Every command prints one JSON object `{"report": ..., "caps": ..., "timing": ...}`.
//! The report is deterministic for fixed inputs and caps. `export` prints
//! the bare file document instead, so its output can be read back.
//!
//! Exit codes: 0 success, 1 other failure, 2 `verify-paper` found a
//! violation, 3 a work cap was exceeded, 4 the input did not parse.

mod input;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use relkit::census::regular_set_census_with;
use relkit::chains::{classify_a_prime, imprimitivity_chains, AClass, ImprimitivityChain};
use relkit::closure::orbit_closure_with;
use relkit::notation::format_permutation;
use relkit::orbits::{orbits_on_all_subsets, orbits_on_k_subsets_with, OrbitPartition};
use relkit::relation::{invariance_group_with, invariance_group_with_candidate, relation_closure_with};
use relkit::structure::is_primitive;
use relkit::wreath::{rela5_define_subgroup, wreath_product};
use relkit::{Caps, Error, PermutationGroup, Subset};
use serde_json::{json, Value};

use input::{parse_group, parse_points, read_relation, GroupFile, RelationFile};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Json(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::CapExceeded { .. } | Error::DegreeTooLarge { .. }) => 3,
            CliError::Core(
                Error::Parse { .. } | Error::UnknownGroup(_) | Error::RepeatedPoint { .. } | Error::PointOutOfRange { .. },
            )
            | CliError::Json(_)
            | CliError::Usage(_) => 4,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Io(m) | CliError::Json(m) | CliError::Usage(m) => m.clone(),
        }
    }
}

#[derive(Parser)]
#[command(name = "relkit", version, about = "Permutation groups acting on subsets")]
struct Cli {
    /// Largest degree for unseeded searches over Sym(n).
    #[arg(long, global = true, default_value_t = Caps::default().max_degree_exhaustive)]
    max_degree_exhaustive: usize,
    /// Work bound for the regular-set census.
    #[arg(long, global = true, default_value_t = Caps::default().census_work_cap)]
    census_work_cap: u128,
    /// Search layers with many orbits greedily instead of failing.
    #[arg(long, global = true)]
    allow_greedy: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order, transitivity and primitivity of a group.
    Order { group: String },
    /// Number of regular k-subsets for every k.
    Census { group: String },
    /// Orbits on k-subsets, or on all subsets when --k is absent.
    Orbits {
        group: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Orbit closure G* and c(G) = |G*:G|.
    Closure {
        group: String,
        /// Also report the k-closure for these layers.
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
    },
    /// Smallest relation group above G and r(G).
    RelationGroup { group: String },
    /// Invariance group of a relation file.
    InvarianceGroup {
        #[arg(long)]
        relation: PathBuf,
        /// A group known to preserve the relation, to seed the search.
        #[arg(long)]
        candidate: Option<String>,
    },
    /// Imprimitive wreath product K wr L.
    Wreath { k: String, l: String },
    /// Imprimitivity chains of a transitive imprimitive group.
    Chains { group: String },
    /// Classification by the primitive links of its imprimitivity chains.
    #[command(name = "classify-A")]
    ClassifyA { group: String },
    /// Relation defining a subgroup of K wr L from relations for K and L.
    DefineSubgroup {
        k: String,
        l: String,
        /// Relation file defining K, sets of size 2 to d - 2.
        #[arg(long)]
        r_delta: PathBuf,
        /// Relation file defining L.
        #[arg(long)]
        r_sigma: PathBuf,
        /// Regular set of K wr L, as 1-based points.
        #[arg(long)]
        w: String,
        /// The subgroup, in the numbering where point (i, j) of block j is i + d j.
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// Re-derive the exceptional lists and identities by computation.
    VerifyPaper {
        #[arg(long, value_enum, default_value_t = verify::Level::Quick)]
        level: verify::Level,
    },
    /// Write a group, or a relation with --relation, in the JSON file format.
    Export {
        group: Option<String>,
        #[arg(long, conflicts_with = "group")]
        relation: Option<PathBuf>,
    },
}

struct Outcome {
    report: Value,
    exit: u8,
    /// Per-step timings, kept apart from the report.
    steps_ms: Option<Value>,
    /// Print the report alone, without the envelope.
    bare: bool,
}

impl From<Value> for Outcome {
    fn from(report: Value) -> Self {
        Outcome {
            report,
            exit: 0,
            steps_ms: None,
            bare: false,
        }
    }
}

fn generators(g: &PermutationGroup) -> Vec<String> {
    g.generators().iter().map(format_permutation).collect()
}

fn one_based(s: &Subset) -> Vec<usize> {
    s.points().iter().map(|p| p + 1).collect()
}

fn group_json(g: &PermutationGroup) -> Value {
    json!({ "degree": g.degree(), "order": g.order(), "generators": generators(g) })
}

fn partition_json(part: &OrbitPartition) -> Value {
    let orbits: Vec<Value> = part
        .representatives()
        .iter()
        .zip(part.lengths())
        .map(|(rep, len)| json!({ "representative": one_based(rep), "length": len }))
        .collect();
    json!({ "orbit_count": part.orbit_count(), "orbits": orbits })
}

fn chain_json(chain: &ImprimitivityChain) -> Value {
    json!({ "degrees": chain.degrees(), "orders": chain.orders() })
}

fn run(cli: &Cli, caps: &Caps) -> Result<Outcome, CliError> {
    let out = match &cli.command {
        Command::Order { group } => {
            let g = parse_group(group)?;
            let orbits: Vec<Vec<usize>> = g.orbits().iter().map(|o| o.iter().map(|p| p + 1).collect()).collect();
            let primitive = if g.is_transitive() { Some(is_primitive(&g)?) } else { None };
            json!({
                "group": group_json(&g),
                "transitive": g.is_transitive(),
                "primitive": primitive,
                "orbits": orbits,
            })
        }
        Command::Census { group } => {
            let g = parse_group(group)?;
            let census = regular_set_census_with(&g, caps)?;
            json!({ "group": group_json(&g), "census": census, "regular_total": census.regular_total() })
        }
        Command::Orbits { group, k } => {
            let g = parse_group(group)?;
            let part = match k {
                Some(k) => orbits_on_k_subsets_with(&g, *k, caps)?,
                None => orbits_on_all_subsets(&g, caps)?,
            };
            json!({ "group": group_json(&g), "k": k, "partition": partition_json(&part) })
        }
        Command::Closure { group, k } => {
            let g = parse_group(group)?;
            let report = orbit_closure_with(&g, k, caps)?;
            json!({
                "group": group_json(&g),
                "k_closure_orders": report.k_closures,
                "star_order": report.star_order,
                "c": report.c_of_g,
                "orbit_closed": report.orbit_closed,
                "routes_agree": report.routes_agree,
                "star": group_json(&report.star),
            })
        }
        Command::RelationGroup { group } => {
            let g = parse_group(group)?;
            let report = relation_closure_with(&g, caps)?;
            json!({
                "group": group_json(&g),
                "is_relation_group": report.is_relation_group,
                "closure_order": report.closure_order,
                "r": report.r_of_g,
                "exhaustive": report.exhaustive,
                "witness_relation": report.witness_relation.as_ref().map(RelationFile::from_relation),
                "minimal_relation": RelationFile::from_relation(&report.minimal_relation),
                "minimal_group": group_json(&report.minimal_group),
            })
        }
        Command::InvarianceGroup { relation, candidate } => {
            let r = read_relation(relation)?;
            let g = match candidate {
                Some(spec) => invariance_group_with_candidate(&r, &parse_group(spec)?, caps)?,
                None => invariance_group_with(&r, caps)?,
            };
            json!({ "relation_size": r.len(), "invariance_group": group_json(&g) })
        }
        Command::Wreath { k, l } => {
            let w = wreath_product(&parse_group(k)?, &parse_group(l)?)?;
            let blocks: Vec<Vec<usize>> = w
                .block_system()
                .blocks
                .iter()
                .map(|b| b.iter().map(|p| p + 1).collect())
                .collect();
            json!({
                "d": w.d,
                "s": w.s,
                "group": group_json(&w.group),
                "expected_order": w.expected_order(),
                "blocks": blocks,
            })
        }
        Command::Chains { group } => {
            let g = parse_group(group)?;
            let e = imprimitivity_chains(&g, caps)?;
            json!({
                "group": group_json(&g),
                "chains": e.chains.iter().map(chain_json).collect::<Vec<_>>(),
                "merged": e.merged,
                "truncated": e.truncated,
            })
        }
        Command::ClassifyA { group } => {
            let g = parse_group(group)?;
            let c = classify_a_prime(&g, caps)?;
            let class = match c.class {
                AClass::AImprimitive => "A-imprimitive",
                AClass::APrimeImprimitive => "A'-imprimitive",
                AClass::Both => "both",
                AClass::Neither => "neither",
            };
            let chains: Vec<Value> = c
                .chains
                .iter()
                .zip(&c.memberships)
                .map(|(chain, links)| json!({ "chain": chain_json(chain), "links": links }))
                .collect();
            json!({
                "group": group_json(&g),
                "class": class,
                "chains": chains,
                "unknown": c.unknown,
                "truncated": c.truncated,
            })
        }
        Command::DefineSubgroup {
            k,
            l,
            r_delta,
            r_sigma,
            w,
            subgroup,
        } => {
            let (k, l) = (parse_group(k)?, parse_group(l)?);
            let wreath = wreath_product(&k, &l)?;
            let g = match subgroup {
                Some(spec) => parse_group(spec)?,
                None => wreath.group.clone(),
            };
            let w = parse_points(wreath.degree(), w)?;
            let r = rela5_define_subgroup(&k, &l, &read_relation(r_delta)?, &read_relation(r_sigma)?, &w, &g, caps)?;
            let found = invariance_group_with_candidate(&r, &g, caps)?;
            json!({
                "subgroup": group_json(&g),
                "relation": RelationFile::from_relation(&r),
                "defines_subgroup": found.same_group(&g),
            })
        }
        Command::VerifyPaper { level } => {
            let outcomes = verify::run(*level, caps);
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            let steps: serde_json::Map<String, Value> =
                outcomes.iter().map(|o| (o.name.to_string(), json!(o.elapsed_ms))).collect();
            let report = json!({ "level": format!("{level:?}").to_lowercase(), "checks": outcomes, "failed": failed });
            return Ok(Outcome {
                report,
                exit: if failed == 0 { 0 } else { 2 },
                steps_ms: Some(Value::Object(steps)),
                bare: false,
            });
        }
        Command::Export { group, relation } => {
            let doc = match (group, relation) {
                (_, Some(path)) => serde_json::to_value(RelationFile::from_relation(&read_relation(path)?)),
                (Some(spec), None) => serde_json::to_value(GroupFile::from_group(&parse_group(spec)?)),
                (None, None) => return Err(CliError::Usage("export needs a group or --relation".into())),
            }
            .map_err(|e| CliError::Json(e.to_string()))?;
            return Ok(Outcome {
                bare: true,
                ..doc.into()
            });
        }
    };
    Ok(out.into())
}

fn main() -> ExitCode {
    relkit::configure_threads_from_env();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    let caps = Caps {
        max_degree_exhaustive: cli.max_degree_exhaustive,
        census_work_cap: cli.census_work_cap,
        allow_greedy: cli.allow_greedy,
        ..Caps::default()
    };
    let start = Instant::now();
    let result = run(&cli, &caps);
    let mut timing = json!({ "elapsed_ms": start.elapsed().as_millis() });
    match result {
        Ok(outcome) => {
            if let Some(steps) = outcome.steps_ms {
                timing["steps_ms"] = steps;
            }
            let doc = if outcome.bare {
                outcome.report
            } else {
                json!({ "report": outcome.report, "caps": caps, "timing": timing })
            };
            println!("{}", serde_json::to_string_pretty(&doc).expect("JSON values serialize"));
            ExitCode::from(outcome.exit)
        }
        Err(e) => {
            let code = e.exit_code();
            let doc = json!({ "error": e.message(), "exit_code": code, "timing": timing });
            println!("{}", serde_json::to_string_pretty(&doc).expect("JSON values serialize"));
            eprintln!("relkit: {}", e.message());
            ExitCode::from(code)
        }
    }
}
