use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use turan_core::constructions::{
    build_bipartite_along, build_complete, build_conjectured, build_g1, build_g2, Construction,
};
use turan_core::formulas::{bet_value, conj_value, g_of, matching_extremal_value, optimal_bipartition};
use turan_core::harness::{audit_induction, run_sweep, shape_survey, write_csv_to, ShapeCensus, SweepSpec};
use turan_core::packing::{
    classify_pair, find_clique_packing, rich_edges, triangle_exists_under_mindeg,
};
use turan_core::random::{random_graph, random_graph_with_min_degree, random_sizes};
use turan_core::solver::{SearchBudget, Solver, SolverConfig, DEFAULT_VERTEX_CAP};
use turan_core::{BlockPartition, MultipartiteGraph, PartSizes};

const EXIT_BUDGET: u8 = 2;

#[derive(Parser)]
#[command(name = "turan", version, about = "Multipartite Turán numbers for disjoint cliques")]
struct Cli {
    /// Write the main result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for the random-graph property suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Continue a sweep from the witnesses already written next to --output.
    #[arg(long, global = true)]
    resume: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulaKind {
    G,
    Bet,
    Conj,
    Matching,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    G1,
    G2,
    Conj,
    Bipartite,
    Complete,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a closed-form extremal value.
    Formula {
        #[arg(value_enum)]
        kind: FormulaKind,
        /// Comma-separated part sizes.
        #[arg(long)]
        parts: String,
        #[arg(long, default_value_t = 3)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Build an extremal candidate graph in the text graph format.
    Construct {
        #[arg(value_enum)]
        kind: BuildKind,
        #[arg(long)]
        parts: String,
        #[arg(long, default_value_t = 3)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Blocks of 1-based part ids, e.g. `1,4/2,3`.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Search a graph file for k disjoint t-cliques.
    CheckPacking {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        t: usize,
    },
    /// Rich edges, pair classes and the min-degree triangle check for a graph file.
    Analyze {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Compute an exact extremal number by branch and bound.
    Solve {
        #[arg(long)]
        parts: String,
        #[arg(long, default_value_t = 3)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 200_000_000)]
        max_nodes: u64,
        #[arg(long)]
        max_seconds: Option<f64>,
        /// Known achievable edge count to start from.
        #[arg(long)]
        incumbent: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
        /// Also write the witness graph here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Solve every point of a grid and compare with the formulas.
    Sweep {
        /// Part counts, comma-separated.
        #[arg(long, default_value = "4")]
        r: String,
        #[arg(long, default_value = "3")]
        t: String,
        #[arg(long, default_value = "1")]
        k: String,
        #[arg(long, default_value_t = 10)]
        max_total: usize,
        #[arg(long, default_value_t = 1)]
        min_part: usize,
        #[arg(long)]
        max_part: Option<usize>,
        #[arg(long, default_value_t = 200_000_000)]
        max_nodes: u64,
        #[arg(long)]
        max_seconds: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
    /// Bucket size vectors by the argmax block that holds the largest part.
    SurveyShapes {
        #[arg(long, default_value_t = 5)]
        r: usize,
        #[arg(long, default_value_t = 3)]
        t: usize,
        /// One or more k values; the census is their union.
        #[arg(long, default_value = "2")]
        k: String,
        #[arg(long, default_value_t = 1)]
        min_entry: usize,
        #[arg(long, default_value_t = 20)]
        max_entry: usize,
    },
    /// Check the vertex and edge removal inequalities and degree rules on a 4-partite graph.
    Audit {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Run the random-graph property suites.
    Properties {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().with_context(|| format!("bad integer {x:?} in {s:?}")))
        .collect()
}

fn parse_usizes(s: &str) -> Result<Vec<usize>> {
    parse_list(s)?
        .into_iter()
        .map(|v| usize::try_from(v).with_context(|| format!("negative value {v} in {s:?}")))
        .collect()
}

fn parse_parts(s: &str) -> Result<PartSizes> {
    Ok(PartSizes::from_signed(&parse_list(s)?)?)
}

fn parse_partition(s: &str, ns: &PartSizes) -> Result<BlockPartition> {
    let mut blocks = Vec::new();
    for block in s.split('/') {
        let ids = parse_usizes(block)?;
        if ids.contains(&0) {
            bail!("part ids are 1-based");
        }
        blocks.push(ids.into_iter().map(|p| p - 1).collect());
    }
    Ok(BlockPartition::new(blocks, ns)?)
}

fn read_graph(path: &Path) -> Result<MultipartiteGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    MultipartiteGraph::parse_text(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json(cli: &Cli, value: &impl serde::Serialize) -> Result<()> {
    if cli.format == Format::Csv {
        bail!("csv output is not available for this command");
    }
    emit(cli, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Formula { kind, parts, t, k } => {
            let ns = parse_parts(parts)?;
            let value = match kind {
                FormulaKind::G => serde_json::to_value(g_of(&ns, *k)?)?,
                FormulaKind::Bet => serde_json::to_value(bet_value(&ns, *t)?)?,
                FormulaKind::Conj => serde_json::to_value(conj_value(&ns, *t, *k)?)?,
                FormulaKind::Matching => json!({ "value": matching_extremal_value(&ns, *k) }),
            };
            match cli.format {
                Format::Json => emit_json(cli, &value)?,
                Format::Csv => {
                    let v = value["value"].as_u64().unwrap_or_default();
                    emit(cli, &format!("ns,t,k,value\n{},{t},{k},{v}\n", ns.key()))?
                }
            }
            Ok(0)
        }
        Command::Construct {
            kind,
            parts,
            t,
            k,
            partition,
        } => {
            let ns = parse_parts(parts)?;
            let partition = partition.as_deref().map(|p| parse_partition(p, &ns)).transpose()?;
            let built: Construction = match kind {
                BuildKind::G1 => build_g1(&ns, *k)?,
                BuildKind::G2 => build_g2(&ns, *k)?,
                BuildKind::Conj => build_conjectured(&ns, *t, *k, partition)?,
                BuildKind::Bipartite => {
                    let p = match partition {
                        Some(p) => p,
                        None => optimal_bipartition(&ns)?.partition,
                    };
                    build_bipartite_along(&ns, &p)?
                }
                BuildKind::Complete => build_complete(&ns),
            };
            if cli.format == Format::Json && cli.output.is_none() {
                let mut sidecar = built.sidecar();
                sidecar["graph"] = serde_json::to_value(&built.graph)?;
                emit_json(cli, &sidecar)?;
            } else {
                emit(cli, &built.graph.to_text())?;
                if let Some(path) = &cli.output {
                    let side = path.with_extension("json");
                    fs::write(&side, serde_json::to_string_pretty(&built.sidecar())? + "\n")
                        .with_context(|| format!("writing {}", side.display()))?;
                }
            }
            Ok(0)
        }
        Command::CheckPacking { graph, k, t } => {
            let g = read_graph(graph)?;
            let found = find_clique_packing(&g, *k, *t);
            let one_based = found.as_ref().map(|w| {
                w.cliques
                    .iter()
                    .map(|c| c.iter().map(|v| v + 1).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            });
            emit_json(
                cli,
                &json!({ "k": k, "t": t, "free": found.is_none(), "packing": one_based }),
            )?;
            Ok(0)
        }
        Command::Analyze { graph, k } => {
            let g = read_graph(graph)?;
            let report = rich_edges(&g, *k);
            let mut pairs = Vec::new();
            for i in 0..g.r() {
                for j in i + 1..g.r() {
                    pairs.push(json!({
                        "parts": [i + 1, j + 1],
                        "class": classify_pair(&g, &report.z_set, i, j),
                    }));
                }
            }
            emit_json(
                cli,
                &json!({
                    "rich_edges": report,
                    "pair_classes": pairs,
                    "min_degree_triangle": triangle_exists_under_mindeg(&g),
                }),
            )?;
            Ok(0)
        }
        Command::Solve {
            parts,
            t,
            k,
            max_nodes,
            max_seconds,
            incumbent,
            cap,
            witness,
        } => {
            let ns = parse_parts(parts)?;
            let solver = Solver::new(SolverConfig {
                vertex_cap: *cap,
                ..Default::default()
            });
            let budget = SearchBudget {
                max_nodes: *max_nodes,
                max_seconds: *max_seconds,
                initial_incumbent: *incumbent,
            };
            let record = solver.verify_point(&ns, *t, *k, &budget)?;
            if let Some(path) = witness {
                fs::write(path, record.witness.to_text())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            match cli.format {
                Format::Json => emit_json(cli, &record)?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_csv_to(&mut buf, std::slice::from_ref(&record))?;
                    emit(cli, &String::from_utf8(buf)?)?;
                }
            }
            Ok(if record.exact_value.is_none() { EXIT_BUDGET } else { 0 })
        }
        Command::Sweep {
            r,
            t,
            k,
            max_total,
            min_part,
            max_part,
            max_nodes,
            max_seconds,
            cap,
        } => {
            let spec = SweepSpec {
                r_values: parse_usizes(r)?,
                t_values: parse_usizes(t)?,
                k_values: parse_usizes(k)?,
                min_part: *min_part,
                max_part: max_part.unwrap_or(*max_total),
                max_total: *max_total,
                budget: SearchBudget {
                    max_nodes: *max_nodes,
                    max_seconds: *max_seconds,
                    initial_incumbent: None,
                },
                solver: SolverConfig {
                    vertex_cap: *cap,
                    ..Default::default()
                },
                output: cli.output.clone(),
                resume: cli.resume,
                workers: cli.workers,
            };
            if cli.resume && cli.output.is_none() {
                bail!("--resume needs --output");
            }
            let report = run_sweep(&spec)?;
            let summary = json!({
                "points": report.records.len(),
                "deviations": report.deviations.len(),
                "findings": report.findings().map(|r| r.ns.key()).collect::<Vec<_>>(),
                "budget_exhausted": report.budget_exhausted(),
            });
            match (&cli.output, cli.format) {
                (Some(_), _) => eprintln!("{}", serde_json::to_string(&summary)?),
                (None, Format::Csv) => {
                    write_csv_to(io::stdout().lock(), &report.records)?;
                    eprintln!("{}", serde_json::to_string(&summary)?);
                }
                (None, Format::Json) => emit_json(cli, &report)?,
            }
            Ok(if report.budget_exhausted() { EXIT_BUDGET } else { 0 })
        }
        Command::SurveyShapes {
            r,
            t,
            k,
            min_entry,
            max_entry,
        } => {
            let mut census = ShapeCensus::default();
            for k in parse_usizes(k)? {
                census.merge(shape_survey(*r, *t, k, *min_entry..=*max_entry)?);
            }
            match cli.format {
                Format::Json => emit_json(cli, &census)?,
                Format::Csv => {
                    let mut text = String::from("shape,witness,k,count\n");
                    for (shape, b) in &census.buckets {
                        text += &format!("\"{shape}\",{},{},{}\n", b.witness.key(), b.k, b.count);
                    }
                    emit(cli, &text)?;
                }
            }
            Ok(0)
        }
        Command::Audit { graph, k } => {
            let g = read_graph(graph)?;
            let audit = audit_induction(&g, *k)?;
            emit_json(cli, &audit)?;
            Ok(0)
        }
        Command::Properties { samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let mut mindeg_tested = 0;
            let mut mindeg_failures = Vec::new();
            let mut skipped = 0;
            while mindeg_tested < *samples {
                let ns = random_sizes(&mut rng, 2..=5, 1..=6);
                let threshold = optimal_bipartition(&ns)?.mindeg_threshold as usize;
                let Some(g) = random_graph_with_min_degree(&mut rng, &ns, threshold, 0.5..1.0, 200) else {
                    skipped += 1;
                    continue;
                };
                mindeg_tested += 1;
                let res = triangle_exists_under_mindeg(&g);
                if res.is_counterexample() {
                    mindeg_failures.push(g.to_text());
                }
            }
            let mut pairs = 0u64;
            let mut cn_failures = Vec::new();
            for _ in 0..*samples {
                let ns = random_sizes(&mut rng, 4..=4, 1..=6);
                let p = rand::Rng::gen_range(&mut rng, 0.0..1.0);
                let g = random_graph(&mut rng, &ns, p);
                let n = g.vertex_count();
                for x in 0..n {
                    for y in x + 1..n {
                        if g.part_of(x) == g.part_of(y) {
                            continue;
                        }
                        pairs += 1;
                        let common = g.common_neighbors(x, y)?.len() as i64;
                        if common < g.degree(x) as i64 + g.degree(y) as i64 - n as i64 {
                            cn_failures.push(json!({ "graph": g.to_text(), "x": x, "y": y }));
                        }
                    }
                }
            }
            let ok = mindeg_failures.is_empty() && cn_failures.is_empty();
            emit_json(
                cli,
                &json!({
                    "seed": cli.seed,
                    "min_degree_triangle": {
                        "tested": mindeg_tested,
                        "size_vectors_skipped": skipped,
                        "counterexamples": mindeg_failures,
                    },
                    "common_neighbors": { "pairs": pairs, "violations": cn_failures },
                }),
            )?;
            Ok(if ok { 0 } else { 1 })
        }
    }
}
