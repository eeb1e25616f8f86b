use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ddae_connections::arborescence::{
    brute_force_arborescences, count_arborescences, enumerate_arborescences_with, Arborescence,
    DigraphDoc, EnumOptions, DEFAULT_BRUTE_FORCE_CAP,
};
use ddae_connections::bench::{run_bench, write_csv, Method, DEFAULT_TIME_LIMIT};
use ddae_connections::connection_graph::build_connection_graph;
use ddae_connections::connections::connection_report;
use ddae_connections::ddae::parse_ddae;
use ddae_connections::graphs::build_shifting_graph;
use ddae_connections::matching::compute_matching;
use ddae_connections::scenario::ScenarioKind;
use ddae_connections::{DdaeStructure, Error};

const EXIT_INPUT: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "ddae-conn", version, about = "Find all connections of exposed equations in delay DAE structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchMethod {
    Grow,
    Naive,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Print the shifting graph, matching and exposed equations.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Enumerate all connections of an exposed equation.
    Connections {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        exposed: usize,
        #[arg(long)]
        classify: bool,
        /// Include per-step witnesses when classifying.
        #[arg(long)]
        verbose: bool,
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Enumerate spanning arborescences of a digraph.
    Arborescences {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        root: Option<usize>,
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Count spanning arborescences with the matrix-tree determinant.
    Count {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        root: Option<usize>,
    },
    /// Brute-force arborescence enumeration (small graphs only).
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        root: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
        cap: usize,
    },
    /// Connection counts and timings over synthetic scenarios.
    Bench {
        #[arg(long)]
        scenario: ScenarioKind,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, value_enum, default_value = "grow")]
        method: BenchMethod,
        /// Per-cell time limit in seconds.
        #[arg(long, default_value_t = DEFAULT_TIME_LIMIT.as_secs_f64())]
        time_limit: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Limit,
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(e) => Failure::Other(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_ddae(path: &Path) -> Result<DdaeStructure, Failure> {
    Ok(parse_ddae(&read(path)?)?)
}

fn load_digraph(path: &Path, root: Option<usize>) -> Result<(ddae_connections::Digraph, usize), Failure> {
    let doc: DigraphDoc = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let root = root
        .or(doc.root)
        .ok_or_else(|| Failure::Input("no root given and none in the graph file".into()))?;
    Ok((doc.to_digraph()?, root))
}

fn tree_line(t: &Arborescence) -> String {
    serde_json::to_string(t).expect("tree serializes")
}

fn analyze(input: &Path, format: Format, out: &mut impl Write) -> Result<(), Failure> {
    let s = load_ddae(input)?;
    let g = build_shifting_graph(&s);
    let (m, exposed) = compute_matching(&g);
    match format {
        Format::Json => {
            let doc = json!({
                "shifting_graph": g.dump(),
                "matching": m.iter().collect::<Vec<_>>(),
                "exposed": exposed,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
        Format::Text => {
            writeln!(out, "equations: {}, groups: {}, edges: {}", g.n_equations(), g.group_nodes().len(), g.n_edges())?;
            for (eq, group) in m.iter() {
                writeln!(out, "  F{eq} -> {group}")?;
            }
            for r in &exposed {
                let reach: Vec<_> = r.reached_eqs.iter().map(|e| format!("F{e}")).collect();
                writeln!(out, "exposed F{}: reach {{{}}}", r.exposed, reach.join(", "))?;
                let h = build_connection_graph(&g, &m, r)?;
                let arcs: Vec<_> = h.arcs().map(|(a, b)| format!("(F{a},F{b})")).collect();
                writeln!(out, "  connection graph arcs: {}", arcs.join(" "))?;
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn connections(
    input: &Path,
    exposed: usize,
    classify: bool,
    verbose: bool,
    limit: Option<u64>,
    format: Format,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let s = load_ddae(input)?;
    let report = connection_report(&s, exposed, limit)?;
    for (c, cl) in report.connections.iter().zip(&report.classes) {
        match format {
            Format::Json => {
                let mut line = json!({ "triples": c.triples() });
                if classify {
                    line["class"] = json!(cl.class);
                    if verbose {
                        line["witnesses"] = json!(cl
                            .witnesses
                            .iter()
                            .map(|w| w.map(|o| (o.var, o.shift, o.deriv)))
                            .collect::<Vec<_>>());
                    }
                }
                if report.degenerate {
                    line["degenerate"] = json!(true);
                }
                writeln!(out, "{line}")?;
            }
            Format::Text => {
                write!(out, "{c}")?;
                if classify {
                    write!(out, "  {}", cl.class)?;
                    if verbose {
                        for (t, w) in c.triples().iter().zip(&cl.witnesses) {
                            match w {
                                Some(o) => write!(out, "  {t}: {o}")?,
                                None => write!(out, "  {t}: none")?,
                            }
                        }
                    }
                }
                if report.degenerate {
                    write!(out, "  (degenerate)")?;
                }
                writeln!(out)?;
            }
        }
    }
    if report.completed {
        Ok(())
    } else {
        Err(Failure::Limit)
    }
}

fn arborescences(graph: &Path, root: Option<usize>, limit: Option<u64>, out: &mut impl Write) -> Result<(), Failure> {
    let (g, root) = load_digraph(graph, root)?;
    let mut io_err = None;
    let outcome = enumerate_arborescences_with(&g, root, EnumOptions { limit, deadline: None }, |t| {
        if io_err.is_none() {
            if let Err(e) = writeln!(out, "{}", tree_line(t)) {
                io_err = Some(e);
            }
        }
    })?;
    if let Some(e) = io_err {
        return Err(e.into());
    }
    if outcome.completed {
        Ok(())
    } else {
        Err(Failure::Limit)
    }
}

fn bench(
    kind: ScenarioKind,
    from: usize,
    to: usize,
    method: BenchMethod,
    time_limit: f64,
    csv_path: Option<&Path>,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let methods: &[Method] = match method {
        BenchMethod::Grow => &[Method::Grow],
        BenchMethod::Naive => &[Method::Naive],
        BenchMethod::Both => &[Method::Grow, Method::Naive],
    };
    let limit = Duration::try_from_secs_f64(time_limit)
        .map_err(|e| Failure::Input(format!("time limit: {e}")))?;
    if from > to {
        return Err(Failure::Input(format!("--from {from} is larger than --to {to}")));
    }
    let records = run_bench(kind, from, to, methods, limit)?;
    match csv_path {
        Some(p) => write_csv(&records, fs::File::create(p)?)?,
        None => write_csv(&records, &mut *out)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match cli.command {
        Command::Analyze { input, format } => analyze(&input, format, &mut out),
        Command::Connections { input, exposed, classify, verbose, limit, format } => {
            connections(&input, exposed, classify, verbose, limit, format, &mut out)
        }
        Command::Arborescences { graph, root, limit } => arborescences(&graph, root, limit, &mut out),
        Command::Count { graph, root } => {
            let (g, root) = load_digraph(&graph, root)?;
            writeln!(out, "{}", count_arborescences(&g, root)?)?;
            Ok(())
        }
        Command::Oracle { graph, root, cap } => {
            let (g, root) = load_digraph(&graph, root)?;
            for t in brute_force_arborescences(&g, root, cap)? {
                writeln!(out, "{}", tree_line(&t))?;
            }
            Ok(())
        }
        Command::Bench { scenario, from, to, method, time_limit, csv } => {
            bench(scenario, from, to, method, time_limit, csv.as_deref(), &mut out)
        }
    };
    out.flush()?;
    result
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Limit) => {
            eprintln!("stopped at the enumeration limit");
            ExitCode::from(EXIT_LIMIT)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
