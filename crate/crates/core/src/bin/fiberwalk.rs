use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use fiberwalk::experiments::{expectations_met, run_enveloped};
use fiberwalk::{Error, Result};

#[derive(Parser)]
#[command(
    name = "fiberwalk",
    version,
    about = "Fiber connectivity experiments for binomial graphical models"
)]
struct Cli {
    /// Worker threads (defaults to all cores; use 1 for byte-identical runs).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Node cap for breadth-first searches.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Also write the report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,
    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Model {
    /// Graph JSON file or preset name.
    #[arg(long)]
    graph: Option<String>,
    #[arg(long, conflicts_with = "graph")]
    preset: Option<String>,
}

#[derive(Args)]
struct MoveSet {
    /// JSON list of moves.
    #[arg(long, group = "moveset")]
    moves: Option<PathBuf>,
    /// Quadrics from the global Markov statements (the default).
    #[arg(long, group = "moveset")]
    global_markov: bool,
    /// The closed-form Markov basis of the graph's family.
    #[arg(long, group = "moveset")]
    family_basis: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Connected component of a table.
    Component {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        start: Option<PathBuf>,
        #[command(flatten)]
        moves: MoveSet,
        /// Keep members even above 10000.
        #[arg(long)]
        dump: bool,
    },
    /// Whether two tables are joined, with a path when they are.
    Connected {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        u: Option<PathBuf>,
        #[arg(long)]
        v: Option<PathBuf>,
        #[command(flatten)]
        moves: MoveSet,
    },
    /// Check that a move set connects every fiber up to a degree.
    VerifyBasis {
        #[command(flatten)]
        model: Model,
        #[command(flatten)]
        moves: MoveSet,
        #[arg(long)]
        max_degree: u32,
    },
    /// Facets of the marginal cone.
    Facets {
        #[command(flatten)]
        model: Model,
    },
    /// Margin property of the family's minimal primes.
    CheckMargins {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        family: Option<String>,
        /// positive or interior
        #[arg(long)]
        mode: String,
    },
    /// Two tables with equal margins separated by the quadrics.
    WitnessDisconnect {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        prime: String,
        #[arg(long)]
        c: Option<u32>,
        /// Move file overriding the automatic choice.
        #[arg(long = "move")]
        mv: Option<PathBuf>,
    },
    /// Closed-form families.
    Family {
        #[command(subcommand)]
        action: FamilyCmd,
    },
    /// Latin square constructions.
    Latin {
        #[command(subcommand)]
        action: LatinCmd,
    },
    /// The pinned K_3,3 quartic.
    K33 {
        /// Also run the slow search for such quartics.
        #[arg(long)]
        search: bool,
        /// k33 or g154
        #[arg(long, requires = "search")]
        search_graph: Option<String>,
        #[arg(long, requires = "search")]
        pair_budget: Option<usize>,
    },
    /// Reproduce the property table for the named models.
    Table1,
}

#[derive(Subcommand)]
enum FamilyCmd {
    CycleBasis {
        n: usize,
        #[arg(long)]
        count_only: bool,
        /// Accept n = 3.
        #[arg(long)]
        allow_triangle: bool,
    },
    K2nBasis {
        n: usize,
        /// d_3 ... d_N (binary when omitted).
        levels: Vec<u32>,
        #[arg(long)]
        count_only: bool,
    },
    Primes {
        /// cycle or k2n
        #[arg(long)]
        graph: String,
        n: usize,
        levels: Vec<u32>,
        #[arg(long)]
        count_only: bool,
    },
}

#[derive(Subcommand)]
enum LatinCmd {
    Mols {
        q: u32,
    },
    Disconnect {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        order: Option<u32>,
    },
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn put(m: &mut Map<String, Value>, key: &str, v: impl Into<Value>) {
    m.insert(key.to_string(), v.into());
}

fn put_file(m: &mut Map<String, Value>, key: &str, path: &Option<PathBuf>) -> Result<()> {
    if let Some(p) = path {
        put(m, key, read_json(p)?);
    }
    Ok(())
}

impl Model {
    fn fill(&self, m: &mut Map<String, Value>) -> Result<()> {
        if let Some(p) = &self.preset {
            put(m, "preset", p.as_str());
        } else if let Some(g) = &self.graph {
            if g.ends_with(".json") || Path::new(g).is_file() {
                put(m, "graph", read_json(Path::new(g))?);
            } else {
                put(m, "preset", g.as_str());
            }
        }
        Ok(())
    }
}

impl MoveSet {
    fn fill(&self, m: &mut Map<String, Value>) -> Result<()> {
        if let Some(p) = &self.moves {
            put(m, "moves", read_json(p)?);
        } else if self.family_basis {
            put(m, "moves", "family");
        } else if self.global_markov {
            put(m, "moves", "global-markov");
        }
        Ok(())
    }
}

fn family_params(action: &FamilyCmd) -> Value {
    match action {
        FamilyCmd::CycleBasis {
            n,
            count_only,
            allow_triangle,
        } => {
            json!({"action": "cycle-basis", "n": n, "count_only": count_only, "allow_triangle": allow_triangle})
        }
        FamilyCmd::K2nBasis {
            n,
            levels,
            count_only,
        } => {
            json!({"action": "k2n-basis", "n": n, "levels": levels, "count_only": count_only})
        }
        FamilyCmd::Primes {
            graph,
            n,
            levels,
            count_only,
        } => {
            json!({"action": "primes", "graph": graph, "n": n, "levels": levels, "count_only": count_only})
        }
    }
}

fn request(cli: &Cli) -> Result<(&'static str, Value)> {
    let mut m = Map::new();
    let name = match &cli.cmd {
        Cmd::Component {
            model,
            start,
            moves,
            dump,
        } => {
            model.fill(&mut m)?;
            put_file(&mut m, "start", start)?;
            moves.fill(&mut m)?;
            if *dump {
                put(&mut m, "dump", true);
            }
            "component"
        }
        Cmd::Connected { model, u, v, moves } => {
            model.fill(&mut m)?;
            put_file(&mut m, "u", u)?;
            put_file(&mut m, "v", v)?;
            moves.fill(&mut m)?;
            "connected"
        }
        Cmd::VerifyBasis {
            model,
            moves,
            max_degree,
        } => {
            model.fill(&mut m)?;
            moves.fill(&mut m)?;
            put(&mut m, "max_degree", *max_degree);
            "verify-basis"
        }
        Cmd::Facets { model } => {
            model.fill(&mut m)?;
            "facets"
        }
        Cmd::CheckMargins {
            model,
            family,
            mode,
        } => {
            model.fill(&mut m)?;
            if let Some(f) = family {
                put(&mut m, "family", f.as_str());
            }
            let mode = match mode.as_str() {
                "positive" | "positive-margins" => "positive-margins",
                "interior" | "interior-point" => "interior-point",
                other => {
                    return Err(Error::Usage(format!(
                        "mode must be positive or interior, got {other:?}"
                    )))
                }
            };
            put(&mut m, "mode", mode);
            "check-margins"
        }
        Cmd::WitnessDisconnect {
            model,
            prime,
            c,
            mv,
        } => {
            model.fill(&mut m)?;
            put(&mut m, "prime", prime.as_str());
            if let Some(c) = c {
                put(&mut m, "c", *c);
            }
            put_file(&mut m, "move", mv)?;
            "witness-disconnect"
        }
        Cmd::Family { action } => return Ok(("family", family_params(action))),
        Cmd::Latin { action } => {
            match action {
                LatinCmd::Mols { q } => {
                    put(&mut m, "action", "mols");
                    put(&mut m, "q", *q);
                }
                LatinCmd::Disconnect { model, order } => {
                    put(&mut m, "action", "disconnect");
                    model.fill(&mut m)?;
                    if let Some(o) = order {
                        put(&mut m, "order", *o);
                    }
                }
            }
            "latin"
        }
        Cmd::K33 {
            search,
            search_graph,
            pair_budget,
        } => {
            if *search {
                put(&mut m, "search", true);
            }
            if let Some(g) = search_graph {
                put(&mut m, "search_graph", g.as_str());
            }
            if let Some(b) = pair_budget {
                put(&mut m, "pair_budget", *b);
            }
            "k33"
        }
        Cmd::Table1 => "table1",
    };
    if let Some(cap) = cli.cap {
        if matches!(
            name,
            "component" | "connected" | "witness-disconnect" | "k33"
        ) {
            put(&mut m, "cap", cap);
        }
    }
    Ok((name, Value::Object(m)))
}

fn run(cli: &Cli) -> Result<(Value, bool)> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
    }
    let (name, params) = request(cli)?;
    let env = run_enveloped(name, &params, cli.timing)?;
    let ok = expectations_met(name, &env.result);
    Ok((serde_json::to_value(env)?, ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, code) = match run(&cli) {
        Ok((v, ok)) => (v, if ok { 0 } else { 1 }),
        Err(e) => (
            json!({"error": {"kind": e.kind(), "message": e.to_string()}}),
            e.exit_code(),
        ),
    };
    let text = serde_json::to_string_pretty(&report).expect("JSON value");
    // A closed pipe is not an error worth reporting.
    let _ = writeln!(std::io::stdout(), "{text}");
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("fiberwalk: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code as u8)
}
