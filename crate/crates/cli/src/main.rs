use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use solitaire_core::io::{parse_trace, Document};
use solitaire_core::{CoreError, Elem};

mod ops;
mod serve;

#[derive(Parser)]
#[command(name = "solitaire", version, about = "Solitaire and filling on groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Io {
    /// Input document (pattern, shape, group, rule, order ...).
    #[arg(short, long)]
    input: PathBuf,
    /// Write the result here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Filling closure and its trace.
    Fill {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Legal moves from the pattern.
    Moves {
        #[command(flatten)]
        io: Io,
    },
    /// Replay a trace, reporting the endpoint and whether every move was legal.
    Replay {
        #[command(flatten)]
        io: Io,
        #[arg(short, long)]
        trace: PathBuf,
    },
    /// Rank and excess by brute force.
    Excess {
        #[command(flatten)]
        io: Io,
    },
    #[command(subcommand)]
    /// Triangle normal forms and canonical paths.
    Triangle(TriCmd),
    #[command(subcommand)]
    /// Square normal forms and canonical paths.
    Square(SqCmd),
    #[command(subcommand)]
    /// Corner contours of a filling-closed pattern.
    Contour(ContourCmd),
    #[command(subcommand)]
    /// Orbit graphs by breadth-first search.
    Orbit(OrbitCmd),
    #[command(subcommand)]
    /// Independence, spanning and base changes for a TEP rule.
    Tep(TepCmd),
    /// Newline-delimited JSON requests on stdin, one response per line.
    Serve,
}

#[derive(Subcommand)]
enum TriCmd {
    /// Normal form P_{n,k} per component.
    Identify {
        #[command(flatten)]
        io: Io,
    },
    /// Legal moves from the pattern to its normal form.
    Path {
        #[command(flatten)]
        io: Io,
    },
    /// Whether the pattern lies in the orbit of the line.
    MemberLine {
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Subcommand)]
enum SqCmd {
    /// Normal form L_{a,b,k} per component.
    Identify {
        #[command(flatten)]
        io: Io,
    },
    /// Legal moves from the pattern to its normal form.
    Path {
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Subcommand)]
enum ContourCmd {
    /// The contour at one corner.
    Compute {
        #[command(flatten)]
        io: Io,
        /// Corner of S, as x,y.
        #[arg(long, value_parser = parse_xy)]
        corner: Elem,
    },
    /// Moves turning the contour at --from into the contour at --to.
    Swap {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_parser = parse_xy)]
        from: Elem,
        #[arg(long, value_parser = parse_xy)]
        to: Elem,
        /// Use the parallel-edge exchange instead of the sweep.
        #[arg(long)]
        exchange: bool,
    },
}

#[derive(Subcommand)]
enum OrbitCmd {
    /// Explore the orbit of the pattern.
    Bfs {
        #[command(flatten)]
        io: Io,
        #[arg(long = "max", default_value_t = 1 << 20)]
        max_vertices: usize,
        #[arg(long)]
        radius: Option<i64>,
        /// Emit the graph as DOT.
        #[arg(long, conflicts_with = "adjacency")]
        dot: bool,
        /// Include vertices and edges in the JSON.
        #[arg(long)]
        adjacency: bool,
    },
    /// Exact diameter of a fully explored orbit.
    Diameter {
        #[command(flatten)]
        io: Io,
        #[arg(long = "max", default_value_t = 1 << 20)]
        max_vertices: usize,
    },
    /// Orbit size of the length-n line on the free triangle.
    CountFreeLine {
        #[arg(short)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum TepCmd {
    /// Whether the pattern is independent inside the domain.
    CheckIndep {
        #[command(flatten)]
        io: Io,
    },
    /// Cells determined by the pattern inside the domain.
    Span {
        #[command(flatten)]
        io: Io,
    },
    /// Whether the pattern is an independent filling basis of the domain.
    Basis {
        #[command(flatten)]
        io: Io,
    },
    /// Compile a trace into simple permutations of cell values.
    CompilePerms {
        #[command(flatten)]
        io: Io,
    },
}

fn parse_xy(s: &str) -> Result<Elem, String> {
    let (a, b) = s.split_once(',').ok_or("expected x,y")?;
    let x = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let y = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
    Ok(Elem::xy(x, y))
}

pub enum Fail {
    Usage(String),
    Domain(String),
}

impl From<CoreError> for Fail {
    fn from(e: CoreError) -> Fail {
        match e {
            CoreError::Parse(_) => Fail::Usage(e.to_string()),
            _ => Fail::Domain(e.to_string()),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Fail> {
    if path.as_os_str() == "-" {
        return std::io::read_to_string(std::io::stdin()).map_err(|e| Fail::Usage(format!("stdin: {e}")));
    }
    std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn load(io: &Io) -> Result<Document, Fail> {
    Document::parse(&read(&io.input)?).map_err(|e| Fail::Usage(format!("{}: {e}", io.input.display())))
}

fn emit(out: &Option<PathBuf>, text: String) -> Result<(), Fail> {
    match out {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| Fail::Usage(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn json_out(io: &Io, v: Value) -> Result<(), Fail> {
    emit(&io.output, v.to_string())
}

fn dispatch(cmd: Cmd) -> Result<(), Fail> {
    match cmd {
        Cmd::Fill { io, cap } => json_out(&io, ops::fill(&load(&io)?, cap)?),
        Cmd::Moves { io } => json_out(&io, ops::moves(&load(&io)?)?),
        Cmd::Replay { io, trace } => {
            let doc = load(&io)?;
            let t = parse_trace(&read(&trace)?).map_err(|e| Fail::Usage(format!("{}: {e}", trace.display())))?;
            let v = ops::replay(&doc, &t)?;
            let legal = v["legal"] == json!(true);
            json_out(&io, v)?;
            if legal {
                Ok(())
            } else {
                Err(Fail::Domain("trace contains an illegal move".into()))
            }
        }
        Cmd::Excess { io } => json_out(&io, ops::excess(&load(&io)?)?),
        Cmd::Triangle(c) => match c {
            TriCmd::Identify { io } => json_out(&io, ops::identify(&load(&io)?, "triangle")?),
            TriCmd::Path { io } => json_out(&io, ops::path(&load(&io)?, "triangle")?),
            TriCmd::MemberLine { io } => json_out(&io, ops::member_line(&load(&io)?)?),
        },
        Cmd::Square(c) => match c {
            SqCmd::Identify { io } => json_out(&io, ops::identify(&load(&io)?, "square")?),
            SqCmd::Path { io } => json_out(&io, ops::path(&load(&io)?, "square")?),
        },
        Cmd::Contour(c) => match c {
            ContourCmd::Compute { io, corner } => json_out(&io, ops::contour(&load(&io)?, &corner)?),
            ContourCmd::Swap { io, from, to, exchange } => json_out(&io, ops::swap(&load(&io)?, &from, &to, exchange)?),
        },
        Cmd::Orbit(c) => match c {
            OrbitCmd::Bfs { io, max_vertices, radius, dot, adjacency } => {
                let g = ops::bfs(&load(&io)?, max_vertices, radius)?;
                if dot {
                    emit(&io.output, solitaire_core::orbit::to_dot(&g).trim_end().to_string())
                } else {
                    json_out(&io, ops::graph_json(&g, adjacency))
                }
            }
            OrbitCmd::Diameter { io, max_vertices } => json_out(&io, ops::diameter(&load(&io)?, max_vertices)?),
            OrbitCmd::CountFreeLine { n } => {
                if n == 0 {
                    return Err(Fail::Usage("n must be positive".into()));
                }
                emit(&None, json!({"n": n, "count": solitaire_core::free_line_orbit_count(n).to_string()}).to_string())
            }
        },
        Cmd::Tep(c) => match c {
            TepCmd::CheckIndep { io } => json_out(&io, ops::tep_indep(&load(&io)?)?),
            TepCmd::Span { io } => json_out(&io, ops::tep_span(&load(&io)?)?),
            TepCmd::Basis { io } => json_out(&io, ops::tep_basis(&load(&io)?)?),
            TepCmd::CompilePerms { io } => json_out(&io, ops::tep_compile(&load(&io)?)?),
        },
        Cmd::Serve => {
            let stdin = std::io::stdin();
            let mut out = std::io::stdout().lock();
            for line in stdin.lock().lines() {
                let line = line.map_err(|e| Fail::Usage(e.to_string()))?;
                if line.trim().is_empty() {
                    continue;
                }
                writeln!(out, "{}", serve::handle(&line)).and_then(|_| out.flush()).map_err(|e| Fail::Usage(e.to_string()))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
    }
}
