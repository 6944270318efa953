use std::path::PathBuf;
use std::process::ExitCode;

use afweak_core::closure::{close, interior, is_biclosed, WindowSet};
use afweak_core::fan::{classify, face_poset, path_component_poset};
use afweak_core::finite::join_finite;
use afweak_core::json::Json;
use afweak_core::lattice::{join, meet, try_join, TryJoinOutcome};
use afweak_core::orders::order_from_triple;
use afweak_core::{AffineType, BiclosedTriple, Error, FanFace, Family, PeriodicOrder};
use clap::{Args, Parser, Subcommand};

mod input;
mod verify;

#[derive(Parser)]
#[command(name = "afweak", version, about = "Biclosed sets of positive roots in the classical affine root systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct TypeArgs {
    /// Family: A, B, C or D.
    #[arg(long)]
    family: String,
    /// Rank parameter (the period M for type A).
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct OptTypeArgs {
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct Io {
    /// Input JSON file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closure of a window set.
    Close(Io),
    /// Interior (largest coclosed subset) of a window set.
    Interior(Io),
    /// Check a window set for biclosedness; prints a witness on failure.
    Check(Io),
    /// Classify a biclosed window set as a triple.
    Classify(Io),
    /// Build a triple from a face, Φ′ blocks and component elements, or N(w) from a word.
    Build {
        #[command(flatten)]
        ty: TypeArgs,
        /// Face blocks, e.g. "{1,3},{2,4}".
        #[arg(long)]
        face: Option<String>,
        /// Blocks whose components are in Φ′, e.g. "{2,4}".
        #[arg(long)]
        phi: Option<String>,
        /// Component elements as ID=window or ID=word, e.g. "0=s1 s0".
        #[arg(long)]
        w: Vec<String>,
        /// Build N(w) for a word in the simple generators, e.g. "s0 s1".
        #[arg(long, conflicts_with_all = ["face", "phi", "w"])]
        word: Option<String>,
        /// Output the window set of this height instead of the triple.
        #[arg(long)]
        height: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A total order with the given inversion set (or normalise an order).
    Order {
        #[command(flatten)]
        io: Io,
        /// Print the order on [-width, width] instead of JSON.
        #[arg(long)]
        render: bool,
        #[arg(long, default_value_t = 10)]
        width: i64,
    },
    /// Join (types A and C).
    Join {
        #[command(flatten)]
        ty: OptTypeArgs,
        #[arg(long = "in", num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Meet (types A and C).
    Meet {
        #[command(flatten)]
        ty: OptTypeArgs,
        #[arg(long = "in", num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Experimental join by windowed closure of the union (any type).
    TryJoin {
        #[command(flatten)]
        ty: OptTypeArgs,
        #[arg(long)]
        height: u32,
        #[arg(long = "in", num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weak order join in a finite Weyl group of rank at most 4.
    JoinFinite {
        #[arg(long)]
        family: String,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        u: String,
        #[arg(long)]
        w: String,
    },
    /// List the faces of the finite Coxeter fan.
    Faces {
        #[command(flatten)]
        ty: TypeArgs,
        /// Write the face poset as a DOT digraph.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Hasse diagram of B(F, Φ′, w) for total length ≤ bound (the weak order when no face is given).
    Hasse {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        face: Option<String>,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        /// Write DOT here instead of stdout.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run a verification suite and print a PASS/FAIL table.
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
    /// Already reported; exit 1.
    Reported,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn emit(text: &str, out: &Option<PathBuf>) -> Outcome {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n"))
            .map_err(|e| Failure::Domain(Error::Parse(format!("{}: {e}", p.display())))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn window_set(io: &Io) -> std::result::Result<WindowSet, Failure> {
    Ok(WindowSet::from_json(&input::read_json(&io.input)?)?)
}

fn triples(ty: &OptTypeArgs, paths: &[PathBuf]) -> std::result::Result<Vec<BiclosedTriple>, Failure> {
    let xs = paths
        .iter()
        .map(|p| input::triple(&input::read_json(p)?))
        .collect::<afweak_core::Result<Vec<_>>>()?;
    let want = match (&ty.family, ty.n) {
        (Some(f), Some(n)) => Some(input::affine_type(f, n)?),
        (None, None) => None,
        _ => return Err(Failure::Usage("--family and --n go together".into())),
    };
    if let Some(want) = want {
        if let Some(x) = xs.iter().find(|x| x.affine_type() != want) {
            return Err(Error::TypeMismatch(want.to_string(), x.affine_type().to_string()).into());
        }
    }
    Ok(xs)
}

fn type_of(t: &TypeArgs) -> std::result::Result<AffineType, Failure> {
    Ok(input::affine_type(&t.family, t.n)?)
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Close(io) => emit(&close(&window_set(&io)?).to_json_string(), &io.out),
        Cmd::Interior(io) => emit(&interior(&window_set(&io)?).to_json_string(), &io.out),
        Cmd::Check(io) => {
            let cert = is_biclosed(&window_set(&io)?);
            if cert.is_pass() {
                emit("biclosed", &io.out)
            } else {
                Err(Error::NotBiclosed(Some(cert)).into())
            }
        }
        Cmd::Classify(io) => emit(&classify(&window_set(&io)?)?.to_json_string(), &io.out),
        Cmd::Build { ty, face, phi, w, word, height, out } => {
            let ty = type_of(&ty)?;
            let t = match (word, face) {
                (Some(word), _) => BiclosedTriple::finite(&input::word(ty, &word)?),
                (None, Some(face)) => input::triple_from_flags(ty, &face, phi.as_deref(), &w)?,
                (None, None) => return Err(Failure::Usage("build needs --face or --word".into())),
            };
            match height {
                Some(h) => emit(&t.window(h).to_json_string(), &out),
                None => emit(&t.to_json_string(), &out),
            }
        }
        Cmd::Order { io, render, width } => {
            let v = input::read_json(&io.input)?;
            let order = if v.get("blocks").is_some() {
                PeriodicOrder::from_json(&v)?.normalize()
            } else {
                order_from_triple(&input::triple(&v)?)?
            };
            if render {
                let xs: Vec<String> = order.render(-width, width).iter().map(|x| x.to_string()).collect();
                emit(&xs.join(" ≺ "), &io.out)
            } else {
                emit(&order.to_json_string(), &io.out)
            }
        }
        Cmd::Join { ty, inputs, out } => emit(&join(&triples(&ty, &inputs)?)?.to_json_string(), &out),
        Cmd::Meet { ty, inputs, out } => emit(&meet(&triples(&ty, &inputs)?)?.to_json_string(), &out),
        Cmd::TryJoin { ty, height, inputs, out } => match try_join(&triples(&ty, &inputs)?, height)? {
            TryJoinOutcome::Join(t) => emit(&t.to_json_string(), &out),
            TryJoinOutcome::Witness(c) => Err(Error::NotBiclosed(Some(c)).into()),
        },
        Cmd::JoinFinite { family, rank, u, w } => emit(&join_finite(Family::parse(&family)?, rank, &u, &w)?, &None),
        Cmd::Faces { ty, dot } => {
            let (faces, edges) = face_poset(type_of(&ty)?)?;
            for f in &faces {
                println!("{f}");
            }
            if let Some(path) = dot {
                let mut s = String::from("digraph faces {\n");
                for (k, f) in faces.iter().enumerate() {
                    s.push_str(&format!("  n{k} [label=\"{f}\"];\n"));
                }
                for (a, b) in edges {
                    s.push_str(&format!("  n{a} -> n{b};\n"));
                }
                s.push('}');
                emit(&s, &Some(path))?;
            }
            Ok(())
        }
        Cmd::Hasse { ty, face, phi, bound, dot } => {
            let ty = type_of(&ty)?;
            let t = match face {
                Some(face) => input::triple_from_flags(ty, &face, phi.as_deref(), &[])?,
                None => BiclosedTriple::with_identity(FanFace::origin(ty), Default::default())?,
            };
            let poset = path_component_poset(t.face(), t.phi_prime(), bound)?;
            emit(poset.to_dot().trim_end(), &dot)
        }
        Cmd::Verify { suite } => {
            if verify::run(suite) {
                Ok(())
            } else {
                Err(Failure::Reported)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Reported) => ExitCode::from(1),
    }
}
