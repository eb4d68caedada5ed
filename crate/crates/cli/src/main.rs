use std::io::{self, IsTerminal};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Parser, Subcommand, ValueEnum};
use cubical_cli::{parse, repl, Emit, Session, SessionError};

#[derive(Parser)]
#[command(
    name = "cubical",
    version,
    about = "Type checker and normalizer for cubical type theory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every declaration in a file.
    Check { file: PathBuf },
    /// Print the normal form of a definition.
    Normalize {
        file: PathBuf,
        name: String,
        #[arg(long, value_enum, default_value_t = Format::Surface)]
        emit: Format,
    },
    /// Decide judgmental equality of two definitions (exit 0 if equal, 1 if not).
    Eq {
        file: PathBuf,
        name1: String,
        name2: String,
    },
    /// Cofibration queries.
    Cof {
        #[command(subcommand)]
        query: CofQuery,
    },
    /// Interactive session.
    Repl,
}

#[derive(Subcommand)]
enum CofQuery {
    /// Decide whether HYP entails GOAL (exit 0 if so, 1 if not).
    Entails { hyp: String, goal: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Nf,
    Surface,
}

enum Outcome {
    Yes,
    No,
}

fn load(file: &PathBuf) -> anyhow::Result<Result<Session, SessionError>> {
    let src =
        std::fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    let mut session = Session::new();
    Ok(session.load(&src).map(|()| session))
}

fn run(cli: Cli) -> anyhow::Result<Result<Outcome, SessionError>> {
    Ok(match cli.command {
        Command::Check { file } => load(&file)?.map(|_| {
            println!("ok");
            Outcome::Yes
        }),
        Command::Normalize { file, name, emit } => {
            let emit = match emit {
                Format::Nf => Emit::Nf,
                Format::Surface => Emit::Surface,
            };
            load(&file)?.and_then(|s| {
                let rows = s.normalize(&name, emit)?;
                let single = rows.len() == 1;
                for (branch, nf) in rows {
                    if single {
                        println!("{nf}");
                    } else {
                        println!("[{branch}] {nf}");
                    }
                }
                Ok(Outcome::Yes)
            })
        }
        Command::Eq { file, name1, name2 } => load(&file)?.and_then(|s| {
            let equal = s.equal(&name1, &name2)?;
            println!("{}", if equal { "EQUAL" } else { "DISTINCT" });
            Ok(if equal { Outcome::Yes } else { Outcome::No })
        }),
        Command::Cof {
            query: CofQuery::Entails { hyp, goal },
        } => (|| {
            let hyp = parse::parse_cofib(&hyp)?;
            let goal = parse::parse_cofib(&goal)?;
            let yes = Session::new().entails(&hyp, &goal)?;
            println!("{}", if yes { "ENTAILED" } else { "NOT ENTAILED" });
            Ok(if yes { Outcome::Yes } else { Outcome::No })
        })(),
        Command::Repl => {
            let stdin = io::stdin();
            let prompt = stdin.is_terminal();
            repl::run(stdin.lock(), io::stdout(), prompt)?;
            Ok(Outcome::Yes)
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Ok(Outcome::Yes)) => ExitCode::SUCCESS,
        Ok(Ok(Outcome::No)) => ExitCode::from(1),
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
