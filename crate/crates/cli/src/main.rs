use std::io::Write;
use std::net::{Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use mlw::commands::{self, Output, EXIT_ERROR};
use mlw::service::{router, AppState};

#[derive(Parser)]
#[command(name = "mlw", version, about = "Matching logic workbench")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a pattern is well-formed.
    CheckWf {
        pattern: String,
        /// Built-in theory name or path to a `.mlth` file.
        #[arg(long)]
        theory: Option<String>,
    },
    /// Evaluate a pattern in a finite model.
    Eval {
        pattern: String,
        #[arg(long)]
        model: PathBuf,
        /// e.g. `x=one,X={one,two}`
        #[arg(long)]
        valuation: Option<String>,
        #[arg(long)]
        theory: Option<String>,
    },
    /// Check that a pattern (or every axiom) holds in a model.
    ModelCheck {
        #[arg(required_unless_present = "axioms", conflicts_with = "axioms")]
        pattern: Option<String>,
        #[arg(long)]
        axioms: bool,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        theory: Option<String>,
    },
    /// Check a goal in every model of a directory that satisfies the theory.
    Entails {
        #[arg(long)]
        models: PathBuf,
        #[arg(long)]
        theory: Option<String>,
        #[arg(long)]
        goal: String,
    },
    /// Check a proof object.
    CheckProof {
        file: PathBuf,
        #[arg(long)]
        theory: Option<String>,
    },
    /// Run a tactic script and check the resulting proof.
    Prove {
        script: PathBuf,
        #[arg(long)]
        theory: Option<String>,
        #[arg(long)]
        goal: Option<String>,
        /// Write the proof object here.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Write the proof states after each step here, as JSON.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Serve proof sessions over HTTP on the loopback interface.
    Serve {
        #[arg(long, default_value_t = 8712)]
        port: u16,
        /// Persist sessions here and restore them on start.
        #[arg(long)]
        snapshot_dir: Option<PathBuf>,
        /// Extra `.mlth` files to offer.
        #[arg(long)]
        theories: Option<PathBuf>,
    },
}

fn emit(out: &Output, json: bool) -> ExitCode {
    if json {
        println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
    } else if out.code == EXIT_ERROR {
        eprintln!("{}", out.text);
    } else {
        println!("{}", out.text);
    }
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<(), Output> {
    std::fs::write(path, bytes).map_err(|e| Output::error("io", format!("{}: {e}", path.display())))
}

fn serve(port: u16, snapshot_dir: Option<PathBuf>, theories: Option<PathBuf>) -> Output {
    let mut lib = ml_core::theories::TheoryLibrary::builtin();
    if let Some(dir) = theories {
        if let Err(e) = lib.add_dir(&dir) {
            return Output::error("theory", e.to_string());
        }
    }
    let app = Arc::new(AppState::new(lib, snapshot_dir));
    let restored = app.restore();
    let rt = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => return Output::error("io", e.to_string()),
    };
    rt.block_on(async move {
        let addr = SocketAddr::from((Ipv4Addr::LOCALHOST, port));
        let listener = match tokio::net::TcpListener::bind(addr).await {
            Ok(l) => l,
            Err(e) => return Output::error("io", format!("{addr}: {e}")),
        };
        eprintln!("listening on http://{}, {restored} session(s) restored", listener.local_addr().unwrap());
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        match axum::serve(listener, router(app)).with_graceful_shutdown(shutdown).await {
            Ok(()) => Output {
                code: 0,
                text: String::new(),
                json: serde_json::Value::Null,
            },
            Err(e) => Output::error("io", e.to_string()),
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::CheckWf { pattern, theory } => commands::check_wf(&pattern, theory.as_deref()),
        Command::Eval {
            pattern,
            model,
            valuation,
            theory,
        } => commands::eval(&pattern, &model, valuation.as_deref(), theory.as_deref()),
        Command::ModelCheck {
            pattern,
            axioms,
            model,
            theory,
        } => commands::model_check(pattern.as_deref(), axioms, &model, theory.as_deref()),
        Command::Entails { models, theory, goal } => commands::entails(&models, theory.as_deref(), &goal),
        Command::CheckProof { file, theory } => commands::check_proof(&file, theory.as_deref()),
        Command::Prove {
            script,
            theory,
            goal,
            export,
            transcript,
        } => {
            let p = commands::prove(&script, theory.as_deref(), goal.as_deref());
            let mut out = p.output;
            if out.code == 0 {
                let written = export
                    .map(|path| write_file(&path, p.proof.as_deref().unwrap_or_default()))
                    .transpose()
                    .and_then(|_| {
                        transcript
                            .map(|path| {
                                let bytes = serde_json::to_vec_pretty(&p.transcript).expect("json");
                                write_file(&path, &bytes)
                            })
                            .transpose()
                    });
                if let Err(e) = written {
                    out = e;
                }
            }
            out
        }
        Command::Serve {
            port,
            snapshot_dir,
            theories,
        } => serve(port, snapshot_dir, theories),
    };
    emit(&out, cli.json)
}
