use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use storyscope::analytics::EmbeddingTable;
use storyscope::entities::parse_gold;
use storyscope::incremental::Orchestrator;
use storyscope::registry::Registry;
use storyscope_service::project::{Project, Settings};
use storyscope_service::report::{links_csv, Report};
use storyscope_service::store::Store;
use storyscope_service::{api, ENV_DATA_DIR, ENV_EMBEDDINGS, ENV_PORT};

#[derive(Parser)]
#[command(name = "storyscope", version, about = "Character analytics for fiction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Serve the HTTP API.
    Serve {
        #[arg(long, env = ENV_PORT, default_value_t = 8080)]
        port: u16,
        #[arg(long, env = ENV_DATA_DIR, default_value = "storyscope-data")]
        data_dir: PathBuf,
        #[arg(long, env = ENV_EMBEDDINGS)]
        embeddings: Option<PathBuf>,
    },
    /// Analyze a text file and write the full JSON report.
    Analyze {
        file: PathBuf,
        /// Registry JSON to start from; updated characters are not written back.
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Gold annotations (JSONL) replacing detection and resolution.
        #[arg(long)]
        gold: Option<PathBuf>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, env = ENV_EMBEDDINGS)]
        embeddings: Option<PathBuf>,
    },
    /// Report on a saved project.
    Report {
        #[arg(long)]
        project: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, env = ENV_EMBEDDINGS)]
        embeddings: Option<PathBuf>,
    },
    /// Embedding file utilities.
    Embeddings {
        #[command(subcommand)]
        command: EmbeddingsCommand,
    },
}

#[derive(Subcommand)]
enum EmbeddingsCommand {
    /// Validate a word vector file.
    Check { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Input that parsed but failed validation; exits with status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Invalid(String);

fn invalid(e: impl std::fmt::Display) -> anyhow::Error {
    Invalid(e.to_string()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("storyscope: {e:#}");
            if e.downcast_ref::<Invalid>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Serve {
            port,
            data_dir,
            embeddings,
        } => serve(port, &data_dir, embeddings.as_deref()),
        Command::Analyze {
            file,
            registry,
            gold,
            report,
            embeddings,
        } => {
            let document = read(&file)?;
            let mut registry = match registry {
                Some(path) => serde_json::from_str::<Registry>(&read(&path)?)
                    .map_err(|e| invalid(format!("{}: {e}", path.display())))?,
                None => Registry::default(),
            };
            let mut orchestrator = Orchestrator::default();
            let snapshot = match gold {
                Some(path) => {
                    let records = parse_gold(&read(&path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
                    orchestrator
                        .analyze_gold(&document, &records, &mut registry)
                        .map_err(|e| invalid(format!("{}: {e}", path.display())))?
                        .snapshot
                }
                None => orchestrator.analyze(&document, None, &mut registry).snapshot,
            };
            let table = load_embeddings(embeddings.as_deref())?;
            let built = Report::build(&snapshot, &registry, &Settings::default(), table.as_ref())?;
            emit(report.as_deref(), &built.to_json())
        }
        Command::Report {
            project,
            format,
            output,
            embeddings,
        } => {
            let mut project = Project::load(&project).map_err(|e| match e {
                storyscope_service::project::ProjectError::Io { .. } => anyhow::Error::from(e),
                other => invalid(other),
            })?;
            let snapshot = Orchestrator::default()
                .analyze(&project.document, None, &mut project.registry)
                .snapshot;
            let text = match format {
                Format::Json => {
                    let table = load_embeddings(embeddings.as_deref())?;
                    Report::build(&snapshot, &project.registry, &project.settings, table.as_ref())?.to_json()
                }
                Format::Csv => links_csv(&snapshot, &project.registry)?,
            };
            emit(output.as_deref(), &text)
        }
        Command::Embeddings {
            command: EmbeddingsCommand::Check { file },
        } => {
            let table = EmbeddingTable::load(&file).map_err(invalid)?;
            println!("{}: {} vectors of dimension {}", file.display(), table.len(), table.dimension());
            Ok(())
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_embeddings(path: Option<&Path>) -> anyhow::Result<Option<EmbeddingTable>> {
    path.map(|p| EmbeddingTable::load(p).map_err(invalid)).transpose()
}

fn serve(port: u16, data_dir: &Path, embeddings: Option<&Path>) -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .init();
    let table = load_embeddings(embeddings)?;
    let (store, failures) = Store::open(data_dir, table)?;
    for (path, e) in failures {
        tracing::warn!("skipping {}: {e}", path.display());
    }
    tracing::info!("{} projects loaded from {}", store.ids().len(), data_dir.display());
    let app = api::router(Arc::new(store));
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
        tracing::info!("listening on {}", listener.local_addr()?);
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok(())
    })
}
