use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use campus_recruit::config::ServiceConfig;
use campus_recruit::store::{Fixture, MigrationOutcome, Store};
use campus_recruit::{api, Campus};

#[derive(Parser)]
#[command(version, about = "Campus recruitment service")]
struct Cli {
    /// TOML config file; RECRUIT_* environment variables override it.
    #[arg(long, short, env = "RECRUIT_CONFIG")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP server, migrating the store first.
    Serve {
        /// Load the bundled demo fixture before serving.
        #[arg(long)]
        seed: bool,
    },
    /// Create or upgrade the store file.
    Migrate,
    /// Upsert a JSON fixture into the store. Safe to repeat.
    Seed {
        /// Defaults to the bundled demo fixture.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    let config = ServiceConfig::load(cli.config.as_deref(), std::env::vars()).map_err(|e| e.to_string())?;
    match cli.command {
        Command::Migrate => {
            let path = store_path(&config)?;
            let outcome = Store::migrate(&path).map_err(|e| e.to_string())?;
            match outcome {
                MigrationOutcome::Created => println!("created {}", path.display()),
                MigrationOutcome::Upgraded { from } => println!("upgraded {} from version {from}", path.display()),
                MigrationOutcome::UpToDate => println!("{} is up to date", path.display()),
            }
            Ok(())
        }
        Command::Seed { fixture } => {
            let path = store_path(&config)?;
            Store::migrate(&path).map_err(|e| e.to_string())?;
            let fixture = match fixture {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
                    Fixture::from_json(&text).map_err(|e| format!("{}: {e}", p.display()))?
                }
                None => Fixture::canonical(),
            };
            let store = Store::open(&config.store_config()).map_err(|e| e.to_string())?;
            store.seed(&fixture).map_err(|e| e.to_string())?;
            println!("seeded {}", path.display());
            Ok(())
        }
        Command::Serve { seed } => {
            if config.store != ":memory:" {
                Store::migrate(&store_path(&config)?).map_err(|e| e.to_string())?;
            }
            let campus = Campus::from_config(&config).map_err(|e| e.to_string())?;
            if seed {
                campus.store().seed(&Fixture::canonical()).map_err(|e| e.to_string())?;
            }
            serve(config, Arc::new(campus))
        }
    }
}

fn store_path(config: &ServiceConfig) -> Result<PathBuf, String> {
    if config.store == ":memory:" {
        return Err("this command needs a file store; set `store` in the config".into());
    }
    Ok(PathBuf::from(&config.store))
}

fn serve(config: ServiceConfig, campus: Arc<Campus>) -> Result<(), String> {
    let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    runtime.block_on(async move {
        let addr = config.socket_addr();
        let listener = tokio::net::TcpListener::bind(&addr)
            .await
            .map_err(|e| format!("cannot bind {addr}: {e}"))?;
        let local = listener.local_addr().map_err(|e| e.to_string())?;
        println!("listening on http://{local}");
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        api::serve(listener, campus, shutdown).await.map_err(|e| e.to_string())
    })
}
