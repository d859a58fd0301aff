//! `tlviz`: validate, render, canonicalize, summarize and serve annotation
//! timelines.
//!
//! Exit status is 0 on success, 1 when a package is invalid and 2 for usage
//! problems (bad flags, malformed configuration, unreadable files).

use std::io::{IsTerminal, Write};
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tlviz_core::config::{parse_config, serialize_config, ConfigError};
use tlviz_core::fixture::{generate_package, FixtureSpec};
use tlviz_core::model::{
    package_to_json, parse_package, parse_package_data, validate_package, AnnotationPackage, PackageError,
};
use tlviz_core::pipeline::{parse_width, render_for, PipelineError, DEFAULT_WIDTH_PX};
use tlviz_core::stats::stats_table;
use tlviz_service::{ServeOptions, DEFAULT_MAX_PACKAGE_BYTES, DEFAULT_PORT};

#[derive(Debug, Parser)]
#[command(
    name = "tlviz",
    version,
    about = "Timeline visualization for video annotation packages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a package and print every error and warning.
    Validate { package: PathBuf },
    /// Render a package to SVG.
    Render {
        package: PathBuf,
        /// Timeline configuration in URL DSL form, e.g. "tracks=a,b&to=00:05:00".
        #[arg(long, short, default_value = "")]
        config: String,
        /// Viewport width in pixels, excluding the label gutter.
        #[arg(long, short, default_value_t = DEFAULT_WIDTH_PX, value_parser = width_arg)]
        width: u32,
        /// Output file; standard output when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print the canonical form of a configuration.
    Canonicalize {
        #[arg(long, short, default_value = "")]
        config: String,
    },
    /// Per-type counts, coverage and maximum overlap.
    Stats { package: PathBuf },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        /// Directory holding uploaded packages; in-memory only when omitted.
        #[arg(long)]
        data_dir: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_PACKAGE_BYTES)]
        max_package_bytes: usize,
    },
    /// Write a seeded synthetic package.
    Generate {
        #[arg(long, default_value_t = FixtureSpec::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = FixtureSpec::default().types)]
        types: usize,
        #[arg(long, default_value_t = FixtureSpec::default().annotations)]
        annotations: usize,
        /// Media duration in milliseconds.
        #[arg(long, default_value_t = FixtureSpec::default().duration_ms)]
        duration: u64,
        /// Longest annotation in milliseconds.
        #[arg(long, default_value_t = FixtureSpec::default().max_len_ms)]
        max_len: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn width_arg(s: &str) -> Result<u32, String> {
    parse_width(s).map_err(|e| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Usage(String),
}

impl Failure {
    fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Invalid(_) => ExitCode::from(1),
            Failure::Usage(_) => ExitCode::from(2),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (Failure::Invalid(msg) | Failure::Usage(msg)) = &failure;
            eprintln!("tlviz: {}", msg.trim_end());
            failure.exit_code()
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { package } => validate(&package),
        Command::Render {
            package,
            config,
            width,
            output,
        } => {
            let pkg = load(&package)?;
            let svg = render_for(&pkg, &config, width).map_err(|e| match e {
                PipelineError::Config(e) => config_failure(&e),
                PipelineError::Width(e) => Failure::Usage(format!("--width: {e}")),
                e => Failure::Usage(format!("--config: {e}")),
            })?;
            emit(output.as_deref(), svg.as_bytes())
        }
        Command::Canonicalize { config } => {
            let parsed = parse_config(&config).map_err(|e| config_failure(&e))?;
            let canonical = serialize_config(&parsed);
            if canonical.is_empty() {
                Ok(())
            } else {
                emit(None, format!("{canonical}\n").as_bytes())
            }
        }
        Command::Stats { package } => {
            let pkg = load(&package)?;
            emit(None, stats_table(&pkg).as_bytes())
        }
        Command::Serve {
            host,
            port,
            data_dir,
            max_package_bytes,
        } => serve(ServeOptions {
            addr: SocketAddr::new(host, port),
            data_dir,
            max_package_bytes,
        }),
        Command::Generate {
            seed,
            types,
            annotations,
            duration,
            max_len,
            output,
        } => {
            if types == 0 || duration == 0 || max_len == 0 {
                return Err(Failure::Usage(
                    "--types, --duration and --max-len must be positive".into(),
                ));
            }
            let spec = FixtureSpec {
                seed,
                types,
                annotations,
                duration_ms: duration,
                max_len_ms: max_len,
            };
            emit(
                output.as_deref(),
                package_to_json(&generate_package(&spec), true).as_bytes(),
            )
        }
    }
}

/// Names the flag and points at the offending character.
fn config_failure(e: &ConfigError) -> Failure {
    Failure::Usage(format!(
        "--config: {e}\n  {}\n  {}^",
        e.input,
        " ".repeat(e.position)
    ))
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<AnnotationPackage, Failure> {
    let bytes = read(path)?;
    parse_package(&bytes).map_err(|e| match e {
        PackageError::Validation(report) => Failure::Invalid(format!("{}: {report}", path.display())),
        e => Failure::Invalid(format!("{}: {e}", path.display())),
    })
}

fn validate(path: &Path) -> Result<(), Failure> {
    let bytes = read(path)?;
    let data =
        parse_package_data(&bytes).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    let report = validate_package(&data);
    if report.is_valid() {
        emit(None, format!("{}: {report}", path.display()).as_bytes())
    } else {
        Err(Failure::Invalid(format!("{}: {report}", path.display())))
    }
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match output {
        Some(path) => {
            std::fs::write(path, bytes).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|()| stdout.flush())
                .map_err(|e| Failure::Usage(format!("standard output: {e}")))
        }
    }
}

fn serve(opts: ServeOptions) -> Result<(), Failure> {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .with_ansi(std::io::stderr().is_terminal())
        .init();
    let runtime =
        tokio::runtime::Runtime::new().map_err(|e| Failure::Usage(format!("cannot start runtime: {e}")))?;
    runtime.block_on(tlviz_service::run(opts)).map_err(|e| {
        let flag = match e {
            tlviz_service::RunError::Store(_) => "--data-dir",
            tlviz_service::RunError::Bind { .. } => "--host/--port",
            tlviz_service::RunError::Serve(_) => "serve",
        };
        Failure::Usage(format!("{flag}: {e}"))
    })
}
