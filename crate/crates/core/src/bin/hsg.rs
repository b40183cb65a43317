use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use hsg_core::canonical::to_canonical_string;
use hsg_core::doc::{parse_document, render_grid_table, run_suite, Document, Kind, Suite, TypedBody, EXIT_CONFLICT, EXIT_IO, EXIT_VALIDATION};
use hsg_core::neuro::{activity_density, causality_probe, Perturbation, World};
use hsg_core::registry::{attach_package, attest_internal, detach_package, init_registry, resolve_order, AxiomPackage, Registry, RegistryError};

#[derive(Parser)]
#[command(name = "hsg", version, about = "Check, simulate and render state-grid documents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a check suite over documents and print the report.
    Check {
        /// all, category, adjunction, kan, grid, temporal, jguard, tower or registry
        suite: Suite,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Manage an axiom-package registry store.
    Registry {
        #[arg(long)]
        store: PathBuf,
        #[command(subcommand)]
        action: RegistryAction,
    },
    /// Drive the neural world simulator.
    Sim {
        #[command(subcommand)]
        action: SimAction,
    },
    /// Render a grid as a text table.
    Render {
        #[command(subcommand)]
        what: RenderWhat,
    },
}

#[derive(Subcommand)]
enum RegistryAction {
    /// Write a fresh registry holding only the root package.
    Init {
        #[arg(long)]
        force: bool,
    },
    Attach { package: PathBuf },
    Detach { id: String },
    List,
    Order,
    /// Print an internal attestation for the loaded package set.
    Attest {
        instance: String,
        #[arg(long, default_value_t = 0)]
        counter: u64,
    },
}

#[derive(Args)]
struct SeedArg {
    /// Overrides the world seed.
    #[arg(long, env = "HSG_SEED")]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum SimAction {
    Run {
        world: PathBuf,
        #[arg(long)]
        ticks: u64,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        seed: SeedArg,
    },
    Probe {
        world: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long)]
        tick: u64,
        #[arg(long, default_value = "potential")]
        channel: String,
        #[arg(long, allow_negative_numbers = true)]
        magnitude: f64,
        #[arg(long)]
        horizon: u64,
        #[command(flatten)]
        seed: SeedArg,
    },
}

#[derive(Subcommand)]
enum RenderWhat {
    Table {
        grid: PathBuf,
        #[arg(long)]
        rows: String,
        #[arg(long)]
        cols: String,
    },
}

enum Failure {
    Io(String),
    Validation(String),
    Conflict(String),
}

impl From<RegistryError> for Failure {
    fn from(e: RegistryError) -> Self {
        if e.is_conflict() {
            Failure::Conflict(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

type Outcome = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_document(path: &Path, kind: Kind) -> Result<Document, Failure> {
    let doc = parse_document(&read(path)?).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    if doc.kind != kind {
        return Err(Failure::Validation(format!("{}: expected a {kind} document, found {}", path.display(), doc.kind)));
    }
    Ok(doc)
}

fn load_world(path: &Path, seed: Option<u64>) -> Result<World, Failure> {
    let doc = load_document(path, Kind::World)?;
    let Ok(TypedBody::World(mut spec)) = doc.typed() else {
        unreachable!("kind checked on load")
    };
    if let Some(s) = seed {
        spec.seed = s;
    }
    World::new(spec).map_err(|e| Failure::Validation(e.to_string()))
}

fn print_json<T: serde::Serialize>(v: &T) {
    print!("{}", to_canonical_string(v).expect("reports serialize"));
}

fn load_store(path: &Path) -> Result<Registry, Failure> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn registry(store: &Path, action: RegistryAction) -> Outcome {
    match action {
        RegistryAction::Init { force } => {
            if store.exists() && !force {
                return Err(Failure::Conflict(format!("{} already exists; pass --force to overwrite", store.display())));
            }
            let r = init_registry();
            write(store, &r.to_canonical())?;
            print!("{}", r.to_canonical());
        }
        RegistryAction::Attach { package } => {
            let r = load_store(store)?;
            let text = read(&package)?;
            let p: AxiomPackage = match parse_document(&text) {
                Ok(doc) => match doc.typed() {
                    Ok(TypedBody::Package(p)) => p,
                    _ => return Err(Failure::Validation(format!("{}: not a package document", package.display()))),
                },
                Err(_) => serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("{}: {e}", package.display())))?,
            };
            let attached = attach_package(&r, p)?;
            for w in &attached.warnings {
                eprintln!("warning: {w}");
            }
            write(store, &attached.registry.to_canonical())?;
            print!("{}", attached.registry.to_canonical());
        }
        RegistryAction::Detach { id } => {
            let r = detach_package(&load_store(store)?, &id)?;
            write(store, &r.to_canonical())?;
            print!("{}", r.to_canonical());
        }
        RegistryAction::List => {
            for p in load_store(store)?.packages() {
                println!("{} {}", p.id, p.version);
            }
        }
        RegistryAction::Order => {
            for id in resolve_order(&load_store(store)?)? {
                println!("{id}");
            }
        }
        RegistryAction::Attest { instance, counter } => {
            print_json(&attest_internal(&load_store(store)?, &instance, counter)?);
        }
    }
    Ok(0)
}

#[derive(serde::Serialize)]
struct RunSummary {
    ticks: u64,
    seed: u64,
    events: usize,
    density: hsg_core::neuro::Density,
    trace_sha256: String,
}

fn sim(action: SimAction) -> Outcome {
    match action {
        SimAction::Run { world, ticks, trace, seed } => {
            let mut w = load_world(&world, seed.seed)?;
            w.run(ticks).map_err(|e| Failure::Validation(e.to_string()))?;
            let text = w.trace();
            if let Some(path) = trace {
                write(&path, &text)?;
            }
            let density = activity_density(&w, 0..ticks).map_err(|e| Failure::Validation(e.to_string()))?;
            print_json(&RunSummary {
                ticks,
                seed: w.spec().seed,
                events: density.events,
                density,
                trace_sha256: hex::encode(Sha256::digest(text.as_bytes())),
            });
            Ok(0)
        }
        SimAction::Probe {
            world,
            point,
            tick,
            channel,
            magnitude,
            horizon,
            seed,
        } => {
            let w = load_world(&world, seed.seed)?;
            let p = Perturbation {
                point,
                tick,
                channel,
                magnitude,
            };
            let r = causality_probe(&w, &p, horizon).map_err(|e| Failure::Validation(e.to_string()))?;
            print_json(&r);
            Ok(if r.respects_delay() { 0 } else { EXIT_VALIDATION })
        }
    }
}

fn render(what: RenderWhat) -> Outcome {
    let RenderWhat::Table { grid, rows, cols } = what;
    let doc = load_document(&grid, Kind::Grid)?;
    let Ok(TypedBody::Grid(body)) = doc.typed() else {
        unreachable!("kind checked on load")
    };
    let g = body.build().map_err(|e| Failure::Validation(e.to_string()))?;
    print!("{}", render_grid_table(&g, &rows, &cols).map_err(|e| Failure::Validation(e.to_string()))?);
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check { suite, files } => {
            let (report, code) = run_suite(&files, suite);
            print_json(&report);
            Ok(code)
        }
        Command::Registry { store, action } => registry(&store, action),
        Command::Sim { action } => sim(action),
        Command::Render { what } => render(what),
    };
    let code = match outcome {
        Ok(c) => c,
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            EXIT_IO
        }
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            EXIT_VALIDATION
        }
        Err(Failure::Conflict(m)) => {
            eprintln!("error: {m}");
            EXIT_CONFLICT
        }
    };
    ExitCode::from(code as u8)
}

