//! Command-line front end for the `rbgroup` crate.
//!
//! Exit codes: 0 success, 1 negative result, 2 input error, 3 resource cap.

mod commands;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rbgroup::Caps;

use commands::{ModeArg, Recipe, RecipeArgs};
use report::{emit, render, Outcome, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "rbgroup", version, about = "Rota-Baxter operators on finite groups")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Seed for sampled verification.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest group order that may be built.
    #[arg(long, global = true)]
    cap_order: Option<usize>,
    /// Largest group order whose subgroup lattice may be computed.
    #[arg(long, global = true)]
    cap_lattice: Option<usize>,
    /// Node budget for homomorphism, isomorphism and extension searches.
    #[arg(long, global = true)]
    cap_nodes: Option<u64>,
    /// Pairs drawn by sampled verification.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the Rota-Baxter identity for an operator file.
    Verify {
        operator: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
    },
    /// Build an operator from one of the constructions.
    Construct {
        #[arg(value_enum)]
        recipe: Recipe,
        #[arg(long)]
        group: Option<String>,
        /// Generators of H (comma-separated element indices).
        #[arg(long, value_delimiter = ',')]
        h: Option<Vec<usize>>,
        /// Generators of L.
        #[arg(long, value_delimiter = ',')]
        l: Option<Vec<usize>>,
        /// Images of every element under the homomorphism.
        #[arg(long, value_delimiter = ',')]
        phi: Option<Vec<usize>>,
        /// Treat `--phi` as an antihomomorphism.
        #[arg(long)]
        anti: bool,
        /// Operator on L, as images of L's elements in sorted order (local indices).
        #[arg(long, value_delimiter = ',')]
        c: Option<Vec<usize>>,
        /// Which search result to build.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Every operator on a small group, grouped into equivalence classes.
    Enumerate {
        #[arg(long)]
        group: String,
        /// Include the image list of every operator.
        #[arg(long)]
        list: bool,
    },
    /// Non-trivial splitting operators up to equivalence.
    ClassifySplitting {
        #[arg(long)]
        group: String,
    },
    /// Splitting classes of PSL(2,q) for several q.
    Table2 {
        #[arg(long, value_delimiter = ',', default_values_t = [4, 5, 7, 8, 9, 11, 13])]
        qs: Vec<usize>,
    },
    /// Necessary conditions for non-splitting operators.
    ObstructNonsplitting {
        #[arg(long)]
        group: String,
    },
    /// Exact factorizations of a group.
    Factorize {
        #[arg(long)]
        group: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::Construct { .. } => "construct",
            Command::Enumerate { .. } => "enumerate",
            Command::ClassifySplitting { .. } => "classify-splitting",
            Command::Table2 { .. } => "table2",
            Command::ObstructNonsplitting { .. } => "obstruct-nonsplitting",
            Command::Factorize { .. } => "factorize",
        }
    }
}

fn config(global: &GlobalArgs) -> RunConfig {
    let mut caps = Caps::default();
    if let Some(v) = global.cap_order {
        caps.max_group_order = v;
    }
    if let Some(v) = global.cap_lattice {
        caps.lattice_order = v;
    }
    if let Some(v) = global.cap_nodes {
        caps.search_nodes = v;
    }
    if let Some(v) = global.samples {
        caps.sample_count = v;
    }
    let threads = if global.threads == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        global.threads
    };
    RunConfig { threads, seed: global.seed, caps, out: global.out.clone() }
}

fn run(command: &Command, config: &RunConfig) -> Outcome {
    let result = match command {
        Command::Verify { operator, mode } => commands::verify(operator, *mode, config),
        Command::Construct { recipe, group, h, l, phi, anti, c, index } => {
            let args = RecipeArgs { h: h.clone(), l: l.clone(), phi: phi.clone(), anti: *anti, c: c.clone(), index: *index };
            commands::construct(*recipe, group.as_deref(), &args, config)
        }
        Command::Enumerate { group, list } => commands::enumerate(group, *list, config),
        Command::ClassifySplitting { group } => commands::classify(group, config).map(|(outcome, expected)| {
            if let Some(e) = expected {
                eprintln!("{}", commands::status_line(e));
            }
            outcome
        }),
        Command::Table2 { qs } => Ok(commands::table2(qs, config)),
        Command::ObstructNonsplitting { group } => commands::obstruct(group, config),
        Command::Factorize { group } => commands::factorize(group, config),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        Outcome::error(&e)
    })
}

fn main() {
    let cli = Cli::parse();
    let config = config(&cli.global);
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(config.threads).build_global() {
        eprintln!("error: thread pool: {e}");
        std::process::exit(2);
    }
    let outcome = run(&cli.command, &config);
    let text = render(cli.command.name(), &config, &outcome);
    if let Err(e) = emit(&text, config.out.as_deref()) {
        eprintln!("error: writing report: {e}");
        std::process::exit(2);
    }
    std::process::exit(outcome.status.exit_code());
}
