use sparse_bandits_cli::{cmd_lower_bound, cmd_simulate, presets_table, CliError, RunSpec};

const USAGE: &str = "\
sparse-bandits — sparse multi-armed bandit experiments

USAGE:
    sparse-bandits simulate    [FLAGS]   run policies, write regret/events/lemmas CSVs
    sparse-bandits lower-bound [FLAGS]   evaluate the regret lower bound, write bound.csv
    sparse-bandits presets list          show the built-in experiment presets

INSTANCE (choose one form):
    --preset NAME                   built-in panel (see `presets list`)
    --d N --s N --mu1 X --delta-s X equal suboptimal good arms at mu1 - delta-s
    --means \"0.9,0.4,0\" --s N       explicit mean vector

FLAGS:
    --policy ucb|sparse|both        policies to simulate (default both)
    --horizon N                     rounds per replication (default 10000)
    --reps N                        Monte-Carlo replications (default 100)
    --seed N                        base seed (default 12345)
    --out DIR                       output directory (default .)
    --config FILE                   key = value file; flags override it
    --epsilon X                     lower-bound: generalized form at epsilon
    --epsilon-grid A:STEP:B         lower-bound: one row per epsilon
    --forcelog anytime|horizon-aware  sparse policy threshold variant
";

fn run() -> Result<(), CliError> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.first().map(String::as_str) {
        Some("simulate") => cmd_simulate(&RunSpec::from_args(&args[1..])?),
        Some("lower-bound") => cmd_lower_bound(&RunSpec::from_args(&args[1..])?),
        Some("presets") => match args.get(1).map(String::as_str) {
            Some("list") => {
                print!("{}", presets_table());
                Ok(())
            }
            _ => Err(CliError::Usage("usage: sparse-bandits presets list".into())),
        },
        Some("help") | Some("--help") | Some("-h") => {
            print!("{USAGE}");
            Ok(())
        }
        Some(other) => Err(CliError::Usage(format!(
            "unknown subcommand `{other}`; try `sparse-bandits help`"
        ))),
        None => {
            print!("{USAGE}");
            Err(CliError::Usage("a subcommand is required".into()))
        }
    }
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
