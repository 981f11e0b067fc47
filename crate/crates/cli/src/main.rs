use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use covert_irs::channel::link_variances;
use covert_irs::config::{db_to_linear, dbm_to_watts, Scenario};
use covert_irs::detection::{average_min_dep, covert_budget, max_power_for_covertness, z_mean_irs};
use covert_irs::sim::{emit_results, figure_preset, parse_values, run_sweep, SolverId, SweepParam, SweepSpec};
use covert_irs::Error;

#[derive(Parser)]
#[command(name = "covert-irs", version, about = "Covert-rate simulations for IRS-aided links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named figure preset.
    Run(RunArgs),
    /// Sweep one parameter of a scenario file.
    Sweep(SweepArgs),
    /// Print the covert budget, the partial-CSI power and the detection error probability.
    Dep(DepArgs),
}

#[derive(Args)]
struct Common {
    /// Monte Carlo trials per swept value.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated solver ids; overrides the preset's list.
    #[arg(long)]
    solvers: Option<String>,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long)]
    values: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    preset: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    /// Scenario file of `key = value` lines.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    param: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DepArgs {
    #[arg(long, default_value_t = 3.0)]
    rho_db: f64,
    #[arg(long, default_value_t = 0.01)]
    kappa: f64,
    #[arg(long, default_value_t = -90.0)]
    noise_w_dbm: f64,
    #[arg(long, default_value_t = 10.0)]
    p_max_dbm: f64,
    /// Mean of Willie's channel gain; taken from the scenario geometry when absent.
    #[arg(long)]
    mean_z: Option<f64>,
    /// Scenario file supplying geometry and N when `--mean-z` is absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Evaluate the detection error probability at this power (W) instead of P*.
    #[arg(long)]
    power: Option<f64>,
}

fn solver_list(text: &str) -> covert_irs::Result<Vec<SolverId>> {
    text.split(',').map(|s| s.trim().parse()).collect()
}

fn apply_common(spec: &mut SweepSpec, sc: &mut Scenario, common: &Common) -> covert_irs::Result<()> {
    if let Some(t) = common.trials {
        spec.trials = t;
    }
    if let Some(s) = common.seed {
        sc.config.seed = s;
    }
    if let Some(list) = &common.solvers {
        spec.solvers = solver_list(list)?;
    }
    if let Some(v) = &common.values {
        spec.values = parse_values(v)?;
    }
    spec.validate()
}

fn execute(spec: &SweepSpec, sc: &Scenario, out: &PathBuf) -> covert_irs::Result<()> {
    let rows = run_sweep(spec, sc)?;
    let script = emit_results(&rows, out)?;
    eprintln!(
        "wrote {} rows to {} (plot script {})",
        rows.len(),
        out.display(),
        script.display()
    );
    Ok(())
}

fn read_scenario(path: &PathBuf) -> covert_irs::Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidConfiguration(format!("cannot read {}: {e}", path.display())))?;
    Scenario::parse(&text)
}

fn dep(args: &DepArgs) -> covert_irs::Result<()> {
    let mut sc = match &args.config {
        Some(p) => read_scenario(p)?,
        None => Scenario::default(),
    };
    sc.config.rho = db_to_linear(args.rho_db);
    sc.config.kappa = args.kappa;
    sc.config.noise_w = dbm_to_watts(args.noise_w_dbm);
    sc.config.p_max = dbm_to_watts(args.p_max_dbm);
    sc.validate()?;
    let mean_z = match args.mean_z {
        Some(z) if z > 0.0 && z.is_finite() => z,
        Some(z) => return Err(Error::InvalidConfiguration(format!("mean z must be positive, got {z}"))),
        None => z_mean_irs(&sc.config, &link_variances(&sc.geometry)?),
    };
    let params = sc.config.detection_params();
    let eta = covert_budget(&params).eta;
    let p_star = max_power_for_covertness(mean_z, &params, sc.config.p_max);
    let at = args.power.unwrap_or(p_star);
    let xi = average_min_dep(at, mean_z, &params);
    println!("eta = {eta:e}");
    println!("mean_z = {mean_z:e}");
    println!("P* = {p_star:e}");
    println!("xi = {xi}");
    Ok(())
}

fn run(cli: Cli) -> covert_irs::Result<()> {
    match cli.command {
        Command::Run(a) => {
            let (mut spec, mut sc) = figure_preset(&a.preset)?;
            apply_common(&mut spec, &mut sc, &a.common)?;
            execute(&spec, &sc, &a.common.out)
        }
        Command::Sweep(a) => {
            let mut sc = read_scenario(&a.config)?;
            let mut spec = SweepSpec {
                param: a.param.parse::<SweepParam>()?,
                values: vec![],
                trials: 500,
                solvers: vec![],
                preset: None,
            };
            if a.common.values.is_none() || a.common.solvers.is_none() {
                return Err(Error::InvalidConfiguration("sweep needs --values and --solvers".into()));
            }
            apply_common(&mut spec, &mut sc, &a.common)?;
            execute(&spec, &sc, &a.common.out)
        }
        Command::Dep(a) => dep(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Solver(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
