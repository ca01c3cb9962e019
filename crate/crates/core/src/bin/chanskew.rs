use std::path::PathBuf;
use std::process::ExitCode;

use chanskew::asymptotics::{Order, Side};
use chanskew::dmc::Channel;
use chanskew::gaussian::PowerConstraint;
use chanskew::sweep::{self, ExpandTarget, SweepSpec, Table};
use chanskew::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "chanskew", version, about = "Channel skewness reports, expansions and figure sweeps")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Capacity, dispersion, singularity and skewness bounds of a channel file.
    ChannelStats { file: PathBuf },
    /// BSC bracket and expansions, rates in bits.
    Fig1 {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 0.11)]
        p: f64,
    },
    /// Gaussian channel bounds and expansions, rates in bits.
    Fig2 {
        #[command(flatten)]
        grid: Grid,
        #[arg(long = "P", visible_alias = "snr", default_value_t = 10.0)]
        power: f64,
    },
    /// Bernoulli hypothesis test, -ln beta in nats.
    Fig3 {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, num_args = 2, value_names = ["A", "B"], default_values_t = [0.6, 0.2])]
        bern: Vec<f64>,
    },
    /// One expansion evaluated term by term.
    Expand(ExpandArgs),
}

#[derive(Args)]
struct Grid {
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    n: Vec<u64>,
    #[arg(long)]
    eps_min: f64,
    #[arg(long)]
    eps_max: f64,
    #[arg(long, default_value_t = 10)]
    eps_points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Lower,
    Upper,
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
    order: u8,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = SideArg::Lower)]
    side: SideArg,
    /// Channel file.
    #[arg(long, group = "source")]
    channel: Option<PathBuf>,
    /// BSC crossover probability.
    #[arg(long, group = "source")]
    p: Option<f64>,
    /// Gaussian SNR.
    #[arg(long = "P", visible_alias = "snr", group = "source")]
    power: Option<f64>,
    /// With --P: equal-power codewords.
    #[arg(long, requires = "power")]
    equal: bool,
    /// Bernoulli hypotheses P = Bern(A), Q = Bern(B).
    #[arg(long, num_args = 2, value_names = ["A", "B"], group = "source")]
    bern: Option<Vec<f64>>,
    /// Distribution files for P and Q.
    #[arg(long, num_args = 2, value_names = ["P_FILE", "Q_FILE"], group = "source")]
    dists: Option<Vec<PathBuf>>,
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))
}

fn spec(g: &Grid) -> Result<SweepSpec> {
    SweepSpec::new(g.n.clone(), SweepSpec::log_spaced(g.eps_min, g.eps_max, g.eps_points)?)
}

fn emit(table: Table, out: &Option<PathBuf>) -> Result<()> {
    let csv = table.to_csv();
    match out {
        Some(path) => std::fs::write(path, csv).map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn bernoulli(v: &[f64]) -> (Vec<f64>, Vec<f64>) {
    (vec![1.0 - v[0], v[0]], vec![1.0 - v[1], v[1]])
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::ChannelStats { file } => {
            let report = sweep::channel_report(&Channel::parse(&read(&file)?)?)?;
            print!("{}", report.render());
            report.refusal.map_or(Ok(()), Err)
        }
        Cmd::Fig1 { grid, p } => emit(sweep::fig1(&spec(&grid)?, p)?, &grid.out),
        Cmd::Fig2 { grid, power } => emit(sweep::fig2(&spec(&grid)?, power)?, &grid.out),
        Cmd::Fig3 { grid, bern } => emit(sweep::fig3(&spec(&grid)?, bern[0], bern[1])?, &grid.out),
        Cmd::Expand(a) => {
            let target = if let Some(path) = &a.channel {
                ExpandTarget::Channel(Channel::parse(&read(path)?)?)
            } else if let Some(p) = a.p {
                ExpandTarget::Channel(Channel::bsc(p)?)
            } else if let Some(power) = a.power {
                let constraint = if a.equal { PowerConstraint::Equal } else { PowerConstraint::Maximal };
                ExpandTarget::Gaussian { power, constraint }
            } else if let Some(b) = &a.bern {
                let (p, q) = bernoulli(b);
                ExpandTarget::Bht { p, q }
            } else if let Some(files) = &a.dists {
                let p = sweep::parse_distribution(&read(&files[0])?)?;
                let q = sweep::parse_distribution(&read(&files[1])?)?;
                ExpandTarget::Bht { p, q }
            } else {
                return Err(Error::Domain("expand needs one of --channel, --p, --P, --bern, --dists".into()));
            };
            let side = match a.side {
                SideArg::Lower => Side::Lower,
                SideArg::Upper => Side::Upper,
            };
            for (k, v) in sweep::expand(&target, a.n, a.eps, Order::from_marker(a.order)?, side)? {
                println!("{k} = {v}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error kind={} code={}: {e}", e.kind(), e.exit_code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
