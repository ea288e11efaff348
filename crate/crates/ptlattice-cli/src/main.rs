use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ptlattice::{Axis, Direction};
use ptlattice_cli::{run, CliError, Command, FigureId, Format, RunConfig, Settings};

#[derive(Parser)]
#[command(name = "pt-lattice", version, about = "Spectra, scattering and figure data for a PT-symmetric defect chain")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    #[arg(long, global = true, allow_hyphen_values = true)]
    eps0: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    eps1: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// Incident wavenumber in (-pi, pi).
    #[arg(long, global = true, allow_hyphen_values = true)]
    k: Option<f64>,
    /// Incidence side: lr or rl.
    #[arg(long, global = true)]
    direction: Option<Direction>,
    /// Swept parameter: gamma, eps0 or eps1.
    #[arg(long, global = true)]
    axis: Option<Axis>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    min: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    max: Option<f64>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML file with the same keys; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

#[derive(Subcommand)]
enum Cmd {
    /// Discrete spectrum at one parameter point.
    Spectrum,
    /// Spectrum along --axis over [--min, --max] with --n points.
    Sweep,
    /// Exceptional points with coupling in (--min, --max].
    Eps,
    /// Bound and virtual bound states.
    Bound,
    /// Transmission and reflection at --k, or on a k grid.
    Scatter,
    /// Reflectionless wavenumbers and their invisibility.
    Perfect,
    /// PT norms of the bound states.
    Ptnorm,
    /// Per-bond PT current of the scattering state at --k.
    Ptcurrent,
    /// Jost-type PT-symmetric state at --k (eps0 = eps1 = 0).
    Jost,
    /// Data behind one figure.
    Figure {
        #[arg(value_enum)]
        which: FigureArg,
    },
}

impl Cmd {
    fn command(&self) -> Command {
        match self {
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Sweep => Command::Sweep,
            Cmd::Eps => Command::Eps,
            Cmd::Bound => Command::Bound,
            Cmd::Scatter => Command::Scatter,
            Cmd::Perfect => Command::Perfect,
            Cmd::Ptnorm => Command::PtNorm,
            Cmd::Ptcurrent => Command::PtCurrent,
            Cmd::Jost => Command::Jost,
            Cmd::Figure { which } => Command::Figure(match which {
                FigureArg::Fig3 => FigureId::Fig3,
                FigureArg::Fig4 => FigureId::Fig4,
                FigureArg::Fig5 => FigureId::Fig5,
                FigureArg::Fig6 => FigureId::Fig6,
                FigureArg::Fig7 => FigureId::Fig7,
                FigureArg::Fig8 => FigureId::Fig8,
            }),
        }
    }
}

impl Flags {
    fn settings(self) -> Result<Settings, CliError> {
        let file = match &self.config {
            Some(path) => Settings::from_toml_file(path)?,
            None => Settings::default(),
        };
        let flags = Settings {
            eps0: self.eps0,
            eps1: self.eps1,
            gamma: self.gamma,
            k: self.k,
            direction: self.direction,
            axis: self.axis,
            min: self.min,
            max: self.max,
            n: self.n,
            format: self.format.map(|f| match f {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            }),
            out: self.out,
        };
        Ok(file.overlay(flags))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.command();
    let result = cli
        .flags
        .settings()
        .and_then(|settings| RunConfig::resolve(command, settings))
        .and_then(|config| run(&config));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = if e.exit_code() == 2 { "usage" } else { "error" };
            eprintln!("pt-lattice: {kind}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
