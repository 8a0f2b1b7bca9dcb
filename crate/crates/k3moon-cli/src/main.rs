mod commands;
mod report;

use clap::{Parser, Subcommand};
use k3moon::n4char::Sector;
use k3moon::replattice::DataDir;
use std::path::PathBuf;
use std::process::ExitCode;

use report::Format;

#[derive(Debug, Parser)]
#[command(name = "k3moon", version, about = "Exact checks for K3 elliptic genera, N=4 characters and character lattices")]
pub struct Cli {
    /// Data directory (tables/, moonshine/, forms/).
    #[arg(long, global = true, env = "K3MOON_DATA")]
    pub data_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Work below q^q-order.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(i64).range(1..=40))]
    pub q_order: i64,
    /// Number of t-coefficients for symmetric-power series.
    #[arg(long, global = true, default_value_t = 21, value_parser = clap::value_parser!(u64).range(1..=200))]
    pub t_order: u64,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Elliptic genus of K3 as a (q, y)-series.
    Ellgenus,
    /// Fixed-point twining genus of a symplectic class.
    Equivariant {
        #[arg(long, default_value = "2A")]
        class: String,
    },
    /// Traces on symmetric powers of the tangent bundle, chi(g; X, S^n T).
    Symt {
        #[arg(long, default_value = "1A")]
        class: String,
        #[arg(long, default_value_t = 8)]
        terms: usize,
        /// Also print the rational function.
        #[arg(long)]
        rational: bool,
    },
    /// Multiplicities of N=4 characters in the characters of V_N.
    N4Decompose {
        /// Number of rows N = 0..terms-1.
        #[arg(long, default_value_t = 11)]
        terms: u32,
        #[arg(long, default_value = "NS")]
        sector: Sector,
    },
    /// Atypical and typical multiplicities of the elliptic genus.
    GenusDecompose {
        #[arg(long, default_value_t = 7)]
        terms: usize,
    },
    /// Lattices of order-constant virtual characters.
    LatticeCheck,
    /// Decomposition of -chi(X, S_t T) into M23 irreducibles.
    M23Table {
        /// Also print the multiplicity rational functions.
        #[arg(long)]
        rational: bool,
    },
    /// Fixed-point twining genera against e(g)/12 phi_0,1 + f_g phi_-2,1.
    MoonshineVerify {
        #[arg(long)]
        class: Option<String>,
    },
    /// Symmetric-power traces derived from the moonshine twining genera.
    AuditIntegrality {
        #[arg(long, default_value_t = 8)]
        terms: usize,
    },
    /// All acceptance checks.
    VerifyAll,
}

pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DATA: u8 = 3;

fn data_dir(cli: &Cli) -> DataDir {
    if let Some(d) = &cli.data_dir {
        return DataDir::new(d);
    }
    let built = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    if built.join("tables").is_dir() {
        DataDir::new(built)
    } else {
        DataDir::new("data")
    }
}

fn exit_code(e: &k3moon::Error) -> u8 {
    use k3moon::Error::*;
    match e {
        Data(_) | Io(_) => EXIT_DATA,
        Parse(_) | Domain(_) | Precondition(_) => EXIT_USAGE,
        Structural(_) | Underdetermined(_) | NoFit { .. } | Mismatch(_) => EXIT_MISMATCH,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let data = data_dir(&cli);
    match commands::run(&cli, &data) {
        Ok(r) => {
            print!("{}", r.render(cli.format));
            if r.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_MISMATCH)
            }
        }
        Err(e) => {
            eprintln!("k3moon: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
