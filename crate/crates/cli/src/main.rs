mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Parser)]
#[command(
    name = "tlq",
    version,
    about = "Temperley-Lieb algebras at roots of unity: dimension tables, idempotents, fusion rings and self-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Args, Clone, Copy)]
pub struct Root {
    /// The root of unity has order 2*ell.
    #[arg(long)]
    ell: u32,

    /// Use q = -zeta^k; k must be coprime to 2*ell.
    #[arg(long = "q-exp")]
    q_exp: Option<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// Simple-module dimensions l_t(t + 2k).
    Dims {
        #[arg(long)]
        ell: u32,
        /// Largest n for the full table.
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        /// Print only this row.
        #[arg(long)]
        t: Option<usize>,
        /// Number of columns for a single row.
        #[arg(long, default_value_t = 20)]
        order: usize,
    },
    /// Generating functions L_t(x), or W_t(x) without --ell.
    Series {
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, default_value_t = 20)]
        order: usize,
    },
    /// Run every invariant suite; exit status 1 on any failure.
    Verify {
        /// Restrict to a single ell (default 3..=7).
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long = "q-exp")]
        q_exp: Option<i64>,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long, default_value_t = 20)]
        order: usize,
        /// Repeat the rank checks for every primitive q.
        #[arg(long)]
        galois_all: bool,
    },
    /// The Jones-Wenzl idempotent E_{ell-1}.
    Jw {
        #[command(flatten)]
        root: Root,
    },
    /// Gram matrix of the cell form on W_t(n).
    CellGram {
        #[command(flatten)]
        root: Root,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
        /// Include the matrix itself.
        #[arg(long)]
        matrix: bool,
    },
    /// Full multiplication table of the fusion ring.
    FusionTable {
        #[arg(long)]
        ell: u32,
    },
    /// One fusion product e_s * e_t.
    Fuse {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// dim Q_n three ways, plus the trace-form rank for n <= 8.
    Quotient {
        #[command(flatten)]
        root: Root,
        #[arg(long)]
        n: usize,
    },
    /// The Clifford representation of TL_n at ell = 4.
    Ising {
        #[arg(long)]
        n: usize,
        #[arg(long = "q-exp")]
        q_exp: Option<i64>,
        /// Run the representation checks and report pass/fail.
        #[arg(long)]
        verify: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.common.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("thread pool is configured once");
    }
    let result = match cli.command {
        Command::Dims {
            ell,
            max_n,
            t,
            order,
        } => commands::dims(ell, max_n, t, order),
        Command::Series { ell, t, order } => commands::series(ell, t, order),
        Command::Verify {
            ell,
            q_exp,
            max_n,
            order,
            galois_all,
        } => commands::verify(ell, q_exp, max_n, order, galois_all),
        Command::Jw { root } => commands::jw(root.ell, root.q_exp),
        Command::CellGram { root, t, n, matrix } => {
            commands::cell_gram(root.ell, root.q_exp, t, n, matrix)
        }
        Command::FusionTable { ell } => commands::fusion_table(ell),
        Command::Fuse { ell, s, t } => commands::fuse(ell, s, t),
        Command::Quotient { root, n } => commands::quotient(root.ell, root.q_exp, n),
        Command::Ising { n, q_exp, verify } => commands::ising(n, q_exp, verify),
    };
    match result {
        Ok((out, passed)) => {
            if let Err(e) = out.emit(cli.common.format, cli.common.out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                tlq::Error::Internal(_) => 1,
                _ => 2,
            })
        }
    }
}
