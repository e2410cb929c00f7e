use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eichler_cli::{
    cmd_correspond, cmd_eichler, cmd_genus, cmd_graph, cmd_gz, cmd_hilbert, cmd_verify_paper, suite, Output, RunConfig,
};
use eichler_core::Variant;

#[derive(Parser)]
#[command(name = "eichler", version, about = "Eichler orders of level c, quadratic forms and oriented supersingular curves")]
struct Cli {
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = suite::DEFAULT_SEED)]
    seed: u64,
    /// Alternative modular polynomial table for ell = 3
    #[arg(long, global = true)]
    phi3: Option<PathBuf>,
    /// Starting precision in bits for class polynomials
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = OutputArg::Text)]
    output: OutputArg,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputArg {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Lambda,
    LambdaPrime,
}

#[derive(Args)]
struct Pc {
    #[arg(long, default_value_t = 101)]
    p: i64,
    #[arg(long, default_value_t = 3)]
    c: i64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Genus class of q and its forms of order at most 2
    Genus {
        #[command(flatten)]
        pc: Pc,
        #[arg(long)]
        q: Option<i64>,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Build O_c(q, r), or O'_c(q, r') with --prime-variant
    Eichler {
        #[command(flatten)]
        pc: Pc,
        #[arg(long)]
        q: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
        #[arg(long)]
        prime_variant: bool,
    },
    /// Orders, forms and j-invariants of the genus classes
    Correspond {
        #[command(flatten)]
        pc: Pc,
        #[arg(long)]
        q: Option<i64>,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Oriented ell-isogeny graph of curves with level-c structure
    Graph {
        #[command(flatten)]
        pc: Pc,
        #[arg(long, default_value_t = 2)]
        ell: i64,
    },
    /// Hilbert class polynomial, optionally factored mod p
    Hilbert {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        p: Option<i64>,
    },
    /// p-adic valuation of J(D1, D2)
    Gz {
        #[arg(long, allow_hyphen_values = true)]
        d1: i64,
        #[arg(long, allow_hyphen_values = true)]
        d2: i64,
        #[arg(long)]
        p: i64,
    },
    /// Run the acceptance checks
    VerifyPaper {
        #[command(flatten)]
        pc: Pc,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let base = |p: i64, c: i64| RunConfig {
        output: match cli.output {
            OutputArg::Text => Output::Text,
            OutputArg::Json => Output::Json,
            OutputArg::Dot => Output::Dot,
        },
        precision_override: cli.precision,
        out_path: cli.out.clone(),
        phi3: cli.phi3.clone(),
        seed: cli.seed,
        ..RunConfig::new(p, c)
    };
    let variant = |v: Option<VariantArg>| {
        v.map(|v| match v {
            VariantArg::Lambda => Variant::Lambda,
            VariantArg::LambdaPrime => Variant::LambdaPrime,
        })
    };
    let code = match cli.cmd {
        Cmd::Genus { ref pc, q, variant: v } => cmd_genus(&RunConfig { q, variant: variant(v), ..base(pc.p, pc.c) }),
        Cmd::Eichler { ref pc, q, r, prime_variant } => {
            let v = if prime_variant { Variant::LambdaPrime } else { Variant::Lambda };
            cmd_eichler(&RunConfig { q, variant: Some(v), ..base(pc.p, pc.c) }, r)
        }
        Cmd::Correspond { ref pc, q, variant: v } => cmd_correspond(&RunConfig { q, variant: variant(v), ..base(pc.p, pc.c) }),
        Cmd::Graph { ref pc, ell } => cmd_graph(&RunConfig { ell: Some(ell), ..base(pc.p, pc.c) }),
        Cmd::Hilbert { d, p } => cmd_hilbert(&base(101, 3), d, p),
        Cmd::Gz { d1, d2, p } => cmd_gz(&base(101, 3), d1, d2, p),
        Cmd::VerifyPaper { ref pc } => cmd_verify_paper(&base(pc.p, pc.c)),
    };
    ExitCode::from(code as u8)
}
