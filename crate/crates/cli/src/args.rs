use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sdgqm", version, about = "Jet arithmetic, intuitionistic truth and two-spin quantum mechanics")]
pub struct Cli {
    /// Numeric backend. Without it, exact arithmetic is tried first and
    /// floating point is used when an operation has no exact form.
    #[arg(long, global = true, value_enum, env = "SMOOTH_BACKEND")]
    pub backend: Option<BackendArg>,

    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Md,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Worked examples from the two-spin system and the infinitesimals.
    #[command(subcommand)]
    Demo(Demo),
    /// k-th derivative of a one-variable expression at a point.
    Diff {
        #[arg(long)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value_t = 1)]
        order: u32,
    },
    /// Antiderivative vanishing at 0, evaluated at a point.
    Integrate {
        #[arg(long)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Splits f(d) = a + d*b for a square-zero d.
    Kl {
        #[arg(long)]
        expr: String,
    },
    /// Propositional formulas over finite Heyting algebras.
    #[command(subcommand)]
    Logic(Logic),
    /// Decimal expansion of a closed expression. Identifiers stand for
    /// square-zero infinitesimals.
    Decimal {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 10)]
        places: usize,
    },
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, default_value = "1")]
    pub hbar: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub e1: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub e2: String,
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Triplet and singlet eigenvectors with energy, S^2 and S_z.
    Eigen {
        #[command(flatten)]
        constants: ConstantsArgs,
    },
    /// Measurement probabilities in the product basis along a trajectory.
    Evolve {
        #[command(flatten)]
        constants: ConstantsArgs,
        /// uu, ud, du, dd, singlet or triplet.
        #[arg(long, default_value = "ud")]
        state: String,
        /// Final time.
        #[arg(long, allow_hyphen_values = true, default_value = "3.141592653589793")]
        t: String,
        /// Number of intervals between 0 and the final time.
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Truth verdicts for a square-zero infinitesimal.
    Infinitesimal,
}

#[derive(Debug, Subcommand)]
pub enum Logic {
    /// Validity of a formula, with a counterexample when it fails.
    Check {
        /// chainN, bool, or a JSON lattice file.
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        formula: String,
    },
    /// The intuitionistic axiom schemas, excluded middle and double negation.
    Axioms {
        #[arg(long, default_value = "chain3")]
        algebra: String,
    },
}
