use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

/// Exact Coxeter, Hecke and Soergel-bimodule computations.
///
/// Words are strings of 0-based generator indices: `e`, `010`, `0,1,0` or
/// `s0s1s0`.
#[derive(Debug, Parser)]
#[command(name = "kmdual", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List group elements or parabolic coset representatives.
    Group(GroupArgs),
    /// Kazhdan-Lusztig polynomials, cached as JSON lines.
    Kl(KlArgs),
    /// Product of two basis elements of the Hecke algebra.
    Mult(MultArgs),
    /// Hom pairing of two Hecke algebra elements.
    Pairing(PairingArgs),
    /// Parabolic Kazhdan-Lusztig polynomials.
    ParabolicKl(ParabolicKlArgs),
    /// Bott-Samelson bimodules, their Hom spaces and decompositions.
    Bimod {
        #[command(subcommand)]
        command: BimodCommand,
    },
    /// Equivariant-monodromic comparison of Hom spaces.
    Duality {
        #[command(subcommand)]
        command: DualityCommand,
    },
    /// Standard objects under pushforward and averaging.
    Parabolic {
        #[command(subcommand)]
        command: ParabolicCommand,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("format").args(["json", "csv", "latex"])))]
pub struct Common {
    /// Generalized Cartan matrix or realization, as a JSON document.
    #[arg(long = "type", value_name = "GCM_FILE")]
    pub gcm: PathBuf,
    /// Emit JSON (the default).
    #[arg(long)]
    pub json: bool,
    /// Emit CSV.
    #[arg(long)]
    pub csv: bool,
    /// Emit a LaTeX tabular.
    #[arg(long)]
    pub latex: bool,
}

impl Common {
    pub fn format(&self) -> Format {
        if self.csv {
            Format::Csv
        } else if self.latex {
            Format::Latex
        } else {
            Format::Json
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CosetSideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CosetKindArg {
    Minimal,
    Maximal,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 4)]
    pub max_length: usize,
    /// Restrict to coset representatives for this parabolic subset.
    #[arg(long, value_delimiter = ',')]
    pub theta: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = CosetSideArg::Left)]
    pub side: CosetSideArg,
    #[arg(long, value_enum, default_value_t = CosetKindArg::Minimal)]
    pub kind: CosetKindArg,
}

#[derive(Debug, Args)]
pub struct KlArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 4)]
    pub max_length: usize,
    /// Directory for cached tables.
    #[arg(long, env = "KMDUAL_CACHE_DIR", default_value = ".kmdual-cache")]
    pub cache_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    /// Standard basis `H_w`.
    Standard,
    /// Kazhdan-Lusztig basis `b_w`.
    Kl,
    /// Product of `b_s` over the letters of the word.
    Bs,
}

#[derive(Debug, Args)]
pub struct MultArgs {
    #[command(flatten)]
    pub common: Common,
    pub x: String,
    pub y: String,
    #[arg(long, value_enum, default_value_t = BasisArg::Kl)]
    pub basis: BasisArg,
}

#[derive(Debug, Args)]
pub struct PairingArgs {
    #[command(flatten)]
    pub common: Common,
    pub x: String,
    pub y: String,
    #[arg(long, value_enum, default_value_t = BasisArg::Kl)]
    pub basis: BasisArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlavorArg {
    Spherical,
    Antispherical,
}

#[derive(Debug, Args)]
pub struct ParabolicKlArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 4)]
    pub max_length: usize,
    /// Generators of the parabolic subset, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub theta: Vec<usize>,
    #[arg(long, value_enum, default_value_t = FlavorArg::Antispherical)]
    pub flavor: FlavorArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Equivariant,
    Monodromic,
}

#[derive(Debug, Args)]
pub struct BimodOptions {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = SideArg::Equivariant)]
    pub side: SideArg,
}

#[derive(Debug, Subcommand)]
pub enum BimodCommand {
    /// The Bott-Samelson bimodule of a word, as a fixture document.
    Bs {
        word: String,
        #[command(flatten)]
        opts: BimodOptions,
    },
    /// Graded dimensions and right rank of Hom(BS(x), BS(y)).
    Hom {
        x: String,
        y: String,
        #[command(flatten)]
        opts: BimodOptions,
        /// Largest degree solved for; defaults to total length plus 4.
        #[arg(long)]
        degree_bound: Option<i32>,
    },
    /// Indecomposable summands of BS(word).
    Decompose {
        word: String,
        #[command(flatten)]
        opts: BimodOptions,
    },
}

#[derive(Debug, Subcommand)]
pub enum DualityCommand {
    /// Compare regraded equivariant tables with monodromic ones for every
    /// pair of reduced words.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        max_length: usize,
        /// Use the same realization on the monodromic side.
        #[arg(long)]
        symmetrizable_self: bool,
        /// Emit every bigraded table as CSV instead of the pass matrix.
        #[arg(long)]
        dump: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VarianceArg {
    #[value(name = "!", alias = "shriek")]
    Shriek,
    #[value(name = "*", alias = "star")]
    Star,
}

#[derive(Debug, Args)]
pub struct ParabolicOptions {
    #[command(flatten)]
    pub common: Common,
    /// Generators of the parabolic subset, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub theta: Vec<usize>,
}

#[derive(Debug, Subcommand)]
pub enum ParabolicCommand {
    /// Pushforward of the standard object at a word.
    Push {
        word: String,
        #[command(flatten)]
        opts: ParabolicOptions,
        #[arg(long, value_enum, default_value_t = VarianceArg::Shriek)]
        variance: VarianceArg,
    },
    /// Whittaker averaging of the standard object at a word.
    Average {
        word: String,
        #[command(flatten)]
        opts: ParabolicOptions,
    },
    /// Summands of the pushforward of the simple object at a word.
    Decomp {
        word: String,
        #[command(flatten)]
        opts: ParabolicOptions,
    },
    /// Parabolic and Whittaker standards at a coset.
    Match {
        word: String,
        #[command(flatten)]
        opts: ParabolicOptions,
    },
}
