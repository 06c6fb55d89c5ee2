use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

pub const DEFAULT_SEED: u64 = 20_240_611;

#[derive(Parser, Debug)]
#[command(
    name = "tricode",
    version,
    about = "Homological codes on 3-manifolds and their triple-intersection gates"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Global {
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

impl Global {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build, validate and subdivide Δ-complexes.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Betti numbers and homology bases over Z₂.
    #[command(subcommand)]
    Homology(HomologyCmd),
    /// Smith normal form of an integer matrix.
    Snf { matrix: PathBuf },
    /// Triple cup products.
    #[command(subcommand)]
    Cup(CupCmd),
    /// Toric and color codes.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Diagonal gate circuits and their logical action.
    #[command(subcommand)]
    Gate(GateCmd),
    /// Symplectic mapping-class computations.
    #[command(subcommand)]
    Mcg(McgCmd),
    /// Hypergraphs of triple forms and their degrees.
    #[command(subcommand)]
    Hypergraph(HypergraphCmd),
    /// Back-engineering gluing maps from 3-forms.
    #[command(subcommand)]
    Sullivan(SullivanCmd),
    /// Run a TOML pipeline manifest and check its expectations.
    RunManifest {
        manifest: PathBuf,
        /// Directory for step outputs; defaults to the manifest's directory.
        #[arg(long)]
        workdir: Option<PathBuf>,
    },
    /// Human-readable summary of a code, hypergraph or built-in example.
    Report { subject: String },
}

impl Command {
    pub fn default_format(&self) -> Format {
        match self {
            Command::Report { .. } | Command::RunManifest { .. } => Format::Text,
            _ => Format::Json,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum ComplexCmd {
    /// Build a preset complex or a mapping torus.
    Build {
        /// t3 | t3-grid:<L> | sigma:<g> | sigma-coned:<g> | product:<g>,<layers> | twisted:<g>,<layers> | mapping-torus
        #[arg(long)]
        preset: String,
        /// Twist file for `mapping-torus`: {"base": .., "map": .., "layers": n}.
        #[arg(long)]
        twist: Option<PathBuf>,
    },
    /// Check face identifications and named cycles.
    Validate { complex: String },
    /// Barycentric subdivision.
    Subdivide { complex: String },
}

#[derive(Subcommand, Debug)]
pub enum HomologyCmd {
    /// Betti numbers over Z₂.
    Betti {
        complex: String,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// A cycle basis in one dimension.
    Basis {
        complex: String,
        #[arg(long)]
        dim: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum CupCmd {
    /// The triple product of three H¹ basis classes.
    Triple {
        complex: String,
        /// Indices into the canonical H¹ basis.
        #[arg(long, value_delimiter = ',', required = true)]
        cocycles: Vec<usize>,
    },
    /// The full triple intersection form.
    Form { complex: String },
}

#[derive(Subcommand, Debug)]
pub enum CodeCmd {
    /// Build a toric or color code from a complex.
    Build {
        complex: String,
        /// toric:<copies> | color
        #[arg(long = "type")]
        kind: String,
    },
    /// Z-distance of a code.
    Distance {
        code: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        method: DistanceArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum DistanceArg {
    Exact,
    Bfs,
}

#[derive(Subcommand, Debug)]
pub enum GateCmd {
    /// Cup-product CCZ circuit on three toric-code copies.
    Ccz { complex: String },
    /// CZ circuit on two copies restricted to a membrane.
    Cz {
        complex: String,
        /// A named 2-cycle of the complex, or a file {"dim": 2, "support": [...]}.
        #[arg(long)]
        membrane: String,
        #[arg(long, value_delimiter = ',', required = true)]
        copies: Vec<usize>,
    },
    /// Transversal T on a code.
    T { code: PathBuf },
    /// Decide whether a circuit preserves the code space.
    Check { circuit: PathBuf, code: PathBuf },
    /// Logical gates implemented by a circuit.
    Action { circuit: PathBuf, code: PathBuf },
    /// Coset-state simulation of the circuit on an encoded logical product state.
    Simulate {
        circuit: PathBuf,
        code: PathBuf,
        /// One of 0, 1, + per logical qubit; all + by default.
        #[arg(long)]
        state: Option<String>,
    },
    /// Exact enumeration of the phase on every stabilizer coset.
    Exhaustive {
        circuit: PathBuf,
        code: PathBuf,
        #[arg(long, default_value_t = 1 << 26)]
        budget: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum McgCmd {
    /// Symplectic matrix of a Dehn twist power.
    Twist {
        #[arg(long)]
        genus: usize,
        /// a:i | b:i | f:i | [v1,...,v2g]
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 1)]
        power: i64,
    },
    /// Integral homology of a mapping torus.
    TorusHomology {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value = "z")]
        coeff: String,
    },
    /// Thurston construction from two multicurves.
    Thurston {
        #[arg(long)]
        n: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        genus: Option<usize>,
    },
    /// CNOT reading of a twist sequence on a thickened surface.
    Thickened {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        sequence: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum HypergraphCmd {
    /// Base or full hypergraph of a form.
    Build {
        /// Triple form (from `cup form`) or 3-form ({"m": .., "coeffs": ..}).
        form: PathBuf,
        #[arg(long)]
        lift: bool,
        #[arg(long, value_enum, default_value = "json")]
        export: Export,
        /// Keep unknown coefficients as dashed edges instead of failing.
        #[arg(long)]
        allow_unknown: bool,
    },
    /// Vertex degrees and components.
    Degrees { hypergraph: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Export {
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum SullivanCmd {
    /// Synthesize a gluing map from a 3-form.
    Synth { form: PathBuf },
    /// Synthesize and check the predicted form.
    Roundtrip { form: PathBuf },
    /// A random sparse 3-form drawn from the global seed.
    Random {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        triples: usize,
    },
}
