use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Symbolic finite element assembly on a simulated accelerator.
#[derive(Debug, Parser)]
#[command(name = "femforge", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assemble the global system and export it.
    Assemble(AssembleArgs),
    /// Assemble and solve with conjugate gradients.
    Solve(SolveArgs),
    /// Time compiled vs interpreted and one worker vs many.
    Bench(BenchArgs),
    /// Write the emitted kernel source and the register programs.
    Codegen(CodegenArgs),
    /// Write a structured unit-square mesh.
    Mesh(MeshArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Layout {
    Dense,
    Ell,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Det,
    Par,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EvaluatorArg {
    Compiled,
    Interpreted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Mm,
    Csv,
}

/// `−∇·(σ∇u) + λu = f`; defaults to the demo problem.
#[derive(Clone, Debug, Args)]
pub struct ProblemArgs {
    /// Row-major σ entries as four comma-separated expressions in x, y.
    #[arg(long, default_value = "1,-x-y,x+y,1", allow_hyphen_values = true)]
    pub sigma: String,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, default_value = "-2*(x*x + y*y) + 36", allow_hyphen_values = true)]
    pub f: String,
}

#[derive(Clone, Debug, Args)]
pub struct MeshSource {
    /// Cells per side of the generated unit-square mesh.
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    /// Read the mesh from a file instead of generating one.
    #[arg(long)]
    pub mesh_file: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub mesh: MeshSource,
    #[arg(long, value_enum, default_value_t = Layout::Ell)]
    pub layout: Layout,
    #[arg(long, value_enum, default_value_t = Mode::Det)]
    pub mode: Mode,
    /// Worker threads in parallel mode.
    #[arg(long, env = "FEMFORGE_WORKERS")]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub elems_per_block: usize,
    #[arg(long, value_enum, default_value_t = EvaluatorArg::Compiled)]
    pub evaluator: EvaluatorArg,
    /// Seeds the block and thread schedule in parallel mode.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Refuse dense matrices larger than this.
    #[arg(long, default_value_t = 2 << 30)]
    pub mem_cap_bytes: u64,
    /// Also write the summary table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AssembleArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long)]
    pub out_matrix: Option<PathBuf>,
    #[arg(long)]
    pub out_vector: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Mm)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Relative residual target.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Exact solution in x, y; prints the L2 error.
    #[arg(long, allow_hyphen_values = true)]
    pub exact: Option<String>,
    /// Write the nodal solution.
    #[arg(long)]
    pub out_vector: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Comma-separated cells-per-side values.
    #[arg(long, value_delimiter = ',', default_values_t = [64, 128, 256])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long, env = "FEMFORGE_WORKERS")]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub elems_per_block: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 2 << 30)]
    pub mem_cap_bytes: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CodegenArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Mesh used to size MAX_NZ.
    #[command(flatten)]
    pub mesh: MeshSource,
    #[arg(long, default_value_t = 4)]
    pub elems_per_block: usize,
    /// Kernel source output.
    #[arg(long)]
    pub out: PathBuf,
    /// Register program listing; defaults to the source path with `.ir`.
    #[arg(long)]
    pub out_ir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeshArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub out: PathBuf,
}
