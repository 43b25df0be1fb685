use std::path::PathBuf;

use anyhow::anyhow;
use femforge::device::{ExecMode, LaunchConfig};
use femforge::fem::{HelmholtzProblem, Mesh, SymMatrix};
use femforge::meshgen::{read_mesh, unit_square_mesh};
use femforge::symbolic::{parse, Expr};

use crate::args::{EvaluatorArg, Layout, Mode, ProblemArgs, RunArgs};
use crate::{usage, Failure};

#[derive(Clone, Debug, PartialEq)]
pub enum MeshSpec {
    Generated(usize),
    File(PathBuf),
}

/// A validated run: problem, mesh and launch choices.
#[derive(Clone, Debug)]
pub struct ProblemConfig {
    pub problem: HelmholtzProblem,
    pub mesh: MeshSpec,
    pub layout: Layout,
    pub launch: LaunchConfig,
    pub evaluator: EvaluatorArg,
    pub mem_cap_bytes: u64,
}

/// Parses `src` and checks it only mentions `x` and `y`.
pub fn parse_xy(what: &str, src: &str) -> Result<Expr, Failure> {
    let e = parse(src).map_err(|err| usage(anyhow!("{what} '{src}': {err}")))?;
    let stray: Vec<String> = e.free_symbols().into_iter().filter(|s| s != "x" && s != "y").collect();
    if !stray.is_empty() {
        return Err(usage(anyhow!(
            "{what} '{src}': only x and y may appear, found {}",
            stray.join(", ")
        )));
    }
    Ok(e)
}

pub fn build_problem(p: &ProblemArgs) -> Result<HelmholtzProblem, Failure> {
    let parts: Vec<&str> = p.sigma.split(',').collect();
    if parts.len() != 4 {
        return Err(usage(anyhow!(
            "--sigma needs 4 comma-separated entries, got {}",
            parts.len()
        )));
    }
    let entries = parts
        .iter()
        .enumerate()
        .map(|(i, s)| parse_xy(&format!("--sigma entry {}", i + 1), s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    if !p.lambda.is_finite() {
        return Err(usage(anyhow!("--lambda must be finite")));
    }
    if p.lambda <= 0.0 {
        eprintln!(
            "warning: lambda = {} is not strictly positive; the system may be singular",
            p.lambda
        );
    }
    let f = parse_xy("--f", &p.f)?;
    let sigma = SymMatrix::new(2, 2, entries).map_err(usage)?;
    Ok(HelmholtzProblem {
        sigma,
        lambda: Expr::float(p.lambda),
        f,
    })
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn exec_mode(mode: Mode, workers: Option<usize>, seed: Option<u64>) -> Result<ExecMode, Failure> {
    Ok(match mode {
        Mode::Det => ExecMode::Deterministic,
        Mode::Par => {
            let workers = workers.unwrap_or_else(default_workers);
            if workers == 0 {
                return Err(usage(anyhow!("--workers must be at least 1")));
            }
            ExecMode::Parallel { workers, seed }
        }
    })
}

impl ProblemConfig {
    pub fn from_args(a: &RunArgs) -> Result<Self, Failure> {
        let problem = build_problem(&a.problem)?;
        let mesh = match &a.mesh.mesh_file {
            Some(p) => MeshSpec::File(p.clone()),
            None if a.mesh.n == 0 => return Err(usage(anyhow!("--n must be at least 1"))),
            None => MeshSpec::Generated(a.mesh.n),
        };
        let launch = LaunchConfig {
            elems_per_block: a.elems_per_block,
            mode: exec_mode(a.mode, a.workers, a.seed)?,
        };
        launch.block_dims(3, 3).map_err(usage)?;
        Ok(ProblemConfig {
            problem,
            mesh,
            layout: a.layout,
            launch,
            evaluator: a.evaluator,
            mem_cap_bytes: a.mem_cap_bytes,
        })
    }

    pub fn load_mesh(&self) -> Result<Mesh, Failure> {
        load_mesh(&self.mesh)
    }

    /// Refuses dense matrices whose `N²` doubles exceed the cap.
    pub fn check_dense_fits(&self, n_nodes: usize) -> Result<(), Failure> {
        if self.layout != Layout::Dense {
            return Ok(());
        }
        let bytes = (n_nodes as u128).pow(2) * 8;
        if bytes > self.mem_cap_bytes as u128 {
            return Err(usage(anyhow!(
                "dense matrix for {n_nodes} nodes needs {bytes} bytes, over the {} byte cap; \
                 use --layout ell or raise --mem-cap-bytes",
                self.mem_cap_bytes
            )));
        }
        Ok(())
    }
}

pub fn load_mesh(spec: &MeshSpec) -> Result<Mesh, Failure> {
    match spec {
        MeshSpec::Generated(n) => unit_square_mesh(*n).map_err(usage),
        MeshSpec::File(p) => {
            let m = read_mesh(p).map_err(|e| match e {
                femforge::fem::MeshError::Io(_) => crate::runtime(anyhow!("{}: {e}", p.display())),
                e => usage(anyhow!("{}: {e}", p.display())),
            })?;
            if m.reoriented() > 0 {
                eprintln!("warning: {} clockwise elements were reoriented", m.reoriented());
            }
            Ok(m)
        }
    }
}
