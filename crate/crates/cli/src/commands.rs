use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, Context};
use femforge::bench::{self, Evaluator};
use femforge::codegen::{compile_form, emit_compiled_source, CompiledForm, SourceConfig};
use femforge::device::{
    assemble_dense_with, assemble_sparse_with, build_sparsity, flatten_mesh, ExecMode, LocalEvaluator,
};
use femforge::fem::{instantiate, FunctionSpace, InstantiatedForm, Mesh};
use femforge::linalg::{
    cg_solve, l2_error, write_csv, write_matrix_market, write_vector, DenseMatrix, EllMatrix, ExportFormat,
    LinalgError, LinearOperator,
};
use femforge::meshgen::{unit_square_mesh, write_mesh};

use crate::args::{
    AssembleArgs, BenchArgs, CodegenArgs, Command, EvaluatorArg, Format, Layout, MeshArgs, Mode, SolveArgs,
};
use crate::config::{build_problem, exec_mode, load_mesh, parse_xy, MeshSpec, ProblemConfig};
use crate::{runtime, usage, Cli, Failure};

pub fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Assemble(a) => assemble(a),
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Codegen(a) => codegen(a),
        Command::Mesh(a) => mesh(a),
    }
}

enum Matrix {
    Dense(DenseMatrix),
    Ell(EllMatrix),
}

impl Matrix {
    fn nnz(&self) -> usize {
        match self {
            Matrix::Dense(m) => m.values().iter().filter(|v| **v != 0.0).count(),
            Matrix::Ell(m) => m.pattern().nnz(),
        }
    }

    fn operator(&self) -> &dyn LinearOperator {
        match self {
            Matrix::Dense(m) => m,
            Matrix::Ell(m) => m,
        }
    }

    fn export(&self, path: &Path, format: Format) -> Result<(), LinalgError> {
        match (self, format) {
            (Matrix::Dense(m), Format::Mm) => write_matrix_market(m, path),
            (Matrix::Dense(m), Format::Csv) => write_csv(m, path),
            (Matrix::Ell(m), Format::Mm) => write_matrix_market(m, path),
            (Matrix::Ell(m), Format::Csv) => write_csv(m, path),
        }
    }
}

struct Assembled {
    mesh: Mesh,
    a: Matrix,
    b: Vec<f64>,
    max_nz: usize,
    seconds: f64,
}

fn instantiate_on(cfg: &ProblemConfig, mesh: &Mesh) -> Result<InstantiatedForm, Failure> {
    let wf = cfg.problem.weak_form(FunctionSpace::p1(mesh.clone())).map_err(usage)?;
    instantiate(&wf).map_err(usage)
}

fn assemble_with<E: LocalEvaluator>(
    eval: &E,
    cfg: &ProblemConfig,
    mesh: &Mesh,
) -> Result<(Matrix, Vec<f64>, usize), Failure> {
    let arrays = flatten_mesh(mesh);
    let pattern = build_sparsity(mesh);
    let max_nz = pattern.max_nz();
    let (a, b) = match cfg.layout {
        Layout::Dense => {
            let s = assemble_dense_with(eval, &arrays, &cfg.launch).map_err(runtime)?;
            (Matrix::Dense(s.a), s.b)
        }
        Layout::Ell => {
            let s = assemble_sparse_with(eval, &arrays, &Arc::new(pattern), &cfg.launch).map_err(runtime)?;
            (Matrix::Ell(s.a), s.b)
        }
    };
    Ok((a, b, max_nz))
}

fn assemble_config(cfg: &ProblemConfig) -> Result<Assembled, Failure> {
    let mesh = cfg.load_mesh()?;
    cfg.check_dense_fits(mesh.n_nodes())?;
    let form = instantiate_on(cfg, &mesh)?;
    let start = Instant::now();
    let (a, b, max_nz) = match cfg.evaluator {
        EvaluatorArg::Compiled => {
            let cf = compile_form(&form).map_err(runtime)?;
            assemble_with(&cf, cfg, &mesh)?
        }
        EvaluatorArg::Interpreted => assemble_with(&form, cfg, &mesh)?,
    };
    Ok(Assembled {
        mesh,
        a,
        b,
        max_nz,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn vector_format(f: Format) -> ExportFormat {
    match f {
        Format::Mm => ExportFormat::MatrixMarket,
        Format::Csv => ExportFormat::Csv,
    }
}

/// Prints `key: value` lines and mirrors them to `csv` when given.
fn report(rows: &[(&str, String)], csv: Option<&PathBuf>) -> Result<(), Failure> {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        println!("{k:<width$}  {v}");
    }
    if let Some(path) = csv {
        let mut s = String::from("key,value\n");
        for (k, v) in rows {
            s.push_str(&format!("{k},{v}\n"));
        }
        fs::write(path, s)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Runtime)?;
    }
    Ok(())
}

fn mode_label(cfg: &ProblemConfig) -> String {
    match cfg.launch.mode {
        ExecMode::Deterministic => "det".into(),
        ExecMode::Parallel { workers, .. } => format!("par({workers})"),
    }
}

fn assemble(args: AssembleArgs) -> Result<(), Failure> {
    let cfg = ProblemConfig::from_args(&args.run)?;
    let sys = assemble_config(&cfg)?;
    if let Some(p) = &args.out_matrix {
        sys.a
            .export(p, args.format)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Runtime)?;
    }
    if let Some(p) = &args.out_vector {
        write_vector(&sys.b, p, vector_format(args.format))
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Runtime)?;
    }
    report(
        &[
            ("N", sys.mesh.n_nodes().to_string()),
            ("elements", sys.mesh.n_elements().to_string()),
            ("nnz", sys.a.nnz().to_string()),
            ("MAX_NZ", sys.max_nz.to_string()),
            ("layout", format!("{:?}", cfg.layout).to_lowercase()),
            ("mode", mode_label(&cfg)),
            ("wall_ms", format!("{:.3}", sys.seconds * 1e3)),
        ],
        args.run.csv.as_ref(),
    )
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let cfg = ProblemConfig::from_args(&args.run)?;
    if args.tol.is_nan() || args.tol < 0.0 {
        return Err(usage(anyhow!("--tol must be non-negative")));
    }
    let exact = args.exact.as_deref().map(|s| parse_xy("--exact", s)).transpose()?;
    let s = &cfg.problem.sigma;
    if s.get(0, 1) != s.get(1, 0) {
        eprintln!("warning: sigma is not symmetric; conjugate gradients may not converge");
    }
    let sys = assemble_config(&cfg)?;
    let start = Instant::now();
    let rep = cg_solve(sys.a.operator(), &sys.b, args.tol, args.max_iter).map_err(runtime)?;
    let solve_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut rows = vec![
        ("N", sys.mesh.n_nodes().to_string()),
        ("iterations", rep.iterations.to_string()),
        ("residual", format!("{:.6e}", rep.residual)),
        ("converged", rep.converged.to_string()),
        ("assemble_ms", format!("{:.3}", sys.seconds * 1e3)),
        ("solve_ms", format!("{solve_ms:.3}")),
    ];
    if let Some(u) = &exact {
        let err = l2_error(&rep.x, u, &sys.mesh).map_err(runtime)?;
        rows.push(("l2_error", format!("{err:.6e}")));
    }
    if let Some(p) = &args.out_vector {
        write_vector(&rep.x, p, ExportFormat::MatrixMarket)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Runtime)?;
    }
    report(&rows, args.run.csv.as_ref())?;
    if !rep.converged {
        return Err(Failure::NotConverged(format!(
            "no convergence after {} iterations (relative residual {:.3e}, tol {:e})",
            rep.iterations, rep.residual, args.tol
        )));
    }
    Ok(())
}

fn bench_cmd(args: BenchArgs) -> Result<(), Failure> {
    let problem = build_problem(&args.problem)?;
    if args.sizes.is_empty() || args.sizes.contains(&0) {
        return Err(usage(anyhow!("--sizes must list positive cell counts")));
    }
    for &n in &args.sizes {
        let nodes = ((n + 1) * (n + 1)) as u128;
        // ELL values and column indices at 7 slots per row.
        let bytes = nodes * 7 * 16;
        if bytes > args.mem_cap_bytes as u128 {
            return Err(usage(anyhow!(
                "n = {n} needs about {bytes} bytes, over the {} byte cap",
                args.mem_cap_bytes
            )));
        }
    }
    let par = exec_mode(Mode::Par, args.workers, args.seed)?;
    let configs = [
        (Evaluator::Compiled, ExecMode::Deterministic),
        (Evaluator::Interpreted, ExecMode::Deterministic),
        (Evaluator::Compiled, par),
        (Evaluator::Interpreted, par),
    ];
    let mut rows = Vec::new();
    for &n in &args.sizes {
        let m = bench::measure(&problem, n, &configs, args.repeats, args.elems_per_block).map_err(runtime)?;
        rows.extend(m);
    }
    print!("{}", bench::to_table(&rows));
    if let Some(p) = &args.csv {
        fs::write(p, bench::to_csv(&rows))
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Runtime)?;
    }
    Ok(())
}

/// Register programs, one block per integrand.
pub fn ir_listing(cf: &CompiledForm) -> String {
    let mut s = String::new();
    let n = cf.n_local;
    for (k, p) in cf.bilinear.iter().enumerate() {
        s.push_str(&format!("# bilinear {} {}\n{p}\n", k / n, k % n));
    }
    for (i, p) in cf.linear.iter().enumerate() {
        s.push_str(&format!("# linear {i}\n{p}\n"));
    }
    s
}

fn codegen(args: CodegenArgs) -> Result<(), Failure> {
    let problem = build_problem(&args.problem)?;
    let spec = match &args.mesh.mesh_file {
        Some(p) => MeshSpec::File(p.clone()),
        None if args.mesh.n == 0 => return Err(usage(anyhow!("--n must be at least 1"))),
        None => MeshSpec::Generated(args.mesh.n),
    };
    let mesh = load_mesh(&spec)?;
    let wf = problem.weak_form(FunctionSpace::p1(mesh.clone())).map_err(usage)?;
    let form = instantiate(&wf).map_err(usage)?;
    let cf = compile_form(&form).map_err(runtime)?;
    let max_nz = build_sparsity(&mesh).max_nz();
    let src = emit_compiled_source(
        &cf,
        &SourceConfig {
            elems_per_block: Some(args.elems_per_block),
            max_nz: Some(max_nz),
        },
    )
    .map_err(runtime)?;
    let ir_path = args.out_ir.clone().unwrap_or_else(|| args.out.with_extension("ir"));
    let write = |p: &Path, text: &str| {
        fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Runtime)
    };
    write(&args.out, &src)?;
    write(&ir_path, &ir_listing(&cf))?;
    let instructions: usize = cf.programs().map(|p| p.len()).sum();
    println!(
        "wrote {} ({} bytes) and {} ({} programs, {instructions} instructions), MAX_NZ {max_nz}",
        args.out.display(),
        src.len(),
        ir_path.display(),
        cf.programs().count(),
    );
    Ok(())
}

fn mesh(args: MeshArgs) -> Result<(), Failure> {
    let m = unit_square_mesh(args.n).map_err(usage)?;
    write_mesh(&m, &args.out)
        .with_context(|| format!("writing {}", args.out.display()))
        .map_err(Failure::Runtime)?;
    println!(
        "wrote {} ({} nodes, {} elements)",
        args.out.display(),
        m.n_nodes(),
        m.n_elements()
    );
    Ok(())
}
