//! Assembly timing harness: compiled vs interpreted integrands, one worker
//! vs many.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use crate::codegen::compile_form;
use crate::device::{assemble_sparse_with, build_sparsity, flatten_mesh, ExecMode, LaunchConfig};
use crate::fem::{instantiate, FunctionSpace, HelmholtzProblem};
use crate::meshgen::unit_square_mesh;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Evaluator {
    /// Lowered register programs.
    Compiled,
    /// Tree evaluation of the instantiated expressions.
    Interpreted,
}

impl Evaluator {
    pub fn name(self) -> &'static str {
        match self {
            Evaluator::Compiled => "compiled",
            Evaluator::Interpreted => "interpreted",
        }
    }
}

pub fn mode_name(mode: ExecMode) -> &'static str {
    match mode {
        ExecMode::Deterministic => "det",
        ExecMode::Parallel { .. } => "par",
    }
}

pub fn mode_workers(mode: ExecMode) -> usize {
    match mode {
        ExecMode::Deterministic => 1,
        ExecMode::Parallel { workers, .. } => workers,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub n: usize,
    pub nodes: usize,
    pub elements: usize,
    pub evaluator: Evaluator,
    pub mode: ExecMode,
    pub times_ms: Vec<f64>,
    pub median_ms: f64,
    /// Interpreted median over this one for the same size and mode; `None`
    /// when the interpreted run is missing.
    pub speedup_vs_interpreted: Option<f64>,
    /// `Σ b + Σ A` of the last run.
    pub checksum: f64,
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len() % 2 == 1 {
        s[m]
    } else {
        0.5 * (s[m - 1] + s[m])
    }
}

/// Times ELL assembly of `problem` on `unit_square_mesh(n)` for every
/// configuration, `repeats` times each. Compiled timings include lowering.
pub fn measure(
    problem: &HelmholtzProblem,
    n: usize,
    configs: &[(Evaluator, ExecMode)],
    repeats: usize,
    elems_per_block: usize,
) -> Result<Vec<Measurement>, Error> {
    let mesh = unit_square_mesh(n)?;
    let form = instantiate(&problem.weak_form(FunctionSpace::p1(mesh.clone()))?)?;
    let arrays = flatten_mesh(&mesh);
    let pattern = Arc::new(build_sparsity(&mesh));
    let mut out = Vec::with_capacity(configs.len());
    for &(evaluator, mode) in configs {
        let cfg = LaunchConfig { elems_per_block, mode };
        let mut times_ms = Vec::with_capacity(repeats);
        let mut checksum = 0.0;
        for _ in 0..repeats.max(1) {
            let start = Instant::now();
            let sys = match evaluator {
                Evaluator::Compiled => {
                    let cf = compile_form(&form)?;
                    assemble_sparse_with(&cf, &arrays, &pattern, &cfg)?
                }
                Evaluator::Interpreted => assemble_sparse_with(&form, &arrays, &pattern, &cfg)?,
            };
            times_ms.push(start.elapsed().as_secs_f64() * 1e3);
            checksum = sys.b.iter().sum::<f64>() + sys.a.values().iter().sum::<f64>();
        }
        out.push(Measurement {
            n,
            nodes: mesh.n_nodes(),
            elements: mesh.n_elements(),
            evaluator,
            mode,
            median_ms: median(&times_ms),
            times_ms,
            speedup_vs_interpreted: None,
            checksum,
        });
    }
    let reference: Vec<(ExecMode, f64)> = out
        .iter()
        .filter(|m| m.evaluator == Evaluator::Interpreted)
        .map(|m| (m.mode, m.median_ms))
        .collect();
    for m in &mut out {
        m.speedup_vs_interpreted = reference
            .iter()
            .find(|(mode, _)| *mode == m.mode)
            .map(|(_, t)| t / m.median_ms);
    }
    Ok(out)
}

pub const CSV_HEADER: &str = "n,nodes,elements,evaluator,mode,workers,median_ms,speedup_vs_interpreted";

pub fn to_csv(rows: &[Measurement]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for m in rows {
        writeln!(
            s,
            "{},{},{},{},{},{},{:.3},{}",
            m.n,
            m.nodes,
            m.elements,
            m.evaluator.name(),
            mode_name(m.mode),
            mode_workers(m.mode),
            m.median_ms,
            m.speedup_vs_interpreted.map_or(String::new(), |v| format!("{v:.3}")),
        )
        .unwrap();
    }
    s
}

pub fn to_table(rows: &[Measurement]) -> String {
    let header = [
        "n",
        "nodes",
        "elements",
        "evaluator",
        "mode",
        "workers",
        "median ms",
        "speedup",
        "checksum",
    ];
    let body: Vec<[String; 9]> = rows
        .iter()
        .map(|m| {
            [
                m.n.to_string(),
                m.nodes.to_string(),
                m.elements.to_string(),
                m.evaluator.name().to_string(),
                mode_name(m.mode).to_string(),
                mode_workers(m.mode).to_string(),
                format!("{:.1}", m.median_ms),
                m.speedup_vs_interpreted.map_or("-".into(), |v| format!("{v:.2}x")),
                format!("{:.10e}", m.checksum),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[&str]| {
        let mut s = String::new();
        for (k, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if k > 0 {
                s += "  ";
            }
            // Text columns left-aligned, numbers right-aligned.
            if matches!(k, 3 | 4) {
                write!(s, "{c:<w$}").unwrap();
            } else {
                write!(s, "{c:>w$}").unwrap();
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut s = line(&header);
    for row in &body {
        s += &line(&row.each_ref().map(String::as_str));
    }
    s
}
