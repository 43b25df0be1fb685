use std::sync::Arc;

use crate::codegen::CompiledForm;
use crate::fem::{doubled_signed_area, InstantiatedForm, Mesh};
use crate::linalg::{DenseMatrix, EllMatrix, SparsityPattern};

use super::sim::{launch, AtomicF64Array, BlockKernel, ExecMode, Step, ThreadIdx, MAX_THREADS_PER_BLOCK};
use super::{DeviceArrays, DeviceError, LocalEvaluator};

/// Elements whose `|det J|` is at most this are rejected.
pub const DEGENERATE_DET: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LaunchConfig {
    pub elems_per_block: usize,
    pub mode: ExecMode,
}

impl Default for LaunchConfig {
    fn default() -> Self {
        LaunchConfig {
            elems_per_block: 4,
            mode: ExecMode::Deterministic,
        }
    }
}

impl LaunchConfig {
    pub fn deterministic(elems_per_block: usize) -> Self {
        LaunchConfig {
            elems_per_block,
            mode: ExecMode::Deterministic,
        }
    }

    pub fn parallel(elems_per_block: usize, workers: usize, seed: Option<u64>) -> Self {
        LaunchConfig {
            elems_per_block,
            mode: ExecMode::Parallel { workers, seed },
        }
    }

    /// `[n_quad, n_local², elems_per_block]`.
    pub fn block_dims(&self, n_quad: usize, n_local: usize) -> Result<[usize; 3], DeviceError> {
        if n_quad != 3 || n_local != 3 {
            return Err(DeviceError::Launch(format!(
                "expected 3 quadrature points and 3 local nodes, got {n_quad} and {n_local}"
            )));
        }
        let dims = [n_quad, n_local * n_local, self.elems_per_block];
        if self.elems_per_block == 0 || dims.iter().product::<usize>() > MAX_THREADS_PER_BLOCK {
            return Err(DeviceError::Launch(format!(
                "{} elements per block do not fit in {MAX_THREADS_PER_BLOCK} threads",
                self.elems_per_block
            )));
        }
        Ok(dims)
    }

    pub fn grid_dim(&self, n_elements: usize) -> usize {
        n_elements.div_ceil(self.elems_per_block.max(1))
    }
}

/// Assembled `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalSystem<M> {
    pub a: M,
    pub b: Vec<f64>,
}

trait Scatter: Sync {
    fn add_a(&self, row: usize, col: usize, v: f64) -> Result<(), DeviceError>;
    fn add_b(&self, row: usize, v: f64);
}

struct DenseTarget {
    n: usize,
    a: AtomicF64Array,
    b: AtomicF64Array,
}

impl Scatter for DenseTarget {
    #[inline]
    fn add_a(&self, row: usize, col: usize, v: f64) -> Result<(), DeviceError> {
        self.a.atomic_add(row * self.n + col, v);
        Ok(())
    }

    #[inline]
    fn add_b(&self, row: usize, v: f64) {
        self.b.atomic_add(row, v);
    }
}

struct EllTarget<'p> {
    pattern: &'p SparsityPattern,
    a: AtomicF64Array,
    b: AtomicF64Array,
}

impl Scatter for EllTarget<'_> {
    #[inline]
    fn add_a(&self, row: usize, col: usize, v: f64) -> Result<(), DeviceError> {
        let slot = self
            .pattern
            .find(row, col)
            .ok_or(DeviceError::PatternMismatch { row, col })?;
        self.a.atomic_add(row * self.pattern.max_nz() + slot, v);
        Ok(())
    }

    #[inline]
    fn add_b(&self, row: usize, v: f64) {
        self.b.atomic_add(row, v);
    }
}

struct AssemblyKernel<'a, E, T> {
    eval: &'a E,
    arrays: &'a DeviceArrays,
    target: &'a T,
    elems_per_block: usize,
}

struct Shared<S> {
    x: Vec<f64>,
    y: Vec<f64>,
    idx: Vec<usize>,
    a: Vec<f64>,
    b: Vec<f64>,
    scratch: S,
}

impl<E: LocalEvaluator, T: Scatter> BlockKernel for AssemblyKernel<'_, E, T> {
    type Shared = Shared<E::Scratch>;

    fn shared(&self) -> Self::Shared {
        let bz = self.elems_per_block;
        Shared {
            x: vec![0.0; 3 * bz],
            y: vec![0.0; 3 * bz],
            idx: vec![0; 3 * bz],
            a: vec![0.0; 9 * bz],
            b: vec![0.0; 3 * bz],
            scratch: self.eval.scratch(),
        }
    }

    #[inline]
    fn step(&self, phase: usize, block: usize, t: ThreadIdx, sh: &mut Self::Shared) -> Result<Step, DeviceError> {
        let ThreadIdx { x: q, y: entry, z } = t;
        let element = block * self.elems_per_block + z;
        let live = element < self.arrays.n_elements();
        match phase {
            // Stage coordinates and indices, clear local storage.
            0 => {
                if q == 0 {
                    if entry < 3 {
                        if live {
                            let k = 3 * element + entry;
                            sh.x[3 * z + entry] = self.arrays.x[k];
                            sh.y[3 * z + entry] = self.arrays.y[k];
                            sh.idx[3 * z + entry] = self.arrays.g_idx[k];
                        }
                        sh.b[3 * z + entry] = 0.0;
                    }
                    sh.a[9 * z + entry] = 0.0;
                }
                Ok(Step::Barrier)
            }
            // One integrand entry at one quadrature point.
            1 => {
                if live {
                    let c = 3 * z;
                    let det = doubled_signed_area(
                        [sh.x[c], sh.y[c]],
                        [sh.x[c + 1], sh.y[c + 1]],
                        [sh.x[c + 2], sh.y[c + 2]],
                    );
                    if det.abs() <= DEGENERATE_DET {
                        return Err(DeviceError::DegenerateElement { element, det });
                    }
                    let rule = self.eval.rule();
                    let [xi, eta] = rule.points()[q];
                    let w = rule.weights()[q];
                    let args = [
                        xi,
                        eta,
                        sh.x[c],
                        sh.y[c],
                        sh.x[c + 1],
                        sh.y[c + 1],
                        sh.x[c + 2],
                        sh.y[c + 2],
                    ];
                    let v = self.eval.bilinear(entry, &args, &mut sh.scratch)?;
                    sh.a[9 * z + entry] += w * v;
                    if entry < 3 {
                        let v = self.eval.linear(entry, &args, &mut sh.scratch)?;
                        sh.b[c + entry] += w * v;
                    }
                }
                Ok(Step::Barrier)
            }
            // Scatter into the global system.
            _ => {
                if live && q == 0 {
                    let (i, j) = (entry / 3, entry % 3);
                    let c = 3 * z;
                    self.target.add_a(sh.idx[c + i], sh.idx[c + j], sh.a[9 * z + entry])?;
                    if entry < 3 {
                        self.target.add_b(sh.idx[c + entry], sh.b[c + entry]);
                    }
                }
                Ok(Step::Exit)
            }
        }
    }
}

fn check_arrays(d: &DeviceArrays) -> Result<(), DeviceError> {
    let n = d.g_idx.len();
    if d.x.len() != n || d.y.len() != n || !n.is_multiple_of(3) {
        return Err(DeviceError::DimensionMismatch {
            expected: n,
            found: d.x.len().min(d.y.len()),
        });
    }
    if let Some(&g) = d.g_idx.iter().find(|&&g| g >= d.n_nodes) {
        return Err(DeviceError::DimensionMismatch {
            expected: d.n_nodes,
            found: g + 1,
        });
    }
    Ok(())
}

fn run<E: LocalEvaluator, T: Scatter>(
    eval: &E,
    d: &DeviceArrays,
    target: &T,
    cfg: &LaunchConfig,
) -> Result<(), DeviceError> {
    check_arrays(d)?;
    let dims = cfg.block_dims(eval.rule().len(), eval.n_local())?;
    let kernel = AssemblyKernel {
        eval,
        arrays: d,
        target,
        elems_per_block: cfg.elems_per_block,
    };
    launch(&kernel, cfg.grid_dim(d.n_elements()), dims, cfg.mode)
}

/// Simulated-device assembly into an `N × N` dense matrix.
pub fn assemble_dense_with<E: LocalEvaluator>(
    eval: &E,
    d: &DeviceArrays,
    cfg: &LaunchConfig,
) -> Result<GlobalSystem<DenseMatrix>, DeviceError> {
    let n = d.n_nodes;
    let target = DenseTarget {
        n,
        a: AtomicF64Array::zeros(n * n),
        b: AtomicF64Array::zeros(n),
    };
    run(eval, d, &target, cfg)?;
    Ok(GlobalSystem {
        a: DenseMatrix::from_values(n, target.a.into_vec()).expect("n × n values"),
        b: target.b.into_vec(),
    })
}

/// Simulated-device assembly into ELL storage on `pattern`.
pub fn assemble_sparse_with<E: LocalEvaluator>(
    eval: &E,
    d: &DeviceArrays,
    pattern: &Arc<SparsityPattern>,
    cfg: &LaunchConfig,
) -> Result<GlobalSystem<EllMatrix>, DeviceError> {
    if pattern.n() != d.n_nodes {
        return Err(DeviceError::DimensionMismatch {
            expected: d.n_nodes,
            found: pattern.n(),
        });
    }
    let target = EllTarget {
        pattern,
        a: AtomicF64Array::zeros(pattern.n() * pattern.max_nz()),
        b: AtomicF64Array::zeros(pattern.n()),
    };
    run(eval, d, &target, cfg)?;
    Ok(GlobalSystem {
        a: EllMatrix::from_values(pattern.clone(), target.a.into_vec()).expect("padding untouched"),
        b: target.b.into_vec(),
    })
}

pub fn assemble_dense(
    cf: &CompiledForm,
    d: &DeviceArrays,
    cfg: &LaunchConfig,
) -> Result<GlobalSystem<DenseMatrix>, DeviceError> {
    assemble_dense_with(cf, d, cfg)
}

pub fn assemble_sparse(
    cf: &CompiledForm,
    d: &DeviceArrays,
    pattern: &Arc<SparsityPattern>,
    cfg: &LaunchConfig,
) -> Result<GlobalSystem<EllMatrix>, DeviceError> {
    assemble_sparse_with(cf, d, pattern, cfg)
}

/// Sequential element loop with tree evaluation and no simulated device.
pub fn reference_assemble(f: &InstantiatedForm, m: &Mesh) -> Result<GlobalSystem<DenseMatrix>, DeviceError> {
    let n = m.n_nodes();
    let mut a = DenseMatrix::zeros(n);
    let mut b = vec![0.0; n];
    for (k, el) in m.elements().iter().enumerate() {
        let c = m.element_coords(k);
        let det = doubled_signed_area(c[0], c[1], c[2]);
        if det.abs() <= DEGENERATE_DET {
            return Err(DeviceError::DegenerateElement { element: k, det });
        }
        let (local_a, local_b) = f.local_system(&c).map_err(|e| DeviceError::Evaluation(e.to_string()))?;
        for i in 0..3 {
            for j in 0..3 {
                a.add_to(el[i], el[j], local_a[3 * i + j]);
            }
            b[el[i]] += local_b[i];
        }
    }
    Ok(GlobalSystem { a, b })
}
