use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::DeviceError;

/// Largest number of threads in one block.
pub const MAX_THREADS_PER_BLOCK: usize = 1024;

/// `f64` cells in global memory with linearizable atomic addition.
#[derive(Debug)]
pub struct AtomicF64Array {
    cells: Vec<AtomicU64>,
}

impl AtomicF64Array {
    pub fn zeros(len: usize) -> Self {
        AtomicF64Array {
            cells: (0..len).map(|_| AtomicU64::new(0f64.to_bits())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn atomic_add(&self, i: usize, v: f64) {
        let cell = &self.cells[i];
        let mut cur = cell.load(Ordering::Relaxed);
        loop {
            let next = (f64::from_bits(cur) + v).to_bits();
            match cell.compare_exchange_weak(cur, next, Ordering::Relaxed, Ordering::Relaxed) {
                Ok(_) => return,
                Err(seen) => cur = seen,
            }
        }
    }

    pub fn get(&self, i: usize) -> f64 {
        f64::from_bits(self.cells[i].load(Ordering::Relaxed))
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.cells.into_iter().map(|c| f64::from_bits(c.into_inner())).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThreadIdx {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

/// How a thread's phase ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    /// Waits at the block barrier; resumes in the next phase.
    Barrier,
    Exit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    /// One worker; blocks ascending, threads in `(z, y, x)` order.
    Deterministic,
    /// Blocks spread over `workers` host threads. With a seed, block order
    /// and thread order inside each block are shuffled reproducibly;
    /// without one, workers take blocks as they free up.
    Parallel { workers: usize, seed: Option<u64> },
}

/// A kernel written as phases between barriers.
///
/// The threads of one block are stepped cooperatively on a single worker, so
/// a block's shared state is handed out as `&mut` and every read-modify-write
/// on it is indivisible.
pub trait BlockKernel: Sync {
    /// Shared memory plus per-thread scratch, allocated once per worker and
    /// reused across blocks.
    type Shared: Send;

    fn shared(&self) -> Self::Shared;

    fn step(&self, phase: usize, block: usize, t: ThreadIdx, shared: &mut Self::Shared) -> Result<Step, DeviceError>;
}

/// Runs `grid` blocks of `dims = [bx, by, bz]` threads.
pub fn launch<K: BlockKernel>(kernel: &K, grid: usize, dims: [usize; 3], mode: ExecMode) -> Result<(), DeviceError> {
    let threads = dims.iter().product::<usize>();
    if threads == 0 || threads > MAX_THREADS_PER_BLOCK {
        return Err(DeviceError::Launch(format!(
            "block of {threads} threads; must be between 1 and {MAX_THREADS_PER_BLOCK}"
        )));
    }
    let mut order = Vec::with_capacity(threads);
    for z in 0..dims[2] {
        for y in 0..dims[1] {
            for x in 0..dims[0] {
                order.push(ThreadIdx { x, y, z });
            }
        }
    }
    match mode {
        ExecMode::Deterministic => {
            let mut shared = kernel.shared();
            let mut live = Vec::with_capacity(threads);
            for b in 0..grid {
                run_block(kernel, b, &order, &mut live, &mut shared)?;
            }
            Ok(())
        }
        ExecMode::Parallel { workers, seed } => {
            if workers == 0 {
                return Err(DeviceError::Launch("parallel mode needs at least one worker".into()));
            }
            let mut blocks: Vec<usize> = (0..grid).collect();
            if let Some(s) = seed {
                blocks.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
            }
            let next = AtomicUsize::new(0);
            let abort = AtomicBool::new(false);
            let failure = Mutex::new(None);
            std::thread::scope(|scope| {
                for _ in 0..workers.min(grid.max(1)) {
                    scope.spawn(|| {
                        let mut shared = kernel.shared();
                        let mut live = Vec::with_capacity(threads);
                        let mut shuffled = order.clone();
                        while !abort.load(Ordering::Relaxed) {
                            let k = next.fetch_add(1, Ordering::Relaxed);
                            let Some(&b) = blocks.get(k) else { break };
                            let threads = match seed {
                                Some(s) => {
                                    shuffled.copy_from_slice(&order);
                                    let mut rng =
                                        ChaCha8Rng::seed_from_u64(s ^ (b as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                                    shuffled.shuffle(&mut rng);
                                    &shuffled
                                }
                                None => &order,
                            };
                            if let Err(e) = run_block(kernel, b, threads, &mut live, &mut shared) {
                                abort.store(true, Ordering::Relaxed);
                                failure.lock().unwrap().get_or_insert(e);
                                break;
                            }
                        }
                    });
                }
            });
            match failure.into_inner().unwrap() {
                Some(e) => Err(e),
                None => Ok(()),
            }
        }
    }
}

fn run_block<K: BlockKernel>(
    kernel: &K,
    block: usize,
    order: &[ThreadIdx],
    live: &mut Vec<ThreadIdx>,
    shared: &mut K::Shared,
) -> Result<(), DeviceError> {
    live.clear();
    live.extend_from_slice(order);
    let mut phase = 0;
    loop {
        let (mut waiting, mut exited) = (0, 0);
        for &t in live.iter() {
            match kernel.step(phase, block, t, shared)? {
                Step::Barrier => waiting += 1,
                Step::Exit => exited += 1,
            }
        }
        match (waiting, exited) {
            (_, 0) => phase += 1,
            (0, _) => return Ok(()),
            _ => {
                return Err(DeviceError::BarrierDeadlock {
                    block,
                    phase,
                    waiting,
                    exited,
                })
            }
        }
    }
}
