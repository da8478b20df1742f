//! Round-robin chunked scheduling of cell work units over a fixed pool of
//! workers. Results merge in chunk order, so the outcome is identical for
//! every worker count and also under the optional work-stealing mode.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use thiserror::Error;

use crate::tiling::CellIndex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutorConfig {
    pub workers: usize,
    pub chunk_size: usize,
    /// Non-default: workers pull the next unprocessed chunk instead of
    /// following the static round-robin assignment.
    pub work_stealing: bool,
}

impl Default for ExecutorConfig {
    fn default() -> Self {
        ExecutorConfig {
            workers: 1,
            chunk_size: 1000,
            work_stealing: false,
        }
    }
}

/// An ordered run of cells, at most `chunk_size` long.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkChunk {
    pub cells: Vec<CellIndex>,
}

/// Chunks partition the cell list in order; chunk `k` goes to worker
/// `k % workers`.
pub fn schedule(cells: &[CellIndex], cfg: &ExecutorConfig) -> Vec<(WorkChunk, usize)> {
    cells
        .chunks(cfg.chunk_size.max(1))
        .enumerate()
        .map(|(k, chunk)| {
            (
                WorkChunk {
                    cells: chunk.to_vec(),
                },
                k % cfg.workers.max(1),
            )
        })
        .collect()
}

#[derive(Debug, Error)]
pub enum ExecutorError {
    #[error("{0} worker(s) panicked; partial results discarded")]
    WorkerPanicked(usize),
}

/// Run `process` over every cell, in parallel across workers, and merge the
/// per-chunk outputs in chunk order.
pub fn run_cells<R, F>(
    cells: &[CellIndex],
    cfg: &ExecutorConfig,
    process: F,
) -> Result<Vec<R>, ExecutorError>
where
    R: Send,
    F: Fn(CellIndex) -> R + Sync,
{
    let assignments = schedule(cells, cfg);
    let n_chunks = assignments.len();
    let slots: Vec<Mutex<Option<Vec<R>>>> = (0..n_chunks).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = cfg.workers.max(1);

    let run_chunk = |chunk_id: usize| {
        let out: Vec<R> = assignments[chunk_id]
            .0
            .cells
            .iter()
            .map(|&cell| process(cell))
            .collect();
        *slots[chunk_id].lock().expect("unpoisoned slot") = Some(out);
    };

    let mut panicked = 0usize;
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for w in 0..workers {
            let run_chunk = &run_chunk;
            let next = &next;
            handles.push(scope.spawn(move || {
                if cfg.work_stealing {
                    loop {
                        let k = next.fetch_add(1, Ordering::Relaxed);
                        if k >= n_chunks {
                            break;
                        }
                        run_chunk(k);
                    }
                } else {
                    let mut k = w;
                    while k < n_chunks {
                        run_chunk(k);
                        k += workers;
                    }
                }
            }));
        }
        for h in handles {
            if h.join().is_err() {
                panicked += 1;
            }
        }
    });
    if panicked > 0 {
        return Err(ExecutorError::WorkerPanicked(panicked));
    }

    let mut merged = Vec::with_capacity(cells.len());
    for slot in slots {
        let chunk = slot
            .into_inner()
            .expect("unpoisoned slot")
            .expect("all chunks completed");
        merged.extend(chunk);
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(n: i64) -> Vec<CellIndex> {
        (0..n).map(|i| CellIndex { i, j: 0 }).collect()
    }

    #[test]
    fn round_robin_assignment() {
        let cfg = ExecutorConfig {
            workers: 2,
            chunk_size: 2,
            work_stealing: false,
        };
        let plan = schedule(&cells(5), &cfg);
        let workers: Vec<usize> = plan.iter().map(|(_, w)| *w).collect();
        assert_eq!(workers, vec![0, 1, 0]);
        assert_eq!(plan[0].0.cells, cells(5)[0..2]);
        assert_eq!(plan[2].0.cells, cells(5)[4..5]);
    }

    #[test]
    fn single_worker_gets_everything_in_order() {
        let cfg = ExecutorConfig::default();
        let plan = schedule(&cells(2500), &cfg);
        assert_eq!(plan.len(), 3);
        assert!(plan.iter().all(|(_, w)| *w == 0));
    }

    #[test]
    fn schedule_partitions_the_input() {
        let cfg = ExecutorConfig {
            workers: 3,
            chunk_size: 7,
            work_stealing: false,
        };
        let input = cells(100);
        let plan = schedule(&input, &cfg);
        let mut seen: Vec<CellIndex> = plan.iter().flat_map(|(c, _)| c.cells.clone()).collect();
        seen.sort();
        assert_eq!(seen, input);
    }

    #[test]
    fn run_cells_is_order_deterministic_across_worker_counts() {
        let input = cells(137);
        let base = run_cells(&input, &ExecutorConfig::default(), |c| c.i * 3).unwrap();
        for workers in [2, 4, 8] {
            for stealing in [false, true] {
                let cfg = ExecutorConfig {
                    workers,
                    chunk_size: 10,
                    work_stealing: stealing,
                };
                let got = run_cells(&input, &cfg, |c| c.i * 3).unwrap();
                assert_eq!(got, base, "workers={workers} stealing={stealing}");
            }
        }
    }

    #[test]
    fn worker_panic_surfaces_as_error() {
        let input = cells(10);
        let cfg = ExecutorConfig {
            workers: 2,
            chunk_size: 1,
            work_stealing: false,
        };
        let result = run_cells(&input, &cfg, |c| {
            assert!(c.i != 7, "boom");
            c.i
        });
        assert!(matches!(result, Err(ExecutorError::WorkerPanicked(_))));
    }

    #[test]
    fn empty_cell_list_yields_empty_output() {
        let out = run_cells(&[], &ExecutorConfig::default(), |c| c.i).unwrap();
        assert!(out.is_empty());
    }
}
