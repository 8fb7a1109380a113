//! Worker-pool capability handed from the frontend to the renderers.
//! Modules never spawn threads themselves; pixel work is partitioned into
//! disjoint row slices so results are identical for any worker count.

use rayon::prelude::*;

pub struct WorkerPool {
    pool: rayon::ThreadPool,
    workers: usize,
}

impl WorkerPool {
    pub fn new(workers: usize) -> Self {
        let workers = workers.max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("worker pool");
        Self { pool, workers }
    }

    pub fn default_size() -> usize {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Fill `out` (row-major, `row_len` entries per row) by evaluating `f`
    /// at each (x, y) pixel index. Rows are written disjointly.
    pub fn fill_rows<T, F>(&self, out: &mut [T], row_len: usize, f: F)
    where
        T: Send,
        F: Fn(usize, usize) -> T + Sync,
    {
        assert_eq!(out.len() % row_len.max(1), 0);
        self.pool.install(|| {
            out.par_chunks_mut(row_len)
                .enumerate()
                .for_each(|(y, row)| {
                    for (x, slot) in row.iter_mut().enumerate() {
                        *slot = f(x, y);
                    }
                });
        });
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

impl Default for WorkerPool {
    fn default() -> Self {
        Self::new(Self::default_size())
    }
}
