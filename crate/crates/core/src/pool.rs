//! Minimal fork-join helper for the sweep drivers.
//!
//! Items are split into contiguous chunks, one per worker, and results are
//! concatenated in input order, so output is deterministic for any worker
//! count. Callers own the worker-count decision.

/// Maps `f` over `items` on up to `jobs` scoped threads.
pub fn run_parallel<T, R, F>(jobs: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let chunk_len = items.len().div_ceil(jobs);
    let mut out = Vec::with_capacity(items.len());
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk_len)
            .map(|chunk| scope.spawn(|| chunk.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        for handle in handles {
            out.extend(handle.join().expect("worker panicked"));
        }
    });
    out
}
