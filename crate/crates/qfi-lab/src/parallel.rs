//! Deterministic fan-out for embarrassingly parallel campaigns.
//!
//! Work items are pure functions of their index (each derives its own RNG
//! stream), so the result vector is identical for any worker count. The
//! `QFI_LAB_THREADS` environment variable caps parallelism; unset or
//! unparsable values fall back to the available hardware parallelism.

/// Worker cap from `QFI_LAB_THREADS`, defaulting to available parallelism.
pub fn thread_cap() -> usize {
    match std::env::var("QFI_LAB_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) | Err(_) => default_parallelism(),
            Ok(k) => k,
        },
        Err(_) => default_parallelism(),
    }
}

fn default_parallelism() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Evaluate `f(0), ..., f(n-1)` with at most [`thread_cap`] workers and
/// return the results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = thread_cap().min(n.max(1));
    if workers <= 1 || n < 2 {
        return (0..n).map(f).collect();
    }
    let mut out: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let chunk = n.div_ceil(workers);
    std::thread::scope(|scope| {
        for (c, slot) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                for (off, cell) in slot.iter_mut().enumerate() {
                    *cell = Some(f(c * chunk + off));
                }
            });
        }
    });
    out.into_iter()
        .map(|x| x.expect("worker filled every slot"))
        .collect()
}
