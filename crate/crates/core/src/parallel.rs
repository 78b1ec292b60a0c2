//! Deterministic chunked parallelism over integer ranges.

/// Splits `1..end` into `threads` contiguous chunks and maps each with `f`.
/// Results come back in chunk order, so merging them is deterministic.
pub(crate) fn chunked<T, F>(end: u64, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
{
    let total = end.saturating_sub(1);
    let threads = (threads.max(1) as u64).min(total.max(1));
    if threads == 1 || total < 4096 {
        return vec![f(1, end.max(1))];
    }
    let chunk = total.div_ceil(threads);
    std::thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let lo = 1 + t * chunk;
                let hi = (lo + chunk).min(end);
                scope.spawn(move || f(lo, hi.max(lo)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}
