//! Minimal deterministic fan-out over indexed work items.

/// Run `f(0..n)` across up to `threads` workers and return the results in
/// index order. Each item must be independent; determinism comes from the
/// items themselves, not from scheduling.
pub fn map_indexed<T, F>(n: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = threads.max(1).min(n.max(1));
    if threads == 1 {
        return (0..n).map(f).collect();
    }
    let mut results: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let chunk = n.div_ceil(threads);
    std::thread::scope(|scope| {
        for (w, slot) in results.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                let start = w * chunk;
                for (offset, out) in slot.iter_mut().enumerate() {
                    *out = Some(f(start + offset));
                }
            });
        }
    });
    results.into_iter().map(|r| r.unwrap()).collect()
}
