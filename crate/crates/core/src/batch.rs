//! Seeded batch execution. With the `parallel` feature the seeds are spread
//! over the rayon pool; results always come back in seed order.

use std::ops::Range;

/// Runs `f` once per seed, on the rayon pool when `parallel` is enabled.
pub fn run_seeded<T, F>(seeds: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        run_seeded_parallel(seeds, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_seeded_sequential(seeds, f)
    }
}

pub fn run_seeded_sequential<T, F>(seeds: Range<u64>, f: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    seeds.map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn run_seeded_parallel<T, F>(seeds: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    seeds.into_par_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let seq = run_seeded_sequential(0..100, |s| s * s);
        assert_eq!(run_seeded(0..100, |s| s * s), seq);
        #[cfg(feature = "parallel")]
        assert_eq!(run_seeded_parallel(0..100, |s| s * s), seq);
    }
}
