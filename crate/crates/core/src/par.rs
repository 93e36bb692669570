//! Data-parallel helpers. With the `parallel` feature a map runs on the
//! rayon pool; without it the same calls run sequentially in order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to every item, returning results in input order.
#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    items.into_iter().map(f).collect()
}

/// Like [`map`] but capped at `jobs` worker threads (0 means the default).
pub fn map_with_jobs<T, R, F>(jobs: usize, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if jobs > 0 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                return pool.install(|| map(items, f));
            }
        }
    }
    let _ = jobs;
    map(items, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_keep_input_order() {
        let items: Vec<u64> = (0..200).collect();
        let expected: Vec<u64> = items.iter().map(|x| x * x).collect();
        assert_eq!(map(items.clone(), |x| x * x), expected);
        for jobs in [0, 1, 3] {
            assert_eq!(map_with_jobs(jobs, items.clone(), |x| x * x), expected);
        }
    }
}
