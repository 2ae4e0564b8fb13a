//! Data-parallel helpers. With the `parallel` feature (default) these fan
//! out over rayon's pool; without it they run on the calling thread. Output
//! order always matches input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items` with one scratch state per worker.
#[cfg(feature = "parallel")]
pub fn map_with<T, S, R>(items: &[T], init: impl Fn() -> S + Sync + Send, f: impl Fn(&mut S, &T) -> R + Sync + Send) -> Vec<R>
where
    T: Sync,
    R: Send,
{
    items.par_iter().map_init(init, f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_with<T, S, R>(items: &[T], init: impl Fn() -> S + Sync + Send, f: impl Fn(&mut S, &T) -> R + Sync + Send) -> Vec<R>
where
    T: Sync,
    R: Send,
{
    let mut state = init();
    items.iter().map(|t| f(&mut state, t)).collect()
}

pub fn map<T, R>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R>
where
    T: Sync,
    R: Send,
{
    map_with(items, || (), |_, t| f(t))
}

/// Number of worker threads the helpers will use.
pub fn workers() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
