//! Data-parallel execution helper. With the `parallel` feature (default)
//! work items run on the rayon pool; without it the same call runs a plain
//! sequential loop. Output order always matches input order, so results are
//! identical either way.

/// Applies `f` to every item and collects the results in input order.
#[cfg(feature = "parallel")]
pub fn map_ordered<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

/// Applies `f` to every item and collects the results in input order.
#[cfg(not(feature = "parallel"))]
pub fn map_ordered<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Sync + Send,
{
    items.into_iter().map(f).collect()
}
