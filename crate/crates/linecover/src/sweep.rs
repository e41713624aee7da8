//! The data-parallel character sweep.

use linecover_core::certify::{twist_data, CoverContext, TwistData};
use linecover_core::cover::Character;
use linecover_core::Result;
use rayon::prelude::*;

/// [`twist_data`] over all representatives on the current rayon pool,
/// returned in input order.
pub fn parallel(ctx: &CoverContext, reps: &[Character]) -> Vec<Result<TwistData>> {
    reps.par_iter().map(|chi| twist_data(ctx, chi)).collect()
}

/// Run `f` on a pool with `threads` workers; 0 means rayon's default.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> anyhow::Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    Ok(pool.install(f))
}
