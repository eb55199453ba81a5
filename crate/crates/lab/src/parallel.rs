//! Multi-threaded ensemble evaluation.
//!
//! Walkers are computed in parallel on their own substreams and reduced in
//! walker-index order, so results are identical for every thread count.

use std::ops::Range;

use comptonlab_core::nelson::{self, DiffusionSpec, QuantumModel, WalkerEnsemble};
use comptonlab_core::randomwalk::{
    self, Displacement, WalkAccumulator, WalkEnsembleResult, WalkSpec,
};
use comptonlab_core::Result;
use rayon::prelude::*;

/// Walkers per parallel batch when only the summary is kept.
const CHUNK: u64 = 1 << 16;

fn pool(threads: usize) -> Option<rayon::ThreadPool> {
    (threads > 1).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("failed to start worker pool")
    })
}

/// Run `f` over `range`, collecting in index order.
fn indexed_map<T, F>(pool: Option<&rayon::ThreadPool>, range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match pool {
        None => range.map(f).collect(),
        Some(p) => p.install(|| range.into_par_iter().map(f).collect()),
    }
}

pub fn walk_displacements(spec: &WalkSpec, threads: usize) -> Result<Vec<Displacement>> {
    spec.validate()?;
    indexed_map(pool(threads).as_ref(), 0..spec.walkers, |i| {
        randomwalk::simulate_walk(spec, i)
    })
    .into_iter()
    .collect()
}

/// Ensemble summary in bounded memory.
pub fn estimate_rms(spec: &WalkSpec, threads: usize) -> Result<WalkEnsembleResult> {
    spec.validate()?;
    let pool = pool(threads);
    let mut acc = WalkAccumulator::new(spec.dim);
    let mut start = 0;
    while start < spec.walkers {
        let end = spec.walkers.min(start + CHUNK);
        for d in indexed_map(pool.as_ref(), start..end, |i| {
            randomwalk::simulate_walk(spec, i)
        }) {
            acc.push(&d?);
        }
        start = end;
    }
    Ok(acc.finish(spec.seed))
}

pub fn evolve_ensemble(
    model: &QuantumModel,
    spec: &DiffusionSpec,
    threads: usize,
) -> Result<WalkerEnsemble> {
    spec.check_against(model)?;
    let positions = indexed_map(pool(threads).as_ref(), 0..spec.walkers, |i| {
        nelson::evolve_walker(model, spec, i)
    });
    Ok(WalkerEnsemble {
        positions,
        time: spec.t_end,
        seed: spec.seed,
    })
}
