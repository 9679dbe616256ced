//! Seeded, chunked sampling with order-independent reductions.
//!
//! Sample `k` is always drawn from the ChaCha8 stream `k / CHUNK` of `seed`,
//! so results do not depend on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const CHUNK: u64 = 2048;

/// Generator for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Lowest-valued sample of the run, ties going to the smaller sample index.
/// `draw` receives the generator and the sample index and returns `None`
/// for samples it rejects.
pub fn min_over_samples<T, F>(samples: u64, seed: u64, draw: F) -> Option<(f64, u64, T)>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> Option<(f64, T)> + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .filter_map(|c| {
            let mut rng = chunk_rng(seed, c);
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(samples);
            let mut best: Option<(f64, u64, T)> = None;
            for k in lo..hi {
                if let Some((value, payload)) = draw(&mut rng, k) {
                    if best.as_ref().map_or(true, |b| value < b.0) {
                        best = Some((value, k, payload));
                    }
                }
            }
            best
        })
        .reduce_with(|a, b| if better(&b, &a) { b } else { a })
}

/// Every sample of the run, in sample order.
pub fn collect_samples<T, F>(samples: u64, seed: u64, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = chunk_rng(seed, c);
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(samples);
            (lo..hi).map(|k| draw(&mut rng, k)).collect::<Vec<_>>()
        })
        .collect()
}

fn better<T>(a: &(f64, u64, T), b: &(f64, u64, T)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn min_is_thread_independent() {
        let run = || {
            min_over_samples(10_000, 9, |rng, _| {
                let x: f64 = rng.gen();
                Some((x, x))
            })
            .unwrap()
        };
        let a = run();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(run);
        assert_eq!(a.0.to_bits(), b.0.to_bits());
        assert_eq!(a.1, b.1);
    }
}
