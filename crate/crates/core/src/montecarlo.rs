//! Block-parallel Monte Carlo averaging.
//!
//! Samples are grouped into fixed-size blocks; block `k` draws from stream
//! `k` of a ChaCha generator keyed by the master seed. Block moments are
//! merged in block order, so results do not depend on the thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const BLOCK: usize = 1 << 14;

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Parallel-merge of two partial summaries.
    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            return f64::INFINITY;
        }
        (self.variance() / self.count as f64).sqrt()
    }
}

/// Generator for block `block` under `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Averages `outputs` quantities over `samples` draws.
///
/// `sample` fills one value per output for a single draw; `make_state`
/// builds per-block scratch space.
pub fn estimate<S, I, F>(seed: u64, samples: usize, outputs: usize, make_state: I, sample: F) -> Vec<Moments>
where
    I: Fn() -> S + Sync,
    F: Fn(&mut ChaCha8Rng, &mut S, &mut [f64]) + Sync,
{
    let blocks = samples.div_ceil(BLOCK);
    let partial: Vec<Vec<Moments>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b as u64);
            let mut state = make_state();
            let mut out = vec![0.0; outputs];
            let mut acc = vec![Moments::default(); outputs];
            let n = BLOCK.min(samples - b * BLOCK);
            for _ in 0..n {
                sample(&mut rng, &mut state, &mut out);
                for (m, &v) in acc.iter_mut().zip(&out) {
                    m.push(v);
                }
            }
            acc
        })
        .collect();
    let mut total = vec![Moments::default(); outputs];
    for block in &partial {
        for (t, m) in total.iter_mut().zip(block) {
            t.merge(m);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn merge_matches_sequential() {
        let data: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut all = Moments::default();
        data.iter().for_each(|&x| all.push(x));
        let mut a = Moments::default();
        let mut b = Moments::default();
        data[..313].iter().for_each(|&x| a.push(x));
        data[313..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert_eq!(a.count, all.count);
        assert!((a.mean - all.mean).abs() < 1e-12);
        assert!((a.variance() - all.variance()).abs() < 1e-10);
    }

    #[test]
    fn uniform_mean() {
        let m = estimate(5, 100_000, 1, || (), |rng, _, out| out[0] = rng.random::<f64>());
        assert!((m[0].mean - 0.5).abs() < 4.0 * m[0].std_error());
        assert!((m[0].std_error() - (1.0f64 / 12.0 / 1e5).sqrt()).abs() < 1e-5);
    }

    #[test]
    fn independent_of_thread_count() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate(9, 50_000, 1, || (), |rng, _, out| out[0] = rng.random::<f64>()))
        };
        assert_eq!(run(1), run(3));
    }
}
