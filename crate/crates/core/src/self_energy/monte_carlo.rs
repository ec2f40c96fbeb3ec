use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::distribution::{add, norm, sub, Vec3};
use super::{Kernel, PairMoments, PairTask, Strategy};

/// Samples per plain-MC work item.
const BATCH: u64 = 8192;
/// Strata per stratified work item.
const STRATA_PER_ITEM: u64 = 1024;

#[derive(Debug, Clone, Copy)]
struct WorkItem {
    task: usize,
    item: u64,
    /// Plain: sample range. Stratified: stratum range.
    start: u64,
    end: u64,
}

/// Sums returned by one work item. Plain: Σf and Σf² over its samples.
/// Stratified: Σ_h mean_h and Σ_h var_h/n_h over its strata.
#[derive(Debug, Clone, Copy, Default)]
struct Partial {
    a: f64,
    b: f64,
}

fn stream_id(task: usize, item: u64) -> u64 {
    ((task as u64) << 24) | item
}

fn strata_per_axis(samples: u64) -> u64 {
    let k = ((samples / 2) as f64).cbrt().floor() as u64;
    // cbrt rounding
    let k = if (k + 1).pow(3) * 2 <= samples { k + 1 } else { k };
    k.max(1)
}

pub(super) fn integrate_pairs(tasks: &[PairTask], strategy: Strategy, seed: u64) -> Vec<PairMoments> {
    let mut items = Vec::new();
    for (t, task) in tasks.iter().enumerate() {
        let (units, per_item) = match strategy {
            Strategy::StratifiedMc => (strata_per_axis(task.samples).pow(3), STRATA_PER_ITEM),
            _ => (task.samples, BATCH),
        };
        let mut start = 0;
        let mut item = 0;
        while start < units {
            let end = (start + per_item).min(units);
            items.push(WorkItem {
                task: t,
                item,
                start,
                end,
            });
            start = end;
            item += 1;
        }
    }

    let partials: Vec<Partial> = items
        .par_iter()
        .map(|w| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream_id(w.task, w.item));
            let task = &tasks[w.task];
            match strategy {
                Strategy::StratifiedMc => stratified_item(task, w, &mut rng),
                _ => plain_item(task, w, &mut rng),
            }
        })
        .collect();

    let mut sums = vec![Partial::default(); tasks.len()];
    for (w, p) in items.iter().zip(&partials) {
        sums[w.task].a += p.a;
        sums[w.task].b += p.b;
    }
    tasks
        .iter()
        .zip(sums)
        .map(|(task, s)| match strategy {
            Strategy::StratifiedMc => {
                let strata = strata_per_axis(task.samples).pow(3) as f64;
                PairMoments {
                    mean: s.a / strata,
                    var_of_mean: s.b / (strata * strata),
                }
            }
            _ => {
                let n = task.samples as f64;
                let mean = s.a / n;
                let var = ((s.b / n - mean * mean) * n / (n - 1.0)).max(0.0);
                PairMoments {
                    mean,
                    var_of_mean: var / n,
                }
            }
        })
        .collect()
}

fn uniform3(rng: &mut ChaCha8Rng) -> Vec3 {
    [rng.random(), rng.random(), rng.random()]
}

/// One sample of the normalised kernel given the unit-cube point `u` that
/// places r₁.
#[inline]
fn sample(task: &PairTask, u: Vec3, rng: &mut ChaCha8Rng) -> f64 {
    let r1 = task.p.body.map_unit_cube(u);
    match task.kernel {
        Kernel::Direct => {
            let r2 = task.q.body.map_unit_cube(uniform3(rng));
            1.0 / norm(sub(r1, r2))
        }
        Kernel::Importance { reach } => {
            // |s| has density ∝ s on [0, reach]; p(s) = 1/(|s| · 2π reach²)
            let w = uniform3(rng);
            let len = reach * w[0].sqrt();
            let cos_t = 2.0 * w[1] - 1.0;
            let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
            let phi = 2.0 * PI * w[2];
            let s = [len * sin_t * phi.cos(), len * sin_t * phi.sin(), len * cos_t];
            if task.q.body.contains(add(r1, s)) {
                2.0 * PI * reach * reach / task.q.body.volume()
            } else {
                0.0
            }
        }
    }
}

fn plain_item(task: &PairTask, w: &WorkItem, rng: &mut ChaCha8Rng) -> Partial {
    let mut acc = Partial::default();
    for _ in w.start..w.end {
        let u = uniform3(rng);
        let f = sample(task, u, rng);
        acc.a += f;
        acc.b += f * f;
    }
    acc
}

fn stratified_item(task: &PairTask, w: &WorkItem, rng: &mut ChaCha8Rng) -> Partial {
    let k = strata_per_axis(task.samples);
    let strata = k.pow(3);
    let base = task.samples / strata;
    let extra = task.samples % strata;
    let kf = k as f64;
    let mut acc = Partial::default();
    for h in w.start..w.end {
        let n_h = base + u64::from(h < extra);
        let cell = [(h / (k * k)) as f64, ((h / k) % k) as f64, (h % k) as f64];
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..n_h {
            let j = uniform3(rng);
            let u = [
                (cell[0] + j[0]) / kf,
                (cell[1] + j[1]) / kf,
                (cell[2] + j[2]) / kf,
            ];
            let f = sample(task, u, rng);
            s1 += f;
            s2 += f * f;
        }
        let n = n_h as f64;
        let mean = s1 / n;
        let var = ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
        acc.a += mean;
        acc.b += var / n;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strata_leave_at_least_two_samples_each() {
        for n in [16, 17, 100, 1000, 2000, 123_457, 1_000_000] {
            let k = strata_per_axis(n);
            assert!(k.pow(3) * 2 <= n, "n={n} k={k}");
            assert!((k + 1).pow(3) * 2 > n, "n={n} k={k}");
        }
    }

    #[test]
    fn stream_ids_distinct_across_tasks_and_items() {
        assert_ne!(stream_id(0, 1), stream_id(1, 0));
        assert_ne!(stream_id(2, 5), stream_id(5, 2));
    }
}
