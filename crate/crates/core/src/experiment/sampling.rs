//! Seeded multinomial sampling of four-fold counts.
//!
//! Each setting row draws from its own ChaCha stream: the key is the run
//! seed and the stream id is the row index, so a row's counts do not depend
//! on how many other rows exist or in which order they are drawn.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::{exact_counts, CountsTable, ExperimentConfig, Setting, SettingCounts};
use crate::error::{Error, Result};

fn stream_for(seed: u64, row: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(row as u64);
    rng
}

/// Multinomial draw via successive conditional binomials.
fn multinomial(rng: &mut ChaCha8Rng, trials: u64, probs: &[f64]) -> Result<Vec<u64>> {
    let mut remaining = trials;
    let mut mass = 1.0f64;
    let mut out = Vec::with_capacity(probs.len());
    for (i, &p) in probs.iter().enumerate() {
        if i + 1 == probs.len() {
            out.push(remaining);
            break;
        }
        let k = if remaining == 0 || p <= 0.0 {
            0
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(remaining, q)
                .map_err(|e| Error::param("probability", e.to_string()))?
                .sample(rng)
        };
        out.push(k);
        remaining -= k;
        mass -= p;
        if mass <= 0.0 {
            mass = f64::MIN_POSITIVE;
        }
    }
    Ok(out)
}

/// Draws `trials` emission attempts per row of an exact table.
pub fn sample_from_probabilities(
    exact: &CountsTable<f64>,
    trials: u64,
    seed: u64,
) -> Result<CountsTable<u64>> {
    if trials == 0 {
        return Err(Error::param("events", "must be at least 1"));
    }
    let rows = exact
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut probs: Vec<f64> = row.classes.iter().map(|p| p.max(0.0)).collect();
            let accepted: f64 = probs.iter().sum();
            probs.push((1.0 - accepted).max(0.0));
            let draws = multinomial(&mut stream_for(seed, i), trials, &probs)?;
            let mut classes = [0u64; 8];
            classes.copy_from_slice(&draws[..8]);
            Ok(SettingCounts {
                setting: row.setting,
                classes,
                reject: draws[8],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CountsTable { trials, rows })
}

/// Synthetic count data: `config.events` attempts per setting, seeded by
/// `config.seed`.
pub fn sample_counts(config: &ExperimentConfig, settings: &[Setting]) -> Result<CountsTable<u64>> {
    let exact = exact_counts(config, settings)?;
    sample_from_probabilities(&exact, config.events, config.seed)
}
