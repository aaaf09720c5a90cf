use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::mlp::{Mlp, Samples, Scratch};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            epochs: 200,
            batch_size: 32,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Contract("learning_rate must be positive"));
        }
        if self.batch_size == 0 {
            return Err(Error::Contract("batch_size must be positive"));
        }
        Ok(())
    }

    /// Record order for one epoch; a fresh ChaCha stream per epoch.
    fn epoch_order(&self, len: usize, epoch: u64) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(epoch);
        let mut order: Vec<usize> = (0..len).collect();
        order.shuffle(&mut rng);
        order
    }
}

fn check_samples(mlp: &Mlp, samples: &Samples) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if samples.dim != mlp.input_dim {
        return Err(Error::DimensionMismatch {
            expected: mlp.input_dim,
            got: samples.dim,
        });
    }
    Ok(())
}

/// One shuffled pass of mini-batch gradient descent on the mean squared error.
///
/// Returns the epoch MSE, where each record's error is measured before the
/// update of the batch it belongs to.
pub fn train_epoch(mlp: &mut Mlp, samples: &Samples, cfg: &TrainConfig, epoch: u64) -> Result<f64> {
    cfg.validate()?;
    check_samples(mlp, samples)?;
    let order = cfg.epoch_order(samples.len(), epoch);
    let mut grad = vec![0.0; mlp.param_count()];
    let mut scratch = Scratch::new(mlp);
    let mut total = 0.0;
    for batch in order.chunks(cfg.batch_size) {
        grad.iter_mut().for_each(|g| *g = 0.0);
        for &i in batch {
            total += mlp.accumulate_gradient(samples.row(i), samples.labels[i], &mut grad, &mut scratch);
        }
        mlp.apply_step(&grad, cfg.learning_rate / batch.len() as f64);
    }
    Ok(total / samples.len() as f64)
}

pub fn mse(mlp: &Mlp, samples: &Samples) -> Result<f64> {
    check_samples(mlp, samples)?;
    let mut scratch = Scratch::new(mlp);
    let total: f64 = samples
        .rows()
        .zip(&samples.labels)
        .map(|(x, y)| {
            let e = mlp.forward_with(x, &mut scratch) - y;
            e * e
        })
        .sum();
    Ok(total / samples.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_mse: f64,
    pub val_mse: f64,
}

/// Runs `cfg.epochs` epochs. Entry 0 reports the untrained network; entry
/// `e >= 1` has the running training MSE of epoch `e` and the validation MSE
/// after it.
pub fn train(
    mlp: &mut Mlp,
    train_set: &Samples,
    val_set: &Samples,
    cfg: &TrainConfig,
) -> Result<Vec<EpochStats>> {
    cfg.validate()?;
    let mut history = Vec::with_capacity(cfg.epochs + 1);
    history.push(EpochStats {
        epoch: 0,
        train_mse: mse(mlp, train_set)?,
        val_mse: mse(mlp, val_set)?,
    });
    for epoch in 1..=cfg.epochs {
        let train_mse = train_epoch(mlp, train_set, cfg, epoch as u64)?;
        history.push(EpochStats {
            epoch,
            train_mse,
            val_mse: mse(mlp, val_set)?,
        });
    }
    Ok(history)
}

/// Seeded shuffle split; returns `(train, validation)` with
/// `round(len * train_fraction)` training records.
pub fn split(samples: &Samples, train_fraction: f64, seed: u64) -> (Samples, Samples) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.shuffle(&mut rng);
    let cut = libm::round(samples.len() as f64 * train_fraction.clamp(0.0, 1.0)) as usize;
    (samples.select(&order[..cut]), samples.select(&order[cut..]))
}

/// Largest relative difference between the analytic gradient of the squared
/// error and central finite differences, over every parameter.
///
/// Each term is `|a - n| / max(|a|, |n|)`, with `0/0` taken as 0.
pub fn gradient_check(mlp: &Mlp, features: &[f64], label: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 1e-2) {
        return Err(Error::Contract("epsilon must lie in (0, 1e-2]"));
    }
    let (_, analytic) = mlp.squared_error_gradient(features, label)?;
    let base = mlp.params();
    let mut probe = mlp.clone();
    let mut params = base.clone();
    let loss = |net: &Mlp| -> Result<f64> {
        let e = net.forward(features)? - label;
        Ok(e * e)
    };
    let mut worst: f64 = 0.0;
    for (k, a) in analytic.iter().enumerate() {
        params[k] = base[k] + epsilon;
        probe.set_params(&params)?;
        let up = loss(&probe)?;
        params[k] = base[k] - epsilon;
        probe.set_params(&params)?;
        let down = loss(&probe)?;
        params[k] = base[k];
        let numeric = (up - down) / (2.0 * epsilon);
        let denom = a.abs().max(numeric.abs());
        if denom > 0.0 {
            worst = worst.max((a - numeric).abs() / denom);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_net() -> Mlp {
        let mut m = Mlp::zeros(1, 1);
        m.weights_in[0] = 0.5;
        m.bias_in[0] = 0.1;
        m.weights_out[0] = -0.3;
        m.bias_out = 0.2;
        m
    }

    #[test]
    fn fixed_point_leaves_network_unchanged() {
        let m = Mlp::new(3, 4, 5);
        let x = [0.3, -1.2, 2.0];
        let y = m.forward(&x).unwrap();
        let mut s = Samples::new(3);
        s.push(&x, y).unwrap();
        let mut trained = m.clone();
        let cfg = TrainConfig::default();
        let loss = train_epoch(&mut trained, &s, &cfg, 1).unwrap();
        assert_eq!(loss, 0.0);
        assert_eq!(trained, m);
    }

    #[test]
    fn single_step_matches_hand_gradient() {
        let m = tiny_net();
        let (x, y, lr) = (1.0, 0.0, 0.01);
        let a = libm::tanh(0.5 * x + 0.1);
        let out = -0.3 * a + 0.2;
        let e = out - y;
        let d_w_out = 2.0 * e * a;
        let d_b_out = 2.0 * e;
        let dz = 2.0 * e * -0.3 * (1.0 - a * a);
        let expected = [0.5 - lr * dz * x, 0.1 - lr * dz, -0.3 - lr * d_w_out, 0.2 - lr * d_b_out];

        let mut s = Samples::new(1);
        s.push(&[x], y).unwrap();
        let mut trained = m.clone();
        let cfg = TrainConfig {
            learning_rate: lr,
            batch_size: 1,
            ..TrainConfig::default()
        };
        let loss = train_epoch(&mut trained, &s, &cfg, 1).unwrap();
        assert!((loss - e * e).abs() < 1e-15);
        for (p, q) in trained.params().iter().zip(expected) {
            assert!((p - q).abs() < 1e-15, "{p} vs {q}");
        }
    }

    #[test]
    fn constant_label_pulls_output_bias() {
        let mut m = Mlp::zeros(2, 4);
        let mut s = Samples::new(2);
        for i in 0..64 {
            s.push(&[i as f64 * 0.1, -(i as f64) * 0.05], 3.0).unwrap();
        }
        let cfg = TrainConfig {
            learning_rate: 0.05,
            ..TrainConfig::default()
        };
        let mut prev = f64::INFINITY;
        let mut prev_bias = m.bias_out;
        for epoch in 1..=50 {
            let loss = train_epoch(&mut m, &s, &cfg, epoch).unwrap();
            assert!(loss <= prev);
            assert!(m.bias_out > prev_bias && m.bias_out <= 3.0);
            prev = loss;
            prev_bias = m.bias_out;
        }
    }

    #[test]
    fn empty_dataset_is_an_error() {
        let mut m = Mlp::zeros(2, 2);
        assert_eq!(
            train_epoch(&mut m, &Samples::new(2), &TrainConfig::default(), 0).unwrap_err(),
            Error::EmptyDataset
        );
    }

    #[test]
    fn gradient_check_examples() {
        let m = Mlp::new(3, 5, 17);
        let x = [0.4, -0.7, 1.3];
        let err = gradient_check(&m, &x, 0.25, 1e-5).unwrap();
        assert!(err <= 1e-4, "{err}");

        // Zero network, zero label: every gradient is exactly zero.
        let z = Mlp::zeros(3, 5);
        assert_eq!(gradient_check(&z, &x, 0.0, 1e-5).unwrap(), 0.0);

        let coarse = gradient_check(&m, &x, 0.25, 1e-3).unwrap();
        assert!(err <= coarse, "{err} > {coarse}");
        assert!(gradient_check(&m, &x, 0.25, 0.1).is_err());
    }

    #[test]
    fn training_is_deterministic() {
        let mut s = Samples::new(2);
        for i in 0..100 {
            let a = i as f64 * 0.37 % 3.0;
            let b = i as f64 * 0.11 % 2.0;
            s.push(&[a, b], a * b - 1.0).unwrap();
        }
        let cfg = TrainConfig {
            epochs: 5,
            seed: 3,
            ..TrainConfig::default()
        };
        let run = || {
            let mut m = Mlp::new(2, 6, 8);
            m.fit_normalization(&s).unwrap();
            let h = train(&mut m, &s, &s, &cfg).unwrap();
            (m, h)
        };
        let (a, ha) = run();
        let (b, hb) = run();
        assert_eq!(a, b);
        assert_eq!(ha, hb);
        assert_eq!(ha.len(), 6);
    }

    #[test]
    fn split_sizes() {
        let mut s = Samples::new(1);
        for i in 0..10 {
            s.push(&[i as f64], i as f64).unwrap();
        }
        let (a, b) = split(&s, 0.8, 1);
        assert_eq!((a.len(), b.len()), (8, 2));
        let mut all: Vec<f64> = a.labels.iter().chain(&b.labels).copied().collect();
        all.sort_by(f64::total_cmp);
        assert_eq!(all, (0..10).map(|i| i as f64).collect::<Vec<_>>());
    }
}
