use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// One-hidden-layer regressor: `w_out · tanh(W_in · normalize(x) + b_in) + b_out`.
///
/// `normalize(x)[j] = (x[j] - input_means[j]) / input_scales[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub input_dim: usize,
    pub hidden_dim: usize,
    /// `hidden_dim × input_dim`, row-major.
    pub weights_in: Vec<f64>,
    pub bias_in: Vec<f64>,
    pub weights_out: Vec<f64>,
    pub bias_out: f64,
    pub input_means: Vec<f64>,
    pub input_scales: Vec<f64>,
    pub seed: u64,
}

pub const DEFAULT_HIDDEN_DIM: usize = 16;

impl Mlp {
    /// Weights uniform in `±1/sqrt(fan_in)`, biases zero, identity normalization.
    pub fn new(input_dim: usize, hidden_dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mlp = Self::zeros(input_dim, hidden_dim);
        mlp.seed = seed;
        let bound_in = 1.0 / libm::sqrt(input_dim as f64);
        for w in &mut mlp.weights_in {
            *w = rng.random_range(-bound_in..bound_in);
        }
        let bound_out = 1.0 / libm::sqrt(hidden_dim as f64);
        for w in &mut mlp.weights_out {
            *w = rng.random_range(-bound_out..bound_out);
        }
        mlp
    }

    pub fn zeros(input_dim: usize, hidden_dim: usize) -> Self {
        Self {
            input_dim,
            hidden_dim,
            weights_in: vec![0.0; hidden_dim * input_dim],
            bias_in: vec![0.0; hidden_dim],
            weights_out: vec![0.0; hidden_dim],
            bias_out: 0.0,
            input_means: vec![0.0; input_dim],
            input_scales: vec![1.0; input_dim],
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (i, h) = (self.input_dim, self.hidden_dim);
        if i == 0 || h == 0 {
            return Err(Error::Contract("network dimensions must be positive"));
        }
        let shapes_ok = self.weights_in.len() == h * i
            && self.bias_in.len() == h
            && self.weights_out.len() == h
            && self.input_means.len() == i
            && self.input_scales.len() == i;
        if !shapes_ok {
            return Err(Error::Contract("parameter shapes do not match dimensions"));
        }
        let finite = self
            .weights_in
            .iter()
            .chain(&self.bias_in)
            .chain(&self.weights_out)
            .chain(&self.input_means)
            .chain(core::iter::once(&self.bias_out))
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Contract("parameters must be finite"));
        }
        if !self.input_scales.iter().all(|s| s.is_finite() && *s > 0.0) {
            return Err(Error::Contract("input scales must be positive"));
        }
        Ok(())
    }

    /// Sets per-feature mean and standard deviation from `samples`.
    /// Constant features get scale 1.
    pub fn fit_normalization(&mut self, samples: &Samples) -> Result<()> {
        self.check_dim(samples.dim)?;
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let n = samples.len() as f64;
        let mut means = vec![0.0; self.input_dim];
        for x in samples.rows() {
            for (m, v) in means.iter_mut().zip(x) {
                *m += v;
            }
        }
        means.iter_mut().for_each(|m| *m /= n);
        let mut vars = vec![0.0; self.input_dim];
        for x in samples.rows() {
            for ((s, v), m) in vars.iter_mut().zip(x).zip(&means) {
                *s += (v - m) * (v - m);
            }
        }
        self.input_scales = vars
            .into_iter()
            .map(|v| {
                let sd = libm::sqrt(v / n);
                if sd > 1e-12 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        self.input_means = means;
        Ok(())
    }

    pub fn param_count(&self) -> usize {
        self.weights_in.len() + self.bias_in.len() + self.weights_out.len() + 1
    }

    /// Trainable parameters in the order `weights_in, bias_in, weights_out, bias_out`.
    pub fn params(&self) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.param_count());
        p.extend_from_slice(&self.weights_in);
        p.extend_from_slice(&self.bias_in);
        p.extend_from_slice(&self.weights_out);
        p.push(self.bias_out);
        p
    }

    pub fn set_params(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.param_count() {
            return Err(Error::DimensionMismatch {
                expected: self.param_count(),
                got: params.len(),
            });
        }
        let (a, rest) = params.split_at(self.weights_in.len());
        let (b, rest) = rest.split_at(self.bias_in.len());
        let (c, d) = rest.split_at(self.weights_out.len());
        self.weights_in.copy_from_slice(a);
        self.bias_in.copy_from_slice(b);
        self.weights_out.copy_from_slice(c);
        self.bias_out = d[0];
        Ok(())
    }

    /// `params -= step * grad`, with `grad` laid out like [`Mlp::params`].
    pub(crate) fn apply_step(&mut self, grad: &[f64], step: f64) {
        let mut g = grad.iter();
        for p in self
            .weights_in
            .iter_mut()
            .chain(self.bias_in.iter_mut())
            .chain(self.weights_out.iter_mut())
            .chain(core::iter::once(&mut self.bias_out))
        {
            *p -= step * g.next().expect("gradient length");
        }
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got == self.input_dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.input_dim,
                got,
            })
        }
    }

    pub fn forward(&self, features: &[f64]) -> Result<f64> {
        self.check_dim(features.len())?;
        let mut scratch = Scratch::new(self);
        Ok(self.forward_with(features, &mut scratch))
    }

    pub(crate) fn forward_with(&self, features: &[f64], scratch: &mut Scratch) -> f64 {
        for (j, x) in features.iter().enumerate() {
            scratch.input[j] = (x - self.input_means[j]) / self.input_scales[j];
        }
        let mut out = self.bias_out;
        for h in 0..self.hidden_dim {
            let row = &self.weights_in[h * self.input_dim..(h + 1) * self.input_dim];
            let z: f64 = row
                .iter()
                .zip(&scratch.input)
                .fold(self.bias_in[h], |acc, (w, x)| acc + w * x);
            let a = libm::tanh(z);
            scratch.hidden[h] = a;
            out += self.weights_out[h] * a;
        }
        out
    }

    /// Adds the gradient of `(forward(x) - label)^2` to `grad` and returns the squared error.
    pub(crate) fn accumulate_gradient(
        &self,
        features: &[f64],
        label: f64,
        grad: &mut [f64],
        scratch: &mut Scratch,
    ) -> f64 {
        let out = self.forward_with(features, scratch);
        let err = out - label;
        let d_out = 2.0 * err;
        let (i_dim, h_dim) = (self.input_dim, self.hidden_dim);
        let (g_w_in, rest) = grad.split_at_mut(h_dim * i_dim);
        let (g_b_in, rest) = rest.split_at_mut(h_dim);
        let (g_w_out, g_b_out) = rest.split_at_mut(h_dim);
        g_b_out[0] += d_out;
        for h in 0..h_dim {
            let a = scratch.hidden[h];
            g_w_out[h] += d_out * a;
            let dz = d_out * self.weights_out[h] * (1.0 - a * a);
            g_b_in[h] += dz;
            let row = &mut g_w_in[h * i_dim..(h + 1) * i_dim];
            for (g, x) in row.iter_mut().zip(&scratch.input) {
                *g += dz * x;
            }
        }
        err * err
    }

    /// Analytic gradient of the squared error for one record.
    pub fn squared_error_gradient(&self, features: &[f64], label: f64) -> Result<(f64, Vec<f64>)> {
        self.check_dim(features.len())?;
        let mut grad = vec![0.0; self.param_count()];
        let mut scratch = Scratch::new(self);
        let loss = self.accumulate_gradient(features, label, &mut grad, &mut scratch);
        Ok((loss, grad))
    }
}

pub(crate) struct Scratch {
    input: Vec<f64>,
    hidden: Vec<f64>,
}

impl Scratch {
    pub(crate) fn new(mlp: &Mlp) -> Self {
        Self {
            input: vec![0.0; mlp.input_dim],
            hidden: vec![0.0; mlp.hidden_dim],
        }
    }
}

/// Labeled feature rows stored contiguously.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Samples {
    pub dim: usize,
    pub features: Vec<f64>,
    pub labels: Vec<f64>,
}

impl Samples {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            features: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn push(&mut self, features: &[f64], label: f64) -> Result<()> {
        if features.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: features.len(),
            });
        }
        self.features.extend_from_slice(features);
        self.labels.push(label);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.features.chunks_exact(self.dim.max(1))
    }

    /// Subset in the given index order.
    pub fn select(&self, indices: &[usize]) -> Samples {
        let mut out = Samples::new(self.dim);
        for &i in indices {
            out.features.extend_from_slice(self.row(i));
            out.labels.push(self.labels[i]);
        }
        out
    }

    pub fn label_variance(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let n = self.len() as f64;
        let mean = self.labels.iter().sum::<f64>() / n;
        self.labels.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_network() {
        let mut m = Mlp::zeros(6, 16);
        m.bias_out = 0.7;
        assert_eq!(m.forward(&[1.0, -2.0, 3.0, 0.5, 9.0, 4.0]).unwrap(), 0.7);
        assert_eq!(m.forward(&[0.0; 6]).unwrap(), 0.7);
    }

    #[test]
    fn one_by_one_network() {
        let mut m = Mlp::zeros(1, 1);
        m.weights_in[0] = 1.0;
        m.weights_out[0] = 2.0;
        assert_eq!(m.forward(&[0.0]).unwrap(), 0.0);
        let e2 = libm::exp(2.0);
        let tanh1 = (e2 - 1.0) / (e2 + 1.0);
        assert!((m.forward(&[1.0]).unwrap() - 2.0 * tanh1).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let m = Mlp::new(3, 4, 1);
        assert_eq!(
            m.forward(&[1.0, 2.0]).unwrap_err(),
            Error::DimensionMismatch {
                expected: 3,
                got: 2
            }
        );
    }

    #[test]
    fn init_is_seeded_and_bounded() {
        let a = Mlp::new(6, 16, 42);
        assert_eq!(a, Mlp::new(6, 16, 42));
        assert_ne!(a.weights_in, Mlp::new(6, 16, 43).weights_in);
        let b = 1.0 / libm::sqrt(6.0);
        assert!(a.weights_in.iter().all(|w| w.abs() <= b));
        assert!(a.weights_out.iter().all(|w| w.abs() <= 0.25));
        assert!(a.validate().is_ok());
    }

    #[test]
    fn params_round_trip() {
        let mut a = Mlp::new(3, 5, 9);
        let p = a.params();
        assert_eq!(p.len(), a.param_count());
        let doubled: Vec<f64> = p.iter().map(|v| v * 2.0).collect();
        a.set_params(&doubled).unwrap();
        assert_eq!(a.params(), doubled);
        assert!(a.set_params(&p[1..]).is_err());
    }

    #[test]
    fn normalization_from_samples() {
        let mut s = Samples::new(2);
        s.push(&[1.0, 5.0], 0.0).unwrap();
        s.push(&[3.0, 5.0], 0.0).unwrap();
        let mut m = Mlp::zeros(2, 1);
        m.fit_normalization(&s).unwrap();
        assert_eq!(m.input_means, vec![2.0, 5.0]);
        assert_eq!(m.input_scales, vec![1.0, 1.0]);
        assert!(m.validate().is_ok());
    }

    #[test]
    fn validation_rejects_bad_scales() {
        let mut m = Mlp::zeros(2, 2);
        m.input_scales[1] = 0.0;
        assert!(m.validate().is_err());
        let mut m = Mlp::zeros(2, 2);
        m.bias_out = f64::NAN;
        assert!(m.validate().is_err());
    }
}
