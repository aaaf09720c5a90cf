//! Neural surrogate of the single-opponent interception margin.
//!
//! A small MLP predicts the margin one opponent leaves on a shot. Scenario
//! margins are the minimum over opponents, each prediction shifted by
//! `factor * poscount` to account for stale observations.

mod mlp;
mod train;

use alloc::vec::Vec;

pub use mlp::{Mlp, Samples, DEFAULT_HIDDEN_DIM};
pub use train::{gradient_check, mse, split, train, train_epoch, EpochStats, TrainConfig};

use crate::evaluation::{select_by_margin, Method, Scenario, ShootDecision, TargetEvaluation, TargetGrid};
use crate::features::{encode, Encoding};
use crate::interception::Opponent;
use crate::{Error, Result, Vec2, MARGIN_CAP};

/// Additive correction per unit of poscount, in cycles.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PoscountCorrection {
    pub factor: f64,
}

impl PoscountCorrection {
    pub const NONE: PoscountCorrection = PoscountCorrection { factor: 0.0 };

    #[inline]
    pub fn apply(&self, prediction: f64, poscount: u32) -> f64 {
        prediction + self.factor * poscount as f64
    }
}

/// Zero-intercept least-squares slope of residual on poscount.
pub fn calibrate_poscount_factor(pairs: &[(u32, f64)]) -> Result<PoscountCorrection> {
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(p, r) in pairs {
        let p = p as f64;
        sxx += p * p;
        sxy += p * r;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateRegression);
    }
    let factor = sxy / sxx;
    if !factor.is_finite() {
        return Err(Error::Contract("residuals must be finite"));
    }
    Ok(PoscountCorrection { factor })
}

/// A trained network together with its input encoding and poscount correction.
#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateModel {
    pub mlp: Mlp,
    pub encoding: Encoding,
    pub correction: PoscountCorrection,
}

impl SurrogateModel {
    pub fn new(mlp: Mlp, encoding: Encoding) -> Result<Self> {
        if mlp.input_dim != encoding.dim() {
            return Err(Error::DimensionMismatch {
                expected: encoding.dim(),
                got: mlp.input_dim,
            });
        }
        Ok(Self {
            mlp,
            encoding,
            correction: PoscountCorrection::NONE,
        })
    }

    pub fn predict_scenario_margin(&self, scenario: &Scenario, target: Vec2) -> Result<f64> {
        predict_scenario_margin(&self.mlp, scenario, target, self.encoding, self.correction)
    }

    pub fn evaluate_targets(&self, scenario: &Scenario, grid: &TargetGrid) -> Result<TargetEvaluation> {
        predict_targets(&self.mlp, scenario, grid, self.encoding, self.correction)
    }
}

/// Uncorrected single-opponent prediction.
pub fn predict_opponent_margin(
    mlp: &Mlp,
    encoding: Encoding,
    ball: Vec2,
    opponent: &Opponent,
    target: Vec2,
) -> Result<f64> {
    let features = encode(encoding, ball, opponent.position, target)?;
    mlp.forward(features.as_slice())
}

/// Minimum over opponents of the corrected per-opponent predictions;
/// `MARGIN_CAP` when there are no opponents.
pub fn predict_scenario_margin(
    mlp: &Mlp,
    scenario: &Scenario,
    target: Vec2,
    encoding: Encoding,
    correction: PoscountCorrection,
) -> Result<f64> {
    scenario
        .opponents
        .iter()
        .try_fold(MARGIN_CAP, |best, opp| {
            let p = predict_opponent_margin(mlp, encoding, scenario.ball, opp, target)?;
            Ok(best.min(correction.apply(p, opp.poscount)))
        })
}

/// Predicted margins for every grid target, in the same shape as the oracle's.
pub fn predict_targets(
    mlp: &Mlp,
    scenario: &Scenario,
    grid: &TargetGrid,
    encoding: Encoding,
    correction: PoscountCorrection,
) -> Result<TargetEvaluation> {
    let mut margins = Vec::with_capacity(grid.len());
    let mut means = Vec::with_capacity(grid.len());
    for &target in &grid.points {
        let mut min = MARGIN_CAP;
        let mut sum = 0.0;
        for opp in &scenario.opponents {
            let p = predict_opponent_margin(mlp, encoding, scenario.ball, opp, target)?;
            let p = correction.apply(p, opp.poscount);
            min = min.min(p);
            sum += p;
        }
        let mean = if scenario.opponents.is_empty() {
            MARGIN_CAP
        } else {
            sum / scenario.opponents.len() as f64
        };
        margins.push(min);
        means.push(mean);
    }
    Ok(TargetEvaluation::from_margins(margins, means))
}

/// Margin-maximizing selection over predicted margins.
pub fn surrogate_select(
    predicted: &TargetEvaluation,
    grid: &TargetGrid,
    threshold: f64,
) -> Result<ShootDecision> {
    select_by_margin(predicted, grid, threshold, Method::Surrogate)
}
