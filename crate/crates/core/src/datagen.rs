//! Seeded scenario sampling and oracle labeling.
//!
//! Scenario `i` of a seed is drawn from its own ChaCha stream, so any index can
//! be generated without touching the others.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::evaluation::{FieldConfig, Scenario, TargetGrid};
use crate::features::Encoding;
use crate::interception::{intercept_margin, Opponent};
use crate::kinematics::{simulate_path, BallParams, BallPath, DEFAULT_STOP_SPEED};
use crate::surrogate::Samples;
use crate::{Error, Result, Vec2, MARGIN_CAP};

const SCENARIO_DOMAIN: u64 = 0x5343_454e_4152_494f;
const STALENESS_DOMAIN: u64 = 0x5354_414c_454e_4553;

/// Generator for the `index`-th draw of a `(seed, domain)` family.
pub fn counter_rng(seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Sampling boxes for attacking situations near the opponent goal.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub ball_x: (f64, f64),
    pub ball_y: (f64, f64),
    /// Inclusive, goalie included.
    pub n_opponents: (usize, usize),
    pub opponent_x: (f64, f64),
    pub opponent_y: (f64, f64),
    pub goalie_probability: f64,
    /// Inclusive.
    pub poscount: (u32, u32),
    pub seed: u64,
    pub ball_params: BallParams,
    pub field: FieldConfig,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            ball_x: (36.0, 52.0),
            ball_y: (-20.0, 20.0),
            n_opponents: (1, 11),
            opponent_x: (40.0, 52.5),
            opponent_y: (-20.0, 20.0),
            goalie_probability: 0.9,
            poscount: (0, 30),
            seed: 0,
            ball_params: BallParams::default(),
            field: FieldConfig::default(),
        }
    }
}

impl ScenarioSpec {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let f = &self.field;
        let range_ok = |(lo, hi): (f64, f64), limit: f64| lo.is_finite() && hi.is_finite() && lo <= hi && lo >= -limit && hi <= limit;
        if !range_ok(self.ball_x, f.half_length)
            || !range_ok(self.ball_y, f.half_width)
            || !range_ok(self.opponent_x, f.half_length)
            || !range_ok(self.opponent_y, f.half_width)
        {
            return Err(Error::Contract("sampling boxes must be non-empty and inside the field"));
        }
        if self.ball_x.1 >= f.goal_line_x {
            return Err(Error::Contract("ball box must stay in front of the goal line"));
        }
        if self.n_opponents.0 > self.n_opponents.1 || self.poscount.0 > self.poscount.1 {
            return Err(Error::Contract("count ranges must be non-empty"));
        }
        if !(0.0..=1.0).contains(&self.goalie_probability) {
            return Err(Error::Contract("goalie_probability must lie in [0, 1]"));
        }
        self.ball_params.validate()?;
        f.validate()
    }
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

/// Deterministic function of `(spec.seed, index)`.
///
/// When a goalie is drawn it is the first opponent, standing on the goal line
/// between the posts.
pub fn sample_scenario(spec: &ScenarioSpec, index: u64) -> Scenario {
    let mut rng = counter_rng(spec.seed, SCENARIO_DOMAIN, index);
    let ball = Vec2::new(uniform(&mut rng, spec.ball_x), uniform(&mut rng, spec.ball_y));
    let n = rng.random_range(spec.n_opponents.0..=spec.n_opponents.1);
    let mut opponents = Vec::with_capacity(n);
    let has_goalie = n > 0 && rng.random_bool(spec.goalie_probability);
    if has_goalie {
        let half = spec.field.goal_half_width;
        let y = uniform(&mut rng, (-half, half));
        let poscount = rng.random_range(spec.poscount.0..=spec.poscount.1);
        opponents.push(Opponent::goalie(Vec2::new(spec.field.goal_line_x, y)).with_poscount(poscount));
    }
    while opponents.len() < n {
        let p = Vec2::new(uniform(&mut rng, spec.opponent_x), uniform(&mut rng, spec.opponent_y));
        let poscount = rng.random_range(spec.poscount.0..=spec.poscount.1);
        opponents.push(Opponent::field_player(p).with_poscount(poscount));
    }
    Scenario {
        ball,
        opponents,
        ball_params: spec.ball_params,
    }
}

/// One `(opponent, target)` training example.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetRecord {
    pub scenario_id: u64,
    pub ball: Vec2,
    pub opponent: Vec2,
    pub poscount: u32,
    pub target: Vec2,
    /// Single-opponent intercept margin, cycles; `-MARGIN_CAP` if the shot
    /// cannot reach the goal.
    pub margin: f64,
}

fn shot_path(scenario: &Scenario, target: Vec2) -> Option<BallPath> {
    simulate_path(scenario.ball, target, &scenario.ball_params, DEFAULT_STOP_SPEED)
        .ok()
        .filter(|p| p.crossed_goal_at.is_some())
}

/// Records for one scenario in `(opponent, target)` order.
pub fn label_scenario(scenario_id: u64, scenario: &Scenario, grid: &TargetGrid) -> Vec<DatasetRecord> {
    let paths: Vec<Option<BallPath>> = grid.points.iter().map(|&t| shot_path(scenario, t)).collect();
    let mut records = Vec::with_capacity(scenario.opponents.len() * grid.len());
    for opp in &scenario.opponents {
        for (&target, path) in grid.points.iter().zip(&paths) {
            let margin = path
                .as_ref()
                .map_or(-MARGIN_CAP, |p| intercept_margin(opp, p).margin);
            records.push(DatasetRecord {
                scenario_id,
                ball: scenario.ball,
                opponent: opp.position,
                poscount: opp.poscount,
                target,
                margin,
            });
        }
    }
    records
}

/// Records in `(scenario, opponent, target)` order; scenario ids are list positions.
pub fn label_records(scenarios: &[Scenario], grid: &TargetGrid) -> Vec<DatasetRecord> {
    scenarios
        .iter()
        .enumerate()
        .flat_map(|(i, s)| label_scenario(i as u64, s, grid))
        .collect()
}

/// Feature rows for a surrogate with the given encoding.
pub fn records_to_samples(records: &[DatasetRecord], encoding: Encoding) -> Result<Samples> {
    let mut samples = Samples::new(encoding.dim());
    for r in records {
        let f = crate::features::encode(encoding, r.ball, r.opponent, r.target)?;
        samples.push(f.as_slice(), r.margin)?;
    }
    Ok(samples)
}

/// Where the opponents of a scenario may actually be, given how stale each
/// observation is: every opponent moves by a random vector no longer than
/// `poscount * speed_max`.
pub fn stale_truth(scenario: &Scenario, seed: u64, index: u64) -> Scenario {
    let mut rng = counter_rng(seed, STALENESS_DOMAIN, index);
    let opponents = scenario
        .opponents
        .iter()
        .map(|o| {
            let reach = o.poscount as f64 * o.speed_max;
            let radius = reach * rng.random::<f64>();
            let angle = rng.random_range(0.0..2.0 * PI);
            let (s, c) = libm::sincos(angle);
            o.at(o.position + Vec2::new(c * radius, s * radius))
        })
        .collect();
    Scenario {
        ball: scenario.ball,
        opponents,
        ball_params: scenario.ball_params,
    }
}

/// `(poscount, residual)` pairs for calibrating the poscount correction.
///
/// For every scenario and reachable target, `predict` gives each opponent's
/// margin at its observed (stale) position. The residual is the oracle margin
/// against the displaced opponents minus the smallest prediction, paired with
/// the poscount of the opponent that produced that smallest prediction.
pub fn staleness_residuals<F>(
    scenarios: &[Scenario],
    grid: &TargetGrid,
    seed: u64,
    mut predict: F,
) -> Result<Vec<(u32, f64)>>
where
    F: FnMut(&Scenario, &Opponent, Vec2) -> Result<f64>,
{
    let mut pairs = Vec::new();
    for (index, scenario) in scenarios.iter().enumerate() {
        if scenario.opponents.is_empty() {
            continue;
        }
        let truth = stale_truth(scenario, seed, index as u64);
        for &target in &grid.points {
            let Some(path) = shot_path(scenario, target) else {
                continue;
            };
            let mut predicted = f64::INFINITY;
            let mut poscount = 0;
            for opp in &scenario.opponents {
                let p = predict(scenario, opp, target)?;
                if p < predicted {
                    predicted = p;
                    poscount = opp.poscount;
                }
            }
            let actual = truth
                .opponents
                .iter()
                .map(|o| intercept_margin(o, &path).margin)
                .fold(f64::INFINITY, f64::min);
            pairs.push((poscount, actual - predicted));
        }
    }
    Ok(pairs)
}

/// Oracle predictor for [`staleness_residuals`]: the exact margin at the observed position.
pub fn oracle_opponent_margin(scenario: &Scenario, opponent: &Opponent, target: Vec2) -> Result<f64> {
    Ok(shot_path(scenario, target).map_or(-MARGIN_CAP, |p| intercept_margin(opponent, &p).margin))
}
