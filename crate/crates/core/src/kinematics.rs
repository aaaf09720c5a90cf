//! Ball motion under per-cycle geometric velocity decay.
//!
//! The server convention is followed: each cycle the ball first moves by its
//! current velocity, then the velocity is multiplied by `decay`. After `n`
//! cycles the ball has therefore covered
//! `initial_speed * (1 - decay^n) / (1 - decay)` meters.

use alloc::vec::Vec;

use crate::{Error, Result, Vec2};

const UNIT_TOLERANCE: f64 = 1e-9;

/// Default per-cycle speed below which a rolling ball is considered stopped.
pub const DEFAULT_STOP_SPEED: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallParams {
    /// Speed of the first displacement, meters per cycle.
    pub initial_speed: f64,
    /// Per-cycle velocity factor in `(0, 1)`.
    pub decay: f64,
}

impl Default for BallParams {
    fn default() -> Self {
        Self {
            initial_speed: 3.0,
            decay: 0.94,
        }
    }
}

impl BallParams {
    pub fn new(initial_speed: f64, decay: f64) -> Result<Self> {
        let params = Self {
            initial_speed,
            decay,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.initial_speed.is_finite()
            && self.initial_speed > 0.0
            && self.decay > 0.0
            && self.decay < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidBallParams {
                initial_speed: self.initial_speed,
                decay: self.decay,
            })
        }
    }

    /// Distance covered after `n` cycles.
    #[inline]
    pub fn progress_at(&self, n: u32) -> f64 {
        self.initial_speed * (1.0 - libm::pow(self.decay, n as f64)) / (1.0 - self.decay)
    }

    /// Speed of the displacement made during cycle `n` (from position `n` to `n + 1`).
    #[inline]
    pub fn speed_at(&self, n: u32) -> f64 {
        self.initial_speed * libm::pow(self.decay, n as f64)
    }
}

/// Ball position after `n` cycles starting at `origin` and moving along `direction`.
pub fn ball_position_at(origin: Vec2, direction: Vec2, params: &BallParams, n: u32) -> Result<Vec2> {
    let norm = direction.length();
    if !((norm - 1.0).abs() <= UNIT_TOLERANCE) {
        return Err(Error::NonUnitDirection { norm });
    }
    Ok(origin + direction * params.progress_at(n))
}

/// Limit of the total distance a kicked ball can roll, `initial_speed / (1 - decay)`.
///
/// Reported on a 1e-9 m grid so that decimal decay values give the decimal
/// limit (`1 - 0.94` is not exactly `0.06` in binary).
pub fn max_travel_distance(params: &BallParams) -> f64 {
    let raw = params.initial_speed / (1.0 - params.decay);
    libm::round(raw * 1e9) / 1e9
}

/// Per-cycle discretization of a shot from `origin` toward `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPath {
    pub origin: Vec2,
    pub target: Vec2,
    /// `positions[n]` is the ball after `n` cycles; `positions[0] == origin`.
    pub positions: Vec<Vec2>,
    /// First cycle whose position has reached or passed the target, if any.
    pub crossed_goal_at: Option<usize>,
}

impl BallPath {
    pub fn direction(&self) -> Vec2 {
        (self.target - self.origin)
            .normalized()
            .unwrap_or(Vec2::new(1.0, 0.0))
    }
}

/// Simulates a shot cycle by cycle until it reaches the target distance or
/// slows below `stop_speed`.
pub fn simulate_path(
    ball: Vec2,
    target: Vec2,
    params: &BallParams,
    stop_speed: f64,
) -> Result<BallPath> {
    params.validate()?;
    if !(stop_speed > 0.0) {
        return Err(Error::Contract("stop_speed must be positive"));
    }
    let offset = target - ball;
    let distance = offset.length();
    let direction = offset.normalized().ok_or(Error::DegenerateTarget)?;
    let max_travel = max_travel_distance(params);
    if distance >= max_travel {
        return Err(Error::UnreachableTarget {
            distance,
            max_travel,
        });
    }

    let mut positions = Vec::with_capacity(32);
    positions.push(ball);
    let mut crossed_goal_at = None;
    let mut n = 0u32;
    while params.speed_at(n) >= stop_speed {
        n += 1;
        let progress = params.progress_at(n);
        positions.push(ball + direction * progress);
        if progress >= distance {
            crossed_goal_at = Some(n as usize);
            break;
        }
    }

    Ok(BallPath {
        origin: ball,
        target,
        positions,
        crossed_goal_at,
    })
}
