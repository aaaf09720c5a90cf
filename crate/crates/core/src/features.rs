//! Surrogate input encodings.
//!
//! The raw encoding packs the six coordinates as-is. The pattern encoding
//! keeps only the ball-target distance, the ball-opponent distance and the
//! unsigned angle between those two vectors, which is invariant under any
//! rigid motion or reflection of the pitch.

use crate::{Error, Result, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    Raw,
    Pattern,
}

impl Encoding {
    pub const fn dim(self) -> usize {
        match self {
            Encoding::Raw => RawFeatures::DIM,
            Encoding::Pattern => PatternFeatures::DIM,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Encoding::Raw => "raw",
            Encoding::Pattern => "pattern",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "raw" => Some(Encoding::Raw),
            "pattern" => Some(Encoding::Pattern),
            _ => None,
        }
    }
}

/// `(ball_x, ball_y, opp_x, opp_y, target_x, target_y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawFeatures(pub [f64; 6]);

impl RawFeatures {
    pub const DIM: usize = 6;

    pub fn decode(&self) -> (Vec2, Vec2, Vec2) {
        let v = &self.0;
        (
            Vec2::new(v[0], v[1]),
            Vec2::new(v[2], v[3]),
            Vec2::new(v[4], v[5]),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternFeatures {
    pub dist_ball_target: f64,
    pub dist_ball_opp: f64,
    /// Unsigned angle in `[0, π]`.
    pub angle: f64,
}

impl PatternFeatures {
    pub const DIM: usize = 3;

    pub fn to_array(self) -> [f64; 3] {
        [self.dist_ball_target, self.dist_ball_opp, self.angle]
    }
}

pub fn encode_raw(ball: Vec2, opp: Vec2, target: Vec2) -> RawFeatures {
    RawFeatures([ball.x, ball.y, opp.x, opp.y, target.x, target.y])
}

/// An opponent standing on the ball gets angle 0.
pub fn encode_pattern(ball: Vec2, opp: Vec2, target: Vec2) -> Result<PatternFeatures> {
    let to_target = target - ball;
    let to_opp = opp - ball;
    let dist_ball_target = to_target.length();
    if dist_ball_target == 0.0 {
        return Err(Error::DegenerateTarget);
    }
    let dist_ball_opp = to_opp.length();
    let angle = if dist_ball_opp == 0.0 {
        0.0
    } else {
        libm::atan2(to_target.cross(to_opp).abs(), to_target.dot(to_opp))
    };
    Ok(PatternFeatures {
        dist_ball_target,
        dist_ball_opp,
        angle,
    })
}

/// A feature vector of either encoding, stored inline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Features {
    values: [f64; 6],
    len: usize,
}

impl Features {
    pub fn as_slice(&self) -> &[f64] {
        &self.values[..self.len]
    }
}

impl From<RawFeatures> for Features {
    fn from(raw: RawFeatures) -> Self {
        Self {
            values: raw.0,
            len: RawFeatures::DIM,
        }
    }
}

impl From<PatternFeatures> for Features {
    fn from(p: PatternFeatures) -> Self {
        let [a, b, c] = p.to_array();
        Self {
            values: [a, b, c, 0.0, 0.0, 0.0],
            len: PatternFeatures::DIM,
        }
    }
}

pub fn encode(encoding: Encoding, ball: Vec2, opp: Vec2, target: Vec2) -> Result<Features> {
    match encoding {
        Encoding::Raw => Ok(encode_raw(ball, opp, target).into()),
        Encoding::Pattern => encode_pattern(ball, opp, target).map(Into::into),
    }
}
