//! Scenario files: one JSON object per line,
//! `{"ball":[x,y],"opponents":[{"pos":[x,y],"poscount":n,"is_goalie":b}],"ball_speed":v}`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use shootcalc_core::evaluation::{FieldConfig, Scenario};
use shootcalc_core::interception::Opponent;
use shootcalc_core::kinematics::BallParams;
use shootcalc_core::Vec2;

use crate::FormatError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpponentLine {
    pos: [f64; 2],
    #[serde(default)]
    poscount: u32,
    #[serde(default)]
    is_goalie: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioLine {
    ball: [f64; 2],
    opponents: Vec<OpponentLine>,
    ball_speed: f64,
}

impl From<&Scenario> for ScenarioLine {
    fn from(s: &Scenario) -> Self {
        Self {
            ball: [s.ball.x, s.ball.y],
            opponents: s
                .opponents
                .iter()
                .map(|o| OpponentLine {
                    pos: [o.position.x, o.position.y],
                    poscount: o.poscount,
                    is_goalie: o.is_goalie,
                })
                .collect(),
            ball_speed: s.ball_params.initial_speed,
        }
    }
}

impl ScenarioLine {
    fn into_scenario(self) -> Scenario {
        let opponents = self
            .opponents
            .into_iter()
            .map(|o| {
                let p = Vec2::new(o.pos[0], o.pos[1]);
                let opp = if o.is_goalie {
                    Opponent::goalie(p)
                } else {
                    Opponent::field_player(p)
                };
                opp.with_poscount(o.poscount)
            })
            .collect();
        Scenario {
            ball: Vec2::new(self.ball[0], self.ball[1]),
            opponents,
            ball_params: BallParams {
                initial_speed: self.ball_speed,
                ..BallParams::default()
            },
        }
    }
}

pub fn scenario_to_line(scenario: &Scenario) -> String {
    serde_json::to_string(&ScenarioLine::from(scenario)).expect("scenario serializes")
}

pub fn write_scenarios<W: Write>(mut out: W, scenarios: &[Scenario]) -> std::io::Result<()> {
    for s in scenarios {
        writeln!(out, "{}", scenario_to_line(s))?;
    }
    out.flush()
}

/// Blank lines are skipped. Every scenario is validated against `field`.
pub fn read_scenarios<R: BufRead>(input: R, field: &FieldConfig) -> Result<Vec<Scenario>, ReadError> {
    let mut scenarios = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = line.map_err(ReadError::Io)?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: ScenarioLine = serde_json::from_str(&line)
            .map_err(|e| ReadError::Format(FormatError::new(line_no, e.to_string())))?;
        let scenario = parsed.into_scenario();
        scenario
            .validate(field)
            .map_err(|e| ReadError::Format(FormatError::new(line_no, e.to_string())))?;
        scenarios.push(scenario);
    }
    Ok(scenarios)
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error(transparent)]
    Io(std::io::Error),
    #[error(transparent)]
    Format(FormatError),
}
