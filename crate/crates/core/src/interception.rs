//! Opponent reach times and interception margins.
//!
//! An opponent intercepts a shot if, at some cycle `n` of the simulated path,
//! it can reach the ball's position in at most `n` cycles. The margin is the
//! smallest slack `reach - n` over the path; positive margins mean the
//! opponent is always late.
//!
//! The path includes the cycle at which the ball crosses the goal line: the
//! last step runs through the goal mouth, where a goalie on the line can
//! still take the ball.

use crate::kinematics::BallPath;
use crate::{Vec2, MARGIN_CAP};

/// Control radius used for goalies (catchable area).
pub const GOALIE_CONTROL_RADIUS: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Opponent {
    pub position: Vec2,
    /// Cycles since this opponent was last seen.
    pub poscount: u32,
    /// Dash speed, meters per cycle.
    pub speed_max: f64,
    /// Distance at which the ball is under control.
    pub control_radius: f64,
    /// Cycles spent turning before running.
    pub turn_delay: u32,
    pub is_goalie: bool,
}

impl Opponent {
    pub fn field_player(position: Vec2) -> Self {
        Self {
            position,
            poscount: 0,
            speed_max: 1.05,
            control_radius: 1.085,
            turn_delay: 1,
            is_goalie: false,
        }
    }

    pub fn goalie(position: Vec2) -> Self {
        Self {
            control_radius: GOALIE_CONTROL_RADIUS,
            is_goalie: true,
            ..Self::field_player(position)
        }
    }

    pub fn with_poscount(mut self, poscount: u32) -> Self {
        self.poscount = poscount;
        self
    }

    pub fn at(mut self, position: Vec2) -> Self {
        self.position = position;
        self
    }

    pub fn is_valid(&self) -> bool {
        self.position.is_finite()
            && self.speed_max.is_finite()
            && self.speed_max > 0.0
            && self.control_radius.is_finite()
            && self.control_radius >= 0.0
    }

    pub fn mirror_y(mut self) -> Self {
        self.position = self.position.mirror_y();
        self
    }
}

/// Cycles the opponent needs to bring `point` under control.
///
/// Straight-line pursuit at `speed_max` after `turn_delay`; poscount is ignored.
pub fn reach_cycles(opponent: &Opponent, point: Vec2) -> f64 {
    let distance = opponent.position.distance(point);
    if distance <= opponent.control_radius {
        0.0
    } else {
        opponent.turn_delay as f64 + (distance - opponent.control_radius) / opponent.speed_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterceptResult {
    /// `min_n (reach(positions[n]) - n)`, in cycles, clamped to `±MARGIN_CAP`.
    pub margin: f64,
    /// Cycle where the minimum is attained (smallest on ties).
    pub intercept_cycle: Option<usize>,
    pub intercepted: bool,
}

impl InterceptResult {
    fn from_margin(margin: f64, intercept_cycle: Option<usize>) -> Self {
        let margin = margin.clamp(-MARGIN_CAP, MARGIN_CAP);
        Self {
            margin,
            intercept_cycle,
            intercepted: margin <= 0.0,
        }
    }
}

pub fn intercept_margin(opponent: &Opponent, path: &BallPath) -> InterceptResult {
    let mut best = f64::INFINITY;
    let mut best_cycle = None;
    for (n, &p) in path.positions.iter().enumerate() {
        let slack = reach_cycles(opponent, p) - n as f64;
        if slack < best {
            best = slack;
            best_cycle = Some(n);
        }
    }
    InterceptResult::from_margin(best, best_cycle)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathMargin {
    pub margin: f64,
    /// Index of the opponent attaining the minimum; `None` without opponents.
    pub worst_opponent: Option<usize>,
}

/// Minimum intercept margin over all opponents; `MARGIN_CAP` with none.
pub fn path_min_margin(opponents: &[Opponent], path: &BallPath) -> PathMargin {
    let mut result = PathMargin {
        margin: MARGIN_CAP,
        worst_opponent: None,
    };
    for (i, opp) in opponents.iter().enumerate() {
        let m = intercept_margin(opp, path).margin;
        if result.worst_opponent.is_none() || m < result.margin {
            result = PathMargin {
                margin: m,
                worst_opponent: Some(i),
            };
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{simulate_path, BallParams, DEFAULT_STOP_SPEED};

    fn path(from: Vec2, to: Vec2) -> BallPath {
        simulate_path(from, to, &BallParams::default(), DEFAULT_STOP_SPEED).unwrap()
    }

    #[test]
    fn reach_examples() {
        let opp = Opponent::field_player(Vec2::ZERO);
        assert_eq!(reach_cycles(&opp, Vec2::new(1.0, 0.0)), 0.0);
        assert!((reach_cycles(&opp, Vec2::new(2.135, 0.0)) - 2.0).abs() < 1e-12);
        assert_eq!(reach_cycles(&opp, Vec2::ZERO), 0.0);
    }

    #[test]
    fn far_opponent_is_late() {
        let p = path(Vec2::new(47.5, 0.0), Vec2::new(52.5, 0.0));
        let opp = Opponent::field_player(Vec2::new(50.0, 30.0));
        let r = intercept_margin(&opp, &p);
        assert!(r.margin > 0.0);
        assert!(!r.intercepted);
    }

    #[test]
    fn opponent_on_the_ball_intercepts_at_kickoff() {
        let p = path(Vec2::new(47.5, 0.0), Vec2::new(52.5, 0.0));
        let opp = Opponent::field_player(Vec2::new(47.5, 0.0));
        let r = intercept_margin(&opp, &p);
        assert_eq!(r.margin, 0.0);
        assert_eq!(r.intercept_cycle, Some(0));
        assert!(r.intercepted);
    }

    #[test]
    fn brute_force_margin_on_short_shot() {
        // Positions are x = 47.5, 50.5 and 53.32 (crossed).
        let p = path(Vec2::new(47.5, 0.0), Vec2::new(52.5, 0.0));
        let opp = Opponent::field_player(Vec2::new(50.5, 1.0));
        let d0 = libm::sqrt(3.0f64 * 3.0 + 1.0);
        let m0 = 1.0 + (d0 - 1.085) / 1.05;
        let m1 = 0.0 - 1.0; // within control radius at cycle 1
        let d2 = libm::sqrt(2.82f64 * 2.82 + 1.0);
        let m2 = 1.0 + (d2 - 1.085) / 1.05 - 2.0;
        let expected = m0.min(m1).min(m2);
        let r = intercept_margin(&opp, &p);
        assert!((r.margin - expected).abs() < 1e-12);
        assert_eq!(r.intercept_cycle, Some(1));
        assert!(r.intercepted);
    }

    #[test]
    fn empty_and_singleton_opponent_sets() {
        let p = path(Vec2::new(40.0, 5.0), Vec2::new(52.5, -3.0));
        let none = path_min_margin(&[], &p);
        assert_eq!(none.margin, MARGIN_CAP);
        assert_eq!(none.worst_opponent, None);

        let opp = Opponent::field_player(Vec2::new(45.0, 2.0));
        let single = path_min_margin(&[opp], &p);
        assert_eq!(single.margin, intercept_margin(&opp, &p).margin);
        assert_eq!(single.worst_opponent, Some(0));
    }

    #[test]
    fn goalie_has_larger_control_radius() {
        let g = Opponent::goalie(Vec2::ZERO);
        assert!(g.is_goalie);
        assert_eq!(reach_cycles(&g, Vec2::new(1.9, 0.0)), 0.0);
        let f = Opponent::field_player(Vec2::ZERO);
        assert!(reach_cycles(&f, Vec2::new(1.9, 0.0)) > 0.0);
    }

    mod props {
        use super::super::*;
        use crate::kinematics::{simulate_path, BallParams, DEFAULT_STOP_SPEED};
        use alloc::vec::Vec;
        use proptest::prelude::*;

        fn point(xlo: f64, xhi: f64) -> impl Strategy<Value = Vec2> {
            (xlo..xhi, -20.0..20.0f64).prop_map(|(x, y)| Vec2::new(x, y))
        }

        proptest! {
            #[test]
            fn adding_an_opponent_never_raises_the_margin(
                ball in point(36.0, 52.0),
                ty in -6.5..6.5f64,
                opps in proptest::collection::vec(point(40.0, 52.5), 0..6),
                extra in point(40.0, 52.5),
            ) {
                let p = simulate_path(ball, Vec2::new(52.5, ty), &BallParams::default(), DEFAULT_STOP_SPEED).unwrap();
                let mut list: Vec<Opponent> = opps.into_iter().map(Opponent::field_player).collect();
                let before = path_min_margin(&list, &p).margin;
                list.push(Opponent::field_player(extra));
                let after = path_min_margin(&list, &p).margin;
                prop_assert!(after <= before);
            }

            #[test]
            fn mirror_leaves_margin_unchanged(ball in point(36.0, 52.0), ty in -6.5..6.5f64, o in point(40.0, 52.5)) {
                let params = BallParams::default();
                let a = simulate_path(ball, Vec2::new(52.5, ty), &params, DEFAULT_STOP_SPEED).unwrap();
                let b = simulate_path(ball.mirror_y(), Vec2::new(52.5, -ty), &params, DEFAULT_STOP_SPEED).unwrap();
                let opp = Opponent::field_player(o);
                let ma = intercept_margin(&opp, &a).margin;
                let mb = intercept_margin(&opp.mirror_y(), &b).margin;
                prop_assert!((ma - mb).abs() < 1e-9);
            }

            #[test]
            fn moving_away_never_lowers_the_margin(
                ball in point(36.0, 45.0),
                ty in -6.5..6.5f64,
                o in point(40.0, 52.5),
                push in 0.0..10.0f64,
            ) {
                // Pushing perpendicular away from the path line increases the
                // distance to every path position.
                let params = BallParams::default();
                let target = Vec2::new(52.5, ty);
                let p = simulate_path(ball, target, &params, DEFAULT_STOP_SPEED).unwrap();
                let dir = p.direction();
                let normal = Vec2::new(-dir.y, dir.x);
                let side = normal.dot(o - ball);
                prop_assume!(side.abs() > 1e-6);
                let away = if side > 0.0 { normal } else { -normal };
                let near = Opponent::field_player(o);
                let far = near.at(o + away * push);
                prop_assert!(intercept_margin(&far, &p).margin >= intercept_margin(&near, &p).margin - 1e-12);
            }

            #[test]
            fn reach_is_lipschitz(o in point(0.0, 10.0), a in point(0.0, 10.0), b in point(0.0, 10.0)) {
                let opp = Opponent::field_player(o);
                let diff = (reach_cycles(&opp, a) - reach_cycles(&opp, b)).abs();
                // Up to the turn-delay jump at the control radius boundary.
                prop_assert!(diff <= a.distance(b) / opp.speed_max + opp.turn_delay as f64 + 1e-12);
                let outside = a.distance(o) > opp.control_radius && b.distance(o) > opp.control_radius;
                if outside {
                    prop_assert!(diff <= a.distance(b) / opp.speed_max + 1e-12);
                }
            }
        }
    }
}
