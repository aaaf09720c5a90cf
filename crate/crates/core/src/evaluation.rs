//! Goal-mouth target grid and shoot-target selection.
//!
//! Two selection rules are provided over the same per-target margins:
//!
//! - [`baseline_select`]: aim at the middle of the longest block of
//!   consecutive scorable targets.
//! - [`cyrus_select`]: aim at the target with the largest interception margin,
//!   provided it beats the best interceptor by a threshold.
//!
//! Every tie-break only looks at mirror-covariant data (margins and distances
//! to the grid center) before falling back to the lower index, so reflecting a
//! scenario across the x-axis reflects the chosen target.

use alloc::vec::Vec;

use crate::interception::{intercept_margin, Opponent};
use crate::kinematics::{simulate_path, BallParams, DEFAULT_STOP_SPEED};
use crate::{Error, Result, Vec2, MARGIN_CAP};

/// Default number of aim points on the goal mouth.
pub const DEFAULT_TARGET_COUNT: usize = 28;

/// Default margin (cycles) a Cyrus shot must exceed.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    pub goal_line_x: f64,
    pub goal_half_width: f64,
    /// Inset of the outermost targets from the posts.
    pub post_margin: f64,
    /// Half-length and half-width of the pitch, used for scenario validation.
    pub half_length: f64,
    pub half_width: f64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self {
            goal_line_x: 52.5,
            goal_half_width: 7.01,
            post_margin: 0.5,
            half_length: 52.5,
            half_width: 34.0,
        }
    }
}

impl FieldConfig {
    pub fn validate(&self) -> Result<()> {
        if self.goal_half_width > self.post_margin && self.post_margin >= 0.0 {
            Ok(())
        } else {
            Err(Error::Contract("goal_half_width must exceed post_margin >= 0"))
        }
    }
}

/// Equidistant aim points on the goal line, ordered by increasing y.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetGrid {
    pub points: Vec<Vec2>,
}

impl TargetGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Twice the distance from index `i` to the grid center, in index units.
    /// Integer so that mirrored indices compare exactly equal.
    fn center_offset(&self, i: usize) -> usize {
        (2 * i).abs_diff(self.len() - 1)
    }
}

/// Builds `k` equidistant targets spanning `±(goal_half_width - post_margin)`.
///
/// Points are laid out in mirrored pairs, so `points[k-1-i].y == -points[i].y`
/// holds bit for bit.
pub fn make_target_grid(field: &FieldConfig, k: usize) -> Result<TargetGrid> {
    if k < 2 {
        return Err(Error::Contract("target grid needs at least two points"));
    }
    field.validate()?;
    let half_span = field.goal_half_width - field.post_margin;
    let step = 2.0 * half_span / (k - 1) as f64;
    let mut ys = alloc::vec![0.0; k];
    for i in 0..k / 2 {
        let y = -half_span + i as f64 * step;
        ys[i] = y;
        ys[k - 1 - i] = -y;
    }
    let points = ys
        .into_iter()
        .map(|y| Vec2::new(field.goal_line_x, y))
        .collect();
    Ok(TargetGrid { points })
}

/// A shooting situation: ball plus every known opponent.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub ball: Vec2,
    pub opponents: Vec<Opponent>,
    pub ball_params: BallParams,
}

impl Scenario {
    pub fn new(ball: Vec2, opponents: Vec<Opponent>) -> Self {
        Self {
            ball,
            opponents,
            ball_params: BallParams::default(),
        }
    }

    /// Checks finiteness, field bounds and that the ball has not crossed the goal line.
    pub fn validate(&self, field: &FieldConfig) -> Result<()> {
        self.ball_params.validate()?;
        if !self.ball.is_finite() {
            return Err(Error::Contract("ball position must be finite"));
        }
        if self.ball.x.abs() > field.half_length || self.ball.y.abs() > field.half_width {
            return Err(Error::Contract("ball outside field bounds"));
        }
        if self.ball.x >= field.goal_line_x {
            return Err(Error::Contract("ball is not in front of the goal line"));
        }
        if !self.opponents.iter().all(Opponent::is_valid) {
            return Err(Error::Contract("invalid opponent parameters"));
        }
        Ok(())
    }

    /// Reflection across the x-axis.
    pub fn mirror_y(&self) -> Scenario {
        Scenario {
            ball: self.ball.mirror_y(),
            opponents: self.opponents.iter().map(|o| o.mirror_y()).collect(),
            ball_params: self.ball_params,
        }
    }
}

/// Oracle verdict for a single target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetOutcome {
    /// Minimum intercept margin over opponents, `MARGIN_CAP` with no opponents,
    /// `-MARGIN_CAP` when the ball cannot reach the goal.
    pub margin: f64,
    /// Mean of the per-opponent margins; secondary tie-break key.
    pub mean_margin: f64,
    pub worst_opponent: Option<usize>,
}

impl TargetOutcome {
    const UNREACHABLE: TargetOutcome = TargetOutcome {
        margin: -MARGIN_CAP,
        mean_margin: -MARGIN_CAP,
        worst_opponent: None,
    };
}

/// Simulates one shot and scores it against every opponent.
///
/// A path that stops short of the goal line counts as unreachable.
pub fn evaluate_target(scenario: &Scenario, target: Vec2, stop_speed: f64) -> TargetOutcome {
    let path = match simulate_path(scenario.ball, target, &scenario.ball_params, stop_speed) {
        Ok(p) if p.crossed_goal_at.is_some() => p,
        _ => return TargetOutcome::UNREACHABLE,
    };
    if scenario.opponents.is_empty() {
        return TargetOutcome {
            margin: MARGIN_CAP,
            mean_margin: MARGIN_CAP,
            worst_opponent: None,
        };
    }
    let mut margin = f64::INFINITY;
    let mut worst = None;
    let mut sum = 0.0;
    for (i, opp) in scenario.opponents.iter().enumerate() {
        let m = intercept_margin(opp, &path).margin;
        sum += m;
        if m < margin {
            margin = m;
            worst = Some(i);
        }
    }
    TargetOutcome {
        margin,
        mean_margin: sum / scenario.opponents.len() as f64,
        worst_opponent: worst,
    }
}

/// Per-target margins for a whole grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetEvaluation {
    pub margins: Vec<f64>,
    /// `scorable[i] == (margins[i] > 0)`.
    pub scorable: Vec<bool>,
    /// Mean per-opponent margin per target, used only to break exact ties.
    pub mean_margins: Vec<f64>,
}

impl TargetEvaluation {
    pub fn from_outcomes(outcomes: impl IntoIterator<Item = TargetOutcome>) -> Self {
        let mut margins = Vec::new();
        let mut mean_margins = Vec::new();
        for o in outcomes {
            margins.push(o.margin);
            mean_margins.push(o.mean_margin);
        }
        Self::from_margins(margins, mean_margins)
    }

    pub fn from_margins(margins: Vec<f64>, mean_margins: Vec<f64>) -> Self {
        debug_assert_eq!(margins.len(), mean_margins.len());
        let scorable = margins.iter().map(|&m| m > 0.0).collect();
        Self {
            margins,
            scorable,
            mean_margins,
        }
    }

    pub fn len(&self) -> usize {
        self.margins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.margins.is_empty()
    }
}

pub fn evaluate_targets(scenario: &Scenario, grid: &TargetGrid) -> TargetEvaluation {
    evaluate_targets_with(scenario, grid, DEFAULT_STOP_SPEED)
}

pub fn evaluate_targets_with(
    scenario: &Scenario,
    grid: &TargetGrid,
    stop_speed: f64,
) -> TargetEvaluation {
    TargetEvaluation::from_outcomes(
        grid.points
            .iter()
            .map(|&t| evaluate_target(scenario, t, stop_speed)),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Baseline,
    Cyrus,
    Surrogate,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Baseline => "baseline",
            Method::Cyrus => "cyrus",
            Method::Surrogate => "surrogate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChosenTarget {
    pub index: usize,
    pub point: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootDecision {
    /// `None` means "do not shoot".
    pub target: Option<ChosenTarget>,
    /// Run length for the baseline, best margin otherwise.
    pub score: f64,
    pub method: Method,
    /// Inclusive index range of the selected run (baseline only).
    pub run: Option<(usize, usize)>,
}

impl ShootDecision {
    pub fn target_index(&self) -> Option<usize> {
        self.target.map(|t| t.index)
    }

    pub fn target_point(&self) -> Option<Vec2> {
        self.target.map(|t| t.point)
    }

    pub fn shoots(&self) -> bool {
        self.target.is_some()
    }
}

fn check_sizes(eval: &TargetEvaluation, grid: &TargetGrid) -> Result<()> {
    if eval.len() != grid.len() || eval.mean_margins.len() != grid.len() || grid.is_empty() {
        return Err(Error::Contract("evaluation and grid sizes differ"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
struct Run {
    lo: usize,
    hi: usize,
    min_margin: f64,
    sum_margin: f64,
}

impl Run {
    fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    /// Longer, then safer at its weakest point, then safer overall.
    /// Earlier runs win remaining ties because they are visited first.
    fn beats(&self, other: &Run) -> bool {
        (self.len(), self.min_margin, self.sum_margin) > (other.len(), other.min_margin, other.sum_margin)
    }
}

fn scorable_runs(eval: &TargetEvaluation) -> Vec<Run> {
    let mut runs = Vec::new();
    let mut i = 0;
    let k = eval.len();
    while i < k {
        if !eval.scorable[i] {
            i += 1;
            continue;
        }
        let lo = i;
        while i + 1 < k && eval.scorable[i + 1] {
            i += 1;
        }
        let slice = &eval.margins[lo..=i];
        runs.push(Run {
            lo,
            hi: i,
            min_margin: slice.iter().copied().fold(f64::INFINITY, f64::min),
            sum_margin: slice.iter().sum(),
        });
        i += 1;
    }
    runs
}

/// Center of the longest run of consecutive scorable targets.
///
/// Odd-length runs use their middle index. Even-length runs have two middle
/// indices; the one with the larger margin (then larger mean margin) wins, and
/// the lower one, `(lo + hi) / 2`, on a full tie.
pub fn baseline_select(eval: &TargetEvaluation, grid: &TargetGrid) -> Result<ShootDecision> {
    check_sizes(eval, grid)?;
    let best = scorable_runs(eval)
        .into_iter()
        .fold(None::<Run>, |best, run| match best {
            Some(b) if !run.beats(&b) => Some(b),
            _ => Some(run),
        });
    let Some(run) = best else {
        return Ok(ShootDecision {
            target: None,
            score: 0.0,
            method: Method::Baseline,
            run: None,
        });
    };
    let low_mid = (run.lo + run.hi) / 2;
    let index = if run.len() % 2 == 0 {
        let high_mid = low_mid + 1;
        let key = |i: usize| (eval.margins[i], eval.mean_margins[i]);
        if key(high_mid) > key(low_mid) {
            high_mid
        } else {
            low_mid
        }
    } else {
        low_mid
    };
    Ok(ShootDecision {
        target: Some(ChosenTarget {
            index,
            point: grid.points[index],
        }),
        score: run.len() as f64,
        method: Method::Baseline,
        run: Some((run.lo, run.hi)),
    })
}

/// Index of the largest margin. Ties go to the index nearer the grid center,
/// then to the larger mean margin, then to the lower index.
pub fn best_margin_index(eval: &TargetEvaluation, grid: &TargetGrid) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in 0..eval.len() {
        let better = match best {
            None => true,
            Some(b) => {
                let (mi, mb) = (eval.margins[i], eval.margins[b]);
                if mi != mb {
                    mi > mb
                } else {
                    let (ci, cb) = (grid.center_offset(i), grid.center_offset(b));
                    if ci != cb {
                        ci < cb
                    } else {
                        eval.mean_margins[i] > eval.mean_margins[b]
                    }
                }
            }
        };
        if better {
            best = Some(i);
        }
    }
    best
}

/// Highest-margin target, shot only if its margin exceeds `threshold`.
pub fn cyrus_select(
    eval: &TargetEvaluation,
    grid: &TargetGrid,
    threshold: f64,
) -> Result<ShootDecision> {
    select_by_margin(eval, grid, threshold, Method::Cyrus)
}

pub(crate) fn select_by_margin(
    eval: &TargetEvaluation,
    grid: &TargetGrid,
    threshold: f64,
    method: Method,
) -> Result<ShootDecision> {
    check_sizes(eval, grid)?;
    if !(threshold >= 0.0) {
        return Err(Error::Contract("threshold must be non-negative"));
    }
    let index = best_margin_index(eval, grid).expect("grid is non-empty");
    let score = eval.margins[index];
    let target = (score > threshold).then(|| ChosenTarget {
        index,
        point: grid.points[index],
    });
    Ok(ShootDecision {
        target,
        score,
        method,
        run: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn grid(k: usize) -> TargetGrid {
        make_target_grid(&FieldConfig::default(), k).unwrap()
    }

    fn eval_from_flags(flags: &[bool]) -> TargetEvaluation {
        let margins: Vec<f64> = flags.iter().map(|&s| if s { 5.0 } else { -1.0 }).collect();
        let means = margins.clone();
        TargetEvaluation::from_margins(margins, means)
    }

    #[test]
    fn default_grid_spans_inset_goal() {
        let g = grid(28);
        assert_eq!(g.len(), 28);
        assert!((g.points[0].y + 6.51).abs() < 1e-12);
        assert!((g.points[27].y - 6.51).abs() < 1e-12);
        let step = 13.02 / 27.0;
        for w in g.points.windows(2) {
            assert_eq!(w[0].x, 52.5);
            assert!(w[1].y > w[0].y);
            assert!((w[1].y - w[0].y - step).abs() < 1e-9);
        }
        for i in 0..28 {
            assert_eq!(g.points[i].y, -g.points[27 - i].y);
        }
    }

    #[test]
    fn small_grids() {
        let g2 = grid(2);
        assert_eq!(g2.points, vec![Vec2::new(52.5, -6.51), Vec2::new(52.5, 6.51)]);
        let g3 = grid(3);
        assert_eq!(g3.points[1].y, 0.0);
        assert!(make_target_grid(&FieldConfig::default(), 1).is_err());
        let bad = FieldConfig {
            post_margin: 8.0,
            ..FieldConfig::default()
        };
        assert!(make_target_grid(&bad, 28).is_err());
    }

    #[test]
    fn no_opponents_everything_open() {
        let g = grid(28);
        let s = Scenario::new(Vec2::new(45.0, 0.0), vec![]);
        let e = evaluate_targets(&s, &g);
        assert!(e.margins.iter().all(|&m| m == MARGIN_CAP));
        assert!(e.scorable.iter().all(|&b| b));
        let d = baseline_select(&e, &g).unwrap();
        assert_eq!(d.target_index(), Some(13));
        assert_eq!(d.score, 28.0);
        let c = cyrus_select(&e, &g, DEFAULT_THRESHOLD).unwrap();
        assert_eq!(c.target_index(), Some(13));
    }

    #[test]
    fn opponent_on_ball_blocks_everything() {
        let g = grid(28);
        let ball = Vec2::new(45.0, 3.0);
        let s = Scenario::new(ball, vec![Opponent::field_player(ball)]);
        let e = evaluate_targets(&s, &g);
        assert!(e.margins.iter().all(|&m| m <= 0.0));
        assert!(e.scorable.iter().all(|&b| !b));
        assert!(!baseline_select(&e, &g).unwrap().shoots());
        assert!(!cyrus_select(&e, &g, DEFAULT_THRESHOLD).unwrap().shoots());
    }

    #[test]
    fn goalie_blocks_center_only() {
        let g = grid(28);
        let goalie = Opponent::goalie(Vec2::new(52.0, 0.0));
        let s = Scenario::new(Vec2::new(47.0, 0.0), vec![goalie]);
        let e = evaluate_targets(&s, &g);
        // Brute force: walk each path up to and including the crossing cycle.
        for (i, t) in g.points.iter().enumerate() {
            let dir = (*t - s.ball).normalized().unwrap();
            let dist = s.ball.distance(*t);
            let (mut pos, mut speed, mut travelled, mut n) = (s.ball, 3.0, 0.0, 0.0);
            let mut worst = f64::INFINITY;
            loop {
                let d = pos.distance(goalie.position);
                let reach = if d <= 2.0 { 0.0 } else { 1.0 + (d - 2.0) / 1.05 };
                worst = worst.min(reach - n);
                if travelled >= dist {
                    break;
                }
                pos = pos + dir * speed;
                travelled += speed;
                speed *= 0.94;
                n += 1.0;
            }
            assert!((e.margins[i] - worst).abs() < 1e-9, "target {i}");
        }
        assert!(!e.scorable[13] && !e.scorable[14]);
        assert!(e.scorable[0] && e.scorable[27]);
    }

    #[test]
    fn baseline_picks_longest_run() {
        let mut flags = vec![false; 28];
        flags[1] = true;
        flags[2] = true;
        flags[3] = true;
        flags[25] = true;
        flags[26] = true;
        let g = grid(28);
        let d = baseline_select(&eval_from_flags(&flags), &g).unwrap();
        assert_eq!(d.target_index(), Some(2));
        assert_eq!(d.run, Some((1, 3)));
        assert_eq!(d.score, 3.0);
    }

    #[test]
    fn baseline_ties_prefer_safer_run_then_lower_start() {
        let g = grid(8);
        let margins = vec![1.0, 1.0, -1.0, -1.0, -1.0, 2.0, 2.0, -1.0];
        let e = TargetEvaluation::from_margins(margins.clone(), margins);
        let d = baseline_select(&e, &g).unwrap();
        assert_eq!(d.run, Some((5, 6)));

        let margins = vec![1.0, 1.0, -1.0, -1.0, -1.0, 1.0, 1.0, -1.0];
        let e = TargetEvaluation::from_margins(margins.clone(), margins);
        let d = baseline_select(&e, &g).unwrap();
        assert_eq!(d.run, Some((0, 1)));
        assert_eq!(d.target_index(), Some(0));
    }

    #[test]
    fn baseline_even_run_prefers_safer_middle() {
        let g = grid(6);
        let margins = vec![-1.0, 1.0, 2.0, 3.0, 1.0, -1.0];
        let e = TargetEvaluation::from_margins(margins.clone(), margins);
        assert_eq!(baseline_select(&e, &g).unwrap().target_index(), Some(3));
    }

    #[test]
    fn cyrus_threshold_and_ties() {
        let g = grid(28);
        let mut margins = vec![-3.0; 28];
        margins[5] = 0.2;
        let e = TargetEvaluation::from_margins(margins.clone(), margins);
        let d = cyrus_select(&e, &g, 0.5).unwrap();
        assert!(!d.shoots());
        assert_eq!(d.score, 0.2);

        let mut margins = vec![1.0; 28];
        margins[3] = 4.0;
        margins[20] = 4.0;
        let e = TargetEvaluation::from_margins(margins.clone(), margins);
        // 20 is closer to the center (13.5) than 3.
        assert_eq!(cyrus_select(&e, &g, 0.5).unwrap().target_index(), Some(20));

        let margins = vec![1.0; 28];
        let mut means = vec![0.0; 28];
        means[14] = 0.5;
        let e = TargetEvaluation::from_margins(margins, means);
        assert_eq!(cyrus_select(&e, &g, 0.5).unwrap().target_index(), Some(14));
        assert!(cyrus_select(&e, &g, -1.0).is_err());
    }

    #[test]
    fn mismatched_sizes() {
        let e = eval_from_flags(&[true, false]);
        assert!(baseline_select(&e, &grid(3)).is_err());
        assert!(cyrus_select(&e, &grid(3), 0.5).is_err());
    }

    #[test]
    fn scenario_validation() {
        let field = FieldConfig::default();
        assert!(Scenario::new(Vec2::new(45.0, 0.0), vec![]).validate(&field).is_ok());
        assert!(Scenario::new(Vec2::new(53.0, 0.0), vec![]).validate(&field).is_err());
        assert!(Scenario::new(Vec2::new(40.0, 40.0), vec![]).validate(&field).is_err());
        assert!(Scenario::new(Vec2::new(f64::NAN, 0.0), vec![]).validate(&field).is_err());
    }
}
