//! Per-target margin diagram for one scenario.
//!
//! Shows the ball, every opponent with its control radius, one shot line per
//! target colored by the sign of its margin, the margin value next to each
//! target, and the chosen target circled.

use std::fmt::Write as _;

use shootcalc_core::evaluation::{FieldConfig, Scenario, ShootDecision, TargetEvaluation, TargetGrid};
use shootcalc_core::Vec2;

const SCALE: f64 = 16.0;
const PAD: f64 = 3.0;
const OPEN: &str = "#1e8e3e";
const BLOCKED: &str = "#d93025";

struct Frame {
    min_x: f64,
    max_y: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = Vec2>) -> Frame {
        let (mut min_x, mut max_x, mut min_y, mut max_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in points {
            min_x = min_x.min(p.x);
            max_x = max_x.max(p.x);
            min_y = min_y.min(p.y);
            max_y = max_y.max(p.y);
        }
        // Room for the margin labels beyond the goal line.
        max_x += 4.0;
        Frame {
            min_x: min_x - PAD,
            max_y: max_y + PAD,
            width: (max_x - min_x + 2.0 * PAD) * SCALE,
            height: (max_y - min_y + 2.0 * PAD) * SCALE,
        }
    }

    fn x(&self, x: f64) -> f64 {
        (x - self.min_x) * SCALE
    }

    fn y(&self, y: f64) -> f64 {
        (self.max_y - y) * SCALE
    }
}

pub fn margin_diagram(
    scenario: &Scenario,
    field: &FieldConfig,
    grid: &TargetGrid,
    eval: &TargetEvaluation,
    decision: &ShootDecision,
) -> String {
    let posts = [
        Vec2::new(field.goal_line_x, -field.goal_half_width),
        Vec2::new(field.goal_line_x, field.goal_half_width),
    ];
    let frame = Frame::fit(
        std::iter::once(scenario.ball)
            .chain(scenario.opponents.iter().map(|o| o.position))
            .chain(grid.points.iter().copied())
            .chain(posts),
    );
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.2}" height="{:.2}" viewBox="0 0 {:.2} {:.2}" font-family="monospace">"#,
        frame.width, frame.height, frame.width, frame.height
    )
    .unwrap();
    writeln!(s, r##"<rect width="100%" height="100%" fill="#f4f7f2"/>"##).unwrap();
    writeln!(
        s,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#333" stroke-width="3"/>"##,
        frame.x(posts[0].x),
        frame.y(posts[0].y),
        frame.x(posts[1].x),
        frame.y(posts[1].y)
    )
    .unwrap();

    for (i, t) in grid.points.iter().enumerate() {
        let color = if eval.scorable[i] { OPEN } else { BLOCKED };
        writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-opacity="0.35" stroke-width="1"/>"#,
            frame.x(scenario.ball.x),
            frame.y(scenario.ball.y),
            frame.x(t.x),
            frame.y(t.y)
        )
        .unwrap();
    }
    for (i, t) in grid.points.iter().enumerate() {
        let color = if eval.scorable[i] { OPEN } else { BLOCKED };
        writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2.50" fill="{color}"/>"#,
            frame.x(t.x),
            frame.y(t.y)
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="6" fill="{color}">{:.2}</text>"#,
            frame.x(t.x) + 5.0,
            frame.y(t.y) + 2.0,
            eval.margins[i]
        )
        .unwrap();
    }

    for o in &scenario.opponents {
        let fill = if o.is_goalie { "#f9ab00" } else { "#1a73e8" };
        writeln!(
            s,
            r##"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="{fill}" stroke-dasharray="3 2"/>"##,
            frame.x(o.position.x),
            frame.y(o.position.y),
            o.control_radius * SCALE
        )
        .unwrap();
        writeln!(
            s,
            r##"<circle cx="{:.2}" cy="{:.2}" r="5.00" fill="{fill}" stroke="#000" stroke-width="0.5"/>"##,
            frame.x(o.position.x),
            frame.y(o.position.y)
        )
        .unwrap();
        writeln!(
            s,
            r##"<text x="{:.2}" y="{:.2}" font-size="7" fill="#333">pc={}</text>"##,
            frame.x(o.position.x) + 6.0,
            frame.y(o.position.y) - 6.0,
            o.poscount
        )
        .unwrap();
    }

    writeln!(
        s,
        r##"<circle cx="{:.2}" cy="{:.2}" r="4.00" fill="#fff" stroke="#000" stroke-width="1"/>"##,
        frame.x(scenario.ball.x),
        frame.y(scenario.ball.y)
    )
    .unwrap();

    let caption = match decision.target {
        Some(t) => {
            writeln!(
                s,
                r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#000" stroke-width="2"/>"##,
                frame.x(scenario.ball.x),
                frame.y(scenario.ball.y),
                frame.x(t.point.x),
                frame.y(t.point.y)
            )
            .unwrap();
            writeln!(
                s,
                r##"<circle cx="{:.2}" cy="{:.2}" r="6.00" fill="none" stroke="#000" stroke-width="2"/>"##,
                frame.x(t.point.x),
                frame.y(t.point.y)
            )
            .unwrap();
            format!("{}: target {} score {:.2}", decision.method.as_str(), t.index, decision.score)
        }
        None => format!("{}: no shot (score {:.2})", decision.method.as_str(), decision.score),
    };
    writeln!(s, r##"<text x="8.00" y="14.00" font-size="11" fill="#000">{caption}</text>"##).unwrap();
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use shootcalc_core::evaluation::{cyrus_select, evaluate_targets, make_target_grid};
    use shootcalc_core::interception::Opponent;

    #[test]
    fn diagram_contents() {
        let field = FieldConfig::default();
        let grid = make_target_grid(&field, 28).unwrap();
        let s = Scenario::new(
            Vec2::new(47.0, 0.0),
            vec![
                Opponent::goalie(Vec2::new(52.0, 0.0)).with_poscount(3),
                Opponent::field_player(Vec2::new(49.0, 4.0)),
            ],
        );
        let eval = evaluate_targets(&s, &grid);
        let d = cyrus_select(&eval, &grid, 0.5).unwrap();
        let svg = margin_diagram(&s, &field, &grid, &eval, &d);
        assert!(svg.starts_with("<svg "));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches(r#"r="2.50""#).count(), 28);
        assert!(svg.contains(OPEN) && svg.contains(BLOCKED));
        assert!(svg.contains("pc=3"));
        assert!(svg.contains("cyrus: target"));
        assert_eq!(svg, margin_diagram(&s, &field, &grid, &eval, &d));
    }
}
