//! Monte-Carlo comparison of shoot-selection methods.
//!
//! Each method decides on the observed scenario. A shot counts as a success
//! when the oracle margin of the chosen target is positive against the true
//! opponent positions. By default the truth displaces every opponent according
//! to its poscount ([`stale_truth`]), so methods are judged under the same
//! observation staleness a real agent faces.

use std::fmt::Write as _;

use rayon::prelude::*;
use shootcalc_core::datagen::stale_truth;
use shootcalc_core::evaluation::{
    baseline_select, cyrus_select, evaluate_target, evaluate_targets, Method, Scenario, ShootDecision, TargetGrid,
};
use shootcalc_core::kinematics::DEFAULT_STOP_SPEED;
use shootcalc_core::surrogate::{surrogate_select, SurrogateModel};

use crate::{fmt_f64, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truth {
    /// Opponents are where they were observed.
    Observed,
    /// Opponents moved by up to `poscount * speed_max`, seeded per scenario.
    Stale { seed: u64 },
}

impl Truth {
    pub fn label(&self) -> &'static str {
        match self {
            Truth::Observed => "observed",
            Truth::Stale { .. } => "stale",
        }
    }

    pub fn resolve(&self, scenario: &Scenario, index: u64) -> Scenario {
        match *self {
            Truth::Observed => scenario.clone(),
            Truth::Stale { seed } => stale_truth(scenario, seed, index),
        }
    }
}

/// Decision of one method on one scenario.
pub fn decide(
    method: Method,
    scenario: &Scenario,
    grid: &TargetGrid,
    threshold: f64,
    model: Option<&SurrogateModel>,
) -> Result<ShootDecision, CliError> {
    Ok(match method {
        Method::Baseline => baseline_select(&evaluate_targets(scenario, grid), grid)?,
        Method::Cyrus => cyrus_select(&evaluate_targets(scenario, grid), grid, threshold)?,
        Method::Surrogate => {
            let model = model.ok_or_else(|| CliError::Usage("the surrogate method needs --model".into()))?;
            surrogate_select(&model.evaluate_targets(scenario, grid)?, grid, threshold)?
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodStats {
    pub method: Method,
    pub scenarios: usize,
    pub shots: usize,
    pub successes: usize,
    /// Sum of true margins of the chosen targets.
    pub margin_sum: f64,
}

impl MethodStats {
    /// Fraction of shots that succeed; 0 when the method never shoots.
    pub fn success_rate(&self) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.successes as f64 / self.shots as f64
        }
    }

    pub fn no_shoot_rate(&self) -> f64 {
        (self.scenarios - self.shots) as f64 / self.scenarios as f64
    }

    pub fn mean_margin(&self) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.margin_sum / self.shots as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub n: usize,
    pub seed: Option<u64>,
    pub truth: Truth,
    pub rows: Vec<MethodStats>,
}

impl CompareReport {
    pub fn row(&self, method: Method) -> Option<&MethodStats> {
        self.rows.iter().find(|r| r.method == method)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "# success = oracle margin of the chosen target > 0 against {} opponent positions (desk-scale proxy for match win rate)",
            self.truth.label()
        )
        .unwrap();
        s.push_str("method,scenarios,shots,successes,success_rate,no_shoot_rate,mean_margin,seed\n");
        let seed = self.seed.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                r.method.as_str(),
                r.scenarios,
                r.shots,
                r.successes,
                fmt_f64(r.success_rate()),
                fmt_f64(r.no_shoot_rate()),
                fmt_f64(r.mean_margin()),
                seed
            )
            .unwrap();
        }
        s
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "{} scenarios, success judged against {} opponent positions",
            self.n,
            self.truth.label()
        )
        .unwrap();
        writeln!(s, "{:<10} {:>8} {:>9} {:>9} {:>11}", "method", "success", "no-shoot", "shots", "mean-margin").unwrap();
        for r in &self.rows {
            writeln!(
                s,
                "{:<10} {:>7.1}% {:>8.1}% {:>9} {:>11.3}",
                r.method.as_str(),
                100.0 * r.success_rate(),
                100.0 * r.no_shoot_rate(),
                r.shots,
                r.mean_margin()
            )
            .unwrap();
        }
        s
    }
}

pub struct CompareConfig<'a> {
    pub grid: &'a TargetGrid,
    pub threshold: f64,
    pub truth: Truth,
    pub model: Option<&'a SurrogateModel>,
    pub seed: Option<u64>,
}

pub fn compare(scenarios: &[Scenario], methods: &[Method], cfg: &CompareConfig<'_>) -> Result<CompareReport, CliError> {
    if scenarios.is_empty() {
        return Err(CliError::Data("no scenarios to compare".into()));
    }
    if methods.is_empty() {
        return Err(CliError::Usage("at least one method is required".into()));
    }
    if methods.contains(&Method::Surrogate) && cfg.model.is_none() {
        return Err(CliError::Usage("the surrogate method needs --model".into()));
    }
    // (shoots, succeeded, true margin) per scenario and method, in input order.
    let outcomes: Vec<Vec<(bool, bool, f64)>> = scenarios
        .par_iter()
        .enumerate()
        .map(|(i, scenario)| {
            let truth = cfg.truth.resolve(scenario, i as u64);
            methods
                .iter()
                .map(|&m| {
                    let d = decide(m, scenario, cfg.grid, cfg.threshold, cfg.model)?;
                    Ok(match d.target {
                        Some(t) => {
                            let margin = evaluate_target(&truth, t.point, DEFAULT_STOP_SPEED).margin;
                            (true, margin > 0.0, margin)
                        }
                        None => (false, false, 0.0),
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()
        })
        .collect::<Result<_, _>>()?;

    let rows = methods
        .iter()
        .enumerate()
        .map(|(k, &method)| {
            let mut row = MethodStats {
                method,
                scenarios: scenarios.len(),
                shots: 0,
                successes: 0,
                margin_sum: 0.0,
            };
            for per_scenario in &outcomes {
                let (shoots, ok, margin) = per_scenario[k];
                if shoots {
                    row.shots += 1;
                    row.successes += ok as usize;
                    row.margin_sum += margin;
                }
            }
            row
        })
        .collect();
    Ok(CompareReport {
        n: scenarios.len(),
        seed: cfg.seed,
        truth: cfg.truth,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use shootcalc_core::evaluation::{make_target_grid, FieldConfig};
    use shootcalc_core::Vec2;

    #[test]
    fn empty_field_always_scores() {
        let grid = make_target_grid(&FieldConfig::default(), 28).unwrap();
        let s = vec![Scenario::new(Vec2::new(45.0, 0.0), vec![])];
        let cfg = CompareConfig {
            grid: &grid,
            threshold: 0.5,
            truth: Truth::Stale { seed: 1 },
            model: None,
            seed: Some(1),
        };
        let r = compare(&s, &[Method::Baseline, Method::Cyrus], &cfg).unwrap();
        for row in &r.rows {
            assert_eq!(row.success_rate(), 1.0);
            assert_eq!(row.no_shoot_rate(), 0.0);
        }
        assert!(r.to_csv().lines().nth(2).unwrap().starts_with("baseline,1,1,1,1.0000000000000000e0"));
    }

    #[test]
    fn surrogate_requires_model() {
        let grid = make_target_grid(&FieldConfig::default(), 28).unwrap();
        let s = vec![Scenario::new(Vec2::new(45.0, 0.0), vec![])];
        let cfg = CompareConfig {
            grid: &grid,
            threshold: 0.5,
            truth: Truth::Observed,
            model: None,
            seed: None,
        };
        let err = compare(&s, &[Method::Surrogate], &cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
