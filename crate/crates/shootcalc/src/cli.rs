//! Command-line front end. Every subcommand is a thin wrapper over library calls.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use shootcalc_core::datagen::{
    label_scenario, oracle_opponent_margin, records_to_samples, sample_scenario, staleness_residuals, ScenarioSpec,
};
use shootcalc_core::evaluation::{evaluate_targets, make_target_grid, FieldConfig, Method, Scenario, TargetGrid};
use shootcalc_core::features::Encoding;
use shootcalc_core::surrogate::{
    calibrate_poscount_factor, predict_opponent_margin, split, train, Mlp, SurrogateModel, TrainConfig,
};

use crate::compare::{compare, decide, CompareConfig, Truth};
use crate::{dataset_io, fmt_f64, model_io, scenario_io, svg, thread_pool, CliError};

#[derive(Debug, Parser)]
#[command(name = "shootcalc", version, about = "Shot target selection for 2D soccer agents")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample seeded attacking scenarios into a JSON-lines file.
    Gen(GenArgs),
    /// Label every (scenario, opponent, target) triple with its oracle margin.
    Label(LabelArgs),
    /// Choose a target for every scenario in a file.
    Eval(EvalArgs),
    /// Train a margin surrogate on a labeled dataset.
    Train(TrainArgs),
    /// Fit the poscount correction of a model against simulated staleness.
    Calibrate(CalibrateArgs),
    /// Compare selection methods on a scenario corpus.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Baseline,
    Cyrus,
    Surrogate,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Baseline => Method::Baseline,
            MethodArg::Cyrus => Method::Cyrus,
            MethodArg::Surrogate => Method::Surrogate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncodingArg {
    Raw,
    Pattern,
}

impl From<EncodingArg> for Encoding {
    fn from(e: EncodingArg) -> Encoding {
        match e {
            EncodingArg::Raw => Encoding::Raw,
            EncodingArg::Pattern => Encoding::Pattern,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TruthArg {
    /// Opponents move by up to poscount * speed_max before the shot.
    Stale,
    /// Opponents are exactly where they were observed.
    Observed,
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Number of scenarios.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub min_opponents: usize,
    #[arg(long, default_value_t = 11)]
    pub max_opponents: usize,
    #[arg(long, default_value_t = 0.9)]
    pub goalie_probability: f64,
    #[arg(long, default_value_t = 30)]
    pub max_poscount: u32,
}

impl SpecArgs {
    fn spec(&self) -> Result<ScenarioSpec, CliError> {
        let spec = ScenarioSpec {
            n_opponents: (self.min_opponents, self.max_opponents),
            goalie_probability: self.goalie_probability,
            poscount: (0, self.max_poscount),
            ..ScenarioSpec::with_seed(self.seed)
        };
        spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    #[arg(long)]
    pub scenarios: PathBuf,
    /// Number of targets on the goal mouth.
    #[arg(long, default_value_t = 28)]
    pub k: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub scenarios: PathBuf,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// Trained model, required by the surrogate method.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, default_value_t = 28)]
    pub k: usize,
    /// Margin in cycles a shot must exceed (cyrus and surrogate).
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Decisions CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Write a margin diagram of one scenario.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Zero-based scenario drawn by --svg.
    #[arg(long, default_value_t = 0)]
    pub svg_scenario: usize,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, value_enum, default_value_t = EncodingArg::Pattern)]
    pub encoding: EncodingArg,
    #[arg(long, default_value_t = 200)]
    pub epochs: usize,
    /// Seeds initialization, the split and the epoch shuffles.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 16)]
    pub hidden: usize,
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    #[arg(long, default_value_t = 32)]
    pub batch: usize,
    /// Model file.
    #[arg(long)]
    pub out: PathBuf,
    /// Per-epoch MSE CSV; printed to stdout when omitted.
    #[arg(long)]
    pub mse: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long)]
    pub scenarios: PathBuf,
    /// Model to calibrate; without it the exact oracle margin is used as the prediction.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Seed of the simulated opponent movement.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 28)]
    pub k: usize,
    /// Where to write the calibrated model.
    #[arg(long, requires = "model")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Scenario file; otherwise scenarios are sampled with --n and --seed.
    #[arg(long, conflicts_with = "n")]
    pub scenarios: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "baseline,cyrus")]
    pub methods: Vec<MethodArg>,
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Replaces the poscount factor stored in the model.
    #[arg(long)]
    pub poscount_factor: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    #[arg(long, default_value_t = 28)]
    pub k: usize,
    /// Opponent positions a shot is judged against.
    #[arg(long, value_enum, default_value_t = TruthArg::Stale)]
    pub truth: TruthArg,
    /// Seed of the simulated opponent movement; defaults to --seed.
    #[arg(long)]
    pub truth_seed: Option<u64>,
    /// Report CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let pool = thread_pool()?;
    let mut buf = Vec::new();
    let result = pool.install(|| match cli.command {
        Command::Gen(a) => cmd_gen(&a, &mut buf),
        Command::Label(a) => cmd_label(&a, &mut buf),
        Command::Eval(a) => cmd_eval(&a, &mut buf),
        Command::Train(a) => cmd_train(&a, &mut buf),
        Command::Calibrate(a) => cmd_calibrate(&a, &mut buf),
        Command::Compare(a) => cmd_compare(&a, &mut buf),
    });
    out.write_all(&buf).map_err(|e| CliError::io("<stdout>", e))?;
    result
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn say(out: &mut Vec<u8>, text: &str) -> Result<(), CliError> {
    out.extend_from_slice(text.as_bytes());
    Ok(())
}

fn grid(k: usize) -> Result<TargetGrid, CliError> {
    make_target_grid(&FieldConfig::default(), k).map_err(|e| CliError::Usage(format!("--k: {e}")))
}

fn check_threshold(t: f64) -> Result<(), CliError> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage("--threshold must be a finite value >= 0".into()))
    }
}

pub fn load_scenarios(path: &Path) -> Result<Vec<Scenario>, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    scenario_io::read_scenarios(BufReader::new(file), &FieldConfig::default()).map_err(|e| match e {
        scenario_io::ReadError::Io(e) => CliError::io(path, e),
        scenario_io::ReadError::Format(e) => CliError::format(path, e),
    })
}

pub fn load_model(path: &Path) -> Result<SurrogateModel, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    model_io::model_from_str(&text).map_err(|e| CliError::format(path, e))
}

fn sample(spec: &ScenarioSpec, n: u64) -> Vec<Scenario> {
    (0..n).into_par_iter().map(|i| sample_scenario(spec, i)).collect()
}

fn cmd_gen(a: &GenArgs, out: &mut Vec<u8>) -> Result<(), CliError> {
    let spec = a.spec.spec()?;
    let scenarios = sample(&spec, a.spec.n);
    let mut w = create(&a.out)?;
    scenario_io::write_scenarios(&mut w, &scenarios).map_err(|e| CliError::io(&a.out, e))?;
    w.flush().map_err(|e| CliError::io(&a.out, e))?;
    say(out, &format!("wrote {} scenarios to {}\n", scenarios.len(), a.out.display()))
}

fn cmd_label(a: &LabelArgs, out: &mut Vec<u8>) -> Result<(), CliError> {
    let grid = grid(a.k)?;
    let scenarios = load_scenarios(&a.scenarios)?;
    if scenarios.is_empty() {
        return Err(CliError::Data(format!("{}: no scenarios", a.scenarios.display())));
    }
    let records: Vec<_> = scenarios
        .par_iter()
        .enumerate()
        .map(|(i, s)| label_scenario(i as u64, s, &grid))
        .collect::<Vec<_>>()
        .concat();
    let w = create(&a.out)?;
    dataset_io::write_dataset(w, &records).map_err(|e| CliError::Data(format!("{}: {e}", a.out.display())))?;
    say(out, &format!("wrote {} records to {}\n", records.len(), a.out.display()))
}

fn cmd_eval(a: &EvalArgs, out: &mut Vec<u8>) -> Result<(), CliError> {
    check_threshold(a.threshold)?;
    let grid = grid(a.k)?;
    let method = Method::from(a.method);
    let model = match (&a.model, method) {
        (Some(p), _) => Some(load_model(p)?),
        (None, Method::Surrogate) => return Err(CliError::Usage("--method surrogate needs --model".into())),
        (None, _) => None,
    };
    let scenarios = load_scenarios(&a.scenarios)?;
    if a.svg.is_some() && a.svg_scenario >= scenarios.len() {
        return Err(CliError::Usage(format!(
            "--svg-scenario {} is out of range for {} scenarios",
            a.svg_scenario,
            scenarios.len()
        )));
    }
    let decisions = scenarios
        .par_iter()
        .map(|s| decide(method, s, &grid, a.threshold, model.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;

    let mut csv = String::from("scenario_id,method,shoot,target_index,target_x,target_y,score\n");
    for (i, d) in decisions.iter().enumerate() {
        match d.target {
            Some(t) => writeln!(
                csv,
                "{i},{},1,{},{},{},{}",
                method.as_str(),
                t.index,
                fmt_f64(t.point.x),
                fmt_f64(t.point.y),
                fmt_f64(d.score)
            ),
            None => writeln!(csv, "{i},{},0,,,,{}", method.as_str(), fmt_f64(d.score)),
        }
        .unwrap();
    }
    write_file(&a.out, &csv)?;

    if let Some(path) = &a.svg {
        let s = &scenarios[a.svg_scenario];
        let eval = match &model {
            Some(m) if method == Method::Surrogate => m.evaluate_targets(s, &grid)?,
            _ => evaluate_targets(s, &grid),
        };
        let diagram = svg::margin_diagram(s, &FieldConfig::default(), &grid, &eval, &decisions[a.svg_scenario]);
        write_file(path, &diagram)?;
    }
    let shots = decisions.iter().filter(|d| d.shoots()).count();
    say(
        out,
        &format!("{}: {shots} of {} scenarios shoot\n", method.as_str(), decisions.len()),
    )
}

fn cmd_train(a: &TrainArgs, out: &mut Vec<u8>) -> Result<(), CliError> {
    if a.hidden == 0 {
        return Err(CliError::Usage("--hidden must be at least 1".into()));
    }
    let cfg = TrainConfig {
        learning_rate: a.lr,
        epochs: a.epochs,
        batch_size: a.batch,
        seed: a.seed,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let file = File::open(&a.dataset).map_err(|e| CliError::io(&a.dataset, e))?;
    let records = dataset_io::read_dataset(BufReader::new(file)).map_err(|e| match e {
        dataset_io::ReadError::Format(e) => CliError::format(&a.dataset, e),
        dataset_io::ReadError::Csv(e) => CliError::Data(format!("{}: {e}", a.dataset.display())),
    })?;
    if records.is_empty() {
        return Err(CliError::Data(format!("{}: dataset is empty", a.dataset.display())));
    }
    let encoding = Encoding::from(a.encoding);
    let samples = records_to_samples(&records, encoding)?;
    let (train_set, val_set) = split(&samples, 0.8, a.seed);
    if train_set.is_empty() || val_set.is_empty() {
        return Err(CliError::Data("dataset too small for an 80/20 split".into()));
    }
    let mut mlp = Mlp::new(encoding.dim(), a.hidden, a.seed);
    mlp.fit_normalization(&train_set)?;
    let history = train(&mut mlp, &train_set, &val_set, &cfg)?;

    let mut csv = String::from("epoch,train_mse,val_mse\n");
    for h in &history {
        writeln!(csv, "{},{},{}", h.epoch, fmt_f64(h.train_mse), fmt_f64(h.val_mse)).unwrap();
    }
    let model = SurrogateModel::new(mlp, encoding)?;
    write_file(&a.out, &model_io::model_to_string(&model))?;
    let last = history.last().expect("history has the untrained entry");
    match &a.mse {
        Some(path) => {
            write_file(path, &csv)?;
            say(
                out,
                &format!(
                    "{} epochs, train mse {:.4}, val mse {:.4} (label variance {:.4})\n",
                    last.epoch,
                    last.train_mse,
                    last.val_mse,
                    val_set.label_variance()
                ),
            )
        }
        None => say(out, &csv),
    }
}

fn cmd_calibrate(a: &CalibrateArgs, out: &mut Vec<u8>) -> Result<(), CliError> {
    let grid = grid(a.k)?;
    let scenarios = load_scenarios(&a.scenarios)?;
    let model = a.model.as_deref().map(load_model).transpose()?;
    let pairs = match &model {
        Some(m) => staleness_residuals(&scenarios, &grid, a.seed, |s, o, t| {
            predict_opponent_margin(&m.mlp, m.encoding, s.ball, o, t)
        })?,
        None => staleness_residuals(&scenarios, &grid, a.seed, oracle_opponent_margin)?,
    };
    let correction = calibrate_poscount_factor(&pairs)?;
    if let (Some(mut m), Some(path)) = (model, &a.out) {
        m.correction = correction;
        write_file(path, &model_io::model_to_string(&m))?;
    }
    say(
        out,
        &format!("poscount_factor {} from {} residuals\n", fmt_f64(correction.factor), pairs.len()),
    )
}

fn cmd_compare(a: &CompareArgs, out: &mut Vec<u8>) -> Result<(), CliError> {
    check_threshold(a.threshold)?;
    let grid = grid(a.k)?;
    let methods: Vec<Method> = a.methods.iter().map(|&m| m.into()).collect();
    let mut model = a.model.as_deref().map(load_model).transpose()?;
    if let (Some(m), Some(f)) = (model.as_mut(), a.poscount_factor) {
        if !f.is_finite() {
            return Err(CliError::Usage("--poscount-factor must be finite".into()));
        }
        m.correction.factor = f;
    }
    let (scenarios, seed) = match (&a.scenarios, a.n) {
        (Some(path), _) => (load_scenarios(path)?, None),
        (None, Some(n)) => (sample(&ScenarioSpec::with_seed(a.seed), n), Some(a.seed)),
        (None, None) => return Err(CliError::Usage("pass --scenarios or --n".into())),
    };
    let truth = match a.truth {
        TruthArg::Observed => Truth::Observed,
        TruthArg::Stale => Truth::Stale {
            seed: a.truth_seed.unwrap_or(a.seed),
        },
    };
    let cfg = CompareConfig {
        grid: &grid,
        threshold: a.threshold,
        truth,
        model: model.as_ref(),
        seed,
    };
    let report = compare(&scenarios, &methods, &cfg)?;
    if let Some(path) = &a.out {
        write_file(path, &report.to_csv())?;
    }
    say(out, &report.summary())
}
