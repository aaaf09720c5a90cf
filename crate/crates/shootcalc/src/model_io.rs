//! Text persistence for [`SurrogateModel`].
//!
//! ```text
//! shootcalc-mlp 1
//! encoding pattern
//! dims 3 16
//! seed 7
//! poscount_factor <f>
//! input_means
//! <input_dim values>
//! input_scales
//! <input_dim values>
//! weights_in
//! <hidden_dim rows of input_dim values>
//! bias_in
//! <hidden_dim values>
//! weights_out
//! <hidden_dim values>
//! bias_out
//! <1 value>
//! ```
//!
//! Values are space separated and written with 17 significant digits.

use std::fmt::Write as _;

use shootcalc_core::features::Encoding;
use shootcalc_core::surrogate::{Mlp, PoscountCorrection, SurrogateModel};

use crate::{fmt_f64, FormatError};

pub const MAGIC: &str = "shootcalc-mlp";
pub const VERSION: u32 = 1;

fn push_row(out: &mut String, values: &[f64]) {
    let row: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
    out.push_str(&row.join(" "));
    out.push('\n');
}

pub fn model_to_string(model: &SurrogateModel) -> String {
    let m = &model.mlp;
    let mut out = String::new();
    writeln!(out, "{MAGIC} {VERSION}").unwrap();
    writeln!(out, "encoding {}", model.encoding.as_str()).unwrap();
    writeln!(out, "dims {} {}", m.input_dim, m.hidden_dim).unwrap();
    writeln!(out, "seed {}", m.seed).unwrap();
    writeln!(out, "poscount_factor {}", fmt_f64(model.correction.factor)).unwrap();
    out.push_str("input_means\n");
    push_row(&mut out, &m.input_means);
    out.push_str("input_scales\n");
    push_row(&mut out, &m.input_scales);
    out.push_str("weights_in\n");
    for row in m.weights_in.chunks(m.input_dim) {
        push_row(&mut out, row);
    }
    out.push_str("bias_in\n");
    push_row(&mut out, &m.bias_in);
    out.push_str("weights_out\n");
    push_row(&mut out, &m.weights_out);
    out.push_str("bias_out\n");
    push_row(&mut out, &[m.bias_out]);
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: u64,
}

impl<'a> Lines<'a> {
    fn next(&mut self, what: &str) -> Result<&'a str, FormatError> {
        match self.inner.next() {
            Some((i, l)) => {
                self.line = i as u64 + 1;
                Ok(l.trim_end())
            }
            None => Err(FormatError::new(self.line + 1, format!("unexpected end of file, expected {what}"))),
        }
    }

    fn err(&self, msg: impl Into<String>) -> FormatError {
        FormatError::new(self.line, msg)
    }

    fn keyed(&mut self, key: &str) -> Result<&'a str, FormatError> {
        let l = self.next(key)?;
        match l.split_once(' ') {
            Some((k, v)) if k == key => Ok(v),
            _ => Err(self.err(format!("expected `{key} ...`"))),
        }
    }

    fn section(&mut self, name: &str) -> Result<(), FormatError> {
        if self.next(name)? == name {
            Ok(())
        } else {
            Err(self.err(format!("expected section `{name}`")))
        }
    }

    fn row(&mut self, expected: usize, what: &str) -> Result<Vec<f64>, FormatError> {
        let l = self.next(what)?;
        let values: Vec<f64> = l
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| self.err(format!("not a number: {t:?}"))))
            .collect::<Result<_, _>>()?;
        if values.len() != expected {
            return Err(self.err(format!("{what}: expected {expected} values, got {}", values.len())));
        }
        Ok(values)
    }
}

pub fn model_from_str(text: &str) -> Result<SurrogateModel, FormatError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    let version = lines.keyed(MAGIC)?;
    if version != VERSION.to_string() {
        return Err(lines.err(format!("unsupported model version {version}")));
    }
    let enc = lines.keyed("encoding")?;
    let encoding = Encoding::parse(enc).ok_or_else(|| lines.err(format!("unknown encoding {enc:?}")))?;
    let dims: Vec<usize> = lines
        .keyed("dims")?
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| lines.err("dims must be integers")))
        .collect::<Result<_, _>>()?;
    let [input_dim, hidden_dim] = dims[..] else {
        return Err(lines.err("dims needs two values"));
    };
    if input_dim == 0 || hidden_dim == 0 || hidden_dim > 1 << 16 || input_dim != encoding.dim() {
        return Err(lines.err("dims do not match the encoding"));
    }
    let seed = lines
        .keyed("seed")?
        .parse::<u64>()
        .map_err(|_| lines.err("seed must be an integer"))?;
    let factor = lines
        .keyed("poscount_factor")?
        .parse::<f64>()
        .map_err(|_| lines.err("poscount_factor must be a number"))?;

    let mut mlp = Mlp::zeros(input_dim, hidden_dim);
    mlp.seed = seed;
    lines.section("input_means")?;
    mlp.input_means = lines.row(input_dim, "input_means")?;
    lines.section("input_scales")?;
    mlp.input_scales = lines.row(input_dim, "input_scales")?;
    lines.section("weights_in")?;
    mlp.weights_in.clear();
    for _ in 0..hidden_dim {
        let row = lines.row(input_dim, "weights_in row")?;
        mlp.weights_in.extend(row);
    }
    lines.section("bias_in")?;
    mlp.bias_in = lines.row(hidden_dim, "bias_in")?;
    lines.section("weights_out")?;
    mlp.weights_out = lines.row(hidden_dim, "weights_out")?;
    lines.section("bias_out")?;
    mlp.bias_out = lines.row(1, "bias_out")?[0];
    mlp.validate().map_err(|e| lines.err(e.to_string()))?;
    if !factor.is_finite() {
        return Err(lines.err("poscount_factor must be finite"));
    }

    let mut model = SurrogateModel::new(mlp, encoding).map_err(|e| lines.err(e.to_string()))?;
    model.correction = PoscountCorrection { factor };
    Ok(model)
}
