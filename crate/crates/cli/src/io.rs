//! Input files, number formatting and output documents.

use std::fmt;
use std::path::Path;

use serde::Deserialize;
use serde_json::{Map, Value};
use thermops::linalg::{CMat, C64};
use thermops::{DensityMatrix, GibbsContext, ProbVec, StochasticMatrix};

/// Why a run stopped: malformed input (exit 2) or a negative answer from
/// the library (exit 1).
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Domain { name: &'static str, message: String },
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Domain { .. } => 1,
            Failure::Input(_) => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, name, message) = match self {
            Failure::Input(m) => ("input", "InputError", m.as_str()),
            Failure::Domain { name, message } => ("domain", *name, message.as_str()),
        };
        let mut doc = Map::new();
        doc.insert("error".into(), Value::String(name.into()));
        doc.insert("kind".into(), Value::String(kind.into()));
        doc.insert("message".into(), Value::String(message.into()));
        Value::Object(doc)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Domain { name, message } => write!(f, "{name}: {message}"),
        }
    }
}

impl From<thermops::Error> for Failure {
    fn from(e: thermops::Error) -> Self {
        if e.is_domain() {
            Failure::Domain {
                name: e.name(),
                message: e.to_string(),
            }
        } else {
            Failure::Input(format!("{}: {e}", e.name()))
        }
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContextFile {
    energies: Vec<f64>,
    beta: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    diag: Option<Vec<f64>>,
    re: Option<Vec<Vec<f64>>>,
    im: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
struct MatrixFile {
    matrix: Vec<Vec<f64>>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Loads `{ "energies": [...], "beta": r }`; `beta_override` wins over the file.
pub fn load_context(path: &Path, beta_override: Option<f64>) -> Outcome<GibbsContext> {
    let file: ContextFile = read_json(path)?;
    let beta = beta_override.or(file.beta).ok_or_else(|| {
        Failure::Input(format!("{}: missing field `beta` and no --beta given", path.display()))
    })?;
    Ok(GibbsContext::from_energies(file.energies, beta)?)
}

/// Loads a state as a density matrix, from `diag` or from `re`/`im`.
pub fn load_density(path: &Path) -> Outcome<DensityMatrix> {
    let file: StateFile = read_json(path)?;
    match (file.diag, file.re) {
        (Some(d), None) => {
            if file.im.is_some() {
                return Err(Failure::Input(format!("{}: `im` given without `re`", path.display())));
            }
            Ok(DensityMatrix::from_diag(&ProbVec::new(d)?))
        }
        (None, Some(re)) => {
            let n = re.len();
            let im = file.im.unwrap_or_else(|| vec![vec![0.0; n]; n]);
            if im.len() != n || re.iter().chain(&im).any(|row| row.len() != n) {
                return Err(Failure::Input(format!(
                    "{}: `re` and `im` must be square matrices of equal size",
                    path.display()
                )));
            }
            let m = CMat::from_fn(n, n, |a, b| C64::new(re[a][b], im[a][b]));
            Ok(DensityMatrix::new(m)?)
        }
        _ => Err(Failure::Input(format!(
            "{}: a state needs exactly one of `diag` or `re`",
            path.display()
        ))),
    }
}

/// Populations of a state file; matrices contribute their diagonal.
pub fn load_populations(path: &Path) -> Outcome<ProbVec> {
    Ok(thermops::population_of(&load_density(path)?))
}

/// Loads `{ "matrix": [[...]] }` with `matrix[i][j] = G_{i|j}`.
pub fn load_matrix(path: &Path) -> Outcome<StochasticMatrix> {
    let file: MatrixFile = read_json(path)?;
    Ok(StochasticMatrix::from_rows(&file.matrix)?)
}

/// Rounds to 12 significant digits; non-finite values become strings.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
        serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
    } else if v.is_nan() {
        Value::String("nan".into())
    } else if v > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

pub fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

pub fn matrix_rows(rows: usize, cols: usize, entry: impl Fn(usize, usize) -> f64) -> Value {
    Value::Array((0..rows).map(|i| nums(&(0..cols).map(|j| entry(i, j)).collect::<Vec<_>>())).collect())
}

pub fn stochastic_json(m: &StochasticMatrix) -> Value {
    let n = m.dim();
    matrix_rows(n, n, |i, j| m.get(i, j))
}

/// `{ "re": [[...]], "im": [[...]] }`, readable back as a state file.
pub fn density_json(rho: &DensityMatrix) -> Value {
    let n = rho.dim();
    let mut doc = Map::new();
    doc.insert("re".into(), matrix_rows(n, n, |a, b| rho.get(a, b).re));
    doc.insert("im".into(), matrix_rows(n, n, |a, b| rho.get(a, b).im));
    Value::Object(doc)
}

pub fn points_json(points: &[(f64, f64)]) -> Value {
    Value::Array(points.iter().map(|&(x, y)| nums(&[x, y])).collect())
}

/// Same 12-digit rounding as [`num`], as CSV text.
fn csv_number(v: f64) -> String {
    match num(v) {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s,
        _ => String::new(),
    }
}

pub fn points_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("x,y\n");
    for &(x, y) in points {
        out.push_str(&csv_number(x));
        out.push(',');
        out.push_str(&csv_number(y));
        out.push('\n');
    }
    out
}

pub fn write_file(path: &Path, text: &str) -> Outcome<()> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

/// Builds a JSON object from `(key, value)` pairs, keeping their order.
#[macro_export]
macro_rules! doc {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = serde_json::Map::new();
        $(m.insert($k.to_string(), serde_json::Value::from($v));)*
        serde_json::Value::Object(m)
    }};
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_twelve_digits() {
        assert_eq!(num(1.0 / 3.0).to_string(), "0.333333333333");
        assert_eq!(num(0.5).to_string(), "0.5");
        assert_eq!(num(-2.0 / 3.0 * 1e-20).to_string(), "-6.66666666667e-21");
        assert_eq!(num(f64::INFINITY), Value::String("inf".into()));
        assert_eq!(points_csv(&[(0.0, 0.0), (1.0 / 7.0, 1.0)]), "x,y\n0.0,0.0\n0.142857142857,1.0\n");
    }
}
