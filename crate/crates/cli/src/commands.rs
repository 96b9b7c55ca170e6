use std::fmt;
use std::fs;

use carries_core::carries::{transition_matrix, transition_matrix_bruteforce, find_system};
use carries_core::eulerian::{eulerian_number, stationary, state_count, triangle_recurrence};
use carries_core::exactmath::{format_rational, RationalJson};
use carries_core::simulate::{run_chain, SimConfig};
use carries_core::spectral::{predicted_spectrum, verify_transition_matrix};
use carries_core::uniformsum::{eulerian_interval_prob, interval_prob, IntervalQuery};
use carries_core::{
    BaseSign, ChainSpec, DigitSet, ExactMatrix, NumerationSystem, Rational, TransitionMatrix,
};
use num_traits::One;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::render::{document, Table};

/// Anything that should end the process with the usage exit code.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<carries_core::Error> for UsageError {
    fn from(e: carries_core::Error) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<Outcome, UsageError>;

pub struct Outcome {
    pub doc: Value,
    pub tables: Vec<Table>,
    /// False when a verification inside the command failed.
    pub passed: bool,
}

fn rj(x: &Rational) -> Value {
    serde_json::to_value(RationalJson::from(x)).expect("rational serializes")
}

fn rj_vec(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(rj).collect())
}

fn rj_matrix(m: &ExactMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| rj_vec(r)).collect())
}

fn strs(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(format_rational).collect()
}

fn sign(negative: bool) -> BaseSign {
    if negative {
        BaseSign::Negative
    } else {
        BaseSign::Positive
    }
}

fn chain_spec(a: &SystemArgs) -> Result<ChainSpec, UsageError> {
    let sys = NumerationSystem::new(a.base, a.d, sign(a.negative))?;
    Ok(ChainSpec::new(sys, a.n)?)
}

fn system_inputs(a: &SystemArgs) -> Value {
    json!({"base": a.base, "d": a.d, "n": a.n, "negative": a.negative})
}

fn require_p(p: &Rational) -> Result<(), UsageError> {
    if *p < Rational::one() {
        return Err(UsageError(format!("p must be at least 1, got {}", format_rational(p))));
    }
    Ok(())
}

fn matrix_table(title: &str, states: &[i64], m: &ExactMatrix) -> Table {
    let mut header = vec!["from\\to".to_string()];
    header.extend(states.iter().map(i64::to_string));
    let mut t = Table::new(title, header);
    for (i, c) in states.iter().enumerate() {
        let mut row = vec![c.to_string()];
        row.extend(strs(m.row(i)));
        t.push(row);
    }
    t
}

pub fn run(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Triangle(a) => triangle(a),
        Command::Matrix(a) => matrix(a),
        Command::Verify(a) => verify(a),
        Command::FindSystem(a) => find(a),
        Command::Simulate(a) => simulate(a),
        Command::UniformSum(a) => uniform_sum(a),
    }
}

fn triangle(a: &TriangleArgs) -> CmdResult {
    require_p(&a.p)?;
    let tri = triangle_recurrence(a.n_max, &a.p);
    let sums = tri.row_sums();
    let mut header = vec!["n".to_string()];
    header.extend((0..=a.n_max).map(|k| format!("k={k}")));
    header.push("sum".into());
    let mut table = Table::new(format!("E_p(n, k), p = {}", format_rational(&a.p)), header);
    let mut rows = Vec::new();
    for (n, (row, sum)) in tri.rows.iter().zip(&sums).enumerate() {
        rows.push(json!({"n": n, "values": rj_vec(row), "row_sum": rj(sum)}));
        let mut cells = vec![n.to_string()];
        cells.extend(strs(row));
        cells.resize(a.n_max + 2, String::new());
        cells.push(format_rational(sum));
        table.push(cells);
    }
    Ok(Outcome {
        doc: document(
            "triangle",
            json!({"p": rj(&a.p), "n_max": a.n_max}),
            json!({"p": rj(&a.p), "rows": rows}),
        ),
        tables: vec![table],
        passed: true,
    })
}

fn matrix(a: &MatrixArgs) -> CmdResult {
    let base = if a.negative { -a.base } else { a.base };
    let mut inputs = json!({"base": a.base, "n": a.n, "negative": a.negative, "char_poly": a.char_poly});
    let mut payload = serde_json::Map::new();
    let tm = match (&a.digits, a.d) {
        (Some(digits), _) => {
            inputs["digits"] = json!(digits);
            if a.n == 0 {
                return Err(UsageError("n must be at least 1".into()));
            }
            let set = DigitSet::new(digits.clone(), base)?;
            payload.insert("method".into(), json!("brute_force"));
            payload.insert("p".into(), Value::Null);
            transition_matrix_bruteforce(&set, a.n)?
        }
        (None, Some(d)) => {
            inputs["d"] = json!(d);
            let spec = chain_spec(&SystemArgs {
                base: a.base,
                d,
                n: a.n,
                negative: a.negative,
            })?;
            payload.insert("method".into(), json!("closed_form"));
            payload.insert("p".into(), rj(&spec.p()));
            payload.insert("spectrum".into(), rj_vec(&predicted_spectrum(&spec)));
            transition_matrix(&spec)
        }
        (None, None) => return Err(UsageError("either --d or --digits is required".into())),
    };
    payload.insert("states".into(), json!(tm.states));
    payload.insert("matrix".into(), rj_matrix(&tm.matrix));
    let mut tables = vec![matrix_table("P", &tm.states, &tm.matrix)];
    if a.char_poly {
        let poly = tm.matrix.char_poly()?;
        let (ints, scale) = poly.clear_denominators();
        payload.insert(
            "char_poly".into(),
            json!({
                "coefficients": rj_vec(poly.coeffs()),
                "text": poly.to_string(),
                "integer_text": ints.to_string(),
                "scale": scale.to_string(),
            }),
        );
        let mut t = Table::new("det(xI - P)", vec!["power".into(), "coefficient".into()]);
        for (k, c) in poly.coeffs().iter().enumerate() {
            t.push(vec![k.to_string(), format_rational(c)]);
        }
        tables.push(t);
    }
    Ok(Outcome {
        doc: document("matrix", inputs, Value::Object(payload)),
        tables,
        passed: true,
    })
}

#[derive(Deserialize)]
struct MatrixFile {
    states: Vec<i64>,
    matrix: Vec<Vec<RationalJson>>,
}

fn read_matrix(path: &std::path::Path) -> Result<TransitionMatrix, UsageError> {
    let text = fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    let mut value: Value = serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("{} is not JSON: {e}", path.display())))?;
    // accept a whole `matrix` output document as well as a bare payload
    if let Some(inner) = value.get_mut("payload") {
        value = inner.take();
    }
    let file: MatrixFile = serde_json::from_value(value)
        .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let rows = file
        .matrix
        .iter()
        .map(|r| r.iter().map(Rational::try_from).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TransitionMatrix {
        states: file.states,
        matrix: ExactMatrix::from_rows(rows)?,
    })
}

fn verify(a: &VerifyArgs) -> CmdResult {
    let spec = chain_spec(&a.system)?;
    let mut inputs = system_inputs(&a.system);
    let tm = match &a.matrix {
        Some(path) => {
            inputs["matrix"] = json!(path.display().to_string());
            read_matrix(path)?
        }
        None => transition_matrix(&spec),
    };
    let report = verify_transition_matrix(&spec, &tm)?;
    let passed = report.verified();
    let mut t = Table::new(
        format!("p = {}", format_rational(&report.p)),
        vec!["check".into(), "result".into(), "detail".into()],
    );
    for (name, v) in &report.verdicts {
        let detail = v
            .mismatch
            .as_ref()
            .map(|m| {
                format!(
                    "({}, {}): expected {}, got {}",
                    m.row,
                    m.col,
                    format_rational(&m.expected),
                    format_rational(&m.actual)
                )
            })
            .unwrap_or_default();
        t.push(vec![name.clone(), if v.passed { "pass" } else { "FAIL" }.into(), detail]);
    }
    let mut spectrum = Table::new("spectrum", vec!["i".into(), "eigenvalue".into()]);
    for (i, x) in report.spectrum.iter().enumerate() {
        spectrum.push(vec![i.to_string(), format_rational(x)]);
    }
    let mut payload = serde_json::to_value(&report).expect("report serializes");
    payload["verified"] = json!(passed);
    Ok(Outcome {
        doc: document("verify", inputs, payload),
        tables: vec![t, spectrum],
        passed,
    })
}

fn find(a: &FindSystemArgs) -> CmdResult {
    let sys = find_system(a.n, &a.p)?;
    let spec = ChainSpec::new(sys, a.n)?;
    let got = spec.p();
    let passed = got == a.p;
    let mut t = Table::new("", vec!["base".into(), "d".into(), "n".into(), "p".into()]);
    t.push(vec![
        sys.base_magnitude().to_string(),
        sys.least_digit().to_string(),
        a.n.to_string(),
        format_rational(&got),
    ]);
    Ok(Outcome {
        doc: document(
            "find-system",
            json!({"p": rj(&a.p), "n": a.n}),
            json!({
                "base": sys.base_magnitude(),
                "d": sys.least_digit(),
                "n": a.n,
                "p": rj(&got),
                "verified": passed,
            }),
        ),
        tables: vec![t],
        passed,
    })
}

fn simulate(a: &SimulateArgs) -> CmdResult {
    let spec = chain_spec(&a.system)?;
    let cfg = SimConfig::new(spec.digit_set(), spec.n(), a.steps, a.seed, a.burn_in)?;
    let result = run_chain(&cfg)?;
    let pi = stationary(spec.n(), &spec.p())?;
    let states = spec.state_space().states();

    let mut t = Table::new(
        format!("seed {}, {} tallied steps", a.seed, a.steps - a.burn_in),
        vec!["carry".into(), "count".into(), "frequency".into(), "exact".into()],
    );
    let counts = result.counts();
    for (c, x) in states.iter().zip(&pi) {
        let count = counts.get(c).copied().unwrap_or(0);
        t.push(vec![
            c.to_string(),
            count.to_string(),
            format!("{:.6}", count as f64 / (a.steps - a.burn_in) as f64),
            format_rational(x),
        ]);
    }
    let mut summary = Table::new("", vec!["tv_distance".into()]);
    summary.push(vec![result.tv_distance.map(|x| format!("{x:.3e}")).unwrap_or_default()]);

    let mut inputs = system_inputs(&a.system);
    inputs["steps"] = json!(a.steps);
    inputs["seed"] = json!(a.seed);
    inputs["burn_in"] = json!(a.burn_in);
    let mut payload = serde_json::to_value(&result).expect("result serializes");
    payload["stationary"] = json!({"states": states, "probabilities": rj_vec(&pi)});
    Ok(Outcome {
        doc: document("simulate", inputs, payload),
        tables: vec![t, summary],
        passed: true,
    })
}

fn uniform_sum(a: &UniformSumArgs) -> CmdResult {
    require_p(&a.p)?;
    if a.n == 0 {
        return Err(UsageError("n must be at least 1".into()));
    }
    let m = state_count(a.n, &a.p) as i64;
    let mut t = Table::new(
        format!("Pr(S_{} in 1/p + [k-1, k]), p = {}", a.n, format_rational(&a.p)),
        vec!["k".into(), "probability".into(), "E_p(n,k)".into(), "E_p(n,k)/(p^n n!)".into(), "equal".into()],
    );
    let mut probs = Vec::new();
    let mut eulerian = Vec::new();
    let mut normalized = Vec::new();
    for k in 0..m {
        let prob = interval_prob(&IntervalQuery::new(a.n, a.p.clone(), k)?);
        let e = eulerian_number(a.n, &a.p, k);
        let norm = eulerian_interval_prob(a.n, &a.p, k);
        t.push(vec![
            k.to_string(),
            format_rational(&prob),
            format_rational(&e),
            format_rational(&norm),
            (prob == norm).to_string(),
        ]);
        probs.push(prob);
        eulerian.push(e);
        normalized.push(norm);
    }
    let equal = probs == normalized;
    Ok(Outcome {
        doc: document(
            "uniform-sum",
            json!({"p": rj(&a.p), "n": a.n}),
            json!({
                "probabilities": rj_vec(&probs),
                "eulerian_row": rj_vec(&eulerian),
                "normalized_eulerian_row": rj_vec(&normalized),
                "equal": equal,
            }),
        ),
        tables: vec![t],
        passed: equal,
    })
}
