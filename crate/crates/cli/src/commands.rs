use std::fmt::Write as _;
use std::fs;

use serde_json::{json, Map, Value};

use entropyne_core::amplifier::{amplifier_delta_surface, AmplifierConfig};
use entropyne_core::fock::converged_partition;
use entropyne_core::gaussian::{log_partition_function, QuadraticHamiltonian};
use entropyne_core::grid::format_number;
use entropyne_core::qubit::{qubit_delta_grid, BlochHamiltonian};
use entropyne_core::relative_entropy::{loglog_slope, tsallis_relative_entropy, tsallis_series};
use entropyne_core::{Complex64, DeltaGrid, Error};

use crate::args::{AmplifierGridArgs, Format, GaussianZArgs, QubitGridArgs, TsallisArgs, VerifyArgs};
use crate::matrix_file::parse_matrix;
use crate::verify;

pub enum Failure {
    Usage(String),
    Numeric(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidGrid(_) => Failure::Usage(e.to_string()),
            other => Failure::Numeric(other.to_string()),
        }
    }
}

/// Text to write, plus a failure to report after writing it.
pub struct Outcome {
    pub text: String,
    pub after: Option<Failure>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, after: None }
    }
}

pub struct Context {
    pub format: Format,
    pub seed: u64,
}

impl Context {
    fn metadata(&self, command: &str, parameters: Value) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("command".into(), json!(command));
        m.insert("parameters".into(), parameters);
        m.insert("seed".into(), json!(self.seed));
        m.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
        m
    }

    fn attach(&self, grid: &mut DeltaGrid, command: &str, parameters: Value) {
        grid.metadata = self.metadata(command, parameters).into_iter().collect();
    }

    /// Scalar reports: `quantity,value` rows in CSV, an object in JSON.
    fn scalar_report(&self, command: &str, parameters: Value, rows: &[(&str, Value)]) -> String {
        match self.format {
            Format::Csv => {
                let mut out = String::from("quantity,value\n");
                for (k, v) in rows {
                    let _ = writeln!(out, "{k},{}", csv_value(v));
                }
                out
            }
            Format::Json => {
                let mut obj = Map::new();
                for (k, v) in rows {
                    obj.insert((*k).into(), v.clone());
                }
                obj.insert("metadata".into(), Value::Object(self.metadata(command, parameters)));
                pretty(&Value::Object(obj))
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serialises");
    s.push('\n');
    s
}

fn csv_value(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => n.as_f64().map(format_number).unwrap_or_default(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Finite numbers as JSON numbers; infinities as the strings `+inf`/`-inf`.
fn number(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        Value::Null
    } else if v > 0.0 {
        json!("+inf")
    } else {
        json!("-inf")
    }
}

pub fn qubit_grid(ctx: &Context, a: &QubitGridArgs) -> Result<Outcome, Failure> {
    let bh = BlochHamiltonian::along_z(a.h0, a.h_norm);
    let mut grid = qubit_delta_grid(a.p_norm, &bh, &a.theta, &a.temp)?;
    let params = json!({
        "p_norm": a.p_norm,
        "h_norm": a.h_norm,
        "h0": a.h0,
        "theta": a.theta.to_string(),
        "temp": a.temp.to_string(),
    });
    ctx.attach(&mut grid, "qubit-grid", params);
    Ok(Outcome::ok(match ctx.format {
        Format::Csv => grid.to_csv(false),
        Format::Json => grid.to_json(),
    }))
}

pub fn amplifier_grid(ctx: &Context, a: &AmplifierGridArgs) -> Result<Outcome, Failure> {
    if a.temp.min() <= 0.0 {
        return Err(Failure::Usage(format!("temperature range {} must be positive", a.temp)));
    }
    let cfg = AmplifierConfig::new(a.omega0, a.omega, a.k, a.t, a.omega_t)?;
    let mut grid = amplifier_delta_surface(&cfg, &a.temp, &a.nbar)?;
    grid.row_argmin = Some(grid.compute_row_argmin());
    let params = json!({
        "omega0": a.omega0,
        "omega": a.omega,
        "k": a.k,
        "t": a.t,
        "omega_t": a.omega_t,
        "temp": a.temp.to_string(),
        "nbar": a.nbar.to_string(),
    });
    ctx.attach(&mut grid, "amplifier-grid", params);
    let text = match ctx.format {
        Format::Csv => grid.to_csv(true),
        Format::Json => grid.to_json(),
    };
    let after = grid
        .all_flagged()
        .then(|| Failure::Numeric("partition function diverges on every cell (omega0^2 <= 4 k^2?)".into()));
    Ok(Outcome { text, after })
}

pub fn gaussian_z(ctx: &Context, a: &GaussianZArgs) -> Result<Outcome, Failure> {
    let beta = match (a.beta, a.temp) {
        (Some(b), _) => b,
        (None, Some(t)) if t != 0.0 => 1.0 / t,
        (None, Some(_)) => return Err(Error::ZeroTemperature.into()),
        (None, None) => return Err(Failure::Usage("one of --beta or --temp is required".into())),
    };
    let h = QuadraticHamiltonian::new(a.omega0, a.omega1, Complex64::new(a.omega2_re, a.omega2_im), a.omega3)?;
    let log_z = log_partition_function(&h, beta)?;
    let mut rows = vec![
        ("beta", json!(beta)),
        ("omega_squared", json!(h.effective_frequency_squared())),
        ("log_z", json!(log_z)),
        ("z", number(log_z.exp())),
    ];
    if a.oracle {
        let fock = converged_partition(&h, beta)?;
        rows.push(("fock_z", json!(fock.value)));
        rows.push(("fock_levels", json!(fock.n_max)));
        rows.push(("fock_relative_change", json!(fock.relative_change)));
        rows.push((
            "relative_difference",
            json!((fock.value - log_z.exp()).abs() / log_z.exp()),
        ));
    }
    let params = json!({
        "omega0": a.omega0,
        "omega1": a.omega1,
        "omega2_re": a.omega2_re,
        "omega2_im": a.omega2_im,
        "omega3": a.omega3,
        "beta": a.beta,
        "temp": a.temp,
        "oracle": a.oracle,
    });
    Ok(Outcome::ok(ctx.scalar_report("gaussian-z", params, &rows)))
}

fn read_matrix(path: &std::path::Path) -> Result<entropyne_core::HermitianMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

pub fn tsallis(ctx: &Context, a: &TsallisArgs) -> Result<Outcome, Failure> {
    let rho = read_matrix(&a.rho_file)?;
    let sigma = read_matrix(&a.sigma_file)?;
    let params = json!({
        "rho_file": a.rho_file.display().to_string(),
        "sigma_file": a.sigma_file.display().to_string(),
        "q": a.q,
        "delta_series": a.delta_series,
    });
    if let Some(deltas) = &a.delta_series {
        return tsallis_series_report(ctx, &rho, &sigma, deltas, params);
    }
    let q =
        a.q.ok_or_else(|| Failure::Usage("one of --q or --delta-series is required".into()))?;
    let s = tsallis_relative_entropy(&rho, &sigma, q)?;
    let mut rows = vec![("q", json!(q)), ("s_q", number(s))];
    if s == f64::INFINITY {
        let note = "support of rho is not contained in the support of sigma";
        eprintln!("note: {note}; S_q = +inf");
        rows.push(("note", json!(note)));
    }
    Ok(Outcome::ok(ctx.scalar_report("tsallis", params, &rows)))
}

fn tsallis_series_report(
    ctx: &Context,
    rho: &entropyne_core::HermitianMatrix,
    sigma: &entropyne_core::HermitianMatrix,
    deltas: &[f64],
    params: Value,
) -> Result<Outcome, Failure> {
    if deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0)) {
        return Err(Failure::Usage("--delta-series needs positive deltas".into()));
    }
    let series = tsallis_series(rho, sigma)?;
    let direct = deltas
        .iter()
        .map(|&d| tsallis_relative_entropy(rho, sigma, 1.0 + d))
        .collect::<Result<Vec<f64>, Error>>()?;
    let approx: Vec<f64> = deltas.iter().map(|&d| series.evaluate(d)).collect();
    let residuals: Vec<f64> = direct.iter().zip(&approx).map(|(a, b)| (a - b).abs()).collect();
    let slope = (deltas.len() >= 2 && residuals.iter().all(|&r| r > 0.0)).then(|| loglog_slope(deltas, &residuals));
    let text = match ctx.format {
        Format::Csv => {
            let mut out = String::from("quantity,delta,value\n");
            for (k, v) in [
                ("order0", series.order0),
                ("order1", series.order1),
                ("order2", series.order2),
            ] {
                let _ = writeln!(out, "{k},,{}", format_number(v));
            }
            for (i, &d) in deltas.iter().enumerate() {
                for (k, v) in [("direct", direct[i]), ("series", approx[i]), ("residual", residuals[i])] {
                    let _ = writeln!(out, "{k},{},{}", format_number(d), format_number(v));
                }
            }
            let _ = writeln!(out, "residual_slope,,{}", slope.map(format_number).unwrap_or_default());
            out
        }
        Format::Json => pretty(&json!({
            "order0": series.order0,
            "order1": series.order1,
            "order2": series.order2,
            "deltas": deltas,
            "direct": direct,
            "series": approx,
            "residuals": residuals,
            "residual_slope": slope,
            "metadata": ctx.metadata("tsallis", params),
        })),
    };
    Ok(Outcome::ok(text))
}

/// One JSON line per family, then a summary line. Always JSON.
pub fn verify(ctx: &Context, a: &VerifyArgs) -> Result<Outcome, Failure> {
    let opts = verify::Options {
        seed: ctx.seed,
        quick: a.quick,
        inject_fault: a.inject_fault,
    };
    let reports = verify::run(&opts);
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(text, "{}", r.to_json());
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.family).collect();
    let summary = json!({
        "family": "summary",
        "passed": failed.is_empty(),
        "failed": failed,
        "seed": ctx.seed,
        "quick": a.quick,
        "tool_version": env!("CARGO_PKG_VERSION"),
    });
    let _ = writeln!(text, "{summary}");
    let after = (!failed.is_empty()).then_some(Failure::Verification);
    Ok(Outcome { text, after })
}
