//! Strict TOML run configuration. Unknown keys are rejected and every
//! precondition is checked before any computation starts.

use std::path::Path;

use gravphase::interferometry::{Backend, Scheme};
use gravphase::propagator::{AccelSchedule, Segment};
use gravphase::{Grid, PhysicalParams};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    params: Option<RawParams>,
    grid: Option<RawGrid>,
    initial: Option<RawInitial>,
    evolve: Option<RawEvolve>,
    interfere: Option<RawInterfere>,
    verify: Option<RawVerify>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    hbar: Option<f64>,
    m: Option<f64>,
    g: Option<f64>,
    c: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    x_min: Option<f64>,
    x_max: Option<f64>,
    n: Option<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    x0: Option<f64>,
    p0: Option<f64>,
    sigma0: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvolve {
    times: Option<Vec<f64>>,
    n_steps: Option<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSegment {
    g: Option<f64>,
    dt: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInterfere {
    times: Option<Vec<f64>>,
    backend: Option<String>,
    n_steps: Option<i64>,
    scheme: Option<String>,
    accelerated: Option<Vec<RawSegment>>,
    reference: Option<Vec<RawSegment>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVerify {
    spread_times: Option<Vec<f64>>,
    split_steps: Option<i64>,
    commutator_times: Option<Vec<f64>>,
    protocol_time: Option<f64>,
    ehrenfest_g: Option<Vec<f64>>,
    ehrenfest_times: Option<Vec<f64>>,
    solver_time: Option<f64>,
    solver_steps: Option<Vec<i64>>,
    relativistic_time: Option<f64>,
    c_list: Option<Vec<f64>>,
    random_tuples: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    pub x0: f64,
    pub p0: f64,
    pub sigma0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveConfig {
    pub times: Vec<f64>,
    pub n_steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterfereConfig {
    pub times: Vec<f64>,
    pub backend: Backend,
    pub scheme: Scheme,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub spread_times: Vec<f64>,
    pub split_steps: usize,
    pub commutator_times: Vec<f64>,
    pub protocol_time: f64,
    pub ehrenfest_g: Vec<f64>,
    pub ehrenfest_times: Vec<f64>,
    pub solver_time: f64,
    pub solver_steps: Vec<usize>,
    pub relativistic_time: f64,
    pub c_list: Vec<f64>,
    pub random_tuples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            spread_times: vec![0.5, 1.0, 2.0],
            split_steps: 2048,
            commutator_times: vec![0.5, 1.0],
            protocol_time: 1.0,
            ehrenfest_g: vec![0.5, 1.0, 2.0],
            ehrenfest_times: vec![0.5, 1.0, 1.5],
            solver_time: 1.0,
            solver_steps: vec![64, 128, 256, 512],
            relativistic_time: 1.0,
            c_list: vec![10.0, 20.0, 40.0, 80.0],
            random_tuples: 1000,
        }
    }
}

/// A fully validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub params: PhysicalParams,
    pub grid: Grid,
    pub initial: InitialState,
    pub evolve: Option<EvolveConfig>,
    pub interfere: Option<InterfereConfig>,
    pub verify: VerifyConfig,
}

fn invalid(field: &str, message: impl Into<String>) -> CliError {
    CliError::Config {
        field: field.to_string(),
        message: message.into(),
    }
}

fn required<T>(value: Option<T>, field: &str) -> Result<T, CliError> {
    value.ok_or_else(|| invalid(field, "missing required key"))
}

fn positive(value: f64, field: &str) -> Result<f64, CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(invalid(field, format!("must be a positive number, got {value}")))
    }
}

fn count(value: i64, field: &str) -> Result<usize, CliError> {
    usize::try_from(value)
        .ok()
        .filter(|v| *v >= 1)
        .ok_or_else(|| invalid(field, format!("must be a positive integer, got {value}")))
}

fn time_list(values: Vec<f64>, field: &str) -> Result<Vec<f64>, CliError> {
    if values.is_empty() {
        return Err(invalid(field, "must not be empty"));
    }
    if let Some(t) = values.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(invalid(field, format!("times must be finite and non-negative, got {t}")));
    }
    if values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid(field, "times must be strictly increasing"));
    }
    Ok(values)
}

fn schedule(raw: Vec<RawSegment>, field: &str) -> Result<AccelSchedule, CliError> {
    let segments = raw
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let g = required(s.g, &format!("{field}[{i}].g"))?;
            let dt = positive(required(s.dt, &format!("{field}[{i}].dt"))?, &format!("{field}[{i}].dt"))?;
            Ok(Segment { g, dt })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    AccelSchedule::new(segments).map_err(|e| invalid(field, e.to_string()))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config {
            field: "<document>".into(),
            message: e.message().to_string(),
        })?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawConfig) -> Result<Self, CliError> {
        let rp = required(raw.params, "params")?;
        let defaults = PhysicalParams::default();
        let params = PhysicalParams {
            hbar: positive(rp.hbar.unwrap_or(defaults.hbar), "params.hbar")?,
            m: positive(rp.m.unwrap_or(defaults.m), "params.m")?,
            g: required(rp.g, "params.g")?,
            c: positive(rp.c.unwrap_or(defaults.c), "params.c")?,
        };
        if !params.g.is_finite() {
            return Err(invalid("params.g", "must be finite"));
        }

        let rg = required(raw.grid, "grid")?;
        let x_min = required(rg.x_min, "grid.x_min")?;
        let x_max = required(rg.x_max, "grid.x_max")?;
        let n = required(rg.n, "grid.n")?;
        if !(n >= 8 && (n as u64).is_power_of_two()) {
            return Err(invalid("grid.n", format!("must be a power of two >= 8, got {n}")));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(invalid("grid.x_max", format!("must exceed grid.x_min ({x_min}), got {x_max}")));
        }
        let grid = Grid::new(x_min, x_max, n as usize).map_err(|e| invalid("grid", e.to_string()))?;

        let ri = required(raw.initial, "initial")?;
        let initial = InitialState {
            x0: required(ri.x0, "initial.x0")?,
            p0: required(ri.p0, "initial.p0")?,
            sigma0: positive(required(ri.sigma0, "initial.sigma0")?, "initial.sigma0")?,
        };

        let evolve = raw
            .evolve
            .map(|re| {
                Ok::<_, CliError>(EvolveConfig {
                    times: time_list(required(re.times, "evolve.times")?, "evolve.times")?,
                    n_steps: count(required(re.n_steps, "evolve.n_steps")?, "evolve.n_steps")?,
                })
            })
            .transpose()?;

        let interfere = raw.interfere.map(Self::interfere_section).transpose()?;

        let rv = raw.verify.unwrap_or_default();
        let d = VerifyConfig::default();
        let list = |v: Option<Vec<f64>>, default: Vec<f64>, field: &str| time_list(v.unwrap_or(default), field);
        let verify = VerifyConfig {
            spread_times: list(rv.spread_times, d.spread_times, "verify.spread_times")?,
            split_steps: rv.split_steps.map_or(Ok(d.split_steps), |v| count(v, "verify.split_steps"))?,
            commutator_times: list(rv.commutator_times, d.commutator_times, "verify.commutator_times")?,
            protocol_time: positive(rv.protocol_time.unwrap_or(d.protocol_time), "verify.protocol_time")?,
            ehrenfest_g: {
                let g = rv.ehrenfest_g.unwrap_or(d.ehrenfest_g);
                if g.is_empty() || g.iter().any(|v| !v.is_finite()) {
                    return Err(invalid("verify.ehrenfest_g", "must be a non-empty list of finite numbers"));
                }
                g
            },
            ehrenfest_times: list(rv.ehrenfest_times, d.ehrenfest_times, "verify.ehrenfest_times")?,
            solver_time: positive(rv.solver_time.unwrap_or(d.solver_time), "verify.solver_time")?,
            solver_steps: {
                let steps = rv
                    .solver_steps
                    .map(|v| v.into_iter().map(|s| count(s, "verify.solver_steps")).collect::<Result<Vec<_>, _>>())
                    .transpose()?
                    .unwrap_or(d.solver_steps);
                if steps.len() < 2 || steps.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(invalid("verify.solver_steps", "need at least two strictly increasing step counts"));
                }
                steps
            },
            relativistic_time: positive(
                rv.relativistic_time.unwrap_or(d.relativistic_time),
                "verify.relativistic_time",
            )?,
            c_list: {
                let c = rv.c_list.unwrap_or(d.c_list);
                if c.len() < 3 || c.iter().any(|v| !(v.is_finite() && *v > 0.0)) || c.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(invalid("verify.c_list", "need at least three positive, strictly increasing speeds"));
                }
                c
            },
            random_tuples: rv.random_tuples.map_or(Ok(d.random_tuples), |v| count(v, "verify.random_tuples"))?,
        };

        Ok(Self {
            seed: raw.seed.unwrap_or(0),
            params,
            grid,
            initial,
            evolve,
            interfere,
            verify,
        })
    }

    fn interfere_section(ri: RawInterfere) -> Result<InterfereConfig, CliError> {
        let times = time_list(required(ri.times, "interfere.times")?, "interfere.times")?;
        let backend = match ri.backend.as_deref().unwrap_or("analytic") {
            "analytic" => {
                if ri.n_steps.is_some() {
                    return Err(invalid("interfere.n_steps", "only valid with backend = \"split_step\""));
                }
                Backend::Analytic
            }
            "split_step" => Backend::SplitStep {
                n_steps: count(required(ri.n_steps, "interfere.n_steps")?, "interfere.n_steps")?,
            },
            other => {
                return Err(invalid(
                    "interfere.backend",
                    format!("expected \"analytic\" or \"split_step\", got \"{other}\""),
                ))
            }
        };
        let scheme = match ri.scheme.as_deref().unwrap_or("colocated") {
            "colocated" => {
                if ri.accelerated.is_some() || ri.reference.is_some() {
                    return Err(invalid("interfere.scheme", "branch schedules need scheme = \"schedules\""));
                }
                Scheme::Colocated
            }
            "schedules" => {
                let accelerated = schedule(required(ri.accelerated, "interfere.accelerated")?, "interfere.accelerated")?;
                let reference = schedule(required(ri.reference, "interfere.reference")?, "interfere.reference")?;
                let (ta, tb) = (accelerated.total_duration(), reference.total_duration());
                if (ta - tb).abs() > 1e-12 * ta.max(1.0) {
                    return Err(invalid(
                        "interfere.reference",
                        format!("total duration {tb} differs from interfere.accelerated ({ta})"),
                    ));
                }
                if times.last().is_some_and(|t| *t > ta * (1.0 + 1e-12)) {
                    return Err(invalid("interfere.times", format!("times exceed the schedule duration {ta}")));
                }
                Scheme::Schedules { accelerated, reference }
            }
            other => {
                return Err(invalid(
                    "interfere.scheme",
                    format!("expected \"colocated\" or \"schedules\", got \"{other}\""),
                ))
            }
        };
        Ok(InterfereConfig { times, backend, scheme })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
        [params]
        g = 1.0
        [grid]
        x_min = -20.0
        x_max = 20.0
        n = 256
        [initial]
        x0 = 0.0
        p0 = 0.0
        sigma0 = 1.0
    "#;

    fn field_of(err: CliError) -> String {
        match err {
            CliError::Config { field, .. } => field,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg = RunConfig::parse(BASE).unwrap();
        assert_eq!(cfg.params, PhysicalParams::natural(1.0));
        assert_eq!(cfg.verify, VerifyConfig::default());
        assert!(cfg.evolve.is_none());
        assert_eq!(cfg.seed, 0);
    }

    #[test]
    fn missing_key_is_named() {
        let text = BASE.replace("n = 256", "");
        assert_eq!(field_of(RunConfig::parse(&text).unwrap_err()), "grid.n");
        let text = BASE.replace("g = 1.0", "");
        assert_eq!(field_of(RunConfig::parse(&text).unwrap_err()), "params.g");
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = BASE.replace("g = 1.0", "g = 1.0\ngee = 2.0");
        match RunConfig::parse(&text).unwrap_err() {
            CliError::Config { message, .. } => assert!(message.contains("gee"), "{message}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn field_level_validation() {
        let cases = [
            (BASE.replace("n = 256", "n = 100"), "grid.n"),
            (BASE.replace("x_max = 20.0", "x_max = -30.0"), "grid.x_max"),
            (BASE.replace("sigma0 = 1.0", "sigma0 = -1.0"), "initial.sigma0"),
            (format!("{BASE}\n[evolve]\ntimes = [1.0, 0.5]\nn_steps = 4"), "evolve.times"),
            (format!("{BASE}\n[evolve]\ntimes = [1.0]\nn_steps = 0"), "evolve.n_steps"),
            (format!("{BASE}\n[interfere]\ntimes = [1.0]\nbackend = \"split_step\""), "interfere.n_steps"),
            (format!("{BASE}\n[interfere]\ntimes = [1.0]\nbackend = \"rk4\""), "interfere.backend"),
            (format!("{BASE}\n[verify]\nc_list = [10.0, 20.0]"), "verify.c_list"),
        ];
        for (text, field) in cases {
            assert_eq!(field_of(RunConfig::parse(&text).unwrap_err()), field);
        }
    }

    #[test]
    fn schedules_section() {
        let text = format!(
            "{BASE}\n[interfere]\ntimes = [0.5, 1.0]\nscheme = \"schedules\"\n\
             [[interfere.accelerated]]\ng = 1.0\ndt = 1.0\n\
             [[interfere.reference]]\ng = 0.0\ndt = 0.5\n[[interfere.reference]]\ng = 0.0\ndt = 0.5\n"
        );
        let cfg = RunConfig::parse(&text).unwrap();
        assert!(matches!(cfg.interfere.unwrap().scheme, Scheme::Schedules { .. }));

        let bad = text.replace("dt = 1.0", "dt = 2.0");
        assert_eq!(field_of(RunConfig::parse(&bad).unwrap_err()), "interfere.reference");
    }
}
