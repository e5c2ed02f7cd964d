//! Experiment configuration files: a JSON document naming a command, its
//! parameters, an output path, and a thread count.

use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;
use serde_json::{Map, Value};
use vinlab::{Budget, Interval, PrimeParams};

use crate::commands::{self, parse_alpha, parse_exponents, parse_i8_list, parse_u64_list};
use crate::output::Outcome;
use crate::sweep;
use crate::verify;

#[derive(Debug, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub command: String,
    #[serde(default)]
    pub parameters: Map<String, Value>,
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default)]
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: ExperimentConfig =
            serde_json::from_str(&text).with_context(|| "parsing config JSON")?;
        if config.name.is_empty() {
            bail!("config name must be nonempty");
        }
        if let Some(t) = config.threads {
            if t == 0 {
                bail!("threads must be >= 1");
            }
        }
        Ok(config)
    }
}

fn get<'v>(params: &'v Map<String, Value>, key: &str) -> Result<&'v Value> {
    params
        .get(key)
        .ok_or_else(|| anyhow!("missing required parameter '{key}'"))
}

fn get_u64(params: &Map<String, Value>, key: &str) -> Result<u64> {
    get(params, key)?
        .as_u64()
        .ok_or_else(|| anyhow!("parameter '{key}' must be a nonnegative integer"))
}

fn get_u32(params: &Map<String, Value>, key: &str) -> Result<u32> {
    Ok(u32::try_from(get_u64(params, key)?)?)
}

fn opt_u64(params: &Map<String, Value>, key: &str) -> Result<Option<u64>> {
    match params.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(Some)
            .ok_or_else(|| anyhow!("parameter '{key}' must be a nonnegative integer")),
    }
}

fn get_str<'v>(params: &'v Map<String, Value>, key: &str) -> Result<&'v str> {
    get(params, key)?
        .as_str()
        .ok_or_else(|| anyhow!("parameter '{key}' must be a string"))
}

/// Exponent sets may be given as an array of integers or a comma list.
fn get_exponent_set(params: &Map<String, Value>) -> Result<vinlab::ExponentSet> {
    match get(params, "E")? {
        Value::Array(items) => {
            let list: Vec<String> = items
                .iter()
                .map(|v| {
                    v.as_u64()
                        .map(|n| n.to_string())
                        .ok_or_else(|| anyhow!("parameter 'E' must list integers"))
                })
                .collect::<Result<_>>()?;
            parse_exponents(&list.join(","))
        }
        Value::String(text) => parse_exponents(text),
        _ => bail!("parameter 'E' must be an array or comma list"),
    }
}

fn get_u64_list(params: &Map<String, Value>, key: &str) -> Result<Vec<u64>> {
    match get(params, key)? {
        Value::Array(items) => items
            .iter()
            .map(|v| {
                v.as_u64()
                    .ok_or_else(|| anyhow!("parameter '{key}' must list integers"))
            })
            .collect(),
        Value::String(text) => parse_u64_list(text),
        _ => bail!("parameter '{key}' must be an array or comma list"),
    }
}

fn interval_from(params: &Map<String, Value>) -> Result<Interval> {
    if let Some(x) = opt_u64(params, "X")? {
        return Ok(Interval::new(1, x));
    }
    let start = get(params, "start")?
        .as_i64()
        .ok_or_else(|| anyhow!("parameter 'start' must be an integer"))?;
    Ok(Interval::new(start, get_u64(params, "length")?))
}

/// Execute the configured command, writing to its output path (or the
/// given writer when no path is set).
pub fn run(config: &ExperimentConfig, budget: Budget, stdout: &mut dyn Write) -> Result<Outcome> {
    let mut file_out;
    let out: &mut dyn Write = match &config.output_path {
        Some(path) => {
            file_out = std::fs::File::create(path)
                .with_context(|| format!("creating output file {path}"))?;
            &mut file_out
        }
        None => stdout,
    };
    let p = &config.parameters;
    match config.command.as_str() {
        "count" => commands::cmd_count(
            &get_exponent_set(p)?,
            get_u32(p, "s")?,
            interval_from(p)?,
            budget,
            out,
        ),
        "moment" => commands::cmd_moment(
            &get_exponent_set(p)?,
            get_u32(p, "s")?,
            interval_from(p)?,
            budget,
            out,
        ),
        "dft-check" => commands::cmd_dft_check(
            &get_exponent_set(p)?,
            get_u32(p, "s")?,
            get_u64(p, "X")?,
            budget,
            out,
        ),
        "expsum" => {
            let e_set = get_exponent_set(p)?;
            let rational = match (opt_u64(p, "q")?, p.get("a")) {
                (Some(q), Some(_)) => Some((q, get_u64_list(p, "a")?)),
                _ => None,
            };
            let alpha: Vec<f64> = match p.get("alpha") {
                Some(Value::String(text)) => text
                    .split(',')
                    .map(parse_alpha)
                    .collect::<Result<_>>()?,
                Some(Value::Array(items)) => items
                    .iter()
                    .map(|v| {
                        v.as_f64()
                            .ok_or_else(|| anyhow!("parameter 'alpha' must list numbers"))
                    })
                    .collect::<Result<_>>()?,
                _ if rational.is_some() => vec![0.0; e_set.len()],
                _ => bail!("expsum needs 'alpha' or rational 'q'/'a'"),
            };
            commands::cmd_expsum(&e_set, &alpha, get_u64(p, "X").unwrap_or(0), rational, out)
        }
        "congruence" => {
            let op = get_str(p, "op")?;
            match op {
                "tuples" => commands::cmd_congruence_tuples(
                    get_u64(p, "p")?,
                    get_u32(p, "c")?,
                    get_u64(p, "xi")?,
                    get_u32(p, "k")?,
                    out,
                ),
                "lemma41" => commands::cmd_congruence_lemma41(
                    get_u64(p, "p")?,
                    get_u32(p, "k")?,
                    get_u32(p, "a")?,
                    get_u32(p, "b")?,
                    out,
                ),
                "d3" => commands::cmd_congruence_d3(
                    get_u64(p, "p")?,
                    get_u32(p, "k")?,
                    get_u32(p, "a")?,
                    get_u32(p, "b")?,
                    out,
                ),
                "census" => {
                    let sigma = parse_i8_list(get_str(p, "sigma")?)?;
                    let params = PrimeParams::new(
                        get_u64(p, "p")?,
                        get_u32(p, "k")?,
                        get_u32(p, "a")?,
                        get_u32(p, "b")?,
                        get_u64(p, "xi")?,
                        get_u64(p, "eta")?,
                        sigma,
                    )?;
                    commands::cmd_congruence_census(&params, out)
                }
                "lift" => commands::cmd_congruence_lift(
                    get_u64(p, "p")?,
                    get_u32(p, "k")?,
                    &get_u64_list(p, "base")?,
                    opt_u64(p, "xi")?.unwrap_or(0),
                    out,
                ),
                other => bail!("unknown congruence op '{other}'"),
            }
        }
        "singular" => {
            let integral = match (p.get("box"), p.get("grid")) {
                (Some(b), Some(g)) => Some((
                    b.as_f64().ok_or_else(|| anyhow!("'box' must be a number"))?,
                    g.as_u64().ok_or_else(|| anyhow!("'grid' must be an integer"))?
                        as usize,
                )),
                _ => None,
            };
            commands::cmd_singular(
                get_u32(p, "s")?,
                get_u32(p, "k")?,
                get_u64(p, "Q")?,
                integral,
                out,
            )
        }
        "waring" => commands::cmd_waring(
            get_u32(p, "s")?,
            get_u32(p, "k")?,
            get_u64(p, "n")?,
            opt_u64(p, "Q")?.unwrap_or(50),
            out,
        ),
        "tarry" => match get_str(p, "op")? {
            "search" => commands::cmd_tarry_search(
                get_u32(p, "k")?,
                get_u32(p, "h")?,
                get_u32(p, "s")?,
                get_u64(p, "X")?,
                p.get("all").and_then(Value::as_bool).unwrap_or(false),
                out,
            ),
            "criterion" => commands::cmd_tarry_criterion(
                get_u32(p, "k")?,
                get_u64(p, "t")?,
                get_u32(p, "s")?,
                get_u64(p, "X")?,
                budget,
                out,
            ),
            other => bail!("unknown tarry op '{other}'"),
        },
        "bounds" => {
            if p.contains_key("s") {
                commands::cmd_bounds_exponent(get_u32(p, "s")?, get_u32(p, "k")?, out)
            } else if p.contains_key("k") {
                commands::cmd_bounds_table(get_u64(p, "k")?, out)
            } else {
                commands::cmd_bounds_gtilde(out)
            }
        }
        "verify" => {
            let level = match get_str(p, "level").unwrap_or("quick") {
                "full" => verify::Level::Full,
                _ => verify::Level::Quick,
            };
            let dir = p
                .get("out_dir")
                .and_then(Value::as_str)
                .unwrap_or(".")
                .to_string();
            verify::run(level, Path::new(&dir), budget, out)
        }
        "sweep" => {
            let values = get_u64_list(p, "values")?;
            match get_str(p, "target")? {
                "count" => sweep::sweep_count(
                    &get_exponent_set(p)?,
                    get_u32(p, "s")?,
                    &values,
                    budget,
                    out,
                ),
                "singular" => {
                    sweep::sweep_singular(get_u32(p, "s")?, get_u32(p, "k")?, &values, out)
                }
                other => bail!("unknown sweep target '{other}'"),
            }
        }
        other => bail!("unknown command '{other}'"),
    }
}
