use std::fs;
use std::path::{Path, PathBuf};

use hill_core::{Potential, C64, DEFAULT_TOL};
use serde::Deserialize;

use crate::args::{Common, RouteArg};
use crate::CliError;

const THREADS_ENV: &str = "HILL_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutSpec {
    pub format: Format,
    pub path: Option<PathBuf>,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub potential: Option<Potential>,
    pub tol: f64,
    pub threads: usize,
    pub out: Option<OutSpec>,
    pub route: RouteArg,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    potential: Option<PotentialSource>,
    tol: Option<f64>,
    threads: Option<usize>,
    out: Option<String>,
    route: Option<RouteArg>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PotentialSource {
    Text(String),
    Inline(Potential),
}

impl RunConfig {
    /// Flags win over the config file, which wins over `HILL_THREADS` and
    /// the built-in defaults.
    pub fn resolve(flags: &Common) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::usage("--config", format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str::<ConfigFile>(&text)
                    .map_err(|e| CliError::usage("--config", format!("{}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };

        let potential = match (&flags.potential, file.potential) {
            (Some(s), _) => Some(parse_potential(s).map_err(|m| CliError::usage("--potential", m))?),
            (None, Some(PotentialSource::Text(s))) => {
                Some(parse_potential(&s).map_err(|m| CliError::usage("--config", format!("potential: {m}")))?)
            }
            (None, Some(PotentialSource::Inline(p))) => Some(p),
            (None, None) => None,
        };

        let tol = flags.tol.or(file.tol).unwrap_or(DEFAULT_TOL);
        if hill_core::floquet::check_tol(tol).is_err() {
            return Err(CliError::usage("--tol", format!("{tol} is outside [1e-13, 1e-6]")));
        }

        let threads = match flags.threads.or(file.threads) {
            Some(t) => t,
            None => threads_from_env()?,
        };
        if threads == 0 {
            return Err(CliError::usage("--threads", "must be at least 1".into()));
        }

        let out = match flags.out.as_deref().or(file.out.as_deref()) {
            Some(s) => Some(parse_out(s).map_err(|m| CliError::usage("--out", m))?),
            None => None,
        };

        Ok(RunConfig {
            potential,
            tol,
            threads,
            out,
            route: flags.route.or(file.route).unwrap_or(RouteArg::Auto),
        })
    }

    pub fn potential(&self) -> Result<&Potential, CliError> {
        self.potential
            .as_ref()
            .ok_or_else(|| CliError::usage("--potential", "a potential is required".into()))
    }

    pub fn out_or(&self, default: Format) -> OutSpec {
        self.out.clone().unwrap_or(OutSpec {
            format: default,
            path: None,
        })
    }
}

fn threads_from_env() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::usage(THREADS_ENV, format!("`{v}` is not a positive integer"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn parse_out(s: &str) -> Result<OutSpec, String> {
    match s {
        "csv" => return Ok(OutSpec { format: Format::Csv, path: None }),
        "json" => return Ok(OutSpec { format: Format::Json, path: None }),
        _ => {}
    }
    let path = Path::new(s);
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
        Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
        _ => return Err(format!("`{s}` is neither csv, json nor a .csv/.json path")),
    };
    Ok(OutSpec {
        format,
        path: Some(path.to_path_buf()),
    })
}

/// Accepts JSON text, a JSON file path, `model:K=<complex>` or `mathieu:q=<real>`.
pub fn parse_potential(s: &str) -> Result<Potential, String> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("model:") {
        let k = rest
            .strip_prefix("K=")
            .or_else(|| rest.strip_prefix("k="))
            .ok_or_else(|| format!("expected model:K=<value>, got `{s}`"))?;
        return Ok(Potential::model(parse_complex(k)?));
    }
    if let Some(rest) = s.strip_prefix("mathieu:") {
        let q = rest
            .strip_prefix("q=")
            .ok_or_else(|| format!("expected mathieu:q=<value>, got `{s}`"))?;
        let q: f64 = q.parse().map_err(|_| format!("bad number `{q}`"))?;
        return Ok(Potential::mathieu(q));
    }
    let text = if s.starts_with('{') {
        s.to_string()
    } else {
        fs::read_to_string(s).map_err(|e| format!("`{s}` is not a known shorthand and cannot be read: {e}"))?
    };
    serde_json::from_str(&text).map_err(|e| format!("invalid potential JSON: {e}"))
}

/// `a`, `bi`, `a+bi`, `a-bi` with ordinary float syntax for `a` and `b`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let bad = || format!("bad complex number `{s}`");
    let t = s.trim();
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok(C64::new(re, im))
}
