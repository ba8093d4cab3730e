//! Run configuration: one serializable record per invocation.
//!
//! Every command assembles a `RunConfig`, normalizes its model strings,
//! and stamps the JSON form into the output header, so any output file
//! identifies the run that produced it and can be replayed exactly.

use serde::{Deserialize, Serialize};

/// Output encoding for tabular results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl core::fmt::Display for Format {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Normalized invocation record. Unused fields stay `None` and are
/// skipped on serialization, so `serialize ∘ parse` is the identity on
/// normalized text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub model_r: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub model_s: Option<String>,
    /// Evaluation grid (levels, thresholds, or endpoint distances).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x: Option<Vec<f64>>,
    /// Probability levels.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<Vec<f64>>,
    /// Inclusive order-statistic range [lo, hi].
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<f64>,
    /// Sign masses (++, +-, -+, --) for aggregation.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub signs: Option<[f64; 4]>,
    /// Monte Carlo draws for the aggregation cross-check column.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mc: Option<u64>,
    /// Input sample CSV for the estimators.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub data: Option<String>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub out: Option<String>,
}

impl RunConfig {
    /// Empty record for one command; callers fill the fields they use.
    pub fn new(command: &str) -> RunConfig {
        RunConfig {
            command: command.to_string(),
            model_r: None,
            model_s: None,
            x: None,
            p: None,
            k: None,
            n: None,
            seed: None,
            method: None,
            lambda: None,
            signs: None,
            mc: None,
            data: None,
            format: Format::Csv,
            out: None,
        }
    }

    /// Canonical single-line JSON form, stamped into output headers.
    pub fn normalized(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn parse(text: &str) -> Result<RunConfig, String> {
        serde_json::from_str(text).map_err(|e| format!("bad config: {e}"))
    }
}

fn parse_num(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let v: f64 = t.parse().map_err(|_| format!("not a number: '{t}'"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not finite: '{t}'"))
    }
}

/// Parse a numeric grid: a comma list `a,b,c` or a filled range
/// `lo:hi:count` (linear) / `lo:hi:count:log` (geometric). An empty
/// string is an empty grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    if !text.contains(':') {
        return text
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(parse_num)
            .collect();
    }
    let parts: Vec<&str> = text.split(':').collect();
    let log = match parts.len() {
        3 => false,
        4 if parts[3].trim().eq_ignore_ascii_case("log") => true,
        _ => return Err(format!("bad range '{text}': want lo:hi:count or lo:hi:count:log")),
    };
    let lo = parse_num(parts[0])?;
    let hi = parse_num(parts[1])?;
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| format!("bad count '{}'", parts[2].trim()))?;
    if log && !(lo > 0.0 && hi > 0.0) {
        return Err("log spacing needs positive endpoints".to_string());
    }
    Ok(match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                let t = i as f64 / (count - 1) as f64;
                if log {
                    lo * (hi / lo).powf(t)
                } else {
                    lo + (hi - lo) * t
                }
            })
            .collect(),
    })
}

/// Parse an inclusive order-statistic range `lo:hi`, 1 <= lo <= hi.
pub fn parse_k_range(text: &str) -> Result<[usize; 2], String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("bad k range '{text}': want lo:hi"))?;
    let lo: usize = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad k bound '{}'", lo.trim()))?;
    let hi: usize = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad k bound '{}'", hi.trim()))?;
    if lo < 1 || hi < lo {
        return Err(format!("bad k range '{text}': need 1 <= lo <= hi"));
    }
    Ok([lo, hi])
}

/// Parse four sign masses `pp,pm,mp,mm`.
pub fn parse_signs(text: &str) -> Result<[f64; 4], String> {
    let parts: Vec<f64> = text
        .split(',')
        .map(parse_num)
        .collect::<Result<Vec<f64>, String>>()?;
    if parts.len() != 4 {
        return Err(format!("sign law needs four masses pp,pm,mp,mm, got {}", parts.len()));
    }
    Ok([parts[0], parts[1], parts[2], parts[3]])
}
