//! Command implementations. Each takes a mutable `RunConfig` (model
//! strings are rewritten in normalized form before the config is
//! stamped into output headers), computes pure results through the
//! core crate, and returns the rendered artifacts; only `run` touches
//! the filesystem for writes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use tailasym_core::dist::{self, TailModel};
use tailasym_core::expand::{self, Expansion, WeibullMdaVariant};
use tailasym_core::{agg, estimate, oracle, var, Error, Family, Mda};

use crate::config::RunConfig;
use crate::table::{Cell, Table, TOOL, VERSION};

/// A failed run, split by exit code: usage and domain problems exit 2,
/// honestly reported numeric failures exit 1.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Usage(String),
    Numeric(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numeric(m) => m,
        }
    }
}

/// Map a core error onto an exit class. Unknown families additionally
/// carry the catalog so the caller can see what is available.
fn core_err(e: Error) -> Failure {
    match e {
        Error::NoConverge { .. } | Error::NoBracket(_) => Failure::Numeric(e.to_string()),
        Error::UnknownFamily(_) => {
            let mut msg = format!("{e}\nknown families:\n");
            for (id, params) in dist::catalog() {
                if params.is_empty() {
                    msg.push_str(&format!("  {id}\n"));
                } else {
                    msg.push_str(&format!("  {id}:{params}\n"));
                }
            }
            msg.pop();
            Failure::Usage(msg)
        }
        other => Failure::Usage(other.to_string()),
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Everything a command produced: text for stdout plus files to write.
#[derive(Debug, Clone, Default)]
pub struct Output {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
}

impl Output {
    fn table(table: Table, config: &RunConfig) -> Output {
        let rendered = table.render(config);
        match &config.out {
            Some(path) => Output { stdout: String::new(), files: vec![(PathBuf::from(path), rendered)] },
            None => Output { stdout: rendered, files: Vec::new() },
        }
    }
}

/// Parse the model in `slot`, leaving the normalized spec string behind.
fn take_model(slot: &mut Option<String>, what: &str) -> Result<TailModel, Failure> {
    let text = slot
        .as_ref()
        .ok_or_else(|| usage(format!("{what} is required")))?;
    let model = dist::parse_spec(text).map_err(core_err)?;
    *slot = Some(dist::spec_string(&model));
    Ok(model)
}

fn grid(slot: &Option<Vec<f64>>, what: &str) -> Result<Vec<f64>, Failure> {
    slot.clone().ok_or_else(|| usage(format!("{what} is required")))
}

/// Dispatch on the regime of the risk model.
fn expand_auto(r: &TailModel, s: &TailModel, x: f64) -> Result<Expansion, Failure> {
    match r.mda() {
        Mda::Frechet => expand::frechet_expand(r, s, x),
        Mda::Gumbel => expand::gumbel_expand(r, s, x),
        Mda::Weibull => expand::weibull_mda_expand(r, s, x, WeibullMdaVariant::QuantileAux),
    }
    .map_err(core_err)
}

/// Column layout shared by approx and aggregate: the base columns, then
/// one column per named correction term, then one per extra.
fn expansion_columns(base: &[&str], first: Option<&Expansion>) -> Vec<String> {
    let mut cols: Vec<String> = base.iter().map(|s| s.to_string()).collect();
    if let Some(e) = first {
        cols.extend(e.terms.keys().map(|k| format!("term:{k}")));
        cols.extend(e.extras.keys().map(|k| format!("extra:{k}")));
    }
    cols
}

fn push_expansion_cells(row: &mut Vec<Cell>, e: &Expansion) {
    row.extend(e.terms.values().map(|&v| Cell::Num(v)));
    row.extend(e.extras.values().map(|&v| Cell::Num(v)));
}

fn cmd_approx(config: &mut RunConfig) -> Result<Output, Failure> {
    let r = take_model(&mut config.model_r, "--r")?;
    let s = take_model(&mut config.model_s, "--s")?;
    let xs = grid(&config.x, "--x")?;
    let expansions: Vec<Expansion> = xs
        .iter()
        .map(|&x| expand_auto(&r, &s, x))
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(expansion_columns(
        &["x", "first_order", "second_order", "correction"],
        expansions.first(),
    ));
    for e in &expansions {
        let mut row = vec![
            Cell::Num(e.x),
            Cell::Num(e.leading),
            Cell::Num(e.second_order),
            Cell::Num(e.correction),
        ];
        push_expansion_cells(&mut row, e);
        table.push(row);
    }
    Ok(Output::table(table, config))
}

fn cmd_compare(config: &mut RunConfig) -> Result<Output, Failure> {
    let r = take_model(&mut config.model_r, "--r")?;
    let s = take_model(&mut config.model_s, "--s")?;
    let xs = grid(&config.x, "--x")?;
    let mut table = Table::new(vec![
        "x", "first_order", "second_order", "exact", "e1", "e2", "ratio",
    ]);
    for &x in &xs {
        let e = expand_auto(&r, &s, x)?;
        let exact = oracle::exact_tail(&r, &s, x).map_err(core_err)?;
        let e1 = (e.leading - exact).abs() / exact;
        let e2 = (e.second_order - exact).abs() / exact;
        table.push(vec![
            Cell::Num(e.x),
            Cell::Num(e.leading),
            Cell::Num(e.second_order),
            Cell::Num(exact),
            Cell::Num(e1),
            Cell::Num(e2),
            Cell::Num(e2 / e1),
        ]);
    }
    Ok(Output::table(table, config))
}

fn cmd_var(config: &mut RunConfig) -> Result<Output, Failure> {
    let r = take_model(&mut config.model_r, "--r")?;
    let s = take_model(&mut config.model_s, "--s")?;
    let ps = grid(&config.p, "--p")?;
    // Gumbel-domain risks report the iterated-logarithm VaR correction;
    // the column is named for what it carries.
    let second_name = match r.mda() {
        Mda::Gumbel => "var_weibull",
        _ => "var_second",
    };
    let mut table = Table::new(vec!["p", "var_r", "var_first", second_name, "var_exact"]);
    for &p in &ps {
        let rep = var::var_report(&r, &s, p, true).map_err(core_err)?;
        table.push(vec![
            Cell::Num(rep.p),
            Cell::Num(rep.var_r),
            Cell::Num(rep.var_x_first),
            Cell::Num(rep.var_x_second),
            Cell::Num(rep.var_x_exact.expect("requested exact quantile")),
        ]);
    }
    Ok(Output::table(table, config))
}

fn cmd_simulate(config: &mut RunConfig) -> Result<Output, Failure> {
    let r = take_model(&mut config.model_r, "--r")?;
    let s = take_model(&mut config.model_s, "--s")?;
    let n = config.n.ok_or_else(|| usage("--n is required"))?;
    let seed = *config.seed.get_or_insert(0);
    let set = oracle::draw_samples(&r, &s, n, seed).map_err(core_err)?;
    let mut table = Table::new(vec!["r", "s", "x"]);
    table.notes.push(format!(
        "seed={seed} n={n} model_r={} model_s={}",
        config.model_r.as_deref().unwrap_or(""),
        config.model_s.as_deref().unwrap_or(""),
    ));
    let rv = set.values(oracle::Seq::R);
    let sv = set.values(oracle::Seq::S);
    let xv = set.values(oracle::Seq::X);
    for i in 0..set.n() {
        table.push(vec![Cell::Num(rv[i]), Cell::Num(sv[i]), Cell::Num(xv[i])]);
    }
    Ok(Output::table(table, config))
}

/// Parse an r,s sample file: `#` comments and blank lines are skipped,
/// one non-numeric header row is allowed, and every data row needs
/// numeric r and s in its first two fields. Errors carry 1-based line
/// numbers.
fn parse_sample_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>), Failure> {
    let mut r = Vec::new();
    let mut s = Vec::new();
    let mut header_allowed = true;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() < 2 {
            return Err(usage(format!("line {}: need at least r,s columns", idx + 1)));
        }
        match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
            (Ok(a), Ok(b)) => {
                header_allowed = false;
                r.push(a);
                s.push(b);
            }
            _ if header_allowed => header_allowed = false,
            _ => {
                return Err(usage(format!("line {}: invalid number in '{line}'", idx + 1)));
            }
        }
    }
    if r.is_empty() {
        return Err(usage("sample file has no data rows"));
    }
    Ok((r, s))
}

/// Summary sidecar path: `.csv` becomes `.json`, anything else gets
/// `.summary.json` appended.
fn summary_path(out: &str) -> PathBuf {
    let p = Path::new(out);
    if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        p.with_extension("json")
    } else {
        PathBuf::from(format!("{out}.summary.json"))
    }
}

fn cmd_estimate(config: &mut RunConfig) -> Result<Output, Failure> {
    let method_str = config
        .method
        .as_ref()
        .ok_or_else(|| usage("--method is required"))?
        .to_ascii_lowercase();
    let method = match method_str.as_str() {
        "heavy_rs" => estimate::PathMethod::HeavyRs,
        "heavy_x" => estimate::PathMethod::HeavyX,
        "weibull_rs" => estimate::PathMethod::WeibullRs,
        "weibull_x" => estimate::PathMethod::WeibullX,
        other => {
            return Err(usage(format!(
                "unknown method '{other}'; want heavy_rs, heavy_x, weibull_rs or weibull_x"
            )))
        }
    };
    config.method = Some(method_str.clone());
    let [k_lo, k_hi] = config.k.ok_or_else(|| usage("--k lo:hi is required"))?;
    let xs = grid(&config.x, "--x")?;
    if xs.len() != 1 {
        return Err(usage("estimate needs exactly one threshold in --x"));
    }
    let x = xs[0];
    let out = config
        .out
        .clone()
        .ok_or_else(|| usage("--out is required: estimate writes a path table and a summary"))?;

    let models = match (config.model_r.is_some(), config.model_s.is_some()) {
        (true, true) => Some((
            take_model(&mut config.model_r, "--r")?,
            take_model(&mut config.model_s, "--s")?,
        )),
        (false, false) => None,
        _ => return Err(usage("give both --r and --s, or neither")),
    };

    let samples = if let Some(path) = &config.data {
        let text = fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {path}: {e}")))?;
        let (rv, sv) = parse_sample_csv(&text)?;
        oracle::SampleSet::from_draws(config.seed.unwrap_or(0), rv, sv).map_err(core_err)?
    } else {
        let (r, s) = models
            .as_ref()
            .ok_or_else(|| usage("need --data, or --r/--s with --n for self-simulation"))?;
        let n = config.n.ok_or_else(|| usage("--n is required without --data"))?;
        let seed = *config.seed.get_or_insert(0);
        oracle::draw_samples(r, s, n, seed).map_err(core_err)?
    };

    let true_p = match &models {
        Some((r, s)) => Some(oracle::exact_tail(r, s, x).map_err(core_err)?),
        None => None,
    };
    let ks: Vec<usize> = (k_lo..=k_hi).collect();
    let path = estimate::estimator_path(&samples, method, &ks, x, true_p).map_err(core_err)?;

    let mut columns = vec!["k", "estimate_index", "p_hat", "valid"];
    if true_p.is_some() {
        columns.push("log_ratio");
    }
    let mut table = Table::new(columns);
    table.notes.push(format!("n={} x={x:.16e}", samples.n()));
    for row in &path.rows {
        let mut cells = vec![
            Cell::Int(row.k as i64),
            Cell::Num(row.estimate_index),
            Cell::Num(row.p_hat),
            Cell::Int(row.valid as i64),
        ];
        if let Some(tp) = true_p {
            cells.push(Cell::Num((row.p_hat / tp).ln()));
        }
        table.push(cells);
    }

    let (s_lo, s_hi) = estimate::stable_k_range(samples.n());
    let window: Vec<&estimate::PathRow> = path
        .rows
        .iter()
        .filter(|r| r.valid && r.k >= s_lo && r.k <= s_hi)
        .collect();
    let idx: Vec<f64> = window.iter().map(|r| r.estimate_index).collect();
    let ph: Vec<f64> = window.iter().map(|r| r.p_hat).collect();
    let med_idx = estimate::median(&idx);
    let med_p = estimate::median(&ph);
    let med_lr = true_p.map(|tp| (med_p / tp).ln());
    let summary = serde_json::json!({
        "tool": TOOL,
        "version": VERSION,
        "command": "estimate",
        "method": method_str,
        "n": samples.n(),
        "x": x,
        "k": [k_lo, k_hi],
        "stable_k": [s_lo, s_hi],
        "rows": path.rows.len(),
        "valid_stable_rows": window.len(),
        "median_estimate_index": med_idx,
        "median_p_hat": med_p,
        "true_p": true_p,
        "median_log_ratio": med_lr,
    });
    let mut summary_text = serde_json::to_string(&summary).expect("summary serializes");
    summary_text.push('\n');

    let rendered = table.render(config);
    Ok(Output {
        stdout: String::new(),
        files: vec![
            (PathBuf::from(&out), rendered),
            (summary_path(&out), summary_text),
        ],
    })
}

/// g'''(λ)/g'(λ) for the Beta(a,b) density via the log-derivative
/// u = (a−1)/λ − (b−1)/(1−λ): g'''/g' = (u³ + 3uu' + u'')/u. When u and
/// the numerator both vanish (symmetry point) the density has no odd
/// part and the ratio is 0; a lone zero of u (interior mode) leaves the
/// coefficient undefined and is rejected downstream.
fn beta_g3_over_g1(a: f64, b: f64, lam: f64) -> f64 {
    let p = a - 1.0;
    let q = b - 1.0;
    let om = 1.0 - lam;
    let u = p / lam - q / om;
    let du = -p / (lam * lam) - q / (om * om);
    let ddu = 2.0 * p / (lam * lam * lam) - 2.0 * q / (om * om * om);
    let num = u * u * u + 3.0 * u * du + ddu;
    if num == 0.0 && u == 0.0 {
        0.0
    } else {
        num / u
    }
}

fn cmd_aggregate(config: &mut RunConfig) -> Result<Output, Failure> {
    let lambda = config.lambda.ok_or_else(|| usage("--lambda is required"))?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(usage("lambda must lie in [0,1]"));
    }
    let r = take_model(&mut config.model_r, "--r")?;
    let s = take_model(&mut config.model_s, "--s")?;
    let (a, b) = match s.family() {
        Family::Beta { a, b } => (a, b),
        _ => {
            return Err(usage(
                "aggregation needs a Beta deflator (closed local coefficients at lambda)",
            ))
        }
    };
    let law = match config.signs {
        Some([pp, pm, mp, mm]) => agg::SignLaw::new(pp, pm, mp, mm).map_err(core_err)?,
        None => agg::SignLaw::fair_independent(),
    };
    let q = agg::q_lambda(&law, lambda).map_err(core_err)?;
    let coeffs = if lambda == 0.0 || lambda == 1.0 {
        agg::beta_local_coeffs(a, b, lambda)
    } else {
        agg::smooth_local_coeffs(|t| s.density(t), beta_g3_over_g1(a, b, lambda), lambda)
    }
    .map_err(core_err)?;
    let model = agg::AggregationModel::new(lambda, q, coeffs, r)
        .and_then(|m| m.with_deflator(s))
        .map_err(core_err)?;

    let xs = grid(&config.x, "--x")?;
    let expansions: Vec<Expansion> = xs
        .iter()
        .map(|&x| agg::aggregate_expand(&model, x).map_err(core_err))
        .collect::<Result<_, _>>()?;
    let mut columns = expansion_columns(
        &["x", "first_order", "second_order", "correction"],
        expansions.first(),
    );
    if config.mc.is_some() {
        columns.push("mc_estimate".to_string());
        columns.push("mc_sigma".to_string());
    }
    let mut table = Table::new(columns);
    for (&x_in, e) in xs.iter().zip(&expansions) {
        let mut row = vec![
            Cell::Num(e.x),
            Cell::Num(e.leading),
            Cell::Num(e.second_order),
            Cell::Num(e.correction),
        ];
        push_expansion_cells(&mut row, e);
        if let Some(draws) = config.mc {
            // Event size of the deflator-side tail the expansion used:
            // Gumbel risks localize at 1/eta, bounded risks at the
            // endpoint distance itself.
            let u = match e.regime {
                Mda::Gumbel => 1.0 / e.extras["eta"],
                _ => x_in,
            };
            let seed = *config.seed.get_or_insert(0);
            let mc =
                agg::mc_s_lambda_tail(model.model_s.as_ref().unwrap(), &law, lambda, u, draws, seed)
                    .map_err(core_err)?;
            row.push(Cell::Num(mc.estimate));
            row.push(Cell::Num(mc.sigma));
        }
        table.push(row);
    }
    Ok(Output::table(table, config))
}

pub fn execute(config: &RunConfig) -> Result<Output, Failure> {
    let mut cfg = config.clone();
    match cfg.command.as_str() {
        "approx" => cmd_approx(&mut cfg),
        "compare" => cmd_compare(&mut cfg),
        "var" => cmd_var(&mut cfg),
        "estimate" => cmd_estimate(&mut cfg),
        "aggregate" => cmd_aggregate(&mut cfg),
        "simulate" => cmd_simulate(&mut cfg),
        other => Err(usage(format!("unknown command '{other}'"))),
    }
}

/// Execute and deliver: write requested files, print the rest.
pub fn run(config: &RunConfig) -> Result<(), Failure> {
    let output = execute(config)?;
    for (path, content) in &output.files {
        fs::write(path, content)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if !output.stdout.is_empty() {
        print!("{}", output.stdout);
    }
    Ok(())
}

/// Keys of a BTreeMap-backed expansion in column order; used by tests.
pub fn term_columns(e: &Expansion) -> BTreeMap<&'static str, f64> {
    e.terms.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> RunConfig {
        let mut cfg = RunConfig::new("approx");
        cfg.model_r = Some("pareto:alpha=2,theta=1".to_string());
        cfg.model_s = Some("beta:a=1,b=2".to_string());
        cfg.x = Some(vec![10.0, 100.0]);
        cfg
    }

    #[test]
    fn approx_two_rows_with_normalized_header() {
        let out = execute(&base_config()).unwrap();
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert!(lines[1].contains("\"model_r\":\"pareto:alpha=2,theta=1\""));
        assert!(lines[2].starts_with("x,first_order,second_order,correction,term:"));
        assert_eq!(lines.len(), 5, "header + columns + two rows: {}", out.stdout);
    }

    #[test]
    fn approx_correction_at_100() {
        let out = execute(&base_config()).unwrap();
        let row = out.stdout.lines().last().unwrap();
        let cells: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        // alpha*theta*b/((alpha+a+b)*x) = 2*1*2/(5*100)
        assert!((cells[3] - 0.008).abs() < 2e-4, "correction {}", cells[3]);
    }

    #[test]
    fn unknown_family_lists_catalog() {
        let mut cfg = base_config();
        cfg.model_r = Some("zebra:alpha=1".to_string());
        let err = execute(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.message().contains("unknown family: zebra"));
        assert!(err.message().contains("pareto:alpha,theta"));
        assert!(err.message().contains("truncgumbel"));
    }

    #[test]
    fn empty_grid_is_empty_table() {
        let mut cfg = base_config();
        cfg.x = Some(Vec::new());
        let out = execute(&cfg).unwrap();
        assert_eq!(out.stdout.lines().count(), 3, "{}", out.stdout);
    }

    #[test]
    fn compare_ratio_below_one_in_depth() {
        let mut cfg = base_config();
        cfg.command = "compare".to_string();
        cfg.x = Some(vec![1000.0]);
        let out = execute(&cfg).unwrap();
        let row = out.stdout.lines().last().unwrap();
        let cells: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cells[6] < 1.0, "e2/e1 = {}", cells[6]);
    }

    #[test]
    fn var_rejects_bad_level() {
        let mut cfg = base_config();
        cfg.command = "var".to_string();
        cfg.x = None;
        cfg.p = Some(vec![1.2]);
        let err = execute(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.message().contains("(0,1)"));
    }

    #[test]
    fn sample_csv_errors_carry_line_numbers() {
        let text = "# comment\nr,s\n1.0,0.5\n2.0,zebra\n";
        let err = parse_sample_csv(text).unwrap_err();
        assert!(err.message().contains("line 4"), "{}", err.message());
        let ok = parse_sample_csv("# c\nr,s\n1.0,0.5\n2.0,0.25\n").unwrap();
        assert_eq!(ok.0, vec![1.0, 2.0]);
        assert_eq!(ok.1, vec![0.5, 0.25]);
    }

    #[test]
    fn summary_path_rules() {
        assert_eq!(summary_path("a/b.csv"), PathBuf::from("a/b.json"));
        assert_eq!(summary_path("a/b.dat"), PathBuf::from("a/b.dat.summary.json"));
    }

    #[test]
    fn beta_ratio_symmetric_point_is_zero() {
        assert_eq!(beta_g3_over_g1(2.0, 2.0, 0.5), 0.0);
        // Beta(2,2) has a quadratic density: the third derivative is 0
        // everywhere, up to roundoff in the u-representation.
        assert!(beta_g3_over_g1(2.0, 2.0, 0.3).abs() < 1e-10);
        // asymmetric mode (exactly representable): u = 0 with curvature,
        // the ratio diverges and downstream validation rejects it
        let mode = (2.0 - 1.0) / (2.0 + 4.0 - 2.0);
        assert!(!beta_g3_over_g1(2.0, 4.0, mode).is_finite());
    }

    #[test]
    fn aggregate_lambda_one_matches_plain_product() {
        let mut cfg = RunConfig::new("aggregate");
        cfg.model_r = Some("gamma:alpha=2,lambda=1".to_string());
        cfg.model_s = Some("beta:a=1,b=2".to_string());
        cfg.lambda = Some(1.0);
        cfg.signs = Some([1.0, 0.0, 0.0, 0.0]);
        cfg.x = Some(vec![30.0]);
        let agg_out = execute(&cfg).unwrap();
        let mut plain = RunConfig::new("approx");
        plain.model_r = cfg.model_r.clone();
        plain.model_s = cfg.model_s.clone();
        plain.x = cfg.x.clone();
        let plain_out = execute(&plain).unwrap();
        let cell = |text: &str, col: usize| -> f64 {
            text.lines()
                .last()
                .unwrap()
                .split(',')
                .nth(col)
                .unwrap()
                .parse()
                .unwrap()
        };
        // sure plus signs: q = 1, so leading and second order agree bitwise
        for col in 1..3 {
            assert_eq!(cell(&agg_out.stdout, col), cell(&plain_out.stdout, col));
        }
    }

    #[test]
    fn aggregate_rejects_lambda_outside() {
        let mut cfg = RunConfig::new("aggregate");
        cfg.model_r = Some("gamma:alpha=2,lambda=1".to_string());
        cfg.model_s = Some("beta:a=2,b=2".to_string());
        cfg.lambda = Some(1.5);
        cfg.x = Some(vec![30.0]);
        let err = execute(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
