//! Batch front end: `key = value` run configs, command dispatch and CSV
//! output.
//!
//! Every CSV starts with a `#` header that echoes the fully resolved config.
//! Stripping the `# ` prefix from the `key = value` lines of that header
//! gives a config file that reproduces the run.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::analysis::{self, Combination};
use crate::error::{Error, Result};
use crate::experiment::{
    self, BellClass, BellState, CountValue, CountsTable, ExperimentConfig, FourfoldClass, Setting,
};
use crate::optics;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tolerance for the completeness check on click-pattern probabilities.
pub const COMPLETENESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Exact,
    Sample,
    Chsh,
    DelayScan,
    BsaAudit,
    DoublepairAudit,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Exact,
        Command::Sample,
        Command::Chsh,
        Command::DelayScan,
        Command::BsaAudit,
        Command::DoublepairAudit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Exact => "exact",
            Command::Sample => "sample",
            Command::Chsh => "chsh",
            Command::DelayScan => "delay-scan",
            Command::BsaAudit => "bsa-audit",
            Command::DoublepairAudit => "doublepair-audit",
        }
    }

    pub fn parse(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Which analyzer settings `exact`, `sample` and `chsh` evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SettingsMode {
    /// Every combination of `a_angles` and `d_angles`.
    Grid,
    /// Only `(phi_a, phi_d)`.
    Single,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChshSource {
    Exact,
    Sample,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: ExperimentConfig,
    pub settings: SettingsMode,
    pub a_angles: Vec<f64>,
    pub d_angles: Vec<f64>,
    /// Wave-packet width for the delay model; delays share its unit.
    pub sigma: f64,
    pub scan_min: f64,
    pub scan_max: f64,
    pub scan_points: usize,
    pub chsh_source: ChshSource,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            experiment: ExperimentConfig::default(),
            settings: SettingsMode::Grid,
            a_angles: experiment::CHSH_A_ANGLES.to_vec(),
            d_angles: experiment::CHSH_D_ANGLES.to_vec(),
            sigma: 1.0,
            scan_min: -3.0,
            scan_max: 3.0,
            scan_points: 25,
            chsh_source: ChshSource::Exact,
        }
    }
}

/// Keys accepted in config files and `--set`.
pub const KEYS: [&str; 21] = [
    "phi_a",
    "phi_d",
    "overlap",
    "delay",
    "sigma",
    "pair_amplitude",
    "efficiency",
    "misalignment_deg",
    "seed",
    "events",
    "duration_s",
    "rate_hz",
    "settings",
    "a_angles",
    "d_angles",
    "scan_min",
    "scan_max",
    "scan_points",
    "chsh_source",
    "prune",
    "max_photons",
];

/// Raw assignments collected before resolution.
#[derive(Default)]
struct Assignments {
    seen: BTreeSet<String>,
    delay: Option<(usize, f64)>,
    duration_s: Option<(usize, f64)>,
    rate_hz: Option<(usize, f64)>,
    overlap_line: Option<usize>,
    events_line: Option<usize>,
}

fn config_err(line: usize, key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        line,
        key: key.to_string(),
        reason: reason.into(),
    }
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64> {
    let x: f64 = value
        .parse()
        .map_err(|_| config_err(line, key, format!("`{value}` is not a number")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(config_err(line, key, format!("`{value}` is not finite")))
    }
}

fn parse_u64(line: usize, key: &str, value: &str) -> Result<u64> {
    value.parse().map_err(|_| {
        config_err(
            line,
            key,
            format!("`{value}` is not a non-negative integer"),
        )
    })
}

fn parse_list(line: usize, key: &str, value: &str) -> Result<Vec<f64>> {
    let list = value
        .split(',')
        .map(|s| parse_f64(line, key, s.trim()))
        .collect::<Result<Vec<_>>>()?;
    if list.is_empty() {
        return Err(config_err(line, key, "empty list"));
    }
    Ok(list)
}

fn in_range(line: usize, key: &str, x: f64, ok: bool, range: &str) -> Result<f64> {
    if ok {
        Ok(x)
    } else {
        Err(config_err(line, key, format!("{x} outside {range}")))
    }
}

impl RunConfig {
    fn assign(&mut self, acc: &mut Assignments, line: usize, key: &str, value: &str) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(config_err(line, key, "unknown key"));
        }
        if !acc.seen.insert(key.to_string()) {
            return Err(config_err(line, key, "key given twice"));
        }
        let exp = &mut self.experiment;
        match key {
            "phi_a" => exp.phi_a = parse_f64(line, key, value)?,
            "phi_d" => exp.phi_d = parse_f64(line, key, value)?,
            "overlap" => {
                let v = parse_f64(line, key, value)?;
                exp.overlap = in_range(line, key, v, (0.0..=1.0).contains(&v), "[0, 1]")?;
                acc.overlap_line = Some(line);
            }
            "delay" => acc.delay = Some((line, parse_f64(line, key, value)?)),
            "sigma" => {
                let s = parse_f64(line, key, value)?;
                self.sigma = in_range(line, key, s, s > 0.0, "(0, inf)")?;
            }
            "pair_amplitude" => {
                let g = parse_f64(line, key, value)?;
                exp.pair_amplitude = in_range(line, key, g, g > 0.0, "(0, inf)")?;
            }
            "efficiency" => {
                let e = parse_f64(line, key, value)?;
                exp.efficiency = in_range(line, key, e, e > 0.0 && e <= 1.0, "(0, 1]")?;
            }
            "misalignment_deg" => exp.misalignment_deg = parse_f64(line, key, value)?,
            "seed" => exp.seed = parse_u64(line, key, value)?,
            "events" => {
                let n = parse_u64(line, key, value)?;
                if n == 0 {
                    return Err(config_err(line, key, "must be at least 1"));
                }
                exp.events = n;
                acc.events_line = Some(line);
            }
            "duration_s" => {
                let d = parse_f64(line, key, value)?;
                acc.duration_s = Some((line, in_range(line, key, d, d > 0.0, "(0, inf)")?));
            }
            "rate_hz" => {
                let r = parse_f64(line, key, value)?;
                acc.rate_hz = Some((line, in_range(line, key, r, r > 0.0, "(0, inf)")?));
            }
            "settings" => {
                self.settings = match value {
                    "grid" => SettingsMode::Grid,
                    "single" => SettingsMode::Single,
                    _ => return Err(config_err(line, key, "expected `grid` or `single`")),
                }
            }
            "a_angles" => self.a_angles = parse_list(line, key, value)?,
            "d_angles" => self.d_angles = parse_list(line, key, value)?,
            "scan_min" => self.scan_min = parse_f64(line, key, value)?,
            "scan_max" => self.scan_max = parse_f64(line, key, value)?,
            "scan_points" => {
                let n = parse_u64(line, key, value)?;
                if n == 0 {
                    return Err(config_err(line, key, "must be at least 1"));
                }
                self.scan_points = n as usize;
            }
            "chsh_source" => {
                self.chsh_source = match value {
                    "exact" => ChshSource::Exact,
                    "sample" => ChshSource::Sample,
                    _ => return Err(config_err(line, key, "expected `exact` or `sample`")),
                }
            }
            // Engine limits are fixed; accepted only at their defaults so
            // that configs stay explicit about them.
            "prune" => {
                let p = parse_f64(line, key, value)?;
                if p != crate::fock::DEFAULT_PRUNE {
                    return Err(config_err(line, key, "only 1e-12 is supported"));
                }
            }
            "max_photons" => {
                let n = parse_u64(line, key, value)?;
                if n != u64::from(crate::fock::DEFAULT_MAX_PHOTONS) {
                    return Err(config_err(line, key, "only 4 is supported"));
                }
            }
            _ => unreachable!("key list and match arms disagree"),
        }
        Ok(())
    }

    fn resolve(&mut self, acc: &Assignments) -> Result<()> {
        if let Some((line, delay)) = acc.delay {
            if let Some(other) = acc.overlap_line {
                return Err(config_err(
                    line.max(other),
                    "delay",
                    "give either `delay` or `overlap`, not both",
                ));
            }
            self.experiment.overlap = optics::delay_overlap(delay, self.sigma)
                .map_err(|e| config_err(line, "delay", e.to_string()))?;
        }
        match (acc.duration_s, acc.rate_hz) {
            (Some((l1, d)), Some((l2, r))) => {
                if let Some(line) = acc.events_line {
                    return Err(config_err(
                        line,
                        "events",
                        "give either `events` or `duration_s` with `rate_hz`",
                    ));
                }
                let n = (d * r).round();
                if n < 1.0 {
                    return Err(config_err(
                        l1.max(l2),
                        "rate_hz",
                        "duration × rate below one event",
                    ));
                }
                self.experiment.events = n as u64;
            }
            (Some((line, _)), None) => {
                return Err(config_err(line, "duration_s", "needs `rate_hz` as well"))
            }
            (None, Some((line, _))) => {
                return Err(config_err(line, "rate_hz", "needs `duration_s` as well"))
            }
            (None, None) => {}
        }
        Ok(())
    }

    /// Settings evaluated by `exact`, `sample` and `chsh`.
    pub fn settings_list(&self) -> Vec<Setting> {
        match self.settings {
            SettingsMode::Grid => Setting::grid(&self.a_angles, &self.d_angles),
            SettingsMode::Single => vec![self.experiment.setting()],
        }
    }

    pub fn scan_delays(&self) -> Vec<f64> {
        if self.scan_points == 1 {
            return vec![self.scan_min];
        }
        let step = (self.scan_max - self.scan_min) / (self.scan_points - 1) as f64;
        (0..self.scan_points)
            .map(|i| self.scan_min + step * i as f64)
            .collect()
    }

    /// Resolved config in `key = value` form, every key except the derived
    /// inputs (`delay`, `duration_s`, `rate_hz`).
    pub fn echo(&self) -> String {
        let e = &self.experiment;
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("phi_a", e.phi_a.to_string());
        kv("phi_d", e.phi_d.to_string());
        kv("overlap", e.overlap.to_string());
        kv("sigma", self.sigma.to_string());
        kv("pair_amplitude", e.pair_amplitude.to_string());
        kv("efficiency", e.efficiency.to_string());
        kv("misalignment_deg", e.misalignment_deg.to_string());
        kv("seed", e.seed.to_string());
        kv("events", e.events.to_string());
        kv(
            "settings",
            match self.settings {
                SettingsMode::Grid => "grid",
                SettingsMode::Single => "single",
            }
            .to_string(),
        );
        kv("a_angles", join(&self.a_angles));
        kv("d_angles", join(&self.d_angles));
        kv("scan_min", self.scan_min.to_string());
        kv("scan_max", self.scan_max.to_string());
        kv("scan_points", self.scan_points.to_string());
        kv(
            "chsh_source",
            match self.chsh_source {
                ChshSource::Exact => "exact",
                ChshSource::Sample => "sample",
            }
            .to_string(),
        );
        kv("prune", format!("{:e}", crate::fock::DEFAULT_PRUNE));
        kv("max_photons", crate::fock::DEFAULT_MAX_PHOTONS.to_string());
        out
    }
}

fn split_line(line_no: usize, raw: &str) -> Result<Option<(String, String)>> {
    let line = match raw.find('#') {
        Some(i) => &raw[..i],
        None => raw,
    }
    .trim();
    if line.is_empty() {
        return Ok(None);
    }
    let (key, value) = line
        .split_once('=')
        .ok_or_else(|| config_err(line_no, line, "expected `key = value`"))?;
    Ok(Some((key.trim().to_string(), value.trim().to_string())))
}

/// Parses a config file, then applies `key=value` overrides on top.
pub fn parse_config_with(text: &str, overrides: &[(String, String)]) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    let mut acc = Assignments::default();
    for (i, raw) in text.lines().enumerate() {
        if let Some((key, value)) = split_line(i + 1, raw)? {
            config.assign(&mut acc, i + 1, &key, &value)?;
        }
    }
    for (key, value) in overrides {
        // An override replaces a file value rather than duplicating it.
        acc.seen.remove(key.as_str());
        match key.as_str() {
            "overlap" => acc.delay = None,
            "delay" => acc.overlap_line = None,
            "events" => {
                acc.duration_s = None;
                acc.rate_hz = None;
            }
            "duration_s" | "rate_hz" => acc.events_line = None,
            _ => {}
        }
        config.assign(&mut acc, 0, key, value)?;
    }
    config.resolve(&acc)?;
    config
        .experiment
        .validate()
        .map_err(|e| config_err(0, "config", e.to_string()))?;
    Ok(config)
}

/// Parses a flat `key = value` config. Missing keys take their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with(text, &[])
}

/// The config lines echoed in a CSV header, ready to be parsed again.
pub fn extract_config_echo(csv: &str) -> String {
    csv.lines()
        .take_while(|l| l.starts_with('#'))
        .filter_map(|l| l.strip_prefix("# "))
        .filter(|l| l.contains(" = "))
        .fold(String::new(), |mut acc, l| {
            acc.push_str(l);
            acc.push('\n');
            acc
        })
}

/// The data part of a CSV (everything after the `#` header).
pub fn csv_body(csv: &str) -> String {
    csv.lines()
        .skip_while(|l| l.starts_with('#'))
        .fold(String::new(), |mut acc, l| {
            acc.push_str(l);
            acc.push('\n');
            acc
        })
}

/// `%g`-style formatting with `sig` significant digits.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Why a run failed; selects the process exit code.
#[derive(Debug)]
pub enum RunError {
    /// Bad config, settings or I/O: exit 1.
    Config(Error),
    /// A numerical self-check failed: exit 2.
    Invariant(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            RunError::Invariant(_) => 2,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "error: {e}"),
            RunError::Invariant(msg) => write!(f, "invariant violated: {msg}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Config(e)
    }
}

/// Output of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub csv: String,
    /// Findings to report on the error stream without failing the run.
    pub warnings: Vec<String>,
}

fn header(command: Command, config: &RunConfig) -> String {
    let mut out = format!("# swapsim {VERSION}\n# command: {}\n", command.name());
    for line in config.echo().lines() {
        let _ = writeln!(out, "# {line}");
    }
    out
}

fn check_completeness(table: &CountsTable<f64>) -> std::result::Result<(), RunError> {
    for row in &table.rows {
        let total = row.total();
        if (total - 1.0).abs() > COMPLETENESS_TOL {
            return Err(RunError::Invariant(format!(
                "click probabilities at ({}, {}) sum to {total}",
                row.setting.phi_a, row.setting.phi_d
            )));
        }
    }
    Ok(())
}

fn counts_section<T: CountValue>(out: &mut String, table: &CountsTable<T>) {
    out.push_str("phi_a,phi_d,bell,a_out,d_out,count\n");
    for row in &table.rows {
        for class in FourfoldClass::ALL {
            let value = row.get(class);
            let count = if T::IS_PROBABILITY {
                fmt_sig(value.as_f64(), 9)
            } else {
                format!("{}", value.as_f64() as u64)
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt_sig(row.setting.phi_a, 6),
                fmt_sig(row.setting.phi_d, 6),
                class.bell.name(),
                class.a_out.symbol(),
                class.d_out.symbol(),
                count
            );
        }
    }
}

fn correlation_section<T: CountValue>(out: &mut String, table: &CountsTable<T>) -> Result<()> {
    out.push_str("phi_a,phi_d,bell,E,sigma_E\n");
    for r in analysis::correlations(table)? {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_sig(r.setting.phi_a, 6),
            fmt_sig(r.setting.phi_d, 6),
            r.bell.name(),
            fmt_sig(r.e, 6),
            fmt_sig(r.sigma_e, 6)
        );
    }
    Ok(())
}

fn chsh_section<T: CountValue>(out: &mut String, table: &CountsTable<T>) -> Result<()> {
    out.push_str("bell,S,sigma_S,placement\n");
    for bell in BellClass::BOTH {
        let r = analysis::chsh_from_table(table, bell, Combination::Max)?;
        let _ = writeln!(
            out,
            "{},{},{},{}",
            bell.name(),
            fmt_sig(r.s, 6),
            fmt_sig(r.sigma_s, 6),
            r.placement_label()
        );
    }
    Ok(())
}

fn is_chsh_grid(config: &RunConfig) -> bool {
    config.settings == SettingsMode::Grid
        && config.a_angles.len() == 2
        && config.d_angles.len() == 2
}

fn table_report<T: CountValue>(
    out: &mut String,
    table: &CountsTable<T>,
    with_chsh: bool,
) -> Result<()> {
    counts_section(out, table);
    out.push('\n');
    correlation_section(out, table)?;
    if with_chsh {
        out.push('\n');
        chsh_section(out, table)?;
    }
    Ok(())
}

/// Runs one command in memory and returns the CSV text.
pub fn execute(command: Command, config: &RunConfig) -> std::result::Result<RunOutput, RunError> {
    let exp = &config.experiment;
    let mut csv = header(command, config);
    let mut warnings = Vec::new();
    match command {
        Command::Exact => {
            let table = experiment::exact_counts(exp, &config.settings_list())?;
            check_completeness(&table)?;
            table_report(&mut csv, &table, is_chsh_grid(config))?;
        }
        Command::Sample => {
            let exact = experiment::exact_counts(exp, &config.settings_list())?;
            check_completeness(&exact)?;
            let table = experiment::sample_from_probabilities(&exact, exp.events, exp.seed)?;
            table_report(&mut csv, &table, is_chsh_grid(config))?;
        }
        Command::Chsh => {
            if !is_chsh_grid(config) {
                return Err(RunError::Config(Error::InvalidSettings(
                    "chsh needs settings = grid with two a_angles and two d_angles".into(),
                )));
            }
            let exact = experiment::exact_counts(exp, &config.settings_list())?;
            check_completeness(&exact)?;
            match config.chsh_source {
                ChshSource::Exact => {
                    correlation_section(&mut csv, &exact)?;
                    csv.push('\n');
                    chsh_section(&mut csv, &exact)?;
                }
                ChshSource::Sample => {
                    let table =
                        experiment::sample_from_probabilities(&exact, exp.events, exp.seed)?;
                    correlation_section(&mut csv, &table)?;
                    csv.push('\n');
                    chsh_section(&mut csv, &table)?;
                }
            }
        }
        Command::DelayScan => {
            let points = analysis::delay_scan(exp, &config.scan_delays(), config.sigma)?;
            csv.push_str("delta,overlap,E_psi_minus,E_psi_plus\n");
            for p in &points {
                if (p.total_probability - 1.0).abs() > COMPLETENESS_TOL {
                    return Err(RunError::Invariant(format!(
                        "click probabilities at delay {} sum to {}",
                        p.delay, p.total_probability
                    )));
                }
                let _ = writeln!(
                    csv,
                    "{},{},{},{}",
                    fmt_sig(p.delay, 6),
                    fmt_sig(p.overlap, 6),
                    fmt_sig(p.e_psi_minus, 6),
                    fmt_sig(p.e_psi_plus, 6)
                );
            }
        }
        Command::BsaAudit => {
            let matrix = experiment::bsa_identification(exp)?;
            csv.push_str("input,psi_minus,psi_plus\n");
            for (kind, row) in BellState::ALL.iter().zip(matrix) {
                if row
                    .iter()
                    .any(|&p| !(-COMPLETENESS_TOL..=1.0 + COMPLETENESS_TOL).contains(&p))
                    || row[0] + row[1] > 1.0 + COMPLETENESS_TOL
                {
                    return Err(RunError::Invariant(format!(
                        "identification probabilities for {} out of range: {row:?}",
                        kind.name()
                    )));
                }
                let _ = writeln!(
                    csv,
                    "{},{},{}",
                    kind.name(),
                    fmt_sig(row[0], 9),
                    fmt_sig(row[1], 9)
                );
            }
        }
        Command::DoublepairAudit => {
            let report = experiment::double_pair_audit(exp)?;
            csv.push_str(
                "source_term,signature,pbs_acceptance,bare_acceptance,ratio,within_factor_two\n",
            );
            for r in &report.rows {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    r.term.name(),
                    r.signature,
                    fmt_sig(r.pbs_acceptance, 9),
                    fmt_sig(r.bare_acceptance, 9),
                    fmt_sig(r.ratio, 6),
                    r.within_factor_two()
                );
            }
            csv.push_str("\nsource_term,fourfold_acceptance\n");
            for (term, leak) in &report.fourfold_leak {
                let _ = writeln!(csv, "{},{}", term.name(), fmt_sig(*leak, 9));
            }
            for r in report.flagged() {
                warnings.push(format!(
                    "{} / {}: PBS analyzer accepts {} of the bare analyzer's double-pair rate (above 1/2)",
                    r.term.name(),
                    r.signature,
                    fmt_sig(r.ratio, 6)
                ));
            }
        }
    }
    Ok(RunOutput { csv, warnings })
}

/// Invocation of one batch run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    pub config_path: PathBuf,
    pub out_path: PathBuf,
    pub overrides: Vec<(String, String)>,
}

/// Splits a `--set key=value` argument.
pub fn parse_override(arg: &str) -> Result<(String, String)> {
    let (k, v) = arg
        .split_once('=')
        .ok_or_else(|| config_err(0, arg, "expected key=value"))?;
    let key = k.trim();
    if !KEYS.contains(&key) {
        return Err(config_err(0, key, "unknown key"));
    }
    Ok((key.to_string(), v.trim().to_string()))
}

fn write_atomically(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp_name = format!(".{name}.tmp{}", std::process::id());
    let tmp = match dir {
        Some(d) => d.join(tmp_name),
        None => PathBuf::from(tmp_name),
    };
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// Runs a spec end to end and returns the process exit code. Diagnostics go
/// to stderr.
pub fn run(spec: &RunSpec) -> i32 {
    let result = (|| -> std::result::Result<RunOutput, RunError> {
        let text = fs::read_to_string(&spec.config_path).map_err(|e| {
            RunError::Config(config_err(
                0,
                "config",
                format!("cannot read {}: {e}", spec.config_path.display()),
            ))
        })?;
        let config = parse_config_with(&text, &spec.overrides)?;
        let output = execute(spec.command, &config)?;
        write_atomically(&spec.out_path, &output.csv).map_err(|e| RunError::Config(e.into()))?;
        Ok(output)
    })();
    match result {
        Ok(output) => {
            for w in &output.warnings {
                eprintln!("warning: {w}");
            }
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
