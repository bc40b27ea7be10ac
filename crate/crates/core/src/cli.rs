//! Configuration files, output formats, and the command entry points behind
//! the `fnlw` binary.
//!
//! Run outputs: a JSON manifest sufficient to re-execute the run
//! bit-identically, a time-series CSV (`step,time,sobolev_pair_norm,
//! hamiltonian`), the resolved configuration, and optionally a binary
//! snapshot file. All floating-point values in CSV output carry 17
//! significant digits, so parsing them back is exact for doubles.

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::experiments::{
    self, fit_rate, preset, run_sweep, Overrides, RateFit, Refinement, Regime, SweepConfig,
    SweepResult,
};
use crate::initdata::{self, DataKind};
use crate::integrator::{round_to_snapshots, run, select_timestep, ModelParams, SpectralState};
use crate::observables::{sobolev_index, RunRecord};
use crate::spectrum::{CoeffVector, Grid};

/// Magic prefix of the snapshot binary format: `FNLW`, NUL, format `001`.
pub const SNAPSHOT_MAGIC: [u8; 8] = *b"FNLW\0001";

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt17_opt(x: Option<f64>) -> String {
    match x {
        Some(v) => fmt17(v),
        None => "nan".to_string(),
    }
}

/// Flat key-value configuration for a single run. Every field except the
/// truncation exponent has a default; `preset` selects the regime the
/// defaults are drawn from.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// Truncation exponent k (N = 2^k); alternative to `n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<DataKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linear_only: Option<bool>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config {
            field: "<root>".into(),
            reason: e.to_string(),
        })
    }

    /// Resolves the configuration into full run parameters, deriving the
    /// Sobolev index, grid size, and time step where they are not given.
    pub fn resolve(&self) -> Result<ModelParams> {
        let regime = match &self.preset {
            Some(name) => Regime::parse(name)?,
            None => Regime::Pwp,
        };
        let alpha = self.alpha.unwrap_or_else(|| regime.default_alpha());
        let beta = self.beta.unwrap_or(1.0 / 3.0);
        let n_trunc = match (self.n, self.k) {
            (Some(n), None) => n,
            (None, Some(k)) => {
                if k > 40 {
                    return Err(Error::invalid("k", "truncation exponent out of range"));
                }
                1u64 << k
            }
            (None, None) => 1u64 << 6,
            (Some(_), Some(_)) => {
                return Err(Error::invalid("n", "give either `n` or `k`, not both"))
            }
        };
        let s = match self.s {
            Some(s) => s,
            None => sobolev_index(alpha, beta, regime.posedness())?,
        };
        let m = match self.m {
            Some(m) => m,
            None => {
                let k = (64 - (n_trunc.max(1) - 1).leading_zeros()).max(1); // ceil(log2 N)
                1usize << (k + experiments::DEFAULT_M_OFFSET).min(experiments::DEFAULT_M_CAP)
            }
        };
        let kind = self.kind.unwrap_or(match regime {
            Regime::NormInflation => DataKind::Pathological,
            _ => DataKind::Truncated,
        });
        let mut params = ModelParams {
            alpha,
            beta,
            s,
            n_trunc,
            m,
            t_final: self.t_s.unwrap_or(experiments::DEFAULT_T_FINAL),
            tau: f64::MIN_POSITIVE,
            bump_width: self.a.unwrap_or(experiments::DEFAULT_BUMP_WIDTH),
            seed: self.seed.unwrap_or(experiments::DEFAULT_SEED),
            kind,
            snapshots: self.snapshots.unwrap_or(experiments::DEFAULT_SNAPSHOTS),
            linear_only: self.linear_only.unwrap_or(false),
        };
        if params.t_final > 0.0 {
            params.tau = match self.tau {
                Some(tau) => {
                    if !(tau > 0.0) {
                        return Err(Error::invalid("tau", format!("must be > 0, got {tau}")));
                    }
                    round_to_snapshots(tau.min(params.t_final), params.t_final, params.snapshots)
                }
                None => select_timestep(&params)?,
            };
        }
        params.validate()?;
        Ok(params)
    }
}

/// Flat configuration for a sweep: a preset name plus overrides.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFileConfig {
    pub preset: String,
    #[serde(flatten)]
    pub overrides: Overrides,
}

impl SweepFileConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config {
            field: "<root>".into(),
            reason: e.to_string(),
        })
    }

    pub fn resolve(&self) -> Result<SweepConfig> {
        preset(Regime::parse(&self.preset)?, &self.overrides)
    }
}

/// Manifest describing one executed run; its `params` block re-executes the
/// run bit-identically.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub params: ModelParams,
    pub derived: DerivedScalars,
    pub outputs: Vec<String>,
    pub e_inf: Option<f64>,
    pub s_sup: f64,
    pub config_checksum: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DerivedScalars {
    /// Time step after snapshot rounding.
    pub tau: f64,
    /// Total number of integration steps.
    pub total_steps: u64,
    pub s: f64,
    /// γ = s / (α - 1/2).
    pub gamma: f64,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn write_series_csv(path: &Path, record: &RunRecord) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "step,time,sobolev_pair_norm,hamiltonian")?;
    let q = record.params.steps_per_snapshot().unwrap_or(0);
    for (j, ((t, s), h)) in record
        .times
        .iter()
        .zip(&record.pair_norms)
        .zip(&record.hamiltonians)
        .enumerate()
    {
        writeln!(
            w,
            "{},{},{},{}",
            j as u64 * q,
            fmt17(*t),
            fmt17(*s),
            fmt17(*h)
        )?;
    }
    Ok(())
}

/// Writes the snapshot binary: magic, `M` and snapshot count as little-endian
/// u64, then per snapshot the time followed by the `û` and `v̂` coefficient
/// arrays as (real, imaginary) doubles in mode order `0, 1, …, M/2, -M/2+1,
/// …, -1`.
pub fn write_snapshots(path: &Path, states: &[SpectralState], m: usize) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    w.write_all(&SNAPSHOT_MAGIC)?;
    w.write_all(&(m as u64).to_le_bytes())?;
    w.write_all(&(states.len() as u64).to_le_bytes())?;
    for state in states {
        w.write_all(&state.t.to_le_bytes())?;
        for field in [&state.u, &state.v] {
            for c in field.values() {
                w.write_all(&c.re.to_le_bytes())?;
                w.write_all(&c.im.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

/// Reads a snapshot file back into states.
pub fn read_snapshots(path: &Path) -> Result<Vec<SpectralState>> {
    let mut file = fs::File::open(path)?;
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes)?;
    let malformed = |reason: &str| Error::Malformed {
        path: path.display().to_string(),
        reason: reason.to_string(),
    };
    if bytes.len() < 24 || bytes[..8] != SNAPSHOT_MAGIC {
        return Err(malformed("bad magic"));
    }
    let mut offset = 8;
    let read_u64 = |bytes: &[u8], offset: &mut usize| -> u64 {
        let v = u64::from_le_bytes(bytes[*offset..*offset + 8].try_into().unwrap());
        *offset += 8;
        v
    };
    let m = read_u64(&bytes, &mut offset) as usize;
    let count = read_u64(&bytes, &mut offset) as usize;
    let per_snapshot = 8 + 2 * m * 16;
    if bytes.len() != 24 + count * per_snapshot {
        return Err(malformed("truncated payload"));
    }
    let grid = Grid::new(m)?;
    let read_f64 = |offset: &mut usize| -> f64 {
        let v = f64::from_le_bytes(bytes[*offset..*offset + 8].try_into().unwrap());
        *offset += 8;
        v
    };
    let mut states = Vec::with_capacity(count);
    for _ in 0..count {
        let t = read_f64(&mut offset);
        let mut fields = Vec::with_capacity(2);
        for _ in 0..2 {
            let mut vec = CoeffVector::zeros(grid);
            for i in 0..m {
                let re = read_f64(&mut offset);
                let im = read_f64(&mut offset);
                vec.values_mut()[i] = num_complex::Complex64::new(re, im);
            }
            fields.push(vec);
        }
        let v = fields.pop().unwrap();
        let u = fields.pop().unwrap();
        states.push(SpectralState::new(u, v, t));
    }
    Ok(states)
}

/// Executes one run from a config file and writes its outputs.
pub fn cmd_run(config_path: &Path, out_dir: &Path, store_snapshots: bool) -> Result<()> {
    let raw = fs::read_to_string(config_path)?;
    let config = RunConfig::from_json(&raw)?;
    let params = config.resolve()?;
    fs::create_dir_all(out_dir)?;

    let data = initdata::build(&params)?;
    let record = run(&params, &data, store_snapshots)?;

    let mut outputs = vec!["manifest.json".to_string(), "series.csv".to_string()];
    write_series_csv(&out_dir.join("series.csv"), &record)?;
    fs::write(
        out_dir.join("config.resolved.json"),
        serde_json::to_string_pretty(&config)?,
    )?;
    outputs.push("config.resolved.json".to_string());
    if store_snapshots {
        let states = record.states.as_ref().expect("states were stored");
        write_snapshots(&out_dir.join("snapshots.fnlw"), states, params.m)?;
        outputs.push("snapshots.fnlw".to_string());
    }

    let manifest = RunManifest {
        version: crate::VERSION.to_string(),
        derived: DerivedScalars {
            tau: params.tau,
            total_steps: params.total_steps()?,
            s: params.s,
            gamma: params.s / (params.alpha - 0.5),
        },
        params,
        outputs,
        e_inf: record.e_inf,
        s_sup: record.s_sup,
        config_checksum: sha256_hex(raw.as_bytes()),
    };
    fs::write(
        out_dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)?,
    )?;
    Ok(())
}

fn run_dir_name(k: u32, kind: DataKind, refinement: Refinement) -> String {
    match refinement {
        Refinement::Baseline => format!("run_k{k:02}_{}", kind.label()),
        Refinement::Refined => format!("run_k{k:02}_{}_refined", kind.label()),
    }
}

/// Writes the sweep summary CSV: one row per run with the sup norm, the
/// trajectory difference against the previous truncation, and the relative
/// energy error.
pub fn write_summary_csv(path: &Path, result: &SweepResult) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "N,kind,S_sup,delta_S,e_inf")?;
    for run in &result.runs {
        let delta = result
            .delta(run.k, run.kind)
            .map(fmt17)
            .unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{}",
            run.n_trunc,
            run.kind.label(),
            fmt17(run.record.s_sup),
            delta,
            fmt17_opt(run.record.e_inf),
        )?;
    }
    Ok(())
}

/// Executes a sweep (from a preset name or a config file) and writes per-run
/// outputs plus a summary CSV and the fitted rates.
pub fn cmd_sweep(
    preset_name: Option<&str>,
    config_path: Option<&Path>,
    out_dir: &Path,
    refined: bool,
    store_snapshots: bool,
) -> Result<()> {
    let mut config = match (preset_name, config_path) {
        (Some(name), None) => preset(Regime::parse(name)?, &Overrides::default())?,
        (None, Some(path)) => {
            let raw = fs::read_to_string(path)?;
            SweepFileConfig::from_json(&raw)?.resolve()?
        }
        _ => {
            return Err(Error::Config {
                field: "preset".into(),
                reason: "give exactly one of --preset or --config".into(),
            })
        }
    };
    if refined {
        config.refinement = Refinement::Refined;
    }
    fs::create_dir_all(out_dir)?;
    let result = run_sweep(&config, store_snapshots)?;

    for run in &result.runs {
        let dir = out_dir.join(run_dir_name(run.k, run.kind, config.refinement));
        fs::create_dir_all(&dir)?;
        write_series_csv(&dir.join("series.csv"), &run.record)?;
        let manifest = RunManifest {
            version: crate::VERSION.to_string(),
            derived: DerivedScalars {
                tau: run.record.params.tau,
                total_steps: run.record.params.total_steps()?,
                s: run.record.params.s,
                gamma: run.record.params.s / (run.record.params.alpha - 0.5),
            },
            params: run.record.params.clone(),
            outputs: vec!["series.csv".to_string()],
            e_inf: run.record.e_inf,
            s_sup: run.record.s_sup,
            config_checksum: sha256_hex(serde_json::to_string(&config)?.as_bytes()),
        };
        fs::write(
            dir.join("manifest.json"),
            serde_json::to_string_pretty(&manifest)?,
        )?;
        if store_snapshots {
            if let Some(states) = &run.record.states {
                write_snapshots(&dir.join("snapshots.fnlw"), states, run.record.params.m)?;
            }
        }
    }
    write_summary_csv(&out_dir.join("summary.csv"), &result)?;
    fs::write(
        out_dir.join("rates.json"),
        serde_json::to_string_pretty(&result.rates)?,
    )?;
    fs::write(
        out_dir.join("sweep.config.json"),
        serde_json::to_string_pretty(&config)?,
    )?;
    for rate in &result.rates {
        println!(
            "delta_S[{}]: exponent = {:+.4} +/- {:.4}",
            rate.kind.label(),
            rate.exponent,
            rate.residual
        );
    }
    Ok(())
}

/// Parsed row set of a summary CSV.
#[derive(Debug)]
pub struct SummaryTable {
    pub rows: Vec<SummaryRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub n_trunc: u64,
    pub kind: String,
    pub s_sup: f64,
    pub delta_s: Option<f64>,
    pub e_inf: Option<f64>,
}

/// Parses a summary CSV, insisting on the documented schema.
pub fn read_summary_csv(path: &Path) -> Result<SummaryTable> {
    let text = fs::read_to_string(path)?;
    let malformed = |reason: String| Error::Malformed {
        path: path.display().to_string(),
        reason,
    };
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| malformed("empty file".into()))?;
    let columns: Vec<&str> = header.split(',').collect();
    for required in ["N", "kind", "S_sup", "delta_S", "e_inf"] {
        if !columns.contains(&required) {
            return Err(Error::MissingColumn(required.to_string()));
        }
    }
    let idx = |name: &str| columns.iter().position(|c| *c == name).unwrap();
    let (i_n, i_kind, i_sup, i_delta, i_e) = (
        idx("N"),
        idx("kind"),
        idx("S_sup"),
        idx("delta_S"),
        idx("e_inf"),
    );
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(malformed(format!(
                "row {} has {} fields, header has {}",
                lineno + 2,
                fields.len(),
                columns.len()
            )));
        }
        let parse_f64 = |v: &str, col: &str| -> Result<f64> {
            v.parse::<f64>().map_err(|_| {
                malformed(format!("row {}: bad float in `{col}`: {v:?}", lineno + 2))
            })
        };
        let delta_s = if fields[i_delta].is_empty() {
            None
        } else {
            Some(parse_f64(fields[i_delta], "delta_S")?)
        };
        let e_inf = match fields[i_e] {
            "nan" => None,
            v => Some(parse_f64(v, "e_inf")?),
        };
        rows.push(SummaryRow {
            n_trunc: fields[i_n]
                .parse()
                .map_err(|_| malformed(format!("row {}: bad integer N", lineno + 2)))?,
            kind: fields[i_kind].to_string(),
            s_sup: parse_f64(fields[i_sup], "S_sup")?,
            delta_s,
            e_inf,
        });
    }
    Ok(SummaryTable { rows })
}

/// Recomputes the power-law fits from a previously written summary.
pub fn summary_rates(table: &SummaryTable) -> Result<Vec<(String, f64, f64)>> {
    let mut kinds: Vec<String> = Vec::new();
    for row in &table.rows {
        if !kinds.contains(&row.kind) {
            kinds.push(row.kind.clone());
        }
    }
    let mut out = Vec::new();
    for kind in kinds {
        let pts: Vec<(f64, f64)> = table
            .rows
            .iter()
            .filter(|r| r.kind == kind)
            .filter_map(|r| r.delta_s.map(|d| (r.n_trunc as f64, d)))
            .collect();
        if pts.len() >= 3 {
            let n: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
            let (exponent, residual) = fit_rate(&n, &y)?;
            out.push((kind, exponent, residual));
        }
    }
    Ok(out)
}

/// Prints `exponent ± residual` per series of a summary CSV.
pub fn cmd_rates(summary_path: &Path) -> Result<Vec<(String, f64, f64)>> {
    let table = read_summary_csv(summary_path)?;
    let rates = summary_rates(&table)?;
    for (kind, exponent, residual) in &rates {
        println!("delta_S[{kind}]: exponent = {exponent:+.4} +/- {residual:.4}");
    }
    Ok(rates)
}

/// Embedded-rate consistency helper for tests: the rates recomputed from a
/// summary must match what the sweep embedded.
pub fn rates_match(embedded: &[RateFit], recomputed: &[(String, f64, f64)]) -> bool {
    embedded.len() == recomputed.len()
        && embedded.iter().zip(recomputed).all(|(a, b)| {
            a.kind.label() == b.0 && (a.exponent - b.1).abs() < 1e-12 && (a.residual - b.2).abs() < 1e-12
        })
}

/// Convenience used by tests and the smoke script: runs a default-preset
/// sweep entirely in a temporary directory and returns the summary bytes.
pub fn sweep_summary_bytes(config: &SweepConfig, dir: &Path) -> Result<Vec<u8>> {
    let result = run_sweep(config, false)?;
    let path = dir.join("summary.csv");
    write_summary_csv(&path, &result)?;
    Ok(fs::read(&path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initdata::build_truncated;
    use tempfile::tempdir;

    fn minimal_run_json() -> &'static str {
        r#"{"k": 4, "m": 256, "t_s": 1e-3, "snapshots": 4, "seed": 7}"#
    }

    #[test]
    fn run_config_round_trip_is_identity() {
        let config = RunConfig::from_json(minimal_run_json()).unwrap();
        let text = serde_json::to_string(&config).unwrap();
        let again = RunConfig::from_json(&text).unwrap();
        assert_eq!(config, again);
    }

    #[test]
    fn run_config_rejects_unknown_fields() {
        let err = RunConfig::from_json(r#"{"alpa": 0.6}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("alpa"), "error should name the field: {msg}");
    }

    #[test]
    fn resolve_rejects_low_alpha_naming_the_field() {
        let config = RunConfig::from_json(r#"{"alpha": 0.4, "k": 4}"#).unwrap();
        match config.resolve() {
            Err(Error::InvalidParameter { name, .. }) => assert_eq!(name, "alpha"),
            other => panic!("expected alpha error, got {other:?}"),
        }
    }

    #[test]
    fn cmd_run_writes_expected_files() {
        let dir = tempdir().unwrap();
        let config_path = dir.path().join("run.json");
        fs::write(&config_path, minimal_run_json()).unwrap();
        let out = dir.path().join("out");
        cmd_run(&config_path, &out, false).unwrap();
        assert!(out.join("manifest.json").exists());
        assert!(out.join("series.csv").exists());
        assert!(out.join("config.resolved.json").exists());
        assert!(!out.join("snapshots.fnlw").exists());
    }

    #[test]
    fn cmd_run_is_byte_deterministic() {
        let dir = tempdir().unwrap();
        let config_path = dir.path().join("run.json");
        fs::write(&config_path, minimal_run_json()).unwrap();
        let out_a = dir.path().join("a");
        let out_b = dir.path().join("b");
        cmd_run(&config_path, &out_a, false).unwrap();
        cmd_run(&config_path, &out_b, false).unwrap();
        let a = fs::read(out_a.join("series.csv")).unwrap();
        let b = fs::read(out_b.join("series.csv")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_floats_survive_round_trip() {
        let x = std::f64::consts::PI * 1e-7;
        let s = fmt17(x);
        assert_eq!(s.parse::<f64>().unwrap(), x);
    }

    #[test]
    fn snapshots_round_trip_bitwise() {
        let params = ModelParams {
            alpha: 0.6,
            beta: 1.0 / 3.0,
            s: 1.0 / 30.0,
            n_trunc: 8,
            m: 64,
            t_final: 1e-3,
            tau: 2.5e-4,
            bump_width: 16.0,
            seed: 3,
            kind: DataKind::Truncated,
            snapshots: 4,
            linear_only: false,
        };
        let data = build_truncated(&params).unwrap();
        let record = run(&params, &data, true).unwrap();
        let states = record.states.as_ref().unwrap();
        let dir = tempdir().unwrap();
        let path = dir.path().join("snapshots.fnlw");
        write_snapshots(&path, states, params.m).unwrap();
        let back = read_snapshots(&path).unwrap();
        assert_eq!(back.len(), states.len());
        for (a, b) in states.iter().zip(&back) {
            assert_eq!(a.t.to_bits(), b.t.to_bits());
            for (x, y) in a.u.values().iter().zip(b.u.values()) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
            for (x, y) in a.v.values().iter().zip(b.v.values()) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }

    #[test]
    fn snapshot_reader_rejects_garbage() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.fnlw");
        fs::write(&path, b"not a snapshot").unwrap();
        assert!(matches!(
            read_snapshots(&path),
            Err(Error::Malformed { .. })
        ));
    }

    fn tiny_sweep() -> SweepConfig {
        preset(
            Regime::Pwp,
            &Overrides {
                k_min: Some(3),
                k_max: Some(5),
                m_exp_offset: Some(3),
                m_exp_cap: Some(10),
                t_final: Some(1e-3),
                snapshots: Some(4),
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn summary_schema_round_trips_through_rates() {
        let dir = tempdir().unwrap();
        let config = tiny_sweep();
        let result = run_sweep(&config, false).unwrap();
        let path = dir.path().join("summary.csv");
        write_summary_csv(&path, &result).unwrap();
        let table = read_summary_csv(&path).unwrap();
        assert_eq!(table.rows.len(), result.runs.len());
        // rows carry N, kind, and exact floats
        assert_eq!(table.rows[0].n_trunc, 8);
        assert_eq!(table.rows[0].kind, "truncated");
        let first_sup = result.runs[0].record.s_sup;
        assert_eq!(table.rows[0].s_sup.to_bits(), first_sup.to_bits());
        // recomputed fits match the embedded ones exactly on identical data
        let recomputed = summary_rates(&table).unwrap();
        assert!(rates_match(&result.rates, &recomputed));
    }

    #[test]
    fn summary_reader_names_missing_columns() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("summary.csv");
        fs::write(&path, "N,kind,S_sup,e_inf\n8,truncated,1.0,0.0\n").unwrap();
        match read_summary_csv(&path) {
            Err(Error::MissingColumn(col)) => assert_eq!(col, "delta_S"),
            other => panic!("expected missing column error, got {other:?}"),
        }
    }

    #[test]
    fn rates_recover_exact_power_law_from_synthetic_summary() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("summary.csv");
        let mut text = String::from("N,kind,S_sup,delta_S,e_inf\n");
        for k in 4..=8u32 {
            let n = 1u64 << k;
            let d = 2.0 * (n as f64).powf(-0.25);
            text.push_str(&format!("{n},truncated,1.0,{},0.0\n", fmt17(d)));
        }
        fs::write(&path, text).unwrap();
        let rates = cmd_rates(&path).unwrap();
        assert_eq!(rates.len(), 1);
        assert!((rates[0].1 + 0.25).abs() < 1e-12);
        assert!(rates[0].2 < 1e-12);
    }

    #[test]
    fn sweep_config_file_round_trip() {
        let text = r#"{"preset": "norm_inflation", "beta": 0.125, "k_max": 6}"#;
        let config = SweepFileConfig::from_json(text).unwrap();
        let serialized = serde_json::to_string(&config).unwrap();
        let again = SweepFileConfig::from_json(&serialized).unwrap();
        assert_eq!(config, again);
        let resolved = config.resolve().unwrap();
        assert_eq!(resolved.regime, Regime::NormInflation);
        assert_eq!(resolved.k_max, 6);
        assert!((resolved.beta - 0.125).abs() < 1e-15);
    }
}
