//! File formats: metric CSVs, theory JSON and the run manifest.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{SystemTime, UNIX_EPOCH};

use ocba_core::{MetricSeries, PolicyConfig, TheoryReport};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::{ExperimentConfig, HarnessError, HarnessResult};

/// Leading CSV columns; `alloc_mean_1..k` follow.
pub const CSV_HEADER_PREFIX: [&str; 8] =
    ["t", "pfs", "eoc", "cr", "pfs_rate", "eoc_rate", "cr_per_t", "cr_per_logt"];

/// `<instance>_<policy>_d<delta>.csv`
pub fn csv_file_name(label: &str, policy: &PolicyConfig) -> String {
    format!("{label}_{}_d{}.csv", policy.kind(), policy.delta())
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes `series` as CSV. Undefined transforms are empty cells.
pub fn write_series_csv(path: &Path, series: &MetricSeries, k: usize) -> HarnessResult<()> {
    let io = |e: csv::Error| HarnessError::Runtime(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    let header: Vec<String> = CSV_HEADER_PREFIX
        .iter()
        .map(|s| s.to_string())
        .chain((1..=k).map(|i| format!("alloc_mean_{i}")))
        .collect();
    w.write_record(&header).map_err(io)?;
    for p in &series.points {
        let mut row = vec![
            p.t.to_string(),
            p.pfs.to_string(),
            p.eoc.to_string(),
            p.cr.to_string(),
            cell(p.pfs_rate),
            cell(p.eoc_rate),
            cell(p.cr_per_t),
            cell(p.cr_per_logt),
        ];
        row.extend(p.alloc_mean.iter().map(|a| a.to_string()));
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

fn write_json(path: &Path, value: &impl Serialize) -> HarnessResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| HarnessError::Runtime(e.to_string()))?;
    text.push('\n');
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|e| HarnessError::io(path, e))
}

pub(crate) fn write_theory(path: &Path, theory: &TheoryReport) -> HarnessResult<()> {
    write_json(path, theory)
}

#[derive(Serialize)]
struct Manifest<'a> {
    config: &'a ExperimentConfig,
    config_sha256: String,
    master_seed: u64,
    seeding: &'static str,
    git_describe: String,
    timestamp_unix: u64,
    files: Vec<String>,
}

fn git_describe() -> String {
    Command::new("git")
        .args(["describe", "--always", "--dirty", "--tags"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .unwrap_or_else(|| "unknown".into())
}

pub(crate) fn write_manifest(path: &Path, config: &ExperimentConfig, files: &[PathBuf]) -> HarnessResult<()> {
    let canonical = serde_json::to_vec(config).map_err(|e| HarnessError::Runtime(e.to_string()))?;
    let manifest = Manifest {
        config,
        config_sha256: hex::encode(Sha256::digest(&canonical)),
        master_seed: config.master_seed,
        seeding: "replication r draws from ChaCha8 seeded with master_seed, stream r",
        git_describe: git_describe(),
        timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        files: files
            .iter()
            .filter_map(|f| f.file_name())
            .map(|f| f.to_string_lossy().into_owned())
            .collect(),
    };
    write_json(path, &manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ocba_core::{MetricPoint, PolicyKind};

    #[test]
    fn file_names() {
        let p = PolicyConfig::new(PolicyKind::Ocba2, 10).unwrap();
        assert_eq!(csv_file_name("instance2", &p), "instance2_ocba2_d10.csv");
        let p = PolicyConfig::new(PolicyKind::Ocba1Um, 1).unwrap();
        assert_eq!(csv_file_name("instance1", &p), "instance1_ocba1-um_d1.csv");
    }

    #[test]
    fn csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let series = MetricSeries {
            points: vec![
                MetricPoint::new(1, 0.0, 0.0, 0.0, vec![0.5, 0.5]),
                MetricPoint::new(100, 0.5, 0.25, 2.0, vec![0.25, 0.75]),
            ],
            reps: 2,
        };
        write_series_csv(&path, &series, 2).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,pfs,eoc,cr,pfs_rate,eoc_rate,cr_per_t,cr_per_logt,alloc_mean_1,alloc_mean_2");
        assert_eq!(lines[1], "1,0,0,0,,,0,,0.5,0.5");
        assert!(lines[2].starts_with("100,0.5,0.25,2,0.006931471805599453,"));
    }
}
