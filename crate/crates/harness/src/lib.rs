//! Experiment orchestration for `ocba-core`: built-in instances, JSON
//! experiment configs, parallel replications and CSV/JSON outputs.
//!
//! ```no_run
//! use ocba_harness::{run_experiment, ExperimentConfig};
//!
//! let cfg: ExperimentConfig = serde_json::from_str(r#"{
//!     "instance": "instance1",
//!     "policies": [{"kind": "ocba2", "delta": 1}],
//!     "budget": 2000,
//!     "replications": 50,
//!     "output_dir": "out"
//! }"#).unwrap();
//! let report = run_experiment(&cfg).unwrap();
//! println!("{}", report.files.len());
//! ```

#![warn(missing_docs)]

mod config;
mod error;
mod experiment;
mod output;
mod registry;

pub use config::{CheckpointSpec, ExperimentConfig, InstanceSpec, PolicySpec, ResolvedConfig};
pub use error::{HarnessError, HarnessResult};
pub use experiment::{run_experiment, simulate, ExperimentReport, PolicyRun};
pub use output::{csv_file_name, write_series_csv, CSV_HEADER_PREFIX};
pub use registry::{builtin_instance, BUILTIN_NAMES};
