//! Shared fixtures for the benchmarks.

use anyonic::config::presets;
use anyonic::ExperimentConfig;

/// A preset cut down to `t_max` so one iteration stays short.
pub fn preset(name: &str, t_max: f64) -> ExperimentConfig {
    let mut c = presets::get(name).expect("known preset");
    c.t_max = t_max;
    c
}
