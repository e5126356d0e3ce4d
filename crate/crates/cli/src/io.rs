//! Instance files.
//!
//! ```json
//! {"n": 3, "weights": [1.0, 2.0, 1.5], "costs": [0.4, 0.8, 1.0]}
//! {"n": 3, "distances": [[0, 1, 2], [1, 0, 1.5], [2, 1.5, 0]], "costs": [0.4, 0.8, 1.0]}
//! ```
//!
//! `weights` lists the `n(n-1)/2` edge lengths in `(u, v)` order with
//! `u < v`; `distances` is a full matrix that must already be a metric.

use std::fs;
use std::path::Path;

use facloc_core::numfmt::to_json;
use facloc_core::{build_metric, EdgeWeights, Instance, Metric};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    distances: Option<Vec<Vec<f64>>>,
    costs: Vec<f64>,
}

pub fn parse_instance(text: &str) -> Result<Instance, CliError> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("instance JSON: {e}")))?;
    let invalid = |e: facloc_core::Error| CliError::Input(e.to_string());
    let n = file.n;
    if file.costs.len() != n {
        return Err(CliError::Input(format!("costs: expected {n} entries, got {}", file.costs.len())));
    }
    match (file.weights, file.distances) {
        (Some(w), None) => {
            let weights = EdgeWeights::new(n, w).map_err(invalid)?;
            let metric = build_metric(&weights);
            Ok(Instance::new(metric, file.costs).map_err(invalid)?.with_weights(weights))
        }
        (None, Some(rows)) => {
            if rows.len() != n {
                return Err(CliError::Input(format!("distances: expected {n} rows, got {}", rows.len())));
            }
            let metric = Metric::from_matrix(rows).map_err(invalid)?;
            Instance::new(metric, file.costs).map_err(invalid)
        }
        (Some(_), Some(_)) => Err(CliError::Input("give exactly one of weights and distances, not both".into())),
        (None, None) => Err(CliError::Input("missing field: weights or distances".into())),
    }
}

pub fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

/// Writes the weights form when the instance carries its edge weights, the
/// distances form otherwise. Costs are written sorted.
pub fn instance_to_json(inst: &Instance) -> String {
    let file = InstanceFile {
        n: inst.n(),
        weights: inst.weights().map(|w| w.as_slice().to_vec()),
        distances: match inst.weights() {
            Some(_) => None,
            None => Some(inst.metric().to_rows()),
        },
        costs: inst.costs().costs().to_vec(),
    };
    to_json(&file).expect("instance serializes")
}

/// Whitespace- or comma-separated numbers, or a JSON array.
pub fn parse_cost_list(text: &str) -> Result<Vec<f64>, CliError> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed).map_err(|e| CliError::Input(format!("costs JSON: {e}")));
    }
    trimmed
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .enumerate()
        .map(|(i, t)| {
            t.parse::<f64>()
                .map_err(|e| CliError::Input(format!("costs[{i}] = {t:?}: {e}")))
        })
        .collect()
}
