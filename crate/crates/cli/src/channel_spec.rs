//! Channel specifications: named presets or JSON files.
//!
//! Presets: `identity:d`, `depolarizing:d:p`, `unital:p0,px,py,pz`.
//! Anything else is treated as a path to a channel JSON file.

use qcap_core::wire::ChannelFile;
use qcap_core::QuantumChannel64;

use crate::output::{CliError, CliResult};

/// Parsed channel plus the closed-form entanglement-assisted capacity
/// when the preset has one.
pub struct ResolvedChannel {
    pub channel: QuantumChannel64,
    pub closed_form: Option<f64>,
    pub description: String,
}

pub fn resolve(spec: &str) -> CliResult<ResolvedChannel> {
    if let Some(rest) = spec.strip_prefix("identity:") {
        let d: usize = rest
            .parse()
            .map_err(|_| CliError::Input(format!("identity dimension: {rest:?}")))?;
        if d == 0 {
            return Err(CliError::Input("identity dimension must be positive".into()));
        }
        return Ok(ResolvedChannel {
            channel: QuantumChannel64::identity(d),
            closed_form: Some(2.0 * (d as f64).log2()),
            description: spec.to_string(),
        });
    }
    if let Some(rest) = spec.strip_prefix("depolarizing:") {
        let (d_str, p_str) = rest
            .split_once(':')
            .ok_or_else(|| CliError::Input(format!("expected depolarizing:d:p, got {spec:?}")))?;
        let d: usize = d_str
            .parse()
            .map_err(|_| CliError::Input(format!("depolarizing dimension: {d_str:?}")))?;
        let p: f64 = p_str
            .parse()
            .map_err(|_| CliError::Input(format!("depolarizing parameter: {p_str:?}")))?;
        let channel = QuantumChannel64::depolarizing(d, p)?;
        let closed = qcap_core::capacity::ea_capacity_depolarizing(d, p)?;
        return Ok(ResolvedChannel {
            channel,
            closed_form: Some(closed),
            description: spec.to_string(),
        });
    }
    if let Some(rest) = spec.strip_prefix("unital:") {
        let probs = crate::output::parse_f64_list(rest)?;
        if probs.len() != 4 {
            return Err(CliError::Input(format!(
                "unital preset needs 4 Pauli weights, got {}",
                probs.len()
            )));
        }
        let channel = QuantumChannel64::unital_qubit(probs[0], probs[1], probs[2], probs[3])?;
        return Ok(ResolvedChannel {
            channel,
            closed_form: None,
            description: spec.to_string(),
        });
    }

    // JSON file path.
    let text = std::fs::read_to_string(spec)
        .map_err(|e| CliError::Input(format!("cannot read channel file {spec:?}: {e}")))?;
    let file: ChannelFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("channel file {spec:?}: {e}")))?;
    let channel = file.into_channel::<f64>()?;
    Ok(ResolvedChannel {
        channel,
        closed_form: None,
        description: spec.to_string(),
    })
}
