use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{open, IoError};
use crate::econometrics::{ArmaParams, FitReport, GarchParams, Innovation, RegimeModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub log_likelihood: f64,
    pub k: usize,
    pub aic: f64,
}

impl From<&FitReport> for FitSummary {
    fn from(r: &FitReport) -> Self {
        FitSummary {
            log_likelihood: r.log_likelihood,
            k: r.k,
            aic: r.aic,
        }
    }
}

/// Serialized form of a [`RegimeModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub state_id: u32,
    pub mu: f64,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub omega: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub innovation: Innovation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSummary>,
}

impl ModelFile {
    pub fn new(model: &RegimeModel, fit: Option<FitSummary>) -> Self {
        let (a, g) = (model.arma(), model.garch());
        ModelFile {
            state_id: model.state_id(),
            mu: a.mu,
            phi: a.phi.clone(),
            theta: a.theta.clone(),
            omega: g.omega,
            alpha: g.alpha.clone(),
            beta: g.beta.clone(),
            innovation: model.innovation(),
            fit,
        }
    }

    pub fn to_model(&self) -> Result<RegimeModel, crate::econometrics::EconError> {
        RegimeModel::new(
            self.state_id,
            ArmaParams::new(self.mu, self.phi.clone(), self.theta.clone()),
            GarchParams::new(self.omega, self.alpha.clone(), self.beta.clone()),
            self.innovation,
        )
    }
}

pub fn write_model<W: Write>(mut w: W, model: &RegimeModel, fit: Option<FitSummary>) -> Result<(), IoError> {
    serde_json::to_writer_pretty(&mut w, &ModelFile::new(model, fit))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Parses and validates a model file.
pub fn read_model<R: Read>(r: R) -> Result<(RegimeModel, Option<FitSummary>), IoError> {
    let file: ModelFile = serde_json::from_reader(r)?;
    let model = file.to_model().map_err(|source| IoError::Model {
        path: format!("state {}", file.state_id),
        source,
    })?;
    Ok((model, file.fit))
}

/// Every `*.json` model in `dir`, in file-name order.
pub fn read_model_dir(dir: &Path) -> Result<Vec<RegimeModel>, IoError> {
    let entries = std::fs::read_dir(dir).map_err(|source| match source.kind() {
        std::io::ErrorKind::NotFound => IoError::MissingFile(dir.to_path_buf()),
        _ => IoError::File {
            path: dir.to_path_buf(),
            source,
        },
    })?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "json") && !is_manifest(&path) {
            paths.push(path);
        }
    }
    paths.sort();
    if paths.is_empty() {
        return Err(IoError::Format(format!(
            "no model files (*.json) in {}",
            dir.display()
        )));
    }
    paths
        .iter()
        .map(|p| {
            let file: ModelFile = serde_json::from_reader(open(p)?).map_err(|e| {
                IoError::Format(format!("{}: {e}", p.display()))
            })?;
            file.to_model().map_err(|source| IoError::Model {
                path: p.display().to_string(),
                source,
            })
        })
        .collect()
}

fn is_manifest(path: &Path) -> bool {
    path.file_name()
        .and_then(|n| n.to_str())
        .is_some_and(|n| n.ends_with("manifest.json"))
}
