//! Problem files: a small JSON format with the ambient dimension, the
//! defining polynomials as strings in the input grammar, and a free-text
//! description.

use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use symcoh_core::complexes::Problem;
use symcoh_core::polyspace::parse_poly;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    /// Ambient projective dimension.
    #[serde(rename = "N")]
    pub ambient: usize,
    /// Defining polynomials, e.g. `"X0^4+X1^4+X2^4+X3^4"`.
    pub polys: Vec<String>,
    #[serde(default)]
    pub description: String,
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<ProblemFile> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading problem file {}", path.display()))?;
        let file: ProblemFile = serde_json::from_str(&text)
            .with_context(|| format!("parsing problem file {}", path.display()))?;
        Ok(file)
    }

    /// Parse the polynomial strings and build the validated problem.
    /// The complete intersection is assumed smooth; this is a documented
    /// precondition, not something the tool verifies.
    pub fn to_problem(&self) -> Result<Problem> {
        let mut polys = Vec::with_capacity(self.polys.len());
        for (i, text) in self.polys.iter().enumerate() {
            let p = parse_poly(text, self.ambient)
                .map_err(|e| anyhow::anyhow!("polynomial {i}: {e}"))?;
            polys.push(p);
        }
        Problem::new(self.ambient, polys).map_err(|e| anyhow::anyhow!("{e}"))
    }
}
