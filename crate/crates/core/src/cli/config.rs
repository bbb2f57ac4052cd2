//! TOML run configuration. Every key is optional; command-line flags win.
//!
//! ```toml
//! [params]
//! omega_f = 51.1e9
//! omega_s = 51.1e9
//! kappa = 47e3
//! hz = true
//!
//! [code]
//! k0 = 3
//! n_fock = 60
//!
//! [gk]
//! family1 = "factorial"
//! family2 = "uniform_moment"
//! nodes = 200
//!
//! [verify]
//! tol = 1e-8
//! seed = 7
//!
//! [output]
//! out = "report.json"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub params: ParamsSection,
    #[serde(default)]
    pub code: CodeSection,
    #[serde(default)]
    pub gk: GkSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub omega_f: Option<f64>,
    pub omega_s: Option<f64>,
    pub kappa: Option<f64>,
    pub gamma_f: Option<f64>,
    pub gamma_s: Option<f64>,
    pub hz: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSection {
    pub k0: Option<usize>,
    pub n_fock: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GkSection {
    pub family1: Option<String>,
    pub family2: Option<String>,
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}
