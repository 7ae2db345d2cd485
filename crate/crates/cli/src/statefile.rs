//! State file format: `{"dims": [d0, …], "amps": [[re, im], …]}` with
//! amplitudes row-major, last party index fastest. Input amplitudes need
//! not be pre-normalized.

use std::fs;
use std::path::Path;

use num_complex::Complex64 as C64;
use schmidt_core::{normalize, PureState};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub amps: Vec<[f64; 2]>,
}

#[derive(Debug, thiserror::Error)]
pub enum StateFileError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("malformed state file {0}: {1}")]
    Parse(String, serde_json::Error),
    #[error("invalid state in {0}: {1}")]
    Invalid(String, schmidt_core::Error),
}

pub fn read_state(path: &Path) -> Result<PureState, StateFileError> {
    let name = path.display().to_string();
    let bytes = fs::read(path).map_err(|e| StateFileError::Io(name.clone(), e))?;
    let file: StateFile =
        serde_json::from_slice(&bytes).map_err(|e| StateFileError::Parse(name.clone(), e))?;
    let raw: Vec<C64> = file.amps.iter().map(|&[re, im]| C64::new(re, im)).collect();
    normalize(&raw, &file.dims).map_err(|e| StateFileError::Invalid(name, e))
}

pub fn write_state(path: &Path, state: &PureState) -> std::io::Result<()> {
    let file = StateFile {
        dims: state.dims().to_vec(),
        amps: state.amps().iter().map(|z| [z.re, z.im]).collect(),
    };
    let mut body = serde_json::to_string_pretty(&file).expect("state serializes");
    body.push('\n');
    fs::write(path, body)
}
