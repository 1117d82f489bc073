use serde::{Deserialize, Serialize};

use super::{C64, DenseState, Vector};
use crate::error::{Error, Result};

/// On-disk pure state: `{"q": .., "n": .., "amplitudes": [[re, im], ...]}` in little-endian basis order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub q: u64,
    pub n: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &DenseState) -> Self {
        StateFile {
            q: state.q,
            n: state.n,
            amplitudes: state.amps.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn into_state(self) -> Result<DenseState> {
        let amps = Vector::from_iterator(self.amplitudes.len(), self.amplitudes.iter().map(|&[re, im]| C64::new(re, im)));
        DenseState::new(self.q, self.n, amps)
    }

    pub fn parse(text: &str) -> Result<DenseState> {
        let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_state()
    }

    pub fn render(state: &DenseState) -> String {
        serde_json::to_string(&Self::from_state(state)).expect("state serializes")
    }
}
