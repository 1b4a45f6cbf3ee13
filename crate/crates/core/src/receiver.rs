//! Detection plus decoding: what a listener does with a received slot.

use crate::channel::{detect_tones, SparseGrid, ToneGrid};
use crate::codec::{CodecError, DecodeResult, DetectedTones, DiscoveryCode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverConfig {
    /// Detection factor over the per-symbol median energy.
    pub gamma: f64,
    /// Minimum matched symbols to accept a TNID.
    pub tau: usize,
    /// Offset hypotheses swept on each side of zero.
    pub delta_max: u32,
}

impl ReceiverConfig {
    pub const DEFAULT_GAMMA: f64 = 8.0;
    pub const DEFAULT_DELTA_MAX: u32 = 3;

    /// `gamma = 8`, `tau = k + floor((n-k)/2)`, no offset search.
    pub fn for_code(code: &DiscoveryCode) -> Self {
        ReceiverConfig {
            gamma: Self::DEFAULT_GAMMA,
            tau: code.default_threshold(),
            delta_max: 0,
        }
    }

    pub fn decode(
        &self,
        code: &DiscoveryCode,
        det: &DetectedTones,
    ) -> Result<Vec<DecodeResult>, CodecError> {
        code.decode_with_offset_search(det, self.tau, self.delta_max)
    }

    pub fn receive(
        &self,
        code: &DiscoveryCode,
        grid: &ToneGrid,
    ) -> Result<Vec<DecodeResult>, CodecError> {
        self.decode(code, &detect_tones(grid, self.gamma))
    }

    pub fn receive_sparse(
        &self,
        code: &DiscoveryCode,
        grid: &SparseGrid,
    ) -> Result<Vec<DecodeResult>, CodecError> {
        self.decode(code, &grid.detect(self.gamma))
    }
}
