//! Coded single-tone neighbor discovery.
//!
//! Each node owns a temporary node identifier (TNID) and announces it by
//! energizing one OFDM subcarrier per symbol, the subcarrier sequence being a
//! Reed-Solomon codeword over a prime field. Tones from many transmitters
//! superpose without interfering, so a listener can pull several neighbors
//! out of a single discovery slot.
//!
//! - [`gfield`]: prime-field arithmetic and roots of unity.
//! - [`codec`]: TNID encoding, validity, offset recovery, multi-user decoding.
//! - [`channel`]: tone-grid synthesis through fading links and tone detection.
//! - [`protocol`]: per-node discovery state machine and slotted simulation.
//! - [`baseline`]: the classic random-access discovery scheme.
//! - [`harness`]: configuration, seeded experiments, CSV output.

pub mod baseline;
pub mod channel;
pub mod codec;
pub mod gfield;
pub mod harness;
pub mod protocol;
pub mod receiver;
pub mod seed;

pub use codec::{DecodeResult, DetectedTones, DiscoveryCode, Tnid};
pub use gfield::FieldParams;
