//! Bandwidth-adaptive minimum-storage regenerating (MSR) erasure code.
//!
//! A file stripe of F symbols over a small Galois field is spread across n
//! nodes, alpha symbols each, so that
//!
//! * any k = mu + 1 nodes reconstruct the stripe exactly (MDS property,
//!   F = k * alpha), and
//! * a lost node is regenerated bit-exactly from **any** d helper nodes for
//!   any d in the designed set D = {2mu, 3mu, ..., (delta+1)mu}, each helper
//!   sending only beta(d) = alpha / (d - k + 1) symbols — the MSR-optimal
//!   bandwidth at every admissible helper count simultaneously.
//!
//! The construction keeps alpha tiny (mu * lcm(1..=delta)); see
//! [`params::prior_art_alpha`] for what fixed-alpha adaptivity otherwise
//! costs.
//!
//! ```
//! use bamsr::field::FieldSpec;
//! use bamsr::params::CodeParams;
//! use bamsr::encoder::{pack_data, encode_all};
//! use bamsr::reconstruct::reconstruct;
//! use bamsr::repair::{make_repair_symbols, repair_decode};
//!
//! let params = CodeParams::derive(2, 3, 9, &FieldSpec::gf256())?;
//! let source: Vec<u16> = (0..params.file_size() as u16).collect();
//! let shares = encode_all(&params, &pack_data(&params, &source)?)?;
//!
//! // Any k = 3 shares rebuild the stripe.
//! assert_eq!(reconstruct(&params, &shares[3..6])?, source);
//!
//! // Node 2 dies; six helpers regenerate it at beta(6) = 3 symbols each.
//! let packets: Vec<_> = [1, 3, 4, 5, 6, 7]
//!     .iter()
//!     .map(|&h| make_repair_symbols(&params, &shares[h - 1], 2, 6))
//!     .collect::<Result<_, _>>()?;
//! assert_eq!(repair_decode(&params, 2, &packets)?, shares[1]);
//! # Ok::<(), bamsr::Error>(())
//! ```
//!
//! The `examples/` directory walks through each capability; the `bamsr`
//! binary exposes the same operations on files.

pub mod cli;
pub mod encoder;
pub mod error;
pub mod field;
pub mod matrix;
pub mod oracle;
pub mod params;
pub mod reconstruct;
pub mod repair;
pub mod share_io;
pub mod sim;

#[cfg(test)]
pub(crate) mod testutil;

pub use encoder::{DataMatrix, NodeShare};
pub use error::{Error, Result};
pub use field::{Field, FieldKind, FieldSpec, Symbol};
pub use matrix::Matrix;
pub use params::CodeParams;
pub use repair::{RepairPacket, RepairWindow};
pub use sim::{RepairPolicy, SimConfig, SimSummary, SimTrace};
