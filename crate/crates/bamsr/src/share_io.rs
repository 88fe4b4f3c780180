//! On-disk formats: share files, repair-packet files, and the JSON manifest.
//!
//! Share file layout, little-endian throughout:
//!
//! ```text
//! offset  size  field
//! 0       5     magic "BAMSR"
//! 5       1     format version (1)
//! 6       5     field spec: kind byte (0 prime, 1 binary), then
//!               prime:  p as u16 LE, two zero bytes
//!               binary: w byte, reduction polynomial as 24-bit LE
//! 11      2     mu
//! 13      2     delta
//! 15      2     n
//! 17      2     node index
//! 19      8     stripe count
//! 27      -     payload symbols, 1 byte each for q <= 256 else 2 bytes LE
//! ```
//!
//! A repair-packet file carries the same 27-byte header (node index = the
//! helper), then `failed` and `d` as u16 LE, then its payload. Shares are
//! self-describing for codes built with the default point selection, which
//! is the only kind the CLI writes; the manifest additionally records the
//! point exponents, original length, padding, and per-share CRC-32C
//! checksums of the payload bytes.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crc::{Crc, CRC_32_ISCSI};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldKind, FieldSpec, Symbol};
use crate::params::CodeParams;

pub const MAGIC: &[u8; 5] = b"BAMSR";
pub const FORMAT_VERSION: u8 = 1;

const CASTAGNOLI: Crc<u32> = Crc::<u32>::new(&CRC_32_ISCSI);

/// CRC-32C (Castagnoli) of a byte string.
pub fn crc32c(data: &[u8]) -> u32 {
    CASTAGNOLI.checksum(data)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShareHeader {
    pub spec: FieldSpec,
    pub mu: usize,
    pub delta: usize,
    pub n: usize,
    pub node_index: usize,
    pub stripes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PacketHeader {
    pub share: ShareHeader,
    pub failed: usize,
    pub d: usize,
}

fn encode_spec(spec: &FieldSpec) -> [u8; 5] {
    match spec.kind {
        FieldKind::Prime => {
            let p = (spec.p as u16).to_le_bytes();
            [0, p[0], p[1], 0, 0]
        }
        FieldKind::BinaryExtension => {
            let poly = spec.poly.to_le_bytes();
            [1, spec.w as u8, poly[0], poly[1], poly[2]]
        }
    }
}

fn decode_spec(bytes: &[u8; 5]) -> Result<FieldSpec> {
    match bytes[0] {
        0 => {
            let p = u16::from_le_bytes([bytes[1], bytes[2]]) as u32;
            Ok(FieldSpec::prime(p))
        }
        1 => {
            let w = bytes[1] as u32;
            let poly = u32::from_le_bytes([bytes[2], bytes[3], bytes[4], 0]);
            Ok(FieldSpec::binary_with_poly(w, poly))
        }
        other => Err(Error::Format(format!("unknown field kind byte {other}"))),
    }
}

fn encode_header(h: &ShareHeader) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(27);
    out.extend_from_slice(MAGIC);
    out.push(FORMAT_VERSION);
    out.extend_from_slice(&encode_spec(&h.spec));
    for (v, what) in [
        (h.mu, "mu"),
        (h.delta, "delta"),
        (h.n, "n"),
        (h.node_index, "node index"),
    ] {
        let word = u16::try_from(v)
            .map_err(|_| Error::Format(format!("{what} = {v} does not fit the file format")))?;
        out.extend_from_slice(&word.to_le_bytes());
    }
    out.extend_from_slice(&h.stripes.to_le_bytes());
    Ok(out)
}

fn read_exact<R: Read>(r: &mut R, n: usize, what: &str) -> Result<Vec<u8>> {
    let mut buf = vec![0u8; n];
    r.read_exact(&mut buf)
        .map_err(|_| Error::Format(format!("truncated file while reading {what}")))?;
    Ok(buf)
}

fn decode_header<R: Read>(r: &mut R) -> Result<ShareHeader> {
    let magic = read_exact(r, 5, "magic")?;
    if magic != MAGIC {
        return Err(Error::Format("bad magic, not a share file".into()));
    }
    let version = read_exact(r, 1, "version")?[0];
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported format version {version}"
        )));
    }
    let spec_bytes: [u8; 5] = read_exact(r, 5, "field spec")?.try_into().unwrap();
    let spec = decode_spec(&spec_bytes)?;
    let rest = read_exact(r, 8, "parameters")?;
    let mut words = rest
        .chunks_exact(2)
        .map(|c| u16::from_le_bytes([c[0], c[1]]) as usize);
    let (mu, delta, n, node_index) = (
        words.next().unwrap(),
        words.next().unwrap(),
        words.next().unwrap(),
        words.next().unwrap(),
    );
    let stripes = u64::from_le_bytes(read_exact(r, 8, "stripe count")?.try_into().unwrap());
    Ok(ShareHeader {
        spec,
        mu,
        delta,
        n,
        node_index,
        stripes,
    })
}

/// Serialize symbols at the field's fixed width.
pub fn symbols_to_bytes(spec: &FieldSpec, symbols: &[Symbol]) -> Vec<u8> {
    if spec.symbol_width() == 1 {
        symbols.iter().map(|&s| s as u8).collect()
    } else {
        symbols.iter().flat_map(|&s| s.to_le_bytes()).collect()
    }
}

pub fn bytes_to_symbols(spec: &FieldSpec, bytes: &[u8]) -> Result<Vec<Symbol>> {
    let width = spec.symbol_width();
    if !bytes.len().is_multiple_of(width) {
        return Err(Error::Format(format!(
            "payload of {} bytes is not a whole number of {width}-byte symbols",
            bytes.len()
        )));
    }
    let q = spec.order();
    let symbols: Vec<Symbol> = if width == 1 {
        bytes.iter().map(|&b| b as Symbol).collect()
    } else {
        bytes
            .chunks_exact(2)
            .map(|c| u16::from_le_bytes([c[0], c[1]]))
            .collect()
    };
    if let Some(&bad) = symbols.iter().find(|&&s| s as u32 >= q) {
        return Err(Error::Format(format!(
            "symbol {bad} outside field of order {q}"
        )));
    }
    Ok(symbols)
}

pub fn write_share_file(
    path: &Path,
    params: &CodeParams,
    node_index: usize,
    stripes: u64,
    payload: &[Symbol],
) -> Result<()> {
    let header = ShareHeader {
        spec: *params.field().spec(),
        mu: params.mu(),
        delta: params.delta(),
        n: params.n(),
        node_index,
        stripes,
    };
    let mut out = fs::File::create(path)?;
    out.write_all(&encode_header(&header)?)?;
    out.write_all(&symbols_to_bytes(&header.spec, payload))?;
    Ok(())
}

/// Read a share file; the payload length is validated against the header:
/// exactly `stripes * alpha` symbols.
pub fn read_share_file(path: &Path) -> Result<(ShareHeader, Vec<Symbol>)> {
    let mut file = fs::File::open(path)?;
    let header = decode_header(&mut file)?;
    let mut rest = Vec::new();
    file.read_to_end(&mut rest)?;
    let symbols = bytes_to_symbols(&header.spec, &rest)?;
    let (_, alpha, _, _) = crate::params::derived_sizes(header.mu, header.delta)
        .map_err(|e| Error::Format(e.to_string()))?;
    if header.node_index < 1 || header.node_index > header.n {
        return Err(Error::Format(format!(
            "node index {} out of range",
            header.node_index
        )));
    }
    let expect = header.stripes as usize * alpha;
    if symbols.len() != expect {
        return Err(Error::Format(format!(
            "share payload has {} symbols, header promises {expect}",
            symbols.len()
        )));
    }
    Ok((header, symbols))
}

pub fn write_packet_file(
    path: &Path,
    params: &CodeParams,
    helper: usize,
    failed: usize,
    d: usize,
    stripes: u64,
    payload: &[Symbol],
) -> Result<()> {
    let header = ShareHeader {
        spec: *params.field().spec(),
        mu: params.mu(),
        delta: params.delta(),
        n: params.n(),
        node_index: helper,
        stripes,
    };
    let mut out = fs::File::create(path)?;
    out.write_all(&encode_header(&header)?)?;
    out.write_all(&(failed as u16).to_le_bytes())?;
    out.write_all(&(d as u16).to_le_bytes())?;
    out.write_all(&symbols_to_bytes(&header.spec, payload))?;
    Ok(())
}

pub fn read_packet_file(path: &Path) -> Result<(PacketHeader, Vec<Symbol>)> {
    let mut file = fs::File::open(path)?;
    let share = decode_header(&mut file)?;
    let failed = u16::from_le_bytes(
        read_exact(&mut file, 2, "failed index")?
            .try_into()
            .unwrap(),
    ) as usize;
    let d = u16::from_le_bytes(
        read_exact(&mut file, 2, "helper count")?
            .try_into()
            .unwrap(),
    ) as usize;
    let mut rest = Vec::new();
    file.read_to_end(&mut rest)?;
    let symbols = bytes_to_symbols(&share.spec, &rest)?;
    let (_, alpha, _, _) = crate::params::derived_sizes(share.mu, share.delta)
        .map_err(|e| Error::Format(e.to_string()))?;
    if d < 2 * share.mu || !d.is_multiple_of(share.mu) || d > (share.delta + 1) * share.mu {
        return Err(Error::Format(format!(
            "packet's d = {d} is not an admissible helper count"
        )));
    }
    let beta = alpha / (d - share.mu);
    let expect = share.stripes as usize * beta;
    if symbols.len() != expect {
        return Err(Error::Format(format!(
            "packet payload has {} symbols, header promises {expect}",
            symbols.len()
        )));
    }
    Ok((PacketHeader { share, failed, d }, symbols))
}

/// The JSON manifest written next to the share files. Together with any k
/// share files it pins everything needed to rebuild the original file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u8,
    pub field: FieldSpec,
    pub mu: usize,
    pub delta: usize,
    pub n: usize,
    /// e_j = g^(exponent_j) for the field's fixed generator.
    pub point_exponents: Vec<u64>,
    /// Original file length in bytes.
    pub file_len: u64,
    /// Zero-padding bytes appended before striping.
    pub padding: u64,
    pub stripes: u64,
    /// CRC-32C of each node's share payload bytes, indexed by node - 1.
    pub share_checksums: Vec<u32>,
}

impl Manifest {
    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Format(format!("manifest encode: {e}")))?;
        fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let m: Manifest = serde_json::from_str(&text)
            .map_err(|e| Error::Format(format!("manifest decode: {e}")))?;
        if m.format_version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported manifest version {}",
                m.format_version
            )));
        }
        if m.point_exponents.len() != m.n || m.share_checksums.len() != m.n {
            return Err(Error::Format(format!(
                "manifest lists {} exponents and {} checksums for n = {} nodes",
                m.point_exponents.len(),
                m.share_checksums.len(),
                m.n
            )));
        }
        Ok(m)
    }

    /// Rebuild the code parameters this manifest describes.
    pub fn params(&self) -> Result<CodeParams> {
        let field = crate::field::Field::new(&self.field)?;
        let g = field.generator();
        let points: Vec<Symbol> = self
            .point_exponents
            .iter()
            .map(|&a| field.pow(g, a))
            .collect();
        CodeParams::with_points(self.mu, self.delta, &self.field, &points)
    }
}
