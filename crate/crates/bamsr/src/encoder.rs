//! Source packing and node encoding.
//!
//! A stripe of F source symbols fills 2z symmetric mu-by-mu blocks
//! S_1..S_2z. Logically those blocks sit in a (z+1)-by-z block grid where
//! grid cell (i, j) holds S_{i+j-1} when |i - j| <= 1 and zeros elsewhere, a
//! block-tridiagonal band. Node j then stores the alpha-symbol row
//! `x_j = psi_j * M`, where psi_j is the row of consecutive powers of the
//! node's evaluation point.
//!
//! M is kept as the 2z blocks (the band is all there is); a dense
//! materializer exists for tests and the brute-force paths.

use crate::error::{Error, Result};
use crate::field::Symbol;
use crate::matrix::Matrix;
use crate::params::CodeParams;

/// The structured data matrix: 2z symmetric mu-by-mu blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataMatrix {
    mu: usize,
    z: usize,
    blocks: Vec<Matrix>,
}

/// The encoded content of one node for one stripe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeShare {
    /// Node index j in 1..=n.
    pub node_index: usize,
    /// The node's evaluation point e_j.
    pub point: Symbol,
    /// The alpha encoded symbols x_j.
    pub symbols: Vec<Symbol>,
    /// Which stripe of the source file this share belongs to.
    pub stripe_index: usize,
}

impl DataMatrix {
    /// Number of block rows in the logical grid: z + 1.
    pub fn block_rows(&self) -> usize {
        self.z + 1
    }

    /// Number of block columns in the logical grid: z.
    pub fn block_cols(&self) -> usize {
        self.z
    }

    /// Block S_t for t in 1..=2z.
    pub fn s_block(&self, t: usize) -> &Matrix {
        &self.blocks[t - 1]
    }

    /// The grid cell at 1-based block position (i, j); `None` is a zero
    /// block. Both (i, i+1) and (i+1, i) map to S_{2i}, which is what makes
    /// the band symmetric about the main block diagonal.
    pub fn block(&self, i: usize, j: usize) -> Option<&Matrix> {
        assert!(i >= 1 && i <= self.z + 1 && j >= 1 && j <= self.z);
        if i.abs_diff(j) <= 1 {
            Some(&self.blocks[i + j - 2])
        } else {
            None
        }
    }

    /// Materialize the full (z+1)mu-by-zmu matrix. Test and oracle use only.
    pub fn to_dense(&self) -> Matrix {
        let mu = self.mu;
        let mut m = Matrix::zeros((self.z + 1) * mu, self.z * mu);
        for bi in 1..=self.z + 1 {
            for bj in 1..=self.z {
                if let Some(s) = self.block(bi, bj) {
                    for a in 0..mu {
                        for b in 0..mu {
                            m.set((bi - 1) * mu + a, (bj - 1) * mu + b, s.get(a, b));
                        }
                    }
                }
            }
        }
        m
    }

    /// Inverse of [`pack_data`]: read the source symbols back out.
    pub fn unpack(&self) -> Vec<Symbol> {
        let mu = self.mu;
        let mut out = Vec::with_capacity(self.z * mu * (mu + 1));
        for s in &self.blocks {
            for a in 0..mu {
                for b in a..mu {
                    out.push(s.get(a, b));
                }
            }
        }
        out
    }
}

/// Pack F source symbols into the data matrix. The fill order is fixed: for
/// t = 1..2z in turn, S_t's upper triangle row-major (diagonal included)
/// consumes the next mu(mu+1)/2 symbols and the lower triangle mirrors it.
pub fn pack_data(params: &CodeParams, source: &[Symbol]) -> Result<DataMatrix> {
    let mu = params.mu();
    let z = params.z();
    if source.len() != params.file_size() {
        return Err(Error::Input(format!(
            "source has {} symbols, expected F = {}",
            source.len(),
            params.file_size()
        )));
    }
    for &s in source {
        if !params.field().contains(s) {
            return Err(Error::Input(format!("source symbol {s} outside the field")));
        }
    }
    let mut it = source.iter().copied();
    let blocks = (0..2 * z)
        .map(|_| {
            let mut s = Matrix::zeros(mu, mu);
            for a in 0..mu {
                for b in a..mu {
                    let v = it.next().unwrap();
                    s.set(a, b, v);
                    s.set(b, a, v);
                }
            }
            s
        })
        .collect();
    Ok(DataMatrix { mu, z, blocks })
}

/// Coefficient row of node j: the consecutive powers
/// `(e_j, e_j^2, ..., e_j^((z+1)mu))`. Exponents start at 1, not 0; the
/// repair windows rely on that.
pub fn psi_row(params: &CodeParams, j: usize) -> Result<Vec<Symbol>> {
    let e = params.point(j)?;
    let f = params.field();
    let mut out = Vec::with_capacity(params.psi_width());
    let mut cur = e;
    for _ in 0..params.psi_width() {
        out.push(cur);
        cur = f.mul(cur, e);
    }
    Ok(out)
}

/// Encode node j: `x_j = psi_j * M`, walking only the nonzero band.
pub fn encode_node(params: &CodeParams, m: &DataMatrix, j: usize) -> Result<NodeShare> {
    let f = params.field();
    let mu = params.mu();
    let z = params.z();
    let psi = psi_row(params, j)?;
    let mut symbols = vec![0; params.alpha()];
    for bj in 1..=z {
        for bi in bj.saturating_sub(1).max(1)..=(bj + 1).min(z + 1) {
            let Some(s) = m.block(bi, bj) else { continue };
            let seg = &psi[(bi - 1) * mu..bi * mu];
            for c in 0..mu {
                let mut acc = symbols[(bj - 1) * mu + c];
                for (a, &p) in seg.iter().enumerate() {
                    acc = f.add(acc, f.mul(p, s.get(a, c)));
                }
                symbols[(bj - 1) * mu + c] = acc;
            }
        }
    }
    Ok(NodeShare {
        node_index: j,
        point: params.point(j)?,
        symbols,
        stripe_index: 0,
    })
}

/// Encode all n nodes.
pub fn encode_all(params: &CodeParams, m: &DataMatrix) -> Result<Vec<NodeShare>> {
    (1..=params.n())
        .map(|j| encode_node(params, m, j))
        .collect()
}
