//! Data reconstruction from any k = mu + 1 shares.
//!
//! The decoder runs z sequential steps over the column windows of the
//! collected shares. Step 1 solves the pair (S_1, S_2) from the first
//! window; step i >= 2 first peels the already-known S_{2(i-1)} out of
//! window i and then solves (S_{2i-1}, S_{2i}). Each step reduces to the
//! same core problem: solve `X = Psi A + Delta Psi B` for symmetric A, B,
//! where Psi is a (mu+1)-by-mu generalized Vandermonde window and Delta is
//! the diagonal of the collectors' points raised to the mu-th power.

use crate::encoder::{pack_data, psi_row, NodeShare};
use crate::error::{Error, Result};
use crate::field::{Field, Symbol};
use crate::matrix::{solve_linear, Matrix};
use crate::params::CodeParams;

/// What a data collector sees: k chosen shares and the matching coefficient
/// rows, sorted by node index.
#[derive(Debug)]
pub struct CollectorView {
    /// The chosen node indices, ascending.
    pub nodes: Vec<usize>,
    /// k-by-alpha matrix of the collected symbols.
    pub x_dc: Matrix,
    /// k-by-(z+1)mu matrix of coefficient rows.
    pub psi_dc: Matrix,
    /// Diagonal of e^mu per chosen node. Sliding a column window of psi_dc
    /// one block to the right multiplies it by this diagonal.
    pub lambda: Vec<Symbol>,
}

impl CollectorView {
    pub fn build(params: &CodeParams, shares: &[NodeShare]) -> Result<Self> {
        if shares.len() != params.k() {
            return Err(Error::Input(format!(
                "need exactly k = {} shares, got {}",
                params.k(),
                shares.len()
            )));
        }
        let mut shares: Vec<&NodeShare> = shares.iter().collect();
        shares.sort_by_key(|s| s.node_index);
        let mut nodes = Vec::with_capacity(shares.len());
        for s in &shares {
            if nodes.contains(&s.node_index) {
                return Err(Error::Input(format!(
                    "duplicate node index {}",
                    s.node_index
                )));
            }
            if s.symbols.len() != params.alpha() {
                return Err(Error::Input(format!(
                    "share of node {} has {} symbols, expected alpha = {}",
                    s.node_index,
                    s.symbols.len(),
                    params.alpha()
                )));
            }
            if s.stripe_index != shares[0].stripe_index {
                return Err(Error::Input(format!(
                    "shares mix stripes {} and {}",
                    shares[0].stripe_index, s.stripe_index
                )));
            }
            nodes.push(s.node_index);
        }
        let k = params.k();
        let mut x_dc = Matrix::zeros(k, params.alpha());
        let mut psi_dc = Matrix::zeros(k, params.psi_width());
        let mut lambda = Vec::with_capacity(k);
        for (r, s) in shares.iter().enumerate() {
            for (c, &v) in s.symbols.iter().enumerate() {
                x_dc.set(r, c, v);
            }
            for (c, &v) in psi_row(params, s.node_index)?.iter().enumerate() {
                psi_dc.set(r, c, v);
            }
            lambda.push(params.field().pow(s.point, params.mu() as u64));
        }
        Ok(CollectorView {
            nodes,
            x_dc,
            psi_dc,
            lambda,
        })
    }

    /// Column window i (1-based) of the coefficient matrix: columns
    /// (i-1)mu .. i*mu.
    pub fn psi_window(&self, params: &CodeParams, i: usize) -> Matrix {
        let mu = params.mu();
        self.psi_dc.columns((i - 1) * mu, i * mu)
    }

    fn x_window(&self, params: &CodeParams, i: usize) -> Matrix {
        let mu = params.mu();
        self.x_dc.columns((i - 1) * mu, i * mu)
    }
}

/// Solve `X = Psi A + Delta Psi B` for symmetric mu-by-mu A and B.
///
/// X and Psi are (mu+1)-by-mu; Delta is the diagonal (given as a slice) and
/// must have distinct nonzero entries. The algorithm works on
/// `R = X Psi^T = P + Delta Q` with symmetric `P = Psi A Psi^T` and
/// `Q = Psi B Psi^T`: the off-diagonal pairs (R_ij, R_ji) determine P_ij and
/// Q_ij, the off-diagonal entries of row i of Q determine psi_i B by a
/// mu-by-mu Vandermonde solve, and stacking the first mu such rows recovers
/// B (same for A from P). The reassembled equation is checked before
/// returning, so corrupt inputs surface as a verification error.
pub fn solve_sym_pair(
    f: &Field,
    x: &Matrix,
    psi: &Matrix,
    delta: &[Symbol],
) -> Result<(Matrix, Matrix)> {
    let mu = psi.cols();
    let k = mu + 1;
    if psi.rows() != k || x.rows() != k || x.cols() != mu || delta.len() != k {
        return Err(Error::Dimension(format!(
            "expected X and Psi of shape {k}x{mu} and {k} diagonal entries, got X {}x{}, Psi {}x{}, {} entries",
            x.rows(),
            x.cols(),
            psi.rows(),
            psi.cols(),
            delta.len()
        )));
    }
    for (i, &l) in delta.iter().enumerate() {
        if l == 0 {
            return Err(Error::Input(format!("Delta entry {} is zero", i + 1)));
        }
        if delta[..i].contains(&l) {
            return Err(Error::Input(format!("repeated Delta entry {l}")));
        }
    }

    let r = x.mul(&psi.transpose(), f)?;

    // Off-diagonal split R_ij = P_ij + lambda_i Q_ij, R_ji = P_ij + lambda_j Q_ij.
    let mut p = Matrix::zeros(k, k);
    let mut q = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let diff = f.sub(delta[i], delta[j]);
            let qij = f.div(f.sub(r.get(i, j), r.get(j, i)), diff)?;
            let pij = f.sub(r.get(i, j), f.mul(delta[i], qij));
            q.set(i, j, qij);
            p.set(i, j, pij);
        }
    }

    // Row i of Q (off-diagonal) equals (psi_i B) psi_j^T for the other rows
    // j; invert the mu-by-mu Vandermonde of the other rows to get psi_i B.
    let rows_of = |m: &Matrix| -> Result<Matrix> {
        let mut stacked = Matrix::zeros(mu, mu);
        for i in 0..mu {
            let others: Vec<usize> = (0..k).filter(|&j| j != i).collect();
            let mut psi_other = Matrix::zeros(mu, mu);
            let mut rhs = Matrix::zeros(mu, 1);
            for (t, &j) in others.iter().enumerate() {
                for c in 0..mu {
                    psi_other.set(t, c, psi.get(j, c));
                }
                rhs.set(t, 0, m.get(i, j));
            }
            let v = solve_linear(f, &psi_other, &rhs)?;
            for c in 0..mu {
                stacked.set(i, c, v.get(c, 0));
            }
        }
        // stacked = Psi[rows 0..mu] * unknown; one more solve frees it. The
        // first mu rows of the sorted collector list are the fixed choice.
        let mut top = Matrix::zeros(mu, mu);
        for i in 0..mu {
            for c in 0..mu {
                top.set(i, c, psi.get(i, c));
            }
        }
        solve_linear(f, &top, &stacked)
    };

    let b = rows_of(&q)?;
    let a = rows_of(&p)?;

    // Postcondition: the equation must hold exactly and both solutions must
    // be symmetric; anything else means the input was inconsistent.
    let mut delta_psi = psi.clone();
    for (i, &lambda) in delta.iter().enumerate() {
        for c in 0..mu {
            delta_psi.set(i, c, f.mul(lambda, psi.get(i, c)));
        }
    }
    let recombined = psi.mul(&a, f)?.add(&delta_psi.mul(&b, f)?, f)?;
    if recombined != *x || !a.is_symmetric() || !b.is_symmetric() {
        return Err(Error::Verification(
            "solved pair does not reproduce the input window".into(),
        ));
    }
    Ok((a, b))
}

/// Recover all F source symbols of one stripe from any k shares.
///
/// After the z peeling steps the recovered data matrix is re-encoded for the
/// k nodes actually used and compared against the given shares; a mismatch
/// reports corruption instead of returning wrong data.
pub fn reconstruct(params: &CodeParams, shares: &[NodeShare]) -> Result<Vec<Symbol>> {
    let view = CollectorView::build(params, shares)?;
    let f = params.field();
    let mu = params.mu();
    let z = params.z();

    let mut recovered: Vec<Matrix> = Vec::with_capacity(2 * z);
    for i in 1..=z {
        let mut xw = view.x_window(params, i);
        if i >= 2 {
            // Peel the previous even block out of this window.
            let prev = &recovered[2 * (i - 1) - 1];
            let contribution = view.psi_window(params, i - 1).mul(prev, f)?;
            xw = xw.sub(&contribution, f)?;
        }
        let psi_w = view.psi_window(params, i);
        let (s_odd, s_even) = solve_sym_pair(f, &xw, &psi_w, &view.lambda)?;
        recovered.push(s_odd);
        recovered.push(s_even);
    }

    let mut source = Vec::with_capacity(params.file_size());
    for s in &recovered {
        for a in 0..mu {
            for b in a..mu {
                source.push(s.get(a, b));
            }
        }
    }

    // Final check: the recovered source must re-encode to the shares we used.
    let m = pack_data(params, &source)?;
    for (r, &node) in view.nodes.iter().enumerate() {
        let re = crate::encoder::encode_node(params, &m, node)?;
        if re.symbols != view.x_dc.row(r) {
            return Err(Error::Verification(format!(
                "re-encoded share of node {node} does not match the input share"
            )));
        }
    }
    Ok(source)
}
