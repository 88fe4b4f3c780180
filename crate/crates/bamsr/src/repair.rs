//! Exact repair from any d helpers, for any admissible d.
//!
//! A helper splits its stored row into beta(d) segments of d - mu symbols
//! and sends one dot product per segment against the matching segment of the
//! failed node's coefficient row; per-helper traffic is exactly beta(d).
//!
//! The repair decoder then runs beta(d) sequential steps over a window
//! partition of the data matrix. Window i covers block columns
//! (i-1)m+1 ..= im (where d = (m+1)mu): a symmetric m*mu square M_i on the
//! band, the block S_{2im} hanging below it, and, for i >= 2, the coupling
//! block S_{2(i-1)m} above that ties window i to window i-1. Each step
//! inverts one d-by-d generalized Vandermonde built from the helper points,
//! splits the inverse into a top part that yields psi_f(i) * M_i and a
//! bottom part that yields the S_{2im} term, and reuses the latter twice:
//! once for this segment's tail, once (rescaled by e_f^-mu) as the head
//! correction and the peeling column of the next step.

use crate::encoder::{psi_row, NodeShare};
use crate::error::{Error, Result};
use crate::field::Symbol;
use crate::matrix::{dot, gv_matrix, invert, Matrix};
use crate::params::CodeParams;

/// The beta(d) repair symbols one helper sends for one failed node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairPacket {
    /// Helper node index h.
    pub helper: usize,
    /// Failed node index f.
    pub failed: usize,
    /// Helper count this repair was sized for.
    pub d: usize,
    /// r_1(h,f), ..., r_beta(h,f).
    pub symbols: Vec<Symbol>,
    /// Which stripe these symbols repair.
    pub stripe_index: usize,
}

/// Per-repair precomputed matrices: for each window i, the coefficient
/// matrix Omega(i), and the top/bottom split Theta(i) / Xi(i) of its
/// inverse. Depends only on (helpers, d), so one instance serves every
/// stripe of a multi-stripe repair.
#[derive(Debug)]
pub struct RepairWindow {
    pub d: usize,
    /// m = d/mu - 1: block columns per window.
    pub m: usize,
    pub beta: usize,
    /// Helper indices, ascending.
    pub helpers: Vec<usize>,
    /// Omega(i): d-by-d, rows are the consecutive powers
    /// e^( (i-1)m*mu + 1 ) .. e^( i*m*mu + mu ) of each helper point.
    pub omega: Vec<Matrix>,
    /// Top (d - mu) rows of Omega(i)^-1.
    pub theta: Vec<Matrix>,
    /// Bottom mu rows of Omega(i)^-1.
    pub xi: Vec<Matrix>,
}

fn check_d(params: &CodeParams, d: usize) -> Result<usize> {
    if !params.is_valid_d(d) {
        return Err(Error::Params(format!(
            "d = {d} is not in the designed helper set {:?}",
            params.helper_counts()
        )));
    }
    Ok(d / params.mu() - 1)
}

/// Helper-side symbol generation. Stateless per (share, failed, d): a helper
/// needs no knowledge of which other nodes participate.
pub fn make_repair_symbols(
    params: &CodeParams,
    share: &NodeShare,
    failed: usize,
    d: usize,
) -> Result<RepairPacket> {
    let m = check_d(params, d)?;
    if failed == share.node_index {
        return Err(Error::Input(format!(
            "node {failed} cannot help repair itself"
        )));
    }
    params.point(failed)?;
    params.point(share.node_index)?;
    if share.symbols.len() != params.alpha() {
        return Err(Error::Input(format!(
            "share has {} symbols, expected alpha = {}",
            share.symbols.len(),
            params.alpha()
        )));
    }
    let seg = m * params.mu();
    let beta = params.alpha() / seg;
    debug_assert_eq!(beta, params.beta(d)?);
    let psi_f = psi_row(params, failed)?;
    let symbols = (0..beta)
        .map(|i| {
            dot(
                params.field(),
                &share.symbols[i * seg..(i + 1) * seg],
                &psi_f[i * seg..(i + 1) * seg],
            )
        })
        .collect();
    Ok(RepairPacket {
        helper: share.node_index,
        failed,
        d,
        symbols,
        stripe_index: share.stripe_index,
    })
}

/// Build the window matrices for a helper set. The rows of Omega(i) are
/// consecutive powers of distinct nonzero points, so each Omega(i) is a
/// square generalized Vandermonde matrix and invertible; a singular one
/// here means the parameters were corrupted.
pub fn window_matrices(
    params: &CodeParams,
    helpers: &[usize],
    failed: usize,
    d: usize,
) -> Result<RepairWindow> {
    let m = check_d(params, d)?;
    if helpers.len() != d {
        return Err(Error::Input(format!(
            "need exactly d = {d} helpers, got {}",
            helpers.len()
        )));
    }
    params.point(failed)?;
    let mut helpers = helpers.to_vec();
    helpers.sort_unstable();
    for (i, &h) in helpers.iter().enumerate() {
        params.point(h)?;
        if h == failed {
            return Err(Error::Input(format!(
                "failed node {failed} cannot be a helper"
            )));
        }
        if helpers[..i].contains(&h) {
            return Err(Error::Input(format!("duplicate helper {h}")));
        }
    }
    let f = params.field();
    let mu = params.mu();
    let beta = params.beta(d)?;
    let points: Vec<Symbol> = helpers
        .iter()
        .map(|&h| params.point(h))
        .collect::<Result<_>>()?;
    let mut omega = Vec::with_capacity(beta);
    let mut theta = Vec::with_capacity(beta);
    let mut xi = Vec::with_capacity(beta);
    for i in 1..=beta {
        let c = ((i - 1) * m * mu) as u64;
        let om = gv_matrix(f, &points, c, d)?;
        let om_inv = invert(f, &om).map_err(|e| match e {
            Error::Singular { rank, dim } => Error::Verification(format!(
                "repair window {i} is singular (rank {rank} of {dim}); evaluation points are corrupt"
            )),
            other => other,
        })?;
        let mut top = Matrix::zeros(d - mu, d);
        let mut bottom = Matrix::zeros(mu, d);
        for r in 0..d - mu {
            for c in 0..d {
                top.set(r, c, om_inv.get(r, c));
            }
        }
        for r in 0..mu {
            for c in 0..d {
                bottom.set(r, c, om_inv.get(d - mu + r, c));
            }
        }
        omega.push(om);
        theta.push(top);
        xi.push(bottom);
    }
    Ok(RepairWindow {
        d,
        m,
        beta,
        helpers,
        omega,
        theta,
        xi,
    })
}

/// Regenerate the content of the failed node from d repair packets.
pub fn repair_decode(
    params: &CodeParams,
    failed: usize,
    packets: &[RepairPacket],
) -> Result<NodeShare> {
    let window = windows_for_packets(params, failed, packets)?;
    repair_decode_with(params, &window, failed, packets)
}

/// Validate a packet set and build its window matrices.
pub fn windows_for_packets(
    params: &CodeParams,
    failed: usize,
    packets: &[RepairPacket],
) -> Result<RepairWindow> {
    let Some(first) = packets.first() else {
        return Err(Error::Input("no repair packets given".into()));
    };
    let d = first.d;
    for p in packets {
        if p.d != d {
            return Err(Error::Input(format!(
                "mixed helper counts in packets: {} and {}",
                d, p.d
            )));
        }
        if p.failed != failed {
            return Err(Error::Input(format!(
                "packet from helper {} targets node {}, not {failed}",
                p.helper, p.failed
            )));
        }
    }
    let helpers: Vec<usize> = packets.iter().map(|p| p.helper).collect();
    window_matrices(params, &helpers, failed, d)
}

/// Like [`repair_decode`] but with the window matrices precomputed, for
/// repairs that span many stripes with the same helper set.
pub fn repair_decode_with(
    params: &CodeParams,
    window: &RepairWindow,
    failed: usize,
    packets: &[RepairPacket],
) -> Result<NodeShare> {
    let f = params.field();
    let mu = params.mu();
    let d = window.d;
    let m = window.m;
    let beta = window.beta;
    let seg = m * mu;

    // Upsilon: one row per helper (ascending), one column per step.
    let mut by_helper: Vec<&RepairPacket> = packets.iter().collect();
    by_helper.sort_by_key(|p| p.helper);
    let sorted: Vec<usize> = by_helper.iter().map(|p| p.helper).collect();
    if sorted != window.helpers {
        return Err(Error::Input(
            "packets do not match the window's helper set".into(),
        ));
    }
    for p in &by_helper {
        if p.symbols.len() != beta {
            return Err(Error::Input(format!(
                "packet from helper {} has {} symbols, expected beta = {beta}",
                p.helper,
                p.symbols.len()
            )));
        }
        if p.stripe_index != by_helper[0].stripe_index {
            return Err(Error::Input(format!(
                "packets mix stripes {} and {}",
                by_helper[0].stripe_index, p.stripe_index
            )));
        }
    }

    let e_f = params.point(failed)?;
    let e_f_mu = f.pow(e_f, mu as u64);
    let e_f_mu_inv = f.inv(e_f_mu)?;
    let helper_points: Vec<Symbol> = window
        .helpers
        .iter()
        .map(|&h| params.point(h))
        .collect::<Result<_>>()?;

    let mut symbols = Vec::with_capacity(params.alpha());
    // 1 x mu row e_f^{i m mu} phi_f S_{2im} carried from step to step.
    let mut prev_s_term: Option<Vec<Symbol>> = None;

    for i in 1..=beta {
        let mut upsilon = Matrix::zeros(d, 1);
        for (r, p) in by_helper.iter().enumerate() {
            upsilon.set(r, 0, p.symbols[i - 1]);
        }

        if i >= 2 {
            // Remove the coupling block's contribution: subtract
            // [e_l^{(i-1)m*mu - mu} phi_l] * (prev term transposed).
            let prev = prev_s_term.as_ref().unwrap();
            let c = ((i - 1) * m * mu - mu) as u64;
            let head = gv_matrix(f, &helper_points, c, mu)?;
            let correction = head.mul(&Matrix::from_col(prev), f)?;
            upsilon = upsilon.sub(&correction, f)?;
        }

        // psi_f(i) M_i from the top of the inverse, transposed (M_i is
        // symmetric).
        let t = window.theta[i - 1].mul(&upsilon, f)?;
        let mut segment: Vec<Symbol> = (0..seg).map(|r| t.get(r, 0)).collect();

        // e_f^{i m mu} phi_f S_{2im} from the bottom, scaled by e_f^mu.
        let x = window.xi[i - 1].mul(&upsilon, f)?;
        let s_term: Vec<Symbol> = (0..mu).map(|r| f.mul(e_f_mu, x.get(r, 0))).collect();

        // Tail of the segment picks up the S_{2im} term.
        for (c, &v) in s_term.iter().enumerate() {
            let idx = seg - mu + c;
            segment[idx] = f.add(segment[idx], v);
        }
        // Head picks up the coupling block, which is the previous step's
        // term rescaled by e_f^-mu.
        if i >= 2 {
            let prev = prev_s_term.as_ref().unwrap();
            for (c, &v) in prev.iter().enumerate() {
                segment[c] = f.add(segment[c], f.mul(e_f_mu_inv, v));
            }
        }

        symbols.extend_from_slice(&segment);
        prev_s_term = Some(s_term);
    }

    Ok(NodeShare {
        node_index: failed,
        point: e_f,
        symbols,
        stripe_index: by_helper.first().map_or(0, |p| p.stripe_index),
    })
}
