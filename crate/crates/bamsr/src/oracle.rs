//! Brute-force reference implementations.
//!
//! These exist to validate the fast paths: reconstruction as one large
//! linear solve over all F source unknowns, repair as direct re-encoding
//! from a known data matrix, and the symmetric-pair solve as a generic
//! linear system. They are shipped (not test-gated) so `verify` can run the
//! equivalence check on deployed data; none of them share code with the
//! paths they check beyond the field and matrix primitives.

use crate::encoder::{psi_row, DataMatrix, NodeShare};
use crate::error::{Error, Result};
use crate::field::{Field, Symbol};
use crate::matrix::{solve_linear, Matrix};
use crate::params::CodeParams;

/// Index of the source symbol holding entry (a, b) of block S_t, under the
/// fixed pack order (t ascending, upper triangle row-major).
fn unknown_index(mu: usize, t: usize, a: usize, b: usize) -> usize {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let per_block = mu * (mu + 1) / 2;
    // Offset of (lo, hi) within the upper triangle.
    let tri = lo * mu - lo * (lo + 1) / 2 + hi;
    (t - 1) * per_block + tri
}

/// Reconstruct the stripe by solving the full linear system
/// `Psi_DC * M = X_DC` in the F distinct source symbols, symmetry folded
/// into the coefficients. Independent of the peeling decoder.
pub fn reconstruct(params: &CodeParams, shares: &[NodeShare]) -> Result<Vec<Symbol>> {
    if shares.len() != params.k() {
        return Err(Error::Input(format!(
            "need exactly k = {} shares, got {}",
            params.k(),
            shares.len()
        )));
    }
    let f = params.field();
    let mu = params.mu();
    let z = params.z();
    let n_unknowns = params.file_size();
    let mut a = Matrix::zeros(n_unknowns, n_unknowns);
    let mut rhs = Matrix::zeros(n_unknowns, 1);

    let mut shares: Vec<&NodeShare> = shares.iter().collect();
    shares.sort_by_key(|s| s.node_index);

    let mut eq = 0;
    for s in &shares {
        if s.symbols.len() != params.alpha() {
            return Err(Error::Input(format!(
                "share of node {} has wrong length",
                s.node_index
            )));
        }
        let psi = psi_row(params, s.node_index)?;
        for col in 0..z * mu {
            let bj = col / mu + 1;
            let b = col % mu;
            for (row, &coeff) in psi.iter().enumerate() {
                let bi = row / mu + 1;
                if bi.abs_diff(bj) > 1 {
                    continue;
                }
                let t = bi + bj - 1;
                let idx = unknown_index(mu, t, row % mu, b);
                let cur = a.get(eq, idx);
                a.set(eq, idx, f.add(cur, coeff));
            }
            rhs.set(eq, 0, s.symbols[col]);
            eq += 1;
        }
    }
    debug_assert_eq!(eq, n_unknowns);

    let solved = solve_linear(f, &a, &rhs).map_err(|e| match e {
        Error::Singular { rank, dim } => Error::Verification(format!(
            "reconstruction system is singular (rank {rank} of {dim}); parameters are inconsistent"
        )),
        other => other,
    })?;
    Ok((0..n_unknowns).map(|i| solved.get(i, 0)).collect())
}

/// Ground-truth repair: with the data matrix in hand, the failed node's
/// content is just `psi_f * M` on the dense matrix.
pub fn repair(params: &CodeParams, m: &DataMatrix, failed: usize) -> Result<NodeShare> {
    let psi = Matrix::from_row(&psi_row(params, failed)?);
    let x = psi.mul(&m.to_dense(), params.field())?;
    Ok(NodeShare {
        node_index: failed,
        point: params.point(failed)?,
        symbols: x.row(0).to_vec(),
        stripe_index: 0,
    })
}

/// Solve `X = Psi A + Delta Psi B` by brute force: one linear system over
/// the mu(mu+1) distinct entries of the two symmetric unknowns.
pub fn solve_sym_pair(
    f: &Field,
    x: &Matrix,
    psi: &Matrix,
    delta: &[Symbol],
) -> Result<(Matrix, Matrix)> {
    let mu = psi.cols();
    let k = mu + 1;
    if psi.rows() != k || x.rows() != k || x.cols() != mu || delta.len() != k {
        return Err(Error::Dimension(
            "inconsistent shapes for the pair solve".into(),
        ));
    }
    let per = mu * (mu + 1) / 2;
    let unknowns = 2 * per;
    let mut a = Matrix::zeros(unknowns, unknowns);
    let mut rhs = Matrix::zeros(unknowns, 1);
    // k*mu = mu(mu+1) equations exactly fill the square system.
    let mut eq = 0;
    for (r, &lambda) in delta.iter().enumerate() {
        for c in 0..mu {
            for t in 0..mu {
                let ia = unknown_index(mu, 1, t, c);
                let cur = a.get(eq, ia);
                a.set(eq, ia, f.add(cur, psi.get(r, t)));
                let ib = per + unknown_index(mu, 1, t, c);
                let cur = a.get(eq, ib);
                a.set(eq, ib, f.add(cur, f.mul(lambda, psi.get(r, t))));
            }
            rhs.set(eq, 0, x.get(r, c));
            eq += 1;
        }
    }
    debug_assert_eq!(eq, unknowns);
    let solved = solve_linear(f, &a, &rhs)?;
    let mut am = Matrix::zeros(mu, mu);
    let mut bm = Matrix::zeros(mu, mu);
    for lo in 0..mu {
        for hi in lo..mu {
            let va = solved.get(unknown_index(mu, 1, lo, hi), 0);
            am.set(lo, hi, va);
            am.set(hi, lo, va);
            let vb = solved.get(per + unknown_index(mu, 1, lo, hi), 0);
            bm.set(lo, hi, vb);
            bm.set(hi, lo, vb);
        }
    }
    Ok((am, bm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::{encode_all, pack_data};
    use crate::field::FieldSpec;
    use crate::repair::{make_repair_symbols, repair_decode, RepairPacket};
    use crate::testutil::{worked_code, worked_source, TestRng};

    #[test]
    fn oracle_reconstruct_worked_example() {
        let p = worked_code();
        let m = pack_data(&p, &worked_source()).unwrap();
        let shares = encode_all(&p, &m).unwrap();
        assert_eq!(reconstruct(&p, &shares[0..2]).unwrap(), worked_source());
        // Zero shares give the zero source.
        let zm = pack_data(&p, &[0, 0, 0, 0]).unwrap();
        let zshares = encode_all(&p, &zm).unwrap();
        assert_eq!(reconstruct(&p, &zshares[0..2]).unwrap(), vec![0; 4]);
    }

    #[test]
    fn oracle_repair_worked_example() {
        let p = worked_code();
        let m = pack_data(&p, &worked_source()).unwrap();
        let x3 = repair(&p, &m, 3).unwrap();
        assert_eq!(x3.symbols, vec![0, 1]);
        let zm = pack_data(&p, &[0, 0, 0, 0]).unwrap();
        assert!(repair(&p, &zm, 2).unwrap().symbols.iter().all(|&v| v == 0));
    }

    #[test]
    fn oracle_agrees_with_fast_reconstruction() {
        // 200 random instances across small (mu, delta) pairs.
        let mut rng = TestRng::new(2024);
        let cases = [
            (1usize, 1usize, 4usize),
            (1, 2, 4),
            (1, 3, 5),
            (2, 2, 7),
            (2, 3, 9),
            (3, 2, 13),
        ];
        let mut runs = 0;
        'outer: loop {
            for &(mu, delta, n) in &cases {
                let p = CodeParams::derive(mu, delta, n, &FieldSpec::gf256()).unwrap();
                let source = rng.symbols(p.file_size(), 256);
                let m = pack_data(&p, &source).unwrap();
                let shares = encode_all(&p, &m).unwrap();
                // Pick a random k-subset.
                let mut idx: Vec<usize> = (0..n).collect();
                for i in (1..idx.len()).rev() {
                    let j = rng.below((i + 1) as u64) as usize;
                    idx.swap(i, j);
                }
                let chosen: Vec<NodeShare> =
                    idx[0..p.k()].iter().map(|&i| shares[i].clone()).collect();
                let fast = crate::reconstruct::reconstruct(&p, &chosen).unwrap();
                let slow = reconstruct(&p, &chosen).unwrap();
                assert_eq!(fast, slow);
                assert_eq!(fast, source);
                runs += 1;
                if runs >= 200 {
                    break 'outer;
                }
            }
        }
    }

    #[test]
    fn oracle_agrees_with_fast_repair() {
        let p = worked_code();
        let m = pack_data(&p, &worked_source()).unwrap();
        let shares = encode_all(&p, &m).unwrap();
        for f in 1..=4usize {
            let truth = repair(&p, &m, f).unwrap();
            assert_eq!(truth.symbols, shares[f - 1].symbols);
            for &d in p.helper_counts() {
                let helpers: Vec<usize> = (1..=4).filter(|&j| j != f).take(d).collect();
                let packets: Vec<RepairPacket> = helpers
                    .iter()
                    .map(|&h| make_repair_symbols(&p, &shares[h - 1], f, d).unwrap())
                    .collect();
                assert_eq!(
                    repair_decode(&p, f, &packets).unwrap().symbols,
                    truth.symbols
                );
            }
        }
    }
}
