//! A complete walkthrough over GF(7), small enough to check every number by
//! hand: mu = 1, delta = 2, four nodes at points 1..4, source (1, 2, 3, 4).
//!
//! Run with: `cargo run --example worked_small_field`

use bamsr::encoder::{encode_all, pack_data, psi_row};
use bamsr::field::FieldSpec;
use bamsr::params::CodeParams;
use bamsr::reconstruct::reconstruct;
use bamsr::repair::{make_repair_symbols, repair_decode, window_matrices};

fn main() -> bamsr::Result<()> {
    let params = CodeParams::with_points(1, 2, &FieldSpec::prime(7), &[1, 2, 3, 4])?;
    println!(
        "GF(7), mu = 1, delta = 2  =>  z = {}, alpha = {}, k = {}, F = {}, D = {:?}\n",
        params.z(),
        params.alpha(),
        params.k(),
        params.file_size(),
        params.helper_counts()
    );

    let source = vec![1u16, 2, 3, 4];
    let m = pack_data(&params, &source)?;
    println!("source (1,2,3,4) fills the blocks S_1..S_4; the data matrix is");
    let dense = m.to_dense();
    for r in 0..dense.rows() {
        println!("  {:?}", dense.row(r));
    }

    println!("\ncoefficient rows are consecutive powers of each point:");
    for j in 1..=4 {
        println!("  psi_{j} = {:?}", psi_row(&params, j)?);
    }

    let shares = encode_all(&params, &m)?;
    println!("\nshares x_j = psi_j * M:");
    for s in &shares {
        println!("  x_{} = {:?}", s.node_index, s.symbols);
    }

    // --- Repair node 3 with d = 2 helpers ---
    println!("\nrepair of node 3 from helpers (1, 2) with d = 2:");
    let packets: Vec<_> = [1usize, 2]
        .iter()
        .map(|&h| make_repair_symbols(&params, &shares[h - 1], 3, 2))
        .collect::<Result<_, _>>()?;
    for p in &packets {
        println!("  helper {} sends {:?}", p.helper, p.symbols);
    }
    let w = window_matrices(&params, &[1, 2], 3, 2)?;
    println!(
        "  first window matrix {:?} with inverse split into",
        w.omega[0].data()
    );
    println!(
        "  theta = {:?}, xi = {:?}",
        w.theta[0].data(),
        w.xi[0].data()
    );
    let repaired = repair_decode(&params, 3, &packets)?;
    println!("  regenerated x_3 = {:?}", repaired.symbols);
    assert_eq!(repaired.symbols, shares[2].symbols);

    // --- Same failure, now with all three survivors (d = 3) ---
    println!("\nrepair of node 3 from helpers (1, 2, 4) with d = 3:");
    let packets: Vec<_> = [1usize, 2, 4]
        .iter()
        .map(|&h| make_repair_symbols(&params, &shares[h - 1], 3, 3))
        .collect::<Result<_, _>>()?;
    for p in &packets {
        println!("  helper {} sends {:?}", p.helper, p.symbols);
    }
    let repaired = repair_decode(&params, 3, &packets)?;
    println!(
        "  regenerated x_3 = {:?} (one symbol per helper this time)",
        repaired.symbols
    );
    assert_eq!(repaired.symbols, shares[2].symbols);

    // --- Reconstruction from k = 2 shares ---
    let recovered = reconstruct(&params, &shares[0..2])?;
    println!("\nreconstruction from nodes (1, 2): {recovered:?}");
    assert_eq!(recovered, source);
    println!("matches the source exactly");
    Ok(())
}
