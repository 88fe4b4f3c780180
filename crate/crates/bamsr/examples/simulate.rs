//! Run the failure/repair simulator under different helper-availability
//! regimes and policies, and compare the repair traffic.
//!
//! Run with: `cargo run --example simulate`

use bamsr::field::FieldSpec;
use bamsr::params::CodeParams;
use bamsr::sim::{run_sim, summarize, RepairPolicy, SimConfig};

fn config(lo: usize, hi: usize, policy: RepairPolicy) -> SimConfig {
    SimConfig {
        params: CodeParams::derive(2, 3, 9, &FieldSpec::gf256()).unwrap(),
        events: 500,
        seed: 2718,
        avail_lo: lo,
        avail_hi: hi,
        policy,
    }
}

fn main() -> bamsr::Result<()> {
    println!("=== 500 failure events on a 9-node system, (mu, delta) = (2, 3) ===\n");
    println!(
        "{:<34} {:>9} {:>12} {:>11}",
        "scenario", "repaired", "total syms", "mean gamma"
    );

    let scenarios: Vec<(&str, SimConfig)> = vec![
        (
            "quiet cluster (8 reachable)",
            config(8, 8, RepairPolicy::MaxD),
        ),
        (
            "busy cluster (4-6 reachable)",
            config(4, 6, RepairPolicy::MaxD),
        ),
        ("mixed load (4-8), max-d", config(4, 8, RepairPolicy::MaxD)),
        ("mixed load (4-8), min-d", config(4, 8, RepairPolicy::MinD)),
        (
            "mixed load (4-8), fixed d=6",
            config(6, 8, RepairPolicy::FixedD(6)),
        ),
    ];

    for (name, cfg) in scenarios {
        let trace = run_sim(&cfg)?;
        let s = summarize(&trace);
        println!(
            "{:<34} {:>9} {:>12} {:>11.2}",
            name, s.repaired, s.total_bandwidth, s.mean_gamma
        );
        if s.unrepairable > 0 {
            println!("{:<34} ({} unrepairable events)", "", s.unrepairable);
        }
    }

    // Adapting d to availability beats any fixed choice whenever
    // availability fluctuates: rerun the mixed scenario and compare.
    let adaptive = summarize(&run_sim(&config(4, 8, RepairPolicy::MaxD))?);
    let fixed_small = summarize(&run_sim(&config(4, 8, RepairPolicy::MinD))?);
    println!(
        "\nadaptive max-d used {} symbols where always-d_1 used {} ({:.1}% saved)",
        adaptive.total_bandwidth,
        fixed_small.total_bandwidth,
        100.0 * (1.0 - adaptive.total_bandwidth as f64 / fixed_small.total_bandwidth as f64)
    );
    println!("\nsame seed, same config => byte-identical trace; availability model");
    println!("is a uniform stand-in, flagged as such in the summary JSON.");
    Ok(())
}
