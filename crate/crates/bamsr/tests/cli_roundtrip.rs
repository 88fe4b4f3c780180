//! End-to-end tests of the `bamsr` binary: subcommand surface, file
//! round-trips, and the exit-code contract (0 success, 2 usage, 3 parameter,
//! 4 integrity, 5 I/O).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bamsr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bamsr"))
        .args(args)
        .output()
        .unwrap()
}

fn assert_code(out: &Output, expect: i32, what: &str) {
    assert_eq!(
        out.status.code(),
        Some(expect),
        "{what}: expected exit {expect}\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn share_path(dir: &Path, j: usize) -> PathBuf {
    dir.join(format!("share_{j:03}.bamsr"))
}

fn encode_fixture(dir: &Path, len: usize) -> (PathBuf, PathBuf) {
    let input = dir.join("input.bin");
    let data: Vec<u8> = (0..len).map(|i| (i * 131 + 7) as u8).collect();
    fs::write(&input, &data).unwrap();
    let outdir = dir.join("shares");
    let out = bamsr(&[
        "encode",
        input.to_str().unwrap(),
        "--outdir",
        outdir.to_str().unwrap(),
        "--mu",
        "2",
        "--delta",
        "3",
        "--n",
        "9",
    ]);
    assert_code(&out, 0, "encode");
    (input, outdir)
}

#[test]
fn params_prints_the_table() {
    let out = bamsr(&["params", "--mu", "2", "--delta", "3", "--n", "9"]);
    assert_code(&out, 0, "params");
    let text = String::from_utf8(out.stdout).unwrap();
    for needle in ["alpha      : 12", "[4, 6, 8]", "5159780352"] {
        assert!(text.contains(needle), "missing {needle:?} in:\n{text}");
    }
}

#[test]
fn params_rejects_small_n_with_exit_3() {
    let out = bamsr(&["params", "--mu", "2", "--delta", "2", "--n", "5"]);
    assert_code(&out, 3, "params with n too small");
}

#[test]
fn usage_errors_exit_2() {
    let out = bamsr(&["params", "--mu", "2"]);
    assert_code(&out, 2, "missing required flags");
    let out = bamsr(&["frobnicate"]);
    assert_code(&out, 2, "unknown subcommand");
}

#[test]
fn missing_input_file_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let out = bamsr(&[
        "encode",
        dir.path().join("does-not-exist").to_str().unwrap(),
        "--outdir",
        dir.path().join("o").to_str().unwrap(),
        "--mu",
        "2",
        "--delta",
        "3",
        "--n",
        "9",
    ]);
    assert_code(&out, 5, "encode of a missing file");
}

#[test]
fn encode_reconstruct_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (input, outdir) = encode_fixture(dir.path(), 10_000);
    let recon = dir.path().join("recon.bin");
    let out = bamsr(&[
        "reconstruct",
        outdir.join("manifest.json").to_str().unwrap(),
        share_path(&outdir, 1).to_str().unwrap(),
        share_path(&outdir, 5).to_str().unwrap(),
        share_path(&outdir, 7).to_str().unwrap(),
        "--output",
        recon.to_str().unwrap(),
    ]);
    assert_code(&out, 0, "reconstruct");
    assert_eq!(fs::read(&recon).unwrap(), fs::read(&input).unwrap());
}

#[test]
fn helper_then_repair_restores_the_exact_share_file() {
    let dir = tempfile::tempdir().unwrap();
    let (_, outdir) = encode_fixture(dir.path(), 500);
    let failed = 4usize;
    let original = fs::read(share_path(&outdir, failed)).unwrap();
    fs::remove_file(share_path(&outdir, failed)).unwrap();

    let mut packets = Vec::new();
    for h in [1usize, 2, 3, 5] {
        let pkt = dir.path().join(format!("p{h}.bamsr"));
        let out = bamsr(&[
            "helper",
            share_path(&outdir, h).to_str().unwrap(),
            "--failed",
            &failed.to_string(),
            "--d",
            "4",
            "--output",
            pkt.to_str().unwrap(),
        ]);
        assert_code(&out, 0, "helper");
        packets.push(pkt);
    }
    let regen = share_path(&outdir, failed);
    let mut args: Vec<String> = vec![
        "repair".into(),
        "--failed".into(),
        failed.to_string(),
        "--output".into(),
        regen.to_str().unwrap().into(),
    ];
    args.extend(packets.iter().map(|p| p.to_str().unwrap().to_string()));
    let out = Command::new(env!("CARGO_BIN_EXE_bamsr"))
        .args(&args)
        .output()
        .unwrap();
    assert_code(&out, 0, "repair");
    assert_eq!(
        fs::read(&regen).unwrap(),
        original,
        "repair must be byte-identical"
    );
}

#[test]
fn repair_with_mixed_d_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let (_, outdir) = encode_fixture(dir.path(), 100);
    let p4 = dir.path().join("a.bamsr");
    let p6 = dir.path().join("b.bamsr");
    for (h, d, path) in [(1usize, "4", &p4), (2usize, "6", &p6)] {
        let out = bamsr(&[
            "helper",
            share_path(&outdir, h).to_str().unwrap(),
            "--failed",
            "3",
            "--d",
            d,
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_code(&out, 0, "helper");
    }
    let out = bamsr(&[
        "repair",
        "--failed",
        "3",
        "--output",
        dir.path().join("x.bamsr").to_str().unwrap(),
        p4.to_str().unwrap(),
        p6.to_str().unwrap(),
    ]);
    assert_code(&out, 3, "repair with mixed d");
}

#[test]
fn reconstruct_with_too_few_shares_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let (_, outdir) = encode_fixture(dir.path(), 100);
    let out = bamsr(&[
        "reconstruct",
        outdir.join("manifest.json").to_str().unwrap(),
        share_path(&outdir, 1).to_str().unwrap(),
        share_path(&outdir, 2).to_str().unwrap(),
        "--output",
        dir.path().join("r.bin").to_str().unwrap(),
    ]);
    assert_code(&out, 3, "reconstruct with k-1 shares");
}

#[test]
fn corrupted_share_fails_checksum_with_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let (_, outdir) = encode_fixture(dir.path(), 1000);
    let victim = share_path(&outdir, 2);
    let mut bytes = fs::read(&victim).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 1;
    fs::write(&victim, &bytes).unwrap();
    let out = bamsr(&[
        "reconstruct",
        outdir.join("manifest.json").to_str().unwrap(),
        share_path(&outdir, 1).to_str().unwrap(),
        victim.to_str().unwrap(),
        share_path(&outdir, 3).to_str().unwrap(),
        "--output",
        dir.path().join("r.bin").to_str().unwrap(),
    ]);
    assert_code(&out, 4, "reconstruct over a corrupted share");
    // verify flags it the same way.
    let out = bamsr(&[
        "verify",
        outdir.join("manifest.json").to_str().unwrap(),
        share_path(&outdir, 1).to_str().unwrap(),
        victim.to_str().unwrap(),
        share_path(&outdir, 3).to_str().unwrap(),
    ]);
    assert_code(&out, 4, "verify over a corrupted share");
}

#[test]
fn verify_passes_on_intact_shares() {
    let dir = tempfile::tempdir().unwrap();
    let (_, outdir) = encode_fixture(dir.path(), 1000);
    let mut args = vec![
        "verify".to_string(),
        outdir.join("manifest.json").to_str().unwrap().to_string(),
    ];
    args.extend((1..=9).map(|j| share_path(&outdir, j).to_str().unwrap().to_string()));
    let out = Command::new(env!("CARGO_BIN_EXE_bamsr"))
        .args(&args)
        .output()
        .unwrap();
    assert_code(&out, 0, "verify");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("matches the brute-force oracle"), "{text}");
}

#[test]
fn simulate_is_deterministic_at_the_file_level() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sim.toml");
    fs::write(
        &config,
        "mu = 2\ndelta = 3\nn = 9\nevents = 30\nseed = 99\navail_lo = 4\navail_hi = 8\npolicy = \"max-d\"\n",
    )
    .unwrap();
    let run = |tag: &str| -> (String, String) {
        let trace = dir.path().join(format!("t{tag}.csv"));
        let summary = dir.path().join(format!("s{tag}.json"));
        let out = bamsr(&[
            "simulate",
            config.to_str().unwrap(),
            "--trace",
            trace.to_str().unwrap(),
            "--summary",
            summary.to_str().unwrap(),
        ]);
        assert_code(&out, 0, "simulate");
        (
            fs::read_to_string(trace).unwrap(),
            fs::read_to_string(summary).unwrap(),
        )
    };
    let (t1, s1) = run("1");
    let (t2, s2) = run("2");
    assert_eq!(t1, t2);
    assert_eq!(s1, s2);
    assert!(t1.starts_with("event_id,failed,available,chosen_d,beta,gamma,ok\n"));
    let parsed: serde_json::Value = serde_json::from_str(&s1).unwrap();
    assert_eq!(parsed["events"], 30);
    assert_eq!(parsed["unrepairable"], 0);
}

#[test]
fn simulate_rejects_bad_config_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sim.toml");
    fs::write(
        &config,
        "mu = 2\ndelta = 3\nn = 9\nevents = 5\nseed = 1\navail_lo = 1\navail_hi = 8\npolicy = \"max-d\"\n",
    )
    .unwrap();
    let out = bamsr(&["simulate", config.to_str().unwrap()]);
    assert_code(&out, 3, "simulate with availability below k");
}
