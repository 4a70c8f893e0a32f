//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Scan outputs are kept under `golden/` at the
//! workspace root for the plotting scripts.

// Negated comparisons are deliberate: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;
use std::time::Instant;

use qwitness::jsmap::{sector_generators, spin_matrices, two_mode_witness, FockLabel};
use qwitness::qstate::{random_density, random_pure, random_unitary};
use qwitness::su2::default_grid;
use qwitness::tomography::{build_reconstruction_map, dual_symbol, pair_average, reconstruct, tomogram_sample};
use qwitness::witness::{
    build_witness, build_witness_diag, classical_witness_value, closed_form_expectation, violation_bound,
    witness_expectation, witness_expectation_tomographic, ClassicalObservable, ClassicalState, DiagonalState,
    EPS_SCAN,
};
use qwitness::{ComplexMatrix, DensityMatrix, Spin};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_qwitness")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../golden")
}

fn scratch() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn qwitness")
}

fn run_ok(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = run(args);
    if out.status.success() {
        Ok(out.stdout)
    } else {
        Err(format!("`qwitness {}` failed: {}", args.join(" "), String::from_utf8_lossy(&out.stderr).trim()))
    }
}

fn simplex(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    ComplexMatrix::diagonal(&x).conjugate_by(&random_unitary(n, rng.gen()))
}

fn parse_csv(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

fn witness_bound() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_margin = f64::NEG_INFINITY;
    for n in 2..=16usize {
        let bound = violation_bound(n);
        let mut drawn = 0;
        while drawn < 1000 {
            let r = simplex(n, &mut rng);
            let state = DiagonalState::new(r.clone()).map_err(|e| e.to_string())?;
            if state.purity_gap() <= 1e-6 {
                continue;
            }
            drawn += 1;
            let pair = build_witness_diag(&state).map_err(|e| format!("N={n} r={r:?}: {e}"))?;
            let rho = DensityMatrix::from_diagonal(&r).map_err(|e| e.to_string())?;
            let value = witness_expectation(&rho, &pair).map_err(|e| e.to_string())?;
            if !(value < bound + 1e-12) {
                return Err(format!("counterexample N={n} value={value:e} bound={bound:e} r={r:?}"));
            }
            worst_margin = worst_margin.max(value - bound);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 30.0 {
        return Err(format!("runtime {secs:.1}s exceeds 30s"));
    }
    Ok(format!("15000 states, worst value - bound = {worst_margin:.3e}, {secs:.2}s"))
}

fn fig2() -> Verdict {
    let path = golden_dir().join("maxwitness.csv");
    run_ok(&["scan", "maxwitness", "--nmax", "30", "--seed", "0", "--out", path.to_str().unwrap()])?;
    let rows = parse_csv(&fs::read_to_string(&path).map_err(|e| e.to_string())?);
    if rows.len() != 29 {
        return Err(format!("expected 29 rows, got {}", rows.len()));
    }
    let n2 = rows[0][1];
    let expected = 0.375 - 7f64.sqrt() / 4.0;
    if (n2 - expected).abs() > 1e-12 {
        return Err(format!("N=2 value {n2:e}, expected {expected:e}"));
    }
    if let Some(w) = rows.windows(2).find(|w| w[1][1] <= w[0][1]) {
        return Err(format!("not increasing at N={}", w[1][0]));
    }
    let last = rows[28][1];
    if (last + 1.0 / 16.0).abs() >= 0.02 {
        return Err(format!("value(30) = {last:e} is not within 0.02 of -1/16"));
    }
    if let Some(r) = rows.iter().find(|r| r[1] >= r[3]) {
        return Err(format!("N={} value {:e} not below bound {:e}", r[0], r[1], r[3]));
    }
    Ok(format!("value(2)={n2:.15}, value(30)={last:.6}, monotone, below bound"))
}

fn fig1() -> Verdict {
    let path = golden_dir().join("qutrit.csv");
    run_ok(&["scan", "qutrit", "--step", "0.02", "--out", path.to_str().unwrap()])?;
    let rows = parse_csv(&fs::read_to_string(&path).map_err(|e| e.to_string())?);
    let limit = -3.0 / 32.0;
    let mut max_value = f64::NEG_INFINITY;
    for r in &rows {
        let r3 = 1.0 - r[0] - r[1];
        let s: f64 = [r[0], r[1], r3].iter().map(|x| (x - 1.0 / 3.0).powi(2)).sum();
        if s <= EPS_SCAN {
            return Err(format!("point ({}, {}) lies inside the excluded hole", r[0], r[1]));
        }
        if !(r[2] < limit) {
            return Err(format!("value {:e} at ({}, {}) is not below -3/32", r[2], r[0], r[1]));
        }
        max_value = max_value.max(r[2]);
    }
    let mut checked = 0;
    for (r1, r2, k) in [(1.0, 0.0, 0), (0.0, 1.0, 1), (0.0, 0.0, 2)] {
        let row = rows.iter().find(|r| r[0] == r1 && r[1] == r2).ok_or(format!("vertex ({r1}, {r2}) missing"))?;
        let exact = closed_form_expectation(&DiagonalState::basis(3, k).unwrap()).unwrap();
        if (row[2] - exact).abs() > 1e-10 {
            return Err(format!("vertex ({r1}, {r2}): {:e} vs {exact:e}", row[2]));
        }
        checked += 1;
    }
    Ok(format!("{} points, max {max_value:.6} < {limit}, {checked} vertices match", rows.len()))
}

/// Round trip plus every normalization check it triggers.
fn tomography_round_trip(normalizations: &mut Vec<String>) -> Verdict {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for twice in 1..=5u32 {
        let spin = Spin::from_twice(twice);
        let grid = Arc::new(default_grid(spin));
        let map = build_reconstruction_map(&grid).map_err(|e| e.to_string())?;
        for seed in 0..50u64 {
            let rho = if seed % 10 == 9 { random_pure(spin.dim(), seed) } else { random_density(spin.dim(), seed) };
            let t = tomogram_sample(&rho, &grid).map_err(|e| e.to_string())?;
            if let Err(e) = t.check_normalization() {
                normalizations.push(format!("j={spin} seed={seed}: {e}"));
            }
            let back = reconstruct(&t, &map).map_err(|e| format!("j={spin} seed={seed}: {e}"))?;
            let err = back.matrix().max_abs_diff(rho.matrix());
            if err > 1e-8 {
                return Err(format!("j={spin} seed={seed}: error {err:e}"));
            }
            worst = worst.max(err);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        return Err(format!("runtime {secs:.1}s exceeds 60s"));
    }
    Ok(format!("250 states, max entry error {worst:.3e}, {secs:.2}s"))
}

fn pairing(normalizations: &mut Vec<String>) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for twice in 1..=3u32 {
        let spin = Spin::from_twice(twice);
        let grid = Arc::new(default_grid(spin));
        let map = build_reconstruction_map(&grid).map_err(|e| e.to_string())?;
        let cases = if twice == 1 { 34 } else { 33 };
        for _ in 0..cases {
            let rho = random_density(spin.dim(), rng.gen());
            let a = random_hermitian(spin.dim(), &mut rng);
            let t = tomogram_sample(&rho, &grid).map_err(|e| e.to_string())?;
            if let Err(e) = t.check_normalization() {
                normalizations.push(format!("pairing j={spin}: {e}"));
            }
            let paired = pair_average(&t, &dual_symbol(&a, &map).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let direct = rho.expectation(&a).re;
            worst = worst.max((paired - direct).abs());
        }
    }
    if worst > 1e-8 {
        return Err(format!("max deviation {worst:e}"));
    }
    Ok(format!("100 cases, max |pair - Tr| = {worst:.3e}"))
}

fn cli_normalizations(normalizations: &mut Vec<String>) -> Result<usize, String> {
    let dir = scratch();
    let mut count = 0;
    for (j, seed) in [("1/2", "1"), ("1", "2"), ("3/2", "3"), ("2", "4"), ("5/2", "5")] {
        let state = dir.join(format!("norm-{seed}.json"));
        run_ok(&["state", "random", "--j", j, "--seed", seed, "--out", state.to_str().unwrap()])?;
        let out = run(&["tomogram", "sample", "--in", state.to_str().unwrap()]);
        if !out.status.success() {
            normalizations.push(format!("CLI j={j}: {}", String::from_utf8_lossy(&out.stderr).trim()));
        }
        count += 1;
    }
    Ok(count)
}

fn representation() -> Verdict {
    let mut worst = 0.0f64;
    for k in 0..100u64 {
        let n = 2 + (k % 5) as usize;
        let rho = random_density(n, 500 + k);
        let pair = if k % 2 == 0 {
            build_witness(&rho)
        } else {
            build_witness(&random_density(n, 9000 + k))
        }
        .map_err(|e| e.to_string())?;
        let direct = witness_expectation(&rho, &pair).map_err(|e| e.to_string())?;
        let tomo = witness_expectation_tomographic(&rho, &pair).map_err(|e| e.to_string())?;
        worst = worst.max((direct - tomo).abs());
    }
    if worst > 1e-10 {
        return Err(format!("max deviation {worst:e}"));
    }
    Ok(format!("100 cases N=2..6, max deviation {worst:.3e}"))
}

fn classical() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10_000);
    let mut lowest = f64::INFINITY;
    for k in 0..10_000 {
        let n = 1 + k % 8;
        let p = simplex(n, &mut rng);
        let a: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.1) { 0.0 } else { rng.gen_range(0.0..3.0) }).collect();
        let b: Vec<f64> =
            a.iter().map(|&x| if rng.gen_bool(0.1) { x } else { x + rng.gen_range(0.0..3.0) }).collect();
        let value = classical_witness_value(
            &ClassicalState::new(p.clone()).map_err(|e| e.to_string())?,
            &ClassicalObservable::new(a.clone()).map_err(|e| e.to_string())?,
            &ClassicalObservable::new(b.clone()).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        if value < -1e-12 {
            return Err(format!("violation {value:e} for p={p:?} A={a:?} B={b:?}"));
        }
        lowest = lowest.min(value);
    }
    Ok(format!("10000 triples, minimum {lowest:.3e}"))
}

fn jordan_schwinger() -> Verdict {
    let mut worst_comm = 0.0f64;
    let mut worst_lift = 0.0f64;
    for twice in 0..=6u32 {
        let spin = Spin::from_twice(twice);
        let (plus, minus, z) = sector_generators(spin);
        let comm = plus.matrix.commutator(&minus.matrix);
        worst_comm = worst_comm.max(comm.max_abs_diff(&z.matrix.scale(2.0)));
        let (qp, qm, qz) = spin_matrices(spin);
        worst_comm = worst_comm
            .max(plus.matrix.max_abs_diff(&qp))
            .max(minus.matrix.max_abs_diff(&qm))
            .max(z.matrix.max_abs_diff(&qz));
        for n_a in 0..=twice {
            let label = FockLabel::new(n_a, twice - n_a);
            if twice == 0 {
                continue;
            }
            let t = two_mode_witness(label).map_err(|e| e.to_string())?;
            worst_lift = worst_lift.max((t.expectation - t.qudit_expectation).abs());
        }
    }
    if worst_comm > 1e-12 {
        return Err(format!("commutator defect {worst_comm:e}"));
    }
    if worst_lift > 1e-12 {
        return Err(format!("lift deviation {worst_lift:e}"));
    }
    let out = run(&["js", "witness", "--na", "0", "--nb", "0"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    if out.status.code() != Some(3) || !stderr.starts_with("error[vacuum-undetectable]") {
        return Err(format!("vacuum gave exit {:?}: {}", out.status.code(), stderr.trim()));
    }
    Ok(format!("commutator defect {worst_comm:.1e}, lift deviation {worst_lift:.1e}, vacuum exits 3"))
}

fn determinism() -> Verdict {
    let dir = scratch();
    let state = dir.join("det-state.json");
    let tomo = dir.join("det-tomogram.csv");
    let s = state.to_str().unwrap();
    let t = tomo.to_str().unwrap();
    fs::write(&state, run_ok(&["state", "random", "--j", "3/2", "--seed", "42"])?).unwrap();
    fs::write(&tomo, run_ok(&["tomogram", "sample", "--in", s])?).unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["state", "random", "--j", "3/2", "--seed", "42"],
        vec!["state", "random", "--j", "5/2", "--seed", "9", "--pure"],
        vec!["state", "validate", "--in", s],
        vec!["tomogram", "sample", "--in", s],
        vec!["tomogram", "reconstruct", "--in", t],
        vec!["witness", "build", "--in", s],
        vec!["witness", "eval", "--in", s],
        vec!["scan", "qutrit", "--step", "0.05"],
        vec!["scan", "maxwitness", "--nmax", "12", "--seed", "5"],
        vec!["js", "witness", "--na", "2", "--nb", "1"],
    ];
    for args in &commands {
        let first = run_ok(args)?;
        let second = run_ok(args)?;
        if first != second {
            return Err(format!("`qwitness {}` differs between runs", args.join(" ")));
        }
    }
    Ok(format!("{} commands byte-identical across runs", commands.len()))
}

fn main() {
    fs::create_dir_all(golden_dir()).expect("create golden dir");
    let mut normalizations = Vec::new();
    let mut results: Vec<(&str, Verdict)> = vec![
        ("witness bound N=2..16", witness_bound()),
        ("max-witness scan", fig2()),
        ("qutrit simplex scan", fig1()),
        ("tomography round trip", tomography_round_trip(&mut normalizations)),
        ("pairing identity", pairing(&mut normalizations)),
    ];
    let cli_count = cli_normalizations(&mut normalizations);
    let norm = match cli_count {
        Err(e) => Err(e),
        Ok(_) if !normalizations.is_empty() => Err(normalizations.join("; ")),
        Ok(c) => Ok(format!("350 library tomograms and {c} CLI tomograms normalized")),
    };
    results.push(("tomogram normalizations", norm));
    results.push(("representation agreement", representation()));
    results.push(("classical model", classical()));
    results.push(("Jordan-Schwinger lift", jordan_schwinger()));
    results.push(("determinism", determinism()));

    let mut failed = 0;
    for (name, verdict) in &results {
        match verdict {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
