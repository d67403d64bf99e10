//! Acceptance gate: runs every criterion, prints one PASS/FAIL line each, and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsconcat::bounds::{
    delta_curve, h4, h4_inv, min_total_weight, rate_choice, rate_grid, volume_bound_check, volume_bound_grid,
    weight_bound, CurveName, CurveParams, WeightBoundQuery,
};
use rsconcat::concat::{build_code, stabilizer_rank_formula};
use rsconcat::distance::{exact_distance, validate_witness, verify_counting_claims, CountingMode};
use rsconcat::symplectic::SymplecticVector;
use rsconcat_cli::codefile::CodeFile;
use rsconcat_cli::verify::verify_code_file;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn valid_k(m: usize) -> std::ops::RangeInclusive<usize> {
    0..=((1usize << (2 * m)) - 2) / 2
}

fn duality() -> Outcome {
    let start = Instant::now();
    let cases = [(1, 0), (1, 1), (2, 0), (2, 1), (2, 3), (2, 7)];
    for (m, k) in cases {
        let code = build_code(m, k).map_err(|e| format!("m={m} K={k}: {e}"))?;
        let rep = code.verify_symplectic_duality();
        ensure(rep.all_orthogonal(), || format!("m={m} K={k}: {} nonzero products", rep.nonorthogonal_count))?;
        let big_n = (1 << (2 * m)) - 1;
        ensure(code.rank_s() == 2 * big_n * (m + 1) + 4 * m * k, || format!("m={m} K={k}: rank_S {}", code.rank_s()))?;
        ensure(rep.dims_complementary(), || format!("m={m} K={k}: ranks {} + {}", rep.rank_s, rep.rank_n))?;
        ensure(rep.contained(), || format!("m={m} K={k}: {} rows outside N_L", rep.not_contained.len()))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{} instances, {:.2}s", cases.len(), elapsed.as_secs_f64()))
}

fn parameters() -> Outcome {
    let mut count = 0;
    for m in 1..=3usize {
        let big_n = (1 << (2 * m)) - 1;
        for k in valid_k(m) {
            let code = build_code(m, k).map_err(|e| format!("m={m} K={k}: {e}"))?;
            let (n, kk) = (2 * big_n * (2 * m + 1), 2 * m * (big_n - 2 * k));
            ensure(code.n == n && code.k == kk, || format!("m={m} K={k}: [[{}, {}]]", code.n, code.k))?;
            ensure(code.rank_n() - code.rank_s() == 2 * kk, || {
                format!("m={m} K={k}: rank_N - rank_S = {}", code.rank_n() - code.rank_s())
            })?;
            ensure(code.rank_s() == stabilizer_rank_formula(m, k), || format!("m={m} K={k}: rank_S"))?;
            count += 1;
        }
    }
    Ok(format!("{count} codes over m in 1..=3"))
}

/// Every Pauli of weight exactly `w` on `n` qubits.
fn paulis_of_weight(n: usize, w: usize) -> Vec<SymplecticVector> {
    fn rec(n: usize, start: usize, w: usize, cur: &mut SymplecticVector, out: &mut Vec<SymplecticVector>) {
        if w == 0 {
            out.push(cur.clone());
            return;
        }
        for p in start..n {
            for (x, z) in [(true, false), (false, true), (true, true)] {
                cur.set_x(p, x);
                cur.set_z(p, z);
                rec(n, p + 1, w - 1, cur, out);
                cur.set_x(p, false);
                cur.set_z(p, false);
            }
        }
    }
    let mut out = Vec::new();
    rec(n, 0, w, &mut SymplecticVector::zeros(n), &mut out);
    out
}

fn exact_distance_m1() -> Outcome {
    let code = build_code(1, 1).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let single = exact_distance(&code, 1).map_err(|e| e.to_string())?;
    let t1 = start.elapsed();
    let start = Instant::now();
    let eight = exact_distance(&code, 8).map_err(|e| e.to_string())?;
    let t8 = start.elapsed();
    ensure(t1 < Duration::from_secs(300), || format!("single-threaded took {t1:?}"))?;
    ensure(t8 < Duration::from_secs(60), || format!("8 partitions took {t8:?}"))?;
    ensure(single == eight, || format!("partition results differ: {single} vs {eight}"))?;
    let rank_n = code.rank_n();
    ensure(rank_n == 20, || format!("rank_N = {rank_n}"))?;
    ensure(single.enumerated == (1 << 20) - (1 << 16), || format!("enumerated {}", single.enumerated))?;
    ensure(single.d > code.big_k, || format!("d = {} < K + 1", single.d))?;
    ensure(validate_witness(&code, &single), || "witness failed validation".into())?;
    // independent oracle: no lighter Pauli lies in N_L \ S_L
    for w in 1..single.d {
        for p in paulis_of_weight(code.n, w) {
            let in_n = code.n_matrix().in_span(&p).map_err(|e| e.to_string())?;
            let in_s = code.s_matrix().in_span(&p).map_err(|e| e.to_string())?;
            ensure(!(in_n && !in_s), || format!("weight-{w} logical {p:?} missed"))?;
        }
    }
    Ok(format!(
        "d={} over 2^20 combinations, {:.2}s single / {:.2}s with 8 parts",
        single.d,
        t1.as_secs_f64(),
        t8.as_secs_f64()
    ))
}

fn counting() -> Outcome {
    let exhaustive = verify_counting_claims(&build_code(1, 1).map_err(|e| e.to_string())?, CountingMode::Exhaustive, 8)
        .map_err(|e| e.to_string())?;
    ensure(exhaustive.passed(), || format!("m=1 exhaustive: {exhaustive:?}"))?;
    ensure(exhaustive.block_bound == 2 && exhaustive.tuple_bound == 1 && exhaustive.multiplicity_bound == 2, || {
        "unexpected bounds at m=1".into()
    })?;
    let sampled = verify_counting_claims(
        &build_code(2, 3).map_err(|e| e.to_string())?,
        CountingMode::Sampled { trials: 100_000, seed: 0 },
        1,
    )
    .map_err(|e| e.to_string())?;
    ensure(sampled.passed(), || format!("m=2 sampled: {sampled:?}"))?;
    let violations =
        |r: &rsconcat::distance::CountingReport| r.block_violations + r.tuple_violations + r.multiplicity_violations;
    ensure(violations(&exhaustive) + violations(&sampled) == 0, || "violations recorded".into())?;
    Ok(format!(
        "m=1: {} words, min blocks {}, min tuples {}, max mult {}; m=2: {} samples, min blocks {}, max mult {}",
        exhaustive.examined,
        exhaustive.min_nonzero_blocks,
        exhaustive.min_distinct_tuples,
        exhaustive.max_multiplicity,
        sampled.examined,
        sampled.min_nonzero_blocks,
        sampled.max_multiplicity
    ))
}

fn injectivity() -> Outcome {
    let mut blocks = 0;
    for (m, bits) in [(1, 8), (2, 14)] {
        let code = build_code(m, 0).map_err(|e| e.to_string())?;
        let e = code.expander();
        ensure(e.block_input_bits() == bits, || format!("m={m}: {} input bits", e.block_input_bits()))?;
        for i in 0..e.blocks() {
            let ok = e.check_block_injectivity(i).map_err(|e| e.to_string())?;
            ensure(ok, || format!("m={m} block {i} has a collision"))?;
            blocks += 1;
        }
    }
    Ok(format!("{blocks} blocks, zero collisions"))
}

fn volume_bound() -> Outcome {
    let mut cases = 0;
    for n in 1..=16 {
        for lambda in volume_bound_grid(n) {
            let c = volume_bound_check::<f64>(n, lambda).map_err(|e| e.to_string())?;
            ensure(c.holds, || format!("n={n} lambda={lambda}: {} > {}", c.lhs, c.rhs))?;
            ensure(c.intermediate_holds, || format!("n={n} lambda={lambda}: intermediate {}", c.intermediate))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (n, lambda) pairs"))
}

fn weight_bound_core() -> Outcome {
    let mut cases = 0;
    for l in 1..=4u32 {
        for m in 1..4u64.pow(l) {
            let oracle = min_total_weight(l, m).map_err(|e| e.to_string())? as f64;
            for step in 1..=14 {
                let lambda = 0.05 * f64::from(step);
                let q = WeightBoundQuery::new(l, m, 0.5, lambda).map_err(|e| e.to_string())?;
                let bound = weight_bound(&q).map_err(|e| e.to_string())?;
                ensure(oracle + 1e-9 >= bound, || format!("L={l} M={m} lambda={lambda}: {oracle} < {bound}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (L, M, lambda) triples"))
}

/// Root of `H_4(x) = y` on `[0, 3/4]` by Newton's method, written
/// independently of the library.
fn newton_h4_inv(y: f64) -> f64 {
    let h = |x: f64| (-x * (x / 3.0).ln() - (1.0 - x) * (1.0 - x).ln()) / 4f64.ln();
    let dh = |x: f64| ((3.0 * (1.0 - x)).ln() - x.ln()) / 4f64.ln();
    let mut x = 0.1;
    for _ in 0..100 {
        x -= (h(x) - y) / dh(x);
    }
    x
}

fn entropy() -> Outcome {
    let one = h4(0.75f64).map_err(|e| e.to_string())?;
    ensure((one - 1.0).abs() <= 1e-12, || format!("h4(3/4) = {one}"))?;
    let x = h4_inv(0.25f64).map_err(|e| e.to_string())?;
    let back = h4(x).map_err(|e| e.to_string())?;
    ensure((back - 0.25).abs() <= 1e-9, || format!("h4(h4_inv(1/4)) = {back}"))?;
    let oracle = newton_h4_inv(0.25) / 4.0;
    let curve = delta_curve(CurveName::Ours, CurveParams::default(), &rate_grid(0.0f64, 0.5, 1001))
        .map_err(|e| e.to_string())?;
    let (r0, d0) = curve.points[0];
    let (r1, d1) = *curve.points.last().expect("nonempty");
    ensure(r0 == 0.0 && (d0 - oracle).abs() <= 1e-9, || format!("start ({r0}, {d0}) vs oracle {oracle}"))?;
    ensure(r1 == 0.5 && d1.abs() <= 1e-15, || format!("end ({r1}, {d1})"))?;
    ensure(curve.points.windows(2).all(|w| w[1].1 < w[0].1), || "curve not strictly decreasing".into())?;
    Ok(format!("h4_inv(1/4) = {x:.12}, curve from ({r0}, {d0:.10}) to ({r1}, {d1})"))
}

fn rate_guarantee() -> Outcome {
    let p = rate_choice(2, 0.2f64).map_err(|e| e.to_string())?;
    ensure(p.big_k == 3 && p.rate_exact == Ratio::new(6, 25), || {
        format!("m=2 R=0.2: K={} R_m={}", p.big_k, p.rate_exact)
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 10_000 {
        let m: u32 = rng.gen_range(1..=6);
        let r: f64 = rng.gen_range(0.0..0.5);
        if r <= 0.0 || f64::from(2 * m + 1) * r / f64::from(m) >= 1.0 {
            continue;
        }
        let p = rate_choice(m, r).map_err(|e| e.to_string())?;
        ensure(p.meets_target && p.rate >= r, || format!("m={m} R={r}: R_m={}", p.rate))?;
        checked += 1;
    }
    Ok(format!("m=2 R=0.2 -> K=3 R_m=6/25; {checked} random pairs"))
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["rsconcat"];
    full.extend_from_slice(args);
    let code = rsconcat_cli::run(full, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned() + &String::from_utf8_lossy(&err))
}

fn flip_bit(text: &str, line_index: usize, column: usize) -> String {
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let line = &mut lines[line_index];
    let flipped = if &line[column..=column] == "0" { "1" } else { "0" };
    line.replace_range(column..=column, flipped);
    lines.join("\n") + "\n"
}

fn round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let instances = [(1, 0), (1, 1), (2, 0), (2, 1), (2, 3), (2, 7), (3, 5)];
    let mut mutations = 0;
    for (m, k) in instances {
        let path = dir.path().join(format!("m{m}_k{k}.code"));
        let p = path.to_str().expect("utf-8 temp path");
        let (code, msg) = cli(&["construct", "--m", &m.to_string(), "--K", &k.to_string(), "--out", p]);
        ensure(code == 0, || format!("construct m={m} K={k}: {msg}"))?;
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let loaded = CodeFile::load(&text).map_err(|e| e.to_string())?;
        ensure(loaded.store() == text, || format!("m={m} K={k}: store after load differs"))?;
        let (code, msg) = cli(&["verify", p]);
        ensure(code == 0, || format!("verify m={m} K={k}: {msg}"))?;

        // every bit of every row at m=1; a seeded sample elsewhere
        let header_lines = 12;
        let rows: Vec<usize> =
            (header_lines..text.lines().count()).filter(|&i| i != header_lines + loaded.header.rank_s).collect();
        let width = 2 * loaded.header.n + 1;
        let targets: Vec<(usize, usize)> = if m == 1 {
            rows.iter().flat_map(|&r| (0..width).filter(|&c| c != loaded.header.n).map(move |c| (r, c))).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64((m * 100 + k) as u64);
            (0..40)
                .map(|_| {
                    let r = rows[rng.gen_range(0..rows.len())];
                    let mut c = rng.gen_range(0..width - 1);
                    if c >= loaded.header.n {
                        c += 1;
                    }
                    (r, c)
                })
                .collect()
        };
        for (i, &(r, c)) in targets.iter().enumerate() {
            let mutated = flip_bit(&text, r, c);
            let file = CodeFile::load(&mutated).map_err(|e| format!("mutation parse: {e}"))?;
            ensure(!verify_code_file(&file).passed, || format!("m={m} K={k}: flip at line {} col {c} passed", r + 1))?;
            if i % 97 == 0 {
                let mpath = dir.path().join("mutated.code");
                std::fs::write(&mpath, &mutated).map_err(|e| e.to_string())?;
                let (code, _) = cli(&["verify", mpath.to_str().expect("utf-8")]);
                ensure(code == 1, || format!("cli verify on mutated file exited {code}"))?;
            }
            mutations += 1;
        }
    }
    Ok(format!("{} instances round-trip and verify; {mutations} single-bit mutations all rejected", instances.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("symplectic duality", duality),
        ("code parameters", parameters),
        ("exact distance at m=1", exact_distance_m1),
        ("block counting", counting),
        ("block injectivity", injectivity),
        ("volume bound", volume_bound),
        ("total-weight bound", weight_bound_core),
        ("entropy numerics", entropy),
        ("rate guarantee", rate_guarantee),
        ("file round trip", round_trip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}) [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail}) [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
