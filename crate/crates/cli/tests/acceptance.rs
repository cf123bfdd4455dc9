//! Acceptance suite. Each criterion prints one PASS/FAIL line; any failure
//! makes the target exit non-zero.

use std::collections::BTreeSet;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use iqucs_cli::{resolve_targets, run_experiment, Mode, RunConfig, TargetSpec, REPORT_FILE};
use iqucs_core::encoding::ceil_log2;
use iqucs_core::{
    accuracy, cqc, encode_pair, gen_indexes, gsearch, invocations_for, optimal_num_invocations,
    reduction, round_tenth, search, AmplitudeState, ComparisonReport, CqcTrace, FilterConfigF64,
    GroverRun, PairRecord, SearchOutcomeF64, Termination, Wordlist,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {{
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    }};
}

fn closed_form(n_eff: usize, m: usize, k: usize) -> f64 {
    let theta = (m as f64 / n_eff as f64).sqrt().asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

fn records(n: usize) -> Vec<PairRecord> {
    Wordlist::builtin().records(n).unwrap()
}

fn within(elapsed: Duration, limit_secs: u64) -> Check {
    if elapsed > Duration::from_secs(limit_secs) {
        Err(format!("took {elapsed:.2?}, limit {limit_secs}s"))
    } else {
        Ok(String::new())
    }
}

fn check_trace_laws(outcome: &SearchOutcomeF64) -> Check {
    let mut previous = usize::MAX;
    for rec in &outcome.trace {
        let width = 2 * ceil_log2(rec.set_size).max(1);
        ensure!(rec.total_qubits == width, "iteration {}: {} qubits, expected {width}", rec.iteration, rec.total_qubits);
        ensure!(
            rec.invocations == if rec.iteration % 2 == 1 { 1 } else { 2 },
            "iteration {}: {} invocations",
            rec.iteration,
            rec.invocations
        );
        ensure!(rec.set_size <= previous, "iteration {} grew the working set", rec.iteration);
        previous = rec.set_size;
    }
    Ok(String::new())
}

fn cqc_arithmetic() -> Check {
    let c = |entries: &[(usize, usize)]| cqc(&CqcTrace::new(entries.iter().copied())).unwrap();
    let red = |b, i| round_tenth(reduction(b, i).unwrap());
    ensure!(c(&[(8, 7)]) == 56, "dataset-10 baseline");
    ensure!(c(&[(8, 1), (4, 2), (4, 1)]) == 20, "dataset-10 iterative");
    ensure!(red(56, 20) == 64.3, "reduction 56/20 = {}", red(56, 20));
    ensure!(c(&[(14, 22)]) == 308, "20-target baseline");
    ensure!(red(308, 104) == 66.2, "reduction 308/104 = {}", red(308, 104));
    ensure!(c(&[(14, 15)]) == 210, "40-target baseline");
    ensure!(c(&[(14, 1), (14, 2), (12, 1), (12, 2)]) == 78, "40-target iterative");
    ensure!(red(210, 78) == 62.9, "reduction 210/78 = {}", red(210, 78));
    Ok("56, 20, 308, 210, 78; 64.3%, 66.2%, 62.9%".into())
}

fn optimal_counts() -> Check {
    let got = [(8, 3), (14, 20), (14, 40)].map(|(q, m)| optimal_num_invocations(q, m).unwrap());
    ensure!(got == [7, 22, 15], "got {got:?}");
    Ok("7, 22, 15".into())
}

fn closed_form_grid() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n_eff in 2..=64usize {
        // Spread the preparation subset over a 7-qubit register.
        let subset: Vec<usize> = (0..n_eff).map(|j| (j * 97 + 5) % 128).collect();
        for m in 1..=n_eff {
            let marked = subset[..m].to_vec();
            for k in 0..=10 {
                let probs = GroverRun::new(7, subset.iter().copied(), marked.iter().copied(), k)
                    .unwrap()
                    .run::<f64>()
                    .unwrap();
                let p: f64 = marked.iter().map(|c| probs[c]).sum();
                let err = (p - closed_form(n_eff, m, k)).abs();
                worst = worst.max(err);
                ensure!(err < 1e-9, "N={n_eff} M={m} k={k}: error {err:e}");
            }
        }
    }
    within(start.elapsed(), 10)?;
    Ok(format!("max error {worst:.1e} in {:.2?}", start.elapsed()))
}

fn dataset_ten() -> Check {
    let start = Instant::now();
    let recs = records(10);
    let config = FilterConfigF64::exact();
    let mut cqcs = BTreeSet::new();
    for seed in 0..30 {
        let targets = resolve_targets(&TargetSpec::Random { count: 3, seed }, 10).unwrap();
        let truth = targets.truth_indexes(&recs);
        let iq = search(&recs, &targets, &config).unwrap();
        let base = gsearch(&recs, &targets, &config).unwrap();
        let cmp = ComparisonReport::new(&iq, &base, &truth, 10).unwrap();
        ensure!(iq.converged(), "seed {seed}: not converged");
        ensure!(cmp.iqucs_accuracy == 1.0, "seed {seed}: iterative accuracy {}", cmp.iqucs_accuracy);
        ensure!(cmp.baseline_accuracy == 1.0, "seed {seed}: baseline accuracy {}", cmp.baseline_accuracy);
        ensure!(cmp.baseline_invocations == 7, "seed {seed}: baseline used {}", cmp.baseline_invocations);
        ensure!(cmp.iqucs_cqc <= 56, "seed {seed}: CQC {}", cmp.iqucs_cqc);
        ensure!(cmp.iqucs_cqc <= 20, "seed {seed}: CQC {} above 20", cmp.iqucs_cqc);
        ensure!(cmp.iqucs_invocations < 7, "seed {seed}: {} invocations", cmp.iqucs_invocations);
        check_trace_laws(&iq).map_err(|e| format!("seed {seed}: {e}"))?;
        cqcs.insert(cmp.iqucs_cqc);
    }
    within(start.elapsed(), 1)?;
    Ok(format!("30 target draws, iterative CQC {cqcs:?} vs 56, in {:.2?}", start.elapsed()))
}

fn dataset_hundred_forty() -> Check {
    let start = Instant::now();
    let recs = records(100);
    let config = FilterConfigF64::exact();
    let mut seen = Vec::new();
    for seed in 0..5 {
        let targets = resolve_targets(&TargetSpec::Random { count: 40, seed }, 100).unwrap();
        let truth = targets.truth_indexes(&recs);
        let iq = search(&recs, &targets, &config).unwrap();
        let base = gsearch(&recs, &targets, &config).unwrap();
        let cmp = ComparisonReport::new(&iq, &base, &truth, 100).unwrap();
        ensure!(iq.converged(), "seed {seed}: not converged");
        ensure!(cmp.iqucs_accuracy == 1.0, "seed {seed}: iterative accuracy {}", cmp.iqucs_accuracy);
        ensure!(cmp.baseline_accuracy == 1.0, "seed {seed}: baseline accuracy {}", cmp.baseline_accuracy);
        ensure!(cmp.baseline_cqc == 210, "seed {seed}: baseline CQC {}", cmp.baseline_cqc);
        ensure!(cmp.iqucs_cqc < 210, "seed {seed}: CQC {}", cmp.iqucs_cqc);
        check_trace_laws(&iq).map_err(|e| format!("seed {seed}: {e}"))?;
        seen.push(cmp.iqucs_cqc);
    }
    within(start.elapsed(), 30)?;
    Ok(format!("5 target draws, iterative CQC {seen:?} vs 210, in {:.2?}", start.elapsed()))
}

fn dataset_hundred_twenty_sampled() -> Check {
    let start = Instant::now();
    let recs = records(100);
    let (mut iq_acc, mut red, mut base_perfect) = (0.0, 0.0, 0);
    let seeds = 20u64;
    for seed in 0..seeds {
        let targets = resolve_targets(&TargetSpec::Random { count: 20, seed }, 100).unwrap();
        let truth = targets.truth_indexes(&recs);
        let config = FilterConfigF64::sampled(12_000, seed);
        let iq = search(&recs, &targets, &config).unwrap();
        let base = gsearch(&recs, &targets, &config).unwrap();
        let cmp = ComparisonReport::new(&iq, &base, &truth, 100).unwrap();
        iq_acc += cmp.iqucs_accuracy;
        red += cmp.reduction_pct;
        if cmp.baseline_accuracy == 1.0 {
            base_perfect += 1;
        }
    }
    let (iq_acc, red) = (iq_acc / seeds as f64, red / seeds as f64);
    ensure!(iq_acc >= 0.95, "mean iterative accuracy {iq_acc:.4}");
    ensure!(base_perfect >= 18, "baseline perfect in {base_perfect}/20");
    ensure!(red >= 50.0, "mean reduction {red:.1}%");
    within(start.elapsed(), 600)?;
    Ok(format!(
        "mean accuracy {iq_acc:.4}, baseline perfect {base_perfect}/20, mean reduction {red:.1}%, in {:.2?}",
        start.elapsed()
    ))
}

fn invariant_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    // Reflections: norm preserved, each one an involution.
    for _ in 0..200 {
        let q = rng.random_range(1..=7usize);
        let dim = 1 << q;
        let subset: BTreeSet<usize> = (0..rng.random_range(1..=dim)).map(|_| rng.random_range(0..dim)).collect();
        let marked: Vec<usize> = (0..rng.random_range(0..=dim)).map(|_| rng.random_range(0..dim)).collect();
        let mut state = AmplitudeState::<f64>::uniform_over(q, subset.iter().copied()).unwrap();
        for _ in 0..rng.random_range(0..6) {
            state.phase_oracle(&marked).unwrap();
            state.diffuse();
        }
        ensure!((state.norm_sqr() - 1.0).abs() < 1e-10, "norm {}", state.norm_sqr());
        let before = state.amplitudes().to_vec();
        state.phase_oracle(&marked).unwrap();
        state.phase_oracle(&marked).unwrap();
        state.diffuse();
        state.diffuse();
        for (a, b) in before.iter().zip(state.amplitudes()) {
            ensure!((a - b).norm() < 1e-10, "reflection is not an involution");
        }
    }

    // Encoding: codes decode to their mapped fields; filtered stays filtered.
    for _ in 0..100 {
        let n = rng.random_range(1..=60usize);
        let mut recs: Vec<PairRecord> = (0..n).map(|i| PairRecord::new(i, rng.random_range(0..200))).collect();
        let mut dead = BTreeSet::new();
        for iteration in 1..=4 {
            let inst = match gen_indexes(&mut recs, iteration) {
                Ok(inst) => inst,
                Err(_) => {
                    ensure!(recs.iter().all(|r| !r.is_alive()), "empty instance with live records");
                    break;
                }
            };
            let mut codes = BTreeSet::new();
            for rec in recs.iter().filter(|r| r.is_alive()) {
                let code = encode_pair(rec, inst.idx_qubits, inst.val_qubits).unwrap();
                ensure!(code >> inst.val_qubits == rec.current_index().unwrap(), "index field");
                ensure!((code & ((1 << inst.val_qubits) - 1)) as u64 == rec.current_value(), "value field");
                ensure!(inst.map_i[&rec.original_index()] == rec.current_index().unwrap(), "MapI");
                ensure!(inst.map_v[&rec.original_value()] == rec.current_value(), "MapV");
                codes.insert(code);
            }
            ensure!(codes.len() == inst.len(), "pair codes collide");
            for (o, rec) in recs.iter().enumerate() {
                ensure!(!(dead.contains(&o) && rec.is_alive()), "record {o} came back");
            }
            for (o, rec) in recs.iter_mut().enumerate() {
                if rng.random_bool(0.3) {
                    rec.filter_out();
                }
                if !rec.is_alive() {
                    dead.insert(o);
                }
            }
        }
    }

    // Searches terminate within the cap and report it honestly.
    for _ in 0..40 {
        let n = rng.random_range(1..=40usize);
        let recs: Vec<PairRecord> = (0..n).map(|i| PairRecord::new(i, i as u64)).collect();
        let m = rng.random_range(1..=n);
        let targets = resolve_targets(&TargetSpec::Random { count: m, seed: rng.random() }, n).unwrap();
        let cap = rng.random_range(1..=8usize);
        let config = FilterConfigF64 { max_iterations: cap, ..FilterConfigF64::sampled(rng.random_range(0..2000), rng.random()) };
        let out = search(&recs, &targets, &config).unwrap();
        ensure!(out.iterations_used() <= cap, "ran past the cap");
        match out.termination {
            Termination::Converged => {
                let t = &out.trace;
                ensure!(t.len() >= 2 && t[t.len() - 1].potential == t[t.len() - 2].potential, "converged without equal PS");
            }
            Termination::IterationCap => ensure!(out.iterations_used() == cap, "cap status before the cap"),
            Termination::Exhausted => ensure!(out.solution_original_indexes.is_empty(), "exhausted with solutions"),
        }
        for w in out.trace.windows(2) {
            ensure!(w[1].potential.is_subset(&w[0].potential), "PS grew");
        }
    }

    // Sampled frequencies approach exact probabilities at 10^6 shots.
    let run = GroverRun::new(7, 0..100, [3, 50, 77], 2).unwrap();
    let exact = run.run::<f64>().unwrap();
    let shots = 1_000_000u64;
    let sampled = run.run_sampled::<f64>(shots, 11).unwrap();
    for (code, &p) in &exact {
        let sigma = (p * (1.0 - p) / shots as f64).sqrt().max(1e-9);
        let dev = (sampled[code] - p).abs();
        ensure!(dev <= 5.0 * sigma, "code {code}: {} vs {p}", sampled[code]);
    }

    let acc = accuracy(&BTreeSet::from([1]), &BTreeSet::from([1]), 1).unwrap();
    ensure!(acc == 1.0, "accuracy sanity");
    ensure!((1..=9).all(|i| invocations_for(i) == if i % 2 == 1 { 1 } else { 2 }), "invocation rule");
    Ok("normalization, involution, encoding round-trip, filtered-stay-filtered, termination, 1e6-shot sampling".into())
}

fn determinism() -> Check {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut bytes = Vec::new();
    for dir in &dirs {
        let config = RunConfig {
            mode: Mode::Both,
            seed: 42,
            ..RunConfig::new(100, TargetSpec::Random { count: 20, seed: 42 }, dir.path())
        };
        run_experiment(&config).map_err(|e| e.to_string())?;
        bytes.push(fs::read(dir.path().join(REPORT_FILE)).unwrap());
    }
    ensure!(bytes[0] == bytes[1], "report.json differs between runs");
    Ok(format!("{} identical bytes", bytes[0].len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("CQC arithmetic", cqc_arithmetic),
        ("optimal invocation counts", optimal_counts),
        ("Grover closed-form grid", closed_form_grid),
        ("dataset 10, exact", dataset_ten),
        ("dataset 100, 40 targets, exact", dataset_hundred_forty),
        ("dataset 100, 20 targets, 12000 shots x 20 seeds", dataset_hundred_twenty_sampled),
        ("invariant suites", invariant_suites),
        ("report determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
