//! Acceptance criteria, one test per criterion. Each prints a single
//! `criterion N: PASS|FAIL ...` line. Timed criteria share a lock so they do not
//! compete for cores.

mod common;

use std::sync::Mutex;
use std::time::{Duration, Instant};

use common::gen::small_presentation;
use common::oracle::brute_force_sizes;
use common::sorted_sizes;
use pmdecomp::decompose::{decompose, verify, Decomposition, Options, Strategy};
use pmdecomp::fixtures;
use pmdecomp::generate::{default_mix_ops, gen_grid, gen_intervals, gen_random_er, mix};
use pmdecomp::graded::GradedMatrix;
use pmdecomp::hom::{alpha_quotient, hom_space};
use pmdecomp::interval::interval_presentation;
use pmdecomp::scc::{parse_scc2020, write_scc2020};
use pmdecomp::signature::{multiset, Signature};
use pmdecomp::subspace::{count_dec, dec_cardinality};
use pmdecomp::Field;
use proptest::strategy::{Strategy as _, ValueTree};
use proptest::test_runner::TestRunner;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(n: u32, pass: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

fn run(m: &GradedMatrix, strategy: Strategy) -> Decomposition {
    let d = decompose(m, &Options::with_strategy(strategy)).expect("decomposes");
    verify(&d).expect("certificate holds");
    d
}

fn signatures(d: &Decomposition) -> Vec<Signature> {
    multiset(d.summands.iter().map(|s| &s.matrix))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

#[test]
fn criterion_01_decomposition_counts() {
    let _g = serial();
    let expected = [1u64, 2, 7, 43, 186, 1965];
    let (counts, t) = timed(|| (1..=6).map(|k| count_dec(k, Field::F2)).collect::<Vec<_>>());
    let closed: Vec<u128> = (1..=8).map(|k| dec_cardinality(k, 2)).collect();
    let pass = counts == expected && t < Duration::from_secs(1);
    report(
        1,
        pass,
        format!(
            "enumerated {counts:?} expected {expected:?} in {:.3}s; closed form k=1..8 {closed:?}",
            t.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_02_antidiagonal_fixture() {
    let _g = serial();
    let m = fixtures::antidiagonal_six();
    let mut got = Vec::new();
    for s in [Strategy::Exhaustive, Strategy::Aida] {
        got.push((s, sorted_sizes(&run(&m, s))));
    }
    let pass = got.iter().all(|(_, sizes)| sizes == &[(3, 2), (3, 2)]);
    report(2, pass, format!("{got:?}"));
}

#[test]
fn criterion_03_linked_triple() {
    let _g = serial();
    let m = fixtures::linked_triple();
    let mut detail = Vec::new();
    let mut pass = true;
    for s in [Strategy::Exhaustive, Strategy::Aida] {
        let d = run(&m, s);
        let sizes = sorted_sizes(&d);
        let small = d.summands.iter().find(|x| x.matrix.num_rows() == 1);
        let placed = small.is_some_and(|x| {
            x.matrix.row_degree(0) == [1, 2] && x.matrix.num_cols() == 1 && x.matrix.col_degree(0) == [1, 3]
        });
        pass &= sizes == [(1, 1), (3, 3)] && placed;
        detail.push(format!("{s}: {sizes:?} 1x1 at (1,2)/(1,3): {placed}"));
    }
    report(3, pass, detail.join("; "));
}

#[test]
fn criterion_04_hom_dimensions() {
    let _g = serial();
    let blocks = fixtures::linked_triple_blocks();
    let mut dims = [[0usize; 3]; 3];
    for s in 0..3 {
        for t in 0..3 {
            if s != t {
                dims[s][t] = hom_space(&blocks[s], &blocks[t]).dim();
            }
        }
    }
    let (src, dst, alpha) = fixtures::staircase_pair();
    let (ms, md) = (interval_presentation(Field::F2, &src), interval_presentation(Field::F2, &dst));
    let h = hom_space(&ms, &md);
    let at = alpha_quotient(&h, &ms, &md, &alpha).dim();
    let pass = dims == [[0, 1, 2], [0, 0, 1], [0, 0, 0]] && h.dim() == 2 && at == 1;
    report(4, pass, format!("blocks {dims:?}, staircases Hom {} at alpha {at}", h.dim()));
}

#[test]
fn criterion_05_interval_recovery() {
    let _g = serial();
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut total = 0;
    for n in [10usize, 100, 1000] {
        for seed in 0..20u64 {
            let inst = gen_intervals(n, seed, Field::F2);
            let mixed = mix(&inst.matrix, default_mix_ops(&inst.matrix), seed + 1000);
            let (d, t) = timed(|| run(&mixed, Strategy::IntervalAuto));
            if n == 1000 {
                slowest = slowest.max(t);
            }
            total += 1;
            if signatures(&d) != inst.truth || d.interval_decomposable() != Some(true) {
                failures.push((n, seed));
            }
        }
    }
    let pass = failures.is_empty() && slowest < Duration::from_secs(30);
    report(
        5,
        pass,
        format!(
            "{}/{total} recovered, slowest n=1000 run {:.2}s, failures {failures:?}",
            total - failures.len(),
            slowest.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_06_mixing_invariance() {
    let _g = serial();
    let mut bad = Vec::new();
    let mut count = 0;
    for seed in 0..20u64 {
        let f = if seed % 2 == 0 { Field::F2 } else { Field::new(3).unwrap() };
        for m in [gen_random_er(30, 40, 0.1, seed, f), gen_grid(40, 40, 20, 0.1, seed, f)] {
            let base = signatures(&run(&m, Strategy::Aida));
            let mixed = mix(&m, default_mix_ops(&m), seed + 7);
            count += 1;
            if signatures(&run(&mixed, Strategy::Aida)) != base {
                bad.push(seed);
            }
        }
    }
    report(6, bad.is_empty(), format!("{}/{count} instances invariant, failing seeds {bad:?}", count - bad.len()));
}

#[test]
fn criterion_07_certificates() {
    let _g = serial();
    let mut inputs = vec![fixtures::antidiagonal_six(), fixtures::linked_triple(), fixtures::glued_pair(Field::F2)];
    for seed in 0..10u64 {
        inputs.push(gen_random_er(25, 35, 0.15, seed, Field::F2));
        inputs.push(gen_grid(30, 30, 10, 0.15, seed, Field::new(5).unwrap()));
        let iv = gen_intervals(50, seed, Field::F2).matrix;
        inputs.push(mix(&iv, default_mix_ops(&iv), seed));
    }
    let mut checked = 0;
    let mut failed = Vec::new();
    for (i, m) in inputs.iter().enumerate() {
        for s in [Strategy::Exhaustive, Strategy::Aida, Strategy::IntervalAuto] {
            let d = decompose(m, &Options::with_strategy(s)).expect("decomposes");
            checked += 1;
            if let Err(e) = verify(&d) {
                failed.push(format!("#{i} {s}: {e}"));
            }
        }
    }
    report(7, failed.is_empty(), format!("{checked} certificates checked, failures {failed:?}"));
}

#[test]
fn criterion_08_brute_force_corpus() {
    let _g = serial();
    let mut runner = TestRunner::deterministic();
    let strat = small_presentation();
    let cases = 20_000;
    let (mismatches, t) = timed(|| {
        let mut bad = 0;
        for _ in 0..cases {
            let m = strat.new_tree(&mut runner).unwrap().current();
            let d = run(&m, Strategy::Aida);
            if sorted_sizes(&d) != brute_force_sizes(&d.input) {
                bad += 1;
            }
        }
        bad
    });
    let pass = mismatches == 0 && t < Duration::from_secs(600);
    report(8, pass, format!("{cases} small F2 presentations, {mismatches} mismatches, {:.1}s", t.as_secs_f64()));
}

#[test]
fn criterion_09_interval_scaling() {
    let _g = serial();
    let mut disagree = Vec::new();
    for n in [10usize, 50, 100, 200] {
        for seed in 0..5u64 {
            let inst = gen_intervals(n, seed, Field::F2);
            let m = mix(&inst.matrix, default_mix_ops(&inst.matrix), seed + 1);
            if signatures(&run(&m, Strategy::IntervalAuto)) != signatures(&run(&m, Strategy::Exhaustive)) {
                disagree.push((n, seed));
            }
        }
    }
    let sizes = [125usize, 250, 500, 1000, 2000];
    let mut points = Vec::new();
    for &n in &sizes {
        let inst = gen_intervals(n, 42, Field::F2);
        let m = mix(&inst.matrix, default_mix_ops(&inst.matrix), 43);
        let (_, t) = timed(|| run(&m, Strategy::IntervalAuto));
        points.push(((n as f64).ln(), t.as_secs_f64().max(1e-6).ln()));
    }
    let slope = fit_slope(&points);
    let times: Vec<String> = points.iter().map(|p| format!("{:.3}", p.1.exp())).collect();
    let pass = disagree.is_empty() && slope <= 3.2;
    report(9, pass, format!("strategies disagree on {disagree:?}; times {times:?}s; log-log slope {slope:.2}"));
}

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn criterion_10_grid_scaling_and_sweep() {
    let _g = serial();
    let mut times = Vec::new();
    for m in [5_000usize, 10_000, 20_000, 40_000] {
        let mat = gen_grid(m, m, 1000, 4.0 / m as f64, 5, Field::F2);
        let (_, t) = timed(|| run(&mat, Strategy::Aida));
        times.push(t.as_secs_f64());
    }
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1] / w[0].max(1e-3)).collect();
    let scaling = ratios.iter().all(|&r| r <= 5.0) && times[3] < 300.0;

    let no_sweep = Options { sweep: false, ..Options::with_strategy(Strategy::IntervalAuto) };
    let with_sweep = Options::with_strategy(Strategy::IntervalAuto);
    let (mut faster, mut never_more, total) = (0, true, 10);
    for seed in 0..total as u64 {
        let inst = gen_intervals(500, seed, Field::F2);
        let m = mix(&inst.matrix, default_mix_ops(&inst.matrix), seed + 1);
        let (a, ta) = timed(|| decompose(&m, &no_sweep).unwrap());
        let (b, tb) = timed(|| decompose(&m, &with_sweep).unwrap());
        never_more &= b.summands.len() <= a.summands.len();
        faster += usize::from(tb < ta);
    }
    let sweep_ok = never_more && faster * 10 >= total * 8;
    let times: Vec<String> = times.iter().map(|t| format!("{t:.3}")).collect();
    let ratios: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    report(
        10,
        scaling && sweep_ok,
        format!("grid times {times:?}s ratios {ratios:?}; sweep faster on {faster}/{total}, never more summands: {never_more}"),
    );
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| l.split('#').next().unwrap().trim_end())
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn criterion_11_scc_round_trip() {
    let _g = serial();
    let mut inputs = vec![fixtures::antidiagonal_six(), fixtures::linked_triple(), fixtures::glued_pair(Field::F2)];
    for seed in 0..100u64 {
        let f = Field::new([2, 3, 5, 7, 251][seed as usize % 5]).unwrap();
        inputs.push(match seed % 3 {
            0 => gen_random_er(20, 25, 0.2, seed, f),
            1 => gen_grid(20, 20, 50, 0.2, seed, f),
            _ => gen_intervals(15, seed, f).matrix,
        });
    }
    let mut bad = 0;
    for m in &inputs {
        let text = write_scc2020(m);
        let noisy: String = text.lines().enumerate().map(|(i, l)| format!("{l}  # line {i}\n# note\n")).collect();
        let back = parse_scc2020(&noisy, m.field()).expect("parses");
        if strip_comments(&write_scc2020(&back)) != strip_comments(&text) || &back != m {
            bad += 1;
        }
    }
    report(11, bad == 0, format!("{} presentations, {bad} differ after round trip", inputs.len()));
}
