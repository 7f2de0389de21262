//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::time::{Duration, Instant};

use sigmad::instances::{
    gen_random, gen_yes_3partition, read_3partition, read_instance, read_partition, read_schedule,
    write_3partition, write_instance, write_partition, write_schedule, RandomSpec,
};
use sigmad::metrics::{
    deviation, evaluate, ideal_lower_bound, ideal_lower_bound_for, kendall_tau, median_table,
    spearman_distance, Objective,
};
use sigmad::reductions::{
    build_reduction3, build_reduction3_with, build_reduction4, build_witness, decode,
    three_voter_constants, Breakdown, ReducedInstance, Reduction3Options, ThreePartitionInstance,
    TripletPartition,
};
use sigmad::solvers::{solve_assignment, solve_bnb, solve_brute};
use sigmad::{Instance, Schedule};

// Wall-clock limits per criterion.
const LIMIT_SOLVERS: Duration = Duration::from_secs(120);
const LIMIT_DIACONIS: Duration = Duration::from_secs(10);
const LIMIT_FOUR: Duration = Duration::from_secs(60);
const LIMIT_THREE: Duration = Duration::from_secs(120);

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {t:.2?}, limit {limit:.0?}"))?;
    Ok(t)
}

fn permutations(n: usize) -> Vec<Schedule> {
    let mut p: Vec<u32> = (1..=n as u32).collect();
    let mut out = Vec::new();
    loop {
        out.push(Schedule::from_ids(&p).unwrap());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// The 300 instances of criterion 1: all `(n, v, pmax)` combinations cycled.
fn solver_corpus() -> Vec<Instance> {
    (0..300u64)
        .map(|i| {
            let spec = RandomSpec {
                n: 1 + (i % 7) as usize,
                v: 1 + ((i / 7) % 5) as usize,
                pmax: 1 + ((i / 35) % 5) as i64,
                seed: 1000 + i,
            };
            gen_random(&spec).unwrap()
        })
        .collect()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut unit = 0;
    for (idx, inst) in solver_corpus().iter().enumerate() {
        for obj in [Objective::Deviation, Objective::Weighted] {
            let b = solve_brute(inst, obj).map_err(|e| e.to_string())?;
            let c = solve_bnb(inst, obj).map_err(|e| e.to_string())?;
            ensure(b.objective == c.objective, || {
                format!(
                    "instance {idx} {obj:?}: brute {} vs bnb {}",
                    b.objective, c.objective
                )
            })?;
        }
        if inst.is_unit() {
            unit += 1;
            let b = solve_brute(inst, Objective::Deviation).unwrap();
            let a = solve_assignment(inst).map_err(|e| e.to_string())?;
            ensure(a.objective == b.objective, || {
                format!(
                    "instance {idx}: brute {} vs assignment {}",
                    b.objective, a.objective
                )
            })?;
        }
    }
    let t = within(start, LIMIT_SOLVERS)?;
    Ok(format!(
        "300 instances, {unit} unit-length, both objectives, {t:.2?}"
    ))
}

fn criterion_2() -> Check {
    for i in 0..200u64 {
        let spec = RandomSpec {
            n: 1 + (i % 7) as usize,
            v: 2,
            pmax: 1 + ((i / 7) % 5) as i64,
            seed: 5000 + i,
        };
        let inst = gen_random(&spec).unwrap();
        for obj in [Objective::Deviation, Objective::Weighted] {
            let d0 = evaluate(&inst, &inst.prefs()[0], obj).unwrap().total;
            let d1 = evaluate(&inst, &inst.prefs()[1], obj).unwrap().total;
            let opt = solve_brute(&inst, obj).unwrap().objective;
            ensure(d0 == d1 && d1 == opt, || {
                format!(
                    "seed {}: {obj:?} prefs give {d0}, {d1}; optimum {opt}",
                    spec.seed
                )
            })?;
        }
    }
    Ok("200 two-voter instances, both objectives".into())
}

fn criterion_3() -> Check {
    let mut tight = 0;
    for (idx, inst) in solver_corpus().iter().enumerate() {
        for obj in [Objective::Deviation, Objective::Weighted] {
            let bound = ideal_lower_bound_for(inst, obj).unwrap();
            let opt = solve_brute(inst, obj).unwrap();
            ensure(bound <= opt.objective, || {
                format!(
                    "instance {idx} {obj:?}: bound {bound} > optimum {}",
                    opt.objective
                )
            })?;
            let c = sigmad::model::completion_times(inst, &opt.schedule).unwrap();
            let all_median = median_table(inst)
                .unwrap()
                .iter()
                .all(|m| m.contains(c[m.task.index()]));
            if all_median {
                tight += 1;
                ensure(bound == opt.objective, || {
                    format!(
                        "instance {idx} {obj:?}: all-median optimum {} != bound {bound}",
                        opt.objective
                    )
                })?;
            }
        }
    }
    Ok(format!(
        "bound <= optimum on 600 solves; equality on all {tight} all-median optima"
    ))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut pairs = 0u64;
    for n in 1..=6 {
        let perms = permutations(n);
        for a in &perms {
            for b in &perms {
                let k = kendall_tau(a, b, n).unwrap();
                let s = spearman_distance(a, b, n).unwrap();
                ensure(k <= s && s <= 2 * k, || {
                    format!(
                        "{:?} vs {:?}: kendall {k}, spearman {s}",
                        a.ids().collect::<Vec<_>>(),
                        b.ids().collect::<Vec<_>>()
                    )
                })?;
                pairs += 1;
            }
        }
    }
    let t = within(start, LIMIT_DIACONIS)?;
    Ok(format!("{pairs} permutation pairs, {t:.2?}"))
}

fn check_roundtrip(red: &ReducedInstance, sol: &TripletPartition) -> Result<i64, String> {
    let w = build_witness(red, sol).map_err(|e| e.to_string())?;
    let dev = deviation(red.instance(), &w).unwrap().total;
    let decoded = decode(red, &w).unwrap();
    ensure(decoded.partition().is_some_and(|p| p.same_as(sol)), || {
        format!("decode(witness) = {decoded:?}, expected {:?}", sol.triplets)
    })?;
    ensure(red.separators_unanimous(), || {
        "separator due dates differ across voters".into()
    })?;
    Ok(dev)
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut notes = Vec::new();
    for q in [2usize, 4] {
        for seed in 0..5 {
            let (tp, sol) = gen_yes_3partition(q, 20, false, seed).unwrap();
            let red = build_reduction4(&tp).map_err(|e| e.to_string())?;
            let ideal = ideal_lower_bound(red.instance()).unwrap();
            ensure(red.z() == ideal, || {
                format!("q={q} seed={seed}: z {} != bound {ideal}", red.z())
            })?;
            let dev = check_roundtrip(&red, &sol)?;
            ensure(dev == red.z(), || {
                format!("q={q} seed={seed}: witness {dev} != z {}", red.z())
            })?;
            if seed == 0 {
                if let Breakdown::FourVoter(bd) = red.breakdown() {
                    notes.push(format!(
                        "q={q}: z {} (closed form {})",
                        red.z(),
                        bd.closed_form_z()
                    ));
                }
            }
        }
    }
    let t = within(start, LIMIT_FOUR)?;
    Ok(format!(
        "10 yes-instances, B=20; {}; {t:.2?}",
        notes.join(", ")
    ))
}

fn three_voter_checks(red: &ReducedInstance, sol: &TripletPartition) -> Result<String, String> {
    let Breakdown::ThreeVoter(bd) = red.breakdown() else {
        return Err("not a three-voter reduction".into());
    };
    let sigmad::reductions::Constants::ThreeVoter(c) = red.constants() else {
        return Err("missing constants".into());
    };
    let ideal = ideal_lower_bound(red.instance()).unwrap();
    ensure(ideal == bd.d_nf, || {
        format!("median bound {ideal} != D_NF {}", bd.d_nf)
    })?;
    ensure(red.z() == bd.d_nf + bd.slack, || "z != D_NF + slack".into())?;
    let gap = 2 * c.k * c.o;
    ensure(bd.d_nf < red.z() && red.z() < bd.d_nf + gap, || {
        format!("expected {} < {} < {}", bd.d_nf, red.z(), bd.d_nf + gap)
    })?;
    let dev = check_roundtrip(red, sol)?;
    ensure(bd.d_nf <= dev && dev <= red.z(), || {
        format!("witness {dev} outside [{}, {}]", bd.d_nf, red.z())
    })?;
    Ok(format!(
        "n={} D_NF={} witness={dev} z={}",
        red.instance().n(),
        bd.d_nf,
        red.z()
    ))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut parts = Vec::new();

    // B = 8: x must satisfy 2 < x < 4, so x = 3 and no triple sums to 8.
    let strict_8: Vec<i64> = (1..8).filter(|&x| 4 * x > 8 && 2 * x < 8).collect();
    ensure(strict_8 == [3], || {
        format!("strict values for B=8: {strict_8:?}")
    })?;
    ensure(gen_yes_3partition(2, 8, true, 0).is_err(), || {
        "found a strict B=8 instance".into()
    })?;
    let c = three_voter_constants(2, 8).unwrap();
    ensure(
        (c.k, c.b_prime, c.o, c.o_prime) == (24, 192, 208, 3552),
        || format!("{c:?}"),
    )?;
    let weak = ThreePartitionInstance::new(2, 8, vec![3, 3, 2, 3, 3, 2]).unwrap();
    ensure(build_reduction3(&weak).is_err(), || {
        "weak bounds accepted without opt-in".into()
    })?;
    let red = build_reduction3_with(
        &weak,
        Reduction3Options {
            allow_weak_bounds: true,
        },
    )
    .unwrap();
    let sol = TripletPartition::new(vec![[1, 2, 3], [4, 5, 6]]);
    parts.push(format!(
        "(2,8) has no strict-bounds yes-instance; constants ok; weak-bounds check {}",
        three_voter_checks(&red, &sol)?
    ));

    for (q, b, seeds) in [(2usize, 16i64, 0..3u64), (4, 16, 0..2)] {
        for seed in seeds {
            let (tp, sol) = gen_yes_3partition(q, b, true, seed).unwrap();
            let red = build_reduction3(&tp).map_err(|e| e.to_string())?;
            let line = three_voter_checks(&red, &sol)
                .map_err(|e| format!("({q},{b}) seed {seed}: {e}"))?;
            if seed == 0 {
                parts.push(format!("({q},{b}) {line}"));
            }
        }
    }
    let t = within(start, LIMIT_THREE)?;
    Ok(format!("{}; {t:.2?}", parts.join("; ")))
}

/// Whether some schedule puts every task inside its median interval.
fn all_median_feasible(inst: &Instance) -> bool {
    let table = median_table(inst).unwrap();
    permutations(inst.n()).iter().any(|s| {
        let c = sigmad::model::completion_times(inst, s).unwrap();
        table.iter().all(|m| m.contains(c[m.task.index()]))
    })
}

fn criterion_7() -> Check {
    let raw = |l: &[i64], p: &[&[u32]]| {
        Instance::from_raw(l.to_vec(), p.iter().map(|x| x.to_vec()).collect()).unwrap()
    };
    let mut micro = vec![
        raw(&[1, 1, 1], &[&[1, 2, 3], &[2, 3, 1], &[3, 1, 2]]),
        raw(&[1, 1, 1], &[&[1, 2, 3], &[1, 2, 3], &[3, 2, 1]]),
        raw(&[2, 1], &[&[1, 2], &[2, 1], &[2, 1]]),
        raw(
            &[3, 1, 1, 1],
            &[&[1, 2, 3, 4], &[2, 3, 4, 1], &[2, 1, 3, 4]],
        ),
        raw(
            &[1, 2, 3, 1, 2],
            &[&[1, 2, 3, 4, 5], &[5, 4, 3, 2, 1], &[3, 1, 5, 2, 4]],
        ),
        // One integer task between two unit blocks, unanimous separators.
        raw(
            &[2, 1, 1, 1, 1],
            &[&[2, 1, 3, 4, 5], &[2, 3, 1, 4, 5], &[2, 3, 4, 1, 5]],
        ),
        raw(
            &[1; 7],
            &[
                &[1, 2, 3, 4, 5, 6, 7],
                &[7, 6, 5, 4, 3, 2, 1],
                &[4, 3, 5, 2, 6, 1, 7],
                &[1, 2, 3, 4, 5, 6, 7],
            ],
        ),
    ];
    for i in 0..40u64 {
        micro.push(
            gen_random(&RandomSpec {
                n: 2 + (i % 5) as usize,
                v: 1 + ((i / 5) % 5) as usize,
                pmax: 1 + (i % 3) as i64,
                seed: 9000 + i,
            })
            .unwrap(),
        );
    }
    let (mut yes, mut no) = (0, 0);
    for (idx, inst) in micro.iter().enumerate() {
        let attained = solve_brute(inst, Objective::Deviation).unwrap().objective
            == ideal_lower_bound(inst).unwrap();
        let feasible = all_median_feasible(inst);
        ensure(attained == feasible, || {
            format!("micro-instance {idx}: bound attained {attained}, all-median schedule exists {feasible}")
        })?;
        if feasible {
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok(format!(
        "{} micro-instances ({yes} attain the bound, {no} do not); reverse direction at reduction scale not executed",
        micro.len()
    ))
}

fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn criterion_8() -> Check {
    let files = [
        ("random_n6_v3_seed42.txt", "instance"),
        ("two_tasks.txt", "instance"),
        ("random_n6_v3_seed42.schedule", "schedule"),
        ("q2_b16.3partition", "3partition"),
        ("q2_b16.triplets", "triplets"),
    ];
    for (name, kind) in files {
        let text = fixture(name);
        let back = match kind {
            "instance" => write_instance(&read_instance(&text).unwrap()),
            "schedule" => write_schedule(&read_schedule(&text).unwrap()),
            "3partition" => write_3partition(&read_3partition(&text).unwrap()),
            _ => write_partition(&read_partition(&text).unwrap()),
        };
        // Comments are metadata; compare the data lines.
        let data: String = text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| format!("{l}\n"))
            .collect();
        ensure(back == data, || format!("{name} does not round-trip"))?;
    }
    let spec = RandomSpec {
        n: 6,
        v: 3,
        pmax: 4,
        seed: 42,
    };
    let generated =
        sigmad::instances::write_instance_doc(&sigmad::instances::gen_random_doc(&spec).unwrap());
    ensure(generated == fixture("random_n6_v3_seed42.txt"), || {
        "seed 42 no longer reproduces the frozen file".into()
    })?;
    Ok(format!(
        "{} golden files round-trip; seeded generation matches the frozen file",
        files.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 solver agreement", criterion_1),
        ("2 two-voter rule", criterion_2),
        ("3 median lower bound", criterion_3),
        ("4 Diaconis-Graham", criterion_4),
        ("5 four-voter reduction", criterion_5),
        ("6 three-voter reduction", criterion_6),
        ("7 all-median attainment", criterion_7),
        ("8 determinism and formats", criterion_8),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match std::panic::catch_unwind(f) {
            Ok(Ok(detail)) => println!("PASS criterion {name}: {detail}"),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL criterion {name}: panicked");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
