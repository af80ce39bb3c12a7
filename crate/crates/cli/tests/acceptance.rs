//! Acceptance gate: eleven numbered checks, one test each, printing a
//! `[PASS]` line on success (visible with `--nocapture`).  Together they pin
//! the exact values, guarantees, tolerances, and time budgets the solvers
//! ship with.  Criteria that compare against brute force stay within the
//! oracle size caps.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use covlife::colouring::{
    colour, colour_derandomized, extract_covers, num_colours, valid_colours,
};
use covlife::expcover::{exp_params, phase_probe, run_expcover, saved_components};
use covlife::graph_partition::graph_partition;
use covlife::instance::{schedule_feasible, stats, verify, CoverFamily, Instance};
use covlife::kcover::group_k;
use covlife::lll::{lll_params, moser_tardos, solve_lll, DEFAULT_RESAMPLE_LIMIT};
use covlife::oned::solve_1d;
use covlife::oracle::{
    brute_dscp, exact_mlcp, garg_koenemann, to_uniform, OracleCaps, OracleMode,
};
use covlife::rational::{parse_rat, rat_from_usize, rat_to_f64};
use covlife::{twocolour, Error};
use covlife_cli::bench::{bench_run, derive_seed, eq3_upper, gen_random, BenchConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn triangle() -> Instance {
    Instance::unit(3, vec![vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap()
}

/// The triangle plus one subset watching the whole universe.
fn four_subset_example() -> Instance {
    Instance::unit(3, vec![vec![0, 1], vec![1, 2], vec![2, 0], vec![0, 1, 2]]).unwrap()
}

/// Random contiguous-interval instance with at most ten subsets; gaps are
/// repaired by extra intervals so every element is covered.
fn random_interval_instance(rng: &mut ChaCha8Rng) -> Instance {
    loop {
        let n = rng.random_range(4..=12);
        let m = rng.random_range(3..=7);
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        for _ in 0..m {
            let l = rng.random_range(0..n);
            let r = rng.random_range(l..n.min(l + 5));
            subsets.push((l..=r).collect());
        }
        let mut covered = vec![false; n];
        for s in &subsets {
            for &e in s {
                covered[e] = true;
            }
        }
        let mut e = 0;
        while e < n {
            if covered[e] {
                e += 1;
                continue;
            }
            let start = e;
            while e < n && !covered[e] {
                e += 1;
            }
            subsets.push((start..e).collect());
        }
        if subsets.len() <= 10 {
            return Instance::unit(n, subsets).unwrap();
        }
    }
}

/// Instance where every element belongs to exactly two subsets.
fn random_two_frequency_instance(rng: &mut ChaCha8Rng) -> Instance {
    let m = rng.random_range(2..=10);
    loop {
        let n = rng.random_range(2..=12);
        let mut subsets: Vec<Vec<usize>> = vec![Vec::new(); m];
        for e in 0..n {
            let a = rng.random_range(0..m);
            let mut b = rng.random_range(0..m - 1);
            if b >= a {
                b += 1;
            }
            subsets[a].push(e);
            subsets[b].push(e);
        }
        if subsets.iter().all(|s| !s.is_empty()) {
            return Instance::unit(n, subsets).unwrap();
        }
    }
}

/// Random dense-ish instance with coverage repaired deterministically.
fn random_instance(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize) -> Instance {
    let n = rng.random_range(3..=max_n);
    let m = rng.random_range(n.min(max_m)..=max_m);
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for _ in 0..m {
        let size = rng.random_range(1..=n);
        let mut s: Vec<usize> = (0..size).map(|_| rng.random_range(0..n)).collect();
        s.sort_unstable();
        s.dedup();
        subsets.push(s);
    }
    for e in 0..n {
        if !subsets.iter().any(|s| s.contains(&e)) {
            subsets[e % m].push(e);
        }
    }
    Instance::unit(n, subsets).unwrap()
}

/// Blocks of three elements with private subsets: every co-occurrence stays
/// inside a block, so frequencies are high while expansiveness stays at 2.
fn block_instance(blocks: usize, pair_reps: usize, triple_reps: usize) -> Instance {
    let mut subsets = Vec::new();
    for b in 0..blocks {
        let (x, y, z) = (3 * b, 3 * b + 1, 3 * b + 2);
        for _ in 0..pair_reps {
            subsets.push(vec![x, y]);
            subsets.push(vec![y, z]);
            subsets.push(vec![z, x]);
        }
        for _ in 0..triple_reps {
            subsets.push(vec![x, y, z]);
        }
    }
    Instance::unit(3 * blocks, subsets).unwrap()
}

/// Blocks of six elements filled with random small subsets until every
/// element appears at least twenty times; expansiveness stays at most 5.
fn dense_block_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = rng.random_range(3..=6);
    let mut subsets = Vec::new();
    for b in 0..blocks {
        let base = 6 * b;
        let mut freq = [0usize; 6];
        while freq.iter().any(|&f| f < 20) {
            let size = rng.random_range(2..=4);
            let mut members: Vec<usize> = rand::seq::index::sample(&mut rng, 6, size)
                .into_iter()
                .map(|i| base + i)
                .collect();
            members.sort_unstable();
            for &e in &members {
                freq[e - base] += 1;
            }
            subsets.push(members);
        }
    }
    Instance::unit(6 * blocks, subsets).unwrap()
}

fn within_caps(inst: &Instance, caps: &OracleCaps) -> bool {
    inst.n() <= caps.max_n && inst.subset_count() <= caps.max_subsets
}

#[test]
fn criterion_01_triangle_exact_values() {
    let started = Instant::now();
    let caps = OracleCaps::default();
    let inst = triangle();

    let (count, family) = brute_dscp(&inst, &caps).unwrap();
    assert_eq!(count, 1);
    assert!(verify(&inst, &family).is_valid());

    let (value, sched) = exact_mlcp(&inst, &caps).unwrap();
    assert_eq!(value, parse_rat("3/2").unwrap());
    schedule_feasible(&inst, &sched).unwrap();

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("[PASS] 1: triangle packs exactly 1 disjoint cover, lifetime exactly 3/2, in {elapsed:?}");
}

#[test]
fn criterion_02_uniform_schedule_of_the_four_subset_example() {
    let caps = OracleCaps::default();
    let inst = four_subset_example();

    let (value, sched) = exact_mlcp(&inst, &caps).unwrap();
    let five_halves = parse_rat("5/2").unwrap();
    assert_eq!(value, five_halves);

    let uniform = to_uniform(&sched, 16).unwrap();
    let half = parse_rat("1/2").unwrap();
    assert_eq!(uniform.entries.len(), 5, "expected the five-slot form");
    for entry in &uniform.entries {
        assert_eq!(entry.duration, half);
    }
    assert_eq!(uniform.value(), five_halves);
    schedule_feasible(&inst, &uniform).unwrap();
    println!("[PASS] 2: four-subset example reaches exactly 5/2 as five slots of 1/2 each");
}

#[test]
fn criterion_03_colouring_guarantee_on_random_instances() {
    let started = Instant::now();
    let mut checked = 0usize;
    for &n in &[50usize, 100, 200] {
        let m = 8 * n;
        let (lo, hi) = (2usize, (n / 4).max(2));
        for trial in 0..100 {
            let seed = derive_seed(1, n, trial);
            let inst = gen_random(n, m, lo, hi, seed).unwrap();
            let f_min = stats(&inst).f_min;
            let ell = num_colours(f_min, n).unwrap();
            let (col, _) = colour_derandomized(&inst, ell, seed);
            let valid = valid_colours(&inst, &col).len();
            let required = ell - (ell as f64 / (n as f64).ln()).floor() as usize;
            assert!(
                valid >= required,
                "n={n} trial={trial}: {valid} valid colours, need {required} of {ell}"
            );
            checked += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!("[PASS] 3: colouring guarantee held on all {checked} instances in {elapsed:?}");
}

#[test]
fn criterion_04_ratio_envelope_across_the_sweep() {
    let cfg = BenchConfig::default();
    let text = bench_run(&cfg).unwrap();
    let mut per_n: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[10], "", "unexpected error row: {line}");
        assert_eq!(cols[2], "colour");
        let n: usize = cols[0].parse().unwrap();
        assert!((40..=190).contains(&n));
        let rho: f64 = cols[5].parse().unwrap();
        assert!(
            rho <= eq3_upper(n) + 1e-9,
            "row ratio {rho} above the envelope {} at n={n}",
            eq3_upper(n)
        );
        per_n.entry(n).or_default().push(rho);
    }
    assert_eq!(per_n.len(), cfg.ns.len());
    for (n, rhos) in &per_n {
        assert_eq!(rhos.len(), cfg.trials);
        let mean = rhos.iter().sum::<f64>() / rhos.len() as f64;
        let low = 0.8 * (*n as f64).ln();
        let high = eq3_upper(*n);
        assert!(
            mean >= low - 1e-9 && mean <= high + 1e-9,
            "mean ratio {mean} outside [{low}, {high}] at n={n}"
        );
    }
    println!("[PASS] 4: every ratio within the envelope, means inside [0.8 ln n, upper] for all {} sizes", per_n.len());
}

#[test]
fn criterion_05_interval_instances_agree_three_ways() {
    let started = Instant::now();
    let caps = OracleCaps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for round in 0..200 {
        let inst = random_interval_instance(&mut rng);
        let report = solve_1d(&inst).unwrap();
        assert!(verify(&inst, &report.family).is_valid());
        assert_eq!(report.family.len(), report.value);

        let (count, _) = brute_dscp(&inst, &caps).unwrap();
        assert_eq!(report.value, count, "flow vs brute force, round {round}");

        let (value, _) = exact_mlcp(&inst, &caps).unwrap();
        assert_eq!(
            value,
            rat_from_usize(report.value),
            "flow vs fractional optimum, round {round}"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!("[PASS] 5: flow = brute force = fractional optimum on 200 interval instances in {elapsed:?}");
}

/// All multigraphs with up to `max_edges` edges and `max_vertices` vertices,
/// as sorted edge lists with vertices named in order of first use (one
/// canonical labelling per graph; every two-frequency instance is a
/// relabelling of one of these).
fn canonical_multigraphs(max_edges: usize, max_vertices: usize) -> Vec<Vec<(usize, usize)>> {
    fn extend(
        edges: &mut Vec<(usize, usize)>,
        used: usize,
        max_edges: usize,
        max_vertices: usize,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if !edges.is_empty() {
            out.push(edges.clone());
        }
        if edges.len() == max_edges {
            return;
        }
        let floor_edge = edges.last().copied().unwrap_or((0, 0));
        let mut candidates: Vec<((usize, usize), usize)> = Vec::new();
        for u in 0..used {
            for v in (u + 1)..used {
                candidates.push(((u, v), used));
            }
            if used < max_vertices {
                candidates.push(((u, used), used + 1));
            }
        }
        if used + 1 < max_vertices {
            candidates.push(((used, used + 1), used + 2));
        }
        for (e, used_after) in candidates {
            if e < floor_edge {
                continue;
            }
            edges.push(e);
            extend(edges, used_after, max_edges, max_vertices, out);
            edges.pop();
        }
    }
    let mut out = Vec::new();
    let mut edges = Vec::new();
    extend(&mut edges, 0, max_edges, max_vertices, &mut out);
    out
}

fn instance_from_edges(edges: &[(usize, usize)]) -> Instance {
    let m = edges.iter().map(|&(_, v)| v + 1).max().unwrap();
    let mut subsets: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (e, &(u, v)) in edges.iter().enumerate() {
        subsets[u].push(e);
        subsets[v].push(e);
    }
    Instance::unit(edges.len(), subsets).unwrap()
}

#[test]
fn criterion_06_two_frequency_solver_matches_brute_force() {
    let caps = OracleCaps::default();

    // The triangle itself: one disjoint cover.
    let tri = triangle();
    let report = twocolour::solve(&tri).unwrap();
    assert_eq!(report.family.len(), 1);
    assert_eq!(brute_dscp(&tri, &caps).unwrap().0, 1);

    // Exhaustive: every instance with at most 5 elements and 8 subsets,
    // one representative per relabelling.
    let graphs = canonical_multigraphs(5, 8);
    assert!(graphs.len() > 500, "enumeration too small: {}", graphs.len());
    for edges in &graphs {
        let inst = instance_from_edges(edges);
        let report = twocolour::solve(&inst).unwrap();
        assert!(verify(&inst, &report.family).is_valid());
        let (count, _) = brute_dscp(&inst, &caps).unwrap();
        assert_eq!(
            report.family.len(),
            count,
            "solver vs brute force on edges {edges:?}"
        );
    }

    // Plus random instances beyond the exhaustive range.
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for round in 0..100 {
        let inst = random_two_frequency_instance(&mut rng);
        let report = twocolour::solve(&inst).unwrap();
        assert!(verify(&inst, &report.family).is_valid());
        let (count, _) = brute_dscp(&inst, &caps).unwrap();
        assert_eq!(report.family.len(), count, "random round {round}");
    }
    println!(
        "[PASS] 6: two-frequency solver matched brute force on {} exhaustive + 100 random instances",
        graphs.len()
    );
}

#[test]
fn criterion_07_resampling_fills_every_colour() {
    for seed in 0..50u64 {
        let inst = dense_block_instance(seed + 100);
        let st = stats(&inst);
        assert!(st.f_min >= 20, "seed {seed}: f_min {}", st.f_min);
        assert!(st.delta_tau <= 5, "seed {seed}: delta_tau {}", st.delta_tau);

        let params = lll_params(&st);
        assert!(params.condition_ok);
        let ell = params.ell_dual;
        assert!(ell >= 2, "seed {seed}: ell {ell}");

        let (col, resamples) =
            moser_tardos(&inst, ell, seed, DEFAULT_RESAMPLE_LIMIT).unwrap();
        assert!(resamples <= DEFAULT_RESAMPLE_LIMIT);
        let family = extract_covers(&inst, &col);
        assert_eq!(family.len(), ell, "seed {seed}: expected all colours to cover");
        assert!(verify(&inst, &family).is_valid());
    }
    println!("[PASS] 7: resampling produced all ell_dual disjoint covers on 50 block instances");
}

#[test]
fn criterion_08_phase_solver_guarantee_and_saved_component_sizes() {
    // One-phase and two-phase configurations of the block family.
    let single = block_instance(40, 3, 4);
    let double = block_instance(668, 6, 8);
    {
        let st = stats(&single);
        assert_eq!((st.f_min, st.delta_tau), (10, 2));
        let params = exp_params(&st).unwrap();
        assert_eq!((params.p, params.ell, params.threshold), (1, 2, 10));
    }
    {
        let st = stats(&double);
        assert_eq!((st.f_min, st.delta_tau), (20, 2));
        let params = exp_params(&st).unwrap();
        assert_eq!((params.p, params.ell, params.threshold), (2, 2, 10));
    }

    for (inst, runs) in [(&single, 25u64), (&double, 8u64)] {
        for seed in 0..runs {
            let report = run_expcover(inst, seed).unwrap();
            assert!(!report.fallback);
            assert!(verify(inst, &report.family).is_valid());
            assert!(
                report.family.len() >= report.guarantee,
                "family {} below guarantee {} (seed {seed})",
                report.family.len(),
                report.guarantee
            );
            if report.final_live >= 2 {
                let bound = report.ell_final
                    - (report.ell_final as f64 / (report.final_live as f64).ln()).floor()
                        as usize;
                assert!(report.family.len() >= bound, "seed {seed}");
            }
        }
    }

    // Saved components stay small in well over half of all phase runs.
    let st = stats(&single);
    let params = exp_params(&st).unwrap();
    let trials = 200u64;
    let mut oversized = 0usize;
    for seed in 0..trials {
        let state = phase_probe(&single, params.ell, params.threshold, 1_000 + seed);
        let largest = saved_components(&state)
            .iter()
            .map(|c| c.len())
            .max()
            .unwrap_or(0);
        if largest as f64 > params.component_cap {
            oversized += 1;
        }
    }
    let freq = oversized as f64 / trials as f64;
    let limit = 0.5 + 3.0 * (0.25 / trials as f64).sqrt();
    assert!(freq < limit, "oversized-component frequency {freq} >= {limit}");
    println!(
        "[PASS] 8: phase solver met its guarantee on 33 runs; oversized components in {freq:.3} of {trials} probes (limit {limit:.3})"
    );
}

#[test]
fn criterion_09_fractional_solver_within_ratio() {
    let caps = OracleCaps::default();
    let tol = 1e-9;

    // Pinned desk-scale floors: optimum divided by 1.1.
    for (inst, floor_value) in [(triangle(), 1.5 / 1.1), (four_subset_example(), 2.5 / 1.1)]
    {
        let (value, sched) = garg_koenemann(&inst, 0.1, OracleMode::Exact, &caps).unwrap();
        schedule_feasible(&inst, &sched).unwrap();
        assert!(
            rat_to_f64(&value) >= floor_value - tol,
            "value {} below {floor_value}",
            rat_to_f64(&value)
        );
    }

    // Random small instances against the exact optimum.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for round in 0..12 {
        let inst = random_instance(&mut rng, 8, 8);
        let (exact, _) = exact_mlcp(&inst, &caps).unwrap();
        let (approx, sched) =
            garg_koenemann(&inst, 0.1, OracleMode::Exact, &caps).unwrap();
        schedule_feasible(&inst, &sched).unwrap();
        assert!(approx <= exact, "round {round}: value above the optimum");
        assert!(
            rat_to_f64(&approx) >= rat_to_f64(&exact) / 1.1 - tol,
            "round {round}: {} below {}/1.1",
            rat_to_f64(&approx),
            rat_to_f64(&exact)
        );
    }
    println!("[PASS] 9: fractional solver within the 1.1 ratio on pinned and random instances");
}

#[test]
fn criterion_10_grouped_covers_multiply_coverage() {
    let mut groups_checked = 0usize;
    for round in 0..40u64 {
        // Dense instances so the colouring yields several covers to group.
        let inst = gen_random(24, 192, 2, 6, round).unwrap();
        let family = colour(&inst, round).unwrap().family;
        for k in 1..=family.len() {
            let grouped = group_k(&family, k);
            assert_eq!(grouped.len(), family.len() / k, "k={k}");
            for cover in &grouped.covers {
                for e in 0..inst.n() {
                    let hits = cover
                        .iter()
                        .filter(|&&j| inst.subsets()[j].binary_search(&e).is_ok())
                        .count();
                    assert!(hits >= k, "element {e} seen {hits} < {k} times");
                }
                groups_checked += 1;
            }
        }
        assert!(group_k(&family, family.len() + 1).is_empty());
    }
    assert!(groups_checked > 100);
    println!("[PASS] 10: {groups_checked} grouped covers all met their coverage multiplicity");
}

#[test]
fn criterion_11_every_family_and_schedule_verifies() {
    let caps = OracleCaps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut pool: Vec<Instance> =
        vec![triangle(), four_subset_example(), block_instance(10, 3, 4)];
    for _ in 0..10 {
        pool.push(random_instance(&mut rng, 10, 12));
    }
    for _ in 0..5 {
        pool.push(random_interval_instance(&mut rng));
    }
    for _ in 0..5 {
        pool.push(random_two_frequency_instance(&mut rng));
    }

    let mut families = 0usize;
    let mut schedules = 0usize;
    let mut violations = 0usize;
    for (i, inst) in pool.iter().enumerate() {
        let seed = 1_000 + i as u64;
        let f_min = stats(inst).f_min;
        let f_min_rat = rat_from_usize(f_min);

        let mut produced: Vec<CoverFamily> = vec![
            colour(inst, seed).unwrap().family,
            run_expcover(inst, seed).unwrap().family,
            graph_partition(inst, seed).unwrap().family,
            solve_lll(inst, seed).unwrap().family,
        ];
        match solve_1d(inst) {
            Ok(report) => produced.push(report.family),
            Err(Error::NotInterval(_)) => {}
            Err(e) => panic!("unexpected interval-solver error: {e}"),
        }
        match twocolour::solve(inst) {
            Ok(report) => produced.push(report.family),
            Err(Error::FrequencyNotTwo { .. }) => {}
            Err(e) => panic!("unexpected two-frequency error: {e}"),
        }
        if within_caps(inst, &caps) {
            produced.push(brute_dscp(inst, &caps).unwrap().1);
        }
        for family in &produced {
            families += 1;
            if !verify(inst, family).is_valid() || family.len() > f_min {
                violations += 1;
            }
        }

        if within_caps(inst, &caps) {
            let (value, sched) = exact_mlcp(inst, &caps).unwrap();
            schedules += 1;
            if schedule_feasible(inst, &sched).is_err() || value > f_min_rat {
                violations += 1;
            }
        }
        let mode = if within_caps(inst, &caps) {
            OracleMode::Exact
        } else {
            OracleMode::Greedy
        };
        let (value, sched) = garg_koenemann(inst, 0.1, mode, &caps).unwrap();
        schedules += 1;
        if schedule_feasible(inst, &sched).is_err() || value > f_min_rat {
            violations += 1;
        }
    }
    assert_eq!(violations, 0, "violations across the suite");
    println!(
        "[PASS] 11: {families} families and {schedules} schedules, all verified, all within the frequency bound"
    );
}
