//! Exact reference solvers and schedule utilities.
//!
//! Everything here is deliberately slow-but-certain: brute force search,
//! exhaustive minimal-cover catalogues, and an exact rational LP.  The fast
//! algorithms elsewhere in the crate are tested against these oracles.  Caps
//! keep accidental use on large instances from hanging a test run.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::instance::{schedule_feasible, stats, CoverFamily, Instance, Schedule, ScheduleEntry};
use crate::rational::{rat_from_f64, Rat};
use crate::simplex;

/// Size limits for the exact solvers.
#[derive(Clone, Copy, Debug)]
pub struct OracleCaps {
    pub max_n: usize,
    pub max_subsets: usize,
    pub max_covers: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_n: 14,
            max_subsets: 16,
            max_covers: 5000,
        }
    }
}

/// Choice of column oracle for the covering subproblems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    Greedy,
    Exact,
}

/// Every minimal set cover of the instance (no member can be dropped).
#[derive(Clone, Debug)]
pub struct CoverCatalog {
    pub covers: Vec<Vec<usize>>,
}

fn element_masks(inst: &Instance) -> Result<(Vec<u64>, u64)> {
    if inst.n() > 64 {
        return Err(Error::CapExceeded(format!(
            "universe of {} elements is too large for exhaustive search",
            inst.n()
        )));
    }
    let masks = inst
        .subsets()
        .iter()
        .map(|s| s.iter().fold(0u64, |acc, &e| acc | (1u64 << e)))
        .collect();
    let full = if inst.n() == 64 {
        u64::MAX
    } else {
        (1u64 << inst.n()) - 1
    };
    Ok((masks, full))
}

/// Enumerate all minimal covers, erroring out when more than `max_covers`
/// exist.  Restricting attention to minimal covers loses nothing: any cover
/// can be shrunk to a minimal one, which only frees batteries.
pub fn minimal_covers(inst: &Instance, caps: &OracleCaps) -> Result<CoverCatalog> {
    enumerate_minimal(inst, caps.max_covers)
}

fn enumerate_minimal(inst: &Instance, max_covers: usize) -> Result<CoverCatalog> {
    let (masks, full) = element_masks(inst)?;
    let mem = inst.memberships();
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();

    fn dfs(
        covered: u64,
        chosen: &mut Vec<usize>,
        masks: &[u64],
        full: u64,
        mem: &[Vec<usize>],
        out: &mut BTreeSet<Vec<usize>>,
        max_covers: usize,
    ) -> Result<()> {
        if covered == full {
            // Minimality: every member must cover something the rest do not.
            let minimal = chosen.iter().all(|&drop| {
                let rest = chosen
                    .iter()
                    .filter(|&&j| j != drop)
                    .fold(0u64, |acc, &j| acc | masks[j]);
                rest != full
            });
            if minimal {
                let mut cover = chosen.clone();
                cover.sort_unstable();
                out.insert(cover);
                if out.len() > max_covers {
                    return Err(Error::CapExceeded(format!(
                        "more than {max_covers} minimal covers"
                    )));
                }
            }
            return Ok(());
        }
        let e = (!covered & full).trailing_zeros() as usize;
        for &j in &mem[e] {
            if chosen.contains(&j) {
                continue;
            }
            chosen.push(j);
            dfs(covered | masks[j], chosen, masks, full, mem, out, max_covers)?;
            chosen.pop();
        }
        Ok(())
    }

    dfs(0, &mut Vec::new(), &masks, full, &mem, &mut out, max_covers)?;
    Ok(CoverCatalog {
        covers: out.into_iter().collect(),
    })
}

fn check_brute_caps(inst: &Instance, caps: &OracleCaps) -> Result<()> {
    if inst.n() > caps.max_n {
        return Err(Error::CapExceeded(format!(
            "{} elements exceed the brute-force cap of {}",
            inst.n(),
            caps.max_n
        )));
    }
    if inst.subset_count() > caps.max_subsets {
        return Err(Error::CapExceeded(format!(
            "{} subsets exceed the brute-force cap of {}",
            inst.subset_count(),
            caps.max_subsets
        )));
    }
    Ok(())
}

/// Exact maximum number of pairwise disjoint set covers, with a witness.
///
/// Searches packings of minimal covers; replacing each cover of an optimal
/// packing by a minimal subcover keeps it disjoint, so this is lossless.
pub fn brute_dscp(inst: &Instance, caps: &OracleCaps) -> Result<(usize, CoverFamily)> {
    check_brute_caps(inst, caps)?;
    // The packing search needs the full catalogue even if it is larger than
    // the LP cap; the subset caps above already bound its size.
    let catalog = enumerate_minimal(inst, 1_000_000)?;
    let subset_masks: Vec<u64> = catalog
        .covers
        .iter()
        .map(|c| c.iter().fold(0u64, |acc, &j| acc | (1u64 << j)))
        .collect();
    let f_min = stats(inst).f_min;

    struct Search<'a> {
        masks: &'a [u64],
        f_min: usize,
        best: usize,
        best_set: Vec<usize>,
    }
    fn dfs(s: &mut Search, start: usize, used: u64, chosen: &mut Vec<usize>) {
        if chosen.len() > s.best {
            s.best = chosen.len();
            s.best_set = chosen.clone();
        }
        if s.best == s.f_min || chosen.len() + (s.masks.len() - start) <= s.best {
            return;
        }
        for i in start..s.masks.len() {
            if s.masks[i] & used == 0 {
                chosen.push(i);
                dfs(s, i + 1, used | s.masks[i], chosen);
                chosen.pop();
                if s.best == s.f_min {
                    return;
                }
            }
        }
    }

    let mut search = Search {
        masks: &subset_masks,
        f_min,
        best: 0,
        best_set: Vec::new(),
    };
    dfs(&mut search, 0, 0, &mut Vec::new());
    let family = CoverFamily {
        covers: search
            .best_set
            .iter()
            .map(|&i| catalog.covers[i].clone())
            .collect(),
    };
    Ok((search.best, family))
}

fn lp_over_covers(inst: &Instance, covers: &[Vec<usize>]) -> (Rat, Schedule) {
    let objective = vec![Rat::one(); covers.len()];
    let rows: Vec<Vec<Rat>> = (0..inst.subset_count())
        .map(|i| {
            covers
                .iter()
                .map(|c| {
                    if c.binary_search(&i).is_ok() {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                })
                .collect()
        })
        .collect();
    let out = simplex::maximize(&objective, &rows, inst.batteries());
    let entries = covers
        .iter()
        .zip(&out.solution)
        .filter(|(_, t)| t.is_positive())
        .map(|(c, t)| ScheduleEntry {
            cover: c.clone(),
            duration: t.clone(),
        })
        .collect();
    (out.value, Schedule { entries })
}

/// Exact optimal lifetime via the covering LP over all minimal covers,
/// solved in rational arithmetic.  The returned schedule is an optimal basic
/// solution, so it uses at most `|S|` covers.
pub fn exact_mlcp(inst: &Instance, caps: &OracleCaps) -> Result<(Rat, Schedule)> {
    let catalog = minimal_covers(inst, caps)?;
    let (value, sched) = lp_over_covers(inst, &catalog.covers);
    debug_assert!(sched.entries.len() <= inst.subset_count());
    Ok((value, sched))
}

/// Re-optimise a feasible schedule over its own covers only.  The result uses
/// at most `|S|` distinct covers and never loses value, because the input is
/// itself a feasible point of the restricted LP.
pub fn prune_schedule(inst: &Instance, sched: &Schedule) -> Result<Schedule> {
    schedule_feasible(inst, sched)?;
    let unique: BTreeSet<Vec<usize>> = sched
        .entries
        .iter()
        .map(|e| {
            let mut c: Vec<usize> = e.cover.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
            c.sort_unstable();
            c
        })
        .collect();
    let covers: Vec<Vec<usize>> = unique.into_iter().collect();
    let (_, pruned) = lp_over_covers(inst, &covers);
    Ok(pruned)
}

/// Rewrite a rational schedule as many copies of a single slot length
/// `T = 1 / lcm(denominators)`, preserving the value exactly.
pub fn to_uniform(sched: &Schedule, max_entries: usize) -> Result<Schedule> {
    let mut positive: Vec<&ScheduleEntry> = Vec::new();
    for (ei, e) in sched.entries.iter().enumerate() {
        if e.duration.is_negative() {
            return Err(Error::NegativeDuration { entry: ei });
        }
        if e.duration.is_positive() {
            positive.push(e);
        }
    }
    let durations: Vec<Rat> = positive.iter().map(|e| e.duration.clone()).collect();
    let c = crate::rational::denominator_lcm(&durations);
    let slot = Rat::new(BigInt::one(), c.clone());
    let mut entries = Vec::new();
    let mut total = BigInt::zero();
    for e in &positive {
        let copies = (&e.duration / &slot).to_integer();
        total += &copies;
        if total > BigInt::from(max_entries) {
            return Err(Error::CopyBudget {
                needed: total.to_string(),
                budget: max_entries,
            });
        }
        let copies = copies.to_usize().unwrap();
        for _ in 0..copies {
            entries.push(ScheduleEntry {
                cover: e.cover.clone(),
                duration: slot.clone(),
            });
        }
    }
    Ok(Schedule { entries })
}

/// Minimum-weight set cover.
///
/// Greedy mode repeatedly takes the subset with the best weight per newly
/// covered element (ties to the lowest index); exact mode branches on the
/// lowest uncovered element with weight pruning.
pub fn min_weight_cover(
    inst: &Instance,
    weights: &[f64],
    mode: OracleMode,
    caps: &OracleCaps,
) -> Result<Vec<usize>> {
    assert_eq!(weights.len(), inst.subset_count());
    debug_assert!(weights.iter().all(|w| w.is_finite() && *w >= 0.0));
    match mode {
        OracleMode::Greedy => Ok(greedy_cover(inst, weights)),
        OracleMode::Exact => {
            check_brute_caps(inst, caps)?;
            Ok(exact_cover(inst, weights))
        }
    }
}

fn greedy_cover(inst: &Instance, weights: &[f64]) -> Vec<usize> {
    let n = inst.n();
    let mut covered = vec![false; n];
    let mut remaining = n;
    let mut chosen = Vec::new();
    let mut in_cover = vec![false; inst.subset_count()];
    while remaining > 0 {
        let mut best: Option<(f64, usize)> = None;
        for (j, s) in inst.subsets().iter().enumerate() {
            if in_cover[j] {
                continue;
            }
            let new = s.iter().filter(|&&e| !covered[e]).count();
            if new == 0 {
                continue;
            }
            let ratio = weights[j] / new as f64;
            let better = match best {
                None => true,
                Some((b, _)) => ratio < b,
            };
            if better {
                best = Some((ratio, j));
            }
        }
        let (_, j) = best.expect("instance invariants guarantee coverage");
        in_cover[j] = true;
        chosen.push(j);
        for &e in &inst.subsets()[j] {
            if !covered[e] {
                covered[e] = true;
                remaining -= 1;
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

fn exact_cover(inst: &Instance, weights: &[f64]) -> Vec<usize> {
    let (masks, full) = element_masks(inst).expect("caps checked");
    let mut mem = inst.memberships();
    // Cheapest continuation first makes the pruning bite early.
    for list in &mut mem {
        list.sort_by(|&a, &b| {
            weights[a]
                .partial_cmp(&weights[b])
                .unwrap()
                .then(a.cmp(&b))
        });
    }

    struct Search<'a> {
        masks: &'a [u64],
        full: u64,
        mem: &'a [Vec<usize>],
        weights: &'a [f64],
        best_w: f64,
        best: Vec<usize>,
    }
    fn dfs(s: &mut Search, covered: u64, chosen: &mut Vec<usize>, acc: f64) {
        if covered == s.full {
            s.best_w = acc;
            s.best = chosen.clone();
            return;
        }
        let e = (!covered & s.full).trailing_zeros() as usize;
        for &j in &s.mem[e] {
            let w = acc + s.weights[j];
            if w >= s.best_w {
                // The membership list is weight-sorted, so everything after
                // this point is at least as expensive.
                break;
            }
            chosen.push(j);
            dfs(s, covered | s.masks[j], chosen, w);
            chosen.pop();
        }
    }

    let mut search = Search {
        masks: &masks,
        full,
        mem: &mem,
        weights,
        best_w: f64::INFINITY,
        best: Vec::new(),
    };
    dfs(&mut search, 0, &mut Vec::new(), 0.0);
    let mut best = search.best;
    best.sort_unstable();
    best
}

/// Multiplicative-weights approximation of the covering LP.
///
/// Repeatedly routes battery along the currently cheapest cover, inflating
/// the dual weight of every sensor it uses, then scales the accumulated
/// schedule back to exact feasibility in rational arithmetic.  With the exact
/// column oracle the value is within `1 + epsilon` of the LP optimum; greedy
/// mode is faster but only logarithmically close.
pub fn garg_koenemann(
    inst: &Instance,
    epsilon: f64,
    mode: OracleMode,
    caps: &OracleCaps,
) -> Result<(Rat, Schedule)> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::BadEpsilon(epsilon));
    }
    // Internal step size well below epsilon: the classic analysis loses
    // roughly (1 - e)^2, and the safety margin absorbs floating-point drift.
    let e = epsilon / 3.0;
    let m = inst.subset_count();
    let batteries: Vec<f64> = inst.batteries().iter().map(crate::rational::rat_to_f64).collect();
    let delta = (1.0 + e) * ((1.0 + e) * m as f64).powf(-1.0 / e);
    let mut y: Vec<f64> = batteries.iter().map(|b| delta / b).collect();
    let mut t: BTreeMap<Vec<usize>, f64> = BTreeMap::new();

    const MAX_ITERS: usize = 10_000_000;
    let mut iters = 0;
    loop {
        let d: f64 = y.iter().zip(&batteries).map(|(yi, bi)| yi * bi).sum();
        if d >= 1.0 {
            break;
        }
        iters += 1;
        if iters > MAX_ITERS {
            return Err(Error::SolverStall(MAX_ITERS));
        }
        let cover = min_weight_cover(inst, &y, mode, caps)?;
        let b_min = cover
            .iter()
            .map(|&j| batteries[j])
            .fold(f64::INFINITY, f64::min);
        *t.entry(cover.clone()).or_insert(0.0) += b_min;
        for &j in &cover {
            y[j] *= 1.0 + e * b_min / batteries[j];
        }
    }

    // Convert the raw accumulation exactly and scale it to the tightest
    // feasible multiple; this dominates the textbook log-factor scaling.
    let mut usage = vec![Rat::zero(); m];
    let mut raw: Vec<(Vec<usize>, Rat)> = Vec::new();
    for (cover, amount) in t {
        let amount = rat_from_f64(amount).expect("finite accumulation");
        for &j in &cover {
            usage[j] += &amount;
        }
        raw.push((cover, amount));
    }
    let scale = usage
        .iter()
        .zip(inst.batteries())
        .filter(|(u, _)| u.is_positive())
        .map(|(u, b)| b / u)
        .min()
        .expect("at least one cover was routed");
    let entries: Vec<ScheduleEntry> = raw
        .into_iter()
        .map(|(cover, amount)| ScheduleEntry {
            cover,
            duration: amount * &scale,
        })
        .collect();
    let sched = Schedule { entries };
    debug_assert!(schedule_feasible(inst, &sched).is_ok());
    Ok((sched.value(), sched))
}
