//! Phased colouring solver for instances whose elements co-occur with few
//! others.
//!
//! The plain colouring supports `f_min / ln(n ln n)` covers.  When every
//! element shares subsets with at most `delta_tau` others, one can do better:
//! colour the subsets in phases, freezing an element's neighbourhood as soon
//! as the element has spent its per-phase budget of subsets while a colour is
//! still missing.  Failed (saved) elements clump into small connected
//! components — each phase repeats its random colouring until the largest
//! component is within a logarithmic cap — and after the last phase those
//! small leftovers are coloured deterministically.  The colour count works
//! out to `f_min / (c ln delta_tau)`, beating the plain bound whenever
//! co-occurrence is genuinely local.
//!
//! Recolouring a saved region can invalidate a neighbouring element that was
//! already complete, which the classical description glosses over.  This
//! implementation therefore recomputes every element's status against the
//! actual global colouring after each phase, and iterates the final stage
//! until no element is missing a colour (or a round cap is hit); the
//! returned family is extracted from the real colouring, never from
//! bookkeeping.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::colouring::{colour, colour_derandomized, num_colours};
use crate::error::{Error, Result};
use crate::instance::{stats, verify, CoverFamily, Instance, Stats};

/// Attempts allowed per phase before giving up on the component cap.
pub const PHASE_RETRY_LIMIT: usize = 64;
/// Recolouring rounds allowed in the final stage.
pub const FINAL_ROUND_LIMIT: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeStatus {
    Unprocessed,
    Good,
    Frozen,
    Neutral,
}

/// Derived constants of the phase schedule.
#[derive(Clone, Debug)]
pub struct ExpParams {
    /// Number of phases: how often a logarithm may be iterated on `n` before
    /// dropping below `delta_tau`.
    pub p: usize,
    /// Constant in `ell = f_min / (c ln delta_tau)`.
    pub c: f64,
    /// Phase colour count.
    pub ell: usize,
    /// Freeze probability bound `ell (1 - 1/ell)^(f_min / p)`.
    pub q: f64,
    /// Component budget `log(2n) / log(delta_tau)`.
    pub k: f64,
    /// Saved components larger than `k * delta_tau^3` trigger a phase retry.
    pub component_cap: f64,
    /// A hyperedge freezes at exactly this many vertices coloured in a phase.
    pub threshold: usize,
}

/// Snapshot of one phase attempt.  Hyperedges are elements, vertices are
/// subsets; `hosts[e]` lists the subsets containing element `e`.
#[derive(Clone, Debug)]
pub struct PhaseState {
    pub phase: usize,
    pub status: Vec<EdgeStatus>,
    /// Elements participating in this phase.
    pub live: Vec<bool>,
    /// Vertices coloured this phase, per element.
    pub coloured_count: Vec<usize>,
    pub frozen_vertices: Vec<bool>,
    /// Colour assigned this phase, per vertex.
    pub colours: Vec<Option<usize>>,
    pub hosts: Vec<Vec<usize>>,
}

/// One freeze, as it happened; `coloured` always equals the threshold.
#[derive(Clone, Debug)]
pub struct FreezeEvent {
    pub phase: usize,
    pub edge: usize,
    pub coloured: usize,
    pub missing: usize,
}

#[derive(Clone, Debug)]
pub struct ExpReport {
    /// Set when the phase schedule did not apply and the plain colouring
    /// (or a trivial construction) answered instead.
    pub fallback: bool,
    pub params: Option<ExpParams>,
    pub phases_run: usize,
    pub retries_per_phase: Vec<usize>,
    pub freeze_events: Vec<FreezeEvent>,
    /// Elements still incomplete when the phases ended.
    pub final_live: usize,
    pub largest_final_component: usize,
    pub final_rounds: usize,
    /// Colours used by the final stage (the phase count when nothing was
    /// left to fix).
    pub ell_final: usize,
    pub guarantee: usize,
    pub family: CoverFamily,
}

/// Largest `p` with `ln ln ... (p times) n >= delta_tau`.
pub fn compute_p(n: usize, delta_tau: usize) -> Result<usize> {
    if delta_tau < 2 {
        return Err(Error::DegenerateExpansiveness {
            delta_tau: delta_tau as f64,
        });
    }
    let dt = delta_tau as f64;
    let mut v = (n as f64).ln();
    if v < dt {
        return Err(Error::PhaseScheduleUndefined { ln_n: v, delta_tau: dt });
    }
    let mut p = 0;
    while v >= dt {
        p += 1;
        v = v.ln();
    }
    Ok(p)
}

fn freeze_q(ell: f64, exponent: f64) -> f64 {
    if ell <= 1.0 {
        return 0.0;
    }
    ell * (1.0 - 1.0 / ell).powf(exponent)
}

/// Solve `ell (1 - 1/ell)^(f_min/p) = delta_tau^-5 / 8` for `ell` and return
/// `(c, floor(ell))` with `c = f_min / (ell ln delta_tau)`.  When even two
/// colours overshoot the target, fall back to one colour.
pub fn compute_c(f_min: usize, delta_tau: usize, p: usize) -> (f64, usize) {
    assert!(delta_tau >= 2 && p >= 1);
    let dt = delta_tau as f64;
    let target = dt.powi(-5) / 8.0;
    let exponent = f_min as f64 / p as f64;
    if freeze_q(2.0, exponent) > target {
        return (f_min as f64 / dt.ln(), 1);
    }
    let mut lo = 2.0_f64;
    let mut hi = (f_min as f64).max(4.0);
    while freeze_q(hi, exponent) < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if freeze_q(mid, exponent) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    (f_min as f64 / (root * dt.ln()), root.floor() as usize)
}

/// All phase-schedule constants for an instance, or the error explaining why
/// the schedule does not apply.
pub fn exp_params(st: &Stats) -> Result<ExpParams> {
    let n = st.freq.len();
    let p = compute_p(n, st.delta_tau)?;
    let (c, ell) = compute_c(st.f_min, st.delta_tau, p);
    let dt = st.delta_tau as f64;
    let threshold = st.f_min.div_ceil(p);
    let k = (2.0 * n as f64).ln() / dt.ln();
    Ok(ExpParams {
        p,
        c,
        ell,
        q: freeze_q(ell as f64, st.f_min as f64 / p as f64),
        k,
        component_cap: k * dt.powi(3),
        threshold,
    })
}

/// Run one phase attempt: colour the vertices of the live elements in index
/// order, freezing an element's whole neighbourhood the moment it reaches
/// `threshold` coloured vertices with a colour still missing.
fn phase_attempt(
    inst: &Instance,
    hosts: &[Vec<usize>],
    live: &[bool],
    ell: usize,
    threshold: usize,
    phase: usize,
    seed: u64,
    events: &mut Vec<FreezeEvent>,
) -> PhaseState {
    let n = inst.n();
    let m = inst.subset_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = PhaseState {
        phase,
        status: vec![EdgeStatus::Unprocessed; n],
        live: live.to_vec(),
        coloured_count: vec![0; n],
        frozen_vertices: vec![false; m],
        colours: vec![None; m],
        hosts: hosts.to_vec(),
    };
    let mut in_phase = vec![false; m];
    for e in 0..n {
        if live[e] {
            for &v in &hosts[e] {
                in_phase[v] = true;
            }
        }
    }
    let mut present = vec![false; n * ell];

    for v in 0..m {
        if !in_phase[v] || state.frozen_vertices[v] {
            continue;
        }
        let colour = rng.random_range(0..ell);
        state.colours[v] = Some(colour);
        for &e in &inst.subsets()[v] {
            if !live[e] || state.status[e] == EdgeStatus::Frozen {
                continue;
            }
            state.coloured_count[e] += 1;
            present[e * ell + colour] = true;
            if state.coloured_count[e] == threshold {
                let missing = (0..ell).filter(|&c| !present[e * ell + c]).count();
                if missing > 0 {
                    state.status[e] = EdgeStatus::Frozen;
                    events.push(FreezeEvent {
                        phase,
                        edge: e,
                        coloured: threshold,
                        missing,
                    });
                    for &w in &hosts[e] {
                        state.frozen_vertices[w] = true;
                    }
                }
            }
        }
    }

    for e in 0..n {
        if !live[e] || state.status[e] == EdgeStatus::Frozen {
            continue;
        }
        let complete = (0..ell).all(|c| present[e * ell + c]);
        state.status[e] = if complete {
            EdgeStatus::Good
        } else {
            EdgeStatus::Neutral
        };
    }
    state
}

/// One seeded phase attempt over the whole instance, with explicit colour
/// count and freeze threshold.  Used to measure freeze frequencies and
/// component sizes without running the full pipeline.
pub fn phase_probe(inst: &Instance, ell: usize, threshold: usize, seed: u64) -> PhaseState {
    let hosts = inst.memberships();
    let live = vec![true; inst.n()];
    let mut events = Vec::new();
    phase_attempt(inst, &hosts, &live, ell, threshold, 1, seed, &mut events)
}

fn components_over(edges: &[usize], hosts: &[Vec<usize>], m: usize) -> Vec<Vec<usize>> {
    let mut vertex_edges: Vec<Vec<usize>> = vec![Vec::new(); m];
    for &e in edges {
        for &v in &hosts[e] {
            vertex_edges[v].push(e);
        }
    }
    let mut seen: std::collections::BTreeSet<usize> = edges.iter().copied().collect();
    let mut components = Vec::new();
    while let Some(&start) = seen.iter().next() {
        let mut comp = vec![start];
        seen.remove(&start);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(e) = queue.pop_front() {
            for &v in &hosts[e] {
                for &f in &vertex_edges[v] {
                    if seen.remove(&f) {
                        comp.push(f);
                        queue.push_back(f);
                    }
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

/// Connected components of the saved (frozen or neutral) elements, where two
/// elements are adjacent when they share a subset.
pub fn saved_components(state: &PhaseState) -> Vec<Vec<usize>> {
    let saved: Vec<usize> = (0..state.status.len())
        .filter(|&e| {
            state.live[e]
                && matches!(state.status[e], EdgeStatus::Frozen | EdgeStatus::Neutral)
        })
        .collect();
    components_over(&saved, &state.hosts, state.frozen_vertices.len())
}

/// Shortest distance between two elements in the co-occurrence graph
/// (adjacent = sharing a subset), or `None` if disconnected.
pub fn edge_distance(state: &PhaseState, from: usize, to: usize) -> Option<usize> {
    if from == to {
        return Some(0);
    }
    let m = state.frozen_vertices.len();
    let mut vertex_edges: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (e, hs) in state.hosts.iter().enumerate() {
        for &v in hs {
            vertex_edges[v].push(e);
        }
    }
    let mut dist = vec![usize::MAX; state.hosts.len()];
    dist[from] = 0;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(e) = queue.pop_front() {
        for &v in &state.hosts[e] {
            for &f in &vertex_edges[v] {
                if dist[f] == usize::MAX {
                    dist[f] = dist[e] + 1;
                    if f == to {
                        return Some(dist[f]);
                    }
                    queue.push_back(f);
                }
            }
        }
    }
    None
}

/// True when every pair of the given elements is at distance at least 3.
pub fn is_three_separated(state: &PhaseState, edges: &[usize]) -> bool {
    for (i, &a) in edges.iter().enumerate() {
        for &b in &edges[i + 1..] {
            if let Some(d) = edge_distance(state, a, b) {
                if d < 3 {
                    return false;
                }
            }
        }
    }
    true
}

fn incomplete_edges(
    hosts: &[Vec<usize>],
    colours: &[Option<usize>],
    ell: usize,
) -> Vec<bool> {
    hosts
        .iter()
        .map(|hs| {
            let mut present = vec![false; ell];
            for &v in hs {
                if let Some(c) = colours[v] {
                    if c < ell {
                        present[c] = true;
                    }
                }
            }
            present.iter().any(|p| !p)
        })
        .collect()
}

fn extract_valid_family(
    inst: &Instance,
    colours: &[Option<usize>],
    ell: usize,
) -> CoverFamily {
    // A colour class counts exactly when it covers every element.
    let covers = (0..ell)
        .filter_map(|c| {
            let class: Vec<usize> = (0..inst.subset_count())
                .filter(|&v| colours[v] == Some(c))
                .collect();
            if inst.first_uncovered(&class).is_none() {
                Some(class)
            } else {
                None
            }
        })
        .collect();
    CoverFamily { covers }
}

fn fallback_report(inst: &Instance, seed: u64) -> Result<ExpReport> {
    // Universes of one element: any single subset is a cover, and each
    // subset alone is one, so the family of all singletons is optimal.
    if inst.n() < 2 {
        let covers = (0..inst.subset_count()).map(|j| vec![j]).collect();
        let family = CoverFamily { covers };
        return Ok(ExpReport {
            fallback: true,
            params: None,
            phases_run: 0,
            retries_per_phase: Vec::new(),
            freeze_events: Vec::new(),
            final_live: 0,
            largest_final_component: 0,
            final_rounds: 0,
            ell_final: inst.subset_count(),
            guarantee: inst.subset_count(),
            family,
        });
    }
    let plain = colour(inst, seed)?;
    Ok(ExpReport {
        fallback: true,
        params: None,
        phases_run: 0,
        retries_per_phase: Vec::new(),
        freeze_events: Vec::new(),
        final_live: 0,
        largest_final_component: 0,
        final_rounds: 0,
        ell_final: plain.ell,
        guarantee: plain.guarantee,
        family: plain.family,
    })
}

/// Full pipeline: phase schedule where it applies, plain colouring where it
/// does not.  A pure function of `(inst, seed)`.
pub fn run_expcover(inst: &Instance, seed: u64) -> Result<ExpReport> {
    // When every subset watches the whole universe, each one alone is a
    // cover; no colouring can beat handing out the subsets one by one.
    if inst.subsets().iter().all(|s| s.len() == inst.n()) {
        let m = inst.subset_count();
        return Ok(ExpReport {
            fallback: true,
            params: None,
            phases_run: 0,
            retries_per_phase: Vec::new(),
            freeze_events: Vec::new(),
            final_live: 0,
            largest_final_component: 0,
            final_rounds: 0,
            ell_final: m,
            guarantee: m,
            family: CoverFamily {
                covers: (0..m).map(|j| vec![j]).collect(),
            },
        });
    }

    let st = stats(inst);
    let params = match exp_params(&st) {
        Ok(p) => p,
        Err(
            Error::DegenerateExpansiveness { .. } | Error::PhaseScheduleUndefined { .. },
        ) => {
            return fallback_report(inst, seed);
        }
        Err(e) => return Err(e),
    };
    if params.ell < 2 {
        return fallback_report(inst, seed);
    }

    let n = inst.n();
    let m = inst.subset_count();
    let hosts = inst.memberships();
    let ell = params.ell;
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut colours: Vec<Option<usize>> = vec![None; m];
    let mut live = vec![true; n];
    let mut freeze_events = Vec::new();
    let mut retries_per_phase = Vec::new();
    let mut phases_run = 0;

    for phase in 1..=params.p {
        if live.iter().all(|&l| !l) {
            break;
        }
        phases_run = phase;
        let mut retries = 0;
        let state = loop {
            let attempt_seed = master.random::<u64>();
            let mut attempt_events = Vec::new();
            let state = phase_attempt(
                inst,
                &hosts,
                &live,
                ell,
                params.threshold,
                phase,
                attempt_seed,
                &mut attempt_events,
            );
            let largest = saved_components(&state)
                .iter()
                .map(|c| c.len())
                .max()
                .unwrap_or(0);
            if (largest as f64) <= params.component_cap {
                freeze_events.extend(attempt_events);
                break state;
            }
            retries += 1;
            if retries >= PHASE_RETRY_LIMIT {
                return Err(Error::RetryLimit {
                    phase,
                    attempts: PHASE_RETRY_LIMIT,
                    cap: params.component_cap.floor() as usize,
                });
            }
        };
        retries_per_phase.push(retries);
        for v in 0..m {
            if let Some(c) = state.colours[v] {
                colours[v] = Some(c);
            }
        }
        // Honest bookkeeping: the next phase works on every element that is
        // incomplete under the real colouring, including formerly complete
        // ones whose subsets were just recoloured.
        live = incomplete_edges(&hosts, &colours, ell);
    }

    // Final stage: deterministically colour whatever is still incomplete,
    // iterating because a recoloured region can disturb its neighbours.
    let final_edges: Vec<usize> = (0..n).filter(|&e| live[e]).collect();
    let final_live = final_edges.len();
    let largest_final_component = components_over(&final_edges, &hosts, m)
        .iter()
        .map(|c| c.len())
        .max()
        .unwrap_or(0);

    let ell_final = if final_live == 0 {
        ell
    } else {
        let plain = if final_live >= 2 {
            num_colours(st.f_min, final_live)?.clamp(1, st.f_min)
        } else {
            st.f_min
        };
        plain.min(ell)
    };

    let mut final_rounds = 0;
    if final_live > 0 {
        let mut current = incomplete_edges(&hosts, &colours, ell_final);
        let mut prev_count = usize::MAX;
        while final_rounds < FINAL_ROUND_LIMIT {
            let todo: Vec<usize> = (0..n).filter(|&e| current[e]).collect();
            if todo.is_empty() || todo.len() >= prev_count {
                break;
            }
            prev_count = todo.len();
            final_rounds += 1;

            // Sub-instance of the incomplete elements with all their hosts.
            let mut vert_ids: Vec<usize> = todo
                .iter()
                .flat_map(|&e| hosts[e].iter().copied())
                .collect();
            vert_ids.sort_unstable();
            vert_ids.dedup();
            let edge_index: std::collections::BTreeMap<usize, usize> =
                todo.iter().enumerate().map(|(i, &e)| (e, i)).collect();
            let sub_subsets: Vec<Vec<usize>> = vert_ids
                .iter()
                .map(|&v| {
                    inst.subsets()[v]
                        .iter()
                        .filter_map(|e| edge_index.get(e).copied())
                        .collect()
                })
                .collect();
            let sub = Instance::unit(todo.len(), sub_subsets)
                .expect("incomplete elements keep all their hosts");
            let (sub_col, _) = colour_derandomized(&sub, ell_final, master.random::<u64>());
            for (i, &v) in vert_ids.iter().enumerate() {
                colours[v] = Some(sub_col.colours[i]);
            }
            current = incomplete_edges(&hosts, &colours, ell_final);
        }
    }

    let family = extract_valid_family(inst, &colours, ell);
    let guarantee = if final_live == 0 {
        ell
    } else {
        let denom = (final_live.max(2) as f64).ln();
        (ell_final as f64 - (ell_final as f64 / denom).floor()).max(1.0) as usize
    };
    debug_assert!(verify(inst, &family).is_valid());
    Ok(ExpReport {
        fallback: false,
        params: Some(params),
        phases_run,
        retries_per_phase,
        freeze_events,
        final_live,
        largest_final_component,
        final_rounds,
        ell_final,
        guarantee,
        family,
    })
}
