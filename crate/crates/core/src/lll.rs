//! Disjoint covers via random resampling, for instances whose elements have
//! few co-occurring neighbours.
//!
//! When an element shares subsets with at most `delta_tau` other elements, a
//! "bad" pattern — some colour missing from some element's subsets — depends
//! on only few other bad patterns.  Choosing
//! `ell = f_min / ln(e * f_min * delta_tau)` colours keeps the product of
//! failure probability and dependency degree below `1/e`, so repeatedly
//! resampling the subsets of a failing element almost surely reaches a
//! colouring in which every colour class is a cover — all `ell` of them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::colouring::{extract_covers, Colouring};
use crate::error::{Error, Result};
use crate::instance::{stats, CoverFamily, Instance, Stats};

pub const DEFAULT_RESAMPLE_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct LllParams {
    /// Colour count from the co-occurrence (dependency) analysis.
    pub ell_dual: usize,
    /// Colour count from the subset-size analysis.
    pub ell_primal: usize,
    /// Colours actually used: the better of the two, at least 1.
    pub ell: usize,
    /// Bound on the probability that a fixed colour misses a fixed element.
    pub p_bad: f64,
    /// Bound on the number of bad patterns any single one depends on.
    pub dependency: usize,
    /// `e * p * (d + 1) <= 1`, the standard sufficient condition.
    pub condition_ok: bool,
    /// Set when `f_min * delta_tau < n`: the dependency-based colour count
    /// then beats the plain `ln`-based one.
    pub beats_plain: bool,
}

/// Colour counts and certificate numbers for the resampling solver.
///
/// Isolated elements (no co-occurrences) carry no dependencies at all; they
/// are treated as having one to keep the logarithms finite.
pub fn lll_params(st: &Stats) -> LllParams {
    let f = st.f_min as f64;
    let dt = st.delta_tau.max(1) as f64;
    let r = st.r as f64;
    let floor_pos = |x: f64| if x < 1.0 { 1 } else { x.floor() as usize };
    let ell_dual = floor_pos(f / (std::f64::consts::E * f * dt).ln());
    let ell_primal = floor_pos(f / (std::f64::consts::E * r * f * f).ln());
    let ell = ell_dual.max(ell_primal).max(1);
    let p_bad = 1.0 / (std::f64::consts::E * f * dt);
    let dependency = st.f_min * st.delta_tau.max(1) - 1;
    let condition = std::f64::consts::E * p_bad * (dependency as f64 + 1.0);
    LllParams {
        ell_dual,
        ell_primal,
        ell,
        p_bad,
        dependency,
        condition_ok: condition <= 1.0 + 1e-9,
        beats_plain: st.f_min * st.delta_tau < st.freq.len(),
    }
}

/// Resample until every element sees every colour.
///
/// The failing pattern with the lowest element index (then lowest missing
/// colour) is fixed by freshly recolouring all subsets of that element.
/// Errors out after `max_resamples` rounds.
pub fn moser_tardos(
    inst: &Instance,
    ell: usize,
    seed: u64,
    max_resamples: usize,
) -> Result<(Colouring, usize)> {
    assert!(ell >= 1);
    let mem = inst.memberships();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut colours: Vec<usize> = (0..inst.subset_count())
        .map(|_| rng.random_range(0..ell))
        .collect();
    let mut resamples = 0;
    'search: loop {
        // Scanning elements in index order and colours in value order fixes
        // the lowest failing pattern first, keeping runs reproducible.
        for hosts in &mem {
            let mut present = vec![false; ell];
            for &j in hosts {
                present[colours[j]] = true;
            }
            if present.iter().any(|p| !p) {
                resamples += 1;
                if resamples > max_resamples {
                    return Err(Error::ResampleLimit(max_resamples));
                }
                for &j in hosts {
                    colours[j] = rng.random_range(0..ell);
                }
                continue 'search;
            }
        }
        return Ok((
            Colouring {
                num_colours: ell,
                colours,
            },
            resamples,
        ));
    }
}

#[derive(Clone, Debug)]
pub struct LllReport {
    pub params: LllParams,
    pub resamples: usize,
    /// Exactly `params.ell` disjoint covers: termination certifies that
    /// every colour class covers everything.
    pub family: CoverFamily,
}

/// Full pipeline: derive the colour count, resample to a full colouring,
/// and return one cover per colour.
pub fn solve_lll(inst: &Instance, seed: u64) -> Result<LllReport> {
    let params = lll_params(&stats(inst));
    let (colouring, resamples) =
        moser_tardos(inst, params.ell, seed, DEFAULT_RESAMPLE_LIMIT)?;
    let family = extract_covers(inst, &colouring);
    debug_assert_eq!(family.len(), params.ell);
    Ok(LllReport {
        params,
        resamples,
        family,
    })
}
