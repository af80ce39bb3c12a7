//! Turning families of disjoint covers into schedules and multi-coverage
//! rosters.
//!
//! When every point must be watched by `k` sensors at once, `k` disjoint
//! covers bundled together do the job; `z` covers therefore yield
//! `floor(z / k)` rounds of k-coverage.

use crate::instance::{CoverFamily, Schedule, ScheduleEntry};
use crate::rational::rat_from_usize;

/// Run each cover for one time unit, in order.
pub fn schedule_from_covers(fam: &CoverFamily) -> Schedule {
    Schedule {
        entries: fam
            .covers
            .iter()
            .map(|c| ScheduleEntry {
                cover: c.clone(),
                duration: rat_from_usize(1),
            })
            .collect(),
    }
}

/// Bundle consecutive runs of `k` covers into one k-cover each; a leftover
/// run shorter than `k` is dropped.
pub fn group_k(fam: &CoverFamily, k: usize) -> CoverFamily {
    assert!(k >= 1, "coverage depth must be at least 1");
    let covers = fam
        .covers
        .chunks_exact(k)
        .map(|chunk| {
            let mut merged: Vec<usize> = chunk.iter().flatten().copied().collect();
            merged.sort_unstable();
            merged
        })
        .collect();
    CoverFamily { covers }
}

/// Serve epochs with varying coverage depths from a fixed supply of disjoint
/// covers.  Epoch `t` consumes the next `ks[t]` unused covers; epochs after
/// the supply runs dry are not served.
pub fn variable_k(fam: &CoverFamily, ks: &[usize]) -> CoverFamily {
    let mut next = 0;
    let mut covers = Vec::new();
    for &k in ks {
        assert!(k >= 1, "coverage depth must be at least 1");
        if next + k > fam.covers.len() {
            break;
        }
        let mut merged: Vec<usize> = fam.covers[next..next + k]
            .iter()
            .flatten()
            .copied()
            .collect();
        merged.sort_unstable();
        covers.push(merged);
        next += k;
    }
    CoverFamily { covers }
}
