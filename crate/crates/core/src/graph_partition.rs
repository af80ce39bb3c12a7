//! Disjoint covers via an augmented colouring, useful when elements may be
//! rare.
//!
//! Add one virtual singleton subset per element.  Every element then occurs
//! at least twice, and the augmented instance can be coloured into disjoint
//! covers.  Any two of those covers contain at least two distinct hosts of
//! each element, at most one of which is virtual — so pairing covers and
//! stripping the virtual subsets yields genuine disjoint covers of the
//! original instance.

use crate::colouring::{colour_derandomized, extract_covers, num_colours};
use crate::error::Result;
use crate::instance::{stats, CoverFamily, Instance};

#[derive(Clone, Debug)]
pub struct PartitionReport {
    /// Colours used on the augmented instance.
    pub ell: usize,
    pub f_min_augmented: usize,
    /// Disjoint covers found for the augmented instance.
    pub augmented_covers: usize,
    /// Lower bound on the family size implied by the colouring guarantee.
    pub guarantee: usize,
    pub family: CoverFamily,
}

/// The instance plus one virtual singleton `{e}` per element `e`, appended
/// after the original subsets.
pub fn augment(inst: &Instance) -> Instance {
    let mut subsets: Vec<Vec<usize>> = inst.subsets().to_vec();
    subsets.extend((0..inst.n()).map(|e| vec![e]));
    Instance::unit(inst.n(), subsets).expect("augmentation preserves validity")
}

/// Degree of every subset in the intersection graph (edges join subsets that
/// share an element).
pub fn intersection_degrees(inst: &Instance) -> Vec<usize> {
    let m = inst.subset_count();
    let words = m.div_ceil(64);
    let mut row = vec![vec![0u64; words]; m];
    for hosts in inst.memberships() {
        for &a in &hosts {
            for &b in &hosts {
                row[a][b / 64] |= 1u64 << (b % 64);
            }
        }
    }
    (0..m)
        .map(|j| {
            let ones: u32 = row[j].iter().map(|w| w.count_ones()).sum();
            // The row includes the subset itself.
            ones as usize - 1
        })
        .collect()
}

/// Colour the augmented instance, pair consecutive covers, and strip the
/// virtual subsets.  An odd leftover cover is discarded; if no pair forms,
/// the family falls back to the single all-subsets cover.
pub fn graph_partition(inst: &Instance, seed: u64) -> Result<PartitionReport> {
    let aug = augment(inst);
    let m = inst.subset_count();
    let f_min_augmented = stats(inst).f_min + 1;
    debug_assert_eq!(stats(&aug).f_min, f_min_augmented);
    debug_assert_eq!(
        intersection_degrees(&aug).into_iter().min(),
        Some(f_min_augmented - 1)
    );

    let ell = if inst.n() >= 2 {
        num_colours(f_min_augmented, inst.n())?
            .clamp(1, f_min_augmented)
    } else {
        // One-element universes: every subset alone is a cover, and enough
        // colours make the derandomisation assign them all distinctly.
        f_min_augmented
    };
    let (colouring, _) = colour_derandomized(&aug, ell, seed);
    let augmented = extract_covers(&aug, &colouring);

    let mut covers = Vec::new();
    for pair in augmented.covers.chunks_exact(2) {
        let mut merged: Vec<usize> = pair
            .iter()
            .flatten()
            .copied()
            .filter(|&j| j < m)
            .collect();
        merged.sort_unstable();
        covers.push(merged);
    }
    let family = if covers.is_empty() {
        CoverFamily {
            covers: vec![(0..m).collect()],
        }
    } else {
        CoverFamily { covers }
    };

    let colour_guarantee = if inst.n() >= 2 {
        ell.saturating_sub((ell as f64 / (inst.n() as f64).ln()).floor() as usize)
    } else {
        ell
    };
    let guarantee = (colour_guarantee / 2).max(1);
    debug_assert!(family.len() >= guarantee);
    Ok(PartitionReport {
        ell,
        f_min_augmented,
        augmented_covers: augmented.len(),
        guarantee,
        family,
    })
}
