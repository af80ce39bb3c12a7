//! Problem instances and the shared result types.
//!
//! An instance is a universe of `n` targets together with a family of sensor
//! subsets; each subset is the set of targets its sensor monitors.  Batteries
//! default to one time unit.  Two result shapes are shared across solvers:
//!
//! * [`CoverFamily`] — pairwise disjoint set covers (the combinatorial answer),
//! * [`Schedule`] — covers with rational durations (the fractional answer).

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rat, parse_rat, rat_gcd, Rat};

/// Default ceiling on how many subset copies battery normalisation may create.
pub const DEFAULT_COPY_BUDGET: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    n: usize,
    subsets: Vec<Vec<usize>>,
    batteries: Vec<Rat>,
}

/// Frequency and co-occurrence statistics of an instance.
///
/// `tau[i]` counts the *other* targets that share at least one subset with
/// target `i`; `delta_tau` is its maximum, a measure of how entangled targets
/// are with each other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stats {
    pub freq: Vec<usize>,
    pub f_min: usize,
    pub f_max: usize,
    /// Largest subset size.
    pub r: usize,
    pub tau: Vec<usize>,
    pub delta_tau: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFamily {
    pub covers: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleEntry {
    pub cover: Vec<usize>,
    pub duration: Rat,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Schedule {
    pub entries: Vec<ScheduleEntry>,
}

/// Result of battery normalisation: a unit-battery instance whose subsets are
/// copies of the originals, plus the common battery unit that scales lifetimes
/// back to the original instance.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub instance: Instance,
    /// Value of one time unit of the normalised instance in original time.
    pub scale: Rat,
    /// `copies[j]` = how many copies of original subset `j` were created.
    pub copies: Vec<usize>,
    /// For each normalised subset, the original subset it copies.
    pub origin: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    subsets: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    batteries: Option<Vec<String>>,
}

impl Instance {
    /// Build an instance, validating every invariant: indices in range, no
    /// empty subset, every element covered, batteries positive.
    pub fn new(n: usize, subsets: Vec<Vec<usize>>, batteries: Option<Vec<Rat>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::UniverseTooSmall { need: 1, got: 0 });
        }
        let mut clean = Vec::with_capacity(subsets.len());
        let mut covered = vec![false; n];
        for (j, raw) in subsets.into_iter().enumerate() {
            let set: BTreeSet<usize> = raw.into_iter().collect();
            if set.is_empty() {
                return Err(Error::EmptySubset(j));
            }
            for &e in &set {
                if e >= n {
                    return Err(Error::ElementOutOfRange {
                        subset: j,
                        element: e,
                        n,
                    });
                }
                covered[e] = true;
            }
            clean.push(set.into_iter().collect());
        }
        if let Some(e) = covered.iter().position(|&c| !c) {
            return Err(Error::ElementUncovered(e));
        }
        let batteries = match batteries {
            Some(b) => {
                if b.len() != clean.len() {
                    return Err(Error::BatteryCount {
                        expected: clean.len(),
                        got: b.len(),
                    });
                }
                if let Some(j) = b.iter().position(|v| !v.is_positive()) {
                    return Err(Error::NonPositiveBattery(j));
                }
                b
            }
            None => vec![Rat::one(); clean.len()],
        };
        Ok(Instance {
            n,
            subsets: clean,
            batteries,
        })
    }

    /// Unit-battery instance.
    pub fn unit(n: usize, subsets: Vec<Vec<usize>>) -> Result<Self> {
        Instance::new(n, subsets, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn subset_count(&self) -> usize {
        self.subsets.len()
    }

    pub fn batteries(&self) -> &[Rat] {
        &self.batteries
    }

    pub fn has_unit_batteries(&self) -> bool {
        self.batteries.iter().all(|b| b.is_one())
    }

    /// For each element, the sorted list of subsets containing it.
    pub fn memberships(&self) -> Vec<Vec<usize>> {
        let mut mem = vec![Vec::new(); self.n];
        for (j, s) in self.subsets.iter().enumerate() {
            for &e in s {
                mem[e].push(j);
            }
        }
        mem
    }

    /// `None` if the listed subsets cover the universe, otherwise the first
    /// uncovered element.
    pub fn first_uncovered(&self, chosen: &[usize]) -> Option<usize> {
        let mut covered = vec![false; self.n];
        for &j in chosen {
            for &e in &self.subsets[j] {
                covered[e] = true;
            }
        }
        covered.iter().position(|&c| !c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        let batteries = match file.batteries {
            Some(raw) => Some(raw.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        Instance::new(file.n, file.subsets, batteries)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = InstanceFile {
            n: self.n,
            subsets: self.subsets.clone(),
            batteries: if self.has_unit_batteries() {
                None
            } else {
                Some(self.batteries.iter().map(format_rat).collect())
            },
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }
}

/// Compute frequency and co-occurrence statistics in one pass.
pub fn stats(inst: &Instance) -> Stats {
    let n = inst.n();
    let mut freq = vec![0usize; n];
    let mut r = 0usize;
    let words = n.div_ceil(64);
    // Bitset row per element: which other elements it shares a subset with.
    let mut co = vec![0u64; n * words];
    for s in inst.subsets() {
        r = r.max(s.len());
        for &e in s {
            freq[e] += 1;
            let row = &mut co[e * words..(e + 1) * words];
            for &f in s {
                row[f / 64] |= 1u64 << (f % 64);
            }
        }
    }
    let mut tau = vec![0usize; n];
    for e in 0..n {
        let row = &co[e * words..(e + 1) * words];
        let mut count: usize = row.iter().map(|w| w.count_ones() as usize).sum();
        // The row includes e itself; tau counts only the others.
        count -= 1;
        tau[e] = count;
    }
    let f_min = freq.iter().copied().min().unwrap_or(0);
    let f_max = freq.iter().copied().max().unwrap_or(0);
    let delta_tau = tau.iter().copied().max().unwrap_or(0);
    Stats {
        freq,
        f_min,
        f_max,
        r,
        tau,
        delta_tau,
    }
}

/// Reduce an instance with arbitrary positive rational batteries to an
/// equivalent unit-battery instance by cutting every battery into copies of
/// the common unit `B = gcd(b_1, ..., b_m)`.
///
/// Lifetime `t` on the result corresponds to lifetime `t * scale` on the
/// original.  Refuses when any subset would need more than `budget` copies.
pub fn normalize_batteries(inst: &Instance, budget: usize) -> Result<Normalized> {
    let b_com = inst
        .batteries()
        .iter()
        .skip(1)
        .fold(inst.batteries()[0].clone(), |acc, b| rat_gcd(&acc, b));
    let mut subsets = Vec::new();
    let mut copies = Vec::with_capacity(inst.subset_count());
    let mut origin = Vec::new();
    for (j, s) in inst.subsets().iter().enumerate() {
        let ratio = &inst.batteries()[j] / &b_com;
        debug_assert!(ratio.denom().is_one());
        let count = ratio.numer();
        let count = if count > &BigInt::from(budget) {
            return Err(Error::CopyBudget {
                needed: count.to_string(),
                budget,
            });
        } else {
            count.to_usize().unwrap()
        };
        for _ in 0..count {
            subsets.push(s.clone());
            origin.push(j);
        }
        copies.push(count);
    }
    if subsets.len() > budget {
        return Err(Error::CopyBudget {
            needed: subsets.len().to_string(),
            budget,
        });
    }
    Ok(Normalized {
        instance: Instance::unit(inst.n(), subsets)?,
        scale: b_com,
        copies,
        origin,
    })
}

/// Instance whose universe is the vertex set of a simple undirected graph and
/// whose subsets are the closed neighbourhoods `N(v) ∪ {v}`.
pub fn graph_to_set(vertices: usize, edges: &[(usize, usize)]) -> Result<Instance> {
    if vertices == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut nbhd: Vec<BTreeSet<usize>> = (0..vertices).map(|v| BTreeSet::from([v])).collect();
    for &(a, b) in edges {
        if a >= vertices || b >= vertices {
            return Err(Error::BadEdge(a, b, vertices));
        }
        nbhd[a].insert(b);
        nbhd[b].insert(a);
    }
    Instance::unit(
        vertices,
        nbhd.into_iter().map(|s| s.into_iter().collect()).collect(),
    )
}

/// Replace every subset by `c` identical copies (the unit-battery picture of
/// giving every sensor battery `c`).
pub fn replicate(inst: &Instance, c: usize, budget: usize) -> Result<Instance> {
    let total = inst.subset_count().checked_mul(c).unwrap_or(usize::MAX);
    if total > budget {
        return Err(Error::CopyBudget {
            needed: total.to_string(),
            budget,
        });
    }
    let mut subsets = Vec::with_capacity(total);
    for s in inst.subsets() {
        for _ in 0..c {
            subsets.push(s.clone());
        }
    }
    Instance::unit(inst.n(), subsets)
}

/// First reason a family fails to be a family of pairwise disjoint set covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    IndexOutOfRange { cover: usize, subset: usize },
    NotACover { cover: usize, element: usize },
    SubsetReused { subset: usize, covers: (usize, usize) },
    TooManyCovers { size: usize, f_min: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub violation: Option<Violation>,
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Check that `fam` is a family of pairwise disjoint set covers of `inst` and
/// that its size does not exceed the frequency bound `F_min`.
pub fn verify(inst: &Instance, fam: &CoverFamily) -> VerifyReport {
    // Size cap first: once covers are verified disjoint, exceeding F_min is
    // impossible (each cover consumes a distinct subset of a rarest element),
    // so checking it last would make the violation unreachable.
    let f_min = stats(inst).f_min;
    if fam.covers.len() > f_min {
        return VerifyReport {
            violation: Some(Violation::TooManyCovers {
                size: fam.covers.len(),
                f_min,
            }),
        };
    }
    let m = inst.subset_count();
    let mut used: Vec<Option<usize>> = vec![None; m];
    for (ci, cover) in fam.covers.iter().enumerate() {
        for &j in cover {
            if j >= m {
                return VerifyReport {
                    violation: Some(Violation::IndexOutOfRange {
                        cover: ci,
                        subset: j,
                    }),
                };
            }
            if let Some(prev) = used[j] {
                return VerifyReport {
                    violation: Some(Violation::SubsetReused {
                        subset: j,
                        covers: (prev, ci),
                    }),
                };
            }
            used[j] = Some(ci);
        }
        if let Some(e) = inst.first_uncovered(cover) {
            return VerifyReport {
                violation: Some(Violation::NotACover {
                    cover: ci,
                    element: e,
                }),
            };
        }
    }
    VerifyReport { violation: None }
}

impl CoverFamily {
    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Serialize, Deserialize)]
struct ScheduleEntryFile {
    cover: Vec<usize>,
    duration: String,
}

#[derive(Serialize, Deserialize)]
struct ScheduleFile {
    entries: Vec<ScheduleEntryFile>,
}

impl Schedule {
    /// Total lifetime: the sum of all entry durations.
    pub fn value(&self) -> Rat {
        self.entries
            .iter()
            .fold(Rat::zero(), |acc, e| acc + &e.duration)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScheduleFile = serde_json::from_str(text)?;
        let entries = file
            .entries
            .into_iter()
            .map(|e| {
                Ok(ScheduleEntry {
                    cover: e.cover,
                    duration: parse_rat(&e.duration)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Schedule { entries })
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ScheduleFile {
            entries: self
                .entries
                .iter()
                .map(|e| ScheduleEntryFile {
                    cover: e.cover.clone(),
                    duration: format_rat(&e.duration),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }
}

/// Check that a schedule only activates set covers, with non-negative
/// durations, and respects every battery.
pub fn schedule_feasible(inst: &Instance, sched: &Schedule) -> Result<()> {
    let mut used = vec![Rat::zero(); inst.subset_count()];
    for (ei, entry) in sched.entries.iter().enumerate() {
        if entry.duration.is_negative() {
            return Err(Error::NegativeDuration { entry: ei });
        }
        if let Some(e) = inst.first_uncovered(&entry.cover) {
            return Err(Error::ScheduleNotCovering {
                entry: ei,
                element: e,
            });
        }
        for &j in &entry.cover {
            used[j] += &entry.duration;
        }
    }
    for (j, u) in used.iter().enumerate() {
        if u > &inst.batteries()[j] {
            return Err(Error::ScheduleOverBudget {
                subset: j,
                used: format_rat(u),
                battery: format_rat(&inst.batteries()[j]),
            });
        }
    }
    Ok(())
}
