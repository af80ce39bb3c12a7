//! Exact solver for instances where every element lies in exactly two
//! subsets.
//!
//! Such an instance is a multigraph on the subsets: each element is an edge
//! between its two hosts.  Two disjoint covers exist exactly when that graph
//! is bipartite (the covers would properly 2-colour every edge), so the
//! answer is 2 on bipartite instances and 1 otherwise — and the frequency
//! bound says 2 is the most possible.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::instance::{CoverFamily, Instance};

#[derive(Clone, Debug)]
pub struct TwoFrequencyReport {
    pub bipartite: bool,
    pub family: CoverFamily,
}

/// Solve a frequency-2 instance exactly.
pub fn solve(inst: &Instance) -> Result<TwoFrequencyReport> {
    let mem = inst.memberships();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); inst.subset_count()];
    for (e, hosts) in mem.iter().enumerate() {
        if hosts.len() != 2 {
            return Err(Error::FrequencyNotTwo {
                element: e,
                freq: hosts.len(),
            });
        }
        adj[hosts[0]].push(hosts[1]);
        adj[hosts[1]].push(hosts[0]);
    }

    let mut side = vec![usize::MAX; inst.subset_count()];
    let mut bipartite = true;
    'outer: for root in 0..inst.subset_count() {
        if side[root] != usize::MAX {
            continue;
        }
        side[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if side[w] == usize::MAX {
                    side[w] = 1 - side[v];
                    queue.push_back(w);
                } else if side[w] == side[v] {
                    bipartite = false;
                    break 'outer;
                }
            }
        }
    }

    let family = if bipartite {
        CoverFamily {
            covers: (0..2)
                .map(|s| {
                    (0..inst.subset_count())
                        .filter(|&j| side[j] == s)
                        .collect()
                })
                .collect(),
        }
    } else {
        CoverFamily {
            covers: vec![(0..inst.subset_count()).collect()],
        }
    };
    Ok(TwoFrequencyReport { bipartite, family })
}
