//! Exact rational simplex for small linear programs.
//!
//! Solves `max c·x  s.t.  A x ≤ b, x ≥ 0` with `b ≥ 0`, entirely in
//! arbitrary-precision rational arithmetic, so optima like 3/2 come out exact
//! rather than as 1.4999….  Bland's rule (always pick the lowest-index
//! candidate) rules out cycling; with `b ≥ 0` the slack basis is feasible and
//! no phase-one is needed.  Intended for oracle-sized problems — the tableau
//! is dense and the rationals are allowed to grow.

use num_traits::Zero;

use crate::rational::Rat;

#[derive(Clone, Debug)]
pub struct SimplexOutcome {
    pub value: Rat,
    pub solution: Vec<Rat>,
}

/// Maximise `objective · x` subject to `rows[i] · x ≤ rhs[i]` and `x ≥ 0`.
///
/// Panics if `rhs` has a negative entry or the program is unbounded; the
/// covering LPs built in this crate satisfy both preconditions by
/// construction (batteries are positive and every column has a positive
/// coefficient).
pub fn maximize(objective: &[Rat], rows: &[Vec<Rat>], rhs: &[Rat]) -> SimplexOutcome {
    let n = objective.len();
    let m = rows.len();
    assert_eq!(m, rhs.len());
    assert!(rhs.iter().all(|b| !b.is_negative()), "rhs must be non-negative");

    // Tableau columns: n structural variables, m slacks, rhs.
    let cols = n + m + 1;
    let mut t = vec![vec![Rat::zero(); cols]; m + 1];
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), n);
        for (j, a) in row.iter().enumerate() {
            t[i][j] = a.clone();
        }
        t[i][n + i] = Rat::from_integer(1.into());
        t[i][cols - 1] = rhs[i].clone();
    }
    // Objective row holds -c so that a positive reduced cost shows up as a
    // negative entry.
    for j in 0..n {
        t[m][j] = -objective[j].clone();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // Bland: entering variable is the lowest index with negative cost row.
        let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        // Ratio test; ties resolved by the lowest basis variable index.
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][cols - 1] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => &ratio < b || (&ratio == b && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave.expect("LP is unbounded; covering programs never are");
        pivot(&mut t, leave, enter);
        basis[leave] = enter;
    }

    let mut solution = vec![Rat::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            solution[var] = t[i][cols - 1].clone();
        }
    }
    let value = objective
        .iter()
        .zip(&solution)
        .fold(Rat::zero(), |acc, (c, x)| acc + c * x);
    SimplexOutcome { value, solution }
}

fn pivot(t: &mut [Vec<Rat>], row: usize, col: usize) {
    let p = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v /= &p;
    }
    for i in 0..t.len() {
        if i != row && !t[i][col].is_zero() {
            let factor = t[i][col].clone();
            for j in 0..t[i].len() {
                let delta = &t[row][j] * &factor;
                t[i][j] -= delta;
            }
        }
    }
}

trait RatSign {
    fn is_negative(&self) -> bool;
    fn is_positive(&self) -> bool;
}

impl RatSign for Rat {
    fn is_negative(&self) -> bool {
        num_traits::Signed::is_negative(self)
    }
    fn is_positive(&self) -> bool {
        num_traits::Signed::is_positive(self)
    }
}
