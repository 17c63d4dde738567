//! Dense linear assignment by shortest augmenting paths.
//!
//! Rows are inserted one at a time; each insertion runs a Dijkstra-style
//! search over reduced costs `c[i][j] - u[i] - v[j]` and augments along the
//! shortest alternating path. Dual feasibility is maintained throughout, so
//! the final assignment is optimal. O(n^3) in the worst case.

/// Minimum-cost perfect matching on a square cost matrix given row-major.
///
/// Returns `assignment` with `assignment[row] = column`.
pub fn solve(costs: &[f64], n: usize) -> Vec<usize> {
    assert_eq!(costs.len(), n * n, "cost matrix must be n x n");
    if n == 0 {
        return Vec::new();
    }

    // 1-based internal indexing; column 0 is the virtual source.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];

    for i in 1..=n {
        row_of_col[0] = i;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|x| *x = f64::INFINITY);
        used.iter_mut().for_each(|x| *x = false);

        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let row = &costs[(i0 - 1) * n..i0 * n];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;

            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = row[j - 1] - u[i0] - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }

            for j in 0..=n {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }

            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }

        loop {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if row_of_col[j] > 0 {
            assignment[row_of_col[j] - 1] = j - 1;
        }
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(costs: &[f64], n: usize, assignment: &[usize]) -> f64 {
        assignment.iter().enumerate().map(|(i, &j)| costs[i * n + j]).sum()
    }

    fn brute_force(costs: &[f64], n: usize) -> f64 {
        fn rec(costs: &[f64], n: usize, row: usize, used: &mut [bool], acc: f64, best: &mut f64) {
            if row == n {
                *best = best.min(acc);
                return;
            }
            for j in 0..n {
                if !used[j] {
                    used[j] = true;
                    rec(costs, n, row + 1, used, acc + costs[row * n + j], best);
                    used[j] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        rec(costs, n, 0, &mut vec![false; n], 0.0, &mut best);
        best
    }

    #[test]
    fn small_known_instance() {
        let costs = [4.0, 1.0, 3.0, 2.0, 0.0, 5.0, 3.0, 2.0, 2.0];
        let a = solve(&costs, 3);
        assert_eq!(total(&costs, 3, &a), 5.0);
    }

    #[test]
    fn empty_and_singleton() {
        assert!(solve(&[], 0).is_empty());
        assert_eq!(solve(&[7.5], 1), vec![0]);
    }

    #[test]
    fn is_a_bijection_and_matches_enumeration() {
        // deterministic pseudo-random costs
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for n in 1..=6 {
            for _ in 0..20 {
                let costs: Vec<f64> = (0..n * n).map(|_| next() * 10.0).collect();
                let a = solve(&costs, n);
                let mut seen = vec![false; n];
                for &j in &a {
                    assert!(!seen[j]);
                    seen[j] = true;
                }
                assert!((total(&costs, n, &a) - brute_force(&costs, n)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn handles_ties_and_negative_costs() {
        let costs = [-1.0, -1.0, -1.0, -1.0];
        let a = solve(&costs, 2);
        assert_eq!(total(&costs, 2, &a), -2.0);
    }
}
