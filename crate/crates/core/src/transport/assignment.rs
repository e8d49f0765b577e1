//! Exact minimum-cost perfect assignment.
//!
//! The solver runs the potential-based Hungarian method, then picks the
//! lexicographically smallest assignment among all optimal ones by walking
//! the graph of tight (zero reduced cost) edges row by row.

#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    /// `columns[i]` is the column matched to row `i`.
    pub columns: Vec<usize>,
    pub cost: f64,
}

fn assignment_cost(cost: &[Vec<f64>], columns: &[usize]) -> f64 {
    columns
        .iter()
        .enumerate()
        .fold(0.0, |acc, (i, &j)| acc + cost[i][j])
}

/// Returns the optimal assignment together with the dual potentials.
fn hungarian(cost: &[Vec<f64>]) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    let n = cost.len();
    // 1-based arrays; index 0 is the virtual start column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut columns = vec![0; n];
    for j in 1..=n {
        columns[row_of[j] - 1] = j - 1;
    }
    (columns, u[1..].to_vec(), v[1..].to_vec())
}

/// Kuhn augmenting path over `tight`, skipping columns in `taken`.
fn augment(
    row: usize,
    tight: &[Vec<bool>],
    taken: &[bool],
    seen: &mut [bool],
    owner: &mut [Option<usize>],
) -> bool {
    for j in 0..tight.len() {
        if tight[row][j] && !taken[j] && !seen[j] {
            seen[j] = true;
            if owner[j].map_or(true, |r| augment(r, tight, taken, seen, owner)) {
                owner[j] = Some(row);
                return true;
            }
        }
    }
    false
}

fn has_perfect_matching(tight: &[Vec<bool>], first_row: usize, taken: &[bool]) -> bool {
    let n = tight.len();
    let mut owner = vec![None; n];
    (first_row..n).all(|r| augment(r, tight, taken, &mut vec![false; n], &mut owner))
}

/// Minimum-cost perfect assignment of a square matrix.
///
/// Among optimal assignments the lexicographically smallest column vector
/// is returned. Panics if the matrix is not square.
pub fn min_cost_matching(cost: &[Vec<f64>]) -> Assignment {
    let n = cost.len();
    assert!(cost.iter().all(|r| r.len() == n), "cost matrix must be square");
    if n == 0 {
        return Assignment {
            columns: Vec::new(),
            cost: 0.0,
        };
    }
    let (optimal, u, v) = hungarian(cost);
    let optimal_cost = assignment_cost(cost, &optimal);

    let scale = cost
        .iter()
        .flatten()
        .fold(1.0f64, |m, c| m.max(c.abs()));
    let eps = 1e-10 * scale;
    let tight: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| cost[i][j] - u[i] - v[j] <= eps).collect())
        .collect();

    let mut taken = vec![false; n];
    let mut columns = Vec::with_capacity(n);
    for i in 0..n {
        let pick = (0..n).find(|&j| {
            if !tight[i][j] || taken[j] {
                return false;
            }
            taken[j] = true;
            let ok = has_perfect_matching(&tight, i + 1, &taken);
            taken[j] = false;
            ok
        });
        match pick {
            Some(j) => {
                taken[j] = true;
                columns.push(j);
            }
            // Rounding left the tight graph without a perfect matching.
            None => {
                return Assignment {
                    columns: optimal,
                    cost: optimal_cost,
                }
            }
        }
    }
    let refined_cost = assignment_cost(cost, &columns);
    if refined_cost <= optimal_cost + eps {
        Assignment {
            columns,
            cost: refined_cost,
        }
    } else {
        Assignment {
            columns: optimal,
            cost: optimal_cost,
        }
    }
}
