//! Minimum-weight matchings saturating the smaller side of a complete
//! bipartite graph, via the Hungarian method with potentials.

/// An edge weight of the bipartite graph: finite and possibly negative, or
/// `None` for an infinite weight.
pub type SignedWeight = Option<i128>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    /// `(row, column)` pairs, one per row, sorted by row.
    pub pairs: Vec<(usize, usize)>,
    pub total: i128,
}

/// Minimum-weight assignment of every row to a distinct column.
///
/// Returns `None` when there are more rows than columns or when every
/// saturating assignment uses an infinite weight. An empty row set yields
/// the empty matching.
pub fn min_weight_assignment(weights: &[Vec<SignedWeight>], cols: usize) -> Option<Matching> {
    let n = weights.len();
    if n == 0 {
        return Some(Matching {
            pairs: Vec::new(),
            total: 0,
        });
    }
    if n > cols {
        return None;
    }
    // Infinite entries become a penalty no all-finite assignment can reach.
    let spread: i128 = weights
        .iter()
        .map(|row| row.iter().flatten().map(|w| w.abs()).max().unwrap_or(0))
        .sum();
    let big = 2 * spread + 1;
    let cost = |i: usize, j: usize| weights[i][j].unwrap_or(big);

    // 1-based Hungarian over rows 1..=n and columns 1..=cols
    let inf = i128::MAX / 4;
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; cols + 1];
    let mut owner = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=cols {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = (1..=cols)
        .filter(|&j| owner[j] != 0)
        .map(|j| (owner[j] - 1, j - 1))
        .collect();
    pairs.sort_unstable();
    let mut total = 0i128;
    for &(i, j) in &pairs {
        total += weights[i][j]?;
    }
    Some(Matching { pairs, total })
}
