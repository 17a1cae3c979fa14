//! Assignment problem solvers.
//!
//! [`solve_hungarian`] is the general dense solver, used as an oracle and for
//! the non-embeddable branch bound. [`solve_tree_metric`] handles tree-metric
//! ground costs in linear time through the ℓ1 embedding.

use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::tree::{AnchorKey, MetricTree};

/// Largest instance the dense solver accepts.
pub const DENSE_CAP: usize = 4096;

/// Square cost matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix {
    n: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CostMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == n),
            "cost matrix must be square"
        );
        CostMatrix::from_fn(n, |i, j| rows[i][j])
    }

    /// The padded instance between `left` (n elements) and `right`
    /// (m elements): both sides are extended by dummies to `n + m`.
    /// `cost(None, _)` and `cost(_, None)` price the dummy pairs.
    pub fn padded<T>(
        left: &[T],
        right: &[T],
        mut cost: impl FnMut(Option<&T>, Option<&T>) -> f64,
    ) -> Self {
        let (n, m) = (left.len(), right.len());
        CostMatrix::from_fn(n + m, |i, j| cost(left.get(i), right.get(j)))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Total cost of a bijection given as `row -> column`.
    pub fn cost_of(&self, matching: &[usize]) -> f64 {
        matching
            .iter()
            .enumerate()
            .map(|(i, &j)| self.get(i, j))
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    pub cost: f64,
    /// `matching[row] = column`.
    pub matching: Vec<usize>,
}

/// Minimum-cost perfect matching by shortest augmenting paths with vertex
/// potentials, `O(n³)`. Rows are inserted in index order and columns scanned
/// ascending, so equal inputs yield equal matchings.
pub fn solve_hungarian(costs: &CostMatrix) -> Result<Assignment> {
    let n = costs.size();
    if n > DENSE_CAP {
        return Err(Error::InstanceTooLarge {
            size: n,
            cap: DENSE_CAP,
        });
    }
    if n == 0 {
        return Ok(Assignment {
            cost: 0.0,
            matching: Vec::new(),
        });
    }
    // 1-based arrays; column 0 is the virtual start.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|m| *m = f64::INFINITY);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = costs.get(i0 - 1, j - 1) - u[i0] - v[j];
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
    let mut matching = vec![0usize; n];
    for j in 1..=n {
        matching[owner[j] - 1] = j - 1;
    }
    let cost = costs.cost_of(&matching);
    Ok(Assignment { cost, matching })
}

/// Optimal assignment cost between two anchor multisets under the tree metric
/// of `tree`. Dummies anchor at the root and are implicit.
pub fn solve_tree_metric(
    left: &[AnchorKey],
    right: &[AnchorKey],
    tree: &MetricTree,
) -> Result<f64> {
    let a = Embedding::compute(left.iter().copied(), tree)?;
    let b = Embedding::compute(right.iter().copied(), tree)?;
    a.l1_distance(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostModel;
    use crate::tree::RawLayout;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_force(costs: &CostMatrix) -> f64 {
        fn rec(costs: &CostMatrix, row: usize, used: &mut Vec<bool>) -> f64 {
            if row == costs.size() {
                return 0.0;
            }
            let mut best = f64::INFINITY;
            for j in 0..costs.size() {
                if !used[j] {
                    used[j] = true;
                    best = best.min(costs.get(row, j) + rec(costs, row + 1, used));
                    used[j] = false;
                }
            }
            best
        }
        rec(costs, 0, &mut vec![false; costs.size()])
    }

    fn random_tree(rng: &mut impl Rng, nodes: usize, integer: bool) -> MetricTree {
        let mut parent = vec![None];
        let mut weight = vec![0.0];
        for i in 1..nodes {
            parent.push(Some(rng.gen_range(0..i) as u32));
            weight.push(if integer {
                rng.gen_range(0..=2) as f64
            } else {
                rng.gen_range(0.0..2.0)
            });
        }
        let anchors = (0..nodes as u32)
            .map(|n| (AnchorKey::Degree(n), n))
            .collect();
        MetricTree::from_raw(
            parent,
            weight,
            RawLayout::General {
                anchors,
                height: 0.0,
            },
        )
        .unwrap()
    }

    #[test]
    fn trivial_instances() {
        let one = CostMatrix::from_rows(&[vec![3.5]]);
        assert_eq!(
            solve_hungarian(&one).unwrap(),
            Assignment {
                cost: 3.5,
                matching: vec![0]
            }
        );
        let diag = CostMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(
            solve_hungarian(&diag).unwrap(),
            Assignment {
                cost: 0.0,
                matching: vec![0, 1]
            }
        );
        let empty = CostMatrix::from_rows(&[]);
        assert_eq!(solve_hungarian(&empty).unwrap().cost, 0.0);
    }

    #[test]
    fn padded_carbon_oxygen_instance() {
        // c_llb with c_v = c_vl = 1 between {C} and {C, O}
        let (carbon, oxygen) = (0u32, 1u32);
        let m = CostMatrix::padded(&[carbon], &[carbon, oxygen], |a, b| match (a, b) {
            (Some(x), Some(y)) => {
                if x == y {
                    0.0
                } else {
                    1.0
                }
            }
            (None, None) => 0.0,
            _ => 1.0,
        });
        assert_eq!(m.size(), 3);
        assert_eq!(brute_force(&m), 1.0);
        assert_eq!(solve_hungarian(&m).unwrap().cost, 1.0);

        let tree = MetricTree::label_tree(&[carbon, oxygen], &CostModel::uniform()).unwrap();
        let cost = solve_tree_metric(
            &[AnchorKey::Label(carbon)],
            &[AnchorKey::Label(carbon), AnchorKey::Label(oxygen)],
            &tree,
        )
        .unwrap();
        assert_eq!(cost, 1.0);
    }

    #[test]
    fn identical_multisets_cost_nothing() {
        let tree = MetricTree::degree_tree(4, &CostModel::uniform());
        let keys: Vec<_> = [1, 4, 2, 2].iter().map(|&d| AnchorKey::Degree(d)).collect();
        assert_eq!(solve_tree_metric(&keys, &keys, &tree).unwrap(), 0.0);
    }

    #[test]
    fn rejects_oversized_instances() {
        let m = CostMatrix::from_fn(DENSE_CAP + 1, |_, _| 0.0);
        assert!(matches!(
            solve_hungarian(&m),
            Err(Error::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn hungarian_beats_random_bijections() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 12;
        let m = CostMatrix::from_fn(n, |_, _| rng.gen_range(0.0..10.0));
        let best = solve_hungarian(&m).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        for _ in 0..1000 {
            perm.shuffle(&mut rng);
            assert!(best.cost <= m.cost_of(&perm) + 1e-9);
        }
    }

    #[test]
    fn tree_solver_matches_hungarian_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for round in 0..100 {
            let integer = round % 2 == 0;
            let nodes = rng.gen_range(1..=10);
            let tree = random_tree(&mut rng, nodes, integer);
            let a: Vec<_> = (0..rng.gen_range(0..=6))
                .map(|_| AnchorKey::Degree(rng.gen_range(0..nodes as u32)))
                .collect();
            let b: Vec<_> = (0..rng.gen_range(0..=6))
                .map(|_| AnchorKey::Degree(rng.gen_range(0..nodes as u32)))
                .collect();
            let m = CostMatrix::padded(&a, &b, |x, y| {
                let x = x.copied().unwrap_or(AnchorKey::Dummy);
                let y = y.copied().unwrap_or(AnchorKey::Dummy);
                tree.distance(x, y).unwrap()
            });
            let hungarian = solve_hungarian(&m).unwrap().cost;
            let embedded = solve_tree_metric(&a, &b, &tree).unwrap();
            if a.len() + b.len() <= 6 {
                assert!((brute_force(&m) - hungarian).abs() < 1e-9);
            }
            if integer {
                assert_eq!(hungarian, embedded);
            } else {
                assert!(
                    (hungarian - embedded).abs() <= 1e-9,
                    "{hungarian} vs {embedded}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn hungarian_is_optimal_on_small_matrices(
            raw in prop::collection::vec(0u8..20, 1..=25)
        ) {
            let n = (raw.len() as f64).sqrt() as usize;
            let m = CostMatrix::from_fn(n, |i, j| raw[i * n + j] as f64);
            let got = solve_hungarian(&m).unwrap();
            let mut cols = got.matching.clone();
            cols.sort_unstable();
            prop_assert_eq!(cols, (0..n).collect::<Vec<_>>());
            prop_assert_eq!(got.cost, brute_force(&m));
        }

        #[test]
        fn split_costs_are_superadditive(
            raw in prop::collection::vec((0u8..10, 0u8..10), 1..=16)
        ) {
            let n = (raw.len() as f64).sqrt() as usize;
            let c1 = CostMatrix::from_fn(n, |i, j| raw[i * n + j].0 as f64);
            let c2 = CostMatrix::from_fn(n, |i, j| raw[i * n + j].1 as f64);
            let sum = CostMatrix::from_fn(n, |i, j| c1.get(i, j) + c2.get(i, j));
            let lhs = solve_hungarian(&c1).unwrap().cost + solve_hungarian(&c2).unwrap().cost;
            prop_assert!(lhs <= solve_hungarian(&sum).unwrap().cost + 1e-9);
        }
    }
}
