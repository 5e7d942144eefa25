//! Depth-limited regression trees grown level by level with exact greedy
//! splits on second-order gradient statistics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matrix::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    /// Minimum total sample weight on each side of a split.
    pub min_samples_leaf: f64,
    pub l2_reg: f64,
    pub min_gain: f64,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: 6,
            min_samples_leaf: 5.0,
            l2_reg: 1.0,
            min_gain: 1e-12,
        }
    }
}

/// Per-row views of the rows presorted by each feature, computed once per
/// matrix and reused across trees.
#[derive(Debug, Clone)]
pub struct SortedIndex {
    order: Vec<Vec<u32>>,
}

impl SortedIndex {
    pub fn new(x: &DenseMatrix) -> Self {
        let order = (0..x.n_cols())
            .into_par_iter()
            .map(|j| {
                let col = x.column(j);
                let mut idx: Vec<u32> = (0..x.n_rows() as u32).collect();
                idx.sort_by(|&a, &b| col[a as usize].total_cmp(&col[b as usize]).then(a.cmp(&b)));
                idx
            })
            .collect();
        Self { order }
    }
}

/// Flat node arrays. `feature < 0` marks a leaf.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub feature: Vec<i32>,
    pub threshold: Vec<f64>,
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    pub value: Vec<f64>,
    pub gain: Vec<f64>,
}

impl Tree {
    fn push_leaf(&mut self, value: f64) -> usize {
        self.feature.push(-1);
        self.threshold.push(0.0);
        self.left.push(0);
        self.right.push(0);
        self.value.push(value);
        self.gain.push(0.0);
        self.feature.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.feature.len()
    }

    pub fn leaf_of(&self, row: &[f64]) -> usize {
        let mut n = 0;
        while self.feature[n] >= 0 {
            let f = self.feature[n] as usize;
            n = if row[f] <= self.threshold[n] {
                self.left[n]
            } else {
                self.right[n]
            } as usize;
        }
        n
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.value[self.leaf_of(row)]
    }

    fn leaf_of_matrix(&self, x: &DenseMatrix, i: usize) -> usize {
        let mut n = 0;
        while self.feature[n] >= 0 {
            let f = self.feature[n] as usize;
            n = if x.get(i, f) <= self.threshold[n] {
                self.left[n]
            } else {
                self.right[n]
            } as usize;
        }
        n
    }

    pub fn predict_matrix(&self, x: &DenseMatrix, i: usize) -> f64 {
        self.value[self.leaf_of_matrix(x, i)]
    }

    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.value {
            *v *= factor;
        }
    }

    /// Total split gain per feature.
    pub fn add_gains(&self, into: &mut [f64]) {
        for (n, &f) in self.feature.iter().enumerate() {
            if f >= 0 {
                into[f as usize] += self.gain[n];
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Stats {
    g: f64,
    h: f64,
    w: f64,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    gain: f64,
    feature: usize,
    threshold: f64,
}

fn score(s: Stats, l2: f64) -> f64 {
    s.g * s.g / (s.h + l2)
}

fn leaf_value(s: Stats, l2: f64) -> f64 {
    if s.h + l2 <= 0.0 {
        0.0
    } else {
        -s.g / (s.h + l2)
    }
}

fn better(a: &Option<Candidate>, b: &Candidate) -> bool {
    match a {
        None => true,
        Some(a) => b.gain > a.gain || (b.gain == a.gain && b.feature < a.feature),
    }
}

/// Fits one tree to gradients `grad` and hessians `hess`. Rows with zero
/// weight do not participate. `features` restricts the candidate columns.
pub fn fit_tree(
    x: &DenseMatrix,
    index: &SortedIndex,
    grad: &[f64],
    hess: &[f64],
    weight: &[f64],
    features: &[usize],
    params: &TreeParams,
) -> Tree {
    let n = x.n_rows();
    const NONE: u32 = u32::MAX;
    let mut tree = Tree::default();

    let mut root = Stats::default();
    for i in 0..n {
        if weight[i] > 0.0 {
            root.g += grad[i] * weight[i];
            root.h += hess[i] * weight[i];
            root.w += weight[i];
        }
    }
    tree.push_leaf(leaf_value(root, params.l2_reg));
    // slot of each row among the nodes open at the current depth
    let mut slot_of: Vec<u32> = (0..n).map(|i| if weight[i] > 0.0 { 0 } else { NONE }).collect();
    let mut open: Vec<(usize, Stats)> = vec![(0, root)];

    for _depth in 0..params.max_depth {
        if open.is_empty() {
            break;
        }
        let k = open.len();
        let per_feature: Vec<Vec<Option<Candidate>>> = features
            .par_iter()
            .map(|&j| {
                let col = x.column(j);
                let mut left = vec![Stats::default(); k];
                let mut last = vec![f64::NAN; k];
                let mut best: Vec<Option<Candidate>> = vec![None; k];
                for &r in &index.order[j] {
                    let r = r as usize;
                    let s = slot_of[r];
                    if s == NONE {
                        continue;
                    }
                    let s = s as usize;
                    let v = col[r];
                    let l = left[s];
                    if l.w > 0.0 && last[s] < v {
                        let total = open[s].1;
                        let right = Stats {
                            g: total.g - l.g,
                            h: total.h - l.h,
                            w: total.w - l.w,
                        };
                        if l.w >= params.min_samples_leaf && right.w >= params.min_samples_leaf {
                            let gain = score(l, params.l2_reg) + score(right, params.l2_reg)
                                - score(total, params.l2_reg);
                            let a = last[s];
                            let mut threshold = a + (v - a) / 2.0;
                            if threshold >= v {
                                threshold = a;
                            }
                            let c = Candidate {
                                gain,
                                feature: j,
                                threshold,
                            };
                            if gain > params.min_gain && better(&best[s], &c) {
                                best[s] = Some(c);
                            }
                        }
                    }
                    left[s].g += grad[r] * weight[r];
                    left[s].h += hess[r] * weight[r];
                    left[s].w += weight[r];
                    last[s] = v;
                }
                best
            })
            .collect();

        let mut chosen: Vec<Option<Candidate>> = vec![None; k];
        for cands in &per_feature {
            for (s, c) in cands.iter().enumerate() {
                if let Some(c) = c {
                    if better(&chosen[s], c) {
                        chosen[s] = Some(*c);
                    }
                }
            }
        }

        // Create children and remap rows to the next level's slots.
        let mut next_open = Vec::new();
        let mut child_slots: Vec<Option<(u32, u32)>> = vec![None; k];
        let mut child_stats: Vec<(Stats, Stats)> = vec![(Stats::default(), Stats::default()); k];
        for i in 0..n {
            let s = slot_of[i];
            if s == NONE {
                continue;
            }
            if let Some(c) = chosen[s as usize] {
                let w = weight[i];
                let side = if x.get(i, c.feature) <= c.threshold {
                    &mut child_stats[s as usize].0
                } else {
                    &mut child_stats[s as usize].1
                };
                side.g += grad[i] * w;
                side.h += hess[i] * w;
                side.w += w;
            }
        }
        for (s, c) in chosen.iter().enumerate() {
            let Some(c) = c else { continue };
            let node = open[s].0;
            let (ls, rs) = child_stats[s];
            let l = tree.push_leaf(leaf_value(ls, params.l2_reg));
            let r = tree.push_leaf(leaf_value(rs, params.l2_reg));
            tree.feature[node] = c.feature as i32;
            tree.threshold[node] = c.threshold;
            tree.left[node] = l as u32;
            tree.right[node] = r as u32;
            tree.gain[node] = c.gain;
            tree.value[node] = 0.0;
            let ls_slot = next_open.len() as u32;
            next_open.push((l, ls));
            next_open.push((r, rs));
            child_slots[s] = Some((ls_slot, ls_slot + 1));
        }
        for i in 0..n {
            let s = slot_of[i];
            if s == NONE {
                continue;
            }
            slot_of[i] = match (chosen[s as usize], child_slots[s as usize]) {
                (Some(c), Some((l, r))) => {
                    if x.get(i, c.feature) <= c.threshold {
                        l
                    } else {
                        r
                    }
                }
                _ => NONE,
            };
        }
        open = next_open;
    }
    tree
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit(x: &DenseMatrix, y: &[f64], params: TreeParams) -> Tree {
        // squared loss around zero: g = -y, h = 1 gives mean-label leaves
        let grad: Vec<f64> = y.iter().map(|v| -v).collect();
        let hess = vec![1.0; y.len()];
        let w = vec![1.0; y.len()];
        let feats: Vec<usize> = (0..x.n_cols()).collect();
        fit_tree(x, &SortedIndex::new(x), &grad, &hess, &w, &feats, &params)
    }

    #[test]
    fn single_split_recovers_step() {
        let x = DenseMatrix::from_rows(&(0..10).map(|i| vec![i as f64, 0.0]).collect::<Vec<_>>());
        let y: Vec<f64> = (0..10).map(|i| if i < 4 { 0.0 } else { 1.0 }).collect();
        let t = fit(
            &x,
            &y,
            TreeParams {
                max_depth: 1,
                min_samples_leaf: 1.0,
                l2_reg: 0.0,
                min_gain: 1e-12,
            },
        );
        assert_eq!(t.feature[0], 0);
        assert_eq!(t.threshold[0], 3.5);
        assert_eq!(t.predict_row(&[2.0, 0.0]), 0.0);
        assert_eq!(t.predict_row(&[7.0, 0.0]), 1.0);
        let mut gains = vec![0.0; 2];
        t.add_gains(&mut gains);
        assert!(gains[0] > 0.0 && gains[1] == 0.0);
    }

    #[test]
    fn respects_min_leaf() {
        let x = DenseMatrix::from_rows(&(0..10).map(|i| vec![i as f64]).collect::<Vec<_>>());
        let y: Vec<f64> = (0..10).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
        let t = fit(
            &x,
            &y,
            TreeParams {
                max_depth: 3,
                min_samples_leaf: 3.0,
                l2_reg: 0.0,
                min_gain: 1e-12,
            },
        );
        let n = x.n_rows();
        for leaf in 0..t.node_count() {
            if t.feature[leaf] < 0 {
                let count = (0..n).filter(|&i| t.leaf_of(&x.row(i)) == leaf).count();
                assert!(count >= 3, "leaf {leaf} has {count} rows");
            }
        }
    }

    #[test]
    fn constant_feature_never_splits() {
        let x = DenseMatrix::from_rows(&(0..8).map(|_| vec![1.0]).collect::<Vec<_>>());
        let y: Vec<f64> = (0..8).map(|i| (i % 2) as f64).collect();
        let t = fit(&x, &y, TreeParams::default());
        assert_eq!(t.node_count(), 1);
    }

    #[test]
    fn xor_needs_depth_two() {
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for _ in 0..5 {
                    rows.push(vec![a as f64, b as f64]);
                    y.push(((a ^ b) as f64) * 1.0);
                }
            }
        }
        let x = DenseMatrix::from_rows(&rows);
        let t = fit(
            &x,
            &y,
            TreeParams {
                max_depth: 2,
                min_samples_leaf: 1.0,
                l2_reg: 0.0,
                min_gain: -1.0,
            },
        );
        for (r, &label) in rows.iter().zip(&y) {
            assert_eq!(t.predict_row(r), label);
        }
    }
}
