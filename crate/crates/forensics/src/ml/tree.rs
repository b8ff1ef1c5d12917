//! CART-style binary decision tree with gini impurity splits.

use crate::ml::FeatureMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Candidate-feature budget per split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MaxFeatures {
    /// floor(sqrt(feature count)), at least 1.
    Sqrt,
    All,
    Fixed(usize),
}

impl MaxFeatures {
    pub fn count(&self, n_features: usize) -> usize {
        match self {
            MaxFeatures::Sqrt => ((n_features as f64).sqrt() as usize).max(1),
            MaxFeatures::All => n_features,
            MaxFeatures::Fixed(k) => (*k).clamp(1, n_features),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig {
    pub max_features: MaxFeatures,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
    pub max_depth: Option<usize>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            max_features: MaxFeatures::Sqrt,
            min_samples_split: 2,
            min_samples_leaf: 1,
            max_depth: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        illicit: u32,
        licit: u32,
    },
    Split {
        feature: u32,
        threshold: f64,
        left: u32,
        right: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
    /// Un-normalized weighted impurity decrease accumulated per feature.
    pub importance: Vec<f64>,
}

fn gini(illicit: usize, licit: usize) -> f64 {
    let n = (illicit + licit) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let pi = illicit as f64 / n;
    let pl = licit as f64 / n;
    1.0 - pi * pi - pl * pl
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    child_gini: f64,
}

impl DecisionTree {
    /// Grows a tree to purity (or the configured limits) over the given
    /// sample rows. `y` holds 1 for illicit, 0 for licit, indexed by matrix
    /// row. Candidate features per split are drawn from `rng`, which makes
    /// training deterministic for a fixed generator state.
    pub fn fit(
        m: &FeatureMatrix,
        sample_rows: &[usize],
        y: &[u8],
        config: &TreeConfig,
        rng: &mut impl Rng,
    ) -> DecisionTree {
        let n_features = m.n_cols();
        let n_root = sample_rows.len().max(1) as f64;
        let mut nodes = vec![TreeNode::Leaf { illicit: 0, licit: 0 }];
        let mut importance = vec![0.0; n_features];
        let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(0, sample_rows.to_vec(), 0)];
        while let Some((slot, samples, depth)) = stack.pop() {
            let n_illicit = samples.iter().filter(|&&r| y[r] == 1).count();
            let n_licit = samples.len() - n_illicit;
            let leaf = TreeNode::Leaf {
                illicit: n_illicit as u32,
                licit: n_licit as u32,
            };
            let depth_capped = config.max_depth.is_some_and(|d| depth >= d);
            if n_illicit == 0
                || n_licit == 0
                || samples.len() < config.min_samples_split
                || depth_capped
            {
                nodes[slot] = leaf;
                continue;
            }
            let parent_gini = gini(n_illicit, n_licit);
            let k = config.max_features.count(n_features);
            let candidates = rand::seq::index::sample(rng, n_features, k).into_vec();
            let best = best_split(m, &samples, y, &candidates, n_illicit, config);
            let Some(best) = best else {
                nodes[slot] = leaf;
                continue;
            };
            if parent_gini - best.child_gini <= 1e-12 {
                nodes[slot] = leaf;
                continue;
            }
            importance[best.feature] +=
                samples.len() as f64 / n_root * (parent_gini - best.child_gini);
            let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = samples
                .iter()
                .partition(|&&r| m.value(r, best.feature) <= best.threshold);
            let left_slot = nodes.len();
            nodes.push(TreeNode::Leaf { illicit: 0, licit: 0 });
            let right_slot = nodes.len();
            nodes.push(TreeNode::Leaf { illicit: 0, licit: 0 });
            nodes[slot] = TreeNode::Split {
                feature: best.feature as u32,
                threshold: best.threshold,
                left: left_slot as u32,
                right: right_slot as u32,
            };
            stack.push((left_slot, left_rows, depth + 1));
            stack.push((right_slot, right_rows, depth + 1));
        }
        DecisionTree { nodes, importance }
    }

    /// 1 for illicit, 0 for licit; leaf majority with licit on ties.
    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                TreeNode::Leaf { illicit, licit } => {
                    return if illicit > licit { 1 } else { 0 };
                }
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature as usize] <= *threshold {
                        *left as usize
                    } else {
                        *right as usize
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], at: usize) -> usize {
            match &nodes[at] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => {
                    1 + walk(nodes, *left as usize).max(walk(nodes, *right as usize))
                }
            }
        }
        walk(&self.nodes, 0)
    }
}

fn best_split(
    m: &FeatureMatrix,
    samples: &[usize],
    y: &[u8],
    candidates: &[usize],
    n_illicit: usize,
    config: &TreeConfig,
) -> Option<BestSplit> {
    let n = samples.len();
    let n_licit = n - n_illicit;
    let mut best: Option<BestSplit> = None;
    let mut pairs: Vec<(f64, u8)> = Vec::with_capacity(n);
    for &feature in candidates {
        pairs.clear();
        pairs.extend(samples.iter().map(|&r| (m.value(r, feature), y[r])));
        pairs.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite feature values"));
        let mut left_illicit = 0usize;
        let mut left_licit = 0usize;
        for i in 0..n - 1 {
            if pairs[i].1 == 1 {
                left_illicit += 1;
            } else {
                left_licit += 1;
            }
            if pairs[i].0 >= pairs[i + 1].0 {
                continue;
            }
            let n_left = i + 1;
            let n_right = n - n_left;
            if n_left < config.min_samples_leaf || n_right < config.min_samples_leaf {
                continue;
            }
            let child = (n_left as f64 * gini(left_illicit, left_licit)
                + n_right as f64 * gini(n_illicit - left_illicit, n_licit - left_licit))
                / n as f64;
            if best.as_ref().is_none_or(|b| child < b.child_gini) {
                best = Some(BestSplit {
                    feature,
                    threshold: pairs[i].0 / 2.0 + pairs[i + 1].0 / 2.0,
                    child_gini: child,
                });
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{ClassLabel, TimeStep};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn matrix(rows: &[&[f64]]) -> FeatureMatrix {
        let cols = rows[0].len();
        FeatureMatrix::new(
            (0..rows.len()).map(|i| format!("r{i}")).collect(),
            (0..cols).map(|i| format!("f{i}")).collect(),
            rows.iter().flat_map(|r| r.iter().copied()).collect(),
            vec![ClassLabel::Unknown; rows.len()],
            vec![TimeStep(1); rows.len()],
        )
        .unwrap()
    }

    #[test]
    fn memorizes_xor_with_all_features() {
        let m = matrix(&[&[0.0, 0.0], &[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]]);
        let y = vec![0, 1, 1, 0];
        let config = TreeConfig {
            max_features: MaxFeatures::All,
            ..TreeConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let tree = DecisionTree::fit(&m, &[0, 1, 2, 3], &y, &config, &mut rng);
        for (i, want) in y.iter().enumerate() {
            assert_eq!(tree.predict_row(m.row(i)), *want);
        }
    }

    #[test]
    fn pure_node_stays_a_leaf() {
        let m = matrix(&[&[0.0], &[1.0]]);
        let y = vec![1, 1];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let tree = DecisionTree::fit(&m, &[0, 1], &y, &TreeConfig::default(), &mut rng);
        assert_eq!(tree.nodes.len(), 1);
        assert_eq!(tree.predict_row(&[0.5]), 1);
    }

    #[test]
    fn importance_lands_on_the_splitting_feature() {
        let m = matrix(&[&[0.0, 5.0], &[0.1, 5.0], &[0.9, 5.0], &[1.0, 5.0]]);
        let y = vec![0, 0, 1, 1];
        let config = TreeConfig {
            max_features: MaxFeatures::All,
            ..TreeConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let tree = DecisionTree::fit(&m, &[0, 1, 2, 3], &y, &config, &mut rng);
        assert!(tree.importance[0] > 0.0);
        assert_eq!(tree.importance[1], 0.0);
    }
}
