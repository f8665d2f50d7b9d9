//! CART classification trees grown on bootstrap samples with Gini splits.
//!
//! Each tree draws its bootstrap sample from substream `tree_index` of the
//! forest seed. Feature subsets are drawn from a generator keyed by
//! `(seed, tree_index, node_id)`, where `node_id` is the heap position of the
//! node (root 1, children `2n` and `2n + 1`). A node's draws therefore do not
//! depend on how the rest of the tree was grown.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::{self, Draws};

/// Gini impurity `1 - Σ p_c²` of a two-class count pair.
pub fn gini_impurity(counts: [usize; 2]) -> Result<f64> {
    let n = counts[0] + counts[1];
    if n == 0 {
        return Err(Error::Domain("gini impurity of an empty node".into()));
    }
    Ok(gini(counts[0] as f64, counts[1] as f64))
}

#[inline]
fn gini(neg: f64, pos: f64) -> f64 {
    let n = neg + pos;
    let (p0, p1) = (neg / n, pos / n);
    1.0 - p0 * p0 - p1 * p1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RfHyperparams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_samples_split: usize,
    pub feature_fraction: f64,
}

impl Default for RfHyperparams {
    /// 100 trees, depth 10, split 2, fraction 0.33.
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_depth: 10,
            min_samples_split: 2,
            feature_fraction: 0.33,
        }
    }
}

const N_TREES: (f64, f64) = (10.0, 300.0);
const MAX_DEPTH: (f64, f64) = (2.0, 20.0);
const MIN_SPLIT: (f64, f64) = (2.0, 10.0);
const FRACTION: (f64, f64) = (0.1, 1.0);

fn round_half_up(v: f64) -> usize {
    (v + 0.5).floor() as usize
}

fn to_unit(v: f64, (lo, hi): (f64, f64)) -> f64 {
    ((v - lo) / (hi - lo)).clamp(0.0, 1.0)
}

impl RfHyperparams {
    /// Number of search coordinates.
    pub const DIM: usize = 4;

    pub fn validate(&self) -> Result<()> {
        let ok = (10..=300).contains(&self.n_trees)
            && (2..=20).contains(&self.max_depth)
            && (2..=10).contains(&self.min_samples_split)
            && (0.1..=1.0).contains(&self.feature_fraction);
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "hyperparameters out of range: {self:?}"
            )))
        }
    }

    /// Maps a point of the unit box (clamped) onto the hyperparameter ranges.
    pub fn decode(position: &[f64]) -> Result<Self> {
        if position.len() != Self::DIM {
            return Err(Error::Domain(format!(
                "hyperparameter position needs {} coordinates, got {}",
                Self::DIM,
                position.len()
            )));
        }
        let u: Vec<f64> = position
            .iter()
            .map(|v| if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) })
            .collect();
        let span = |(lo, hi): (f64, f64), u: f64| lo + u * (hi - lo);
        Ok(Self {
            n_trees: round_half_up(span(N_TREES, u[0])),
            max_depth: round_half_up(span(MAX_DEPTH, u[1])),
            min_samples_split: round_half_up(span(MIN_SPLIT, u[2])),
            feature_fraction: span(FRACTION, u[3]).clamp(FRACTION.0, FRACTION.1),
        })
    }

    /// Unit-box point that decodes back to `self`.
    pub fn encode(&self) -> Vec<f64> {
        vec![
            to_unit(self.n_trees as f64, N_TREES),
            to_unit(self.max_depth as f64, MAX_DEPTH),
            to_unit(self.min_samples_split as f64, MIN_SPLIT),
            to_unit(self.feature_fraction, FRACTION),
        ]
    }

    /// Features examined per node: `⌈fraction · n_features⌉`, at least one.
    pub fn features_per_node(&self, n_features: usize) -> usize {
        ((self.feature_fraction * n_features as f64).ceil() as usize).clamp(1, n_features.max(1))
    }
}

const LEAF: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Node {
    feature: u32,
    threshold: f64,
    left: u32,
    right: u32,
    /// Share of positive samples at this node.
    prob: f64,
}

/// One fitted classification tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    nodes: Vec<Node>,
    depth: usize,
}

impl Tree {
    pub fn predict_proba(&self, row: &[f64]) -> f64 {
        let mut n = &self.nodes[0];
        while n.feature != LEAF {
            n = if row[n.feature as usize] <= n.threshold {
                &self.nodes[n.left as usize]
            } else {
                &self.nodes[n.right as usize]
            };
        }
        n.prob
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Grower<'a> {
    columns: &'a [Vec<f64>],
    labels: &'a [u8],
    hp: &'a RfHyperparams,
    mtry: usize,
    node_seed: u64,
    nodes: Vec<Node>,
    importance: Vec<f64>,
    depth: usize,
}

struct Split {
    feature: usize,
    threshold: f64,
    score: f64,
}

impl Grower<'_> {
    fn grow(&mut self, samples: &mut [usize], depth: usize, node_id: u64) -> u32 {
        let n = samples.len();
        let pos = samples.iter().filter(|&&i| self.labels[i] == 1).count();
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            feature: LEAF,
            threshold: 0.0,
            left: LEAF,
            right: LEAF,
            prob: pos as f64 / n as f64,
        });
        self.depth = self.depth.max(depth);
        if depth >= self.hp.max_depth || n < self.hp.min_samples_split || pos == 0 || pos == n {
            return id;
        }
        let Some(split) = self.best_split(samples, pos, node_id) else {
            return id;
        };
        let parent = n as f64 * gini((n - pos) as f64, pos as f64);
        self.importance[split.feature] += parent - split.score;

        let col = &self.columns[split.feature];
        let mut k = 0;
        for i in 0..n {
            if col[samples[i]] <= split.threshold {
                samples.swap(i, k);
                k += 1;
            }
        }
        let (left, right) = samples.split_at_mut(k);
        let l = self.grow(left, depth + 1, node_id.wrapping_mul(2));
        let r = self.grow(right, depth + 1, node_id.wrapping_mul(2).wrapping_add(1));
        let node = &mut self.nodes[id as usize];
        node.feature = split.feature as u32;
        node.threshold = split.threshold;
        node.left = l;
        node.right = r;
        id
    }

    fn candidate_features(&self, node_id: u64) -> Vec<usize> {
        let p = self.columns.len();
        let mut features: Vec<usize> = (0..p).collect();
        if self.mtry < p {
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix(self.node_seed ^ splitmix(node_id)));
            // Partial Fisher-Yates: the first mtry entries are a uniform subset.
            for i in 0..self.mtry {
                let j = i + rng.index(p - i);
                features.swap(i, j);
            }
            features.truncate(self.mtry);
            features.sort_unstable();
        }
        features
    }

    /// Lowest weighted child impurity `n_l·G_l + n_r·G_r` over candidate
    /// features; earlier features and thresholds win ties.
    fn best_split(&self, samples: &[usize], pos: usize, node_id: u64) -> Option<Split> {
        let n = samples.len();
        let mut best: Option<Split> = None;
        let mut sorted: Vec<(f64, u8)> = Vec::with_capacity(n);
        for f in self.candidate_features(node_id) {
            let col = &self.columns[f];
            sorted.clear();
            sorted.extend(samples.iter().map(|&i| (col[i], self.labels[i])));
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left_pos = 0usize;
            for k in 0..n - 1 {
                left_pos += usize::from(sorted[k].1);
                let (a, b) = (sorted[k].0, sorted[k + 1].0);
                if a == b {
                    continue;
                }
                let nl = (k + 1) as f64;
                let nr = (n - k - 1) as f64;
                let lp = left_pos as f64;
                let rp = (pos - left_pos) as f64;
                let score = nl * gini(nl - lp, lp) + nr * gini(nr - rp, rp);
                if best.as_ref().map_or(true, |s| score < s.score) {
                    let mut threshold = a + (b - a) / 2.0;
                    if threshold >= b {
                        threshold = a;
                    }
                    best = Some(Split {
                        feature: f,
                        threshold,
                        score,
                    });
                }
            }
        }
        best
    }
}

fn columns_of(data: &Dataset) -> Vec<Vec<f64>> {
    (0..data.n_features())
        .map(|j| data.column(j).collect())
        .collect()
}

fn check_trainable(data: &Dataset) -> Result<()> {
    if data.is_empty() {
        return Err(Error::Training("training set is empty".into()));
    }
    let [neg, pos] = data.class_counts();
    if neg == 0 || pos == 0 {
        return Err(Error::Training(
            "training set contains a single class".into(),
        ));
    }
    Ok(())
}

/// Grows one tree on the rows `samples` (duplicates allowed). Returns the
/// tree and its per-feature impurity decrease.
pub fn train_tree(
    data: &Dataset,
    samples: &[usize],
    hp: &RfHyperparams,
    node_seed: u64,
) -> Result<(Tree, Vec<f64>)> {
    if samples.is_empty() {
        return Err(Error::Training("tree needs at least one sample".into()));
    }
    let columns = columns_of(data);
    Ok(grow_tree(&columns, data.labels(), samples, hp, node_seed))
}

fn grow_tree(
    columns: &[Vec<f64>],
    labels: &[u8],
    samples: &[usize],
    hp: &RfHyperparams,
    node_seed: u64,
) -> (Tree, Vec<f64>) {
    let mut grower = Grower {
        columns,
        labels,
        hp,
        mtry: hp.features_per_node(columns.len()),
        node_seed,
        nodes: Vec::new(),
        importance: vec![0.0; columns.len()],
        depth: 0,
    };
    let mut samples = samples.to_vec();
    grower.grow(&mut samples, 0, 1);
    (
        Tree {
            nodes: grower.nodes,
            depth: grower.depth,
        },
        grower.importance,
    )
}

/// Bagged ensemble of CART trees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    trees: Vec<Tree>,
    feature_names: Vec<String>,
    importance: Vec<f64>,
}

impl ForestModel {
    /// Mean positive-class probability over trees.
    pub fn predict_proba(&self, row: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.predict_proba(row)).sum::<f64>() / self.trees.len() as f64
    }

    pub fn predict_all(&self, data: &Dataset) -> Vec<f64> {
        data.features()
            .iter()
            .map(|r| self.predict_proba(r))
            .collect()
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    /// Normalized mean impurity decrease per feature.
    pub fn feature_importance(&self) -> Vec<(String, f64)> {
        let total: f64 = self.importance.iter().sum();
        self.feature_names
            .iter()
            .zip(&self.importance)
            .map(|(n, &v)| (n.clone(), if total > 0.0 { v / total } else { 0.0 }))
            .collect()
    }
}

/// Trains `hp.n_trees` trees in parallel; deterministic in `seed`.
pub fn train_forest(train: &Dataset, hp: &RfHyperparams, seed: u64) -> Result<ForestModel> {
    check_trainable(train)?;
    if hp.n_trees == 0 {
        return Err(Error::Training("forest needs at least one tree".into()));
    }
    let columns = columns_of(train);
    let n = train.n_rows();
    let grown: Vec<(Tree, Vec<f64>)> = (0..hp.n_trees as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::substream(seed, t);
            let samples: Vec<usize> = (0..n).map(|_| rng.index(n)).collect();
            let node_seed = splitmix(seed ^ splitmix(t.wrapping_add(1)));
            grow_tree(&columns, train.labels(), &samples, hp, node_seed)
        })
        .collect();
    let mut importance = vec![0.0; train.n_features()];
    let mut trees = Vec::with_capacity(grown.len());
    for (tree, imp) in grown {
        for (acc, v) in importance.iter_mut().zip(imp) {
            *acc += v;
        }
        trees.push(tree);
    }
    Ok(ForestModel {
        trees,
        feature_names: train.feature_names().to_vec(),
        importance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    fn toy(points: &[(f64, f64, u8)]) -> Dataset {
        Dataset::new(
            points.iter().map(|&(a, b, _)| vec![a, b]).collect(),
            points.iter().map(|&(_, _, l)| l).collect(),
            vec!["a".into(), "b".into()],
            vec![false, false],
        )
        .unwrap()
    }

    #[test]
    fn gini_examples() {
        assert_eq!(gini_impurity([10, 0]).unwrap(), 0.0);
        assert!(close(gini_impurity([5, 5]).unwrap(), 0.5));
        assert!(close(gini_impurity([9, 1]).unwrap(), 0.18));
        assert!(gini_impurity([0, 0]).is_err());
    }

    #[test]
    fn decode_endpoints_and_midpoint() {
        let lo = RfHyperparams::decode(&[0.0; 4]).unwrap();
        assert_eq!((lo.n_trees, lo.max_depth, lo.min_samples_split), (10, 2, 2));
        assert!(close(lo.feature_fraction, 0.1));
        let hi = RfHyperparams::decode(&[1.0; 4]).unwrap();
        assert_eq!(
            (hi.n_trees, hi.max_depth, hi.min_samples_split),
            (300, 20, 10)
        );
        assert!(close(hi.feature_fraction, 1.0));
        let mid = RfHyperparams::decode(&[0.5; 4]).unwrap();
        assert_eq!(
            (mid.n_trees, mid.max_depth, mid.min_samples_split),
            (155, 11, 6)
        );
        assert!(close(mid.feature_fraction, 0.55));
        // Out-of-box coordinates clamp.
        assert_eq!(
            RfHyperparams::decode(&[-3.0, 2.0, 0.0, 0.0])
                .unwrap()
                .n_trees,
            10
        );
        assert!(RfHyperparams::decode(&[0.5; 3]).is_err());
    }

    #[test]
    fn default_round_trips_through_encoding() {
        let d = RfHyperparams::default();
        let back = RfHyperparams::decode(&d.encode()).unwrap();
        assert_eq!(
            (back.n_trees, back.max_depth, back.min_samples_split),
            (100, 10, 2)
        );
        assert!((back.feature_fraction - 0.33).abs() < 1e-12);
        assert_eq!(back.features_per_node(9), 3);
        assert!(d.validate().is_ok());
    }

    #[test]
    fn separable_toy_set_is_fit_exactly() {
        let d = toy(&[(0.0, 5.0, 0), (1.0, 3.0, 0), (4.0, 4.0, 1), (5.0, 2.0, 1)]);
        let hp = RfHyperparams {
            n_trees: 25,
            max_depth: 2,
            min_samples_split: 2,
            feature_fraction: 1.0,
        };
        let model = train_forest(&d, &hp, 3).unwrap();
        let acc = d
            .features()
            .iter()
            .zip(d.labels())
            .filter(|(r, &l)| u8::from(model.predict_proba(r) >= 0.5) == l)
            .count();
        assert_eq!(acc, 4);
        // Brute force: some single-feature threshold separates the classes,
        // so a depth-1 split already suffices.
        let separable = (0..2).any(|f| {
            d.features().iter().any(|t| {
                let thr = t[f];
                let side = |r: &Vec<f64>| u8::from(r[f] > thr);
                d.features()
                    .iter()
                    .zip(d.labels())
                    .all(|(r, &l)| side(r) == l)
                    || d.features()
                        .iter()
                        .zip(d.labels())
                        .all(|(r, &l)| side(r) != l)
            })
        });
        assert!(separable);
    }

    #[test]
    fn full_feature_trees_do_not_depend_on_node_seed() {
        let d = toy(&[
            (0.0, 1.0, 0),
            (1.0, 0.0, 0),
            (2.0, 2.0, 1),
            (3.0, 1.0, 1),
            (1.5, 3.0, 0),
        ]);
        let hp = RfHyperparams {
            n_trees: 1,
            max_depth: 5,
            min_samples_split: 2,
            feature_fraction: 1.0,
        };
        let samples = [0, 1, 2, 3, 4, 2];
        let (a, _) = train_tree(&d, &samples, &hp, 1).unwrap();
        let (b, _) = train_tree(&d, &samples, &hp, 987_654).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn forest_is_deterministic_and_probabilities_bounded() {
        let d = toy(&[
            (0.0, 1.0, 0),
            (1.0, 0.0, 1),
            (2.0, 2.0, 1),
            (3.0, 1.0, 0),
            (1.5, 3.0, 0),
        ]);
        let hp = RfHyperparams {
            n_trees: 12,
            max_depth: 4,
            min_samples_split: 2,
            feature_fraction: 0.5,
        };
        let a = train_forest(&d, &hp, 5).unwrap();
        assert_eq!(a, train_forest(&d, &hp, 5).unwrap());
        for r in d.features() {
            let p = a.predict_proba(r);
            assert!((0.0..=1.0).contains(&p));
        }
        let imp: f64 = a.feature_importance().iter().map(|(_, v)| v).sum();
        assert!(imp == 0.0 || (imp - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_class_training_fails() {
        let d = toy(&[(0.0, 1.0, 1), (1.0, 0.0, 1)]);
        assert!(matches!(
            train_forest(&d, &RfHyperparams::default(), 1),
            Err(Error::Training(_))
        ));
    }
}
