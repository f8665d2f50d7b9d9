use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::forest::ForestModel;
use crate::error::{Error, Result};

/// Positive-class precision, recall, F1 and ROC AUC.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub auc: f64,
}

/// Area under the ROC curve as the Mann-Whitney statistic; tied scores
/// count one half. A single-class label set yields 0.5.
pub fn auc(scores: &[f64], labels: &[u8]) -> f64 {
    let n = scores.len();
    let pos = labels.iter().filter(|&&l| l == 1).count();
    let neg = n - pos;
    if pos == 0 || neg == 0 {
        return 0.5;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Mid-ranks (1-based) over runs of equal scores.
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += mid * order[i..=j].iter().filter(|&&k| labels[k] == 1).count() as f64;
        i = j + 1;
    }
    let (p, q) = (pos as f64, neg as f64);
    ((rank_sum - p * (p + 1.0) / 2.0) / (p * q)).clamp(0.0, 1.0)
}

/// Metrics for scores thresholded at `threshold` (score ≥ threshold is positive).
pub fn classification_metrics(
    scores: &[f64],
    labels: &[u8],
    threshold: f64,
) -> Result<ClassificationMetrics> {
    if scores.len() != labels.len() {
        return Err(Error::Domain(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.is_empty() {
        return Err(Error::EmptyRequest("metrics need at least one sample"));
    }
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for (&s, &l) in scores.iter().zip(labels) {
        match (s >= threshold, l == 1) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(ClassificationMetrics {
        precision,
        recall,
        f1,
        auc: auc(scores, labels),
    })
}

pub fn evaluate_model(
    model: &ForestModel,
    test: &Dataset,
    threshold: f64,
) -> Result<ClassificationMetrics> {
    classification_metrics(&model.predict_all(test), test.labels(), threshold)
}
