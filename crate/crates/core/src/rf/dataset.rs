use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rng::Draws;

/// Column order of the wholesale-customers file, target first.
const TARGET: &str = "Channel";
const FEATURES: [&str; 7] = [
    "Region",
    "Fresh",
    "Milk",
    "Grocery",
    "Frozen",
    "Detergents_Paper",
    "Delicatessen",
];

/// Binary-labelled feature table.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    labels: Vec<u8>,
    feature_names: Vec<String>,
    categorical_mask: Vec<bool>,
}

impl Dataset {
    pub fn new(
        features: Vec<Vec<f64>>,
        labels: Vec<u8>,
        feature_names: Vec<String>,
        categorical_mask: Vec<bool>,
    ) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::Domain(format!(
                "{} feature rows but {} labels",
                features.len(),
                labels.len()
            )));
        }
        if feature_names.len() != categorical_mask.len() {
            return Err(Error::Domain(
                "feature names and categorical mask differ in length".into(),
            ));
        }
        if let Some(i) = features.iter().position(|r| r.len() != feature_names.len()) {
            return Err(Error::Domain(format!(
                "row {i} has {} values, expected {}",
                features[i].len(),
                feature_names.len()
            )));
        }
        if let Some(i) = labels.iter().position(|&l| l > 1) {
            return Err(Error::Domain(format!("label at row {i} is not binary")));
        }
        if features.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Domain("feature values must be finite".into()));
        }
        Ok(Self {
            features,
            labels,
            feature_names,
            categorical_mask,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn categorical_mask(&self) -> &[bool] {
        &self.categorical_mask
    }

    /// `[negatives, positives]`.
    pub fn class_counts(&self) -> [usize; 2] {
        let pos = self.labels.iter().filter(|&&l| l == 1).count();
        [self.labels.len() - pos, pos]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.features.iter().map(move |r| r[j])
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
            categorical_mask: self.categorical_mask.clone(),
        }
    }

    /// Replaces each categorical column by one indicator column per distinct
    /// value (ascending), in place of the original column.
    pub fn one_hot(&self) -> Dataset {
        let mut names = Vec::new();
        let mut mask = Vec::new();
        let mut levels: Vec<Option<Vec<f64>>> = Vec::new();
        for (j, name) in self.feature_names.iter().enumerate() {
            if self.categorical_mask[j] {
                let distinct: BTreeSet<u64> = self.column(j).map(f64::to_bits).collect();
                let mut values: Vec<f64> = distinct.into_iter().map(f64::from_bits).collect();
                values.sort_by(f64::total_cmp);
                for v in &values {
                    names.push(format!("{name}={v}"));
                    mask.push(false);
                }
                levels.push(Some(values));
            } else {
                names.push(name.clone());
                mask.push(false);
                levels.push(None);
            }
        }
        let features = self
            .features
            .iter()
            .map(|row| {
                let mut out = Vec::with_capacity(names.len());
                for (v, lv) in row.iter().zip(&levels) {
                    match lv {
                        Some(values) => {
                            out.extend(values.iter().map(|l| f64::from(u8::from(l == v))))
                        }
                        None => out.push(*v),
                    }
                }
                out
            })
            .collect();
        Dataset {
            features,
            labels: self.labels.clone(),
            feature_names: names,
            categorical_mask: mask,
        }
    }
}

fn normalize_header(h: &str) -> String {
    let h = h.trim().replace(' ', "_").to_ascii_lowercase();
    if h == "delicassen" {
        "delicatessen".to_string()
    } else {
        h
    }
}

/// Reads the wholesale-customers CSV. `Channel` (1 or 2) becomes the label
/// (0 or 1); the seven remaining columns become features with `Region`
/// flagged categorical. Header matching ignores case and treats spaces as
/// underscores; the public file's `Delicassen` spelling is accepted.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    load_dataset_from_reader(file)
}

pub fn load_dataset_from_reader<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(normalize_header).collect();
    let find = |name: &str| -> Result<usize> {
        let key = name.to_ascii_lowercase();
        headers
            .iter()
            .position(|h| *h == key)
            .ok_or_else(|| Error::Schema(name.to_string()))
    };
    let target = find(TARGET)?;
    let cols = FEATURES
        .iter()
        .map(|f| find(f))
        .collect::<Result<Vec<_>>>()?;

    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let cell = |c: usize, name: &str| -> Result<f64> {
            let raw = record.get(c).unwrap_or("");
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    row,
                    column: name.to_string(),
                    value: raw.to_string(),
                })
        };
        let channel = cell(target, TARGET)?;
        let label = match channel {
            1.0 => 0,
            2.0 => 1,
            _ => {
                return Err(Error::Parse {
                    row,
                    column: TARGET.to_string(),
                    value: format!("{channel} (expected 1 or 2)"),
                })
            }
        };
        labels.push(label);
        features.push(
            cols.iter()
                .zip(FEATURES)
                .map(|(&c, name)| cell(c, name))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let names = FEATURES.iter().map(|s| s.to_string()).collect();
    let mask = FEATURES.iter().map(|&f| f == "Region").collect();
    Dataset::new(features, labels, names, mask)
}

fn round_half_up(v: f64) -> usize {
    (v + 0.5).floor() as usize
}

/// Per-class proportional split. Each class contributes
/// `round(count · train_ratio)` rows to the training part; both parts keep
/// the original row order.
pub fn stratified_split(data: &Dataset, train_ratio: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(train_ratio > 0.0 && train_ratio < 1.0) {
        return Err(Error::Config(format!(
            "train_ratio must lie in (0, 1), got {train_ratio}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in 0..=1u8 {
        let mut idx: Vec<usize> = (0..data.n_rows())
            .filter(|&i| data.labels[i] == class)
            .collect();
        rng.shuffle(&mut idx);
        let n_train = round_half_up(idx.len() as f64 * train_ratio).min(idx.len());
        train.extend_from_slice(&idx[..n_train]);
        test.extend_from_slice(&idx[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((data.subset(&train), data.subset(&test)))
}

fn deal_folds(labels: &[u8], k: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for class in 0..=1u8 {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        rng.shuffle(&mut idx);
        for i in idx {
            folds[next % k].push(i);
            next += 1;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    folds
}

fn folds_are_usable(labels: &[u8], folds: &[Vec<usize>]) -> bool {
    let [neg, pos] = [
        labels.iter().filter(|&&l| l == 0).count(),
        labels.iter().filter(|&&l| l == 1).count(),
    ];
    folds.iter().all(|f| {
        let p = f.iter().filter(|&&i| labels[i] == 1).count();
        let n = f.len() - p;
        // Validation and training parts both need both classes.
        p > 0 && n > 0 && pos - p > 0 && neg - n > 0
    })
}

/// Validation-index sets of a stratified `k`-fold partition. A draw that
/// leaves any fold single-class is re-drawn once with the next seed.
pub fn stratified_folds(data: &Dataset, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 || k > data.n_rows() {
        return Err(Error::Config(format!(
            "cv_folds must lie in [2, {}], got {k}",
            data.n_rows()
        )));
    }
    for attempt in 0..2 {
        let folds = deal_folds(&data.labels, k, seed.wrapping_add(attempt));
        if folds_are_usable(&data.labels, &folds) {
            return Ok(folds);
        }
    }
    Err(Error::Training(format!(
        "cannot form {k} stratified folds with both classes in every fold"
    )))
}
