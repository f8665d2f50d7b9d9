//! Synthetic data with the wholesale-customers schema.
//!
//! Channel 2 rows spend more on milk, grocery and detergents/paper; channel 1
//! rows spend more on fresh and frozen goods. Spending is log-normal. Useful
//! for demos and smoke tests when the public file is not at hand; it is not
//! a substitute for the real data.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::Draws;

/// Log-mean spend per product column `(channel 1, channel 2)`.
const LOG_MEANS: [(f64, f64); 6] = [
    (9.2, 8.4),
    (7.7, 8.9),
    (7.9, 9.3),
    (7.5, 6.9),
    (5.9, 8.3),
    (6.7, 7.0),
];

/// `n_rows` rows, about 67.7% channel 1; regions 1/2/3 at 17.5/10.7/71.8%.
pub fn wholesale_like(n_rows: usize, seed: u64) -> Result<Dataset> {
    if n_rows < 2 {
        return Err(Error::EmptyRequest(
            "synthetic dataset needs at least two rows",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_pos = ((n_rows as f64 * 0.323).round() as usize).clamp(1, n_rows - 1);
    let mut labels: Vec<u8> = (0..n_rows).map(|i| u8::from(i < n_pos)).collect();
    rng.shuffle(&mut labels);

    let features = labels
        .iter()
        .map(|&label| {
            let u = rng.uniform();
            let region = if u < 0.175 {
                1.0
            } else if u < 0.282 {
                2.0
            } else {
                3.0
            };
            let mut row = vec![region];
            for &(m1, m2) in &LOG_MEANS {
                let mean = if label == 1 { m2 } else { m1 };
                let dist = LogNormal::new(mean, 1.0).expect("unit sigma is valid");
                row.push(dist.sample(&mut rng).round().max(1.0));
            }
            row
        })
        .collect();
    let names = [
        "Region",
        "Fresh",
        "Milk",
        "Grocery",
        "Frozen",
        "Detergents_Paper",
        "Delicatessen",
    ];
    Dataset::new(
        features,
        labels,
        names.iter().map(|s| s.to_string()).collect(),
        names.iter().map(|&n| n == "Region").collect(),
    )
}

/// Writes `data` (raw, not one-hot) in the public file's column layout.
pub fn write_wholesale_csv<W: Write>(data: &Dataset, out: W) -> Result<()> {
    if data.n_features() != 7 {
        return Err(Error::Domain(format!(
            "expected the 7 wholesale feature columns, got {}",
            data.n_features()
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "Channel",
        "Region",
        "Fresh",
        "Milk",
        "Grocery",
        "Frozen",
        "Detergents_Paper",
        "Delicassen",
    ])?;
    for (row, &label) in data.features().iter().zip(data.labels()) {
        let mut rec = vec![(u32::from(label) + 1).to_string()];
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}
