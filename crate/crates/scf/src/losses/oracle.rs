//! Brute-force reference evaluations of the contrastive losses.
//!
//! These walk the definitions with plain nested loops and bare `exp`/`ln`
//! (no log-sum-exp stabilization) and produce values only, no gradients.
//! They share no computation with the fast paths and exist to check them
//! in tests at small magnitudes.

use crate::error::{Error, Result};
use crate::losses::{FeatureBatch, LossConfig};
use crate::rss::PairSelection;

/// Row `i` of the batch, normalized here when the config asks for it.
fn feature_row(batch: &FeatureBatch, cfg: &LossConfig, i: usize) -> Vec<f64> {
    let row = batch.features().row(i).to_vec();
    if !cfg.normalize_features {
        return row;
    }
    let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        row
    } else {
        row.iter().map(|v| v / norm).collect()
    }
}

fn naive_dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.len() {
        acc += a[i] * b[i];
    }
    acc
}

/// Eq.-by-eq. self-supervised contrastive value.
pub fn oracle_self_cl(
    batch: &FeatureBatch,
    positive_map: &[usize],
    cfg: &LossConfig,
) -> Result<f64> {
    let b = batch.len();
    if b < 2 {
        return Err(Error::NoContrast { got: b });
    }
    let rows: Vec<Vec<f64>> = (0..b).map(|i| feature_row(batch, cfg, i)).collect();
    let mut total = 0.0;
    for i in 0..b {
        let j = positive_map[i];
        if j == i {
            return Err(Error::SelfPositive { index: i });
        }
        let numerator = (naive_dot(&rows[i], &rows[j]) / cfg.tau).exp();
        let mut denominator = 0.0;
        for k in 0..b {
            if k != i {
                denominator += (naive_dot(&rows[i], &rows[k]) / cfg.tau).exp();
            }
        }
        total += -(numerator / denominator).ln();
    }
    Ok(total)
}

/// Eq.-by-eq. supervised contrastive value.
pub fn oracle_sup_cl(batch: &FeatureBatch, cfg: &LossConfig) -> Result<f64> {
    let b = batch.len();
    if b < 2 {
        return Err(Error::NoContrast { got: b });
    }
    let labels = batch.labels();
    let rows: Vec<Vec<f64>> = (0..b).map(|i| feature_row(batch, cfg, i)).collect();
    let mut total = 0.0;
    for i in 0..b {
        let mut positives = 0usize;
        for j in 0..b {
            if j != i && labels[j] == labels[i] {
                positives += 1;
            }
        }
        if positives == 0 {
            return Err(Error::AnchorWithoutPositive { label: labels[i] });
        }
        let mut anchor_sum = 0.0;
        for j in 0..b {
            if j == i || labels[j] != labels[i] {
                continue;
            }
            let numerator = (naive_dot(&rows[i], &rows[j]) / cfg.tau).exp();
            let mut denominator = 0.0;
            for k in 0..b {
                if k != i {
                    denominator += (naive_dot(&rows[i], &rows[k]) / cfg.tau).exp();
                }
            }
            anchor_sum += (numerator / denominator).ln();
        }
        total += -anchor_sum / positives as f64;
    }
    Ok(total)
}

/// Eq.-by-eq. spanning-tree contrastive value, one term per pair.
pub fn oracle_steg_cl(
    batch: &FeatureBatch,
    pairs: &PairSelection,
    cfg: &LossConfig,
) -> Result<f64> {
    let b = batch.len();
    let labels = batch.labels();
    let rows: Vec<Vec<f64>> = (0..b).map(|i| feature_row(batch, cfg, i)).collect();
    let mut total = 0.0;
    for &(i, p) in &pairs.pairs {
        let numerator = (naive_dot(&rows[i], &rows[p]) / cfg.tau).exp();
        let mut denominator = 0.0;
        let mut negatives = 0usize;
        for k in 0..b {
            if k != i && labels[k] != labels[i] {
                denominator += (naive_dot(&rows[i], &rows[k]) / cfg.tau).exp();
                negatives += 1;
            }
        }
        if negatives == 0 {
            return Err(Error::EmptyNegativeSet { anchor: i });
        }
        if cfg.include_positive_in_denominator {
            denominator += numerator;
        }
        total += -(numerator / denominator).ln();
    }
    Ok(total)
}

/// Number of log terms the supervised loss evaluates on these labels;
/// backs the redundancy accounting in tests.
pub fn oracle_sup_cl_term_count(labels: &[u8]) -> usize {
    let mut terms = 0;
    for i in 0..labels.len() {
        for j in 0..labels.len() {
            if i != j && labels[i] == labels[j] {
                terms += 1;
            }
        }
    }
    terms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::losses::{self_cl, steg_cl, sup_cl};
    use crate::numkit::{Matrix, Rng};
    use crate::rss::select_positives;

    #[test]
    fn identical_feature_batches_reproduce_closed_forms() {
        let u = vec![1.0, 0.0];
        let z = Matrix::from_rows(&[u.clone(), u.clone(), u.clone(), u]).unwrap();
        let batch = FeatureBatch::new(z, vec![0, 0, 1, 1]).unwrap();
        let cfg = LossConfig::default();

        let pmap = vec![1usize, 0, 3, 2];
        let v = oracle_self_cl(&batch, &pmap, &cfg).unwrap();
        assert!((v - 4.0 * 3.0f64.ln()).abs() < 1e-12);

        let v = oracle_sup_cl(&batch, &cfg).unwrap();
        assert!((v - 4.0 * 3.0f64.ln()).abs() < 1e-12);

        let pairs = PairSelection {
            pairs: vec![(0, 1), (2, 3)],
            skipped_classes: vec![],
        };
        let v = oracle_steg_cl(&batch, &pairs, &cfg).unwrap();
        assert!((v - 2.0 * 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn a_class_of_four_spends_twelve_supervised_terms() {
        assert_eq!(oracle_sup_cl_term_count(&[0, 0, 0, 0]), 12);
    }

    #[test]
    fn oracles_agree_with_fast_paths_on_random_batches() {
        let mut rng = Rng::new(321, 0);
        let taus = [0.05, 0.1, 0.5, 1.0];
        for trial in 0..100 {
            let b = 4 + 2 * (trial % 7); // 4..16, even
            let d = 2 + trial % 7; // 2..8
            let cfg = LossConfig {
                tau: taus[trial % taus.len()],
                ..LossConfig::default()
            };
            let z = Matrix::from_vec(
                b,
                d,
                (0..b * d).map(|_| 2.0 * (rng.uniform() * 2.0 - 1.0)).collect(),
            )
            .unwrap();
            let labels: Vec<u8> = (0..b).map(|i| (i % 2) as u8).collect();
            let batch = FeatureBatch::new(z, labels).unwrap();
            let pmap: Vec<usize> = (0..b)
                .map(|i| if i % 2 == 0 { i + 1 } else { i - 1 })
                .collect();
            let pairs = select_positives(batch.labels(), &mut Rng::new(9, trial as u64)).unwrap();

            let fast = self_cl(&batch, &pmap, &cfg).unwrap().value;
            let slow = oracle_self_cl(&batch, &pmap, &cfg).unwrap();
            assert!((fast - slow).abs() / slow.abs().max(1e-12) <= 1e-12);

            let fast = sup_cl(&batch, &cfg).unwrap().value;
            let slow = oracle_sup_cl(&batch, &cfg).unwrap();
            assert!((fast - slow).abs() / slow.abs().max(1e-12) <= 1e-12);

            let fast = steg_cl(&batch, &pairs, &cfg).unwrap().value;
            let slow = oracle_steg_cl(&batch, &pairs, &cfg).unwrap();
            assert!((fast - slow).abs() / slow.abs().max(1e-12) <= 1e-12);
        }
    }
}
