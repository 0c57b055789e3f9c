//! Contrastive losses and softmax cross-entropy, with exact analytic
//! gradients.
//!
//! All three contrastive losses are sums of one primitive, the *contrast
//! unit*: a single `-log(exp(a_ip/tau) / sum_k exp(a_ik/tau))` term that
//! pulls one anchor toward one positive against a denominator set. The
//! self-supervised loss spends one unit per anchor, the supervised loss
//! spends `C * (C-1)` units per class of size `C` (every ordered same-class
//! pair), and the spanning-tree variant spends only `C - 1` units, one per
//! sampled pair. Each unit computes its own similarities from the feature
//! rows, so the cost of a loss is proportional to the number of units it
//! evaluates — `term_count` in [`LossOutput`] is exactly that number.

pub mod oracle;

use crate::error::{Error, Result};
use crate::numkit::{dot, l2_normalize_rows, log_sum_exp, Matrix};
use crate::rss::PairSelection;

/// Which contrastive term the training objective adds to cross-entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossVariant {
    /// Cross-entropy only.
    None,
    /// Self-supervised contrastive loss: one fixed positive per anchor.
    SelfCl,
    /// Supervised contrastive loss: every same-class sample is a positive.
    SupCl,
    /// Spanning-tree contrastive loss: one sampled positive per anchor,
    /// different-class denominators.
    StegCl,
}

impl LossVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            LossVariant::None => "none",
            LossVariant::SelfCl => "selfcl",
            LossVariant::SupCl => "supcl",
            LossVariant::StegCl => "stegcl",
        }
    }
}

impl std::str::FromStr for LossVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(LossVariant::None),
            "selfcl" => Ok(LossVariant::SelfCl),
            "supcl" => Ok(LossVariant::SupCl),
            "stegcl" => Ok(LossVariant::StegCl),
            other => Err(Error::InvalidArg(format!("unknown loss variant `{other}`"))),
        }
    }
}

impl std::fmt::Display for LossVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Configuration shared by the contrastive losses.
#[derive(Debug, Clone)]
pub struct LossConfig {
    /// Temperature dividing the similarity logits.
    pub tau: f64,
    /// L2-normalize feature rows before taking dot products.
    pub normalize_features: bool,
    /// Weight of the contrastive term in the training objective.
    pub lambda: f64,
    /// Which contrastive loss the trainer adds.
    pub variant: LossVariant,
    /// Add the positive's similarity to the spanning-tree denominator
    /// (the self-supervised-style reading). Off by default: the
    /// denominator holds different-class samples only.
    pub include_positive_in_denominator: bool,
}

impl Default for LossConfig {
    fn default() -> Self {
        Self {
            tau: 0.1,
            normalize_features: true,
            lambda: 1.0,
            variant: LossVariant::StegCl,
            include_positive_in_denominator: false,
        }
    }
}

impl LossConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "temperature must be a positive finite number, got {}",
                self.tau
            )));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "lambda must be non-negative and finite, got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// A batch of feature vectors with their cover/stego labels.
#[derive(Debug, Clone)]
pub struct FeatureBatch {
    z: Matrix,
    labels: Vec<u8>,
}

impl FeatureBatch {
    pub fn new(z: Matrix, labels: Vec<u8>) -> Result<Self> {
        if labels.len() != z.rows() {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "{} labels for a feature matrix of {} rows",
                    labels.len(),
                    z.rows()
                ),
            });
        }
        Ok(Self { z, labels })
    }

    pub fn len(&self) -> usize {
        self.z.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.z.rows() == 0
    }

    pub fn features(&self) -> &Matrix {
        &self.z
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }
}

/// Value, gradient and per-term accounting of one loss evaluation.
#[derive(Debug, Clone)]
pub struct LossOutput {
    /// Scalar loss (a sum over terms, not a mean).
    pub value: f64,
    /// Exact gradient with respect to the raw feature matrix.
    pub grad: Matrix,
    /// Number of single-positive log terms this evaluation spent.
    pub term_count: usize,
}

/// Features as seen by the dot products, plus what is needed to push the
/// gradient back to the raw matrix.
struct Prepared<'a> {
    raw: &'a Matrix,
    feats: Matrix,
    normalized: bool,
}

impl<'a> Prepared<'a> {
    fn new(raw: &'a Matrix, cfg: &LossConfig) -> Self {
        if cfg.normalize_features {
            let (feats, _zero_rows) = l2_normalize_rows(raw);
            Self {
                raw,
                feats,
                normalized: true,
            }
        } else {
            Self {
                raw,
                feats: raw.clone(),
                normalized: false,
            }
        }
    }

    /// Map `d loss / d feats` back to `d loss / d raw`.
    ///
    /// Normalization `zhat = z / |z|` has Jacobian `(I - zhat zhat^T) / |z|`;
    /// rows that were left unnormalized (zero rows) pass the gradient
    /// through unchanged.
    fn into_raw_grad(self, mut ghat: Matrix) -> Matrix {
        if !self.normalized {
            return ghat;
        }
        for i in 0..self.raw.rows() {
            let norm = dot(self.raw.row(i), self.raw.row(i)).sqrt();
            if norm == 0.0 {
                continue;
            }
            let zhat = self.feats.row(i);
            let g = ghat.row_mut(i);
            let along = dot(g, zhat);
            for (gv, &zv) in g.iter_mut().zip(zhat) {
                *gv = (*gv - along * zv) / norm;
            }
        }
        ghat
    }
}

/// Evaluates contrast units against one feature matrix, reusing scratch
/// space across calls.
struct UnitEvaluator<'a> {
    feats: &'a Matrix,
    tau: f64,
    logits: Vec<f64>,
}

impl<'a> UnitEvaluator<'a> {
    fn new(feats: &'a Matrix, tau: f64) -> Self {
        Self {
            feats,
            tau,
            logits: Vec::new(),
        }
    }

    /// One `-log(exp(a_ip/tau) / sum_{k in denom} exp(a_ik/tau))` term.
    ///
    /// Similarities are computed here, from the feature rows; nothing is
    /// shared between units. The term's exact gradient with respect to the
    /// features, scaled by `weight`, is accumulated into `ghat`.
    fn eval(
        &mut self,
        anchor: usize,
        positive: usize,
        denom: &[usize],
        weight: f64,
        ghat: &mut Matrix,
    ) -> Result<f64> {
        let za = self.feats.row(anchor);
        let a_pos = dot(za, self.feats.row(positive)) / self.tau;
        self.logits.clear();
        for &k in denom {
            self.logits.push(dot(za, self.feats.row(k)) / self.tau);
        }
        let lse = log_sum_exp(&self.logits)?;
        let value = weight * (lse - a_pos);

        // d(term)/d(a_ik) = softmax_k over the denominator, minus 1 at the
        // positive; a_ik depends on rows `anchor` and `k`.
        let scale = weight / self.tau;
        for (&k, &logit) in denom.iter().zip(&self.logits) {
            let p = (logit - lse).exp() * scale;
            let zk = self.feats.row(k);
            {
                let ga = ghat.row_mut(anchor);
                for (g, &v) in ga.iter_mut().zip(zk) {
                    *g += p * v;
                }
            }
            {
                let gk = ghat.row_mut(k);
                for (g, &v) in gk.iter_mut().zip(za) {
                    *g += p * v;
                }
            }
        }
        let zp = self.feats.row(positive);
        {
            let ga = ghat.row_mut(anchor);
            for (g, &v) in ga.iter_mut().zip(zp) {
                *g -= scale * v;
            }
        }
        {
            let gp = ghat.row_mut(positive);
            for (g, &v) in gp.iter_mut().zip(za) {
                *g -= scale * v;
            }
        }
        Ok(value)
    }
}

/// Self-supervised contrastive loss: one unit per anchor, positive given by
/// `positive_map`, denominator over every other sample.
pub fn self_cl(
    batch: &FeatureBatch,
    positive_map: &[usize],
    cfg: &LossConfig,
) -> Result<LossOutput> {
    cfg.validate()?;
    let b = batch.len();
    if b < 2 {
        return Err(Error::NoContrast { got: b });
    }
    if positive_map.len() != b {
        return Err(Error::ShapeMismatch {
            context: format!("positive map of length {} for batch of {b}", positive_map.len()),
        });
    }
    for (i, &p) in positive_map.iter().enumerate() {
        if p >= b {
            return Err(Error::IndexOutOfRange { index: p, size: b });
        }
        if p == i {
            return Err(Error::SelfPositive { index: i });
        }
    }

    let prepared = Prepared::new(batch.features(), cfg);
    let mut ghat = Matrix::zeros(b, batch.features().cols());
    let mut unit = UnitEvaluator::new(&prepared.feats, cfg.tau);
    let mut value = 0.0;
    let mut denom = Vec::with_capacity(b - 1);
    for i in 0..b {
        denom.clear();
        denom.extend((0..b).filter(|&k| k != i));
        value += unit.eval(i, positive_map[i], &denom, 1.0, &mut ghat)?;
    }
    Ok(LossOutput {
        value,
        grad: prepared.into_raw_grad(ghat),
        term_count: b,
    })
}

/// Supervised contrastive loss: per anchor, one unit per same-class sample,
/// averaged over that anchor's positives, denominator over every other
/// sample.
pub fn sup_cl(batch: &FeatureBatch, cfg: &LossConfig) -> Result<LossOutput> {
    cfg.validate()?;
    let b = batch.len();
    if b < 2 {
        return Err(Error::NoContrast { got: b });
    }
    let class_sizes = count_classes(batch.labels());
    if let Some(&(label, _)) = class_sizes.iter().find(|&&(_, c)| c < 2) {
        return Err(Error::AnchorWithoutPositive { label });
    }

    let prepared = Prepared::new(batch.features(), cfg);
    let mut ghat = Matrix::zeros(b, batch.features().cols());
    let mut unit = UnitEvaluator::new(&prepared.feats, cfg.tau);
    let mut value = 0.0;
    let mut term_count = 0;
    let mut denom = Vec::with_capacity(b - 1);
    let labels = batch.labels();
    for i in 0..b {
        let class_size = class_sizes
            .iter()
            .find(|&&(l, _)| l == labels[i])
            .map(|&(_, c)| c)
            .unwrap_or(0);
        let weight = 1.0 / (class_size - 1) as f64;
        denom.clear();
        denom.extend((0..b).filter(|&k| k != i));
        for j in 0..b {
            if j != i && labels[j] == labels[i] {
                value += unit.eval(i, j, &denom, weight, &mut ghat)?;
                term_count += 1;
            }
        }
    }
    Ok(LossOutput {
        value,
        grad: prepared.into_raw_grad(ghat),
        term_count,
    })
}

/// Spanning-tree contrastive loss: one unit per sampled pair, denominator
/// over different-class samples only (plus the positive itself when
/// `include_positive_in_denominator` is set).
pub fn steg_cl(
    batch: &FeatureBatch,
    pairs: &PairSelection,
    cfg: &LossConfig,
) -> Result<LossOutput> {
    cfg.validate()?;
    let b = batch.len();
    let labels = batch.labels();
    if pairs.is_empty() {
        log::warn!("no anchor/positive pairs in batch of {b}; contrastive loss is zero");
        return Ok(LossOutput {
            value: 0.0,
            grad: Matrix::zeros(b, batch.features().cols()),
            term_count: 0,
        });
    }
    for &(a, p) in &pairs.pairs {
        if a >= b || p >= b {
            return Err(Error::IndexOutOfRange { index: a.max(p), size: b });
        }
        if a == p {
            return Err(Error::SelfPositive { index: a });
        }
        if labels[a] != labels[p] {
            return Err(Error::InvalidArg(format!(
                "pair ({a}, {p}) crosses labels {} and {}",
                labels[a], labels[p]
            )));
        }
    }

    let prepared = Prepared::new(batch.features(), cfg);
    let mut ghat = Matrix::zeros(b, batch.features().cols());
    let mut unit = UnitEvaluator::new(&prepared.feats, cfg.tau);
    let mut value = 0.0;
    let mut denom = Vec::new();
    for &(anchor, positive) in &pairs.pairs {
        denom.clear();
        denom.extend((0..b).filter(|&k| labels[k] != labels[anchor]));
        if denom.is_empty() {
            return Err(Error::EmptyNegativeSet { anchor });
        }
        if cfg.include_positive_in_denominator {
            denom.push(positive);
        }
        value += unit.eval(anchor, positive, &denom, 1.0, &mut ghat)?;
    }
    Ok(LossOutput {
        value,
        grad: prepared.into_raw_grad(ghat),
        term_count: pairs.len(),
    })
}

/// Mean softmax cross-entropy over the batch, stabilized by log-sum-exp.
/// The gradient is `(softmax - onehot) / B`.
pub fn cross_entropy(logits: &Matrix, labels: &[u8]) -> Result<LossOutput> {
    let b = logits.rows();
    let k = logits.cols();
    if labels.len() != b {
        return Err(Error::ShapeMismatch {
            context: format!("{} labels for {b} logit rows", labels.len()),
        });
    }
    let mut value = 0.0;
    let mut grad = Matrix::zeros(b, k);
    let inv_b = 1.0 / b as f64;
    for i in 0..b {
        let class = labels[i] as usize;
        if class >= k {
            return Err(Error::IndexOutOfRange { index: class, size: k });
        }
        let row = logits.row(i);
        let lse = log_sum_exp(row)?;
        value += (lse - row[class]) * inv_b;
        let g = grad.row_mut(i);
        for (j, (gv, &lv)) in g.iter_mut().zip(row).enumerate() {
            let softmax = (lv - lse).exp();
            *gv = (softmax - if j == class { 1.0 } else { 0.0 }) * inv_b;
        }
    }
    Ok(LossOutput {
        value,
        grad,
        term_count: b,
    })
}

/// `(label, count)` for each distinct label, in first-appearance order.
pub(crate) fn count_classes(labels: &[u8]) -> Vec<(u8, usize)> {
    let mut counts: Vec<(u8, usize)> = Vec::new();
    for &l in labels {
        match counts.iter_mut().find(|(x, _)| *x == l) {
            Some((_, c)) => *c += 1,
            None => counts.push((l, 1)),
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{finite_diff_grad, max_relative_error, Rng};
    use crate::rss::select_positives;

    fn random_batch(rng: &mut Rng, b: usize, d: usize, balanced: bool) -> FeatureBatch {
        let z = Matrix::from_vec(b, d, (0..b * d).map(|_| rng.gaussian()).collect()).unwrap();
        let labels: Vec<u8> = if balanced {
            (0..b).map(|i| (i % 2) as u8).collect()
        } else {
            (0..b).map(|_| rng.index(2).unwrap() as u8).collect()
        };
        FeatureBatch::new(z, labels).unwrap()
    }

    fn partner_map(b: usize) -> Vec<usize> {
        (0..b).map(|i| if i % 2 == 0 { i + 1 } else { i - 1 }).collect()
    }

    #[test]
    fn self_cl_with_two_samples_is_zero() {
        let mut rng = Rng::new(1, 0);
        let z = Matrix::from_vec(2, 3, (0..6).map(|_| rng.gaussian()).collect()).unwrap();
        let batch = FeatureBatch::new(z, vec![0, 1]).unwrap();
        let out = self_cl(&batch, &[1, 0], &LossConfig::default()).unwrap();
        assert!(out.value.abs() < 1e-12);
        assert_eq!(out.term_count, 2);
    }

    #[test]
    fn self_cl_symmetric_batch_closed_form() {
        let u = vec![1.0, 0.0, 0.0];
        let z = Matrix::from_rows(&[u.clone(), u.clone(), u.clone(), u]).unwrap();
        let batch = FeatureBatch::new(z, vec![0, 0, 1, 1]).unwrap();
        let out = self_cl(&batch, &partner_map(4), &LossConfig::default()).unwrap();
        assert!((out.value - 4.0 * 3.0f64.ln()).abs() < 1e-12, "{}", out.value);
    }

    #[test]
    fn self_cl_rejects_self_reference_and_tiny_batches() {
        let z = Matrix::zeros(2, 2);
        let batch = FeatureBatch::new(z, vec![0, 1]).unwrap();
        assert!(matches!(
            self_cl(&batch, &[0, 0], &LossConfig::default()),
            Err(Error::SelfPositive { .. })
        ));
        let one = FeatureBatch::new(Matrix::zeros(1, 2), vec![0]).unwrap();
        assert!(matches!(
            self_cl(&one, &[0], &LossConfig::default()),
            Err(Error::NoContrast { .. })
        ));
    }

    #[test]
    fn sup_cl_symmetric_batch_closed_form() {
        let u = vec![0.0, 1.0];
        let z = Matrix::from_rows(&[u.clone(), u.clone(), u.clone(), u]).unwrap();
        let batch = FeatureBatch::new(z, vec![0, 0, 1, 1]).unwrap();
        let out = sup_cl(&batch, &LossConfig::default()).unwrap();
        assert!((out.value - 4.0 * 3.0f64.ln()).abs() < 1e-12);
        assert_eq!(out.term_count, 4);
    }

    #[test]
    fn sup_cl_rejects_singleton_class() {
        let batch = FeatureBatch::new(Matrix::zeros(3, 2), vec![0, 0, 1]).unwrap();
        assert!(matches!(
            sup_cl(&batch, &LossConfig::default()),
            Err(Error::AnchorWithoutPositive { label: 1 })
        ));
    }

    #[test]
    fn steg_cl_symmetric_batch_closed_form() {
        let u = vec![0.6, 0.8];
        let z = Matrix::from_rows(&[u.clone(), u.clone(), u.clone(), u]).unwrap();
        let batch = FeatureBatch::new(z, vec![0, 0, 1, 1]).unwrap();
        let pairs = PairSelection {
            pairs: vec![(0, 1), (2, 3)],
            skipped_classes: vec![],
        };
        let out = steg_cl(&batch, &pairs, &LossConfig::default()).unwrap();
        assert!((out.value - 2.0 * 2.0f64.ln()).abs() < 1e-12, "{}", out.value);
        assert_eq!(out.term_count, 2);
    }

    #[test]
    fn steg_cl_without_negatives_errors() {
        let batch = FeatureBatch::new(Matrix::zeros(3, 2), vec![0, 0, 0]).unwrap();
        let pairs = PairSelection {
            pairs: vec![(0, 1), (1, 2)],
            skipped_classes: vec![],
        };
        assert!(matches!(
            steg_cl(&batch, &pairs, &LossConfig::default()),
            Err(Error::EmptyNegativeSet { .. })
        ));
    }

    #[test]
    fn steg_cl_empty_pairs_is_zero_with_zero_grad() {
        let batch = FeatureBatch::new(Matrix::zeros(2, 2), vec![0, 1]).unwrap();
        let pairs = PairSelection {
            pairs: vec![],
            skipped_classes: vec![0, 1],
        };
        let out = steg_cl(&batch, &pairs, &LossConfig::default()).unwrap();
        assert_eq!(out.value, 0.0);
        assert_eq!(out.term_count, 0);
        assert!(out.grad.data().iter().all(|&g| g == 0.0));
    }

    #[test]
    fn cross_entropy_uniform_and_saturated() {
        let logits = Matrix::from_rows(&[vec![0.0, 0.0]]).unwrap();
        let out = cross_entropy(&logits, &[1]).unwrap();
        assert!((out.value - 2.0f64.ln()).abs() < 1e-15);

        let logits = Matrix::from_rows(&[vec![30.0, -30.0]]).unwrap();
        let out = cross_entropy(&logits, &[0]).unwrap();
        assert!(out.value <= 1e-12);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = Rng::new(2024, 0);
        for &normalize in &[true, false] {
            for &tau in &[0.1, 0.5] {
                let cfg = LossConfig {
                    tau,
                    normalize_features: normalize,
                    ..LossConfig::default()
                };
                let batch = random_batch(&mut rng, 8, 4, true);
                let pmap = partner_map(8);
                let pairs =
                    select_positives(batch.labels(), &mut Rng::new(7, 0)).unwrap();

                let analytic = self_cl(&batch, &pmap, &cfg).unwrap();
                let fd = finite_diff_grad(
                    |z| {
                        let probe =
                            FeatureBatch::new(z.clone(), batch.labels().to_vec()).unwrap();
                        self_cl(&probe, &pmap, &cfg).unwrap().value
                    },
                    batch.features(),
                    1e-5,
                )
                .unwrap();
                let err = max_relative_error(analytic.grad.data(), fd.data());
                assert!(err <= 1e-6, "selfcl norm={normalize} tau={tau}: {err}");

                let analytic = sup_cl(&batch, &cfg).unwrap();
                let fd = finite_diff_grad(
                    |z| {
                        let probe =
                            FeatureBatch::new(z.clone(), batch.labels().to_vec()).unwrap();
                        sup_cl(&probe, &cfg).unwrap().value
                    },
                    batch.features(),
                    1e-5,
                )
                .unwrap();
                let err = max_relative_error(analytic.grad.data(), fd.data());
                assert!(err <= 1e-6, "supcl norm={normalize} tau={tau}: {err}");

                let analytic = steg_cl(&batch, &pairs, &cfg).unwrap();
                let fd = finite_diff_grad(
                    |z| {
                        let probe =
                            FeatureBatch::new(z.clone(), batch.labels().to_vec()).unwrap();
                        steg_cl(&probe, &pairs, &cfg).unwrap().value
                    },
                    batch.features(),
                    1e-5,
                )
                .unwrap();
                let err = max_relative_error(analytic.grad.data(), fd.data());
                assert!(err <= 1e-6, "stegcl norm={normalize} tau={tau}: {err}");
            }
        }
    }

    #[test]
    fn steg_cl_gradient_with_positive_in_denominator() {
        let mut rng = Rng::new(55, 0);
        let cfg = LossConfig {
            include_positive_in_denominator: true,
            ..LossConfig::default()
        };
        let batch = random_batch(&mut rng, 8, 3, true);
        let pairs = select_positives(batch.labels(), &mut Rng::new(3, 1)).unwrap();
        let analytic = steg_cl(&batch, &pairs, &cfg).unwrap();
        let fd = finite_diff_grad(
            |z| {
                let probe = FeatureBatch::new(z.clone(), batch.labels().to_vec()).unwrap();
                steg_cl(&probe, &pairs, &cfg).unwrap().value
            },
            batch.features(),
            1e-5,
        )
        .unwrap();
        let err = max_relative_error(analytic.grad.data(), fd.data());
        assert!(err <= 1e-6, "{err}");
    }

    #[test]
    fn cross_entropy_gradient_matches_finite_differences() {
        let mut rng = Rng::new(91, 0);
        let logits =
            Matrix::from_vec(6, 2, (0..12).map(|_| rng.gaussian()).collect()).unwrap();
        let labels: Vec<u8> = (0..6).map(|i| (i % 2) as u8).collect();
        let out = cross_entropy(&logits, &labels).unwrap();
        let fd = finite_diff_grad(
            |l| cross_entropy(l, &labels).unwrap().value,
            &logits,
            1e-5,
        )
        .unwrap();
        let err = max_relative_error(out.grad.data(), fd.data());
        assert!(err <= 1e-6, "{err}");
    }

    #[test]
    fn permuting_the_batch_permutes_the_gradient() {
        let mut rng = Rng::new(404, 0);
        let batch = random_batch(&mut rng, 6, 3, true);
        let cfg = LossConfig::default();
        let base = sup_cl(&batch, &cfg).unwrap();

        let perm = [3usize, 0, 5, 2, 1, 4];
        let rows: Vec<Vec<f64>> = perm.iter().map(|&i| batch.features().row(i).to_vec()).collect();
        let labels: Vec<u8> = perm.iter().map(|&i| batch.labels()[i]).collect();
        let permuted = FeatureBatch::new(Matrix::from_rows(&rows).unwrap(), labels).unwrap();
        let out = sup_cl(&permuted, &cfg).unwrap();

        assert!((out.value - base.value).abs() / base.value.abs() <= 1e-12);
        for (new_row, &old_index) in perm.iter().enumerate().map(|(r, i)| (r, i)) {
            for c in 0..3 {
                let a = out.grad.get(new_row, c);
                let b = base.grad.get(old_index, c);
                assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0));
            }
        }
    }

    #[test]
    fn normalized_losses_are_scale_invariant() {
        let mut rng = Rng::new(777, 0);
        let batch = random_batch(&mut rng, 8, 4, true);
        let cfg = LossConfig::default();
        let base = sup_cl(&batch, &cfg).unwrap().value;
        for &scale in &[0.01, 3.0, 250.0] {
            let scaled = FeatureBatch::new(
                batch.features().map(|v| v * scale),
                batch.labels().to_vec(),
            )
            .unwrap();
            let v = sup_cl(&scaled, &cfg).unwrap().value;
            assert!((v - base).abs() / base.abs() <= 1e-10, "scale {scale}");
        }
    }

    #[test]
    fn term_counts_follow_the_closed_forms() {
        let mut rng = Rng::new(8, 0);
        for b in [4usize, 6, 10, 12] {
            let batch = random_batch(&mut rng, b, 3, true);
            let counts = count_classes(batch.labels());
            let sup_expected: usize = counts.iter().map(|&(_, c)| c * (c - 1)).sum();
            let steg_expected: usize = counts.iter().map(|&(_, c)| c - 1).sum();
            let cfg = LossConfig::default();
            assert_eq!(sup_cl(&batch, &cfg).unwrap().term_count, sup_expected);
            let pairs = select_positives(batch.labels(), &mut Rng::new(0, 0)).unwrap();
            assert_eq!(
                steg_cl(&batch, &pairs, &cfg).unwrap().term_count,
                steg_expected
            );
        }
    }
}
