//! Desk-scale evaluation harness.
//!
//! Eight classes (four tester-identity presets x armed/unarmed) are
//! synthesized with randomized start range, heading, gait phase, and gait
//! frequency. Features are flattened DTMs or ChTMs; class separability is
//! measured by normalized inter/intra-class distances, recognition by a
//! nearest-centroid classifier (with a k-NN variant), and robustness by
//! noise-level and Chebyshev-order sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::chtm::{build_chtm, ChebyshevTimeMap, Region};
use crate::dsp::DopplerTimeMap;
use crate::echo::{add_noise, synthesize_cube};
use crate::envelope::gaussian_smooth;
use crate::error::{CoreError, Result};
use crate::kinematics::{GaitConfig, GaitPattern};
use crate::pipeline::{process_cube, radar_center, torso_ranges, walk_poses, PipelineConfig};

/// Tester identity proxy: one of four anthropometric presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Identity {
    P1,
    P2,
    P3,
    P4,
}

impl Identity {
    pub const ALL: [Identity; 4] = [Identity::P1, Identity::P2, Identity::P3, Identity::P4];

    pub fn index(self) -> usize {
        match self {
            Identity::P1 => 0,
            Identity::P2 => 1,
            Identity::P3 => 2,
            Identity::P4 => 3,
        }
    }
}

/// Armed or unarmed walking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Threat {
    Unarmed,
    Armed,
}

impl Threat {
    pub const ALL: [Threat; 2] = [Threat::Unarmed, Threat::Armed];

    pub fn index(self) -> usize {
        match self {
            Threat::Unarmed => 0,
            Threat::Armed => 1,
        }
    }

    pub fn pattern(self) -> GaitPattern {
        match self {
            Threat::Unarmed => GaitPattern::NormalWalking,
            Threat::Armed => GaitPattern::ArmedWalking,
        }
    }
}

/// One of the eight dataset classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassLabel {
    pub identity: Identity,
    pub threat: Threat,
}

impl ClassLabel {
    pub const COUNT: usize = 8;

    pub fn index(self) -> usize {
        self.identity.index() * 2 + self.threat.index()
    }

    pub fn all() -> Vec<ClassLabel> {
        let mut out = Vec::with_capacity(Self::COUNT);
        for identity in Identity::ALL {
            for threat in Threat::ALL {
                out.push(ClassLabel { identity, threat });
            }
        }
        out
    }

    pub fn short_name(self) -> String {
        let t = match self.threat {
            Threat::Unarmed => "U",
            Threat::Armed => "A",
        };
        format!("P{}-{}", self.identity.index() + 1, t)
    }
}

/// Everything needed to regenerate one sample deterministically.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleSpec {
    pub id: String,
    pub label: ClassLabel,
    pub gait: GaitConfig,
    /// Gait phase offset: poses are sampled from this absolute time.
    pub start_time: f64,
    pub noise_seed: u64,
}

/// A labeled feature vector.
#[derive(Debug, Clone)]
pub struct LabeledSample {
    pub label: ClassLabel,
    pub features: Vec<f64>,
    pub source_id: String,
}

/// Feature representation under evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    Dtm,
    Chtm,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Dtm => "DTM",
            Representation::Chtm => "ChTM",
        }
    }
}

/// Four anthropometric presets derived from a base gait: per-limb lengths
/// vary within +-8% (with distinct thigh/calf/arm proportions per person,
/// so segment-length ratios differ), swing amplitudes within +-10% (again
/// with distinct proportions), gait frequency within +-10%, torso height
/// within +-5%.
pub fn identity_presets(base: &GaitConfig) -> [GaitConfig; 4] {
    let thigh = [0.92, 1.06, 0.97, 1.03];
    let calf = [1.06, 0.94, 1.03, 0.97];
    let arm = [0.97, 1.03, 0.92, 1.08];
    let a_thigh = [1.10, 0.95, 0.90, 1.05];
    let a_calf = [0.92, 1.08, 1.02, 0.96];
    let a_arm = [1.05, 0.90, 1.10, 0.95];
    let freq = [1.08, 0.94, 1.04, 0.92];
    let height = [0.96, 1.04, 0.99, 1.01];
    std::array::from_fn(|i| {
        let mut g = base.clone();
        g.thigh_length *= thigh[i];
        g.calf_length *= calf[i];
        g.arm_length *= arm[i];
        g.thigh_amplitude *= a_thigh[i];
        g.calf_amplitude *= a_calf[i];
        g.arm_amplitude *= a_arm[i];
        g.gait_frequency *= freq[i];
        g.torso_height *= height[i];
        g
    })
}

/// Generate `per_class` deterministic sample specs for every one of the
/// eight classes: start range uniform in [1, 5] m, walk direction chosen to
/// keep the target in the scene with +-10 deg heading jitter, uniform gait
/// phase, and +-10% gait-frequency jitter.
pub fn generate_specs(
    base_gait: &GaitConfig,
    per_class: usize,
    master_seed: u64,
) -> Result<Vec<SampleSpec>> {
    if per_class == 0 {
        return Err(CoreError::invalid_config("eval.per_class", "must be >= 1"));
    }
    let presets = identity_presets(base_gait);
    let mut master = ChaCha8Rng::seed_from_u64(master_seed);
    let mut specs = Vec::with_capacity(per_class * ClassLabel::COUNT);
    for label in ClassLabel::all() {
        for replicate in 0..per_class {
            let sub_seed: u64 = master.gen();
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
            let mut gait = presets[label.identity.index()].clone();
            gait.pattern = label.threat.pattern();
            gait.gait_frequency *= rng.gen_range(0.9..1.1);

            let start_range: f64 = rng.gen_range(1.0..5.0);
            let jitter = rng.gen_range(-10f64.to_radians()..10f64.to_radians());
            // Every sample walks away from the radar: any start range in
            // [1, 5] m keeps the target in the scene for the whole window.
            gait.walk_heading = jitter;
            let start_time = rng.gen_range(0.0..1.0 / gait.gait_frequency);
            // Place the torso at (start_range, 0) at the first pulse.
            gait.initial_position = [
                start_range - gait.torso_speed * gait.walk_heading.cos() * start_time,
                -gait.torso_speed * gait.walk_heading.sin() * start_time,
                0.0,
            ];
            let noise_seed: u64 = rng.gen();
            specs.push(SampleSpec {
                id: format!("{}-{replicate:03}", label.short_name()),
                label,
                gait,
                start_time,
                noise_seed,
            });
        }
    }
    Ok(specs)
}

/// Flatten a DTM into a feature vector after per-map min-max normalization.
pub fn dtm_features(dtm: &DopplerTimeMap) -> Vec<f64> {
    let min = dtm.magnitudes.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = dtm.magnitudes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    if span > 0.0 {
        dtm.magnitudes.iter().map(|&v| (v - min) / span).collect()
    } else {
        vec![0.0; dtm.magnitudes.len()]
    }
}

/// Flatten a (log-normalized) ChTM into a feature vector.
pub fn chtm_features(map: &ChebyshevTimeMap) -> Vec<f64> {
    map.values.iter().copied().collect()
}

/// Normalized class-separability summary.
#[derive(Debug, Clone)]
pub struct SeparabilityReport {
    pub d_inter: f64,
    pub d_intra: f64,
    pub classes: Vec<ClassLabel>,
    pub class_counts: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
}

fn check_feature_lengths(samples: &[LabeledSample]) -> Result<usize> {
    let dim = samples
        .first()
        .ok_or(CoreError::EmptyInput("sample list"))?
        .features
        .len();
    for s in samples {
        if s.features.len() != dim {
            return Err(CoreError::DimensionMismatch {
                what: "feature vector length",
                expected: dim,
                actual: s.features.len(),
            });
        }
    }
    Ok(dim)
}

fn present_classes(samples: &[LabeledSample]) -> Vec<ClassLabel> {
    let mut classes: Vec<ClassLabel> = Vec::new();
    for s in samples {
        if !classes.contains(&s.label) {
            classes.push(s.label);
        }
    }
    classes.sort();
    classes
}

/// Mean pairwise centroid distance and mean within-class spread on
/// min-max normalized features.
pub fn separability(samples: &[LabeledSample]) -> Result<SeparabilityReport> {
    let dim = check_feature_lengths(samples)?;
    let classes = present_classes(samples);
    if classes.len() < 2 {
        return Err(CoreError::DegenerateInput(
            "separability needs at least two classes".into(),
        ));
    }

    // Min-max normalize each dimension to [0, 1] over the whole dataset.
    let mut min = vec![f64::INFINITY; dim];
    let mut max = vec![f64::NEG_INFINITY; dim];
    for s in samples {
        for (d, &v) in s.features.iter().enumerate() {
            min[d] = min[d].min(v);
            max[d] = max[d].max(v);
        }
    }
    let normalize = |features: &[f64]| -> Vec<f64> {
        features
            .iter()
            .enumerate()
            .map(|(d, &v)| {
                let span = max[d] - min[d];
                if span > 0.0 {
                    (v - min[d]) / span
                } else {
                    0.0
                }
            })
            .collect()
    };

    let mut centroids = vec![vec![0.0; dim]; classes.len()];
    let mut counts = vec![0usize; classes.len()];
    let normalized: Vec<(usize, Vec<f64>)> = samples
        .iter()
        .map(|s| {
            let c = classes.iter().position(|l| *l == s.label).unwrap();
            (c, normalize(&s.features))
        })
        .collect();
    for (c, f) in &normalized {
        counts[*c] += 1;
        for (acc, v) in centroids[*c].iter_mut().zip(f) {
            *acc += v;
        }
    }
    for (centroid, &n) in centroids.iter_mut().zip(&counts) {
        centroid.iter_mut().for_each(|v| *v /= n as f64);
    }

    let dist = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    };

    let n_cls = classes.len() as f64;
    let mut d_inter = 0.0;
    for i in 0..classes.len() - 1 {
        for j in i + 1..classes.len() {
            d_inter += dist(&centroids[i], &centroids[j]);
        }
    }
    d_inter *= 2.0 / (n_cls * (n_cls - 1.0));

    let mut spread = vec![0.0; classes.len()];
    for (c, f) in &normalized {
        spread[*c] += dist(f, &centroids[*c]);
    }
    let d_intra = spread
        .iter()
        .zip(&counts)
        .map(|(s, &n)| s / n as f64)
        .sum::<f64>()
        / n_cls;

    Ok(SeparabilityReport {
        d_inter,
        d_intra,
        classes,
        class_counts: counts,
        centroids,
    })
}

/// Classification outcome.
#[derive(Debug, Clone)]
pub struct EvalOutcome {
    pub overall_accuracy: f64,
    /// Indexed like `classes`.
    pub per_class_accuracy: Vec<f64>,
    pub classes: Vec<ClassLabel>,
    /// confusion[true][predicted].
    pub confusion: Vec<Vec<usize>>,
}

struct ZScore {
    mean: Vec<f64>,
    std: Vec<f64>,
}

impl ZScore {
    fn fit(samples: &[LabeledSample], dim: usize) -> Self {
        let n = samples.len() as f64;
        let mut mean = vec![0.0; dim];
        for s in samples {
            for (m, &v) in mean.iter_mut().zip(&s.features) {
                *m += v / n;
            }
        }
        let mut var = vec![0.0; dim];
        for s in samples {
            for ((v, &x), m) in var.iter_mut().zip(&s.features).zip(&mean) {
                let d = x - m;
                *v += d * d / n;
            }
        }
        let std = var
            .into_iter()
            .map(|v| {
                let s = v.sqrt();
                if s > 1e-12 {
                    s
                } else {
                    1.0
                }
            })
            .collect();
        Self { mean, std }
    }

    fn apply(&self, features: &[f64]) -> Vec<f64> {
        features
            .iter()
            .zip(&self.mean)
            .zip(&self.std)
            .map(|((&x, m), s)| (x - m) / s)
            .collect()
    }
}

fn outcome_from_predictions(
    classes: &[ClassLabel],
    truth: &[usize],
    predicted: &[usize],
) -> EvalOutcome {
    let k = classes.len();
    let mut confusion = vec![vec![0usize; k]; k];
    for (&t, &p) in truth.iter().zip(predicted) {
        confusion[t][p] += 1;
    }
    let mut per_class_accuracy = vec![0.0; k];
    for c in 0..k {
        let total: usize = confusion[c].iter().sum();
        if total > 0 {
            per_class_accuracy[c] = confusion[c][c] as f64 / total as f64;
        }
    }
    let correct: usize = (0..k).map(|c| confusion[c][c]).sum();
    EvalOutcome {
        overall_accuracy: correct as f64 / truth.len() as f64,
        per_class_accuracy,
        classes: classes.to_vec(),
        confusion,
    }
}

fn prepare_classification(
    train: &[LabeledSample],
    test: &[LabeledSample],
) -> Result<(Vec<ClassLabel>, ZScore, usize)> {
    let dim = check_feature_lengths(train)?;
    if test.is_empty() {
        return Err(CoreError::EmptyInput("test set"));
    }
    let classes = present_classes(train);
    for s in test {
        if s.features.len() != dim {
            return Err(CoreError::DimensionMismatch {
                what: "test feature vector length",
                expected: dim,
                actual: s.features.len(),
            });
        }
        if !classes.contains(&s.label) {
            return Err(CoreError::DegenerateInput(format!(
                "test label {} unseen in training set",
                s.label.short_name()
            )));
        }
    }
    Ok((classes, ZScore::fit(train, dim), dim))
}

/// Nearest-centroid classifier on z-scored features. Ties break toward the
/// lowest class index.
pub fn nearest_centroid(train: &[LabeledSample], test: &[LabeledSample]) -> Result<EvalOutcome> {
    let (classes, zscore, dim) = prepare_classification(train, test)?;

    let mut centroids = vec![vec![0.0; dim]; classes.len()];
    let mut counts = vec![0usize; classes.len()];
    for s in train {
        let c = classes.iter().position(|l| *l == s.label).unwrap();
        counts[c] += 1;
        for (acc, v) in centroids[c].iter_mut().zip(zscore.apply(&s.features)) {
            *acc += v;
        }
    }
    for (centroid, &n) in centroids.iter_mut().zip(&counts) {
        centroid.iter_mut().for_each(|v| *v /= n as f64);
    }

    let mut truth = Vec::with_capacity(test.len());
    let mut predicted = Vec::with_capacity(test.len());
    for s in test {
        let f = zscore.apply(&s.features);
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (c, centroid) in centroids.iter().enumerate() {
            let d: f64 = centroid
                .iter()
                .zip(&f)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        truth.push(classes.iter().position(|l| *l == s.label).unwrap());
        predicted.push(best);
    }
    Ok(outcome_from_predictions(&classes, &truth, &predicted))
}

/// k-nearest-neighbor variant (majority vote over z-scored Euclidean
/// distance; vote ties break toward the lowest class index).
pub fn knn_classify(
    train: &[LabeledSample],
    test: &[LabeledSample],
    k: usize,
) -> Result<EvalOutcome> {
    let (classes, zscore, _dim) = prepare_classification(train, test)?;
    if k == 0 {
        return Err(CoreError::invalid_config("eval.knn_k", "must be >= 1"));
    }
    let train_z: Vec<(usize, Vec<f64>)> = train
        .iter()
        .map(|s| {
            (
                classes.iter().position(|l| *l == s.label).unwrap(),
                zscore.apply(&s.features),
            )
        })
        .collect();

    let mut truth = Vec::with_capacity(test.len());
    let mut predicted = Vec::with_capacity(test.len());
    for s in test {
        let f = zscore.apply(&s.features);
        let mut dists: Vec<(f64, usize, usize)> = train_z
            .iter()
            .enumerate()
            .map(|(i, (c, t))| {
                let d: f64 = t.iter().zip(&f).map(|(a, b)| (a - b) * (a - b)).sum();
                (d, i, *c)
            })
            .collect();
        dists.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        let mut votes = vec![0usize; classes.len()];
        for (_, _, c) in dists.iter().take(k.min(dists.len())) {
            votes[*c] += 1;
        }
        let best = (0..classes.len()).max_by_key(|&c| (votes[c], usize::MAX - c)).unwrap();
        truth.push(classes.iter().position(|l| *l == s.label).unwrap());
        predicted.push(best);
    }
    Ok(outcome_from_predictions(&classes, &truth, &predicted))
}

/// Deterministic stratified split: per class, shuffle and take
/// `train_fraction` for training.
pub fn stratified_split(
    labels: &[ClassLabel],
    train_fraction: f64,
    seed: u64,
) -> (Vec<usize>, Vec<usize>) {
    use rand::seq::SliceRandom;
    let mut train = Vec::new();
    let mut test = Vec::new();
    let mut classes = present_class_labels(labels);
    classes.sort();
    for class in classes {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (class.index() as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        idx.shuffle(&mut rng);
        let mut n_train = (idx.len() as f64 * train_fraction).round() as usize;
        if idx.len() >= 2 {
            n_train = n_train.clamp(1, idx.len() - 1);
        } else {
            n_train = idx.len();
        }
        train.extend_from_slice(&idx[..n_train]);
        test.extend_from_slice(&idx[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

fn present_class_labels(labels: &[ClassLabel]) -> Vec<ClassLabel> {
    let mut classes: Vec<ClassLabel> = Vec::new();
    for l in labels {
        if !classes.contains(l) {
            classes.push(*l);
        }
    }
    classes
}

/// One sweep-table row.
#[derive(Debug, Clone)]
pub struct SweepRow {
    /// Noise level in dB or Chebyshev order, depending on the sweep.
    pub key: SweepKey,
    pub representation: Representation,
    pub overall_accuracy: f64,
    pub per_class_accuracy: Vec<f64>,
    pub classes: Vec<ClassLabel>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepKey {
    SnrDb(f64),
    Order(usize),
}

impl SweepKey {
    pub fn to_label(self) -> String {
        match self {
            SweepKey::SnrDb(db) if db.is_infinite() => "inf".to_string(),
            SweepKey::SnrDb(db) => format!("{db}"),
            SweepKey::Order(n) => format!("{n}"),
        }
    }
}

/// Accuracy table over a sweep.
#[derive(Debug, Clone, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn find(&self, key: SweepKey, representation: Representation) -> Option<&SweepRow> {
        self.rows.iter().find(|r| {
            r.representation == representation
                && match (r.key, key) {
                    (SweepKey::SnrDb(a), SweepKey::SnrDb(b)) => a == b,
                    (SweepKey::Order(a), SweepKey::Order(b)) => a == b,
                    _ => false,
                }
        })
    }
}

fn noise_seed_for(base: u64, level_index: usize) -> u64 {
    base.wrapping_add((level_index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Train/test split protocol: stratified 80/20-style holdout, repeated with
/// derived seeds and averaged to stabilize small-dataset accuracies.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    pub repeats: usize,
}

impl SplitSpec {
    pub fn new(train_fraction: f64, seed: u64) -> Self {
        Self {
            train_fraction,
            seed,
            repeats: 5,
        }
    }
}

/// Mean accuracy over repeated stratified splits.
fn classify_repeated(samples: &[LabeledSample], split: SplitSpec) -> Result<EvalOutcome> {
    if split.repeats == 0 {
        return Err(CoreError::invalid_config("eval.split repeats", "must be >= 1"));
    }
    let labels: Vec<ClassLabel> = samples.iter().map(|s| s.label).collect();
    let mut overall = 0.0;
    let mut per_class: Vec<f64> = Vec::new();
    let mut classes: Vec<ClassLabel> = Vec::new();
    let mut confusion: Vec<Vec<usize>> = Vec::new();
    for r in 0..split.repeats {
        let seed = split
            .seed
            .wrapping_add((r as u64).wrapping_mul(0x517C_C1B7_2722_0A95));
        let (train_idx, test_idx) = stratified_split(&labels, split.train_fraction, seed);
        let train: Vec<LabeledSample> = train_idx.iter().map(|&i| samples[i].clone()).collect();
        let test: Vec<LabeledSample> = test_idx.iter().map(|&i| samples[i].clone()).collect();
        let outcome = nearest_centroid(&train, &test)?;
        overall += outcome.overall_accuracy / split.repeats as f64;
        if per_class.is_empty() {
            per_class = vec![0.0; outcome.per_class_accuracy.len()];
            classes = outcome.classes.clone();
            confusion = vec![vec![0; classes.len()]; classes.len()];
        }
        for (acc, a) in per_class.iter_mut().zip(&outcome.per_class_accuracy) {
            *acc += a / split.repeats as f64;
        }
        for (row, or) in confusion.iter_mut().zip(&outcome.confusion) {
            for (c, oc) in row.iter_mut().zip(or) {
                *c += oc;
            }
        }
    }
    Ok(EvalOutcome {
        overall_accuracy: overall,
        per_class_accuracy: per_class,
        classes,
        confusion,
    })
}

/// Build DTM and micro-ChTM feature vectors for every spec at every noise
/// level. The clean cube is synthesized once per sample and re-noised per
/// level; each sample owns its seeded RNG, so the result does not depend on
/// the parallel schedule.
fn features_per_level(
    specs: &[SampleSpec],
    cfg: &PipelineConfig,
    levels: &[f64],
) -> Result<Vec<Vec<(Vec<f64>, Vec<f64>)>>> {
    specs
        .par_iter()
        .map(|spec| {
            let poses = walk_poses(&spec.gait, spec.start_time, &cfg.radar);
            let clean = synthesize_cube(&poses, &cfg.radar, &cfg.wall, &cfg.scatterers)?;
            let ranges = torso_ranges(&poses, radar_center(&cfg.radar));
            levels
                .iter()
                .enumerate()
                .map(|(li, &db)| {
                    let cube = add_noise(&clean, db, noise_seed_for(spec.noise_seed, li))?;
                    let products = process_cube(&cube, &ranges, cfg)?;
                    Ok((dtm_features(&products.dtm), chtm_features(&products.chtm_micro)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

/// Noise-robustness sweep: inject noise into the raw cubes at every level,
/// rebuild maps and features for both representations, and record
/// nearest-centroid accuracies under the split protocol.
pub fn snr_sweep(
    specs: &[SampleSpec],
    cfg: &PipelineConfig,
    levels: &[f64],
    split: SplitSpec,
) -> Result<SweepTable> {
    if levels.is_empty() {
        return Err(CoreError::EmptyInput("snr_sweep levels"));
    }
    let features = features_per_level(specs, cfg, levels)?;

    let mut table = SweepTable::default();
    for representation in [Representation::Dtm, Representation::Chtm] {
        for (li, &db) in levels.iter().enumerate() {
            let samples: Vec<LabeledSample> = specs
                .iter()
                .zip(&features)
                .map(|(spec, per_level)| {
                    let (dtm, chtm) = &per_level[li];
                    LabeledSample {
                        label: spec.label,
                        features: match representation {
                            Representation::Dtm => dtm.clone(),
                            Representation::Chtm => chtm.clone(),
                        },
                        source_id: spec.id.clone(),
                    }
                })
                .collect();
            let outcome = classify_repeated(&samples, split)?;
            table.rows.push(SweepRow {
                key: SweepKey::SnrDb(db),
                representation,
                overall_accuracy: outcome.overall_accuracy,
                per_class_accuracy: outcome.per_class_accuracy,
                classes: outcome.classes,
            });
        }
    }
    Ok(table)
}

/// Chebyshev-order sweep: DTMs and envelopes are built once per sample at
/// `delta_snr_db`, then the micro ChTM is rebuilt per order and classified.
pub fn order_sweep(
    specs: &[SampleSpec],
    cfg: &PipelineConfig,
    orders: &[usize],
    delta_snr_db: f64,
    split: SplitSpec,
) -> Result<SweepTable> {
    if orders.is_empty() {
        return Err(CoreError::EmptyInput("order_sweep orders"));
    }
    let per_sample: Vec<Vec<Vec<f64>>> = specs
        .par_iter()
        .map(|spec| {
            let poses = walk_poses(&spec.gait, spec.start_time, &cfg.radar);
            let clean = synthesize_cube(&poses, &cfg.radar, &cfg.wall, &cfg.scatterers)?;
            let cube = add_noise(&clean, delta_snr_db, spec.noise_seed)?;
            let ranges = torso_ranges(&poses, radar_center(&cfg.radar));
            let products = process_cube(&cube, &ranges, cfg)?;
            let smoothed = gaussian_smooth(&products.dtm, &cfg.envelope);
            orders
                .iter()
                .map(|&n| {
                    let map = build_chtm(
                        &smoothed,
                        &products.envelopes,
                        Region::Micro,
                        n,
                        cfg.chtm.epsilon,
                    )?;
                    Ok(chtm_features(&map))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = SweepTable::default();
    for (oi, &order) in orders.iter().enumerate() {
        let samples: Vec<LabeledSample> = specs
            .iter()
            .zip(&per_sample)
            .map(|(spec, per_order)| LabeledSample {
                label: spec.label,
                features: per_order[oi].clone(),
                source_id: spec.id.clone(),
            })
            .collect();
        let outcome = classify_repeated(&samples, split)?;
        table.rows.push(SweepRow {
            key: SweepKey::Order(order),
            representation: Representation::Chtm,
            overall_accuracy: outcome.overall_accuracy,
            per_class_accuracy: outcome.per_class_accuracy,
            classes: outcome.classes,
        });
    }
    Ok(table)
}
