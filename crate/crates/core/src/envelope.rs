//! Macro and micro Doppler envelope extraction.
//!
//! The smoothed DTM is scanned column by column against two adaptive
//! thresholds: the lower (micro) threshold bounds the full limb Doppler
//! extent, the higher (torso) threshold bounds the high-energy torso band.
//! Columns with no crossing are filled by linear interpolation and the four
//! curves are smoothed with a moving median followed by tricube-weighted
//! local linear regression.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::dsp::DopplerTimeMap;
use crate::error::{CoreError, Result};

/// Envelope extraction parameters (units of bins/columns).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SmoothingConfig {
    pub gaussian_sigma: f64,
    pub kernel_radius: usize,
    /// Micro threshold as a ratio of the global smoothed maximum.
    pub ratio_micro: f64,
    /// Torso threshold as a ratio of the global smoothed maximum.
    pub ratio_torso: f64,
    pub median_window: usize,
    pub smooth_span: usize,
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        Self {
            gaussian_sigma: 1.5,
            kernel_radius: 4,
            ratio_micro: 0.15,
            ratio_torso: 0.55,
            median_window: 5,
            smooth_span: 11,
        }
    }
}

impl SmoothingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.ratio_micro > 0.0 && self.ratio_micro < self.ratio_torso && self.ratio_torso < 1.0)
        {
            return Err(CoreError::invalid_config(
                "envelope.ratio_micro/ratio_torso",
                "need 0 < ratio_micro < ratio_torso < 1",
            ));
        }
        if !(self.gaussian_sigma > 0.0) {
            return Err(CoreError::invalid_config(
                "envelope.gaussian_sigma",
                "must be positive",
            ));
        }
        if (self.kernel_radius as f64) < (2.0 * self.gaussian_sigma).ceil() {
            return Err(CoreError::invalid_config(
                "envelope.kernel_radius",
                "must be at least ceil(2 sigma)",
            ));
        }
        for (name, w) in [
            ("envelope.median_window", self.median_window),
            ("envelope.smooth_span", self.smooth_span),
        ] {
            if w == 0 || w % 2 == 0 {
                return Err(CoreError::invalid_config(name, "must be odd and >= 1"));
            }
        }
        Ok(())
    }
}

/// Which of the four envelope curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    MicroUpper,
    MicroLower,
    TorsoUpper,
    TorsoLower,
}

/// The four envelope curves as fractional frequency indices over slow-time
/// columns (row 0 = most positive Doppler, so "upper" means smaller index).
#[derive(Debug, Clone)]
pub struct EnvelopeSet {
    pub micro_upper: Vec<f64>,
    pub micro_lower: Vec<f64>,
    pub torso_upper: Vec<f64>,
    pub torso_lower: Vec<f64>,
    pub micro_valid: Vec<bool>,
    pub torso_valid: Vec<bool>,
}

impl EnvelopeSet {
    pub fn n_columns(&self) -> usize {
        self.micro_upper.len()
    }

    pub fn curve(&self, which: Curve) -> &[f64] {
        match which {
            Curve::MicroUpper => &self.micro_upper,
            Curve::MicroLower => &self.micro_lower,
            Curve::TorsoUpper => &self.torso_upper,
            Curve::TorsoLower => &self.torso_lower,
        }
    }

    pub fn valid(&self, which: Curve) -> &[bool] {
        match which {
            Curve::MicroUpper | Curve::MicroLower => &self.micro_valid,
            Curve::TorsoUpper | Curve::TorsoLower => &self.torso_valid,
        }
    }

    /// Index-order invariant on columns where both threshold bands are valid:
    /// micro_upper <= torso_upper <= torso_lower <= micro_lower.
    pub fn ordering_holds(&self) -> bool {
        (0..self.n_columns()).all(|m| {
            if self.micro_valid[m] && self.torso_valid[m] {
                self.micro_upper[m] <= self.torso_upper[m] + 1e-9
                    && self.torso_upper[m] <= self.torso_lower[m] + 1e-9
                    && self.torso_lower[m] <= self.micro_lower[m] + 1e-9
            } else {
                true
            }
        })
    }
}

fn gaussian_kernel(sigma: f64, radius: usize) -> Vec<f64> {
    let mut k: Vec<f64> = (-(radius as isize)..=radius as isize)
        .map(|u| (-((u * u) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

/// 2-D Gaussian smoothing with replicate padding at the borders.
///
/// The truncated kernel is separable; each normalized 1-D pass preserves the
/// response to a constant image exactly.
pub fn gaussian_smooth(dtm: &DopplerTimeMap, cfg: &SmoothingConfig) -> DopplerTimeMap {
    let kernel = gaussian_kernel(cfg.gaussian_sigma, cfg.kernel_radius);
    let r = cfg.kernel_radius as isize;
    let (rows, cols) = (dtm.magnitudes.nrows(), dtm.magnitudes.ncols());

    let clamp = |i: isize, n: usize| -> usize { i.clamp(0, n as isize - 1) as usize };

    // Vertical pass.
    let mut tmp = Array2::<f64>::zeros((rows, cols));
    for c in 0..cols {
        for i in 0..rows as isize {
            let mut acc = 0.0;
            for (j, &w) in kernel.iter().enumerate() {
                acc += w * dtm.magnitudes[[clamp(i + j as isize - r, rows), c]];
            }
            tmp[[i as usize, c]] = acc;
        }
    }
    // Horizontal pass.
    let mut out = Array2::<f64>::zeros((rows, cols));
    for i in 0..rows {
        for c in 0..cols as isize {
            let mut acc = 0.0;
            for (j, &w) in kernel.iter().enumerate() {
                acc += w * tmp[[i, clamp(c + j as isize - r, cols)]];
            }
            out[[i, c as usize]] = acc;
        }
    }
    DopplerTimeMap {
        magnitudes: out,
        doppler_axis: dtm.doppler_axis.clone(),
        slow_time_axis: dtm.slow_time_axis.clone(),
        compensated: dtm.compensated,
    }
}

/// The micro and torso thresholds: ratio times the global smoothed maximum.
pub fn adaptive_thresholds(smoothed: &DopplerTimeMap, cfg: &SmoothingConfig) -> Result<(f64, f64)> {
    let max = smoothed.magnitudes.iter().cloned().fold(f64::MIN, f64::max);
    if !(max > 0.0) {
        return Err(CoreError::DegenerateInput(
            "adaptive_thresholds: map has no positive values".into(),
        ));
    }
    Ok((cfg.ratio_micro * max, cfg.ratio_torso * max))
}

/// Scan each column for threshold crossings. Columns with no crossing are
/// marked invalid; gaps are handled by `fill_and_smooth`.
pub fn scan_envelopes(smoothed: &DopplerTimeMap, eta_micro: f64, eta_torso: f64) -> EnvelopeSet {
    let (rows, cols) = (smoothed.magnitudes.nrows(), smoothed.magnitudes.ncols());
    let mut set = EnvelopeSet {
        micro_upper: vec![0.0; cols],
        micro_lower: vec![0.0; cols],
        torso_upper: vec![0.0; cols],
        torso_lower: vec![0.0; cols],
        micro_valid: vec![false; cols],
        torso_valid: vec![false; cols],
    };
    for m in 0..cols {
        let scan = |eta: f64| -> Option<(usize, usize)> {
            let mut first = None;
            let mut last = None;
            for k in 0..rows {
                if smoothed.magnitudes[[k, m]] > eta {
                    if first.is_none() {
                        first = Some(k);
                    }
                    last = Some(k);
                }
            }
            first.zip(last)
        };
        if let Some((up, low)) = scan(eta_micro) {
            set.micro_upper[m] = up as f64;
            set.micro_lower[m] = low as f64;
            set.micro_valid[m] = true;
        }
        if let Some((up, low)) = scan(eta_torso) {
            set.torso_upper[m] = up as f64;
            set.torso_lower[m] = low as f64;
            set.torso_valid[m] = true;
        }
    }
    set
}

/// Linear interpolation over invalid columns, with nearest-value
/// extrapolation before the first and after the last valid column.
pub fn fill_gaps(values: &[f64], valid: &[bool]) -> Result<Vec<f64>> {
    let n = values.len();
    let idx: Vec<usize> = (0..n).filter(|&i| valid[i]).collect();
    if idx.is_empty() {
        return Err(CoreError::DegenerateInput(
            "fill_gaps: curve has no valid columns".into(),
        ));
    }
    let mut out = vec![0.0; n];
    for i in 0..n {
        if valid[i] {
            out[i] = values[i];
            continue;
        }
        let next = idx.partition_point(|&j| j < i);
        out[i] = match (next.checked_sub(1).map(|p| idx[p]), idx.get(next)) {
            (None, Some(&b)) => values[b],
            (Some(a), None) => values[a],
            (Some(a), Some(&b)) => {
                let t = (i - a) as f64 / (b - a) as f64;
                values[a] + t * (values[b] - values[a])
            }
            (None, None) => unreachable!(),
        };
    }
    Ok(out)
}

/// Centered moving median; the window is truncated at the edges.
pub fn moving_median(values: &[f64], window: usize) -> Vec<f64> {
    let n = values.len();
    let half = window / 2;
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            let mut w: Vec<f64> = values[lo..hi].to_vec();
            w.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let len = w.len();
            if len % 2 == 1 {
                w[len / 2]
            } else {
                0.5 * (w[len / 2 - 1] + w[len / 2])
            }
        })
        .collect()
}

/// Locally estimated scatterplot smoothing: tricube-weighted local linear
/// regression over a centered span of columns.
pub fn loess_smooth(values: &[f64], span: usize) -> Vec<f64> {
    let n = values.len();
    if span <= 1 || n < 3 {
        return values.to_vec();
    }
    let half = span / 2;
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            let d_max = (hi - 1 - lo).max(1) as f64;
            let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for j in lo..hi {
                let d = (j as f64 - i as f64).abs() / (d_max + 1.0);
                let w = (1.0 - d.powi(3)).powi(3);
                let x = j as f64 - i as f64;
                sw += w;
                sx += w * x;
                sy += w * values[j];
                sxx += w * x * x;
                sxy += w * x * values[j];
            }
            let denom = sw * sxx - sx * sx;
            if denom.abs() < 1e-12 {
                sy / sw
            } else {
                // Intercept of the weighted fit evaluated at x = 0.
                (sxx * sy - sx * sxy) / denom
            }
        })
        .collect()
}

/// Fill gaps, median-filter, and LOESS-smooth all four curves; output is
/// valid on every column. The index ordering between the micro and torso
/// bands is re-imposed after smoothing, and values are clamped to the
/// frequency index range.
pub fn fill_and_smooth(raw: &EnvelopeSet, cfg: &SmoothingConfig, n_freq: usize) -> Result<EnvelopeSet> {
    let process = |values: &[f64], valid: &[bool]| -> Result<Vec<f64>> {
        let filled = fill_gaps(values, valid)?;
        let medianed = moving_median(&filled, cfg.median_window);
        Ok(loess_smooth(&medianed, cfg.smooth_span))
    };
    let mut micro_upper = process(&raw.micro_upper, &raw.micro_valid)?;
    let mut micro_lower = process(&raw.micro_lower, &raw.micro_valid)?;
    let mut torso_upper = process(&raw.torso_upper, &raw.torso_valid)?;
    let mut torso_lower = process(&raw.torso_lower, &raw.torso_valid)?;

    let hi = (n_freq - 1) as f64;
    let n = micro_upper.len();
    for m in 0..n {
        micro_upper[m] = micro_upper[m].clamp(0.0, hi);
        micro_lower[m] = micro_lower[m].clamp(micro_upper[m], hi);
        torso_upper[m] = torso_upper[m].clamp(micro_upper[m], micro_lower[m]);
        torso_lower[m] = torso_lower[m].clamp(torso_upper[m], micro_lower[m]);
    }
    Ok(EnvelopeSet {
        micro_upper,
        micro_lower,
        torso_upper,
        torso_lower,
        micro_valid: vec![true; n],
        torso_valid: vec![true; n],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn map_from(values: Array2<f64>) -> DopplerTimeMap {
        let rows = values.nrows();
        let cols = values.ncols();
        DopplerTimeMap {
            magnitudes: values,
            doppler_axis: crate::dsp::doppler_axis(rows, 200.0),
            slow_time_axis: (0..cols).map(|c| c as f64 * 0.01).collect(),
            compensated: true,
        }
    }

    #[test]
    fn impulse_reproduces_kernel_and_preserves_sum() {
        let mut values = Array2::<f64>::zeros((41, 41));
        values[[20, 20]] = 1.0;
        let cfg = SmoothingConfig::default();
        let smoothed = gaussian_smooth(&map_from(values), &cfg);
        let sum: f64 = smoothed.magnitudes.iter().sum();
        assert!((sum - 1.0).abs() < 1e-6);
        // Center value equals the kernel's peak weight.
        let k = gaussian_kernel(cfg.gaussian_sigma, cfg.kernel_radius);
        let peak = k[cfg.kernel_radius] * k[cfg.kernel_radius];
        assert!((smoothed.magnitudes[[20, 20]] - peak).abs() < 1e-12);
    }

    #[test]
    fn constant_image_is_fixed_point() {
        let values = Array2::<f64>::from_elem((16, 12), 3.25);
        let smoothed = gaussian_smooth(&map_from(values), &SmoothingConfig::default());
        for &v in smoothed.magnitudes.iter() {
            assert!((v - 3.25).abs() < 1e-12);
        }
    }

    #[test]
    fn checkerboard_total_variation_decreases() {
        let mut values = Array2::<f64>::zeros((20, 20));
        for i in 0..20 {
            for j in 0..20 {
                values[[i, j]] = ((i + j) % 2) as f64;
            }
        }
        let tv = |m: &Array2<f64>| -> f64 {
            let mut acc = 0.0;
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    if i + 1 < m.nrows() {
                        acc += (m[[i + 1, j]] - m[[i, j]]).abs();
                    }
                    if j + 1 < m.ncols() {
                        acc += (m[[i, j + 1]] - m[[i, j]]).abs();
                    }
                }
            }
            acc
        };
        let before = tv(&values);
        let smoothed = gaussian_smooth(&map_from(values), &SmoothingConfig::default());
        let after = tv(&smoothed.magnitudes);
        assert!(after < before, "{after} !< {before}");
    }

    #[test]
    fn thresholds_scale_with_map() {
        let cfg = SmoothingConfig {
            ratio_micro: 0.15,
            ratio_torso: 0.55,
            ..SmoothingConfig::default()
        };
        let mut values = Array2::<f64>::zeros((8, 8));
        values[[3, 4]] = 10.0;
        let (micro, torso) = adaptive_thresholds(&map_from(values.clone()), &cfg).unwrap();
        assert!((micro - 1.5).abs() < 1e-12);
        assert!((torso - 5.5).abs() < 1e-12);
        assert!(torso > micro);

        values.map_inplace(|v| *v *= 3.0);
        let (m2, t2) = adaptive_thresholds(&map_from(values), &cfg).unwrap();
        assert!((m2 - 4.5).abs() < 1e-12);
        assert!((t2 - 16.5).abs() < 1e-12);
    }

    #[test]
    fn all_zero_map_has_no_thresholds() {
        let values = Array2::<f64>::zeros((4, 4));
        assert!(adaptive_thresholds(&map_from(values), &SmoothingConfig::default()).is_err());
    }

    #[test]
    fn single_pixel_collapses_all_curves() {
        let mut values = Array2::<f64>::zeros((16, 5));
        values[[7, 2]] = 1.0;
        let set = scan_envelopes(&map_from(values), 0.15, 0.55);
        assert!(set.micro_valid[2] && set.torso_valid[2]);
        assert_eq!(set.micro_upper[2], 7.0);
        assert_eq!(set.micro_lower[2], 7.0);
        assert_eq!(set.torso_upper[2], 7.0);
        assert_eq!(set.torso_lower[2], 7.0);
        assert!(!set.micro_valid[0]);
        assert!(!set.torso_valid[4]);
    }

    #[test]
    fn gaussian_blob_micro_band_contains_torso_band() {
        // Column profile exp(-(k-c)^2 / (2 s^2)): threshold crossings at
        // c +- s sqrt(2 ln(1/ratio)).
        let rows = 128;
        let center = 64.0;
        let sigma = 8.0;
        let mut values = Array2::<f64>::zeros((rows, 3));
        for k in 0..rows {
            let v = (-((k as f64 - center).powi(2)) / (2.0 * sigma * sigma)).exp();
            for m in 0..3 {
                values[[k, m]] = v;
            }
        }
        let set = scan_envelopes(&map_from(values), 0.15, 0.55);
        let micro_half = sigma * (2.0 * (1.0f64 / 0.15).ln()).sqrt();
        let torso_half = sigma * (2.0 * (1.0f64 / 0.55).ln()).sqrt();
        for m in 0..3 {
            assert!(set.micro_upper[m] < set.torso_upper[m]);
            assert!(set.torso_lower[m] < set.micro_lower[m]);
            assert!((set.micro_upper[m] - (center - micro_half).ceil()).abs() <= 1.0);
            assert!((set.torso_upper[m] - (center - torso_half).ceil()).abs() <= 1.0);
        }
        assert!(set.ordering_holds());
    }

    #[test]
    fn monotone_threshold_band_shrinks() {
        // Raising the threshold never widens a band.
        let mut rng: u64 = 0x1234_5678;
        let mut next = move || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 33) as f64 / (1u64 << 31) as f64
        };
        for _ in 0..20 {
            let mut values = Array2::<f64>::zeros((32, 8));
            values.map_inplace(|v| *v = next());
            let map = map_from(values);
            let low = scan_envelopes(&map, 0.2, 0.5);
            let high = scan_envelopes(&map, 0.5, 0.8);
            for m in 0..8 {
                if low.micro_valid[m] && high.micro_valid[m] {
                    let wide = low.micro_lower[m] - low.micro_upper[m];
                    let narrow = high.micro_lower[m] - high.micro_upper[m];
                    assert!(narrow <= wide);
                }
            }
        }
    }

    #[test]
    fn fill_gaps_midpoint_and_extrapolation() {
        let values = vec![10.0, 0.0, 20.0, 0.0, 0.0];
        let valid = vec![true, false, true, false, false];
        let filled = fill_gaps(&values, &valid).unwrap();
        assert_eq!(filled, vec![10.0, 15.0, 20.0, 20.0, 20.0]);

        let all_invalid = vec![false; 3];
        assert!(fill_gaps(&[0.0; 3], &all_invalid).is_err());
    }

    #[test]
    fn constant_curve_is_smoothing_fixed_point() {
        let raw = EnvelopeSet {
            micro_upper: vec![10.0; 30],
            micro_lower: vec![50.0; 30],
            torso_upper: vec![25.0; 30],
            torso_lower: vec![35.0; 30],
            micro_valid: vec![true; 30],
            torso_valid: vec![true; 30],
        };
        let out = fill_and_smooth(&raw, &SmoothingConfig::default(), 64).unwrap();
        for m in 0..30 {
            assert!((out.micro_upper[m] - 10.0).abs() < 1e-9);
            assert!((out.micro_lower[m] - 50.0).abs() < 1e-9);
            assert!((out.torso_upper[m] - 25.0).abs() < 1e-9);
            assert!((out.torso_lower[m] - 35.0).abs() < 1e-9);
        }
        assert!(out.ordering_holds());
        assert!(out.micro_valid.iter().all(|&v| v));
    }

    #[test]
    fn median_removes_single_outlier() {
        let mut values = vec![12.0; 21];
        values[10] = 60.0;
        let out = moving_median(&values, 5);
        assert!((out[10] - 12.0).abs() < 1.0);
    }

    #[test]
    fn fill_and_smooth_suppresses_outlier_column() {
        let mut micro_upper = vec![10.0; 40];
        micro_upper[20] = 55.0;
        let raw = EnvelopeSet {
            micro_upper,
            micro_lower: vec![60.0; 40],
            torso_upper: vec![30.0; 40],
            torso_lower: vec![40.0; 40],
            micro_valid: vec![true; 40],
            torso_valid: vec![true; 40],
        };
        let out = fill_and_smooth(&raw, &SmoothingConfig::default(), 64).unwrap();
        assert!(
            (out.micro_upper[20] - 10.0).abs() <= 1.0,
            "outlier survived: {}",
            out.micro_upper[20]
        );
    }

    #[test]
    fn ordering_enforced_after_smoothing() {
        // A torso gap in a region where the micro band moved: interpolation
        // alone could cross the micro curve; the final projection may not.
        let n = 30;
        let mut torso_valid = vec![true; n];
        for m in 10..20 {
            torso_valid[m] = false;
        }
        let mut micro_upper = vec![20.0; n];
        for m in 10..20 {
            micro_upper[m] = 40.0;
        }
        let raw = EnvelopeSet {
            micro_upper,
            micro_lower: vec![60.0; n],
            torso_upper: vec![30.0; n],
            torso_lower: vec![35.0; n],
            micro_valid: vec![true; n],
            torso_valid,
        };
        let out = fill_and_smooth(&raw, &SmoothingConfig::default(), 64).unwrap();
        assert!(out.ordering_holds());
    }

    #[test]
    fn smoothing_config_validation() {
        assert!(SmoothingConfig::default().validate().is_ok());
        let bad = SmoothingConfig {
            ratio_micro: 0.7,
            ratio_torso: 0.5,
            ..SmoothingConfig::default()
        };
        assert!(bad.validate().is_err());
        let even = SmoothingConfig {
            median_window: 4,
            ..SmoothingConfig::default()
        };
        assert!(even.validate().is_err());
    }
}
