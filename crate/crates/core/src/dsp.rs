//! Map generation: MTI filtering, range compression, torso-compensated
//! slow-time extraction, and the Hamming-window STFT.
//!
//! The chain mirrors the echo model's discretization: two-pulse cancellation
//! removes static returns (wall, furniture), a fast-time FFT compresses
//! range, the complex profiles are summed over range and optionally
//! multiplied by the conjugate torso phase, and a sliding Hamming-window DFT
//! produces the Doppler-time map.

use ndarray::{Array1, Array2, ShapeBuilder};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::echo::{IfDataCube, SPEED_OF_LIGHT};
use crate::error::{CoreError, Result};

/// Complex range profiles, range bin x pulse.
#[derive(Debug, Clone)]
pub struct RangeProfileMatrix {
    pub values: Array2<Complex64>,
    /// Meters per range bin: r = c * f_s * k / (2 K N_FFT).
    pub range_axis: Vec<f64>,
    pub slow_time_axis: Vec<f64>,
}

/// Range-time magnitude map, truncated to a display range.
#[derive(Debug, Clone)]
pub struct RangeTimeMap {
    pub magnitudes: Array2<f64>,
    pub range_axis: Vec<f64>,
    pub slow_time_axis: Vec<f64>,
}

/// Doppler-time magnitude map.
///
/// Row 0 carries the most positive Doppler frequency; the axis descends
/// through 0 Hz down to the negative Nyquist bin.
#[derive(Debug, Clone)]
pub struct DopplerTimeMap {
    pub magnitudes: Array2<f64>,
    pub doppler_axis: Vec<f64>,
    pub slow_time_axis: Vec<f64>,
    pub compensated: bool,
}

impl DopplerTimeMap {
    pub fn n_freq(&self) -> usize {
        self.magnitudes.nrows()
    }

    pub fn n_time(&self) -> usize {
        self.magnitudes.ncols()
    }

    /// Doppler bin spacing in Hz.
    pub fn bin_hz(&self) -> f64 {
        if self.doppler_axis.len() < 2 {
            return 0.0;
        }
        self.doppler_axis[0] - self.doppler_axis[1]
    }
}

/// Two-pulse canceller: out[n, m] = in[n, m+1] - in[n, m].
pub fn mti_two_pulse(cube: &IfDataCube) -> Result<IfDataCube> {
    let m = cube.n_pulses();
    if m < 2 {
        return Err(CoreError::DimensionMismatch {
            what: "mti_two_pulse pulses",
            expected: 2,
            actual: m,
        });
    }
    let n = cube.n_fast();
    let mut out = Array2::<Complex64>::zeros((n, m - 1).f());
    for col in 0..m - 1 {
        let a = cube.samples.column(col);
        let b = cube.samples.column(col + 1);
        let mut o = out.column_mut(col);
        for i in 0..n {
            o[i] = b[i] - a[i];
        }
    }
    Ok(IfDataCube {
        samples: out,
        radar: cube.radar.clone(),
        slow_time_axis: cube.slow_time_axis[..m - 1].to_vec(),
    })
}

/// Zero-padded fast-time DFT of every pulse, with the range axis mapped via
/// r(k) = c f_s k / (2 K N_FFT).
pub fn range_compress(cube: &IfDataCube, n_fft: usize) -> Result<RangeProfileMatrix> {
    let n = cube.n_fast();
    if n_fft < n {
        return Err(CoreError::DimensionMismatch {
            what: "range_compress n_fft",
            expected: n,
            actual: n_fft,
        });
    }
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n_fft);

    let m = cube.n_pulses();
    let mut values = Array2::<Complex64>::zeros((n_fft, m).f());
    let mut buf = vec![Complex64::new(0.0, 0.0); n_fft];
    for col in 0..m {
        buf.fill(Complex64::new(0.0, 0.0));
        for (i, s) in cube.samples.column(col).iter().enumerate() {
            buf[i] = *s;
        }
        fft.process(&mut buf);
        values.column_mut(col).iter_mut().zip(&buf).for_each(|(v, b)| *v = *b);
    }

    let radar = &cube.radar;
    let scale = SPEED_OF_LIGHT * radar.fast_sampling_rate / (2.0 * radar.chirp_slope * n_fft as f64);
    let range_axis = (0..n_fft).map(|k| scale * k as f64).collect();
    Ok(RangeProfileMatrix {
        values,
        range_axis,
        slow_time_axis: cube.slow_time_axis.clone(),
    })
}

/// Modulus of the range profiles, truncated to [0, max_range].
pub fn build_rtm(profiles: &RangeProfileMatrix, max_range: f64) -> RangeTimeMap {
    let keep = profiles
        .range_axis
        .iter()
        .take_while(|&&r| r <= max_range)
        .count()
        .max(1);
    let m = profiles.values.ncols();
    let mut magnitudes = Array2::<f64>::zeros((keep, m));
    for k in 0..keep {
        for c in 0..m {
            magnitudes[[k, c]] = profiles.values[[k, c]].norm();
        }
    }
    RangeTimeMap {
        magnitudes,
        range_axis: profiles.range_axis[..keep].to_vec(),
        slow_time_axis: profiles.slow_time_axis.clone(),
    }
}

/// Sum the complex range profiles over range (optionally gated to a range
/// interval in meters) and, when `compensate` is set, multiply by the
/// conjugate torso phase exp(+j 4 pi R_torso / lambda).
pub fn torso_compensated_slowtime(
    profiles: &RangeProfileMatrix,
    torso_ranges: &[f64],
    lambda: f64,
    compensate: bool,
    range_gate: Option<(f64, f64)>,
) -> Result<Array1<Complex64>> {
    let m = profiles.values.ncols();
    if torso_ranges.len() != m {
        return Err(CoreError::DimensionMismatch {
            what: "torso_compensated_slowtime torso_ranges",
            expected: m,
            actual: torso_ranges.len(),
        });
    }
    let bins: Vec<usize> = match range_gate {
        None => (0..profiles.values.nrows()).collect(),
        Some((lo, hi)) => profiles
            .range_axis
            .iter()
            .enumerate()
            .filter(|(_, &r)| r >= lo && r <= hi)
            .map(|(k, _)| k)
            .collect(),
    };
    let mut out = Array1::<Complex64>::zeros(m);
    for c in 0..m {
        let col = profiles.values.column(c);
        let mut acc = Complex64::new(0.0, 0.0);
        for &k in &bins {
            acc += col[k];
        }
        if compensate {
            acc *= Complex64::from_polar(1.0, 4.0 * PI * torso_ranges[c] / lambda);
        }
        out[c] = acc;
    }
    Ok(out)
}

/// Periodic Hamming window of length `len`.
pub fn hamming_window(len: usize) -> Vec<f64> {
    (0..len)
        .map(|i| 0.54 - 0.46 * (2.0 * PI * i as f64 / len as f64).cos())
        .collect()
}

/// Sliding Hamming-window DFT.
///
/// Frames are centered on every `hop`-th sample with zero padding past the
/// signal edges; the output rows are fftshifted then reversed so row 0 is
/// the most positive Doppler bin.
pub fn stft_hamming(
    signal: &[Complex64],
    window_len: usize,
    hop: usize,
    fft_len: usize,
) -> Result<Array2<Complex64>> {
    if window_len > signal.len() {
        return Err(CoreError::DimensionMismatch {
            what: "stft_hamming window vs signal",
            expected: signal.len(),
            actual: window_len,
        });
    }
    if window_len % 2 != 0 || window_len == 0 {
        return Err(CoreError::invalid_config("stft window_len", "must be even and nonzero"));
    }
    if window_len > fft_len {
        return Err(CoreError::invalid_config("stft fft_len", "must be >= window_len"));
    }
    if hop == 0 {
        return Err(CoreError::invalid_config("stft hop", "must be >= 1"));
    }
    let window = hamming_window(window_len);
    let half = (window_len / 2) as isize;
    let n_t = (signal.len() - 1) / hop + 1;

    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(fft_len);
    let mut out = Array2::<Complex64>::zeros((fft_len, n_t).f());
    let mut buf = vec![Complex64::new(0.0, 0.0); fft_len];

    for (col, center) in (0..signal.len()).step_by(hop).enumerate() {
        buf.fill(Complex64::new(0.0, 0.0));
        for eta in -half..half {
            let idx = center as isize + eta;
            if idx < 0 || idx >= signal.len() as isize {
                continue;
            }
            let w = window[(eta + half) as usize];
            buf[(eta + half) as usize] = signal[idx as usize] * w;
        }
        fft.process(&mut buf);
        // fftshift then reverse: row i holds FFT bin frequency
        // (fft_len/2 - 1 - i) * (rate / fft_len).
        let half_fft = fft_len / 2;
        let mut o = out.column_mut(col);
        for i in 0..fft_len {
            let k = (half_fft - 1).wrapping_sub(i).wrapping_add(fft_len) % fft_len;
            o[i] = buf[k];
        }
    }
    Ok(out)
}

/// Doppler frequencies (Hz) for the rows of an `stft_hamming` output at the
/// given slow-time sampling rate, descending from the most positive bin.
pub fn doppler_axis(fft_len: usize, slow_rate: f64) -> Vec<f64> {
    let df = slow_rate / fft_len as f64;
    (0..fft_len)
        .map(|i| (fft_len as f64 / 2.0 - 1.0 - i as f64) * df)
        .collect()
}

/// Take the modulus of a time-frequency matrix and attach axis metadata.
pub fn build_dtm(
    tf: &Array2<Complex64>,
    slow_rate: f64,
    frame_times: Vec<f64>,
    compensated: bool,
) -> DopplerTimeMap {
    let magnitudes = tf.map(|z| z.norm());
    DopplerTimeMap {
        doppler_axis: doppler_axis(tf.nrows(), slow_rate),
        magnitudes,
        slow_time_axis: frame_times,
        compensated,
    }
}

/// Scale the map to unit RMS amplitude (no-op on a zero map), giving the
/// normalized amplitude image the envelope and projection stages work on.
/// Threshold scans are ratio-based and unaffected; this pins the amplitude
/// scale that ChTM slices see to a statistic that is stable against
/// scintillation of the strongest pixel.
pub fn normalize_dtm(dtm: &DopplerTimeMap) -> DopplerTimeMap {
    let ms = dtm.magnitudes.iter().map(|v| v * v).sum::<f64>() / dtm.magnitudes.len().max(1) as f64;
    let mut out = dtm.clone();
    if ms > 0.0 {
        let scale = 1.0 / ms.sqrt();
        out.magnitudes.map_inplace(|v| *v *= scale);
    }
    out
}

/// Slow-time instants of the STFT frame centers.
pub fn stft_frame_times(slow_time_axis: &[f64], hop: usize) -> Vec<f64> {
    slow_time_axis.iter().step_by(hop).copied().collect()
}
