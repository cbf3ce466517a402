//! Chebyshev-time map generation.
//!
//! Each DTM column slice bounded by an envelope pair is mapped onto uniform
//! nodes in [-1, 1] and projected onto first-kind Chebyshev polynomials via
//! c = (1/N_s) T^t s. Stacking the coefficient vectors over slow time and
//! taking the log of the min-max normalized magnitudes yields the ChTM.
//!
//! The discrete basis on uniform nodes is only approximately orthogonal, so
//! the uniform-node projection is not an exact inverse; the least-squares
//! mode of [`truncation_residual`] provides the mathematically clean
//! reference for order sweeps.

use nalgebra::{DMatrix, DVector};
use ndarray::Array2;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::dsp::DopplerTimeMap;
use crate::envelope::EnvelopeSet;
use crate::error::{CoreError, Result};

/// Which envelope pair bounds the projected slices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// Torso band (between the macro envelopes).
    Macro,
    /// Full limb band (between the micro envelopes).
    Micro,
}

/// First-kind Chebyshev polynomials sampled on uniform nodes in [-1, 1].
#[derive(Debug, Clone)]
pub struct ChebyshevBasis {
    pub order_max: usize,
    pub sample_count: usize,
    pub nodes: Vec<f64>,
    /// matrix[j, n] = T_n(node_j), shape sample_count x (order_max + 1).
    pub matrix: Array2<f64>,
}

/// Build the basis via the three-term recurrence.
pub fn basis(n_s: usize, n_order: usize) -> Result<ChebyshevBasis> {
    if n_s < 2 {
        return Err(CoreError::DegenerateInput(format!(
            "chebyshev basis needs at least 2 nodes, got {n_s}"
        )));
    }
    let nodes: Vec<f64> = (0..n_s)
        .map(|j| -1.0 + 2.0 * j as f64 / (n_s - 1) as f64)
        .collect();
    let mut matrix = Array2::<f64>::zeros((n_s, n_order + 1));
    for (j, &x) in nodes.iter().enumerate() {
        matrix[[j, 0]] = 1.0;
        if n_order >= 1 {
            matrix[[j, 1]] = x;
        }
        for n in 2..=n_order {
            matrix[[j, n]] = 2.0 * x * matrix[[j, n - 1]] - matrix[[j, n - 2]];
        }
    }
    Ok(ChebyshevBasis {
        order_max: n_order,
        sample_count: n_s,
        nodes,
        matrix,
    })
}

/// Projection coefficients c = (1/N_s) T^t s.
pub fn project_slice(slice: &[f64], basis: &ChebyshevBasis) -> Result<Vec<f64>> {
    if slice.len() != basis.sample_count {
        return Err(CoreError::DimensionMismatch {
            what: "project_slice slice length",
            expected: basis.sample_count,
            actual: slice.len(),
        });
    }
    let scale = 1.0 / basis.sample_count as f64;
    Ok((0..=basis.order_max)
        .map(|n| {
            slice
                .iter()
                .enumerate()
                .map(|(j, &s)| s * basis.matrix[[j, n]])
                .sum::<f64>()
                * scale
        })
        .collect())
}

/// Log-normalized Chebyshev coefficient map.
#[derive(Debug, Clone)]
pub struct ChebyshevTimeMap {
    /// log10(Norm(|c|) + epsilon), (n_order+1) x N_t.
    pub values: Array2<f64>,
    /// Signed projection coefficients before normalization.
    pub raw_coefficients: Array2<f64>,
    pub region: Region,
    pub epsilon: f64,
    pub n_order: usize,
    pub slow_time_axis: Vec<f64>,
}

/// Project every DTM column slice bounded by the region's envelope pair and
/// assemble the log-normalized map.
///
/// The slice bounds round outward (floor on the upper index, ceil on the
/// lower); columns whose slice has fewer than two bins produce an all-zero
/// coefficient vector.
pub fn build_chtm(
    dtm: &DopplerTimeMap,
    env: &EnvelopeSet,
    region: Region,
    n_order: usize,
    epsilon: f64,
) -> Result<ChebyshevTimeMap> {
    if env.n_columns() != dtm.n_time() {
        return Err(CoreError::DimensionMismatch {
            what: "build_chtm envelope columns",
            expected: dtm.n_time(),
            actual: env.n_columns(),
        });
    }
    if !(epsilon > 0.0) {
        return Err(CoreError::invalid_config("chtm.epsilon", "must be positive"));
    }
    let (upper, lower) = match region {
        Region::Macro => (&env.torso_upper, &env.torso_lower),
        Region::Micro => (&env.micro_upper, &env.micro_lower),
    };
    let n_freq = dtm.n_freq();
    let n_t = dtm.n_time();
    let mut raw = Array2::<f64>::zeros((n_order + 1, n_t));
    let mut cache: HashMap<usize, ChebyshevBasis> = HashMap::new();

    for m in 0..n_t {
        let k_start = (upper[m].floor().max(0.0)) as usize;
        let k_end = (lower[m].ceil() as usize).min(n_freq - 1);
        if k_end < k_start {
            continue;
        }
        let n_s = k_end - k_start + 1;
        if n_s < 2 {
            continue; // coefficients stay zero
        }
        let slice: Vec<f64> = (k_start..=k_end).map(|k| dtm.magnitudes[[k, m]]).collect();
        if !cache.contains_key(&n_s) {
            cache.insert(n_s, basis(n_s, n_order)?);
        }
        let coeffs = project_slice(&slice, &cache[&n_s])?;
        for (n, c) in coeffs.into_iter().enumerate() {
            raw[[n, m]] = c;
        }
    }

    // Global min-max normalization of the coefficient magnitudes, then log.
    let mags = raw.map(|c| c.abs());
    let min = mags.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = mags.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let values = if span > 0.0 {
        mags.map(|&v| ((v - min) / span + epsilon).log10())
    } else {
        Array2::from_elem(mags.dim(), epsilon.log10())
    };

    Ok(ChebyshevTimeMap {
        values,
        raw_coefficients: raw,
        region,
        epsilon,
        n_order,
        slow_time_axis: dtm.slow_time_axis.clone(),
    })
}

/// How the reconstruction coefficients are obtained in
/// [`truncation_residual`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualMode {
    /// The (1/N_s) T^t s projection used by the map itself.
    PaperCoefficients,
    /// Independent least-squares fit on the first n+1 basis columns.
    LeastSquares,
}

/// Squared L2 norm of `slice` minus its order-n reconstruction.
pub fn truncation_residual(
    slice: &[f64],
    basis: &ChebyshevBasis,
    n: usize,
    mode: ResidualMode,
) -> Result<f64> {
    if n > basis.order_max {
        return Err(CoreError::DimensionMismatch {
            what: "truncation_residual order",
            expected: basis.order_max,
            actual: n,
        });
    }
    if slice.len() != basis.sample_count {
        return Err(CoreError::DimensionMismatch {
            what: "truncation_residual slice length",
            expected: basis.sample_count,
            actual: slice.len(),
        });
    }
    let coeffs: Vec<f64> = match mode {
        ResidualMode::PaperCoefficients => {
            project_slice(slice, basis)?.into_iter().take(n + 1).collect()
        }
        ResidualMode::LeastSquares => {
            let rows = basis.sample_count;
            let t = DMatrix::from_fn(rows, n + 1, |j, k| basis.matrix[[j, k]]);
            let y = DVector::from_row_slice(slice);
            let solution = t
                .clone()
                .svd(true, true)
                .solve(&y, 1e-12)
                .map_err(|e| CoreError::DegenerateInput(format!("least-squares solve: {e}")))?;
            solution.iter().copied().collect()
        }
    };
    let mut residual = 0.0;
    for j in 0..basis.sample_count {
        let mut recon = 0.0;
        for (k, &c) in coeffs.iter().enumerate() {
            recon += c * basis.matrix[[j, k]];
        }
        let d = slice[j] - recon;
        residual += d * d;
    }
    Ok(residual)
}

/// Scalar summaries of a raw coefficient matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientDiagnostics {
    /// Mean |c_0| over time: average slice energy.
    pub mean_abs_c0: f64,
    /// Mean signed c_1: Doppler asymmetry.
    pub mean_c1: f64,
    /// Mean |c_2| over time: spectral broadening.
    pub mean_abs_c2: f64,
    /// Energy fraction carried by orders above 2.
    pub high_order_energy_fraction: f64,
}

/// Compute the four coefficient summaries.
pub fn coefficient_diagnostics(raw: &Array2<f64>) -> Result<CoefficientDiagnostics> {
    let (rows, cols) = (raw.nrows(), raw.ncols());
    if rows == 0 || cols == 0 {
        return Err(CoreError::EmptyInput("coefficient_diagnostics matrix"));
    }
    let row_mean_abs = |n: usize| -> f64 {
        if n >= rows {
            return 0.0;
        }
        raw.row(n).iter().map(|c| c.abs()).sum::<f64>() / cols as f64
    };
    let mean_abs_c0 = row_mean_abs(0);
    let mean_c1 = if rows > 1 {
        raw.row(1).iter().sum::<f64>() / cols as f64
    } else {
        0.0
    };
    let mean_abs_c2 = row_mean_abs(2);
    let total: f64 = raw.iter().map(|c| c * c).sum();
    let high: f64 = (3..rows).map(|n| raw.row(n).iter().map(|c| c * c).sum::<f64>()).sum();
    let high_order_energy_fraction = if total > 0.0 { high / total } else { 0.0 };
    Ok(CoefficientDiagnostics {
        mean_abs_c0,
        mean_c1,
        mean_abs_c2,
        high_order_energy_fraction,
    })
}
