//! Raster rendering of matrix files to PGM (gray) or PPM (color LUT).

use crate::error::{CliError, Result};
use crate::matfile::MatrixFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colormap {
    Gray,
    Viridis,
}

impl std::str::FromStr for Colormap {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gray" | "grey" => Ok(Colormap::Gray),
            "viridis" => Ok(Colormap::Viridis),
            other => Err(CliError::validation(format!(
                "unknown colormap '{other}' (expected gray or viridis)"
            ))),
        }
    }
}

// Viridis-like anchors, dark blue through green to yellow.
const VIRIDIS: [[u8; 3]; 9] = [
    [68, 1, 84],
    [72, 40, 120],
    [62, 74, 137],
    [49, 104, 142],
    [38, 130, 142],
    [31, 158, 137],
    [53, 183, 121],
    [109, 205, 89],
    [253, 231, 37],
];

fn lut(value: f64) -> [u8; 3] {
    let x = value.clamp(0.0, 1.0) * (VIRIDIS.len() - 1) as f64;
    let lo = x.floor() as usize;
    let hi = (lo + 1).min(VIRIDIS.len() - 1);
    let t = x - lo as f64;
    let mut rgb = [0u8; 3];
    for c in 0..3 {
        let v = VIRIDIS[lo][c] as f64 + t * (VIRIDIS[hi][c] as f64 - VIRIDIS[lo][c] as f64);
        rgb[c] = v.round() as u8;
    }
    rgb
}

/// Min-max stretch to 8 bits; a zero-span matrix maps to 0. Rows are
/// written top-to-bottom in stored order.
pub fn render(matrix: &MatrixFile, colormap: Colormap) -> Result<Vec<u8>> {
    if matrix.rows == 0 || matrix.cols == 0 {
        return Err(CliError::validation("cannot render an empty matrix"));
    }
    let min = matrix.data.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = matrix.data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let normalized = |v: f64| -> f64 {
        if span > 0.0 {
            (v - min) / span
        } else {
            0.0
        }
    };

    let (w, h) = (matrix.cols as usize, matrix.rows as usize);
    let mut out = Vec::new();
    match colormap {
        Colormap::Gray => {
            out.extend_from_slice(format!("P5\n{w} {h}\n255\n").as_bytes());
            for v in &matrix.data {
                out.push((normalized(*v) * 255.0).round() as u8);
            }
        }
        Colormap::Viridis => {
            out.extend_from_slice(format!("P6\n{w} {h}\n255\n").as_bytes());
            for v in &matrix.data {
                out.extend_from_slice(&lut(normalized(*v)));
            }
        }
    }
    Ok(out)
}
