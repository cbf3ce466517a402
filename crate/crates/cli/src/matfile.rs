//! Binary matrix file format.
//!
//! Layout: magic `CHTM1` (5 bytes), kind tag (u8), rows (u32 LE), cols
//! (u32 LE), then rows*cols float64 LE values in row-major order. A JSON
//! sidecar (`<file>.json`) carries axis metadata and the producing config
//! hash.

use ndarray::Array2;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

pub const MAGIC: &[u8; 5] = b"CHTM1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixKind {
    Rtm,
    Dtm,
    Chtm,
    CubeReal,
    CubeImag,
}

impl MatrixKind {
    pub fn tag(self) -> u8 {
        match self {
            MatrixKind::Rtm => 0,
            MatrixKind::Dtm => 1,
            MatrixKind::Chtm => 2,
            MatrixKind::CubeReal => 3,
            MatrixKind::CubeImag => 4,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        Ok(match tag {
            0 => MatrixKind::Rtm,
            1 => MatrixKind::Dtm,
            2 => MatrixKind::Chtm,
            3 => MatrixKind::CubeReal,
            4 => MatrixKind::CubeImag,
            other => {
                return Err(CliError::validation(format!(
                    "unknown matrix kind tag {other}"
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Rtm => "rtm",
            MatrixKind::Dtm => "dtm",
            MatrixKind::Chtm => "chtm",
            MatrixKind::CubeReal => "cube-real",
            MatrixKind::CubeImag => "cube-imag",
        }
    }
}

/// In-memory matrix file.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub kind: MatrixKind,
    pub rows: u32,
    pub cols: u32,
    /// Row-major values.
    pub data: Vec<f64>,
}

impl MatrixFile {
    pub fn from_array(kind: MatrixKind, values: &Array2<f64>) -> Self {
        Self {
            kind,
            rows: values.nrows() as u32,
            cols: values.ncols() as u32,
            data: values.iter().copied().collect(),
        }
    }

    pub fn to_array(&self) -> Array2<f64> {
        Array2::from_shape_vec((self.rows as usize, self.cols as usize), self.data.clone())
            .expect("consistent dims")
    }
}

/// Axis description stored in the sidecar.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AxisMeta {
    pub name: String,
    pub unit: String,
    pub values: Vec<f64>,
}

/// Sidecar metadata written next to every matrix file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Sidecar {
    pub kind: MatrixKind,
    pub rows: u32,
    pub cols: u32,
    pub row_axis: AxisMeta,
    pub col_axis: AxisMeta,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub compensated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub region: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    pub config_hash: String,
    pub source_id: String,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".json");
    PathBuf::from(os)
}

/// Write the matrix and its sidecar.
pub fn write_matrix(path: &Path, matrix: &MatrixFile, sidecar: &Sidecar) -> Result<()> {
    if matrix.data.len() != (matrix.rows as usize) * (matrix.cols as usize) {
        return Err(CliError::validation(format!(
            "matrix payload length {} does not match {}x{}",
            matrix.data.len(),
            matrix.rows,
            matrix.cols
        )));
    }
    let mut buf =
        Vec::with_capacity(5 + 1 + 8 + matrix.data.len() * std::mem::size_of::<f64>());
    buf.extend_from_slice(MAGIC);
    buf.push(matrix.kind.tag());
    buf.extend_from_slice(&matrix.rows.to_le_bytes());
    buf.extend_from_slice(&matrix.cols.to_le_bytes());
    for v in &matrix.data {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(&buf)?;

    let json = serde_json::to_string_pretty(sidecar)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    std::fs::write(sidecar_path(path), json)?;
    Ok(())
}

/// Read a matrix file (the sidecar is read separately when needed).
pub fn read_matrix(path: &Path) -> Result<MatrixFile> {
    let mut f = std::fs::File::open(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut header = [0u8; 14];
    f.read_exact(&mut header)
        .map_err(|_| CliError::validation(format!("{}: truncated header", path.display())))?;
    if &header[..5] != MAGIC {
        return Err(CliError::validation(format!(
            "{}: bad magic, not a matrix file",
            path.display()
        )));
    }
    let kind = MatrixKind::from_tag(header[5])?;
    let rows = u32::from_le_bytes(header[6..10].try_into().unwrap());
    let cols = u32::from_le_bytes(header[10..14].try_into().unwrap());
    let n = (rows as usize)
        .checked_mul(cols as usize)
        .ok_or_else(|| CliError::validation("matrix dimensions overflow"))?;
    let mut payload = vec![0u8; n * 8];
    f.read_exact(&mut payload).map_err(|_| {
        CliError::validation(format!(
            "{}: payload shorter than {rows}x{cols} float64",
            path.display()
        ))
    })?;
    let mut trailing = [0u8; 1];
    if f.read(&mut trailing)? != 0 {
        return Err(CliError::validation(format!(
            "{}: trailing bytes after payload",
            path.display()
        )));
    }
    let data = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(MatrixFile {
        kind,
        rows,
        cols,
        data,
    })
}

pub fn read_sidecar(path: &Path) -> Result<Sidecar> {
    let text = std::fs::read_to_string(sidecar_path(path))
        .map_err(|e| CliError::Io(format!("{}: {e}", sidecar_path(path).display())))?;
    Ok(serde_json::from_str(&text)?)
}
