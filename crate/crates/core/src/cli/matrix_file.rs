//! On-disk matrix format.
//!
//! ```json
//! {"kind": "complex_hermitian", "dim": 2, "data": [[1, 0], [0, -1], [0, 1], [2, 0]]}
//! ```
//!
//! `data` is row-major: plain numbers for the `real_*` kinds, `[re, im]`
//! pairs for the `complex_*` kinds. Symmetry implied by the kind is checked
//! on load with `tol_sym`.

use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;
use serde_json::{json, Map, Value};

use crate::linalg::{inf_norm, relative};
use crate::tolerances::Tolerances;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    RealSymmetric,
    RealAntisymmetric,
    RealGeneral,
    ComplexHermitian,
    ComplexGeneral,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 5] = [
        MatrixKind::RealSymmetric,
        MatrixKind::RealAntisymmetric,
        MatrixKind::RealGeneral,
        MatrixKind::ComplexHermitian,
        MatrixKind::ComplexGeneral,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::RealSymmetric => "real_symmetric",
            MatrixKind::RealAntisymmetric => "real_antisymmetric",
            MatrixKind::RealGeneral => "real_general",
            MatrixKind::ComplexHermitian => "complex_hermitian",
            MatrixKind::ComplexGeneral => "complex_general",
        }
    }

    pub fn is_complex(self) -> bool {
        matches!(self, MatrixKind::ComplexHermitian | MatrixKind::ComplexGeneral)
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A loaded, validated matrix file.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub kind: MatrixKind,
    pub mat: DMatrix<C64>,
}

/// A load failure with the location it refers to (`file: field: message`).
#[derive(Debug, Clone, PartialEq)]
pub struct FileError(pub String);

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl MatrixFile {
    pub fn real(kind: MatrixKind, mat: &DMatrix<f64>) -> Self {
        Self {
            kind,
            mat: mat.map(|x| C64::new(x, 0.0)),
        }
    }

    pub fn complex(kind: MatrixKind, mat: DMatrix<C64>) -> Self {
        Self { kind, mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Real part; fails for complex kinds.
    pub fn to_real(&self, origin: &str) -> Result<DMatrix<f64>, FileError> {
        if self.kind.is_complex() {
            return Err(FileError(format!(
                "{origin}: kind: expected a real matrix, found `{}`",
                self.kind
            )));
        }
        Ok(self.mat.map(|z| z.re))
    }

    pub fn to_json(&self) -> Value {
        let n = self.dim();
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let z = self.mat[(r, c)];
                data.push(if self.kind.is_complex() {
                    json!([z.re, z.im])
                } else {
                    json!(z.re)
                });
            }
        }
        json!({ "kind": self.kind.as_str(), "dim": n, "data": data })
    }

    pub fn load(path: &Path, tol: &Tolerances) -> Result<Self, FileError> {
        let origin = path.display().to_string();
        let text = std::fs::read_to_string(path)
            .map_err(|e| FileError(format!("{origin}: cannot read file: {e}")))?;
        let value = parse_json(&text, &origin)?;
        Self::from_json(&value, &origin, tol)
    }

    pub fn from_json(value: &Value, origin: &str, tol: &Tolerances) -> Result<Self, FileError> {
        let obj = value
            .as_object()
            .ok_or_else(|| FileError(format!("{origin}: expected a JSON object")))?;
        check_fields(obj, &["kind", "dim", "data"], origin)?;

        let kind_str = obj
            .get("kind")
            .ok_or_else(|| FileError(format!("{origin}: kind: missing field")))?
            .as_str()
            .ok_or_else(|| FileError(format!("{origin}: kind: expected a string")))?;
        let kind = MatrixKind::parse(kind_str).ok_or_else(|| {
            let known: Vec<_> = MatrixKind::ALL.iter().map(|k| k.as_str()).collect();
            FileError(format!(
                "{origin}: kind: unknown kind `{kind_str}` (expected one of {})",
                known.join(", ")
            ))
        })?;

        let dim = obj
            .get("dim")
            .ok_or_else(|| FileError(format!("{origin}: dim: missing field")))?
            .as_u64()
            .filter(|&d| d > 0)
            .ok_or_else(|| FileError(format!("{origin}: dim: expected a positive integer")))?
            as usize;

        let data = obj
            .get("data")
            .ok_or_else(|| FileError(format!("{origin}: data: missing field")))?
            .as_array()
            .ok_or_else(|| FileError(format!("{origin}: data: expected an array")))?;
        let expected = dim
            .checked_mul(dim)
            .ok_or_else(|| FileError(format!("{origin}: dim: too large")))?;
        if data.len() != expected {
            return Err(FileError(format!(
                "{origin}: data: expected {expected} entries for dim {dim}, found {}",
                data.len()
            )));
        }

        let mut entries = Vec::with_capacity(expected);
        for (i, item) in data.iter().enumerate() {
            let z = if kind.is_complex() {
                let pair = item.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                    FileError(format!("{origin}: data[{i}]: expected a [re, im] pair"))
                })?;
                C64::new(
                    finite(&pair[0], origin, &format!("data[{i}][0]"))?,
                    finite(&pair[1], origin, &format!("data[{i}][1]"))?,
                )
            } else {
                C64::new(finite(item, origin, &format!("data[{i}]"))?, 0.0)
            };
            entries.push(z);
        }
        let mat = DMatrix::from_row_slice(dim, dim, &entries);

        let scale = inf_norm(&mat);
        let residual = match kind {
            MatrixKind::RealSymmetric | MatrixKind::ComplexHermitian => {
                Some(relative(inf_norm(&(&mat - mat.adjoint())), scale))
            }
            MatrixKind::RealAntisymmetric => {
                Some(relative(inf_norm(&(&mat + mat.transpose())), scale))
            }
            _ => None,
        };
        if let Some(residual) = residual {
            if residual > tol.tol_sym {
                return Err(FileError(format!(
                    "{origin}: data: matrix is not {kind_str} (relative residual {residual:.3e} > tol_sym {:.3e})",
                    tol.tol_sym
                )));
            }
        }
        Ok(Self { kind, mat })
    }
}

pub(crate) fn parse_json(text: &str, origin: &str) -> Result<Value, FileError> {
    serde_json::from_str(text).map_err(|e| FileError(format!("{origin}: {e}")))
}

pub(crate) fn check_fields(
    obj: &Map<String, Value>,
    allowed: &[&str],
    origin: &str,
) -> Result<(), FileError> {
    if let Some(extra) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(FileError(format!("{origin}: {extra}: unknown field")));
    }
    Ok(())
}

fn finite(value: &Value, origin: &str, field: &str) -> Result<f64, FileError> {
    value
        .as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| FileError(format!("{origin}: {field}: expected a finite number")))
}
