//! Short Integer Solution instances `B'z = t'`, `‖z‖₁ ≤ d`.

use crate::error::{Error, Result};
use crate::numeric::{safe_int, safe_int_matrix, safe_int_vec};
use serde::{Deserialize, Serialize};

/// Why a row exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowTag {
    NonTriviality {
        test: usize,
    },
    Consistency {
        first: usize,
        second: usize,
        variable: usize,
        value: usize,
    },
}

/// Column origin: `(test index, assignment index)`.
pub type ColumnTag = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SisParts {
    #[serde(with = "safe_int_matrix")]
    matrix: Vec<Vec<i64>>,
    #[serde(with = "safe_int_vec")]
    target: Vec<i64>,
    #[serde(with = "safe_int")]
    bound: i64,
    cols: usize,
    column_provenance: Option<Vec<ColumnTag>>,
    row_provenance: Option<Vec<RowTag>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SisParts", into = "SisParts")]
pub struct SisInstance {
    matrix: Vec<Vec<i64>>,
    target: Vec<i64>,
    bound: i64,
    cols: usize,
    column_provenance: Option<Vec<ColumnTag>>,
    row_provenance: Option<Vec<RowTag>>,
}

impl TryFrom<SisParts> for SisInstance {
    type Error = Error;
    fn try_from(p: SisParts) -> Result<Self> {
        let mut s = SisInstance::new(p.matrix, p.target, p.bound, p.cols)?;
        if let Some(c) = p.column_provenance {
            s = s.with_column_provenance(c)?;
        }
        if let Some(r) = p.row_provenance {
            s = s.with_row_provenance(r)?;
        }
        Ok(s)
    }
}

impl From<SisInstance> for SisParts {
    fn from(s: SisInstance) -> Self {
        SisParts {
            matrix: s.matrix,
            target: s.target,
            bound: s.bound,
            cols: s.cols,
            column_provenance: s.column_provenance,
            row_provenance: s.row_provenance,
        }
    }
}

impl SisInstance {
    /// `cols` is explicit so that matrices with zero rows keep their width.
    pub fn new(matrix: Vec<Vec<i64>>, target: Vec<i64>, bound: i64, cols: usize) -> Result<Self> {
        if matrix.len() != target.len() {
            return Err(Error::MalformedInstance(format!(
                "{} rows but a target of length {}",
                matrix.len(),
                target.len()
            )));
        }
        if let Some(i) = matrix.iter().position(|row| row.len() != cols) {
            return Err(Error::MalformedInstance(format!(
                "row {i} does not have {cols} columns"
            )));
        }
        Ok(Self {
            matrix,
            target,
            bound,
            cols,
            column_provenance: None,
            row_provenance: None,
        })
    }

    pub fn with_column_provenance(mut self, tags: Vec<ColumnTag>) -> Result<Self> {
        if tags.len() != self.cols {
            return Err(Error::MalformedInstance("column provenance length".into()));
        }
        self.column_provenance = Some(tags);
        Ok(self)
    }

    pub fn with_row_provenance(mut self, tags: Vec<RowTag>) -> Result<Self> {
        if tags.len() != self.matrix.len() {
            return Err(Error::MalformedInstance("row provenance length".into()));
        }
        self.row_provenance = Some(tags);
        Ok(self)
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }
    pub fn target(&self) -> &[i64] {
        &self.target
    }
    pub fn bound(&self) -> i64 {
        self.bound
    }
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn column_provenance(&self) -> Option<&[ColumnTag]> {
        self.column_provenance.as_deref()
    }
    pub fn row_provenance(&self) -> Option<&[RowTag]> {
        self.row_provenance.as_deref()
    }

    pub fn is_binary(&self) -> bool {
        self.matrix.iter().flatten().all(|&v| v == 0 || v == 1)
    }

    pub fn multiply(&self, z: &[i64]) -> Result<Vec<i64>> {
        if z.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: z.len(),
            });
        }
        Ok(self
            .matrix
            .iter()
            .map(|row| row.iter().zip(z).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `B'z = t'`.
    pub fn is_solution(&self, z: &[i64]) -> Result<bool> {
        Ok(self.multiply(z)? == self.target)
    }
}

pub fn l1_norm(z: &[i64]) -> i64 {
    z.iter().map(|v| v.abs()).sum()
}
