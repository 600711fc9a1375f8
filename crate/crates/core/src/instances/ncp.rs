//! Nearest Codeword instances over a prime field.

use crate::error::{Error, Result};
use crate::numeric::safe_int;
use serde::{Deserialize, Serialize};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Hamming weight `wt(v)`.
pub fn hamming_weight<T: PartialEq + Default>(v: &[T]) -> usize {
    let zero = T::default();
    v.iter().filter(|x| **x != zero).count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NcpParts {
    modulus: u64,
    matrix: Vec<Vec<u64>>,
    target: Vec<u64>,
    #[serde(with = "safe_int")]
    bound: i64,
    replication: usize,
    cols: usize,
    #[serde(with = "safe_int")]
    gap: i64,
}

/// `(A, t, d)` over `F_q`. The first `rows − cols` rows are the replicated
/// block, the trailing `cols` rows the identity, when built by the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "NcpParts", into = "NcpParts")]
pub struct NcpInstance {
    modulus: u64,
    matrix: Vec<Vec<u64>>,
    target: Vec<u64>,
    bound: i64,
    replication: usize,
    cols: usize,
    gap: i64,
}

impl TryFrom<NcpParts> for NcpInstance {
    type Error = Error;
    fn try_from(p: NcpParts) -> Result<Self> {
        NcpInstance::new(
            p.modulus,
            p.matrix,
            p.target,
            p.bound,
            p.replication,
            p.cols,
            p.gap,
        )
    }
}

impl From<NcpInstance> for NcpParts {
    fn from(s: NcpInstance) -> Self {
        NcpParts {
            modulus: s.modulus,
            matrix: s.matrix,
            target: s.target,
            bound: s.bound,
            replication: s.replication,
            cols: s.cols,
            gap: s.gap,
        }
    }
}

impl NcpInstance {
    pub fn new(
        modulus: u64,
        matrix: Vec<Vec<u64>>,
        target: Vec<u64>,
        bound: i64,
        replication: usize,
        cols: usize,
        gap: i64,
    ) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(Error::MalformedInstance(format!(
                "modulus {modulus} is not prime"
            )));
        }
        if matrix.len() != target.len() {
            return Err(Error::MalformedInstance(
                "target length differs from row count".into(),
            ));
        }
        if matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::MalformedInstance(format!(
                "rows must have {cols} columns"
            )));
        }
        if matrix
            .iter()
            .flatten()
            .chain(&target)
            .any(|&v| v >= modulus)
        {
            return Err(Error::MalformedInstance(
                "entry is not reduced mod q".into(),
            ));
        }
        Ok(Self {
            modulus,
            matrix,
            target,
            bound,
            replication,
            cols,
            gap,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }
    pub fn target(&self) -> &[u64] {
        &self.target
    }
    pub fn bound(&self) -> i64 {
        self.bound
    }
    pub fn replication(&self) -> usize {
        self.replication
    }
    pub fn gap(&self) -> i64 {
        self.gap
    }
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of rows above the trailing identity block.
    pub fn upper_rows(&self) -> usize {
        self.rows().saturating_sub(self.cols)
    }

    pub fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.modulus as i64) as u64
    }

    /// `Az − t` over `F_q`.
    pub fn residual(&self, z: &[i64]) -> Result<Vec<u64>> {
        if z.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: z.len(),
            });
        }
        let q = self.modulus as u128;
        let zq: Vec<u128> = z.iter().map(|&v| self.reduce(v) as u128).collect();
        Ok(self
            .matrix
            .iter()
            .zip(&self.target)
            .map(|(row, &t)| {
                let dot = row
                    .iter()
                    .zip(&zq)
                    .fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b) % q);
                ((dot + q - t as u128) % q) as u64
            })
            .collect())
    }

    /// `‖Az − t‖_H`.
    pub fn distance(&self, z: &[i64]) -> Result<usize> {
        self.residual(z).map(|r| hamming_weight(&r))
    }

    /// `(‖A'z − t''‖_H, Hamming weight over the identity block)`.
    pub fn distance_split(&self, z: &[i64]) -> Result<(usize, usize)> {
        let r = self.residual(z)?;
        let upper = self.upper_rows();
        Ok((hamming_weight(&r[..upper]), hamming_weight(&r[upper..])))
    }
}
