//! SSAT instances: tests over shared variables, each with an explicit list of
//! satisfying assignments.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Test {
    pub name: String,
    /// Variable indices, in the order assignment tuples list them.
    pub variables: Vec<usize>,
    /// The range `R_ψ`: full tuples of field-value indices.
    pub assignments: Vec<Vec<usize>>,
}

impl Test {
    /// Position of variable `x` inside this test's tuples.
    pub fn position_of(&self, x: usize) -> Option<usize> {
        self.variables.iter().position(|&v| v == x)
    }
}

/// Where an SSAT instance came from when it was built out of Label Cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LcProvenance {
    /// B-vertex index per test.
    pub test_b: Vec<usize>,
    /// A-vertex index per variable.
    pub variable_a: Vec<usize>,
    /// Σ_B label per assignment, parallel to each test's range.
    pub assignment_labels: Vec<Vec<usize>>,
    /// Σ_B label names.
    pub b_labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SsatParts {
    variables: Vec<String>,
    field_values: Vec<String>,
    tests: Vec<Test>,
    provenance: Option<LcProvenance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SsatParts", into = "SsatParts")]
pub struct SsatInstance {
    variables: Vec<String>,
    field_values: Vec<String>,
    tests: Vec<Test>,
    provenance: Option<LcProvenance>,
}

impl TryFrom<SsatParts> for SsatInstance {
    type Error = Error;
    fn try_from(p: SsatParts) -> Result<Self> {
        SsatInstance::new(p.variables, p.field_values, p.tests, p.provenance)
    }
}

impl From<SsatInstance> for SsatParts {
    fn from(s: SsatInstance) -> Self {
        SsatParts {
            variables: s.variables,
            field_values: s.field_values,
            tests: s.tests,
            provenance: s.provenance,
        }
    }
}

impl SsatInstance {
    pub fn new(
        variables: Vec<String>,
        field_values: Vec<String>,
        tests: Vec<Test>,
        provenance: Option<LcProvenance>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::MalformedInstance(m));
        if field_values.is_empty() {
            return bad("empty field".into());
        }
        let mut covered = vec![false; variables.len()];
        for (t, test) in tests.iter().enumerate() {
            let distinct: BTreeSet<usize> = test.variables.iter().copied().collect();
            if distinct.len() != test.variables.len() {
                return bad(format!("test {t} repeats a variable"));
            }
            for &v in &test.variables {
                if v >= variables.len() {
                    return bad(format!("test {t} references unknown variable {v}"));
                }
                covered[v] = true;
            }
            let mut seen = BTreeSet::new();
            for (r, tuple) in test.assignments.iter().enumerate() {
                if tuple.len() != test.variables.len() {
                    return bad(format!("test {t} assignment {r} has the wrong arity"));
                }
                if tuple.iter().any(|&f| f >= field_values.len()) {
                    return bad(format!("test {t} assignment {r} leaves the field"));
                }
                if !seen.insert(tuple) {
                    return bad(format!("test {t} lists assignment {r} twice"));
                }
            }
        }
        if let Some(v) = covered.iter().position(|c| !c) {
            return bad(format!("variable {:?} occurs in no test", variables[v]));
        }
        if let Some(p) = &provenance {
            if p.test_b.len() != tests.len()
                || p.variable_a.len() != variables.len()
                || p.assignment_labels.len() != tests.len()
                || p.assignment_labels
                    .iter()
                    .zip(&tests)
                    .any(|(l, t)| l.len() != t.assignments.len())
                || p.assignment_labels
                    .iter()
                    .flatten()
                    .any(|&y| y >= p.b_labels.len())
            {
                return bad("provenance does not match the instance shape".into());
            }
        }
        Ok(Self {
            variables,
            field_values,
            tests,
            provenance,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }
    pub fn field_values(&self) -> &[String] {
        &self.field_values
    }
    pub fn tests(&self) -> &[Test] {
        &self.tests
    }
    pub fn test(&self, psi: usize) -> &Test {
        &self.tests[psi]
    }
    pub fn provenance(&self) -> Option<&LcProvenance> {
        self.provenance.as_ref()
    }
    pub fn num_tests(&self) -> usize {
        self.tests.len()
    }
    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }
    pub fn field_size(&self) -> usize {
        self.field_values.len()
    }

    /// `|R_ψ|` per test.
    pub fn range_sizes(&self) -> Vec<usize> {
        self.tests.iter().map(|t| t.assignments.len()).collect()
    }

    /// Total column count `Σ_ψ |R_ψ|`.
    pub fn total_assignments(&self) -> usize {
        self.tests.iter().map(|t| t.assignments.len()).sum()
    }

    /// Tests containing `x`, in test order.
    pub fn incident_tests(&self, x: usize) -> Vec<usize> {
        self.tests
            .iter()
            .enumerate()
            .filter(|(_, t)| t.variables.contains(&x))
            .map(|(i, _)| i)
            .collect()
    }

    /// Largest number of tests any single variable occurs in.
    pub fn max_variable_degree(&self) -> usize {
        (0..self.num_variables())
            .map(|x| self.incident_tests(x).len())
            .max()
            .unwrap_or(0)
    }

    /// Variables common to two tests, in variable-index order.
    pub fn shared_variables(&self, i: usize, j: usize) -> Vec<usize> {
        let other: BTreeSet<usize> = self.tests[j].variables.iter().copied().collect();
        let mut shared: Vec<usize> = self.tests[i]
            .variables
            .iter()
            .copied()
            .filter(|v| other.contains(v))
            .collect();
        shared.sort_unstable();
        shared
    }

    /// `r|_x` for assignment `r` of test `psi`.
    pub fn value_of(&self, psi: usize, r: usize, x: usize) -> Option<usize> {
        let t = &self.tests[psi];
        t.position_of(x).map(|pos| t.assignments[r][pos])
    }
}
