//! Super-assignments: integer weights over each test's satisfying assignments.
//!
//! Besides projections, consistency and norms this module holds the array
//! view of an LC-derived test (one array per B-label, one axis per variable)
//! and the good/bad coordinate analysis built on it.

use crate::error::{Error, Result};
use crate::instances::{LabelCoverInstance, Labeling, SsatInstance};
use crate::numeric::Rational;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperAssignment {
    /// `weights[ψ][r] = S(ψ)[r]`.
    pub weights: Vec<Vec<i64>>,
}

impl SuperAssignment {
    pub fn new(weights: Vec<Vec<i64>>) -> Self {
        Self { weights }
    }

    pub fn zero(ssat: &SsatInstance) -> Self {
        Self::new(ssat.range_sizes().into_iter().map(|n| vec![0; n]).collect())
    }

    /// Rejects weight vectors that do not line up with the instance.
    pub fn check_shape(&self, ssat: &SsatInstance) -> Result<()> {
        if self.weights.len() != ssat.num_tests() {
            return Err(Error::LengthMismatch {
                expected: ssat.num_tests(),
                found: self.weights.len(),
            });
        }
        for (w, n) in self.weights.iter().zip(ssat.range_sizes()) {
            if w.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: w.len(),
                });
            }
        }
        Ok(())
    }

    /// Componentwise sum of two super-assignments of the same shape.
    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        )
    }

    pub fn is_test_zero(&self, psi: usize) -> bool {
        self.weights[psi].iter().all(|&w| w == 0)
    }
}

/// `π_x(S(ψ))`, dense over the field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionVector {
    pub entries: Vec<i64>,
}

impl ProjectionVector {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }
}

pub fn project(
    ssat: &SsatInstance,
    s: &SuperAssignment,
    psi: usize,
    x: usize,
) -> Result<ProjectionVector> {
    let test = ssat.test(psi);
    let pos = test.position_of(x).ok_or(Error::VariableNotInTest {
        test: psi,
        variable: x,
    })?;
    let mut entries = vec![0i64; ssat.field_size()];
    for (r, tuple) in test.assignments.iter().enumerate() {
        entries[tuple[pos]] += s.weights[psi][r];
    }
    Ok(ProjectionVector { entries })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Consistency {
    pub consistent: bool,
    /// First violation `(ψ_i, ψ_j, x, a)` in `(i, j, x, a)` order.
    pub witness: Option<(usize, usize, usize, usize)>,
}

pub fn is_consistent(ssat: &SsatInstance, s: &SuperAssignment) -> Consistency {
    for i in 0..ssat.num_tests() {
        for j in i + 1..ssat.num_tests() {
            for x in ssat.shared_variables(i, j) {
                let pi = project(ssat, s, i, x).expect("shared variable");
                let pj = project(ssat, s, j, x).expect("shared variable");
                if let Some(a) = (0..pi.entries.len()).find(|&a| pi.entries[a] != pj.entries[a]) {
                    return Consistency {
                        consistent: false,
                        witness: Some((i, j, x, a)),
                    };
                }
            }
        }
    }
    Consistency {
        consistent: true,
        witness: None,
    }
}

/// Every variable has an incident test whose projection on it is nonzero.
pub fn is_nontrivial(ssat: &SsatInstance, s: &SuperAssignment) -> bool {
    (0..ssat.num_variables()).all(|x| {
        ssat.incident_tests(x)
            .into_iter()
            .any(|psi| !project(ssat, s, psi, x).expect("incident").is_zero())
    })
}

pub fn is_not_all_zero(s: &SuperAssignment) -> bool {
    s.weights.iter().flatten().any(|&w| w != 0)
}

pub fn test_norm(s: &SuperAssignment, psi: usize) -> i64 {
    s.weights[psi].iter().map(|w| w.abs()).sum()
}

/// Average test norm.
pub fn norm_l1(s: &SuperAssignment) -> Rational {
    if s.weights.is_empty() {
        return Rational::zero();
    }
    let total: i64 = (0..s.weights.len()).map(|psi| test_norm(s, psi)).sum();
    Rational::new(BigInt::from(total), BigInt::from(s.weights.len()))
}

/// Largest test norm.
pub fn norm_linf(s: &SuperAssignment) -> i64 {
    (0..s.weights.len())
        .map(|psi| test_norm(s, psi))
        .max()
        .unwrap_or(0)
}

/// The unit super-assignment induced by a labeling of an LC instance whose
/// SSAT image is `ssat`. When `φ_B` is absent each B-vertex takes the image
/// of its lowest-index neighbor's label.
pub fn natural_from_labeling(
    lc: &LabelCoverInstance,
    ssat: &SsatInstance,
    lab: &Labeling,
) -> Result<SuperAssignment> {
    let prov = ssat.provenance().ok_or(Error::NotLcDerived)?;
    if lab.phi_a.len() != lc.num_a() {
        return Err(Error::PartialLabeling(format!(
            "φ_A covers {} of {} A-vertices",
            lab.phi_a.len(),
            lc.num_a()
        )));
    }
    let phi_b = match &lab.phi_b {
        Some(pb) => pb.clone(),
        None => (0..lc.num_b())
            .map(|b| {
                lc.neighbors_of_b(b)
                    .first()
                    .map(|&k| lc.edges()[k].projection[lab.phi_a[lc.edges()[k].a]])
                    .unwrap_or(0)
            })
            .collect(),
    };
    let full = Labeling::new(lab.phi_a.clone(), Some(phi_b.clone()));
    if let Some(k) = lc.first_violated_edge(&full)? {
        let e = &lc.edges()[k];
        return Err(Error::EdgeUnsatisfied {
            a: lc.a_vertices()[e.a].clone(),
            b: lc.b_vertices()[e.b].clone(),
        });
    }
    let mut weights = Vec::with_capacity(ssat.num_tests());
    for (psi, test) in ssat.tests().iter().enumerate() {
        let tuple: Vec<usize> = test
            .variables
            .iter()
            .map(|&x| lab.phi_a[prov.variable_a[x]])
            .collect();
        let y = phi_b[prov.test_b[psi]];
        let r = test
            .assignments
            .iter()
            .zip(&prov.assignment_labels[psi])
            .position(|(t, &l)| *t == tuple && l == y)
            .ok_or_else(|| {
                Error::MalformedInstance(format!("test {psi} does not list the induced tuple"))
            })?;
        let mut w = vec![0; test.assignments.len()];
        w[r] = 1;
        weights.push(w);
    }
    Ok(SuperAssignment::new(weights))
}

/// `G_x`: the values with a nonzero projection in some test containing `x`.
pub fn assigned_values(ssat: &SsatInstance, s: &SuperAssignment) -> Vec<BTreeSet<usize>> {
    (0..ssat.num_variables())
        .map(|x| {
            let mut g = BTreeSet::new();
            for psi in ssat.incident_tests(x) {
                let p = project(ssat, s, psi, x).expect("incident");
                g.extend((0..p.entries.len()).filter(|&a| p.entries[a] != 0));
            }
            g
        })
        .collect()
}

/// The block `M^y` of one test: its assignments carrying B-label `y`, laid
/// out over the per-variable preimages of `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayView {
    pub test: usize,
    pub b_label: usize,
    /// `(variable, axis values)` in the test's variable order.
    pub axes: Vec<(usize, Vec<usize>)>,
    /// Every coordinate of the array, zero cells included.
    pub cells: BTreeMap<Vec<usize>, i64>,
    /// Assignment indices covered by this array.
    pub assignments: Vec<usize>,
    pub norm: i64,
}

impl ArrayView {
    pub fn cell_sum(&self) -> i64 {
        self.cells.values().sum()
    }
}

pub fn decompose_arrays(
    ssat: &SsatInstance,
    s: &SuperAssignment,
    psi: usize,
) -> Result<Vec<ArrayView>> {
    let prov = ssat.provenance().ok_or(Error::NotLcDerived)?;
    let test = ssat.test(psi);
    let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (r, &y) in prov.assignment_labels[psi].iter().enumerate() {
        by_label.entry(y).or_default().push(r);
    }
    Ok(by_label
        .into_iter()
        .map(|(y, rs)| {
            let axes = test
                .variables
                .iter()
                .enumerate()
                .map(|(pos, &x)| {
                    let vals: BTreeSet<usize> =
                        rs.iter().map(|&r| test.assignments[r][pos]).collect();
                    (x, vals.into_iter().collect())
                })
                .collect();
            let cells = rs
                .iter()
                .map(|&r| (test.assignments[r].clone(), s.weights[psi][r]))
                .collect();
            let norm = rs.iter().map(|&r| s.weights[psi][r].abs()).sum();
            ArrayView {
                test: psi,
                b_label: y,
                axes,
                cells,
                assignments: rs,
                norm,
            }
        })
        .collect())
}

/// A coordinate is good when one of its axis values is assigned.
pub fn good_coordinates(view: &ArrayView, assigned: &[BTreeSet<usize>]) -> Vec<bool> {
    view.axes
        .iter()
        .map(|(x, vals)| vals.iter().any(|v| assigned[*x].contains(v)))
        .collect()
}

fn require_consistent(ssat: &SsatInstance, s: &SuperAssignment) -> Result<()> {
    s.check_shape(ssat)?;
    if is_consistent(ssat, s).consistent {
        Ok(())
    } else {
        Err(Error::InconsistentInput)
    }
}

/// Zeroes every array all of whose coordinates are bad.
pub fn zero_all_bad_arrays(ssat: &SsatInstance, s: &SuperAssignment) -> Result<SuperAssignment> {
    require_consistent(ssat, s)?;
    let assigned = assigned_values(ssat, s);
    let mut out = s.clone();
    for psi in 0..ssat.num_tests() {
        for view in decompose_arrays(ssat, s, psi)? {
            if good_coordinates(&view, &assigned).iter().all(|g| !g) {
                for r in view.assignments {
                    out.weights[psi][r] = 0;
                }
            }
        }
    }
    Ok(out)
}

/// Arrays `(ψ, y)` that have a bad coordinate yet a nonzero cell sum.
pub fn check_claim1(ssat: &SsatInstance, s: &SuperAssignment) -> Result<Vec<(usize, usize)>> {
    require_consistent(ssat, s)?;
    let assigned = assigned_values(ssat, s);
    let mut violations = Vec::new();
    for psi in 0..ssat.num_tests() {
        for view in decompose_arrays(ssat, s, psi)? {
            let has_bad = good_coordinates(&view, &assigned).contains(&false);
            if has_bad && view.cell_sum() != 0 {
                violations.push((psi, view.b_label));
            }
        }
    }
    Ok(violations)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestClassification {
    Zero,
    /// Some nonzero assignment has at least two assigned values.
    MultiGood,
    /// Every nonzero assignment has exactly one assigned value.
    AllSingleGood,
}

/// Number of positions of assignment `r` of `psi` whose value is assigned.
pub fn assigned_count(
    ssat: &SsatInstance,
    assigned: &[BTreeSet<usize>],
    psi: usize,
    r: usize,
) -> usize {
    let test = ssat.test(psi);
    test.variables
        .iter()
        .zip(&test.assignments[r])
        .filter(|(x, v)| assigned[**x].contains(v))
        .count()
}

pub fn classify_test(
    ssat: &SsatInstance,
    s: &SuperAssignment,
    psi: usize,
) -> Result<TestClassification> {
    require_consistent(ssat, s)?;
    classify_with(ssat, s, &assigned_values(ssat, s), psi)
}

/// [`classify_test`] with precomputed assigned sets; consistency is the
/// caller's responsibility.
pub fn classify_with(
    ssat: &SsatInstance,
    s: &SuperAssignment,
    assigned: &[BTreeSet<usize>],
    psi: usize,
) -> Result<TestClassification> {
    if s.is_test_zero(psi) {
        return Ok(TestClassification::Zero);
    }
    let nonzero: Vec<usize> = (0..s.weights[psi].len())
        .filter(|&r| s.weights[psi][r] != 0)
        .collect();
    let counts: Vec<usize> = nonzero
        .iter()
        .map(|&r| assigned_count(ssat, assigned, psi, r))
        .collect();
    if counts.iter().any(|&c| c >= 2) {
        return Ok(TestClassification::MultiGood);
    }
    if let Some(i) = counts.iter().position(|&c| c == 0) {
        return Err(Error::ClassificationImpossible {
            test: psi,
            assignment: nonzero[i],
        });
    }
    Ok(TestClassification::AllSingleGood)
}
