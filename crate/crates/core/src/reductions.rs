//! The reductions LC → SSAT → SIS → {NCP, LHP} and the maps that carry
//! solutions forwards (completeness) and backwards (soundness).

use crate::error::{Error, Result};
use crate::instances::ncp::is_prime;
use crate::instances::{
    next_prime_above, ColumnTag, Delta, Group, Inequality, LabelCoverInstance, LcProvenance,
    LhpAssignment, LhpSystem, NcpInstance, RowTag, Sense, SisInstance, SsatInstance, Test,
};
use crate::numeric::{int, is_integer, rat, Rational};
use crate::superassign::SuperAssignment;
use num_traits::{ToPrimitive, Zero};

/// One variable per A-vertex, one test per B-vertex. The range of `ψ_b` is
/// the union over `y ∈ Σ_B` of the cross products of the neighbors'
/// preimages of `y`, skipping any `y` some neighbor cannot reach.
pub fn lc_to_ssat(lc: &LabelCoverInstance) -> Result<SsatInstance> {
    if let Some(a) = lc.degree_a().iter().position(|&d| d == 0) {
        return Err(Error::MalformedInstance(format!(
            "A-vertex {:?} has no edges",
            lc.a_vertices()[a]
        )));
    }
    let report = lc.validate();
    let mut tests = Vec::with_capacity(lc.num_b());
    let mut test_b = Vec::with_capacity(lc.num_b());
    let mut assignment_labels = Vec::with_capacity(lc.num_b());
    for b in 0..lc.num_b() {
        let nbrs = lc.neighbors_of_b(b);
        if nbrs.is_empty() {
            return Err(Error::MalformedInstance(format!(
                "B-vertex {:?} has no edges",
                lc.b_vertices()[b]
            )));
        }
        let mut assignments = Vec::new();
        let mut labels = Vec::new();
        for y in 0..lc.sigma_b().len() {
            let axes: Vec<Vec<usize>> = nbrs.iter().map(|&k| lc.preimage(k, y)).collect();
            if axes.iter().any(|ax| ax.is_empty()) {
                continue;
            }
            for tuple in cross_product(&axes) {
                assignments.push(tuple);
                labels.push(y);
            }
        }
        if assignments.is_empty() {
            return Err(Error::EmptyRange {
                test: lc.b_vertices()[b].clone(),
            });
        }
        let cap = (lc.sigma_b().len() as u128) * (report.p as u128).pow(nbrs.len() as u32);
        if assignments.len() as u128 > cap {
            return Err(Error::MalformedInstance(format!(
                "test {:?} has {} assignments, above the bound {cap}",
                lc.b_vertices()[b],
                assignments.len()
            )));
        }
        tests.push(Test {
            name: lc.b_vertices()[b].clone(),
            variables: nbrs.iter().map(|&k| lc.edges()[k].a).collect(),
            assignments,
        });
        test_b.push(b);
        assignment_labels.push(labels);
    }
    SsatInstance::new(
        lc.a_vertices().to_vec(),
        lc.sigma_a().to_vec(),
        tests,
        Some(LcProvenance {
            test_b,
            variable_a: (0..lc.num_a()).collect(),
            assignment_labels,
            b_labels: lc.sigma_b().to_vec(),
        }),
    )
}

/// Lexicographic cross product; the last axis varies fastest.
pub fn cross_product(axes: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(axes.len())];
    for ax in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                ax.iter().map(move |&v| {
                    let mut t = prefix.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// The consistency gadget for `x` shared by `ψ_i` and `ψ_j`, each matrix
/// stored `|F| × |R|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetPair {
    pub g1: Vec<Vec<i64>>,
    pub g2: Vec<Vec<i64>>,
}

pub fn gadget_pair(
    ssat: &SsatInstance,
    psi_i: usize,
    psi_j: usize,
    x: usize,
) -> Result<GadgetPair> {
    let not_shared = Error::VariableNotShared {
        first: psi_i,
        second: psi_j,
        variable: x,
    };
    if psi_i == psi_j {
        return Err(not_shared);
    }
    let (ti, tj) = (ssat.test(psi_i), ssat.test(psi_j));
    let (pi, pj) = match (ti.position_of(x), tj.position_of(x)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(not_shared),
    };
    let f = ssat.field_size();
    let g1 = (0..f)
        .map(|v| {
            ti.assignments
                .iter()
                .map(|r| i64::from(r[pi] == v))
                .collect()
        })
        .collect();
    let g2 = (0..f)
        .map(|v| {
            tj.assignments
                .iter()
                .map(|r| i64::from(r[pj] != v))
                .collect()
        })
        .collect();
    Ok(GadgetPair { g1, g2 })
}

/// Non-triviality rows first, then `|F|` consistency rows for every
/// unordered test pair and shared variable. Target all ones, bound `|Ψ|`.
pub fn ssat_to_sis(ssat: &SsatInstance) -> SisInstance {
    let mut offsets = Vec::with_capacity(ssat.num_tests());
    let mut cols: Vec<ColumnTag> = Vec::new();
    for (psi, t) in ssat.tests().iter().enumerate() {
        offsets.push(cols.len());
        cols.extend((0..t.assignments.len()).map(|r| (psi, r)));
    }
    let m = cols.len();
    let mut matrix = Vec::new();
    let mut tags = Vec::new();
    for (psi, t) in ssat.tests().iter().enumerate() {
        let mut row = vec![0i64; m];
        row[offsets[psi]..offsets[psi] + t.assignments.len()].fill(1);
        matrix.push(row);
        tags.push(RowTag::NonTriviality { test: psi });
    }
    for i in 0..ssat.num_tests() {
        for j in i + 1..ssat.num_tests() {
            for x in ssat.shared_variables(i, j) {
                let gp = gadget_pair(ssat, i, j, x).expect("shared variable");
                for f in 0..ssat.field_size() {
                    let mut row = vec![0i64; m];
                    row[offsets[i]..offsets[i] + gp.g1[f].len()].copy_from_slice(&gp.g1[f]);
                    row[offsets[j]..offsets[j] + gp.g2[f].len()].copy_from_slice(&gp.g2[f]);
                    matrix.push(row);
                    tags.push(RowTag::Consistency {
                        first: i,
                        second: j,
                        variable: x,
                        value: f,
                    });
                }
            }
        }
    }
    let n = matrix.len();
    SisInstance::new(matrix, vec![1; n], ssat.num_tests() as i64, m)
        .and_then(|s| s.with_column_provenance(cols))
        .and_then(|s| s.with_row_provenance(tags))
        .expect("construction is well-formed")
}

/// Concatenation of the weight vectors in column order.
pub fn sis_solution_from_superassignment(s: &SuperAssignment) -> Vec<i64> {
    s.weights.iter().flatten().copied().collect()
}

/// Splits `z` back into per-test pieces.
pub fn superassignment_from_sis_solution(
    ssat: &SsatInstance,
    z: &[i64],
) -> Result<SuperAssignment> {
    let expected = ssat.total_assignments();
    if z.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            found: z.len(),
        });
    }
    let mut rest = z;
    let mut weights = Vec::with_capacity(ssat.num_tests());
    for n in ssat.range_sizes() {
        let (head, tail) = rest.split_at(n);
        weights.push(head.to_vec());
        rest = tail;
    }
    Ok(SuperAssignment::new(weights))
}

/// `g·x + c`, refusing parameters that overflow.
fn scaled(g: u64, x: u64, c: u64) -> Result<u64> {
    g.checked_mul(x)
        .and_then(|v| v.checked_add(c))
        .ok_or_else(|| Error::BadParameters(format!("g·{x} + {c} overflows with g = {g}")))
}

/// Replicates each row of `B'` `D` times above an `m' × m'` identity, over
/// `F_q`. Defaults: `D = g·d + 1`, `q` the smallest prime above
/// `g·max(n', m')`.
pub fn sis_to_ncp(
    sis: &SisInstance,
    g: u64,
    d_rep: Option<u64>,
    q: Option<u64>,
) -> Result<NcpInstance> {
    if g == 0 {
        return Err(Error::BadParameters("g must be at least 1".into()));
    }
    let d = sis.bound().max(0) as u64;
    let gd = scaled(g, d, 0)?;
    let d_rep = d_rep.unwrap_or(scaled(g, d, 1)?);
    if d_rep <= gd {
        return Err(Error::BadParameters(format!(
            "replication D = {d_rep} must exceed g·d = {gd}"
        )));
    }
    let floor = scaled(g, sis.rows().max(sis.cols()) as u64, 0)?;
    let q = q.unwrap_or_else(|| next_prime_above(floor));
    if !is_prime(q) || q <= floor {
        return Err(Error::BadParameters(format!(
            "q = {q} must be a prime above g·max(n', m') = {floor}"
        )));
    }
    let red = |v: i64| v.rem_euclid(q as i64) as u64;
    let m = sis.cols();
    let mut matrix = Vec::with_capacity(sis.rows() * d_rep as usize + m);
    let mut target = Vec::with_capacity(matrix.capacity());
    for (row, &t) in sis.matrix().iter().zip(sis.target()) {
        let reduced: Vec<u64> = row.iter().map(|&v| red(v)).collect();
        for _ in 0..d_rep {
            matrix.push(reduced.clone());
            target.push(red(t));
        }
    }
    for j in 0..m {
        let mut row = vec![0u64; m];
        row[j] = 1;
        matrix.push(row);
        target.push(0);
    }
    NcpInstance::new(q, matrix, target, sis.bound(), d_rep as usize, m, g as i64)
}

/// Homogenized strict inequalities whose violation count tracks `‖z‖₁`.
/// Default `U = g·d + 1`.
pub fn sis_to_lhp(sis: &SisInstance, g: u64, u_param: Option<u64>) -> Result<LhpSystem> {
    if g == 0 {
        return Err(Error::BadParameters("g must be at least 1".into()));
    }
    let u = match u_param {
        Some(u) => u,
        None => scaled(g, sis.bound().max(0) as u64, 1)?,
    };
    if u == 0 {
        return Err(Error::BadParameters("U must be at least 1".into()));
    }
    let n = sis.cols();
    let mut out = Vec::new();
    let mut push = |cx: Vec<Rational>, cy: Rational, cd: Rational, sense, group, tag: String| {
        out.push(Inequality {
            coeff_x: cx,
            coeff_y: cy,
            coeff_delta: cd,
            sense,
            rhs: Rational::zero(),
            group,
            copies_of: tag,
        })
    };
    let zeros = || vec![Rational::zero(); n];
    let unit = |i: usize| {
        let mut v = zeros();
        v[i] = int(1);
        v
    };
    let inv_u = rat(1, u as i64);
    for _ in 0..u {
        push(
            zeros(),
            inv_u.clone(),
            int(1),
            Sense::Gt,
            Group::G1,
            "delta>-y/U".into(),
        );
        push(
            zeros(),
            -inv_u.clone(),
            int(1),
            Sense::Lt,
            Group::G1,
            "delta<y/U".into(),
        );
    }
    for (i, (row, &c)) in sis.matrix().iter().zip(sis.target()).enumerate() {
        let cx: Vec<Rational> = row.iter().map(|&a| int(a)).collect();
        for _ in 0..u {
            push(
                cx.clone(),
                int(-c),
                int(1),
                Sense::Gt,
                Group::G2,
                format!("row{i}+delta"),
            );
            push(
                cx.clone(),
                int(-c),
                int(-1),
                Sense::Lt,
                Group::G2,
                format!("row{i}-delta"),
            );
        }
    }
    for i in 0..n {
        for _ in 0..u {
            push(
                unit(i),
                int(-2),
                int(0),
                Sense::Lt,
                Group::G3,
                format!("x{i}<2y"),
            );
            push(
                unit(i),
                int(2),
                int(0),
                Sense::Gt,
                Group::G3,
                format!("x{i}>-2y"),
            );
        }
    }
    for i in 0..n {
        push(
            unit(i),
            int(0),
            int(1),
            Sense::Gt,
            Group::G4,
            format!("x{i}>-delta"),
        );
        push(
            unit(i),
            int(0),
            int(-1),
            Sense::Lt,
            Group::G4,
            format!("x{i}<delta"),
        );
    }
    for _ in 0..u {
        push(zeros(), int(1), int(0), Sense::Gt, Group::G5, "y>0".into());
    }
    LhpSystem::new(n, u, g as i64, out)
}

/// `x = z`, `y = 1`, `δ = ε`.
pub fn lhp_assignment_from_sis_solution(z: &[i64]) -> LhpAssignment {
    LhpAssignment::new(
        z.iter().map(|&v| int(v)).collect(),
        int(1),
        Delta::Infinitesimal,
    )
}

/// Recovers `z = x / y` from an assignment satisfying every inequality of
/// G1, G3 and G2 (checked in that order, so an out-of-box entry is reported
/// before the equations it breaks).
pub fn sis_solution_from_lhp_assignment(lhp: &LhpSystem, a: &LhpAssignment) -> Result<Vec<i64>> {
    if a.x_values.len() != lhp.num_x() {
        return Err(Error::LengthMismatch {
            expected: lhp.num_x(),
            found: a.x_values.len(),
        });
    }
    for group in [Group::G1, Group::G3, Group::G2] {
        if let Some(index) = lhp
            .inequalities()
            .iter()
            .enumerate()
            .position(|(_, q)| q.group == group && !q.holds(a))
        {
            return Err(Error::Infeasible {
                group: group.name().into(),
                index,
            });
        }
    }
    // G1 forces y > 0.
    a.x_values
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let v = x / &a.y_value;
            if !is_integer(&v) {
                return Err(Error::NotIntegral { index: i });
            }
            v.to_integer()
                .to_i64()
                .ok_or(Error::NotIntegral { index: i })
        })
        .collect()
}
