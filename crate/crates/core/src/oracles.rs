//! Exhaustive solvers that give exact ground truth on small instances.
//!
//! Every search runs in lexicographic order of its candidates (coefficients
//! from `−K` upwards) and keeps a candidate only on strict improvement, so
//! the reported witness is the lexicographically smallest optimal one.
//! Searches refuse to start when the raw space exceeds `max_states`.

use crate::error::{Error, Result};
use crate::instances::{
    Delta, LabelCoverInstance, Labeling, LhpAssignment, LhpSystem, NcpInstance, SisInstance,
    SsatInstance,
};
use crate::numeric::{format_rational, int, parse_rational, rat, Rational};
use crate::superassign::{is_nontrivial, SuperAssignment};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

pub const DEFAULT_MAX_STATES: u64 = 100_000_000;
pub const MAX_STATES_ENV: &str = "GAPFORGE_MAX_STATES";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    L1,
    Linf,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(match self {
            Mode::L1 => "l1",
            Mode::Linf => "linf",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Coefficients range over `[−K, K]`.
    pub coeff_box: i64,
    pub max_states: u64,
    pub mode: Mode,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            coeff_box: 1,
            max_states: DEFAULT_MAX_STATES,
            mode: Mode::L1,
        }
    }
}

impl SearchBudget {
    pub fn new(coeff_box: i64, mode: Mode) -> Self {
        Self {
            coeff_box,
            mode,
            ..Self::default()
        }
    }

    /// Cap taken from `GAPFORGE_MAX_STATES` when set.
    pub fn with_env_cap(mut self) -> Self {
        if let Some(cap) = std::env::var(MAX_STATES_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            self.max_states = cap;
        }
        self
    }

    fn check(&self) -> Result<()> {
        if self.coeff_box < 1 {
            return Err(Error::BadParameters("box K must be at least 1".into()));
        }
        Ok(())
    }
}

/// Refuses a search over `base^exp` states when that exceeds `cap`.
pub fn ensure_within(base: u64, exp: usize, cap: u64) -> Result<u64> {
    let states = BigUint::from(base).pow(exp as u32);
    match states.to_u64() {
        Some(s) if s <= cap => Ok(s),
        _ => Err(Error::SearchSpaceTooLarge {
            states: states.to_string(),
            cap,
        }),
    }
}

/// An optimum value, or `∞` when nothing feasible was found.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Optimum {
    Value(Rational),
    Infinite,
}

impl Optimum {
    pub fn int(v: i64) -> Self {
        Optimum::Value(int(v))
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            Optimum::Value(v) => Some(v),
            Optimum::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Optimum::Value(_))
    }
}

impl fmt::Display for Optimum {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Optimum::Value(v) => f.write_str(&format_rational(v)),
            Optimum::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Optimum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Optimum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        if raw == "inf" {
            return Ok(Optimum::Infinite);
        }
        parse_rational(&raw)
            .map(Optimum::Value)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid optimum {raw:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult<W> {
    pub optimum: Optimum,
    pub witness: Option<W>,
    pub mode: String,
    pub states_visited: u64,
}

/// Lexicographic odometer over `[lo, hi]^n`; returns `false` after the last
/// vector.
fn advance(v: &mut [i64], lo: i64, hi: i64) -> bool {
    for i in (0..v.len()).rev() {
        if v[i] < hi {
            v[i] += 1;
            return true;
        }
        v[i] = lo;
    }
    false
}

/// Maximum fraction of satisfied edges. Each B-vertex takes the most common
/// image among its neighbors (lowest label on ties), which is optimal for
/// the fixed `φ_A`.
pub fn solve_lc_max(lc: &LabelCoverInstance, max_states: u64) -> Result<OracleResult<Labeling>> {
    let k = lc.sigma_a().len() as u64;
    let states = ensure_within(k, lc.num_a(), max_states)?;
    let total = lc.edges().len();
    let nbrs: Vec<Vec<usize>> = (0..lc.num_b()).map(|b| lc.neighbors_of_b(b)).collect();
    let mut phi: Vec<i64> = vec![0; lc.num_a()];
    let mut best: Option<(usize, Labeling)> = None;
    let mut visited = 0;
    loop {
        visited += 1;
        let phi_a: Vec<usize> = phi.iter().map(|&v| v as usize).collect();
        let mut phi_b = Vec::with_capacity(lc.num_b());
        let mut sat = 0;
        for ks in &nbrs {
            let mut votes = vec![0usize; lc.sigma_b().len()];
            for &e in ks {
                let edge = &lc.edges()[e];
                votes[edge.projection[phi_a[edge.a]]] += 1;
            }
            let (y, c) =
                votes
                    .iter()
                    .enumerate()
                    .fold((0, 0), |acc, (y, &c)| if c > acc.1 { (y, c) } else { acc });
            phi_b.push(y);
            sat += c;
        }
        if best.as_ref().is_none_or(|(s, _)| sat > *s) {
            best = Some((sat, Labeling::new(phi_a, Some(phi_b))));
        }
        if !advance(&mut phi, 0, k as i64 - 1) {
            break;
        }
    }
    debug_assert_eq!(visited, states);
    let (sat, lab) = best.expect("at least one labeling");
    let frac = if total == 0 {
        Rational::one()
    } else {
        rat(sat as i64, total as i64)
    };
    Ok(OracleResult {
        optimum: Optimum::Value(frac),
        witness: Some(lab),
        mode: "exact".into(),
        states_visited: visited,
    })
}

/// Per-test candidate weight vectors with their projections precomputed.
struct TestTable {
    vectors: Vec<Vec<i64>>,
    norms: Vec<i64>,
    /// `proj[c][slot]`: projection of candidate `c` on the test's variable in
    /// position `slot`.
    proj: Vec<Vec<Vec<i64>>>,
}

fn test_tables(ssat: &SsatInstance, k: i64) -> Vec<TestTable> {
    ssat.tests()
        .iter()
        .map(|t| {
            let mut vectors = Vec::new();
            let mut v = vec![-k; t.assignments.len()];
            loop {
                vectors.push(v.clone());
                if !advance(&mut v, -k, k) {
                    break;
                }
            }
            let norms = vectors
                .iter()
                .map(|w| w.iter().map(|x| x.abs()).sum())
                .collect();
            let proj = vectors
                .iter()
                .map(|w| {
                    (0..t.variables.len())
                        .map(|pos| {
                            let mut p = vec![0i64; ssat.field_size()];
                            for (r, tuple) in t.assignments.iter().enumerate() {
                                p[tuple[pos]] += w[r];
                            }
                            p
                        })
                        .collect()
                })
                .collect();
            TestTable {
                vectors,
                norms,
                proj,
            }
        })
        .collect()
}

/// Depth-first walk over consistent partial super-assignments in
/// lexicographic order. `visit` sees every complete consistent assignment;
/// `keep_going(partial_norms)` may cut a subtree.
struct ConsistentWalk<'a> {
    ssat: &'a SsatInstance,
    tables: Vec<TestTable>,
    /// For test `j`: `(earlier test i, slot in i, slot in j)` per shared variable.
    checks: Vec<Vec<(usize, usize, usize)>>,
    chosen: Vec<usize>,
    visited: u64,
}

impl<'a> ConsistentWalk<'a> {
    fn new(ssat: &'a SsatInstance, k: i64) -> Self {
        let checks = (0..ssat.num_tests())
            .map(|j| {
                let mut c = Vec::new();
                for i in 0..j {
                    for x in ssat.shared_variables(i, j) {
                        c.push((
                            i,
                            ssat.test(i).position_of(x).unwrap(),
                            ssat.test(j).position_of(x).unwrap(),
                        ));
                    }
                }
                c
            })
            .collect();
        Self {
            ssat,
            tables: test_tables(ssat, k),
            checks,
            chosen: Vec::with_capacity(ssat.num_tests()),
            visited: 0,
        }
    }

    fn current(&self) -> SuperAssignment {
        SuperAssignment::new(
            self.chosen
                .iter()
                .enumerate()
                .map(|(t, &c)| self.tables[t].vectors[c].clone())
                .collect(),
        )
    }

    fn run(
        &mut self,
        prune: &mut dyn FnMut(&[i64]) -> bool,
        visit: &mut dyn FnMut(&SuperAssignment, &[i64]),
        norms: &mut Vec<i64>,
    ) {
        let j = self.chosen.len();
        if j == self.ssat.num_tests() {
            let s = self.current();
            visit(&s, norms);
            return;
        }
        for c in 0..self.tables[j].vectors.len() {
            self.visited += 1;
            let ok = self.checks[j].iter().all(|&(i, si, sj)| {
                self.tables[i].proj[self.chosen[i]][si] == self.tables[j].proj[c][sj]
            });
            if !ok {
                continue;
            }
            norms.push(self.tables[j].norms[c]);
            if prune(norms) {
                self.chosen.push(c);
                self.run(prune, visit, norms);
                self.chosen.pop();
            }
            norms.pop();
        }
    }
}

/// Every consistent super-assignment with weights in `[−K, K]`, in
/// lexicographic order.
pub fn enumerate_consistent(
    ssat: &SsatInstance,
    k: i64,
    max_states: u64,
) -> Result<Vec<SuperAssignment>> {
    SearchBudget::new(k, Mode::L1).check()?;
    ensure_within(2 * k as u64 + 1, ssat.total_assignments(), max_states)?;
    let mut walk = ConsistentWalk::new(ssat, k);
    let mut out = Vec::new();
    walk.run(
        &mut |_| true,
        &mut |s, _| out.push(s.clone()),
        &mut Vec::new(),
    );
    Ok(out)
}

/// Minimum norm over consistent super-assignments in the box: non-trivial
/// ones under ℓ1, not-all-zero ones under ℓ∞.
pub fn solve_ssat_min_norm(
    ssat: &SsatInstance,
    budget: &SearchBudget,
) -> Result<OracleResult<SuperAssignment>> {
    budget.check()?;
    let k = budget.coeff_box;
    ensure_within(
        2 * k as u64 + 1,
        ssat.total_assignments(),
        budget.max_states,
    )?;
    let mode = budget.mode;
    let objective = |norms: &[i64]| match mode {
        Mode::L1 => norms.iter().sum::<i64>(),
        Mode::Linf => norms.iter().copied().max().unwrap_or(0),
    };
    let mut best: Option<(i64, SuperAssignment)> = None;
    let best_cell = std::cell::RefCell::new(None::<i64>);
    let mut walk = ConsistentWalk::new(ssat, k);
    walk.run(
        &mut |norms| best_cell.borrow().is_none_or(|b| objective(norms) < b),
        &mut |s, norms| {
            let ok = match mode {
                Mode::L1 => is_nontrivial(ssat, s),
                Mode::Linf => s.weights.iter().flatten().any(|&w| w != 0),
            };
            let val = objective(norms);
            if ok && best.as_ref().is_none_or(|(b, _)| val < *b) {
                best = Some((val, s.clone()));
                *best_cell.borrow_mut() = Some(val);
            }
        },
        &mut Vec::new(),
    );
    let n = ssat.num_tests().max(1) as i64;
    let (optimum, witness) = match best {
        Some((v, s)) => (
            Optimum::Value(match mode {
                Mode::L1 => rat(v, n),
                Mode::Linf => int(v),
            }),
            Some(s),
        ),
        None => (Optimum::Infinite, None),
    };
    Ok(OracleResult {
        optimum,
        witness,
        mode: mode.to_string(),
        states_visited: walk.visited,
    })
}

/// Minimum `‖z‖₁` over `z ∈ [−K, K]^{m'}` with `B'z = t'`.
pub fn solve_sis_min(sis: &SisInstance, budget: &SearchBudget) -> Result<OracleResult<Vec<i64>>> {
    budget.check()?;
    let k = budget.coeff_box;
    ensure_within(2 * k as u64 + 1, sis.cols(), budget.max_states)?;
    let m = sis.cols();
    let rows = sis.matrix();
    // reach[i][j]: how far columns j.. can still move row i.
    let reach: Vec<Vec<i64>> = rows
        .iter()
        .map(|row| {
            let mut r = vec![0i64; m + 1];
            for j in (0..m).rev() {
                r[j] = r[j + 1] + row[j].abs() * k;
            }
            r
        })
        .collect();
    struct Search<'a> {
        rows: &'a [Vec<i64>],
        target: &'a [i64],
        reach: Vec<Vec<i64>>,
        k: i64,
        z: Vec<i64>,
        partial: Vec<i64>,
        best: Option<(i64, Vec<i64>)>,
        visited: u64,
    }
    impl Search<'_> {
        fn feasible_after(&self, j: usize) -> bool {
            self.partial
                .iter()
                .zip(self.target)
                .enumerate()
                .all(|(i, (p, t))| (t - p).abs() <= self.reach[i][j])
        }
        fn go(&mut self, j: usize, l1: i64) {
            if let Some((b, _)) = &self.best {
                if l1 >= *b {
                    return;
                }
            }
            if j == self.z.len() {
                if self.partial == self.target {
                    self.best = Some((l1, self.z.clone()));
                }
                return;
            }
            for v in -self.k..=self.k {
                self.visited += 1;
                for (i, row) in self.rows.iter().enumerate() {
                    self.partial[i] += row[j] * v;
                }
                self.z[j] = v;
                if self.feasible_after(j + 1) {
                    self.go(j + 1, l1 + v.abs());
                }
                for (i, row) in self.rows.iter().enumerate() {
                    self.partial[i] -= row[j] * v;
                }
            }
            self.z[j] = 0;
        }
    }
    let mut s = Search {
        rows,
        target: sis.target(),
        reach,
        k,
        z: vec![0; m],
        partial: vec![0; sis.rows()],
        best: None,
        visited: 0,
    };
    if s.feasible_after(0) {
        s.go(0, 0);
    }
    let (optimum, witness) = match s.best {
        Some((v, z)) => (Optimum::int(v), Some(z)),
        None => (Optimum::Infinite, None),
    };
    Ok(OracleResult {
        optimum,
        witness,
        mode: "l1".into(),
        states_visited: s.visited,
    })
}

/// Minimum Hamming distance `‖Az − t‖_H`, over all of `F_q^{m'}` when
/// `full_field`, otherwise over the images of `[−K, K]^{m'}`.
pub fn solve_ncp_min(
    ncp: &NcpInstance,
    budget: &SearchBudget,
    full_field: bool,
) -> Result<OracleResult<Vec<i64>>> {
    let (lo, hi) = if full_field {
        (0, ncp.modulus() as i64 - 1)
    } else {
        budget.check()?;
        (-budget.coeff_box, budget.coeff_box)
    };
    ensure_within((hi - lo + 1) as u64, ncp.cols(), budget.max_states)?;
    let mut z = vec![lo; ncp.cols()];
    let mut best: Option<(usize, Vec<i64>)> = None;
    let mut visited = 0;
    loop {
        visited += 1;
        let d = ncp.distance(&z)?;
        if best.as_ref().is_none_or(|(b, _)| d < *b) {
            best = Some((d, z.clone()));
        }
        if !advance(&mut z, lo, hi) {
            break;
        }
    }
    let (d, w) = best.expect("nonempty search space");
    Ok(OracleResult {
        optimum: Optimum::int(d as i64),
        witness: Some(w),
        mode: if full_field { "full" } else { "box" }.into(),
        states_visited: visited,
    })
}

pub fn count_lhp_violations(lhp: &LhpSystem, a: &LhpAssignment) -> usize {
    lhp.inequalities().iter().filter(|q| !q.holds(a)).count()
}

/// `{−1, 0, 1}^{num_x}` with `y = 1` and `δ = ε`, in lexicographic order.
pub fn default_lhp_grid(num_x: usize, max_states: u64) -> Result<Vec<LhpAssignment>> {
    ensure_within(3, num_x, max_states)?;
    let mut x = vec![-1i64; num_x];
    let mut out = Vec::new();
    loop {
        out.push(LhpAssignment::new(
            x.iter().map(|&v| int(v)).collect(),
            int(1),
            Delta::Infinitesimal,
        ));
        if !advance(&mut x, -1, 1) {
            break;
        }
    }
    Ok(out)
}

/// Minimum violation count over a finite candidate grid. This is an upper
/// bound on the true optimum of the system.
pub fn solve_lhp_min(
    lhp: &LhpSystem,
    grid: &[LhpAssignment],
) -> Result<OracleResult<LhpAssignment>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut best: Option<(usize, &LhpAssignment)> = None;
    for a in grid {
        let v = count_lhp_violations(lhp, a);
        if best.is_none_or(|(b, _)| v < b) {
            best = Some((v, a));
        }
    }
    let (v, a) = best.unwrap();
    Ok(OracleResult {
        optimum: Optimum::int(v as i64),
        witness: Some(a.clone()),
        mode: "grid".into(),
        states_visited: grid.len() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::instances::Edge;
    use crate::reductions::{lc_to_ssat, sis_to_lhp, sis_to_ncp, ssat_to_sis};

    #[test]
    fn lc_optima() {
        assert_eq!(
            solve_lc_max(&fixtures::lc_id2(), 100).unwrap().optimum,
            Optimum::int(1)
        );
        let cyc = solve_lc_max(&fixtures::lc_cyc(), 100).unwrap();
        assert_eq!(cyc.optimum, Optimum::Value(rat(3, 4)));
        assert_eq!(cyc.states_visited, 4);

        let lc = fixtures::lc_cyc();
        let edges: Vec<Edge> = lc.edges()[..3].to_vec();
        let no_flip = lc.with_edges(edges).unwrap();
        assert_eq!(
            solve_lc_max(&no_flip, 100).unwrap().optimum,
            Optimum::int(1)
        );
        assert!(matches!(
            solve_lc_max(&fixtures::lc_cyc(), 3),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn ssat_optima() {
        let id2 = lc_to_ssat(&fixtures::lc_id2()).unwrap();
        let r = solve_ssat_min_norm(&id2, &SearchBudget::new(1, Mode::L1)).unwrap();
        assert_eq!(r.optimum, Optimum::int(1));

        let cyc = lc_to_ssat(&fixtures::lc_cyc()).unwrap();
        let l1 = solve_ssat_min_norm(&cyc, &SearchBudget::new(2, Mode::L1)).unwrap();
        assert_eq!(l1.optimum, Optimum::int(2));
        let linf = solve_ssat_min_norm(&cyc, &SearchBudget::new(2, Mode::Linf)).unwrap();
        assert_eq!(linf.optimum, Optimum::int(2));
    }

    #[test]
    fn ssat_search_space_cap() {
        let cyc = lc_to_ssat(&fixtures::lc_cyc()).unwrap();
        let mut b = SearchBudget::new(2, Mode::L1);
        b.max_states = 624;
        assert!(matches!(
            solve_ssat_min_norm(&cyc, &b),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn sis_optima() {
        let sis = ssat_to_sis(&fixtures::ssat_share());
        let r = solve_sis_min(&sis, &SearchBudget::new(2, Mode::L1)).unwrap();
        assert_eq!(r.optimum, Optimum::int(2));
        let z = r.witness.unwrap();
        assert!(z == vec![1, 0, 1, 0] || z == vec![0, 1, 0, 1]);

        let unreachable = SisInstance::new(vec![vec![1, 1]], vec![5], 1, 2).unwrap();
        let r = solve_sis_min(&unreachable, &SearchBudget::new(2, Mode::L1)).unwrap();
        assert_eq!(r.optimum, Optimum::Infinite);
    }

    #[test]
    fn ncp_optima() {
        let sis = ssat_to_sis(&fixtures::ssat_share());
        let ncp = sis_to_ncp(&sis, 1, None, None).unwrap();
        let full = solve_ncp_min(&ncp, &SearchBudget::default(), true).unwrap();
        assert_eq!(full.optimum, Optimum::int(2));
        assert_eq!(full.states_visited, 625);
        let boxed = solve_ncp_min(&ncp, &SearchBudget::new(1, Mode::L1), false).unwrap();
        assert_eq!(boxed.optimum, Optimum::int(2));
    }

    #[test]
    fn lhp_counts() {
        let sis = ssat_to_sis(&fixtures::ssat_share());
        let lhp = sis_to_lhp(&sis, 1, Some(10)).unwrap();
        let emb = crate::reductions::lhp_assignment_from_sis_solution(&[1, 0, 1, 0]);
        assert_eq!(count_lhp_violations(&lhp, &emb), 2);
        let zero = crate::reductions::lhp_assignment_from_sis_solution(&[0, 0, 0, 0]);
        // Each of the 4 rows has c = 1: the `> 0` copies read −1 + ε.
        assert_eq!(count_lhp_violations(&lhp, &zero), 4 * 10);

        let grid = default_lhp_grid(4, 1000).unwrap();
        let r = solve_lhp_min(&lhp, &grid).unwrap();
        assert_eq!(r.optimum, Optimum::int(2));
        assert_eq!(solve_lhp_min(&lhp, &[]).unwrap_err(), Error::EmptyGrid);
        let single = solve_lhp_min(&lhp, &grid[..1]).unwrap();
        assert_eq!(
            single.optimum,
            Optimum::int(count_lhp_violations(&lhp, &grid[0]) as i64)
        );
    }

    #[test]
    fn all_zero_lhp_point() {
        let sis = ssat_to_sis(&fixtures::ssat_share());
        let lhp = sis_to_lhp(&sis, 1, Some(10)).unwrap();
        let a = LhpAssignment::new(vec![int(0); 4], int(0), Delta::Exact(int(0)));
        // Every left-hand side is exactly 0, so every strict inequality fails.
        let by_hand = lhp.inequalities().iter().filter(|q| !q.holds(&a)).count();
        assert_eq!(count_lhp_violations(&lhp, &a), by_hand);
        assert_eq!(by_hand, lhp.len());
    }
}
