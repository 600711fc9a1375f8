//! Agreement soundness of Label Cover and the List-Construction procedures
//! that turn a low-norm consistent super-assignment into label lists.

use crate::error::{Error, Result};
use crate::instances::{LabelCoverInstance, SsatInstance};
use crate::numeric::{clamp_one, format_rational, int, rat, Rational};
use crate::oracles::ensure_within;
use crate::superassign::{
    assigned_values, classify_with, is_consistent, is_nontrivial, is_not_all_zero, norm_l1,
    norm_linf, test_norm, SuperAssignment, TestClassification,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// No two neighbors of `b` project their labels to a common value.
pub fn totally_disagree(lc: &LabelCoverInstance, phi_a: &[usize], b: usize) -> bool {
    let images: Vec<usize> = lc
        .neighbors_of_b(b)
        .into_iter()
        .map(|k| {
            let e = &lc.edges()[k];
            e.projection[phi_a[e.a]]
        })
        .collect();
    let distinct: BTreeSet<usize> = images.iter().copied().collect();
    distinct.len() == images.len()
}

/// List version: no two distinct neighbors have list members with a common
/// image.
pub fn list_totally_disagree(lc: &LabelCoverInstance, lists: &[BTreeSet<usize>], b: usize) -> bool {
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for k in lc.neighbors_of_b(b) {
        let e = &lc.edges()[k];
        let images: BTreeSet<usize> = lists[e.a].iter().map(|&x| e.projection[x]).collect();
        for y in images {
            if let Some(&other) = seen.get(&y) {
                if other != e.a {
                    return false;
                }
            }
            seen.insert(y, e.a);
        }
    }
    true
}

fn fraction(count: usize, total: usize) -> Rational {
    if total == 0 {
        Rational::zero()
    } else {
        rat(count as i64, total as i64)
    }
}

/// Fraction of B-vertices that are not in list total disagreement.
pub fn agreeing_fraction(lc: &LabelCoverInstance, lists: &[BTreeSet<usize>]) -> Rational {
    let agreeing = (0..lc.num_b())
        .filter(|&b| !list_totally_disagree(lc, lists, b))
        .count();
    fraction(agreeing, lc.num_b())
}

/// Exact agreement soundness error: the best fraction of B-vertices that a
/// single labeling keeps out of total disagreement.
pub fn agreement_soundness_exact(lc: &LabelCoverInstance, max_states: u64) -> Result<Rational> {
    list_agreement_soundness_exact(lc, 1, max_states)
}

/// `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<BTreeSet<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<BTreeSet<usize>>) {
        if cur.len() == k {
            out.push(cur.iter().copied().collect());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exact list agreement soundness error for lists of at most `l` labels.
/// Agreement only grows with the lists, so lists of exactly `min(l, |Σ_A|)`
/// labels suffice.
pub fn list_agreement_soundness_exact(
    lc: &LabelCoverInstance,
    l: usize,
    max_states: u64,
) -> Result<Rational> {
    if l == 0 {
        return Err(Error::BadParameters("list size must be at least 1".into()));
    }
    let choices = subsets(lc.sigma_a().len(), l.min(lc.sigma_a().len()));
    ensure_within(choices.len() as u64, lc.num_a(), max_states)?;
    let mut idx = vec![0usize; lc.num_a()];
    let mut best = 0usize;
    loop {
        let lists: Vec<BTreeSet<usize>> = idx.iter().map(|&i| choices[i].clone()).collect();
        let agreeing = (0..lc.num_b())
            .filter(|&b| !list_totally_disagree(lc, &lists, b))
            .count();
        best = best.max(agreeing);
        if best == lc.num_b() {
            break;
        }
        let mut pos = lc.num_a();
        loop {
            if pos == 0 {
                return Ok(fraction(best, lc.num_b()));
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
    Ok(fraction(best, lc.num_b()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoundnessBound {
    #[serde(with = "crate::numeric::rational_str")]
    pub lhs: Rational,
    #[serde(with = "crate::numeric::rational_str")]
    pub rhs: Rational,
    pub holds: bool,
}

/// `s_list(l) ≤ min(1, l²·s_agr)`.
pub fn check_list_soundness_bound(
    lc: &LabelCoverInstance,
    l: usize,
    max_states: u64,
) -> Result<SoundnessBound> {
    let lhs = list_agreement_soundness_exact(lc, l, max_states)?;
    let s_agr = agreement_soundness_exact(lc, max_states)?;
    let rhs = clamp_one(int((l * l) as i64) * s_agr);
    Ok(SoundnessBound {
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListConstructionParams {
    #[serde(with = "crate::numeric::rational_str")]
    pub g: Rational,
    #[serde(with = "crate::numeric::rational_str")]
    pub s_list: Rational,
    /// `g·(1 − s)/(1 − 2s)`.
    #[serde(with = "crate::numeric::rational_str")]
    pub g1: Rational,
    /// `min(1, g₁/D_A)`, or 1 when derandomized.
    #[serde(with = "crate::numeric::rational_str")]
    pub p_include: Rational,
    pub seed: u64,
}

impl ListConstructionParams {
    pub fn new(g: Rational, s_list: Rational, d_a: usize, seed: u64) -> Result<Self> {
        let half = rat(1, 2);
        if !(s_list > Rational::zero() && s_list < half) {
            return Err(Error::BadParameters(format!(
                "s_list = {} must lie strictly between 0 and 1/2",
                format_rational(&s_list)
            )));
        }
        if g <= Rational::zero() || d_a == 0 {
            return Err(Error::BadParameters("g and D_A must be positive".into()));
        }
        let one = Rational::one();
        let g1 = &g * (&one - &s_list) / (&one - int(2) * &s_list);
        let p_include = clamp_one(&g1 / int(d_a as i64));
        Ok(Self {
            g,
            s_list,
            g1,
            p_include,
            seed,
        })
    }

    /// Forces inclusion probability 1; lists only grow, and agreement with
    /// them.
    pub fn derandomized(mut self) -> Self {
        self.p_include = Rational::one();
        self
    }
}

/// Tests whose norm is at most `g₁`. By Markov's inequality they make up at
/// least an `s_list` fraction whenever the average norm is at most `g`.
pub fn markov_select_psi_prime(
    ssat: &SsatInstance,
    s: &SuperAssignment,
    params: &ListConstructionParams,
) -> Result<Vec<usize>> {
    s.check_shape(ssat)?;
    let norm = norm_l1(s);
    if norm > params.g {
        return Err(Error::NormBoundViolated {
            norm: format_rational(&norm),
            bound: format_rational(&params.g),
        });
    }
    let picked: Vec<usize> = (0..ssat.num_tests())
        .filter(|&psi| int(test_norm(s, psi)) <= params.g1)
        .collect();
    assert!(
        int(picked.len() as i64) >= &params.s_list * int(ssat.num_tests() as i64),
        "Markov selection fell below the s_list fraction"
    );
    Ok(picked)
}

/// One Bernoulli(`p`) draw: a uniform 64-bit word `u` succeeds iff
/// `u / 2^64 < p`.
fn bernoulli(rng: &mut ChaCha8Rng, p: &Rational) -> bool {
    let u = BigInt::from(rng.next_u64());
    u * p.denom() < p.numer() * (BigInt::one() << 64)
}

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListLabeling {
    /// Label list per A-vertex.
    pub lists: Vec<BTreeSet<usize>>,
    pub max_list_size: usize,
    /// Tests handled in step 2.
    pub psi_prime: Vec<usize>,
    /// Tests marked in the sequential step of the ℓ∞ procedure.
    pub marked: Vec<usize>,
    /// Free-form numbers reported alongside (`g·D_A`, candidate counts).
    pub metadata: BTreeMap<String, u64>,
}

impl ListLabeling {
    fn from_variable_lists(ssat: &SsatInstance, lists: Vec<BTreeSet<usize>>) -> Result<Self> {
        let prov = ssat.provenance().ok_or(Error::NotLcDerived)?;
        let num_a = prov.variable_a.iter().copied().max().map_or(0, |m| m + 1);
        let mut by_a = vec![BTreeSet::new(); num_a];
        for (x, l) in lists.into_iter().enumerate() {
            by_a[prov.variable_a[x]] = l;
        }
        Ok(Self {
            max_list_size: by_a.iter().map(BTreeSet::len).max().unwrap_or(0),
            lists: by_a,
            psi_prime: Vec::new(),
            marked: Vec::new(),
            metadata: BTreeMap::new(),
        })
    }
}

/// Step 2 for one test: when every nonzero assignment has exactly one
/// assigned value, the lowest-index such assignment offers its other values
/// with probability `p`. Returns whether the test was handled.
fn step_two(
    ssat: &SsatInstance,
    s: &SuperAssignment,
    assigned: &[BTreeSet<usize>],
    psi: usize,
    p: &Rational,
    seed: u64,
    lists: &mut [BTreeSet<usize>],
) -> Result<bool> {
    if classify_with(ssat, s, assigned, psi)? != TestClassification::AllSingleGood {
        return Ok(false);
    }
    let r = s.weights[psi]
        .iter()
        .position(|&w| w != 0)
        .expect("nonzero test");
    let test = ssat.test(psi);
    let mut rng = stream(seed, psi as u64);
    for (&x, &v) in test.variables.iter().zip(&test.assignments[r]) {
        if !assigned[x].contains(&v) && bernoulli(&mut rng, p) {
            lists[x].insert(v);
        }
    }
    Ok(true)
}

/// List-Construction for a consistent non-trivial super-assignment.
pub fn list_construction(
    ssat: &SsatInstance,
    s: &SuperAssignment,
    params: &ListConstructionParams,
) -> Result<ListLabeling> {
    s.check_shape(ssat)?;
    if ssat.provenance().is_none() {
        return Err(Error::NotLcDerived);
    }
    if !is_consistent(ssat, s).consistent {
        return Err(Error::PreconditionFailed(
            "super-assignment is inconsistent".into(),
        ));
    }
    if !is_nontrivial(ssat, s) {
        return Err(Error::PreconditionFailed(
            "super-assignment is trivial".into(),
        ));
    }
    let psi_prime = markov_select_psi_prime(ssat, s, params)?;
    let assigned = assigned_values(ssat, s);
    let mut lists = assigned.clone();
    let mut handled = Vec::new();
    for &psi in &psi_prime {
        if step_two(
            ssat,
            s,
            &assigned,
            psi,
            &params.p_include,
            params.seed,
            &mut lists,
        )? {
            handled.push(psi);
        }
    }
    let mut out = ListLabeling::from_variable_lists(ssat, lists)?;
    out.psi_prime = psi_prime;
    out.metadata
        .insert("step2_tests".into(), handled.len() as u64);
    Ok(out)
}

/// The ℓ∞ variant: steps 1 and 2 over all nonzero tests with
/// `p = min(1, g/D_A)`, then a sequential marking pass for every variable
/// without assigned values, taking at most `g` new values per variable.
pub fn list_construction_linf(
    ssat: &SsatInstance,
    s: &SuperAssignment,
    g: u64,
    seed: u64,
) -> Result<ListLabeling> {
    s.check_shape(ssat)?;
    if ssat.provenance().is_none() {
        return Err(Error::NotLcDerived);
    }
    if g == 0 {
        return Err(Error::PreconditionFailed(
            "g = 0 leaves no not-all-zero super-assignment".into(),
        ));
    }
    if !is_consistent(ssat, s).consistent {
        return Err(Error::PreconditionFailed(
            "super-assignment is inconsistent".into(),
        ));
    }
    if !is_not_all_zero(s) {
        return Err(Error::PreconditionFailed(
            "super-assignment is all zero".into(),
        ));
    }
    if norm_linf(s) as u64 > g {
        return Err(Error::PreconditionFailed(format!(
            "ℓ∞ norm {} exceeds g = {g}",
            norm_linf(s)
        )));
    }
    let d_a = ssat.max_variable_degree().max(1);
    let p = clamp_one(rat(g as i64, d_a as i64));
    let assigned = assigned_values(ssat, s);
    let mut lists = assigned.clone();
    let psi_prime: Vec<usize> = (0..ssat.num_tests())
        .filter(|&t| !s.is_test_zero(t))
        .collect();
    let mut marked_tests = BTreeSet::new();
    for &psi in &psi_prime {
        if step_two(ssat, s, &assigned, psi, &p, seed, &mut lists)? {
            marked_tests.insert(psi);
        }
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("g_times_d_a".into(), g * d_a as u64);
    let v_prime: Vec<usize> = (0..ssat.num_variables())
        .filter(|&x| assigned[x].is_empty())
        .collect();
    let mut psi_second = Vec::new();
    for &v in &v_prime {
        let incident = ssat.incident_tests(v);
        let candidates: BTreeSet<usize> = incident
            .iter()
            .flat_map(|&t| {
                let pos = ssat.test(t).position_of(v).unwrap();
                ssat.test(t).assignments.iter().map(move |r| r[pos])
            })
            .collect();
        metadata.insert(
            format!("candidates_{}", ssat.variables()[v]),
            candidates.len() as u64,
        );
        let mut new_values = 0u64;
        for psi in incident {
            if marked_tests.contains(&psi) {
                continue;
            }
            let test = ssat.test(psi);
            let pos = test.position_of(v).unwrap();
            let r = match test
                .assignments
                .iter()
                .position(|r| lists[v].contains(&r[pos]))
            {
                Some(r) => r,
                None if new_values < g => {
                    new_values += 1;
                    lists[v].insert(test.assignments[0][pos]);
                    0
                }
                None => continue,
            };
            let mut rng = stream(seed, (ssat.num_tests() + psi) as u64);
            for (&x, &val) in test.variables.iter().zip(&test.assignments[r]) {
                if x != v && bernoulli(&mut rng, &p) {
                    lists[x].insert(val);
                }
            }
            marked_tests.insert(psi);
            psi_second.push(psi);
        }
    }
    let mut out = ListLabeling::from_variable_lists(ssat, lists)?;
    out.psi_prime = psi_prime;
    out.marked = psi_second;
    out.metadata = metadata;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefeatReport {
    #[serde(with = "crate::numeric::rational_str")]
    pub non_disagree_fraction: Rational,
    pub defeats: bool,
}

/// Whether the lists keep at least an `s_list` fraction of B out of list
/// total disagreement.
pub fn verify_defeats_list_soundness(
    lc: &LabelCoverInstance,
    lists: &[BTreeSet<usize>],
    s_list: &Rational,
) -> DefeatReport {
    let f = agreeing_fraction(lc, lists);
    DefeatReport {
        defeats: &f >= s_list,
        non_disagree_fraction: f,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::instances::{Edge, Labeling};
    use crate::reductions::lc_to_ssat;
    use crate::superassign::natural_from_labeling;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn total_disagreement_examples() {
        let cyc = fixtures::lc_cyc();
        assert!(!totally_disagree(&cyc, &[0, 0], 0));
        assert!(totally_disagree(&cyc, &[0, 0], 1));
        let single = LabelCoverInstance::from_tables(
            1,
            1,
            2,
            2,
            vec![Edge {
                a: 0,
                b: 0,
                projection: vec![0, 1],
            }],
        )
        .unwrap();
        assert!(totally_disagree(&single, &[0], 0));
    }

    #[test]
    fn list_disagreement_examples() {
        let cyc = fixtures::lc_cyc();
        assert!(!list_totally_disagree(&cyc, &[set(&[0]), set(&[1])], 1));
        assert!(list_totally_disagree(&cyc, &[set(&[0]), set(&[0])], 1));
        let full = [set(&[0, 1]), set(&[0, 1])];
        assert!((0..2).all(|b| !list_totally_disagree(&cyc, &full, b)));
    }

    #[test]
    fn exact_soundness_values() {
        assert_eq!(
            agreement_soundness_exact(&fixtures::lc_id2(), 100).unwrap(),
            int(1)
        );
        assert_eq!(
            agreement_soundness_exact(&fixtures::lc_cyc(), 100).unwrap(),
            rat(1, 2)
        );
        let single = LabelCoverInstance::from_tables(
            1,
            1,
            2,
            2,
            vec![Edge {
                a: 0,
                b: 0,
                projection: vec![0, 1],
            }],
        )
        .unwrap();
        assert_eq!(agreement_soundness_exact(&single, 100).unwrap(), int(0));
        assert_eq!(
            list_agreement_soundness_exact(&fixtures::lc_cyc(), 2, 100).unwrap(),
            int(1)
        );
        assert_eq!(
            list_agreement_soundness_exact(&fixtures::lc_cyc(), 1, 100).unwrap(),
            rat(1, 2)
        );
        assert!(matches!(
            agreement_soundness_exact(&fixtures::lc_cyc(), 3),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn full_lists_count_common_images() {
        // With full lists a B-vertex agrees iff two neighbors share an image.
        let lc = fixtures::lc_cyc();
        let full: Vec<BTreeSet<usize>> = vec![set(&[0, 1]); 2];
        let direct = agreeing_fraction(&lc, &full);
        assert_eq!(list_agreement_soundness_exact(&lc, 2, 100).unwrap(), direct);
    }

    #[test]
    fn bound_examples() {
        let b = check_list_soundness_bound(&fixtures::lc_cyc(), 2, 100).unwrap();
        assert_eq!((b.lhs, b.rhs, b.holds), (int(1), int(1), true));
        let b = check_list_soundness_bound(&fixtures::lc_cyc(), 1, 100).unwrap();
        assert_eq!((b.lhs, b.rhs, b.holds), (rat(1, 2), rat(1, 2), true));
        let b = check_list_soundness_bound(&fixtures::lc_id2(), 1, 100).unwrap();
        assert_eq!((b.lhs, b.rhs, b.holds), (int(1), int(1), true));
    }

    #[test]
    fn params_arithmetic() {
        let p = ListConstructionParams::new(int(1), rat(1, 4), 1, 0).unwrap();
        assert_eq!(p.g1, rat(3, 2));
        assert_eq!(p.p_include, int(1));
        let p = ListConstructionParams::new(int(3), rat(1, 4), 4, 0).unwrap();
        assert_eq!(p.g1, rat(9, 2));
        assert!(ListConstructionParams::new(int(1), rat(1, 2), 1, 0).is_err());
        assert!(ListConstructionParams::new(int(1), int(0), 1, 0).is_err());
    }

    #[test]
    fn markov_examples() {
        let id2 = fixtures::lc_id2();
        let ssat = lc_to_ssat(&id2).unwrap();
        let nat = natural_from_labeling(&id2, &ssat, &Labeling::new(vec![0, 0], None)).unwrap();
        let p = ListConstructionParams::new(int(1), rat(1, 4), 1, 0).unwrap();
        assert_eq!(markov_select_psi_prime(&ssat, &nat, &p).unwrap(), vec![0]);

        let cyc = lc_to_ssat(&fixtures::lc_cyc()).unwrap();
        let ones = SuperAssignment::new(vec![vec![1, 1], vec![1, 1]]);
        let p = ListConstructionParams::new(int(2), rat(1, 4), 2, 0).unwrap();
        assert_eq!(p.g1, int(3));
        assert_eq!(
            markov_select_psi_prime(&cyc, &ones, &p).unwrap(),
            vec![0, 1]
        );

        let uneven = SuperAssignment::new(vec![vec![1, 0], vec![3, -2]]);
        let p = ListConstructionParams::new(int(3), rat(1, 4), 2, 0).unwrap();
        assert_eq!(markov_select_psi_prime(&cyc, &uneven, &p).unwrap(), vec![0]);
        let p = ListConstructionParams::new(int(2), rat(1, 4), 2, 0).unwrap();
        assert!(matches!(
            markov_select_psi_prime(&cyc, &uneven, &p),
            Err(Error::NormBoundViolated { .. })
        ));
    }

    #[test]
    fn construction_on_cyc_all_ones() {
        let lc = fixtures::lc_cyc();
        let ssat = lc_to_ssat(&lc).unwrap();
        let ones = SuperAssignment::new(vec![vec![1, 1], vec![1, 1]]);
        let p = ListConstructionParams::new(int(2), rat(1, 4), 2, 5).unwrap();
        let l = list_construction(&ssat, &ones, &p).unwrap();
        assert_eq!(l.lists, vec![set(&[0, 1]), set(&[0, 1])]);
        assert!((0..2).all(|b| !list_totally_disagree(&lc, &l.lists, b)));
    }

    #[test]
    fn construction_on_natural_assignment() {
        let lc = fixtures::lc_id2();
        let ssat = lc_to_ssat(&lc).unwrap();
        let nat = natural_from_labeling(&lc, &ssat, &Labeling::new(vec![0, 0], None)).unwrap();
        let p = ListConstructionParams::new(int(1), rat(1, 4), 1, 0).unwrap();
        let l = list_construction(&ssat, &nat, &p).unwrap();
        assert_eq!(l.lists, vec![set(&[0]), set(&[0])]);
        assert!(!list_totally_disagree(&lc, &l.lists, 0));
        assert_eq!(l.metadata["step2_tests"], 0);
    }

    /// One test over (u, v) with two arrays: y = 0 spans u ∈ {0, 1} × v = 0,
    /// y = 1 spans u = 2 × v ∈ {1, 2}. Weights (1, −1, 1, −1) cancel v in the
    /// first array and u in the second, so every nonzero cell has exactly
    /// one assigned coordinate.
    #[test]
    fn all_single_good_with_certain_inclusion() {
        let lc = LabelCoverInstance::from_tables(
            2,
            1,
            3,
            2,
            vec![
                Edge {
                    a: 0,
                    b: 0,
                    projection: vec![0, 0, 1],
                },
                Edge {
                    a: 1,
                    b: 0,
                    projection: vec![0, 1, 1],
                },
            ],
        )
        .unwrap();
        let ssat = lc_to_ssat(&lc).unwrap();
        assert_eq!(
            ssat.test(0).assignments,
            vec![vec![0, 0], vec![1, 0], vec![2, 1], vec![2, 2]]
        );
        let s = SuperAssignment::new(vec![vec![1, -1, 1, -1]]);
        assert!(is_nontrivial(&ssat, &s));
        let assigned = assigned_values(&ssat, &s);
        assert_eq!(assigned, vec![set(&[0, 1]), set(&[1, 2])]);
        assert_eq!(
            classify_with(&ssat, &s, &assigned, 0).unwrap(),
            TestClassification::AllSingleGood
        );
        let p = ListConstructionParams::new(int(4), rat(1, 4), 1, 0).unwrap();
        assert_eq!(p.p_include, int(1));
        let l = list_construction(&ssat, &s, &p).unwrap();
        // Assignment (0, 0) is chosen; v = 0 is its only unassigned value.
        assert_eq!(l.lists, vec![set(&[0, 1]), set(&[0, 1, 2])]);
        assert!(!list_totally_disagree(&lc, &l.lists, 0));
        assert_eq!(l.metadata["step2_tests"], 1);
    }

    #[test]
    fn seed_determinism() {
        let lc = fixtures::lc_cyc();
        let ssat = lc_to_ssat(&lc).unwrap();
        let ones = SuperAssignment::new(vec![vec![1, 1], vec![1, 1]]);
        let p = ListConstructionParams::new(int(2), rat(1, 4), 2, 99).unwrap();
        assert_eq!(
            list_construction(&ssat, &ones, &p).unwrap(),
            list_construction(&ssat, &ones, &p).unwrap()
        );
    }

    #[test]
    fn construction_preconditions() {
        let lc = fixtures::lc_cyc();
        let ssat = lc_to_ssat(&lc).unwrap();
        let p = ListConstructionParams::new(int(2), rat(1, 4), 2, 0).unwrap();
        let bad = SuperAssignment::new(vec![vec![1, 0], vec![0, 0]]);
        assert!(matches!(
            list_construction(&ssat, &bad, &p),
            Err(Error::PreconditionFailed(_))
        ));
        let zero = SuperAssignment::zero(&ssat);
        assert!(matches!(
            list_construction(&ssat, &zero, &p),
            Err(Error::PreconditionFailed(_))
        ));
        let ones = SuperAssignment::new(vec![vec![1, 1], vec![1, 1]]);
        assert!(matches!(
            list_construction_linf(&ssat, &ones, 0, 0),
            Err(Error::PreconditionFailed(_))
        ));
        assert!(matches!(
            list_construction_linf(&ssat, &ones, 1, 0),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn linf_without_unassigned_variables_matches_step_two() {
        let lc = fixtures::lc_cyc();
        let ssat = lc_to_ssat(&lc).unwrap();
        let ones = SuperAssignment::new(vec![vec![1, 1], vec![1, 1]]);
        let l = list_construction_linf(&ssat, &ones, 2, 3).unwrap();
        assert!(l.marked.is_empty());
        let p = ListConstructionParams::new(int(2), rat(1, 4), 2, 3).unwrap();
        assert_eq!(l.lists, list_construction(&ssat, &ones, &p).unwrap().lists);
    }

    /// ψ1 over (u, v) carries weight with v's projection cancelling; ψ2 sees
    /// only v and is all zero. Step 3 has to give v a value through ψ2.
    #[test]
    fn linf_marks_tests_for_unassigned_variables() {
        let lc = LabelCoverInstance::from_tables(
            2,
            2,
            2,
            2,
            vec![
                Edge {
                    a: 0,
                    b: 0,
                    projection: vec![0, 0],
                },
                Edge {
                    a: 1,
                    b: 0,
                    projection: vec![0, 1],
                },
                Edge {
                    a: 1,
                    b: 1,
                    projection: vec![0, 1],
                },
            ],
        )
        .unwrap();
        let ssat = lc_to_ssat(&lc).unwrap();
        // R(ψ1) = [(0,0),(1,0)], R(ψ2) = [(0),(1)].
        assert_eq!(ssat.test(0).assignments, vec![vec![0, 0], vec![1, 0]]);
        let s = SuperAssignment::new(vec![vec![1, -1], vec![0, 0]]);
        assert!(is_consistent(&ssat, &s).consistent);
        assert!(!is_nontrivial(&ssat, &s));
        let l = list_construction_linf(&ssat, &s, 2, 0).unwrap();
        assert_eq!(l.psi_prime, vec![0]);
        assert_eq!(l.marked, vec![1]);
        assert!(l.lists[1].contains(&0));
        assert_eq!(l.lists[0], set(&[0, 1]));
        assert_eq!(l.metadata["g_times_d_a"], 4);
    }

    #[test]
    fn defeat_examples() {
        let cyc = fixtures::lc_cyc();
        let full = vec![set(&[0, 1]), set(&[0, 1])];
        let r = verify_defeats_list_soundness(&cyc, &full, &rat(1, 2));
        assert_eq!((r.non_disagree_fraction, r.defeats), (int(1), true));
        let r = verify_defeats_list_soundness(&cyc, &[set(&[0]), set(&[0])], &rat(3, 4));
        assert_eq!((r.non_disagree_fraction, r.defeats), (rat(1, 2), false));
        let lonely = LabelCoverInstance::from_tables(
            2,
            2,
            2,
            2,
            vec![
                Edge {
                    a: 0,
                    b: 0,
                    projection: vec![0, 1],
                },
                Edge {
                    a: 1,
                    b: 1,
                    projection: vec![0, 1],
                },
            ],
        )
        .unwrap();
        let r = verify_defeats_list_soundness(&lonely, &full, &rat(1, 4));
        assert_eq!(r.non_disagree_fraction, int(0));
    }
}
