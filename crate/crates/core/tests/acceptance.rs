//! Acceptance criteria 1–9. Each test writes one `criterion N: PASS|FAIL`
//! line straight to stderr (bypassing output capture) before asserting.

use gapforge::fixtures;
use gapforge::genlab::{gen_label_cover, GenSpec};
use gapforge::instances::{l1_norm, LabelCoverInstance, SsatInstance};
use gapforge::numeric::{int, rat, Rational};
use gapforge::oracles::{
    count_lhp_violations, default_lhp_grid, enumerate_consistent, solve_lc_max, solve_lhp_min,
    solve_ncp_min, solve_sis_min, solve_ssat_min_norm, Mode, Optimum, SearchBudget,
    DEFAULT_MAX_STATES,
};
use gapforge::pipeline::{check_chain, ChainParams, Status};
use gapforge::reductions::{
    lc_to_ssat, lhp_assignment_from_sis_solution, sis_solution_from_lhp_assignment, sis_to_lhp,
    sis_to_ncp, ssat_to_sis, superassignment_from_sis_solution,
};
use gapforge::soundness::{
    agreement_soundness_exact, check_list_soundness_bound, list_construction,
    list_totally_disagree, verify_defeats_list_soundness, ListConstructionParams,
};
use gapforge::superassign::{
    check_claim1, classify_test, is_consistent, is_nontrivial, norm_l1, zero_all_bad_arrays,
};
use gapforge::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::time::{Duration, Instant};

const MAX: u64 = DEFAULT_MAX_STATES;

/// Collects sub-checks of one criterion and prints the verdict line.
struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    start: Instant,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(id: u32, name: &'static str, limit_secs: u64) -> Self {
        Self {
            id,
            name,
            limit: Duration::from_secs(limit_secs),
            start: Instant::now(),
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        let what = what.into();
        let line = format!("  [{}] {what}", if ok { "ok" } else { "FAIL" });
        let _ = writeln!(std::io::stderr(), "{line}");
        if !ok {
            self.failures.push(what);
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }

    fn finish(self) {
        let elapsed = self.start.elapsed();
        let in_time = elapsed <= self.limit;
        let pass = self.failures.is_empty() && in_time;
        let _ = writeln!(
            std::io::stderr(),
            "criterion {}: {} — {} ({:.3} s, limit {} s, tolerance exact){}",
            self.id,
            if pass { "PASS" } else { "FAIL" },
            self.name,
            elapsed.as_secs_f64(),
            self.limit.as_secs(),
            if self.notes.is_empty() {
                String::new()
            } else {
                format!("; {}", self.notes.join("; "))
            }
        );
        assert!(
            in_time,
            "criterion {} exceeded {:?}: {:?}",
            self.id, self.limit, elapsed
        );
        assert!(
            self.failures.is_empty(),
            "criterion {} failed: {:?}",
            self.id,
            self.failures
        );
    }
}

fn show(o: &Optimum) -> String {
    o.to_string()
}

/// Seeded small planted specs: |A| ≤ 6, |B| ≤ 4, D_B ∈ {2, 3}, |Σ_A| ≤ 3.
fn planted_specs(count: usize, seed: u64) -> Vec<GenSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let spec = GenSpec {
            num_a: rng.gen_range(2..=6),
            num_b: rng.gen_range(1..=4),
            d_b: rng.gen_range(2..=3),
            sigma_a_size: rng.gen_range(1..=3),
            sigma_b_size: rng.gen_range(1..=3),
            arity_p: rng.gen_range(1..=3),
            planted: true,
            seed: rng.gen(),
        };
        if spec.check().is_ok() {
            out.push(spec);
        }
    }
    out
}

#[test]
fn criterion_1_completeness_chain() {
    let mut c = Criterion::new(1, "completeness chain on 50 planted instances", 5);
    let specs = planted_specs(50, 1);
    let params = ChainParams {
        run_oracles: false,
        ..ChainParams::default()
    };
    let mut passed = 0;
    for (i, spec) in specs.iter().enumerate() {
        let g = gen_label_cover(spec).unwrap();
        let report = check_chain(&g.instance, g.planted.as_ref(), &params).unwrap();
        if report.completeness == Status::Pass {
            passed += 1;
        } else {
            let bad: Vec<_> = report.checks.iter().filter(|k| !k.pass).collect();
            c.check(format!("instance {i} ({spec:?}): {bad:?}"), false);
        }
    }
    c.check(format!("{passed}/50 planted chains give SSAT norm 1, SIS ‖z‖₁ = |Ψ| with B′z = t′, NCP distance |Ψ|, LHP violations |Ψ|"), passed == 50);
    c.finish();
}

#[test]
fn criterion_2_sis_extraction() {
    let mut c = Criterion::new(
        2,
        "SIS soundness extraction on SIS(SSAT-SHARE) over [−2,2]⁴",
        1,
    );
    let ssat = fixtures::ssat_share();
    let sis = ssat_to_sis(&ssat);
    let n = ssat.num_tests() as i64;
    let mut mismatches = 0;
    let mut solutions = 0;
    for code in 0..5i64.pow(4) {
        let z: Vec<i64> = (0..4).map(|k| (code / 5i64.pow(3 - k)) % 5 - 2).collect();
        let s = superassignment_from_sis_solution(&ssat, &z).unwrap();
        let solves = sis.is_solution(&z).unwrap();
        let unit = s.weights.iter().all(|w| w.iter().sum::<i64>() == 1);
        let extracted_ok = is_consistent(&ssat, &s).consistent && unit;
        if solves != extracted_ok || norm_l1(&s) != rat(l1_norm(&z), n) {
            mismatches += 1;
        }
        solutions += solves as usize;
    }
    c.check(format!("B′z = t′ ⇔ consistent with unit test sums, and norm_l1 = ‖z‖₁/|Ψ| ({mismatches} mismatches over 625 points)"), mismatches == 0);
    c.note(format!("{solutions} solutions in the box"));
    c.finish();
}

#[test]
fn criterion_3_oracle_gap_on_cyc() {
    let mut c = Criterion::new(3, "oracle gap on LC-CYC", 10);
    let lc = fixtures::lc_cyc();
    let ssat = lc_to_ssat(&lc).unwrap();
    let sis = ssat_to_sis(&ssat);
    let lc_max = solve_lc_max(&lc, MAX).unwrap().optimum;
    c.check(
        format!("solve_lc_max = {} (want 3/4)", show(&lc_max)),
        lc_max == Optimum::Value(rat(3, 4)),
    );
    let l1 = solve_ssat_min_norm(&ssat, &SearchBudget::new(2, Mode::L1))
        .unwrap()
        .optimum;
    c.check(
        format!("SSAT ℓ1 min, K=2 = {} (want 2)", show(&l1)),
        l1 == Optimum::int(2),
    );
    let linf = solve_ssat_min_norm(&ssat, &SearchBudget::new(2, Mode::Linf))
        .unwrap()
        .optimum;
    c.check(
        format!("SSAT ℓ∞ min, K=2 = {} (want 2)", show(&linf)),
        linf == Optimum::int(2),
    );
    let sis_min = solve_sis_min(&sis, &SearchBudget::new(2, Mode::L1))
        .unwrap()
        .optimum;
    // B′z = t′ forces every coordinate to 1/2 here, so no integral solution
    // exists at any K; the expected value 4 is unattainable.
    c.check(
        format!("SIS min, K=2 = {} (want 4 = |Ψ|·2)", show(&sis_min)),
        sis_min == Optimum::int(4),
    );
    let cross = match (&sis_min, &l1) {
        (Optimum::Value(s), Optimum::Value(v)) => *s >= int(ssat.num_tests() as i64) * v,
        (Optimum::Infinite, _) => true,
        _ => false,
    };
    c.check("SIS min ≥ |Ψ|·SSAT min", cross);
    let s_agr = agreement_soundness_exact(&lc, MAX).unwrap();
    c.check(
        format!("agreement soundness = {s_agr} (want 1/2)"),
        s_agr == rat(1, 2),
    );
    c.finish();
}

fn claims_over(c: &mut Criterion, name: &str, ssat: &SsatInstance) {
    let all = enumerate_consistent(ssat, 2, MAX).unwrap();
    let mut claim1 = 0;
    let mut zeroing = 0;
    let mut impossible = 0;
    for s in &all {
        if !check_claim1(ssat, s).unwrap().is_empty() {
            claim1 += 1;
        }
        let z = zero_all_bad_arrays(ssat, s).unwrap();
        if !is_consistent(ssat, &z).consistent || norm_l1(&z) > norm_l1(s) {
            zeroing += 1;
        }
        for psi in 0..ssat.num_tests() {
            if let Err(Error::ClassificationImpossible { .. }) = classify_test(ssat, s, psi) {
                impossible += 1;
            }
        }
    }
    c.check(
        format!(
            "{name}: {} consistent assignments; claim-1 violations {claim1}",
            all.len()
        ),
        claim1 == 0,
    );
    c.check(
        format!("{name}: zeroing broke consistency or raised the norm {zeroing} times"),
        zeroing == 0,
    );
    c.check(
        format!("{name}: ClassificationImpossible {impossible} times"),
        impossible == 0,
    );
}

#[test]
fn criterion_4_array_claims() {
    let mut c = Criterion::new(4, "array claims over all consistent S in [−2,2]", 30);
    claims_over(&mut c, "SSAT-SHARE", &fixtures::ssat_share());
    claims_over(
        &mut c,
        "SSAT(LC-CYC)",
        &lc_to_ssat(&fixtures::lc_cyc()).unwrap(),
    );
    c.finish();
}

fn enumerable_specs(count: usize, seed: u64) -> Vec<GenSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let spec = GenSpec {
            num_a: rng.gen_range(2..=4),
            num_b: rng.gen_range(1..=3),
            d_b: rng.gen_range(2..=3),
            sigma_a_size: rng.gen_range(2..=3),
            sigma_b_size: rng.gen_range(1..=3),
            arity_p: rng.gen_range(1..=2),
            planted: rng.gen_bool(0.5),
            seed: rng.gen(),
        };
        if spec.check().is_ok() {
            out.push(spec);
        }
    }
    out
}

#[test]
fn criterion_5_list_soundness_bound() {
    let mut c = Criterion::new(5, "list soundness bound for ℓ ∈ {1,2}", 60);
    let mut instances: Vec<(String, LabelCoverInstance)> = vec![
        ("LC-ID2".into(), fixtures::lc_id2()),
        ("LC-CYC".into(), fixtures::lc_cyc()),
    ];
    for (i, spec) in enumerable_specs(20, 5).iter().enumerate() {
        instances.push((format!("gen#{i}"), gen_label_cover(spec).unwrap().instance));
    }
    let mut violations = Vec::new();
    for (name, lc) in &instances {
        for l in [1, 2] {
            let b = check_list_soundness_bound(lc, l, MAX).unwrap();
            if !b.holds {
                violations.push(format!("{name} ℓ={l}: {} > {}", b.lhs, b.rhs));
            }
        }
    }
    c.check(
        format!(
            "s_list(ℓ) ≤ min(1, ℓ²·s_agr) on {} instances; violations {:?}",
            instances.len(),
            violations
        ),
        violations.is_empty(),
    );
    c.finish();
}

fn lists_defeat(
    c: &mut Criterion,
    name: &str,
    lc: &LabelCoverInstance,
    ssat: &SsatInstance,
    g: i64,
) {
    let s_list = rat(1, 4);
    let candidates: Vec<_> = enumerate_consistent(ssat, 2, MAX)
        .unwrap()
        .into_iter()
        .filter(|s| is_nontrivial(ssat, s) && norm_l1(s) <= int(g))
        .collect();
    let prov = ssat.provenance().unwrap();
    let mut failures = 0;
    let mut worst = Rational::from_integer(1.into());
    for s in &candidates {
        let p = ListConstructionParams::new(int(g), s_list.clone(), ssat.max_variable_degree(), 0)
            .unwrap()
            .derandomized();
        let l = list_construction(ssat, s, &p).unwrap();
        let all_agree = l
            .psi_prime
            .iter()
            .all(|&psi| !list_totally_disagree(lc, &l.lists, prov.test_b[psi]));
        let d = verify_defeats_list_soundness(lc, &l.lists, &s_list);
        if d.non_disagree_fraction < worst {
            worst = d.non_disagree_fraction.clone();
        }
        if !(all_agree && d.defeats) {
            failures += 1;
        }
    }
    c.check(
        format!(
            "{name} (g={g}): {} candidates, {failures} without agreeing neighbours on every Ψ′ test or fraction < 1/4 (worst fraction {worst})",
            candidates.len()
        ),
        failures == 0 && !candidates.is_empty(),
    );
}

fn expected_list_size(c: &mut Criterion, name: &str, ssat: &SsatInstance, g: i64) {
    let witness = solve_ssat_min_norm(ssat, &SearchBudget::new(2, Mode::L1))
        .unwrap()
        .witness
        .unwrap();
    let sizes: Vec<f64> = (0..200u64)
        .map(|seed| {
            let p =
                ListConstructionParams::new(int(g), rat(1, 4), ssat.max_variable_degree(), seed)
                    .unwrap();
            list_construction(ssat, &witness, &p).unwrap().max_list_size as f64
        })
        .collect();
    let n = sizes.len() as f64;
    let mean = sizes.iter().sum::<f64>() / n;
    let var = sizes.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let se = (var / n).sqrt();
    let p = ListConstructionParams::new(int(g), rat(1, 4), ssat.max_variable_degree(), 0).unwrap();
    let g1 = p.g1.numer().to_string().parse::<f64>().unwrap()
        / p.g1.denom().to_string().parse::<f64>().unwrap();
    c.check(
        format!(
            "{name}: mean max list size {mean:.3} ≤ 2g₁ + 3SE = {:.3} (p = {})",
            2.0 * g1 + 3.0 * se,
            p.p_include
        ),
        mean <= 2.0 * g1 + 3.0 * se,
    );
}

#[test]
fn criterion_6_list_construction() {
    let mut c = Criterion::new(6, "List-Construction defeats list soundness", 5);
    let cyc = fixtures::lc_cyc();
    let cyc_ssat = lc_to_ssat(&cyc).unwrap();
    let share = fixtures::lc_share();
    let share_ssat = fixtures::ssat_share();
    lists_defeat(&mut c, "SSAT(LC-CYC)", &cyc, &cyc_ssat, 2);
    // Every B-vertex of LC-SHARE has a single neighbour, so no list can put
    // it outside total disagreement; the fraction is 0 < 1/4.
    lists_defeat(&mut c, "SSAT-SHARE", &share, &share_ssat, 1);
    expected_list_size(&mut c, "SSAT(LC-CYC)", &cyc_ssat, 2);
    expected_list_size(&mut c, "SSAT-SHARE", &share_ssat, 1);
    c.finish();
}

#[test]
fn criterion_7_ncp_decomposition() {
    let mut c = Criterion::new(
        7,
        "NCP distance decomposition on NCP(SIS(SSAT-SHARE)), D=3, q=5",
        2,
    );
    let ssat = fixtures::ssat_share();
    let sis = ssat_to_sis(&ssat);
    let ncp = sis_to_ncp(&sis, 1, Some(3), Some(5)).unwrap();
    let mut bad = 0;
    for code in 0..5i64.pow(4) {
        let z: Vec<i64> = (0..4).map(|k| (code / 5i64.pow(3 - k)) % 5 - 2).collect();
        let bz = sis.multiply(&z).unwrap();
        let wrong_rows = bz
            .iter()
            .zip(sis.target())
            .filter(|(a, b)| (*a - *b).rem_euclid(5) != 0)
            .count();
        let weight = z.iter().filter(|v| v.rem_euclid(5) != 0).count();
        if ncp.distance(&z).unwrap() != 3 * wrong_rows + weight {
            bad += 1;
        }
    }
    c.check(
        format!("‖Az − t‖ = D·‖B′z − t′‖ + ‖z‖ on all 625 points ({bad} mismatches)"),
        bad == 0,
    );
    let full = solve_ncp_min(&ncp, &SearchBudget::default(), true).unwrap();
    c.check(
        format!("full-field oracle over F₅⁴ = {} (want 2)", full.optimum),
        full.optimum == Optimum::int(2),
    );
    c.finish();
}

#[test]
fn criterion_8_lhp_round_trip() {
    let mut c = Criterion::new(8, "LHP round trip on SSAT-SHARE", 2);
    let ssat = fixtures::ssat_share();
    let sis = ssat_to_sis(&ssat);
    let lhp = sis_to_lhp(&sis, 1, None).unwrap();
    let mut unit = 0;
    let mut unit_bad = 0;
    let mut wide = 0;
    let mut wide_bad = 0;
    for code in 0..5i64.pow(4) {
        let z: Vec<i64> = (0..4).map(|k| (code / 5i64.pow(3 - k)) % 5 - 2).collect();
        if !sis.is_solution(&z).unwrap() {
            continue;
        }
        let back = sis_solution_from_lhp_assignment(&lhp, &lhp_assignment_from_sis_solution(&z));
        if z.iter().all(|v| v.abs() <= 1) {
            unit += 1;
            if back.as_ref() != Ok(&z) {
                unit_bad += 1;
            }
        } else {
            // |x_i| < 2y admits only {−1, 0, 1} once y = 1.
            wide += 1;
            if !matches!(back, Err(Error::Infeasible { ref group, .. }) if group == "G3") {
                wide_bad += 1;
            }
        }
    }
    c.check(
        format!("embed∘extract is the identity on all {unit} solutions in {{−1,0,1}}⁴"),
        unit > 0 && unit_bad == 0,
    );
    c.check(
        format!("{wide} solutions with an entry ±2 are rejected by G3 ({wide_bad} otherwise)"),
        wide_bad == 0,
    );
    let opt = solve_sis_min(&sis, &SearchBudget::new(1, Mode::L1)).unwrap();
    let z = opt.witness.unwrap();
    let v = count_lhp_violations(&lhp, &lhp_assignment_from_sis_solution(&z));
    c.check(
        format!("embedded SIS optimum violates {v} inequalities (want d = 2)"),
        v == 2,
    );
    let grid = default_lhp_grid(lhp.num_x(), MAX).unwrap();
    let best = solve_lhp_min(&lhp, &grid).unwrap().optimum;
    c.check(
        format!("grid oracle over {{−1,0,1}}⁴ = {best} (want 2)"),
        best == Optimum::int(2),
    );
    c.finish();
}

#[test]
fn criterion_9_determinism_and_serialization() {
    let mut c = Criterion::new(9, "determinism and read∘write identity", 2);
    let spec = GenSpec {
        num_a: 4,
        num_b: 2,
        d_b: 2,
        sigma_a_size: 2,
        sigma_b_size: 2,
        arity_p: 1,
        planted: true,
        seed: 9,
    };
    let params = ChainParams {
        seed: 9,
        ..ChainParams::default()
    };
    let run = || {
        let g = gen_label_cover(&spec).unwrap();
        check_chain(&g.instance, g.planted.as_ref(), &params)
            .unwrap()
            .to_json()
    };
    c.check(
        "two check-chain runs on the same seed are byte-identical",
        run() == run(),
    );
    for (name, text) in fixtures::all() {
        let again = match gapforge::io::peek_kind(text).unwrap().as_str() {
            "label_cover" => gapforge::io::to_canonical_string(
                &gapforge::io::from_json_str::<LabelCoverInstance>(text).unwrap(),
            ),
            "ssat" => gapforge::io::to_canonical_string(
                &gapforge::io::from_json_str::<SsatInstance>(text).unwrap(),
            ),
            other => format!("unexpected kind {other}"),
        };
        c.check(format!("{name} round-trips byte-exactly"), again == text);
    }
    c.finish();
}
