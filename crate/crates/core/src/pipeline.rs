//! End-to-end runs of the reduction chain: push a Label Cover instance
//! through every stage, embed its natural solution, and compare the
//! predicted completeness values with the oracle minima.

use crate::error::{Error, Result};
use crate::instances::{l1_norm, LabelCoverInstance, Labeling, SsatInstance};
use crate::io::{canonical_string, GapParams, PipelineManifest};
use crate::numeric::{format_rational, int, rat, Rational};
use crate::oracles::{
    count_lhp_violations, default_lhp_grid, solve_lc_max, solve_lhp_min, solve_ncp_min,
    solve_sis_min, solve_ssat_min_norm, Mode, Optimum, SearchBudget, DEFAULT_MAX_STATES,
};
use crate::reductions::{
    lc_to_ssat, lhp_assignment_from_sis_solution, sis_solution_from_superassignment, sis_to_lhp,
    sis_to_ncp, ssat_to_sis,
};
use crate::soundness::{list_construction, verify_defeats_list_soundness, ListConstructionParams};
use crate::superassign::{is_consistent, is_nontrivial, natural_from_labeling, norm_l1, norm_linf};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub const STAGES: [&str; 5] = ["lc", "ssat", "sis", "ncp", "lhp"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainParams {
    pub g: u64,
    pub s_list: Rational,
    pub u_param: Option<u64>,
    pub d_rep: Option<u64>,
    pub q: Option<u64>,
    /// Coefficient box for the oracles.
    pub k: i64,
    pub max_states: u64,
    pub run_oracles: bool,
    /// Seed for the List-Construction run on the SSAT oracle witness.
    pub seed: u64,
}

impl Default for ChainParams {
    fn default() -> Self {
        Self {
            g: 1,
            s_list: rat(1, 4),
            u_param: None,
            d_rep: None,
            q: None,
            k: 1,
            max_states: DEFAULT_MAX_STATES,
            run_oracles: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletenessCheck {
    pub stage: String,
    pub quantity: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

/// Oracle outcome for one stage; `skipped` carries the reason when the
/// search was refused.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub stage: String,
    pub mode: String,
    pub optimum: Option<Optimum>,
    pub states_visited: u64,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapRow {
    pub stage: String,
    pub completeness_value: Option<Optimum>,
    pub oracle_minimum: Option<Optimum>,
    pub ratio: Option<Optimum>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub chains: bool,
    pub gap_params: GapParams,
    pub rows: Vec<GapRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListSummary {
    pub max_list_size: usize,
    pub psi_prime: Vec<usize>,
    #[serde(with = "crate::numeric::rational_str")]
    pub non_disagree_fraction: Rational,
    pub defeats: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub sizes: BTreeMap<String, Value>,
    pub completeness: Status,
    pub checks: Vec<CompletenessCheck>,
    pub oracles: Vec<OracleSummary>,
    pub lists: Option<ListSummary>,
    pub gap: GapReport,
    pub manifest: PipelineManifest,
}

impl ChainReport {
    pub fn to_json(&self) -> String {
        canonical_string(&serde_json::to_value(self).expect("report serializes"))
    }
}

/// Values a satisfying labeling must produce at each stage: LC value 1,
/// SSAT norm 1, and `|Ψ|` for the SIS norm, NCP distance and LHP
/// violation count.
pub fn predicted_completeness(ssat: &SsatInstance) -> BTreeMap<&'static str, Rational> {
    let n = int(ssat.num_tests() as i64);
    BTreeMap::from([
        ("lc", int(1)),
        ("ssat", int(1)),
        ("sis", n.clone()),
        ("ncp", n.clone()),
        ("lhp", n),
    ])
}

/// One row per stage. Minimization stages report `oracle / predicted`;
/// the LC stage reports the optimum itself, since its predicted value is 1.
pub fn report_gap(
    manifest: &PipelineManifest,
    predicted: &BTreeMap<&'static str, Rational>,
    oracles: &[OracleSummary],
) -> GapReport {
    let rows = STAGES
        .iter()
        .map(|&stage| {
            let completeness_value = predicted.get(stage).cloned().map(Optimum::Value);
            let oracle_minimum = oracles
                .iter()
                .find(|o| o.stage == stage)
                .and_then(|o| o.optimum.clone());
            let ratio = match (&completeness_value, &oracle_minimum) {
                (Some(Optimum::Value(c)), Some(Optimum::Value(o))) if *c != int(0) => {
                    Some(Optimum::Value(o / c))
                }
                (Some(_), Some(Optimum::Infinite)) => Some(Optimum::Infinite),
                _ => None,
            };
            GapRow {
                stage: stage.into(),
                completeness_value,
                oracle_minimum,
                ratio,
            }
        })
        .collect();
    GapReport {
        chains: manifest.chains(),
        gap_params: manifest.gap_params.clone(),
        rows,
    }
}

fn check(
    stage: &str,
    quantity: &str,
    expected: impl ToString,
    observed: impl ToString,
) -> CompletenessCheck {
    let (expected, observed) = (expected.to_string(), observed.to_string());
    CompletenessCheck {
        stage: stage.into(),
        quantity: quantity.into(),
        pass: expected == observed,
        expected,
        observed,
    }
}

fn summarize<W>(stage: &str, r: Result<crate::oracles::OracleResult<W>>) -> Result<OracleSummary> {
    match r {
        Ok(r) => Ok(OracleSummary {
            stage: stage.into(),
            mode: r.mode,
            optimum: Some(r.optimum),
            states_visited: r.states_visited,
            skipped: None,
        }),
        Err(e @ Error::SearchSpaceTooLarge { .. }) => Ok(OracleSummary {
            stage: stage.into(),
            mode: String::new(),
            optimum: None,
            states_visited: 0,
            skipped: Some(e.to_string()),
        }),
        Err(e) => Err(e),
    }
}

/// Runs the whole chain on `lc`. The natural solution comes from
/// `labeling` when given, otherwise from an optimal LC labeling when the
/// instance is satisfiable; without one the completeness checks are
/// reported as not applicable.
pub fn check_chain(
    lc: &LabelCoverInstance,
    labeling: Option<&Labeling>,
    params: &ChainParams,
) -> Result<ChainReport> {
    let ssat = lc_to_ssat(lc)?;
    let sis = ssat_to_sis(&ssat);
    let ncp = sis_to_ncp(&sis, params.g, params.d_rep, params.q)?;
    let lhp = sis_to_lhp(&sis, params.g, params.u_param)?;

    let mut manifest = PipelineManifest::new(GapParams {
        g: params.g,
        s_list: format_rational(&params.s_list),
        u: lhp.u_param(),
        d: ncp.replication() as u64,
        q: ncp.modulus(),
        k: params.k,
    });
    manifest.record("lc2ssat", lc, &ssat, BTreeMap::new());
    manifest.record("ssat2sis", &ssat, &sis, BTreeMap::new());
    manifest.record(
        "sis2ncp",
        &sis,
        &ncp,
        BTreeMap::from([
            ("D".to_string(), json!(ncp.replication())),
            ("g".to_string(), json!(params.g)),
            ("q".to_string(), json!(ncp.modulus())),
        ]),
    );
    manifest.record(
        "sis2lhp",
        &sis,
        &lhp,
        BTreeMap::from([
            ("U".to_string(), json!(lhp.u_param())),
            ("g".to_string(), json!(params.g)),
        ]),
    );

    let lc_oracle = solve_lc_max(lc, params.max_states);
    let satisfying = match labeling {
        Some(l) => Some(l.clone()),
        None => match &lc_oracle {
            Ok(r) if r.optimum == Optimum::int(1) => r.witness.clone(),
            _ => None,
        },
    };

    let mut checks = Vec::new();
    if let Some(lab) = &satisfying {
        let s = natural_from_labeling(lc, &ssat, lab)?;
        let n = ssat.num_tests();
        checks.push(check(
            "ssat",
            "consistent",
            true,
            is_consistent(&ssat, &s).consistent,
        ));
        checks.push(check("ssat", "non_trivial", true, is_nontrivial(&ssat, &s)));
        checks.push(check(
            "ssat",
            "norm_l1",
            format_rational(&int(1)),
            format_rational(&norm_l1(&s)),
        ));
        checks.push(check("ssat", "norm_linf", 1, norm_linf(&s)));
        let z = sis_solution_from_superassignment(&s);
        checks.push(check("sis", "solves", true, sis.is_solution(&z)?));
        checks.push(check("sis", "l1_norm", n, l1_norm(&z)));
        checks.push(check("ncp", "distance", n, ncp.distance(&z)?));
        let a = lhp_assignment_from_sis_solution(&z);
        checks.push(check(
            "lhp",
            "violations",
            n,
            count_lhp_violations(&lhp, &a),
        ));
    }
    let completeness = if satisfying.is_none() {
        Status::NotApplicable
    } else if checks.iter().all(|c| c.pass) {
        Status::Pass
    } else {
        Status::Fail
    };

    let mut oracles = Vec::new();
    let mut lists = None;
    if params.run_oracles {
        oracles.push(summarize("lc", lc_oracle)?);
        let budget = SearchBudget {
            coeff_box: params.k,
            max_states: params.max_states,
            mode: Mode::L1,
        };
        let ssat_min = solve_ssat_min_norm(&ssat, &budget);
        if let Ok(r) = &ssat_min {
            if let Some(w) = r
                .witness
                .as_ref()
                .filter(|w| norm_l1(w) <= int(params.g as i64))
            {
                let p = ListConstructionParams::new(
                    int(params.g as i64),
                    params.s_list.clone(),
                    ssat.max_variable_degree(),
                    params.seed,
                )?;
                let l = list_construction(&ssat, w, &p)?;
                let d = verify_defeats_list_soundness(lc, &l.lists, &params.s_list);
                lists = Some(ListSummary {
                    max_list_size: l.max_list_size,
                    psi_prime: l.psi_prime,
                    non_disagree_fraction: d.non_disagree_fraction,
                    defeats: d.defeats,
                });
            }
        }
        oracles.push(summarize("ssat", ssat_min)?);
        oracles.push(summarize("sis", solve_sis_min(&sis, &budget))?);
        oracles.push(summarize("ncp", solve_ncp_min(&ncp, &budget, false))?);
        let lhp_min = default_lhp_grid(lhp.num_x(), params.max_states)
            .and_then(|grid| solve_lhp_min(&lhp, &grid));
        oracles.push(summarize("lhp", lhp_min)?);
    }

    let gap = report_gap(&manifest, &predicted_completeness(&ssat), &oracles);
    let sizes = BTreeMap::from([
        ("lc_edges".to_string(), json!(lc.edges().len())),
        ("ssat_tests".to_string(), json!(ssat.num_tests())),
        (
            "ssat_assignments".to_string(),
            json!(ssat.total_assignments()),
        ),
        ("sis_shape".to_string(), json!([sis.rows(), sis.cols()])),
        ("ncp_shape".to_string(), json!([ncp.rows(), ncp.cols()])),
        ("lhp_inequalities".to_string(), json!(lhp.len())),
    ]);
    Ok(ChainReport {
        sizes,
        completeness,
        checks,
        oracles,
        lists,
        gap,
        manifest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn row<'a>(r: &'a ChainReport, stage: &str) -> &'a GapRow {
        r.gap.rows.iter().find(|g| g.stage == stage).unwrap()
    }

    #[test]
    fn id2_chain_passes_with_unit_ratios() {
        let r = check_chain(&fixtures::lc_id2(), None, &ChainParams::default()).unwrap();
        assert_eq!(r.completeness, Status::Pass, "{:?}", r.checks);
        assert!(r.gap.chains);
        for stage in STAGES {
            assert_eq!(row(&r, stage).ratio, Some(Optimum::int(1)), "{stage}");
        }
    }

    #[test]
    fn cyc_chain_reports_the_gap() {
        let params = ChainParams {
            g: 2,
            k: 2,
            ..ChainParams::default()
        };
        let r = check_chain(&fixtures::lc_cyc(), None, &params).unwrap();
        assert_eq!(r.completeness, Status::NotApplicable);
        assert!(r.checks.is_empty());
        assert_eq!(row(&r, "lc").ratio, Some(Optimum::Value(rat(3, 4))));
        assert_eq!(row(&r, "ssat").ratio, Some(Optimum::int(2)));
        // No integral SIS solution exists for this instance.
        assert_eq!(row(&r, "sis").ratio, Some(Optimum::Infinite));
    }

    #[test]
    fn share_ncp_row() {
        let r = check_chain(&fixtures::lc_share(), None, &ChainParams::default()).unwrap();
        let ncp = row(&r, "ncp");
        assert_eq!(ncp.completeness_value, Some(Optimum::int(2)));
        assert_eq!(ncp.oracle_minimum, Some(Optimum::int(2)));
        assert_eq!(ncp.ratio, Some(Optimum::int(1)));
    }

    #[test]
    fn oversized_searches_are_skipped() {
        let params = ChainParams {
            max_states: 10,
            ..ChainParams::default()
        };
        let r = check_chain(&fixtures::lc_cyc(), None, &params).unwrap();
        assert!(r.oracles.iter().any(|o| o.skipped.is_some()));
    }

    #[test]
    fn reports_are_reproducible() {
        let p = ChainParams::default();
        let a = check_chain(&fixtures::lc_k22(), None, &p)
            .unwrap()
            .to_json();
        let b = check_chain(&fixtures::lc_k22(), None, &p)
            .unwrap()
            .to_json();
        assert_eq!(a, b);
    }
}
