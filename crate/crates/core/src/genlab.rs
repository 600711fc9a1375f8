//! Seeded Label Cover generators: planted YES instances and frustrated
//! variants of them.

use crate::error::{Error, Result};
use crate::instances::{Edge, LabelCoverInstance, Labeling, ValidationReport};
use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub num_a: usize,
    pub num_b: usize,
    pub d_b: usize,
    pub sigma_a_size: usize,
    pub sigma_b_size: usize,
    pub arity_p: usize,
    pub planted: bool,
    pub seed: u64,
}

impl GenSpec {
    pub fn check(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InfeasibleSpec(m));
        if self.num_a == 0 || self.num_b == 0 || self.d_b == 0 {
            return fail("vertex counts and d_b must be positive".into());
        }
        if self.d_b > self.num_a {
            return fail(format!("d_b = {} exceeds num_a = {}", self.d_b, self.num_a));
        }
        if self.num_b * self.d_b < self.num_a {
            return fail(format!(
                "{} B-vertices of degree {} cannot cover {} A-vertices",
                self.num_b, self.d_b, self.num_a
            ));
        }
        if self.arity_p == 0 || self.sigma_b_size == 0 {
            return fail("arity and |Σ_B| must be positive".into());
        }
        if self.sigma_a_size < self.arity_p {
            return fail(format!(
                "|Σ_A| = {} is below the arity {}",
                self.sigma_a_size, self.arity_p
            ));
        }
        if self.sigma_a_size > self.arity_p * self.sigma_b_size {
            return fail(format!(
                "no {}-to-1 map from {} labels onto {} labels",
                self.arity_p, self.sigma_a_size, self.sigma_b_size
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenMetadata {
    pub planted: bool,
    pub seed: u64,
    pub validation: ValidationReport,
    /// Exact LC optimum as `"p/q"`, when it was computed.
    pub oracle_value: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedLc {
    pub instance: LabelCoverInstance,
    pub planted: Option<Labeling>,
    pub metadata: GenMetadata,
}

/// A random table in which every B-label has at most `p` preimages,
/// optionally forced to send `fixed.0` to `fixed.1`.
fn random_table(
    rng: &mut ChaCha8Rng,
    sigma_a: usize,
    sigma_b: usize,
    p: usize,
    fixed: Option<(usize, usize)>,
) -> Vec<usize> {
    let mut room = vec![p; sigma_b];
    let mut table = vec![usize::MAX; sigma_a];
    if let Some((x, y)) = fixed {
        table[x] = y;
        room[y] -= 1;
    }
    let mut order: Vec<usize> = (0..sigma_a).filter(|&x| table[x] == usize::MAX).collect();
    order.shuffle(rng);
    for x in order {
        let open: Vec<usize> = (0..sigma_b).filter(|&y| room[y] > 0).collect();
        let y = open[rng.gen_range(0..open.len())];
        table[x] = y;
        room[y] -= 1;
    }
    table
}

pub fn gen_label_cover(spec: &GenSpec) -> Result<GeneratedLc> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let planted = spec.planted.then(|| {
        let phi_a = (0..spec.num_a)
            .map(|_| rng.gen_range(0..spec.sigma_a_size))
            .collect();
        let phi_b = (0..spec.num_b)
            .map(|_| rng.gen_range(0..spec.sigma_b_size))
            .collect();
        Labeling::new(phi_a, Some(phi_b))
    });

    let mut perm: Vec<usize> = (0..spec.num_a).collect();
    perm.shuffle(&mut rng);
    let mut edges = Vec::with_capacity(spec.num_b * spec.d_b);
    for b in 0..spec.num_b {
        let mut nbrs: Vec<usize> = (0..spec.d_b)
            .map(|k| perm[(b * spec.d_b + k) % spec.num_a])
            .collect();
        nbrs.sort_unstable();
        for a in nbrs {
            let fixed = planted.as_ref().map(|lab| {
                (
                    lab.phi_a[a],
                    lab.phi_b.as_ref().expect("planted B labels")[b],
                )
            });
            let projection = random_table(
                &mut rng,
                spec.sigma_a_size,
                spec.sigma_b_size,
                spec.arity_p,
                fixed,
            );
            edges.push(Edge { a, b, projection });
        }
    }
    let instance = LabelCoverInstance::from_tables(
        spec.num_a,
        spec.num_b,
        spec.sigma_a_size,
        spec.sigma_b_size,
        edges,
    )?;
    let metadata = GenMetadata {
        planted: spec.planted,
        seed: spec.seed,
        validation: instance.validate(),
        oracle_value: None,
    };
    Ok(GeneratedLc {
        instance,
        planted,
        metadata,
    })
}

/// Seed for which one flip of [`crate::fixtures::lc_k22`] twists edge
/// (a1, b1) and so reproduces LC-CYC.
pub const CYC_FLIP_SEED: u64 = 14;

/// Indices of the edges `frustrate` twists, ascending.
pub fn flipped_edges(num_edges: usize, num_flips: usize, seed: u64) -> Result<Vec<usize>> {
    if num_flips > num_edges {
        return Err(Error::BadParameters(format!(
            "{num_flips} flips requested on {num_edges} edges"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, num_edges, num_flips).into_vec();
    picked.sort_unstable();
    Ok(picked)
}

/// Composes `num_flips` seeded edge tables with the cyclic shift
/// `y ↦ y + 1 mod |Σ_B|`.
pub fn frustrate(
    lc: &LabelCoverInstance,
    num_flips: usize,
    seed: u64,
) -> Result<LabelCoverInstance> {
    let k = lc.sigma_b().len();
    let mut edges = lc.edges().to_vec();
    for e in flipped_edges(edges.len(), num_flips, seed)? {
        for y in edges[e].projection.iter_mut() {
            *y = (*y + 1) % k;
        }
    }
    lc.with_edges(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::numeric::{format_rational, int, rat};
    use crate::oracles::{solve_lc_max, Optimum, DEFAULT_MAX_STATES};

    fn spec(planted: bool, seed: u64) -> GenSpec {
        GenSpec {
            num_a: 2,
            num_b: 1,
            d_b: 2,
            sigma_a_size: 2,
            sigma_b_size: 2,
            arity_p: 1,
            planted,
            seed,
        }
    }

    #[test]
    fn planted_id2_shape() {
        let g = gen_label_cover(&spec(true, 7)).unwrap();
        let r = g.instance.validate();
        assert_eq!(
            (r.bi_regular, r.d_a, r.d_b, r.p, r.size_n),
            (true, 1, 2, 1, 5)
        );
        let opt = solve_lc_max(&g.instance, DEFAULT_MAX_STATES).unwrap();
        assert_eq!(opt.optimum, Optimum::int(1));
        let lab = g.planted.unwrap();
        assert_eq!(g.instance.count_satisfied_edges(&lab).unwrap(), 2);
    }

    #[test]
    fn unplanted_value_is_at_most_one() {
        let mut g = gen_label_cover(&spec(false, 13)).unwrap();
        assert!(g.planted.is_none());
        let opt = solve_lc_max(&g.instance, DEFAULT_MAX_STATES).unwrap();
        let v = opt.optimum.value().unwrap().clone();
        assert!(v <= int(1));
        g.metadata.oracle_value = Some(format_rational(&v));
        assert!(g.metadata.oracle_value.is_some());
    }

    #[test]
    fn infeasible_specs() {
        let mut s = spec(true, 0);
        s.d_b = 3;
        assert!(matches!(gen_label_cover(&s), Err(Error::InfeasibleSpec(_))));
        let mut s = spec(true, 0);
        s.sigma_a_size = 3;
        assert!(matches!(gen_label_cover(&s), Err(Error::InfeasibleSpec(_))));
        let mut s = spec(true, 0);
        s.num_a = 5;
        s.d_b = 2;
        assert!(matches!(gen_label_cover(&s), Err(Error::InfeasibleSpec(_))));
    }

    #[test]
    fn generation_is_a_function_of_the_spec() {
        let s = GenSpec {
            num_a: 6,
            num_b: 4,
            d_b: 3,
            sigma_a_size: 3,
            sigma_b_size: 2,
            arity_p: 2,
            planted: true,
            seed: 99,
        };
        assert_eq!(gen_label_cover(&s).unwrap(), gen_label_cover(&s).unwrap());
        let g = gen_label_cover(&s).unwrap();
        assert!(g.instance.validate().p <= 2);
        assert!(g.instance.degree_a().iter().all(|&d| d > 0));
        assert!(g.instance.degree_b().iter().all(|&d| d == 3));
    }

    #[test]
    fn frustrate_reproduces_cyc() {
        let k22 = fixtures::lc_k22();
        assert_eq!(flipped_edges(4, 1, CYC_FLIP_SEED).unwrap(), vec![3]);
        let cyc = frustrate(&k22, 1, CYC_FLIP_SEED).unwrap();
        assert_eq!(cyc, fixtures::lc_cyc());
        let opt = solve_lc_max(&cyc, DEFAULT_MAX_STATES).unwrap();
        assert_eq!(opt.optimum, Optimum::Value(rat(3, 4)));
    }

    #[test]
    fn zero_and_all_flips() {
        let k22 = fixtures::lc_k22();
        assert_eq!(frustrate(&k22, 0, 5).unwrap(), k22);
        let all = frustrate(&k22, 4, 5).unwrap();
        // Shifting every table alike keeps the instance satisfiable.
        let opt = solve_lc_max(&all, DEFAULT_MAX_STATES).unwrap();
        assert_eq!(opt.optimum, Optimum::int(1));
        assert!(frustrate(&k22, 5, 5).is_err());
    }
}
