//! Label Cover instances: a bipartite graph with one projection table per edge.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Name-keyed form of an edge, as stored in instance files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub a: String,
    pub b: String,
    pub pi: BTreeMap<String, String>,
}

/// Name-keyed form of a Label Cover instance, as stored in instance files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelCoverSpec {
    pub sigma_a: Vec<String>,
    pub sigma_b: Vec<String>,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

/// One edge `(a, b)` with its projection table, all by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    /// `projection[x]` is the image of Σ_A label `x`.
    pub projection: Vec<usize>,
}

/// A structurally valid Label Cover instance. Vertices and labels keep the
/// order they were given in and are addressed by index everywhere else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelCoverInstance {
    sigma_a: Vec<String>,
    sigma_b: Vec<String>,
    a_vertices: Vec<String>,
    b_vertices: Vec<String>,
    edges: Vec<Edge>,
    edge_index: BTreeMap<(usize, usize), usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub bi_regular: bool,
    /// Largest A-degree (the common A-degree when bi-regular).
    pub d_a: usize,
    /// Largest B-degree (the common B-degree when bi-regular).
    pub d_b: usize,
    pub p: usize,
    pub size_n: usize,
}

/// A labeling of the A side and, optionally, the B side (label indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labeling {
    pub phi_a: Vec<usize>,
    pub phi_b: Option<Vec<usize>>,
}

impl Labeling {
    pub fn new(phi_a: Vec<usize>, phi_b: Option<Vec<usize>>) -> Self {
        Self { phi_a, phi_b }
    }
}

fn index_names(names: &[String], what: &str) -> Result<BTreeMap<String, usize>> {
    let mut out = BTreeMap::new();
    for (i, n) in names.iter().enumerate() {
        if out.insert(n.clone(), i).is_some() {
            return Err(Error::MalformedInstance(format!("duplicate {what} {n:?}")));
        }
    }
    Ok(out)
}

impl LabelCoverInstance {
    pub fn from_spec(spec: &LabelCoverSpec) -> Result<Self> {
        let sa = index_names(&spec.sigma_a, "Σ_A label")?;
        let sb = index_names(&spec.sigma_b, "Σ_B label")?;
        let av = index_names(&spec.a, "A-vertex")?;
        let bv = index_names(&spec.b, "B-vertex")?;
        if spec.sigma_a.is_empty() || spec.sigma_b.is_empty() {
            return Err(Error::MalformedInstance("empty alphabet".into()));
        }
        let mut edges = Vec::with_capacity(spec.edges.len());
        for (k, e) in spec.edges.iter().enumerate() {
            let a = *av.get(&e.a).ok_or_else(|| {
                Error::MalformedInstance(format!("edge {k}: dangling A endpoint {:?}", e.a))
            })?;
            let b = *bv.get(&e.b).ok_or_else(|| {
                Error::MalformedInstance(format!("edge {k}: dangling B endpoint {:?}", e.b))
            })?;
            let mut projection = vec![usize::MAX; spec.sigma_a.len()];
            for (from, to) in &e.pi {
                let x = *sa.get(from).ok_or_else(|| {
                    Error::MalformedInstance(format!("edge {k}: {from:?} is not in Σ_A"))
                })?;
                let y = *sb.get(to).ok_or_else(|| {
                    Error::MalformedInstance(format!("edge {k}: {to:?} is not in Σ_B"))
                })?;
                projection[x] = y;
            }
            if let Some(x) = projection.iter().position(|&y| y == usize::MAX) {
                return Err(Error::MalformedInstance(format!(
                    "edge {k}: projection is not total, label {:?} has no image",
                    spec.sigma_a[x]
                )));
            }
            edges.push(Edge { a, b, projection });
        }
        Self::assemble(
            spec.sigma_a.clone(),
            spec.sigma_b.clone(),
            spec.a.clone(),
            spec.b.clone(),
            edges,
        )
    }

    /// Index-based constructor with generated names `a{i}`, `b{j}` and
    /// labels `0..k`.
    pub fn from_tables(
        num_a: usize,
        num_b: usize,
        sigma_a_size: usize,
        sigma_b_size: usize,
        edges: Vec<Edge>,
    ) -> Result<Self> {
        Self::assemble(
            (0..sigma_a_size).map(|i| i.to_string()).collect(),
            (0..sigma_b_size).map(|i| i.to_string()).collect(),
            (0..num_a).map(|i| format!("a{i}")).collect(),
            (0..num_b).map(|i| format!("b{i}")).collect(),
            edges,
        )
    }

    /// Same graph and alphabets with replaced edge tables.
    pub fn with_edges(&self, edges: Vec<Edge>) -> Result<Self> {
        Self::assemble(
            self.sigma_a.clone(),
            self.sigma_b.clone(),
            self.a_vertices.clone(),
            self.b_vertices.clone(),
            edges,
        )
    }

    fn assemble(
        sigma_a: Vec<String>,
        sigma_b: Vec<String>,
        a_vertices: Vec<String>,
        b_vertices: Vec<String>,
        edges: Vec<Edge>,
    ) -> Result<Self> {
        if sigma_a.is_empty() || sigma_b.is_empty() {
            return Err(Error::MalformedInstance("empty alphabet".into()));
        }
        let mut edge_index = BTreeMap::new();
        for (k, e) in edges.iter().enumerate() {
            if e.a >= a_vertices.len() || e.b >= b_vertices.len() {
                return Err(Error::MalformedInstance(format!(
                    "edge {k}: dangling endpoint"
                )));
            }
            if e.projection.len() != sigma_a.len() {
                return Err(Error::MalformedInstance(format!(
                    "edge {k}: projection is not total on Σ_A"
                )));
            }
            if e.projection.iter().any(|&y| y >= sigma_b.len()) {
                return Err(Error::MalformedInstance(format!(
                    "edge {k}: projection leaves Σ_B"
                )));
            }
            if edge_index.insert((e.a, e.b), k).is_some() {
                return Err(Error::MalformedInstance(format!(
                    "duplicate edge ({}, {})",
                    a_vertices[e.a], b_vertices[e.b]
                )));
            }
        }
        Ok(Self {
            sigma_a,
            sigma_b,
            a_vertices,
            b_vertices,
            edges,
            edge_index,
        })
    }

    pub fn to_spec(&self) -> LabelCoverSpec {
        LabelCoverSpec {
            sigma_a: self.sigma_a.clone(),
            sigma_b: self.sigma_b.clone(),
            a: self.a_vertices.clone(),
            b: self.b_vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    a: self.a_vertices[e.a].clone(),
                    b: self.b_vertices[e.b].clone(),
                    pi: e
                        .projection
                        .iter()
                        .enumerate()
                        .map(|(x, &y)| (self.sigma_a[x].clone(), self.sigma_b[y].clone()))
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn sigma_a(&self) -> &[String] {
        &self.sigma_a
    }
    pub fn sigma_b(&self) -> &[String] {
        &self.sigma_b
    }
    pub fn a_vertices(&self) -> &[String] {
        &self.a_vertices
    }
    pub fn b_vertices(&self) -> &[String] {
        &self.b_vertices
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn num_a(&self) -> usize {
        self.a_vertices.len()
    }
    pub fn num_b(&self) -> usize {
        self.b_vertices.len()
    }

    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a, b)).copied()
    }

    /// Edge indices incident to `b`, ordered by A-vertex index.
    pub fn neighbors_of_b(&self, b: usize) -> Vec<usize> {
        let mut incident: Vec<(usize, usize)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.b == b)
            .map(|(k, e)| (e.a, k))
            .collect();
        incident.sort_unstable();
        incident.into_iter().map(|(_, k)| k).collect()
    }

    pub fn degree_a(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_a()];
        for e in &self.edges {
            d[e.a] += 1;
        }
        d
    }

    pub fn degree_b(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_b()];
        for e in &self.edges {
            d[e.b] += 1;
        }
        d
    }

    /// Σ_A labels `x` with `π_e(x) = y`, in label order.
    pub fn preimage(&self, edge: usize, y: usize) -> Vec<usize> {
        self.edges[edge]
            .projection
            .iter()
            .enumerate()
            .filter(|(_, &img)| img == y)
            .map(|(x, _)| x)
            .collect()
    }

    /// Name-addressed variant of [`Self::preimage`].
    pub fn preimage_by_name(&self, a: &str, b: &str, y: &str) -> Result<Vec<usize>> {
        let unknown = || Error::UnknownEdge {
            a: a.to_string(),
            b: b.to_string(),
        };
        let ai = self
            .a_vertices
            .iter()
            .position(|n| n == a)
            .ok_or_else(unknown)?;
        let bi = self
            .b_vertices
            .iter()
            .position(|n| n == b)
            .ok_or_else(unknown)?;
        let e = self.find_edge(ai, bi).ok_or_else(unknown)?;
        let yi = self
            .sigma_b
            .iter()
            .position(|l| l == y)
            .ok_or_else(|| Error::UnknownLabel(y.to_string()))?;
        Ok(self.preimage(e, yi))
    }

    pub fn validate(&self) -> ValidationReport {
        let da = self.degree_a();
        let db = self.degree_b();
        let uniform = |d: &[usize]| d.windows(2).all(|w| w[0] == w[1]);
        let p = self
            .edges
            .iter()
            .map(|e| {
                let mut fiber = vec![0usize; self.sigma_b.len()];
                for &y in &e.projection {
                    fiber[y] += 1;
                }
                fiber.into_iter().max().unwrap_or(0)
            })
            .max()
            .unwrap_or(0);
        ValidationReport {
            bi_regular: uniform(&da) && uniform(&db),
            d_a: da.iter().copied().max().unwrap_or(0),
            d_b: db.iter().copied().max().unwrap_or(0),
            p,
            size_n: self.num_a() + self.num_b() + self.edges.len(),
        }
    }

    fn check_labeling(&self, lab: &Labeling) -> Result<()> {
        if lab.phi_a.len() != self.num_a() {
            return Err(Error::PartialLabeling(format!(
                "φ_A covers {} of {} A-vertices",
                lab.phi_a.len(),
                self.num_a()
            )));
        }
        if let Some(&x) = lab.phi_a.iter().find(|&&x| x >= self.sigma_a.len()) {
            return Err(Error::UnknownLabel(x.to_string()));
        }
        if let Some(phi_b) = &lab.phi_b {
            if phi_b.len() != self.num_b() {
                return Err(Error::PartialLabeling(format!(
                    "φ_B covers {} of {} B-vertices",
                    phi_b.len(),
                    self.num_b()
                )));
            }
            if let Some(&y) = phi_b.iter().find(|&&y| y >= self.sigma_b.len()) {
                return Err(Error::UnknownLabel(y.to_string()));
            }
        }
        Ok(())
    }

    pub fn count_satisfied_edges(&self, lab: &Labeling) -> Result<usize> {
        self.check_labeling(lab)?;
        let phi_b = lab
            .phi_b
            .as_ref()
            .ok_or_else(|| Error::PartialLabeling("φ_B is absent".into()))?;
        Ok(self
            .edges
            .iter()
            .filter(|e| e.projection[lab.phi_a[e.a]] == phi_b[e.b])
            .count())
    }

    /// The first edge (in edge order) the labeling violates, if any.
    pub fn first_violated_edge(&self, lab: &Labeling) -> Result<Option<usize>> {
        self.check_labeling(lab)?;
        let phi_b = lab
            .phi_b
            .as_ref()
            .ok_or_else(|| Error::PartialLabeling("φ_B is absent".into()))?;
        Ok(self
            .edges
            .iter()
            .position(|e| e.projection[lab.phi_a[e.a]] != phi_b[e.b]))
    }
}

/// Builds the instance from its file form and reports its structure.
pub fn validate_label_cover(spec: &LabelCoverSpec) -> Result<ValidationReport> {
    LabelCoverInstance::from_spec(spec).map(|lc| lc.validate())
}
