//! Seeded instance generators. The seed fully determines the output.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::graph::Graph;
use crate::reduction::{reduce_exhaustively, Instance, ReductionStatus};
use crate::solver::{detect_case, CaseId};

const FIXTURE_ATTEMPTS: usize = 5_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    /// Each pair independently with probability `p`.
    Random { n: usize, p: f64 },
    /// Disjoint hub-centred clubs plus exactly `noise_edges` edges between
    /// different clubs.
    Planted { club_sizes: Vec<usize>, noise_edges: usize },
    /// The gadget a branching case is drawn around, plus `decorations`
    /// extra vertices, kept only if the case still fires at the root.
    CaseFixture { case: CaseId, decorations: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub model: Model,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    /// For planted instances: the noise count, an upper bound on OPT.
    pub planted_upper_bound: Option<usize>,
}

pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match &spec.model {
        Model::Random { n, p } => Ok(Generated {
            graph: random_graph(*n, *p, &mut rng)?,
            planted_upper_bound: None,
        }),
        Model::Planted {
            club_sizes,
            noise_edges,
        } => Ok(Generated {
            graph: planted(club_sizes, *noise_edges, &mut rng)?,
            planted_upper_bound: Some(*noise_edges),
        }),
        Model::CaseFixture { case, decorations } => Ok(Generated {
            graph: case_fixture(*case, *decorations, &mut rng)?,
            planted_upper_bound: None,
        }),
    }
}

pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidSpec(format!("edge probability {p} outside [0, 1]")));
    }
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

fn planted(club_sizes: &[usize], noise_edges: usize, rng: &mut impl Rng) -> Result<Graph> {
    if club_sizes.contains(&0) {
        return Err(Error::InvalidSpec("club sizes must be at least 1".into()));
    }
    let n: usize = club_sizes.iter().sum();
    let mut club_of = Vec::with_capacity(n);
    let mut g = Graph::new(n);
    let mut start = 0;
    for (club, &size) in club_sizes.iter().enumerate() {
        let hub = start;
        for u in start..start + size {
            club_of.push(club);
            if u != hub {
                g.add_edge(hub, u)?;
            }
            for v in u + 1..start + size {
                if u != hub && rng.gen_bool(0.5) {
                    g.add_edge(u, v)?;
                }
            }
        }
        start += size;
    }
    let cross: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| club_of[u] != club_of[v])
        .collect();
    if noise_edges > cross.len() {
        return Err(Error::InvalidSpec(format!(
            "{noise_edges} noise edges requested, only {} inter-club pairs exist",
            cross.len()
        )));
    }
    for i in sample(rng, cross.len(), noise_edges) {
        let (u, v) = cross[i];
        g.add_edge(u, v)?;
    }
    Ok(g)
}

/// Base gadget on which `case` fires.
pub fn case_gadget(case: CaseId) -> Result<Graph> {
    Ok(match case {
        CaseId::Case1 => fixtures::p5_with_pendant(),
        CaseId::Case2 => fixtures::bull(),
        CaseId::Case3 => fixtures::common_neighbor_gadget(),
        CaseId::Case41 => fixtures::distance_three_gadget(),
        CaseId::Case421 => fixtures::separate_w_gadget(),
        CaseId::Case422 => fixtures::shared_w_gadget(),
        CaseId::FallbackGeneric => {
            return Err(Error::InvalidSpec("the fallback split has no fixture".into()));
        }
    })
}

/// Reduced under the budget-free rules (3, 5, 6; rule 4 cannot fire with
/// `k = |E|`) and `case` is the case chosen at the root.
pub fn fires_at_root(g: &Graph, case: CaseId) -> bool {
    let out = reduce_exhaustively(Instance::new(g.clone(), g.edge_count() as i64));
    out.status == ReductionStatus::Reduced
        && out.rule_log.is_empty()
        && detect_case(g).map(|d| d.case == case).unwrap_or(false)
}

fn case_fixture(case: CaseId, decorations: usize, rng: &mut impl Rng) -> Result<Graph> {
    let base = case_gadget(case)?;
    if decorations == 0 {
        return Ok(base);
    }
    for _ in 0..FIXTURE_ATTEMPTS {
        let g = (0..decorations).fold(base.clone(), |g, _| add_vertex(&g, rng));
        if fires_at_root(&g, case) {
            return Ok(g);
        }
    }
    Err(Error::InvalidSpec(format!(
        "no decoration of the {case} gadget with {decorations} extra vertices kept the case"
    )))
}

/// Appends a vertex joined either to one to three uniformly chosen vertices,
/// or to one vertex and up to two of its neighbours.
fn add_vertex(g: &Graph, rng: &mut impl Rng) -> Graph {
    let v = g.vertex_count();
    let mut h = Graph::new(v + 1);
    for e in g.edges() {
        h.add_edge(e.lo(), e.hi()).unwrap();
    }
    let targets: Vec<usize> = if rng.gen_bool(0.5) {
        let degree = rng.gen_range(1..=3.min(v));
        sample(rng, v, degree).into_vec()
    } else {
        let anchor = rng.gen_range(0..v);
        let near: Vec<usize> = g.neighbors(anchor).iter().copied().collect();
        let extra = rng.gen_range(0..=2.min(near.len()));
        let mut t: Vec<usize> = sample(rng, near.len(), extra).into_iter().map(|i| near[i]).collect();
        t.push(anchor);
        t
    };
    for u in targets {
        h.add_edge(v, u).unwrap();
    }
    let mut labels: Vec<String> = g.labels().map(<[String]>::to_vec).unwrap_or_default();
    labels.push(format!("n{}", v + 1));
    h.with_labels(labels).unwrap()
}
