//! Splitting a drawn graph into `k` planes.
//!
//! The construction labels every vertex independently with `xi_v` drawn from
//! a [`WeightVector`] and sends edge `uv` to plane `(xi_u + xi_v) mod k`.
//! Inside one plane every connected component consists of edges of a single
//! type `{xi_u, xi_v}`, so after translating components apart only crossings
//! between edges of the same type survive.
//!
//! The randomized searches resample Moser–Tardos style: every round the
//! variables of violated events are redrawn, with a full restart after a
//! stretch of rounds without improvement. Certification is always a fresh
//! recount through [`surviving_report`].

use std::cmp::Reverse;
use std::collections::BTreeSet;

use log::warn;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::drawing::Drawing;
use crate::error::{invalid_arg, Result};
use crate::graph::Graph;
use crate::weights::WeightVector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexLabeling {
    k: usize,
    labels: Vec<usize>,
    seed: Option<u64>,
}

impl VertexLabeling {
    pub fn new(k: usize, labels: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(invalid_arg("k must be at least 1"));
        }
        if let Some(v) = labels.iter().position(|&l| l >= k) {
            return Err(invalid_arg(format!("label {} of vertex {v} is not below k = {k}", labels[v])));
        }
        Ok(Self { k, labels, seed: None })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

/// Draws every label independently from `weights`; deterministic in `seed`.
pub fn sample_labeling(graph: &Graph, weights: &WeightVector, seed: u64) -> VertexLabeling {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = (0..graph.n()).map(|_| weights.sample(&mut rng)).collect();
    VertexLabeling { k: weights.k(), labels, seed: Some(seed) }
}

/// The unordered label pair of an edge's endpoints, stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeType(pub usize, pub usize);

impl EdgeType {
    pub fn of(a: usize, b: usize) -> Self {
        EdgeType(a.min(b), a.max(b))
    }

    pub fn plane(self, k: usize) -> usize {
        (self.0 + self.1) % k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoadSemantics {
    /// Crossings survive between edges of equal type.
    SameType,
    /// Crossings survive between edges sharing a plane.
    CoPlane,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneAssignment {
    k: usize,
    planes: Vec<usize>,
    types: Option<Vec<EdgeType>>,
}

impl PlaneAssignment {
    /// An explicit edge-to-plane map with co-plane load semantics.
    pub fn from_planes(k: usize, planes: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(invalid_arg("k must be at least 1"));
        }
        if let Some(e) = planes.iter().position(|&p| p >= k) {
            return Err(invalid_arg(format!("edge {e} assigned to plane {} >= k = {k}", planes[e])));
        }
        Ok(Self { k, planes, types: None })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn planes(&self) -> &[usize] {
        &self.planes
    }

    pub fn plane(&self, edge: usize) -> usize {
        self.planes[edge]
    }

    pub fn types(&self) -> Option<&[EdgeType]> {
        self.types.as_deref()
    }

    pub fn semantics(&self) -> LoadSemantics {
        if self.types.is_some() {
            LoadSemantics::SameType
        } else {
            LoadSemantics::CoPlane
        }
    }

    pub fn plane_edges(&self, plane: usize) -> Vec<usize> {
        (0..self.planes.len()).filter(|&e| self.planes[e] == plane).collect()
    }
}

/// Sends edge `uv` to plane `(xi_u + xi_v) mod k`.
pub fn assign_planes(graph: &Graph, labeling: &VertexLabeling) -> Result<PlaneAssignment> {
    if labeling.labels.len() != graph.n() {
        return Err(invalid_arg(format!(
            "labeling covers {} vertices, graph has {}",
            labeling.labels.len(),
            graph.n()
        )));
    }
    let k = labeling.k;
    let types: Vec<EdgeType> = graph
        .edges()
        .iter()
        .map(|&(u, v)| EdgeType::of(labeling.labels[u], labeling.labels[v]))
        .collect();
    let planes = types.iter().map(|t| t.plane(k)).collect();
    Ok(PlaneAssignment { k, planes, types: Some(types) })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Thresholds {
    /// Bound on `max_e g(e)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_load: Option<f64>,
    /// Bound on the surviving total `sum_i C_i`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total: Option<f64>,
}

impl Thresholds {
    pub fn admits(&self, max_load: u64, total: u64) -> bool {
        self.max_load.is_none_or(|t| max_load as f64 <= t)
            && self.total.is_none_or(|t| total as f64 <= t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub semantics: LoadSemantics,
    /// Surviving crossings per edge.
    pub g: Vec<u64>,
    /// Surviving crossings per plane.
    pub plane_totals: Vec<u64>,
    /// Largest surviving load per plane.
    pub plane_max: Vec<u64>,
    pub max_load: u64,
    pub total: u64,
    pub thresholds: Thresholds,
    pub certified: bool,
}

impl DecompositionReport {
    /// Attaches thresholds and sets `certified` from the recounted values.
    pub fn certify(mut self, thresholds: Thresholds) -> Self {
        self.certified = thresholds.admits(self.max_load, self.total);
        self.thresholds = thresholds;
        self
    }
}

/// Counts the crossings of the input drawing that survive `assignment`.
pub fn surviving_report(drawing: &Drawing, assignment: &PlaneAssignment) -> Result<DecompositionReport> {
    let m = drawing.graph().m();
    if assignment.planes.len() != m {
        return Err(invalid_arg(format!(
            "assignment covers {} edges, drawing has {m}",
            assignment.planes.len()
        )));
    }
    let k = assignment.k;
    let mut g = vec![0u64; m];
    let mut plane_totals = vec![0u64; k];
    for c in drawing.crossings() {
        let survives = match &assignment.types {
            Some(types) => types[c.first] == types[c.second],
            None => assignment.planes[c.first] == assignment.planes[c.second],
        };
        if survives {
            g[c.first] += c.multiplicity;
            g[c.second] += c.multiplicity;
            plane_totals[assignment.planes[c.first]] += c.multiplicity;
        }
    }
    let mut plane_max = vec![0u64; k];
    for (e, &load) in g.iter().enumerate() {
        let p = assignment.planes[e];
        plane_max[p] = plane_max[p].max(load);
    }
    Ok(DecompositionReport {
        semantics: assignment.semantics(),
        max_load: g.iter().copied().max().unwrap_or(0),
        total: plane_totals.iter().sum(),
        g,
        plane_totals,
        plane_max,
        thresholds: Thresholds::default(),
        certified: false,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResamplePolicy {
    /// Redraw only the variables of violated events.
    #[default]
    Local,
    /// Redraw every label each round.
    Restart,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopRule {
    /// Return as soon as a recount meets the thresholds.
    #[default]
    FirstCertified,
    /// Spend the whole budget minimizing the objective.
    BestOfBudget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub budget: usize,
    pub seed: u64,
    pub policy: ResamplePolicy,
    pub stop: StopRule,
    /// Stagnant rounds before a full restart; defaults to `budget / 10`.
    pub restart_after: Option<usize>,
}

impl SearchConfig {
    pub fn new(budget: usize, seed: u64) -> Self {
        Self { budget, seed, policy: ResamplePolicy::Local, stop: StopRule::FirstCertified, restart_after: None }
    }

    pub fn best_of_budget(mut self) -> Self {
        self.stop = StopRule::BestOfBudget;
        self
    }

    pub fn with_policy(mut self, policy: ResamplePolicy) -> Self {
        self.policy = policy;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(invalid_arg("budget must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Construction,
    DegreePartition,
    Coloring,
    Combined,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub method: Method,
    /// Vertex labels, for the construction-based methods.
    pub labeling: Option<VertexLabeling>,
    pub assignment: PlaneAssignment,
    pub report: DecompositionReport,
    pub rounds: usize,
}

/// Serialized form of a [`Decomposition`].
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionJson {
    pub method: Method,
    pub k: usize,
    pub weights: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub semantics: LoadSemantics,
    pub labels: Option<Vec<usize>>,
    pub planes: Vec<usize>,
    pub g: Vec<u64>,
    #[serde(rename = "C_i")]
    pub plane_totals: Vec<u64>,
    #[serde(rename = "L_i")]
    pub plane_max: Vec<u64>,
    pub max_load: u64,
    pub total: u64,
    pub certified: bool,
    pub thresholds: Thresholds,
    pub rounds: usize,
}

impl Decomposition {
    pub fn to_json(&self, weights: Option<&WeightVector>, seed: Option<u64>) -> DecompositionJson {
        DecompositionJson {
            method: self.method,
            k: self.assignment.k,
            weights: weights.map(|w| w.probs().to_vec()),
            seed,
            semantics: self.report.semantics,
            labels: self.labeling.as_ref().map(|l| l.labels.clone()),
            planes: self.assignment.planes.clone(),
            g: self.report.g.clone(),
            plane_totals: self.report.plane_totals.clone(),
            plane_max: self.report.plane_max.clone(),
            max_load: self.report.max_load,
            total: self.report.total,
            certified: self.report.certified,
            thresholds: self.report.thresholds,
            rounds: self.rounds,
        }
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(invalid_arg(format!("epsilon must be a nonnegative number, got {epsilon}")));
    }
    if !(epsilon > 0.0 && epsilon < 0.1) {
        warn!("epsilon = {epsilon} lies outside (0, 1/10); the guarantees assume it does not");
    }
    Ok(())
}

struct Evaluation<S> {
    score: S,
    feasible: bool,
    /// The score cannot improve further.
    settled: bool,
    /// Variables of violated events; empty means redraw everything.
    scope: Vec<usize>,
}

/// Resampling search over labelings of `n` variables. Returns the best
/// labeling by score and the number of rounds spent.
fn search<S, F>(n: usize, weights: &WeightVector, cfg: &SearchConfig, mut evaluate: F) -> (Vec<usize>, usize)
where
    S: Ord + Clone,
    F: FnMut(&[usize], Option<&S>) -> Evaluation<S>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut labels: Vec<usize> = (0..n).map(|_| weights.sample(&mut rng)).collect();
    let restart_after = cfg.restart_after.unwrap_or(cfg.budget / 10).max(1);
    let mut best: Option<(S, Vec<usize>)> = None;
    let mut stagnant = 0;
    let mut mark = vec![false; n];
    let mut rounds = 0;
    while rounds < cfg.budget {
        rounds += 1;
        let eval = evaluate(&labels, best.as_ref().map(|(s, _)| s));
        let stop = eval.settled || (eval.feasible && cfg.stop == StopRule::FirstCertified);
        if best.as_ref().is_none_or(|(s, _)| eval.score < *s) || (eval.feasible && stop) {
            best = Some((eval.score, labels.clone()));
            stagnant = 0;
        } else {
            stagnant += 1;
        }
        if stop {
            break;
        }
        if cfg.policy == ResamplePolicy::Restart || stagnant >= restart_after || eval.scope.is_empty() {
            labels.iter_mut().for_each(|l| *l = weights.sample(&mut rng));
            stagnant = 0;
        } else {
            for &v in &eval.scope {
                if !mark[v] {
                    mark[v] = true;
                    labels[v] = weights.sample(&mut rng);
                }
            }
            for &v in &eval.scope {
                mark[v] = false;
            }
        }
    }
    (best.expect("budget >= 1").1, rounds)
}

/// Same-type loads `g(e)` for a labeling, and the surviving total.
fn same_type_loads(drawing: &Drawing, labels: &[usize], g: &mut [u64]) -> u64 {
    let edges = drawing.graph().edges();
    g.iter_mut().for_each(|x| *x = 0);
    let mut total = 0;
    for c in drawing.crossings() {
        let (a, b) = edges[c.first];
        let (x, y) = edges[c.second];
        if EdgeType::of(labels[a], labels[b]) == EdgeType::of(labels[x], labels[y]) {
            g[c.first] += c.multiplicity;
            g[c.second] += c.multiplicity;
            total += c.multiplicity;
        }
    }
    total
}

/// Vertices whose labels the event "g(e) too large" depends on.
fn push_edge_scope(drawing: &Drawing, edge: usize, scope: &mut Vec<usize>) {
    let edges = drawing.graph().edges();
    let (u, v) = edges[edge];
    scope.extend([u, v]);
    for &(f, _) in drawing.partners(edge) {
        let (a, b) = edges[f];
        scope.extend([a, b]);
    }
}

fn construction_result(
    drawing: &Drawing,
    method: Method,
    k: usize,
    labels: Vec<usize>,
    seed: u64,
    thresholds: Thresholds,
    rounds: usize,
) -> Result<Decomposition> {
    let labeling = VertexLabeling { k, labels, seed: Some(seed) };
    let assignment = assign_planes(drawing.graph(), &labeling)?;
    let report = surviving_report(drawing, &assignment)?.certify(thresholds);
    Ok(Decomposition { method, labeling: Some(labeling), assignment, report, rounds })
}

/// Random-partition decomposition targeting `max_e g(e) <= (gamma + eps) L`,
/// where `gamma` belongs to `weights`.
pub fn decompose_lcr(
    drawing: &Drawing,
    k: usize,
    epsilon: f64,
    weights: &WeightVector,
    cfg: &SearchConfig,
) -> Result<Decomposition> {
    if k == 0 || weights.k() != k {
        return Err(invalid_arg(format!("weights have {} entries but k = {k}", weights.k())));
    }
    check_epsilon(epsilon)?;
    cfg.validate()?;
    let threshold = (weights.gamma() + epsilon) * drawing.local_crossing_number() as f64;
    let mut g = vec![0u64; drawing.graph().m()];
    let stop = cfg.stop;
    let (labels, rounds) = search(drawing.graph().n(), weights, cfg, |labels, incumbent: Option<&(u64, u64)>| {
        let total = same_type_loads(drawing, labels, &mut g);
        let max_load = g.iter().copied().max().unwrap_or(0);
        let limit = match (stop, incumbent) {
            (StopRule::BestOfBudget, Some(&(best, _))) => threshold.min(best as f64 - 1.0),
            _ => threshold,
        };
        let mut scope = Vec::new();
        for (e, &load) in g.iter().enumerate() {
            if load as f64 > limit {
                push_edge_scope(drawing, e, &mut scope);
            }
        }
        Evaluation {
            score: (max_load, total),
            feasible: max_load as f64 <= threshold,
            settled: max_load == 0,
            scope,
        }
    });
    let thresholds = Thresholds { max_load: Some(threshold), total: None };
    construction_result(drawing, Method::Construction, k, labels, cfg.seed, thresholds, rounds)
}

/// A `k`-partition of a graph's vertices with small induced degrees.
#[derive(Debug, Clone)]
pub struct DegreePartition {
    pub labeling: VertexLabeling,
    /// Largest degree inside one part.
    pub max_induced_degree: usize,
    /// `(1/k + eps) Δ(H)`.
    pub threshold: f64,
    pub certified: bool,
    pub rounds: usize,
}

fn induced_degrees(h: &Graph, labels: &[usize]) -> Vec<usize> {
    (0..h.n())
        .map(|v| h.neighbors(v).iter().filter(|&&w| labels[w] == labels[v]).count())
        .collect()
}

/// Uniform random `k`-partition of `V(H)`, resampled until every induced
/// part has maximum degree at most `(1/k + eps) Δ(H)`.
pub fn degree_partition(h: &Graph, k: usize, epsilon: f64, cfg: &SearchConfig) -> Result<DegreePartition> {
    check_epsilon(epsilon)?;
    cfg.validate()?;
    let weights = WeightVector::uniform(k)?;
    let delta = h.max_degree() as f64;
    let threshold = (1.0 / k as f64 + epsilon) * delta;
    let (labels, rounds) = search(h.n(), &weights, cfg, |labels, _: Option<&(usize, usize)>| {
        let same = induced_degrees(h, labels);
        let mut scope = Vec::new();
        let mut violated = 0;
        for v in 0..h.n() {
            if same[v] as f64 > h.degree(v) as f64 / k as f64 + epsilon * delta {
                violated += 1;
                scope.push(v);
                scope.extend_from_slice(h.neighbors(v));
            }
        }
        let max_same = same.iter().copied().max().unwrap_or(0);
        Evaluation {
            score: (max_same, violated),
            feasible: max_same as f64 <= threshold,
            settled: max_same == 0,
            scope,
        }
    });
    let max_induced_degree = induced_degrees(h, &labels).into_iter().max().unwrap_or(0);
    Ok(DegreePartition {
        labeling: VertexLabeling { k, labels, seed: Some(cfg.seed) },
        max_induced_degree,
        threshold,
        certified: max_induced_degree as f64 <= threshold,
        rounds,
    })
}

/// Partitions the intersection graph and uses part indices as planes.
/// Certified iff `max_e g(e) <= (1/k + eps) Δ(I)` under co-plane loads.
pub fn decompose_via_degree_partition(
    drawing: &Drawing,
    k: usize,
    epsilon: f64,
    cfg: &SearchConfig,
) -> Result<Decomposition> {
    let ig = drawing.intersection_graph();
    let part = degree_partition(ig.graph(), k, epsilon, cfg)?;
    let assignment = PlaneAssignment::from_planes(k, part.labeling.labels.clone())?;
    let threshold = (1.0 / k as f64 + epsilon) * ig.max_degree() as f64;
    let report = surviving_report(drawing, &assignment)?
        .certify(Thresholds { max_load: Some(threshold), total: None });
    Ok(Decomposition { method: Method::DegreePartition, labeling: None, assignment, report, rounds: part.rounds })
}

/// Uniform-weight construction meeting both
/// `sum_i C_i <= (2/k^2 - 1/k^3 + eps) C` and `max_i L_i <= (2/k^2 + eps) L`.
pub fn decompose_combined(drawing: &Drawing, k: usize, epsilon: f64, cfg: &SearchConfig) -> Result<Decomposition> {
    if k < 2 {
        return Err(invalid_arg("the combined decomposition needs k >= 2"));
    }
    check_epsilon(epsilon)?;
    cfg.validate()?;
    let weights = WeightVector::uniform(k)?;
    let kf = k as f64;
    let total_limit = (2.0 / (kf * kf) - 1.0 / (kf * kf * kf) + epsilon) * drawing.total_crossings() as f64;
    let load_limit = (2.0 / (kf * kf) + epsilon) * drawing.local_crossing_number() as f64;
    let mut g = vec![0u64; drawing.graph().m()];
    let (labels, rounds) = search(drawing.graph().n(), &weights, cfg, |labels, _: Option<&(u8, u64, u64)>| {
        let total = same_type_loads(drawing, labels, &mut g);
        let max_load = g.iter().copied().max().unwrap_or(0);
        let total_bad = total as f64 > total_limit;
        let load_bad = max_load as f64 > load_limit;
        let mut scope = Vec::new();
        if !total_bad {
            for (e, &load) in g.iter().enumerate() {
                if load as f64 > load_limit {
                    push_edge_scope(drawing, e, &mut scope);
                }
            }
        }
        Evaluation {
            score: (total_bad as u8 + load_bad as u8, max_load, total),
            feasible: !total_bad && !load_bad,
            settled: max_load == 0,
            scope,
        }
    });
    let thresholds = Thresholds { max_load: Some(load_limit), total: Some(total_limit) };
    construction_result(drawing, Method::Combined, k, labels, cfg.seed, thresholds, rounds)
}

/// DSatur coloring of the intersection graph: repeatedly color the vertex
/// seeing the most distinct colors (then highest degree, then lowest id)
/// with its smallest free color. Color classes become crossing-free planes;
/// at most `Δ(I) + 1` are used.
pub fn decompose_by_coloring(drawing: &Drawing) -> Result<Decomposition> {
    let ig = drawing.intersection_graph();
    let h = ig.graph();
    let n = h.n();
    let mut color = vec![usize::MAX; n];
    let mut seen: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let key = |v: usize, sat: usize| (Reverse(sat), Reverse(h.degree(v)), v);
    let mut queue: BTreeSet<(Reverse<usize>, Reverse<usize>, usize)> = (0..n).map(|v| key(v, 0)).collect();
    while let Some((_, _, v)) = queue.pop_first() {
        let c = (0..).find(|c| !seen[v].contains(c)).expect("a free color exists");
        color[v] = c;
        for &w in h.neighbors(v) {
            if color[w] == usize::MAX && !seen[w].contains(&c) {
                queue.remove(&key(w, seen[w].len()));
                seen[w].insert(c);
                queue.insert(key(w, seen[w].len()));
            }
        }
    }
    let k = color.iter().copied().max().map_or(1, |c| c + 1);
    let assignment = PlaneAssignment::from_planes(k, color)?;
    let report = surviving_report(drawing, &assignment)?
        .certify(Thresholds { max_load: Some(0.0), total: None });
    Ok(Decomposition { method: Method::Coloring, labeling: None, assignment, report, rounds: 1 })
}
