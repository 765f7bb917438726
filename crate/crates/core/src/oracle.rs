//! Exhaustive ground truth for small instances.
//!
//! Nothing here calls into the decomposer: edge types, surviving crossings
//! and loads are recomputed from the drawing, so agreement between the two
//! is a genuine cross-check. Probabilities are exact rationals built from
//! integer weight numerators over a common denominator.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::drawing::Drawing;
use crate::error::{invalid_arg, Error, Result};
use crate::weights::WeightVector;

/// Largest number of states an exhaustive search may visit.
pub const ENUMERATION_CAP: u64 = 20_000_000;
/// Largest number of partner label tuples in a conditional enumeration.
pub const CONDITIONAL_CAP: u64 = 1 << 20;

fn space_size(k: usize, len: usize, cap: u64) -> Result<u64> {
    if k == 0 {
        return Err(invalid_arg("k must be at least 1"));
    }
    let size = (k as f64).powf(len as f64);
    if size > cap as f64 {
        return Err(Error::SearchSpaceTooLarge { size, cap: cap as f64 });
    }
    Ok((k as u64).pow(len as u32))
}

/// Exact rational as `{num, den, value}`; integers that overflow `i64`
/// are written as decimal strings.
pub fn rational_json(r: &BigRational) -> Value {
    let int = |x: &BigInt| x.to_i64().map_or_else(|| Value::String(x.to_string()), Value::from);
    json!({ "num": int(r.numer()), "den": int(r.denom()), "value": r.to_f64() })
}

fn type_of(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    Labeling(Vec<usize>),
    Partition(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub objective: u64,
    pub witness: Witness,
    pub search_space: u64,
    pub exhaustive: bool,
}

/// What [`exact_best_labeling`] minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum LabelingObjective {
    /// Largest surviving load `max_e g(e)`.
    MaxLoad,
    /// Surviving total `sum_i C_i`.
    Total,
    /// Number of violated targets among `sum_i C_i <= (2/k^2 - 1/k^3 + eps) C`
    /// and `max_e g(e) <= (2/k^2 + eps) L`.
    Combined { epsilon: f64 },
}

struct LabelingInstance<'a> {
    drawing: &'a Drawing,
    objective: LabelingObjective,
    total_limit: f64,
    load_limit: f64,
}

impl LabelingInstance<'_> {
    fn score(&self, labels: &[usize], g: &mut [u64]) -> u64 {
        let edges = self.drawing.graph().edges();
        g.iter_mut().for_each(|x| *x = 0);
        let mut total = 0u64;
        for c in self.drawing.crossings() {
            let (a, b) = edges[c.first];
            let (x, y) = edges[c.second];
            if type_of(labels[a], labels[b]) == type_of(labels[x], labels[y]) {
                g[c.first] += c.multiplicity;
                g[c.second] += c.multiplicity;
                total += c.multiplicity;
            }
        }
        let max = g.iter().copied().max().unwrap_or(0);
        match self.objective {
            LabelingObjective::MaxLoad => max,
            LabelingObjective::Total => total,
            LabelingObjective::Combined { .. } => {
                (total as f64 > self.total_limit) as u64 + (max as f64 > self.load_limit) as u64
            }
        }
    }
}

/// Writes the base-`k` digits of `index` into `labels`, vertex 0 most
/// significant, so index order is lexicographic order.
fn decode(mut index: u64, k: usize, labels: &mut [usize]) {
    for l in labels.iter_mut().rev() {
        *l = (index % k as u64) as usize;
        index /= k as u64;
    }
}

fn advance(labels: &mut [usize], k: usize) {
    for l in labels.iter_mut().rev() {
        *l += 1;
        if *l < k {
            return;
        }
        *l = 0;
    }
}

const CHUNK: u64 = 1 << 12;

/// Minimizes `objective` over all `k^n` vertex labelings; ties go to the
/// lexicographically smallest labeling.
pub fn exact_best_labeling(drawing: &Drawing, k: usize, objective: LabelingObjective) -> Result<OracleResult> {
    let n = drawing.graph().n();
    let space = space_size(k, n, ENUMERATION_CAP)?;
    let (total_limit, load_limit) = match objective {
        LabelingObjective::Combined { epsilon } => {
            if k < 2 {
                return Err(invalid_arg("the combined objective needs k >= 2"));
            }
            if !(epsilon >= 0.0) {
                return Err(invalid_arg("epsilon must be nonnegative"));
            }
            let kf = k as f64;
            (
                (2.0 / (kf * kf) - 1.0 / (kf * kf * kf) + epsilon) * drawing.total_crossings() as f64,
                (2.0 / (kf * kf) + epsilon) * drawing.local_crossing_number() as f64,
            )
        }
        _ => (0.0, 0.0),
    };
    let instance = LabelingInstance { drawing, objective, total_limit, load_limit };
    let m = drawing.graph().m();
    let chunks = space.div_ceil(CHUNK);
    let (objective_value, index) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(space);
            let mut labels = vec![0usize; n];
            let mut g = vec![0u64; m];
            decode(start, k, &mut labels);
            let mut best = (u64::MAX, start);
            for index in start..end {
                let s = instance.score(&labels, &mut g);
                if s < best.0 {
                    best = (s, index);
                }
                advance(&mut labels, k);
            }
            best
        })
        .min()
        .expect("at least one labeling");
    let mut witness = vec![0usize; n];
    decode(index, k, &mut witness);
    Ok(OracleResult { objective: objective_value, witness: Witness::Labeling(witness), search_space: space, exhaustive: true })
}

struct PartitionSearch {
    k: usize,
    /// Crossing partners with a smaller edge id.
    earlier: Vec<Vec<(usize, u64)>>,
    planes: Vec<usize>,
    loads: Vec<u64>,
    best: u64,
    best_planes: Vec<usize>,
}

impl PartitionSearch {
    /// Depth-first over canonical partitions (plane ids appear in increasing
    /// order of first use). Every partition is a relabeling of a canonical
    /// one, and the lexicographically first optimum is canonical.
    fn descend(&mut self, e: usize, used: usize, current: u64) {
        if current >= self.best {
            return;
        }
        if e == self.planes.len() {
            self.best = current;
            self.best_planes.clone_from(&self.planes);
            return;
        }
        for p in 0..self.k.min(used + 1) {
            self.planes[e] = p;
            let mut worst = current;
            for i in 0..self.earlier[e].len() {
                let (f, mult) = self.earlier[e][i];
                if self.planes[f] == p {
                    self.loads[e] += mult;
                    self.loads[f] += mult;
                    worst = worst.max(self.loads[f]);
                }
            }
            worst = worst.max(self.loads[e]);
            self.descend(e + 1, used.max(p + 1), worst);
            for i in 0..self.earlier[e].len() {
                let (f, mult) = self.earlier[e][i];
                if self.planes[f] == p {
                    self.loads[e] -= mult;
                    self.loads[f] -= mult;
                }
            }
        }
    }
}

/// Minimizes the largest co-plane load over all `k^m` edge partitions.
pub fn exact_best_edge_partition(drawing: &Drawing, k: usize) -> Result<OracleResult> {
    let m = drawing.graph().m();
    let space = space_size(k, m, ENUMERATION_CAP)?;
    let mut earlier = vec![Vec::new(); m];
    for c in drawing.crossings() {
        earlier[c.second.max(c.first)].push((c.first.min(c.second), c.multiplicity));
    }
    let mut search = PartitionSearch {
        k,
        earlier,
        planes: vec![0; m],
        loads: vec![0; m],
        best: u64::MAX,
        best_planes: vec![0; m],
    };
    search.descend(0, 0, 0);
    Ok(OracleResult {
        objective: search.best,
        witness: Witness::Partition(search.best_planes),
        search_space: space,
        exhaustive: true,
    })
}

/// The weights as exact rationals: exact weights as given, float weights
/// by their binary values.
pub fn exact_weights(weights: &WeightVector) -> Vec<BigRational> {
    match weights.exact_probs() {
        Some(p) => p.iter().map(|r| BigRational::new((*r.numer()).into(), (*r.denom()).into())).collect(),
        None => weights
            .probs()
            .iter()
            .map(|&p| BigRational::from_float(p).expect("weights are finite"))
            .collect(),
    }
}

trait Mass: Clone + Zero + One {
    fn times(&self, x: &Self) -> Self;
}

impl Mass for u128 {
    fn times(&self, x: &Self) -> Self {
        self * x
    }
}

impl Mass for BigUint {
    fn times(&self, x: &Self) -> Self {
        self * x
    }
}

/// A label distribution as numerators over one denominator, restricted to
/// labels of positive weight.
struct Law {
    support: Vec<usize>,
    num: Vec<BigUint>,
    den: BigUint,
}

impl Law {
    fn new(weights: &WeightVector) -> Self {
        let probs = exact_weights(weights);
        let den = probs.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
        let num: Vec<BigUint> = probs
            .iter()
            .map(|p| (p.numer() * (&den / p.denom())).to_biguint().expect("weights are nonnegative"))
            .collect();
        let support = (0..num.len()).filter(|&i| !num[i].is_zero()).collect();
        Self { support, num, den: den.to_biguint().expect("positive denominator") }
    }

    fn den_pow(&self, u: usize) -> BigUint {
        num_traits::pow(self.den.clone(), u)
    }

    fn small(&self, u: usize) -> Option<Vec<u128>> {
        let den = self.den.to_u128()?;
        den.checked_pow(u as u32)?;
        self.num.iter().map(|x| x.to_u128()).collect()
    }

    /// Calls `f(labels, mass)` for every tuple of `u` labels from the
    /// support; masses are numerators over `den^u`.
    fn enumerate<M: Mass>(&self, nums: &[M], u: usize, mut f: impl FnMut(&[usize], &M)) {
        let s = self.support.len();
        let mut digits = vec![0usize; u];
        let mut labels: Vec<usize> = vec![self.support[0]; u];
        let mut prefix: Vec<M> = Vec::with_capacity(u + 1);
        prefix.push(M::one());
        for d in 0..u {
            let next = prefix[d].times(&nums[labels[d]]);
            prefix.push(next);
        }
        loop {
            f(&labels, &prefix[u]);
            let mut d = u;
            loop {
                if d == 0 {
                    return;
                }
                d -= 1;
                digits[d] += 1;
                if digits[d] < s {
                    break;
                }
                digits[d] = 0;
            }
            for i in d..u {
                labels[i] = self.support[digits[i]];
                prefix[i + 1] = prefix[i].times(&nums[labels[i]]);
            }
        }
    }

    /// Exact probability that `pred` holds for `u` independent labels.
    fn probability(&self, u: usize, pred: impl Fn(&[usize]) -> bool) -> BigRational {
        let numer: BigUint = match self.small(u) {
            Some(nums) => {
                let mut sum = 0u128;
                self.enumerate(&nums, u, |l, w| {
                    if pred(l) {
                        sum += w;
                    }
                });
                sum.into()
            }
            None => {
                let mut sum = BigUint::zero();
                self.enumerate(&self.num, u, |l, w| {
                    if pred(l) {
                        sum += w;
                    }
                });
                sum
            }
        };
        BigRational::new(numer.into(), self.den_pow(u).into())
    }
}

/// Relabels a vertex sequence by first occurrence; two sequences with the
/// same shape have the same survival law.
fn shape(vertices: &[usize]) -> Vec<u8> {
    let mut seen: Vec<usize> = Vec::with_capacity(vertices.len());
    vertices
        .iter()
        .map(|v| match seen.iter().position(|w| w == v) {
            Some(i) => i as u8,
            None => {
                seen.push(*v);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

fn distinct(shape: &[u8]) -> usize {
    shape.iter().map(|&s| s as usize + 1).max().unwrap_or(0)
}

/// Endpoints of a crossing's two edges, each pair sorted and the pairs sorted.
fn crossing_vertices(drawing: &Drawing, first: usize, second: usize) -> [usize; 4] {
    let (a, b) = drawing.graph().edge(first);
    let (x, y) = drawing.graph().edge(second);
    let (p, q) = ((a.min(b), a.max(b)), (x.min(y), x.max(y)));
    let (p, q) = (p.min(q), p.max(q));
    [p.0, p.1, q.0, q.1]
}

fn survives(l: &[usize], offset: usize) -> bool {
    type_of(l[offset], l[offset + 1]) == type_of(l[offset + 2], l[offset + 3])
}

struct ShapeCache<'a> {
    law: &'a Law,
    single: HashMap<Vec<u8>, BigRational>,
    pair: HashMap<Vec<u8>, BigRational>,
}

impl<'a> ShapeCache<'a> {
    fn new(law: &'a Law) -> Self {
        Self { law, single: HashMap::new(), pair: HashMap::new() }
    }

    fn single(&mut self, vertices: &[usize; 4]) -> BigRational {
        let key = shape(vertices);
        let law = self.law;
        self.single
            .entry(key)
            .or_insert_with_key(|key| {
                let key = key.clone();
                law.probability(distinct(&key), move |l| {
                    let v: Vec<usize> = key.iter().map(|&s| l[s as usize]).collect();
                    survives(&v, 0)
                })
            })
            .clone()
    }

    /// Probability that two crossings both survive.
    fn both(&mut self, c: &[usize; 4], d: &[usize; 4]) -> BigRational {
        let mut joined = [0usize; 8];
        joined[..4].copy_from_slice(c);
        joined[4..].copy_from_slice(d);
        let mut swapped = [0usize; 8];
        swapped[..4].copy_from_slice(d);
        swapped[4..].copy_from_slice(c);
        let key = shape(&joined).min(shape(&swapped));
        let law = self.law;
        self.pair
            .entry(key)
            .or_insert_with_key(|key| {
                let key = key.clone();
                law.probability(distinct(&key), move |l| {
                    let v: Vec<usize> = key.iter().map(|&s| l[s as usize]).collect();
                    survives(&v, 0) && survives(&v, 4)
                })
            })
            .clone()
    }
}

/// `E[sum_i C_i]`, the expected number of surviving crossings counted with
/// multiplicity, by joint enumeration of each crossing's endpoint labels.
pub fn exact_survival_expectation(drawing: &Drawing, weights: &WeightVector) -> BigRational {
    let law = Law::new(weights);
    let mut cache = ShapeCache::new(&law);
    let mut sum = BigRational::zero();
    for c in drawing.crossings() {
        let p = cache.single(&crossing_vertices(drawing, c.first, c.second));
        sum += p * BigRational::from_integer(c.multiplicity.into());
    }
    sum
}

/// `Var[sum_i C_i]`. Crossings with disjoint vertex sets are independent,
/// so only overlapping pairs contribute covariance terms.
pub fn exact_survival_variance(drawing: &Drawing, weights: &WeightVector) -> Result<BigRational> {
    let law = Law::new(weights);
    let crossings = drawing.crossings();
    let verts: Vec<[usize; 4]> = crossings.iter().map(|c| crossing_vertices(drawing, c.first, c.second)).collect();
    let mut by_vertex = vec![Vec::new(); drawing.graph().n()];
    for (i, vs) in verts.iter().enumerate() {
        for &v in vs {
            if by_vertex[v].last() != Some(&i) {
                by_vertex[v].push(i);
            }
        }
    }
    let pairs: u64 = by_vertex.iter().map(|l| (l.len() as u64).pow(2)).sum();
    if pairs > ENUMERATION_CAP {
        return Err(Error::SearchSpaceTooLarge { size: pairs as f64, cap: ENUMERATION_CAP as f64 });
    }
    let mut cache = ShapeCache::new(&law);
    let singles: Vec<BigRational> = verts.iter().map(|v| cache.single(v)).collect();
    let mut var = BigRational::zero();
    let mut mark = vec![usize::MAX; crossings.len()];
    for (i, vs) in verts.iter().enumerate() {
        let mi = BigRational::from_integer(crossings[i].multiplicity.into());
        var += &mi * &mi * (&singles[i] - &singles[i] * &singles[i]);
        for &v in vs {
            for &j in &by_vertex[v] {
                if j <= i || mark[j] == i {
                    continue;
                }
                mark[j] = i;
                let mj = BigRational::from_integer(crossings[j].multiplicity.into());
                let cov = cache.both(vs, &verts[j]) - &singles[i] * &singles[j];
                var += BigRational::from_integer(2.into()) * &mi * mj * cov;
            }
        }
    }
    Ok(var)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartnerSurvival {
    pub edge: usize,
    pub multiplicity: u64,
    /// The partner shares an endpoint with the conditioned edge.
    pub adjacent: bool,
    pub probability: BigRational,
}

/// Law of `g(e)` given the labels of `e`'s endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalSurvival {
    pub edge: usize,
    pub i: usize,
    pub j: usize,
    pub free_vertices: Vec<usize>,
    pub partners: Vec<PartnerSurvival>,
    /// `(s, Pr[g(e) = s])` for every `s` of positive probability, ascending.
    pub distribution: Vec<(u64, BigRational)>,
    pub mean: BigRational,
}

impl ConditionalSurvival {
    /// `Pr[g(e) >= s]`.
    pub fn tail_at_least(&self, s: u64) -> BigRational {
        self.distribution.iter().filter(|(v, _)| *v >= s).map(|(_, p)| p.clone()).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "edge": self.edge,
            "i": self.i,
            "j": self.j,
            "free_vertices": self.free_vertices,
            "partners": self.partners.iter().map(|p| json!({
                "edge": p.edge,
                "multiplicity": p.multiplicity,
                "adjacent": p.adjacent,
                "probability": rational_json(&p.probability),
            })).collect::<Vec<_>>(),
            "distribution": self.distribution.iter().map(|(s, p)| json!({
                "g": s,
                "probability": rational_json(p),
            })).collect::<Vec<_>>(),
            "mean": rational_json(&self.mean),
        })
    }
}

/// Enumerates the labels of every partner endpoint outside `edge`, with
/// `xi_u = i` and `xi_v = j` for `edge = uv`.
pub fn exact_conditional_survival(
    drawing: &Drawing,
    weights: &WeightVector,
    edge: usize,
    i: usize,
    j: usize,
) -> Result<ConditionalSurvival> {
    let graph = drawing.graph();
    if edge >= graph.m() {
        return Err(invalid_arg(format!("edge {edge} does not exist")));
    }
    let k = weights.k();
    if i >= k || j >= k {
        return Err(invalid_arg(format!("labels ({i}, {j}) must be below k = {k}")));
    }
    let (u, v) = graph.edge(edge);
    let partners = drawing.partners(edge);
    let mut free: Vec<usize> = partners
        .iter()
        .flat_map(|&(f, _)| {
            let (a, b) = graph.edge(f);
            [a, b]
        })
        .filter(|&w| w != u && w != v)
        .collect();
    free.sort_unstable();
    free.dedup();
    let law = Law::new(weights);
    let t = free.len();
    space_size(law.support.len().max(1), t, CONDITIONAL_CAP)?;
    let target = type_of(i, j);
    // Each partner endpoint is either fixed by the conditioning or a free
    // variable; `Fixed(l)` / `Free(slot)`.
    enum Slot {
        Fixed(usize),
        Free(usize),
    }
    let slot = |w: usize| {
        if w == u {
            Slot::Fixed(i)
        } else if w == v {
            Slot::Fixed(j)
        } else {
            Slot::Free(free.binary_search(&w).expect("collected above"))
        }
    };
    let ends: Vec<(Slot, Slot, u64)> = partners
        .iter()
        .map(|&(f, mult)| {
            let (a, b) = graph.edge(f);
            (slot(a), slot(b), mult)
        })
        .collect();
    let read = |s: &Slot, l: &[usize]| match *s {
        Slot::Fixed(x) => x,
        Slot::Free(x) => l[x],
    };

    let mut dist: BTreeMap<u64, BigUint> = BTreeMap::new();
    let mut per_partner = vec![BigUint::zero(); partners.len()];
    let mut visit = |l: &[usize], w: BigUint| {
        let mut g = 0;
        for (p, (a, b, mult)) in ends.iter().enumerate() {
            if type_of(read(a, l), read(b, l)) == target {
                g += mult;
                per_partner[p] += &w;
            }
        }
        *dist.entry(g).or_default() += w;
    };
    match law.small(t) {
        Some(nums) => law.enumerate(&nums, t, |l, w| visit(l, BigUint::from(*w))),
        None => law.enumerate(&law.num, t, |l, w| visit(l, w.clone())),
    }
    let den: BigInt = law.den_pow(t).into();
    let frac = |x: BigUint| BigRational::new(x.into(), den.clone());
    let distribution: Vec<(u64, BigRational)> = dist.into_iter().map(|(s, w)| (s, frac(w))).collect();
    let mean = distribution
        .iter()
        .map(|(s, p)| p * BigRational::from_integer((*s).into()))
        .sum();
    let partners = partners
        .iter()
        .zip(per_partner)
        .map(|(&(f, multiplicity), w)| PartnerSurvival {
            edge: f,
            multiplicity,
            adjacent: graph.shares_endpoint(edge, f),
            probability: frac(w),
        })
        .collect();
    Ok(ConditionalSurvival { edge, i, j, free_vertices: free, partners, distribution, mean })
}

/// Dependency degrees of the events `A_e = {g(e) too large}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DependencyScopes {
    /// `A_e` and `A_f` count as dependent when `e` and `f` share an
    /// endpoint or some vertex lies on a crossing partner of each.
    pub conditional: Vec<usize>,
    /// `A_e` and `A_f` share a variable: the endpoints of `e` and of its
    /// partners meet the endpoints of `f` and of its partners.
    pub full: Vec<usize>,
    pub max_conditional: usize,
    pub max_full: usize,
}

pub fn dependency_scopes(drawing: &Drawing) -> DependencyScopes {
    let graph = drawing.graph();
    let (n, m) = (graph.n(), graph.m());
    let partner_vertices: Vec<Vec<usize>> = (0..m)
        .map(|e| {
            let mut vs: Vec<usize> = drawing
                .partners(e)
                .iter()
                .flat_map(|&(f, _)| {
                    let (a, b) = graph.edge(f);
                    [a, b]
                })
                .collect();
            vs.sort_unstable();
            vs.dedup();
            vs
        })
        .collect();
    let full_vertices: Vec<Vec<usize>> = (0..m)
        .map(|e| {
            let (u, v) = graph.edge(e);
            let mut vs = partner_vertices[e].clone();
            vs.extend([u, v]);
            vs.sort_unstable();
            vs.dedup();
            vs
        })
        .collect();
    let invert = |scopes: &[Vec<usize>]| {
        let mut by_vertex = vec![Vec::new(); n];
        for (e, vs) in scopes.iter().enumerate() {
            for &v in vs {
                by_vertex[v].push(e);
            }
        }
        by_vertex
    };
    let partner_index = invert(&partner_vertices);
    let full_index = invert(&full_vertices);
    let mut mark = vec![usize::MAX; m];
    let mut conditional = vec![0; m];
    let mut full = vec![0; m];
    for e in 0..m {
        let (u, v) = graph.edge(e);
        let mut count = 0;
        let mut touch = |f: usize, mark: &mut [usize]| {
            if f != e && mark[f] != e {
                mark[f] = e;
                count += 1;
            }
        };
        for &f in graph.incident_edges(u).iter().chain(graph.incident_edges(v)) {
            touch(f, &mut mark);
        }
        for &w in &partner_vertices[e] {
            for &f in &partner_index[w] {
                touch(f, &mut mark);
            }
        }
        conditional[e] = count;
    }
    mark.iter_mut().for_each(|x| *x = usize::MAX);
    for e in 0..m {
        let mut count = 0;
        for &w in &full_vertices[e] {
            for &f in &full_index[w] {
                if f != e && mark[f] != e {
                    mark[f] = e;
                    count += 1;
                }
            }
        }
        full[e] = count;
    }
    DependencyScopes {
        max_conditional: conditional.iter().copied().max().unwrap_or(0),
        max_full: full.iter().copied().max().unwrap_or(0),
        conditional,
        full,
    }
}
