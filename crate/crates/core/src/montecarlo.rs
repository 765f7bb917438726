//! Sampling the construction and comparing against exact values and bounds.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::bounds::mcdiarmid_edge_tail;
use crate::decompose::{assign_planes, sample_labeling, surviving_report};
use crate::drawing::Drawing;
use crate::error::{invalid_arg, Result};
use crate::oracle::{exact_survival_expectation, exact_survival_variance, rational_json};
use crate::rng::derive_seed;
use crate::weights::WeightVector;

pub const MIN_TRIALS: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloConfig {
    pub trials: u64,
    pub seed: u64,
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeTail {
    pub edge: usize,
    /// Trials with `g(e) > (gamma + eps) L`.
    pub exceed: u64,
    pub empirical: f64,
    pub bound: f64,
    /// Four binomial standard deviations at the bound.
    pub slack: f64,
    pub dominated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub trials: u64,
    pub seed: u64,
    pub k: usize,
    pub weights: Vec<f64>,
    pub gamma: f64,
    pub epsilon: f64,
    pub crossings: u64,
    pub lcr: u64,
    pub max_degree: usize,
    pub mean_total: f64,
    /// Unbiased sample variance of `sum_i C_i`.
    pub variance_total: f64,
    pub exact_mean: Value,
    pub exact_variance: Option<f64>,
    /// `(mean - exact) / sqrt(var / N)`, with the exact variance when known.
    pub z_score: Option<f64>,
    /// `(2/k^2 - 1/k^3) C`, for uniform weights.
    pub uniform_formula_mean: Option<f64>,
    pub mean_max_load: f64,
    pub max_load_seen: u64,
    pub tail_threshold: f64,
    pub edge_tail_bound: f64,
    pub edge_tails: Vec<EdgeTail>,
    pub tails_dominated: bool,
}

#[derive(Clone)]
struct Tally {
    sum: u128,
    sum_sq: u128,
    sum_max: u128,
    max_seen: u64,
    exceed: Vec<u64>,
}

impl Tally {
    fn new(m: usize) -> Self {
        Self { sum: 0, sum_sq: 0, sum_max: 0, max_seen: 0, exceed: vec![0; m] }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.sum_max += other.sum_max;
        self.max_seen = self.max_seen.max(other.max_seen);
        self.exceed.iter_mut().zip(other.exceed).for_each(|(a, b)| *a += b);
        self
    }
}

/// Runs `trials` independent labelings; trial `t` uses the derived seed
/// `derive_seed(seed, t)`, so the result does not depend on scheduling.
pub fn run_montecarlo(drawing: &Drawing, weights: &WeightVector, cfg: &MonteCarloConfig) -> Result<MonteCarloSummary> {
    if cfg.trials < MIN_TRIALS {
        return Err(invalid_arg(format!("at least {MIN_TRIALS} trials are needed, got {}", cfg.trials)));
    }
    if !(cfg.epsilon >= 0.0) {
        return Err(invalid_arg("epsilon must be nonnegative"));
    }
    let graph = drawing.graph();
    let m = graph.m();
    let lcr = drawing.local_crossing_number();
    let threshold = (weights.gamma() + cfg.epsilon) * lcr as f64;
    let tally = (0..cfg.trials)
        .into_par_iter()
        .fold(
            || Tally::new(m),
            |mut acc, t| {
                let labeling = sample_labeling(graph, weights, derive_seed(cfg.seed, t));
                let assignment = assign_planes(graph, &labeling).expect("labeling covers the graph");
                let report = surviving_report(drawing, &assignment).expect("assignment covers the drawing");
                acc.sum += report.total as u128;
                acc.sum_sq += (report.total as u128).pow(2);
                acc.sum_max += report.max_load as u128;
                acc.max_seen = acc.max_seen.max(report.max_load);
                for (e, &g) in report.g.iter().enumerate() {
                    if g as f64 > threshold {
                        acc.exceed[e] += 1;
                    }
                }
                acc
            },
        )
        .reduce(|| Tally::new(m), Tally::merge);

    let n = cfg.trials as f64;
    let mean_total = tally.sum as f64 / n;
    let variance_total = (cfg.trials as u128 * tally.sum_sq - tally.sum * tally.sum) as f64 / (n * (n - 1.0));
    let exact = exact_survival_expectation(drawing, weights);
    let exact_f = num_traits::ToPrimitive::to_f64(&exact).unwrap_or(f64::NAN);
    let exact_variance = exact_survival_variance(drawing, weights)
        .ok()
        .and_then(|v| num_traits::ToPrimitive::to_f64(&v));
    let sd = (exact_variance.unwrap_or(variance_total) / n).sqrt();
    let diff = mean_total - exact_f;
    let z_score = if sd > 0.0 {
        Some(diff / sd)
    } else if diff == 0.0 {
        Some(0.0)
    } else {
        None
    };
    let k = weights.k();
    let uniform = weights.probs().iter().all(|&p| p == weights.probs()[0]);
    let uniform_formula_mean = uniform.then(|| {
        let kf = k as f64;
        (2.0 / (kf * kf) - 1.0 / (kf * kf * kf)) * drawing.total_crossings() as f64
    });
    let max_degree = graph.max_degree();
    let bound = mcdiarmid_edge_tail(cfg.epsilon, lcr, max_degree as u64);
    let slack = 4.0 * (bound * (1.0 - bound) / n).sqrt();
    let edge_tails: Vec<EdgeTail> = tally
        .exceed
        .iter()
        .enumerate()
        .map(|(edge, &exceed)| {
            let empirical = exceed as f64 / n;
            EdgeTail { edge, exceed, empirical, bound, slack, dominated: empirical <= bound + slack }
        })
        .collect();
    Ok(MonteCarloSummary {
        trials: cfg.trials,
        seed: cfg.seed,
        k,
        weights: weights.probs().to_vec(),
        gamma: weights.gamma(),
        epsilon: cfg.epsilon,
        crossings: drawing.total_crossings(),
        lcr,
        max_degree,
        mean_total,
        variance_total,
        exact_mean: rational_json(&exact),
        exact_variance,
        z_score,
        uniform_formula_mean,
        mean_max_load: tally.sum_max as f64 / n,
        max_load_seen: tally.max_seen,
        tail_threshold: threshold,
        edge_tail_bound: bound,
        tails_dominated: edge_tails.iter().all(|t| t.dominated),
        edge_tails,
    })
}
