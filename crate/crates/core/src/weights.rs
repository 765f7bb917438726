//! Label distributions for the random vertex partition.
//!
//! A [`WeightVector`] holds `p_0..p_{k-1}` together with
//! `gamma = max(max_i p_i^2, max_{i != j} 2 p_i p_j)`, the largest
//! conditional survival probability of a crossing.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{invalid_arg, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    probs: Vec<f64>,
    gamma: f64,
    exact: Option<ExactWeights>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ExactWeights {
    probs: Vec<Rational64>,
    gamma: Rational64,
    /// Common denominator and the numerators over it, for exact sampling.
    denominator: u64,
    numerators: Vec<u64>,
}

/// `max(max_i p_i^2, max_{i != j} 2 p_i p_j)`.
pub fn gamma_of(probs: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for (i, &p) in probs.iter().enumerate() {
        best = best.max(p * p);
        for &q in &probs[i + 1..] {
            best = best.max(2.0 * p * q);
        }
    }
    best
}

pub fn exact_gamma(probs: &[Rational64]) -> Rational64 {
    let two = Rational64::from_integer(2);
    let mut best = Rational64::zero();
    for (i, &p) in probs.iter().enumerate() {
        best = best.max(p * p);
        for &q in &probs[i + 1..] {
            best = best.max(two * p * q);
        }
    }
    best
}

impl WeightVector {
    /// Exact weights. Each `p_i` must lie in `[0, 1]` and the sum must be 1.
    pub fn from_rationals(probs: Vec<Rational64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(invalid_arg("weights need k >= 1 entries"));
        }
        if probs.iter().any(|p| *p < Rational64::zero() || *p > Rational64::one()) {
            return Err(invalid_arg("every weight must lie in [0, 1]"));
        }
        let sum: Rational64 = probs.iter().sum();
        if sum != Rational64::one() {
            return Err(invalid_arg(format!("weights sum to {sum}, not 1")));
        }
        let denominator = probs.iter().fold(1i64, |acc, p| acc.lcm(p.denom())) as u64;
        let numerators = probs
            .iter()
            .map(|p| (*p.numer() as u64) * (denominator / *p.denom() as u64))
            .collect();
        let gamma = exact_gamma(&probs);
        Ok(Self {
            probs: probs.iter().map(|p| p.to_f64().unwrap_or(f64::NAN)).collect(),
            gamma: gamma.to_f64().unwrap_or(f64::NAN),
            exact: Some(ExactWeights { probs, gamma, denominator, numerators }),
        })
    }

    /// Floating-point weights, summing to 1 within `1e-12`.
    pub fn from_floats(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(invalid_arg("weights need k >= 1 entries"));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0 || *p > 1.0) {
            return Err(invalid_arg("every weight must lie in [0, 1]"));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(invalid_arg(format!("weights sum to {sum}, not 1")));
        }
        let gamma = gamma_of(&probs);
        Ok(Self { probs, gamma, exact: None })
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid_arg("k must be at least 1"));
        }
        Self::from_rationals(vec![Rational64::new(1, k as i64); k])
    }

    /// Parses `"2/3,1/3"` or `"0.5,0.25,0.25"`. Fractions and terminating
    /// decimals are read exactly.
    pub fn parse(text: &str) -> Result<Self> {
        let probs = text
            .split(',')
            .map(|tok| parse_rational(tok.trim()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rationals(probs)
    }

    pub fn k(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn exact_probs(&self) -> Option<&[Rational64]> {
        self.exact.as_ref().map(|e| e.probs.as_slice())
    }

    pub fn exact_gamma(&self) -> Option<Rational64> {
        self.exact.as_ref().map(|e| e.gamma)
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// `(D, [a_i])` with `p_i = a_i / D`, for exact weights.
    pub fn common_denominator(&self) -> Option<(u64, &[u64])> {
        self.exact.as_ref().map(|e| (e.denominator, e.numerators.as_slice()))
    }

    /// Draws one label with `Pr[i] = p_i`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.exact {
            Some(exact) => {
                let mut x = rng.gen_range(0..exact.denominator);
                for (i, &a) in exact.numerators.iter().enumerate() {
                    if x < a {
                        return i;
                    }
                    x -= a;
                }
                unreachable!("numerators sum to the denominator")
            }
            None => {
                let mut x: f64 = rng.gen();
                let mut last = 0;
                for (i, &p) in self.probs.iter().enumerate() {
                    if p > 0.0 {
                        if x < p {
                            return i;
                        }
                        x -= p;
                        last = i;
                    }
                }
                last
            }
        }
    }
}

fn parse_rational(tok: &str) -> Result<Rational64> {
    let bad = || invalid_arg(format!("cannot read weight `{tok}` as a fraction or decimal"));
    if let Some((n, d)) = tok.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(n, d));
    }
    let (int, frac) = tok.split_once('.').unwrap_or((tok, ""));
    if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: i64 = format!("{int}{frac}").parse().map_err(|_| bad())?;
    Ok(Rational64::new(digits, 10i64.pow(frac.len() as u32)))
}

/// The minimax-optimal weights: `(1)` for `k = 1`, `(2/3, 1/3)` for `k = 2`
/// and the uniform distribution for `k >= 3`.
pub fn optimal_weights(k: usize) -> Result<WeightVector> {
    match k {
        0 => Err(invalid_arg("k must be at least 1")),
        2 => WeightVector::from_rationals(vec![Rational64::new(2, 3), Rational64::new(1, 3)]),
        _ => WeightVector::uniform(k),
    }
}

/// Number of refinement passes after the coarse grid. Each pass searches a
/// window of one coarse unit around the incumbent at a 100x finer grid.
pub const REFINEMENT_PASSES: u32 = 2;

/// Numerical minimax search over the probability simplex.
///
/// Enumerates descending-sorted probability vectors on the grid of the given
/// step, keeping the lexicographically smallest vector among equal
/// objectives, then refines around the best point. Branch-and-bound on the
/// partial objective keeps the enumeration exhaustive but tractable.
pub fn minimax_weights_grid(k: usize, step: f64) -> Result<WeightVector> {
    minimax_weights_grid_with(k, step, REFINEMENT_PASSES)
}

pub fn minimax_weights_grid_with(k: usize, step: f64, passes: u32) -> Result<WeightVector> {
    if !(2..=6).contains(&k) {
        return Err(invalid_arg("grid search supports 2 <= k <= 6"));
    }
    if !(step > 0.0) || step > 1e-2 {
        return Err(invalid_arg(format!("grid step {step} is too coarse (need 0 < step <= 1e-2)")));
    }
    let units = (1.0 / step).round();
    if (units * step - 1.0).abs() > 1e-9 || units > 1e9 {
        return Err(invalid_arg(format!("1/step must be an integer, got {}", 1.0 / step)));
    }
    let mut units = units as u64;
    let mut grid = GridSearch::new(k, units, vec![0; k], vec![units; k]);
    let mut best = grid.run().ok_or_else(|| Error::InvalidArgument("empty grid".into()))?;
    for _ in 0..passes {
        units *= 100;
        let lo = best.iter().map(|&p| (p * 100).saturating_sub(100)).collect();
        let hi = best.iter().map(|&p| (p * 100 + 100).min(units)).collect();
        grid = GridSearch::new(k, units, lo, hi);
        best = grid.run().expect("window contains the previous optimum");
    }
    let probs: Vec<f64> = best.iter().map(|&p| p as f64 / units as f64).collect();
    WeightVector::from_floats(probs)
}

struct GridSearch {
    k: usize,
    total: u64,
    lo: Vec<u64>,
    hi: Vec<u64>,
    current: Vec<u64>,
    best: Option<(u128, Vec<u64>)>,
}

impl GridSearch {
    fn new(k: usize, total: u64, lo: Vec<u64>, hi: Vec<u64>) -> Self {
        Self { k, total, lo, hi, current: Vec::with_capacity(k), best: None }
    }

    fn run(&mut self) -> Option<Vec<u64>> {
        self.descend(self.total, u64::MAX, 0);
        self.best.take().map(|(_, v)| v)
    }

    /// Objective over the assigned prefix, in squared grid units.
    fn partial_objective(values: &[u64]) -> u128 {
        let mut best = 0u128;
        for (i, &p) in values.iter().enumerate() {
            best = best.max(p as u128 * p as u128);
            for &q in &values[i + 1..] {
                best = best.max(2 * p as u128 * q as u128);
            }
        }
        best
    }

    fn descend(&mut self, remaining: u64, cap: u64, depth: usize) {
        if let Some((best, _)) = &self.best {
            if Self::partial_objective(&self.current) >= *best {
                return;
            }
        }
        if depth == self.k {
            if remaining == 0 {
                let value = Self::partial_objective(&self.current);
                self.best = Some((value, self.current.clone()));
            }
            return;
        }
        let slots_after = (self.k - depth - 1) as u64;
        let hi = self.hi[depth].min(cap).min(remaining);
        let lo = self.lo[depth];
        if lo > hi {
            return;
        }
        for value in lo..=hi {
            let rest = remaining - value;
            // The remaining slots are capped by `value` and their windows.
            let max_rest: u64 = self.hi[depth + 1..].iter().map(|&h| h.min(value)).sum();
            let min_rest: u64 = self.lo[depth + 1..].iter().sum();
            if rest > max_rest || rest < min_rest || (slots_after == 0 && rest != 0) {
                continue;
            }
            self.current.push(value);
            self.descend(rest, value, depth + 1);
            self.current.pop();
        }
    }
}
