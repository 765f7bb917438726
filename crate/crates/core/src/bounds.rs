//! Closed-form calculators for the concentration, local-lemma and crossing
//! inequalities used by the decomposition analysis.
//!
//! Calculators whose inequality carries a hypothesis return a [`Bound`] so
//! that "the bound does not apply" is distinguishable from a value of 0.

use serde::Serialize;

use crate::error::{invalid_arg, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    Value(f64),
    HypothesisUnmet(String),
}

impl Bound {
    pub fn value(&self) -> Option<f64> {
        match self {
            Bound::Value(v) => Some(*v),
            Bound::HypothesisUnmet(_) => None,
        }
    }

    fn unmet(reason: impl Into<String>) -> Self {
        Bound::HypothesisUnmet(reason.into())
    }
}

/// Base of the logarithms in the lcr thresholds; natural by default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

/// Range widths `b_i - a_i` (or bounded-difference constants `c_i`) of the
/// summands, listed or summarized as `count` copies of one width.
#[derive(Debug, Clone, PartialEq)]
pub enum Widths {
    Each(Vec<f64>),
    Uniform { count: u64, width: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailBoundInputs {
    pub deviation: f64,
    pub widths: Widths,
}

impl TailBoundInputs {
    fn sum_of_squares(&self) -> Result<f64> {
        let sum = match &self.widths {
            Widths::Each(w) => {
                if w.iter().any(|x| !(*x >= 0.0)) {
                    return Err(invalid_arg("widths must be nonnegative"));
                }
                w.iter().map(|x| x * x).sum()
            }
            Widths::Uniform { count, width } => {
                if !(*width >= 0.0) {
                    return Err(invalid_arg("widths must be nonnegative"));
                }
                *count as f64 * width * width
            }
        };
        if sum <= 0.0 {
            return Err(invalid_arg("at least one width must be positive"));
        }
        Ok(sum)
    }
}

/// `exp(-2 t^2 / sum (b_i - a_i)^2)`: one-sided tail of a sum of
/// independent bounded variables.
pub fn hoeffding_tail(inputs: &TailBoundInputs) -> Result<f64> {
    if !(inputs.deviation >= 0.0) {
        return Err(invalid_arg("deviation must be nonnegative"));
    }
    let t = inputs.deviation;
    Ok((-2.0 * t * t / inputs.sum_of_squares()?).exp())
}

/// Same expression with bounded-difference constants: one-sided tail of a
/// function of independent variables.
pub fn mcdiarmid_tail(inputs: &TailBoundInputs) -> Result<f64> {
    hoeffding_tail(inputs)
}

/// `exp(-2 eps^2 L / Δ)`: tail of an edge's surviving load above its
/// conditional mean by `eps L`, using `sum c_i^2 <= Δ sum c_i <= Δ L`.
pub fn mcdiarmid_edge_tail(epsilon: f64, lcr: u64, max_degree: u64) -> f64 {
    if lcr == 0 || max_degree == 0 {
        return 1.0;
    }
    (-2.0 * epsilon * epsilon * lcr as f64 / max_degree as f64).exp()
}

/// Multiplier in the symmetric local lemma condition `c q (Δ + 1) < 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LllConstant {
    #[default]
    Three,
    E,
}

impl LllConstant {
    fn value(self) -> f64 {
        match self {
            LllConstant::Three => 3.0,
            LllConstant::E => std::f64::consts::E,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LllInstance {
    /// Upper bound on every event probability.
    pub q: f64,
    /// Maximum degree of the dependency graph.
    pub dependency_degree: u64,
    pub events: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LllOutcome {
    pub holds: bool,
    /// `(1 - 1/(Δ+1))^n` when the condition holds, else 0.
    pub success_lower_bound: f64,
}

pub fn lll_check(instance: &LllInstance, constant: LllConstant) -> Result<LllOutcome> {
    if !(0.0..=1.0).contains(&instance.q) {
        return Err(invalid_arg("q must lie in [0, 1]"));
    }
    let d = instance.dependency_degree as f64;
    let holds = constant.value() * instance.q * (d + 1.0) < 1.0;
    let success_lower_bound = if holds { (1.0 - 1.0 / (d + 1.0)).powf(instance.events as f64) } else { 0.0 };
    Ok(LllOutcome { holds, success_lower_bound })
}

fn dense_enough(m: u64, n: u64) -> bool {
    m as f64 > 6.95 * n as f64
}

/// Crossing lemma: `cr(G) >= m^3 / 29 n^2` when `m > 6.95 n`.
pub fn crossing_lower_bound(m: u64, n: u64) -> Bound {
    if !dense_enough(m, n) {
        return Bound::unmet(format!("needs m > 6.95 n, got m = {m}, n = {n}"));
    }
    let (m, n) = (m as f64, n as f64);
    Bound::Value(m * m * m / (29.0 * n * n))
}

/// `lcr(G) >= 2 m^2 / 29 n^2` when `m > 6.95 n`, from `lcr >= 2 cr / m`.
pub fn lcr_lower_bound(m: u64, n: u64) -> Bound {
    if !dense_enough(m, n) {
        return Bound::unmet(format!("needs m > 6.95 n, got m = {m}, n = {n}"));
    }
    let (m, n) = (m as f64, n as f64);
    Bound::Value(2.0 * m * m / (29.0 * n * n))
}

/// Local crossing number above which the `gamma_k + eps` decomposition is
/// guaranteed for graphs with `Δ <= alpha * average degree`:
/// `1000 alpha^2 eps^-4 (log alpha + log(1/eps))^2`.
pub fn regular_regime_threshold(alpha: f64, epsilon: f64, base: LogBase) -> Bound {
    if !(alpha >= 1.0) {
        return Bound::unmet(format!("needs alpha >= 1, got {alpha}"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Bound::unmet(format!("needs 0 < eps < 1, got {epsilon}"));
    }
    let logs = base.log(alpha) + base.log(1.0 / epsilon);
    Bound::Value(1000.0 * alpha * alpha * epsilon.powi(-4) * logs * logs)
}

/// Local crossing number above which the `1/k + eps` decomposition is
/// guaranteed for arbitrary graphs: `10 log(1/eps) / eps^2`.
pub fn irregular_regime_threshold(epsilon: f64, base: LogBase) -> Bound {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Bound::unmet(format!("needs 0 < eps < 1, got {epsilon}"));
    }
    Bound::Value(10.0 * base.log(1.0 / epsilon) / (epsilon * epsilon))
}

/// Number of other edge events one edge event can depend on:
/// `2 L^2 Δ + 2 Δ`.
pub fn dependency_degree_bound(lcr: u64, max_degree: u64) -> u64 {
    2 * lcr * lcr * max_degree + 2 * max_degree
}

/// Lower bound `(1 - 1/(2 L^2 Δ + 2 Δ + 1))^m` on the probability that no
/// edge is overloaded.
pub fn local_lemma_success_bound(lcr: u64, max_degree: u64, m: u64) -> f64 {
    let d = dependency_degree_bound(lcr, max_degree) as f64;
    (1.0 - 1.0 / (d + 1.0)).powf(m as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompleteGraphBound {
    /// `(2/k^2) C(n,2)^2 / (29 n^2)`, valid when `C(n,2)/k > 6.95 n`.
    pub value: Bound,
    /// Limit ratio `9 / (58 k^2)` against the upper estimate `lcr(K_n) <= (2/9) C(n,2)`.
    pub ratio_floor: f64,
}

/// Lower bound on the `k`-plane local crossing number of `K_n`.
pub fn kn_lower_bound(n: u64, k: u64) -> Result<CompleteGraphBound> {
    if k == 0 {
        return Err(invalid_arg("k must be at least 1"));
    }
    let kf = k as f64;
    let pairs = (n * n.saturating_sub(1) / 2) as f64;
    let value = if pairs / kf > 6.95 * n as f64 {
        let nf = n as f64;
        Bound::Value((2.0 / (kf * kf)) * pairs * pairs / (29.0 * nf * nf))
    } else {
        Bound::unmet(format!("needs C(n,2)/k > 6.95 n, got n = {n}, k = {k}"))
    };
    Ok(CompleteGraphBound { value, ratio_floor: 9.0 / (58.0 * kf * kf) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeParams {
    pub alpha: f64,
    pub epsilon: f64,
    pub k: u64,
    pub lcr: u64,
    pub max_degree: u64,
    pub m: u64,
    pub n: u64,
    pub cr: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbabilityGap {
    /// `m / (L^2 Δ)`.
    pub lhs: f64,
    /// `2 (eps C)^2 / (n (L Δ)^2)`.
    pub rhs: f64,
    pub holds: bool,
    /// The equivalent condition `C^2 > m n Δ / (2 eps^2)`.
    pub squared_condition: bool,
}

/// Compares the McDiarmid tail of the surviving total with the local lemma
/// success bound; the total and load targets can be met together when
/// `lhs < rhs`.
pub fn combined_probability_gap(p: &RegimeParams) -> ProbabilityGap {
    let (m, n, d, l, c, e) = (p.m as f64, p.n as f64, p.max_degree as f64, p.lcr as f64, p.cr as f64, p.epsilon);
    let lhs = m / (l * l * d);
    let rhs = 2.0 * (e * c) * (e * c) / (n * (l * d) * (l * d));
    ProbabilityGap { lhs, rhs, holds: lhs < rhs, squared_condition: c * c > m * n * d / (2.0 * e * e) }
}

/// Parameters for a full bounds table; absent fields skip their rows.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundsQuery {
    pub n: Option<u64>,
    pub m: Option<u64>,
    pub max_degree: Option<u64>,
    pub lcr: Option<u64>,
    pub cr: Option<u64>,
    pub k: Option<u64>,
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    pub log_base: LogBase,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub name: &'static str,
    pub bound: Bound,
}

/// Evaluates every calculator whose inputs are present.
pub fn bounds_table(q: &BoundsQuery) -> Vec<BoundRow> {
    let mut rows = Vec::new();
    let mut push = |name, bound| rows.push(BoundRow { name, bound });
    if let (Some(n), Some(m)) = (q.n, q.m) {
        push("cr >= m^3/(29 n^2)", crossing_lower_bound(m, n));
        push("lcr >= 2 m^2/(29 n^2)", lcr_lower_bound(m, n));
    }
    if let Some(eps) = q.epsilon {
        push("lcr threshold, arbitrary graphs", irregular_regime_threshold(eps, q.log_base));
        if let Some(alpha) = q.alpha {
            push("lcr threshold, alpha-regular graphs", regular_regime_threshold(alpha, eps, q.log_base));
        }
    }
    if let (Some(eps), Some(l), Some(d)) = (q.epsilon, q.lcr, q.max_degree) {
        push("edge overload tail exp(-2 eps^2 L/D)", Bound::Value(mcdiarmid_edge_tail(eps, l, d)));
    }
    if let (Some(l), Some(d)) = (q.lcr, q.max_degree) {
        push("dependency degree 2 L^2 D + 2 D", Bound::Value(dependency_degree_bound(l, d) as f64));
        if let Some(m) = q.m {
            push("Pr[no overloaded edge] >=", Bound::Value(local_lemma_success_bound(l, d, m)));
        }
    }
    if let (Some(n), Some(k)) = (q.n, q.k) {
        if let Ok(b) = kn_lower_bound(n, k) {
            push("lcr_k(K_n) >=", b.value);
            push("liminf lcr_k(K_n)/lcr(K_n) >=", Bound::Value(b.ratio_floor));
        }
    }
    if let (Some(n), Some(m), Some(d), Some(l), Some(c), Some(eps)) =
        (q.n, q.m, q.max_degree, q.lcr, q.cr, q.epsilon)
    {
        if n > 0 && d > 0 && l > 0 {
            let gap = combined_probability_gap(&RegimeParams {
                alpha: q.alpha.unwrap_or(1.0),
                epsilon: eps,
                k: q.k.unwrap_or(2),
                lcr: l,
                max_degree: d,
                m,
                n,
                cr: c,
            });
            push("combined gap lhs m/(L^2 D)", Bound::Value(gap.lhs));
            push("combined gap rhs 2(eps C)^2/(n (L D)^2)", Bound::Value(gap.rhs));
        }
    }
    rows
}
