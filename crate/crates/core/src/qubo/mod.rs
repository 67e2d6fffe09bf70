//! QUBO encoding of vehicle selection.
//!
//! Minimising
//!
//! ```text
//! f(x) = Σ_i Q_ii x_i + Σ_{i<j} Q_ij x_i x_j,   Q_ii = -u_i,  Q_ij = λ c_ij
//! ```
//!
//! is the same as maximising coverage reward minus `λ` times overlap. The
//! off-diagonal map stores the whole pair coefficient once, keyed `(i, j)`
//! with `i < j`; it is never split across `(i, j)` and `(j, i)`.

mod io;

pub use io::{export_qubo, import_qubo, qubo_from_text, qubo_to_text};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::coverage::CoverageStats;
use crate::error::{Error, Result};
use crate::util::median;

/// Per-variable rewards and pairwise overlaps feeding the encoder.
///
/// Usually derived from [`CoverageStats`], but anything with the same shape
/// (for example a set-packing reduction) can be encoded directly.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTerms {
    pub rewards: Vec<f64>,
    /// `(i, j)` with `i < j`, values ≥ 0.
    pub overlaps: BTreeMap<(usize, usize), f64>,
}

impl ScoreTerms {
    pub fn new(rewards: Vec<f64>, overlaps: BTreeMap<(usize, usize), f64>) -> Result<Self> {
        let n = rewards.len();
        if let Some(r) = rewards.iter().find(|r| !r.is_finite() || **r < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rewards must be finite and non-negative, got {r}"
            )));
        }
        for (&(i, j), &c) in &overlaps {
            if i >= j || j >= n {
                return Err(Error::InvalidParameter(format!(
                    "overlap key ({i}, {j}) must satisfy i < j < {n}"
                )));
            }
            if !c.is_finite() || c < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "overlap ({i}, {j}) must be finite and non-negative, got {c}"
                )));
            }
        }
        Ok(Self { rewards, overlaps })
    }

    pub fn n(&self) -> usize {
        self.rewards.len()
    }

    /// `s_i = Σ_{j≠i} c_ij`.
    pub fn overlap_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n()];
        for (&(i, j), &c) in &self.overlaps {
            sums[i] += c;
            sums[j] += c;
        }
        sums
    }
}

impl From<&CoverageStats> for ScoreTerms {
    fn from(stats: &CoverageStats) -> Self {
        Self {
            rewards: stats.unique_counts.iter().map(|&u| u as f64).collect(),
            overlaps: stats
                .overlaps
                .iter()
                .map(|(&k, &c)| (k, c as f64))
                .collect(),
        }
    }
}

/// `1 + Σ_i u_i`: large enough that no optimum keeps an overlapping pair.
pub fn lambda_hard(terms: &ScoreTerms) -> f64 {
    1.0 + terms.rewards.iter().sum::<f64>()
}

/// `median_i s_i / max(1, median_i u_i)`, even-length medians averaging the
/// two middle values.
pub fn lambda_soft(terms: &ScoreTerms) -> f64 {
    let s = median(&terms.overlap_sums());
    let u = median(&terms.rewards);
    s / u.max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LambdaRegime {
    Soft,
    Hard,
    Custom,
}

impl LambdaRegime {
    pub fn as_str(self) -> &'static str {
        match self {
            LambdaRegime::Soft => "soft",
            LambdaRegime::Hard => "hard",
            LambdaRegime::Custom => "custom",
        }
    }
}

impl fmt::Display for LambdaRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LambdaRegime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "soft" => Ok(LambdaRegime::Soft),
            "hard" => Ok(LambdaRegime::Hard),
            "custom" => Ok(LambdaRegime::Custom),
            other => Err(Error::InvalidParameter(format!(
                "unknown lambda regime {other:?} (expected soft, hard or custom)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyConfig {
    pub regime: LambdaRegime,
    pub custom_value: Option<f64>,
}

impl PenaltyConfig {
    pub fn soft() -> Self {
        Self {
            regime: LambdaRegime::Soft,
            custom_value: None,
        }
    }

    pub fn hard() -> Self {
        Self {
            regime: LambdaRegime::Hard,
            custom_value: None,
        }
    }

    pub fn custom(lambda: f64) -> Self {
        Self {
            regime: LambdaRegime::Custom,
            custom_value: Some(lambda),
        }
    }

    /// The concrete `λ` this configuration selects for `terms`.
    pub fn resolve(&self, terms: &ScoreTerms) -> Result<f64> {
        match self.regime {
            LambdaRegime::Soft => Ok(lambda_soft(terms)),
            LambdaRegime::Hard => Ok(lambda_hard(terms)),
            LambdaRegime::Custom => match self.custom_value {
                Some(v) if v.is_finite() && v > 0.0 => Ok(v),
                Some(v) => Err(Error::InvalidParameter(format!(
                    "custom lambda must be positive and finite, got {v}"
                ))),
                None => Err(Error::InvalidParameter(
                    "custom lambda regime requires a value".into(),
                )),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuboModel {
    n: usize,
    linear: Vec<f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
    lambda_used: f64,
    lambda_regime: LambdaRegime,
}

impl QuboModel {
    /// Assembles a model from raw coefficients. Off-diagonal keys must be
    /// `(i, j)` with `i < j < n`.
    pub fn from_parts(
        linear: Vec<f64>,
        quadratic: BTreeMap<(usize, usize), f64>,
        lambda_used: f64,
        lambda_regime: LambdaRegime,
    ) -> Result<Self> {
        let n = linear.len();
        if linear.iter().any(|q| !q.is_finite()) {
            return Err(Error::InvalidParameter("non-finite diagonal coefficient".into()));
        }
        for (&(i, j), q) in &quadratic {
            if i >= j || j >= n {
                return Err(Error::InvalidParameter(format!(
                    "coupling key ({i}, {j}) must satisfy i < j < {n}"
                )));
            }
            if !q.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite coupling at ({i}, {j})"
                )));
            }
        }
        Ok(Self {
            n,
            linear,
            quadratic,
            lambda_used,
            lambda_regime,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Q_ii`.
    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    /// `Q_ij` for `i < j`.
    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.quadratic
    }

    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        let key = if i < j { (i, j) } else { (j, i) };
        self.quadratic.get(&key).copied().unwrap_or(0.0)
    }

    pub fn lambda_used(&self) -> f64 {
        self.lambda_used
    }

    pub fn lambda_regime(&self) -> LambdaRegime {
        self.lambda_regime
    }

    pub fn energy(&self, x: &[bool]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "assignment has {} entries for a {}-variable model",
                x.len(),
                self.n
            )));
        }
        Ok(self.energy_unchecked(x))
    }

    pub(crate) fn energy_unchecked(&self, x: &[bool]) -> f64 {
        let diag: f64 = self
            .linear
            .iter()
            .zip(x)
            .filter(|(_, &on)| on)
            .map(|(q, _)| q)
            .sum();
        let off: f64 = self
            .quadratic
            .iter()
            .filter(|(&(i, j), _)| x[i] && x[j])
            .map(|(_, q)| q)
            .sum();
        diag + off
    }

    /// Per-variable adjacency `(neighbour, Q_ij)`, neighbours ascending.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (&(i, j), &q) in &self.quadratic {
            adj[i].push((j, q));
            adj[j].push((i, q));
        }
        for list in &mut adj {
            list.sort_by_key(|&(v, _)| v);
        }
        adj
    }
}

pub fn build_qubo(terms: &ScoreTerms, penalty: &PenaltyConfig) -> Result<QuboModel> {
    let lambda = penalty.resolve(terms)?;
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidParameter(format!("lambda resolved to {lambda}")));
    }
    let linear = terms.rewards.iter().map(|&u| 0.0 - u).collect();
    let quadratic = terms
        .overlaps
        .iter()
        .filter(|(_, &c)| c > 0.0)
        .map(|(&k, &c)| (k, lambda * c))
        .collect();
    QuboModel::from_parts(linear, quadratic, lambda, penalty.regime)
}

/// Adds `penalty` to every in-group pair so that selecting two members of a
/// group costs more than any coverage gain. `None` uses `1 + Σ_i max(0, -Q_ii)`,
/// which equals `λ_hard` for an unaugmented model.
pub fn add_one_hot_groups(
    model: &QuboModel,
    groups: &[Vec<usize>],
    penalty: Option<f64>,
) -> Result<QuboModel> {
    let penalty = penalty
        .unwrap_or_else(|| 1.0 + model.linear.iter().map(|q| (-q).max(0.0)).sum::<f64>());
    if !(penalty.is_finite() && penalty > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "one-hot penalty must be positive, got {penalty}"
        )));
    }
    let mut used = BTreeSet::new();
    let mut quadratic = model.quadratic.clone();
    for (g, group) in groups.iter().enumerate() {
        for &v in group {
            if v >= model.n {
                return Err(Error::InvalidParameter(format!(
                    "group {g} references variable {v} of a {}-variable model",
                    model.n
                )));
            }
            if !used.insert(v) {
                return Err(Error::InvalidParameter(format!(
                    "variable {v} appears in more than one group"
                )));
            }
        }
        for (a, &i) in group.iter().enumerate() {
            for &j in &group[a + 1..] {
                *quadratic.entry((i.min(j), i.max(j))).or_insert(0.0) += penalty;
            }
        }
    }
    Ok(QuboModel {
        quadratic,
        ..model.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo_terms() -> ScoreTerms {
        ScoreTerms::from(&CoverageStats::from_sets(&[vec![0, 1, 2], vec![2, 3]]))
    }

    fn bits(mask: usize, n: usize) -> Vec<bool> {
        (0..n).map(|i| mask >> i & 1 == 1).collect()
    }

    #[test]
    fn lambda_hard_examples() {
        let t = |u: Vec<f64>| ScoreTerms::new(u, BTreeMap::new()).unwrap();
        assert_eq!(lambda_hard(&t(vec![2.0, 1.0])), 4.0);
        assert_eq!(lambda_hard(&t(vec![0.0, 0.0, 0.0])), 1.0);
        assert_eq!(lambda_hard(&t(vec![5.0, 4.0, 3.0])), 13.0);
    }

    #[test]
    fn lambda_soft_examples() {
        assert!((lambda_soft(&demo_terms()) - 1.0 / 1.5).abs() < 1e-12);
        let disjoint = ScoreTerms::from(&CoverageStats::from_sets(&[vec![0], vec![1]]));
        assert_eq!(lambda_soft(&disjoint), 0.0);
        let floor = ScoreTerms::new(vec![0.0, 0.0], BTreeMap::from([((0, 1), 2.0)])).unwrap();
        assert_eq!(lambda_soft(&floor), 2.0);
    }

    #[test]
    fn build_with_custom_lambda() {
        let m = build_qubo(&demo_terms(), &PenaltyConfig::custom(0.5)).unwrap();
        assert_eq!(m.linear(), &[-2.0, -1.0]);
        assert_eq!(m.coupling(0, 1), 0.5);
        assert_eq!(m.lambda_regime(), LambdaRegime::Custom);
    }

    #[test]
    fn build_with_hard_lambda() {
        let m = build_qubo(&demo_terms(), &PenaltyConfig::hard()).unwrap();
        assert_eq!(m.lambda_used(), 4.0);
        assert_eq!(m.coupling(0, 1), 4.0);
    }

    #[test]
    fn disjoint_routes_give_a_separable_model() {
        let t = ScoreTerms::from(&CoverageStats::from_sets(&[vec![0], vec![1]]));
        let m = build_qubo(&t, &PenaltyConfig::hard()).unwrap();
        assert!(m.quadratic().is_empty());
    }

    #[test]
    fn custom_regime_needs_a_positive_value() {
        let bad = [
            PenaltyConfig {
                regime: LambdaRegime::Custom,
                custom_value: None,
            },
            PenaltyConfig::custom(0.0),
            PenaltyConfig::custom(-1.0),
        ];
        for p in bad {
            assert!(matches!(
                build_qubo(&demo_terms(), &p),
                Err(Error::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn energies_match_enumeration() {
        let soft = build_qubo(&demo_terms(), &PenaltyConfig::custom(0.5)).unwrap();
        let expected = [0.0, -2.0, -1.0, -2.5];
        for (mask, e) in expected.iter().enumerate() {
            assert_eq!(soft.energy(&bits(mask, 2)).unwrap(), *e);
        }
        let hard = build_qubo(&demo_terms(), &PenaltyConfig::hard()).unwrap();
        assert_eq!(hard.energy(&[true, true]).unwrap(), 1.0);
        assert_eq!(hard.energy(&[true, false]).unwrap(), -2.0);
        assert!(soft.energy(&[true]).is_err());
    }

    #[test]
    fn one_hot_groups() {
        let t = ScoreTerms::new(vec![1.0, 1.0, 1.0], BTreeMap::new()).unwrap();
        let m = build_qubo(&t, &PenaltyConfig::custom(1.0)).unwrap();
        let g = add_one_hot_groups(&m, &[vec![0, 1]], Some(10.0)).unwrap();
        assert_eq!(g.coupling(0, 1), 10.0);
        let same = add_one_hot_groups(&m, &[vec![0], vec![1], vec![2]], None).unwrap();
        assert_eq!(same, m);
        assert!(add_one_hot_groups(&m, &[vec![0, 1], vec![1, 2]], None).is_err());
        assert!(add_one_hot_groups(&m, &[vec![0, 1]], Some(0.0)).is_err());
    }

    #[test]
    fn default_one_hot_penalty_forbids_double_selection() {
        // Two route options for vehicle 0 (vars 0, 1) and one for vehicle 1.
        let terms = ScoreTerms::new(
            vec![3.0, 4.0, 2.0],
            BTreeMap::from([((1, 2), 1.0)]),
        )
        .unwrap();
        let base = build_qubo(&terms, &PenaltyConfig::custom(0.25)).unwrap();
        let grouped = add_one_hot_groups(&base, &[vec![0, 1], vec![2]], None).unwrap();
        assert_eq!(grouped.coupling(0, 1), lambda_hard(&terms));
        let best = (0..8)
            .map(|m| bits(m, 3))
            .min_by(|a, b| {
                grouped
                    .energy(a)
                    .unwrap()
                    .total_cmp(&grouped.energy(b).unwrap())
            })
            .unwrap();
        assert!(!(best[0] && best[1]));
    }
}
