//! Similarity and error kernels for ranked lists.
//!
//! The headline metric is extrapolated rank-biased overlap and its complement,
//! rank-biased distance (RBD). Agreement at depth `d` is `X_d / d`, where `X_d`
//! is the overlap of the two depth-`d` prefixes; depth `d` carries weight
//! `(1 - q) q^(d-1)`. With `s` and `ℓ` the shorter and longer lengths:
//!
//! * depths `1..=s` use the observed agreement,
//! * depths `s+1..=ℓ` count matches against the whole short list and add the
//!   short list's agreement `X_s / s` for the `d - s` unseen slots,
//! * everything beyond `ℓ` gets weight `q^ℓ` at the agreement reached at `ℓ`.
//!
//! The mean-absolute-error baselines are kept for comparison.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::{ItemId, Position, RankedList};

pub const DEFAULT_Q: f64 = 0.98;
pub const DEFAULT_IMPUTE_RANK: usize = 61;

/// Which items the MAE baselines average over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EvalUniverse {
    DraftedOnly,
    MockedOnly,
    #[default]
    Union,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricParams {
    q: f64,
    impute_rank: usize,
    universe: EvalUniverse,
}

impl Default for MetricParams {
    fn default() -> Self {
        Self {
            q: DEFAULT_Q,
            impute_rank: DEFAULT_IMPUTE_RANK,
            universe: EvalUniverse::Union,
        }
    }
}

impl MetricParams {
    pub fn new(q: f64, impute_rank: usize, universe: EvalUniverse) -> Result<Self> {
        check_q(q)?;
        if impute_rank == 0 {
            return Err(Error::Domain("impute_rank must be at least 1".into()));
        }
        Ok(Self {
            q,
            impute_rank,
            universe,
        })
    }

    /// Defaults with a different persistence parameter.
    pub fn with_q(q: f64) -> Result<Self> {
        Self::new(q, DEFAULT_IMPUTE_RANK, EvalUniverse::Union)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn impute_rank(&self) -> usize {
        self.impute_rank
    }

    pub fn universe(&self) -> EvalUniverse {
        self.universe
    }
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "q must lie strictly between 0 and 1, got {q}"
        )))
    }
}

/// The three parts of extrapolated RBO.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RboBreakdown {
    /// Depths `1..=s`.
    pub observed_term: f64,
    /// Depths `s+1..=ℓ`.
    pub extrapolated_overlap_term: f64,
    /// Everything past `ℓ`.
    pub residual_term: f64,
    pub total: f64,
}

/// Extrapolated rank-biased overlap. Symmetric in its arguments.
pub fn rbo_ext(a: &RankedList, b: &RankedList, params: &MetricParams) -> Result<RboBreakdown> {
    if a.is_tiered() || b.is_tiered() {
        return Err(Error::TiedInput);
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyList);
    }
    let q = params.q;
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let s = short.len();
    let l = long.len();

    // Incremental X_d. Up to depth s both prefixes grow; past it the short list
    // is complete and only the long list's new entry can add a match.
    let mut overlap = 0usize;
    let mut weight = 1.0 - q;
    let mut weight_sum = 0.0;
    let mut observed = 0.0;
    let mut extrapolated = 0.0;
    let mut agreement_at_s = 0.0;
    for d in 1..=l {
        let from_long = &long.entries()[d - 1];
        if matches!(short.position_of(from_long), Position::Ranked(r) if r <= d) {
            overlap += 1;
        }
        if d <= s {
            let from_short = &short.entries()[d - 1];
            if matches!(long.position_of(from_short), Position::Ranked(r) if r < d) {
                overlap += 1;
            }
        }
        let agreement = overlap as f64 / d as f64;
        if d <= s {
            observed += weight * agreement;
            if d == s {
                agreement_at_s = agreement;
            }
        } else {
            let unseen = agreement_at_s * (1.0 - s as f64 / d as f64);
            extrapolated += weight * (agreement + unseen);
        }
        weight_sum += weight;
        weight *= q;
    }
    // q^ℓ, taken as the complement of the accumulated weights so that the
    // weights sum to one in floating point as well.
    let tail_weight = 1.0 - weight_sum;
    let tail_agreement = overlap as f64 / l as f64 + agreement_at_s * (1.0 - s as f64 / l as f64);
    let residual = tail_weight * tail_agreement;
    let total = (observed + extrapolated + residual).clamp(0.0, 1.0);
    Ok(RboBreakdown {
        observed_term: observed,
        extrapolated_overlap_term: extrapolated,
        residual_term: residual,
        total,
    })
}

/// Rank-biased distance, `1 - rbo_ext`.
pub fn rbd(a: &RankedList, b: &RankedList, params: &MetricParams) -> Result<f64> {
    Ok(1.0 - rbo_ext(a, b, params)?.total)
}

/// Fraction of the total metric weight carried by ranks `1..=depth`.
///
/// Closed form of the per-rank weights `w_i = (1-q)/q * Σ_{k≥i} q^k / k`.
pub fn prefix_weight(q: f64, depth: usize) -> Result<f64> {
    check_q(q)?;
    if depth == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    let d = depth as f64;
    let mut head = 0.0;
    let mut power = 1.0;
    for i in 1..depth {
        power *= q;
        head += power / i as f64;
    }
    // -ln(1 - q) = Σ_{i≥1} q^i / i
    let tail = -(-q).ln_1p() - head;
    let w = 1.0 - power + (1.0 - q) / q * d * tail;
    Ok(w.min(1.0))
}

/// Mean absolute rank error over the configured universe, optionally on a log scale.
///
/// Items missing from either list are placed at `impute_rank`.
pub fn mae(
    mock: &RankedList,
    actual: &RankedList,
    params: &MetricParams,
    log_scale: bool,
) -> Result<f64> {
    if mock.is_tiered() || actual.is_tiered() {
        return Err(Error::TiedInput);
    }
    if params.impute_rank <= actual.len() {
        return Err(Error::Domain(format!(
            "impute_rank {} must exceed the actual draft length {}",
            params.impute_rank,
            actual.len()
        )));
    }
    let universe: Vec<&ItemId> = match params.universe {
        EvalUniverse::DraftedOnly => actual.iter().collect(),
        EvalUniverse::MockedOnly => mock.iter().collect(),
        EvalUniverse::Union => {
            let mut seen = HashSet::new();
            actual
                .iter()
                .chain(mock.iter())
                .filter(|item| seen.insert(item.key()))
                .collect()
        }
    };
    if universe.is_empty() {
        return Err(Error::EmptyUniverse);
    }
    mae_over(mock, actual, universe, params.impute_rank, log_scale)
}

/// MAE over an explicit item set. Tiers are ignored here; callers validate.
pub fn mae_over<'a, I>(
    mock: &RankedList,
    actual: &RankedList,
    universe: I,
    impute_rank: usize,
    log_scale: bool,
) -> Result<f64>
where
    I: IntoIterator<Item = &'a ItemId>,
{
    let slot = |list: &RankedList, item: &ItemId| {
        list.position_of(item).rank().unwrap_or(impute_rank) as f64
    };
    let (count, total) = universe.into_iter().fold((0usize, 0.0), |(n, acc), item| {
        let (m, a) = (slot(mock, item), slot(actual, item));
        let err = if log_scale {
            (m.ln() - a.ln()).abs()
        } else {
            (m - a).abs()
        };
        (n + 1, acc + err)
    });
    if count == 0 {
        return Err(Error::EmptyUniverse);
    }
    Ok(total / count as f64)
}
