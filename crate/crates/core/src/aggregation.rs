//! Consensus rankings from many mock drafts.
//!
//! [`borda`] sums positional points. [`rca`] runs an instant-runoff election for
//! every pick in turn, dropping winners from later picks. [`rolling_consensus`]
//! applies either one to the latest mock of each author in a trailing window.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use chrono::{Duration, NaiveDate};

use crate::error::{Error, Result};
use crate::model::{DraftDataset, ForecastType, ItemId, MockDraftRecord, RankedList};

/// Consensus length used when a season's actual draft is not known yet.
pub const DEFAULT_DRAFT_LENGTH: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Borda,
    Rca,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Borda, Method::Rca];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Borda => "borda",
            Method::Rca => "rca",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "borda" => Ok(Method::Borda),
            "rca" => Ok(Method::Rca),
            other => Err(Error::Domain(format!(
                "method must be `borda` or `rca`, got `{other}`"
            ))),
        }
    }
}

/// Per-item statistics shared by both methods.
struct Pool {
    items: Vec<ItemId>,
    avg_position: Vec<f64>,
}

impl Pool {
    /// Items sorted by key, so an index comparison is a lexicographic comparison.
    fn new(mocks: &[&RankedList]) -> Self {
        let mut sums: HashMap<&ItemId, (usize, usize)> = HashMap::new();
        for mock in mocks {
            for (i, item) in mock.iter().enumerate() {
                let e = sums.entry(item).or_default();
                e.0 += i + 1;
                e.1 += 1;
            }
        }
        let mut items: Vec<(&ItemId, f64)> = sums
            .into_iter()
            .map(|(item, (sum, n))| (item, sum as f64 / n as f64))
            .collect();
        items.sort_by(|a, b| a.0.cmp(b.0));
        Self {
            avg_position: items.iter().map(|(_, avg)| *avg).collect(),
            items: items.into_iter().map(|(item, _)| item.clone()).collect(),
        }
    }

    fn index(&self) -> HashMap<&str, usize> {
        self.items
            .iter()
            .enumerate()
            .map(|(i, item)| (item.key(), i))
            .collect()
    }

    /// Better average position first, then key.
    fn cmp_preference(&self, a: usize, b: usize) -> Ordering {
        self.avg_position[a]
            .total_cmp(&self.avg_position[b])
            .then(a.cmp(&b))
    }
}

#[derive(Clone, Debug)]
pub struct BordaResult {
    pub ordering: RankedList,
    /// Points for every mocked item, including those that scored zero.
    pub scores: HashMap<ItemId, u64>,
    /// Runs of two or more consecutive items in `ordering` with equal score.
    pub tie_groups: Vec<Vec<ItemId>>,
}

impl BordaResult {
    pub fn score(&self, item: &ItemId) -> u64 {
        self.scores.get(item).copied().unwrap_or(0)
    }

    /// Standard competition rank: tied items share the rank of the first of them.
    pub fn shared_rank(&self, item: &ItemId) -> Option<usize> {
        let score = *self.scores.get(item)?;
        let pos = self.ordering.position_of(item).rank()?;
        Some(
            self.ordering
                .iter()
                .take(pos)
                .position(|other| self.score(other) == score)
                .expect("item is in its own prefix")
                + 1,
        )
    }
}

/// Borda count: a mock at slot `k ≤ draft_length` awards `draft_length - k + 1` points.
///
/// Items left off a mock, or placed past `draft_length`, get nothing from it.
/// The ordering holds every item with positive points; ties go to the better
/// average mocked position and then to the lexicographically smaller key.
pub fn borda<'a, I>(mocks: I, draft_length: usize) -> Result<BordaResult>
where
    I: IntoIterator<Item = &'a RankedList>,
{
    let mocks: Vec<&RankedList> = mocks.into_iter().collect();
    if mocks.is_empty() {
        return Err(Error::NoMocks);
    }
    if draft_length == 0 {
        return Err(Error::Domain("draft length must be at least 1".into()));
    }
    let pool = Pool::new(&mocks);
    let index = pool.index();
    let mut points = vec![0u64; pool.items.len()];
    for mock in &mocks {
        for (i, item) in mock.iter().take(draft_length).enumerate() {
            points[index[item.key()]] += (draft_length - i) as u64;
        }
    }

    let mut order: Vec<usize> = (0..pool.items.len()).filter(|&i| points[i] > 0).collect();
    order.sort_by(|&a, &b| points[b].cmp(&points[a]).then(pool.cmp_preference(a, b)));

    let mut tie_groups = Vec::new();
    for run in order.chunk_by(|&a, &b| points[a] == points[b]) {
        if run.len() > 1 {
            tie_groups.push(run.iter().map(|&i| pool.items[i].clone()).collect());
        }
    }
    let ordering = RankedList::new(order.iter().map(|&i| pool.items[i].clone()).collect())?;
    let scores = pool.items.iter().cloned().zip(points).collect();
    Ok(BordaResult {
        ordering,
        scores,
        tie_groups,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoundAction {
    Elected(ItemId),
    Eliminated(ItemId),
}

/// One count of the ballots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RcaRound {
    pub pick: usize,
    /// Authors whose lists still had an eligible item.
    pub ballots_cast: usize,
    /// Items with at least one vote, most votes first.
    pub counts: Vec<(ItemId, usize)>,
    pub action: RoundAction,
}

impl RcaRound {
    pub fn votes_for(&self, item: &ItemId) -> usize {
        self.counts
            .iter()
            .find(|(i, _)| i == item)
            .map_or(0, |(_, v)| *v)
    }
}

impl fmt::Display for RcaRound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pick={} ballots={} counts=",
            self.pick, self.ballots_cast
        )?;
        for (i, (item, votes)) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{item}:{votes}")?;
        }
        match &self.action {
            RoundAction::Elected(item) => write!(f, " action=elect {item}"),
            RoundAction::Eliminated(item) => write!(f, " action=eliminate {item}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RcaTrace {
    pub ordering: RankedList,
    pub rounds: Vec<RcaRound>,
}

impl RcaTrace {
    pub fn rounds_for_pick(&self, pick: usize) -> impl Iterator<Item = &RcaRound> {
        self.rounds.iter().filter(move |r| r.pick == pick)
    }

    /// Items eliminated while filling `pick`, in elimination order.
    pub fn eliminated_at(&self, pick: usize) -> Vec<&ItemId> {
        self.rounds_for_pick(pick)
            .filter_map(|r| match &r.action {
                RoundAction::Eliminated(item) => Some(item),
                RoundAction::Elected(_) => None,
            })
            .collect()
    }

    /// The trace as text, one round per line.
    pub fn to_log(&self) -> String {
        self.rounds.iter().map(|r| format!("{r}\n")).collect()
    }
}

/// Ranked-choice aggregation.
///
/// For each pick every author votes for their best still-eligible item (all
/// items of a tier when that item is tiered). An item with more than half of
/// the ballots cast wins the pick; otherwise the item with the fewest positive
/// votes is barred from this pick and the ballots are recounted. Fewest-vote
/// ties drop the item with the worse average mocked position, then the larger
/// key. Stops early once every list is exhausted.
pub fn rca<'a, I>(mocks: I, num_picks: usize) -> Result<RcaTrace>
where
    I: IntoIterator<Item = &'a RankedList>,
{
    let mocks: Vec<&RankedList> = mocks.into_iter().collect();
    if mocks.is_empty() {
        return Err(Error::NoMocks);
    }
    let pool = Pool::new(&mocks);
    let index = pool.index();
    let ballots_src: Vec<Vec<(usize, Option<u32>)>> = mocks
        .iter()
        .map(|m| {
            m.iter()
                .zip(m.tiers())
                .map(|(item, tier)| (index[item.key()], *tier))
                .collect()
        })
        .collect();

    let n = pool.items.len();
    let mut available = vec![true; n];
    let mut picked = Vec::new();
    let mut rounds = Vec::new();
    let mut votes = vec![0usize; n];

    'picks: for pick in 1..=num_picks {
        let mut eligible = available.clone();
        loop {
            votes.iter_mut().for_each(|v| *v = 0);
            let mut cast = 0;
            for ballot in &ballots_src {
                let Some(&(top, tier)) = ballot.iter().find(|(i, _)| eligible[*i]) else {
                    continue;
                };
                cast += 1;
                match tier {
                    None => votes[top] += 1,
                    Some(t) => ballot
                        .iter()
                        .filter(|(i, tt)| eligible[*i] && *tt == Some(t))
                        .for_each(|(i, _)| votes[*i] += 1),
                }
            }
            if cast == 0 {
                break 'picks;
            }

            let mut counted: Vec<usize> = (0..n).filter(|&i| votes[i] > 0).collect();
            counted.sort_by(|&a, &b| votes[b].cmp(&votes[a]).then(pool.cmp_preference(a, b)));
            let counts = counted
                .iter()
                .map(|&i| (pool.items[i].clone(), votes[i]))
                .collect();

            let leader = counted[0];
            if 2 * votes[leader] > cast {
                available[leader] = false;
                picked.push(pool.items[leader].clone());
                rounds.push(RcaRound {
                    pick,
                    ballots_cast: cast,
                    counts,
                    action: RoundAction::Elected(pool.items[leader].clone()),
                });
                break;
            }
            let loser = *counted
                .iter()
                .min_by(|&&a, &&b| votes[a].cmp(&votes[b]).then(pool.cmp_preference(b, a)))
                .expect("at least one item has votes");
            eligible[loser] = false;
            rounds.push(RcaRound {
                pick,
                ballots_cast: cast,
                counts,
                action: RoundAction::Eliminated(pool.items[loser].clone()),
            });
        }
    }

    Ok(RcaTrace {
        ordering: RankedList::new(picked)?,
        rounds,
    })
}

/// A consensus ranking together with the method-specific detail behind it.
#[derive(Clone, Debug)]
pub enum Consensus {
    Borda(BordaResult),
    Rca(RcaTrace),
}

impl Consensus {
    pub fn method(&self) -> Method {
        match self {
            Consensus::Borda(_) => Method::Borda,
            Consensus::Rca(_) => Method::Rca,
        }
    }

    pub fn ordering(&self) -> &RankedList {
        match self {
            Consensus::Borda(b) => &b.ordering,
            Consensus::Rca(r) => &r.ordering,
        }
    }

    pub fn into_ordering(self) -> RankedList {
        match self {
            Consensus::Borda(b) => b.ordering,
            Consensus::Rca(r) => r.ordering,
        }
    }
}

/// Runs `method` over `mocks`, producing `length` slots (Borda may tie past it).
pub fn aggregate<'a, I>(mocks: I, method: Method, length: usize) -> Result<Consensus>
where
    I: IntoIterator<Item = &'a RankedList>,
{
    match method {
        Method::Borda => borda(mocks, length).map(Consensus::Borda),
        Method::Rca => rca(mocks, length).map(Consensus::Rca),
    }
}

/// Each author's latest mock published in `(as_of - window_days, as_of]`.
///
/// Mocks and rankings by the same author compete; on a same-day collision the
/// mock wins. Result is sorted by author.
pub fn latest_by_author(
    dataset: &DraftDataset,
    season: i32,
    as_of: NaiveDate,
    window_days: u32,
) -> Vec<&MockDraftRecord> {
    let opens = as_of - Duration::days(i64::from(window_days));
    let mut latest: HashMap<&str, &MockDraftRecord> = HashMap::new();
    for mock in dataset.mocks_for(season) {
        if mock.publish_date <= opens || mock.publish_date > as_of {
            continue;
        }
        latest
            .entry(mock.author.as_str())
            .and_modify(|cur| {
                if recency_key(mock) > recency_key(cur) {
                    *cur = mock;
                }
            })
            .or_insert(mock);
    }
    let mut out: Vec<_> = latest.into_values().collect();
    out.sort_by(|a, b| a.author.cmp(&b.author));
    out
}

fn recency_key(m: &MockDraftRecord) -> (NaiveDate, bool) {
    (m.publish_date, m.forecast_type == ForecastType::Mock)
}

/// Consensus of the latest mock per author within the trailing window.
pub fn rolling_consensus_detailed(
    dataset: &DraftDataset,
    season: i32,
    as_of: NaiveDate,
    window_days: u32,
    method: Method,
) -> Result<Consensus> {
    let pool = latest_by_author(dataset, season, as_of, window_days);
    if pool.is_empty() {
        return Err(Error::NoMocksInWindow {
            season,
            as_of,
            window_days,
        });
    }
    let length = dataset
        .actual(season)
        .map(|a| a.list.len())
        .unwrap_or(DEFAULT_DRAFT_LENGTH);
    aggregate(pool.iter().map(|m| &m.list), method, length)
}

pub fn rolling_consensus(
    dataset: &DraftDataset,
    season: i32,
    as_of: NaiveDate,
    window_days: u32,
    method: Method,
) -> Result<RankedList> {
    rolling_consensus_detailed(dataset, season, as_of, window_days, method)
        .map(Consensus::into_ordering)
}
