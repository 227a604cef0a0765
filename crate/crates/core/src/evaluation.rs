//! Season-level evaluation: final-mock selection, percentile tables, error
//! time series and slope-graph geometry.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use chrono::{Duration, NaiveDate};

use crate::aggregation::{self, Method};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::metrics::{rbd, MetricParams};
use crate::model::{AuthorKey, DraftDataset, ItemId, MockDraftRecord, RankedList};

pub const DEFAULT_HORIZON_DAYS: u32 = 30;
pub const DEFAULT_WINDOW_DAYS: u32 = 10;
pub const DEFAULT_MIN_SEASONS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinalMockSelection {
    pub season: i32,
    pub author_key: AuthorKey,
    pub record: MockDraftRecord,
    pub days_before_draft: u32,
}

/// Latest mock per author key published in `[draft_date - horizon_days, draft_date]`.
///
/// Same-day ties prefer the longer list, then the lexicographically smaller one.
/// Sorted by author key.
pub fn select_final_mocks(
    dataset: &DraftDataset,
    season: i32,
    horizon_days: u32,
) -> Result<Vec<FinalMockSelection>> {
    let actual = dataset.actual(season)?;
    let opens = actual.draft_date - Duration::days(i64::from(horizon_days));
    let mut best: BTreeMap<AuthorKey, &MockDraftRecord> = BTreeMap::new();
    for mock in dataset.mocks_for(season) {
        if mock.publish_date < opens || mock.publish_date > actual.draft_date {
            continue;
        }
        best.entry(mock.author_key())
            .and_modify(|cur| {
                if prefer_final(mock, cur) == Ordering::Greater {
                    *cur = mock;
                }
            })
            .or_insert(mock);
    }
    Ok(best
        .into_iter()
        .map(|(author_key, record)| FinalMockSelection {
            season,
            author_key,
            days_before_draft: (actual.draft_date - record.publish_date).num_days() as u32,
            record: record.clone(),
        })
        .collect())
}

fn prefer_final(a: &MockDraftRecord, b: &MockDraftRecord) -> Ordering {
    a.publish_date
        .cmp(&b.publish_date)
        .then(a.list.len().cmp(&b.list.len()))
        .then_with(|| {
            let keys = |m: &MockDraftRecord| {
                m.list
                    .iter()
                    .map(|i| i.key().to_owned())
                    .collect::<Vec<_>>()
            };
            keys(b).cmp(&keys(a))
        })
}

/// A scored row: an author source or one of the consensus methods.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowKey {
    Consensus(Method),
    Author(AuthorKey),
}

impl fmt::Display for RowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowKey::Consensus(Method::Borda) => f.write_str("BORDA"),
            RowKey::Consensus(Method::Rca) => f.write_str("RCA"),
            RowKey::Author(key) => key.fmt(f),
        }
    }
}

/// Percentile of each error within its group: 1.0 for the lowest error, 0.0
/// for the highest, evenly spaced in between. Equal errors share the mean of
/// their rank positions. `None` for fewer than two entries.
pub fn percentiles(errors: &[f64]) -> Option<Vec<f64>> {
    let n = errors.len();
    if n < 2 {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| errors[a].total_cmp(&errors[b]));
    let mut out = vec![0.0; n];
    let denom = (n - 1) as f64;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && errors[order[end]] == errors[order[start]] {
            end += 1;
        }
        // ranks start+1..=end, averaged
        let mean_rank = (start + 1 + end) as f64 / 2.0;
        let value = (n as f64 - mean_rank) / denom;
        for &i in &order[start..end] {
            out[i] = value;
        }
        start = end;
    }
    Some(out)
}

/// Errors of every scored entry in one season.
#[derive(Clone, Debug)]
pub struct SeasonScores {
    pub season: i32,
    pub entries: Vec<(RowKey, f64)>,
}

/// RBD of each final mock, plus the Borda and RCA consensus of those same final
/// mocks, against the season's actual draft.
pub fn score_season(
    dataset: &DraftDataset,
    season: i32,
    params: &MetricParams,
    horizon_days: u32,
) -> Result<SeasonScores> {
    let actual = &dataset.actual(season)?.list;
    let finals = select_final_mocks(dataset, season, horizon_days)?;
    if finals.len() < 2 {
        return Err(Error::DegenerateSeason {
            season,
            count: finals.len(),
        });
    }
    let mut entries = Vec::with_capacity(finals.len() + 2);
    for method in Method::ALL {
        let consensus =
            aggregation::aggregate(finals.iter().map(|f| &f.record.list), method, actual.len())?;
        entries.push((
            RowKey::Consensus(method),
            rbd(consensus.ordering(), actual, params)?,
        ));
    }
    for f in &finals {
        entries.push((
            RowKey::Author(f.author_key.clone()),
            rbd(&f.record.list, actual, params)?,
        ));
    }
    Ok(SeasonScores { season, entries })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PercentileRow {
    pub key: RowKey,
    pub per_season: BTreeMap<i32, f64>,
    pub avg_percentile: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PercentileTable {
    pub seasons: Vec<i32>,
    pub rows: Vec<PercentileRow>,
}

pub fn percentile_table(
    dataset: &DraftDataset,
    params: &MetricParams,
    horizon_days: u32,
    min_seasons: usize,
) -> Result<PercentileTable> {
    percentile_table_with(
        Execution::default(),
        dataset,
        params,
        horizon_days,
        min_seasons,
    )
}

/// Percentile of every final mock within its season, for authors with final
/// mocks in at least `min_seasons` seasons. Consensus rows are always kept.
/// Seasons without any final mock are skipped; rows are sorted by average
/// percentile, best first.
pub fn percentile_table_with(
    exec: Execution,
    dataset: &DraftDataset,
    params: &MetricParams,
    horizon_days: u32,
    min_seasons: usize,
) -> Result<PercentileTable> {
    dataset.require_actuals()?;
    let seasons: Vec<i32> = dataset.actuals().keys().copied().collect();
    let scored = exec.try_map(&seasons, |&season| -> Result<Option<SeasonScores>> {
        if select_final_mocks(dataset, season, horizon_days)?.is_empty() {
            return Ok(None);
        }
        score_season(dataset, season, params, horizon_days).map(Some)
    })?;

    let mut per_key: BTreeMap<RowKey, BTreeMap<i32, f64>> = BTreeMap::new();
    let mut used_seasons = Vec::new();
    for scores in scored.into_iter().flatten() {
        used_seasons.push(scores.season);
        let errors: Vec<f64> = scores.entries.iter().map(|(_, e)| *e).collect();
        let pct = percentiles(&errors).expect("score_season guarantees two entries");
        for ((key, _), p) in scores.entries.into_iter().zip(pct) {
            per_key.entry(key).or_default().insert(scores.season, p);
        }
    }

    let mut rows: Vec<PercentileRow> = per_key
        .into_iter()
        .filter(|(key, seasons)| {
            matches!(key, RowKey::Consensus(_)) || seasons.len() >= min_seasons
        })
        .map(|(key, per_season)| {
            let avg_percentile = per_season.values().sum::<f64>() / per_season.len() as f64;
            PercentileRow {
                key,
                per_season,
                avg_percentile,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        b.avg_percentile
            .total_cmp(&a.avg_percentile)
            .then_with(|| a.key.cmp(&b.key))
    });
    Ok(PercentileTable {
        seasons: used_seasons,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesPoint {
    pub date: NaiveDate,
    pub series: RowKey,
    pub rbd: f64,
}

pub fn error_timeseries(
    dataset: &DraftDataset,
    season: i32,
    params: &MetricParams,
    window_days: u32,
) -> Result<Vec<SeriesPoint>> {
    error_timeseries_with(Execution::default(), dataset, season, params, window_days)
}

/// Daily RBD from the first mock of the season through draft day.
///
/// Each author key contributes its latest mock from the trailing window; both
/// consensus methods contribute the rolling consensus of that day. Days without
/// an in-window mock emit nothing. Sorted by date, then series.
pub fn error_timeseries_with(
    exec: Execution,
    dataset: &DraftDataset,
    season: i32,
    params: &MetricParams,
    window_days: u32,
) -> Result<Vec<SeriesPoint>> {
    let actual = dataset.actual(season)?;
    let mut by_author: BTreeMap<AuthorKey, Vec<&MockDraftRecord>> = BTreeMap::new();
    for mock in dataset.mocks_for(season) {
        if mock.publish_date <= actual.draft_date {
            by_author.entry(mock.author_key()).or_default().push(mock);
        }
    }
    let Some(first) = by_author.values().flatten().map(|m| m.publish_date).min() else {
        return Ok(Vec::new());
    };
    for mocks in by_author.values_mut() {
        mocks.sort_by(|a, b| prefer_final(a, b));
    }
    let days: Vec<NaiveDate> = first
        .iter_days()
        .take_while(|d| *d <= actual.draft_date)
        .collect();
    let span = Duration::days(i64::from(window_days));

    let rows = exec.try_map(&days, |&day| -> Result<Vec<SeriesPoint>> {
        let opens = day - span;
        let mut points = Vec::new();
        let mut any = false;
        for (key, mocks) in &by_author {
            let latest = mocks
                .iter()
                .rev()
                .find(|m| m.publish_date > opens && m.publish_date <= day);
            if let Some(mock) = latest {
                any = true;
                points.push(SeriesPoint {
                    date: day,
                    series: RowKey::Author(key.clone()),
                    rbd: rbd(&mock.list, &actual.list, params)?,
                });
            }
        }
        if any {
            for method in Method::ALL {
                let consensus =
                    aggregation::rolling_consensus(dataset, season, day, window_days, method)?;
                points.push(SeriesPoint {
                    date: day,
                    series: RowKey::Consensus(method),
                    rbd: rbd(&consensus, &actual.list, params)?,
                });
            }
        }
        points.sort_by(|a, b| a.series.cmp(&b.series));
        Ok(points)
    })?;
    Ok(rows.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub item: ItemId,
    pub mock_rank: usize,
    pub actual_rank: usize,
}

/// An end of the graph with no partner on the other side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Terminal {
    pub item: ItemId,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeGraph {
    /// Ordered by mock rank.
    pub segments: Vec<Segment>,
    /// Mocked but not drafted, by mock rank.
    pub mock_terminal: Vec<Terminal>,
    /// Drafted but not mocked, by actual rank.
    pub actual_terminal: Vec<Terminal>,
}

pub fn slopegraph(mock: &RankedList, actual: &RankedList) -> SlopeGraph {
    let mut segments = Vec::new();
    let mut mock_terminal = Vec::new();
    for (i, item) in mock.iter().enumerate() {
        match actual.position_of(item).rank() {
            Some(actual_rank) => segments.push(Segment {
                item: item.clone(),
                mock_rank: i + 1,
                actual_rank,
            }),
            None => mock_terminal.push(Terminal {
                item: item.clone(),
                rank: i + 1,
            }),
        }
    }
    let actual_terminal = actual
        .iter()
        .enumerate()
        .filter(|(_, item)| !mock.contains(item))
        .map(|(i, item)| Terminal {
            item: item.clone(),
            rank: i + 1,
        })
        .collect();
    SlopeGraph {
        segments,
        mock_terminal,
        actual_terminal,
    }
}

/// Everything a batch report needs, computed in one pass.
#[derive(Clone, Debug)]
pub struct Report {
    pub percentiles: PercentileTable,
    pub timeseries: BTreeMap<i32, Vec<SeriesPoint>>,
    pub slopegraphs: Vec<(FinalMockSelection, SlopeGraph)>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReportConfig {
    pub params: MetricParams,
    pub window_days: u32,
    pub horizon_days: u32,
    pub min_seasons: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            params: MetricParams::default(),
            window_days: DEFAULT_WINDOW_DAYS,
            horizon_days: DEFAULT_HORIZON_DAYS,
            min_seasons: DEFAULT_MIN_SEASONS,
        }
    }
}

pub fn build_report(
    exec: Execution,
    dataset: &DraftDataset,
    config: &ReportConfig,
) -> Result<Report> {
    let percentiles = percentile_table_with(
        exec,
        dataset,
        &config.params,
        config.horizon_days,
        config.min_seasons,
    )?;
    let seasons: Vec<i32> = dataset.actuals().keys().copied().collect();
    let series = exec.try_map(&seasons, |&season| {
        error_timeseries_with(
            Execution::Sequential,
            dataset,
            season,
            &config.params,
            config.window_days,
        )
        .map(|s| (season, s))
    })?;
    let mut slopegraphs = Vec::new();
    for &season in &seasons {
        let actual = &dataset.actual(season)?.list;
        for sel in select_final_mocks(dataset, season, config.horizon_days)? {
            let graph = slopegraph(&sel.record.list, actual);
            slopegraphs.push((sel, graph));
        }
    }
    Ok(Report {
        percentiles,
        timeseries: series.into_iter().collect(),
        slopegraphs,
    })
}
