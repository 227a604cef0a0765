//! Ranked lists, mock-draft records and the season dataset.
//!
//! A draft (real or forecast) is an injective map from players to the dense
//! ranks `1..=n`. Anything not on the list sits at [`Position::Unranked`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use chrono::{Duration, NaiveDate};

use crate::error::{Error, Result};

/// Longest actual draft accepted without an explicit override (two rounds of 30).
pub const DEFAULT_MAX_ACTUAL_LEN: usize = 60;

/// Default length of the window, ending on draft day, in which mocks are collected.
pub const DEFAULT_COLLECTION_WINDOW_DAYS: u32 = 365;

/// A player (or any ranked item).
///
/// Identity is the normalized key: trimmed and case-folded. The display name is
/// whatever spelling was seen first and does not take part in comparisons.
#[derive(Clone, Debug)]
pub struct ItemId {
    key: String,
    name: String,
}

impl ItemId {
    pub fn new(name: &str) -> Result<Self> {
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::EmptyId);
        }
        Ok(Self {
            key: normalize_key(name),
            name: name.to_owned(),
        })
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

pub(crate) fn normalize_key(raw: &str) -> String {
    raw.trim().to_lowercase()
}

impl PartialEq for ItemId {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for ItemId {}

impl Hash for ItemId {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl PartialOrd for ItemId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ItemId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key.cmp(&other.key)
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Where an item sits in a list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Position {
    Ranked(usize),
    Unranked,
}

impl Position {
    pub fn rank(self) -> Option<usize> {
        match self {
            Position::Ranked(r) => Some(r),
            Position::Unranked => None,
        }
    }

    pub fn is_ranked(self) -> bool {
        matches!(self, Position::Ranked(_))
    }
}

/// Items in dense rank order, each at most once.
///
/// Entries may carry a tier tag; entries sharing a tag were published as tied.
/// Metric kernels refuse tagged lists, ranked-choice aggregation honours them.
#[derive(Clone, Debug)]
pub struct RankedList {
    entries: Vec<ItemId>,
    tiers: Vec<Option<u32>>,
    index: HashMap<String, usize>,
}

impl RankedList {
    /// Builds a strict ranking; `entries[k]` gets rank `k + 1`.
    pub fn new(entries: Vec<ItemId>) -> Result<Self> {
        let tiers = vec![None; entries.len()];
        Self::with_tiers(entries, tiers)
    }

    pub fn with_tiers(entries: Vec<ItemId>, tiers: Vec<Option<u32>>) -> Result<Self> {
        if entries.len() != tiers.len() {
            return Err(Error::Domain(format!(
                "{} entries but {} tier tags",
                entries.len(),
                tiers.len()
            )));
        }
        let mut index = HashMap::with_capacity(entries.len());
        for (i, item) in entries.iter().enumerate() {
            if index.insert(item.key.clone(), i).is_some() {
                return Err(Error::DuplicateItem(item.name.clone()));
            }
        }
        Ok(Self {
            entries,
            tiers,
            index,
        })
    }

    /// Convenience constructor from display names.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let entries = names
            .iter()
            .map(|n| ItemId::new(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
            tiers: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ItemId] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ItemId> {
        self.entries.iter()
    }

    /// Item at 1-based `rank`.
    pub fn at(&self, rank: usize) -> Option<&ItemId> {
        rank.checked_sub(1).and_then(|i| self.entries.get(i))
    }

    pub fn position_of(&self, item: &ItemId) -> Position {
        self.position_of_key(&item.key)
    }

    /// Lookup by raw name; the name is normalized first.
    pub fn position_of_name(&self, name: &str) -> Position {
        self.position_of_key(&normalize_key(name))
    }

    pub(crate) fn position_of_key(&self, key: &str) -> Position {
        match self.index.get(key) {
            Some(&i) => Position::Ranked(i + 1),
            None => Position::Unranked,
        }
    }

    pub fn contains(&self, item: &ItemId) -> bool {
        self.index.contains_key(&item.key)
    }

    pub fn tiers(&self) -> &[Option<u32>] {
        &self.tiers
    }

    pub fn tier_at(&self, rank: usize) -> Option<u32> {
        rank.checked_sub(1)
            .and_then(|i| self.tiers.get(i).copied())
            .flatten()
    }

    pub fn is_tiered(&self) -> bool {
        self.tiers.iter().any(Option::is_some)
    }

    /// First `n` entries (all of them if the list is shorter).
    pub fn prefix(&self, n: usize) -> RankedList {
        let n = n.min(self.len());
        Self::with_tiers(self.entries[..n].to_vec(), self.tiers[..n].to_vec())
            .expect("prefix of a valid list is valid")
    }
}

impl PartialEq for RankedList {
    fn eq(&self, other: &Self) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.key == b.key && a.name == b.name)
            && self.tiers == other.tiers
    }
}

impl Eq for RankedList {}

impl<'a> IntoIterator for &'a RankedList {
    type Item = &'a ItemId;
    type IntoIter = std::slice::Iter<'a, ItemId>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// Validates `entries` as a strict ranking.
pub fn build_ranking(entries: Vec<ItemId>) -> Result<RankedList> {
    RankedList::new(entries)
}

/// Size of the intersection of the depth-`d` prefixes of `a` and `b`.
///
/// A list shorter than `d` contributes all of its entries.
pub fn overlap_at_depth(a: &RankedList, b: &RankedList, d: usize) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    short.entries[..d.min(short.len())]
        .iter()
        .filter(|item| matches!(long.position_of_key(&item.key), Position::Ranked(r) if r <= d))
        .count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ForecastType {
    Mock,
    Ranking,
}

impl ForecastType {
    pub fn as_str(self) -> &'static str {
        match self {
            ForecastType::Mock => "mock",
            ForecastType::Ranking => "ranking",
        }
    }
}

impl fmt::Display for ForecastType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ForecastType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mock" => Ok(ForecastType::Mock),
            "ranking" => Ok(ForecastType::Ranking),
            other => Err(Error::Domain(format!(
                "forecast type must be `mock` or `ranking`, got `{other}`"
            ))),
        }
    }
}

/// One publishing source: an author's mocks and rankings are scored separately.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AuthorKey {
    pub author: String,
    pub forecast_type: ForecastType,
}

impl AuthorKey {
    pub fn new(author: impl Into<String>, forecast_type: ForecastType) -> Self {
        Self {
            author: author.into(),
            forecast_type,
        }
    }
}

impl fmt::Display for AuthorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.forecast_type {
            ForecastType::Mock => f.write_str(&self.author),
            ForecastType::Ranking => write!(f, "{} (R)", self.author),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MockDraftRecord {
    pub list: RankedList,
    pub author: String,
    pub forecast_type: ForecastType,
    pub publish_date: NaiveDate,
    pub season: i32,
}

impl MockDraftRecord {
    pub fn author_key(&self) -> AuthorKey {
        AuthorKey::new(self.author.clone(), self.forecast_type)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActualDraft {
    pub list: RankedList,
    pub draft_date: NaiveDate,
}

/// All mocks plus the realized draft of each season. Immutable once built.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DraftDataset {
    mocks: Vec<MockDraftRecord>,
    actuals: BTreeMap<i32, ActualDraft>,
}

impl DraftDataset {
    pub fn new(mocks: Vec<MockDraftRecord>, actuals: BTreeMap<i32, ActualDraft>) -> Result<Self> {
        Self::with_max_actual_len(mocks, actuals, DEFAULT_MAX_ACTUAL_LEN)
    }

    /// Same as [`DraftDataset::new`] with a custom cap on actual draft length.
    pub fn with_max_actual_len(
        mocks: Vec<MockDraftRecord>,
        actuals: BTreeMap<i32, ActualDraft>,
        limit: usize,
    ) -> Result<Self> {
        for (&season, actual) in &actuals {
            if actual.list.len() > limit {
                return Err(Error::ActualTooLong {
                    season,
                    len: actual.list.len(),
                    limit,
                });
            }
            if actual.list.is_tiered() {
                return Err(Error::TiedInput);
            }
        }
        Ok(Self { mocks, actuals })
    }

    pub fn mocks(&self) -> &[MockDraftRecord] {
        &self.mocks
    }

    pub fn actuals(&self) -> &BTreeMap<i32, ActualDraft> {
        &self.actuals
    }

    pub fn actual(&self, season: i32) -> Result<&ActualDraft> {
        self.actuals
            .get(&season)
            .ok_or(Error::UnknownSeason(season))
    }

    pub fn mocks_for(&self, season: i32) -> impl Iterator<Item = &MockDraftRecord> {
        self.mocks.iter().filter(move |m| m.season == season)
    }

    /// Every season that has mocks or an actual draft, ascending.
    pub fn seasons(&self) -> Vec<i32> {
        let mut seasons: Vec<i32> = self
            .mocks
            .iter()
            .map(|m| m.season)
            .chain(self.actuals.keys().copied())
            .collect();
        seasons.sort_unstable();
        seasons.dedup();
        seasons
    }

    /// Fails with [`Error::MissingActual`] for the first season that has mocks but no actual.
    pub fn require_actuals(&self) -> Result<()> {
        match self
            .seasons()
            .into_iter()
            .find(|s| !self.actuals.contains_key(s))
        {
            Some(season) => Err(Error::MissingActual(season)),
            None => Ok(()),
        }
    }

    /// Mocks published outside the `window_days` days that end on their season's draft day.
    ///
    /// These are reported, never dropped. Seasons without an actual are skipped.
    pub fn outside_collection_window(&self, window_days: u32) -> Vec<&MockDraftRecord> {
        self.mocks
            .iter()
            .filter(|m| match self.actuals.get(&m.season) {
                Some(actual) => {
                    let opens = actual.draft_date - Duration::days(i64::from(window_days));
                    m.publish_date <= opens || m.publish_date > actual.draft_date
                }
                None => false,
            })
            .collect()
    }
}
