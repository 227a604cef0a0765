//! Flat-file ingestion and writing.
//!
//! Mock file columns: `season,author,forecast_type,publish_date,rank,player,tier`
//! (`tier` may be empty or missing). Actual file columns:
//! `season,draft_date,rank,player`. Alias file columns: `variant,canonical`.
//! Columns are located by header name, so their order is free.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::model::{
    normalize_key, ActualDraft, DraftDataset, ForecastType, ItemId, MockDraftRecord, RankedList,
    DEFAULT_MAX_ACTUAL_LEN,
};

const DATE_FORMAT: &str = "%Y-%m-%d";

/// Maps misspelled or variant player names onto one canonical spelling.
#[derive(Clone, Debug, Default)]
pub struct AliasTable {
    canonical: HashMap<String, String>,
}

impl AliasTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, variant: &str, canonical: &str) {
        self.canonical
            .insert(normalize_key(variant), canonical.trim().to_owned());
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }

    pub fn resolve(&self, raw: &str) -> Result<ItemId> {
        match self.canonical.get(&normalize_key(raw)) {
            Some(canonical) => ItemId::new(canonical),
            None => ItemId::new(raw),
        }
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv_reader(reader);
        let cols = Columns::locate(&mut rdr, &["variant", "canonical"], &[])?;
        let mut table = Self::new();
        for row in rdr.records() {
            let row = row?;
            let line = line_of(&row);
            let variant = cols.field(&row, "variant", line)?;
            let canonical = cols.field(&row, "canonical", line)?;
            if variant.is_empty() || canonical.is_empty() {
                return Err(parse_err(
                    line,
                    "alias row needs both variant and canonical",
                ));
            }
            table.insert(variant, canonical);
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_reader(File::open(path)?)
    }
}

/// Reads mock drafts. Rows are grouped by `(season, author, forecast_type, publish_date)`;
/// each group must hold the dense ranks `1..=n`.
pub fn read_mocks<R: Read>(reader: R, aliases: &AliasTable) -> Result<Vec<MockDraftRecord>> {
    type GroupKey = (i32, String, ForecastType, NaiveDate);
    struct Row {
        rank: usize,
        player: ItemId,
        tier: Option<u32>,
        line: u64,
    }

    let mut rdr = csv_reader(reader);
    let cols = Columns::locate(
        &mut rdr,
        &[
            "season",
            "author",
            "forecast_type",
            "publish_date",
            "rank",
            "player",
        ],
        &["tier"],
    )?;

    let mut groups: BTreeMap<GroupKey, Vec<Row>> = BTreeMap::new();
    for row in rdr.records() {
        let row = row?;
        let line = line_of(&row);
        let season = parse_season(cols.field(&row, "season", line)?, line)?;
        let author = cols.field(&row, "author", line)?;
        if author.is_empty() {
            return Err(parse_err(line, "author is empty"));
        }
        let forecast_type: ForecastType = cols
            .field(&row, "forecast_type", line)?
            .parse()
            .map_err(|e: Error| parse_err(line, e.to_string()))?;
        let date = parse_date(cols.field(&row, "publish_date", line)?, line)?;
        let rank = parse_rank(cols.field(&row, "rank", line)?, line)?;
        let player = aliases
            .resolve(cols.field(&row, "player", line)?)
            .map_err(|e| parse_err(line, e.to_string()))?;
        let tier = match cols.optional(&row, "tier") {
            None | Some("") => None,
            Some(raw) => Some(parse_positive(raw, line, "tier")? as u32),
        };
        groups
            .entry((season, author.to_owned(), forecast_type, date))
            .or_default()
            .push(Row {
                rank,
                player,
                tier,
                line,
            });
    }

    let mut mocks = Vec::with_capacity(groups.len());
    for ((season, author, forecast_type, publish_date), mut rows) in groups {
        let label = format!("{season} {author} {forecast_type} {publish_date}");
        rows.sort_by_key(|r| (r.rank, r.line));
        for (i, row) in rows.iter().enumerate() {
            if i > 0 && rows[i - 1].rank == row.rank {
                return Err(Error::DuplicateRank {
                    line: row.line,
                    rank: row.rank,
                    group: label,
                });
            }
            if row.rank != i + 1 {
                return Err(parse_err(
                    row.line,
                    format!(
                        "rank {} leaves a gap in {label} (expected {})",
                        row.rank,
                        i + 1
                    ),
                ));
            }
        }
        let line_of_dupe = |e: Error| match e {
            Error::DuplicateItem(name) => {
                let line = rows
                    .iter()
                    .filter(|r| r.player.key() == normalize_key(&name))
                    .map(|r| r.line)
                    .nth(1)
                    .unwrap_or(0);
                parse_err(line, format!("player `{name}` listed twice in {label}"))
            }
            other => other,
        };
        let tiers = rows.iter().map(|r| r.tier).collect();
        let entries = rows.iter().map(|r| r.player.clone()).collect();
        let list = RankedList::with_tiers(entries, tiers).map_err(line_of_dupe)?;
        mocks.push(MockDraftRecord {
            list,
            author,
            forecast_type,
            publish_date,
            season,
        });
    }
    Ok(mocks)
}

/// Draft date, the line it was first seen on, and `(rank, player, line)` rows.
type SeasonRows = (NaiveDate, u64, Vec<(usize, ItemId, u64)>);

/// Reads actual drafts, one per season.
pub fn read_actuals<R: Read>(
    reader: R,
    aliases: &AliasTable,
) -> Result<BTreeMap<i32, ActualDraft>> {
    let mut rdr = csv_reader(reader);
    let cols = Columns::locate(&mut rdr, &["season", "draft_date", "rank", "player"], &[])?;

    let mut seasons: BTreeMap<i32, SeasonRows> = BTreeMap::new();
    for row in rdr.records() {
        let row = row?;
        let line = line_of(&row);
        let season = parse_season(cols.field(&row, "season", line)?, line)?;
        let date = parse_date(cols.field(&row, "draft_date", line)?, line)?;
        let rank = parse_rank(cols.field(&row, "rank", line)?, line)?;
        let player = aliases
            .resolve(cols.field(&row, "player", line)?)
            .map_err(|e| parse_err(line, e.to_string()))?;
        let entry = seasons.entry(season).or_insert((date, line, Vec::new()));
        if entry.0 != date {
            return Err(parse_err(
                line,
                format!(
                    "season {season} draft date {date} disagrees with {} from line {}",
                    entry.0, entry.1
                ),
            ));
        }
        entry.2.push((rank, player, line));
    }

    let mut actuals = BTreeMap::new();
    for (season, (draft_date, _, mut rows)) in seasons {
        let label = format!("actual draft {season}");
        rows.sort_by_key(|r| (r.0, r.2));
        for (i, (rank, _, line)) in rows.iter().enumerate() {
            if i > 0 && rows[i - 1].0 == *rank {
                return Err(Error::DuplicateRank {
                    line: *line,
                    rank: *rank,
                    group: label,
                });
            }
            if *rank != i + 1 {
                return Err(parse_err(
                    *line,
                    format!("rank {rank} leaves a gap in {label} (expected {})", i + 1),
                ));
            }
        }
        let list = RankedList::new(rows.into_iter().map(|r| r.1).collect())?;
        actuals.insert(season, ActualDraft { list, draft_date });
    }
    Ok(actuals)
}

/// Loads and validates a dataset from files. Without an actuals file the dataset
/// holds mocks only; evaluation then fails with [`Error::MissingActual`].
pub fn load_dataset(
    mocks_path: &Path,
    actuals_path: Option<&Path>,
    alias_path: Option<&Path>,
) -> Result<DraftDataset> {
    let aliases = match alias_path {
        Some(p) => AliasTable::load(p)?,
        None => AliasTable::new(),
    };
    let mocks = read_mocks(File::open(mocks_path)?, &aliases)?;
    let actuals = match actuals_path {
        Some(p) => read_actuals(File::open(p)?, &aliases)?,
        None => BTreeMap::new(),
    };
    DraftDataset::with_max_actual_len(mocks, actuals, DEFAULT_MAX_ACTUAL_LEN)
}

pub fn write_mocks<W: Write>(writer: W, mocks: &[MockDraftRecord]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record([
        "season",
        "author",
        "forecast_type",
        "publish_date",
        "rank",
        "player",
        "tier",
    ])?;
    for mock in mocks {
        let season = mock.season.to_string();
        let date = mock.publish_date.format(DATE_FORMAT).to_string();
        for (i, item) in mock.list.iter().enumerate() {
            let tier = mock.list.tiers()[i]
                .map(|t| t.to_string())
                .unwrap_or_default();
            wtr.write_record([
                season.as_str(),
                mock.author.as_str(),
                mock.forecast_type.as_str(),
                date.as_str(),
                (i + 1).to_string().as_str(),
                item.name(),
                tier.as_str(),
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_actuals<W: Write>(writer: W, actuals: &BTreeMap<i32, ActualDraft>) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["season", "draft_date", "rank", "player"])?;
    for (season, actual) in actuals {
        let season = season.to_string();
        let date = actual.draft_date.format(DATE_FORMAT).to_string();
        for (i, item) in actual.list.iter().enumerate() {
            wtr.write_record([
                season.as_str(),
                date.as_str(),
                (i + 1).to_string().as_str(),
                item.name(),
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// Writes both halves of a dataset.
pub fn write_dataset<M: Write, A: Write>(
    dataset: &DraftDataset,
    mocks: M,
    actuals: A,
) -> Result<()> {
    write_mocks(mocks, dataset.mocks())?;
    write_actuals(actuals, dataset.actuals())
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader)
}

struct Columns {
    index: HashMap<String, usize>,
}

impl Columns {
    fn locate<R: Read>(
        rdr: &mut csv::Reader<R>,
        required: &[&str],
        optional: &[&str],
    ) -> Result<Self> {
        let headers = rdr.headers()?.clone();
        let mut index = HashMap::new();
        for (i, h) in headers.iter().enumerate() {
            let name = h.trim_start_matches('\u{feff}').trim().to_ascii_lowercase();
            if !required.contains(&name.as_str()) && !optional.contains(&name.as_str()) {
                return Err(parse_err(1, format!("unexpected column `{name}`")));
            }
            index.insert(name, i);
        }
        if let Some(missing) = required.iter().find(|c| !index.contains_key(**c)) {
            return Err(parse_err(1, format!("missing column `{missing}`")));
        }
        Ok(Self { index })
    }

    fn field<'r>(&self, row: &'r csv::StringRecord, name: &str, line: u64) -> Result<&'r str> {
        row.get(self.index[name])
            .ok_or_else(|| parse_err(line, format!("row has no `{name}` field")))
    }

    fn optional<'r>(&self, row: &'r csv::StringRecord, name: &str) -> Option<&'r str> {
        self.index.get(name).and_then(|&i| row.get(i))
    }
}

fn line_of(row: &csv::StringRecord) -> u64 {
    row.position().map(|p| p.line()).unwrap_or(0)
}

fn parse_err(line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_season(raw: &str, line: u64) -> Result<i32> {
    raw.parse()
        .map_err(|_| parse_err(line, format!("season `{raw}` is not an integer")))
}

fn parse_date(raw: &str, line: u64) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(raw, DATE_FORMAT)
        .map_err(|_| parse_err(line, format!("date `{raw}` is not YYYY-MM-DD")))
}

fn parse_rank(raw: &str, line: u64) -> Result<usize> {
    parse_positive(raw, line, "rank")
}

fn parse_positive(raw: &str, line: u64, what: &str) -> Result<usize> {
    match raw.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(parse_err(
            line,
            format!("{what} `{raw}` is not a positive integer"),
        )),
    }
}
