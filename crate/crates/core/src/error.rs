use chrono::NaiveDate;
use thiserror::Error;

/// Everything that can go wrong while loading, scoring or aggregating drafts.
#[derive(Debug, Error)]
pub enum Error {
    #[error("item identifier is empty")]
    EmptyId,
    #[error("item `{0}` appears more than once in the same list")]
    DuplicateItem(String),
    #[error("ranked list is empty")]
    EmptyList,
    #[error("list carries tier tags; this operation needs a strict ordering")]
    TiedInput,
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("evaluation universe is empty")]
    EmptyUniverse,
    #[error("no mock drafts to aggregate")]
    NoMocks,
    #[error("no mock drafts for season {season} in the {window_days} days ending {as_of}")]
    NoMocksInWindow {
        season: i32,
        as_of: NaiveDate,
        window_days: u32,
    },
    #[error("season {0} has no actual draft")]
    UnknownSeason(i32),
    #[error("mock drafts exist for season {0} but no actual draft was supplied")]
    MissingActual(i32),
    #[error("season {season} has {count} final mock(s); at least 2 are needed to rank them")]
    DegenerateSeason { season: i32, count: usize },
    #[error("actual draft for season {season} has {len} picks (limit {limit})")]
    ActualTooLong {
        season: i32,
        len: usize,
        limit: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: rank {rank} repeated in {group}")]
    DuplicateRank {
        line: u64,
        rank: usize,
        group: String,
    },
    #[error("no final mock for `{author}` in season {season}")]
    UnknownAuthor { author: String, season: i32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
