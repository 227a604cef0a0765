//! Small worked datasets used by tests, benches and the CLI smoke tests.
//!
//! The "GOAT" set is five top-five all-time player rankings; four agree
//! broadly and one (E) is an outlier ordered by championships won.

use std::collections::BTreeMap;

use chrono::NaiveDate;

use crate::model::{ActualDraft, DraftDataset, ForecastType, MockDraftRecord, RankedList};

pub const SEASON: i32 = 2021;

pub fn draft_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2021, 7, 29).expect("valid date")
}

pub const GOAT_AUTHORS: [&str; 5] = ["Mock A", "Mock B", "Mock C", "Mock D", "Mock E"];

pub const GOAT_LISTS: [[&str; 5]; 5] = [
    [
        "Michael Jordan",
        "LeBron James",
        "Kareem Abdul-Jabbar",
        "Bill Russell",
        "Kobe Bryant",
    ],
    [
        "Michael Jordan",
        "LeBron James",
        "Kareem Abdul-Jabbar",
        "Bill Russell",
        "Magic Johnson",
    ],
    [
        "Michael Jordan",
        "LeBron James",
        "Bill Russell",
        "Kareem Abdul-Jabbar",
        "Magic Johnson",
    ],
    [
        "Michael Jordan",
        "LeBron James",
        "Bill Russell",
        "Kobe Bryant",
        "Kareem Abdul-Jabbar",
    ],
    [
        "Robert Horry",
        "Kareem Abdul-Jabbar",
        "Michael Jordan",
        "Scottie Pippen",
        "Kobe Bryant",
    ],
];

pub const GOAT_RCA_ORDER: [&str; 8] = [
    "Michael Jordan",
    "LeBron James",
    "Kareem Abdul-Jabbar",
    "Bill Russell",
    "Kobe Bryant",
    "Magic Johnson",
    "Robert Horry",
    "Scottie Pippen",
];

/// Borda order with the Johnson/Pippen tie resolved by average position.
pub const GOAT_BORDA_ORDER: [&str; 8] = [
    "Michael Jordan",
    "LeBron James",
    "Kareem Abdul-Jabbar",
    "Bill Russell",
    "Robert Horry",
    "Kobe Bryant",
    "Scottie Pippen",
    "Magic Johnson",
];

pub fn goat_mocks() -> Vec<RankedList> {
    GOAT_LISTS
        .iter()
        .map(|names| RankedList::from_names(names).expect("fixture is valid"))
        .collect()
}

pub fn goat_rca_ordering() -> RankedList {
    RankedList::from_names(&GOAT_RCA_ORDER).expect("fixture is valid")
}

pub fn goat_borda_ordering() -> RankedList {
    RankedList::from_names(&GOAT_BORDA_ORDER).expect("fixture is valid")
}

/// The five GOAT lists as same-day mocks (three days before the draft) with
/// `actual` as the season's realized order.
pub fn goat_dataset(actual: RankedList) -> DraftDataset {
    let published = draft_date() - chrono::Duration::days(3);
    let mocks = GOAT_AUTHORS
        .iter()
        .zip(goat_mocks())
        .map(|(author, list)| MockDraftRecord {
            list,
            author: (*author).to_owned(),
            forecast_type: ForecastType::Mock,
            publish_date: published,
            season: SEASON,
        })
        .collect();
    let actuals = BTreeMap::from([(
        SEASON,
        ActualDraft {
            list: actual,
            draft_date: draft_date(),
        },
    )]);
    DraftDataset::new(mocks, actuals).expect("fixture is valid")
}

/// Mocks given as `(author, YYYY-MM-DD, names)` for [`SEASON`], no actual.
pub fn dated_dataset(rows: &[(&str, &str, &[&str])]) -> DraftDataset {
    let mocks = rows
        .iter()
        .map(|(author, date, names)| MockDraftRecord {
            list: RankedList::from_names(names).expect("fixture is valid"),
            author: (*author).to_owned(),
            forecast_type: ForecastType::Mock,
            publish_date: NaiveDate::parse_from_str(date, "%Y-%m-%d").expect("fixture date"),
            season: SEASON,
        })
        .collect();
    DraftDataset::new(mocks, BTreeMap::new()).expect("fixture is valid")
}
