use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chrono::NaiveDate;
use mockdraft::io::{write_actuals, write_mocks};
use mockdraft::{
    fixtures, rbd, ActualDraft, ForecastType, MetricParams, MockDraftRecord, RankedList,
};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn mockdraft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mockdraft"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn goat(args: &[&str], with_actual: bool) -> Output {
    let data = fixture("goat_mocks.csv");
    let actuals = fixture("goat_actual.csv");
    let mut full = vec!["--data", data.to_str().unwrap()];
    if with_actual {
        full.extend(["--actuals", actuals.to_str().unwrap()]);
    }
    full.extend(args);
    mockdraft(&full)
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn players(csv: &Path) -> Vec<String> {
    fs::read_to_string(csv)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().to_owned())
        .collect()
}

fn names(list: &RankedList) -> Vec<String> {
    list.iter().map(|i| i.name().to_owned()).collect()
}

#[test]
fn borda_consensus_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = [
        "consensus",
        "--season",
        "2021",
        "--as-of",
        "2021-07-28",
        "--method",
        "borda",
        "--length",
        "5",
        "--out",
        out,
    ];
    stdout(&goat(&args, false));
    let got = players(&dir.path().join("consensus_2021_2021-07-28_borda.csv"));
    let want = names(&fixtures::goat_borda_ordering());
    assert_eq!(got[..6], want[..6]);
    let mut tail = got[6..].to_vec();
    tail.sort();
    assert_eq!(tail, ["Magic Johnson", "Scottie Pippen"]);
    let text = fs::read_to_string(dir.path().join("consensus_2021_2021-07-28_borda.csv")).unwrap();
    assert!(text.contains("1,Michael Jordan,borda,2021,2021-07-28,23,"));
}

#[test]
fn rca_consensus_file_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = [
        "consensus",
        "--season",
        "2021",
        "--as-of",
        "2021-07-28",
        "--method",
        "rca",
        "--out",
        out,
    ];
    stdout(&goat(&args, false));
    let got = players(&dir.path().join("consensus_2021_2021-07-28_rca.csv"));
    assert_eq!(got, names(&fixtures::goat_rca_ordering()));
    let log = fs::read_to_string(dir.path().join("rca_trace_2021_2021-07-28.log")).unwrap();
    assert!(log.contains("action=eliminate Robert Horry"));
    assert!(!dir
        .path()
        .join("consensus_2021_2021-07-28_borda.csv")
        .exists());
}

#[test]
fn empty_window_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = goat(
        &[
            "consensus",
            "--season",
            "2021",
            "--as-of",
            "2021-05-01",
            "--out",
            dir.path().to_str().unwrap(),
        ],
        false,
    );
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("no mock drafts for season 2021"), "{err}");
}

#[test]
fn score_matches_library_bit_for_bit() {
    let text = stdout(&goat(
        &["score", "--season", "2021", "--author", "Mock E"],
        true,
    ));
    let first = text.lines().next().unwrap();
    let exact: f64 = first
        .split_once('(')
        .and_then(|(_, rest)| rest.strip_suffix(')'))
        .unwrap()
        .parse()
        .unwrap();
    let mocks = fixtures::goat_mocks();
    let want = rbd(&mocks[4], &mocks[0], &MetricParams::default()).unwrap();
    assert_eq!(exact.to_bits(), want.to_bits());
    assert!(first.starts_with("rbd 0."));

    let same = stdout(&goat(
        &["score", "--season", "2021", "--author", "Mock A", "--mae"],
        true,
    ));
    assert!(
        same.starts_with("rbd 0.000000 (0.0)\nmae 0.000000"),
        "{same}"
    );
}

#[test]
fn unknown_author_is_named() {
    let out = goat(&["score", "--season", "2021", "--author", "Nobody"], true);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Nobody"), "{err}");
}

#[test]
fn unknown_flag_is_rejected() {
    let out = goat(&["report", "--min-season", "1"], true);
    assert!(!out.status.success());
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn report_reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for (i, extra) in [&[][..], &[][..], &["--sequential"][..]]
        .into_iter()
        .enumerate()
    {
        let dir = tmp.path().join(format!("run{i}"));
        let mut args = vec![
            "report",
            "--min-seasons",
            "1",
            "--out",
            dir.to_str().unwrap(),
        ];
        args.extend(extra);
        stdout(&goat(&args, true));
        runs.push(snapshot(&dir));
    }
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let names: Vec<&str> = runs[0].iter().map(|(n, _)| n.as_str()).collect();
    assert!(names.contains(&"percentiles.csv"));
    assert!(names.contains(&"timeseries_2021.csv"));
    assert!(names.contains(&"slopegraph_2021_mock-e.csv"));
}

fn record(author: &str, season: i32, list: &[&str]) -> MockDraftRecord {
    MockDraftRecord {
        list: RankedList::from_names(list).unwrap(),
        author: author.into(),
        forecast_type: ForecastType::Mock,
        publish_date: NaiveDate::from_ymd_opt(season, 6, 15).unwrap(),
        season,
    }
}

/// Two seasons; "Steady" and "Other" publish in both, "Rookie" only in the second.
fn two_season_fixture(dir: &Path) -> (PathBuf, PathBuf) {
    let mocks = vec![
        record("Steady", 2020, &["a", "b", "c", "d"]),
        record("Other", 2020, &["q", "a", "b", "c"]),
        record("Steady", 2021, &["e", "f", "g", "h"]),
        record("Other", 2021, &["h", "e", "f", "g"]),
        record("Rookie", 2021, &["x", "y", "z", "e"]),
    ];
    let actuals = [2020, 2021]
        .into_iter()
        .zip([["a", "b", "c", "d"], ["e", "f", "g", "h"]])
        .map(|(season, list)| {
            (
                season,
                ActualDraft {
                    list: RankedList::from_names(&list).unwrap(),
                    draft_date: NaiveDate::from_ymd_opt(season, 6, 20).unwrap(),
                },
            )
        })
        .collect();
    let m = dir.join("mocks.csv");
    let a = dir.join("actuals.csv");
    write_mocks(fs::File::create(&m).unwrap(), &mocks).unwrap();
    write_actuals(fs::File::create(&a).unwrap(), &actuals).unwrap();
    (m, a)
}

fn percentile_rows(dir: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(dir.join("percentiles.csv"))
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn min_seasons_filters_authors_but_not_consensus() {
    let tmp = tempfile::tempdir().unwrap();
    let (m, a) = two_season_fixture(tmp.path());
    let run = |min: &str, sub: &str| {
        let out = tmp.path().join(sub);
        stdout(&mockdraft(&[
            "report",
            "--data",
            m.to_str().unwrap(),
            "--actuals",
            a.to_str().unwrap(),
            "--min-seasons",
            min,
            "--out",
            out.to_str().unwrap(),
        ]));
        percentile_rows(&out)
    };

    let strict = run("3", "strict");
    let keys: Vec<&str> = strict.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(keys.len(), 2);
    assert!(keys.contains(&"BORDA") && keys.contains(&"RCA"));

    let loose = run("2", "loose");
    let keys: Vec<&str> = loose.iter().map(|r| r[0].as_str()).collect();
    assert!(keys.contains(&"Steady") && keys.contains(&"Other"));
    assert!(!keys.contains(&"Rookie"));
    assert_eq!(loose[0][0], "Steady");
    assert_eq!(loose[0][3], "1.000000");

    // season cells sit on the k/(n-1) grid (4 entries in 2020, 5 in 2021);
    // tied errors share their mean rank, which can land on a half step
    let grid = |n: usize, cell: &str| {
        let v: f64 = cell.parse().unwrap();
        let steps = v * 2.0 * (n - 1) as f64;
        (steps - steps.round()).abs() < 1e-4
    };
    for row in &loose {
        assert!(grid(4, &row[1]) || row[1].is_empty(), "{row:?}");
        assert!(grid(5, &row[2]), "{row:?}");
    }
}

#[test]
fn missing_data_flag_is_an_error() {
    let out = mockdraft(&["report", "--out", "unused"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--data"));
}
