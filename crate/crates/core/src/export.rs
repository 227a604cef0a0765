//! Plot- and spreadsheet-ready text outputs. All writers are deterministic.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;

use crate::aggregation::{Consensus, RcaTrace};
use crate::error::Result;
use crate::evaluation::{PercentileTable, Report, SeriesPoint, SlopeGraph};
use crate::model::{AuthorKey, ForecastType};

/// Decimal with at least six significant digits and at least six places.
pub fn fmt_decimal(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{:.6}", if x == 0.0 { 0.0 } else { x });
    }
    let magnitude = x.abs().log10().floor() as i32;
    let places = (5 - magnitude).clamp(6, 17) as usize;
    format!("{x:.places$}")
}

/// One row per author/consensus key, one column per season, then the average.
pub fn write_percentile_table<W: Write>(writer: W, table: &PercentileTable) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header = vec!["author".to_string()];
    header.extend(table.seasons.iter().map(i32::to_string));
    header.push("avg".into());
    wtr.write_record(&header)?;
    for row in &table.rows {
        let mut record = vec![row.key.to_string()];
        record.extend(table.seasons.iter().map(|s| {
            row.per_season
                .get(s)
                .map(|&p| fmt_decimal(p))
                .unwrap_or_default()
        }));
        record.push(fmt_decimal(row.avg_percentile));
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Long format: `date,series,rbd`.
pub fn write_timeseries<W: Write>(writer: W, points: &[SeriesPoint]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["date", "series", "rbd"])?;
    for p in points {
        wtr.write_record([p.date.to_string(), p.series.to_string(), fmt_decimal(p.rbd)])?;
    }
    wtr.flush()?;
    Ok(())
}

/// `kind,player,mock_rank,actual_rank`, with `kind` one of `segment`,
/// `mock_terminal`, `actual_terminal` and the missing side left empty.
pub fn write_slopegraph<W: Write>(writer: W, graph: &SlopeGraph) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["kind", "player", "mock_rank", "actual_rank"])?;
    for s in &graph.segments {
        wtr.write_record([
            "segment",
            s.item.name(),
            &s.mock_rank.to_string(),
            &s.actual_rank.to_string(),
        ])?;
    }
    for t in &graph.mock_terminal {
        wtr.write_record(["mock_terminal", t.item.name(), &t.rank.to_string(), ""])?;
    }
    for t in &graph.actual_terminal {
        wtr.write_record(["actual_terminal", t.item.name(), "", &t.rank.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

/// `rank,player,method,season,as_of_date,score,round_count`.
///
/// `score` is filled for Borda only, `round_count` (ballot counts needed to
/// settle that pick) for RCA only.
pub fn write_consensus<W: Write>(
    writer: W,
    consensus: &Consensus,
    season: i32,
    as_of: NaiveDate,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record([
        "rank",
        "player",
        "method",
        "season",
        "as_of_date",
        "score",
        "round_count",
    ])?;
    let method = consensus.method().as_str();
    let season = season.to_string();
    let as_of = as_of.to_string();
    for (i, item) in consensus.ordering().iter().enumerate() {
        let (score, rounds) = match consensus {
            Consensus::Borda(b) => (b.score(item).to_string(), String::new()),
            Consensus::Rca(r) => (String::new(), r.rounds_for_pick(i + 1).count().to_string()),
        };
        wtr.write_record([
            (i + 1).to_string().as_str(),
            item.name(),
            method,
            &season,
            &as_of,
            &score,
            &rounds,
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_rca_trace<W: Write>(mut writer: W, trace: &RcaTrace) -> Result<()> {
    writer.write_all(trace.to_log().as_bytes())?;
    Ok(())
}

/// Writes a full report into `dir`: `percentiles.csv`, one
/// `timeseries_<season>.csv` per season and one `slopegraph_<season>_<author>.csv`
/// per final mock. Returns the files written, in order.
pub fn write_report(dir: &Path, report: &Report) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut emit = |name: String, f: &dyn Fn(&mut BufWriter<File>) -> Result<()>| -> Result<()> {
        let path = dir.join(name);
        let mut out = BufWriter::new(File::create(&path)?);
        f(&mut out)?;
        out.flush()?;
        written.push(path);
        Ok(())
    };
    emit("percentiles.csv".into(), &|w| {
        write_percentile_table(w, &report.percentiles)
    })?;
    for (season, points) in &report.timeseries {
        emit(format!("timeseries_{season}.csv"), &|w| {
            write_timeseries(w, points)
        })?;
    }
    let mut taken = HashSet::new();
    for (selection, graph) in &report.slopegraphs {
        let base = format!(
            "slopegraph_{}_{}",
            selection.season,
            slug(&selection.author_key)
        );
        let mut name = format!("{base}.csv");
        let mut n = 2;
        while !taken.insert(name.clone()) {
            name = format!("{base}-{n}.csv");
            n += 1;
        }
        emit(name, &|w| write_slopegraph(w, graph))?;
    }
    Ok(written)
}

fn slug(key: &AuthorKey) -> String {
    let mut out = String::new();
    for c in key.author.chars().flat_map(char::to_lowercase) {
        if c.is_alphanumeric() {
            out.push(c);
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    let mut out = out.trim_matches('-').to_string();
    if out.is_empty() {
        out.push_str("author");
    }
    if key.forecast_type == ForecastType::Ranking {
        out.push_str("-r");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregation::{borda, rca};
    use crate::evaluation::slopegraph;
    use crate::fixtures;
    use crate::model::RankedList;

    #[test]
    fn decimals_keep_six_significant_digits() {
        assert_eq!(fmt_decimal(0.0), "0.000000");
        assert_eq!(fmt_decimal(0.5), "0.500000");
        assert_eq!(fmt_decimal(1.0), "1.000000");
        assert_eq!(fmt_decimal(0.0000123456789), "0.0000123457");
        assert_eq!(fmt_decimal(23.0), "23.000000");
    }

    #[test]
    fn consensus_file_columns() {
        let mocks = fixtures::goat_mocks();
        let b = Consensus::Borda(borda(&mocks, 5).unwrap());
        let mut out = Vec::new();
        write_consensus(&mut out, &b, 2021, fixtures::draft_date()).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "rank,player,method,season,as_of_date,score,round_count"
        );
        assert_eq!(lines[1], "1,Michael Jordan,borda,2021,2021-07-29,23,");

        let r = Consensus::Rca(rca(&mocks, 8).unwrap());
        let mut out = Vec::new();
        write_consensus(&mut out, &r, 2021, fixtures::draft_date()).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        // pick 5 took three counts: Horry out, Pippen out, Bryant elected
        assert_eq!(lines[5], "5,Kobe Bryant,rca,2021,2021-07-29,,3");
    }

    #[test]
    fn author_slugs() {
        assert_eq!(
            slug(&AuthorKey::new("Kevin O'Connor", ForecastType::Mock)),
            "kevin-o-connor"
        );
        assert_eq!(
            slug(&AuthorKey::new("Chad Ford", ForecastType::Ranking)),
            "chad-ford-r"
        );
        assert_eq!(slug(&AuthorKey::new("???", ForecastType::Mock)), "author");
    }

    #[test]
    fn slopegraph_records() {
        let g = slopegraph(
            &RankedList::from_names(&["a", "b"]).unwrap(),
            &RankedList::from_names(&["b", "c"]).unwrap(),
        );
        let mut out = Vec::new();
        write_slopegraph(&mut out, &g).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "kind,player,mock_rank,actual_rank\nsegment,b,2,1\nmock_terminal,a,1,\nactual_terminal,c,,2\n"
        );
    }
}
