//! Test-only reference implementations. Deliberately naive: plain string
//! slices, set intersections recomputed at every depth, explicit powers.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use chrono::{Duration, NaiveDate};
use mockdraft::{ActualDraft, DraftDataset, ForecastType, MockDraftRecord, RankedList};
use rand::seq::SliceRandom;
use rand::Rng;

/// `|prefix_d(a) ∩ prefix_d(b)|`, each prefix cut at its own list's length.
pub fn overlap(a: &[String], b: &[String], d: usize) -> usize {
    let pa: HashSet<&String> = a.iter().take(d).collect();
    b.iter().take(d).filter(|x| pa.contains(x)).count()
}

/// The three summands of extrapolated RBO, evaluated term by term.
pub fn rbo_ext_terms(a: &[String], b: &[String], q: f64) -> (f64, f64, f64) {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let s = short.len();
    let l = long.len();
    let scale = (1.0 - q) / q;
    let x_s = overlap(short, long, s) as f64;
    let mut first = 0.0;
    for d in 1..=s {
        first += q.powi(d as i32) * overlap(short, long, d) as f64 / d as f64;
    }
    let mut second = 0.0;
    for d in (s + 1)..=l {
        let df = d as f64;
        let x_d = overlap(short, long, d) as f64;
        second += q.powi(d as i32) * (x_d / df + x_s / s as f64 * (1.0 - s as f64 / df));
    }
    let x_l = overlap(short, long, l) as f64;
    let third = q.powi(l as i32) * (x_l / l as f64 + x_s / s as f64 * (1.0 - s as f64 / l as f64));
    (scale * first, scale * second, third)
}

pub fn rbo_ext(a: &[String], b: &[String], q: f64) -> f64 {
    let (x, y, z) = rbo_ext_terms(a, b, q);
    x + y + z
}

/// Infinite-depth RBO truncated at `depth`, with agreement past the end of two
/// equal-length lists held at its final value.
pub fn rbo_infinite_truncated(a: &[String], b: &[String], q: f64, depth: usize) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let final_agreement = overlap(a, b, n) as f64 / n as f64;
    let mut sum = 0.0;
    let mut power = 1.0;
    for d in 1..=depth {
        power *= q;
        let agreement = if d <= n {
            overlap(a, b, d) as f64 / d as f64
        } else {
            final_agreement
        };
        sum += power * agreement;
    }
    (1.0 - q) / q * sum
}

/// Share of weight on ranks `1..=depth`, by summing each rank's weight
/// `(1-q)/q * Σ_{k≥i} q^k / k` until the tail drops below machine precision.
pub fn prefix_weight_by_accumulation(q: f64, depth: usize) -> f64 {
    let mut tail_terms = Vec::new();
    let mut k = 1usize;
    loop {
        let term = q.powi(k as i32) / k as f64;
        tail_terms.push(term);
        if term < 1e-20 && k > depth {
            break;
        }
        k += 1;
    }
    // suffix sums, smallest first for accuracy
    let mut suffix = vec![0.0; tail_terms.len() + 1];
    for i in (0..tail_terms.len()).rev() {
        suffix[i] = suffix[i + 1] + tail_terms[i];
    }
    (0..depth).map(|i| (1.0 - q) / q * suffix[i]).sum()
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn ranked(names: &[String]) -> RankedList {
    RankedList::from_names(names).expect("valid test list")
}

/// A random list of `len` distinct items drawn from `universe`.
pub fn random_list<R: Rng>(rng: &mut R, universe: &[String], len: usize) -> Vec<String> {
    universe.choose_multiple(rng, len).cloned().collect()
}

/// Seasons built so that one author ("Oracle") always matches the actual draft
/// and every other author's error is distinct. The other authors all replace
/// the top pick with a player nobody else lists, so neither consensus can
/// reproduce the actual order.
pub fn graded_dataset(authors: usize, seasons: &[i32]) -> DraftDataset {
    assert!((2..=27).contains(&authors));
    let mut mocks = Vec::new();
    let mut actuals = BTreeMap::new();
    for &season in seasons {
        let actual_names = names(&format!("s{season}p"), 60);
        let draft_date = NaiveDate::from_ymd_opt(season, 6, 20).unwrap();
        let published = draft_date - Duration::days(2);
        mocks.push(MockDraftRecord {
            list: ranked(&actual_names),
            author: "Oracle".into(),
            forecast_type: ForecastType::Mock,
            publish_date: published,
            season,
        });
        for k in 1..authors {
            let mut list = actual_names.clone();
            list[0] = format!("s{season}ghost{k}");
            // swap a distinct adjacent pair per author
            list.swap(2 * k, 2 * k + 1);
            mocks.push(MockDraftRecord {
                list: ranked(&list),
                author: format!("Author {k:02}"),
                forecast_type: ForecastType::Mock,
                publish_date: published,
                season,
            });
        }
        actuals.insert(
            season,
            ActualDraft {
                list: ranked(&actual_names),
                draft_date,
            },
        );
    }
    DraftDataset::new(mocks, actuals).expect("valid dataset")
}
