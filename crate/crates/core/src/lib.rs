//! Mock-draft accuracy and consensus.
//!
//! Forecast rankings ("mock drafts") are scored against the realized draft
//! with rank-biased distance, which front-weights early picks and copes with
//! lists of different lengths and partially overlapping players. Many mocks can
//! be fused into one consensus by Borda count or by ranked-choice aggregation,
//! and a batch harness turns a dated, multi-author dataset into percentile
//! tables, error time series and slope-graph data.
//!
//! ```
//! use mockdraft::{rbd, MetricParams, RankedList};
//!
//! let actual = RankedList::from_names(&["Zion Williamson", "Ja Morant", "RJ Barrett"]).unwrap();
//! let mock = RankedList::from_names(&["Zion Williamson", "RJ Barrett", "Ja Morant"]).unwrap();
//! let err = rbd(&mock, &actual, &MetricParams::default()).unwrap();
//! assert!(err > 0.0 && err < 0.05);
//! ```
//!
//! The `parallel` feature (on by default) lets the evaluation harness spread
//! seasons and days over a rayon pool; see [`Execution`].

pub mod aggregation;
pub mod error;
pub mod evaluation;
pub mod exec;
pub mod export;
pub mod fixtures;
pub mod io;
pub mod metrics;
pub mod model;

pub use aggregation::{
    borda, rca, rolling_consensus, rolling_consensus_detailed, BordaResult, Consensus, Method,
    RcaRound, RcaTrace, RoundAction,
};
pub use error::{Error, Result};
pub use evaluation::{
    error_timeseries, percentile_table, select_final_mocks, slopegraph, FinalMockSelection,
    PercentileRow, PercentileTable, RowKey, SeriesPoint, SlopeGraph,
};
pub use exec::Execution;
pub use io::{load_dataset, AliasTable};
pub use metrics::{mae, prefix_weight, rbd, rbo_ext, EvalUniverse, MetricParams, RboBreakdown};
pub use model::{
    build_ranking, overlap_at_depth, ActualDraft, AuthorKey, DraftDataset, ForecastType, ItemId,
    MockDraftRecord, Position, RankedList,
};
