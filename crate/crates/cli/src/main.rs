use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use clap::{Parser, Subcommand, ValueEnum};
use mockdraft::aggregation::{aggregate, latest_by_author, Consensus, DEFAULT_DRAFT_LENGTH};
use mockdraft::evaluation::{build_report, select_final_mocks, ReportConfig, RowKey};
use mockdraft::export::{fmt_decimal, write_consensus, write_rca_trace, write_report};
use mockdraft::metrics::{DEFAULT_IMPUTE_RANK, DEFAULT_Q};
use mockdraft::model::DEFAULT_COLLECTION_WINDOW_DAYS;
use mockdraft::{
    load_dataset, mae, rbd, AuthorKey, DraftDataset, Error, EvalUniverse, Execution, ForecastType,
    Method, MetricParams,
};

#[derive(Parser, Debug)]
#[command(
    name = "mockdraft",
    version,
    about = "Score, aggregate and evaluate mock drafts"
)]
struct Cli {
    /// Mock draft CSV (season,author,forecast_type,publish_date,rank,player[,tier])
    #[arg(long, global = true, value_name = "FILE")]
    data: Option<PathBuf>,
    /// Actual draft CSV (season,draft_date,rank,player)
    #[arg(long, global = true, value_name = "FILE")]
    actuals: Option<PathBuf>,
    /// Player alias CSV (variant,canonical)
    #[arg(long, global = true, value_name = "FILE")]
    alias: Option<PathBuf>,
    /// Persistence parameter of the rank-biased metric
    #[arg(long, global = true, default_value_t = DEFAULT_Q)]
    q: f64,
    /// Trailing window for rolling consensus, in days
    #[arg(long, global = true, default_value_t = mockdraft::evaluation::DEFAULT_WINDOW_DAYS)]
    window_days: u32,
    /// How far before the draft a mock still counts as final, in days
    #[arg(long, global = true, default_value_t = mockdraft::evaluation::DEFAULT_HORIZON_DAYS)]
    horizon_days: u32,
    /// Seasons an author needs to appear in the percentile table
    #[arg(long, global = true, default_value_t = mockdraft::evaluation::DEFAULT_MIN_SEASONS)]
    min_seasons: usize,
    /// Restrict consensus output to one method (default: both)
    #[arg(long, global = true, value_enum)]
    method: Option<MethodArg>,
    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Evaluate on a single thread
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Score one author's final mock of a season against the actual draft
    Score {
        #[arg(long)]
        season: i32,
        #[arg(long)]
        author: String,
        #[arg(long, value_enum, default_value_t = TypeArg::Mock)]
        forecast_type: TypeArg,
        /// Also print MAE and log-MAE
        #[arg(long)]
        mae: bool,
    },
    /// Rolling consensus of the latest mock per author as of a date
    Consensus {
        #[arg(long)]
        season: i32,
        #[arg(long, value_name = "YYYY-MM-DD")]
        as_of: NaiveDate,
        /// Consensus length (default: actual draft length, else 60)
        #[arg(long)]
        length: Option<usize>,
    },
    /// Percentile table, error time series and slope-graph files
    Report,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Borda,
    Rca,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Borda => Method::Borda,
            MethodArg::Rca => Method::Rca,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TypeArg {
    Mock,
    Ranking,
}

impl Cli {
    fn params(&self) -> Result<MetricParams> {
        Ok(MetricParams::new(
            self.q,
            DEFAULT_IMPUTE_RANK,
            EvalUniverse::default(),
        )?)
    }

    fn methods(&self) -> Vec<Method> {
        match self.method {
            Some(m) => vec![m.into()],
            None => Method::ALL.to_vec(),
        }
    }

    fn out_dir(&self) -> Result<&Path> {
        self.out
            .as_deref()
            .context("--out is required for this command")
    }

    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    fn load(&self) -> Result<DraftDataset> {
        let data = self.data.as_deref().context("--data is required")?;
        let dataset = load_dataset(data, self.actuals.as_deref(), self.alias.as_deref())
            .with_context(|| format!("loading {}", data.display()))?;
        let stale = dataset.outside_collection_window(DEFAULT_COLLECTION_WINDOW_DAYS);
        if !stale.is_empty() {
            eprintln!(
                "warning: {} mock(s) published outside the {}-day collection window",
                stale.len(),
                DEFAULT_COLLECTION_WINDOW_DAYS
            );
        }
        Ok(dataset)
    }
}

fn score(
    cli: &Cli,
    season: i32,
    author: &str,
    forecast_type: TypeArg,
    with_mae: bool,
) -> Result<()> {
    let dataset = cli.load()?;
    let params = cli.params()?;
    let forecast_type = match forecast_type {
        TypeArg::Mock => ForecastType::Mock,
        TypeArg::Ranking => ForecastType::Ranking,
    };
    let key = AuthorKey::new(author, forecast_type);
    let selection = select_final_mocks(&dataset, season, cli.horizon_days)?
        .into_iter()
        .find(|s| s.author_key == key)
        .ok_or_else(|| Error::UnknownAuthor {
            author: key.to_string(),
            season,
        })?;
    let actual = &dataset.actual(season)?.list;
    let mock = &selection.record.list;
    let value = rbd(mock, actual, &params)?;
    println!("rbd {} ({value:?})", fmt_decimal(value));
    if with_mae {
        let plain = mae(mock, actual, &params, false)?;
        let log = mae(mock, actual, &params, true)?;
        println!("mae {} ({plain:?})", fmt_decimal(plain));
        println!("log-mae {} ({log:?})", fmt_decimal(log));
    }
    println!(
        "final mock: {} published {} ({} days before the draft)",
        selection.author_key, selection.record.publish_date, selection.days_before_draft
    );
    Ok(())
}

fn consensus(cli: &Cli, season: i32, as_of: NaiveDate, length: Option<usize>) -> Result<()> {
    let dataset = cli.load()?;
    let out = cli.out_dir()?;
    let pool = latest_by_author(&dataset, season, as_of, cli.window_days);
    if pool.is_empty() {
        return Err(Error::NoMocksInWindow {
            season,
            as_of,
            window_days: cli.window_days,
        }
        .into());
    }
    let length = match length {
        Some(0) => bail!("--length must be positive"),
        Some(n) => n,
        None => dataset
            .actual(season)
            .map(|a| a.list.len())
            .unwrap_or(DEFAULT_DRAFT_LENGTH),
    };
    fs::create_dir_all(out)?;
    for method in cli.methods() {
        let result = aggregate(pool.iter().map(|m| &m.list), method, length)?;
        let path = out.join(format!(
            "consensus_{season}_{as_of}_{}.csv",
            method.as_str()
        ));
        write_consensus(BufWriter::new(File::create(&path)?), &result, season, as_of)?;
        println!("{}", path.display());
        if let Consensus::Rca(trace) = &result {
            let path = out.join(format!("rca_trace_{season}_{as_of}.log"));
            write_rca_trace(BufWriter::new(File::create(&path)?), trace)?;
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn report(cli: &Cli) -> Result<()> {
    let dataset = cli.load()?;
    let out = cli.out_dir()?;
    let config = ReportConfig {
        params: cli.params()?,
        window_days: cli.window_days,
        horizon_days: cli.horizon_days,
        min_seasons: cli.min_seasons,
    };
    let mut report = build_report(cli.execution(), &dataset, &config)?;
    let keep = cli.methods();
    let shown = |key: &RowKey| match key {
        RowKey::Consensus(m) => keep.contains(m),
        RowKey::Author(_) => true,
    };
    report.percentiles.rows.retain(|r| shown(&r.key));
    for points in report.timeseries.values_mut() {
        points.retain(|p| shown(&p.series));
    }
    for path in write_report(out, &report)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Score {
            season,
            author,
            forecast_type,
            mae,
        } => score(cli, *season, author, *forecast_type, *mae),
        Command::Consensus {
            season,
            as_of,
            length,
        } => consensus(cli, *season, *as_of, *length),
        Command::Report => report(cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
