//! Command-line front end.
//!
//! Output is TSV with a header row unless `--json` is given, in which case
//! every record is one JSON object per line carrying `"schema": 1`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::bounds::{self, BoundKind};
use crate::cost::{CostModel, LabelCostTable};
use crate::dataset::{Dataset, Format};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::index::{within, ExtraFilter, RangeOptions, SearchIndex, Searcher, Verify};

/// Version of the JSON record layout.
pub const JSON_SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "gedsearch",
    version,
    about = "Graph edit distance similarity search"
)]
pub struct Cli {
    /// Emit JSON lines instead of TSV.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for embedding and verification; defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dataset statistics. TSV columns: dataset graphs avg_vertices avg_edges avg_degree degree_stddev labels.
    Stats(DataArgs),
    /// Build an index and write it to --index. TSV columns: graphs bound build_seconds bytes.
    Build {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        index: PathBuf,
    },
    /// Range query. TSV columns: id distance kind.
    Range {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long)]
        radius: f64,
        #[arg(long, value_enum, default_value_t = Verify::Exact)]
        verify: Verify,
        #[arg(long, value_enum)]
        extra_filter: Option<ExtraFilter>,
    },
    /// k-nearest-neighbor query with ties. TSV columns: id distance kind.
    Knn {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long)]
        k: usize,
    },
    /// Every bound for one pair. TSV columns: slf llb dlb clb branch_lb branch_ub exact.
    Bounds {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        costs: CostArgs,
        #[arg(long, num_args = 2, value_names = ["G", "H"])]
        pair: Vec<usize>,
        /// Also compute the exact distance.
        #[arg(long)]
        exact: bool,
    },
    /// Filter benchmark over sampled queries. TSV columns: radius mean_candidates
    /// mean_filter_ms mean_verify_ms mean_answers [mean_slf_candidates].
    Bench {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 50)]
        queries: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        radii: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Verify::None)]
        verify: Verify,
        /// Also count candidates of the simple label filter by linear scan.
        #[arg(long)]
        compare_slf: bool,
    },
}

#[derive(Debug, Args)]
pub struct DataArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Tud)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    /// Edit costs `cv,ce,cvl,cel`.
    #[arg(long, default_value = "1,1,1,1")]
    pub costs: String,
    /// CSV matrix of vertex relabel costs, labels in the first row and column.
    #[arg(long)]
    pub label_costs: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[command(flatten)]
    pub costs: CostArgs,
    #[arg(long, value_enum, default_value_t = BoundKind::Clb)]
    pub bound: BoundKind,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Prebuilt index; its stored cost model and bound override the flags.
    #[arg(long)]
    pub index: Option<PathBuf>,
    /// Id of the query graph in the dataset.
    #[arg(long)]
    pub query: usize,
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => 1,
            };
        }
    };
    match run(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Usage("--threads must be at least 1".into()));
        }
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let mut w = Emitter {
        out,
        json: cli.json,
    };
    match &cli.command {
        Command::Stats(data) => stats(data, &mut w),
        Command::Build { data, model, index } => build(data, model, index, &mut w),
        Command::Range {
            query,
            radius,
            verify,
            extra_filter,
        } => range(query, *radius, *verify, *extra_filter, &mut w),
        Command::Knn { query, k } => knn(query, *k, &mut w),
        Command::Bounds {
            data,
            costs,
            pair,
            exact,
        } => pair_bounds(data, costs, pair, *exact, &mut w),
        Command::Bench {
            data,
            model,
            queries,
            radii,
            verify,
            compare_slf,
        } => bench(
            data,
            model,
            *queries,
            radii,
            *verify,
            *compare_slf,
            cli.seed,
            &mut w,
        ),
    }
}

struct Emitter<'a> {
    out: &'a mut dyn Write,
    json: bool,
}

impl Emitter<'_> {
    fn header(&mut self, columns: &[&str]) -> Result<()> {
        if !self.json {
            self.line(&columns.join("\t"))?;
        }
        Ok(())
    }

    /// Writes a record: the object as JSON, or `cells` as a TSV row.
    fn record(&mut self, value: serde_json::Value, cells: &[String]) -> Result<()> {
        if self.json {
            let mut value = value;
            value["schema"] = json!(JSON_SCHEMA);
            self.line(&value.to_string())
        } else {
            self.line(&cells.join("\t"))
        }
    }

    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}").map_err(|e| Error::io("<stdout>", e))
    }
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_owned(), num)
}

fn load(data: &DataArgs) -> Result<Dataset> {
    Dataset::load(&data.dataset, data.format)
}

fn cost_model(args: &CostArgs, ds: &mut Dataset) -> Result<CostModel> {
    let mut cost: CostModel = args.costs.parse()?;
    if let Some(path) = &args.label_costs {
        cost = cost.with_label_costs(LabelCostTable::from_csv(path, &mut ds.vertex_labels)?);
    }
    cost.validated()
}

fn graph(ds: &Dataset, id: usize) -> Result<&Graph> {
    ds.graphs.get(id).ok_or_else(|| {
        Error::Usage(format!(
            "graph id {id} is out of range for {} graphs",
            ds.len()
        ))
    })
}

fn stats(data: &DataArgs, w: &mut Emitter) -> Result<()> {
    let ds = load(data)?;
    let s = ds.stats();
    w.header(&[
        "dataset",
        "graphs",
        "avg_vertices",
        "avg_edges",
        "avg_degree",
        "degree_stddev",
        "labels",
    ])?;
    let mut value = serde_json::to_value(&s).expect("stats serialize");
    value["dataset"] = json!(ds.name);
    w.record(
        value,
        &[
            ds.name.clone(),
            s.graphs.to_string(),
            format!("{:.2}", s.avg_vertices),
            format!("{:.2}", s.avg_edges),
            format!("{:.2}", s.avg_degree),
            format!("{:.2}", s.degree_stddev),
            s.labels.to_string(),
        ],
    )
}

fn build(data: &DataArgs, model: &ModelArgs, path: &PathBuf, w: &mut Emitter) -> Result<()> {
    let mut ds = load(data)?;
    let cost = cost_model(&model.costs, &mut ds)?;
    let start = Instant::now();
    let index = SearchIndex::build(&ds.graphs, &cost, model.bound)?;
    let seconds = start.elapsed().as_secs_f64();
    let bytes = index.to_bytes();
    std::fs::write(path, &bytes).map_err(|e| Error::io(path, e))?;
    w.header(&["graphs", "bound", "build_seconds", "bytes"])?;
    w.record(
        json!({"graphs": index.len(), "bound": model.bound, "build_seconds": seconds, "bytes": bytes.len()}),
        &[index.len().to_string(), model.bound.to_string(), format!("{seconds:.3}"), bytes.len().to_string()],
    )
}

/// Loads the dataset and either the stored index or a fresh one.
fn prepare(q: &QueryArgs) -> Result<(Dataset, SearchIndex)> {
    let mut ds = load(&q.data)?;
    let index = match &q.index {
        Some(path) => SearchIndex::load(path)?,
        None => {
            let cost = cost_model(&q.model.costs, &mut ds)?;
            SearchIndex::build(&ds.graphs, &cost, q.model.bound)?
        }
    };
    graph(&ds, q.query)?;
    Ok((ds, index))
}

fn answers(
    result: &crate::index::QueryResult,
    header: serde_json::Value,
    w: &mut Emitter,
) -> Result<()> {
    if w.json {
        let mut value = serde_json::to_value(result).expect("result serializes");
        for (k, v) in header.as_object().expect("header is an object") {
            value[k] = v.clone();
        }
        return w.record(value, &[]);
    }
    w.header(&["id", "distance", "kind"])?;
    for a in &result.answers {
        let kind = serde_json::to_value(a.kind).expect("kind serializes");
        w.record(
            json!(null),
            &[
                a.id.to_string(),
                num(a.distance),
                kind.as_str().unwrap_or("").to_owned(),
            ],
        )?;
    }
    Ok(())
}

fn range(
    q: &QueryArgs,
    radius: f64,
    verify: Verify,
    extra: Option<ExtraFilter>,
    w: &mut Emitter,
) -> Result<()> {
    let (ds, index) = prepare(q)?;
    let searcher = Searcher::new(&index, &ds.graphs)?;
    let result = searcher.range(
        &ds.graphs[q.query],
        radius,
        RangeOptions {
            verify,
            extra_filter: extra,
        },
    )?;
    answers(&result, json!({"query": q.query, "radius": radius}), w)
}

fn knn(q: &QueryArgs, k: usize, w: &mut Emitter) -> Result<()> {
    let (ds, index) = prepare(q)?;
    let searcher = Searcher::new(&index, &ds.graphs)?;
    let result = searcher.knn(&ds.graphs[q.query], k)?;
    answers(&result, json!({"query": q.query, "k": k}), w)
}

fn pair_bounds(
    data: &DataArgs,
    costs: &CostArgs,
    pair: &[usize],
    exact: bool,
    w: &mut Emitter,
) -> Result<()> {
    let mut ds = load(data)?;
    let cost = cost_model(costs, &mut ds)?;
    let (g, h) = (graph(&ds, pair[0])?, graph(&ds, pair[1])?);
    let r = bounds::bound_report(g, h, &cost, exact)?;
    w.header(&[
        "slf",
        "llb",
        "dlb",
        "clb",
        "branch_lb",
        "branch_ub",
        "exact",
    ])?;
    let value = serde_json::to_value(&r).expect("report serializes");
    w.record(
        value,
        &[
            num(r.slf),
            num(r.llb),
            num(r.dlb),
            num(r.clb),
            num(r.branch_lb),
            opt(r.branch_ub),
            opt(r.exact),
        ],
    )
}

#[derive(Debug, Serialize)]
struct BenchRow {
    radius: f64,
    mean_candidates: f64,
    mean_filter_ms: f64,
    mean_verify_ms: f64,
    mean_answers: f64,
    mean_slf_candidates: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn bench(
    data: &DataArgs,
    model: &ModelArgs,
    queries: usize,
    radii: &[f64],
    verify: Verify,
    compare_slf: bool,
    seed: u64,
    w: &mut Emitter,
) -> Result<()> {
    let mut ds = load(data)?;
    let cost = cost_model(&model.costs, &mut ds)?;
    if compare_slf && !cost.is_uniform_unit() {
        return Err(Error::Usage("--compare-slf needs unit costs".into()));
    }
    let start = Instant::now();
    let index = SearchIndex::build(&ds.graphs, &cost, model.bound)?;
    let build_seconds = start.elapsed().as_secs_f64();
    let searcher = Searcher::new(&index, &ds.graphs)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = queries.min(ds.len());
    let mut picked = rand::seq::index::sample(&mut rng, ds.len(), count).into_vec();
    picked.sort_unstable();

    let environment = json!({
        "dataset": ds.name,
        "graphs": ds.len(),
        "bound": model.bound,
        "costs": model.costs.costs,
        "label_costs": model.costs.label_costs,
        "seed": seed,
        "queries": count,
        "threads": rayon::current_num_threads(),
        "build_seconds": build_seconds,
    });
    if w.json {
        w.record(environment, &[])?;
    } else {
        w.line(&format!(
            "# dataset={} graphs={} bound={} costs={} seed={} queries={} build_seconds={:.3}",
            ds.name,
            ds.len(),
            model.bound,
            model.costs.costs,
            seed,
            count,
            build_seconds
        ))?;
        let mut columns = vec![
            "radius",
            "mean_candidates",
            "mean_filter_ms",
            "mean_verify_ms",
            "mean_answers",
        ];
        if compare_slf {
            columns.push("mean_slf_candidates");
        }
        w.header(&columns)?;
    }

    let denom = count.max(1) as f64;
    for &r in radii {
        let (mut cands, mut filter, mut verify_ms, mut found, mut slf_cands) =
            (0usize, 0.0, 0.0, 0usize, 0usize);
        for &qi in &picked {
            let q = &ds.graphs[qi];
            let result = searcher.range(
                q,
                r,
                RangeOptions {
                    verify,
                    extra_filter: None,
                },
            )?;
            cands += result.candidates;
            filter += result.filter_time.as_secs_f64() * 1e3;
            verify_ms += result.verify_time.as_secs_f64() * 1e3;
            found += result.answers.len();
            if compare_slf {
                slf_cands += ds
                    .graphs
                    .iter()
                    .filter(|g| within(bounds::slf(q, g), r))
                    .count();
            }
        }
        let row = BenchRow {
            radius: r,
            mean_candidates: cands as f64 / denom,
            mean_filter_ms: filter / denom,
            mean_verify_ms: verify_ms / denom,
            mean_answers: found as f64 / denom,
            mean_slf_candidates: compare_slf.then(|| slf_cands as f64 / denom),
        };
        let mut cells = vec![
            num(row.radius),
            format!("{:.2}", row.mean_candidates),
            format!("{:.3}", row.mean_filter_ms),
            format!("{:.3}", row.mean_verify_ms),
            format!("{:.2}", row.mean_answers),
        ];
        if let Some(s) = row.mean_slf_candidates {
            cells.push(format!("{s:.2}"));
        }
        w.record(serde_json::to_value(&row).expect("row serializes"), &cells)?;
    }
    Ok(())
}
