// Licensed to the Apache Software Foundation (ASF) under one
// or more contributor license agreements.  See the NOTICE file
// distributed with this work for additional information
// regarding copyright ownership.  The ASF licenses this file
// to you under the Apache License, Version 2.0 (the
// "License"); you may not use this file except in compliance
// with the License.  You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing,
// software distributed under the License is distributed on an
// "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, either express or implied.  See the License for the
// specific language governing permissions and limitations
// under the License.

//! `gar`: build, inspect, query and benchmark graph archives.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gar_core::bench::{self, BenchConfig, BenchReport};
use gar_core::ingest::ImportReport;
use gar_core::schema::load_schema;
use gar_core::{
    build_archive, fetch_by_pac, parse_label_expr, validate_layout, Archive, ColumnFile, GarError, Orientation,
};

#[derive(Parser)]
#[command(name = "gar", version, about = "Columnar storage for labeled property graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert CSV vertex and edge tables into an archive.
    Import {
        #[arg(long)]
        schema: PathBuf,
        /// `Type=path`, or a path whose file stem names the vertex type.
        #[arg(long, num_args = 1.., required = true)]
        vertices: Vec<String>,
        /// `Src_Rel_Dst=path`, or a path whose file stem names the edge type.
        #[arg(long, num_args = 1..)]
        edges: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the page row capacity declared in the schema.
        #[arg(long, env = "GAR_PAGE_ROWS")]
        page_rows: Option<usize>,
    },
    /// Print the neighbors of one vertex.
    Neighbors {
        #[arg(long)]
        graph: PathBuf,
        /// Edge type, by full name or relation.
        #[arg(long = "type")]
        edge_type: String,
        /// Internal vertex id.
        #[arg(long)]
        vertex: u64,
        #[arg(long, value_enum, default_value_t = Direction::Out)]
        direction: Direction,
        /// Comma-separated neighbor properties to fetch.
        #[arg(long, value_delimiter = ',')]
        properties: Vec<String>,
        #[arg(long)]
        stats: bool,
    },
    /// Select vertices by a label expression.
    Filter {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "type")]
        vertex_type: String,
        /// Expression over labels using `!`, `&` (or `:`), `|` and parentheses.
        #[arg(long = "where")]
        expr: String,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        stats: bool,
    },
    /// Run a micro-benchmark suite on a generated graph.
    Bench {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Number of vertices; edges are ten times as many.
        #[arg(long, default_value_t = 100_000)]
        scale: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Show schema, column statistics and layout health.
    Info {
        #[arg(long)]
        graph: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Out,
    In,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Topology,
    Labels,
    E2e,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

enum Failure {
    Usage(String),
    Data(GarError),
}

impl From<GarError> for Failure {
    fn from(e: GarError) -> Self {
        Failure::Data(e)
    }
}

type CmdResult = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Import {
            schema,
            vertices,
            edges,
            out,
            page_rows,
        } => import(&schema, &vertices, &edges, &out, page_rows),
        Command::Neighbors {
            graph,
            edge_type,
            vertex,
            direction,
            properties,
            stats,
        } => neighbors(&graph, &edge_type, vertex, direction, &properties, stats),
        Command::Filter {
            graph,
            vertex_type,
            expr,
            count,
            stats,
        } => filter(&graph, &vertex_type, &expr, count, stats),
        Command::Bench {
            suite,
            scale,
            seed,
            format,
        } => run_bench(suite, scale, seed, format),
        Command::Info { graph } => info(&graph),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn named_inputs(args: &[String]) -> Result<Vec<(String, PathBuf)>, Failure> {
    args.iter()
        .map(|arg| match arg.split_once('=') {
            Some((name, path)) if !name.is_empty() => Ok((name.to_string(), PathBuf::from(path))),
            _ => {
                let path = PathBuf::from(arg);
                let stem = path.file_stem().and_then(|s| s.to_str()).map(str::to_string);
                stem.map(|s| (s, path.clone()))
                    .ok_or_else(|| Failure::Usage(format!("cannot infer a type name from `{arg}`")))
            }
        })
        .collect()
}

fn import(schema: &Path, vertices: &[String], edges: &[String], out: &Path, page_rows: Option<usize>) -> CmdResult {
    if !schema.is_file() {
        return Err(Failure::Usage(format!(
            "schema file {} does not exist",
            schema.display()
        )));
    }
    let mut schema = load_schema(schema)?;
    if let Some(pr) = page_rows {
        schema.page_rows = pr;
        schema.validate()?;
    }
    let report = build_archive(&schema, &named_inputs(vertices)?, &named_inputs(edges)?, out)?;
    Ok(import_summary(&report, out))
}

fn import_summary(r: &ImportReport, out: &Path) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "archive written to {}", out.display());
    for (name, n) in &r.vertex_counts {
        let _ = writeln!(s, "vertices {name}: {n}");
    }
    for (name, n) in &r.edge_counts {
        let _ = writeln!(s, "edges {name}: {n}");
    }
    let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
    let _ = writeln!(s, "vertex write: {:.3} ms", ms(r.vertex_write));
    let _ = writeln!(s, "sort: {:.3} ms", ms(r.edges.sort));
    let _ = writeln!(s, "offset: {:.3} ms", ms(r.edges.offset));
    let _ = writeln!(s, "write: {:.3} ms", ms(r.edges.write));
    s
}

fn neighbors(
    graph: &Path,
    edge_type: &str,
    vertex: u64,
    direction: Direction,
    properties: &[String],
    stats: bool,
) -> CmdResult {
    let archive = Archive::open(graph)?;
    let orientation = match direction {
        Direction::Out => Orientation::Csr,
        Direction::In => Orientation::Csc,
    };
    let edge = archive.edge_schema(edge_type)?;
    let neighbor_type = edge.value_type(orientation).to_string();
    let topo = archive.topology(edge_type, orientation)?;
    let columns = properties
        .iter()
        .map(|p| archive.property_column(&neighbor_type, p))
        .collect::<gar_core::Result<Vec<ColumnFile>>>()?;

    let mut s = String::new();
    let mut pages = 0;
    if columns.is_empty() {
        let ids = topo.neighbor_ids(vertex)?;
        pages += topo.retrieval_page_cost();
        let text: Vec<String> = ids.iter().map(u64::to_string).collect();
        if !text.is_empty() {
            let _ = writeln!(s, "{}", text.join(" "));
        }
    } else {
        let pac = topo.neighbor_pac(vertex, archive.page_rows())?;
        pages += topo.retrieval_page_cost();
        let mut fetched = Vec::with_capacity(columns.len());
        for col in &columns {
            fetched.push(fetch_by_pac(col, &pac)?);
            pages += col.pages_read();
        }
        let _ = writeln!(s, "id\t{}", properties.join("\t"));
        for (row, id) in pac.ids().enumerate() {
            let _ = write!(s, "{id}");
            for rows in &fetched {
                let _ = write!(s, "\t{}", rows[row].1);
            }
            s.push('\n');
        }
    }
    if stats {
        let _ = writeln!(s, "pages_touched: {pages}");
    }
    Ok(s)
}

fn filter(graph: &Path, vertex_type: &str, expr: &str, count: bool, stats: bool) -> CmdResult {
    let archive = Archive::open(graph)?;
    let expr = parse_label_expr(&expr.replace(':', "&"))?;
    let out = archive.filter(vertex_type, &expr)?;
    let mut s = String::new();
    if count {
        let _ = writeln!(s, "{}", out.set.row_count());
    } else {
        for id in out.set.ids() {
            let _ = writeln!(s, "{id}");
        }
    }
    if stats {
        let _ = writeln!(s, "evaluation_count: {}", out.evaluations);
    }
    Ok(s)
}

fn run_bench(suite: Suite, scale: u64, seed: u64, format: Format) -> CmdResult {
    if scale == 0 {
        return Err(Failure::Usage("--scale must be positive".into()));
    }
    let cfg = BenchConfig {
        vertices: scale,
        seed,
        ..BenchConfig::default()
    };
    let report = match suite {
        Suite::Topology => BenchReport::Topology(bench::run_topology(&cfg)?),
        Suite::Labels => BenchReport::Labels(bench::run_labels(&cfg)?),
        Suite::E2e => BenchReport::E2e(bench::run_e2e(&cfg)?),
    };
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize") + "\n",
        Format::Table => {
            let rows = bench::report_rows(&report);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
        }
    })
}

fn info(graph: &Path) -> CmdResult {
    let archive = Archive::open(graph)?;
    let schema = archive.schema();
    let mut s = String::new();
    let _ = writeln!(s, "# schema");
    s.push_str(&schema.to_yaml());
    let _ = writeln!(s, "\n# columns");
    let _ = writeln!(
        s,
        "{:<48} {:>8} {:>7} {:>10} {:>6} {:>12}",
        "path", "codec", "type", "rows", "pages", "payload"
    );
    let report = validate_layout(schema, graph);
    for entry in &report.entries {
        if !entry.status.is_ok() {
            continue;
        }
        match ColumnFile::open(archive.data_root().join(&entry.path)) {
            Ok(col) => {
                let st = col.stats();
                let _ = writeln!(
                    s,
                    "{:<48} {:>8} {:>7} {:>10} {:>6} {:>12}",
                    entry.path.display().to_string(),
                    format!("{:?}", col.codec()),
                    format!("{:?}", col.physical_type()),
                    st.rows,
                    st.pages,
                    st.payload_bytes
                );
            }
            Err(e) => {
                let _ = writeln!(s, "{:<48} {e}", entry.path.display().to_string());
            }
        }
    }
    let _ = writeln!(s, "\n# layout");
    let _ = writeln!(s, "{report}");
    if report.is_ok() {
        Ok(s)
    } else {
        print!("{s}");
        Err(Failure::Data(GarError::Corrupt(format!(
            "{} layout problem(s) found",
            report.problems().count()
        ))))
    }
}
