//! Dataset loading and writing.
//!
//! Two layouts are supported:
//!
//! * **TUDataset**: `<name>_A.txt` holds 1-based endpoint pairs with each
//!   undirected edge listed in both directions, `<name>_graph_indicator.txt`
//!   the 1-based graph id of every vertex line, `<name>_node_labels.txt` one
//!   integer label per vertex line and the optional `<name>_edge_labels.txt`
//!   one label per line of `_A.txt`.
//! * **edgelist**: one block per graph, `g <id> <n>` header followed by
//!   `v <idx> <label>` and `e <u> <v> [label]` lines, blocks separated by
//!   blank lines. Lines starting with `#` are ignored.
//!
//! Graph ids are 0-based positions in file order.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{dataset_max_degree, Graph, Label, SymbolTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Tud,
    Edgelist,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tud" => Ok(Format::Tud),
            "edgelist" => Ok(Format::Edgelist),
            other => Err(Error::Usage(format!("unknown dataset format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Dataset {
    pub name: String,
    pub graphs: Vec<Graph>,
    pub vertex_labels: SymbolTable,
    pub edge_labels: SymbolTable,
}

impl Dataset {
    pub fn new(name: impl Into<String>, graphs: Vec<Graph>, vertex_labels: SymbolTable) -> Self {
        let graphs = graphs
            .into_iter()
            .enumerate()
            .map(|(i, g)| g.with_id(i))
            .collect();
        Dataset {
            name: name.into(),
            graphs,
            vertex_labels,
            edge_labels: SymbolTable::new(),
        }
    }

    pub fn load(path: &Path, format: Format) -> Result<Self> {
        match format {
            Format::Tud => read_tud(path),
            Format::Edgelist => read_edgelist_file(path),
        }
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        dataset_max_degree(&self.graphs)
    }

    pub fn stats(&self) -> DatasetStats {
        DatasetStats::of(self)
    }
}

/// Summary statistics in the style of benchmark dataset tables.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DatasetStats {
    pub graphs: usize,
    pub avg_vertices: f64,
    pub avg_edges: f64,
    pub avg_degree: f64,
    pub degree_stddev: f64,
    pub labels: usize,
}

impl DatasetStats {
    pub fn of(ds: &Dataset) -> Self {
        let n = ds.graphs.len();
        let vertices: usize = ds.graphs.iter().map(Graph::vertex_count).sum();
        let edges: usize = ds.graphs.iter().map(Graph::edge_count).sum();
        let mut used = vec![false; ds.vertex_labels.len()];
        let mut extra = std::collections::BTreeSet::new();
        for g in &ds.graphs {
            for &l in g.labels() {
                match used.get_mut(l as usize) {
                    Some(slot) => *slot = true,
                    None => {
                        extra.insert(l);
                    }
                }
            }
        }
        let labels = used.iter().filter(|&&u| u).count() + extra.len();
        let (avg_degree, degree_stddev) = if vertices == 0 {
            (0.0, 0.0)
        } else {
            let mean = 2.0 * edges as f64 / vertices as f64;
            let var = ds
                .graphs
                .iter()
                .flat_map(|g| g.degrees())
                .map(|d| (d as f64 - mean).powi(2))
                .sum::<f64>()
                / vertices as f64;
            (mean, var.sqrt())
        };
        let avg = |total: usize| if n == 0 { 0.0 } else { total as f64 / n as f64 };
        DatasetStats {
            graphs: n,
            avg_vertices: avg(vertices),
            avg_edges: avg(edges),
            avg_degree,
            degree_stddev,
            labels,
        }
    }
}

fn open_lines(path: &Path) -> Result<Vec<String>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    BufReader::new(file)
        .lines()
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|e| Error::io(path, e))
}

/// Resolves a TUDataset location to `(directory, name)`.
///
/// Accepts the dataset directory itself (`.../MUTAG`), a prefix
/// (`.../MUTAG/MUTAG`) or any of the member files.
fn tud_prefix(path: &Path) -> (PathBuf, String) {
    if path.is_dir() {
        let name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        if !path.join(format!("{name}_graph_indicator.txt")).exists() {
            // Fall back to the only indicator file in the directory.
            let found: Vec<String> = std::fs::read_dir(path)
                .into_iter()
                .flatten()
                .flatten()
                .filter_map(|e| {
                    let f = e.file_name().to_string_lossy().into_owned();
                    f.strip_suffix("_graph_indicator.txt").map(str::to_owned)
                })
                .collect();
            if let [only] = found.as_slice() {
                return (path.to_path_buf(), only.clone());
            }
        }
        return (path.to_path_buf(), name);
    }
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let file = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    for suffix in [
        "_A.txt",
        "_graph_indicator.txt",
        "_node_labels.txt",
        "_edge_labels.txt",
    ] {
        if let Some(name) = file.strip_suffix(suffix) {
            return (dir, name.to_owned());
        }
    }
    (dir, file)
}

fn parse_int(file: &str, line: usize, s: &str) -> Result<i64> {
    s.trim()
        .parse::<i64>()
        .map_err(|e| Error::parse(file, line, format!("{:?}: {e}", s.trim())))
}

pub fn read_tud(path: &Path) -> Result<Dataset> {
    let (dir, name) = tud_prefix(path);
    let member = |suffix: &str| dir.join(format!("{name}{suffix}"));

    let indicator_path = member("_graph_indicator.txt");
    let indicator_file = indicator_path.display().to_string();
    let mut graph_of = Vec::new();
    let mut first_vertex: Vec<usize> = Vec::new();
    for (i, raw) in open_lines(&indicator_path)?.iter().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let gid = parse_int(&indicator_file, i + 1, raw)?;
        let expected_next = first_vertex.len() as i64 + 1;
        if gid == expected_next {
            first_vertex.push(graph_of.len());
        } else if gid != expected_next - 1 {
            return Err(Error::parse(
                &indicator_file,
                i + 1,
                format!(
                    "graph id {gid} breaks the consecutive sequence (expected {} or {expected_next})",
                    expected_next - 1
                ),
            ));
        }
        graph_of.push(first_vertex.len() - 1);
    }
    let n_vertices = graph_of.len();

    let mut symbols = SymbolTable::new();
    let labels_path = member("_node_labels.txt");
    let vertex_labels: Vec<Label> = if labels_path.exists() {
        let file = labels_path.display().to_string();
        let lines: Vec<(usize, String)> = open_lines(&labels_path)?
            .into_iter()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .collect();
        if lines.len() != n_vertices {
            return Err(Error::parse(
                &file,
                lines.len() + 1,
                format!("{} labels for {n_vertices} vertices", lines.len()),
            ));
        }
        lines
            .iter()
            .map(|(i, l)| {
                parse_int(&file, i + 1, l)?;
                Ok(symbols.intern(l.trim()))
            })
            .collect::<Result<_>>()?
    } else {
        let l = symbols.intern("0");
        vec![l; n_vertices]
    };

    let a_path = member("_A.txt");
    let a_file = a_path.display().to_string();
    let a_lines = open_lines(&a_path)?;
    let edge_label_lines = {
        let p = member("_edge_labels.txt");
        if p.exists() {
            Some((p.display().to_string(), open_lines(&p)?))
        } else {
            None
        }
    };
    let mut edge_symbols = SymbolTable::new();
    let mut edges: Vec<Vec<(usize, usize, Option<Label>)>> = vec![Vec::new(); first_vertex.len()];
    let mut seen = std::collections::HashSet::new();
    for (i, raw) in a_lines.iter().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let line = i + 1;
        let (a, b) = raw
            .split_once(',')
            .ok_or_else(|| Error::parse(&a_file, line, "expected `u, v`"))?;
        let (a, b) = (parse_int(&a_file, line, a)?, parse_int(&a_file, line, b)?);
        for x in [a, b] {
            if x < 1 || x as usize > n_vertices {
                return Err(Error::parse(
                    &a_file,
                    line,
                    format!("dangling edge endpoint {x} (dataset has {n_vertices} vertices)"),
                ));
            }
        }
        let (a, b) = (a as usize - 1, b as usize - 1);
        let g = graph_of[a];
        if graph_of[b] != g {
            return Err(Error::parse(
                &a_file,
                line,
                format!(
                    "edge joins vertices of graphs {} and {}",
                    g + 1,
                    graph_of[b] + 1
                ),
            ));
        }
        if a == b {
            return Err(Error::parse(
                &a_file,
                line,
                format!("self-loop on vertex {}", a + 1),
            ));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            continue;
        }
        let label = match &edge_label_lines {
            Some((file, lines)) => {
                let l = lines.get(i).ok_or_else(|| {
                    Error::parse(file, line, "missing edge label for this edge line")
                })?;
                parse_int(file, line, l)?;
                Some(edge_symbols.intern(l.trim()))
            }
            None => None,
        };
        let base = first_vertex[g];
        edges[g].push((a - base, b - base, label));
    }

    let mut graphs = Vec::with_capacity(first_vertex.len());
    for (g, edge_list) in edges.into_iter().enumerate() {
        let start = first_vertex[g];
        let end = first_vertex.get(g + 1).copied().unwrap_or(n_vertices);
        graphs.push(Graph::new(
            g,
            vertex_labels[start..end].to_vec(),
            edge_list,
        )?);
    }
    Ok(Dataset {
        name,
        graphs,
        vertex_labels: symbols,
        edge_labels: edge_symbols,
    })
}

fn read_edgelist_file(path: &Path) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut ds = read_edgelist(BufReader::new(file), &path.display().to_string())?;
    ds.name = name;
    Ok(ds)
}

struct PendingGraph {
    header_line: usize,
    n: usize,
    labels: Vec<Option<Label>>,
    edges: Vec<(usize, usize, Option<Label>)>,
}

pub fn read_edgelist<R: BufRead>(reader: R, file: &str) -> Result<Dataset> {
    let mut vertex_symbols = SymbolTable::new();
    let mut edge_symbols = SymbolTable::new();
    let mut graphs = Vec::new();
    let mut current: Option<PendingGraph> = None;

    let finish = |pending: PendingGraph, graphs: &mut Vec<Graph>| -> Result<()> {
        let labels = pending
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                l.ok_or_else(|| {
                    Error::parse(
                        file,
                        pending.header_line,
                        format!("vertex {i} has no `v` line"),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let id = graphs.len();
        let g = Graph::new(id, labels, pending.edges)
            .map_err(|e| Error::parse(file, pending.header_line, e.to_string()))?;
        graphs.push(g);
        Ok(())
    };

    for (i, raw) in reader.lines().enumerate() {
        let line = i + 1;
        let raw = raw.map_err(|e| Error::io(file, e))?;
        let text = raw.trim();
        if text.starts_with('#') {
            continue;
        }
        if text.is_empty() {
            if let Some(p) = current.take() {
                finish(p, &mut graphs)?;
            }
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        let index = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .map_err(|e| Error::parse(file, line, format!("{s:?}: {e}")))
        };
        match fields[0] {
            "g" => {
                if fields.len() != 3 {
                    return Err(Error::parse(file, line, "expected `g <id> <n>`"));
                }
                if let Some(p) = current.take() {
                    finish(p, &mut graphs)?;
                }
                index(fields[1])?;
                let n = index(fields[2])?;
                current = Some(PendingGraph {
                    header_line: line,
                    n,
                    labels: vec![None; n],
                    edges: Vec::new(),
                });
            }
            "v" => {
                let p = current
                    .as_mut()
                    .ok_or_else(|| Error::parse(file, line, "`v` line outside a graph block"))?;
                if fields.len() != 3 {
                    return Err(Error::parse(file, line, "expected `v <idx> <label>`"));
                }
                let v = index(fields[1])?;
                if v >= p.n {
                    return Err(Error::parse(
                        file,
                        line,
                        format!("vertex {v} outside 0..{}", p.n),
                    ));
                }
                if p.labels[v].is_some() {
                    return Err(Error::parse(
                        file,
                        line,
                        format!("vertex {v} declared twice"),
                    ));
                }
                p.labels[v] = Some(vertex_symbols.intern(fields[2]));
            }
            "e" => {
                let p = current
                    .as_mut()
                    .ok_or_else(|| Error::parse(file, line, "`e` line outside a graph block"))?;
                if fields.len() != 3 && fields.len() != 4 {
                    return Err(Error::parse(file, line, "expected `e <u> <v> [label]`"));
                }
                let (u, v) = (index(fields[1])?, index(fields[2])?);
                for x in [u, v] {
                    if x >= p.n {
                        return Err(Error::parse(
                            file,
                            line,
                            format!("dangling edge endpoint {x} (graph has {} vertices)", p.n),
                        ));
                    }
                }
                let label = fields.get(3).map(|s| edge_symbols.intern(s));
                p.edges.push((u, v, label));
            }
            other => {
                return Err(Error::parse(
                    file,
                    line,
                    format!("unknown record type {other:?}"),
                ));
            }
        }
    }
    if let Some(p) = current.take() {
        finish(p, &mut graphs)?;
    }
    Ok(Dataset {
        name: String::new(),
        graphs,
        vertex_labels: vertex_symbols,
        edge_labels: edge_symbols,
    })
}

/// Writes a dataset in edgelist layout. Labels are written by symbol when the
/// dataset's symbol table knows them, else by numeric id.
pub fn write_edgelist<W: Write>(ds: &Dataset, mut out: W) -> std::io::Result<()> {
    let symbol = |table: &SymbolTable, l: Label| -> String {
        table
            .name(l)
            .map(str::to_owned)
            .unwrap_or_else(|| l.to_string())
    };
    let mut buf = String::new();
    for (i, g) in ds.graphs.iter().enumerate() {
        if i > 0 {
            buf.push('\n');
        }
        let _ = writeln!(buf, "g {i} {}", g.vertex_count());
        for (v, &l) in g.labels().iter().enumerate() {
            let _ = writeln!(buf, "v {v} {}", symbol(&ds.vertex_labels, l));
        }
        for e in g.edges() {
            match e.label {
                Some(l) => {
                    let _ = writeln!(buf, "e {} {} {}", e.u, e.v, symbol(&ds.edge_labels, l));
                }
                None => {
                    let _ = writeln!(buf, "e {} {}", e.u, e.v);
                }
            }
        }
        out.write_all(buf.as_bytes())?;
        buf.clear();
    }
    Ok(())
}

/// Writes a dataset in TUDataset layout under `dir` with the given name.
/// Label symbols must be integers, as that layout requires.
pub fn write_tud(ds: &Dataset, dir: &Path, name: &str) -> Result<()> {
    let numeric = |table: &SymbolTable, l: Label| -> Result<String> {
        let s = table
            .name(l)
            .map(str::to_owned)
            .unwrap_or_else(|| l.to_string());
        s.parse::<i64>()
            .map(|_| s.clone())
            .map_err(|_| Error::InvalidGraph(format!("label {s:?} is not an integer")))
    };
    let mut a = String::new();
    let mut indicator = String::new();
    let mut labels = String::new();
    let mut edge_labels = String::new();
    let with_edge_labels = ds.graphs.iter().any(Graph::has_edge_labels);
    let mut offset = 0usize;
    for (gi, g) in ds.graphs.iter().enumerate() {
        for &l in g.labels() {
            let _ = writeln!(indicator, "{}", gi + 1);
            let _ = writeln!(labels, "{}", numeric(&ds.vertex_labels, l)?);
        }
        for e in g.edges() {
            let (u, v) = (offset + e.u + 1, offset + e.v + 1);
            let _ = writeln!(a, "{u}, {v}");
            let _ = writeln!(a, "{v}, {u}");
            if with_edge_labels {
                let l = match e.label {
                    Some(l) => numeric(&ds.edge_labels, l)?,
                    None => "0".to_owned(),
                };
                let _ = writeln!(edge_labels, "{l}");
                let _ = writeln!(edge_labels, "{l}");
            }
        }
        offset += g.vertex_count();
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = vec![
        ("_A.txt", a),
        ("_graph_indicator.txt", indicator),
        ("_node_labels.txt", labels),
    ];
    if with_edge_labels {
        files.push(("_edge_labels.txt", edge_labels));
    }
    for (suffix, body) in files {
        let p = dir.join(format!("{name}{suffix}"));
        std::fs::write(&p, body).map_err(|e| Error::io(&p, e))?;
    }
    Ok(())
}

/// Canonical text of a graph under its own vertex order: labels by symbol and
/// sorted edges. Two loads of the same file produce equal keys.
pub fn canonical_text(ds: &Dataset, g: &Graph) -> String {
    let sym = |t: &SymbolTable, l: Label| {
        t.name(l)
            .map(str::to_owned)
            .unwrap_or_else(|| l.to_string())
    };
    let mut s = String::new();
    for &l in g.labels() {
        let _ = write!(s, "{} ", sym(&ds.vertex_labels, l));
    }
    s.push('|');
    let mut edges: Vec<_> = g
        .edges()
        .iter()
        .map(|e| (e.u, e.v, e.label.map(|l| sym(&ds.edge_labels, l))))
        .collect();
    edges.sort();
    for (u, v, l) in edges {
        let _ = write!(s, " {u}-{v}:{}", l.unwrap_or_default());
    }
    s
}

/// Relabels `graphs` from the symbol table they were loaded with into `target`,
/// interning unseen symbols.
pub fn remap_labels(
    graphs: &[Graph],
    from: &SymbolTable,
    target: &mut SymbolTable,
) -> Result<Vec<Graph>> {
    let mut cache: HashMap<Label, Label> = HashMap::new();
    graphs
        .iter()
        .map(|g| {
            let labels = g
                .labels()
                .iter()
                .map(|&l| {
                    *cache.entry(l).or_insert_with(|| match from.name(l) {
                        Some(name) => target.intern(name),
                        None => target.intern(&l.to_string()),
                    })
                })
                .collect();
            Graph::new(
                g.id(),
                labels,
                g.edges().iter().map(|e| (e.u, e.v, e.label)),
            )
        })
        .collect()
}
