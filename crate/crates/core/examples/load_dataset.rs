//! Loads a dataset in TU or edge-list layout and prints its statistics.
//!
//! ```text
//! cargo run --example load_dataset -- path/to/MUTAG tud
//! cargo run --example load_dataset -- graphs.txt edgelist
//! ```
//! Without arguments the bundled test fixture is used.

use std::path::PathBuf;

use gedsearch::dataset::write_edgelist;
use gedsearch::{Dataset, Format};

fn main() -> gedsearch::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/molecules.graphs")
    });
    let format: Format = match args.next() {
        Some(f) => f.parse()?,
        None if path.is_dir() => Format::Tud,
        None => Format::Edgelist,
    };
    let ds = Dataset::load(&path, format)?;
    let s = ds.stats();
    println!(
        "{}: {} graphs, |V| {:.2}, |E| {:.2}, degree {:.2} ± {:.2}, {} labels, max degree {}",
        ds.name,
        s.graphs,
        s.avg_vertices,
        s.avg_edges,
        s.avg_degree,
        s.degree_stddev,
        s.labels,
        ds.max_degree()
    );
    println!("labels: {}", ds.vertex_labels.names().join(" "));

    if let Some(g) = ds.graphs.first() {
        let one = Dataset::new(ds.name.clone(), vec![g.clone()], ds.vertex_labels.clone());
        println!("\nfirst graph as edge list:");
        write_edgelist(&one, std::io::stdout().lock()).expect("stdout");
    }
    Ok(())
}
