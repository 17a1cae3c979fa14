//! Filter-verification range queries over a synthetic database.

use gedsearch::index::{ExtraFilter, RangeOptions, Verify};
use gedsearch::synth::{random_database, SynthConfig};
use gedsearch::{BoundKind, CostModel, SearchIndex, Searcher};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gedsearch::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let config = SynthConfig {
        min_vertices: 6,
        max_vertices: 12,
        labels: 4,
        avg_degree: 2.0,
    };
    let db = random_database(&mut rng, 2000, &config);
    let index = SearchIndex::build(&db, &CostModel::uniform(), BoundKind::Clb)?;
    let searcher = Searcher::new(&index, &db)?;
    let q = &db[17];

    println!(
        "{:<6} {:>10} {:>8} {:>8} {:>10}",
        "radius", "candidates", "exact", "answers", "verify ms"
    );
    for r in [0.0, 1.0, 2.0, 3.0, 4.0] {
        for (label, options) in [
            (
                "",
                RangeOptions {
                    verify: Verify::Exact,
                    extra_filter: None,
                },
            ),
            (
                "+branch",
                RangeOptions {
                    verify: Verify::Exact,
                    extra_filter: Some(ExtraFilter::Branch),
                },
            ),
        ] {
            let res = searcher.range(q, r, options)?;
            println!(
                "{:<6} {:>10} {:>8} {:>8} {:>10.3} {label}",
                r,
                res.candidates,
                res.exact_computations,
                res.answers.len(),
                res.verify_time.as_secs_f64() * 1e3
            );
        }
    }
    let res = searcher.range(q, 2.0, RangeOptions::default())?;
    println!("\nanswers at r=2:");
    for a in &res.answers {
        println!(
            "  graph {:>4}  distance {}  ({:?})",
            a.id, a.distance, a.kind
        );
    }
    Ok(())
}
