//! Optimal multi-step k-nearest-neighbor search.
//!
//! Candidates are ranked by lower bound through the cover tree; exact
//! distances are computed only until the next bound exceeds the current
//! k-th distance.

use gedsearch::synth::{random_database, SynthConfig};
use gedsearch::{BoundKind, CostModel, SearchIndex, Searcher};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gedsearch::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let config = SynthConfig {
        min_vertices: 5,
        max_vertices: 10,
        labels: 3,
        avg_degree: 2.0,
    };
    let db = random_database(&mut rng, 1000, &config);
    let index = SearchIndex::build(&db, &CostModel::uniform(), BoundKind::Clb)?;
    let searcher = Searcher::new(&index, &db)?;

    let q = &db[3];
    let qe = index.embed_query(q)?;
    println!("first ranked candidates (graph, lower bound):");
    for (p, lb) in index.ranking(&qe).take(5) {
        println!("  {:>4}  {lb}", index.graph_ids()[p]);
    }
    for k in [1, 3, 10] {
        let res = searcher.knn(q, k)?;
        let shown: Vec<String> = res
            .answers
            .iter()
            .map(|a| format!("{}@{}", a.id, a.distance))
            .collect();
        println!(
            "k={k:<3} {} answers, {} exact computations: {}",
            res.answers.len(),
            res.exact_computations,
            shown.join(" ")
        );
    }
    Ok(())
}
