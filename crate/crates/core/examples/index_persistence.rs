//! Saving an index and querying the reloaded copy.

use gedsearch::index::RangeOptions;
use gedsearch::synth::{random_database, SynthConfig};
use gedsearch::{BoundKind, CostModel, SearchIndex, Searcher};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gedsearch::Result<()> {
    let db = random_database(
        &mut ChaCha8Rng::seed_from_u64(1),
        500,
        &SynthConfig::default(),
    );
    let cost = CostModel::new(1.0, 0.5, 1.0, 1.0);
    let index = SearchIndex::build(&db, &cost, BoundKind::Llb)?;

    let path = std::env::temp_dir().join(format!("gedsearch-example-{}.emba", std::process::id()));
    index.save(&path)?;
    let loaded = SearchIndex::load(&path)?;
    println!(
        "{} bytes, {} points, bound {}, costs {:?}",
        std::fs::metadata(&path).map(|m| m.len()).unwrap_or(0),
        loaded.len(),
        loaded.bound_kind(),
        loaded.cost_model()
    );

    let (a, b) = (Searcher::new(&index, &db)?, Searcher::new(&loaded, &db)?);
    let q = &db[0];
    let before = a.range(q, 4.0, RangeOptions::default())?;
    let after = b.range(q, 4.0, RangeOptions::default())?;
    println!(
        "answers before {:?}\nanswers after  {:?}",
        before.ids(),
        after.ids()
    );

    let mut bytes = std::fs::read(&path).unwrap();
    bytes[100] ^= 0xff;
    println!(
        "damaged copy: {}",
        SearchIndex::from_bytes(&bytes).unwrap_err()
    );
    let _ = std::fs::remove_file(&path);
    Ok(())
}
