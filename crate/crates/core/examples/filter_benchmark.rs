//! Candidate counts of each bound at growing radii, with filter timings.
//! The simple label filter is included by linear scan for comparison.

use std::time::Instant;

use gedsearch::bounds::slf;
use gedsearch::index::within;
use gedsearch::synth::{random_database, SynthConfig};
use gedsearch::{BoundKind, CostModel, SearchIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> gedsearch::Result<()> {
    let count: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(20_000);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let config = SynthConfig {
        labels: 8,
        ..SynthConfig::default()
    };
    let db = random_database(&mut rng, count, &config);
    let queries: Vec<usize> = (0..50).map(|_| rng.gen_range(0..db.len())).collect();
    let radii = [1.0, 2.0, 3.0, 4.0, 5.0];

    println!(
        "{count} graphs, {} queries; mean candidates (mean filter ms)",
        queries.len()
    );
    print!("{:<5}", "bound");
    for r in radii {
        print!("{:>18}", format!("r={r}"));
    }
    println!();
    for kind in [BoundKind::Llb, BoundKind::Dlb, BoundKind::Clb] {
        let t = Instant::now();
        let index = SearchIndex::build(&db, &CostModel::uniform(), kind)?;
        print!("{:<5}", kind);
        for r in radii {
            let (mut n, t) = (0, Instant::now());
            for &q in &queries {
                n += index.candidates(&index.embed_query(&db[q])?, r).len();
            }
            let ms = t.elapsed().as_secs_f64() * 1e3 / queries.len() as f64;
            print!(
                "{:>18}",
                format!("{:.1} ({ms:.2})", n as f64 / queries.len() as f64)
            );
        }
        println!("   build {:.2}s", t.elapsed().as_secs_f64());
    }
    print!("{:<5}", "slf");
    for r in radii {
        let n: usize = queries
            .iter()
            .map(|&q| db.iter().filter(|g| within(slf(&db[q], g), r)).count())
            .sum();
        print!("{:>18}", format!("{:.1}", n as f64 / queries.len() as f64));
    }
    println!();
    Ok(())
}
