//! Exact edit distance with its witness path, and the threshold mode used
//! during verification.

use gedsearch::exact::{exact_ged, GedOutcome};
use gedsearch::{CostModel, Graph};

fn main() -> gedsearch::Result<()> {
    let g = Graph::from_parts(0, vec![0, 1, 0], &[(0, 1), (1, 2)])?;
    let h = Graph::from_parts(1, vec![0, 1, 1], &[(0, 1), (1, 2), (0, 2)])?;
    let cost = CostModel::uniform();

    if let GedOutcome::Exact { distance, path } = exact_ged(&g, &h, &cost, None)? {
        println!("distance {distance}");
        for step in &path.steps {
            println!(
                "  {:<6} {}",
                step.cost,
                serde_json::to_string(&step.op).unwrap()
            );
        }
        let (edited, witness) = path.apply(&g)?;
        println!(
            "edited graph has {} vertices and {} edges; vertex i stands for target {:?}",
            edited.vertex_count(),
            edited.edge_count(),
            witness
        );
    }

    for tau in [0.0, 1.0, 2.0] {
        let out = exact_ged(&g, &h, &cost, Some(tau))?;
        println!(
            "threshold {tau}: {:?}",
            out.distance()
                .map_or("exceeded".to_string(), |d| d.to_string())
        );
    }
    Ok(())
}
