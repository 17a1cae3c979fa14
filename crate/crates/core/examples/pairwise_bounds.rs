//! Every lower and upper bound for a pair of graphs, next to the exact
//! distance.

use gedsearch::bounds::{bound_report, BoundTrees};
use gedsearch::{CostModel, Embedding, Graph};

fn main() -> gedsearch::Result<()> {
    // Labels: 0 = a, 1 = b, 2 = c.
    let paw = Graph::from_parts(0, vec![0, 1, 2, 2], &[(0, 1), (1, 2), (0, 2), (2, 3)])?;
    let cycle = Graph::from_parts(1, vec![0, 1, 1, 2], &[(0, 1), (1, 2), (2, 3), (3, 0)])?;

    for cost in [CostModel::uniform(), CostModel::new(2.0, 1.0, 0.5, 1.0)] {
        let trees = BoundTrees::for_graphs([&paw, &cycle], &cost)?;
        println!(
            "costs cv={} ce={} cvl={:?}",
            cost.vertex_indel, cost.edge_indel, cost.vertex_relabel
        );
        println!(
            "  label vectors  {:?} / {:?}",
            Embedding::of_labels(&paw, &trees.label)?.entries(),
            Embedding::of_labels(&cycle, &trees.label)?.entries()
        );
        println!(
            "  degree vectors {:?} / {:?}",
            Embedding::of_degrees(&paw, &trees.degree)?.entries(),
            Embedding::of_degrees(&cycle, &trees.degree)?.entries()
        );
        let r = bound_report(&paw, &cycle, &cost, true)?;
        println!(
            "  slf {}  llb {}  dlb {}  clb {}  branchLb {}  exact {:?}  branchUb {:?}",
            r.slf, r.llb, r.dlb, r.clb, r.branch_lb, r.exact, r.branch_ub
        );
    }
    Ok(())
}
