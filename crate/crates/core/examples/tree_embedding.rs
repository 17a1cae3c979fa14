//! Optimal assignment under a tree metric as an l1 distance.
//!
//! Two multisets of tree nodes are embedded into one count per tree edge,
//! weighted by the edge length. Their Manhattan distance equals the cost of
//! the best assignment between them, which the Hungarian solver confirms.

use gedsearch::assignment::{solve_hungarian, CostMatrix};
use gedsearch::tree::{AnchorKey, MetricTree};
use gedsearch::Embedding;

fn main() -> gedsearch::Result<()> {
    let names = ["v", "u", "s", "t", "w", "x"];
    // v is the root; u, w, x hang below it and s, t below u.
    let tree = MetricTree::from_parents(
        vec![None, Some(0), Some(1), Some(1), Some(0), Some(0)],
        vec![0.0, 1.0, 1.0, 1.0, 1.0, 1.0],
        (0..6).map(|n| (AnchorKey::Label(n), n)).collect(),
    )?;
    let node = |name: &str| AnchorKey::Label(names.iter().position(|n| *n == name).unwrap() as u32);
    let a: Vec<_> = ["t", "t", "w", "w", "w"].map(node).into();
    let b: Vec<_> = ["s", "s", "t", "w", "x"].map(node).into();

    let ea = Embedding::compute(a.iter().copied(), &tree)?;
    let eb = Embedding::compute(b.iter().copied(), &tree)?;
    let edges = [2, 3, 1, 4, 5];
    println!("edges      su tu uv wv xv");
    println!("phi(A)     {:?}", ea.dense(&edges));
    println!("phi(B)     {:?}", eb.dense(&edges));
    println!("l1         {}", ea.l1_distance(&eb)?);

    let costs = CostMatrix::from_fn(a.len(), |i, j| tree.distance(a[i], b[j]).unwrap());
    let best = solve_hungarian(&costs)?;
    println!("hungarian  {}", best.cost);
    for (i, &j) in best.matching.iter().enumerate() {
        let name = |k: AnchorKey| match k {
            AnchorKey::Label(n) => names[n as usize],
            _ => "?",
        };
        println!("  {} -> {}", name(a[i]), name(b[j]));
    }
    Ok(())
}
