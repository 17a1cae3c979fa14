//! Non-uniform relabel costs.
//!
//! A label cost table is not a tree metric in general. Single linkage gives
//! the largest ultrametric below it, which is realized by a dendrogram and
//! so still yields an embeddable lower bound.

use gedsearch::bounds;
use gedsearch::exact::brute_force_ged;
use gedsearch::tree::{realized_label_distances, MetricTree};
use gedsearch::{CostModel, Graph, LabelCostTable, SymbolTable};

const TABLE: &str = "\
,C,N,O,S
C,0,0.5,0.9,1.4
N,0.5,0,0.6,1.2
O,0.9,0.6,0,1.0
S,1.4,1.2,1.0,0
";

fn main() -> gedsearch::Result<()> {
    let mut symbols = SymbolTable::new();
    let table = LabelCostTable::from_csv_reader(TABLE.as_bytes(), "table", &mut symbols)?;
    let cost = CostModel::new(1.0, 1.0, 1.0, 1.0).with_label_costs(table.clone());
    let tree = MetricTree::ultrametric_tree(&table, &cost)?;

    println!("dendrogram edges (child, parent, weight):");
    for (c, p, w) in tree.edges() {
        println!("  {c} -> {p}  {w:.3}");
    }
    let u = realized_label_distances(&tree, table.labels())?;
    println!("\ntable vs ultrametric:");
    for i in 0..table.len() {
        let row: Vec<String> = (0..table.len())
            .map(|j| format!("{:.1}/{:.1}", table.at(i, j), u[i][j]))
            .collect();
        println!(
            "  {:<2} {}",
            symbols.name(table.labels()[i]).unwrap(),
            row.join("  ")
        );
    }

    let [c, n, o, s] = ["C", "N", "O", "S"].map(|l| symbols.get(l).unwrap());
    let g = Graph::from_parts(0, vec![c, c, o, s], &[(0, 1), (1, 2), (1, 3)])?;
    let h = Graph::from_parts(1, vec![c, n, n], &[(0, 1), (1, 2)])?;
    println!(
        "\nllb {}  clb {}  exact {}",
        bounds::llb(&g, &h, &cost)?,
        bounds::clb(&g, &h, &cost)?,
        brute_force_ged(&g, &h, &cost)?
    );

    let cheap = CostModel::new(0.3, 1.0, 1.0, 1.0).with_label_costs(table);
    match MetricTree::ultrametric_tree(cheap.label_costs().unwrap(), &cheap) {
        Err(e) => println!("with cv = 0.3: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
