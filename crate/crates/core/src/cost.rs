//! Edit cost parameters.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Label, SymbolTable};

/// Symmetric, zero-diagonal table of vertex relabel costs.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelCostTable {
    labels: Vec<Label>,
    /// Row-major `labels.len()²` matrix.
    cost: Vec<f64>,
    index: HashMap<Label, usize>,
}

impl LabelCostTable {
    pub fn new(labels: Vec<Label>, cost: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if cost.len() != n || cost.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidCost(format!(
                "label cost table must be {n}x{n}"
            )));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, &l) in labels.iter().enumerate() {
            if index.insert(l, i).is_some() {
                return Err(Error::InvalidCost(format!("label {l} listed twice")));
            }
        }
        for i in 0..n {
            if cost[i][i] != 0.0 {
                return Err(Error::InvalidCost(format!(
                    "diagonal entry for label {} is {}, expected 0",
                    labels[i], cost[i][i]
                )));
            }
            for j in 0..n {
                let c = cost[i][j];
                if !c.is_finite() || c < 0.0 {
                    return Err(Error::InvalidCost(format!(
                        "relabel cost {c} between labels {} and {} is not a finite non-negative number",
                        labels[i], labels[j]
                    )));
                }
                if c != cost[j][i] {
                    return Err(Error::InvalidCost(format!(
                        "relabel cost between labels {} and {} is not symmetric",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        Ok(LabelCostTable {
            labels,
            cost: cost.into_iter().flatten().collect(),
            index,
        })
    }

    /// Reads a CSV matrix whose first row and first column hold label symbols.
    /// Symbols are interned into `symbols`.
    pub fn from_csv(path: &Path, symbols: &mut SymbolTable) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_reader(file, &path.display().to_string(), symbols)
    }

    pub fn from_csv_reader<R: std::io::Read>(
        reader: R,
        name: &str,
        symbols: &mut SymbolTable,
    ) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let mut rows = rdr.records();
        let header = match rows.next() {
            Some(r) => r.map_err(|e| Error::parse(name, 1, e.to_string()))?,
            None => return LabelCostTable::new(Vec::new(), Vec::new()),
        };
        let labels: Vec<Label> = header.iter().skip(1).map(|s| symbols.intern(s)).collect();
        let mut matrix = vec![Vec::new(); labels.len()];
        let mut seen = vec![false; labels.len()];
        for (i, row) in rows.enumerate() {
            let line = i + 2;
            let row = row.map_err(|e| Error::parse(name, line, e.to_string()))?;
            if row.len() != labels.len() + 1 {
                return Err(Error::parse(
                    name,
                    line,
                    format!("expected {} fields, found {}", labels.len() + 1, row.len()),
                ));
            }
            let label = symbols.intern(&row[0]);
            let pos = labels.iter().position(|&l| l == label).ok_or_else(|| {
                Error::parse(
                    name,
                    line,
                    format!("row label {:?} missing from header", &row[0]),
                )
            })?;
            if seen[pos] {
                return Err(Error::parse(
                    name,
                    line,
                    format!("duplicate row {:?}", &row[0]),
                ));
            }
            seen[pos] = true;
            matrix[pos] = row
                .iter()
                .skip(1)
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|e| Error::parse(name, line, format!("{s:?}: {e}")))
                })
                .collect::<Result<_>>()?;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::parse(
                name,
                0,
                format!(
                    "no row for label {:?}",
                    symbols.name(labels[missing]).unwrap_or("?")
                ),
            ));
        }
        LabelCostTable::new(labels, matrix)
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, label: Label) -> bool {
        self.index.contains_key(&label)
    }

    /// Cost by row/column position.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.cost[i * self.labels.len() + j]
    }

    /// Cost by label; `None` if either label is absent from the table.
    pub fn cost(&self, a: Label, b: Label) -> Option<f64> {
        let i = *self.index.get(&a)?;
        let j = *self.index.get(&b)?;
        Some(self.at(i, j))
    }

    /// Smallest off-diagonal entry, or `None` for fewer than two labels.
    pub fn min_off_diagonal(&self) -> Option<f64> {
        let n = self.labels.len();
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.at(i, j))
            .min_by(f64::total_cmp)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RelabelCost {
    Uniform(f64),
    Table(Arc<LabelCostTable>),
}

/// Costs of the six edit operations. Insertion and deletion share a price.
#[derive(Clone, Debug, PartialEq)]
pub struct CostModel {
    pub vertex_indel: f64,
    pub edge_indel: f64,
    pub vertex_relabel: RelabelCost,
    pub edge_relabel: f64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel::uniform()
    }
}

impl CostModel {
    /// Every edit operation costs one.
    pub fn uniform() -> Self {
        CostModel::new(1.0, 1.0, 1.0, 1.0)
    }

    pub fn new(vertex_indel: f64, edge_indel: f64, vertex_relabel: f64, edge_relabel: f64) -> Self {
        CostModel {
            vertex_indel,
            edge_indel,
            vertex_relabel: RelabelCost::Uniform(vertex_relabel),
            edge_relabel,
        }
    }

    pub fn with_label_costs(mut self, table: LabelCostTable) -> Self {
        self.vertex_relabel = RelabelCost::Table(Arc::new(table));
        self
    }

    pub fn label_costs(&self) -> Option<&LabelCostTable> {
        match &self.vertex_relabel {
            RelabelCost::Table(t) => Some(t),
            RelabelCost::Uniform(_) => None,
        }
    }

    /// Checks that the label ground cost is representable by a tree.
    ///
    /// With a uniform relabel cost this requires `c_vl <= 2 c_v`. For a label
    /// table the corresponding condition depends on the ultrametric height and
    /// is checked when the tree is built.
    pub fn validate(&self) -> Result<()> {
        let scalars = [
            ("vertex indel", self.vertex_indel),
            ("edge indel", self.edge_indel),
            ("edge relabel", self.edge_relabel),
        ];
        for (name, c) in scalars {
            if !c.is_finite() || c < 0.0 {
                return Err(Error::InvalidCost(format!(
                    "{name} cost must be a finite non-negative number, got {c}"
                )));
            }
        }
        if let RelabelCost::Uniform(relabel) = self.vertex_relabel {
            if !relabel.is_finite() || relabel < 0.0 {
                return Err(Error::InvalidCost(format!(
                    "vertex relabel cost must be a finite non-negative number, got {relabel}"
                )));
            }
            if relabel > 2.0 * self.vertex_indel {
                return Err(Error::RelabelTooExpensive {
                    relabel,
                    indel: self.vertex_indel,
                });
            }
        }
        Ok(())
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Cost of changing a vertex label from `a` to `b`. Pairs missing from a
    /// label table cannot be relabeled and cost infinity.
    pub fn vertex_relabel_cost(&self, a: Label, b: Label) -> f64 {
        if a == b {
            return 0.0;
        }
        match &self.vertex_relabel {
            RelabelCost::Uniform(c) => *c,
            RelabelCost::Table(t) => t.cost(a, b).unwrap_or(f64::INFINITY),
        }
    }

    /// A lower bound on the cost of relabeling any vertex to a different label.
    pub fn min_vertex_relabel(&self) -> f64 {
        match &self.vertex_relabel {
            RelabelCost::Uniform(c) => *c,
            RelabelCost::Table(t) => t.min_off_diagonal().unwrap_or(f64::INFINITY),
        }
    }

    pub fn edge_relabel_cost(&self, a: Option<Label>, b: Option<Label>) -> f64 {
        if a == b {
            0.0
        } else {
            self.edge_relabel
        }
    }

    pub fn is_uniform_unit(&self) -> bool {
        self.vertex_indel == 1.0
            && self.edge_indel == 1.0
            && self.edge_relabel == 1.0
            && self.vertex_relabel == RelabelCost::Uniform(1.0)
    }
}

/// Parses `cv,ce,cvl,cel`.
impl FromStr for CostModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidCost(format!("{p:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        match parts.as_slice() {
            &[cv, ce, cvl, cel] => Ok(CostModel::new(cv, ce, cvl, cel)),
            _ => Err(Error::InvalidCost(format!(
                "expected four comma-separated costs cv,ce,cvl,cel, got {s:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabel_bound_boundary() {
        assert!(CostModel::new(1.0, 1.0, 1.0, 1.0).validate().is_ok());
        assert!(CostModel::new(1.0, 1.0, 2.0, 1.0).validate().is_ok());
        assert!(matches!(
            CostModel::new(1.0, 1.0, 3.0, 1.0).validate(),
            Err(Error::RelabelTooExpensive { .. })
        ));
        assert!(matches!(
            CostModel::new(-1.0, 1.0, 0.0, 1.0).validate(),
            Err(Error::InvalidCost(_))
        ));
    }

    #[test]
    fn parses_cost_string() {
        let c: CostModel = "1, 2,0.5,3".parse().unwrap();
        assert_eq!(c, CostModel::new(1.0, 2.0, 0.5, 3.0));
        assert!("1,2,3".parse::<CostModel>().is_err());
        assert!("1,2,x,3".parse::<CostModel>().is_err());
    }

    #[test]
    fn table_validation() {
        assert!(LabelCostTable::new(vec![0, 1], vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(LabelCostTable::new(vec![0, 1], vec![vec![1.0, 1.0], vec![1.0, 0.0]]).is_err());
        assert!(LabelCostTable::new(vec![0, 1], vec![vec![0.0, -1.0], vec![-1.0, 0.0]]).is_err());
        let t = LabelCostTable::new(vec![3, 5], vec![vec![0.0, 1.5], vec![1.5, 0.0]]).unwrap();
        assert_eq!(t.cost(5, 3), Some(1.5));
        assert_eq!(t.cost(5, 4), None);
        assert_eq!(t.min_off_diagonal(), Some(1.5));
    }

    #[test]
    fn table_from_csv() {
        let csv = ",a,b,c\na,0,1,3\nb,1,0,3\nc,3,3,0\n";
        let mut symbols = SymbolTable::new();
        let t = LabelCostTable::from_csv_reader(csv.as_bytes(), "t.csv", &mut symbols).unwrap();
        assert_eq!(symbols.len(), 3);
        let (a, c) = (symbols.get("a").unwrap(), symbols.get("c").unwrap());
        assert_eq!(t.cost(a, c), Some(3.0));

        let bad = ",a,b\na,0,1\nb,2,0\n";
        assert!(LabelCostTable::from_csv_reader(bad.as_bytes(), "t.csv", &mut symbols).is_err());
        let short = ",a,b\na,0\n";
        assert!(matches!(
            LabelCostTable::from_csv_reader(short.as_bytes(), "t.csv", &mut symbols),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn relabel_lookup() {
        let t = LabelCostTable::new(vec![0, 1], vec![vec![0.0, 0.5], vec![0.5, 0.0]]).unwrap();
        let c = CostModel::uniform().with_label_costs(t);
        assert_eq!(c.vertex_relabel_cost(0, 1), 0.5);
        assert_eq!(c.vertex_relabel_cost(2, 2), 0.0);
        assert_eq!(c.vertex_relabel_cost(0, 2), f64::INFINITY);
        assert!(c.validate().is_ok());
    }
}
