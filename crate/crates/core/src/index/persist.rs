//! Index file format, little-endian throughout:
//!
//! ```text
//! "EMBA" | version u32 | cost model | bound u8 | cover base f64
//! | label tree | degree tree | point count u64
//! | per point: graph id u64, part count u32, per part: len u64, (node u32, value f64)*
//! | SHA-256 of everything before it
//! ```
//!
//! The cover tree is not stored; loading rebuilds it from the points.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use super::cover_tree::PointArena;
use super::search::{IndexConfig, SearchIndex};
use crate::bounds::{BoundKind, BoundTrees};
use crate::cost::{CostModel, LabelCostTable, RelabelCost};
use crate::embedding::{CompositeEmbedding, Embedding};
use crate::error::{Error, Result};
use crate::tree::{AnchorKey, MetricTree, NodeId, RawLayout};

pub const MAGIC: &[u8; 4] = b"EMBA";
pub const FORMAT_VERSION: u32 = 1;
const DIGEST_LEN: usize = 32;

impl SearchIndex {
    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        SearchIndex::from_bytes(&bytes)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        put_u32(&mut out, FORMAT_VERSION);
        write_cost(&mut out, &self.cost);
        out.push(self.bound.code());
        put_f64(&mut out, self.config.base);
        write_tree(&mut out, &self.trees.label);
        write_tree(&mut out, &self.trees.degree);
        put_u64(&mut out, self.ids.len() as u64);
        let parts = self.part_fingerprints();
        for (i, &id) in self.ids.iter().enumerate() {
            put_u64(&mut out, id as u64);
            let point = self.points.get(i);
            put_u32(&mut out, parts.len() as u32);
            for part in 0..parts.len() as u64 {
                let entries: Vec<_> = point.iter().filter(|(k, _)| k >> 32 == part).collect();
                put_u64(&mut out, entries.len() as u64);
                for &&(k, v) in &entries {
                    put_u32(&mut out, k as u32);
                    put_f64(&mut out, v);
                }
            }
        }
        let digest = Sha256::digest(&out);
        out.extend_from_slice(&digest);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < MAGIC.len() || &bytes[..4] != MAGIC {
            return Err(corrupt("missing EMBA magic bytes"));
        }
        if bytes.len() < 8 + DIGEST_LEN {
            return Err(corrupt("file is truncated"));
        }
        let (body, digest) = bytes.split_at(bytes.len() - DIGEST_LEN);
        let mut r = Reader { buf: body, pos: 4 };
        let version = r.u32()?;
        if version != FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                found: version,
                expected: FORMAT_VERSION,
            });
        }
        if Sha256::digest(body).as_slice() != digest {
            return Err(corrupt("checksum mismatch"));
        }
        let cost = read_cost(&mut r)?;
        let bound = BoundKind::from_code(r.u8()?).ok_or_else(|| corrupt("unknown bound kind"))?;
        let base = r.f64()?;
        let trees = BoundTrees {
            label: read_tree(&mut r)?,
            degree: read_tree(&mut r)?,
        };
        let fingerprints: Vec<u64> = match bound {
            BoundKind::Llb => vec![trees.label.fingerprint()],
            BoundKind::Dlb => vec![trees.degree.fingerprint()],
            BoundKind::Clb => vec![trees.label.fingerprint(), trees.degree.fingerprint()],
        };
        let count = r.len()?;
        let mut ids = Vec::with_capacity(count.min(1 << 20));
        let mut points = PointArena::new();
        for _ in 0..count {
            ids.push(r.u64()? as usize);
            let parts = r.u32()? as usize;
            if parts != fingerprints.len() {
                return Err(corrupt("point has the wrong number of parts"));
            }
            let mut embeddings = Vec::with_capacity(parts);
            for &fp in &fingerprints {
                let len = r.len()?;
                let mut entries = Vec::with_capacity(len.min(1 << 16));
                for _ in 0..len {
                    entries.push((r.u32()? as NodeId, r.f64()?));
                }
                embeddings.push(Embedding::from_raw(entries, fp)?);
            }
            points.push(CompositeEmbedding::new(embeddings).flat_entries());
        }
        if r.pos != body.len() {
            return Err(corrupt("trailing bytes after the point table"));
        }
        SearchIndex::assemble(cost, bound, trees, ids, points, IndexConfig { base })
    }

    fn part_fingerprints(&self) -> Vec<u64> {
        match self.bound {
            BoundKind::Llb => vec![self.trees.label.fingerprint()],
            BoundKind::Dlb => vec![self.trees.degree.fingerprint()],
            BoundKind::Clb => vec![
                self.trees.label.fingerprint(),
                self.trees.degree.fingerprint(),
            ],
        }
    }
}

fn corrupt(msg: &str) -> Error {
    Error::CorruptIndex(msg.to_owned())
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_f64(out: &mut Vec<u8>, v: f64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn write_cost(out: &mut Vec<u8>, cost: &CostModel) {
    put_f64(out, cost.vertex_indel);
    put_f64(out, cost.edge_indel);
    put_f64(out, cost.edge_relabel);
    match &cost.vertex_relabel {
        RelabelCost::Uniform(c) => {
            out.push(0);
            put_f64(out, *c);
        }
        RelabelCost::Table(t) => {
            out.push(1);
            put_u32(out, t.len() as u32);
            for &l in t.labels() {
                put_u32(out, l);
            }
            for i in 0..t.len() {
                for j in 0..t.len() {
                    put_f64(out, t.at(i, j));
                }
            }
        }
    }
}

fn read_cost(r: &mut Reader) -> Result<CostModel> {
    let (cv, ce, cel) = (r.f64()?, r.f64()?, r.f64()?);
    let relabel = match r.u8()? {
        0 => RelabelCost::Uniform(r.f64()?),
        1 => {
            let n = r.u32()? as usize;
            let labels = (0..n).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
            let mut rows = vec![vec![0.0; n]; n];
            for row in rows.iter_mut() {
                for x in row.iter_mut() {
                    *x = r.f64()?;
                }
            }
            let table = LabelCostTable::new(labels, rows).map_err(|e| corrupt(&e.to_string()))?;
            RelabelCost::Table(Arc::new(table))
        }
        _ => return Err(corrupt("unknown relabel cost tag")),
    };
    let cost = CostModel {
        vertex_indel: cv,
        edge_indel: ce,
        vertex_relabel: relabel,
        edge_relabel: cel,
    };
    cost.validate().map_err(|e| corrupt(&e.to_string()))?;
    Ok(cost)
}

fn write_tree(out: &mut Vec<u8>, tree: &MetricTree) {
    let raw = tree.raw_parts();
    put_u32(out, raw.parent.len() as u32);
    for (p, w) in raw.parent.iter().zip(raw.weight) {
        put_u32(out, p.unwrap_or(u32::MAX));
        put_f64(out, *w);
    }
    match raw.layout {
        RawLayout::Star {
            hub_weight,
            leaf_weight,
        } => {
            out.push(0);
            put_f64(out, hub_weight);
            put_f64(out, leaf_weight);
        }
        RawLayout::Path { step } => {
            out.push(1);
            put_f64(out, step);
        }
        RawLayout::General { anchors, height } => {
            out.push(2);
            put_f64(out, height);
            put_u32(out, anchors.len() as u32);
            for (key, node) in anchors {
                let (tag, value) = match key {
                    AnchorKey::Dummy => (0u8, 0),
                    AnchorKey::Label(l) => (1, l),
                    AnchorKey::Degree(d) => (2, d),
                };
                out.push(tag);
                put_u32(out, value);
                put_u32(out, node);
            }
        }
    }
}

fn read_tree(r: &mut Reader) -> Result<MetricTree> {
    let n = r.u32()? as usize;
    let mut parent = Vec::with_capacity(n.min(1 << 16));
    let mut weight = Vec::with_capacity(n.min(1 << 16));
    for _ in 0..n {
        let p = r.u32()?;
        parent.push((p != u32::MAX).then_some(p));
        weight.push(r.f64()?);
    }
    let layout = match r.u8()? {
        0 => RawLayout::Star {
            hub_weight: r.f64()?,
            leaf_weight: r.f64()?,
        },
        1 => RawLayout::Path { step: r.f64()? },
        2 => {
            let height = r.f64()?;
            let count = r.u32()? as usize;
            let mut anchors = Vec::with_capacity(count.min(1 << 16));
            for _ in 0..count {
                let key = match (r.u8()?, r.u32()?) {
                    (0, _) => AnchorKey::Dummy,
                    (1, l) => AnchorKey::Label(l),
                    (2, d) => AnchorKey::Degree(d),
                    _ => return Err(corrupt("unknown anchor tag")),
                };
                anchors.push((key, r.u32()?));
            }
            RawLayout::General { anchors, height }
        }
        _ => return Err(corrupt("unknown tree layout")),
    };
    MetricTree::from_raw(parent, weight, layout).map_err(|e| corrupt(&e.to_string()))
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let bytes = self
            .buf
            .get(self.pos..end)
            .ok_or_else(|| corrupt("unexpected end of file"))?;
        self.pos = end;
        Ok(bytes.try_into().expect("slice has length N"))
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take::<1>()?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take()?))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take()?))
    }

    /// A count that must fit in the remaining bytes.
    fn len(&mut self) -> Result<usize> {
        let n = self.u64()?;
        if n > (self.buf.len() - self.pos) as u64 {
            return Err(corrupt("length field exceeds the file size"));
        }
        Ok(n as usize)
    }
}
