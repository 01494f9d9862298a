//! The cell complex of admissible arrangements and its simplicial
//! subdivision by ordered partitions.

pub mod chain;
mod metric;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::arrangements::{delete_diagonal, is_admissible, Arrangement, CellInventory, Deletion, Restriction};
use crate::error::{Error, Result};
use crate::SurfaceSignature;

pub use chain::{ChainComplex, Homology, SparseMatrix};
pub use metric::{is_valid_metric, MetricArrangement};

/// Cells of the arrangement complex with their covering relations.
#[derive(Clone, Debug)]
pub struct DComplex {
    pub inventory: CellInventory,
    /// `(cell, facet, multiplicity)`: deleting one of `multiplicity`
    /// distinct diagonals of `cell` yields `facet`.
    pub coverings: Vec<(usize, usize, usize)>,
}

impl DComplex {
    pub fn build(inventory: CellInventory) -> Result<Self> {
        let sig = inventory.signature.clone();
        let mut coverings = Vec::new();
        for (c, arr) in inventory.cells.iter().enumerate() {
            let mut hits: HashMap<usize, usize> = HashMap::new();
            for &e in &arr.diagonals {
                let Deletion::Map(map) = delete_diagonal(arr, e)? else { continue };
                if is_admissible(&map, &sig)?.is_err() {
                    continue;
                }
                let code = Arrangement::new(&map, &sig)?.code;
                let f = inventory
                    .find(&code)
                    .ok_or_else(|| Error::Invariant("facet missing from the inventory".into()))?;
                *hits.entry(f).or_insert(0) += 1;
            }
            let mut hits: Vec<_> = hits.into_iter().collect();
            hits.sort_unstable();
            coverings.extend(hits.into_iter().map(|(f, k)| (c, f, k)));
        }
        Ok(DComplex { inventory, coverings })
    }

    pub fn dimension_of(&self, cell: usize) -> usize {
        (self.inventory.signature.max_diagonals() - self.inventory.cells[cell].m() as i64) as usize
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.inventory.f_vector()
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.f_vector())
    }
}

fn alternating_sum(f: &[usize]) -> i64 {
    f.iter()
        .enumerate()
        .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
        .sum()
}

/// An ordered partition `(S_1, ..., S_p)` of the diagonals of a cell, each
/// set a bitmask over the cell's diagonal indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BdSimplex {
    pub cell: usize,
    pub parts: Vec<u64>,
}

impl BdSimplex {
    pub fn dimension(&self) -> usize {
        self.parts.len() - 1
    }

    /// Union of the first `i + 1` sets.
    pub fn prefix(&self, i: usize) -> u64 {
        self.parts[..=i].iter().fold(0, |a, &s| a | s)
    }
}

/// Admissible restriction of a cell: target cell and the index map.
#[derive(Clone, Debug)]
pub struct SubCell {
    pub cell: usize,
    pub kept: Vec<Option<usize>>,
}

/// The simplicial subdivision: simplices are ordered partitions whose first
/// set is admissible, with vertices ordered by prefix union.
#[derive(Clone, Debug)]
pub struct BdComplex {
    pub inventory: CellInventory,
    /// Simplices by dimension.
    pub simplices: Vec<Vec<BdSimplex>>,
    /// `faces[k][s][t]` is the index of the facet of simplex `s` opposite
    /// its vertex `t`.
    pub faces: Vec<Vec<Vec<usize>>>,
    /// `restrictions[cell]` maps each admissible mask to its cell.
    pub restrictions: Vec<HashMap<u64, SubCell>>,
    index: Vec<HashMap<BdSimplex, usize>>,
}

fn ordered_partitions(items: &[usize], out: &mut Vec<Vec<u64>>, prefix: &mut Vec<u64>) {
    if items.is_empty() {
        out.push(prefix.clone());
        return;
    }
    let k = items.len();
    for pick in 1u64..(1 << k) {
        let mut block = 0u64;
        let mut rest = Vec::new();
        for (i, &d) in items.iter().enumerate() {
            if pick & (1 << i) != 0 {
                block |= 1 << d;
            } else {
                rest.push(d);
            }
        }
        prefix.push(block);
        ordered_partitions(&rest, out, prefix);
        prefix.pop();
    }
}

fn remap(mask: u64, kept: &[Option<usize>]) -> u64 {
    let mut out = 0;
    for (i, k) in kept.iter().enumerate() {
        if mask & (1 << i) != 0 {
            out |= 1 << k.expect("only kept diagonals are remapped");
        }
    }
    out
}

impl BdComplex {
    pub fn build(inventory: CellInventory) -> Result<Self> {
        let sig = inventory.signature.clone();
        let mut restrictions = Vec::with_capacity(inventory.len());
        for arr in &inventory.cells {
            if arr.m() > 63 {
                return Err(Error::Budget(format!("{} diagonals in one cell", arr.m())));
            }
            let full = (1u64 << arr.m()) - 1;
            let mut subs = HashMap::new();
            for mask in 1..=full {
                if let Restriction::Admissible { arrangement, kept } = arr.restrict(mask, &sig)? {
                    let cell = inventory
                        .find(&arrangement.code)
                        .ok_or_else(|| Error::Invariant("restriction missing from the inventory".into()))?;
                    subs.insert(mask, SubCell { cell, kept });
                }
            }
            restrictions.push(subs);
        }

        let mut simplices: Vec<Vec<BdSimplex>> = Vec::new();
        for (c, arr) in inventory.cells.iter().enumerate() {
            let full = (1u64 << arr.m()) - 1;
            let mut firsts: Vec<u64> = restrictions[c].keys().copied().collect();
            firsts.sort_unstable();
            for s1 in firsts {
                let rest: Vec<usize> = (0..arr.m()).filter(|&i| (full & !s1) & (1 << i) != 0).collect();
                let mut parts = Vec::new();
                ordered_partitions(&rest, &mut parts, &mut vec![s1]);
                for p in parts {
                    let dim = p.len() - 1;
                    if simplices.len() <= dim {
                        simplices.resize(dim + 1, Vec::new());
                    }
                    simplices[dim].push(BdSimplex { cell: c, parts: p });
                }
            }
        }
        for level in simplices.iter_mut() {
            level.sort();
        }
        let index: Vec<HashMap<BdSimplex, usize>> = simplices
            .iter()
            .map(|level| level.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        let mut bd = BdComplex {
            inventory,
            simplices,
            faces: Vec::new(),
            restrictions,
            index,
        };
        bd.faces = bd.compute_faces()?;
        bd.check_prefixes()?;
        Ok(bd)
    }

    /// Facet of `s` opposite vertex `t`.
    pub fn face(&self, s: &BdSimplex, t: usize) -> Result<BdSimplex> {
        let p = s.parts.len();
        if p < 2 || t >= p {
            return Err(Error::Dimension(format!("face {t} of a {}-simplex", p - 1)));
        }
        if t + 1 < p {
            let mut parts = s.parts.clone();
            let merged = parts[t] | parts[t + 1];
            parts[t] = merged;
            parts.remove(t + 1);
            return Ok(BdSimplex { cell: s.cell, parts });
        }
        let sub = self.restrictions[s.cell]
            .get(&s.prefix(p - 2))
            .ok_or_else(|| Error::Invariant("prefix union is not admissible".into()))?;
        Ok(BdSimplex {
            cell: sub.cell,
            parts: s.parts[..p - 1].iter().map(|&m| remap(m, &sub.kept)).collect(),
        })
    }

    fn compute_faces(&self) -> Result<Vec<Vec<Vec<usize>>>> {
        let mut faces = vec![Vec::new()];
        faces[0] = vec![Vec::new(); self.simplices.first().map_or(0, Vec::len)];
        for k in 1..self.simplices.len() {
            let mut level = Vec::with_capacity(self.simplices[k].len());
            for s in &self.simplices[k] {
                let mut fs = Vec::with_capacity(k + 1);
                for t in 0..=k {
                    let f = self.face(s, t)?;
                    let i = self.find(&f).ok_or_else(|| {
                        Error::Invariant(format!("facet {t} of {s:?} is not a simplex"))
                    })?;
                    fs.push(i);
                }
                let mut sorted = fs.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != fs.len() {
                    return Err(Error::Invariant(format!("simplex {s:?} has repeated facets")));
                }
                level.push(fs);
            }
            faces.push(level);
        }
        Ok(faces)
    }

    /// Every prefix union of every simplex is admissible.
    fn check_prefixes(&self) -> Result<()> {
        for level in &self.simplices {
            for s in level {
                for i in 0..s.parts.len() - 1 {
                    if !self.restrictions[s.cell].contains_key(&s.prefix(i)) {
                        return Err(Error::Invariant(format!("prefix {i} of {s:?} is not admissible")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn find(&self, s: &BdSimplex) -> Option<usize> {
        self.index.get(s.dimension())?.get(s).copied()
    }

    pub fn dimension(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn signature(&self) -> &SurfaceSignature {
        &self.inventory.signature
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.f_vector())
    }

    /// Vertices of `s` as cell indices, in prefix order.
    pub fn vertices(&self, s: &BdSimplex) -> Vec<usize> {
        let last = s.parts.len() - 1;
        (0..=last)
            .map(|i| if i == last { s.cell } else { self.restrictions[s.cell][&s.prefix(i)].cell })
            .collect()
    }

    /// Number of pairs of distinct simplices sharing a vertex set.
    pub fn vertex_set_collisions(&self) -> usize {
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for level in &self.simplices {
            for s in level {
                let mut v = self.vertices(s);
                v.sort_unstable();
                *seen.entry(v).or_insert(0) += 1;
            }
        }
        seen.values().map(|&n| n * (n - 1) / 2).sum()
    }

    /// Oriented boundary maps with sign `(-1)^t` on the facet opposite vertex `t`.
    pub fn chain_complex(&self) -> ChainComplex {
        let mut boundaries = vec![SparseMatrix::zero(0, self.f_vector().first().copied().unwrap_or(0))];
        for k in 1..self.simplices.len() {
            let mut triples = Vec::new();
            for (s, fs) in self.faces[k].iter().enumerate() {
                for (t, &f) in fs.iter().enumerate() {
                    triples.push((f, s, if t % 2 == 0 { 1 } else { -1 }));
                }
            }
            boundaries.push(SparseMatrix::from_triples(
                self.simplices[k - 1].len(),
                self.simplices[k].len(),
                &triples,
            ));
        }
        ChainComplex { boundaries }
    }

    pub fn homology(&self) -> Result<Homology> {
        self.chain_complex().homology()
    }

    pub fn to_dump(&self) -> ComplexDump {
        ComplexDump {
            signature: self.signature().to_string(),
            vertices: self.inventory.cells.iter().map(Arrangement::code_hex).collect(),
            simplices: self
                .simplices
                .iter()
                .flatten()
                .map(|s| DumpedSimplex {
                    vertices: self.vertices(s),
                    partition: s.parts.clone(),
                })
                .collect(),
        }
    }
}

/// Serializable form of a [`BdComplex`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexDump {
    pub signature: String,
    /// Canonical codes (hex) of the vertex arrangements.
    pub vertices: Vec<String>,
    pub simplices: Vec<DumpedSimplex>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DumpedSimplex {
    pub vertices: Vec<usize>,
    pub partition: Vec<u64>,
}
