//! Forgetful maps between subdivided complexes: contracting a boundary edge,
//! and contracting a boundary component with one marked point to a free
//! vertex.

mod fiber;
mod morse;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::arrangements::{is_admissible, Arrangement};
use crate::complexes::{BdComplex, BdSimplex};
use crate::error::{Error, Result};
use crate::surface_map::{canonical_form, EdgeKind, MapEditor, VertexLabel};
use crate::SurfaceSignature;

pub use fiber::{metric_fiber, Fiber, FiberShape, GridReport};
pub use morse::MorseMatching;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "component")]
pub enum ContractionKind {
    /// Contract the boundary edge from `(i, n_i)` to `(i, 1)`; requires `n_i > 1`.
    Edge(u32),
    /// Shrink component `i` (with `n_i = 1`) to the free vertex `n + 1`.
    Boundary(u32),
}

impl ContractionKind {
    pub fn target_signature(&self, sig: &SurfaceSignature) -> Result<SurfaceSignature> {
        let check = |i: u32| {
            if i == 0 || i as usize > sig.boundary_count() {
                Err(Error::BadInput(format!("no boundary component {i} on {sig}")))
            } else {
                Ok(sig.boundary_points[i as usize - 1])
            }
        };
        match *self {
            ContractionKind::Edge(i) => {
                let k = check(i)?;
                if k < 2 {
                    return Err(Error::WrongContractionKind(format!(
                        "component {i} has one marked point; contract the boundary instead"
                    )));
                }
                let mut pts = sig.boundary_points.clone();
                pts[i as usize - 1] -= 1;
                SurfaceSignature::new(sig.genus, sig.free_points, pts)
            }
            ContractionKind::Boundary(i) => {
                let k = check(i)?;
                if k != 1 {
                    return Err(Error::WrongContractionKind(format!(
                        "component {i} has {k} marked points; contract edges first"
                    )));
                }
                let mut pts = sig.boundary_points.clone();
                pts.remove(i as usize - 1);
                SurfaceSignature::new(sig.genus, sig.free_points + 1, pts)
            }
        }
    }
}

/// The image of one source cell: the contracted arrangement, and for each
/// source diagonal the target diagonal it survives as (if any). Parallel
/// copies share a target diagonal.
#[derive(Clone, Debug)]
pub struct ContractedCell {
    pub arrangement: Arrangement,
    pub image: Vec<Option<usize>>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Contracts one arrangement and cleans up to a fixpoint: contractible
/// diagonals and diagonals parallel to the boundary are removed, parallel
/// diagonals are merged into one.
pub fn contract_cell(
    arr: &Arrangement,
    sig: &SurfaceSignature,
    kind: ContractionKind,
) -> Result<ContractedCell> {
    let target_sig = kind.target_signature(sig)?;
    let map = &arr.map;
    let mut ed = MapEditor::new(map);
    for (i, &e) in arr.diagonals.iter().enumerate() {
        for d in map.edge_darts(e) {
            ed.tag[d] = i;
        }
    }
    let cap_dart_at = |label: VertexLabel| -> Result<usize> {
        let v = map
            .vertex_by_label(label)
            .ok_or_else(|| Error::Invariant(format!("no vertex {label:?}")))?;
        map.darts_at(v)
            .into_iter()
            .find(|&d| map.is_cap_dart(d))
            .ok_or_else(|| Error::Invariant(format!("no cap dart at {label:?}")))
    };
    match kind {
        ContractionKind::Edge(i) => {
            let k = sig.boundary_points[i as usize - 1];
            let x = cap_dart_at(VertexLabel::Boundary { component: i, position: k })?;
            let merged = ed.contract_edge(x)?;
            ed.set_vertex_label(merged, VertexLabel::Boundary { component: i, position: 1 });
        }
        ContractionKind::Boundary(i) => {
            let x = cap_dart_at(VertexLabel::Boundary { component: i, position: 1 })?;
            let rest = ed.next(x);
            if rest == x || ed.twin(x) == rest && ed.next(rest) == x {
                return Err(Error::Invariant("boundary vertex carries no diagonal".into()));
            }
            let keep = ed
                .vertex_darts(x)
                .into_iter()
                .find(|&d| ed.kind(d) == EdgeKind::Diagonal)
                .expect("checked above");
            ed.remove_edge(x);
            ed.set_vertex_label(keep, VertexLabel::Free(sig.free_points + 1));
            ed.relabel_all(|l| match l {
                VertexLabel::Boundary { component, position } if component > i => {
                    VertexLabel::Boundary { component: component - 1, position }
                }
                other => other,
            });
            ed.set_boundary_count(sig.boundary_count() - 1);
        }
    }

    let m = arr.m();
    let mut parent: Vec<usize> = (0..m).collect();
    let mut dead = vec![false; m];
    loop {
        let degenerate = ed.interior_faces().into_iter().find(|f| f.len() <= 2);
        let Some(face) = degenerate else { break };
        let kinds: Vec<EdgeKind> = face.iter().map(|&d| ed.kind(d)).collect();
        match kinds.as_slice() {
            [EdgeKind::Diagonal] => {
                let c = find(&mut parent, ed.tag[face[0]]);
                dead[c] = true;
                ed.remove_edge(face[0]);
            }
            [EdgeKind::Diagonal, EdgeKind::Boundary] | [EdgeKind::Boundary, EdgeKind::Diagonal] => {
                let d = if kinds[0] == EdgeKind::Diagonal { face[0] } else { face[1] };
                let c = find(&mut parent, ed.tag[d]);
                dead[c] = true;
                ed.remove_edge(d);
            }
            [EdgeKind::Diagonal, EdgeKind::Diagonal] if ed.twin(face[0]) != face[1] => {
                let (a, b) = (find(&mut parent, ed.tag[face[0]]), find(&mut parent, ed.tag[face[1]]));
                let (keep, gone) = if ed.tag[face[0]] < ed.tag[face[1]] { (face[0], face[1]) } else { (face[1], face[0]) };
                parent[a.max(b)] = a.min(b);
                let root = find(&mut parent, ed.tag[keep]);
                dead[root] = dead[a] || dead[b];
                ed.remove_edge(gone);
            }
            _ => {
                return Err(Error::Invariant(format!(
                    "contraction left a degenerate face of kinds {kinds:?}"
                )))
            }
        }
    }

    let (sub, index) = ed.to_map()?;
    if let Err(why) = is_admissible(&sub, &target_sig)? {
        return Err(Error::Invariant(format!("contracted arrangement is not admissible: {why}")));
    }
    let target = Arrangement::from_admissible(&sub, &target_sig)?;
    let canon = canonical_form(&sub);
    let mut survivor: HashMap<usize, usize> = HashMap::new();
    for slot in 0..ed.slots() {
        if ed.is_alive(slot) && ed.kind(slot) == EdgeKind::Diagonal {
            let root = find(&mut parent, ed.tag[slot]);
            let nd = canon.perm[index[slot].expect("live slot")];
            let t = target
                .diagonal_index(target.map.edge_of(nd))
                .expect("diagonal stays a diagonal");
            survivor.insert(root, t);
        }
    }
    let image = (0..m)
        .map(|d| {
            let r = find(&mut parent, d);
            if dead[r] {
                None
            } else {
                survivor.get(&r).copied()
            }
        })
        .collect();
    Ok(ContractedCell {
        arrangement: target,
        image,
    })
}

/// Image of an ordered partition: each surviving target diagonal goes to
/// the earliest set holding one of its preimages; emptied sets are dropped.
pub fn contract_partition(parts: &[u64], image: &[Option<usize>], target_m: usize) -> Vec<u64> {
    let mut first = vec![usize::MAX; target_m];
    for (k, &set) in parts.iter().enumerate() {
        for (d, t) in image.iter().enumerate() {
            if set & (1 << d) != 0 {
                if let Some(t) = *t {
                    first[t] = first[t].min(k);
                }
            }
        }
    }
    (0..parts.len())
        .map(|k| {
            first
                .iter()
                .enumerate()
                .filter(|&(_, &f)| f == k)
                .fold(0u64, |m, (t, _)| m | 1 << t)
        })
        .filter(|&m| m != 0)
        .collect()
}

/// Contracts a single simplex without building the target complex.
pub fn contract_simplex(
    source: &BdComplex,
    simplex: &BdSimplex,
    kind: ContractionKind,
) -> Result<(Arrangement, Vec<u64>)> {
    let arr = &source.inventory.cells[simplex.cell];
    let cc = contract_cell(arr, source.signature(), kind)?;
    let parts = contract_partition(&simplex.parts, &cc.image, cc.arrangement.m());
    Ok((cc.arrangement, parts))
}

/// A simplex addressed by dimension and index within that dimension.
pub type SimplexId = (usize, usize);

/// The simplicial forgetful map between two complexes.
#[derive(Clone, Debug)]
pub struct ForgetfulMap {
    pub source: BdComplex,
    pub target: BdComplex,
    pub kind: ContractionKind,
    /// Per source cell: target cell and diagonal images.
    pub cells: Vec<(usize, Vec<Option<usize>>)>,
    /// `images[k][s]` is the target simplex of source simplex `(k, s)`.
    pub images: Vec<Vec<SimplexId>>,
}

impl ForgetfulMap {
    pub fn build(source: BdComplex, target: BdComplex, kind: ContractionKind) -> Result<Self> {
        let expected = kind.target_signature(source.signature())?;
        if target.signature() != &expected {
            return Err(Error::SignatureMismatch {
                expected: expected.to_string(),
                found: target.signature().to_string(),
            });
        }
        if expected.min_diagonals() == 0 {
            // some cells would land on the empty arrangement, which the
            // disc complex leaves out
            return Err(Error::BadInput(format!("target {expected} is a disc")));
        }
        let mut cells = Vec::with_capacity(source.inventory.len());
        for arr in &source.inventory.cells {
            let cc = contract_cell(arr, source.signature(), kind)?;
            let t = target
                .inventory
                .find(&cc.arrangement.code)
                .ok_or_else(|| Error::Invariant("contracted cell missing from the target".into()))?;
            cells.push((t, cc.image));
        }
        let mut images = Vec::with_capacity(source.simplices.len());
        for level in &source.simplices {
            let mut out = Vec::with_capacity(level.len());
            for s in level {
                let (t, image) = &cells[s.cell];
                let tm = target.inventory.cells[*t].m();
                let parts = contract_partition(&s.parts, image, tm);
                let img = BdSimplex { cell: *t, parts };
                let i = target.find(&img).ok_or_else(|| {
                    Error::Invariant(format!("image of {s:?} is not a simplex of the target"))
                })?;
                out.push((img.dimension(), i));
            }
            images.push(out);
        }
        Ok(ForgetfulMap {
            source,
            target,
            kind,
            cells,
            images,
        })
    }

    pub fn image(&self, (k, s): SimplexId) -> SimplexId {
        self.images[k][s]
    }

    /// All faces of a target simplex, itself included.
    fn target_faces(&self, id: SimplexId) -> BTreeSet<SimplexId> {
        let mut out = BTreeSet::from([id]);
        let mut stack = vec![id];
        while let Some((k, s)) = stack.pop() {
            if k == 0 {
                continue;
            }
            for &f in &self.target.faces[k][s] {
                if out.insert((k - 1, f)) {
                    stack.push((k - 1, f));
                }
            }
        }
        out
    }

    /// Checks that the image of every facet is a face of the image.
    pub fn check_monotone(&self) -> Result<()> {
        for k in 1..self.source.simplices.len() {
            for s in 0..self.source.simplices[k].len() {
                let faces = self.target_faces(self.image((k, s)));
                for &f in &self.source.faces[k][s] {
                    if !faces.contains(&self.image((k - 1, f))) {
                        return Err(Error::Invariant(format!(
                            "facet of {:?} maps outside the image",
                            self.source.simplices[k][s]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_surjective(&self) -> Result<()> {
        let mut hit: Vec<Vec<bool>> = self.target.simplices.iter().map(|l| vec![false; l.len()]).collect();
        for level in &self.images {
            for &(k, s) in level {
                hit[k][s] = true;
            }
        }
        for (k, level) in hit.iter().enumerate() {
            if let Some(s) = level.iter().position(|&h| !h) {
                return Err(Error::Invariant(format!(
                    "target simplex {:?} has empty preimage",
                    self.target.simplices[k][s]
                )));
            }
        }
        Ok(())
    }
}
