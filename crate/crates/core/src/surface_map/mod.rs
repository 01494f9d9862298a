//! Dart-based combinatorial maps on capped surfaces.
//!
//! A marked surface with boundary is encoded by gluing a disk (a *cap*) into
//! every boundary component. The arrangement together with the boundary
//! edges is then a cellularly embedded graph on a closed oriented surface:
//!
//! * `rotation` is the counterclockwise successor of a dart around its
//!   origin vertex,
//! * `pairing` exchanges the two darts of an edge,
//! * faces are orbits of `pairing ∘ rotation⁻¹`; the face of a dart lies on
//!   its right-hand side.
//!
//! Each boundary component `i` owns exactly one *cap face*, walked by the
//! darts `c(i,j)` that run from boundary vertex `(i,j)` to `(i,j+1)`.

mod builder;
mod canonical;
mod editor;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signature::SurfaceSignature;

pub use builder::{seed_arrangement, MapBuilder};
pub use canonical::{automorphism_count, canonical_code, canonical_form, CanonicalForm};
pub(crate) use editor::MapEditor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Diagonal,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexLabel {
    /// Free marked point, labeled `1..=n`.
    Free(u32),
    /// Marked point `position` (1-based) on boundary component `component` (1-based).
    Boundary { component: u32, position: u32 },
}

impl VertexLabel {
    pub fn is_free(&self) -> bool {
        matches!(self, VertexLabel::Free(_))
    }

    pub(crate) fn code_words(&self) -> [u32; 3] {
        match *self {
            VertexLabel::Free(k) => [0, k, 0],
            VertexLabel::Boundary {
                component,
                position,
            } => [1, component, position],
        }
    }
}

/// Serialized form. Field order is the wire order.
#[derive(Serialize, Deserialize)]
struct RawMap {
    rotation: Vec<usize>,
    pairing: Vec<usize>,
    edge_kind: Vec<EdgeKind>,
    vertex_labels: Vec<VertexLabel>,
    boundary_faces: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawMap", into = "RawMap")]
pub struct CombinatorialMap {
    rotation: Vec<usize>,
    pairing: Vec<usize>,
    edge_kind: Vec<EdgeKind>,
    vertex_labels: Vec<VertexLabel>,
    boundary_faces: Vec<usize>,

    rotation_inv: Vec<usize>,
    dart_vertex: Vec<usize>,
    dart_edge: Vec<usize>,
    edge_darts: Vec<[usize; 2]>,
    vertex_darts: Vec<usize>,
    cap_side: Vec<bool>,
}

impl PartialEq for CombinatorialMap {
    fn eq(&self, other: &Self) -> bool {
        self.rotation == other.rotation
            && self.pairing == other.pairing
            && self.edge_kind == other.edge_kind
            && self.vertex_labels == other.vertex_labels
            && self.boundary_faces == other.boundary_faces
    }
}

impl Eq for CombinatorialMap {}

impl TryFrom<RawMap> for CombinatorialMap {
    type Error = Error;

    fn try_from(raw: RawMap) -> Result<Self> {
        CombinatorialMap::from_parts(
            raw.rotation,
            raw.pairing,
            raw.edge_kind,
            raw.vertex_labels,
            raw.boundary_faces,
        )
    }
}

impl From<CombinatorialMap> for RawMap {
    fn from(m: CombinatorialMap) -> Self {
        RawMap {
            rotation: m.rotation,
            pairing: m.pairing,
            edge_kind: m.edge_kind,
            vertex_labels: m.vertex_labels,
            boundary_faces: m.boundary_faces,
        }
    }
}

fn orbits(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            orbit.push(d);
            d = perm[d];
        }
        out.push(orbit);
    }
    out
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

impl CombinatorialMap {
    /// Validates the permutation data and builds the derived lookup tables.
    ///
    /// Edges are numbered by their smaller dart, vertices by the smallest
    /// dart of their rotation orbit.
    pub fn from_parts(
        rotation: Vec<usize>,
        pairing: Vec<usize>,
        edge_kind: Vec<EdgeKind>,
        vertex_labels: Vec<VertexLabel>,
        boundary_faces: Vec<usize>,
    ) -> Result<Self> {
        let n = rotation.len();
        let bad = |msg: String| Err(Error::MalformedMap(msg));
        if pairing.len() != n {
            return bad(format!("rotation has {n} darts, pairing {}", pairing.len()));
        }
        if !n.is_multiple_of(2) {
            return bad("odd number of darts".into());
        }
        if !is_permutation(&rotation) {
            return bad("rotation is not a permutation".into());
        }
        if !is_permutation(&pairing) {
            return bad("pairing is not a permutation".into());
        }
        if (0..n).any(|d| pairing[d] == d || pairing[pairing[d]] != d) {
            return bad("pairing is not a fixed-point-free involution".into());
        }

        let mut dart_edge = vec![usize::MAX; n];
        let mut edge_darts = Vec::with_capacity(n / 2);
        for d in 0..n {
            if dart_edge[d] == usize::MAX {
                let e = edge_darts.len();
                dart_edge[d] = e;
                dart_edge[pairing[d]] = e;
                edge_darts.push([d, pairing[d]]);
            }
        }
        if edge_kind.len() != edge_darts.len() {
            return bad(format!(
                "{} edges but {} edge kinds",
                edge_darts.len(),
                edge_kind.len()
            ));
        }

        let mut dart_vertex = vec![usize::MAX; n];
        let mut vertex_darts = Vec::new();
        for orbit in orbits(&rotation) {
            let v = vertex_darts.len();
            vertex_darts.push(orbit[0]);
            for d in orbit {
                dart_vertex[d] = v;
            }
        }
        if vertex_labels.len() != vertex_darts.len() {
            return bad(format!(
                "{} vertices but {} vertex labels",
                vertex_darts.len(),
                vertex_labels.len()
            ));
        }

        let mut rotation_inv = vec![0; n];
        for d in 0..n {
            rotation_inv[rotation[d]] = d;
        }

        let mut map = CombinatorialMap {
            rotation,
            pairing,
            edge_kind,
            vertex_labels,
            boundary_faces,
            rotation_inv,
            dart_vertex,
            dart_edge,
            edge_darts,
            vertex_darts,
            cap_side: vec![false; n],
        };
        map.validate_caps()?;
        Ok(map)
    }

    fn validate_caps(&mut self) -> Result<()> {
        let bad = |msg: String| Err(Error::MalformedMap(msg));
        for (i, &root) in self.boundary_faces.iter().enumerate() {
            let comp = i as u32 + 1;
            if root >= self.dart_count() {
                return bad(format!("boundary face {comp}: dart {root} out of range"));
            }
            let walk = self.face_walk(root);
            let k = walk.len() as u32;
            for (step, &d) in walk.iter().enumerate() {
                if self.cap_side[d] {
                    return bad(format!("boundary faces {comp} overlap"));
                }
                if self.edge_kind(self.dart_edge[d]) != EdgeKind::Boundary {
                    return bad(format!("boundary face {comp} contains a diagonal"));
                }
                // walking the cap visits positions 1, k, k-1, ..., 2
                let want = if step == 0 { 1 } else { k + 1 - step as u32 };
                let label = self.vertex_labels[self.dart_vertex[d]];
                if label
                    != (VertexLabel::Boundary {
                        component: comp,
                        position: want,
                    })
                {
                    return bad(format!(
                        "boundary face {comp} visits {label:?} where position {want} was expected"
                    ));
                }
                self.cap_side[d] = true;
            }
        }
        for (e, &[a, b]) in self.edge_darts.iter().enumerate() {
            let on_cap = self.cap_side[a] as u8 + self.cap_side[b] as u8;
            match self.edge_kind[e] {
                EdgeKind::Boundary if on_cap != 1 => {
                    return bad(format!("boundary edge {e} lies on {on_cap} boundary faces"))
                }
                EdgeKind::Diagonal if on_cap != 0 => {
                    return bad(format!("diagonal {e} lies on a boundary face"))
                }
                _ => {}
            }
        }
        for (v, &label) in self.vertex_labels.iter().enumerate() {
            if label.is_free() {
                let d0 = self.vertex_darts[v];
                let mut d = d0;
                loop {
                    if self.edge_kind(self.dart_edge[d]) == EdgeKind::Boundary {
                        return bad(format!("free vertex {label:?} carries a boundary edge"));
                    }
                    d = self.rotation[d];
                    if d == d0 {
                        break;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dart_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_darts.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_darts.len()
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_faces.len()
    }

    /// Counterclockwise successor around the origin vertex.
    pub fn rotation(&self, d: usize) -> usize {
        self.rotation[d]
    }

    pub fn rotation_inv(&self, d: usize) -> usize {
        self.rotation_inv[d]
    }

    pub fn pairing(&self, d: usize) -> usize {
        self.pairing[d]
    }

    /// Face permutation `pairing ∘ rotation⁻¹`.
    pub fn phi(&self, d: usize) -> usize {
        self.pairing[self.rotation_inv[d]]
    }

    pub fn edge_of(&self, d: usize) -> usize {
        self.dart_edge[d]
    }

    pub fn edge_darts(&self, e: usize) -> [usize; 2] {
        self.edge_darts[e]
    }

    pub fn edge_kind(&self, e: usize) -> EdgeKind {
        self.edge_kind[e]
    }

    pub fn dart_kind(&self, d: usize) -> EdgeKind {
        self.edge_kind[self.dart_edge[d]]
    }

    pub fn vertex_of(&self, d: usize) -> usize {
        self.dart_vertex[d]
    }

    pub fn vertex_label(&self, v: usize) -> VertexLabel {
        self.vertex_labels[v]
    }

    pub fn dart_label(&self, d: usize) -> VertexLabel {
        self.vertex_labels[self.dart_vertex[d]]
    }

    pub fn vertex_labels(&self) -> &[VertexLabel] {
        &self.vertex_labels
    }

    pub fn boundary_faces(&self) -> &[usize] {
        &self.boundary_faces
    }

    /// True when the face on the right of `d` is a cap.
    pub fn is_cap_dart(&self, d: usize) -> bool {
        self.cap_side[d]
    }

    pub fn vertex_by_label(&self, label: VertexLabel) -> Option<usize> {
        self.vertex_labels.iter().position(|&l| l == label)
    }

    /// Darts leaving `v` in counterclockwise order, starting at its smallest dart.
    pub fn darts_at(&self, v: usize) -> Vec<usize> {
        let d0 = self.vertex_darts[v];
        let mut out = vec![d0];
        let mut d = self.rotation[d0];
        while d != d0 {
            out.push(d);
            d = self.rotation[d];
        }
        out
    }

    pub fn face_walk(&self, start: usize) -> Vec<usize> {
        let mut out = vec![start];
        let mut d = self.phi(start);
        while d != start {
            out.push(d);
            d = self.phi(d);
        }
        out
    }

    /// Orbits of the face permutation, each listed from its smallest dart.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.dart_count()];
        let mut out = Vec::new();
        for d in 0..self.dart_count() {
            if !seen[d] {
                let walk = self.face_walk(d);
                for &x in &walk {
                    seen[x] = true;
                }
                out.push(walk);
            }
        }
        out
    }

    /// Faces other than the boundary caps.
    pub fn interior_faces(&self) -> Vec<Vec<usize>> {
        self.faces()
            .into_iter()
            .filter(|f| !self.cap_side[f[0]])
            .collect()
    }

    pub fn diagonal_edges(&self) -> Vec<usize> {
        (0..self.edge_count())
            .filter(|&e| self.edge_kind[e] == EdgeKind::Diagonal)
            .collect()
    }

    pub fn diagonal_count(&self) -> usize {
        self.edge_kind
            .iter()
            .filter(|&&k| k == EdgeKind::Diagonal)
            .count()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.dart_count();
        if n == 0 {
            return self.vertex_count() <= 1;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(d) = stack.pop() {
            for x in [self.rotation[d], self.pairing[d]] {
                if !seen[x] {
                    seen[x] = true;
                    count += 1;
                    stack.push(x);
                }
            }
        }
        count == n
    }

    /// Reads the signature off the map; the genus comes from Euler's relation
    /// on the capped surface.
    pub fn signature_of(&self) -> Result<SurfaceSignature> {
        let bad = |msg: String| Err(Error::InconsistentMap(msg));
        if !self.is_connected() {
            return bad("map is disconnected".into());
        }
        let v = self.vertex_count() as i64;
        let e = self.edge_count() as i64;
        let f = self.faces().len() as i64;
        let two_g = 2 - v + e - f;
        if two_g < 0 || two_g % 2 != 0 {
            return bad(format!("V - E + F = {} is not 2 - 2g", v - e + f));
        }
        let mut free = BTreeSet::new();
        let mut boundary: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); self.boundary_count()];
        for &label in &self.vertex_labels {
            let fresh = match label {
                VertexLabel::Free(k) => free.insert(k),
                VertexLabel::Boundary {
                    component,
                    position,
                } => {
                    let c = component as usize;
                    if c == 0 || c > boundary.len() {
                        return bad(format!("vertex on unknown boundary component {c}"));
                    }
                    boundary[c - 1].insert(position)
                }
            };
            if !fresh {
                return bad(format!("vertex label {label:?} used twice"));
            }
        }
        let n = free.len() as u32;
        if free.iter().copied().ne(1..=n) {
            return bad(format!("free labels {free:?} are not 1..={n}"));
        }
        let mut bpts = Vec::new();
        for (i, set) in boundary.iter().enumerate() {
            let k = set.len() as u32;
            if set.iter().copied().ne(1..=k) {
                return bad(format!("boundary component {} has positions {set:?}", i + 1));
            }
            bpts.push(k);
        }
        Ok(SurfaceSignature {
            genus: (two_g / 2) as u32,
            free_points: n,
            boundary_points: bpts,
        })
    }

    /// Applies a dart relabeling `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Result<CombinatorialMap> {
        let n = self.dart_count();
        if perm.len() != n || !is_permutation(perm) {
            return Err(Error::MalformedMap("relabeling is not a permutation".into()));
        }
        let mut rotation = vec![0; n];
        let mut pairing = vec![0; n];
        for d in 0..n {
            rotation[perm[d]] = perm[self.rotation[d]];
            pairing[perm[d]] = perm[self.pairing[d]];
        }
        let mut kind_of_dart = vec![EdgeKind::Diagonal; n];
        let mut label_of_dart = vec![VertexLabel::Free(0); n];
        for d in 0..n {
            kind_of_dart[perm[d]] = self.dart_kind(d);
            label_of_dart[perm[d]] = self.dart_label(d);
        }
        let boundary_faces = self.boundary_faces.iter().map(|&d| perm[d]).collect();
        Self::from_dart_data(rotation, pairing, &kind_of_dart, &label_of_dart, boundary_faces)
    }

    /// Builds a map from per-dart kinds and origin labels.
    pub(crate) fn from_dart_data(
        rotation: Vec<usize>,
        pairing: Vec<usize>,
        kind_of_dart: &[EdgeKind],
        label_of_dart: &[VertexLabel],
        boundary_faces: Vec<usize>,
    ) -> Result<CombinatorialMap> {
        let n = rotation.len();
        if pairing.len() != n || !is_permutation(&pairing) || !is_permutation(&rotation) {
            return Err(Error::MalformedMap("bad permutation data".into()));
        }
        let mut edge_kind = Vec::new();
        let mut seen = vec![false; n];
        for d in 0..n {
            if !seen[d] {
                seen[d] = true;
                seen[pairing[d]] = true;
                edge_kind.push(kind_of_dart[d]);
            }
        }
        let vertex_labels = orbits(&rotation)
            .into_iter()
            .map(|o| label_of_dart[o[0]])
            .collect();
        Self::from_parts(rotation, pairing, edge_kind, vertex_labels, boundary_faces)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("map serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// One free vertex with two loops `a b a⁻¹ b⁻¹`: the standard torus.
    fn torus_two_loops() -> CombinatorialMap {
        // darts: a+ = 0, a- = 1, b+ = 2, b- = 3; rotation 0 -> 2 -> 1 -> 3 -> 0
        CombinatorialMap::from_parts(
            vec![2, 3, 1, 0],
            vec![1, 0, 3, 2],
            vec![EdgeKind::Diagonal; 2],
            vec![VertexLabel::Free(1)],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn torus_has_one_square_face() {
        let m = torus_two_loops();
        let faces = m.faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].len(), 4);
        let sig = m.signature_of().unwrap();
        assert_eq!(sig, SurfaceSignature { genus: 1, free_points: 1, boundary_points: vec![] });
    }

    #[test]
    fn one_loop_on_one_vertex_is_a_sphere() {
        let m = CombinatorialMap::from_parts(
            vec![1, 0],
            vec![1, 0],
            vec![EdgeKind::Diagonal],
            vec![VertexLabel::Free(1)],
            vec![],
        )
        .unwrap();
        assert_eq!(m.faces().len(), 2);
        assert_eq!(m.signature_of().unwrap().genus, 0);
    }

    #[test]
    fn annulus_without_diagonals_is_disconnected() {
        // two boundary loops, one per component, no diagonals
        let m = CombinatorialMap::from_parts(
            vec![1, 0, 3, 2],
            vec![1, 0, 3, 2],
            vec![EdgeKind::Boundary; 2],
            vec![
                VertexLabel::Boundary { component: 1, position: 1 },
                VertexLabel::Boundary { component: 2, position: 1 },
            ],
            vec![0, 2],
        )
        .unwrap();
        // two caps plus the two far sides of the loops
        assert_eq!(m.faces().len(), 4);
        assert_eq!(m.interior_faces().len(), 2);
        assert!(m.signature_of().is_err());
    }

    #[test]
    fn annulus_with_one_diagonal() {
        let m = MapBuilder::annulus_one_diagonal();
        let sig = m.signature_of().unwrap();
        assert_eq!(sig.to_string(), "(0,2,0;1,1)");
        assert_eq!(m.faces().len(), 3);
        assert_eq!(m.interior_faces().len(), 1);
        assert_eq!(m.interior_faces()[0].len(), 4);
    }

    #[test]
    fn face_degrees_sum_to_dart_count() {
        let m = torus_two_loops();
        let total: usize = m.faces().iter().map(|f| f.len()).sum();
        assert_eq!(total, m.dart_count());
    }

    #[test]
    fn structural_errors() {
        let r = CombinatorialMap::from_parts(
            vec![0, 1],
            vec![0, 1],
            vec![EdgeKind::Diagonal],
            vec![VertexLabel::Free(1), VertexLabel::Free(2)],
            vec![],
        );
        assert!(matches!(r, Err(Error::MalformedMap(_))));
        let r = CombinatorialMap::from_parts(
            vec![1, 1],
            vec![1, 0],
            vec![EdgeKind::Diagonal],
            vec![VertexLabel::Free(1)],
            vec![],
        );
        assert!(matches!(r, Err(Error::MalformedMap(_))));
    }

    #[test]
    fn disc_with_one_chord() {
        let sig = SurfaceSignature::parse("0,1,0;4").unwrap();
        let mut b = MapBuilder::new(&sig);
        let v1 = b.boundary_vertex(1, 1);
        let v3 = b.boundary_vertex(1, 3);
        b.add_diagonal(v1, v3);
        let m = b.build().unwrap();
        assert_eq!(m.signature_of().unwrap(), sig);
        let degs: Vec<usize> = m.interior_faces().iter().map(|f| f.len()).collect();
        assert_eq!(degs, vec![3, 3]);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let m = MapBuilder::annulus_one_diagonal();
        let text = m.to_json();
        let back = CombinatorialMap::from_json(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_json(), text);
        assert!(text.starts_with("{\"rotation\":"));
    }
}
