use crate::error::{Error, Result};

use super::{CombinatorialMap, EdgeKind, VertexLabel};

pub(crate) const NO_TAG: usize = usize::MAX;

/// Mutable slot-based view of a map used for local surgery (deleting edges,
/// inserting chords, contracting boundary edges). Slots keep their indices
/// until [`MapEditor::to_map`] compacts them.
#[derive(Clone, Debug)]
pub(crate) struct MapEditor {
    next: Vec<usize>,
    prev: Vec<usize>,
    twin: Vec<usize>,
    alive: Vec<bool>,
    kind: Vec<EdgeKind>,
    label: Vec<VertexLabel>,
    cap_side: Vec<bool>,
    /// Caller-owned annotation carried through surgery.
    pub tag: Vec<usize>,
    boundary_count: usize,
}

impl MapEditor {
    pub fn new(map: &CombinatorialMap) -> Self {
        let n = map.dart_count();
        MapEditor {
            next: (0..n).map(|d| map.rotation(d)).collect(),
            prev: (0..n).map(|d| map.rotation_inv(d)).collect(),
            twin: (0..n).map(|d| map.pairing(d)).collect(),
            alive: vec![true; n],
            kind: (0..n).map(|d| map.dart_kind(d)).collect(),
            label: (0..n).map(|d| map.dart_label(d)).collect(),
            cap_side: (0..n).map(|d| map.is_cap_dart(d)).collect(),
            tag: vec![NO_TAG; n],
            boundary_count: map.boundary_count(),
        }
    }

    pub fn slots(&self) -> usize {
        self.next.len()
    }

    pub fn is_alive(&self, d: usize) -> bool {
        self.alive[d]
    }

    pub fn alive_darts(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.slots()).filter(|&d| self.alive[d])
    }

    pub fn next(&self, d: usize) -> usize {
        self.next[d]
    }

    pub fn twin(&self, d: usize) -> usize {
        self.twin[d]
    }

    pub fn kind(&self, d: usize) -> EdgeKind {
        self.kind[d]
    }

    pub fn label(&self, d: usize) -> VertexLabel {
        self.label[d]
    }

    pub fn phi(&self, d: usize) -> usize {
        self.twin[self.prev[d]]
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

    pub fn vertex_darts(&self, start: usize) -> Vec<usize> {
        let mut out = vec![start];
        let mut d = self.next[start];
        while d != start {
            out.push(d);
            d = self.next[d];
        }
        out
    }

    /// Non-cap faces as dart walks.
    pub fn interior_faces(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.slots()];
        let mut out = Vec::new();
        for d in self.alive_darts() {
            if seen[d] {
                continue;
            }
            let walk = self.face_walk(d);
            for &x in &walk {
                seen[x] = true;
            }
            if !self.cap_side[d] {
                out.push(walk);
            }
        }
        out
    }

    fn unlink(&mut self, d: usize) {
        let (p, s) = (self.prev[d], self.next[d]);
        if p != d {
            self.next[p] = s;
            self.prev[s] = p;
        }
        self.alive[d] = false;
        self.next[d] = d;
        self.prev[d] = d;
    }

    /// Removes the edge containing `d`.
    pub fn remove_edge(&mut self, d: usize) {
        let t = self.twin[d];
        self.unlink(d);
        self.unlink(t);
    }

    /// Inserts a diagonal across a face joining the corners clockwise of `a`
    /// and of `b`. Both darts must lie on the same face walk.
    pub fn insert_chord(&mut self, a: usize, b: usize) -> (usize, usize) {
        let na = self.push_slot(self.label[a]);
        let nb = self.push_slot(self.label[b]);
        self.twin[na] = nb;
        self.twin[nb] = na;
        for (new, at) in [(na, a), (nb, b)] {
            let p = self.prev[at];
            self.next[p] = new;
            self.prev[new] = p;
            self.next[new] = at;
            self.prev[at] = new;
        }
        (na, nb)
    }

    fn push_slot(&mut self, label: VertexLabel) -> usize {
        let d = self.slots();
        self.next.push(d);
        self.prev.push(d);
        self.twin.push(d);
        self.alive.push(true);
        self.kind.push(EdgeKind::Diagonal);
        self.label.push(label);
        self.cap_side.push(false);
        self.tag.push(NO_TAG);
        d
    }

    /// Contracts the non-loop edge of `x`, splicing the rotation of the far
    /// endpoint into the position of `x`. Returns a dart at the merged vertex.
    pub fn contract_edge(&mut self, x: usize) -> Result<usize> {
        let y = self.twin[x];
        if self.vertex_darts(x).contains(&y) {
            return Err(Error::WrongContractionKind("cannot contract a loop".into()));
        }
        let (p, s) = (self.prev[x], self.next[x]);
        let (p2, s2) = (self.prev[y], self.next[y]);
        if p == x || p2 == y {
            return Err(Error::Invariant("contracted edge has a pendant endpoint".into()));
        }
        self.next[p] = s2;
        self.prev[s2] = p;
        self.next[p2] = s;
        self.prev[s] = p2;
        for d in [x, y] {
            self.alive[d] = false;
            self.next[d] = d;
            self.prev[d] = d;
        }
        Ok(s)
    }

    pub fn set_vertex_label(&mut self, start: usize, label: VertexLabel) {
        for d in self.vertex_darts(start) {
            self.label[d] = label;
        }
    }

    pub fn relabel_all(&mut self, f: impl Fn(VertexLabel) -> VertexLabel) {
        for d in 0..self.slots() {
            self.label[d] = f(self.label[d]);
        }
    }

    pub fn set_boundary_count(&mut self, b: usize) {
        self.boundary_count = b;
    }

    /// Compacts live slots (in slot order) into a validated map. The second
    /// component sends each slot to its new dart index.
    pub fn to_map(&self) -> Result<(CombinatorialMap, Vec<Option<usize>>)> {
        let mut index = vec![None; self.slots()];
        let mut live = Vec::new();
        for d in self.alive_darts() {
            index[d] = Some(live.len());
            live.push(d);
        }
        let at = |d: usize| index[d].expect("live dart points to a dead slot");
        let rotation = live.iter().map(|&d| at(self.next[d])).collect();
        let pairing = live.iter().map(|&d| at(self.twin[d])).collect();
        let kinds: Vec<EdgeKind> = live.iter().map(|&d| self.kind[d]).collect();
        let labels: Vec<VertexLabel> = live.iter().map(|&d| self.label[d]).collect();
        let mut boundary_faces = Vec::with_capacity(self.boundary_count);
        for i in 1..=self.boundary_count as u32 {
            let root = VertexLabel::Boundary {
                component: i,
                position: 1,
            };
            let d = live
                .iter()
                .position(|&d| self.cap_side[d] && self.label[d] == root)
                .ok_or_else(|| Error::Invariant(format!("boundary component {i} lost its cap")))?;
            boundary_faces.push(d);
        }
        let map = CombinatorialMap::from_dart_data(rotation, pairing, &kinds, &labels, boundary_faces)?;
        Ok((map, index))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::SurfaceSignature;
    use crate::surface_map::seed_arrangement;

    #[test]
    fn chord_splits_a_face() {
        let sig = SurfaceSignature::parse("0,1,0;5").unwrap();
        let m = seed_arrangement(&sig).unwrap();
        let mut ed = MapEditor::new(&m);
        let face = ed.interior_faces().pop().unwrap();
        assert_eq!(face.len(), 5);
        ed.insert_chord(face[0], face[2]);
        let mut degs: Vec<usize> = ed.interior_faces().iter().map(|f| f.len()).collect();
        degs.sort();
        assert_eq!(degs, vec![3, 4]);
        let (m2, _) = ed.to_map().unwrap();
        assert_eq!(m2.signature_of().unwrap(), sig);
    }

    #[test]
    fn removing_the_chord_restores_the_face() {
        let sig = SurfaceSignature::parse("0,1,0;5").unwrap();
        let m = seed_arrangement(&sig).unwrap();
        let mut ed = MapEditor::new(&m);
        let face = ed.interior_faces().pop().unwrap();
        let (na, _) = ed.insert_chord(face[1], face[4]);
        ed.remove_edge(na);
        let (m2, _) = ed.to_map().unwrap();
        assert_eq!(m2, m);
    }
}
