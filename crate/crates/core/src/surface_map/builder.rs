use crate::error::{Error, Result};
use crate::signature::SurfaceSignature;

use super::{CombinatorialMap, EdgeKind, VertexLabel};

/// Assembles maps vertex by vertex. Boundary cycles are created up front;
/// diagonal germs are appended counterclockwise, after the outgoing boundary
/// dart and before the incoming one.
pub struct MapBuilder {
    labels: Vec<VertexLabel>,
    germs: Vec<Vec<usize>>,
    boundary_out: Vec<Option<usize>>,
    boundary_in: Vec<Option<usize>>,
    kinds: Vec<EdgeKind>,
    caps: Vec<usize>,
}

impl MapBuilder {
    pub fn new(sig: &SurfaceSignature) -> Self {
        let mut b = MapBuilder {
            labels: Vec::new(),
            germs: Vec::new(),
            boundary_out: Vec::new(),
            boundary_in: Vec::new(),
            kinds: Vec::new(),
            caps: Vec::new(),
        };
        for (i, &k) in sig.boundary_points.iter().enumerate() {
            let first = b.labels.len();
            for j in 1..=k {
                b.push_vertex(VertexLabel::Boundary {
                    component: i as u32 + 1,
                    position: j,
                });
            }
            for j in 0..k as usize {
                let (out, inc) = b.new_edge(EdgeKind::Boundary);
                let from = first + j;
                let to = first + (j + 1) % k as usize;
                b.boundary_out[from] = Some(out);
                b.boundary_in[to] = Some(inc);
                if j == 0 {
                    b.caps.push(out);
                }
            }
        }
        for k in 1..=sig.free_points {
            b.push_vertex(VertexLabel::Free(k));
        }
        b
    }

    fn push_vertex(&mut self, label: VertexLabel) {
        self.labels.push(label);
        self.germs.push(Vec::new());
        self.boundary_out.push(None);
        self.boundary_in.push(None);
    }

    fn new_edge(&mut self, kind: EdgeKind) -> (usize, usize) {
        let d = self.kinds.len();
        self.kinds.push(kind);
        self.kinds.push(kind);
        (d, d + 1)
    }

    pub fn boundary_vertex(&self, component: u32, position: u32) -> usize {
        self.vertex(VertexLabel::Boundary {
            component,
            position,
        })
    }

    pub fn free_vertex(&self, k: u32) -> usize {
        self.vertex(VertexLabel::Free(k))
    }

    fn vertex(&self, label: VertexLabel) -> usize {
        self.labels
            .iter()
            .position(|&l| l == label)
            .unwrap_or_else(|| panic!("no vertex labeled {label:?}"))
    }

    /// Creates a diagonal edge without placing its darts.
    pub fn new_diagonal(&mut self) -> (usize, usize) {
        self.new_edge(EdgeKind::Diagonal)
    }

    /// Appends `dart` as the next counterclockwise germ at `v`.
    pub fn push_germ(&mut self, v: usize, dart: usize) {
        self.germs[v].push(dart);
    }

    /// Adds a diagonal from `u` to `v`, appending one germ at each end.
    pub fn add_diagonal(&mut self, u: usize, v: usize) -> (usize, usize) {
        let (a, b) = self.new_diagonal();
        self.push_germ(u, a);
        self.push_germ(v, b);
        (a, b)
    }

    pub fn build(&self) -> Result<CombinatorialMap> {
        let n = self.kinds.len();
        let mut rotation = vec![usize::MAX; n];
        let mut origin = vec![VertexLabel::Free(0); n];
        for v in 0..self.labels.len() {
            let mut cycle = Vec::new();
            cycle.extend(self.boundary_out[v]);
            cycle.extend(self.germs[v].iter().copied());
            cycle.extend(self.boundary_in[v]);
            if cycle.is_empty() {
                return Err(Error::MalformedMap(format!(
                    "vertex {:?} has no edges",
                    self.labels[v]
                )));
            }
            for k in 0..cycle.len() {
                rotation[cycle[k]] = cycle[(k + 1) % cycle.len()];
                origin[cycle[k]] = self.labels[v];
            }
        }
        if rotation.contains(&usize::MAX) {
            return Err(Error::MalformedMap("a dart was never placed".into()));
        }
        let pairing = (0..n).map(|d| d ^ 1).collect();
        CombinatorialMap::from_dart_data(rotation, pairing, &self.kinds, &origin, self.caps.clone())
    }

    /// The annulus `(0,2,0;1,1)` with its single diagonal joining the two
    /// boundary points.
    pub fn annulus_one_diagonal() -> CombinatorialMap {
        let sig = SurfaceSignature::new(0, 0, vec![1, 1]).expect("valid signature");
        let mut b = MapBuilder::new(&sig);
        let (u, v) = (b.boundary_vertex(1, 1), b.boundary_vertex(2, 1));
        b.add_diagonal(u, v);
        b.build().expect("valid map")
    }
}

/// An admissible arrangement with a single complementary disk.
///
/// Everything hangs off one hub vertex: `g` interleaved loop pairs, one
/// pendant diagonal per remaining free vertex, one diagonal to the first
/// point of every other boundary component.
pub fn seed_arrangement(sig: &SurfaceSignature) -> Result<CombinatorialMap> {
    let mut b = MapBuilder::new(sig);
    let hub = if sig.boundary_count() > 0 {
        b.boundary_vertex(1, 1)
    } else {
        b.free_vertex(1)
    };
    for _ in 0..sig.genus {
        let (a_out, a_in) = b.new_diagonal();
        let (b_out, b_in) = b.new_diagonal();
        for d in [a_out, b_out, a_in, b_in] {
            b.push_germ(hub, d);
        }
    }
    let first_pendant = if sig.boundary_count() > 0 { 1 } else { 2 };
    for k in first_pendant..=sig.free_points {
        let v = b.free_vertex(k);
        b.add_diagonal(hub, v);
    }
    for i in 2..=sig.boundary_count() as u32 {
        let v = b.boundary_vertex(i, 1);
        b.add_diagonal(hub, v);
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_has_min_diagonals_and_one_interior_face() {
        for text in [
            "0,1,0;4", "0,2,0;1,1", "0,2,0;2,1", "0,0,3", "0,0,4", "1,1,0;1", "1,0,3",
            "2,0,1", "0,1,2;3", "1,2,1;1,2", "0,3,0;1,1,1",
        ] {
            let sig = SurfaceSignature::parse(text).unwrap();
            let m = seed_arrangement(&sig).unwrap();
            assert_eq!(m.signature_of().unwrap(), sig, "{text}");
            assert_eq!(m.diagonal_count() as i64, sig.min_diagonals(), "{text}");
            assert_eq!(m.interior_faces().len(), 1, "{text}");
        }
    }
}
