//! The fiberwise discrete Morse matching collapsing an edge contraction onto
//! the subcomplex `K`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{ContractionKind, Fiber, ForgetfulMap, SimplexId};
use crate::complexes::BdSimplex;
use crate::error::{Error, Result};
use crate::surface_map::{EdgeKind, VertexLabel};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorseMatching {
    /// `(facet, coface)` pairs.
    pub pairs: Vec<(SimplexId, SimplexId)>,
    pub critical: Vec<SimplexId>,
}

impl ForgetfulMap {
    /// The endpoint of the contracted edge that carries no diagonal in `K`.
    fn k_pivot(&self, i: u32, at_last: bool) -> VertexLabel {
        let k = self.source.signature().boundary_points[i as usize - 1];
        VertexLabel::Boundary {
            component: i,
            position: if at_last { k } else { 1 },
        }
    }

    /// Membership in `K`: the pivot vertex has no diagonals, and the triangle
    /// cutting it off has its diagonal in the first set.
    fn in_k_with(&self, s: &BdSimplex, pivot: VertexLabel) -> bool {
        let map = &self.source.inventory.cells[s.cell].map;
        let arr = &self.source.inventory.cells[s.cell];
        let Some(w) = map.vertex_by_label(pivot) else { return false };
        let darts = map.darts_at(w);
        if darts.iter().any(|&d| map.dart_kind(d) == EdgeKind::Diagonal) {
            return false;
        }
        let Some(&cap) = darts.iter().find(|&&d| map.is_cap_dart(d)) else { return false };
        let face = map.face_walk(map.rotation(cap));
        if face.len() != 3 {
            return false;
        }
        face.iter()
            .filter(|&&d| map.dart_kind(d) == EdgeKind::Diagonal)
            .filter_map(|&d| arr.diagonal_index(map.edge_of(d)))
            .any(|i| s.parts[0] & (1 << i) != 0)
    }

    pub fn in_k(&self, s: &BdSimplex) -> Result<bool> {
        match self.kind {
            ContractionKind::Edge(i) => Ok(self.in_k_with(s, self.k_pivot(i, K_PIVOT_AT_LAST))),
            ContractionKind::Boundary(_) => Err(Error::WrongContractionKind(
                "the retract exists only for edge contraction".into(),
            )),
        }
    }

    /// Pairs each fiber segment from its far end toward its `K` end, then
    /// checks acyclicity and that `K` maps isomorphically onto the target.
    pub fn morse_matching(&self, fibers: &mut [Vec<Fiber>]) -> Result<MorseMatching> {
        let mut pairs = Vec::new();
        let mut critical = Vec::new();
        for level in fibers.iter_mut() {
            for fiber in level.iter_mut() {
                let k = fiber.base.0;
                let mut ends = Vec::new();
                for (pos, &tau) in fiber.vertices.iter().enumerate() {
                    if self.in_k(&self.source.simplices[k][tau])? {
                        ends.push(pos);
                    }
                }
                let last = fiber.vertices.len() - 1;
                match ends[..] {
                    [p] if p == last => {}
                    [0] => fiber.reverse(),
                    _ => {
                        return Err(Error::Invariant(format!(
                            "fiber over {:?} meets K at positions {ends:?} of 0..={last}",
                            self.target.simplices[fiber.base.0][fiber.base.1]
                        )))
                    }
                }
                for (i, &e) in fiber.edges.iter().enumerate() {
                    pairs.push(((k, fiber.vertices[i]), (k + 1, e)));
                }
                critical.push((k, fiber.vertices[last]));
            }
        }
        let matching = MorseMatching { pairs, critical };
        self.check_acyclic(&matching)?;
        self.check_k_isomorphism(&matching)?;
        Ok(matching)
    }

    fn check_acyclic(&self, matching: &MorseMatching) -> Result<()> {
        let sizes: Vec<usize> = self.source.simplices.iter().map(Vec::len).collect();
        let offset: Vec<usize> = sizes
            .iter()
            .scan(0, |acc, &n| {
                let o = *acc;
                *acc += n;
                Some(o)
            })
            .collect();
        let total: usize = sizes.iter().sum();
        let node = |(k, s): SimplexId| offset[k] + s;
        let mut up = vec![usize::MAX; total];
        for &(f, t) in &matching.pairs {
            up[node(f)] = node(t);
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
        for k in 1..sizes.len() {
            for s in 0..sizes[k] {
                let t = node((k, s));
                for &f in &self.source.faces[k][s] {
                    let f = node((k - 1, f));
                    if up[f] == t {
                        adj[f].push(t);
                    } else {
                        adj[t].push(f);
                    }
                }
            }
        }
        // Kahn's algorithm; leftovers contain a cycle
        let mut indeg = vec![0usize; total];
        for a in &adj {
            for &b in a {
                indeg[b] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..total).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = stack.pop() {
            removed += 1;
            for &w in &adj[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        if removed == total {
            return Ok(());
        }
        let live: HashSet<usize> = (0..total).filter(|&v| indeg[v] > 0).collect();
        let mut v = *live.iter().min().expect("cycle nodes");
        let mut seen = Vec::new();
        while !seen.contains(&v) {
            seen.push(v);
            v = *adj[v].iter().find(|w| live.contains(w)).expect("cycle continues");
        }
        let start = seen.iter().position(|&x| x == v).expect("closed");
        let id = |n: usize| {
            let k = offset.iter().rposition(|&o| o <= n).expect("offset");
            (k, n - offset[k])
        };
        let witness: Vec<SimplexId> = seen[start..].iter().map(|&n| id(n)).collect();
        Err(Error::Invariant(format!("modified Hasse diagram has a cycle through {witness:?}")))
    }

    fn check_k_isomorphism(&self, matching: &MorseMatching) -> Result<()> {
        let mut k_cells = Vec::new();
        for (k, level) in self.source.simplices.iter().enumerate() {
            for (s, simplex) in level.iter().enumerate() {
                if self.in_k(simplex)? {
                    k_cells.push((k, s));
                }
            }
        }
        let mut critical = matching.critical.clone();
        critical.sort_unstable();
        if critical != k_cells {
            return Err(Error::Invariant("critical cells differ from K".into()));
        }
        let mut hit: HashSet<SimplexId> = HashSet::new();
        for &(k, s) in &k_cells {
            let (bk, bs) = self.image((k, s));
            if bk != k || !hit.insert((bk, bs)) {
                return Err(Error::Invariant(format!(
                    "K cell {:?} does not map injectively",
                    self.source.simplices[k][s]
                )));
            }
            if k > 0 {
                let mut down: Vec<usize> = self.source.faces[k][s].iter().map(|&f| self.image((k - 1, f)).1).collect();
                let mut want = self.target.faces[k][bs].clone();
                down.sort_unstable();
                want.sort_unstable();
                if down != want {
                    return Err(Error::Invariant("K does not commute with faces".into()));
                }
            }
        }
        let target_total: usize = self.target.f_vector().iter().sum();
        if hit.len() != target_total {
            return Err(Error::Invariant("K misses target simplices".into()));
        }
        Ok(())
    }
}

/// `K` is defined at `(i, n_i)`; the mirror choice `(i, 1)` works as well.
const K_PIVOT_AT_LAST: bool = true;
