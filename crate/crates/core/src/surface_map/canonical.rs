//! Canonical codes for labeled maps.
//!
//! An orientation- and label-preserving isomorphism of connected maps is
//! fixed by the image of one dart, so trying every dart at a vertex whose
//! label is unique and keeping the lexicographically least breadth-first
//! code gives a complete invariant.

use super::{CombinatorialMap, EdgeKind, VertexLabel};

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// The map renumbered in canonical breadth-first order.
    pub map: CombinatorialMap,
    pub code: Vec<u8>,
    /// `perm[old_dart] = canonical_dart`.
    pub perm: Vec<usize>,
    pub automorphisms: usize,
}

fn root_vertex(map: &CombinatorialMap) -> Option<usize> {
    let wanted = if map.boundary_count() > 0 {
        VertexLabel::Boundary {
            component: 1,
            position: 1,
        }
    } else {
        VertexLabel::Free(1)
    };
    map.vertex_by_label(wanted)
        .or_else(|| (0..map.vertex_count()).min_by_key(|&v| map.vertex_label(v)))
}

fn bfs_code(map: &CombinatorialMap, root: usize) -> (Vec<u32>, Vec<usize>) {
    let n = map.dart_count();
    let mut num = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut scan = 0;
    let mut next_unseen = 0;
    num[root] = 0;
    order.push(root);
    while order.len() < n || scan < order.len() {
        if scan == order.len() {
            // disconnected input: continue deterministically
            while num[next_unseen] != usize::MAX {
                next_unseen += 1;
            }
            num[next_unseen] = order.len();
            order.push(next_unseen);
        }
        let d = order[scan];
        scan += 1;
        for x in [map.rotation(d), map.pairing(d)] {
            if num[x] == usize::MAX {
                num[x] = order.len();
                order.push(x);
            }
        }
    }
    let mut code = Vec::with_capacity(4 + 7 * n);
    code.extend([
        n as u32,
        map.vertex_count() as u32,
        map.edge_count() as u32,
        map.boundary_count() as u32,
    ]);
    for &d in &order {
        code.push(num[map.rotation(d)] as u32);
        code.push(num[map.pairing(d)] as u32);
        code.push(match map.dart_kind(d) {
            EdgeKind::Diagonal => 0,
            EdgeKind::Boundary => 1,
        });
        code.push(map.is_cap_dart(d) as u32);
        code.extend(map.dart_label(d).code_words());
    }
    (code, order)
}

fn to_bytes(words: &[u32]) -> Vec<u8> {
    words.iter().flat_map(|w| w.to_le_bytes()).collect()
}

fn best(map: &CombinatorialMap) -> (Vec<u32>, Vec<usize>, usize) {
    let roots = match root_vertex(map) {
        Some(v) => map.darts_at(v),
        None => return (vec![0, 0, 0, 0], Vec::new(), 1),
    };
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    let mut ties = 0;
    for r in roots {
        let (code, order) = bfs_code(map, r);
        match &best {
            Some((b, _)) if code > *b => {}
            Some((b, _)) if code == *b => ties += 1,
            _ => {
                best = Some((code, order));
                ties = 1;
            }
        }
    }
    let (code, order) = best.expect("root vertex has darts");
    (code, order, ties)
}

/// Label-respecting canonical code; equal codes iff the maps are isomorphic.
/// Words are serialized little-endian so the bytes are platform independent.
pub fn canonical_code(map: &CombinatorialMap) -> Vec<u8> {
    to_bytes(&best(map).0)
}

/// Number of label- and kind-preserving automorphisms.
pub fn automorphism_count(map: &CombinatorialMap) -> usize {
    best(map).2
}

pub fn canonical_form(map: &CombinatorialMap) -> CanonicalForm {
    let (code, order, automorphisms) = best(map);
    let mut perm = vec![0; map.dart_count()];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    let canon = map.relabel(&perm).expect("bfs order is a permutation");
    CanonicalForm {
        map: canon,
        code: to_bytes(&code),
        perm,
        automorphisms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::SurfaceSignature;
    use crate::surface_map::{seed_arrangement, MapBuilder};

    #[test]
    fn canonical_form_is_idempotent() {
        let sig = SurfaceSignature::parse("1,2,1;1,2").unwrap();
        let m = seed_arrangement(&sig).unwrap();
        let c1 = canonical_form(&m);
        let c2 = canonical_form(&c1.map);
        assert_eq!(c1.code, c2.code);
        assert_eq!(c1.map, c2.map);
        assert!(c2.perm.iter().enumerate().all(|(i, &p)| i == p));
    }

    #[test]
    fn bordered_maps_are_rigid() {
        let m = MapBuilder::annulus_one_diagonal();
        assert_eq!(automorphism_count(&m), 1);
    }

    #[test]
    fn one_vertex_torus_has_a_rotational_symmetry() {
        // three loops a b c a' b' c' at a single free vertex: the hexagonal torus
        let sig = SurfaceSignature::parse("1,0,1").unwrap();
        let mut b = MapBuilder::new(&sig);
        let v = b.free_vertex(1);
        let (a0, a1) = b.new_diagonal();
        let (b0, b1) = b.new_diagonal();
        let (c0, c1) = b.new_diagonal();
        for d in [a0, b0, c0, a1, b1, c1] {
            b.push_germ(v, d);
        }
        let m = b.build().unwrap();
        assert_eq!(m.signature_of().unwrap(), sig);
        // rotating the germs by one step preserves the pairing
        assert_eq!(automorphism_count(&m), 6);
    }
}
