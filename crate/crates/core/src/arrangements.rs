//! Admissible diagonal arrangements and their exhaustive enumeration up to
//! weak equivalence.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signature::SurfaceSignature;
use crate::surface_map::{
    canonical_form, seed_arrangement, CombinatorialMap, EdgeKind, MapEditor, VertexLabel,
};

/// Why a map fails to be an admissible arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inadmissibility {
    Empty,
    UncoveredFreeVertex(u32),
    /// Some complementary region is not a disk.
    NonDiskComplement(String),
    /// A diagonal bounds a monogon.
    Contractible { face: Vec<usize> },
    /// Two diagonals bound a bigon.
    HomotopicDiagonals { face: Vec<usize> },
    /// A diagonal and a boundary edge bound a bigon.
    ParallelToBoundary { face: Vec<usize> },
    DegenerateFace { face: Vec<usize> },
}

impl fmt::Display for Inadmissibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inadmissibility::Empty => write!(f, "no diagonals"),
            Inadmissibility::UncoveredFreeVertex(k) => {
                write!(f, "free vertex {k} is not an endpoint of a diagonal")
            }
            Inadmissibility::NonDiskComplement(why) => write!(f, "complement is not disks: {why}"),
            Inadmissibility::Contractible { face } => {
                write!(f, "contractible diagonal bounding face {face:?}")
            }
            Inadmissibility::HomotopicDiagonals { face } => {
                write!(f, "two homotopic diagonals bounding face {face:?}")
            }
            Inadmissibility::ParallelToBoundary { face } => {
                write!(f, "diagonal homotopic to a boundary edge, face {face:?}")
            }
            Inadmissibility::DegenerateFace { face } => write!(f, "degenerate face {face:?}"),
        }
    }
}

pub type Admissibility = std::result::Result<(), Inadmissibility>;

fn mismatch(expected: &SurfaceSignature, found: impl fmt::Display) -> Error {
    Error::SignatureMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

/// Checks the four admissibility conditions of `map` as an arrangement on `sig`.
///
/// The outer error is reserved for maps that describe a different marked
/// surface; failing admissibility is reported in the inner result.
pub fn is_admissible(map: &CombinatorialMap, sig: &SurfaceSignature) -> Result<Admissibility> {
    if map.boundary_count() != sig.boundary_count() {
        return Err(mismatch(sig, format!("{} boundary components", map.boundary_count())));
    }
    let mut boundary_seen = vec![0u32; sig.boundary_count()];
    let mut free_seen = vec![false; sig.free_points as usize];
    for &label in map.vertex_labels() {
        match label {
            VertexLabel::Free(k) if k >= 1 && k <= sig.free_points => {
                free_seen[k as usize - 1] = true
            }
            VertexLabel::Boundary {
                component,
                position,
            } if component >= 1
                && (component as usize) <= sig.boundary_count()
                && position >= 1
                && position <= sig.boundary_points[component as usize - 1] =>
            {
                boundary_seen[component as usize - 1] += 1
            }
            other => return Err(mismatch(sig, format!("vertex label {other:?}"))),
        }
    }
    if boundary_seen != sig.boundary_points {
        return Err(mismatch(sig, format!("boundary point counts {boundary_seen:?}")));
    }
    if map.diagonal_count() == 0 {
        return Ok(Err(Inadmissibility::Empty));
    }
    if let Some(k) = free_seen.iter().position(|&s| !s) {
        return Ok(Err(Inadmissibility::UncoveredFreeVertex(k as u32 + 1)));
    }
    if !map.is_connected() {
        return Ok(Err(Inadmissibility::NonDiskComplement("disconnected".into())));
    }
    let found = map.signature_of()?;
    if found.genus > sig.genus {
        return Err(mismatch(sig, &found));
    }
    if found.genus < sig.genus {
        return Ok(Err(Inadmissibility::NonDiskComplement(format!(
            "arrangement carries genus {} of {}",
            found.genus, sig.genus
        ))));
    }
    for face in map.interior_faces() {
        let kinds: Vec<EdgeKind> = face.iter().map(|&d| map.dart_kind(d)).collect();
        match kinds.as_slice() {
            [EdgeKind::Diagonal] => return Ok(Err(Inadmissibility::Contractible { face })),
            [EdgeKind::Diagonal, EdgeKind::Diagonal]
                if map.edge_of(face[0]) != map.edge_of(face[1]) =>
            {
                return Ok(Err(Inadmissibility::HomotopicDiagonals { face }))
            }
            [EdgeKind::Diagonal, EdgeKind::Boundary] | [EdgeKind::Boundary, EdgeKind::Diagonal] => {
                return Ok(Err(Inadmissibility::ParallelToBoundary { face }))
            }
            k if k.len() <= 2 => return Ok(Err(Inadmissibility::DegenerateFace { face })),
            _ => {}
        }
    }
    Ok(Ok(()))
}

/// A weak-equivalence class of admissible arrangements, stored as its
/// canonical map. Diagonal `i` of the arrangement is edge `diagonals[i]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Arrangement {
    pub map: CombinatorialMap,
    #[serde(with = "hex_bytes")]
    pub code: Vec<u8>,
    pub diagonals: Vec<usize>,
}

pub(crate) mod hex_bytes {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bytes: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&hex::encode(bytes))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let text = String::deserialize(d)?;
        hex::decode(text).map_err(serde::de::Error::custom)
    }
}

impl PartialEq for Arrangement {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
    }
}

impl Eq for Arrangement {}

impl Arrangement {
    /// Canonicalizes an admissible map. Fails on inadmissible input and on
    /// arrangements with a nontrivial automorphism.
    pub fn new(map: &CombinatorialMap, sig: &SurfaceSignature) -> Result<Self> {
        if let Err(why) = is_admissible(map, sig)? {
            return Err(Error::Invariant(format!("inadmissible arrangement: {why}")));
        }
        Self::from_admissible(map, sig)
    }

    pub(crate) fn from_admissible(map: &CombinatorialMap, sig: &SurfaceSignature) -> Result<Self> {
        let canon = canonical_form(map);
        if canon.automorphisms != 1 {
            return Err(Error::Unstable {
                signature: sig.to_string(),
                count: canon.automorphisms,
            });
        }
        let diagonals = canon.map.diagonal_edges();
        Ok(Arrangement {
            map: canon.map,
            code: canon.code,
            diagonals,
        })
    }

    /// Number of diagonals.
    pub fn m(&self) -> usize {
        self.diagonals.len()
    }

    pub fn code_hex(&self) -> String {
        hex::encode(&self.code)
    }

    /// Index of edge `e` among the diagonals.
    pub fn diagonal_index(&self, e: usize) -> Option<usize> {
        self.diagonals.binary_search(&e).ok()
    }

    /// Restricts to the diagonals whose bit is set in `mask`.
    pub fn restrict(&self, mask: u64, sig: &SurfaceSignature) -> Result<Restriction> {
        let mut ed = MapEditor::new(&self.map);
        for (i, &e) in self.diagonals.iter().enumerate() {
            if mask & (1 << i) == 0 {
                ed.remove_edge(self.map.edge_darts(e)[0]);
            }
        }
        // a free vertex that lost all its germs disappears from the map
        for k in 1..=sig.free_points {
            if !ed.alive_darts().any(|d| ed.label(d) == VertexLabel::Free(k)) {
                return Ok(Restriction::Degenerate(Inadmissibility::UncoveredFreeVertex(k)));
            }
        }
        if mask == 0 {
            return Ok(Restriction::Degenerate(Inadmissibility::Empty));
        }
        let (sub, index) = ed.to_map()?;
        if let Err(why) = is_admissible(&sub, sig)? {
            return Ok(Restriction::Degenerate(why));
        }
        let arr = Arrangement::from_admissible(&sub, sig)?;
        let canon = canonical_form(&sub);
        let kept = self
            .diagonals
            .iter()
            .map(|&e| {
                let d = self.map.edge_darts(e)[0];
                index[d].map(|nd| {
                    let cd = canon.perm[nd];
                    arr.diagonal_index(arr.map.edge_of(cd))
                        .expect("kept diagonal stays a diagonal")
                })
            })
            .collect();
        Ok(Restriction::Admissible { arrangement: arr, kept })
    }
}

/// Outcome of restricting an arrangement to a subset of its diagonals.
#[derive(Clone, Debug)]
pub enum Restriction {
    /// `kept[i]` is the index in the sub-arrangement of diagonal `i`.
    Admissible {
        arrangement: Arrangement,
        kept: Vec<Option<usize>>,
    },
    Degenerate(Inadmissibility),
}

/// Result of removing one diagonal.
#[derive(Clone, Debug)]
pub enum Deletion {
    Map(CombinatorialMap),
    /// The removal left a free vertex isolated or disconnected the map, so
    /// no map on the same marked surface exists.
    Degenerate(Inadmissibility),
}

/// Removes diagonal edge `e`, merging its two sides. The result need not be
/// admissible.
pub fn delete_diagonal(arr: &Arrangement, e: usize) -> Result<Deletion> {
    if e >= arr.map.edge_count() || arr.map.edge_kind(e) != EdgeKind::Diagonal {
        return Err(Error::NotADiagonal(e));
    }
    let mut ed = MapEditor::new(&arr.map);
    let [x, y] = arr.map.edge_darts(e);
    ed.remove_edge(x);
    for d in [x, y] {
        let label = arr.map.dart_label(d);
        if let VertexLabel::Free(k) = label {
            if !ed.alive_darts().any(|x| ed.label(x) == label) {
                return Ok(Deletion::Degenerate(Inadmissibility::UncoveredFreeVertex(k)));
            }
        }
    }
    let (map, _) = ed.to_map()?;
    if !map.is_connected() {
        return Ok(Deletion::Degenerate(Inadmissibility::NonDiskComplement(
            "disconnected".into(),
        )));
    }
    Ok(Deletion::Map(map))
}

/// Explicit resource limits for enumeration; exceeding either is an error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_cells: usize,
    pub max_seconds: f64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_cells: 5_000_000,
            max_seconds: 3600.0,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BudgetClock {
    budget: Budget,
    start: Instant,
}

impl BudgetClock {
    pub fn start(budget: Budget) -> Self {
        BudgetClock {
            budget,
            start: Instant::now(),
        }
    }

    pub fn check(&self, cells: usize, what: &str) -> Result<()> {
        if cells > self.budget.max_cells {
            return Err(Error::Budget(format!(
                "{what}: more than {} cells",
                self.budget.max_cells
            )));
        }
        let elapsed = self.start.elapsed().as_secs_f64();
        if elapsed > self.budget.max_seconds {
            return Err(Error::Budget(format!(
                "{what}: {elapsed:.1}s exceeds {}s",
                self.budget.max_seconds
            )));
        }
        Ok(())
    }
}

/// Adds chords until every interior face is a triangle.
pub fn complete_to_triangulation(map: &CombinatorialMap) -> Result<CombinatorialMap> {
    let mut ed = MapEditor::new(map);
    while let Some(face) = ed.interior_faces().into_iter().find(|f| f.len() > 3) {
        ed.insert_chord(face[0], face[2]);
    }
    Ok(ed.to_map()?.0)
}

/// Flips diagonal `e` of a triangulation. `None` when both sides of `e` lie
/// on the same triangle (the inner edge of a self-folded triangle).
pub fn flip(tri: &CombinatorialMap, e: usize) -> Result<Option<CombinatorialMap>> {
    let [x, y] = tri.edge_darts(e);
    if tri.face_walk(x).contains(&y) {
        return Ok(None);
    }
    let mut ed = MapEditor::new(tri);
    let (s, t) = (tri.rotation(x), tri.rotation(y));
    ed.remove_edge(x);
    let quad = ed.face_walk(s);
    if quad.len() != 4 || quad[2] != t {
        return Err(Error::Invariant(format!(
            "flip of edge {e} did not produce a quadrilateral"
        )));
    }
    ed.insert_chord(quad[1], quad[3]);
    Ok(Some(ed.to_map()?.0))
}

fn is_triangulation(map: &CombinatorialMap) -> bool {
    map.interior_faces().iter().all(|f| f.len() == 3)
}

/// All triangulations up to weak equivalence, by breadth-first search over
/// flips from one seed triangulation.
pub fn enumerate_triangulations(
    sig: &SurfaceSignature,
    budget: Budget,
) -> Result<Vec<Arrangement>> {
    let clock = BudgetClock::start(budget);
    if sig.max_diagonals() <= 0 {
        return Ok(Vec::new());
    }
    let seed = complete_to_triangulation(&seed_arrangement(sig)?)?;
    let first = Arrangement::new(&seed, sig)?;
    if first.m() as i64 != sig.max_diagonals() {
        return Err(Error::Invariant(format!(
            "triangulation of {sig} has {} diagonals, expected {}",
            first.m(),
            sig.max_diagonals()
        )));
    }
    let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
    index.insert(first.code.clone(), 0);
    let mut found = vec![first];
    let mut scan = 0;
    while scan < found.len() {
        clock.check(found.len(), "enumerating triangulations")?;
        let tri = found[scan].clone();
        scan += 1;
        for &e in &tri.diagonals {
            if let Some(next) = flip(&tri.map, e)? {
                let arr = Arrangement::new(&next, sig)?;
                if !index.contains_key(&arr.code) {
                    index.insert(arr.code.clone(), found.len());
                    found.push(arr);
                }
            }
        }
    }
    found.sort_by(|a, b| a.code.cmp(&b.code));
    debug_assert!(found.iter().all(|t| is_triangulation(&t.map)));
    Ok(found)
}

/// Every admissible arrangement of a signature, grouped by diagonal count.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellInventory {
    pub signature: SurfaceSignature,
    /// Sorted by decreasing `m`, then by code.
    pub cells: Vec<Arrangement>,
    #[serde(skip)]
    index: HashMap<Vec<u8>, usize>,
}

impl CellInventory {
    pub fn new(signature: SurfaceSignature, mut cells: Vec<Arrangement>) -> Self {
        cells.sort_by(|a, b| b.m().cmp(&a.m()).then_with(|| a.code.cmp(&b.code)));
        let index = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.code.clone(), i))
            .collect();
        CellInventory {
            signature,
            cells,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn find(&self, code: &[u8]) -> Option<usize> {
        self.index.get(code).copied()
    }

    /// Cell counts by dimension `Max - m`, trailing zeros trimmed.
    pub fn f_vector(&self) -> Vec<usize> {
        let max = self.signature.max_diagonals();
        let dim = self.signature.dimension().max(0) as usize;
        let mut f = vec![0; dim + 1];
        for c in &self.cells {
            let k = (max - c.m() as i64) as usize;
            if k >= f.len() {
                f.resize(k + 1, 0);
            }
            f[k] += 1;
        }
        while f.len() > 1 && f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    /// True for the disc `(0,1,0;k)`, whose empty arrangement would be the
    /// top cell of the associahedron but is not an arrangement.
    pub fn has_empty_top_cell(&self) -> bool {
        self.signature.min_diagonals() == 0
    }

    pub fn rebuild_index(&mut self) {
        self.index = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.code.clone(), i))
            .collect();
    }
}

/// Downward closure of the triangulations under admissible diagonal deletion.
pub fn enumerate_cells(sig: &SurfaceSignature, budget: Budget) -> Result<CellInventory> {
    let clock = BudgetClock::start(budget);
    let mut level = enumerate_triangulations(sig, budget)?;
    let mut all = Vec::new();
    while !level.is_empty() {
        let mut below: HashMap<Vec<u8>, Arrangement> = HashMap::new();
        for arr in &level {
            clock.check(all.len() + level.len() + below.len(), "enumerating cells")?;
            for &e in &arr.diagonals {
                if let Deletion::Map(map) = delete_diagonal(arr, e)? {
                    if is_admissible(&map, sig)?.is_ok() {
                        let sub = Arrangement::from_admissible(&map, sig)?;
                        below.entry(sub.code.clone()).or_insert(sub);
                    }
                }
            }
        }
        all.append(&mut level);
        let mut next: Vec<Arrangement> = below.into_values().collect();
        next.sort_by(|a, b| a.code.cmp(&b.code));
        level = next;
    }
    clock.check(all.len(), "enumerating cells")?;
    Ok(CellInventory::new(sig.clone(), all))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_map::MapBuilder;

    fn sig(s: &str) -> SurfaceSignature {
        SurfaceSignature::parse(s).unwrap()
    }

    #[test]
    fn annulus_single_diagonal_is_admissible() {
        let m = MapBuilder::annulus_one_diagonal();
        assert_eq!(is_admissible(&m, &sig("0,2,0;1,1")).unwrap(), Ok(()));
    }

    #[test]
    fn contractible_loop_is_rejected() {
        let s = sig("0,2,0;1,1");
        let mut b = MapBuilder::new(&s);
        let (u, v) = (b.boundary_vertex(1, 1), b.boundary_vertex(2, 1));
        b.add_diagonal(u, v);
        // a loop at u whose two germs are adjacent bounds an empty disc
        let (a, c) = b.new_diagonal();
        b.push_germ(u, a);
        b.push_germ(u, c);
        let m = b.build().unwrap();
        let verdict = is_admissible(&m, &s).unwrap();
        assert!(matches!(verdict, Err(Inadmissibility::Contractible { .. })), "{verdict:?}");
    }

    #[test]
    fn parallel_chords_are_rejected() {
        let s = sig("0,1,0;4");
        let mut b = MapBuilder::new(&s);
        let (v1, v3) = (b.boundary_vertex(1, 1), b.boundary_vertex(1, 3));
        let (a0, a1) = b.new_diagonal();
        let (c0, c1) = b.new_diagonal();
        b.push_germ(v1, a0);
        b.push_germ(v1, c0);
        b.push_germ(v3, c1);
        b.push_germ(v3, a1);
        let m = b.build().unwrap();
        let verdict = is_admissible(&m, &s).unwrap();
        assert!(matches!(verdict, Err(Inadmissibility::HomotopicDiagonals { .. })), "{verdict:?}");
    }

    #[test]
    fn chord_parallel_to_boundary_is_rejected() {
        let s = sig("0,1,0;4");
        let mut b = MapBuilder::new(&s);
        let (v1, v2) = (b.boundary_vertex(1, 1), b.boundary_vertex(1, 2));
        b.add_diagonal(v1, v2);
        let m = b.build().unwrap();
        let verdict = is_admissible(&m, &s).unwrap();
        assert!(matches!(verdict, Err(Inadmissibility::ParallelToBoundary { .. })), "{verdict:?}");
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let m = MapBuilder::annulus_one_diagonal();
        assert!(matches!(
            is_admissible(&m, &sig("0,2,0;2,1")),
            Err(Error::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn deleting_the_only_diagonal_degenerates() {
        let s = sig("0,2,0;1,1");
        let arr = Arrangement::new(&MapBuilder::annulus_one_diagonal(), &s).unwrap();
        let e = arr.diagonals[0];
        assert!(matches!(delete_diagonal(&arr, e).unwrap(), Deletion::Degenerate(_)));
        let boundary = (0..arr.map.edge_count()).find(|&e| arr.map.edge_kind(e) == EdgeKind::Boundary);
        assert!(matches!(delete_diagonal(&arr, boundary.unwrap()), Err(Error::NotADiagonal(_))));
    }

    #[test]
    fn face_bookkeeping_under_deletion() {
        let s = sig("0,2,0;2,1");
        let inv = enumerate_cells(&s, Budget::default()).unwrap();
        for arr in &inv.cells {
            let f0 = arr.map.faces().len();
            for &e in &arr.diagonals {
                let [x, y] = arr.map.edge_darts(e);
                let two_sides = !arr.map.face_walk(x).contains(&y);
                if let Deletion::Map(m) = delete_diagonal(arr, e).unwrap() {
                    let g = m.signature_of().unwrap().genus;
                    if two_sides {
                        assert_eq!(m.faces().len(), f0 - 1);
                    } else {
                        // one side splits in two and the genus would drop
                        assert_eq!(m.faces().len(), f0 + 1);
                        assert!(g < s.genus || s.genus == 0);
                    }
                }
            }
        }
    }

    #[test]
    fn polygon_triangulation_counts() {
        let counts: Vec<usize> = (4..=7)
            .map(|k| enumerate_triangulations(&sig(&format!("0,1,0;{k}")), Budget::default()).unwrap().len())
            .collect();
        assert_eq!(counts, vec![2, 5, 14, 42]);
    }

    #[test]
    fn annulus_cells() {
        let inv = enumerate_cells(&sig("0,2,0;1,1"), Budget::default()).unwrap();
        assert_eq!(inv.f_vector(), vec![1, 1]);
        let inv = enumerate_cells(&sig("0,2,0;2,1"), Budget::default()).unwrap();
        assert_eq!(inv.f_vector(), vec![4, 6, 2]);
    }

    #[test]
    fn pentagon_cells_without_the_empty_top() {
        let inv = enumerate_cells(&sig("0,1,0;5"), Budget::default()).unwrap();
        assert_eq!(inv.f_vector(), vec![5, 5]);
        assert_eq!(inv.len(), 10);
        assert!(inv.has_empty_top_cell());
    }

    #[test]
    fn unstable_signature_is_reported() {
        let r = enumerate_triangulations(&sig("1,0,1"), Budget::default());
        assert!(matches!(r, Err(Error::Unstable { .. })), "{r:?}");
    }

    #[test]
    fn budget_is_enforced() {
        let tight = Budget { max_cells: 3, max_seconds: 100.0 };
        let r = enumerate_cells(&sig("0,1,0;6"), tight);
        assert!(matches!(r, Err(Error::Budget(_))));
    }
}
