//! Preimages of interior points: combinatorial segments and circles.

use std::collections::HashMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{ContractionKind, ForgetfulMap, SimplexId};
use crate::complexes::{is_valid_metric, MetricArrangement};
use crate::error::{Error, Result};
use crate::surface_map::VertexLabel;
use crate::SurfaceSignature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberShape {
    Segment,
    Circle,
}

/// The preimage of an interior point of a base simplex, as a path or cycle
/// of source simplices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Fiber {
    pub base: SimplexId,
    /// Source simplices of the base dimension, in walk order.
    pub vertices: Vec<usize>,
    /// Source simplices one dimension up; `edges[i]` joins `vertices[i]`
    /// and the next vertex (cyclically for circles).
    pub edges: Vec<usize>,
    pub shape: FiberShape,
}

impl Fiber {
    pub fn reverse(&mut self) {
        match self.shape {
            FiberShape::Segment => {
                self.vertices.reverse();
                self.edges.reverse();
            }
            FiberShape::Circle => {
                // keep vertices[0] in front
                self.vertices[1..].reverse();
                self.edges.reverse();
            }
        }
    }

    /// Rotates a circle so that it starts at position `i`.
    pub fn rotate_to(&mut self, i: usize) {
        debug_assert_eq!(self.shape, FiberShape::Circle);
        self.vertices.rotate_left(i);
        self.edges.rotate_left(i);
    }
}

/// Comparison of an observed circle fiber with the predicted grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridReport {
    pub base: SimplexId,
    pub base_code: String,
    /// Diagonal of each germ at the new free vertex, counterclockwise.
    pub germs: Vec<usize>,
    /// 1-based index of the set holding each germ's diagonal.
    pub set_indices: Vec<usize>,
    /// `2 (r - j_i) + 1` per germ.
    pub predicted: Vec<usize>,
    /// Interior vertex counts of the observed arcs, aligned with `germs`
    /// when the check passes.
    pub observed: Vec<usize>,
    pub bold: usize,
    pub vertices: usize,
    pub pass: bool,
}

fn same_cycle<T: PartialEq + Clone>(a: &[T], b: &[T]) -> Option<(usize, bool)> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    if n == 0 {
        return Some((0, false));
    }
    for rev in [false, true] {
        for shift in 0..n {
            let ok = (0..n).all(|i| {
                let j = if rev { (shift + n - i) % n } else { (shift + i) % n };
                a[i] == b[j]
            });
            if ok {
                return Some((shift, rev));
            }
        }
    }
    None
}

impl ForgetfulMap {
    /// Fibers over every target simplex, indexed like `target.simplices`.
    pub fn fibers(&self) -> Result<Vec<Vec<Fiber>>> {
        let mut verts: Vec<Vec<Vec<usize>>> =
            self.target.simplices.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        let mut edges: Vec<Vec<Vec<(usize, [usize; 2])>>> =
            self.target.simplices.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        for (k, level) in self.images.iter().enumerate() {
            for (s, &(bk, bs)) in level.iter().enumerate() {
                match k - bk {
                    0 => verts[bk][bs].push(s),
                    1 => {
                        let ends: Vec<usize> = self.source.faces[k][s]
                            .iter()
                            .copied()
                            .filter(|&f| self.image((k - 1, f)) == (bk, bs))
                            .collect();
                        let [a, b] = ends[..] else {
                            return Err(Error::Invariant(format!(
                                "fiber edge {:?} has {} ends over {:?}",
                                self.source.simplices[k][s],
                                ends.len(),
                                self.target.simplices[bk][bs]
                            )));
                        };
                        edges[bk][bs].push((s, [a, b]));
                    }
                    _ => {
                        return Err(Error::Invariant(format!(
                            "{:?} maps onto {:?}, dropping {} dimensions",
                            self.source.simplices[k][s],
                            self.target.simplices[bk][bs],
                            k - bk
                        )))
                    }
                }
            }
        }
        let want = match self.kind {
            ContractionKind::Edge(_) => FiberShape::Segment,
            ContractionKind::Boundary(_) => FiberShape::Circle,
        };
        let mut out = Vec::with_capacity(verts.len());
        for (k, level) in verts.into_iter().enumerate() {
            let mut row = Vec::with_capacity(level.len());
            for (s, vs) in level.into_iter().enumerate() {
                let fiber = assemble((k, s), vs, &edges[k][s])?;
                if fiber.shape != want {
                    return Err(Error::Invariant(format!(
                        "fiber over {:?} is a {:?}",
                        self.target.simplices[k][s], fiber.shape
                    )));
                }
                row.push(fiber);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// `None` for a source cell that maps diagonal-for-diagonal onto its
    /// target (a bold point), else the single duplicated target diagonal.
    pub fn duplicated_diagonal(&self, cell: usize) -> Result<Option<usize>> {
        let (t, image) = &self.cells[cell];
        let mut count = vec![0usize; self.target.inventory.cells[*t].m()];
        for i in image {
            match i {
                Some(i) => count[*i] += 1,
                None => return Err(Error::Invariant("fiber cell loses a diagonal".into())),
            }
        }
        let dups: Vec<usize> = (0..count.len()).filter(|&i| count[i] > 1).collect();
        match (dups.as_slice(), count.iter().max()) {
            ([], _) => Ok(None),
            ([d], Some(2)) => Ok(Some(*d)),
            _ => Err(Error::Invariant(format!("fiber cell duplicates {dups:?}"))),
        }
    }

    fn new_vertex(&self) -> Result<VertexLabel> {
        match self.kind {
            ContractionKind::Boundary(_) => Ok(VertexLabel::Free(self.target.signature().free_points)),
            ContractionKind::Edge(_) => Err(Error::WrongContractionKind(
                "grids exist only for boundary contraction".into(),
            )),
        }
    }

    /// Checks a circle fiber against the grid predicted from the germs at
    /// the new free vertex. Rotates the fiber to start at a bold vertex.
    pub fn grid_report(&self, fiber: &mut Fiber) -> Result<GridReport> {
        let v_label = self.new_vertex()?;
        let (k, s) = fiber.base;
        let sigma = &self.target.simplices[k][s];
        let arr = &self.target.inventory.cells[sigma.cell];
        let v = arr
            .map
            .vertex_by_label(v_label)
            .ok_or_else(|| Error::Invariant("new vertex missing in the base".into()))?;
        let germs: Vec<usize> = arr
            .map
            .darts_at(v)
            .into_iter()
            .map(|d| arr.diagonal_index(arr.map.edge_of(d)).expect("free vertices carry diagonals"))
            .collect();
        let r = sigma.parts.len();
        let set_indices: Vec<usize> = germs
            .iter()
            .map(|&g| sigma.parts.iter().position(|&p| p & (1 << g) != 0).expect("partition") + 1)
            .collect();
        let predicted: Vec<usize> = set_indices.iter().map(|&j| 2 * (r - j) + 1).collect();

        let mut dup = Vec::with_capacity(fiber.vertices.len());
        for &tau in &fiber.vertices {
            dup.push(self.duplicated_diagonal(self.source.simplices[k][tau].cell)?);
        }
        let bold = dup.iter().filter(|d| d.is_none()).count();
        let mut report = GridReport {
            base: fiber.base,
            base_code: arr.code_hex(),
            germs: germs.clone(),
            set_indices,
            predicted: predicted.clone(),
            observed: Vec::new(),
            bold,
            vertices: fiber.vertices.len(),
            pass: false,
        };
        let Some(start) = dup.iter().position(Option::is_none) else {
            return Ok(report);
        };
        fiber.rotate_to(start);
        dup.rotate_left(start);
        // arc i runs from bold point i to the next one
        let mut uniform = true;
        let mut observed_arcs: Vec<(Option<usize>, usize)> = Vec::new();
        let mut current = (None, 0);
        for d in dup.iter().skip(1) {
            match d {
                None => {
                    observed_arcs.push(current);
                    current = (None, 0);
                }
                Some(t) => {
                    if current.0.is_some_and(|c| c != *t) {
                        uniform = false;
                    }
                    current = (Some(*t), current.1 + 1);
                }
            }
        }
        observed_arcs.push(current);
        let expected: Vec<(Option<usize>, usize)> =
            germs.iter().zip(&predicted).map(|(&g, &c)| (Some(g), c)).collect();
        if let Some((shift, rev)) = same_cycle(&expected, &observed_arcs).filter(|_| uniform && bold == germs.len()) {
            let n = observed_arcs.len();
            report.observed = (0..n)
                .map(|i| {
                    let j = if rev { (shift + n - i) % n } else { (shift + i) % n };
                    observed_arcs[j].1
                })
                .collect();
            report.pass = true;
        } else {
            report.observed = observed_arcs.iter().map(|a| a.1).collect();
        }
        Ok(report)
    }

    /// Bold vertices of the fiber over a coarsened face are the faces of the
    /// bold vertices over the simplex, in the same cyclic order.
    pub fn check_fiber_continuity(&self, fibers: &[Vec<Fiber>]) -> Result<()> {
        self.new_vertex()?;
        let bold_cycle = |fiber: &Fiber| -> Result<Vec<usize>> {
            let k = fiber.base.0;
            let mut out = Vec::new();
            for &tau in &fiber.vertices {
                if self.duplicated_diagonal(self.source.simplices[k][tau].cell)?.is_none() {
                    out.push(tau);
                }
            }
            Ok(out)
        };
        for k in 1..fibers.len() {
            for (s, fiber) in fibers[k].iter().enumerate() {
                let bold = bold_cycle(fiber)?;
                for t in 0..k {
                    let face = self.target.faces[k][s][t];
                    let below = bold_cycle(&fibers[k - 1][face])?;
                    let mapped: Vec<usize> = bold.iter().map(|&tau| self.source.faces[k][tau][t]).collect();
                    if same_cycle(&mapped, &below).is_none() {
                        return Err(Error::Invariant(format!(
                            "bold points over {:?} do not restrict to face {t}",
                            self.target.simplices[k][s]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn assemble(base: SimplexId, vs: Vec<usize>, es: &[(usize, [usize; 2])]) -> Result<Fiber> {
    let bad = |why: &str| Err(Error::Invariant(format!("fiber over {base:?}: {why}")));
    if vs.is_empty() {
        return bad("empty");
    }
    let local: HashMap<usize, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vs.len()];
    for (e, (_, [a, b])) in es.iter().enumerate() {
        let (Some(&a), Some(&b)) = (local.get(a), local.get(b)) else {
            return bad("edge end outside the fiber");
        };
        if a == b {
            return bad("loop edge");
        }
        adj[a].push((e, b));
        adj[b].push((e, a));
    }
    if adj.iter().any(|a| a.len() > 2) {
        return bad("branch point");
    }
    let shape = if es.len() + 1 == vs.len() {
        FiberShape::Segment
    } else if es.len() == vs.len() && adj.iter().all(|a| a.len() == 2) {
        FiberShape::Circle
    } else {
        return bad("neither a segment nor a circle");
    };
    let start = match shape {
        FiberShape::Segment => (0..vs.len())
            .filter(|&i| adj[i].len() <= 1)
            .min_by_key(|&i| vs[i])
            .expect("a path has an end"),
        FiberShape::Circle => (0..vs.len()).min_by_key(|&i| vs[i]).expect("nonempty"),
    };
    let mut order = vec![start];
    let mut edge_order = Vec::new();
    let mut prev_edge = usize::MAX;
    let mut at = start;
    while let Some(&(e, next)) = adj[at].iter().find(|&&(e, _)| e != prev_edge) {
        if shape == FiberShape::Circle && next == start {
            edge_order.push(e);
            break;
        }
        edge_order.push(e);
        order.push(next);
        prev_edge = e;
        at = next;
        if order.len() > vs.len() {
            return bad("walk does not close");
        }
    }
    if order.len() != vs.len() {
        return bad("disconnected");
    }
    Ok(Fiber {
        base,
        vertices: order.into_iter().map(|i| vs[i]).collect(),
        edges: edge_order.into_iter().map(|e| es[e].0).collect(),
        shape,
    })
}

/// The metric circle over a metric arrangement: the lengths of the germs'
/// diagonals around `vertex`, counterclockwise. A diagonal with both ends at
/// `vertex` contributes two arcs.
pub fn metric_fiber(
    ma: &MetricArrangement,
    sig: &SurfaceSignature,
    vertex: VertexLabel,
) -> Result<Vec<BigRational>> {
    if !is_valid_metric(ma, sig)? {
        return Err(Error::InvalidMetric("lengths do not form a valid metric".into()));
    }
    let arr = &ma.arrangement;
    let v = arr
        .map
        .vertex_by_label(vertex)
        .ok_or_else(|| Error::BadInput(format!("no vertex {vertex:?}")))?;
    Ok(arr
        .map
        .darts_at(v)
        .into_iter()
        .filter_map(|d| arr.diagonal_index(arr.map.edge_of(d)))
        .map(|i| ma.lengths[i].clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::super::tests::bd;
    use super::*;

    fn boundary_map(s: &str, t: &str) -> ForgetfulMap {
        ForgetfulMap::build(bd(s), bd(t), ContractionKind::Boundary(1)).unwrap()
    }

    #[test]
    fn cycles_match_up_to_rotation_and_reflection() {
        assert_eq!(same_cycle(&[1, 2, 3], &[2, 3, 1]), Some((2, false)));
        assert_eq!(same_cycle(&[1, 2, 3], &[3, 2, 1]).map(|x| x.1), Some(true));
        assert_eq!(same_cycle(&[1, 1, 2, 3], &[1, 2, 1, 3]), None);
    }

    #[test]
    fn annulus_over_a_point_is_the_whole_circle() {
        let f = boundary_map("0,2,0;1,1", "0,1,1;1");
        let mut fibers = f.fibers().unwrap();
        assert_eq!(fibers.len(), 1);
        let fiber = &mut fibers[0][0];
        assert_eq!(fiber.shape, FiberShape::Circle);
        assert_eq!(fiber.vertices.len(), 2);
        let report = f.grid_report(fiber).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.predicted, vec![1]);
    }

    #[test]
    fn grids_and_hexagon() {
        let f = boundary_map("0,2,0;1,2", "0,1,1;2");
        let mut fibers = f.fibers().unwrap();
        let mut hexagons = 0;
        for level in fibers.iter_mut() {
            for fiber in level.iter_mut() {
                let report = f.grid_report(fiber).unwrap();
                assert!(report.pass, "{report:?}");
                if report.set_indices == [1, 2] || report.set_indices == [2, 1] {
                    assert_eq!(report.vertices, 6);
                    hexagons += 1;
                }
            }
        }
        assert!(hexagons > 0);
        f.check_fiber_continuity(&fibers).unwrap();
        assert_eq!(f.source.euler_characteristic(), 0);
    }

    #[test]
    fn edge_contraction_fibers_are_segments() {
        let f = ForgetfulMap::build(bd("0,2,0;2,1"), bd("0,2,0;1,1"), ContractionKind::Edge(1)).unwrap();
        let fibers = f.fibers().unwrap();
        assert!(fibers.iter().flatten().all(|x| x.shape == FiberShape::Segment));
    }

    #[test]
    fn metric_circles_list_germ_lengths() {
        use crate::arrangements::{enumerate_cells, Budget};
        use num_bigint::BigInt;
        let sig = SurfaceSignature::parse("0,0,3").unwrap();
        let inv = enumerate_cells(&sig, Budget::default()).unwrap();
        let mut loops = 0;
        for arr in &inv.cells {
            let m = arr.m() as i64;
            let lengths = vec![BigRational::new(BigInt::from(1), BigInt::from(m)); arr.m()];
            let ma = MetricArrangement::new(arr.clone(), lengths).unwrap();
            let v = arr.map.vertex_by_label(VertexLabel::Free(3)).unwrap();
            let arcs = metric_fiber(&ma, &sig, VertexLabel::Free(3)).unwrap();
            assert_eq!(arcs.len(), arr.map.darts_at(v).len());
            if arr.map.darts_at(v).iter().any(|&d| arr.map.vertex_of(arr.map.pairing(d)) == v) {
                loops += 1;
            }
        }
        assert!(loops > 0);
    }

    #[test]
    fn collapsing_a_germ_drops_its_arc() {
        use crate::arrangements::{enumerate_cells, Budget, Restriction};
        use num_bigint::BigInt;
        let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        let sig = SurfaceSignature::parse("0,1,1;2").unwrap();
        let inv = enumerate_cells(&sig, Budget::default()).unwrap();
        let v = VertexLabel::Free(1);
        for arr in inv.cells.iter().filter(|a| a.m() == 2) {
            let ma = MetricArrangement::new(arr.clone(), vec![q(1, 3), q(2, 3)]).unwrap();
            let Ok(arcs) = metric_fiber(&ma, &sig, v) else { continue };
            // shrinking diagonal 0 to nothing leaves diagonal 1 alone
            let Restriction::Admissible { arrangement, .. } = arr.restrict(0b10, &sig).unwrap() else { continue };
            let rest = MetricArrangement::new(arrangement, vec![q(1, 1)]).unwrap();
            let after = metric_fiber(&rest, &sig, v).unwrap();
            let kept = arcs.iter().filter(|l| **l == q(2, 3)).count();
            assert_eq!(after.len(), kept);
        }
        let bad = MetricArrangement::new(inv.cells[0].clone(), vec![q(1, 5); inv.cells[0].m()]).unwrap();
        assert!(matches!(metric_fiber(&bad, &sig, v), Err(Error::InvalidMetric(_))));
    }
}
