//! Exact integer chain complexes: Smith normal form, Betti numbers, torsion
//! and integral cycle bases.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column-major sparse integer matrix; entries of each column sorted by row.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds a matrix from (row, col, value) triples, summing repeats.
    pub fn from_triples(rows: usize, cols: usize, triples: &[(usize, usize, i64)]) -> Self {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); cols];
        for &(r, c, v) in triples {
            *acc[c].entry(r).or_insert(0) += v;
        }
        let columns = acc
            .into_iter()
            .map(|col| col.into_iter().filter(|&(_, v)| v != 0).collect())
            .collect();
        SparseMatrix {
            rows,
            cols,
            columns,
        }
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// `self * other`, exact.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut columns = Vec::with_capacity(other.cols);
        for col in &other.columns {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(k, b) in col {
                for &(r, a) in &self.columns[k] {
                    let e = acc.entry(r).or_insert(0);
                    *e = a
                        .checked_mul(b)
                        .and_then(|p| e.checked_add(p))
                        .ok_or(Error::Overflow)?;
                }
            }
            columns.push(acc.into_iter().filter(|&(_, v)| v != 0).collect());
        }
        Ok(SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
}

/// Nonzero invariant factors of the Smith normal form, in divisibility order.
///
/// Unit pivots are eliminated sparsely first; whatever remains is reduced
/// densely.
pub fn smith_invariants(m: &SparseMatrix) -> Result<Vec<i128>> {
    let mut rows: Vec<HashMap<usize, i128>> = vec![HashMap::new(); m.rows];
    let mut cols: Vec<HashSet<usize>> = vec![HashSet::new(); m.cols];
    for (c, col) in m.columns.iter().enumerate() {
        for &(r, v) in col {
            rows[r].insert(c, v as i128);
            cols[c].insert(r);
        }
    }
    let mut units = 0usize;
    loop {
        let mut progress = false;
        for j in 0..m.cols {
            if cols[j].is_empty() {
                continue;
            }
            let pivot_row = cols[j]
                .iter()
                .copied()
                .filter(|&r| rows[r][&j].abs() == 1)
                .min_by_key(|&r| (rows[r].len(), r));
            let Some(r) = pivot_row else { continue };
            let piv = rows[r][&j];
            let pivot_entries: Vec<(usize, i128)> = rows[r].iter().map(|(&c, &v)| (c, v)).collect();
            let others: Vec<usize> = cols[j].iter().copied().filter(|&s| s != r).collect();
            for s in others {
                let factor = rows[s][&j] * piv;
                for &(c, v) in &pivot_entries {
                    let cur = rows[s].get(&c).copied().unwrap_or(0);
                    let new = factor
                        .checked_mul(v)
                        .and_then(|p| cur.checked_sub(p))
                        .ok_or(Error::Overflow)?;
                    if new == 0 {
                        rows[s].remove(&c);
                        cols[c].remove(&s);
                    } else {
                        rows[s].insert(c, new);
                        cols[c].insert(s);
                    }
                }
            }
            for &(c, _) in &pivot_entries {
                cols[c].remove(&r);
            }
            rows[r].clear();
            units += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let live_rows: Vec<usize> = (0..m.rows).filter(|&r| !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..m.cols).filter(|&c| !cols[c].is_empty()).collect();
    let mut dense = vec![vec![0i128; live_cols.len()]; live_rows.len()];
    let col_pos: HashMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    for (i, &r) in live_rows.iter().enumerate() {
        for (&c, &v) in &rows[r] {
            dense[i][col_pos[&c]] = v;
        }
    }
    let mut invariants = vec![1; units];
    invariants.extend(dense_smith(dense)?);
    invariants.sort_unstable();
    Ok(invariants)
}

fn dense_smith(mut a: Vec<Vec<i128>>) -> Result<Vec<i128>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] = a[i][j]
                            .checked_sub(q.checked_mul(a[t][j]).ok_or(Error::Overflow)?)
                            .ok_or(Error::Overflow)?;
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for i in t..rows {
                        a[i][j] = a[i][j]
                            .checked_sub(q.checked_mul(a[i][t]).ok_or(Error::Overflow)?)
                            .ok_or(Error::Overflow)?;
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // pivot must divide the whole trailing block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            a[t][j] = a[t][j].checked_add(a[i][j]).ok_or(Error::Overflow)?;
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/column t to the pivot
            let mut bi = t;
            let mut bj = t;
            for i in t..rows {
                if a[i][t] != 0 && a[i][t].abs() < a[bi][bj].abs() {
                    (bi, bj) = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[bi][bj].abs() {
                    (bi, bj) = (t, j);
                }
            }
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    Ok(out)
}

/// A Z-basis of the kernel of `m`, as sparse integer vectors.
///
/// Columns are reduced by lowest nonzero row with unimodular two-column
/// operations (extended gcd), tracking the accumulated transformation.
pub fn integral_kernel_basis(m: &SparseMatrix) -> Result<Vec<Vec<(usize, i128)>>> {
    let mut cols: Vec<BTreeMap<usize, i128>> = m
        .columns
        .iter()
        .map(|c| c.iter().map(|&(r, v)| (r, v as i128)).collect())
        .collect();
    let mut trans: Vec<BTreeMap<usize, i128>> =
        (0..m.cols).map(|j| BTreeMap::from([(j, 1)])).collect();
    let mut pivot_of: HashMap<usize, usize> = HashMap::new();

    fn combine(
        a: &BTreeMap<usize, i128>,
        x: i128,
        b: &BTreeMap<usize, i128>,
        y: i128,
    ) -> Result<BTreeMap<usize, i128>> {
        let mut out = BTreeMap::new();
        for (&k, &v) in a {
            out.insert(k, x.checked_mul(v).ok_or(Error::Overflow)?);
        }
        for (&k, &v) in b {
            let e = out.entry(k).or_insert(0);
            *e = y
                .checked_mul(v)
                .and_then(|p| e.checked_add(p))
                .ok_or(Error::Overflow)?;
        }
        out.retain(|_, v| *v != 0);
        Ok(out)
    }

    for j in 0..m.cols {
        while let Some((&low, &bval)) = cols[j].iter().next_back() {
            let Some(&k) = pivot_of.get(&low) else {
                pivot_of.insert(low, j);
                break;
            };
            let aval = cols[k][&low];
            if bval % aval == 0 {
                let q = bval / aval;
                cols[j] = combine(&cols[j], 1, &cols[k], -q)?;
                trans[j] = combine(&trans[j], 1, &trans[k], -q)?;
            } else {
                let (g, s, t) = ext_gcd(aval, bval);
                let (ag, bg) = (aval / g, bval / g);
                let new_k = combine(&cols[k], s, &cols[j], t)?;
                let new_j = combine(&cols[j], ag, &cols[k], -bg)?;
                let tk = combine(&trans[k], s, &trans[j], t)?;
                let tj = combine(&trans[j], ag, &trans[k], -bg)?;
                cols[k] = new_k;
                cols[j] = new_j;
                trans[k] = tk;
                trans[j] = tj;
            }
        }
    }
    Ok((0..m.cols)
        .filter(|&j| cols[j].is_empty())
        .map(|j| trans[j].iter().map(|(&k, &v)| (k, v)).collect())
        .collect())
}

/// `(g, s, t)` with `g = s*a + t*b = gcd(a, b) > 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Integer chain complex; `boundaries[k]` maps `k`-chains to `(k-1)`-chains
/// (with `boundaries[0]` the zero map to nothing).
#[derive(Clone, Debug, Default)]
pub struct ChainComplex {
    pub boundaries: Vec<SparseMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homology {
    pub betti: Vec<usize>,
    /// Invariant factors greater than one, per degree.
    pub torsion: Vec<Vec<u64>>,
}

impl Homology {
    /// Betti numbers without trailing zeros, for comparing complexes of
    /// different dimension.
    pub fn trimmed_betti(&self) -> Vec<usize> {
        let mut b = self.betti.clone();
        while b.len() > 1 && b.last() == Some(&0) {
            b.pop();
        }
        b
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

impl ChainComplex {
    /// Number of `k`-cells.
    pub fn size(&self, k: usize) -> usize {
        self.boundaries.get(k).map_or(0, |m| m.cols)
    }

    pub fn top_dimension(&self) -> Option<usize> {
        self.boundaries.len().checked_sub(1)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.boundaries.len()).map(|k| self.size(k)).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn check_boundary_squared(&self) -> Result<()> {
        for k in 2..self.boundaries.len() {
            let prod = self.boundaries[k - 1].mul(&self.boundaries[k])?;
            if !prod.is_zero() {
                return Err(Error::Invariant(format!("boundary squared is nonzero in degree {k}")));
            }
        }
        Ok(())
    }

    pub fn homology(&self) -> Result<Homology> {
        self.check_boundary_squared()?;
        let top = self.boundaries.len();
        let mut invariants = Vec::with_capacity(top + 1);
        for k in 0..top {
            invariants.push(if k == 0 { Vec::new() } else { smith_invariants(&self.boundaries[k])? });
        }
        invariants.push(Vec::new());
        let mut betti = Vec::with_capacity(top);
        let mut torsion = Vec::with_capacity(top);
        for k in 0..top {
            let rank_out = invariants[k].len();
            let rank_in = invariants[k + 1].len();
            betti.push(self.size(k) - rank_out - rank_in);
            torsion.push(
                invariants[k + 1]
                    .iter()
                    .filter(|&&d| d > 1)
                    .map(|&d| d as u64)
                    .collect(),
            );
        }
        Ok(Homology { betti, torsion })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Boundary of the hollow triangle (a circle): three vertices, three edges.
    fn circle() -> ChainComplex {
        let d1 = SparseMatrix::from_triples(
            3,
            3,
            &[(1, 0, 1), (0, 0, -1), (2, 1, 1), (1, 1, -1), (2, 2, 1), (0, 2, -1)],
        );
        ChainComplex {
            boundaries: vec![SparseMatrix::zero(0, 3), d1],
        }
    }

    #[test]
    fn circle_homology() {
        let h = circle().homology().unwrap();
        assert_eq!(h.betti, vec![1, 1]);
        assert_eq!(h.euler_characteristic(), 0);
    }

    #[test]
    fn smith_form_detects_torsion() {
        // [[2, 4], [6, 8]] has invariant factors 2, 4
        let m = SparseMatrix::from_triples(2, 2, &[(0, 0, 2), (0, 1, 4), (1, 0, 6), (1, 1, 8)]);
        assert_eq!(smith_invariants(&m).unwrap(), vec![2, 4]);
        let m = SparseMatrix::from_triples(1, 1, &[(0, 0, 2)]);
        assert_eq!(smith_invariants(&m).unwrap(), vec![2]);
    }

    #[test]
    fn projective_plane_has_z2_torsion() {
        // one vertex, one edge a, one 2-cell with boundary 2a
        let d1 = SparseMatrix::zero(1, 1);
        let d2 = SparseMatrix::from_triples(1, 1, &[(0, 0, 2)]);
        let cc = ChainComplex {
            boundaries: vec![SparseMatrix::zero(0, 1), d1, d2],
        };
        let h = cc.homology().unwrap();
        assert_eq!(h.betti, vec![1, 0, 0]);
        assert_eq!(h.torsion, vec![vec![], vec![2], vec![]]);
    }

    #[test]
    fn kernel_basis_of_circle_boundary() {
        let c = circle();
        let basis = integral_kernel_basis(&c.boundaries[1]).unwrap();
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        assert_eq!(v.len(), 3);
        assert!(v.iter().all(|&(_, x)| x.abs() == 1));
    }

    #[test]
    fn kernel_basis_is_unimodular_with_gcd_steps() {
        // kernel of [2 3] over Z is spanned by (3, -2)
        let m = SparseMatrix::from_triples(1, 2, &[(0, 0, 2), (0, 1, 3)]);
        let basis = integral_kernel_basis(&m).unwrap();
        assert_eq!(basis.len(), 1);
        let mut v = [0i128; 2];
        for &(k, x) in &basis[0] {
            v[k] = x;
        }
        assert_eq!(2 * v[0] + 3 * v[1], 0);
        assert_eq!(v[0].abs(), 3);
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(2, 3), (-4, 6), (12, -18), (7, 1)] {
            let (g, s, t) = ext_gcd(a, b);
            assert_eq!(g, s * a + t * b);
            assert!(g > 0);
        }
    }
}
