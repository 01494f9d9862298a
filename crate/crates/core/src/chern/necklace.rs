//! Necklaces, signed selection counts and fattening.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A cyclic word over colors `1..=colors`, stored in its least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Necklace {
    beads: Vec<u32>,
    colors: u32,
}

/// Signed count of one-bead-per-color selections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCount {
    pub even: u64,
    pub odd: u64,
}

impl ParityCount {
    pub fn p(&self) -> i64 {
        self.even as i64 - self.odd as i64
    }
}

/// Sign of a sequence of distinct colors read as a permutation.
pub(crate) fn sign(seq: &[u32]) -> i64 {
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Necklace {
    pub fn new(beads: Vec<u32>, colors: u32) -> Result<Self> {
        if let Some(&b) = beads.iter().find(|&&b| b == 0 || b > colors) {
            return Err(Error::BadInput(format!("bead color {b} outside 1..={colors}")));
        }
        let beads = least_rotation(&beads);
        Ok(Necklace { beads, colors })
    }

    pub fn beads(&self) -> &[u32] {
        &self.beads
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn len(&self) -> usize {
        self.beads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beads.is_empty()
    }

    /// `counts()[i - 1]` is the number of beads of color `i`.
    pub fn counts(&self) -> Vec<u64> {
        let mut c = vec![0; self.colors as usize];
        for &b in &self.beads {
            c[b as usize - 1] += 1;
        }
        c
    }

    /// Every selection of one bead per color, as sorted bead positions.
    pub fn selections(&self) -> Vec<Vec<usize>> {
        let by_color: Vec<Vec<usize>> = (1..=self.colors)
            .map(|c| (0..self.len()).filter(|&i| self.beads[i] == c).collect())
            .collect();
        let mut out = vec![Vec::new()];
        for positions in &by_color {
            let mut next = Vec::with_capacity(out.len() * positions.len());
            for sel in &out {
                for &p in positions {
                    let mut s = sel.clone();
                    s.push(p);
                    next.push(s);
                }
            }
            out = next;
        }
        for s in out.iter_mut() {
            s.sort_unstable();
        }
        out
    }

    /// Sign of the colors at the given (sorted) positions, read cyclically.
    pub fn selection_sign(&self, positions: &[usize]) -> i64 {
        let seq: Vec<u32> = positions.iter().map(|&i| self.beads[i]).collect();
        sign(&seq)
    }

    /// `N_even - N_odd` over selections of one bead of each color. With an
    /// odd number of colors the sign of a cyclic reading does not depend on
    /// where the circle is cut.
    pub fn parity_count(&self) -> Result<ParityCount> {
        if self.colors.is_multiple_of(2) {
            return Err(Error::EvenColorCount(self.colors as usize));
        }
        let mut pc = ParityCount { even: 0, odd: 0 };
        for sel in self.selections() {
            if self.selection_sign(&sel) > 0 {
                pc.even += 1;
            } else {
                pc.odd += 1;
            }
        }
        Ok(pc)
    }

    /// Replaces bead `i` by the cluster `k+1, k, ..., i+1, i, i, i+1, ..., k+1`.
    pub fn fatten(&self) -> Necklace {
        let (beads, _) = self.fatten_with_clusters();
        Necklace {
            beads: least_rotation(&beads),
            colors: self.colors,
        }
    }

    /// The fattened word (unrotated) and the source bead of every new bead.
    pub fn fatten_with_clusters(&self) -> (Vec<u32>, Vec<usize>) {
        let top = self.colors;
        let mut beads = Vec::new();
        let mut owner = Vec::new();
        for (pos, &i) in self.beads.iter().enumerate() {
            let cluster: Vec<u32> = (i..=top).rev().chain(i..=top).collect();
            owner.extend(std::iter::repeat_n(pos, cluster.len()));
            beads.extend(cluster);
        }
        (beads, owner)
    }

    /// Every word of the given length, up to rotation.
    pub fn all(len: usize, colors: u32) -> Vec<Necklace> {
        let mut seen = std::collections::BTreeSet::new();
        let mut word = vec![1u32; len];
        loop {
            seen.insert(least_rotation(&word));
            let Some(i) = word.iter().rposition(|&b| b < colors) else { break };
            word[i] += 1;
            for b in word[i + 1..].iter_mut() {
                *b = 1;
            }
        }
        seen.into_iter().map(|beads| Necklace { beads, colors }).collect()
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.beads.iter().map(u32::to_string).collect();
        write!(f, "({})", words.join(","))
    }
}

fn least_rotation(w: &[u32]) -> Vec<u32> {
    (0..w.len().max(1))
        .map(|r| {
            let mut v = w.to_vec();
            v.rotate_left(r.min(w.len()));
            v
        })
        .min()
        .unwrap_or_default()
}

/// Totals of the two cancellations in the signed count of a fattened
/// necklace, summed within each cancelling class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancellationReport {
    pub p: i64,
    pub p_fattened: i64,
    /// Classes of selections taking two or more beads from one cluster.
    pub shared_cluster_classes: usize,
    /// Classes of selections from distinct clusters whose letters repeat.
    pub repeated_letter_classes: usize,
    /// Classes of the first kind whose signed sum is nonzero.
    pub shared_cluster_failures: usize,
    pub repeated_letter_failures: usize,
    /// Signed sum over selections from clusters of distinct letters.
    pub surviving: i64,
}

impl CancellationReport {
    pub fn holds(&self) -> bool {
        self.shared_cluster_failures == 0
            && self.repeated_letter_failures == 0
            && self.surviving == self.p_fattened
            && self.p_fattened == 8 * self.p
    }
}

/// Sorts the selections of `F(ν)` into the two cancelling families and
/// checks that each class sums to zero.
///
/// A selection with a crowded cluster is classed by the first such cluster,
/// the colors it takes there and the beads it takes elsewhere; a selection
/// spread over distinct clusters is classed by the set of clusters.
pub fn cancellation_report(nu: &Necklace) -> Result<CancellationReport> {
    let p = nu.parity_count()?.p();
    let (beads, owner) = nu.fatten_with_clusters();
    let fat = Necklace {
        beads,
        colors: nu.colors,
    };
    let mut crowded: HashMap<(usize, Vec<u32>, Vec<usize>), i64> = HashMap::new();
    let mut spread: HashMap<Vec<usize>, i64> = HashMap::new();
    let mut total = 0;
    for sel in fat.selections() {
        let s = fat.selection_sign(&sel);
        total += s;
        let mut per_cluster: HashMap<usize, usize> = HashMap::new();
        for &b in &sel {
            *per_cluster.entry(owner[b]).or_insert(0) += 1;
        }
        let first_crowded = sel.iter().map(|&b| owner[b]).find(|c| per_cluster[c] >= 2);
        match first_crowded {
            Some(c) => {
                let mut inside: Vec<u32> = sel.iter().filter(|&&b| owner[b] == c).map(|&b| fat.beads[b]).collect();
                inside.sort_unstable();
                let outside: Vec<usize> = sel.iter().copied().filter(|&b| owner[b] != c).collect();
                *crowded.entry((c, inside, outside)).or_insert(0) += s;
            }
            None => {
                let clusters: Vec<usize> = sel.iter().map(|&b| owner[b]).collect();
                *spread.entry(clusters).or_insert(0) += s;
            }
        }
    }
    let mut surviving = 0;
    let mut repeated = 0;
    let mut repeated_fail = 0;
    for (clusters, sum) in &spread {
        let mut letters: Vec<u32> = clusters.iter().map(|&c| nu.beads[c]).collect();
        letters.sort_unstable();
        letters.dedup();
        if letters.len() == clusters.len() {
            surviving += sum;
        } else {
            repeated += 1;
            if *sum != 0 {
                repeated_fail += 1;
            }
        }
    }
    Ok(CancellationReport {
        p,
        p_fattened: total,
        shared_cluster_classes: crowded.len(),
        repeated_letter_classes: repeated,
        shared_cluster_failures: crowded.values().filter(|&&s| s != 0).count(),
        repeated_letter_failures: repeated_fail,
        surviving,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nk(w: &[u32]) -> Necklace {
        Necklace::new(w.to_vec(), 3).unwrap()
    }

    /// Independent count: cut the circle at every position and demand that
    /// all readings agree.
    fn p_by_cuts(w: &[u32], colors: u32) -> i64 {
        let n = w.len();
        let mut total = 0;
        let positions: Vec<Vec<usize>> = (1..=colors).map(|c| (0..n).filter(|&i| w[i] == c).collect()).collect();
        let mut idx = vec![0usize; colors as usize];
        if positions.iter().any(Vec::is_empty) {
            return 0;
        }
        loop {
            let chosen: Vec<usize> = (0..colors as usize).map(|c| positions[c][idx[c]]).collect();
            let mut signs = (0..n).map(|cut| {
                let mut seq: Vec<(usize, u32)> = chosen.iter().map(|&i| ((i + n - cut) % n, w[i])).collect();
                seq.sort_unstable();
                sign(&seq.iter().map(|x| x.1).collect::<Vec<_>>())
            });
            let first = signs.next().unwrap();
            assert!(signs.all(|s| s == first));
            total += first;
            let mut c = 0;
            loop {
                if c == colors as usize {
                    return total;
                }
                idx[c] += 1;
                if idx[c] < positions[c].len() {
                    break;
                }
                idx[c] = 0;
                c += 1;
            }
        }
    }

    #[test]
    fn small_parity_counts() {
        assert_eq!(nk(&[1, 2, 3]).parity_count().unwrap().p(), 1);
        assert_eq!(nk(&[1, 3, 2]).parity_count().unwrap().p(), -1);
        assert_eq!(nk(&[1, 2, 3, 1]).parity_count().unwrap().p(), 2);
        assert_eq!(nk(&[1, 1, 2]).parity_count().unwrap().p(), 0);
        let even = Necklace::new(vec![1, 2], 2).unwrap();
        assert!(matches!(even.parity_count(), Err(Error::EvenColorCount(2))));
    }

    #[test]
    fn fattening_substitutes_clusters() {
        let (w, _) = nk(&[1, 2, 3]).fatten_with_clusters();
        assert_eq!(w, vec![3, 2, 1, 1, 2, 3, 3, 2, 2, 3, 3, 3]);
        assert_eq!(nk(&[1, 2, 3]).fatten().parity_count().unwrap().p(), 8);
    }

    #[test]
    fn rotation_is_invisible() {
        assert_eq!(nk(&[2, 3, 1]), nk(&[1, 2, 3]));
        assert_ne!(nk(&[1, 3, 2]), nk(&[1, 2, 3]));
    }

    #[test]
    fn necklace_enumeration_counts() {
        // binary necklaces of length 6: 14
        assert_eq!(Necklace::all(6, 2).len(), 14);
        assert_eq!(Necklace::all(4, 3).len(), 24);
    }

    #[test]
    fn fattening_identity_up_to_length_six() {
        for len in 1..=6 {
            for nu in Necklace::all(len, 3) {
                let r = cancellation_report(&nu).unwrap();
                assert!(r.holds(), "{nu}: {r:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn parity_matches_every_cut(w in proptest::collection::vec(1u32..=3, 1..9)) {
            let nu = Necklace::new(w.clone(), 3).unwrap();
            prop_assert_eq!(nu.parity_count().unwrap().p(), p_by_cuts(&w, 3));
        }

        #[test]
        fn five_color_parity_matches_every_cut(w in proptest::collection::vec(1u32..=5, 5..9)) {
            let nu = Necklace::new(w.clone(), 5).unwrap();
            prop_assert_eq!(nu.parity_count().unwrap().p(), p_by_cuts(&w, 5));
        }

        #[test]
        fn swapping_two_colors_flips_the_sign(w in proptest::collection::vec(1u32..=3, 1..9)) {
            let swapped: Vec<u32> = w.iter().map(|&b| match b { 2 => 3, 3 => 2, x => x }).collect();
            let a = Necklace::new(w, 3).unwrap().parity_count().unwrap().p();
            let b = Necklace::new(swapped, 3).unwrap().parity_count().unwrap().p();
            prop_assert_eq!(a, -b);
        }
    }
}
