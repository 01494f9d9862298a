//! Metric arrangements: positive lengths on the diagonals summing to one.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arrangements::{Arrangement, Restriction};
use crate::error::{Error, Result};
use crate::SurfaceSignature;

#[derive(Clone, Debug)]
pub struct MetricArrangement {
    pub arrangement: Arrangement,
    /// `lengths[i]` is the length of diagonal `i`.
    pub lengths: Vec<BigRational>,
}

impl MetricArrangement {
    pub fn new(arrangement: Arrangement, lengths: Vec<BigRational>) -> Result<Self> {
        if lengths.len() != arrangement.m() {
            return Err(Error::InvalidMetric(format!(
                "{} lengths for {} diagonals",
                lengths.len(),
                arrangement.m()
            )));
        }
        if let Some(l) = lengths.iter().find(|l| !l.is_positive()) {
            return Err(Error::InvalidMetric(format!("nonpositive length {l}")));
        }
        Ok(MetricArrangement { arrangement, lengths })
    }

    /// Bitmask of the diagonals of maximal length.
    pub fn argmax(&self) -> u64 {
        let max = self.lengths.iter().max().expect("nonempty arrangement");
        mask_where(&self.lengths, |l| l == max)
    }

    /// Diagonals grouped by length, longest first.
    pub fn level_partition(&self) -> Vec<u64> {
        let mut levels: Vec<&BigRational> = self.lengths.iter().collect();
        levels.sort_unstable_by(|a, b| b.cmp(a));
        levels.dedup();
        levels
            .into_iter()
            .map(|lvl| mask_where(&self.lengths, |l| l == lvl))
            .collect()
    }
}

fn mask_where(lengths: &[BigRational], pred: impl Fn(&BigRational) -> bool) -> u64 {
    lengths
        .iter()
        .enumerate()
        .filter(|(_, l)| pred(l))
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// True iff the lengths sum to one and some admissible subarrangement sits
/// inside the set of longest diagonals.
pub fn is_valid_metric(ma: &MetricArrangement, sig: &SurfaceSignature) -> Result<bool> {
    let total: BigRational = ma.lengths.iter().fold(BigRational::zero(), |a, l| a + l);
    if total != BigRational::one() {
        return Ok(false);
    }
    let top = ma.argmax();
    // walk all nonempty submasks of the argmax set
    let mut sub = top;
    while sub != 0 {
        if let Restriction::Admissible { .. } = ma.arrangement.restrict(sub, sig)? {
            return Ok(true);
        }
        sub = (sub - 1) & top;
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangements::{enumerate_cells, Budget};
    use num_bigint::BigInt;

    fn q(p: i64, r: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(r))
    }

    fn two_diagonal_annulus() -> (Arrangement, SurfaceSignature) {
        let sig = SurfaceSignature::parse("0,2,0;1,1").unwrap();
        let inv = enumerate_cells(&sig, Budget::default()).unwrap();
        (inv.cells.into_iter().find(|c| c.m() == 2).unwrap(), sig)
    }

    #[test]
    fn annulus_metrics() {
        let (arr, sig) = two_diagonal_annulus();
        let even = MetricArrangement::new(arr.clone(), vec![q(1, 2), q(1, 2)]).unwrap();
        assert!(is_valid_metric(&even, &sig).unwrap());
        assert_eq!(even.level_partition(), vec![0b11]);
        let skew = MetricArrangement::new(arr.clone(), vec![q(2, 3), q(1, 3)]).unwrap();
        assert!(is_valid_metric(&skew, &sig).unwrap());
        assert_eq!(skew.level_partition(), vec![0b01, 0b10]);
        let heavy = MetricArrangement::new(arr.clone(), vec![q(2, 3), q(2, 3)]).unwrap();
        assert!(!is_valid_metric(&heavy, &sig).unwrap());
        assert!(MetricArrangement::new(arr, vec![q(1, 1), q(0, 1)]).is_err());
    }

    #[test]
    fn argmax_must_contain_an_admissible_part() {
        // a pentagon triangulation: each single chord is admissible, so
        // every normalized metric is valid
        let sig = SurfaceSignature::parse("0,1,0;5").unwrap();
        let inv = enumerate_cells(&sig, Budget::default()).unwrap();
        let tri = inv.cells.iter().find(|c| c.m() == 2).unwrap();
        let ma = MetricArrangement::new(tri.clone(), vec![q(1, 4), q(3, 4)]).unwrap();
        assert!(is_valid_metric(&ma, &sig).unwrap());
        assert_eq!(ma.argmax(), 0b10);
    }
}
