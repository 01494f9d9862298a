//! Local formula for the first Chern class of the tautological circle
//! bundle at a free vertex, and its powers, as exact cochains on the
//! subdivided base complex.

mod necklace;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::complexes::chain::integral_kernel_basis;
use crate::complexes::{BdComplex, BdSimplex};
use crate::error::{Error, Result};
use crate::surface_map::VertexLabel;

pub use necklace::{cancellation_report, CancellationReport, Necklace, ParityCount};

/// Exact rational values on the `dim`-simplices of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub dim: usize,
    pub values: Vec<BigRational>,
}

/// Integer combination of `dim`-simplices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub dim: usize,
    pub coeffs: Vec<(usize, i128)>,
}

/// `"p/q"`, always with an explicit denominator.
pub fn rational_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl Cochain {
    pub fn zero(base: &BdComplex, dim: usize) -> Self {
        let n = base.simplices.get(dim).map_or(0, Vec::len);
        Cochain {
            dim,
            values: vec![BigRational::zero(); n],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    fn check_on(&self, base: &BdComplex) -> Result<()> {
        let n = base.simplices.get(self.dim).map_or(0, Vec::len);
        if self.values.len() != n {
            return Err(Error::Dimension(format!(
                "{}-cochain with {} values on {n} simplices",
                self.dim,
                self.values.len()
            )));
        }
        Ok(())
    }
}

/// Colors of the germs at free vertex `v`, counterclockwise, each colored by
/// the 1-based index of the set holding its diagonal.
pub fn necklace_at(base: &BdComplex, simplex: &BdSimplex, v: u32) -> Result<Necklace> {
    let arr = &base.inventory.cells[simplex.cell];
    let label = VertexLabel::Free(v);
    let w = arr
        .map
        .vertex_by_label(label)
        .ok_or_else(|| Error::BadInput(format!("no free vertex {v} on {}", base.signature())))?;
    let beads = arr
        .map
        .darts_at(w)
        .into_iter()
        .map(|d| {
            let i = arr.diagonal_index(arr.map.edge_of(d)).expect("free vertices carry diagonals");
            simplex.parts.iter().position(|&s| s & (1 << i) != 0).expect("partition") as u32 + 1
        })
        .collect();
    Necklace::new(beads, simplex.parts.len() as u32)
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

/// Value of the `h`-th power formula on one necklace with `2h + 1` colors.
pub fn chern_power_value(nu: &Necklace, h: u32) -> Result<BigRational> {
    if nu.colors() != 2 * h + 1 {
        return Err(Error::Dimension(format!("{} colors for power {h}", nu.colors())));
    }
    let counts = nu.counts();
    if counts[0] == 0 {
        return Err(Error::Invariant(format!("necklace {nu} lacks color 1")));
    }
    let p = nu.parity_count()?.p();
    if p == 0 {
        return Ok(BigRational::zero());
    }
    let mut denom = factorial(2 * h as u64);
    let mut partial = 0u64;
    for &c in &counts {
        partial += c;
        denom *= partial;
    }
    let sign = if h.is_multiple_of(2) { 1 } else { -1 };
    let numer = BigInt::from(sign * p) * factorial(h as u64);
    Ok(BigRational::new(numer, denom))
}

/// `-p / (2 N1 (N1+N2) (N1+N2+N3))` on one three-color necklace.
pub fn chern_value(nu: &Necklace) -> Result<BigRational> {
    if nu.colors() != 3 {
        return Err(Error::Dimension(format!("{} colors on a 2-simplex", nu.colors())));
    }
    let n = nu.counts();
    if n[0] == 0 {
        return Err(Error::Invariant(format!("necklace {nu} lacks color 1")));
    }
    let p = nu.parity_count()?.p();
    let denom = 2 * n[0] * (n[0] + n[1]) * (n[0] + n[1] + n[2]);
    Ok(BigRational::new(BigInt::from(-p), BigInt::from(denom)))
}

/// The Chern cochain on the 2-simplices of `base` at free vertex `v`.
pub fn chern_cochain(base: &BdComplex, v: u32) -> Result<Cochain> {
    let level = base.simplices.get(2).map(Vec::as_slice).unwrap_or(&[]);
    let values = level
        .iter()
        .map(|s| chern_value(&necklace_at(base, s, v)?))
        .collect::<Result<_>>()?;
    Ok(Cochain { dim: 2, values })
}

/// The `h`-th power cochain on the `2h`-simplices of `base`.
pub fn chern_power(base: &BdComplex, v: u32, h: u32) -> Result<Cochain> {
    if h == 0 {
        return Err(Error::BadInput("power must be positive".into()));
    }
    let dim = 2 * h as usize;
    let level = base.simplices.get(dim).map(Vec::as_slice).unwrap_or(&[]);
    let values = level
        .iter()
        .map(|s| chern_power_value(&necklace_at(base, s, v)?, h))
        .collect::<Result<_>>()?;
    Ok(Cochain { dim, values })
}

/// `(δc)(τ) = Σ_t (-1)^t c(∂_t τ)` with faces in prefix order.
pub fn coboundary(base: &BdComplex, c: &Cochain) -> Result<Cochain> {
    c.check_on(base)?;
    let k = c.dim + 1;
    if k > base.dimension() {
        return Ok(Cochain { dim: k, values: Vec::new() });
    }
    let values = base.faces[k]
        .iter()
        .map(|fs| {
            fs.iter().enumerate().fold(BigRational::zero(), |acc, (t, &f)| {
                if t % 2 == 0 {
                    acc + &c.values[f]
                } else {
                    acc - &c.values[f]
                }
            })
        })
        .collect();
    Ok(Cochain { dim: k, values })
}

pub fn is_cocycle(base: &BdComplex, c: &Cochain) -> Result<bool> {
    Ok(coboundary(base, c)?.is_zero())
}

pub fn pair(c: &Cochain, z: &Chain) -> Result<BigRational> {
    if c.dim != z.dim {
        return Err(Error::Dimension(format!("{}-cochain against a {}-chain", c.dim, z.dim)));
    }
    let mut acc = BigRational::zero();
    for &(s, k) in &z.coeffs {
        let v = c
            .values
            .get(s)
            .ok_or_else(|| Error::Dimension(format!("simplex {s} outside the cochain")))?;
        acc += v * BigRational::from_integer(BigInt::from(k));
    }
    Ok(acc)
}

/// A Z-basis of the integral `k`-cycles.
pub fn integral_cycles(base: &BdComplex, k: usize) -> Result<Vec<Chain>> {
    let cc = base.chain_complex();
    let Some(d) = cc.boundaries.get(k) else { return Ok(Vec::new()) };
    Ok(integral_kernel_basis(d)?
        .into_iter()
        .map(|coeffs| Chain { dim: k, coeffs })
        .collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairingReport {
    pub cycle: usize,
    pub support: usize,
    /// Exact value as `"p/q"`.
    pub value: String,
    pub integral: bool,
}

/// Pairs the Chern cochain with every member of an integral basis of
/// 2-cycles. Boundaries pair to zero on a cocycle, so this covers a full
/// set of generators of the second homology.
pub fn chern_pairings(base: &BdComplex, v: u32) -> Result<Vec<PairingReport>> {
    let ch = chern_cochain(base, v)?;
    integral_cycles(base, 2)?
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let value = pair(&ch, z)?;
            Ok(PairingReport {
                cycle: i,
                support: z.coeffs.len(),
                integral: value.denom().is_one(),
                value: rational_string(&value),
            })
        })
        .collect()
}

/// Least common multiple of the denominators, handy for scaling a cochain
/// to integers.
pub fn common_denominator(c: &Cochain) -> BigInt {
    c.values.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangements::{enumerate_cells, Budget};
    use crate::SurfaceSignature;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn bd(s: &str) -> BdComplex {
        let sig = SurfaceSignature::parse(s).unwrap();
        BdComplex::build(enumerate_cells(&sig, Budget::default()).unwrap()).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn formula_values() {
        let nk = |w: &[u32]| Necklace::new(w.to_vec(), 3).unwrap();
        assert_eq!(chern_value(&nk(&[1, 2, 3])).unwrap(), q(-1, 12));
        assert_eq!(chern_value(&nk(&[1, 3, 2])).unwrap(), q(1, 12));
        assert_eq!(chern_value(&nk(&[1, 1, 3])).unwrap(), q(0, 1));
        assert!(chern_value(&nk(&[2, 3])).is_err());
        for w in [[1, 2, 3], [1, 3, 2]] {
            assert_eq!(chern_power_value(&nk(&w), 1).unwrap(), chern_value(&nk(&w)).unwrap());
        }
        let five = Necklace::new(vec![1, 2, 3, 4, 5], 5).unwrap();
        // 2! * 1 / (4! * 1 * 2 * 3 * 4 * 5)
        assert_eq!(chern_power_value(&five, 2).unwrap(), q(2, 24 * 120));
    }

    #[test]
    fn necklaces_on_a_base() {
        let base = bd("0,1,1;2");
        for level in &base.simplices {
            for s in level {
                let nu = necklace_at(&base, s, 1).unwrap();
                assert_eq!(nu.colors() as usize, s.parts.len());
                assert!(nu.counts()[0] > 0);
            }
        }
        assert!(necklace_at(&base, &base.simplices[0][0], 2).is_err());
    }

    #[test]
    fn chern_cocycle_on_small_bases() {
        for s in ["0,1,1;2", "0,1,1;3"] {
            let base = bd(s);
            let ch = chern_cochain(&base, 1).unwrap();
            assert!(is_cocycle(&base, &ch).unwrap(), "{s}");
            for r in chern_pairings(&base, 1).unwrap() {
                assert!(r.integral, "{s}: {r:?}");
            }
        }
    }

    #[test]
    fn pairing_checks_dimensions() {
        let base = bd("0,1,1;2");
        let ch = chern_cochain(&base, 1).unwrap();
        assert!(pair(&ch, &Chain { dim: 1, coeffs: vec![] }).is_err());
        assert_eq!(pair(&ch, &Chain { dim: 2, coeffs: vec![] }).unwrap(), q(0, 1));
        assert_eq!(rational_string(&q(-2, 4)), "-1/2");
        assert_eq!(rational_string(&q(3, 1)), "3/1");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn coboundary_squares_to_zero(seed in proptest::collection::vec(-5i64..5, 1..200)) {
            let base = bd("0,2,0;2,1");
            let n = base.simplices[0].len();
            let c = Cochain { dim: 0, values: (0..n).map(|i| q(seed[i % seed.len()], 1 + i as i64 % 3)).collect() };
            let dd = coboundary(&base, &coboundary(&base, &c).unwrap()).unwrap();
            prop_assert!(dd.is_zero());
            // Stokes: a coboundary pairs to zero with every cycle
            let a = coboundary(&base, &c).unwrap();
            for z in integral_cycles(&base, 1).unwrap() {
                prop_assert!(pair(&a, &z).unwrap().abs().is_zero());
            }
        }
    }
}
