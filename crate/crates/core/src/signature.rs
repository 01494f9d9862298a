use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Topological type of a marked surface: genus, free marked points and the
/// number of marked points on each labeled boundary component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceSignature {
    pub genus: u32,
    pub free_points: u32,
    pub boundary_points: Vec<u32>,
}

impl SurfaceSignature {
    pub fn new(genus: u32, free_points: u32, boundary_points: Vec<u32>) -> Result<Self> {
        let sig = SurfaceSignature {
            genus,
            free_points,
            boundary_points,
        };
        sig.validate()?;
        Ok(sig)
    }

    /// Parses `g,b,n;n1,...,nb` or the shorter `g,b,n` for closed surfaces.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidSignature(format!("cannot parse {text:?}"));
        let text = text.trim().trim_start_matches('(').trim_end_matches(')');
        let (head, tail) = match text.split_once(';') {
            Some((h, t)) => (h, t),
            None => (text, ""),
        };
        let nums: Vec<u32> = head
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if nums.len() != 3 {
            return Err(bad());
        }
        let bpts: Vec<u32> = tail
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if bpts.len() != nums[1] as usize {
            return Err(Error::InvalidSignature(format!(
                "b = {} but {} boundary point counts given",
                nums[1],
                bpts.len()
            )));
        }
        Self::new(nums[0], nums[2], bpts)
    }

    fn validate(&self) -> Result<()> {
        if self.boundary_points.contains(&0) {
            return Err(Error::InvalidSignature(
                "every boundary component needs at least one marked point".into(),
            ));
        }
        if self.total_points() == 0 {
            return Err(Error::InvalidSignature("no marked points".into()));
        }
        if self.max_diagonals() < 0 || self.max_diagonals() < self.min_diagonals() {
            return Err(Error::InvalidSignature(format!(
                "{self} cannot be triangulated (Max = {}, Min = {})",
                self.max_diagonals(),
                self.min_diagonals()
            )));
        }
        Ok(())
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_points.len()
    }

    /// Total number of marked points `N`.
    pub fn total_points(&self) -> u32 {
        self.free_points + self.boundary_points.iter().sum::<u32>()
    }

    pub fn boundary_edge_count(&self) -> u32 {
        self.boundary_points.iter().sum()
    }

    /// Number of diagonals of a triangulation.
    pub fn max_diagonals(&self) -> i64 {
        6 * self.genus as i64 + 3 * self.boundary_count() as i64 + 2 * self.free_points as i64
            + self.total_points() as i64
            - 6
    }

    /// Number of diagonals of an arrangement whose complement is a single disk.
    pub fn min_diagonals(&self) -> i64 {
        2 * self.genus as i64 + self.free_points as i64 + self.boundary_count() as i64 - 1
    }

    /// Dimension of the diagonal complex, `Max - Min`.
    pub fn dimension(&self) -> i64 {
        self.max_diagonals() - self.min_diagonals()
    }

    /// Euler characteristic of the closed capped surface.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64
    }

    /// Filesystem- and URL-safe key, e.g. `g0_b2_n0_bp2-1`.
    pub fn key(&self) -> String {
        let bp: Vec<String> = self.boundary_points.iter().map(|k| k.to_string()).collect();
        format!(
            "g{}_b{}_n{}_bp{}",
            self.genus,
            self.boundary_count(),
            self.free_points,
            bp.join("-")
        )
    }
}

impl fmt::Display for SurfaceSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{}",
            self.genus,
            self.boundary_count(),
            self.free_points
        )?;
        if !self.boundary_points.is_empty() {
            let bp: Vec<String> = self.boundary_points.iter().map(|k| k.to_string()).collect();
            write!(f, ";{}", bp.join(","))?;
        }
        write!(f, ")")
    }
}
