//! Metric arrangements: lengths summing to one whose longest diagonals
//! still cut the surface into discs, and the circle of lengths around a
//! free point.

use diagonal_complex::arrangements::{enumerate_cells, Budget};
use diagonal_complex::complexes::{is_valid_metric, MetricArrangement};
use diagonal_complex::contraction::metric_fiber;
use diagonal_complex::surface_map::VertexLabel;
use diagonal_complex::SurfaceSignature;
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() -> diagonal_complex::Result<()> {
    let sig = SurfaceSignature::parse("0,1,1;2")?;
    let inv = enumerate_cells(&sig, Budget::default())?;
    for arr in &inv.cells {
        let m = arr.m() as i64;
        let weights: Vec<i64> = (1..=m).collect();
        let total: i64 = weights.iter().sum();
        let lengths = weights.iter().map(|&w| BigRational::new(BigInt::from(w), BigInt::from(total))).collect();
        let ma = MetricArrangement::new(arr.clone(), lengths)?;
        let valid = is_valid_metric(&ma, &sig)?;
        print!("{} diagonals, levels {:?}, valid {valid}", arr.m(), ma.level_partition());
        if valid {
            let circle = metric_fiber(&ma, &sig, VertexLabel::Free(1))?;
            let shown: Vec<String> = circle.iter().map(ToString::to_string).collect();
            print!(", around v1: {}", shown.join(" "));
        }
        println!();
    }
    Ok(())
}
