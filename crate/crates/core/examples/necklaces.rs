//! Signed selection counts of three-colored necklaces and the factor eight
//! picked up under fattening.

use diagonal_complex::chern::{cancellation_report, Necklace};

fn main() -> diagonal_complex::Result<()> {
    for beads in [vec![1, 2, 3], vec![1, 3, 2], vec![1, 2, 3, 1], vec![1, 2, 1, 3, 2, 3]] {
        let nu = Necklace::new(beads, 3)?;
        let fat = nu.fatten();
        println!("{nu}: p = {}, F = {fat}, p(F) = {}", nu.parity_count()?.p(), fat.parity_count()?.p());
    }
    let mut checked = 0;
    for len in 1..=7 {
        for nu in Necklace::all(len, 3) {
            let r = cancellation_report(&nu)?;
            assert!(r.holds(), "{nu}: {r:?}");
            checked += 1;
        }
    }
    println!("p(F(nu)) = 8 p(nu) with both cancellations on {checked} necklaces");
    Ok(())
}
