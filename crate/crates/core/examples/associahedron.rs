//! Discs with k marked points on the boundary give the face poset of the
//! associahedron (minus its top cell): Catalan many triangulations.

use diagonal_complex::arrangements::{enumerate_cells, Budget};
use diagonal_complex::complexes::BdComplex;
use diagonal_complex::SurfaceSignature;

fn main() -> diagonal_complex::Result<()> {
    for k in 4..=8 {
        let sig = SurfaceSignature::new(0, 0, vec![k])?;
        let inv = enumerate_cells(&sig, Budget::default())?;
        let triangulations = inv.cells.iter().filter(|c| c.m() as u32 == k - 3).count();
        let bd = BdComplex::build(inv.clone())?;
        println!(
            "k = {k}: {triangulations:>3} triangulations, D f-vector {:?}, BD betti {:?}",
            inv.f_vector(),
            bd.homology()?.trimmed_betti()
        );
    }
    Ok(())
}
