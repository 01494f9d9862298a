//! The annulus with one marked point on each boundary circle: one
//! arrangement of one diagonal, one of two, and the circle they form.

use diagonal_complex::arrangements::{enumerate_cells, Budget};
use diagonal_complex::complexes::{BdComplex, DComplex};
use diagonal_complex::SurfaceSignature;

fn main() -> diagonal_complex::Result<()> {
    let sig = SurfaceSignature::new(0, 0, vec![1, 1])?;
    let inv = enumerate_cells(&sig, Budget::default())?;
    for arr in &inv.cells {
        println!("cell {}.. with {} diagonals", &arr.code_hex()[..16], arr.m());
    }

    let d = DComplex::build(inv.clone())?;
    println!("D  f-vector {:?}, coverings {:?}", d.f_vector(), d.coverings);

    let bd = BdComplex::build(inv)?;
    let h = bd.homology()?;
    println!("BD f-vector {:?}, betti {:?}", bd.f_vector(), h.trimmed_betti());
    println!(
        "edges sharing both endpoints: {} (a regular complex, not a simplicial one)",
        bd.vertex_set_collisions()
    );
    for (i, s) in bd.simplices[1].iter().enumerate() {
        println!("edge {i}: vertices {:?}, partition {:?}", bd.vertices(s), s.parts);
    }
    Ok(())
}
