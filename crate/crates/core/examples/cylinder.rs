//! The cylinder with two points on one boundary and one on the other:
//! four vertices, six edges and two pentagons, glued into an annulus.
//!
//! Pass `--dump` to print the subdivided complex as JSON.

use diagonal_complex::arrangements::{enumerate_cells, Budget};
use diagonal_complex::complexes::{BdComplex, DComplex};
use diagonal_complex::SurfaceSignature;

fn main() -> diagonal_complex::Result<()> {
    let sig = SurfaceSignature::parse("0,2,0;2,1")?;
    let inv = enumerate_cells(&sig, Budget::default())?;
    let d = DComplex::build(inv.clone())?;
    println!("{sig}: Max {} Min {}", sig.max_diagonals(), sig.min_diagonals());
    println!("D  f-vector {:?}, chi {}", d.f_vector(), d.euler_characteristic());
    for (cell, facet, mult) in &d.coverings {
        if *mult > 1 {
            println!("cell {cell} meets facet {facet} {mult} times");
        }
    }

    let bd = BdComplex::build(inv)?;
    let h = bd.homology()?;
    println!("BD f-vector {:?}, chi {}", bd.f_vector(), bd.euler_characteristic());
    println!("betti {:?}, torsion {:?}", h.betti, h.torsion);

    if std::env::args().any(|a| a == "--dump") {
        println!("{}", serde_json::to_string_pretty(&bd.to_dump())?);
    }
    Ok(())
}
