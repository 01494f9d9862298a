//! Shrinking a one-point boundary circle to a free point: every fiber is a
//! combinatorial circle whose arcs follow the germs at the new point.

use diagonal_complex::arrangements::{enumerate_cells, Budget};
use diagonal_complex::complexes::BdComplex;
use diagonal_complex::contraction::{ContractionKind, ForgetfulMap};
use diagonal_complex::SurfaceSignature;

fn bd(sig: &SurfaceSignature) -> diagonal_complex::Result<BdComplex> {
    BdComplex::build(enumerate_cells(sig, Budget::default())?)
}

fn main() -> diagonal_complex::Result<()> {
    let source = SurfaceSignature::parse("0,2,0;1,2")?;
    let kind = ContractionKind::Boundary(1);
    let target = kind.target_signature(&source)?;
    let f = ForgetfulMap::build(bd(&source)?, bd(&target)?, kind)?;
    println!("{source} -> {target}");

    let mut fibers = f.fibers()?;
    for fiber in fibers.iter_mut().flatten() {
        let r = f.grid_report(fiber)?;
        println!(
            "over {:?}: {} vertices, germ sets {:?}, arcs {:?} (predicted {:?}) {}",
            r.base,
            r.vertices,
            r.set_indices,
            r.observed,
            r.predicted,
            if r.pass { "ok" } else { "MISMATCH" }
        );
    }
    f.check_fiber_continuity(&fibers)?;
    println!("total space chi = {}", f.source.euler_characteristic());
    Ok(())
}
