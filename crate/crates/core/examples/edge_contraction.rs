//! Contracting a boundary edge: every fiber is a segment, and a fiberwise
//! Morse matching collapses the source onto a copy of the target.
//!
//! Usage: `edge_contraction [n1]` contracts (0,2,0;n1,1) to (0,2,0;n1-1,1).

use diagonal_complex::arrangements::{enumerate_cells, Budget};
use diagonal_complex::complexes::BdComplex;
use diagonal_complex::contraction::{ContractionKind, ForgetfulMap};
use diagonal_complex::SurfaceSignature;

fn bd(sig: &SurfaceSignature) -> diagonal_complex::Result<BdComplex> {
    BdComplex::build(enumerate_cells(sig, Budget::default())?)
}

fn main() -> diagonal_complex::Result<()> {
    let n: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let source = SurfaceSignature::new(0, 0, vec![n, 1])?;
    let kind = ContractionKind::Edge(1);
    let target = kind.target_signature(&source)?;
    let f = ForgetfulMap::build(bd(&source)?, bd(&target)?, kind)?;
    f.check_monotone()?;
    f.check_surjective()?;
    println!("{source} -> {target}");
    println!("source f-vector {:?}, target f-vector {:?}", f.source.f_vector(), f.target.f_vector());

    let mut fibers = f.fibers()?;
    let longest = fibers.iter().flatten().map(|x| x.vertices.len()).max().unwrap_or(0);
    println!("{} segment fibers, longest has {longest} vertices", fibers.iter().flatten().count());

    let m = f.morse_matching(&mut fibers)?;
    println!("{} matched pairs, {} critical cells (acyclic)", m.pairs.len(), m.critical.len());
    println!(
        "betti {:?} -> {:?}",
        f.source.homology()?.trimmed_betti(),
        f.target.homology()?.trimmed_betti()
    );
    Ok(())
}
