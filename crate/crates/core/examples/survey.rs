//! f-vectors, Euler characteristics and integral homology for the
//! signatures given on the command line, e.g. `survey 0,0,4 "0,2,1;1,1"`.

use std::time::Instant;

use diagonal_complex::arrangements::{enumerate_cells, Budget};
use diagonal_complex::complexes::{BdComplex, DComplex};
use diagonal_complex::SurfaceSignature;

fn main() -> diagonal_complex::Result<()> {
    let mut args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        args = ["0,1,1;3", "0,1,2;1", "0,2,0;3,1", "0,0,4"].map(String::from).to_vec();
    }
    for a in args {
        let start = Instant::now();
        let sig = SurfaceSignature::parse(&a)?;
        let inv = enumerate_cells(&sig, Budget::default())?;
        let d = DComplex::build(inv.clone())?;
        let bd = BdComplex::build(inv)?;
        let h = bd.homology()?;
        println!(
            "{sig}: D {:?}, BD {:?}, chi {}, betti {:?}, torsion {:?} [{:.2?}]",
            d.f_vector(),
            bd.f_vector(),
            bd.euler_characteristic(),
            h.betti,
            h.torsion,
            start.elapsed()
        );
    }
    Ok(())
}
