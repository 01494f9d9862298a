//! The local Chern cochain at a free point: necklace values on triangles,
//! the cocycle check, and pairings with integral 2-cycles.
//!
//! Usage: `chern_cocycle [signature] [vertex]`, e.g. `chern_cocycle 0,1,1;4 1`.

use diagonal_complex::arrangements::{enumerate_cells, Budget};
use diagonal_complex::chern::{
    chern_cochain, chern_pairings, common_denominator, is_cocycle, necklace_at, rational_string,
};
use diagonal_complex::complexes::BdComplex;
use diagonal_complex::SurfaceSignature;

fn main() -> diagonal_complex::Result<()> {
    let mut args = std::env::args().skip(1);
    let sig = SurfaceSignature::parse(&args.next().unwrap_or_else(|| "0,1,1;4".into()))?;
    let v: u32 = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);
    let base = BdComplex::build(enumerate_cells(&sig, Budget::default())?)?;

    let c = chern_cochain(&base, v)?;
    let mut shown = 0;
    for (s, value) in c.values.iter().enumerate() {
        let nu = necklace_at(&base, &base.simplices[2][s], v)?;
        if nu.colors() == 3 && nu.counts().iter().all(|&n| n > 0) && shown < 8 {
            println!("triangle {s}: necklace {nu}, p = {}, Ch = {}", nu.parity_count()?.p(), rational_string(value));
            shown += 1;
        }
    }
    println!("common denominator {}", common_denominator(&c));
    if base.dimension() >= 3 {
        println!("cocycle: {}", is_cocycle(&base, &c)?);
    }
    let pairings = chern_pairings(&base, v)?;
    let integral = pairings.iter().filter(|p| p.integral).count();
    println!("{integral} of {} integral 2-cycles pair to integers", pairings.len());
    Ok(())
}
