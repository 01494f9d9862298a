//! With no boundary, an arrangement is dual to a ribbon graph whose faces
//! are the marked points. Lists the seven classes for three points.

use diagonal_complex::arrangements::{enumerate_cells, Budget};
use diagonal_complex::complexes::BdComplex;
use diagonal_complex::surface_map::VertexLabel;
use diagonal_complex::SurfaceSignature;

fn main() -> diagonal_complex::Result<()> {
    let sig = SurfaceSignature::parse("0,0,3")?;
    let inv = enumerate_cells(&sig, Budget::default())?;
    for arr in &inv.cells {
        let map = &arr.map;
        // vertices of the dual graph are the complementary discs
        let degrees: Vec<usize> = map.interior_faces().iter().map(Vec::len).collect();
        let boundary: Vec<Vec<u32>> = (0..map.vertex_count())
            .map(|v| {
                map.darts_at(v)
                    .iter()
                    .map(|&d| match map.dart_label(map.pairing(d)) {
                        VertexLabel::Free(k) => k,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        println!("{} edges, dual vertex degrees {degrees:?}, neighbours per point {boundary:?}", arr.m());
    }
    let bd = BdComplex::build(inv)?;
    println!("BD f-vector {:?}, chi {}", bd.f_vector(), bd.euler_characteristic());
    Ok(())
}
