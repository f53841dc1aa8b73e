//! Finds a precolouring of the octagon with a gadget that does not extend
//! and extracts a critical subgraph for it.

use plane3c::colorer::{extract_critical, is_phi_critical, oracle_extend, ring_precolorings};
use plane3c::harness::fixtures;

fn main() {
    let g = fixtures::c8_chord_with_gadget();
    let phi = ring_precolorings(&g)
        .into_iter()
        .find(|phi| oracle_extend(&g, phi).unwrap().is_none())
        .expect("some precolouring is blocked");
    let (h, ids, psi) = extract_critical(&g, &phi).expect("does not extend");
    let cert = is_phi_critical(&h, &psi).unwrap();
    println!("precolouring {phi}");
    println!("critical subgraph on {:?}, {} edges", ids, h.num_edges());
    println!("verified: {}", cert.verify(&h));
}
