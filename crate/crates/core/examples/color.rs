//! Extends a ring precolouring of the spoked prism with the recursive solver
//! and checks the answer against the oracle.

use plane3c::colorer::{oracle_extend, ring_precolorings, solve_disk_with, SolverStats};
use plane3c::harness::fixtures;

fn main() {
    let g = fixtures::prism_internal_spoke();
    let phis = ring_precolorings(&g);
    let mut stats = SolverStats::default();
    let mut extendable = 0;
    for phi in &phis {
        let got = solve_disk_with(&g, phi, 0, &mut stats).expect("valid precolouring");
        assert_eq!(got.is_some(), oracle_extend(&g, phi).unwrap().is_some());
        extendable += got.is_some() as usize;
    }
    println!("{extendable} of {} ring precolourings extend", phis.len());
    println!("{stats:?}");
}
