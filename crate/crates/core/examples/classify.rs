//! Structural invariants, exceptional shapes and the strengthening outcome
//! for the prism.

use plane3c::catalog::{find_appearances, strengthen, Strength};
use plane3c::harness::fixtures;
use plane3c::invariants::{check_all, classify_exceptional, planechar_case};

fn main() {
    let g = fixtures::prism();
    for (inv, verdict) in check_all(&g).entries {
        println!("{inv}: {verdict:?}");
    }
    println!("exceptional: {:?}", classify_exceptional(&g));
    let a = &find_appearances(&g, Strength::Appears)[0];
    println!("strengthen: {:?}", strengthen(&g, a));
    println!("tripod: {:?}", planechar_case(&fixtures::e2(9)));
}
