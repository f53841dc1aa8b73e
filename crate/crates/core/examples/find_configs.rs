//! Lists the configurations appearing in each small fixture.

use plane3c::catalog::{find_appearances, Strength};
use plane3c::harness::fixtures;

fn main() {
    for (name, g) in
        [("prism", fixtures::prism()), ("spoked prism", fixtures::prism_internal_spoke()), ("tripod", fixtures::e2(9))]
    {
        let found = find_appearances(&g, Strength::Faint);
        println!("{name}: {} appearances", found.len());
        for a in found {
            println!("  {a}");
        }
    }
}
