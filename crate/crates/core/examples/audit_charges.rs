//! Runs the discharging on the prism with its inner pentagon as the
//! short-cycle subgraph and prints the audit.

use std::collections::BTreeSet;

use plane3c::discharging::audit_charges;
use plane3c::harness::fixtures;
use plane3c::WeightFunction;

fn main() {
    let g = fixtures::prism();
    let m: BTreeSet<(usize, usize)> = [(10, 11), (11, 12), (12, 13), (13, 14), (10, 14)].into_iter().collect();
    let report = audit_charges(&g, &m, &WeightFunction::standard());
    print!("{report}");
}
