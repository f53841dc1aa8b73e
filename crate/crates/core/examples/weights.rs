//! Face weights and the disk bounds for the two extremal fixtures.

use plane3c::harness::fixtures;
use plane3c::weights::{check_diskgirth5, fmt_q_over};
use plane3c::WeightFunction;

fn main() {
    let w = WeightFunction::standard();
    for l in 5..=10 {
        println!("s({l}) = {}", fmt_q_over(w.s(l).unwrap(), 4113));
    }
    for (name, g) in [("octagon with chord", fixtures::c8_chord()), ("tripod", fixtures::e2(9))] {
        let rep = check_diskgirth5(&g, &w).expect("critical and within bounds");
        println!("{name}: w = {} ({:?})", fmt_q_over(rep.weight, 4113), rep.class);
        for c in &rep.checks {
            println!("  {} = {} margin {}", c.name, fmt_q_over(c.bound, 4113), fmt_q_over(c.margin, 4113));
        }
    }
}
