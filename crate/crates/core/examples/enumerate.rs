//! Counts disks by ring length and size, and the critical ones among them.

use plane3c::harness::{enumerate_corpus, CorpusSpec};

fn main() {
    for l in 5..=10 {
        let spec = CorpusSpec::new(l, 11.max(l));
        let all = enumerate_corpus(&spec).unwrap().len();
        let critical = enumerate_corpus(&spec.critical()).unwrap().len();
        println!("ring {l:>2}, n <= {:>2}: {all:>4} disks, {critical:>3} critical", spec.max_n);
    }
}
