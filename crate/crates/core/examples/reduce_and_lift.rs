//! Reduces every catalogue configuration on its canonical host, colours the
//! smaller graph and lifts the colouring back.

use plane3c::catalog::{canonical_host, catalog, find_appearances_of, Strength};
use plane3c::colorer::{lift_coloring, oracle_extend, ring_precolorings, Coloring};
use plane3c::reducer::reduce;

fn main() {
    for c in catalog() {
        let g = canonical_host(c);
        let a = find_appearances_of(&g, c, Strength::Strong).remove(0);
        let phi = ring_precolorings(&g)
            .into_iter()
            .find(|phi| reduce(&g, &a, Some(phi)).is_ok())
            .expect("some precolouring reduces");
        let res = reduce(&g, &a, Some(&phi)).unwrap();
        let mut psi = Coloring::empty(res.graph.n());
        for v in res.graph.ring_vertices() {
            psi.set(v, phi.get(res.old_of_new[v]).unwrap());
        }
        let verdict = match oracle_extend(&res.graph, &psi).unwrap() {
            Some(col) => {
                let lifted = lift_coloring(&g, &a, &res, &col).expect("lift");
                format!("lifted, proper: {}", lifted.is_proper(&g))
            }
            None => "reduced graph refuses".to_string(),
        };
        println!("{:<6} host n={:<3} reduced n={:<3} {verdict}", c.id.to_string(), g.n(), res.graph.n());
    }
}
