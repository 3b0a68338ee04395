//! Two tables of `K_{2,3}` with the same strictly positive margins that the
//! quadrics cannot join.

use fiberwalk::cone::{build_disconnection_witness, find_witness_move};
use fiberwalk::experiments::disconnection_check;
use fiberwalk::families::{k2n_markov_basis, k2n_prime_witnesses, K2NShape};

fn main() -> fiberwalk::Result<()> {
    let shape = K2NShape::binary(5)?;
    let g = shape.graph();
    let w = k2n_prime_witnesses(&shape)
        .into_iter()
        .find(|w| w.id == "P[3,{1},4,{1}]")
        .expect("witness");
    let f = find_witness_move(&w, &k2n_markov_basis(&shape)).expect("a move avoiding the prime");
    println!("prime {} uses {} variables", w.id, w.variables.len());
    for c in 1..=3 {
        let (u, v) = build_disconnection_witness(&w, &f, c)?;
        let r = disconnection_check(&g, &u, &v, 1_000_000)?;
        println!(
            "c = {c}: equal margins {}, positive {}, components {} / {}, disjoint {}",
            r.margins_equal, r.strictly_positive, r.size_u, r.size_v, r.disjoint
        );
    }
    Ok(())
}
