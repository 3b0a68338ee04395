use fiberwalk::families::{
    cycle_markov_basis, cycle_prime_witnesses, k2n_markov_basis, k2n_prime_witnesses,
    pyramid_prime_count, K2NShape,
};

fn main() -> fiberwalk::Result<()> {
    for n in 4..=7 {
        println!(
            "C{n}: {} basis moves, {} minimal primes",
            cycle_markov_basis(n)?.len(),
            cycle_prime_witnesses(n)?.len()
        );
    }
    for rest in [vec![2, 2], vec![2, 2, 2], vec![2, 4], vec![3, 3]] {
        let shape = K2NShape::new(rest.clone())?;
        println!(
            "K2,{} d = {:?}: {} basis moves, {} minimal primes",
            rest.len(),
            shape.levels(),
            k2n_markov_basis(&shape).len(),
            k2n_prime_witnesses(&shape).len()
        );
    }
    println!("square pyramid: {} primes", pyramid_prime_count(9, 2)?);
    Ok(())
}
