use fiberwalk::families::{cycle_markov_basis, cycle_quadrics};
use fiberwalk::fiber::verify_markov_basis;
use fiberwalk::graph::{margin_map, LabeledGraph};

fn main() -> fiberwalk::Result<()> {
    for n in [4, 5] {
        let am = margin_map(&LabeledGraph::binary_cycle(n));
        let full = verify_markov_basis(&cycle_markov_basis(n)?, &am, 4)?;
        let quad = verify_markov_basis(&cycle_quadrics(n)?, &am, 4)?;
        println!(
            "C{n}: quadrics+quartics pass {} ({} fibers), quadrics alone pass {} (fails at degree {:?})",
            full.passed, full.fibers_checked, quad.passed, quad.failing_degree
        );
    }
    Ok(())
}
