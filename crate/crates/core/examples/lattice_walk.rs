//! The engine on a plain lattice walk in two coordinates with steps
//! `(2,-2)` and `(3,-3)`, compared against the closed form.

use fiberwalk::fiber::are_connected;
use fiberwalk::presets::{e_simple_moves, e_simple_point, e_simple_rule};

fn main() -> fiberwalk::Result<()> {
    let moves = e_simple_moves();
    let mut pairs = 0;
    let mut agree = 0;
    for s in 0..=10u32 {
        for a in 0..=s {
            for b in 0..=s {
                let (x, y) = ((a, s - a), (b, s - b));
                let c = are_connected(
                    &e_simple_point(x.0, x.1),
                    &e_simple_point(y.0, y.1),
                    &moves,
                    1000,
                )?;
                pairs += 1;
                agree += (c.is_connected() == e_simple_rule(x, y)) as usize;
            }
        }
    }
    println!("{agree} of {pairs} pairs agree with the rule");
    Ok(())
}
