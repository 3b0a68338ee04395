//! Facets of the marginal cone of the binary 5-cycle, then a check that each
//! one really is a facet.

use fiberwalk::cone::{cone_facets, is_valid_facet};
use fiberwalk::graph::{margin_map, LabeledGraph};

fn main() -> fiberwalk::Result<()> {
    let am = margin_map(&LabeledGraph::binary_cycle(5));
    let f = cone_facets(&am)?;
    println!("rank {} with {} facets", f.rank, f.functionals.len());
    let cols: Vec<Vec<i64>> = (0..am.n_cols()).map(|c| am.column(c)).collect();
    for h in f.functionals.iter().take(6) {
        println!("  {}", h.display(&am));
    }
    let ok = f
        .functionals
        .iter()
        .all(|h| is_valid_facet(&cols, f.rank, h).unwrap_or(false));
    println!("all valid: {ok}");
    Ok(())
}
