//! A strictly positive table on the 4-cycle with three levels that no
//! quadric can move, although its fiber has other elements.

use fiberwalk::graph::LabeledGraph;
use fiberwalk::latin::{latin_table, mols, verify_disconnection};

fn main() -> fiberwalk::Result<()> {
    let g = LabeledGraph::cycle(vec![3; 4])?;
    let squares = mols(3)?;
    for row in squares[0].rows() {
        println!("{row:?}");
    }
    let t = latin_table(&g, &squares)?;
    let rep = verify_disconnection(&g, &t)?;
    println!("component size     {:?}", rep.component_size);
    println!("positive margins   {:?}", rep.strictly_positive);
    println!("second table found {}", rep.second_table.is_some());
    println!("disconnected       {}", rep.disconnected());
    Ok(())
}
