use fiberwalk::latin::{are_orthogonal, mols};

fn main() -> fiberwalk::Result<()> {
    for q in [2, 3, 4, 5, 7, 8, 9] {
        let sq = mols(q)?;
        let mut ok = true;
        for i in 0..sq.len() {
            for j in i + 1..sq.len() {
                ok &= are_orthogonal(&sq[i], &sq[j])?;
            }
        }
        println!("q = {q}: {} squares, pairwise orthogonal: {ok}", sq.len());
    }
    // q = 6 has no field
    println!(
        "q = 6: {}",
        mols(6)
            .map(|s| s.len().to_string())
            .unwrap_or_else(|e| e.to_string())
    );
    Ok(())
}
