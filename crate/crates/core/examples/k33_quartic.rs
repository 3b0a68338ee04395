use fiberwalk::k33::k33_run;

fn main() -> fiberwalk::Result<()> {
    let r = k33_run(10_000)?;
    println!("u+ + w:  {} tables", r.c18a);
    println!("u- + w:  {} tables, disjoint: {}", r.c18b, r.disjoint);
    println!("u+ + 2w: {} tables, contains u- + 2w: {}", r.c90, r.joined);
    if let Some(n) = r.path_length {
        println!("shortest path has {n} moves");
    }
    Ok(())
}
