use fiberwalk::experiments::run_table1;

fn main() -> fiberwalk::Result<()> {
    let r = run_table1()?;
    println!(
        "{:<16}{:>6}{:>10}{:>10}{:>8}",
        "model", "rank", "pos", "interior", "primes"
    );
    for row in &r.rows {
        println!(
            "{:<16}{:>6}{:>10}{:>10}{:>8}{}",
            row.preset,
            row.cone_rank,
            row.positive_margins,
            row.interior_point,
            row.primes,
            if row.matches { "" } else { "  MISMATCH" }
        );
    }
    println!("all match: {}", r.all_match);
    Ok(())
}
