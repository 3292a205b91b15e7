//! Canonical basis elements and elliptic Kostka tables.
//!
//! cargo run --release --example canonical_basis -- 2,0 -2
use ellhall::algebra::HallAlgebra;
use ellhall::canonical::Flavor;
use ellhall::cli::{parse_floor, parse_weight};
use ellhall::lattice::{ClassZ, ConvexPath, Slope};

fn main() -> ellhall::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let weight = args.first().map(|s| parse_weight(s)).transpose()?.unwrap_or(ClassZ::new(1, 1));
    let floor = args.get(1).map(|s| parse_floor(s)).transpose()?.unwrap_or(Slope::int(-1));
    let h = HallAlgebra::with_default();

    let p = ConvexPath::canonical(vec![ClassZ::new(1, 0), ClassZ::new(0, 1)])?;
    let b = h.canonical_element(&p, Slope::int(-2))?;
    println!("b_{p} in the beta basis:");
    for (q, c) in &b.terms {
        println!("    {}  {q}", c.to_nt_string());
    }

    print!("{}", h.kostka_table(weight, floor, Flavor::Tilde)?.to_text());
    print!("{}", h.kostka_table(weight, floor, Flavor::Plain)?.to_text());
    Ok(())
}
