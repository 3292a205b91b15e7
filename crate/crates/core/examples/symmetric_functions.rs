//! Kostka–Foulkes polynomials from the charge statistic, and Hall–Littlewood P.
use ellhall::symfunc::{charge, hl_p_in_schur, kostka_foulkes, partitions, Partition};

fn main() -> ellhall::Result<()> {
    // reading word 1 2 (row tableau, content (1,1)) has charge 1, so K_{(2),(1,1)} = ν
    println!("charge(1 2) = {}", charge(&[1, 2]));
    let n = 4;
    let ps = partitions(n);
    println!("K_(λ,μ)(ν) for n = {n}:");
    for l in &ps {
        let row: Vec<String> = ps.iter().map(|m| kostka_foulkes(l, m).map(|k| k.to_nt_string())).collect::<Result<_, _>>()?;
        println!("  {:>10}  {}", format!("{:?}", l.parts()), row.join(" | "));
    }
    let mu = Partition::new(vec![2, 1])?;
    println!("P_(2,1) in Schur functions:");
    for (lam, c) in hl_p_in_schur(&mu) {
        println!("  {:?}: {}", lam.parts(), c.to_nt_string());
    }
    Ok(())
}
