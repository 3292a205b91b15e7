//! PBW straightening with the default relation config.
use ellhall::config::RelationConfig;
use ellhall::lattice::{ClassZ, Slope};
use ellhall::relations::RelationEngine;

fn main() -> ellhall::Result<()> {
    let e = RelationEngine::new(RelationConfig::default())?;
    let (x, y) = (ClassZ::new(1, 0), ClassZ::new(0, 1));
    let c = e.commutator_primitive(x, y)?;
    println!("[t~(0,1), t~(1,0)]:");
    for (p, k) in &c.terms {
        println!("  ({}) t~{p}", k.to_nt_string());
    }

    let word = [ClassZ::new(0, 2), ClassZ::new(1, -1), ClassZ::new(1, 0)];
    let s = e.straighten(&word, Slope::int(-3))?;
    println!("t~(0,2) t~(1,-1) t~(1,0) = ({} terms above {})", s.terms.len(), s.floor);
    for (p, k) in &s.terms {
        println!("  ({}) t~{p}", k.to_nt_string());
    }
    Ok(())
}
