//! Convex lattice paths, the weak order and the SL(2,Z) action.
use ellhall::lattice::{enumerate_paths, path_cmp, sl2_apply, ClassZ, SL2Matrix, Slope};

fn main() -> ellhall::Result<()> {
    let alpha = ClassZ::new(2, 1);
    let floor = Slope::int(-1);
    let paths = enumerate_paths(alpha, floor)?;
    println!("{} paths of weight {alpha} with first slope >= {floor} (top of the order first):", paths.len());
    for p in paths.iter().take(10) {
        println!("  {p}   HN type {:?}", p.hn_type());
    }

    let (p, q) = (&paths[0], &paths[paths.len() - 1]);
    println!("{p} vs {q}: {:?}", path_cmp(p, q)?);

    let shear = SL2Matrix::new(1, 0, 1, 1)?;
    for p in paths.iter().take(4) {
        println!("  {p} -> {}", sl2_apply(&shear, p)?);
    }
    Ok(())
}
