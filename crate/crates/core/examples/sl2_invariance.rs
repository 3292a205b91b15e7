//! Kostka tables are invariant under the SL(2,Z) symmetry of the algebra.
use ellhall::algebra::HallAlgebra;
use ellhall::lattice::{ClassZ, SL2Matrix, Slope};

fn main() -> ellhall::Result<()> {
    let h = HallAlgebra::with_default();
    for k in [1, -1, 2] {
        let g = SL2Matrix::new(1, 0, k, 1)?;
        for w in [ClassZ::new(1, 0), ClassZ::new(1, 1), ClassZ::new(2, 0)] {
            let r = h.sl2_invariance_check(&g, w, Slope::int(-1))?;
            println!(
                "shear {k:>2}: {w} -> {}  {} pairs  {}",
                r.image_weight,
                r.pairs.len(),
                if r.passed() { "ok" } else { "MISMATCH" }
            );
        }
    }
    Ok(())
}
