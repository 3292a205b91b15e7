//! The bar involution on a truncated window: involutive, antilinear and
//! multiplicative.
use ellhall::algebra::{right_margin, AlgebraElement, Basis, HallAlgebra};
use ellhall::lattice::{ClassZ, ConvexPath, Slope};
use ellhall::Coefficient;

fn main() -> ellhall::Result<()> {
    let h = HallAlgebra::with_default();
    let f = Slope::int(-1);
    let x = ClassZ::new(1, 0);
    let y = ClassZ::new(1, 1);
    let a = AlgebraElement::basis_vector(&ConvexPath::single(x)?, f, Basis::TTilde).scale(&Coefficient::nu());
    let b = AlgebraElement::basis_vector(&ConvexPath::single(y)?, right_margin(x, f), Basis::TTilde);

    let ba = h.bar_element(&a)?;
    println!("bar(nu t~(1,0)) at floor {f}:");
    for (p, c) in &ba.terms {
        println!("    {}  {p}", c.to_nt_string());
    }
    assert_eq!(h.bar_element(&ba)?, a);

    let lhs = h.bar_element(&h.mul(&a, &b)?)?;
    let rhs = h.mul(&ba, &h.bar_element(&b)?)?;
    println!("bar(ab) = bar(a) bar(b) at floor {}: {}", lhs.floor, lhs.same_element(&rhs));
    Ok(())
}
