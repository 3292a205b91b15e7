//! The four PBW-type bases and the completed elements 1_α, 1_p.
use ellhall::algebra::{AlgebraElement, Basis, HallAlgebra};
use ellhall::lattice::{ClassZ, ConvexPath, Slope};

fn show(label: &str, e: &AlgebraElement) {
    println!("{label} [{}]", e.basis);
    for (p, c) in &e.terms {
        println!("    {}  {p}", c.to_nt_string());
    }
}

fn main() -> ellhall::Result<()> {
    let h = HallAlgebra::with_default();
    let f = Slope::int(-2);
    let p = ConvexPath::canonical(vec![ClassZ::new(0, 1), ClassZ::new(0, 1)])?;
    show("beta_((0,1),(0,1)) in t~", &h.beta_path(&p, f));
    show("rho_((0,1),(0,1)) in beta", &h.rho_path(&p, f).convert(Basis::Beta));

    let one = h.one_alpha(ClassZ::new(1, 0), f)?;
    show("1_(1,0) in 1ss", &one.convert(Basis::OneSs));

    let q = ConvexPath::canonical(vec![ClassZ::new(1, -1), ClassZ::new(0, 1)])?;
    show("1_((1,-1),(0,1)) in 1ss", &h.one_path(&q, f)?.convert(Basis::OneSs));

    let a = AlgebraElement::basis_vector(&ConvexPath::single(ClassZ::new(0, 1))?, Slope::int(-3), Basis::TTilde);
    let b = AlgebraElement::basis_vector(&ConvexPath::single(ClassZ::new(1, -1))?, Slope::int(-3), Basis::TTilde);
    let ab = h.mul(&a, &b)?;
    show(&format!("t~(0,1) * t~(1,-1), exact from floor {}", ab.floor), &ab);
    Ok(())
}
