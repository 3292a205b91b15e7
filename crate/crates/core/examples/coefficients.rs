//! The coefficient ring: Laurent polynomials in σ^{1/2}, σ̄^{1/2}, read in
//! the coordinates ν = −(σσ̄)^{−1/2}, t = (σ/σ̄)^{1/2}.
use ellhall::Coefficient;

fn main() -> ellhall::Result<()> {
    let nu = Coefficient::nu();
    let t = Coefficient::t();
    println!("sigma       = {}", Coefficient::sigma().to_nt_string());
    println!("sigma bar   = {}", Coefficient::sigma_bar().to_nt_string());

    let x = &(&nu * &nu) + &(&nu * &t);
    println!("x           = {}", x.to_nt_string());
    println!("bar(x)      = {}", x.bar().to_nt_string());
    println!("x in nu N[nu,t^±]: {}", x.in_nu_n_nu_t());

    // the split used by the KL recursion: r − bar(r) = d with r supported on ν^{>0}
    let d = &x - &x.bar();
    let r = Coefficient::split_positive(&d)?;
    println!("split(x − bar x) = {}", r.to_nt_string());
    assert_eq!(r, x);

    let u1 = &(&nu * &(&Coefficient::one() - &Coefficient::sigma())) * &(&Coefficient::one() - &Coefficient::sigma_bar());
    println!("nu(1−σ)(1−σ̄) = {}", u1.to_nt_string());
    println!("as TeX: {}", u1.to_tex());
    Ok(())
}
