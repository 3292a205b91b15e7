//! Relation configs are data: write one out, tamper with it, and watch the
//! self-test reject it.
use ellhall::algebra::HallAlgebra;
use ellhall::cli::{render_selftest, selftest, Format};
use ellhall::config::RelationConfig;
use ellhall::Coefficient;

fn main() -> ellhall::Result<()> {
    let cfg = RelationConfig::generated(8);
    println!("version {} hash {}", cfg.version, cfg.content_hash());
    let h = HallAlgebra::new(cfg.clone())?;
    print!("{}", render_selftest(&selftest(&h), Format::Text)?);

    // a σ-symmetric but wrong ray scale passes validation and breaks associativity
    let mut bad = cfg;
    bad.ray_scale[1] = &bad.ray_scale[1] + &Coefficient::one();
    match HallAlgebra::new(bad) {
        Ok(h) => print!("{}", render_selftest(&selftest(&h), Format::Text)?),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
