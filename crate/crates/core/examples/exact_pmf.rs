// Exact outcome distribution for one tuple, checked against brute force.

use asymq::oracle::pmf_oracle;
use asymq::schur_weyl::{pmf, pmf_closed_kl};
use asymq::Params;

pub fn run_example() -> asymq::Result<()> {
    let p = Params::new(6, 3, 2, 1)?;
    let dist = pmf(p)?;
    let brute = pmf_oracle(p)?;
    for (x, q) in dist.masses().iter().enumerate() {
        println!("x = {x}: p = {q}");
    }
    assert_eq!(dist.masses(), &brute[..dist.masses().len()]);

    // k = l has a product formula
    let kl = Params::new(10, 4, 3, 3)?;
    assert_eq!(pmf(kl)?.masses(), pmf_closed_kl(kl)?.masses());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
