// Everything linear in n: Gaussian fluctuations and the refined expansion.

use asymq::asymptotics::{
    clt_empirical_check, refined_residuals, typeII_refined_constants, TypeIIParams,
};
use asymq::LogBase;

pub fn run_example() -> asymq::Result<()> {
    let p = TypeIIParams::from_fractions(0.2, 0.3, 0.0, 0.5)?;
    println!(
        "mu = {:.6}, sigma^2 = {:.6}, phi = {:.6}",
        p.mu,
        p.sigma2.unwrap(),
        p.phi.unwrap()
    );
    let c = typeII_refined_constants(&p, LogBase::E)?;
    println!("C1 = {:.9}  C0 = {:.9}", c.c1, c.c0());
    for row in clt_empirical_check(&[500, 2000], &p, 0.05)? {
        println!(
            "n = {:5}  sup |F - Phi| = {:.4}  var err = {:.2e}",
            row.n, row.sup_cdf_dist, row.var_err
        );
    }
    for (n, r) in refined_residuals(&p, &[500, 1000, 2000])? {
        println!("n = {n:5}  S - (n C1 + C0) = {r:+.3e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
