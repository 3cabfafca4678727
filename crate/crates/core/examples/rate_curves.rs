// h(mu) against kappa h(xi) along the product slice, in bits.

use asymq::asymptotics::{fig2_rows, nma_slice, zmy_gap};
use asymq::LogBase;

pub fn run_example() -> asymq::Result<()> {
    for r in fig2_rows(0.3, 10, LogBase::Two)? {
        println!(
            "kappa = {:.1}  h(mu) = {:.4}  kappa h(xi) = {:.4}",
            r.kappa, r.h_mu, r.kappa_h_xi
        );
        assert!(r.h_mu >= r.kappa_h_xi - 1e-12);
    }
    let gap = zmy_gap(&nma_slice(0.3, 0.5)?, LogBase::Two);
    println!("coherent minus dephased rate at kappa = 0.5: {gap:.4} bits");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
