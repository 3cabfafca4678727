// Spectrum of the permutation-averaged state, its entropy and H_s profile.

use asymq::schur_weyl::{avg_entropy, avg_spectrum, hs_epsilon_avg};
use asymq::{LogBase, Params};

pub fn run_example() -> asymq::Result<()> {
    let p = Params::new(12, 6, 4, 2)?;
    let spec = avg_spectrum(p)?;
    for b in &spec.blocks {
        println!(
            "x = {:2}  eigenvalue {}  multiplicity {}",
            b.x, b.eigenvalue, b.multiplicity
        );
    }
    let s = avg_entropy(p, LogBase::Two)?;
    println!("S = {s:.6} bits");
    for eps in [0.1, 0.5, 0.9] {
        let t = hs_epsilon_avg(p, eps, LogBase::Two)?;
        println!(
            "H_s at {eps}: {:.6}{}",
            t.value,
            if t.open { " (open)" } else { "" }
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
