// Asymmetry activation: attaching the Dicke register, and the
// antisymmetric-subspace example.

use asymq::activation::{antisym_activation, antisym_optimal_d, permutation_activation};
use asymq::{LogBase, Params};

pub fn run_example() -> asymq::Result<()> {
    let p = Params::new(20, 10, 6, 3)?;
    let coh = permutation_activation(p, true, LogBase::Two)?;
    let dec = permutation_activation(p, false, LogBase::Two)?;
    println!(
        "activation: coherent {:.4} bits, dephased {:.4} bits",
        coh.activation, dec.activation
    );
    for n in 2..=5 {
        let (d, v) = antisym_optimal_d(n, LogBase::E)?;
        println!(
            "n = {n}: best d = {d}, value {v:.4}, at d = 4n {:.4}",
            antisym_activation(n, 4 * n, LogBase::E)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
