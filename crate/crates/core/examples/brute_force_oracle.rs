// Dense permutation average on 7 qubits against the block formula.

use asymq::oracle::{avg_state_oracle, entropy_oracle, transposition_defect};
use asymq::schur_weyl::avg_entropy;
use asymq::{LogBase, Params};

pub fn run_example() -> asymq::Result<()> {
    let p = Params::new(7, 3, 3, 1)?;
    let rho = avg_state_oracle(p)?;
    println!(
        "trace {:.12}, invariance defect {:.2e}",
        rho.trace(),
        transposition_defect(7, &rho)
    );
    let brute = entropy_oracle(p, LogBase::E)?;
    let fast = avg_entropy(p, LogBase::E)?;
    println!("entropy: brute {brute:.12}, blocks {fast:.12}");
    assert!((brute - fast).abs() < 1e-9);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
