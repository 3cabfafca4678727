// Information-spectrum and hypothesis-testing divergences, and the bounds
// they give on distinguishable counts.

use asymq::info_spectrum::{
    dh_epsilon, ds_delta, ll3_chain_check, m_bounds, nxu_logM, CqEnsemble, DensityMatrix,
};
use asymq::LogBase;

pub fn run_example() -> asymq::Result<()> {
    let rho = DensityMatrix::diagonal(&[0.6, 0.3, 0.1])?;
    let sigma = DensityMatrix::diagonal(&[0.2, 0.3, 0.5])?;
    println!("D_s at 0.2: {:.6}", ds_delta(&rho, &sigma, 0.2)?.value);
    println!("D_H at 0.2: {:.6}", dh_epsilon(&rho, &sigma, 0.2)?);
    println!("{:?}", ll3_chain_check(&rho, &sigma, 0.2, 0.1)?);

    let ens = CqEnsemble::flat_orthogonal(8)?;
    let b = m_bounds(&ens, 0.5, 0.1, 0.1, LogBase::E)?;
    let exact = nxu_logM(1, 8, 1, LogBase::E)?;
    println!("{:.4} <= ln M = {exact:.4} <= {:.4}", b.lower, b.upper);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
