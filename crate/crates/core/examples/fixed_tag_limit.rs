// Fixed attached string, growing register: entropy over ln n tends to u.

use asymq::asymptotics::{fig1_row, typeI_q_pmf, typeI_rate, TypeIRatios};

pub fn run_example() -> asymq::Result<()> {
    let r = TypeIRatios::new(0.5, 2, 1)?;
    println!("limit pmf q = {:?}", typeI_q_pmf(r));
    for n in [100, 1000, 10000] {
        let row = fig1_row(r, n)?;
        println!(
            "n = {n:5}  S/ln n = {:.4}  a/ln n = {:.4}  u = {}",
            row.s_exact_over_logn, row.a_over_logn, row.u
        );
    }
    for (n, scaled) in typeI_rate(r, &[100, 400, 1600])? {
        println!("n = {n:5}  n max|p - q| = {scaled:.4}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
