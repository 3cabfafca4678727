// Runs every named check suite.

use asymq::verify::{run_suite, Suite};

pub fn run_example() -> asymq::Result<()> {
    let checks = run_suite(Suite::All)?;
    for c in &checks {
        println!("{c}");
    }
    assert!(checks.iter().all(|c| !c.counts_as_failure()));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
