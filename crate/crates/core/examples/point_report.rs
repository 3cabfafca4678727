// All quantities for one parameter point as a CSV table.

use asymq::report::{AsymmetryReport, DEFAULT_EPS};
use asymq::{LogBase, Params};

pub fn run_example() -> asymq::Result<()> {
    let r = AsymmetryReport::new(Params::new(200, 100, 40, 40)?, &DEFAULT_EPS, LogBase::E)?;
    print!("{}", r.to_table().render());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
