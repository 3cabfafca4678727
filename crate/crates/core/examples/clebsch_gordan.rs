// Squared Clebsch-Gordan coefficients as exact rationals.

use asymq::schur_weyl::{cg_squared, HalfInt};

pub fn run_example() -> asymq::Result<()> {
    let half = HalfInt::from_twice(1);
    let zero = HalfInt::from_twice(0);
    let one = HalfInt::from_twice(2);
    let down = HalfInt::from_twice(-1);
    // two spin-1/2 particles coupled to j = 1 and j = 0
    let triplet = cg_squared(half, half, half, down, one, zero);
    let singlet = cg_squared(half, half, half, down, zero, zero);
    println!("<1/2 1/2; 1/2 -1/2 | 1 0>^2 = {triplet}");
    println!("<1/2 1/2; 1/2 -1/2 | 0 0>^2 = {singlet}");
    assert_eq!(
        triplet + singlet,
        num_rational::BigRational::from_integer(1.into())
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
