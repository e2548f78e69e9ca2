//! Smith normal form with transforms, and solving an integer system.

use num_bigint::BigInt;

use khovanov::linalg::{smith_normal_form_dense, solve_in_image_dense, DenseMatrix};

fn show(name: &str, m: &DenseMatrix) {
    println!("{name}:");
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("{x:>4}")).collect();
        println!("  [{}]", row.join(""));
    }
}

fn main() -> khovanov::Result<()> {
    let m = DenseMatrix::from_i64_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let snf = smith_normal_form_dense(&m);
    show("M", &m);
    show("S = U M V", &snf.s);
    show("U", &snf.u);
    show("V", &snf.v);
    let factors: Vec<String> = snf
        .invariant_factors
        .iter()
        .map(ToString::to_string)
        .collect();
    println!("invariant factors {}", factors.join(", "));
    for target in [[2, 0, 2], [1, 0, 0]] {
        let t: Vec<BigInt> = target.iter().map(|&x| BigInt::from(x)).collect();
        match solve_in_image_dense(&m, &t)? {
            Some(x) => println!("M x = {target:?} solved by x = {x:?}"),
            None => println!("M x = {target:?} has no integer solution"),
        }
    }
    Ok(())
}
