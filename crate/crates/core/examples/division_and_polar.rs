//! Polar decomposition, pseudoinverses and division.

use fdvn::{division, projections, random, FdAlgebra, ToleranceConfig};

fn main() -> fdvn::Result<()> {
    let tol = ToleranceConfig::default();
    let alg = FdAlgebra::new(vec![3, 1])?;
    let mut rng = random::rng(5);

    // rank-deficient input
    let a = &random::element(&mut rng, &alg) * &random::projection_of_rank(&mut rng, &alg, 2);
    let parts = division::polar(&a, &tol);
    println!(
        "polar residual {:.2e}",
        (&a - &(&parts.isometry * &parts.modulus)).norm()
    );

    let b = random::element(&mut rng, &alg);
    let cc = random::element(&mut rng, &alg);
    let q = division::divide(&(&cc * &b), &b, &tol)?;
    println!(
        "(cb)/b = c on the range of b: {}",
        q.approx_eq(&(&cc * &projections::range(&b, &tol)), &tol)
    );
    let lambda = division::douglas_lambda(&(&cc * &b), &b, &tol)?.expect("a = cb factors");
    println!("|a/b| = {:.6} <= lambda = {lambda:.6}", q.norm());

    let approx = division::approximate_pseudoinverse(&a, &tol);
    let s = &approx.sum(&a) * &a;
    println!(
        "{} bands; sum t_n a equals the support: {}",
        approx.terms.len(),
        s.approx_eq(&projections::support(&a, &tol), &tol)
    );

    // division by a non-divisor
    let e = random::projection_of_rank(&mut rng, &alg, 1);
    println!(
        "dividing by a rank-one projection: {:?}",
        division::divide(&random::element(&mut rng, &alg), &e, &tol).err()
    );
    Ok(())
}
