//! Ceilings, floors, supports, joins and meets, central supports.

use fdvn::projections::{self, ranks};
use fdvn::{random, FdAlgebra, ToleranceConfig};

fn main() -> fdvn::Result<()> {
    let tol = ToleranceConfig::default();
    let m4 = FdAlgebra::matrix(4);
    let mut rng = random::rng(3);

    let p = random::projection_of_rank(&mut rng, &m4, 2);
    let q = random::projection_of_rank(&mut rng, &m4, 2);
    let lhs = projections::ceiling(&(&(&p * &q) * &p), &tol)?;
    let rhs = projections::meet(
        &m4,
        &[p.clone(), projections::join(&m4, &[p.perp(), q.clone()], &tol)?],
        &tol,
    )?;
    println!(
        "ceil(pqp) ranks {:?}, p meet (p^perp join q) ranks {:?}, distance {:.1e}",
        ranks(&lhs),
        ranks(&rhs),
        (&lhs - &rhs).norm()
    );

    let a = random::effect_with_atoms(&mut rng, &m4);
    let floor = projections::floor(&a, &tol)?;
    let dual = projections::ceiling(&a, &tol)?.perp();
    println!(
        "floor(a) ranks {:?}; ceil(a)^perp = floor(a^perp): {}",
        ranks(&floor),
        dual.approx_eq(&projections::floor(&a.perp(), &tol)?, &tol)
    );

    let b = &random::element(&mut rng, &m4) * &p;
    println!(
        "support of b ranks {:?}, range ranks {:?}",
        ranks(&projections::support(&b, &tol)),
        ranks(&projections::range(&b, &tol))
    );

    let sum = FdAlgebra::new(vec![2, 2])?;
    let e = random::projection_of_rank(&mut rng, &FdAlgebra::matrix(2), 1);
    let e = fdvn::Element::direct_sum(&[e, FdAlgebra::matrix(2).zero()]);
    let z = projections::central_support(&e, &tol);
    println!(
        "central support of a rank-one projection in the first summand of {sum}: {:?}",
        ranks(&z)
    );
    Ok(())
}
