//! Linear maps: Choi test, positivity verdicts, carriers and the diamond operations.

use fdvn::{random, Element, FdAlgebra, LinMap, ToleranceConfig};

fn main() -> fdvn::Result<()> {
    let tol = ToleranceConfig::default();
    let m2 = FdAlgebra::matrix(2);

    let transpose = LinMap::from_fn(&m2, &m2, |x| x.map_blocks(|_, m| m.transpose()));
    println!(
        "transpose: Choi min eigenvalue {:.3}, CP {}, positivity verdict {}",
        transpose.choi_min_eigenvalue(),
        transpose.is_completely_positive(&tol),
        transpose.is_positive_map(200, 0, &tol).label()
    );

    let mut rng = random::rng(2);
    let dom = FdAlgebra::new(vec![2, 1])?;
    let f = random::cpu_map(&mut rng, &dom, &FdAlgebra::matrix(3), 2);
    println!(
        "random unital CP map: CP {}, unital {}, miu {}",
        f.is_completely_positive(&tol),
        f.is_unital(&tol),
        f.is_miu(&tol)
    );

    let p = Element::diag(&[1.0, 0.0]);
    let g = LinMap::conjugation_by(&p);
    println!(
        "carrier of x -> pxp: {:?}",
        g.carrier(&tol)?.blocks()[0].diagonal().map(|z| z.re).as_slice()
    );
    println!("g^diamond(1 - p) = {:?}", g.diamond_fwd(&p.perp(), &tol)?.is_zero(&tol));

    let omega = random::state(&mut rng, &m2);
    println!(
        "random state is a positive functional: {}",
        omega.is_positive_functional(&tol)?
    );
    Ok(())
}
