//! Tensor products, monoidal coherence, duplicability and the classical reflection.

use fdvn::{random, tensor, FdAlgebra, ToleranceConfig};

fn main() -> fdvn::Result<()> {
    let tol = ToleranceConfig::default();
    let (a, b) = (FdAlgebra::new(vec![2, 1])?, FdAlgebra::matrix(2));
    let ts = tensor::tensor_algebra(&a, &b);
    println!("{a} (x) {b} = {}", ts.product);

    let mut rng = random::rng(9);
    let (x, y) = (random::element(&mut rng, &a), random::element(&mut rng, &b));
    let xy = ts.tensor(&x, &y)?;
    println!("|x (x) y| - |x||y| = {:.1e}", xy.norm() - x.norm() * y.norm());

    let (lhs, rhs) = tensor::pentagon_sides(&a, &b, &FdAlgebra::classical(2), &a);
    println!("pentagon commutes: {}", lhs.approx_eq(&rhs, &tol));
    let [(h1, h2), (h3, h4)] = tensor::hexagon_sides(&a, &b, &a);
    println!(
        "hexagons commute: {} {}",
        h1.approx_eq(&h2, &tol),
        h3.approx_eq(&h4, &tol)
    );

    for alg in [FdAlgebra::classical(3), FdAlgebra::matrix(2)] {
        match tensor::duplicator(&alg) {
            Some(d) => println!("{alg}: duplicator, CP {}", d.is_completely_positive(&tol)),
            None => {
                let w = tensor::multiplication_witness(&alg, 1000, 0, &tol).expect("noncommutative");
                println!(
                    "{alg}: multiplication sends a positive input to a non-positive image (|image - image*| = {:.3})",
                    (&w.image - &w.image.adjoint()).norm()
                );
            }
        }
    }

    let mixed = FdAlgebra::new(vec![2, 1, 3, 1])?;
    println!(
        "one-dimensional blocks of {mixed}: {:?} -> {}",
        tensor::nsp(&mixed),
        tensor::bang(&mixed)
    );
    Ok(())
}
