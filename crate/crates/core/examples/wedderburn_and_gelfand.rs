//! Recovering the block structure of a *-subalgebra of a matrix algebra.

use fdvn::structure::{self, generate_subalgebra};
use fdvn::{random, Element, FdAlgebra, ToleranceConfig};

fn main() -> fdvn::Result<()> {
    let tol = ToleranceConfig::default();
    let mut rng = random::rng(12);

    // M2 ⊗ 1_2 ⊕ C hidden in M5 by a random unitary
    let (s, _) = structure::random_embedded_subalgebra(&mut rng, &[(2, 2), (1, 1)], &tol)?;
    println!("subalgebra of {} with dimension {}", s.ambient, s.dim());
    let w = structure::wedderburn(&s, 0, &tol)?;
    println!("block sizes {:?}; embedding miu: {}", w.dims, w.embedding.is_miu(&tol));

    // a commutative subalgebra generated by one self-adjoint element
    let m4 = FdAlgebra::matrix(4);
    let h = Element::from_blocks(vec![random::with_spectrum(&mut rng, &[0.0, 1.0, 1.0, 3.0])])?;
    let c = generate_subalgebra(&m4, std::slice::from_ref(&h), &tol)?;
    let g = structure::gelfand_finite(&c, 0, &tol)?;
    println!(
        "Gelfand points: {}; values of h: {:?}",
        g.points,
        g.evaluate(&h, &tol)?
            .iter()
            .map(|z| (z.re * 1e6).round() / 1e6)
            .collect::<Vec<_>>()
    );
    Ok(())
}
