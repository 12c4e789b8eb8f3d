//! Spectra and the functional calculus on a direct sum of matrix blocks.

use fdvn::spectral::{self, NamedFunction};
use fdvn::{random, Element, FdAlgebra, ToleranceConfig};

fn main() -> fdvn::Result<()> {
    let tol = ToleranceConfig::default();

    // sp((0 2;0 0)) = {0} although the norm is 2
    let nil = Element::real_matrix(2, &[0.0, 2.0, 0.0, 0.0]);
    println!(
        "spectrum of nilpotent: {:?}, norm {}",
        spectral::spectrum(&nil).values,
        nil.norm()
    );

    let alg = FdAlgebra::new(vec![2, 1])?;
    let mut rng = random::rng(1);
    let a = random::positive(&mut rng, &alg);
    let root = spectral::sqrt(&a, &tol)?;
    println!("|sqrt(a)^2 - a| = {:.2e}", (&(&root * &root) - &a).norm());

    let h = random::self_adjoint(&mut rng, &alg);
    let (pos, neg) = (spectral::pos_part(&h, &tol)?, spectral::neg_part(&h, &tol)?);
    println!(
        "|h - (h+ - h-)| = {:.2e}, |h+ h-| = {:.2e}",
        (&h - &(&pos - &neg)).norm(),
        (&pos * &neg).norm()
    );

    // the phase function used by one of the sequential-product counterexamples
    let phase = "exp-phase".parse::<NamedFunction>()?.apply(&a, &tol)?;
    println!(
        "exp-phase(a) unitary: {}",
        (&phase.adjoint() * &phase).approx_eq(&alg.unit(), &tol)
    );

    // the square root needs a positive argument
    println!("sqrt of nilpotent: {:?}", spectral::sqrt(&nil, &tol).unwrap_err());
    Ok(())
}
