//! Corners, filters, the bracket of a map and purity.

use fdvn::{measurement, random, FdAlgebra, LinMap, ToleranceConfig};

fn main() -> fdvn::Result<()> {
    let tol = ToleranceConfig::default();
    let m3 = FdAlgebra::matrix(3);
    let mut rng = random::rng(4);

    // spectrum {1, 0.4, 0}: ceiling of rank two, floor of rank one
    let p = fdvn::Element::from_blocks(vec![random::with_spectrum(&mut rng, &[1.0, 0.4, 0.0])])?;
    let ctx = measurement::corner_algebra(&fdvn::projections::ceiling(&p, &tol)?, &tol)?;
    println!("corner under the ceiling of p: {}", ctx.corner);

    let filter = measurement::standard_filter(&p, &tol)?;
    let corner = measurement::standard_corner(&p, &tol)?;
    println!(
        "filter {} -> {}, corner {} -> {}",
        filter.dom(),
        filter.cod(),
        corner.dom(),
        corner.cod()
    );

    let report = measurement::purity_report(&filter, &tol)?;
    println!(
        "filter pure: {} (bracket unital {}, min singular value {:.3})",
        report.is_pure(),
        report.unital,
        report.min_singular_value
    );

    let mix = filter.scale_real(0.5).add(
        &LinMap::conjugation_by(&random::unitary(&mut rng, &m3))
            .compose(&filter)
            .scale_real(0.5),
    )?;
    println!("mixture of two filters pure: {}", measurement::is_pure(&mix, &tol)?);

    // f = filter ∘ h has f(1) <= p, and factoring recovers h
    let h = random::cpsu_map(&mut rng, &FdAlgebra::matrix(2), filter.dom(), 1, 0.8);
    let f = filter.compose(&h);
    let root = fdvn::spectral::sqrt(&p, &tol)?;
    let g = measurement::factor_through_filter(&f, &root, &tol)?;
    println!(
        "factor through the filter recovers h: {}",
        g.approx_eq(&h, &ToleranceConfig::default().with_eps_rel(1e-7))
    );
    Ok(())
}
