//! The GNS representation of a state.

use fdvn::{random, structure, FdAlgebra, LinMap, ToleranceConfig};

fn main() -> fdvn::Result<()> {
    let tol = ToleranceConfig::default();
    for n in [2, 3] {
        let mn = FdAlgebra::matrix(n);
        let trace = LinMap::from_density(&mn.unit().scale_real(1.0 / n as f64));
        println!(
            "trace state on M{n}: Hilbert space dimension {}",
            structure::gns(&trace, &tol)?.hilbert_dim
        );
    }

    let m3 = FdAlgebra::matrix(3);
    let mut rng = random::rng(1);
    let rho = random::low_rank_positive(&mut rng, &m3, 1);
    let omega = LinMap::from_density(&rho.scale_real(1.0 / rho.trace().re));
    let r = structure::gns(&omega, &tol)?;
    let (rep_carrier, state_carrier) = r.carriers(&tol)?;
    println!(
        "pure state on M3: dimension {}, rho miu {}, carriers agree {}",
        r.hilbert_dim,
        r.rep.is_miu(&tol),
        rep_carrier.approx_eq(&state_carrier, &tol)
    );
    Ok(())
}
