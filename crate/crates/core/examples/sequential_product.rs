//! The sequential product and the five axioms characterising it, with the
//! four candidate operations that each break exactly one axiom.

use fdvn::measurement::{self, AxiomCorpus, BinOpSpec};
use fdvn::{Element, FdAlgebra, ToleranceConfig};

fn main() -> fdvn::Result<()> {
    let tol = ToleranceConfig::default().with_eps_rel(1e-8);
    let p = Element::diag(&[0.5, 1.0]);
    let q = Element::real_matrix(2, &[0.5, 0.5, 0.5, 0.5]);
    println!(
        "p * q = {}",
        fdvn::json::element_to_json(&measurement::seq_product(&p, &q, &tol)?)
    );

    let alg = FdAlgebra::new(vec![2, 1])?;
    let corpus = AxiomCorpus::new(&alg, 60, 7);
    let mut ops = vec![BinOpSpec::standard()];
    ops.extend(measurement::counterexample_ops());
    for op in &ops {
        let rep = measurement::check_axioms_on(op, &alg, &corpus, &tol);
        let row: Vec<String> = rep
            .results
            .iter()
            .map(|(a, o)| format!("{a}:{}", o.status.label()))
            .collect();
        println!("{:<10} {}", op.name, row.join(" "));
    }

    // a failing axiom carries its witness
    let ceil = BinOpSpec::builtin("ceil".parse()?);
    let rep = measurement::check_axioms(&ceil, &FdAlgebra::matrix(2), 50, 7, &tol);
    let w = rep.results[&measurement::Axiom::A].witness.as_ref().expect("A fails");
    println!(
        "ceil witness: {} at p = {:?}",
        w.message,
        w.elements[0].1.blocks()[0].diagonal().map(|z| z.re).as_slice()
    );
    Ok(())
}
