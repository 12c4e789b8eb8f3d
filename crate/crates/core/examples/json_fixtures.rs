//! JSON encoding of algebras, elements and maps, and seeded fixtures.

use fdvn::json::{element_from_json, element_to_json, map_from_json, map_to_json, parse};
use fdvn::{random, FdAlgebra};

fn main() -> fdvn::Result<()> {
    let alg = FdAlgebra::new(vec![1, 2])?;
    let mut rng = random::rng(0);
    let p = random::projection_of_rank(&mut rng, &alg, 1);
    let text = element_to_json(&p).to_string();
    println!("{text}");
    assert_eq!(element_from_json(&parse(&text)?)?, p);

    let f = random::cp_map(&mut rng, &FdAlgebra::complex(), &alg, 1);
    let text = map_to_json(&f).to_string();
    println!("{text}");
    assert_eq!(map_from_json(&parse(&text)?)?.matrix(), f.matrix());

    println!(
        "{}",
        fdvn::json::error_object("NotPositive", "element is not positive", None)
    );
    Ok(())
}
