//! The acceptance battery: ten seeded property checks over the library, each
//! reporting pass/fail with a detail line and, on failure, a JSON witness.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use serde_json::{json, Value};

use crate::algebra::{Element, FdAlgebra};
use crate::division;
use crate::error::Error;
use crate::json::{element_to_json, map_to_json, num};
use crate::linalg::{self, c, Matrix};
use crate::maps::LinMap;
use crate::measurement::{self, AxiomCorpus, BinOpSpec};
use crate::projections;
use crate::random::{self, SeededRng};
use crate::spectral;
use crate::structure;
use crate::tensor;
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Reduced instance counts, for a quick run.
    Smoke,
    /// The stated instance counts.
    Full,
}

impl Level {
    fn count(self, full: usize) -> usize {
        match self {
            Level::Full => full,
            Level::Smoke => full.div_ceil(10).max(2),
        }
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "smoke" => Ok(Level::Smoke),
            "full" => Ok(Level::Full),
            _ => Err(Error::Parse(format!("unknown level {s:?}; expected smoke or full"))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Smoke => "smoke",
            Level::Full => "full",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub witness: Option<Value>,
    pub millis: u128,
}

impl CriterionResult {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "id": self.id,
            "name": self.name,
            "status": if self.passed { "pass" } else { "fail" },
            "detail": self.detail,
            "millis": self.millis as u64,
        });
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        v
    }
}

pub const CRITERIA: [(usize, &str); 10] = [
    (1, "sequential-product axioms and counterexamples"),
    (2, "square root of diamond-positive maps"),
    (3, "Choi criterion versus n-positivity"),
    (4, "division, polar and approximate pseudoinverse"),
    (5, "projection lattice identities"),
    (6, "Wedderburn recovery"),
    (7, "GNS construction"),
    (8, "duplicability"),
    (9, "monoidal coherence"),
    (10, "inequalities and concrete values"),
];

struct Failure {
    detail: String,
    witness: Option<Value>,
}

type Outcome = Result<String, Failure>;

fn fail(detail: impl Into<String>, witness: Option<Value>) -> Failure {
    Failure {
        detail: detail.into(),
        witness,
    }
}

// NaN comparisons are false, so they fail the check
macro_rules! ensure {
    ($cond:expr, $msg:expr) => {
        let ok: bool = $cond;
        if !ok {
            return Err(fail($msg, None));
        }
    };
    ($cond:expr, $msg:expr, $wit:expr) => {
        let ok: bool = $cond;
        if !ok {
            return Err(fail($msg, Some($wit)));
        }
    };
}

fn lib_err(e: Error) -> Failure {
    fail(format!("{}: {e}", e.name()), None)
}

fn tol8() -> ToleranceConfig {
    ToleranceConfig::default().with_eps_rel(1e-8)
}

pub fn run_criterion(id: usize, level: Level, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .unwrap_or("unknown criterion");
    let seed = seed.wrapping_add(id as u64 * 0x9e37_79b9);
    let outcome = match id {
        1 => seq_product_battery(level, seed),
        2 => square_root_axiom(level, seed),
        3 => choi_agreement(level, seed),
        4 => division_suite(level, seed),
        5 => lattice_identities(level, seed),
        6 => wedderburn_recovery(level, seed),
        7 => gns_suite(level, seed),
        8 => duplicability(level, seed),
        9 => monoidal_coherence(level, seed),
        10 => inequality_corpus(level, seed),
        _ => Err(fail(format!("no criterion {id}"), None)),
    };
    let (passed, detail, witness) = match outcome {
        Ok(d) => (true, d, None),
        Err(f) => (false, f.detail, f.witness),
    };
    CriterionResult {
        id,
        name,
        passed,
        detail,
        witness,
        millis: start.elapsed().as_millis(),
    }
}

/// Runs every criterion, each on its own thread; results in criterion order.
pub fn run_all(level: Level, seed: u64) -> Vec<CriterionResult> {
    std::thread::scope(|s| {
        let handles: Vec<_> = CRITERIA
            .iter()
            .map(|&(id, _)| s.spawn(move || run_criterion(id, level, seed)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion panicked"))
            .collect()
    })
}

fn seq_product_battery(level: Level, seed: u64) -> Outcome {
    let tol = tol8();
    let trials = level.count(200);
    let mut lines = Vec::new();
    for dims in [vec![2], vec![3], vec![2, 1]] {
        let alg = FdAlgebra::new(dims)?;
        let corpus = AxiomCorpus::new(&alg, trials, seed);
        let std = measurement::check_axioms_on(&BinOpSpec::standard(), &alg, &corpus, &tol);
        ensure!(
            std.failed().is_empty() && std.effect_violations == 0,
            format!("standard product fails {:?} on {:?}", std.failed(), alg.dims()),
            std.to_json()
        );
        for op in measurement::counterexample_ops() {
            let rep = measurement::check_axioms_on(&op, &alg, &corpus, &tol);
            let target = op.target.expect("counterexamples have a target");
            let has_witness = rep.results[&target].witness.is_some();
            ensure!(
                rep.failed() == vec![target] && has_witness,
                format!(
                    "{} on {:?} fails {:?}, expected only {target}",
                    op.name,
                    alg.dims(),
                    rep.failed()
                ),
                rep.to_json()
            );
        }
        lines.push(format!("{:?}", alg.dims()));
    }
    Ok(format!(
        "standard product passes A-E and each counterexample fails only its axiom on {} ({trials} tuples each)",
        lines.join(", ")
    ))
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        lib_err(e)
    }
}

fn square_root_axiom(level: Level, seed: u64) -> Outcome {
    let tol = tol8();
    let mut rng = random::rng(seed);
    let m3 = FdAlgebra::matrix(3);
    let n = level.count(50);
    for _ in 0..n {
        let p = random::positive(&mut rng, &m3);
        let quarter = spectral::power(&p, 0.25, &tol)?;
        let g = LinMap::conjugation_by(&quarter);
        let gg = g.apply(&g.apply(&m3.unit()));
        ensure!(
            measurement::is_diamond_positive(&g, &tol)? && gg.approx_eq(&p, &tol),
            "p^(1/4)(.)p^(1/4) is not a diamond-positive square root",
            element_to_json(&p)
        );
        let u = loop {
            let u = random::unitary(&mut rng, &m3);
            let scalar = m3.unit().scale(u.trace() / c(3.0));
            if (&u - &scalar).norm() > 0.1 {
                break u;
            }
        };
        let f = measurement::twisted_filter(&p, &u, &tol)?;
        ensure!(
            !measurement::is_diamond_positive(&f, &tol)?,
            "twisted filter accepted as diamond-positive",
            json!({ "p": element_to_json(&p), "u": element_to_json(&u) })
        );
    }
    Ok(format!("{n} square roots accepted, {n} twisted filters rejected (M3)"))
}

fn transpose_map(alg: &FdAlgebra) -> LinMap {
    LinMap::from_fn(alg, alg, |x| x.map_blocks(|_, m| m.transpose()))
}

/// Searches tuples `(a_1..a_k)`, `k ≤ max_len`, for one where the block matrix
/// `[f(a_i* a_j)]` fails to be positive. Half the tuples are Gaussian, half
/// are rank-one `|u⟩⟨w_i|`.
pub fn n_positivity_violation(
    f: &LinMap,
    tuples: usize,
    max_len: usize,
    rng: &mut SeededRng,
    tol: &ToleranceConfig,
) -> Option<Value> {
    let dom = f.dom();
    for t in 0..tuples {
        let k = rng.random_range(1..=max_len);
        let b = rng.random_range(0..dom.num_blocks());
        let n = dom.dims()[b];
        let tuple: Vec<Element> = (0..k)
            .map(|_| {
                let m = if t % 2 == 0 {
                    random::ginibre(rng, n, n)
                } else {
                    let u = random::gaussian_vector(rng, n);
                    let w = random::gaussian_vector(rng, n);
                    &u * w.adjoint()
                };
                dom.embed_block(b, m).expect("shape")
            })
            .collect();
        for (cb, &m) in f.cod().dims().iter().enumerate() {
            let mut big = Matrix::zeros(k * m, k * m);
            let mut scale: f64 = 1.0;
            for i in 0..k {
                for j in 0..k {
                    let img = f.apply(&(&tuple[i].adjoint() * &tuple[j]));
                    scale = scale.max(img.norm());
                    big.view_mut((i * m, j * m), (m, m)).copy_from(img.block(cb));
                }
            }
            let min = linalg::hermitian_eigen(&linalg::hermitian_part(&big))
                .0
                .first()
                .cloned()
                .unwrap_or(0.0);
            if min < -tol.at_scale(scale) {
                return Some(json!({
                    "tuple": tuple.iter().map(element_to_json).collect::<Vec<_>>(),
                    "codomain_block": cb,
                    "min_eigenvalue": num(min),
                }));
            }
        }
    }
    None
}

fn choi_agreement(level: Level, seed: u64) -> Outcome {
    let tol = ToleranceConfig::default();
    let mut rng = random::rng(seed);
    let m2 = FdAlgebra::matrix(2);
    let transpose = transpose_map(&m2);
    let n = level.count(100);
    let (mut cp_count, mut non_cp) = (0, 0);
    for i in 0..n {
        let conj = |rng: &mut SeededRng| {
            LinMap::conjugation_by(&Element::from_blocks(vec![random::ginibre(rng, 2, 2)]).unwrap())
        };
        let f = if i % 2 == 0 {
            let k = rng.random_range(1..=3);
            (1..k).fold(conj(&mut rng), |acc, _| acc.add(&conj(&mut rng)).unwrap())
        } else {
            let t: f64 = rng.random_range(0.2..1.0);
            let twisted = transpose.compose(&conj(&mut rng)).scale_real(t);
            twisted.add(&conj(&mut rng).scale_real(1.0 - t)).unwrap()
        };
        let cp = f.is_completely_positive(&tol);
        let violation = n_positivity_violation(&f, 500, 4, &mut rng, &tol);
        ensure!(
            cp == violation.is_none(),
            format!(
                "Choi says CP={cp} but the tuple search {} a violation",
                if violation.is_some() { "found" } else { "did not find" }
            ),
            json!({ "map": map_to_json(&f), "choi_min_eigenvalue": num(f.choi_min_eigenvalue()), "violation": violation })
        );
        if cp {
            cp_count += 1;
        } else {
            non_cp += 1;
        }
    }
    let lam = transpose.choi_min_eigenvalue();
    ensure!(
        !transpose.is_completely_positive(&tol) && (lam + 1.0).abs() <= 1e-9,
        format!("transpose Choi minimum eigenvalue {lam}")
    );
    Ok(format!(
        "{n} maps agree ({cp_count} CP, {non_cp} not CP); transpose Choi eigenvalue {lam:.12}"
    ))
}

fn division_suite(level: Level, seed: u64) -> Outcome {
    let tol = ToleranceConfig::default();
    let t8 = tol8();
    let mut rng = random::rng(seed);
    let algs = [FdAlgebra::matrix(3), FdAlgebra::new(vec![2, 1])?];
    let n_polar = level.count(200);
    let mut worst: f64 = 0.0;
    for i in 0..n_polar {
        let alg = &algs[i % 2];
        let a = if i % 3 == 0 {
            &random::element(&mut rng, alg) * &random::projection(&mut rng, alg)
        } else {
            random::element(&mut rng, alg)
        };
        let parts = division::polar(&a, &tol);
        let res = (&a - &(&parts.isometry * &parts.modulus)).norm();
        worst = worst.max(res / (1.0 + a.norm()));
        ensure!(
            res <= 1e-9 * (1.0 + a.norm()),
            format!("polar residual {res:e}"),
            element_to_json(&a)
        );
    }
    let n_douglas = level.count(100);
    for i in 0..n_douglas {
        let alg = &algs[i % 2];
        let b = if i % 2 == 0 {
            &random::element(&mut rng, alg) * &random::projection(&mut rng, alg)
        } else {
            random::element(&mut rng, alg)
        };
        let cc = random::element(&mut rng, alg);
        let a = &cc * &b;
        let q = division::divide(&a, &b, &tol)?;
        let range_b = projections::range(&b, &tol);
        let scale = cc.norm().max(1.0);
        let err = (&q - &(&cc * &range_b)).norm();
        ensure!(
            err <= 1e-8 * scale,
            format!("a/b misses c on the range of b by {err:e}"),
            json!({ "b": element_to_json(&b), "c": element_to_json(&cc) })
        );
        let lambda =
            division::douglas_lambda(&a, &b, &tol)?.ok_or_else(|| fail("no Douglas bound for a = cb", None))?;
        ensure!(
            q.norm() <= lambda + 1e-8,
            format!("|a/b| = {} exceeds lambda = {lambda}", q.norm())
        );
    }
    let n_api = level.count(100);
    for i in 0..n_api {
        let alg = &algs[i % 2];
        let a = if i % 2 == 0 {
            random::low_rank_positive(&mut rng, alg, 1)
        } else {
            random::element(&mut rng, alg)
        };
        let ap = division::approximate_pseudoinverse(&a, &tol);
        let lhs = &ap.sum(&a) * &a;
        let supp = projections::support(&a, &tol);
        ensure!(
            lhs.approx_eq(&supp, &t8),
            "sum of t_n a differs from the support",
            element_to_json(&a)
        );
    }
    Ok(format!(
        "{n_polar} polar residuals (worst {worst:.1e} relative), {n_douglas} quotients, {n_api} approximate pseudoinverses"
    ))
}

fn same_projection(p: &Element, q: &Element) -> bool {
    projections::ranks(p) == projections::ranks(q) && (p - q).norm() <= 1e-8
}

fn lattice_identities(level: Level, seed: u64) -> Outcome {
    let tol = ToleranceConfig::default();
    let mut rng = random::rng(seed);
    let n = level.count(200);
    for alg in [FdAlgebra::matrix(4), FdAlgebra::new(vec![2, 2])?] {
        for _ in 0..n {
            let (p, q) = (random::projection(&mut rng, &alg), random::projection(&mut rng, &alg));
            let lhs = projections::ceiling(&(&(&p * &q) * &p), &tol)?;
            let rhs = projections::meet(
                &alg,
                &[p.clone(), projections::join(&alg, &[p.perp(), q.clone()], &tol)?],
                &tol,
            )?;
            ensure!(
                same_projection(&lhs, &rhs),
                "ceil(pqp) != p meet (p^perp join q)",
                json!({"p": element_to_json(&p), "q": element_to_json(&q)})
            );

            let (a, b) = (
                random::effect_with_atoms(&mut rng, &alg),
                random::effect_with_atoms(&mut rng, &alg),
            );
            let ra = spectral::sqrt(&a, &tol)?;
            let lhs = projections::floor(&(&(&ra * &b) * &ra).real_part(), &tol)?;
            let rhs = projections::meet(
                &alg,
                &[projections::floor(&a, &tol)?, projections::floor(&b, &tol)?],
                &tol,
            )?;
            ensure!(
                same_projection(&lhs, &rhs),
                "floor(sqrt(a) b sqrt(a)) != floor(a) meet floor(b)",
                json!({"a": element_to_json(&a), "b": element_to_json(&b)})
            );

            let lhs = projections::ceiling(&a, &tol)?.perp();
            let rhs = projections::floor(&a.perp(), &tol)?;
            ensure!(
                same_projection(&lhs, &rhs),
                "ceil(a)^perp != floor(a^perp)",
                element_to_json(&a)
            );

            let rank = rng.random_range(1..alg.dims()[0] + 1);
            let x = random::low_rank_positive(&mut rng, &alg, rank);
            let f = random::cp_map(&mut rng, &alg, &alg, 1);
            let lhs = projections::ceiling(&f.apply(&x).real_part(), &tol)?;
            let rhs = projections::ceiling(&f.apply(&projections::ceiling(&x, &tol)?).real_part(), &tol)?;
            ensure!(
                same_projection(&lhs, &rhs),
                "ceil(f(a)) != ceil(f(ceil(a)))",
                json!({"a": element_to_json(&x), "f": map_to_json(&f)})
            );
        }
    }
    Ok(format!("4 identities x {n} instances on M4 and M2+M2"))
}

fn wedderburn_recovery(level: Level, seed: u64) -> Outcome {
    let tol = ToleranceConfig::default();
    let t8 = tol8();
    let mut rng = random::rng(seed);
    let n = level.count(50);
    for i in 0..n {
        let blocks: Vec<(usize, usize)> = loop {
            let k = rng.random_range(1..=3);
            let b: Vec<(usize, usize)> = (0..k)
                .map(|_| (rng.random_range(1..=3), rng.random_range(1..=2)))
                .collect();
            if b.iter().map(|(n, m)| n * m).sum::<usize>() <= 6 {
                break b;
            }
        };
        let (s, _) = structure::random_embedded_subalgebra(&mut rng, &blocks, &tol)?;
        let w = structure::wedderburn(&s, seed + i as u64, &tol)?;
        let mut want: Vec<usize> = blocks.iter().map(|b| b.0).collect();
        let mut got = w.dims.clone();
        want.sort_unstable();
        got.sort_unstable();
        ensure!(
            got == want,
            format!("recovered dims {got:?}, expected {want:?} (multiplicities {blocks:?})")
        );
        ensure!(w.embedding.is_miu(&t8), format!("embedding for {blocks:?} is not miu"));
    }
    Ok(format!("{n} subalgebras recovered exactly"))
}

fn gns_suite(level: Level, seed: u64) -> Outcome {
    let tol = tol8();
    let mut rng = random::rng(seed);
    let n = level.count(30);
    for alg in [FdAlgebra::matrix(2), FdAlgebra::matrix(3), FdAlgebra::classical(3)] {
        for i in 0..n {
            let omega = if i % 3 == 0 {
                let rank = rng.random_range(1..=alg.dims()[0]);
                let mut rho = random::low_rank_positive(&mut rng, &alg, rank);
                if alg.is_commutative() {
                    // drop some points
                    let keep = rng.random_range(1..=alg.num_blocks());
                    rho = rho.map_blocks(|b, m| if b < keep { m.clone() } else { Matrix::zeros(1, 1) });
                }
                LinMap::from_density(&rho.scale_real(1.0 / rho.trace().re))
            } else {
                random::state(&mut rng, &alg)
            };
            let r = structure::gns(&omega, &tol)?;
            let basis = alg.basis();
            for a in &basis {
                for b in &basis {
                    let ip = r.eta_of(a).dotc(&r.eta_of(b));
                    let want = omega.eval_scalar(&(&a.adjoint() * b))?;
                    ensure!(
                        (ip - want).norm() <= tol.at_scale(1.0),
                        "<eta(a), eta(b)> != omega(a* b)",
                        map_to_json(&omega)
                    );
                    let lhs = r.rep.apply(a).block(0) * r.eta_of(b);
                    ensure!(
                        (lhs - r.eta_of(&(a * b))).norm() <= tol.at_scale(1.0),
                        "rho(a) eta(b) != eta(ab)",
                        map_to_json(&omega)
                    );
                }
            }
            ensure!(r.rep.is_miu(&tol), "rho is not miu", map_to_json(&omega));
            let (rc, wc) = r.carriers(&tol)?;
            ensure!(
                same_projection(&rc, &wc),
                "carrier of rho differs from the central carrier of omega",
                map_to_json(&omega)
            );
        }
    }
    for k in [2, 3] {
        let mk = FdAlgebra::matrix(k);
        let trace = LinMap::from_density(&mk.unit().scale_real(1.0 / k as f64));
        let d = structure::gns(&trace, &tol)?.hilbert_dim;
        ensure!(d == k * k, format!("trace state on M{k} gives dimension {d}"));
    }
    Ok(format!("{n} states each on M2, M3, C3; trace states give n^2"))
}

fn duplicability(level: Level, seed: u64) -> Outcome {
    let tol = ToleranceConfig::default();
    let cases = [
        (vec![1], true),
        (vec![1, 1, 1], true),
        (vec![2], false),
        (vec![2, 1], false),
        (vec![3], false),
    ];
    for (dims, expected) in &cases {
        let alg = FdAlgebra::new(dims.clone())?;
        ensure!(
            tensor::is_duplicable(&alg) == *expected,
            format!("wrong verdict for {dims:?}")
        );
        let mult = tensor::multiplication_map(&alg);
        if *expected {
            ensure!(
                mult.is_completely_positive(&tol),
                format!("multiplication on {dims:?} not CP")
            );
        } else {
            ensure!(
                tensor::multiplication_witness(&alg, 1000, seed, &tol).is_some(),
                format!("no positivity witness for multiplication on {dims:?} in 1000 samples")
            );
        }
    }
    let c3 = FdAlgebra::classical(3);
    let delta = tensor::duplicator(&c3).ok_or_else(|| fail("no duplicator on C3", None))?;
    ensure!(
        delta.is_completely_positive(&tol) && delta.is_subunital(&tol),
        "duplicator on C3 not npsu"
    );
    let ts = tensor::tensor_algebra(&c3, &c3);
    let mut rng = random::rng(seed);
    for _ in 0..level.count(50) {
        let (x, y) = (random::element(&mut rng, &c3), random::element(&mut rng, &c3));
        ensure!(
            delta.apply(&ts.tensor(&x, &c3.unit())?).approx_eq(&x, &tol),
            "left unit law fails"
        );
        ensure!(
            delta.apply(&ts.tensor(&c3.unit(), &x)?).approx_eq(&x, &tol),
            "right unit law fails"
        );
        ensure!(
            delta.apply(&ts.tensor(&x, &y)?).approx_eq(&(&x * &y), &tol),
            "duplicator is not pointwise multiplication"
        );
    }
    Ok("duplicable exactly on C, C3; witnesses found for M2, M2+C, M3; C3 duplicator is pointwise product".into())
}

fn random_simple(rng: &mut SeededRng, algs: &[&FdAlgebra]) -> (Vec<Element>, Element) {
    let parts: Vec<Element> = algs.iter().map(|a| random::element(rng, a)).collect();
    // right-nested: a ⊗ (b ⊗ (c ⊗ ...))
    let mut acc = parts.last().unwrap().clone();
    for p in parts.iter().rev().skip(1) {
        acc = tensor::tensor_elements(p, &acc);
    }
    (parts, acc)
}

fn monoidal_coherence(level: Level, seed: u64) -> Outcome {
    let tol = ToleranceConfig::default();
    let mut rng = random::rng(seed);
    let m2 = FdAlgebra::matrix(2);
    let c2 = FdAlgebra::classical(2);
    let mc = FdAlgebra::new(vec![2, 1])?;
    let isos = [
        ("associator", tensor::associator(&m2, &c2, &mc)),
        ("braiding", tensor::braiding(&m2, &mc)),
        ("left unitor", tensor::unitors(&mc).0),
        ("right unitor", tensor::unitors(&mc).1),
        ("distributor", tensor::distributor(&m2, &[c2.clone(), mc.clone()])),
    ];
    for (name, f) in &isos {
        ensure!(
            f.is_miu(&tol) && f.inverse(&tol).is_some(),
            format!("{name} is not an miu bijection")
        );
    }
    let probes = level.count(50);
    let close = |x: &Element, y: &Element| (x - y).norm() <= 1e-9 * x.norm().max(1.0);
    let (pl, pr) = tensor::pentagon_sides(&m2, &c2, &mc, &m2);
    let (tl, tr) = tensor::triangle_sides(&m2, &mc);
    let hex = tensor::hexagon_sides(&m2, &c2, &mc);
    let one = FdAlgebra::complex();
    for _ in 0..probes {
        let (_, x) = random_simple(&mut rng, &[&m2, &c2, &mc, &m2]);
        ensure!(
            close(&pl.apply(&x), &pr.apply(&x)),
            "pentagon fails",
            element_to_json(&x)
        );
        let (_, x) = random_simple(&mut rng, &[&m2, &one, &mc]);
        ensure!(
            close(&tl.apply(&x), &tr.apply(&x)),
            "triangle fails",
            element_to_json(&x)
        );
        let (parts, _) = random_simple(&mut rng, &[&m2, &c2, &mc]);
        // first hexagon starts from (A⊗B)⊗C, second from A⊗(B⊗C)
        let left_nested = tensor::tensor_elements(&tensor::tensor_elements(&parts[0], &parts[1]), &parts[2]);
        let right_nested = tensor::tensor_elements(&parts[0], &tensor::tensor_elements(&parts[1], &parts[2]));
        ensure!(
            close(&hex[0].0.apply(&left_nested), &hex[0].1.apply(&left_nested)),
            "first hexagon fails"
        );
        ensure!(
            close(&hex[1].0.apply(&right_nested), &hex[1].1.apply(&right_nested)),
            "second hexagon fails"
        );
    }
    let pairs = level.count(100);
    let algs = [&m2, &c2, &mc];
    for i in 0..pairs {
        let (a, b) = (algs[i % 3], algs[(i + 1) % 3]);
        let x = random::low_rank_positive(&mut rng, a, 1);
        let rank = rng.random_range(1..=2);
        let y = random::low_rank_positive(&mut rng, b, rank);
        let lhs = projections::ceiling(&tensor::tensor_elements(&x, &y), &tol)?;
        let rhs = tensor::tensor_elements(&projections::ceiling(&x, &tol)?, &projections::ceiling(&y, &tol)?);
        ensure!(
            same_projection(&lhs, &rhs),
            "ceil(a (x) b) != ceil(a) (x) ceil(b)",
            json!({"a": element_to_json(&x), "b": element_to_json(&y)})
        );
    }
    Ok(format!(
        "isomorphisms miu; pentagon, triangle, hexagons on {probes} probes; tensor ceilings on {pairs} pairs"
    ))
}

fn inequality_corpus(level: Level, seed: u64) -> Outcome {
    let tol = tol8();
    let mut rng = random::rng(seed);
    let n = level.count(100);
    let m2 = FdAlgebra::matrix(2);
    let m3 = FdAlgebra::matrix(3);
    let mc = FdAlgebra::new(vec![2, 1])?;
    for _ in 0..n {
        // Kadison: f(a)² ≤ f(a²) for unital CP f and self-adjoint a
        let f = random::cpu_map(&mut rng, &mc, &m3, 1);
        let a = random::self_adjoint(&mut rng, &mc);
        let fa = f.apply(&a);
        ensure!(
            (&fa * &fa).leq(&f.apply(&(&a * &a)), &tol),
            "Kadison inequality fails",
            map_to_json(&f)
        );
        // f(a)*f(a) ≤ ‖f(1)‖ f(a*a) for CP f
        let g = random::cp_map(&mut rng, &m2, &mc, 1);
        let b = random::element(&mut rng, &m2);
        let gb = g.apply(&b);
        let rhs = g.apply(&(&b.adjoint() * &b)).scale_real(g.apply(&m2.unit()).norm());
        ensure!(
            (&gb.adjoint() * &gb).leq(&rhs, &tol),
            "CP Cauchy-Schwarz fails",
            map_to_json(&g)
        );
        // ‖f(a)‖ ≤ ‖f(1)‖ on the unit ball
        let x = random::element(&mut rng, &m2);
        let r: f64 = rng.random_range(0.0..=1.0);
        let x = x.scale_real(r / x.norm());
        ensure!(
            g.apply(&x).norm() <= g.apply(&m2.unit()).norm() * (1.0 + 1e-9),
            "norm exceeds |f(1)|",
            map_to_json(&g)
        );
    }
    // multiplicative domain of f(x ⊕ y) = ½(x + u* y u) contains x ⊕ u x u*
    let dd = FdAlgebra::new(vec![2, 2])?;
    for _ in 0..n {
        let u = random::unitary(&mut rng, &m2);
        let f = LinMap::from_fn(&dd, &m2, |z| {
            let x = Element::from_blocks(vec![z.block(0).clone()]).unwrap();
            let y = Element::from_blocks(vec![z.block(1).clone()]).unwrap();
            (&x + &(&(&u.adjoint() * &y) * &u)).scale_real(0.5)
        });
        let x = random::element(&mut rng, &m2);
        let a = Element::direct_sum(&[x.clone(), &(&u * &x) * &u.adjoint()]);
        let fa = f.apply(&a);
        ensure!(
            f.apply(&(&a.adjoint() * &a)).approx_eq(&(&fa.adjoint() * &fa), &tol),
            "a not in the multiplicative domain"
        );
        let b = random::element(&mut rng, &dd);
        ensure!(
            f.apply(&(&b * &a)).approx_eq(&(&f.apply(&b) * &fa), &tol),
            "f(ba) != f(b) f(a) on the multiplicative domain"
        );
        ensure!(
            f.apply(&(&a * &b)).approx_eq(&(&fa * &f.apply(&b)), &tol),
            "f(ab) != f(a) f(b) on the multiplicative domain"
        );
    }
    let nil = Element::real_matrix(2, &[0.0, 2.0, 0.0, 0.0]);
    let sp = spectral::spectrum(&nil);
    ensure!(
        (nil.norm() - 2.0).abs() <= 1e-12,
        format!("|(0 2;0 0)| = {}", nil.norm())
    );
    ensure!(
        sp.values.iter().all(|z| z.norm() <= 1e-12),
        "spectrum of (0 2;0 0) is not {0}"
    );
    // numerical radius via max over θ of the top eigenvalue of Re(e^{iθ} x)
    let shift = Element::real_matrix(2, &[0.0, 1.0, 0.0, 0.0]);
    let steps = 3600;
    let radius = (0..steps)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
            let re = shift.scale(Complex64::from_polar(1.0, th)).real_part();
            *linalg::hermitian_eigen(re.block(0)).0.last().unwrap()
        })
        .fold(f64::NEG_INFINITY, f64::max);
    ensure!((radius - 0.5).abs() <= 1e-6, format!("vector-state supremum {radius}"));
    for _ in 0..1000 {
        let v = random::gaussian_vector(&mut rng, 2);
        let v = &v / c(v.norm());
        let val = v.dotc(&(shift.block(0) * &v)).norm();
        ensure!(val <= 0.5 + 1e-12, format!("vector state value {val} above 1/2"));
    }
    let a = Element::real_matrix(2, &[1.0, 0.0, 0.0, 0.0]);
    let b = &a + &Element::real_matrix(2, &[0.5, 0.5, 0.5, 0.5]);
    let gap = (&(&b * &b) - &(&a * &a)).min_eigenvalue();
    ensure!(
        a.leq(&b, &tol) && gap < -1e-3,
        format!("a <= b but b^2 - a^2 has minimum eigenvalue {gap}")
    );
    Ok(format!(
        "{n} instances each of Kadison, Cauchy-Schwarz, norm bound, multiplicative domain; |(0 2;0 0)| = 2, sp = {{0}}; numerical radius {radius:.9}; min eig(b^2 - a^2) = {gap:.6}"
    ))
}
