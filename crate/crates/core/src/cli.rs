//! The `fdvn` command line: JSON in, JSON out.
//!
//! Exit status 0 on success, 1 for unparsable arguments or input, 2 when an
//! operation's precondition fails (the error object names the variant), 3 when
//! an asserted property fails (the output carries a witness).

use std::fs;
use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{Element, FdAlgebra};
use crate::division;
use crate::error::Error;
use crate::json::{self as js, algebra_to_json, element_to_json, map_to_json, matrix_to_json, num};
use crate::maps::LinMap;
use crate::measurement::{self, BinOpSpec, OpKind};
use crate::projections;
use crate::random;
use crate::spectral::{self, NamedFunction};
use crate::structure::{self, StarSubalgebra};
use crate::tensor;
use crate::tolerance::ToleranceConfig;
use crate::verify::{self, Level};

#[derive(Parser, Debug)]
#[command(name = "fdvn", version, about = "Finite-dimensional von Neumann algebra toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Read the input document from FILE instead of stdin.
    #[arg(long = "in", global = true, value_name = "FILE")]
    pub input: Option<String>,
    /// Write the result to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance (eps_rel).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Spectrum of an element; with --f, the spectrum of f(a) and f(a) itself.
    Spectrum {
        #[arg(long = "f")]
        function: Option<String>,
    },
    /// Square root of a positive element (or another named function via --f).
    Sqrt {
        #[arg(long = "f")]
        function: Option<String>,
    },
    /// |a| = (a*a)^(1/2).
    Abs,
    Ceil,
    Floor,
    Support,
    /// Join of a list of projections.
    Join,
    /// Meet of a list of projections.
    Meet,
    /// Central support.
    Csupport,
    /// Polar decomposition {isometry, modulus}.
    Polar,
    /// Moore-Penrose pseudoinverse; --approx adds the band decomposition.
    Pinv {
        #[arg(long)]
        approx: bool,
    },
    /// a/b (default) or b\a from {"a", "b"}.
    Divide {
        #[arg(long, conflicts_with = "right")]
        left: bool,
        #[arg(long)]
        right: bool,
    },
    /// Sequential quotient of positive a by b from {"a", "b"}.
    Seqquot,
    /// Report (or with flags, assert) properties of a map.
    Checkmap {
        #[arg(long)]
        cp: bool,
        #[arg(long)]
        miu: bool,
        #[arg(long)]
        carrier: bool,
    },
    /// Choi elements of a map.
    Choi,
    /// Standard corner map of a projection.
    Corner,
    /// Standard filter of an effect.
    Filter,
    /// The bracket of a map.
    Bracket,
    Purity,
    /// Sequential product of {"p", "q"}.
    Seqprod,
    /// Check the five sequential-product axioms for a candidate operation.
    CheckAxioms {
        #[arg(long, default_value = "std")]
        op: String,
        #[arg(long, default_value = "2")]
        algebra: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Tensor product of algebras, e.g. `--algebras 2,1 2`.
    Tensor {
        #[arg(long, num_args = 1.., required = true)]
        algebras: Vec<String>,
    },
    /// Tensor product of {"a", "b"} elements.
    TensorEl,
    /// Duplicability of an algebra.
    DupCheck {
        #[arg(long)]
        algebra: Option<String>,
    },
    /// The classical reflection of an algebra.
    Bang {
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Block decomposition of a *-subalgebra {"ambient", "generators"}.
    Wedderburn,
    /// GNS construction of a state (map to C, or {"density": element}).
    Gns {
        #[arg(long)]
        state: Option<String>,
    },
    /// Points of a commutative *-subalgebra {"ambient", "generators"}.
    Gelfand,
    /// Run the acceptance battery.
    VerifySuite {
        #[arg(long, default_value = "smoke")]
        level: String,
        /// Only these criteria (1-10).
        #[arg(long, num_args = 1..)]
        only: Vec<usize>,
    },
    /// Seeded random fixtures.
    Gen {
        /// effect, projection, positive, element, self-adjoint, unitary, state, cp-map, cpu-map
        #[arg(long)]
        kind: String,
        #[arg(long, default_value = "2")]
        algebra: String,
        /// Codomain for maps (defaults to the domain).
        #[arg(long)]
        cod: Option<String>,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

/// Outcome of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
}

enum Failure {
    Usage(String),
    Precondition(Error),
    Property(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Usage(m),
            e => Failure::Precondition(e),
        }
    }
}

type CmdResult = Result<Value, Failure>;

/// Parses comma-separated block sizes, e.g. `2,1`.
pub fn parse_dims(s: &str) -> Result<FdAlgebra, Error> {
    let dims = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("bad block size {t:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    FdAlgebra::from_signed(&dims)
}

struct Ctx<'a> {
    common: Common,
    tol: ToleranceConfig,
    stdin: &'a mut dyn Read,
}

impl Ctx<'_> {
    fn read_from(&mut self, path: Option<&str>) -> Result<Value, Error> {
        let text = match path {
            Some(p) => fs::read_to_string(p).map_err(|e| Error::Parse(format!("cannot read {p}: {e}")))?,
            None => {
                let mut s = String::new();
                self.stdin
                    .read_to_string(&mut s)
                    .map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))?;
                s
            }
        };
        js::parse(&text)
    }

    fn input(&mut self) -> Result<Value, Error> {
        let path = self.common.input.clone();
        self.read_from(path.as_deref())
    }

    fn element(&mut self) -> Result<Element, Error> {
        js::element_from_json(&self.input()?)
    }

    fn map(&mut self) -> Result<LinMap, Error> {
        js::map_from_json(&self.input()?)
    }

    fn pair(&mut self, a: &str, b: &str) -> Result<(Element, Element), Error> {
        let v = self.input()?;
        let get = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("missing field {k:?}")))
                .and_then(js::element_from_json)
        };
        Ok((get(a)?, get(b)?))
    }

    fn element_list(&mut self) -> Result<Vec<Element>, Error> {
        let v = self.input()?;
        let items = match &v {
            Value::Array(a) => a,
            Value::Object(o) => o
                .get("projections")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("expected an array or {\"projections\": [...]}".into()))?,
            _ => return Err(Error::Parse("expected an array of elements".into())),
        };
        items.iter().map(js::element_from_json).collect()
    }

    /// `{"ambient": algebra, "generators": [element, ...]}`; the subalgebra
    /// they generate.
    fn subalgebra(&mut self) -> Result<StarSubalgebra, Error> {
        let v = self.input()?;
        let ambient = js::algebra_from_json(
            v.get("ambient")
                .ok_or_else(|| Error::Parse("missing field \"ambient\"".into()))?,
        )?;
        let gens = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array \"generators\"".into()))?
            .iter()
            .map(js::element_from_json)
            .collect::<Result<Vec<_>, _>>()?;
        structure::generate_subalgebra(&ambient, &gens, &self.tol)
    }

    fn algebra_arg(&mut self, flag: Option<&str>) -> Result<FdAlgebra, Error> {
        match flag {
            Some(s) => parse_dims(s),
            None => js::algebra_from_json(&self.input()?),
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run(argv: &[String], stdin: &mut dyn Read) -> CliOutput {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return CliOutput {
                    code: 0,
                    stdout: e.to_string(),
                };
            }
            let msg = e
                .to_string()
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ")
                .to_string();
            return finish(None, Err(Failure::Usage(msg)));
        }
    };
    let mut tol = ToleranceConfig::default();
    if let Some(t) = cli.common.tol {
        tol = tol.with_eps_rel(t);
        if let Err(e) = tol.validate() {
            return finish(None, Err(Failure::Precondition(e)));
        }
    }
    let out = cli.common.out.clone();
    let mut ctx = Ctx {
        common: cli.common,
        tol,
        stdin,
    };
    let result = dispatch(&cli.command, &mut ctx);
    finish(out.as_deref(), result)
}

fn finish(out: Option<&str>, result: CmdResult) -> CliOutput {
    let (code, value) = match result {
        Ok(v) => (0, v),
        Err(Failure::Usage(m)) => (1, js::error_object("Parse", &m, None)),
        Err(Failure::Precondition(e)) => (2, js::error_object(e.name(), &e.to_string(), None)),
        Err(Failure::Property(v)) => (3, v),
    };
    let text = format!("{value}\n");
    if code == 0 {
        if let Some(path) = out {
            if let Err(e) = fs::write(path, &text) {
                let err = js::error_object("Io", &format!("cannot write {path}: {e}"), None);
                return CliOutput {
                    code: 1,
                    stdout: format!("{err}\n"),
                };
            }
            return CliOutput {
                code,
                stdout: String::new(),
            };
        }
    }
    CliOutput { code, stdout: text }
}

fn complexes(values: &[num_complex::Complex64]) -> Value {
    Value::Array(values.iter().map(|&z| js::complex(z)).collect())
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> CmdResult {
    let tol = ctx.tol;
    match cmd {
        Command::Spectrum { function } => {
            let a = ctx.element()?;
            match function {
                None => Ok(json!({ "values": complexes(&spectral::spectrum(&a).values) })),
                Some(name) => {
                    let fa = name.parse::<NamedFunction>()?.apply(&a, &tol)?;
                    Ok(json!({
                        "values": complexes(&spectral::spectrum(&fa).values),
                        "element": element_to_json(&fa),
                    }))
                }
            }
        }
        Command::Sqrt { function } => {
            let f = match function {
                Some(name) => name.parse::<NamedFunction>()?,
                None => NamedFunction::Sqrt,
            };
            Ok(element_to_json(&f.apply(&ctx.element()?, &tol)?))
        }
        Command::Abs => Ok(element_to_json(&spectral::abs(&ctx.element()?, &tol)?)),
        Command::Ceil => Ok(element_to_json(&projections::ceiling(&ctx.element()?, &tol)?)),
        Command::Floor => Ok(element_to_json(&projections::floor(&ctx.element()?, &tol)?)),
        Command::Support => Ok(element_to_json(&projections::support(&ctx.element()?, &tol))),
        Command::Join | Command::Meet => {
            let ps = ctx.element_list()?;
            let alg = ps
                .first()
                .map(|p| p.algebra().clone())
                .ok_or_else(|| Error::Parse("need at least one projection to fix the algebra".into()))?;
            let r = if matches!(cmd, Command::Join) {
                projections::join(&alg, &ps, &tol)?
            } else {
                projections::meet(&alg, &ps, &tol)?
            };
            Ok(element_to_json(&r))
        }
        Command::Csupport => Ok(element_to_json(&projections::central_support(&ctx.element()?, &tol))),
        Command::Polar => {
            let parts = division::polar(&ctx.element()?, &tol);
            Ok(json!({
                "isometry": element_to_json(&parts.isometry),
                "modulus": element_to_json(&parts.modulus),
            }))
        }
        Command::Pinv { approx } => {
            let a = ctx.element()?;
            let p = division::pseudoinverse(&a, &tol);
            if !approx {
                return Ok(element_to_json(&p));
            }
            let ap = division::approximate_pseudoinverse(&a, &tol);
            Ok(json!({
                "pseudoinverse": element_to_json(&p),
                "terms": ap.terms.iter().map(element_to_json).collect::<Vec<_>>(),
                "bands": ap.thresholds.iter().map(|&(n, lo, hi)| json!({"band": n, "lo": num(lo), "hi": num(hi)})).collect::<Vec<_>>(),
            }))
        }
        Command::Divide { left, .. } => {
            let (a, b) = ctx.pair("a", "b")?;
            let q = if *left {
                division::left_divide(&b, &a, &tol)?
            } else {
                division::divide(&a, &b, &tol)?
            };
            Ok(element_to_json(&q))
        }
        Command::Seqquot => {
            let (a, b) = ctx.pair("a", "b")?;
            Ok(element_to_json(&division::seq_quotient(&a, &b, &tol)?))
        }
        Command::Checkmap { cp, miu, carrier } => checkmap(ctx.map()?, *cp, *miu, *carrier, ctx.common.seed, &tol),
        Command::Choi => {
            let f = ctx.map()?;
            let blocks: Vec<Value> = f
                .choi()
                .iter()
                .map(|cb| {
                    json!({
                        "domain_block": cb.domain_block_index,
                        "element": element_to_json(&cb.element),
                        "min_eigenvalue": num(cb.element.min_eigenvalue()),
                    })
                })
                .collect();
            Ok(json!({
                "blocks": blocks,
                "min_eigenvalue": num(f.choi_min_eigenvalue()),
                "completely_positive": f.is_completely_positive(&tol),
            }))
        }
        Command::Corner => {
            let p = ctx.element()?;
            let ctxc = measurement::corner_algebra(&p, &tol)?;
            Ok(json!({
                "corner": algebra_to_json(&ctxc.corner),
                "map": map_to_json(&measurement::standard_corner(&p, &tol)?),
            }))
        }
        Command::Filter => Ok(map_to_json(&measurement::standard_filter(&ctx.element()?, &tol)?)),
        Command::Bracket => Ok(map_to_json(&measurement::bracket(&ctx.map()?, &tol)?)),
        Command::Purity => {
            let r = measurement::purity_report(&ctx.map()?, &tol)?;
            Ok(json!({
                "pure": r.is_pure(),
                "unital": r.unital,
                "bijective": r.bijective,
                "min_singular_value": num(r.min_singular_value),
                "inverse_cp": r.inverse_cp,
                "bracket": map_to_json(&r.bracket),
            }))
        }
        Command::Seqprod => {
            let (p, q) = ctx.pair("p", "q")?;
            Ok(element_to_json(&measurement::seq_product(&p, &q, &tol)?))
        }
        Command::CheckAxioms { op, algebra, trials } => {
            let kind: OpKind = op.parse()?;
            let alg = parse_dims(algebra)?;
            let rep = measurement::check_axioms(&BinOpSpec::builtin(kind), &alg, *trials, ctx.common.seed, &tol);
            Ok(rep.to_json())
        }
        Command::Tensor { algebras } => {
            let algs = algebras.iter().map(|s| parse_dims(s)).collect::<Result<Vec<_>, _>>()?;
            let mut acc = algs[0].clone();
            for a in &algs[1..] {
                acc = tensor::tensor_algebra(&acc, a).product;
            }
            let mut out = json!({ "algebra": algebra_to_json(&acc) });
            if algs.len() == 2 {
                let ts = tensor::tensor_algebra(&algs[0], &algs[1]);
                let factors: Vec<Value> = (0..ts.product.num_blocks())
                    .map(|b| {
                        let (i, j) = ts.factor_blocks(b);
                        json!([i, j])
                    })
                    .collect();
                out["factor_blocks"] = Value::Array(factors);
            }
            Ok(out)
        }
        Command::TensorEl => {
            let (a, b) = ctx.pair("a", "b")?;
            Ok(element_to_json(&tensor::tensor_elements(&a, &b)))
        }
        Command::DupCheck { algebra } => {
            let alg = ctx.algebra_arg(algebra.as_deref())?;
            let mut out = json!({
                "algebra": algebra_to_json(&alg),
                "duplicable": tensor::is_duplicable(&alg),
            });
            match tensor::duplicator(&alg) {
                Some(d) => out["duplicator"] = map_to_json(&d),
                None => {
                    if let Some(w) = tensor::multiplication_witness(&alg, 1000, ctx.common.seed, &tol) {
                        out["witness"] = json!({
                            "input": element_to_json(&w.input),
                            "image": element_to_json(&w.image),
                        });
                    }
                }
            }
            Ok(out)
        }
        Command::Bang { algebra } => {
            let alg = ctx.algebra_arg(algebra.as_deref())?;
            Ok(json!({
                "points": tensor::nsp(&alg),
                "algebra": algebra_to_json(&tensor::bang(&alg)),
                "unit": map_to_json(&tensor::bang_unit(&alg)),
            }))
        }
        Command::Wedderburn => {
            let s = ctx.subalgebra()?;
            let w = structure::wedderburn(&s, ctx.common.seed, &tol)?;
            Ok(json!({
                "dims": w.dims,
                "subalgebra_dim": s.dim(),
                "embedding": map_to_json(&w.embedding),
                "central_projections": w.min_central_projs.iter().map(element_to_json).collect::<Vec<_>>(),
            }))
        }
        Command::Gns { state } => {
            let v = ctx.read_from(state.as_deref().or(ctx.common.input.clone().as_deref()))?;
            let omega = match v.get("density") {
                Some(d) => LinMap::from_density(&js::element_from_json(d)?),
                None => js::map_from_json(&v)?,
            };
            let r = structure::gns(&omega, &tol)?;
            Ok(json!({
                "hilbert_dim": r.hilbert_dim,
                "eta": matrix_to_json(&r.eta),
                "rep": map_to_json(&r.rep),
            }))
        }
        Command::Gelfand => {
            let s = ctx.subalgebra()?;
            let g = structure::gelfand_finite(&s, ctx.common.seed, &tol)?;
            Ok(json!({
                "points": g.points,
                "minimal_projections": g.decomposition.min_central_projs.iter().map(element_to_json).collect::<Vec<_>>(),
            }))
        }
        Command::VerifySuite { level, only } => {
            let level: Level = level.parse()?;
            let results = if only.is_empty() {
                verify::run_all(level, ctx.common.seed)
            } else {
                only.iter()
                    .map(|&id| verify::run_criterion(id, level, ctx.common.seed))
                    .collect()
            };
            let all = results.iter().all(|r| r.passed);
            let out = json!({
                "level": level.to_string(),
                "seed": ctx.common.seed,
                "passed": all,
                "criteria": results.iter().map(verify::CriterionResult::to_json).collect::<Vec<_>>(),
            });
            if all {
                Ok(out)
            } else {
                Err(Failure::Property(out))
            }
        }
        Command::Gen {
            kind,
            algebra,
            cod,
            count,
        } => {
            let dom = parse_dims(algebra)?;
            let cod = match cod {
                Some(c) => parse_dims(c)?,
                None => dom.clone(),
            };
            let mut rng = random::rng(ctx.common.seed);
            let items = (0..*count)
                .map(|_| generate(kind, &dom, &cod, &mut rng))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(if *count == 1 {
                items.into_iter().next().unwrap()
            } else {
                Value::Array(items)
            })
        }
    }
}

fn generate(kind: &str, dom: &FdAlgebra, cod: &FdAlgebra, rng: &mut random::SeededRng) -> Result<Value, Error> {
    Ok(match kind {
        "effect" => element_to_json(&random::effect(rng, dom)),
        "projection" => element_to_json(&random::projection(rng, dom)),
        "positive" => element_to_json(&random::positive(rng, dom)),
        "element" => element_to_json(&random::element(rng, dom)),
        "self-adjoint" => element_to_json(&random::self_adjoint(rng, dom)),
        "unitary" => element_to_json(&random::unitary(rng, dom)),
        "state" => map_to_json(&random::state(rng, dom)),
        "cp-map" => map_to_json(&random::cp_map(rng, dom, cod, 1)),
        "cpu-map" => map_to_json(&random::cpu_map(rng, dom, cod, 1)),
        _ => return Err(Error::Parse(format!("unknown fixture kind {kind:?}"))),
    })
}

fn checkmap(f: LinMap, cp: bool, miu: bool, carrier: bool, seed: u64, tol: &ToleranceConfig) -> CmdResult {
    let report_all = !(cp || miu || carrier);
    let mut out = json!({});
    let mut failed = false;
    if cp || report_all {
        let is_cp = f.is_completely_positive(tol);
        out["cp"] = Value::Bool(is_cp);
        if !is_cp {
            out["choi_min_eigenvalue"] = num(f.choi_min_eigenvalue());
            let verdict = f.is_positive_map(200, seed, tol);
            out["positivity"] = Value::String(verdict.label().into());
            if let crate::maps::PositivityVerdict::NotPositive(w) = verdict {
                out["witness"] = json!({ "input": element_to_json(&w.input), "image": element_to_json(&w.image) });
            }
            failed |= cp;
        }
    }
    if miu || report_all {
        let is_miu = f.is_miu(tol);
        out["miu"] = Value::Bool(is_miu);
        out["unital"] = Value::Bool(f.is_unital(tol));
        out["involutive"] = Value::Bool(f.is_involutive(tol));
        out["multiplicative"] = Value::Bool(f.is_multiplicative(tol));
        if !is_miu {
            let (pair, defect) = f.multiplicativity_defect();
            out["multiplicativity_defect"] =
                json!({ "basis_pair": pair.map(|(i, j)| json!([i, j])), "norm": num(defect) });
            failed |= miu;
        }
    }
    if carrier || report_all {
        match f.carrier(tol) {
            Ok(c) => out["carrier"] = element_to_json(&c),
            Err(e) if report_all => out["carrier"] = js::error_object(e.name(), &e.to_string(), None),
            Err(e) => return Err(Failure::Precondition(e)),
        }
    }
    if failed {
        Err(Failure::Property(out))
    } else {
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], input: &str) -> CliOutput {
        let argv: Vec<String> = std::iter::once("fdvn")
            .chain(args.iter().copied())
            .map(String::from)
            .collect();
        run(&argv, &mut input.as_bytes())
    }

    #[test]
    fn nilpotent_spectrum() {
        let out = call(
            &["spectrum"],
            r#"{"algebra":{"dims":[2]},"blocks":[[[[0,0],[2,0]],[[0,0],[0,0]]]]}"#,
        );
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout.trim(), r#"{"values":[[0,0],[0,0]]}"#);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["frobnicate"], "").code, 1);
        assert_eq!(call(&["ceil"], "{not json").code, 1);
        // ceiling of a non-positive element
        let out = call(&["ceil"], r#"{"algebra":{"dims":[1]},"blocks":[[[[-1,0]]]]}"#);
        assert_eq!(out.code, 2);
        assert!(out.stdout.contains("\"NotPositive\""));
    }

    #[test]
    fn parse_dims_examples() {
        assert_eq!(parse_dims("2,1").unwrap().dims(), &[2, 1]);
        assert!(parse_dims("0").is_err());
        assert!(parse_dims("x").is_err());
    }
}
