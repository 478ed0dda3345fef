use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;

use polyform::algebra::{parse_polynomial, write_polynomial, PrimeModulus, SparsePolynomial};
use polyform::circuits::{
    homogenize, parse_netlist, sum_of_products_circuit, verify_circuit, write_netlist,
    ArithmeticCircuit, Verdict,
};
use polyform::formulations::{
    formulate, parse_assignment, parse_meta, write_assignment, write_legend, write_meta, Layout,
    Meta,
};
use polyform::pipeline::{run_pipeline, PipelineConfig};
use polyform::selftest::{self, Scope};
use polyform::splitters::{
    build_code_splitter, build_greedy_splitter, build_interval_splitter, compose_splitter,
    parse_splitter, verify_splitter, write_splitter, SplitKind, SplitterFamily,
};
use polyform::Error;

use crate::args::{
    build_params, instance_size, is_key_value, load_instance, parse_key_values, parse_problem,
};
use crate::{CircuitCommand, Command, SplitterCommand};

pub const EXIT_SELFTEST: u8 = 1;
pub const EXIT_PARAM: u8 = 2;
pub const EXIT_REJECT: u8 = 3;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_MALFORMED: u8 = 65;
pub const EXIT_NOINPUT: u8 = 66;
pub const EXIT_INTERNAL: u8 = 70;
pub const EXIT_CANTCREATE: u8 = 73;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
    /// A library error attributed to an input file.
    InFile(PathBuf, Error),
    Read(PathBuf, std::io::Error),
    Write(PathBuf, std::io::Error),
}

impl CliError {
    pub fn in_file(path: &Path, e: Error) -> Self {
        CliError::InFile(path.to_path_buf(), e)
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Lib(e) | CliError::InFile(_, e) => match e {
                Error::Parse { .. } | Error::Arity { .. } => EXIT_MALFORMED,
                Error::Invariant(_) => EXIT_INTERNAL,
                Error::Parameter(_) | Error::IncompatibleRing(_) | Error::Contract(_) => EXIT_PARAM,
            },
            CliError::Read(..) => EXIT_NOINPUT,
            CliError::Write(..) => EXIT_CANTCREATE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::InFile(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Read(p, e) => write!(f, "cannot read {}: {e}", p.display()),
            CliError::Write(p, e) => write!(f, "cannot write {}: {e}", p.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type Outcome = Result<u8, CliError>;

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Read(path.to_path_buf(), e))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Write(path.to_path_buf(), e))
}

/// Writes `text` to `out`, or to stdout when no path is given.
fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn configure_threads(n: usize) {
    #[cfg(feature = "parallel")]
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
    {
        eprintln!("polyform: --jobs ignored: {e}");
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
}

pub fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Formulate {
            problem,
            params,
            theta,
            out,
        } => cmd_formulate(&problem, &params, theta, &out),
        Command::Assign {
            bundle,
            items,
            theta,
            out,
        } => cmd_assign(bundle.as_deref(), &items, theta, out.as_deref()),
        Command::Decide { bundle, assignment } => cmd_decide(&bundle, &assignment),
        Command::Circuit(c) => cmd_circuit(c),
        Command::Splitter(s) => cmd_splitter(s),
        Command::Pipeline {
            problem,
            items,
            theta,
            delta,
            prime_policy,
            candidate,
            times,
        } => {
            let problem = parse_problem(&problem)?;
            let split = items
                .iter()
                .position(|w| !is_key_value(w))
                .unwrap_or(items.len());
            let kv = parse_key_values(Some(problem), &items[..split])?;
            let files: Vec<PathBuf> = items[split..].iter().map(PathBuf::from).collect();
            let instances = files
                .iter()
                .map(|p| load_instance(p, &kv))
                .collect::<Result<Vec<_>, _>>()?;
            let params = build_params(
                &kv,
                theta,
                instances.first().map(|i| instance_size(&i.data)),
            )?;
            let candidate = match candidate {
                Some(path) => {
                    Some(parse_netlist(&read(&path)?).map_err(|e| CliError::in_file(&path, e))?)
                }
                None => None,
            };
            let config = PipelineConfig {
                policy: prime_policy,
                delta,
                candidate,
            };
            let report = run_pipeline(problem, &params, &instances, &config)?;
            print!("{}", report.render());
            if times {
                eprint!("{}", report.render_times());
            }
            Ok(if report.accepted() { 0 } else { EXIT_REJECT })
        }
        Command::Selftest { scope, seed } => {
            let scope: Scope = scope.parse().map_err(|_| {
                CliError::Usage(format!(
                    "unknown selftest scope `{scope}` (algebra, circuits, splitters, solvers, formulations, pipeline, all)"
                ))
            })?;
            let results = selftest::run_scope(scope, seed);
            for r in &results {
                println!("{r}");
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            println!(
                "selftest: {} passed, {failed} failed",
                results.len() - failed
            );
            Ok(if failed == 0 { 0 } else { EXIT_SELFTEST })
        }
    }
}

fn cmd_formulate(problem: &str, params: &[String], theta: Option<usize>, out: &Path) -> Outcome {
    let problem = parse_problem(problem)?;
    let kv = parse_key_values(None, params)?;
    let params = build_params(&kv, theta, None)?;
    let f = formulate(problem, &params)?;
    fs::create_dir_all(out).map_err(|e| CliError::Write(out.to_path_buf(), e))?;
    write(&out.join("meta.txt"), &write_meta(&Meta::from(&f)))?;
    write(
        &out.join("legend.txt"),
        &write_legend(problem, f.layout.legend()),
    )?;
    write(&out.join("poly.txt"), &write_polynomial(&f.poly))?;
    if let Some(h) = f.layout.splitter() {
        write(&out.join("splitter.txt"), &write_splitter(h))?;
    }
    println!(
        "formulated {problem} s={} delta={} monomials={} into {}",
        f.s(),
        f.delta(),
        f.poly.len(),
        out.display()
    );
    Ok(0)
}

fn cmd_assign(
    bundle: Option<&Path>,
    items: &[String],
    theta: Option<usize>,
    out: Option<&Path>,
) -> Outcome {
    let (layout, instance) = match bundle {
        Some(dir) => {
            let [instance, extras @ ..] = items else {
                return Err(CliError::Usage(
                    "assign --bundle DIR <instance> [key=value...]".into(),
                ));
            };
            let meta_path = dir.join("meta.txt");
            let meta =
                parse_meta(&read(&meta_path)?).map_err(|e| CliError::in_file(&meta_path, e))?;
            let kv = parse_key_values(Some(meta.problem), extras)?;
            if !kv.params.is_empty() {
                return Err(CliError::Usage(
                    "size parameters come from the bundle".into(),
                ));
            }
            let layout = Layout::new(meta.problem, &meta.params)?;
            if layout.s() != meta.s {
                return Err(CliError::in_file(
                    &meta_path,
                    Error::Invariant(format!(
                        "meta says s={}, regenerated legend has {}",
                        meta.s,
                        layout.s()
                    )),
                ));
            }
            (layout, load_instance(Path::new(instance), &kv)?)
        }
        None => {
            let [problem, instance, rest @ ..] = items else {
                return Err(CliError::Usage(
                    "assign <problem> <instance> [key=value...]".into(),
                ));
            };
            let problem = parse_problem(problem)?;
            let kv = parse_key_values(Some(problem), rest)?;
            let instance = load_instance(Path::new(instance), &kv)?;
            let params = build_params(&kv, theta, Some(instance_size(&instance.data)))?;
            (Layout::new(problem, &params)?, instance)
        }
    };
    let bits = layout.assign(&instance)?;
    emit(out, &write_assignment(&bits))?;
    Ok(0)
}

fn cmd_decide(bundle: &Path, assignment: &Path) -> Outcome {
    let meta_path = bundle.join("meta.txt");
    let meta = parse_meta(&read(&meta_path)?).map_err(|e| CliError::in_file(&meta_path, e))?;
    let poly_path = bundle.join("poly.txt");
    let poly =
        parse_polynomial(&read(&poly_path)?).map_err(|e| CliError::in_file(&poly_path, e))?;
    if poly.nvars() != meta.s {
        return Err(CliError::in_file(
            &poly_path,
            Error::Arity {
                expected: meta.s,
                got: poly.nvars(),
            },
        ));
    }
    let bits =
        parse_assignment(&read(assignment)?).map_err(|e| CliError::in_file(assignment, e))?;
    let value = poly
        .eval_binary(&bits)
        .map_err(|e| CliError::in_file(assignment, e))?;
    let verdict = if value == BigInt::from(0) {
        "no"
    } else {
        "yes"
    };
    println!("{verdict} value={value}");
    Ok(0)
}

fn load_circuit(path: &Path) -> Result<ArithmeticCircuit, CliError> {
    parse_netlist(&read(path)?).map_err(|e| CliError::in_file(path, e))
}

fn load_poly(path: &Path) -> Result<SparsePolynomial, CliError> {
    parse_polynomial(&read(path)?).map_err(|e| CliError::in_file(path, e))
}

fn cmd_circuit(command: CircuitCommand) -> Outcome {
    match command {
        CircuitCommand::BuildSop { poly, modulus, out } => {
            let mut f = load_poly(&poly)?;
            if let Some(p) = modulus.modulus {
                f = f.reduce_mod(PrimeModulus::new(p)?);
            }
            emit(out.as_deref(), &write_netlist(&sum_of_products_circuit(&f)))?;
            Ok(0)
        }
        CircuitCommand::Verify {
            circuit,
            poly,
            delta,
            modulus,
        } => {
            let c = load_circuit(&circuit)?;
            let target = load_poly(&poly)?;
            let p = match modulus.modulus {
                Some(p) => PrimeModulus::new(p)?,
                None => c.modulus().or(target.modulus()).ok_or_else(|| {
                    CliError::Usage("no modulus in either file; pass --modulus".into())
                })?,
            };
            let delta = delta.unwrap_or(target.degree_bound());
            match verify_circuit(&c, &target, delta, p)? {
                Verdict::Accept => {
                    println!("accept");
                    Ok(0)
                }
                Verdict::Reject {
                    monomial,
                    circuit_coeff,
                    target_coeff,
                } => {
                    println!(
                        "reject monomial={monomial} circuit={circuit_coeff} target={target_coeff}"
                    );
                    Ok(EXIT_REJECT)
                }
            }
        }
        CircuitCommand::Homogenize {
            circuit,
            delta,
            out,
        } => {
            let h = homogenize(&load_circuit(&circuit)?, delta)?;
            emit(out.as_deref(), &write_netlist(&h.base))?;
            Ok(0)
        }
        CircuitCommand::Eval { circuit, point } => {
            let c = load_circuit(&circuit)?;
            let point = point
                .iter()
                .flat_map(|w| w.split(','))
                .filter(|w| !w.is_empty())
                .map(|w| {
                    w.parse::<BigInt>()
                        .map_err(|_| CliError::Usage(format!("bad coordinate `{w}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            for v in c.evaluate(&point)? {
                println!("{v}");
            }
            Ok(0)
        }
    }
}

fn splitter_args(kind: &str, params: &[String]) -> Result<(usize, usize, usize), CliError> {
    let third = match kind {
        "code" => None,
        "interval" => Some("l"),
        "greedy" | "compose" => Some("c"),
        _ => {
            return Err(CliError::Usage(format!(
                "unknown splitter `{kind}` (code, interval, greedy, compose)"
            )))
        }
    };
    let (mut n, mut k, mut x) = (None, None, None);
    for word in params {
        let (key, value) = word
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected key=value, got `{word}`")))?;
        let value: usize = value
            .parse()
            .map_err(|_| CliError::Usage(format!("`{key}` needs a nonnegative integer")))?;
        match key {
            "n" => n = Some(value),
            "k" => k = Some(value),
            _ if Some(key) == third => x = Some(value),
            _ => {
                return Err(CliError::Usage(format!(
                    "{kind} splitters take no parameter `{key}`"
                )))
            }
        }
    }
    let need = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| CliError::Usage(format!("missing parameter {name}")))
    };
    Ok((
        need(n, "n")?,
        need(k, "k")?,
        if let Some(t) = third { need(x, t)? } else { 0 },
    ))
}

fn cmd_splitter(command: SplitterCommand) -> Outcome {
    match command {
        SplitterCommand::Build { kind, params, out } => {
            let (n, k, x) = splitter_args(&kind, &params)?;
            let (family, detail): (SplitterFamily, String) = match kind.as_str() {
                "code" => (build_code_splitter(n, k)?, String::new()),
                "interval" => (build_interval_splitter(n, k, x)?, String::new()),
                "greedy" => (build_greedy_splitter(n, k, x)?, String::new()),
                _ => {
                    let s = compose_splitter(n, k, x)?;
                    let detail = format!(
                        " code={} interval={} greedy={} blocks={}",
                        s.code_size, s.interval_size, s.greedy_size, s.blocks
                    );
                    (s.family, detail)
                }
            };
            write(&out, &write_splitter(&family))?;
            println!(
                "splitter {kind} n={} k={} range={} size={}{detail}",
                family.n(),
                family.k(),
                family.range(),
                family.len()
            );
            Ok(0)
        }
        SplitterCommand::Verify { file, mode } => {
            let h = parse_splitter(&read(&file)?).map_err(|e| CliError::in_file(&file, e))?;
            let mode: SplitKind = match mode {
                Some(m) => m.parse().map_err(|_| {
                    CliError::Usage(format!("unknown mode `{m}` (injective, even)"))
                })?,
                None => h.kind(),
            };
            match verify_splitter(&h, mode)? {
                None => {
                    println!("splitter ok mode={} size={}", mode.tag(), h.len());
                    Ok(0)
                }
                Some(subset) => {
                    let list: Vec<String> = subset.iter().map(usize::to_string).collect();
                    println!(
                        "not a splitter mode={} unsplit={}",
                        mode.tag(),
                        list.join(",")
                    );
                    Ok(EXIT_REJECT)
                }
            }
        }
    }
}
