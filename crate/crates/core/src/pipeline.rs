//! Construct, verify, evaluate.
//!
//! One formulation is built for the shared size parameters, a prime is
//! chosen so that every possible value stays below `p/2`, and a circuit for
//! `P mod p` (the canonical sum of products, or a caller-supplied candidate)
//! is checked coefficient by coefficient. Only an accepted circuit is ever
//! evaluated on instances.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::{find_prime_in_dyadic_interval, PrimeModulus, MAX_INTERVAL_EXPONENT};
use crate::circuits::{sum_of_products_circuit, verify_circuit, ArithmeticCircuit, Verdict};
use crate::error::{Error, Result};
use crate::formulations::{formulate, Instance, Params, Problem};
use crate::par;

/// How the interval exponent `t` of the prime is chosen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum PrimePolicy {
    /// Smallest `t` with `2^t` above the monomial count, the largest value
    /// `P` can take at a 0/1 point.
    #[default]
    Count,
    /// `t = s`, from the bound `P(φ) < 2^s`.
    Svar,
}

impl FromStr for PrimePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "count" => Ok(PrimePolicy::Count),
            "svar" => Ok(PrimePolicy::Svar),
            _ => Err(Error::param(format!(
                "unknown prime policy `{s}` (count|svar)"
            ))),
        }
    }
}

impl fmt::Display for PrimePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrimePolicy::Count => "count",
            PrimePolicy::Svar => "svar",
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct PipelineConfig {
    pub policy: PrimePolicy,
    /// Truncation degree for verification; the formulation's `Δ` if unset.
    pub delta: Option<u32>,
    /// Circuit to verify instead of the canonical sum of products.
    pub candidate: Option<ArithmeticCircuit>,
}

/// Interval exponent for `policy`.
pub fn prime_exponent(policy: PrimePolicy, monomials: usize, s: usize) -> Result<u32> {
    let t = match policy {
        PrimePolicy::Count => usize::BITS - monomials.leading_zeros(),
        PrimePolicy::Svar => u32::try_from(s).unwrap_or(u32::MAX),
    };
    if t > MAX_INTERVAL_EXPONENT {
        return Err(Error::param(format!(
            "the {policy} policy needs t = {t}, above the word-size limit {MAX_INTERVAL_EXPONENT}"
        )));
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub yes: bool,
    /// Circuit output at `φ(instance)`, in `[0, p)`.
    pub value: u64,
}

#[derive(Debug, Clone, Default)]
pub struct StageTimes {
    pub formulate: Duration,
    pub prime: Duration,
    pub circuit: Duration,
    pub verify: Duration,
    pub solve: Duration,
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub problem: Problem,
    pub params: Params,
    pub instances: usize,
    pub policy: PrimePolicy,
    pub prime: PrimeModulus,
    pub t: u32,
    pub s: usize,
    pub delta: u32,
    pub monomials: usize,
    pub circuit_size: usize,
    pub circuit_gates: usize,
    pub verdict: Verdict,
    /// In input order; empty unless the circuit was accepted.
    pub decisions: Vec<Decision>,
    pub times: StageTimes,
}

impl PipelineReport {
    pub fn accepted(&self) -> bool {
        self.verdict.is_accept()
    }

    /// Deterministic text form (timings excluded).
    pub fn render(&self) -> String {
        let mut out = format!("pipeline problem={}", self.problem);
        for (name, value) in self.params.pairs() {
            let _ = write!(out, " {name}={value}");
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "instances {}", self.instances);
        let _ = writeln!(
            out,
            "prime p={} t={} policy={}",
            self.prime.value(),
            self.t,
            self.policy
        );
        let _ = writeln!(
            out,
            "poly s={} delta={} monomials={}",
            self.s, self.delta, self.monomials
        );
        let _ = writeln!(
            out,
            "circuit size={} gates={}",
            self.circuit_size, self.circuit_gates
        );
        match &self.verdict {
            Verdict::Accept => {
                let _ = writeln!(out, "verify accept");
            }
            Verdict::Reject {
                monomial,
                circuit_coeff,
                target_coeff,
            } => {
                let _ = writeln!(
                    out,
                    "verify reject monomial={monomial} circuit={circuit_coeff} target={target_coeff}"
                );
            }
        }
        for (i, d) in self.decisions.iter().enumerate() {
            let _ = writeln!(
                out,
                "decision {i} {} value={}",
                if d.yes { "yes" } else { "no" },
                d.value
            );
        }
        out
    }

    pub fn render_times(&self) -> String {
        let t = &self.times;
        format!(
            "time formulate={:?} prime={:?} circuit={:?} verify={:?} solve={:?}\n",
            t.formulate, t.prime, t.circuit, t.verify, t.solve
        )
    }
}

/// Runs the pipeline on `instances`, which must all fit `params`.
pub fn run_pipeline(
    problem: Problem,
    params: &Params,
    instances: &[Instance],
    config: &PipelineConfig,
) -> Result<PipelineReport> {
    let mut times = StageTimes::default();

    let clock = Instant::now();
    let out = formulate(problem, params)?;
    times.formulate = clock.elapsed();

    let clock = Instant::now();
    let t = prime_exponent(config.policy, out.poly.len(), out.s())?;
    let prime = find_prime_in_dyadic_interval(t)?;
    let reduced = out.poly.reduce_mod(prime);
    times.prime = clock.elapsed();

    let clock = Instant::now();
    let circuit = match &config.candidate {
        // A candidate over fewer variables reads as one that ignores the rest.
        Some(c) => {
            if c.nvars() > out.s() {
                return Err(Error::Arity {
                    expected: out.s(),
                    got: c.nvars(),
                });
            }
            let c = c.with_modulus(prime)?;
            ArithmeticCircuit::new(
                out.s(),
                Some(prime),
                c.gates().to_vec(),
                c.outputs().to_vec(),
            )?
        }
        None => sum_of_products_circuit(&reduced),
    };
    times.circuit = clock.elapsed();

    let clock = Instant::now();
    let delta = config.delta.unwrap_or(out.delta());
    let verdict = verify_circuit(&circuit, &reduced, delta, prime)?;
    times.verify = clock.elapsed();

    let clock = Instant::now();
    let decisions = if verdict.is_accept() {
        let half = BigInt::from(prime.value() / 2);
        par::map(instances, |inst| -> Result<Decision> {
            let x = out.assign(inst)?;
            let point: Vec<u64> = x.iter().map(|&b| b as u64).collect();
            let value = circuit.evaluate_mod(&point)?[0];
            let exact = out.evaluate(&x)?;
            if exact > half || exact.to_u64().map(|e| e % prime.value()) != Some(value) {
                return Err(Error::Invariant(format!(
                    "value {exact} is not below p/2 or disagrees with the circuit ({value} mod {})",
                    prime.value()
                )));
            }
            Ok(Decision {
                yes: value != 0,
                value,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    times.solve = clock.elapsed();

    Ok(PipelineReport {
        problem,
        params: params.clone(),
        instances: instances.len(),
        policy: config.policy,
        prime,
        t,
        s: out.s(),
        delta,
        monomials: out.poly.len(),
        circuit_size: circuit.size(),
        circuit_gates: circuit.gates().len(),
        verdict,
        decisions,
        times,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::CircuitBuilder;
    use crate::solvers::{Graph, ProblemInstance};

    fn path4() -> Instance {
        ProblemInstance::Graph(Graph::directed(4, &[(0, 1), (1, 2), (2, 3)]).unwrap()).into()
    }

    fn empty4() -> Instance {
        ProblemInstance::Graph(Graph::directed(4, &[]).unwrap()).into()
    }

    #[test]
    fn exponent_policies() {
        assert_eq!(prime_exponent(PrimePolicy::Count, 0, 5).unwrap(), 0);
        assert_eq!(prime_exponent(PrimePolicy::Count, 8, 5).unwrap(), 4);
        assert_eq!(prime_exponent(PrimePolicy::Svar, 8, 5).unwrap(), 5);
        assert!(prime_exponent(PrimePolicy::Svar, 8, 61).is_err());
        assert_eq!("svar".parse::<PrimePolicy>().unwrap(), PrimePolicy::Svar);
        assert!("fast".parse::<PrimePolicy>().is_err());
    }

    #[test]
    fn ham_path_end_to_end() {
        let p = Params::new(4, 2);
        let report = run_pipeline(
            Problem::HamPath,
            &p,
            &[path4(), empty4()],
            &PipelineConfig::default(),
        )
        .unwrap();
        assert!(report.accepted());
        let yes: Vec<bool> = report.decisions.iter().map(|d| d.yes).collect();
        assert_eq!(yes, vec![true, false]);
        assert!(report.prime.value() > 2 * report.monomials as u64);
        let text = report.render();
        assert!(text.contains("verify accept"));
        assert!(text.ends_with("decision 1 no value=0\n"));
    }

    #[test]
    fn wrong_candidate_is_rejected_without_decisions() {
        let p = Params::new(4, 2);
        let s = formulate(Problem::HamPath, &p).unwrap().s();
        let mut b = CircuitBuilder::new();
        let x = b.input(0);
        let wrong = b.finish(s, None, vec![x]).unwrap();
        let config = PipelineConfig {
            candidate: Some(wrong),
            ..PipelineConfig::default()
        };
        let report = run_pipeline(Problem::HamPath, &p, &[path4()], &config).unwrap();
        assert!(!report.accepted());
        assert!(report.decisions.is_empty());
        assert!(report.render().contains("verify reject"));
    }

    #[test]
    fn narrow_candidate_is_widened_and_wide_one_refused() {
        let p = Params::new(4, 2);
        let mut b = CircuitBuilder::new();
        let x = b.input(1);
        let narrow = b.finish(2, None, vec![x]).unwrap();
        let config = PipelineConfig {
            candidate: Some(narrow),
            ..PipelineConfig::default()
        };
        let report = run_pipeline(Problem::HamPath, &p, &[path4()], &config).unwrap();
        assert!(!report.accepted());
        let mut b = CircuitBuilder::new();
        let x = b.input(0);
        let wide = b.finish(1000, None, vec![x]).unwrap();
        let config = PipelineConfig {
            candidate: Some(wide),
            ..PipelineConfig::default()
        };
        assert!(matches!(
            run_pipeline(Problem::HamPath, &p, &[path4()], &config),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn zero_instances_give_an_empty_list() {
        let report = run_pipeline(
            Problem::HamPath,
            &Params::new(4, 2),
            &[],
            &PipelineConfig::default(),
        )
        .unwrap();
        assert!(report.accepted() && report.decisions.is_empty());
    }
}
