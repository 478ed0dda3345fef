//! Arithmetic-circuit IR over ℤ or ℤ_p.
//!
//! Gates are stored in topological order: every operand id is strictly
//! smaller than the id of the gate using it. Size counts edges, two per
//! `Add`/`Mul` gate.

mod expand;
mod homogenize;
mod text;
mod verify;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{reduce, PrimeModulus};
use crate::error::{Error, Result};

pub use expand::expand;
pub use homogenize::{homogenize, truncate_to_degree, HomogeneousCircuit};
pub use text::{parse_netlist, write_netlist};
pub use verify::{sum_of_products_circuit, verify_circuit, Verdict};

pub type GateId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    Input(u32),
    Const(BigInt),
    Add(GateId, GateId),
    Mul(GateId, GateId),
}

impl Gate {
    pub fn operands(&self) -> Option<(GateId, GateId)> {
        match *self {
            Gate::Add(a, b) | Gate::Mul(a, b) => Some((a, b)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithmeticCircuit {
    nvars: usize,
    modulus: Option<PrimeModulus>,
    gates: Vec<Gate>,
    outputs: Vec<GateId>,
}

impl ArithmeticCircuit {
    /// Validates topological order, input ranges and outputs. Constants are
    /// reduced into `[0, p)` when a modulus is given.
    pub fn new(
        nvars: usize,
        modulus: Option<PrimeModulus>,
        mut gates: Vec<Gate>,
        outputs: Vec<GateId>,
    ) -> Result<Self> {
        for (id, g) in gates.iter_mut().enumerate() {
            match g {
                Gate::Input(v) if *v as usize >= nvars => {
                    return Err(Error::param(format!(
                        "gate {id}: input x{v} out of range for {nvars} variables"
                    )))
                }
                Gate::Const(c) => {
                    if let Some(p) = modulus {
                        *c = reduce(c, p.value());
                    }
                }
                Gate::Add(a, b) | Gate::Mul(a, b) if *a >= id || *b >= id => {
                    return Err(Error::param(format!("gate {id}: forward reference")))
                }
                _ => {}
            }
        }
        if outputs.is_empty() {
            return Err(Error::param("circuit has no outputs"));
        }
        if let Some(&o) = outputs.iter().find(|&&o| o >= gates.len()) {
            return Err(Error::param(format!("output g{o} does not exist")));
        }
        Ok(Self {
            nvars,
            modulus,
            gates,
            outputs,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn modulus(&self) -> Option<PrimeModulus> {
        self.modulus
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[GateId] {
        &self.outputs
    }

    /// Number of edges: two per `Add`/`Mul` gate.
    pub fn size(&self) -> usize {
        2 * self.gates.iter().filter(|g| g.operands().is_some()).count()
    }

    pub(crate) fn single_output(&self) -> Result<GateId> {
        match self.outputs[..] {
            [o] => Ok(o),
            _ => Err(Error::Contract(format!(
                "expected a single-output circuit, got {} outputs",
                self.outputs.len()
            ))),
        }
    }

    /// The same circuit over ℤ_p, with constants reduced.
    pub fn with_modulus(&self, p: PrimeModulus) -> Result<Self> {
        if let Some(q) = self.modulus {
            if q != p {
                return Err(Error::IncompatibleRing(format!(
                    "circuit is over ℤ_{}, requested ℤ_{}",
                    q.value(),
                    p.value()
                )));
            }
        }
        Self::new(
            self.nvars,
            Some(p),
            self.gates.clone(),
            self.outputs.clone(),
        )
    }

    /// Formal degree of every gate (an upper bound on the true degree).
    pub fn formal_degrees(&self) -> Vec<u64> {
        let mut deg: Vec<u64> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let d = match *g {
                Gate::Input(_) => 1,
                Gate::Const(_) => 0,
                Gate::Add(a, b) => deg[a].max(deg[b]),
                Gate::Mul(a, b) => u64::saturating_add(deg[a], deg[b]),
            };
            deg.push(d);
        }
        deg
    }

    fn check_arity(&self, got: usize) -> Result<()> {
        if got != self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got,
            });
        }
        Ok(())
    }

    /// One value per output; exact over ℤ, reduced mod p otherwise.
    pub fn evaluate(&self, point: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_arity(point.len())?;
        let norm = |v: BigInt| match self.modulus {
            Some(p) => reduce(&v, p.value()),
            None => v,
        };
        let mut val: Vec<BigInt> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match g {
                Gate::Input(i) => norm(point[*i as usize].clone()),
                Gate::Const(c) => c.clone(),
                Gate::Add(a, b) => norm(&val[*a] + &val[*b]),
                Gate::Mul(a, b) => norm(&val[*a] * &val[*b]),
            };
            val.push(v);
        }
        Ok(self.outputs.iter().map(|&o| val[o].clone()).collect())
    }

    /// Word-size evaluation over ℤ_p. Entries of `point` are reduced first.
    pub fn evaluate_mod(&self, point: &[u64]) -> Result<Vec<u64>> {
        self.check_arity(point.len())?;
        let p = self
            .modulus
            .ok_or_else(|| Error::Contract("word-size evaluation needs a modulus".into()))?;
        let mut val: Vec<u64> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match g {
                Gate::Input(i) => point[*i as usize] % p.value(),
                Gate::Const(c) => c.to_u64().expect("constants are reduced below p"),
                Gate::Add(a, b) => p.add(val[*a], val[*b]),
                Gate::Mul(a, b) => p.mul(val[*a], val[*b]),
            };
            val.push(v);
        }
        Ok(self.outputs.iter().map(|&o| val[o]).collect())
    }

    /// Keeps only gates reachable from the outputs, preserving order.
    pub(crate) fn eliminate_dead_code(self) -> (Self, Vec<Option<GateId>>) {
        let mut live = vec![false; self.gates.len()];
        for &o in &self.outputs {
            live[o] = true;
        }
        for id in (0..self.gates.len()).rev() {
            if live[id] {
                if let Some((a, b)) = self.gates[id].operands() {
                    live[a] = true;
                    live[b] = true;
                }
            }
        }
        let mut remap = vec![None; self.gates.len()];
        let mut gates = Vec::new();
        for (id, g) in self.gates.into_iter().enumerate() {
            if !live[id] {
                continue;
            }
            remap[id] = Some(gates.len());
            let r = |x: GateId| remap[x].expect("operands of live gates are live");
            gates.push(match g {
                Gate::Add(a, b) => Gate::Add(r(a), r(b)),
                Gate::Mul(a, b) => Gate::Mul(r(a), r(b)),
                other => other,
            });
        }
        let outputs = self
            .outputs
            .iter()
            .map(|&o| remap[o].expect("outputs are live"))
            .collect();
        (
            Self {
                nvars: self.nvars,
                modulus: self.modulus,
                gates,
                outputs,
            },
            remap,
        )
    }
}

/// Incremental construction helper; ids are assigned in push order.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, g: Gate) -> GateId {
        self.gates.push(g);
        self.gates.len() - 1
    }

    pub fn input(&mut self, v: u32) -> GateId {
        self.push(Gate::Input(v))
    }

    pub fn constant(&mut self, c: impl Into<BigInt>) -> GateId {
        self.push(Gate::Const(c.into()))
    }

    pub fn add(&mut self, a: GateId, b: GateId) -> GateId {
        self.push(Gate::Add(a, b))
    }

    pub fn mul(&mut self, a: GateId, b: GateId) -> GateId {
        self.push(Gate::Mul(a, b))
    }

    /// Sums `ids` with a balanced tree of `Add` gates. Empty input yields
    /// `Const 0`.
    pub fn balanced_sum(&mut self, ids: &[GateId]) -> GateId {
        match ids {
            [] => self.constant(BigInt::zero()),
            [one] => *one,
            _ => {
                let mid = ids.len() / 2;
                let l = self.balanced_sum(&ids[..mid]);
                let r = self.balanced_sum(&ids[mid..]);
                self.add(l, r)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn finish(
        self,
        nvars: usize,
        modulus: Option<PrimeModulus>,
        outputs: Vec<GateId>,
    ) -> Result<ArithmeticCircuit> {
        ArithmeticCircuit::new(nvars, modulus, self.gates, outputs)
    }
}
