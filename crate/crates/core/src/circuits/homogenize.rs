use num_traits::Zero;

use super::{ArithmeticCircuit, CircuitBuilder, Gate, GateId};
use crate::error::{Error, Result};

/// A circuit whose every gate computes a homogeneous polynomial.
///
/// `component_outputs[d]` computes the degree-`d` part of the original
/// output; the base circuit's outputs are exactly these components.
#[derive(Debug, Clone)]
pub struct HomogeneousCircuit {
    pub base: ArithmeticCircuit,
    pub degree_of: Vec<u32>,
    pub component_outputs: Vec<GateId>,
}

/// Degree-indexed components of one original gate. `None` is the zero
/// polynomial, which is never materialized except as a shared `Const 0`.
type Components = Vec<Option<GateId>>;

struct Builder {
    b: CircuitBuilder,
    degree_of: Vec<u32>,
    zero: Option<GateId>,
}

impl Builder {
    fn push(&mut self, g: Gate, degree: u32) -> GateId {
        let id = match g {
            Gate::Input(v) => self.b.input(v),
            Gate::Const(c) => self.b.constant(c),
            Gate::Add(a, c) => self.b.add(a, c),
            Gate::Mul(a, c) => self.b.mul(a, c),
        };
        self.degree_of.push(degree);
        id
    }

    fn zero(&mut self) -> GateId {
        match self.zero {
            Some(z) => z,
            None => {
                let z = self.push(Gate::Const(Zero::zero()), 0);
                self.zero = Some(z);
                z
            }
        }
    }

    fn add(&mut self, a: Option<GateId>, b: Option<GateId>, degree: u32) -> Option<GateId> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => Some(self.push(Gate::Add(a, b), degree)),
        }
    }
}

/// Splits every gate into `delta + 1` homogeneous components.
///
/// Inputs map to `(0, x, 0, ...)`, constants to `(c, 0, ...)`, additions act
/// componentwise and products by truncated convolution, each convolution
/// summed with a left-leaning chain. Components that are identically zero
/// are elided and unreachable gates removed, so the size never exceeds
/// `(delta + 1)^2 * size(c)`.
pub fn homogenize(c: &ArithmeticCircuit, delta: u32) -> Result<HomogeneousCircuit> {
    let out = c.single_output()?;
    let width = delta as usize + 1;
    let mut h = Builder {
        b: CircuitBuilder::new(),
        degree_of: Vec::new(),
        zero: None,
    };
    let mut comps: Vec<Components> = Vec::with_capacity(c.gates().len());
    for g in c.gates() {
        let mut mine: Components = vec![None; width];
        match g {
            Gate::Input(v) => {
                if delta >= 1 {
                    mine[1] = Some(h.push(Gate::Input(*v), 1));
                }
            }
            Gate::Const(k) => {
                if !k.is_zero() {
                    mine[0] = Some(h.push(Gate::Const(k.clone()), 0));
                }
            }
            Gate::Add(a, b) => {
                for d in 0..width {
                    mine[d] = h.add(comps[*a][d], comps[*b][d], d as u32);
                }
            }
            Gate::Mul(a, b) => {
                for d in 0..width {
                    let mut acc = None;
                    for i in 0..=d {
                        if let (Some(x), Some(y)) = (comps[*a][i], comps[*b][d - i]) {
                            let prod = h.push(Gate::Mul(x, y), d as u32);
                            acc = h.add(acc, Some(prod), d as u32);
                        }
                    }
                    mine[d] = acc;
                }
            }
        }
        comps.push(mine);
    }
    let outputs: Vec<GateId> = comps[out]
        .clone()
        .into_iter()
        .map(|x| x.unwrap_or_else(|| h.zero()))
        .collect();
    let Builder { b, degree_of, .. } = h;
    let raw = b.finish(c.nvars(), c.modulus(), outputs)?;
    let (base, remap) = raw.eliminate_dead_code();
    let mut kept = vec![0; base.gates().len()];
    for (old, new) in remap.iter().enumerate() {
        if let Some(new) = new {
            kept[*new] = degree_of[old];
        }
    }
    let component_outputs = base.outputs().to_vec();
    let bound = 9 * width * width * c.size();
    if base.size() > bound {
        return Err(Error::Invariant(format!(
            "homogenized size {} exceeds 9(Δ+1)²·{} = {bound}",
            base.size(),
            c.size()
        )));
    }
    Ok(HomogeneousCircuit {
        base,
        degree_of: kept,
        component_outputs,
    })
}

/// Single-output circuit computing the degree-≤`delta` part of `c`, in
/// which every gate has degree at most `delta`.
pub fn truncate_to_degree(c: &ArithmeticCircuit, delta: u32) -> Result<ArithmeticCircuit> {
    let h = homogenize(c, delta)?;
    let zero_gate = h
        .base
        .gates()
        .iter()
        .position(|g| matches!(g, Gate::Const(k) if k.is_zero()));
    let parts: Vec<GateId> = h
        .component_outputs
        .iter()
        .copied()
        .filter(|&g| Some(g) != zero_gate)
        .collect();
    let HomogeneousCircuit { base, .. } = h;
    let mut gates = base.gates().to_vec();
    let out = match parts.split_first() {
        None => zero_gate.expect("all-zero components share the zero gate"),
        Some((&first, rest)) => rest.iter().fold(first, |acc, &g| {
            gates.push(Gate::Add(acc, g));
            gates.len() - 1
        }),
    };
    let (c, _) =
        ArithmeticCircuit::new(c.nvars(), c.modulus(), gates, vec![out])?.eliminate_dead_code();
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Monomial, PrimeModulus};
    use crate::circuits::expand;
    use num_bigint::BigInt;

    fn p17() -> PrimeModulus {
        PrimeModulus::new(17).unwrap()
    }

    #[test]
    fn binomial_components() {
        let mut b = CircuitBuilder::new();
        let x = b.input(0);
        let one = b.constant(1);
        let s = b.add(x, one);
        let sq = b.mul(s, s);
        let c = b.finish(1, Some(p17()), vec![sq]).unwrap();
        let h = homogenize(&c, 2).unwrap();
        let parts = expand(&h.base, 2).unwrap();
        assert_eq!(parts[0].coefficient(&Monomial::one()), BigInt::from(1));
        assert_eq!(parts[1].coefficient(&Monomial::var(0)), BigInt::from(2));
        assert_eq!(
            parts[2].coefficient(&Monomial::from_vars([0, 0])),
            BigInt::from(1)
        );
        assert!(parts.iter().all(|p| p.len() == 1));
    }

    #[test]
    fn single_input() {
        let mut b = CircuitBuilder::new();
        let x = b.input(0);
        let c = b.finish(1, Some(p17()), vec![x]).unwrap();
        let h = homogenize(&c, 1).unwrap();
        let parts = expand(&h.base, 1).unwrap();
        assert!(parts[0].is_zero());
        assert_eq!(parts[1].coefficient(&Monomial::var(0)), BigInt::from(1));
    }

    #[test]
    fn truncation_drops_high_degree() {
        let mut b = CircuitBuilder::new();
        let x = b.input(0);
        let x2 = b.mul(x, x);
        let x3 = b.mul(x2, x);
        let s = b.add(x3, x);
        let c = b.finish(1, Some(p17()), vec![s]).unwrap();
        let t = truncate_to_degree(&c, 1).unwrap();
        let e = &expand(&t, 3).unwrap()[0];
        assert_eq!(e.len(), 1);
        assert_eq!(e.coefficient(&Monomial::var(0)), BigInt::from(1));
    }

    #[test]
    fn multi_output_is_a_contract_error() {
        let mut b = CircuitBuilder::new();
        let x = b.input(0);
        let y = b.input(1);
        let c = b.finish(2, None, vec![x, y]).unwrap();
        assert!(matches!(homogenize(&c, 1), Err(Error::Contract(_))));
    }
}
