use super::{ArithmeticCircuit, Gate};
use crate::algebra::SparsePolynomial;
use crate::error::{Error, Result};
use crate::par;

/// Symbolic expansion over ℤ_p, one polynomial per output, with every
/// product truncated at degree `delta`.
///
/// Gates at the same depth are expanded together (in parallel when
/// enabled); a gate's polynomial is dropped once its last consumer has been
/// expanded. The result does not depend on the schedule.
pub fn expand(c: &ArithmeticCircuit, delta: u32) -> Result<Vec<SparsePolynomial>> {
    let p = c
        .modulus()
        .ok_or_else(|| Error::Contract("expansion requires a circuit over ℤ_p".into()))?;
    let gates = c.gates();
    let n = gates.len();

    let mut depth = vec![0usize; n];
    for (id, g) in gates.iter().enumerate() {
        if let Some((a, b)) = g.operands() {
            depth[id] = 1 + depth[a].max(depth[b]);
        }
    }
    // Depth after which a gate's polynomial is no longer needed.
    let mut release = vec![0usize; n];
    for (id, g) in gates.iter().enumerate() {
        if let Some((a, b)) = g.operands() {
            release[a] = release[a].max(depth[id]);
            release[b] = release[b].max(depth[id]);
        }
    }
    for &o in c.outputs() {
        release[o] = usize::MAX;
    }
    let max_depth = depth.iter().copied().max().unwrap_or(0);
    let mut levels: Vec<Vec<usize>> = vec![Vec::new(); max_depth + 1];
    for (id, &d) in depth.iter().enumerate() {
        levels[d].push(id);
    }
    let mut by_release: Vec<Vec<usize>> = vec![Vec::new(); max_depth + 1];
    for (id, &r) in release.iter().enumerate() {
        if r != usize::MAX {
            by_release[r.max(depth[id])].push(id);
        }
    }

    let nvars = c.nvars();
    let zero = SparsePolynomial::zero(nvars, delta, Some(p));
    let mut store: Vec<Option<SparsePolynomial>> = vec![None; n];
    for (level, ids) in levels.iter().enumerate() {
        let computed = {
            let store = &store;
            let get = |g: usize| store[g].as_ref().expect("operand expanded earlier");
            par::map(ids, |&id| -> Result<SparsePolynomial> {
                match &gates[id] {
                    Gate::Input(v) if delta >= 1 => {
                        SparsePolynomial::variable(nvars, delta, Some(p), *v)
                    }
                    Gate::Input(_) => Ok(zero.clone()),
                    Gate::Const(k) => {
                        Ok(SparsePolynomial::constant(nvars, delta, Some(p), k.clone()))
                    }
                    Gate::Add(a, b) => get(*a).add(get(*b)),
                    Gate::Mul(a, b) => get(*a).mul_truncated(get(*b), delta),
                }
            })
        };
        for (&id, poly) in ids.iter().zip(computed) {
            store[id] = Some(poly?);
        }
        for &id in &by_release[level] {
            store[id] = None;
        }
    }
    Ok(c.outputs()
        .iter()
        .map(|&o| store[o].clone().expect("outputs are retained"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Monomial, PrimeModulus};
    use crate::circuits::CircuitBuilder;
    use num_bigint::BigInt;

    #[test]
    fn square_of_binomial() {
        let p = PrimeModulus::new(17).unwrap();
        let mut b = CircuitBuilder::new();
        let x = b.input(0);
        let one = b.constant(1);
        let s = b.add(x, one);
        let sq = b.mul(s, s);
        let c = b.finish(1, Some(p), vec![sq]).unwrap();
        let e = &expand(&c, 2).unwrap()[0];
        assert_eq!(e.coefficient(&Monomial::from_vars([0, 0])), BigInt::from(1));
        assert_eq!(e.coefficient(&Monomial::var(0)), BigInt::from(2));
        assert_eq!(e.coefficient(&Monomial::one()), BigInt::from(1));
        assert_eq!(e.len(), 3);
    }

    #[test]
    fn constant_and_contract() {
        let p = PrimeModulus::new(17).unwrap();
        let mut b = CircuitBuilder::new();
        let k = b.constant(5);
        let c = b.finish(0, Some(p), vec![k]).unwrap();
        assert_eq!(
            expand(&c, 0).unwrap()[0].coefficient(&Monomial::one()),
            BigInt::from(5)
        );
        let mut b = CircuitBuilder::new();
        let k = b.constant(5);
        let c = b.finish(0, None, vec![k]).unwrap();
        assert!(matches!(expand(&c, 0), Err(Error::Contract(_))));
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let p = PrimeModulus::new(101).unwrap();
        let mut b = CircuitBuilder::new();
        let xs: Vec<_> = (0..6).map(|i| b.input(i)).collect();
        let mut layer = xs.clone();
        for _ in 0..3 {
            let next: Vec<_> = layer
                .windows(2)
                .map(|w| {
                    let s = b.add(w[0], w[1]);
                    b.mul(s, w[0])
                })
                .collect();
            layer = next;
        }
        let c = b.finish(6, Some(p), layer).unwrap();
        let par = expand(&c, 5).unwrap();
        let seq = crate::par::sequential(|| expand(&c, 5).unwrap());
        assert_eq!(par, seq);
    }
}
