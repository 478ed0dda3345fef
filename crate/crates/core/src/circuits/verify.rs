use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{expand, ArithmeticCircuit, CircuitBuilder};
use crate::algebra::{Monomial, PrimeModulus, SparsePolynomial};
use crate::error::{Error, Result};

/// Outcome of comparing a circuit's expansion with a target polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    /// The graded-lex smallest monomial on which the two disagree.
    Reject {
        monomial: Monomial,
        circuit_coeff: BigInt,
        target_coeff: BigInt,
    },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Accepts iff `expand(c, delta)` equals `target` as a formal polynomial
/// over ℤ_p. Operands without a modulus are reduced mod `p` first.
pub fn verify_circuit(
    c: &ArithmeticCircuit,
    target: &SparsePolynomial,
    delta: u32,
    p: PrimeModulus,
) -> Result<Verdict> {
    c.single_output()?;
    if c.nvars() != target.nvars() {
        return Err(Error::IncompatibleRing(format!(
            "circuit has {} variables, target {}",
            c.nvars(),
            target.nvars()
        )));
    }
    let target = match target.modulus() {
        None => target.reduce_mod(p),
        Some(q) if q == p => target.clone(),
        Some(q) => {
            return Err(Error::IncompatibleRing(format!(
                "target is over ℤ_{}, verifying over ℤ_{}",
                q.value(),
                p.value()
            )))
        }
    };
    let c = c.with_modulus(p)?;
    let got = expand(&c, delta)?.pop().expect("single output");
    Ok(first_difference(got.terms(), target.terms()))
}

fn first_difference(a: &[(Monomial, BigInt)], b: &[(Monomial, BigInt)]) -> Verdict {
    let (mut i, mut j) = (0, 0);
    loop {
        let ord = match (a.get(i), b.get(j)) {
            (None, None) => return Verdict::Accept,
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (Some(x), Some(y)) => x.0.cmp(&y.0),
        };
        match ord {
            Ordering::Less => {
                return Verdict::Reject {
                    monomial: a[i].0.clone(),
                    circuit_coeff: a[i].1.clone(),
                    target_coeff: BigInt::zero(),
                }
            }
            Ordering::Greater => {
                return Verdict::Reject {
                    monomial: b[j].0.clone(),
                    circuit_coeff: BigInt::zero(),
                    target_coeff: b[j].1.clone(),
                }
            }
            Ordering::Equal if a[i].1 != b[j].1 => {
                return Verdict::Reject {
                    monomial: a[i].0.clone(),
                    circuit_coeff: a[i].1.clone(),
                    target_coeff: b[j].1.clone(),
                }
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
}

/// Canonical circuit for `poly`: one shared input gate per variable, a
/// product chain per monomial (led by its coefficient unless that is 1) and
/// a balanced addition tree over the monomials.
pub fn sum_of_products_circuit(poly: &SparsePolynomial) -> ArithmeticCircuit {
    let mut b = CircuitBuilder::new();
    let mut inputs = vec![None; poly.nvars()];
    let mut roots = Vec::with_capacity(poly.len());
    for (m, coeff) in poly.terms() {
        let mut acc = if coeff.is_one() && !m.is_one() {
            None
        } else {
            Some(b.constant(coeff.clone()))
        };
        for &(v, e) in m.terms() {
            let x = *inputs[v as usize].get_or_insert_with(|| b.input(v));
            for _ in 0..e {
                acc = Some(match acc {
                    None => x,
                    Some(a) => b.mul(a, x),
                });
            }
        }
        roots.push(acc.expect("every monomial yields a gate"));
    }
    let out = b.balanced_sum(&roots);
    b.finish(poly.nvars(), poly.modulus(), vec![out])
        .expect("builder emits a well-formed circuit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{CircuitBuilder, Gate};

    fn p17() -> PrimeModulus {
        PrimeModulus::new(17).unwrap()
    }

    fn poly(terms: &[(&[u32], i64)]) -> SparsePolynomial {
        SparsePolynomial::from_terms(
            3,
            4,
            Some(p17()),
            terms
                .iter()
                .map(|(vs, c)| (Monomial::from_vars(vs.iter().copied()), BigInt::from(*c))),
        )
        .unwrap()
    }

    #[test]
    fn sop_shapes() {
        let x0 = sum_of_products_circuit(&poly(&[(&[0], 1)]));
        assert_eq!(x0.gates(), &[Gate::Input(0)]);
        let three = sum_of_products_circuit(&poly(&[(&[], 3)]));
        assert_eq!(three.gates(), &[Gate::Const(BigInt::from(3))]);
        let zero = sum_of_products_circuit(&poly(&[]));
        assert_eq!(zero.gates(), &[Gate::Const(BigInt::zero())]);
    }

    #[test]
    fn sop_round_trip_and_size() {
        let p = poly(&[(&[], 2), (&[0, 1], 1), (&[2, 2], 5), (&[0, 1, 2], 1)]);
        let c = sum_of_products_circuit(&p);
        assert!(verify_circuit(&c, &p, 4, p17()).unwrap().is_accept());
        let degs: usize = p.terms().iter().map(|(m, _)| m.degree() as usize).sum();
        assert!(c.size() <= 2 * (degs + p.len()));
    }

    #[test]
    fn reject_reports_witness() {
        let mut b = CircuitBuilder::new();
        let x0 = b.input(0);
        let x1 = b.input(1);
        let m = b.mul(x0, x1);
        let s = b.add(m, x0);
        let c = b.finish(3, Some(p17()), vec![s]).unwrap();
        let target = poly(&[(&[0, 1], 1), (&[0], 2)]);
        assert_eq!(
            verify_circuit(&c, &target, 2, p17()).unwrap(),
            Verdict::Reject {
                monomial: Monomial::var(0),
                circuit_coeff: BigInt::from(1),
                target_coeff: BigInt::from(2),
            }
        );
    }
}
