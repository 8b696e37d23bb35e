//! Rational exterior algebra on at most 32 generators, used to integrate
//! Chern characters against the Poincaré class on `A × Â`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::Rational;

/// A form, as a map from generator bitmasks to coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub(crate) struct Form(pub BTreeMap<u32, Rational>);

/// Sign of the permutation sorting the concatenation of `a` and `b`.
fn merge_sign(a: u32, b: u32) -> bool {
    // count pairs (i in a, j in b) with i > j
    let mut inversions = 0;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (a >> (j + 1)).count_ones();
    }
    inversions % 2 == 1
}

impl Form {
    pub fn one() -> Self {
        Form(BTreeMap::from([(0, Rational::one())]))
    }

    pub fn term(mask: u32, c: Rational) -> Self {
        Form(BTreeMap::from([(mask, c)]))
    }

    pub fn add(&mut self, other: &Form) {
        for (&m, c) in &other.0 {
            let e = self.0.entry(m).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                self.0.remove(&m);
            }
        }
    }

    pub fn scale(&self, q: &Rational) -> Form {
        Form(
            self.0
                .iter()
                .filter(|_| !q.is_zero())
                .map(|(&m, c)| (m, c * q))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Form) -> Form {
        let mut out: BTreeMap<u32, Rational> = BTreeMap::new();
        for (&a, x) in &self.0 {
            for (&b, y) in &other.0 {
                if a & b != 0 {
                    continue;
                }
                let p = x * y;
                let e = out.entry(a | b).or_insert_with(Rational::zero);
                if merge_sign(a, b) {
                    *e -= p;
                } else {
                    *e += p;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Form(out)
    }

    /// `exp(x)` for an even nilpotent form.
    pub fn exp(&self) -> Form {
        let mut total = Form::one();
        let mut power = Form::one();
        let mut j = 1i64;
        loop {
            power = power.mul(self).scale(&Rational::new(1.into(), j.into()));
            if power.0.is_empty() {
                return total;
            }
            total.add(&power);
            j += 1;
        }
    }

    /// Integrates over the generators in `fiber`: keeps the monomials that
    /// contain all of them, moved to the front in increasing order, and
    /// strips them.
    pub fn integrate(&self, fiber: u32) -> Form {
        let mut out = Form::default();
        for (&m, c) in &self.0 {
            if m & fiber != fiber {
                continue;
            }
            let rest = m & !fiber;
            let c = if merge_sign(fiber, rest) { -c } else { c.clone() };
            out.add(&Form::term(rest, c));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn anticommutation() {
        let e0 = Form::term(1, rat(1, 1));
        let e1 = Form::term(2, rat(1, 1));
        assert_eq!(e0.mul(&e1), Form::term(3, rat(1, 1)));
        assert_eq!(e1.mul(&e0), Form::term(3, rat(-1, 1)));
        assert!(e0.mul(&e0).0.is_empty());
    }

    #[test]
    fn exponential_of_a_two_form() {
        // exp(e0e1 + e2e3) = 1 + e0e1 + e2e3 + e0e1e2e3
        let x = Form(BTreeMap::from([(0b0011, rat(1, 1)), (0b1100, rat(1, 1))]));
        let e = x.exp();
        assert_eq!(e.0.len(), 4);
        assert_eq!(e.0[&0b1111], rat(1, 1));
    }
}
