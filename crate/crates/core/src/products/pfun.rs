//! The semigroup `P_{K,T}` of functions from principal left ideals of `T`
//! into `K`, and the action of `T` on it.

use crate::action::{EndoAction, EpsilonMap};
use crate::error::{Error, Result};
use crate::products::{intern, tabulate, Index};
use crate::semigroup::{ElementSet, InverseSemigroup};

/// A function `Te → K`, stored as its generator `e` and its values over the
/// ascending list of `Te`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialFunctionElement {
    pub generator: usize,
    pub values: Vec<u32>,
}

/// `K`, `T` and the principal left ideals `Te`.
#[derive(Clone, Debug)]
pub struct PfunSpace {
    k: InverseSemigroup,
    t: InverseSemigroup,
    ideals: Vec<Vec<usize>>,
    position: Vec<Vec<u32>>,
}

const ABSENT: u32 = u32::MAX;

impl PfunSpace {
    pub fn new(k: InverseSemigroup, t: InverseSemigroup) -> Self {
        let n = t.order();
        let mut ideals = vec![Vec::new(); n];
        let mut position = vec![Vec::new(); n];
        for &e in t.idempotents() {
            let ideal = t.principal_left_ideal(e).to_vec();
            let mut pos = vec![ABSENT; n];
            for (i, &x) in ideal.iter().enumerate() {
                pos[x] = i as u32;
            }
            ideals[e] = ideal;
            position[e] = pos;
        }
        Self {
            k,
            t,
            ideals,
            position,
        }
    }

    pub fn k(&self) -> &InverseSemigroup {
        &self.k
    }

    pub fn t(&self) -> &InverseSemigroup {
        &self.t
    }

    /// `Te`, ascending; empty unless `e` is idempotent.
    pub fn domain(&self, e: usize) -> &[usize] {
        &self.ideals[e]
    }

    pub fn eval(&self, alpha: &PartialFunctionElement, x: usize) -> Option<usize> {
        match self.position[alpha.generator][x] {
            ABSENT => None,
            i => Some(alpha.values[i as usize] as usize),
        }
    }

    pub fn from_fn(&self, e: usize, f: impl Fn(usize) -> usize) -> PartialFunctionElement {
        PartialFunctionElement {
            generator: e,
            values: self.ideals[e].iter().map(|&x| f(x) as u32).collect(),
        }
    }

    /// Pointwise product on `Te ∩ Tf = T(ef)`.
    pub fn oplus(
        &self,
        alpha: &PartialFunctionElement,
        beta: &PartialFunctionElement,
    ) -> PartialFunctionElement {
        let ef = self.t.mul(alpha.generator, beta.generator);
        self.from_fn(ef, |x| {
            let a = self.eval(alpha, x).expect("x ∈ Te");
            let b = self.eval(beta, x).expect("x ∈ Tf");
            self.k.mul(a, b)
        })
    }

    /// `(t·α)(x) = α(xt)` on `T ran(te)`.
    pub fn act(&self, t: usize, alpha: &PartialFunctionElement) -> PartialFunctionElement {
        let g = self.t.ran(self.t.mul(t, alpha.generator));
        self.from_fn(g, |x| self.eval(alpha, self.t.mul(x, t)).expect("xt ∈ Te"))
    }

    /// Pointwise inverse.
    pub fn inverse(&self, alpha: &PartialFunctionElement) -> PartialFunctionElement {
        PartialFunctionElement {
            generator: alpha.generator,
            values: alpha
                .values
                .iter()
                .map(|&a| self.k.inv(a as usize) as u32)
                .collect(),
        }
    }

    /// Number of functions `Te → K`, if it fits in a `usize`.
    pub fn count_with_domain(&self, e: usize) -> Option<usize> {
        self.k.order().checked_pow(self.ideals[e].len() as u32)
    }

    /// `|P_{K,T}|`
    pub fn size(&self) -> Option<usize> {
        self.t.idempotents().iter().try_fold(0usize, |acc, &e| {
            acc.checked_add(self.count_with_domain(e)?)
        })
    }

    /// All functions on `Te` with `α(x) ∈ choices(x)`, in lexicographic
    /// order of their value lists.
    pub fn enumerate_with_domain(
        &self,
        e: usize,
        choices: impl Fn(usize) -> Vec<usize>,
    ) -> Vec<PartialFunctionElement> {
        let options: Vec<Vec<usize>> = self.ideals[e].iter().map(|&x| choices(x)).collect();
        let mut out = Vec::new();
        if options.iter().any(Vec::is_empty) {
            return out;
        }
        let mut digits = vec![0usize; options.len()];
        loop {
            out.push(PartialFunctionElement {
                generator: e,
                values: digits
                    .iter()
                    .zip(&options)
                    .map(|(&d, o)| o[d] as u32)
                    .collect(),
            });
            let mut i = digits.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < options[i].len() {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    /// Functions on `Te` with values in `K`, or in `K_{ran(x)}` when `classes`
    /// is given.
    pub(crate) fn functions(
        &self,
        e: usize,
        classes: Option<&[ElementSet]>,
    ) -> Vec<PartialFunctionElement> {
        match classes {
            None => self.enumerate_with_domain(e, |_| (0..self.k.order()).collect()),
            Some(cl) => self.enumerate_with_domain(e, |x| cl[self.t.ran(x)].to_vec()),
        }
    }

    /// `P_{K,T}`, or `P^η` when `classes` is given, as an inverse semigroup
    /// with the `T`-action and the domain-generator map.
    pub fn materialize(&self, classes: Option<&[ElementSet]>, cap: usize) -> Result<PfunSemigroup> {
        let bound = self.size().unwrap_or(usize::MAX);
        if classes.is_none() && bound > cap {
            return Err(Error::TooLarge {
                what: "partial function semigroup",
                size: bound,
                bound: cap,
            });
        }
        let mut elements = Vec::new();
        for &e in self.t.idempotents() {
            elements.extend(self.functions(e, classes));
            if elements.len() > cap {
                return Err(Error::TooLarge {
                    what: "partial function semigroup",
                    size: elements.len(),
                    bound: cap,
                });
            }
        }
        let index = intern(&elements);
        let semigroup = tabulate(
            "partial function semigroup",
            &elements,
            &index,
            |a, b| self.oplus(a, b),
            |a| self.label(a),
        )?;
        let rows: Vec<Vec<usize>> = (0..self.t.order())
            .map(|x| {
                elements
                    .iter()
                    .map(|a| {
                        index.get(&self.act(x, a)).copied().ok_or_else(|| {
                            Error::Invalid("function set not closed under the action".into())
                        })
                    })
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        let action = EndoAction::validate(self.t.clone(), semigroup.clone(), &rows)?;
        let eps = EpsilonMap::new(&action, elements.iter().map(|a| a.generator).collect())?;
        Ok(PfunSemigroup {
            semigroup,
            elements,
            index,
            action,
            eps,
        })
    }

    /// `[x↦a,…]`
    pub fn label(&self, alpha: &PartialFunctionElement) -> String {
        let parts: Vec<String> = self.ideals[alpha.generator]
            .iter()
            .zip(&alpha.values)
            .map(|(&x, &a)| format!("{}↦{}", self.t.name(x), self.k.name(a as usize)))
            .collect();
        format!("[{}]", parts.join(","))
    }
}

/// A materialized `P_{K,T}` (or `P^η`).
#[derive(Clone, Debug)]
pub struct PfunSemigroup {
    pub semigroup: InverseSemigroup,
    pub elements: Vec<PartialFunctionElement>,
    index: Index<PartialFunctionElement>,
    pub action: EndoAction,
    pub eps: EpsilonMap,
}

impl PfunSemigroup {
    pub fn index_of(&self, alpha: &PartialFunctionElement) -> Option<usize> {
        self.index.get(alpha).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::check_afr;
    use crate::fixtures;

    #[test]
    fn laws_on_small_space() {
        let space = PfunSpace::new(fixtures::cyclic(2), fixtures::chain(2));
        assert_eq!(space.domain(0), &[0]);
        assert_eq!(space.domain(1), &[0, 1]);
        assert_eq!(space.size(), Some(2 + 4));
        let all: Vec<_> = [0, 1]
            .iter()
            .flat_map(|&e| space.functions(e, None))
            .collect();
        for a in &all {
            assert_eq!(&space.oplus(&space.oplus(a, &space.inverse(a)), a), a);
            for &e in &[0, 1] {
                let fixed = space.act(e, a) == *a;
                assert_eq!(fixed, space.t().natural_leq(a.generator, e));
            }
        }
        // α on T·0 with α(0) = 1: 1·α = α.
        let alpha = space.from_fn(0, |_| 1);
        assert_eq!(space.act(1, &alpha), alpha);
        assert_eq!(space.act(0, &space.from_fn(1, |x| x)).values, vec![0]);
    }

    #[test]
    fn materialized_space_satisfies_afr() {
        for (k, t) in [
            (fixtures::cyclic(2), fixtures::chain(2)),
            (fixtures::chain(2), fixtures::z2_with_zero()),
            (fixtures::cyclic(2), fixtures::b2()),
        ] {
            let space = PfunSpace::new(k, t);
            let p = space.materialize(None, 4096).unwrap();
            assert_eq!(Some(p.elements.len()), space.size());
            assert!(check_afr(&p.action, &p.eps).is_ok());
        }
    }
}
