//! Full restricted semidirect products.

use crate::action::{check_afr, EndoAction, EpsilonMap};
use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::morphism::{is_homomorphism, ExtensionSolution, Morphism};
use crate::products::{intern, tabulate, Index};
use crate::semigroup::{ElementSet, InverseSemigroup};

/// `K ⋊ T = {(a, t) : ε(a) = ran(t)}` with `(a,t)(b,u) = (a(t·b), tu)`.
///
/// Elements are ordered by `t`, then by `a`.
#[derive(Clone, Debug)]
pub struct FullRestrictedSemidirectProduct {
    action: EndoAction,
    eps: EpsilonMap,
    pub semigroup: InverseSemigroup,
    pairs: Vec<(usize, usize)>,
    index: Index<(usize, usize)>,
}

pub fn rsd_mul(
    action: &EndoAction,
    (a, t): (usize, usize),
    (b, u): (usize, usize),
) -> (usize, usize) {
    (
        action.acted_on().mul(a, action.act(t, b)),
        action.acting().mul(t, u),
    )
}

pub fn build_rsd(action: &EndoAction, eps: &EpsilonMap) -> Result<FullRestrictedSemidirectProduct> {
    check_afr(action, eps).map_err(|v| Error::AfrViolated { a: v.a, e: v.e })?;
    let (k, t) = (action.acted_on(), action.acting());
    let mut pairs = Vec::new();
    for x in 0..t.order() {
        let r = t.ran(x);
        pairs.extend(
            (0..k.order())
                .filter(|&a| eps.apply(a) == r)
                .map(|a| (a, x)),
        );
    }
    let index = intern(&pairs);
    let semigroup = tabulate(
        "full restricted semidirect product",
        &pairs,
        &index,
        |&p, &q| rsd_mul(action, p, q),
        |&(a, x)| format!("({},{})", k.name(a), t.name(x)),
    )?;
    Ok(FullRestrictedSemidirectProduct {
        action: action.clone(),
        eps: eps.clone(),
        semigroup,
        pairs,
        index,
    })
}

impl FullRestrictedSemidirectProduct {
    pub fn action(&self) -> &EndoAction {
        &self.action
    }

    pub fn eps(&self) -> &EpsilonMap {
        &self.eps
    }

    pub fn k(&self) -> &InverseSemigroup {
        self.action.acted_on()
    }

    pub fn t(&self) -> &InverseSemigroup {
        self.action.acting()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn index_of(&self, a: usize, t: usize) -> Option<usize> {
        self.index.get(&(a, t)).copied()
    }

    pub fn pi2(&self) -> Result<Morphism> {
        let map: Vec<usize> = self.pairs.iter().map(|&(_, t)| t).collect();
        is_homomorphism(&map, &self.semigroup, self.t())
    }

    pub fn projection_congruence(&self) -> Congruence {
        Congruence::kernel_of(&self.pairs.iter().map(|&(_, t)| t).collect::<Vec<_>>())
    }

    pub fn solution(&self) -> ExtensionSolution {
        ExtensionSolution::new(self.semigroup.clone(), self.projection_congruence())
            .expect("ker π₂ is a congruence")
    }

    /// `𝕂_e = K_e × {e}` for every idempotent `e` of `T`.
    pub fn kernel_classes(&self) -> Vec<(usize, ElementSet)> {
        let (k, t) = (self.k(), self.t());
        t.idempotents()
            .iter()
            .map(|&e| {
                let set = (0..k.order())
                    .filter(|&a| self.eps.apply(a) == e)
                    .map(|a| self.index_of(a, e).expect("(a, ε(a)) in the product"));
                (e, ElementSet::from_iter(self.semigroup.order(), set))
            })
            .collect()
    }

    pub fn kernel_by_formula(&self) -> ElementSet {
        let mut all = ElementSet::empty(self.semigroup.order());
        for (_, c) in self.kernel_classes() {
            all.union_with(&c);
        }
        all
    }

    /// `a ↦ (a, ε(a))`, an isomorphism of `K` onto the Kernel of `π₂`.
    pub fn kernel_embedding(&self) -> Vec<usize> {
        (0..self.k().order())
            .map(|a| {
                self.index_of(a, self.eps.apply(a))
                    .expect("(a, ε(a)) in the product")
            })
            .collect()
    }
}
