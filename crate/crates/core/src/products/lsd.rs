//! λ-semidirect products.

use crate::action::{EndoAction, EpsilonMap};
use crate::congruence::Congruence;
use crate::error::Result;
use crate::morphism::{is_homomorphism, ExtensionSolution, Morphism};
use crate::products::rsd::{build_rsd, FullRestrictedSemidirectProduct};
use crate::products::{intern, tabulate, Index};
use crate::semigroup::{ElementSet, InverseSemigroup, Subsemigroup};

/// `K ⋊^λ T = {(a, t) : a = ran(t)·a}` with
/// `(a,t)(b,u) = ((ran(tu)·a)(t·b), tu)`.
///
/// Elements are ordered by `t`, then by `a`.
#[derive(Clone, Debug)]
pub struct LambdaSemidirectProduct {
    action: EndoAction,
    pub semigroup: InverseSemigroup,
    pairs: Vec<(usize, usize)>,
    index: Index<(usize, usize)>,
}

/// The product rule on pairs, without reference to a materialized table.
pub fn lsd_mul(
    action: &EndoAction,
    (a, t): (usize, usize),
    (b, u): (usize, usize),
) -> (usize, usize) {
    let (k, ts) = (action.acted_on(), action.acting());
    let tu = ts.mul(t, u);
    (k.mul(action.act(ts.ran(tu), a), action.act(t, b)), tu)
}

pub fn build_lsd(action: &EndoAction) -> Result<LambdaSemidirectProduct> {
    let (k, t) = (action.acted_on(), action.acting());
    let mut pairs = Vec::new();
    for x in 0..t.order() {
        let r = t.ran(x);
        pairs.extend(
            (0..k.order())
                .filter(|&a| action.act(r, a) == a)
                .map(|a| (a, x)),
        );
    }
    let index = intern(&pairs);
    let semigroup = tabulate(
        "λ-semidirect product",
        &pairs,
        &index,
        |&p, &q| lsd_mul(action, p, q),
        |&(a, x)| format!("({},{})", k.name(a), t.name(x)),
    )?;
    Ok(LambdaSemidirectProduct {
        action: action.clone(),
        semigroup,
        pairs,
        index,
    })
}

impl LambdaSemidirectProduct {
    pub fn action(&self) -> &EndoAction {
        &self.action
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

    /// `ker π₂`
    pub fn projection_congruence(&self) -> Congruence {
        Congruence::kernel_of(&self.pairs.iter().map(|&(_, t)| t).collect::<Vec<_>>())
    }

    pub fn solution(&self) -> ExtensionSolution {
        ExtensionSolution::new(self.semigroup.clone(), self.projection_congruence())
            .expect("ker π₂ is a congruence")
    }

    /// `𝕂_e = e·K × {e}` for every idempotent `e` of `T`, as element sets
    /// of the product.
    pub fn kernel_classes(&self) -> Vec<(usize, ElementSet)> {
        let (k, t) = (self.k(), self.t());
        t.idempotents()
            .iter()
            .map(|&e| {
                let set = (0..k.order()).map(|a| {
                    self.index_of(self.action.act(e, a), e)
                        .expect("e·a is fixed by e")
                });
                (e, ElementSet::from_iter(self.semigroup.order(), set))
            })
            .collect()
    }

    /// Union of [`Self::kernel_classes`].
    pub fn kernel_by_formula(&self) -> ElementSet {
        let mut all = ElementSet::empty(self.semigroup.order());
        for (_, c) in self.kernel_classes() {
            all.union_with(&c);
        }
        all
    }
}

/// `K' = ⋃ e·K` together with the restricted action.
#[derive(Clone, Debug)]
pub struct ReducedFirstFactor {
    pub sub: Subsemigroup,
    pub action: EndoAction,
}

pub fn reduce_first_factor(action: &EndoAction) -> Result<ReducedFirstFactor> {
    let (k, t) = (action.acted_on(), action.acting());
    let mut set = ElementSet::empty(k.order());
    for &e in t.idempotents() {
        for a in 0..k.order() {
            set.insert(action.act(e, a));
        }
    }
    let sub = k.restrict(&set)?;
    let rows: Vec<Vec<usize>> = (0..t.order())
        .map(|x| {
            sub.embedding
                .iter()
                .map(|&a| sub.local(action.act(x, a)).expect("K' is T-invariant"))
                .collect()
        })
        .collect();
    let action = EndoAction::validate(t.clone(), sub.semigroup.clone(), &rows)?;
    Ok(ReducedFirstFactor { sub, action })
}

/// The Kernel `𝕂` of `π₂` on a λ-semidirect product, with the action
/// `t·(a, e) = (t·a, ran(te))` and `ε(a, e) = e`.
#[derive(Clone, Debug)]
pub struct KernelAction {
    /// `𝕂` inside the product.
    pub kernel: Subsemigroup,
    pub action: EndoAction,
    pub eps: EpsilonMap,
}

pub fn induced_kernel_action(p: &LambdaSemidirectProduct) -> Result<KernelAction> {
    let kernel = p.semigroup.restrict(&p.kernel_by_formula())?;
    let (k_action, t) = (p.action(), p.t());
    let rows: Vec<Vec<usize>> = (0..t.order())
        .map(|x| {
            kernel
                .embedding
                .iter()
                .map(|&i| {
                    let (a, e) = p.pair(i);
                    let image = p
                        .index_of(k_action.act(x, a), t.ran(t.mul(x, e)))
                        .expect("image lies in the product");
                    kernel.local(image).expect("image lies in 𝕂")
                })
                .collect()
        })
        .collect();
    let action = EndoAction::validate(t.clone(), kernel.semigroup.clone(), &rows)?;
    let eps = EpsilonMap::new(
        &action,
        kernel.embedding.iter().map(|&i| p.pair(i).1).collect(),
    )?;
    Ok(KernelAction {
        kernel,
        action,
        eps,
    })
}

/// `ψ(a, t) = ((a, ran t), t)` from the λ-semidirect product onto the full
/// restricted product of its Kernel by `T`.
#[derive(Clone, Debug)]
pub struct KernelRepresentation {
    pub kernel_action: KernelAction,
    pub rsd: FullRestrictedSemidirectProduct,
    pub psi: Morphism,
}

pub fn psi_lemma21(p: &LambdaSemidirectProduct) -> Result<KernelRepresentation> {
    let kernel_action = induced_kernel_action(p)?;
    let rsd = build_rsd(&kernel_action.action, &kernel_action.eps)?;
    let t = p.t();
    let map: Vec<usize> = p
        .pairs()
        .iter()
        .map(|&(a, x)| {
            let in_p = p.index_of(a, t.ran(x)).expect("(a, ran t) in the product");
            let local = kernel_action.kernel.local(in_p).expect("(a, ran t) in 𝕂");
            rsd.index_of(local, x)
                .expect("ψ lands in the restricted product")
        })
        .collect();
    let psi = is_homomorphism(&map, &p.semigroup, &rsd.semigroup)?;
    Ok(KernelRepresentation {
        kernel_action,
        rsd,
        psi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence;
    use crate::fixtures;
    use crate::morphism::{solution_embedding, EmbeddingKind};

    fn chain2_mult() -> EndoAction {
        let c = fixtures::chain(2);
        EndoAction::from_fn(c.clone(), c.clone(), |t, a| c.mul(t, a)).unwrap()
    }

    #[test]
    fn chain_on_chain_is_three_element_semilattice() {
        let p = build_lsd(&chain2_mult()).unwrap();
        let mut pairs = p.pairs().to_vec();
        pairs.sort();
        assert_eq!(pairs, vec![(0, 0), (0, 1), (1, 1)]);
        assert!(p.semigroup.is_semilattice());
        let classes = p.kernel_classes();
        let as_pairs = |s: &ElementSet| s.iter().map(|i| p.pair(i)).collect::<Vec<_>>();
        assert_eq!(as_pairs(&classes[0].1), vec![(0, 0)]);
        assert_eq!(as_pairs(&classes[1].1), vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn trivial_group_action_gives_k() {
        let k = fixtures::b2();
        let action = EndoAction::from_fn(fixtures::trivial(), k.clone(), |_, a| a).unwrap();
        let p = build_lsd(&action).unwrap();
        assert_eq!(p.semigroup.rows(), k.rows());
    }

    #[test]
    fn trivial_action_of_group_is_direct_product() {
        let k = fixtures::chain(2);
        let z2 = fixtures::cyclic(2);
        let action = EndoAction::from_fn(z2.clone(), k.clone(), |_, a| a).unwrap();
        let p = build_lsd(&action).unwrap();
        assert_eq!(p.semigroup.order(), 4);
        for i in 0..4 {
            for j in 0..4 {
                let ((a, x), (b, y)) = (p.pair(i), p.pair(j));
                assert_eq!(p.pair(p.semigroup.mul(i, j)), (k.mul(a, b), z2.mul(x, y)));
            }
        }
    }

    #[test]
    fn inverse_and_kernel_formula() {
        let p = build_lsd(&chain2_mult()).unwrap();
        let (k, t) = (p.k(), p.t());
        for i in 0..p.semigroup.order() {
            let (a, x) = p.pair(i);
            let xi = t.inv(x);
            assert_eq!(
                p.pair(p.semigroup.inv(i)),
                (p.action().act(xi, k.inv(a)), xi)
            );
        }
        let oracle = congruence::kernel(&p.semigroup, &p.projection_congruence());
        assert_eq!(p.kernel_by_formula(), oracle);
        assert!(p.pi2().unwrap().surjective());
    }

    #[test]
    fn reduction_on_three_chain() {
        let t = fixtures::chain(2);
        let k = fixtures::chain(3);
        let action = EndoAction::from_fn(
            t.clone(),
            k.clone(),
            |x, a| if x == 0 { 0 } else { a.min(1) },
        )
        .unwrap();
        let reduced = reduce_first_factor(&action).unwrap();
        assert_eq!(reduced.sub.embedding, vec![0, 1]);
        let full = build_lsd(&action).unwrap();
        let small = build_lsd(&reduced.action).unwrap();
        let lifted: Vec<_> = small
            .pairs()
            .iter()
            .map(|&(a, x)| (reduced.sub.embedding[a], x))
            .collect();
        assert_eq!(lifted, full.pairs());
        assert_eq!(small.semigroup.rows(), full.semigroup.rows());

        let identity = EndoAction::from_fn(t.clone(), k.clone(), |_, a| a).unwrap();
        assert_eq!(
            reduce_first_factor(&identity).unwrap().sub.embedding.len(),
            3
        );
    }

    #[test]
    fn psi_is_an_isomorphism_of_extensions() {
        let p = build_lsd(&chain2_mult()).unwrap();
        let rep = psi_lemma21(&p).unwrap();
        assert!(rep.psi.bijective());
        let i = p.index_of(0, 1).unwrap();
        let (kernel_elt, t) = rep.rsd.pair(rep.psi.apply(i));
        assert_eq!(t, 1);
        assert_eq!(
            p.pair(rep.kernel_action.kernel.embedding[kernel_elt]),
            (0, 1)
        );
        let verdict = solution_embedding(
            rep.psi.map(),
            &p.solution(),
            &rep.rsd.solution(),
            EmbeddingKind::Isomorphism,
        )
        .unwrap();
        assert!(verdict.holds());
    }
}
