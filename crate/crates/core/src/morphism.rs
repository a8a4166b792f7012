//! Homomorphisms, isomorphism search, normal extension triples and their
//! solutions, and embeddings between solutions.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::congruence::{self, Congruence, Quotient};
use crate::error::{Error, Result};
use crate::semigroup::{ElementSet, InverseSemigroup, Subsemigroup};

/// Default bound on the order accepted by [`isomorphism_search`].
pub const ISOMORPHISM_BOUND: usize = 12;

/// A map between carriers, with injectivity and surjectivity precomputed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    map: Vec<usize>,
    target_order: usize,
    injective: bool,
    surjective: bool,
}

/// JSON shape of a morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub map: Vec<usize>,
}

impl Morphism {
    pub(crate) fn new_unchecked(map: Vec<usize>, target_order: usize) -> Self {
        let mut hit = vec![false; target_order];
        let mut injective = true;
        for &x in &map {
            if hit[x] {
                injective = false;
            }
            hit[x] = true;
        }
        let surjective = hit.iter().all(|&h| h);
        Self {
            map,
            target_order,
            injective,
            surjective,
        }
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn target_order(&self) -> usize {
        self.target_order
    }

    pub fn injective(&self) -> bool {
        self.injective
    }

    pub fn surjective(&self) -> bool {
        self.surjective
    }

    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Morphism) -> Morphism {
        Morphism::new_unchecked(
            self.map.iter().map(|&x| next.apply(x)).collect(),
            next.target_order,
        )
    }

    pub fn inverse(&self) -> Option<Morphism> {
        if !self.bijective() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b] = a;
        }
        Some(Morphism::new_unchecked(inv, self.map.len()))
    }

    pub fn image(&self) -> ElementSet {
        ElementSet::from_iter(self.target_order, self.map.iter().copied())
    }

    pub fn to_json(&self) -> MorphismJson {
        MorphismJson {
            map: self.map.clone(),
        }
    }
}

/// Returns the morphism iff `map` is a total multiplicative map `S → S'`.
pub fn is_homomorphism(
    map: &[usize],
    s: &InverseSemigroup,
    t: &InverseSemigroup,
) -> Result<Morphism> {
    if map.len() != s.order() {
        return Err(Error::Invalid(format!(
            "map has {} entries for a source of order {}",
            map.len(),
            s.order()
        )));
    }
    if let Some(&x) = map.iter().find(|&&x| x >= t.order()) {
        return Err(Error::Invalid(format!("image {x} is outside the target")));
    }
    for a in 0..s.order() {
        for b in 0..s.order() {
            if map[s.mul(a, b)] != t.mul(map[a], map[b]) {
                return Err(Error::NotMultiplicative { a, b });
            }
        }
    }
    Ok(Morphism::new_unchecked(map.to_vec(), t.order()))
}

/// Per-element isomorphism invariants used to prune the search.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Profile {
    idempotent: bool,
    below: usize,
    above: usize,
    dom_class: usize,
    ran_class: usize,
    index: usize,
    period: usize,
}

fn profiles(s: &InverseSemigroup) -> Vec<Profile> {
    let n = s.order();
    let mut dom_count = vec![0usize; n];
    let mut ran_count = vec![0usize; n];
    for a in 0..n {
        dom_count[s.dom(a)] += 1;
        ran_count[s.ran(a)] += 1;
    }
    (0..n)
        .map(|a| {
            // Powers a, a², … until the first repeat: index and period.
            let mut seen = vec![usize::MAX; n];
            let mut x = a;
            let mut k = 1;
            while seen[x] == usize::MAX {
                seen[x] = k;
                x = s.mul(x, a);
                k += 1;
            }
            Profile {
                idempotent: s.is_idempotent(a),
                below: (0..n).filter(|&b| s.natural_leq(b, a)).count(),
                above: (0..n).filter(|&b| s.natural_leq(a, b)).count(),
                dom_class: dom_count[s.dom(a)],
                ran_class: ran_count[s.ran(a)],
                index: seen[x],
                period: k - seen[x],
            }
        })
        .collect()
}

/// Backtracking isomorphism search with product propagation.
pub struct IsomorphismSearch<'a> {
    s: &'a InverseSemigroup,
    t: &'a InverseSemigroup,
    bound: usize,
    allowed: Option<&'a dyn Fn(usize, usize) -> bool>,
}

impl<'a> IsomorphismSearch<'a> {
    pub fn new(s: &'a InverseSemigroup, t: &'a InverseSemigroup) -> Self {
        Self {
            s,
            t,
            bound: ISOMORPHISM_BOUND,
            allowed: None,
        }
    }

    pub fn bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }

    /// Restricts which target elements each source element may map to.
    pub fn allowed(mut self, allowed: &'a dyn Fn(usize, usize) -> bool) -> Self {
        self.allowed = Some(allowed);
        self
    }

    pub fn first(&self) -> Result<Option<Morphism>> {
        let mut found = None;
        self.for_each(|m| {
            found = Some(m.clone());
            ControlFlow::Break(())
        })?;
        Ok(found)
    }

    pub fn all(&self) -> Result<Vec<Morphism>> {
        let mut out = Vec::new();
        self.for_each(|m| {
            out.push(m.clone());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// Calls `visit` on every isomorphism, in lexicographic order of the map.
    pub fn for_each(&self, mut visit: impl FnMut(&Morphism) -> ControlFlow<()>) -> Result<()> {
        let n = self.s.order();
        if n > self.bound {
            return Err(Error::TooLarge {
                what: "isomorphism search",
                size: n,
                bound: self.bound,
            });
        }
        if n != self.t.order() || self.s.idempotents().len() != self.t.idempotents().len() {
            return Ok(());
        }
        let ps = profiles(self.s);
        let pt = profiles(self.t);
        let mut sorted_s = ps
            .iter()
            .map(|p| (p.idempotent, p.below, p.above))
            .collect::<Vec<_>>();
        let mut sorted_t = pt
            .iter()
            .map(|p| (p.idempotent, p.below, p.above))
            .collect::<Vec<_>>();
        sorted_s.sort_unstable();
        sorted_t.sort_unstable();
        if sorted_s != sorted_t {
            return Ok(());
        }
        let mut state = SearchState {
            fwd: vec![usize::MAX; n],
            back: vec![usize::MAX; n],
            assigned: Vec::new(),
        };
        let _ = self.rec(&mut state, &ps, &pt, &mut visit);
        Ok(())
    }

    fn rec(
        &self,
        st: &mut SearchState,
        ps: &[Profile],
        pt: &[Profile],
        visit: &mut impl FnMut(&Morphism) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let n = self.s.order();
        let Some(a) = (0..n).find(|&a| st.fwd[a] == usize::MAX) else {
            let m = Morphism::new_unchecked(st.fwd.clone(), n);
            return visit(&m);
        };
        for b in 0..n {
            if st.back[b] != usize::MAX || ps[a] != pt[b] {
                continue;
            }
            let mark = st.assigned.len();
            if self.assign(st, ps, pt, a, b) {
                self.rec(st, ps, pt, visit)?;
            }
            st.undo(mark);
        }
        ControlFlow::Continue(())
    }

    /// Assigns `a ↦ b` and everything it forces. Returns false on conflict;
    /// the caller undoes partial work.
    fn assign(
        &self,
        st: &mut SearchState,
        ps: &[Profile],
        pt: &[Profile],
        a: usize,
        b: usize,
    ) -> bool {
        let mut queue = vec![(a, b)];
        while let Some((x, y)) = queue.pop() {
            match (st.fwd[x], st.back[y]) {
                (fx, _) if fx == y => continue,
                (fx, by) if fx != usize::MAX || by != usize::MAX => return false,
                _ => {}
            }
            if ps[x] != pt[y] || self.allowed.is_some_and(|f| !f(x, y)) {
                return false;
            }
            st.fwd[x] = y;
            st.back[y] = x;
            st.assigned.push(x);
            queue.push((self.s.inv(x), self.t.inv(y)));
            for i in 0..st.assigned.len() {
                let z = st.assigned[i];
                let w = st.fwd[z];
                queue.push((self.s.mul(x, z), self.t.mul(y, w)));
                queue.push((self.s.mul(z, x), self.t.mul(w, y)));
            }
        }
        true
    }
}

struct SearchState {
    fwd: Vec<usize>,
    back: Vec<usize>,
    assigned: Vec<usize>,
}

impl SearchState {
    fn undo(&mut self, mark: usize) {
        while self.assigned.len() > mark {
            let x = self.assigned.pop().unwrap();
            self.back[self.fwd[x]] = usize::MAX;
            self.fwd[x] = usize::MAX;
        }
    }
}

/// First isomorphism `S → S'` in lexicographic order, if any.
pub fn isomorphism_search(s: &InverseSemigroup, t: &InverseSemigroup) -> Result<Option<Morphism>> {
    IsomorphismSearch::new(s, t).first()
}

/// `(K, η, T)` with `η: K → E(T)` a surjective homomorphism. `eta` maps into
/// indices of `T`.
#[derive(Clone, Debug)]
pub struct NormalExtensionTriple {
    pub k: InverseSemigroup,
    pub t: InverseSemigroup,
    pub eta: Vec<usize>,
}

impl NormalExtensionTriple {
    pub fn new(k: InverseSemigroup, t: InverseSemigroup, eta: Vec<usize>) -> Result<Self> {
        is_homomorphism(&eta, &k, &t)?;
        if let Some(&x) = eta.iter().find(|&&x| !t.is_idempotent(x)) {
            return Err(Error::NotSemilatticeCodomain { x });
        }
        if let Some(&missing) = t.idempotents().iter().find(|e| !eta.contains(e)) {
            return Err(Error::NotSurjective { missing });
        }
        Ok(Self { k, t, eta })
    }

    /// The classes `K_e` indexed by idempotents of `T` (other entries empty).
    pub fn classes(&self) -> Vec<ElementSet> {
        let mut out = vec![ElementSet::empty(self.k.order()); self.t.order()];
        for (a, &e) in self.eta.iter().enumerate() {
            out[e].insert(a);
        }
        out
    }
}

/// A normal extension `(S, θ)`, with its quotient and Kernel precomputed.
#[derive(Clone, Debug)]
pub struct ExtensionSolution {
    pub s: InverseSemigroup,
    pub theta: Congruence,
    quotient: Quotient,
    kernel: ElementSet,
}

impl ExtensionSolution {
    pub fn new(s: InverseSemigroup, theta: Congruence) -> Result<Self> {
        let theta = congruence::is_congruence(&s, &theta.labels())?;
        let quotient = congruence::quotient(&s, &theta);
        let kernel = congruence::kernel(&s, &theta);
        Ok(Self {
            s,
            theta,
            quotient,
            kernel,
        })
    }

    pub fn quotient(&self) -> &InverseSemigroup {
        &self.quotient.semigroup
    }

    /// `θ^♮`, with quotient element ids equal to class ids.
    pub fn natural_map(&self) -> &Morphism {
        &self.quotient.natural_map
    }

    #[inline]
    pub fn class(&self, s: usize) -> usize {
        self.theta.class_of(s)
    }

    pub fn kernel(&self) -> &ElementSet {
        &self.kernel
    }

    pub fn kernel_subsemigroup(&self) -> Subsemigroup {
        self.s
            .restrict(&self.kernel)
            .expect("Kernel is an inverse subsemigroup")
    }

    /// The triple `(Ker θ, θ^♮|, S/θ)` this extension solves, with the
    /// inclusion of `Ker θ` into `S`.
    pub fn canonical_triple(&self) -> (NormalExtensionTriple, Subsemigroup) {
        let sub = self.kernel_subsemigroup();
        let eta = sub.embedding.iter().map(|&a| self.class(a)).collect();
        let triple =
            NormalExtensionTriple::new(sub.semigroup.clone(), self.quotient().clone(), eta)
                .expect("canonical triple is valid");
        (triple, sub)
    }
}

/// Why [`solves`] failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveFailure {
    KernelOrderMismatch,
    QuotientOrderMismatch,
    QuotientNotIsomorphic,
    NoCompatibleKernelIsomorphism,
}

/// Witness that `(S, θ)` solves `(K, η, T)`: `chi: K → Ker θ` (into `S`
/// indices) and `psi: T → S/θ` isomorphisms with `θ^♮ χ = ψ η`.
#[derive(Clone, Debug)]
pub struct SolutionWitness {
    pub chi: Vec<usize>,
    pub psi: Morphism,
}

pub fn solves(
    triple: &NormalExtensionTriple,
    sol: &ExtensionSolution,
) -> Result<std::result::Result<SolutionWitness, SolveFailure>> {
    if triple.k.order() != sol.kernel().len() {
        return Ok(Err(SolveFailure::KernelOrderMismatch));
    }
    if triple.t.order() != sol.quotient().order() {
        return Ok(Err(SolveFailure::QuotientOrderMismatch));
    }
    let sub = sol.kernel_subsemigroup();
    let bound = triple
        .k
        .order()
        .max(triple.t.order())
        .max(ISOMORPHISM_BOUND);
    let psis = IsomorphismSearch::new(&triple.t, sol.quotient())
        .bound(bound)
        .all()?;
    if psis.is_empty() {
        return Ok(Err(SolveFailure::QuotientNotIsomorphic));
    }
    for psi in psis {
        let allowed = |a: usize, b: usize| sol.class(sub.embedding[b]) == psi.apply(triple.eta[a]);
        let chi = IsomorphismSearch::new(&triple.k, &sub.semigroup)
            .bound(bound)
            .allowed(&allowed)
            .first()?;
        if let Some(chi) = chi {
            let chi = chi.map().iter().map(|&b| sub.embedding[b]).collect();
            return Ok(Ok(SolutionWitness { chi, psi }));
        }
    }
    Ok(Err(SolveFailure::NoCompatibleKernelIsomorphism))
}

/// Embedding or isomorphism of normal extensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingKind {
    Embedding,
    Isomorphism,
}

/// Outcome of [`solution_embedding`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingVerdict {
    Holds,
    /// `φ(s) ∉ Ker θ'` for `s ∈ Ker θ`.
    KernelNotPreserved {
        s: usize,
    },
    /// Isomorphism variant: some element of `Ker θ'` is not an image of `Ker θ`.
    KernelNotOnto {
        target: usize,
    },
    NotSurjective {
        missing: usize,
    },
    /// `s θ s'` and `φ(s) θ' φ(s')` disagree.
    RelationMismatch {
        s: usize,
        s2: usize,
    },
}

impl EmbeddingVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, EmbeddingVerdict::Holds)
    }
}

/// Checks that `phi: S → S'` is an embedding (or isomorphism) of normal
/// extensions `(S, θ) → (S', θ')`.
pub fn solution_embedding(
    phi: &[usize],
    sol: &ExtensionSolution,
    target: &ExtensionSolution,
    kind: EmbeddingKind,
) -> Result<EmbeddingVerdict> {
    let m = is_homomorphism(phi, &sol.s, &target.s)?;
    if !m.injective() {
        let n = phi.len();
        let (a, b) = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| phi[a] == phi[b])
            .unwrap();
        return Err(Error::NotInjective { a, b });
    }
    if let Some(s) = sol
        .kernel()
        .iter()
        .find(|&s| !target.kernel().contains(phi[s]))
    {
        return Ok(EmbeddingVerdict::KernelNotPreserved { s });
    }
    if kind == EmbeddingKind::Isomorphism {
        if let Some(missing) = (0..target.s.order()).find(|x| !m.image().contains(*x)) {
            return Ok(EmbeddingVerdict::NotSurjective { missing });
        }
        let image = ElementSet::from_iter(target.s.order(), sol.kernel().iter().map(|s| phi[s]));
        if let Some(target) = target.kernel().iter().find(|&x| !image.contains(x)) {
            return Ok(EmbeddingVerdict::KernelNotOnto { target });
        }
    }
    let n = sol.s.order();
    for s in 0..n {
        for s2 in s + 1..n {
            if sol.theta.related(s, s2) != target.theta.related(phi[s], phi[s2]) {
                return Ok(EmbeddingVerdict::RelationMismatch { s, s2 });
            }
        }
    }
    Ok(EmbeddingVerdict::Holds)
}

/// The strict equivalence of explicit solutions `(ι, S, τ)` and
/// `(ι', S', τ')` of the same triple: `φ` bijective homomorphism with
/// `φι = ι'` and `τ'φ = τ`.
pub fn strict_equivalence(
    phi: &[usize],
    s: &InverseSemigroup,
    s2: &InverseSemigroup,
    iota: &[usize],
    tau: &[usize],
    iota2: &[usize],
    tau2: &[usize],
) -> Result<bool> {
    let m = is_homomorphism(phi, s, s2)?;
    Ok(m.bijective()
        && iota.iter().zip(iota2).all(|(&i, &j)| phi[i] == j)
        && (0..s.order()).all(|x| tau2[phi[x]] == tau[x]))
}

/// Searches for an isomorphism of normal extensions `(S, θ) → (S', θ')`.
pub fn find_solution_isomorphism(
    sol: &ExtensionSolution,
    target: &ExtensionSolution,
    bound: usize,
) -> Result<Option<Morphism>> {
    if sol.s.order() != target.s.order()
        || sol.kernel().len() != target.kernel().len()
        || sol.theta.class_count() != target.theta.class_count()
    {
        return Ok(None);
    }
    let allowed = |a: usize, b: usize| sol.kernel().contains(a) == target.kernel().contains(b);
    let mut found = None;
    let mut failure = None;
    IsomorphismSearch::new(&sol.s, &target.s)
        .bound(bound)
        .allowed(&allowed)
        .for_each(|m| {
            match solution_embedding(m.map(), sol, target, EmbeddingKind::Isomorphism) {
                Ok(v) if v.holds() => {
                    found = Some(m.clone());
                    ControlFlow::Break(())
                }
                Ok(_) => ControlFlow::Continue(()),
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            }
        })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::enumerate_congruences;
    use crate::fixtures;

    #[test]
    fn homomorphism_examples() {
        let b2 = fixtures::b2();
        let id: Vec<usize> = (0..5).collect();
        let m = is_homomorphism(&id, &b2, &b2).unwrap();
        assert!(m.bijective());
        let e = b2.idempotents()[0];
        let m = is_homomorphism(&[e; 5], &b2, &b2).unwrap();
        assert!(!m.injective());
        // Inversion is an anti-homomorphism; B2 is not commutative.
        let inv = b2.inverse_map();
        assert!(matches!(
            is_homomorphism(&inv, &b2, &b2),
            Err(Error::NotMultiplicative { .. })
        ));
    }

    #[test]
    fn isomorphism_examples() {
        let b2 = fixtures::b2();
        let m = isomorphism_search(&b2, &b2).unwrap().unwrap();
        assert_eq!(m.map(), &[0, 1, 2, 3, 4]);
        assert!(
            isomorphism_search(&fixtures::chain(2), &fixtures::cyclic(2))
                .unwrap()
                .is_none()
        );
        let i1 = fixtures::symmetric_inverse_monoid(1);
        assert!(isomorphism_search(&i1, &fixtures::chain(2))
            .unwrap()
            .is_some());
        assert!(
            isomorphism_search(&fixtures::chain(4), &fixtures::boolean2())
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn automorphism_counts() {
        // Aut(Z3) = Z2, Aut(boolean2) = Z2, Aut(B2) = Z2 (swap the two points).
        let count = |s: &InverseSemigroup| IsomorphismSearch::new(s, s).all().unwrap().len();
        assert_eq!(count(&fixtures::cyclic(3)), 2);
        assert_eq!(count(&fixtures::boolean2()), 2);
        assert_eq!(count(&fixtures::b2()), 2);
        assert_eq!(count(&fixtures::chain(3)), 1);
    }

    #[test]
    fn isomorphism_bound() {
        let big = fixtures::cyclic(13);
        assert!(matches!(
            isomorphism_search(&big, &big),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn every_extension_solves_its_canonical_triple() {
        for f in fixtures::catalog_up_to(6) {
            for theta in enumerate_congruences(&f.semigroup).unwrap() {
                let sol = ExtensionSolution::new(f.semigroup.clone(), theta).unwrap();
                let (triple, _) = sol.canonical_triple();
                assert!(solves(&triple, &sol).unwrap().is_ok(), "{}", f.name);
            }
        }
    }

    #[test]
    fn degenerate_triple_and_mismatch() {
        let t = fixtures::chain(3);
        let triple = NormalExtensionTriple::new(t.clone(), t.clone(), vec![0, 1, 2]).unwrap();
        let sol = ExtensionSolution::new(t.clone(), Congruence::identity(3)).unwrap();
        assert!(solves(&triple, &sol).unwrap().is_ok());
        let nabla = ExtensionSolution::new(t.clone(), Congruence::universal(3)).unwrap();
        assert_eq!(
            solves(&triple, &nabla).unwrap().unwrap_err(),
            SolveFailure::QuotientOrderMismatch
        );
    }

    #[test]
    fn identity_is_a_solution_isomorphism() {
        let s = fixtures::b2_with_identity();
        for theta in enumerate_congruences(&s).unwrap() {
            let sol = ExtensionSolution::new(s.clone(), theta).unwrap();
            let id: Vec<usize> = (0..s.order()).collect();
            assert!(
                solution_embedding(&id, &sol, &sol, EmbeddingKind::Isomorphism)
                    .unwrap()
                    .holds()
            );
            assert!(strict_equivalence(
                &id,
                &s,
                &s,
                &sol.kernel().to_vec(),
                sol.natural_map().map(),
                &sol.kernel().to_vec(),
                sol.natural_map().map()
            )
            .unwrap());
        }
    }

    #[test]
    fn collapsing_theta_classes_is_detected() {
        // Identity map from (S, Δ) to (S, ∇) merges distinct classes.
        let s = fixtures::chain(2);
        let delta = ExtensionSolution::new(s.clone(), Congruence::identity(2)).unwrap();
        let nabla = ExtensionSolution::new(s.clone(), Congruence::universal(2)).unwrap();
        let v = solution_embedding(&[0, 1], &delta, &nabla, EmbeddingKind::Embedding).unwrap();
        assert_eq!(v, EmbeddingVerdict::RelationMismatch { s: 0, s2: 1 });
        assert!(matches!(
            solution_embedding(&[0, 0], &delta, &nabla, EmbeddingKind::Embedding),
            Err(Error::NotInjective { a: 0, b: 1 })
        ));
    }
}
