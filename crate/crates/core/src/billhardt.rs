//! Almost Billhardt transversals: the axioms, exhaustive search, the
//! characterization of full restricted semidirect products, and the
//! embedding into Houghton's wreath product along `η`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::action::{EndoAction, EpsilonMap};
use crate::congruence::{self, Congruence};
use crate::error::{Error, Result};
use crate::morphism::{
    solution_embedding, EmbeddingKind, EmbeddingVerdict, ExtensionSolution, NormalExtensionTriple,
};
use crate::products::wreath::{HwrElement, LwrElement};
use crate::products::{
    build_hwr_eta, build_rsd, FullRestrictedSemidirectProduct, HoughtonWreath, LambdaWreath,
    PfunSpace,
};
use crate::semigroup::{ElementSet, InverseSemigroup, Subsemigroup};
use crate::trhull::{downharp, omega_bracket, Bitranslation, BitranslationJson, ExtensionHull};

/// Bound on `|Ω(S,θ) ∖ Π(S)|` for the subsemigroup scan.
pub const SUBSEMIGROUP_SCAN_BOUND: usize = 16;

/// `ξ: S/θ → Ω(S,θ)`, indexed by quotient element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    pub xi: Vec<Bitranslation>,
    pub split: bool,
}

/// JSON certificate for a transversal.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransversalJson {
    pub xi: Vec<BitranslationJson>,
    pub split: bool,
    pub axioms: BTreeMap<String, bool>,
}

/// Where (B1) fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum B1Failure {
    NotBitranslation { t: usize },
    DoesNotRespect { t: usize, s: usize, s2: usize },
    WrongProjection { t: usize },
}

/// `ξ(t)↓ = ω_t` for every `t`, with `ξ(t)` a `θ`-respecting bitranslation.
pub fn check_b1(sol: &ExtensionSolution, xi: &[Bitranslation]) -> Result<(), B1Failure> {
    let q = sol.quotient();
    for (t, w) in xi.iter().enumerate() {
        if w.check(&sol.s).is_err() {
            return Err(B1Failure::NotBitranslation { t });
        }
        match downharp(w, &sol.theta) {
            Err(Error::DoesNotRespect { s, s2 }) => {
                return Err(B1Failure::DoesNotRespect { t, s, s2 })
            }
            Err(_) => return Err(B1Failure::NotBitranslation { t }),
            Ok(d) => {
                if d != Bitranslation::inner(q, t) {
                    return Err(B1Failure::WrongProjection { t });
                }
            }
        }
    }
    Ok(())
}

/// The inverse subsemigroup of `Ω(S)` generated by `Π(S) ∪ ξ(S/θ)`.
pub fn s_bar(s: &InverseSemigroup, xi: &[Bitranslation]) -> Vec<Bitranslation> {
    let mut gens: Vec<Bitranslation> = (0..s.order()).map(|x| Bitranslation::inner(s, x)).collect();
    for w in xi {
        gens.push(w.clone());
        gens.push(w.inverse(s));
    }
    let mut seen: std::collections::HashSet<Bitranslation> = gens.iter().cloned().collect();
    let mut members: Vec<Bitranslation> = seen.iter().cloned().collect();
    members.sort();
    let mut frontier = members.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for g in &gens {
                for c in [a.compose(g), g.compose(a)] {
                    if seen.insert(c.clone()) {
                        next.push(c);
                    }
                }
            }
        }
        members.extend(next.iter().cloned());
        frontier = next;
    }
    members.sort();
    members
}

/// `ω ∈ S̄ ∖ ξ(S/θ)` with `ω↓ = ω_t` but `ξ⁻¹(t)ξ(t) ≱ ω⁻¹ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct B2Failure {
    pub t: usize,
    pub omega: Bitranslation,
}

/// Assumes (B1).
pub fn check_b2(sol: &ExtensionSolution, xi: &[Bitranslation]) -> Result<(), B2Failure> {
    let s = &sol.s;
    let q = sol.quotient();
    let inner_q: HashMap<Bitranslation, usize> = (0..q.order())
        .map(|t| (Bitranslation::inner(q, t), t))
        .collect();
    let doms: Vec<Bitranslation> = xi.iter().map(|w| w.dom(s)).collect();
    for w in s_bar(s, xi) {
        let d = downharp(&w, &sol.theta).expect("S̄ respects θ");
        let Some(&t) = inner_q.get(&d) else { continue };
        if w == xi[t] {
            continue;
        }
        if !w.dom(s).natural_leq(&doms[t], s) {
            return Err(B2Failure { t, omega: w });
        }
    }
    Ok(())
}

/// `ξ(dom t) ≥ π_{dom s}` whenever `θ(s) = t`; returns the first failing `s`.
pub fn check_sb2(sol: &ExtensionSolution, xi: &[Bitranslation]) -> Result<(), usize> {
    let s = &sol.s;
    let q = sol.quotient();
    for x in 0..s.order() {
        let t = sol.class(x);
        if !Bitranslation::inner(s, s.dom(x)).natural_leq(&xi[q.dom(t)], s) {
            return Err(x);
        }
    }
    Ok(())
}

/// First `(t, u)` with `ξ(t)ξ(u) ≠ ξ(tu)`.
pub fn multiplicativity_witness(
    q: &InverseSemigroup,
    xi: &[Bitranslation],
) -> Option<(usize, usize)> {
    for t in 0..q.order() {
        for u in 0..q.order() {
            if xi[t].compose(&xi[u]) != xi[q.mul(t, u)] {
                return Some((t, u));
            }
        }
    }
    None
}

/// Checks (B1), (B2), and multiplicativity when `split` is requested.
pub fn validate_transversal(
    sol: &ExtensionSolution,
    xi: Vec<Bitranslation>,
    split: bool,
) -> Result<Transversal> {
    if xi.len() != sol.quotient().order() {
        return Err(Error::TransversalInvalid(format!(
            "{} values for {} classes",
            xi.len(),
            sol.quotient().order()
        )));
    }
    check_b1(sol, &xi).map_err(|f| Error::TransversalInvalid(format!("(B1) fails: {f:?}")))?;
    check_b2(sol, &xi)
        .map_err(|f| Error::TransversalInvalid(format!("(B2) fails at class {}", f.t)))?;
    if split {
        if let Some((t, u)) = multiplicativity_witness(sol.quotient(), &xi) {
            return Err(Error::NotSplit { t, u });
        }
    }
    Ok(Transversal { xi, split })
}

impl Transversal {
    pub fn to_json(&self, sol: &ExtensionSolution) -> TransversalJson {
        let mut axioms = BTreeMap::new();
        axioms.insert("B1".to_string(), check_b1(sol, &self.xi).is_ok());
        axioms.insert("B2".to_string(), check_b2(sol, &self.xi).is_ok());
        axioms.insert(
            "split".to_string(),
            multiplicativity_witness(sol.quotient(), &self.xi).is_none(),
        );
        if self.split {
            axioms.insert("sB2".to_string(), check_sb2(sol, &self.xi).is_ok());
        }
        TransversalJson {
            xi: self.xi.iter().map(BitranslationJson::from).collect(),
            split: self.split,
            axioms,
        }
    }
}

/// Exhaustive search over `ξ` with `ξ(t)` ranging over the members of
/// `Ω(S,θ)` projecting to `ω_t`, in index order; the first success in that
/// order, or `None` when no transversal exists.
pub fn find_transversal(eh: &ExtensionHull, want_split: bool) -> Option<Transversal> {
    let mut found = None;
    search_transversals(eh, want_split, |xi| {
        found = Some(xi.to_vec());
        false
    });
    found.map(|xi| Transversal {
        xi: xi.iter().map(|&i| eh.element(i).clone()).collect(),
        split: want_split,
    })
}

/// All transversals, as local indices of `Ω(S,θ)`.
pub fn all_transversals(eh: &ExtensionHull, want_split: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    search_transversals(eh, want_split, |xi| {
        out.push(xi.to_vec());
        true
    });
    out
}

fn search_transversals(
    eh: &ExtensionHull,
    want_split: bool,
    mut visit: impl FnMut(&[usize]) -> bool,
) {
    let sub = &eh.sub.semigroup;
    let sol = &eh.solution;
    let q = sol.quotient();
    let m = eh.order();
    // Every π_s with θ(s) = t lies in S̄, so dom ξ(t) ≥ π_{dom s} unless ξ(t) = π_s.
    let candidates: Vec<Vec<usize>> = (0..q.order())
        .map(|t| {
            (0..m)
                .filter(|&i| eh.down[i] == t)
                .filter(|&i| {
                    (0..sol.s.order()).filter(|&x| sol.class(x) == t).all(|x| {
                        let p = eh.pi_local[x];
                        p == i || sub.natural_leq(sub.dom(p), sub.dom(i))
                    })
                })
                .collect()
        })
        .collect();
    let inner = ElementSet::from_iter(m, eh.pi_local.iter().copied());
    let mut closures: HashMap<Vec<usize>, ElementSet> = HashMap::new();
    let mut xi = vec![usize::MAX; q.order()];
    struct Ctx<'a> {
        sub: &'a InverseSemigroup,
        q: &'a InverseSemigroup,
        down: &'a [usize],
        candidates: &'a [Vec<usize>],
        inner: &'a ElementSet,
        want_split: bool,
    }
    fn rec(
        cx: &Ctx,
        depth: usize,
        xi: &mut Vec<usize>,
        closures: &mut HashMap<Vec<usize>, ElementSet>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let n = cx.q.order();
        if depth == n {
            let mut key = xi.clone();
            key.sort();
            key.dedup();
            let closure = closures.entry(key).or_insert_with(|| {
                let mut gens = cx.inner.clone();
                for &w in xi.iter() {
                    gens.insert(w);
                    gens.insert(cx.sub.inv(w));
                }
                cx.sub.generated_subsemigroup(&gens)
            });
            let ok = closure.iter().all(|w| {
                let t = cx.down[w];
                w == xi[t] || cx.sub.natural_leq(cx.sub.dom(w), cx.sub.dom(xi[t]))
            });
            return !ok || visit(xi);
        }
        for &c in &cx.candidates[depth] {
            xi[depth] = c;
            if cx.want_split {
                let consistent = (0..=depth).all(|u| {
                    let pairs = [(depth, u), (u, depth)];
                    pairs.iter().all(|&(a, b)| {
                        let ab = cx.q.mul(a, b);
                        ab > depth || cx.sub.mul(xi[a], xi[b]) == xi[ab]
                    })
                });
                if !consistent {
                    continue;
                }
            }
            if !rec(cx, depth + 1, xi, closures, visit) {
                xi[depth] = usize::MAX;
                return false;
            }
        }
        xi[depth] = usize::MAX;
        true
    }
    let cx = Ctx {
        sub,
        q,
        down: &eh.down,
        candidates: &candidates,
        inner: &inner,
        want_split,
    };
    rec(&cx, 0, &mut xi, &mut closures, &mut visit);
}

/// Whether a transversal witnesses a (split) Billhardt congruence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    SplitBillhardt,
    Billhardt,
    Neither,
}

/// Billhardt when every `ξ(t)` is inner; split Billhardt when `ξ` is also
/// multiplicative.
pub fn classify_classical(sol: &ExtensionSolution, xi: &[Bitranslation]) -> Classification {
    let s = &sol.s;
    let inner: std::collections::HashSet<Bitranslation> =
        (0..s.order()).map(|x| Bitranslation::inner(s, x)).collect();
    if !xi.iter().all(|w| inner.contains(w)) {
        return Classification::Neither;
    }
    if multiplicativity_witness(sol.quotient(), xi).is_none() {
        Classification::SplitBillhardt
    } else {
        Classification::Billhardt
    }
}

/// A choice of `x_c` in each class of `theta` with `dom(x_c) ≥ dom(y)` for
/// every `y` in the class (and `c ↦ x_c` multiplicative when `split`).
pub fn classical_billhardt(
    s: &InverseSemigroup,
    theta: &Congruence,
    split: bool,
) -> Option<Vec<usize>> {
    let classes = theta.classes();
    let candidates: Vec<Vec<usize>> = classes
        .iter()
        .map(|c| {
            c.iter()
                .copied()
                .filter(|&x| c.iter().all(|&y| s.natural_leq(s.dom(y), s.dom(x))))
                .collect()
        })
        .collect();
    let reps = theta.representatives();
    let class_mul = |a: usize, b: usize| theta.class_of(s.mul(reps[a], reps[b]));
    let mut choice = vec![usize::MAX; classes.len()];
    fn rec(
        depth: usize,
        choice: &mut Vec<usize>,
        candidates: &[Vec<usize>],
        split: bool,
        s: &InverseSemigroup,
        class_mul: &dyn Fn(usize, usize) -> usize,
    ) -> bool {
        if depth == candidates.len() {
            return true;
        }
        for &x in &candidates[depth] {
            choice[depth] = x;
            let ok = !split
                || (0..=depth).all(|u| {
                    [(depth, u), (u, depth)].iter().all(|&(a, b)| {
                        let ab = class_mul(a, b);
                        ab > depth || s.mul(choice[a], choice[b]) == choice[ab]
                    })
                });
            if ok && rec(depth + 1, choice, candidates, split, s, class_mul) {
                return true;
            }
        }
        choice[depth] = usize::MAX;
        false
    }
    rec(0, &mut choice, &candidates, split, s, &class_mul).then_some(choice)
}

/// Outcome of comparing "θ is (split) almost Billhardt" with the existence
/// of `S̃ ⊇ Π(S)` in `Ω(S,θ)` on which `Ω(θ)` restricts to a (split)
/// Billhardt congruence.
#[derive(Clone, Debug)]
pub struct SubsemigroupCriterion {
    pub almost_billhardt: bool,
    /// A witnessing `S̃`, as local indices of `Ω(S,θ)`.
    pub witness: Option<Vec<usize>>,
    /// The transversal read off the witness passes (B1) and (B2).
    pub witness_transversal_valid: bool,
}

impl SubsemigroupCriterion {
    pub fn agrees(&self) -> bool {
        self.almost_billhardt == self.witness.is_some()
            && (self.witness.is_none() || self.witness_transversal_valid)
    }
}

pub fn prop39_check(eh: &ExtensionHull, split: bool) -> Result<SubsemigroupCriterion> {
    let sub = &eh.sub.semigroup;
    let m = eh.order();
    let inner = ElementSet::from_iter(m, eh.pi_local.iter().copied());
    let rest: Vec<usize> = (0..m).filter(|&i| !inner.contains(i)).collect();
    if rest.len() > SUBSEMIGROUP_SCAN_BOUND {
        return Err(Error::TooLarge {
            what: "subsemigroup scan",
            size: rest.len(),
            bound: SUBSEMIGROUP_SCAN_BOUND,
        });
    }
    let almost_billhardt = find_transversal(eh, split).is_some();
    let mut witness = None;
    let mut witness_transversal_valid = false;
    for mask in 0u32..(1 << rest.len()) {
        let mut set = inner.clone();
        for (j, &i) in rest.iter().enumerate() {
            if mask & (1 << j) != 0 {
                set.insert(i);
            }
        }
        if !sub.is_inverse_subsemigroup(&set) {
            continue;
        }
        let tilde: Subsemigroup = sub.restrict(&set)?;
        let labels: Vec<usize> = tilde
            .embedding
            .iter()
            .map(|&i| eh.omega_theta.class_of(i))
            .collect();
        let theta_tilde = Congruence::kernel_of(&labels);
        if let Some(choice) = classical_billhardt(&tilde.semigroup, &theta_tilde, split) {
            // ξ(θ(s)) is the chosen element of the class of π_s.
            let sol = &eh.solution;
            let q = sol.quotient();
            let mut xi = vec![None; q.order()];
            for x in 0..sol.s.order() {
                let local = tilde.local(eh.pi_local[x]).expect("Π(S) ⊆ S̃");
                let chosen = tilde.embedding[choice[theta_tilde.class_of(local)]];
                xi[sol.class(x)] = Some(eh.element(chosen).clone());
            }
            let xi: Vec<Bitranslation> = xi
                .into_iter()
                .map(|w| w.expect("every class is hit"))
                .collect();
            witness_transversal_valid = validate_transversal(sol, xi, split).is_ok();
            witness = Some(tilde.embedding.clone());
            break;
        }
    }
    Ok(SubsemigroupCriterion {
        almost_billhardt,
        witness,
        witness_transversal_valid,
    })
}

/// `t ↦ ω_[t]` on a full restricted semidirect product, as a transversal of
/// `ker π₂` (classes numbered as in the product's quotient).
pub fn theorem310_forward(
    p: &FullRestrictedSemidirectProduct,
) -> Result<(ExtensionSolution, Transversal)> {
    let sol = p.solution();
    let xi: Vec<Bitranslation> = sol
        .theta
        .representatives()
        .iter()
        .map(|&r| omega_bracket(p, p.pair(r).1))
        .collect();
    let xi = validate_transversal(&sol, xi, true)?;
    check_sb2(&sol, &xi.xi)
        .map_err(|s| Error::TransversalInvalid(format!("(sB2) fails at {s}")))?;
    Ok((sol, xi))
}

/// The full restricted semidirect product rebuilt from a split transversal:
/// `t·a = ξ(t)aξ⁻¹(t)` on `K = Ker θ`, `ε(a) = θ(a)`, and
/// `φ(s) = (sξ⁻¹(θ(s)), θ(s))`.
#[derive(Clone, Debug)]
pub struct SplitReconstruction {
    pub kernel: Subsemigroup,
    pub rsd: FullRestrictedSemidirectProduct,
    pub phi: Vec<usize>,
    pub verdict: EmbeddingVerdict,
}

pub fn theorem310_backward(
    sol: &ExtensionSolution,
    xi: &Transversal,
) -> Result<SplitReconstruction> {
    let q = sol.quotient();
    if let Some((t, u)) = multiplicativity_witness(q, &xi.xi) {
        return Err(Error::NotSplit { t, u });
    }
    let s = &sol.s;
    let kernel = sol.kernel_subsemigroup();
    let xi_inv: Vec<Bitranslation> = xi.xi.iter().map(|w| w.inverse(s)).collect();
    let mut rows = Vec::with_capacity(q.order());
    for t in 0..q.order() {
        let mut row = Vec::with_capacity(kernel.embedding.len());
        for &a in &kernel.embedding {
            let image = xi_inv[t].right(xi.xi[t].left(a));
            let local = kernel.local(image).ok_or_else(|| {
                Error::TransversalInvalid(format!("ξ({t})·{a}·ξ⁻¹({t}) leaves the Kernel"))
            })?;
            row.push(local);
        }
        rows.push(row);
    }
    let action = EndoAction::validate(q.clone(), kernel.semigroup.clone(), &rows)?;
    let eps = EpsilonMap::new(
        &action,
        kernel.embedding.iter().map(|&a| sol.class(a)).collect(),
    )?;
    let rsd = build_rsd(&action, &eps)?;
    let phi = (0..s.order())
        .map(|x| {
            let t = sol.class(x);
            let a = xi_inv[t].right(x);
            kernel
                .local(a)
                .and_then(|la| rsd.index_of(la, t))
                .ok_or_else(|| Error::TransversalInvalid(format!("φ({x}) is not in the product")))
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = solution_embedding(&phi, sol, &rsd.solution(), EmbeddingKind::Isomorphism)?;
    Ok(SplitReconstruction {
        kernel,
        rsd,
        phi,
        verdict,
    })
}

/// `ψ(s) = (h_s, θ(s))` into Houghton's wreath product along `η`, and the
/// intermediate `φ(s) = (f_s, θ(s))` into the λ-wreath product, where
/// `f_s(t) = ξ(t ran θ(s)) s ξ⁻¹(tθ(s))` and `h_s = f_s|_{T ran θ(s)}`.
#[derive(Clone, Debug)]
pub struct WreathEmbedding {
    pub triple: NormalExtensionTriple,
    /// `Ker θ` inside `S`; `K` indices are local to it.
    pub kernel: Subsemigroup,
    pub psi: Vec<HwrElement>,
    pub phi: Vec<LwrElement>,
    pub hwr_eta: HoughtonWreath,
    pub lwr: LambdaWreath,
    /// `ψ` as indices of the enumerated wreath product, when it was enumerable.
    pub psi_index: Option<Vec<usize>>,
}

pub fn thm42_embedding(sol: &ExtensionSolution, xi: &Transversal) -> Result<WreathEmbedding> {
    check_b1(sol, &xi.xi).map_err(|f| Error::TransversalInvalid(format!("(B1) fails: {f:?}")))?;
    check_b2(sol, &xi.xi)
        .map_err(|f| Error::TransversalInvalid(format!("(B2) fails at class {}", f.t)))?;
    let (triple, kernel) = sol.canonical_triple();
    let s = &sol.s;
    let t = sol.quotient();
    let xi_inv: Vec<Bitranslation> = xi.xi.iter().map(|w| w.inverse(s)).collect();
    let f_of = |x: usize| -> Result<Vec<u32>> {
        let tx = sol.class(x);
        let r = t.ran(tx);
        (0..t.order())
            .map(|y| {
                let value = xi_inv[t.mul(y, tx)].right(xi.xi[t.mul(y, r)].left(x));
                kernel.local(value).map(|v| v as u32).ok_or_else(|| {
                    Error::TransversalInvalid(format!("f_{x}({y}) leaves the Kernel"))
                })
            })
            .collect()
    };
    let space = PfunSpace::new(triple.k.clone(), triple.t.clone());
    let mut phi = Vec::with_capacity(s.order());
    let mut psi = Vec::with_capacity(s.order());
    for x in 0..s.order() {
        let f = f_of(x)?;
        let tx = sol.class(x);
        let h = space.from_fn(t.ran(tx), |y| f[y] as usize);
        phi.push((f, tx));
        psi.push((h, tx));
    }
    let lwr = LambdaWreath::operations_only(&triple.k, &triple.t);
    let (hwr_eta, psi_index) = match build_hwr_eta(&triple) {
        Ok(h) => {
            let idx = psi
                .iter()
                .map(|e| h.index_of(e))
                .collect::<Option<Vec<_>>>();
            (h, idx)
        }
        Err(Error::TooLarge { .. }) => (
            HoughtonWreath::operations_only(space, Some(triple.classes())),
            None,
        ),
        Err(e) => return Err(e),
    };
    Ok(WreathEmbedding {
        triple,
        kernel,
        psi,
        phi,
        hwr_eta,
        lwr,
        psi_index,
    })
}

impl WreathEmbedding {
    /// Every statement about the embedding: `h_s ∈ P^η`, `ψ` injective and
    /// multiplicative, the recovery identity, `φ` an injective homomorphism
    /// into the λ-wreath product, and `ψ = Ψ∘φ`.
    pub fn verify(&self, sol: &ExtensionSolution, xi: &Transversal) -> Result<(), String> {
        let s = &sol.s;
        let n = s.order();
        for (x, e) in self.psi.iter().enumerate() {
            if !self.hwr_eta.contains(e) {
                return Err(format!("h_{x} is not in P^η with the right domain"));
            }
        }
        for (x, e) in self.phi.iter().enumerate() {
            if !self.lwr.contains(e) {
                return Err(format!("φ({x}) is not in the λ-wreath product"));
            }
        }
        let mut seen = HashMap::new();
        for (x, e) in self.psi.iter().enumerate() {
            if let Some(y) = seen.insert(e, x) {
                return Err(format!("ψ({y}) = ψ({x})"));
            }
        }
        let mut seen = HashMap::new();
        for (x, e) in self.phi.iter().enumerate() {
            if let Some(y) = seen.insert(e, x) {
                return Err(format!("φ({y}) = φ({x})"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = s.mul(a, b);
                if self.hwr_eta.mul(&self.psi[a], &self.psi[b]) != self.psi[ab] {
                    return Err(format!("ψ({a})ψ({b}) != ψ({a}{b})"));
                }
                if self.lwr.mul(&self.phi[a], &self.phi[b]) != self.phi[ab] {
                    return Err(format!("φ({a})φ({b}) != φ({a}{b})"));
                }
            }
        }
        for x in 0..n {
            if self.lwr.restrict(self.hwr_eta.space(), &self.phi[x]) != self.psi[x] {
                return Err(format!("Ψ(φ({x})) != ψ({x})"));
            }
            if recover(sol, xi, &self.kernel, self.hwr_eta.space(), &self.psi[x]) != x {
                return Err(format!("the recovery identity fails at {x}"));
            }
        }
        if let (Some(idx), Ok(h)) = (&self.psi_index, self.hwr_eta.semigroup()) {
            crate::morphism::is_homomorphism(idx, s, h).map_err(|e| e.to_string())?;
        }
        Ok(())
    }
}

/// `ξ⁻¹(e) h(e) ξ(θ(s))` with `e = ran θ(s)`.
pub fn recover(
    sol: &ExtensionSolution,
    xi: &Transversal,
    kernel: &Subsemigroup,
    space: &PfunSpace,
    (h, tx): &HwrElement,
) -> usize {
    let s = &sol.s;
    let e = sol.quotient().ran(*tx);
    let value = kernel.embedding[space.eval(h, e).expect("ran θ(s) ∈ Hdom h_s")];
    xi.xi[*tx].right(xi.xi[e].inverse(s).left(value))
}

/// `(e, |∏_{x∈Te} K_{ran x}|)` for each idempotent `e`: the expected sizes of
/// the Kernel classes of the wreath product along `η`.
pub fn kernel_class_shape(triple: &NormalExtensionTriple) -> Vec<(usize, usize)> {
    let classes = triple.classes();
    let t = &triple.t;
    t.idempotents()
        .iter()
        .map(|&e| {
            let size = t
                .principal_left_ideal(e)
                .iter()
                .map(|x| classes[t.ran(x)].len())
                .product();
            (e, size)
        })
        .collect()
}

/// Quotient of the restriction of `Ω(θ)` to `S̄`, for reports.
pub fn s_bar_congruence(eh: &ExtensionHull, xi: &Transversal) -> Result<(ElementSet, Congruence)> {
    let mut set = ElementSet::empty(eh.order());
    for w in s_bar(&eh.solution.s, &xi.xi) {
        let i = eh
            .local_of(&w)
            .ok_or_else(|| Error::Invalid("S̄ leaves Ω(S,θ)".into()))?;
        set.insert(i);
    }
    let tilde = eh.sub.semigroup.restrict(&set)?;
    let labels: Vec<usize> = tilde
        .embedding
        .iter()
        .map(|&i| eh.omega_theta.class_of(i))
        .collect();
    let theta = congruence::is_congruence(&tilde.semigroup, &labels)?;
    Ok((set, theta))
}

/// For a split transversal, `S̄ = Π(S) ∪ ξ(S/θ)` and the Kernel of the
/// restricted congruence is `Π(Ker θ) ∪ ξ(E(S/θ))`.
pub fn split_closure_check(sol: &ExtensionSolution, xi: &Transversal) -> Result<(), String> {
    let s = &sol.s;
    let q = sol.quotient();
    let closure = s_bar(s, &xi.xi);
    let mut expected: Vec<Bitranslation> =
        (0..s.order()).map(|x| Bitranslation::inner(s, x)).collect();
    expected.extend(xi.xi.iter().cloned());
    expected.sort();
    expected.dedup();
    if closure != expected {
        return Err(format!(
            "S̄ has {} elements, Π(S) ∪ ξ(S/θ) has {}",
            closure.len(),
            expected.len()
        ));
    }
    let inner_idempotents: std::collections::HashSet<Bitranslation> = q
        .idempotents()
        .iter()
        .map(|&e| Bitranslation::inner(q, e))
        .collect();
    let mut kernel: Vec<Bitranslation> = closure
        .into_iter()
        .filter(|w| {
            downharp(w, &sol.theta)
                .map(|d| inner_idempotents.contains(&d))
                .unwrap_or(false)
        })
        .collect();
    kernel.sort();
    let mut expected: Vec<Bitranslation> = sol
        .kernel()
        .iter()
        .map(|a| Bitranslation::inner(s, a))
        .collect();
    expected.extend(q.idempotents().iter().map(|&e| xi.xi[e].clone()));
    expected.sort();
    expected.dedup();
    if kernel != expected {
        return Err(
            "the Kernel of the restricted congruence differs from Π(Ker θ) ∪ ξ(E(S/θ))".into(),
        );
    }
    Ok(())
}

/// The restriction `θ̄` of `Ω(θ)` to `S̄` is a Billhardt congruence via
/// `ξ̄(θ̄(π_s)) = ξ(θ(s))`: each `ξ̄` value lies in its class inside `S̄` and
/// has the largest domain there (and `ξ̄` is multiplicative when split).
pub fn theta_bar_check(eh: &ExtensionHull, xi: &Transversal) -> Result<(), String> {
    let (set, _) = s_bar_congruence(eh, xi).map_err(|e| e.to_string())?;
    let sub = &eh.sub.semigroup;
    let chosen: Vec<usize> = xi
        .xi
        .iter()
        .map(|w| eh.local_of(w).ok_or_else(|| "ξ leaves Ω(S,θ)".to_string()))
        .collect::<Result<_, _>>()?;
    for w in set.iter() {
        let c = chosen[eh.down[w]];
        if !set.contains(c) || eh.omega_theta.class_of(w) != eh.omega_theta.class_of(c) {
            return Err(format!("ξ̄ misses the class of element {w} of S̄"));
        }
        if !sub.natural_leq(sub.dom(w), sub.dom(c)) {
            return Err(format!(
                "dom of element {w} of S̄ is not below dom ξ̄ of its class"
            ));
        }
    }
    if xi.split {
        let q = eh.solution.quotient();
        if let Some((t, u)) = multiplicativity_witness(q, &xi.xi) {
            return Err(format!("ξ̄ is not multiplicative at ({t}, {u})"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::enumerate_congruences;
    use crate::fixtures;
    use crate::trhull::hull_of_extension;

    fn chain_rsd() -> FullRestrictedSemidirectProduct {
        let c = fixtures::chain(2);
        let action = EndoAction::from_fn(c.clone(), c.clone(), |t, a| c.mul(t, a)).unwrap();
        let eps = EpsilonMap::new(&action, vec![0, 1]).unwrap();
        build_rsd(&action, &eps).unwrap()
    }

    #[test]
    fn identity_congruence_is_split_billhardt() {
        let s = fixtures::b2();
        let sol = ExtensionSolution::new(s.clone(), Congruence::identity(s.order())).unwrap();
        let xi: Vec<Bitranslation> = (0..s.order())
            .map(|x| Bitranslation::inner(&s, x))
            .collect();
        let xi = validate_transversal(&sol, xi, true).unwrap();
        assert_eq!(
            classify_classical(&sol, &xi.xi),
            Classification::SplitBillhardt
        );
        let eh = hull_of_extension(&sol).unwrap();
        assert!(find_transversal(&eh, true).is_some());
    }

    #[test]
    fn constant_idempotent_fails_b1() {
        let s = fixtures::z2_times_chain2();
        let theta = Congruence::identity(s.order());
        let sol = ExtensionSolution::new(s.clone(), theta).unwrap();
        let e = s.idempotents()[0];
        let xi = vec![Bitranslation::inner(&s, e); sol.quotient().order()];
        assert!(check_b1(&sol, &xi).is_err());
    }

    #[test]
    fn forward_and_backward_on_chain_product() {
        let p = chain_rsd();
        let (sol, xi) = theorem310_forward(&p).unwrap();
        let back = theorem310_backward(&sol, &xi).unwrap();
        assert!(back.verdict.holds());
        split_closure_check(&sol, &xi).unwrap();
        let emb = thm42_embedding(&sol, &xi).unwrap();
        emb.verify(&sol, &xi).unwrap();
    }

    #[test]
    fn search_finds_a_transversal_on_every_small_extension_admitting_one() {
        for f in fixtures::catalog_up_to(5) {
            for theta in enumerate_congruences(&f.semigroup).unwrap() {
                let sol = ExtensionSolution::new(f.semigroup.clone(), theta).unwrap();
                let eh = hull_of_extension(&sol).unwrap();
                if let Some(xi) = find_transversal(&eh, false) {
                    assert!(validate_transversal(&sol, xi.xi.clone(), false).is_ok());
                    let emb = thm42_embedding(&sol, &xi).unwrap();
                    emb.verify(&sol, &xi)
                        .unwrap_or_else(|e| panic!("{}: {e}", f.name));
                    theta_bar_check(&eh, &xi).unwrap_or_else(|e| panic!("{}: {e}", f.name));
                }
                if let Some(xi) = find_transversal(&eh, true) {
                    assert!(check_sb2(&sol, &xi.xi).is_ok());
                    split_closure_check(&sol, &xi).unwrap_or_else(|e| panic!("{}: {e}", f.name));
                    assert!(theorem310_backward(&sol, &xi).unwrap().verdict.holds());
                }
            }
        }
    }

    #[test]
    fn literal_recovery_form_has_a_counterexample() {
        // With ξ⁻¹(θ(s)) on the right instead of ξ(θ(s)), the identity fails on Z₃ with θ = Δ.
        let s = fixtures::cyclic(3);
        let sol = ExtensionSolution::new(s.clone(), Congruence::identity(3)).unwrap();
        let xi: Vec<Bitranslation> = (0..3).map(|x| Bitranslation::inner(&s, x)).collect();
        let x = 1;
        let e = sol.quotient().ran(sol.class(x));
        let h = xi[e].right(xi[x].inverse(&s).right(x));
        let literal = xi[x].inverse(&s).right(xi[e].inverse(&s).left(h));
        assert_ne!(literal, x);
    }
}
