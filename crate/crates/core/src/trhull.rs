//! Bitranslations, the translational hull `Ω(S)`, and the hull `Ω(S,θ)` of
//! a normal extension.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::morphism::{is_homomorphism, solution_embedding, EmbeddingKind, ExtensionSolution};
use crate::products::{intern, tabulate, FullRestrictedSemidirectProduct, Index};
use crate::semigroup::{ElementSet, InverseSemigroup, Subsemigroup};

/// Default bound on `|S|` for hull enumeration.
pub const HULL_BOUND: usize = 8;

/// Bound on `|S|` for the naive linked-pair scan.
pub const NAIVE_HULL_BOUND: usize = 5;

/// A bitranslation `ω`, stored as `ωs = left[s]` and `sω = right[s]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bitranslation {
    left: Vec<u32>,
    right: Vec<u32>,
}

/// First failure of a pair of maps to be a bitranslation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BitranslationDefect {
    NotLeftTranslation { s: usize, t: usize },
    NotRightTranslation { s: usize, t: usize },
    NotLinked { s: usize, t: usize },
}

impl Bitranslation {
    pub fn new(left: &[usize], right: &[usize]) -> Self {
        Self {
            left: left.iter().map(|&x| x as u32).collect(),
            right: right.iter().map(|&x| x as u32).collect(),
        }
    }

    /// `π_x`
    pub fn inner(s: &InverseSemigroup, x: usize) -> Self {
        let n = s.order();
        Self {
            left: (0..n).map(|y| s.mul(x, y) as u32).collect(),
            right: (0..n).map(|y| s.mul(y, x) as u32).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let id: Vec<u32> = (0..n as u32).collect();
        Self {
            left: id.clone(),
            right: id,
        }
    }

    /// `ωs`
    #[inline]
    pub fn left(&self, s: usize) -> usize {
        self.left[s] as usize
    }

    /// `sω`
    #[inline]
    pub fn right(&self, s: usize) -> usize {
        self.right[s] as usize
    }

    pub fn left_map(&self) -> Vec<usize> {
        self.left.iter().map(|&x| x as usize).collect()
    }

    pub fn right_map(&self) -> Vec<usize> {
        self.right.iter().map(|&x| x as usize).collect()
    }

    /// `ωω'`: `(ωω')s = ω(ω's)` and `s(ωω') = (sω)ω'`.
    pub fn compose(&self, other: &Bitranslation) -> Bitranslation {
        Bitranslation {
            left: other.left.iter().map(|&x| self.left[x as usize]).collect(),
            right: self
                .right
                .iter()
                .map(|&x| other.right[x as usize])
                .collect(),
        }
    }

    /// `ω⁻¹s = (s⁻¹ω)⁻¹` and `sω⁻¹ = (ωs⁻¹)⁻¹`.
    pub fn inverse(&self, s: &InverseSemigroup) -> Bitranslation {
        let n = s.order();
        Bitranslation {
            left: (0..n).map(|x| s.inv(self.right(s.inv(x))) as u32).collect(),
            right: (0..n).map(|x| s.inv(self.left(s.inv(x))) as u32).collect(),
        }
    }

    pub fn dom(&self, s: &InverseSemigroup) -> Bitranslation {
        self.inverse(s).compose(self)
    }

    pub fn ran(&self, s: &InverseSemigroup) -> Bitranslation {
        self.compose(&self.inverse(s))
    }

    pub fn is_idempotent(&self) -> bool {
        self.compose(self) == *self
    }

    /// `self ≤ other` in the natural order of `Ω(S)`.
    pub fn natural_leq(&self, other: &Bitranslation, s: &InverseSemigroup) -> bool {
        self.ran(s).compose(other) == *self
    }

    pub fn check(&self, s: &InverseSemigroup) -> Result<(), BitranslationDefect> {
        let n = s.order();
        if self.left.len() != n || self.right.len() != n {
            return Err(BitranslationDefect::NotLinked { s: 0, t: 0 });
        }
        for a in 0..n {
            for b in 0..n {
                if self.left(s.mul(a, b)) != s.mul(self.left(a), b) {
                    return Err(BitranslationDefect::NotLeftTranslation { s: a, t: b });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.right(s.mul(a, b)) != s.mul(a, self.right(b)) {
                    return Err(BitranslationDefect::NotRightTranslation { s: a, t: b });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if s.mul(a, self.left(b)) != s.mul(self.right(a), b) {
                    return Err(BitranslationDefect::NotLinked { s: a, t: b });
                }
            }
        }
        Ok(())
    }
}

fn is_left_translation(s: &InverseSemigroup, f: &[usize]) -> bool {
    let n = s.order();
    (0..n).all(|a| (0..n).all(|b| f[s.mul(a, b)] == s.mul(f[a], b)))
}

fn is_right_translation(s: &InverseSemigroup, f: &[usize]) -> bool {
    let n = s.order();
    (0..n).all(|a| (0..n).all(|b| f[s.mul(a, b)] == s.mul(a, f[b])))
}

/// Translations determined by their values on `E(S)`. `left` selects the
/// side: a left translation satisfies `λ(e)f = λ(ef)` and `λ(s) = λ(ran s)s`;
/// a right translation satisfies `eρ(f) = ρ(ef)` and `ρ(s) = sρ(dom s)`.
fn translations(s: &InverseSemigroup, left: bool) -> Vec<Vec<usize>> {
    let idem = s.idempotents();
    let n = s.order();
    let mut position = vec![usize::MAX; n];
    for (i, &e) in idem.iter().enumerate() {
        position[e] = i;
    }
    // On `e`, a left translation takes values `x` with `xe = x`.
    let candidates: Vec<Vec<usize>> = idem
        .iter()
        .map(|&e| {
            (0..n)
                .filter(|&x| {
                    if left {
                        s.mul(x, e) == x
                    } else {
                        s.mul(e, x) == x
                    }
                })
                .collect()
        })
        .collect();
    let mut values = vec![usize::MAX; idem.len()];
    let mut out = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        s: &InverseSemigroup,
        left: bool,
        idem: &[usize],
        position: &[usize],
        candidates: &[Vec<usize>],
        depth: usize,
        values: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == idem.len() {
            let n = s.order();
            let f: Vec<usize> = (0..n)
                .map(|x| {
                    if left {
                        s.mul(values[position[s.ran(x)]], x)
                    } else {
                        s.mul(x, values[position[s.dom(x)]])
                    }
                })
                .collect();
            let ok = if left {
                is_left_translation(s, &f)
            } else {
                is_right_translation(s, &f)
            };
            if ok {
                out.push(f);
            }
            return;
        }
        let e = idem[depth];
        'cand: for &x in &candidates[depth] {
            values[depth] = x;
            for (j, &f) in idem.iter().enumerate().take(depth + 1) {
                let ef = s.mul(e, f);
                let k = position[ef];
                if k > depth {
                    continue;
                }
                // λ(e)f = λ(ef) and λ(f)e = λ(fe); dually for ρ.
                let (lhs1, lhs2) = if left {
                    (s.mul(values[depth], f), s.mul(values[j], e))
                } else {
                    (s.mul(f, values[depth]), s.mul(e, values[j]))
                };
                if lhs1 != values[k] || lhs2 != values[k] {
                    continue 'cand;
                }
            }
            rec(s, left, idem, position, candidates, depth + 1, values, out);
        }
        values[depth] = usize::MAX;
    }
    rec(
        s,
        left,
        idem,
        &position,
        &candidates,
        0,
        &mut values,
        &mut out,
    );
    out
}

pub fn left_translations(s: &InverseSemigroup) -> Vec<Vec<usize>> {
    translations(s, true)
}

pub fn right_translations(s: &InverseSemigroup) -> Vec<Vec<usize>> {
    translations(s, false)
}

/// All bitranslations, in canonical order.
pub fn enumerate_bitranslations(s: &InverseSemigroup, bound: usize) -> Result<Vec<Bitranslation>> {
    let n = s.order();
    if n > bound {
        return Err(Error::TooLarge {
            what: "translational hull",
            size: n,
            bound,
        });
    }
    // Linked pairs agree on the matrix s·λ(t) = (sρ)·t.
    let mut by_signature: HashMap<Vec<u32>, Vec<Vec<usize>>> = HashMap::new();
    for rho in right_translations(s) {
        let sig = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| s.mul(rho[a], b) as u32)
            .collect();
        by_signature.entry(sig).or_default().push(rho);
    }
    let mut out = Vec::new();
    for lambda in left_translations(s) {
        let sig: Vec<u32> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| s.mul(a, lambda[b]) as u32)
            .collect();
        if let Some(rhos) = by_signature.get(&sig) {
            out.extend(rhos.iter().map(|rho| Bitranslation::new(&lambda, rho)));
        }
    }
    out.sort();
    Ok(out)
}

/// Every linked pair of translations, found by scanning all `n^n` maps.
pub fn naive_bitranslations(s: &InverseSemigroup) -> Result<Vec<Bitranslation>> {
    let n = s.order();
    if n > NAIVE_HULL_BOUND {
        return Err(Error::TooLarge {
            what: "naive hull scan",
            size: n,
            bound: NAIVE_HULL_BOUND,
        });
    }
    let maps: Vec<Vec<usize>> = (0..n.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let d = code % n;
                    code /= n;
                    d
                })
                .collect()
        })
        .collect();
    let lefts: Vec<&Vec<usize>> = maps.iter().filter(|f| is_left_translation(s, f)).collect();
    let rights: Vec<&Vec<usize>> = maps.iter().filter(|f| is_right_translation(s, f)).collect();
    let mut out = Vec::new();
    for l in &lefts {
        for r in &rights {
            let linked = (0..n).all(|a| (0..n).all(|b| s.mul(a, l[b]) == s.mul(r[a], b)));
            if linked {
                out.push(Bitranslation::new(l, r));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `Ω(S)` with its table and the canonical map `π`.
#[derive(Clone, Debug)]
pub struct TranslationalHull {
    s: InverseSemigroup,
    elements: Vec<Bitranslation>,
    index: Index<Bitranslation>,
    pub semigroup: InverseSemigroup,
    pi: Vec<usize>,
}

pub fn enumerate_hull(s: &InverseSemigroup) -> Result<TranslationalHull> {
    enumerate_hull_bounded(s, HULL_BOUND)
}

pub fn enumerate_hull_bounded(s: &InverseSemigroup, bound: usize) -> Result<TranslationalHull> {
    TranslationalHull::from_elements(s, enumerate_bitranslations(s, bound)?)
}

impl TranslationalHull {
    pub fn from_elements(s: &InverseSemigroup, elements: Vec<Bitranslation>) -> Result<Self> {
        let index = intern(&elements);
        let semigroup = tabulate(
            "translational hull",
            &elements,
            &index,
            |a, b| a.compose(b),
            |w| {
                let l: Vec<String> = w.left.iter().map(|&x| s.name(x as usize)).collect();
                format!("⟨{}⟩", l.join(","))
            },
        )?;
        let pi = (0..s.order())
            .map(|x| index.get(&Bitranslation::inner(s, x)).copied())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| {
                Error::Invalid("an inner bitranslation is missing from the hull".into())
            })?;
        Ok(Self {
            s: s.clone(),
            elements,
            index,
            semigroup,
            pi,
        })
    }

    pub fn base(&self) -> &InverseSemigroup {
        &self.s
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Bitranslation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Bitranslation {
        &self.elements[i]
    }

    pub fn index_of(&self, w: &Bitranslation) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// `π_s` as a hull index.
    pub fn pi(&self, s: usize) -> usize {
        self.pi[s]
    }

    pub fn pi_map(&self) -> &[usize] {
        &self.pi
    }

    /// `Π(S)`
    pub fn inner_set(&self) -> ElementSet {
        ElementSet::from_iter(self.order(), self.pi.iter().copied())
    }

    /// Both canonical projections are injective.
    pub fn projections_injective(&self) -> bool {
        let mut lefts: Vec<&[u32]> = self.elements.iter().map(|w| w.left.as_slice()).collect();
        let mut rights: Vec<&[u32]> = self.elements.iter().map(|w| w.right.as_slice()).collect();
        lefts.sort();
        lefts.dedup();
        rights.sort();
        rights.dedup();
        lefts.len() == self.order() && rights.len() == self.order()
    }

    /// `ωπ_s = π_{ωs}` and `π_sω = π_{sω}` for all `ω`, `s`.
    pub fn inner_ideal_identities(&self) -> Result<(), (usize, usize)> {
        for (i, w) in self.elements.iter().enumerate() {
            for x in 0..self.s.order() {
                let left_ok = self.semigroup.mul(i, self.pi[x]) == self.pi[w.left(x)];
                let right_ok = self.semigroup.mul(self.pi[x], i) == self.pi[w.right(x)];
                if !left_ok || !right_ok {
                    return Err((i, x));
                }
            }
        }
        Ok(())
    }
}

/// Failure of one of the hull identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HullIdentityFailure {
    /// `ωe = eω ∈ E(S)` fails for an idempotent `ω`.
    IdempotentAction { omega: usize, e: usize },
    /// `(ωa)⁻¹ = a⁻¹ω⁻¹` fails.
    InverseAction { omega: usize, a: usize },
}

pub fn hull_identities(hull: &TranslationalHull) -> Result<(), HullIdentityFailure> {
    let s = hull.base();
    for (i, w) in hull.elements().iter().enumerate() {
        if !hull.semigroup.is_idempotent(i) {
            continue;
        }
        for &e in s.idempotents() {
            if w.left(e) != w.right(e) || !s.is_idempotent(w.left(e)) {
                return Err(HullIdentityFailure::IdempotentAction { omega: i, e });
            }
        }
    }
    for (i, w) in hull.elements().iter().enumerate() {
        let wi = hull.element(hull.semigroup.inv(i));
        for a in 0..s.order() {
            if s.inv(w.left(a)) != wi.right(s.inv(a)) {
                return Err(HullIdentityFailure::InverseAction { omega: i, a });
            }
        }
    }
    Ok(())
}

/// First pair `s θ s'` on which `ω` fails to respect `θ`.
pub fn respect_witness(w: &Bitranslation, theta: &Congruence) -> Option<(usize, usize)> {
    for class in theta.classes() {
        let first = class[0];
        for &x in &class[1..] {
            if !theta.related(w.left(first), w.left(x))
                || !theta.related(w.right(first), w.right(x))
            {
                return Some((first, x));
            }
        }
    }
    None
}

pub fn respects(w: &Bitranslation, theta: &Congruence) -> bool {
    respect_witness(w, theta).is_none()
}

/// `ω↓` on `S/θ`, with quotient elements numbered by class id.
pub fn downharp(w: &Bitranslation, theta: &Congruence) -> Result<Bitranslation> {
    if let Some((s, s2)) = respect_witness(w, theta) {
        return Err(Error::DoesNotRespect { s, s2 });
    }
    let reps = theta.representatives();
    let left: Vec<usize> = reps.iter().map(|&r| theta.class_of(w.left(r))).collect();
    let right: Vec<usize> = reps.iter().map(|&r| theta.class_of(w.right(r))).collect();
    Ok(Bitranslation::new(&left, &right))
}

/// `Ω(S,θ)` and `Ω(θ)` inside an enumerated `Ω(S)`.
#[derive(Clone, Debug)]
pub struct ExtensionHull {
    pub solution: ExtensionSolution,
    pub hull: TranslationalHull,
    /// `Ω_θ(S)`, as hull indices.
    pub respecting: ElementSet,
    /// `Ω(S,θ)` re-indexed, with the inclusion into the hull.
    pub sub: Subsemigroup,
    /// `ω↓ = π_q`: the quotient element `q` for every local index.
    pub down: Vec<usize>,
    /// `Ω(θ)` on local indices, computed from its defining condition.
    pub omega_theta: Congruence,
    /// `s ↦ π_s` as local indices.
    pub pi_local: Vec<usize>,
}

pub fn hull_of_extension(solution: &ExtensionSolution) -> Result<ExtensionHull> {
    hull_of_extension_bounded(solution, HULL_BOUND)
}

pub fn hull_of_extension_bounded(
    solution: &ExtensionSolution,
    bound: usize,
) -> Result<ExtensionHull> {
    let hull = enumerate_hull_bounded(&solution.s, bound)?;
    extension_hull_from(solution, hull)
}

pub fn extension_hull_from(
    solution: &ExtensionSolution,
    hull: TranslationalHull,
) -> Result<ExtensionHull> {
    let theta = &solution.theta;
    let quotient = solution.quotient();
    let inner_q: HashMap<Bitranslation, usize> = (0..quotient.order())
        .map(|q| (Bitranslation::inner(quotient, q), q))
        .collect();
    let mut respecting = ElementSet::empty(hull.order());
    let mut members = ElementSet::empty(hull.order());
    let mut down_of = vec![usize::MAX; hull.order()];
    for (i, w) in hull.elements().iter().enumerate() {
        if let Ok(d) = downharp(w, theta) {
            respecting.insert(i);
            if let Some(&q) = inner_q.get(&d) {
                members.insert(i);
                down_of[i] = q;
            }
        }
    }
    let sub = hull.semigroup.restrict(&members)?;
    let down: Vec<usize> = sub.embedding.iter().map(|&i| down_of[i]).collect();
    let m = sub.embedding.len();
    let n = solution.s.order();
    // ω Ω(θ) ω' iff ωs θ ω's and sω θ sω' for every s.
    let mut labels = vec![usize::MAX; m];
    let mut next = 0;
    for a in 0..m {
        if labels[a] != usize::MAX {
            continue;
        }
        labels[a] = next;
        let wa = hull.element(sub.embedding[a]);
        for b in a + 1..m {
            if labels[b] != usize::MAX {
                continue;
            }
            let wb = hull.element(sub.embedding[b]);
            if (0..n).all(|x| {
                theta.related(wa.left(x), wb.left(x)) && theta.related(wa.right(x), wb.right(x))
            }) {
                labels[b] = next;
            }
        }
        next += 1;
    }
    let omega_theta = crate::congruence::is_congruence(&sub.semigroup, &labels)?;
    let pi_local = hull
        .pi_map()
        .iter()
        .map(|&i| sub.local(i).expect("Π(S) ⊆ Ω(S,θ)"))
        .collect();
    Ok(ExtensionHull {
        solution: solution.clone(),
        hull,
        respecting,
        sub,
        down,
        omega_theta,
        pi_local,
    })
}

impl ExtensionHull {
    pub fn order(&self) -> usize {
        self.sub.embedding.len()
    }

    /// The bitranslation at local index `i`.
    pub fn element(&self, i: usize) -> &Bitranslation {
        self.hull.element(self.sub.embedding[i])
    }

    pub fn local_of(&self, w: &Bitranslation) -> Option<usize> {
        self.hull.index_of(w).and_then(|i| self.sub.local(i))
    }

    /// `(Ω(S,θ), Ω(θ))` as a normal extension.
    pub fn as_solution(&self) -> ExtensionSolution {
        ExtensionSolution::new(self.sub.semigroup.clone(), self.omega_theta.clone())
            .expect("Ω(θ) is a congruence")
    }
}

/// Both parts of the structure statement for `Ω(S,θ)`: `()↓` is a
/// surjective homomorphism onto `Π(S/θ)` with kernel `Ω(θ)`, and `π` embeds
/// `(S,θ)` into `(Ω(S,θ),Ω(θ))` with `ι` bijective.
pub fn restriction_to_quotient_check(eh: &ExtensionHull) -> Result<(), String> {
    let sol = &eh.solution;
    let q = sol.quotient();
    let down = is_homomorphism(&eh.down, &eh.sub.semigroup, q)
        .map_err(|e| format!("()↓ is not a homomorphism: {e}"))?;
    if !down.surjective() {
        return Err("()↓ is not onto Π(S/θ)".into());
    }
    if Congruence::kernel_of(&eh.down) != eh.omega_theta {
        return Err("the kernel of ()↓ differs from Ω(θ)".into());
    }
    if !eh.hull.semigroup.is_inverse_subsemigroup(&eh.respecting) {
        return Err("Ω_θ(S) is not an inverse subsemigroup".into());
    }
    let target = eh.as_solution();
    let verdict = solution_embedding(&eh.pi_local, sol, &target, EmbeddingKind::Embedding)
        .map_err(|e| e.to_string())?;
    if !verdict.holds() {
        return Err(format!(
            "π is not an embedding of normal extensions: {verdict:?}"
        ));
    }
    // ι: θ(s) ↦ Ω(θ)(π_s)
    let mut iota = vec![usize::MAX; q.order()];
    for s in 0..sol.s.order() {
        let image = eh.omega_theta.class_of(eh.pi_local[s]);
        let c = sol.class(s);
        if iota[c] != usize::MAX && iota[c] != image {
            return Err(format!("ι is not well defined at {s}"));
        }
        iota[c] = image;
    }
    let mut sorted = iota.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != q.order() || q.order() != eh.omega_theta.class_count() {
        return Err("ι is not bijective".into());
    }
    Ok(())
}

/// `ω_[t]` on a full restricted semidirect product:
/// `ω_[t](x,u) = (t·x, tu)` and `(x,u)ω_[t] = (ran(ut)·x, ut)`.
pub fn omega_bracket(p: &FullRestrictedSemidirectProduct, t: usize) -> Bitranslation {
    let (action, ts) = (p.action(), p.t());
    let left: Vec<usize> = p
        .pairs()
        .iter()
        .map(|&(x, u)| {
            p.index_of(action.act(t, x), ts.mul(t, u))
                .expect("ω_[t] stays in the product")
        })
        .collect();
    let right: Vec<usize> = p
        .pairs()
        .iter()
        .map(|&(x, u)| {
            let ut = ts.mul(u, t);
            p.index_of(action.act(ts.ran(ut), x), ut)
                .expect("ω_[t] stays in the product")
        })
        .collect();
    Bitranslation::new(&left, &right)
}

/// Each `ω_[t]` is a bitranslation respecting `Θ = ker π₂` with
/// `ω_[t]↓ = ω^T_t`.
pub fn bracket_projection_check(p: &FullRestrictedSemidirectProduct) -> Result<(), String> {
    let s = &p.semigroup;
    let t = p.t();
    let theta = p.projection_congruence();
    // quotient class ↔ T via π₂
    let class_to_t: Vec<usize> = theta
        .representatives()
        .iter()
        .map(|&r| p.pair(r).1)
        .collect();
    for x in 0..t.order() {
        let w = omega_bracket(p, x);
        w.check(s)
            .map_err(|d| format!("ω_[{x}] is not a bitranslation: {d:?}"))?;
        let d = downharp(&w, &theta).map_err(|e| format!("ω_[{x}] does not respect Θ: {e}"))?;
        for c in 0..class_to_t.len() {
            let want_l = t.mul(x, class_to_t[c]);
            let want_r = t.mul(class_to_t[c], x);
            if class_to_t[d.left(c)] != want_l || class_to_t[d.right(c)] != want_r {
                return Err(format!(
                    "ω_[{x}]↓ differs from the inner bitranslation of {x}"
                ));
            }
        }
    }
    Ok(())
}

/// `t ↦ ω_[t]` is an injective homomorphism and `ω_[t] Ω(Θ) π_{(a,t)}`.
pub fn bracket_homomorphism_check(p: &FullRestrictedSemidirectProduct) -> Result<(), String> {
    let s = &p.semigroup;
    let t = p.t();
    let theta = p.projection_congruence();
    let brackets: Vec<Bitranslation> = (0..t.order()).map(|x| omega_bracket(p, x)).collect();
    for x in 0..t.order() {
        for y in 0..t.order() {
            if brackets[x].compose(&brackets[y]) != brackets[t.mul(x, y)] {
                return Err(format!("ω_[{x}]ω_[{y}] != ω_[{x}{y}]"));
            }
        }
    }
    let mut sorted = brackets.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != t.order() {
        return Err("t ↦ ω_[t] is not injective".into());
    }
    for i in 0..s.order() {
        let (_, x) = p.pair(i);
        let w = &brackets[x];
        let inner = Bitranslation::inner(s, i);
        let related = (0..s.order()).all(|y| {
            theta.related(w.left(y), inner.left(y)) && theta.related(w.right(y), inner.right(y))
        });
        if !related {
            return Err(format!("ω_[{x}] and π of element {i} are not Ω(Θ)-related"));
        }
    }
    Ok(())
}

/// `ω_[t]⁻¹ω_[t] = ω_[dom t] ≥ π_{dom(a,t)}` and `t·(c,e) =
/// ω_[t](c,e)ω_[t]⁻¹` on the Kernel.
pub fn bracket_identities_check(p: &FullRestrictedSemidirectProduct) -> Result<(), String> {
    let s = &p.semigroup;
    let t = p.t();
    let brackets: Vec<Bitranslation> = (0..t.order()).map(|x| omega_bracket(p, x)).collect();
    for i in 0..s.order() {
        let (_, x) = p.pair(i);
        let dom_bracket = brackets[x].dom(s);
        if dom_bracket != brackets[t.dom(x)] {
            return Err(format!("ω_[{x}]⁻¹ω_[{x}] != ω_[dom {x}]"));
        }
        if !Bitranslation::inner(s, s.dom(i)).natural_leq(&dom_bracket, s) {
            return Err(format!("π_dom of element {i} is not below ω_[dom {x}]"));
        }
    }
    let action = p.action();
    for x in 0..t.order() {
        let w = &brackets[x];
        let wi = w.inverse(s);
        for (_, class) in p.kernel_classes() {
            for i in class.iter() {
                let (c, e) = p.pair(i);
                let acted = p
                    .index_of(action.act(x, c), t.ran(t.mul(x, e)))
                    .expect("induced action");
                if wi.right(w.left(i)) != acted {
                    return Err(format!(
                        "conjugation by ω_[{x}] differs from the action on element {i}"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// All statements about `ω_[t]`.
pub fn omega_bracket_checks(p: &FullRestrictedSemidirectProduct) -> Result<(), String> {
    bracket_projection_check(p)?;
    bracket_homomorphism_check(p)?;
    bracket_identities_check(p)
}

/// JSON shape of a bitranslation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitranslationJson {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl From<&Bitranslation> for BitranslationJson {
    fn from(w: &Bitranslation) -> Self {
        Self {
            left: w.left_map(),
            right: w.right_map(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{EndoAction, EpsilonMap};
    use crate::congruence::enumerate_congruences;
    use crate::fixtures;
    use crate::products::build_rsd;

    #[test]
    fn monoid_hull_is_inner() {
        for s in [
            fixtures::symmetric_inverse_monoid(2),
            fixtures::chain(3),
            fixtures::z2_with_zero(),
        ] {
            let h = enumerate_hull(&s).unwrap();
            assert_eq!(h.order(), s.order());
            assert_eq!(h.inner_set().len(), s.order());
        }
    }

    #[test]
    fn b2_hull_matches_naive_scan() {
        let s = fixtures::b2();
        let fast = enumerate_bitranslations(&s, HULL_BOUND).unwrap();
        let naive = naive_bitranslations(&s).unwrap();
        assert_eq!(fast, naive);
        // Ω(B₂) is B₂ with an identity and the two idempotent diagonal maps.
        assert!(fast.len() > s.order());
        let h = TranslationalHull::from_elements(&s, fast).unwrap();
        assert!(h.semigroup.identity().is_some());
        assert!(h.projections_injective());
        assert!(h.inner_ideal_identities().is_ok());
        assert!(hull_identities(&h).is_ok());
    }

    #[test]
    fn inverse_formula_matches_hull_inverse() {
        let s = fixtures::b2();
        let h = enumerate_hull(&s).unwrap();
        for (i, w) in h.elements().iter().enumerate() {
            assert_eq!(&w.inverse(&s), h.element(h.semigroup.inv(i)));
        }
    }

    #[test]
    fn downharp_extremes() {
        let s = fixtures::b2();
        let h = enumerate_hull(&s).unwrap();
        let delta = Congruence::identity(s.order());
        let nabla = Congruence::universal(s.order());
        for w in h.elements() {
            assert_eq!(downharp(w, &delta).unwrap(), *w);
            assert_eq!(downharp(w, &nabla).unwrap(), Bitranslation::identity(1));
        }
    }

    #[test]
    fn restriction_to_quotient_on_small_fixtures() {
        for f in fixtures::catalog_up_to(5) {
            for theta in enumerate_congruences(&f.semigroup).unwrap() {
                let sol = ExtensionSolution::new(f.semigroup.clone(), theta).unwrap();
                let eh = hull_of_extension(&sol).unwrap();
                restriction_to_quotient_check(&eh).unwrap_or_else(|e| panic!("{}: {e}", f.name));
            }
        }
    }

    #[test]
    fn brackets_on_chain_product() {
        let c = fixtures::chain(2);
        let action = EndoAction::from_fn(c.clone(), c.clone(), |t, a| c.mul(t, a)).unwrap();
        let eps = EpsilonMap::new(&action, vec![0, 1]).unwrap();
        let p = build_rsd(&action, &eps).unwrap();
        omega_bracket_checks(&p).unwrap();
    }
}
