//! Actions of an inverse semigroup `T` on an inverse semigroup `K` by
//! endomorphisms, the (AFR) condition and its equivalent forms, strong
//! semilattice decompositions, and exhaustive enumeration of actions.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphism::is_homomorphism;
use crate::semigroup::{ElementSet, InverseSemigroup};

/// `T` acting on `K`: `act(t, a) = t·a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoAction {
    t: InverseSemigroup,
    k: InverseSemigroup,
    act: Vec<u32>,
}

/// JSON shape of an action, indexed `[t][a]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionJson {
    pub act: Vec<Vec<usize>>,
}

/// JSON shape of an epsilon map `K → E(T)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonJson {
    pub epsilon: Vec<usize>,
}

impl EndoAction {
    /// Checks that every `a ↦ t·a` is an endomorphism and that
    /// `t·(u·a) = (tu)·a`.
    pub fn validate(t: InverseSemigroup, k: InverseSemigroup, act: &[Vec<usize>]) -> Result<Self> {
        if act.len() != t.order() || act.iter().any(|row| row.len() != k.order()) {
            return Err(Error::Malformed(format!(
                "action table must be {}x{}",
                t.order(),
                k.order()
            )));
        }
        if act.iter().flatten().any(|&x| x >= k.order()) {
            return Err(Error::Malformed("action value out of range".into()));
        }
        let flat = act.iter().flatten().map(|&x| x as u32).collect();
        let action = Self { t, k, act: flat };
        action.check()?;
        Ok(action)
    }

    pub fn from_fn(
        t: InverseSemigroup,
        k: InverseSemigroup,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let rows: Vec<Vec<usize>> = (0..t.order())
            .map(|x| (0..k.order()).map(|a| f(x, a)).collect())
            .collect();
        Self::validate(t, k, &rows)
    }

    /// Builds without checking; used for actions the library derives itself
    /// and then checks explicitly.
    pub(crate) fn from_rows_unchecked(
        t: InverseSemigroup,
        k: InverseSemigroup,
        rows: &[Vec<usize>],
    ) -> Self {
        let act = rows.iter().flatten().map(|&x| x as u32).collect();
        Self { t, k, act }
    }

    fn check(&self) -> Result<()> {
        let (t, k) = (&self.t, &self.k);
        for x in 0..t.order() {
            for a in 0..k.order() {
                for b in 0..k.order() {
                    if self.act(x, k.mul(a, b)) != k.mul(self.act(x, a), self.act(x, b)) {
                        return Err(Error::NotEndomorphism { t: x, a, b });
                    }
                }
            }
        }
        for x in 0..t.order() {
            for u in 0..t.order() {
                for a in 0..k.order() {
                    if self.act(x, self.act(u, a)) != self.act(t.mul(x, u), a) {
                        return Err(Error::NotActionHom { t: x, u, a });
                    }
                }
            }
        }
        Ok(())
    }

    /// Re-runs both action laws.
    pub fn is_valid(&self) -> bool {
        self.check().is_ok()
    }

    #[inline]
    pub fn act(&self, t: usize, a: usize) -> usize {
        self.act[t * self.k.order() + a] as usize
    }

    pub fn acting(&self) -> &InverseSemigroup {
        &self.t
    }

    pub fn acted_on(&self) -> &InverseSemigroup {
        &self.k
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.t.order())
            .map(|x| (0..self.k.order()).map(|a| self.act(x, a)).collect())
            .collect()
    }

    pub fn to_json(&self) -> ActionJson {
        ActionJson { act: self.rows() }
    }

    /// `T` acting on itself... on `E(T)` by `t·e = tet⁻¹`, viewed on the
    /// semilattice `e` given as a subsemigroup of `T`.
    ///
    /// Returns the action of `T` on `E(T)` (re-indexed by position in
    /// `t.idempotents()`) together with the identity epsilon.
    pub fn conjugation_on_idempotents(t: &InverseSemigroup) -> (EndoAction, EpsilonMap) {
        let sub = t.restrict(&t.idempotent_set()).expect("E(T)");
        let rows: Vec<Vec<usize>> = (0..t.order())
            .map(|x| {
                sub.embedding
                    .iter()
                    .map(|&e| sub.local(t.product(&[x, e, t.inv(x)])).unwrap())
                    .collect()
            })
            .collect();
        let action = EndoAction::validate(t.clone(), sub.semigroup.clone(), &rows)
            .expect("conjugation action");
        let eps = EpsilonMap::new(&action, sub.embedding.clone()).expect("inclusion of E(T)");
        (action, eps)
    }
}

/// A surjective homomorphism `ε: K → E(T)`; values are `T` indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonMap {
    map: Vec<usize>,
}

impl EpsilonMap {
    pub fn new(action: &EndoAction, map: Vec<usize>) -> Result<Self> {
        Self::for_pair(action.acted_on(), action.acting(), map)
    }

    pub fn for_pair(k: &InverseSemigroup, t: &InverseSemigroup, map: Vec<usize>) -> Result<Self> {
        is_homomorphism(&map, k, t)?;
        if let Some(&x) = map.iter().find(|&&x| !t.is_idempotent(x)) {
            return Err(Error::NotSemilatticeCodomain { x });
        }
        if let Some(&missing) = t.idempotents().iter().find(|e| !map.contains(e)) {
            return Err(Error::NotSurjective { missing });
        }
        Ok(Self { map })
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `K_e` for every `T` index (empty for non-idempotents).
    pub fn classes(&self, t_order: usize) -> Vec<ElementSet> {
        let mut out = vec![ElementSet::empty(self.map.len()); t_order];
        for (a, &e) in self.map.iter().enumerate() {
            out[e].insert(a);
        }
        out
    }

    pub fn to_json(&self) -> EpsilonJson {
        EpsilonJson {
            epsilon: self.map.clone(),
        }
    }
}

/// Violation of (AFR): `e·a = a` and `ε(a) ≤ e` disagree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AfrViolation {
    pub a: usize,
    pub e: usize,
}

/// `e·a = a ⟺ ε(a) ≤ e` for all `a ∈ K`, `e ∈ E(T)`.
pub fn check_afr(action: &EndoAction, eps: &EpsilonMap) -> Result<(), AfrViolation> {
    let (k, t) = (action.acted_on(), action.acting());
    for a in 0..k.order() {
        for &e in t.idempotents() {
            let fixes = action.act(e, a) == a;
            let below = t.natural_leq(eps.apply(a), e);
            if fixes != below {
                return Err(AfrViolation { a, e });
            }
        }
    }
    Ok(())
}

/// Violation of `ε(a)·a = a` or `ε(t·a) = ran(tε(a))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AeViolation {
    FixedByEpsilon { a: usize },
    EpsilonOfAction { a: usize, t: usize },
}

pub fn check_ae7_ae8(action: &EndoAction, eps: &EpsilonMap) -> Result<(), AeViolation> {
    let (k, t) = (action.acted_on(), action.acting());
    for a in 0..k.order() {
        if action.act(eps.apply(a), a) != a {
            return Err(AeViolation::FixedByEpsilon { a });
        }
    }
    for a in 0..k.order() {
        for x in 0..t.order() {
            if eps.apply(action.act(x, a)) != t.ran(t.mul(x, eps.apply(a))) {
                return Err(AeViolation::EpsilonOfAction { a, t: x });
            }
        }
    }
    Ok(())
}

/// Violation of the class-wise conditions `e·a = a` for `a ∈ K_e` and
/// `t·a ∈ K_{ran(te)}` for `a ∈ K_e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModifiedViolation {
    ClassNotFixed { e: usize, a: usize },
    WrongTargetClass { e: usize, a: usize, t: usize },
}

/// Class-wise form of the conditions, over the decomposition `classes`
/// (indexed by `T` elements, `K_e` empty unless `e` is idempotent).
pub fn check_modified(
    action: &EndoAction,
    classes: &[ElementSet],
) -> Result<(), ModifiedViolation> {
    let t = action.acting();
    for &e in t.idempotents() {
        for a in classes[e].iter() {
            if action.act(e, a) != a {
                return Err(ModifiedViolation::ClassNotFixed { e, a });
            }
        }
    }
    for &e in t.idempotents() {
        for a in classes[e].iter() {
            for x in 0..t.order() {
                let target = t.ran(t.mul(x, e));
                if !classes[target].contains(action.act(x, a)) {
                    return Err(ModifiedViolation::WrongTargetClass { e, a, t: x });
                }
            }
        }
    }
    Ok(())
}

/// Consequences of (AFR): `ε(e·a) = eε(a)` and
/// `ε(ε(a)·b) = ε(ab) = ε(ε(b)·a)`.
pub fn check_derived_identities(action: &EndoAction, eps: &EpsilonMap) -> bool {
    let (k, t) = (action.acted_on(), action.acting());
    let spec = (0..k.order()).all(|a| {
        t.idempotents()
            .iter()
            .all(|&e| eps.apply(action.act(e, a)) == t.mul(e, eps.apply(a)))
    });
    let mixed = (0..k.order()).all(|a| {
        (0..k.order()).all(|b| {
            let ab = eps.apply(k.mul(a, b));
            eps.apply(action.act(eps.apply(a), b)) == ab
                && ab == eps.apply(action.act(eps.apply(b), a))
        })
    });
    spec && mixed
}

/// `K` as a strong semilattice of the classes `K_e`, with structure maps
/// `ε_{e,f}(a) = f·a` for `f ≤ e`.
#[derive(Clone, Debug)]
pub struct StrongSemilattice {
    pub classes: Vec<ElementSet>,
    /// `(e, f) ↦ [(a, ε_{e,f}(a)) for a ∈ K_e]`, for `f ≤ e` in `E(T)`.
    pub maps: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
}

pub fn strong_semilattice(action: &EndoAction, eps: &EpsilonMap) -> Result<StrongSemilattice> {
    if let Err(v) = check_afr(action, eps) {
        return Err(Error::AfrViolated { a: v.a, e: v.e });
    }
    let t = action.acting();
    let classes = eps.classes(t.order());
    let mut maps = BTreeMap::new();
    for &e in t.idempotents() {
        for &f in t.idempotents() {
            if t.natural_leq(f, e) {
                let m = classes[e].iter().map(|a| (a, action.act(f, a))).collect();
                maps.insert((e, f), m);
            }
        }
    }
    Ok(StrongSemilattice { classes, maps })
}

impl StrongSemilattice {
    fn image(&self, e: usize, f: usize, a: usize) -> usize {
        self.maps[&(e, f)]
            .iter()
            .find(|&&(x, _)| x == a)
            .map(|&(_, y)| y)
            .expect("element of K_e")
    }

    /// The three strong-semilattice axioms, plus: each structure map is a
    /// homomorphism `K_e → K_f`. Returns a description of the first failure.
    pub fn verify(&self, k: &InverseSemigroup, t: &InverseSemigroup) -> Result<(), String> {
        for (&(e, f), m) in &self.maps {
            for &(a, b) in m {
                if !self.classes[f].contains(b) {
                    return Err(format!("ε_{{{e},{f}}}({a}) = {b} leaves K_{f}"));
                }
                if e == f && a != b {
                    return Err(format!("ε_{{{e},{e}}} moves {a}"));
                }
            }
            for &(a, x) in m {
                for &(b, y) in m {
                    if self.image(e, f, k.mul(a, b)) != k.mul(x, y) {
                        return Err(format!("ε_{{{e},{f}}} not multiplicative at ({a}, {b})"));
                    }
                }
            }
        }
        for &(e, f) in self.maps.keys() {
            for &(f2, g) in self.maps.keys() {
                if f2 != f {
                    continue;
                }
                for a in self.classes[e].iter() {
                    if self.image(f, g, self.image(e, f, a)) != self.image(e, g, a) {
                        return Err(format!(
                            "ε_{{{f},{g}}} ε_{{{e},{f}}} != ε_{{{e},{g}}} at {a}"
                        ));
                    }
                }
            }
        }
        for &e in t.idempotents() {
            for &f in t.idempotents() {
                let ef = t.mul(e, f);
                for a in self.classes[e].iter() {
                    for b in self.classes[f].iter() {
                        let rebuilt = k.mul(self.image(e, ef, a), self.image(f, ef, b));
                        if rebuilt != k.mul(a, b) {
                            return Err(format!("product {a}*{b} not recovered"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// All endomorphisms of `k`, in lexicographic order.
pub fn endomorphisms(k: &InverseSemigroup) -> Vec<Vec<usize>> {
    let n = k.order();
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; n];
    fn rec(k: &InverseSemigroup, pos: usize, map: &mut [usize], out: &mut Vec<Vec<usize>>) {
        let n = map.len();
        if pos == n {
            out.push(map.to_vec());
            return;
        }
        'cand: for y in 0..n {
            map[pos] = y;
            for x in 0..=pos {
                for z in 0..=pos {
                    let p = k.mul(x, z);
                    if x.max(z).max(p) == pos && map[p] != k.mul(map[x], map[z]) {
                        continue 'cand;
                    }
                }
            }
            rec(k, pos + 1, map, out);
        }
        map[pos] = usize::MAX;
    }
    rec(k, 0, &mut map, &mut out);
    out
}

/// Every action of `t` on `k` by endomorphisms, found by choosing the
/// endomorphism of each generator of `t` and propagating along products.
pub fn enumerate_actions(t: &InverseSemigroup, k: &InverseSemigroup) -> Vec<EndoAction> {
    let ends = endomorphisms(k);
    let end_index: HashMap<&[usize], usize> = ends
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_slice(), i))
        .collect();
    let compose = |x: usize, y: usize| -> usize {
        let f = &ends[x];
        let g = &ends[y];
        let h: Vec<usize> = g.iter().map(|&b| f[b]).collect();
        end_index[h.as_slice()]
    };
    let gens = t.base().greedy_generators();
    let mut out = Vec::new();
    let mut assign = vec![usize::MAX; t.order()];
    fn rec(
        t: &InverseSemigroup,
        gens: &[usize],
        depth: usize,
        n_ends: usize,
        assign: &mut Vec<usize>,
        compose: &dyn Fn(usize, usize) -> usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == gens.len() {
            out.push(assign.clone());
            return;
        }
        let g = gens[depth];
        for cand in 0..n_ends {
            let saved = assign.clone();
            if propagate(t, assign, g, cand, compose) {
                rec(t, gens, depth + 1, n_ends, assign, compose, out);
            }
            *assign = saved;
        }
    }
    let mut assignments = Vec::new();
    rec(
        t,
        &gens,
        0,
        ends.len(),
        &mut assign,
        &compose,
        &mut assignments,
    );
    for a in assignments {
        let rows: Vec<Vec<usize>> = a.iter().map(|&i| ends[i].clone()).collect();
        out.push(EndoAction::from_rows_unchecked(t.clone(), k.clone(), &rows));
    }
    out
}

/// Adds `g ↦ cand` and closes under products; false on conflict.
fn propagate(
    t: &InverseSemigroup,
    assign: &mut [usize],
    g: usize,
    cand: usize,
    compose: &dyn Fn(usize, usize) -> usize,
) -> bool {
    let mut queue = VecDeque::from([(g, cand)]);
    while let Some((x, v)) = queue.pop_front() {
        if assign[x] != usize::MAX {
            if assign[x] != v {
                return false;
            }
            continue;
        }
        assign[x] = v;
        for y in 0..t.order() {
            if assign[y] == usize::MAX {
                continue;
            }
            queue.push_back((t.mul(x, y), compose(v, assign[y])));
            queue.push_back((t.mul(y, x), compose(assign[y], v)));
        }
    }
    true
}

/// Up to `count` actions of `t` on `k`, each built by assigning random
/// endomorphisms to the generators of `t`.
pub fn sample_actions(
    t: &InverseSemigroup,
    k: &InverseSemigroup,
    count: usize,
    rng: &mut impl Rng,
) -> Vec<EndoAction> {
    let ends = endomorphisms(k);
    let end_index: HashMap<&[usize], usize> = ends
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_slice(), i))
        .collect();
    let compose = |x: usize, y: usize| -> usize {
        let h: Vec<usize> = ends[y].iter().map(|&b| ends[x][b]).collect();
        end_index[h.as_slice()]
    };
    let gens = t.base().greedy_generators();
    let mut out = Vec::new();
    for _ in 0..count * 4 {
        if out.len() == count {
            break;
        }
        let mut assign = vec![usize::MAX; t.order()];
        let mut ok = true;
        for &g in &gens {
            let mut options: Vec<usize> = (0..ends.len()).collect();
            options.shuffle(rng);
            let placed = options.into_iter().any(|cand| {
                let saved = assign.clone();
                if propagate(t, &mut assign, g, cand, &compose) {
                    true
                } else {
                    assign = saved;
                    false
                }
            });
            if !placed {
                ok = false;
                break;
            }
        }
        if ok {
            let rows: Vec<Vec<usize>> = assign.iter().map(|&i| ends[i].clone()).collect();
            out.push(EndoAction::from_rows_unchecked(t.clone(), k.clone(), &rows));
        }
    }
    out
}

/// Every surjective homomorphism `K → E(T)`.
pub fn enumerate_epsilons(k: &InverseSemigroup, t: &InverseSemigroup) -> Vec<EpsilonMap> {
    let idem = t.idempotents();
    let n = k.order();
    let total = idem.len().pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let map: Vec<usize> = (0..n)
            .map(|_| {
                let e = idem[c % idem.len()];
                c /= idem.len();
                e
            })
            .collect();
        if let Ok(eps) = EpsilonMap::for_pair(k, t, map) {
            out.push(eps);
        }
    }
    out
}

/// The action of `E` on a strong semilattice `K = ⋃ K_e`:
/// `f·a = ε_{e,ef}(a)` for `a ∈ K_e`, built from the structure maps.
pub fn action_from_structure_maps(
    e: &InverseSemigroup,
    k: &InverseSemigroup,
    eta: &[usize],
    structure: impl Fn(usize, usize, usize) -> usize,
) -> Result<EndoAction> {
    EndoAction::from_fn(e.clone(), k.clone(), |f, a| {
        let class = eta[a];
        structure(class, e.mul(class, f), a)
    })
}
