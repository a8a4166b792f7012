//! Congruences on finite inverse semigroups: validation, the two enumeration
//! engines, Kernel, trace, quotients and semilattice decompositions.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::morphism::{is_homomorphism, Morphism};
use crate::semigroup::{ElementSet, FiniteSemigroup, InverseSemigroup};

/// Default bound for the exhaustive partition scan.
pub const PARTITION_SCAN_BOUND: usize = 8;
/// Default bound for principal-congruence generation with join closure.
pub const CLOSURE_BOUND: usize = 24;

/// An equivalence on `0..n`, stored as a canonical class assignment: class
/// ids are numbered by the least element of each class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Congruence {
    class_of: Vec<u32>,
    class_count: usize,
}

/// JSON shape of a congruence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceJson {
    pub class_of: Vec<usize>,
}

impl Congruence {
    /// Canonicalizes an arbitrary labelling. No compatibility check.
    pub(crate) fn from_labels<T: Eq + std::hash::Hash + Copy>(labels: &[T]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let class_of = labels
            .iter()
            .map(|l| {
                let next = ids.len() as u32;
                *ids.entry(*l).or_insert(next)
            })
            .collect();
        Self {
            class_of,
            class_count: ids.len(),
        }
    }

    /// The equality relation Δ.
    pub fn identity(n: usize) -> Self {
        Self {
            class_of: (0..n as u32).collect(),
            class_count: n,
        }
    }

    /// The universal relation ∇.
    pub fn universal(n: usize) -> Self {
        Self {
            class_of: vec![0; n],
            class_count: 1,
        }
    }

    /// The kernel `ker φ` of a map, as an equivalence on its domain.
    pub fn kernel_of(map: &[usize]) -> Self {
        Self::from_labels(map)
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    #[inline]
    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a] as usize
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn labels(&self) -> Vec<usize> {
        self.class_of.iter().map(|&c| c as usize).collect()
    }

    #[inline]
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count];
        for (a, &c) in self.class_of.iter().enumerate() {
            out[c as usize].push(a);
        }
        out
    }

    /// Least element of each class, indexed by class id.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.class_count];
        for (a, &c) in self.class_of.iter().enumerate() {
            if reps[c as usize] == usize::MAX {
                reps[c as usize] = a;
            }
        }
        reps
    }

    pub fn is_identity(&self) -> bool {
        self.class_count == self.len()
    }

    pub fn is_universal(&self) -> bool {
        self.class_count == 1
    }

    /// `self ⊆ other` as relations.
    pub fn is_finer_than(&self, other: &Congruence) -> bool {
        let mut image = vec![u32::MAX; self.class_count];
        self.class_of.iter().zip(&other.class_of).all(|(&c, &d)| {
            let slot = &mut image[c as usize];
            if *slot == u32::MAX {
                *slot = d;
            }
            *slot == d
        })
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let pairs: Vec<(u32, u32)> = self
            .class_of
            .iter()
            .copied()
            .zip(other.class_of.iter().copied())
            .collect();
        Self::from_labels(&pairs)
    }

    /// Equivalence join (transitive closure of the union).
    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.len());
        for rel in [self, other] {
            let reps = rel.representatives();
            for a in 0..rel.len() {
                uf.union(a, reps[rel.class_of(a)]);
            }
        }
        uf.into_congruence()
    }

    pub fn to_json(&self) -> CongruenceJson {
        CongruenceJson {
            class_of: self.labels(),
        }
    }
}

/// Returns the congruence iff `partition` is compatible with multiplication.
pub fn is_congruence(s: &InverseSemigroup, partition: &[usize]) -> Result<Congruence> {
    if partition.len() != s.order() {
        return Err(Error::Invalid(format!(
            "partition covers {} elements, semigroup has {}",
            partition.len(),
            s.order()
        )));
    }
    let theta = Congruence::from_labels(partition);
    if let Some((a, a2, b)) = compatibility_witness(s.base(), &theta) {
        return Err(Error::NotCompatible { a, a2, b });
    }
    Ok(theta)
}

fn compatibility_witness(s: &FiniteSemigroup, theta: &Congruence) -> Option<(usize, usize, usize)> {
    let n = s.order();
    for a in 0..n {
        for a2 in a + 1..n {
            if !theta.related(a, a2) {
                continue;
            }
            for b in 0..n {
                if !theta.related(s.mul(a, b), s.mul(a2, b))
                    || !theta.related(s.mul(b, a), s.mul(b, a2))
                {
                    return Some((a, a2, b));
                }
            }
        }
    }
    None
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn into_congruence(mut self) -> Congruence {
        let roots: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Congruence::from_labels(&roots)
    }
}

/// The least congruence containing all the given pairs.
pub fn generated_congruence(s: &InverseSemigroup, pairs: &[(usize, usize)]) -> Congruence {
    let n = s.order();
    let mut uf = UnionFind::new(n);
    let mut queue: Vec<(usize, usize)> = pairs.to_vec();
    while let Some((u, v)) = queue.pop() {
        if uf.union(u, v) {
            for x in 0..n {
                queue.push((s.mul(x, u), s.mul(x, v)));
                queue.push((s.mul(u, x), s.mul(v, x)));
            }
        }
    }
    uf.into_congruence()
}

/// The principal congruence generated by `(a, b)`.
pub fn principal_congruence(s: &InverseSemigroup, a: usize, b: usize) -> Congruence {
    generated_congruence(s, &[(a, b)])
}

/// All congruences, choosing the engine by order.
pub fn enumerate_congruences(s: &InverseSemigroup) -> Result<Vec<Congruence>> {
    if s.order() <= PARTITION_SCAN_BOUND {
        enumerate_by_partitions(s, PARTITION_SCAN_BOUND)
    } else {
        enumerate_by_closure(s, CLOSURE_BOUND)
    }
}

/// Exhaustive scan over all set partitions (restricted growth strings).
/// The result is sorted.
pub fn enumerate_by_partitions(s: &InverseSemigroup, bound: usize) -> Result<Vec<Congruence>> {
    let n = s.order();
    if n > bound {
        return Err(Error::TooLarge {
            what: "partition-scan congruence enumeration",
            size: n,
            bound,
        });
    }
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(
        s: &FiniteSemigroup,
        pos: usize,
        used: usize,
        labels: &mut [usize],
        out: &mut Vec<Congruence>,
    ) {
        let n = labels.len();
        if pos == n {
            let theta = Congruence::from_labels(labels);
            if compatibility_witness(s, &theta).is_none() {
                out.push(theta);
            }
            return;
        }
        for c in 0..=used {
            labels[pos] = c;
            if prefix_consistent(s, labels, pos) {
                rec(s, pos + 1, used.max(c + 1), labels, out);
            }
        }
    }
    rec(s.base(), 1.min(n), 1, &mut labels, &mut out);
    out.sort();
    Ok(out)
}

/// Compatibility restricted to the already labelled prefix `0..=pos`, for
/// pairs involving `pos`.
fn prefix_consistent(s: &FiniteSemigroup, labels: &[usize], pos: usize) -> bool {
    for a in 0..pos {
        if labels[a] != labels[pos] {
            continue;
        }
        for b in 0..=pos {
            for (x, y) in [(s.mul(a, b), s.mul(pos, b)), (s.mul(b, a), s.mul(b, pos))] {
                if x <= pos && y <= pos && labels[x] != labels[y] {
                    return false;
                }
            }
        }
    }
    true
}

/// Principal congruences plus Δ, closed under joins. The result is sorted.
pub fn enumerate_by_closure(s: &InverseSemigroup, bound: usize) -> Result<Vec<Congruence>> {
    let n = s.order();
    if n > bound {
        return Err(Error::TooLarge {
            what: "principal-congruence enumeration",
            size: n,
            bound,
        });
    }
    let mut principal = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            principal.insert(principal_congruence(s, a, b));
        }
    }
    let principal: Vec<Congruence> = principal.into_iter().collect();
    let mut all: HashSet<Congruence> = HashSet::new();
    all.insert(Congruence::identity(n));
    let mut frontier: Vec<Congruence> = vec![Congruence::identity(n)];
    while let Some(theta) = frontier.pop() {
        for p in &principal {
            if p.is_finer_than(&theta) {
                continue;
            }
            let j = theta.join(p);
            if all.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    let mut out: Vec<Congruence> = all.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Elements related to an idempotent.
pub fn kernel(s: &InverseSemigroup, theta: &Congruence) -> ElementSet {
    let mut idem_class = vec![false; theta.class_count()];
    for &e in s.idempotents() {
        idem_class[theta.class_of(e)] = true;
    }
    ElementSet::from_iter(
        s.order(),
        (0..s.order()).filter(|&a| idem_class[theta.class_of(a)]),
    )
}

/// Restriction of `theta` to `E(S)`, as an equivalence on positions in
/// `s.idempotents()`.
pub fn trace(s: &InverseSemigroup, theta: &Congruence) -> Congruence {
    let labels: Vec<usize> = s.idempotents().iter().map(|&e| theta.class_of(e)).collect();
    Congruence::from_labels(&labels)
}

/// `S/θ` with its natural map. Quotient element `i` is the class with id `i`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub semigroup: InverseSemigroup,
    pub natural_map: Morphism,
}

pub fn quotient(s: &InverseSemigroup, theta: &Congruence) -> Quotient {
    let reps = theta.representatives();
    let k = theta.class_count();
    let table = FiniteSemigroup::from_fn(k, |c, d| theta.class_of(s.mul(reps[c], reps[d])))
        .expect("quotient table");
    let semigroup = crate::semigroup::validate(table).expect("quotient of an inverse semigroup");
    let natural_map = Morphism::new_unchecked(theta.labels(), k);
    Quotient {
        semigroup,
        natural_map,
    }
}

/// The decomposition `K = ⋃ K_e` of `K` along a surjective homomorphism onto
/// a semilattice. `classes[e]` is `K_e`.
#[derive(Clone, Debug)]
pub struct SemilatticeDecomposition {
    pub eta: Vec<usize>,
    pub classes: Vec<ElementSet>,
}

/// Decomposes `k` along `eta: K → E`, where `e` must be a semilattice.
pub fn decomposition_along(
    k: &InverseSemigroup,
    e: &InverseSemigroup,
    eta: &[usize],
) -> Result<SemilatticeDecomposition> {
    if let Some(x) = (0..e.order()).find(|&x| !e.is_idempotent(x)) {
        return Err(Error::NotSemilatticeCodomain { x });
    }
    let m = is_homomorphism(eta, k, e)?;
    if !m.surjective() {
        let missing = (0..e.order()).find(|x| !eta.contains(x)).unwrap();
        return Err(Error::NotSurjective { missing });
    }
    let mut classes = vec![ElementSet::empty(k.order()); e.order()];
    for (a, &x) in eta.iter().enumerate() {
        classes[x].insert(a);
    }
    Ok(SemilatticeDecomposition {
        eta: eta.to_vec(),
        classes,
    })
}

impl SemilatticeDecomposition {
    /// Checks `K_e K_f ⊆ K_{ef}`, that each class is an inverse subsemigroup
    /// and that the classes partition `K`.
    pub fn verify(&self, k: &InverseSemigroup, e: &InverseSemigroup) -> bool {
        let mut covered = ElementSet::empty(k.order());
        for c in &self.classes {
            if !covered.intersection(c).is_empty() {
                return false;
            }
            covered.union_with(c);
            if !k.is_inverse_subsemigroup(c) {
                return false;
            }
        }
        if covered.len() != k.order() {
            return false;
        }
        (0..e.order()).all(|x| {
            (0..e.order()).all(|y| {
                let xy = e.mul(x, y);
                self.classes[x].iter().all(|a| {
                    self.classes[y]
                        .iter()
                        .all(|b| self.classes[xy].contains(k.mul(a, b)))
                })
            })
        })
    }

    /// Recovers `η` from the classes.
    pub fn reconstruct(&self) -> Vec<usize> {
        let n = self.eta.len();
        let mut eta = vec![usize::MAX; n];
        for (x, c) in self.classes.iter().enumerate() {
            for a in c.iter() {
                eta[a] = x;
            }
        }
        eta
    }
}
