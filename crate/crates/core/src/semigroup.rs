//! Finite semigroups given by Cayley tables, and the inverse-semigroup layer on
//! top of them: inverses, idempotents, `dom`/`ran`, the natural partial order,
//! principal left ideals and inverse subsemigroup generation.
//!
//! Elements are dense indices `0..n`. The row index of the table is the left
//! factor.

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Below this order associativity is checked by a full triple scan, which
/// yields the lexicographically least witness. Above it Light's test over a
/// generating set is used.
const FULL_ASSOCIATIVITY_SCAN: usize = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSemigroup {
    order: usize,
    table: Vec<u32>,
    names: Option<Vec<String>>,
}

impl fmt::Debug for FiniteSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSemigroup")
            .field("order", &self.order)
            .field("table", &self.rows())
            .finish()
    }
}

impl FiniteSemigroup {
    /// Builds a table from rows. Only the shape and the entry range are
    /// checked here; associativity is checked by [`validate`].
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::Malformed("empty carrier".into()));
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::Malformed(format!(
                    "row {i} has length {} but the order is {order}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                if x >= order {
                    return Err(Error::Malformed(format!(
                        "entry ({i}, {j}) = {x} is out of range"
                    )));
                }
                table.push(x as u32);
            }
        }
        Ok(Self {
            order,
            table,
            names: None,
        })
    }

    pub fn from_fn(order: usize, mut mul: impl FnMut(usize, usize) -> usize) -> Result<Self> {
        let mut rows = Vec::with_capacity(order);
        for a in 0..order {
            rows.push((0..order).map(|b| mul(a, b)).collect());
        }
        Self::new(rows)
    }

    pub(crate) fn from_flat(order: usize, table: Vec<u32>) -> Self {
        debug_assert_eq!(table.len(), order * order);
        Self {
            order,
            table,
            names: None,
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.order {
            return Err(Error::Malformed(format!(
                "{} names given for {} elements",
                names.len(),
                self.order
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.order)
            .map(|r| r.iter().map(|&x| x as usize).collect())
            .collect()
    }

    pub fn check_associative(&self) -> Result<()> {
        let n = self.order;
        if n <= FULL_ASSOCIATIVITY_SCAN {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(Error::NotAssociative { a, b, c });
                        }
                    }
                }
            }
            return Ok(());
        }
        // Light's test: it suffices to check (xg)y = x(gy) for g in a
        // generating set.
        for g in self.greedy_generators() {
            for x in 0..n {
                let xg = self.mul(x, g);
                for y in 0..n {
                    if self.mul(xg, y) != self.mul(x, self.mul(g, y)) {
                        return Err(Error::NotAssociative { a: x, b: g, c: y });
                    }
                }
            }
        }
        Ok(())
    }

    /// A generating set found by scanning elements from large to small
    /// one-sided ideals (`|xS| + |Sx|`, ties by index) and keeping each one not
    /// yet in the closure of the previous ones.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let n = self.order;
        let mut row_stamp = vec![usize::MAX; n];
        let mut col_stamp = vec![usize::MAX; n];
        let mut size = vec![0usize; n];
        for (x, s) in size.iter_mut().enumerate() {
            for y in 0..n {
                let (r, c) = (self.mul(x, y), self.mul(y, x));
                if row_stamp[r] != x {
                    row_stamp[r] = x;
                    *s += 1;
                }
                if col_stamp[c] != x {
                    col_stamp[c] = x;
                    *s += 1;
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| (std::cmp::Reverse(size[x]), x));
        let mut inside = vec![false; n];
        let mut members: Vec<usize> = Vec::new();
        let mut gens = Vec::new();
        for g in order {
            if inside[g] {
                continue;
            }
            gens.push(g);
            let mut queue = VecDeque::from([g]);
            inside[g] = true;
            while let Some(x) = queue.pop_front() {
                members.push(x);
                for i in 0..members.len() {
                    let y = members[i];
                    for p in [self.mul(x, y), self.mul(y, x)] {
                        if !inside[p] {
                            inside[p] = true;
                            queue.push_back(p);
                        }
                    }
                }
            }
        }
        gens
    }
}

/// A validated finite inverse semigroup.
#[derive(Clone, PartialEq, Eq)]
pub struct InverseSemigroup {
    base: FiniteSemigroup,
    inv: Vec<u32>,
    idempotents: Vec<usize>,
    is_idem: Vec<bool>,
}

impl fmt::Debug for InverseSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InverseSemigroup")
            .field("order", &self.order())
            .field("table", &self.base.rows())
            .field("inv", &self.inv)
            .finish()
    }
}

/// Checks that `table` is an inverse semigroup and computes its inverse map
/// and idempotents.
pub fn validate(table: FiniteSemigroup) -> Result<InverseSemigroup> {
    table.check_associative()?;
    let n = table.order();
    let is_idem: Vec<bool> = (0..n).map(|a| table.mul(a, a) == a).collect();
    let idempotents: Vec<usize> = (0..n).filter(|&a| is_idem[a]).collect();

    // Regularity: some b with aba = a (then bab is an inverse of a).
    for a in 0..n {
        if !(0..n).any(|b| table.mul(table.mul(a, b), a) == a) {
            return Err(Error::NotRegular { a });
        }
    }
    for (i, &e) in idempotents.iter().enumerate() {
        for &f in &idempotents[i + 1..] {
            if table.mul(e, f) != table.mul(f, e) {
                return Err(Error::IdempotentsDontCommute { e, f });
            }
        }
    }
    // Regular with commuting idempotents, so each inverse is unique.
    let mut inv = Vec::with_capacity(n);
    for a in 0..n {
        let b = (0..n)
            .find(|&b| table.mul(table.mul(a, b), a) == a && table.mul(table.mul(b, a), b) == b)
            .expect("regular element has an inverse");
        inv.push(b as u32);
    }
    Ok(InverseSemigroup {
        base: table,
        inv,
        idempotents,
        is_idem,
    })
}

impl InverseSemigroup {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        validate(FiniteSemigroup::new(rows)?)
    }

    pub fn from_fn(order: usize, mul: impl FnMut(usize, usize) -> usize) -> Result<Self> {
        validate(FiniteSemigroup::from_fn(order, mul)?)
    }

    /// The one-element semigroup.
    pub fn trivial() -> Self {
        Self::from_rows(vec![vec![0]]).expect("trivial semigroup")
    }

    pub fn base(&self) -> &FiniteSemigroup {
        &self.base
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.base.rows()
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        self.base = self.base.with_names(names)?;
        Ok(self)
    }

    pub fn name(&self, a: usize) -> String {
        match self.base.names() {
            Some(names) => names[a].clone(),
            None => a.to_string(),
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.base.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.base.mul(a, b)
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn inverse_map(&self) -> Vec<usize> {
        self.inv.iter().map(|&x| x as usize).collect()
    }

    /// Product of a nonempty sequence, left to right.
    pub fn product(&self, xs: &[usize]) -> usize {
        let (&first, rest) = xs.split_first().expect("nonempty product");
        rest.iter().fold(first, |acc, &x| self.mul(acc, x))
    }

    /// `a⁻¹a`
    #[inline]
    pub fn dom(&self, a: usize) -> usize {
        self.mul(self.inv(a), a)
    }

    /// `aa⁻¹`
    #[inline]
    pub fn ran(&self, a: usize) -> usize {
        self.mul(a, self.inv(a))
    }

    #[inline]
    pub fn is_idempotent(&self, a: usize) -> bool {
        self.is_idem[a]
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    /// `a ≤ b` in the natural partial order: `a = (aa⁻¹)b`.
    #[inline]
    pub fn natural_leq(&self, a: usize, b: usize) -> bool {
        self.mul(self.ran(a), b) == a
    }

    pub fn is_semilattice(&self) -> bool {
        self.idempotents.len() == self.order()
    }

    pub fn is_group(&self) -> bool {
        self.idempotents.len() == 1
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The two-sided identity, if any.
    pub fn identity(&self) -> Option<usize> {
        let n = self.order();
        self.idempotents
            .iter()
            .copied()
            .find(|&e| (0..n).all(|a| self.mul(e, a) == a && self.mul(a, e) == a))
    }

    pub fn universe(&self) -> ElementSet {
        ElementSet::full(self.order())
    }

    pub fn idempotent_set(&self) -> ElementSet {
        ElementSet::from_iter(self.order(), self.idempotents.iter().copied())
    }

    /// `St = {xt : x ∈ S}`.
    pub fn principal_left_ideal(&self, t: usize) -> ElementSet {
        ElementSet::from_iter(self.order(), (0..self.order()).map(|x| self.mul(x, t)))
    }

    /// Least subset containing `gens` and closed under product and inversion.
    pub fn generated_subsemigroup(&self, gens: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.order());
        let mut members = Vec::new();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for g in gens.iter() {
            for x in [g, self.inv(g)] {
                if out.insert(x) {
                    queue.push_back(x);
                }
            }
        }
        while let Some(x) = queue.pop_front() {
            members.push(x);
            for i in 0..members.len() {
                let y = members[i];
                for p in [self.mul(x, y), self.mul(y, x)] {
                    if out.insert(p) {
                        queue.push_back(p);
                        let q = self.inv(p);
                        if out.insert(q) {
                            queue.push_back(q);
                        }
                    }
                }
            }
        }
        out
    }

    /// Whether `set` is closed under product and inversion.
    pub fn is_inverse_subsemigroup(&self, set: &ElementSet) -> bool {
        set.iter()
            .all(|a| set.contains(self.inv(a)) && set.iter().all(|b| set.contains(self.mul(a, b))))
    }

    /// Componentwise product; the pair `(a, b)` gets index `a * |other| + b`.
    pub fn direct_product(&self, other: &InverseSemigroup) -> InverseSemigroup {
        let m = other.order();
        let n = self.order() * m;
        let table = FiniteSemigroup::from_fn(n, |x, y| {
            self.mul(x / m, y / m) * m + other.mul(x % m, y % m)
        })
        .expect("direct product table");
        validate(table).expect("direct product of inverse semigroups is inverse")
    }

    /// Re-indexes an inverse subsemigroup as a standalone semigroup.
    pub fn restrict(&self, set: &ElementSet) -> Result<Subsemigroup> {
        if set.is_empty() {
            return Err(Error::Invalid("empty subsemigroup".into()));
        }
        let embedding: Vec<usize> = set.iter().collect();
        let mut local = vec![usize::MAX; self.order()];
        for (i, &x) in embedding.iter().enumerate() {
            local[x] = i;
        }
        let k = embedding.len();
        let mut table = Vec::with_capacity(k * k);
        for &x in &embedding {
            for &y in &embedding {
                let p = local[self.mul(x, y)];
                if p == usize::MAX {
                    return Err(Error::Invalid(format!(
                        "subset is not closed: {x}*{y} = {} is outside",
                        self.mul(x, y)
                    )));
                }
                table.push(p as u32);
            }
        }
        let mut base = FiniteSemigroup::from_flat(k, table);
        if let Some(names) = self.base.names() {
            base.names = Some(embedding.iter().map(|&x| names[x].clone()).collect());
        }
        let semigroup = validate(base)?;
        Ok(Subsemigroup {
            semigroup,
            embedding,
            local,
        })
    }
}

/// An inverse subsemigroup re-indexed densely, with the inclusion map.
#[derive(Clone, Debug)]
pub struct Subsemigroup {
    pub semigroup: InverseSemigroup,
    /// Local index to parent index.
    pub embedding: Vec<usize>,
    local: Vec<usize>,
}

impl Subsemigroup {
    /// Parent index to local index.
    pub fn local(&self, parent: usize) -> Option<usize> {
        match self.local.get(parent) {
            Some(&i) if i != usize::MAX => Some(i),
            _ => None,
        }
    }
}

/// A subset of the carrier `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    bits: FixedBitSet,
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl ElementSet {
    pub fn empty(n: usize) -> Self {
        Self {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        Self { bits }
    }

    pub fn from_iter(n: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for x in items {
            s.insert(x);
        }
        s
    }

    /// Size of the universe this set lives in.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    /// Returns true if `x` was not present.
    pub fn insert(&mut self, x: usize) -> bool {
        !self.bits.put(x)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Self { bits }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn chain2() -> InverseSemigroup {
        InverseSemigroup::from_rows(vec![vec![0, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn two_chain_is_a_semilattice() {
        let s = chain2();
        assert_eq!(s.inverse_map(), vec![0, 1]);
        assert_eq!(s.idempotents(), &[0, 1]);
        assert!(s.natural_leq(0, 1));
        assert!(!s.natural_leq(1, 0));
        assert_eq!(s.identity(), Some(1));
    }

    #[test]
    fn rejects_non_associative_table() {
        let t = FiniteSemigroup::new(vec![vec![1, 1], vec![1, 0]]).unwrap();
        // (0*0)*1 = 1*1 = 0 but 0*(0*1) = 0*1 = 1.
        assert_eq!(
            validate(t).unwrap_err(),
            Error::NotAssociative { a: 0, b: 0, c: 1 }
        );
    }

    #[test]
    fn rejects_non_regular_and_non_commuting() {
        // Null semigroup {0, x} with x*x = 0: x is not regular.
        let t = FiniteSemigroup::new(vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(validate(t).unwrap_err(), Error::NotRegular { a: 1 });
        // Left-zero band: regular but idempotents do not commute.
        let t = FiniteSemigroup::new(vec![vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(
            validate(t).unwrap_err(),
            Error::IdempotentsDontCommute { e: 0, f: 1 }
        );
    }

    #[test]
    fn rejects_malformed_tables() {
        assert!(FiniteSemigroup::new(vec![]).is_err());
        assert!(FiniteSemigroup::new(vec![vec![0, 2], vec![0, 1]]).is_err());
        assert!(FiniteSemigroup::new(vec![vec![0], vec![0, 1]]).is_err());
    }

    #[test]
    fn light_test_agrees_with_full_scan_on_large_tables() {
        // Z_70 is above the full-scan bound.
        let z = InverseSemigroup::from_fn(70, |a, b| (a + b) % 70).unwrap();
        assert_eq!(z.identity(), Some(0));
        let mut rows = z.base().rows();
        rows[3][5] = 9;
        let bad = FiniteSemigroup::new(rows).unwrap();
        assert!(matches!(validate(bad), Err(Error::NotAssociative { .. })));
    }

    #[test]
    fn dom_and_ran_in_b2() {
        let b2 = fixtures::b2();
        for a in 0..b2.order() {
            assert_eq!(b2.mul(b2.ran(a), a), a);
            assert_eq!(b2.mul(a, b2.dom(a)), a);
            assert!(b2.is_idempotent(b2.dom(a)));
            assert_eq!(b2.dom(b2.inv(a)), b2.ran(a));
        }
        for &e in b2.idempotents() {
            assert_eq!(b2.dom(e), e);
            assert_eq!(b2.ran(e), e);
        }
    }

    #[test]
    fn principal_left_ideals() {
        let s = chain2();
        assert_eq!(s.principal_left_ideal(0).to_vec(), vec![0]);
        assert_eq!(s.principal_left_ideal(1).to_vec(), vec![0, 1]);
    }

    #[test]
    fn generation_fixed_points() {
        let b2 = fixtures::b2();
        let e = b2.idempotents()[1];
        let g = b2.generated_subsemigroup(&ElementSet::from_iter(b2.order(), [e]));
        assert_eq!(g.to_vec(), vec![e]);
        let all = b2.generated_subsemigroup(&b2.universe());
        assert_eq!(all, b2.universe());
    }

    #[test]
    fn direct_products() {
        let c = chain2();
        let t = InverseSemigroup::trivial();
        assert_eq!(c.direct_product(&t).base().rows(), c.base().rows());
        let boolean = c.direct_product(&c);
        assert_eq!(boolean.order(), 4);
        assert!(boolean.is_semilattice());
    }

    #[test]
    fn restrict_reindexes() {
        let b2 = fixtures::b2();
        let sub = b2.restrict(&b2.idempotent_set()).unwrap();
        assert!(sub.semigroup.is_semilattice());
        for (i, &x) in sub.embedding.iter().enumerate() {
            assert_eq!(sub.local(x), Some(i));
        }
        let not_closed = ElementSet::from_iter(b2.order(), [1, 2]);
        let closed = b2.generated_subsemigroup(&not_closed);
        assert!(closed.len() > 2);
    }
}
