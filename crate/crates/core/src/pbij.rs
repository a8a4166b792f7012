//! Partial bijections of `{0, …, n-1}`, the symmetric inverse monoid, and
//! inverse semigroups generated by partial bijections.
//!
//! Composition is right to left: `compose(f, g)` applies `g` first.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigroup::{FiniteSemigroup, InverseSemigroup};

const UNDEFINED: u8 = u8::MAX;

/// Largest degree accepted by [`symmetric_inverse_monoid`].
pub const MAX_SYMMETRIC_DEGREE: usize = 4;

/// Largest degree a [`PartialBijection`] can have.
pub const MAX_DEGREE: usize = 32;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialBijection {
    images: Vec<u8>,
}

impl fmt::Debug for PartialBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// JSON shape of a partial bijection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialBijectionJson {
    pub degree: usize,
    pub graph: Vec<[usize; 2]>,
}

impl PartialBijection {
    /// Builds a partial bijection from its graph `[(x, f(x)), …]`.
    pub fn new(degree: usize, graph: &[(usize, usize)]) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::TooLarge {
                what: "partial bijection degree",
                size: degree,
                bound: MAX_DEGREE,
            });
        }
        let mut images = vec![UNDEFINED; degree];
        let mut hit = vec![false; degree];
        for &(x, y) in graph {
            if x >= degree || y >= degree {
                return Err(Error::Invalid(format!(
                    "pair ({x}, {y}) is outside degree {degree}"
                )));
            }
            if images[x] != UNDEFINED {
                return Err(Error::Invalid(format!("{x} is mapped twice")));
            }
            if hit[y] {
                return Err(Error::Invalid(format!("{y} is hit twice; not injective")));
            }
            images[x] = y as u8;
            hit[y] = true;
        }
        Ok(Self { images })
    }

    pub fn from_images(images: &[Option<usize>]) -> Result<Self> {
        let graph: Vec<(usize, usize)> = images
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y)))
            .collect();
        Self::new(images.len(), &graph)
    }

    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u8).collect(),
        }
    }

    /// The identity map restricted to `set`.
    pub fn identity_on(degree: usize, set: &[usize]) -> Result<Self> {
        let graph: Vec<(usize, usize)> = set.iter().map(|&x| (x, x)).collect();
        Self::new(degree, &graph)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        match self.images.get(x) {
            Some(&y) if y != UNDEFINED => Some(y as usize),
            _ => None,
        }
    }

    pub fn graph(&self) -> Vec<(usize, usize)> {
        (0..self.degree())
            .filter_map(|x| self.apply(x).map(|y| (x, y)))
            .collect()
    }

    pub fn domain(&self) -> Vec<usize> {
        (0..self.degree())
            .filter(|&x| self.apply(x).is_some())
            .collect()
    }

    pub fn range(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.graph().into_iter().map(|(_, y)| y).collect();
        r.sort_unstable();
        r
    }

    pub fn rank(&self) -> usize {
        self.images.iter().filter(|&&y| y != UNDEFINED).count()
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![UNDEFINED; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            if y != UNDEFINED {
                images[y as usize] = x as u8;
            }
        }
        Self { images }
    }

    /// `f ∘ g`: defined at `x` iff `g(x)` and `f(g(x))` are.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if self.degree() != g.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: g.degree(),
            });
        }
        Ok(self.compose_unchecked(g))
    }

    fn compose_unchecked(&self, g: &Self) -> Self {
        let images = g
            .images
            .iter()
            .map(|&y| {
                if y == UNDEFINED {
                    UNDEFINED
                } else {
                    self.images[y as usize]
                }
            })
            .collect();
        Self { images }
    }

    /// Compact label listing the images, `-` where undefined.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .images
            .iter()
            .map(|&y| {
                if y == UNDEFINED {
                    "-".to_string()
                } else {
                    y.to_string()
                }
            })
            .collect();
        if self.degree() <= 10 {
            parts.concat()
        } else {
            parts.join(",")
        }
    }

    pub fn to_json(&self) -> PartialBijectionJson {
        PartialBijectionJson {
            degree: self.degree(),
            graph: self.graph().into_iter().map(|(x, y)| [x, y]).collect(),
        }
    }

    pub fn from_json(j: &PartialBijectionJson) -> Result<Self> {
        let graph: Vec<(usize, usize)> = j.graph.iter().map(|p| (p[0], p[1])).collect();
        Self::new(j.degree, &graph)
    }
}

/// An inverse semigroup of partial bijections together with the bijection
/// represented by each index.
#[derive(Clone, Debug)]
pub struct BijectionSemigroup {
    pub semigroup: InverseSemigroup,
    pub elements: Vec<PartialBijection>,
}

impl BijectionSemigroup {
    pub fn index_of(&self, f: &PartialBijection) -> Option<usize> {
        self.elements.iter().position(|g| g == f)
    }

    fn from_elements(elements: Vec<PartialBijection>) -> Result<Self> {
        let index: HashMap<&PartialBijection, usize> =
            elements.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let n = elements.len();
        let table = FiniteSemigroup::from_fn(n, |a, b| {
            index[&elements[a].compose_unchecked(&elements[b])]
        })?;
        let names = elements.iter().map(PartialBijection::label).collect();
        let semigroup = crate::semigroup::validate(table.with_names(names)?)?;
        Ok(Self {
            semigroup,
            elements,
        })
    }
}

/// Number of partial bijections of an `n`-set: `Σ_k C(n,k)² k!`.
pub fn symmetric_inverse_monoid_order(n: usize) -> usize {
    let binom =
        |n: usize, k: usize| -> usize { (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1)) };
    let fact = |k: usize| -> usize { (1..=k).product() };
    (0..=n).map(|k| binom(n, k) * binom(n, k) * fact(k)).sum()
}

/// The symmetric inverse monoid `I_n`, elements in lexicographic order of
/// their image arrays (undefined sorts last).
pub fn symmetric_inverse_monoid(n: usize) -> Result<BijectionSemigroup> {
    if n > MAX_SYMMETRIC_DEGREE {
        return Err(Error::TooLarge {
            what: "symmetric inverse monoid degree",
            size: n,
            bound: MAX_SYMMETRIC_DEGREE,
        });
    }
    // Each position takes a value in 0..n or UNDEFINED; keep the injective ones.
    let mut elements = Vec::new();
    let mut images = vec![0u8; n];
    fn rec(
        pos: usize,
        n: usize,
        used: &mut [bool],
        images: &mut Vec<u8>,
        out: &mut Vec<PartialBijection>,
    ) {
        if pos == n {
            out.push(PartialBijection {
                images: images.clone(),
            });
            return;
        }
        for y in 0..n {
            if !used[y] {
                used[y] = true;
                images[pos] = y as u8;
                rec(pos + 1, n, used, images, out);
                used[y] = false;
            }
        }
        images[pos] = UNDEFINED;
        rec(pos + 1, n, used, images, out);
    }
    rec(0, n, &mut vec![false; n], &mut images, &mut elements);
    BijectionSemigroup::from_elements(elements)
}

/// Closure of `gens ∪ gens⁻¹` under composition.
///
/// Elements are numbered in breadth-first discovery order (words of length
/// one, then two, …); within one round ties are broken by the lexicographic
/// order of the image arrays.
pub fn generate(degree: usize, gens: &[PartialBijection]) -> Result<BijectionSemigroup> {
    if gens.is_empty() {
        return Err(Error::Invalid("no generators".into()));
    }
    if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
        return Err(Error::DegreeMismatch {
            left: degree,
            right: g.degree(),
        });
    }
    let mut letters: Vec<PartialBijection> =
        gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
    letters.sort();
    letters.dedup();

    let mut seen: HashMap<PartialBijection, usize> = HashMap::new();
    let mut elements: Vec<PartialBijection> = Vec::new();
    let mut frontier = letters.clone();
    while !frontier.is_empty() {
        frontier.sort();
        frontier.dedup();
        let mut fresh = Vec::new();
        for f in frontier {
            if !seen.contains_key(&f) {
                seen.insert(f.clone(), elements.len());
                elements.push(f.clone());
                fresh.push(f);
            }
        }
        frontier = Vec::new();
        for f in &fresh {
            for g in &letters {
                let h = f.compose_unchecked(g);
                if !seen.contains_key(&h) {
                    frontier.push(h);
                }
            }
        }
    }
    BijectionSemigroup::from_elements(elements)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pb(degree: usize, graph: &[(usize, usize)]) -> PartialBijection {
        PartialBijection::new(degree, graph).unwrap()
    }

    #[test]
    fn composition_examples() {
        let id = PartialBijection::identity(2);
        let g = pb(2, &[(1, 0)]);
        assert_eq!(id.compose(&g).unwrap(), g);
        let f = pb(2, &[(0, 1)]);
        assert_eq!(f.compose(&g).unwrap(), pb(2, &[(1, 1)]));
        assert_eq!(
            f.compose(&f.inverse()).unwrap(),
            PartialBijection::identity_on(2, &f.range()).unwrap()
        );
        assert_eq!(
            f.compose(&PartialBijection::identity(3)),
            Err(Error::DegreeMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn rejects_non_injective_graphs() {
        assert!(PartialBijection::new(2, &[(0, 1), (1, 1)]).is_err());
        assert!(PartialBijection::new(2, &[(0, 1), (0, 0)]).is_err());
        assert!(PartialBijection::new(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn symmetric_inverse_monoid_orders() {
        for n in 0..=3 {
            let m = symmetric_inverse_monoid(n).unwrap();
            assert_eq!(m.semigroup.order(), symmetric_inverse_monoid_order(n));
        }
        assert_eq!(symmetric_inverse_monoid_order(2), 7);
        assert_eq!(symmetric_inverse_monoid_order(4), 209);
        let i2 = symmetric_inverse_monoid(2).unwrap();
        assert_eq!(i2.semigroup.idempotents().len(), 4);
        let i1 = symmetric_inverse_monoid(1).unwrap();
        assert!(i1.semigroup.is_semilattice());
        assert!(matches!(
            symmetric_inverse_monoid(5),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn generated_examples() {
        let triv = generate(2, &[PartialBijection::identity(2)]).unwrap();
        assert_eq!(triv.semigroup.order(), 1);
        let z2 = generate(2, &[pb(2, &[(0, 1), (1, 0)])]).unwrap();
        assert_eq!(z2.semigroup.order(), 2);
        assert!(z2.semigroup.is_group());
        let b2 = generate(2, &[pb(2, &[(0, 1)])]).unwrap();
        assert_eq!(b2.semigroup.order(), 5);
        assert_eq!(b2.semigroup.idempotents().len(), 3);
    }

    #[test]
    fn generation_is_deterministic() {
        let gens = [pb(3, &[(0, 1), (1, 2)]), pb(3, &[(2, 0)])];
        let a = generate(3, &gens).unwrap();
        let b = generate(3, &gens).unwrap();
        assert_eq!(a.elements, b.elements);
        assert_eq!(a.semigroup, b.semigroup);
    }

    #[test]
    fn json_shape() {
        let f = pb(3, &[(0, 2), (2, 1)]);
        let j = serde_json::to_string(&f.to_json()).unwrap();
        assert_eq!(j, r#"{"degree":3,"graph":[[0,2],[2,1]]}"#);
        let back: PartialBijectionJson = serde_json::from_str(&j).unwrap();
        assert_eq!(PartialBijection::from_json(&back).unwrap(), f);
    }
}
