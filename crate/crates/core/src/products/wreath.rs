//! Houghton's wreath product, its restriction along a normal extension
//! triple, and the λ-wreath product.

use std::collections::HashMap;

use crate::action::EndoAction;
use crate::error::{Error, Result};
use crate::morphism::NormalExtensionTriple;
use crate::products::pfun::{PartialFunctionElement, PfunSemigroup, PfunSpace};
use crate::products::{intern, tabulate, Index, DEFAULT_ELEMENT_CAP, TABLE_CAP};
use crate::semigroup::{ElementSet, InverseSemigroup};

pub type HwrElement = (PartialFunctionElement, usize);
pub type LwrElement = (Vec<u32>, usize);

/// `K Wr T = {(α, t) : Hdom α = T ran(t)}` with
/// `(α,t)(β,u) = (α ⊕ t·β, tu)`.
///
/// Elements are ordered by `t`, then by the value list of `α`. The table is
/// materialized only up to [`TABLE_CAP`] elements; the element-level
/// operations work at any size.
#[derive(Clone, Debug)]
pub struct HoughtonWreath {
    space: PfunSpace,
    elements: Vec<HwrElement>,
    index: Index<HwrElement>,
    semigroup: Option<InverseSemigroup>,
    /// Present when built along a triple.
    classes: Option<Vec<ElementSet>>,
}

pub fn build_hwr(k: &InverseSemigroup, t: &InverseSemigroup) -> Result<HoughtonWreath> {
    build_hwr_capped(k, t, DEFAULT_ELEMENT_CAP)
}

pub fn build_hwr_capped(
    k: &InverseSemigroup,
    t: &InverseSemigroup,
    cap: usize,
) -> Result<HoughtonWreath> {
    HoughtonWreath::build(PfunSpace::new(k.clone(), t.clone()), None, cap)
}

/// `P^η = {α : α(x) ∈ K_{ran(x)}}`, materialized.
pub fn build_p_eta(triple: &NormalExtensionTriple) -> Result<PfunSemigroup> {
    let space = PfunSpace::new(triple.k.clone(), triple.t.clone());
    space.materialize(Some(&triple.classes()), TABLE_CAP)
}

/// Houghton's wreath product along `η`: the pairs `(α, t)` with `α ∈ P^η`.
pub fn build_hwr_eta(triple: &NormalExtensionTriple) -> Result<HoughtonWreath> {
    let space = PfunSpace::new(triple.k.clone(), triple.t.clone());
    HoughtonWreath::build(space, Some(triple.classes()), DEFAULT_ELEMENT_CAP)
}

impl HoughtonWreath {
    fn build(space: PfunSpace, classes: Option<Vec<ElementSet>>, cap: usize) -> Result<Self> {
        let t = space.t().clone();
        if classes.is_none() {
            let count = (0..t.order()).try_fold(0usize, |acc, x| {
                acc.checked_add(space.count_with_domain(t.ran(x))?)
            });
            match count {
                Some(n) if n <= cap => {}
                _ => {
                    return Err(Error::TooLarge {
                        what: "Houghton wreath product",
                        size: count.unwrap_or(usize::MAX),
                        bound: cap,
                    })
                }
            }
        }
        let mut by_domain: HashMap<usize, Vec<PartialFunctionElement>> = HashMap::new();
        let mut elements = Vec::new();
        for x in 0..t.order() {
            let r = t.ran(x);
            let fs = by_domain
                .entry(r)
                .or_insert_with(|| space.functions(r, classes.as_deref()));
            elements.extend(fs.iter().cloned().map(|a| (a, x)));
            if elements.len() > cap {
                return Err(Error::TooLarge {
                    what: "Houghton wreath product",
                    size: elements.len(),
                    bound: cap,
                });
            }
        }
        let index = intern(&elements);
        let mut out = Self {
            space,
            elements,
            index,
            semigroup: None,
            classes,
        };
        if out.elements.len() <= TABLE_CAP {
            let sg = tabulate(
                "Houghton wreath product",
                &out.elements,
                &out.index,
                |p, q| out.mul(p, q),
                |(a, x)| format!("({},{})", out.space.label(a), out.space.t().name(*x)),
            )?;
            out.semigroup = Some(sg);
        }
        Ok(out)
    }

    /// A handle for element-level products only; no elements are listed.
    pub fn operations_only(space: PfunSpace, classes: Option<Vec<ElementSet>>) -> Self {
        Self {
            space,
            elements: Vec::new(),
            index: Index::default(),
            semigroup: None,
            classes,
        }
    }

    /// Membership test that does not need the element list.
    pub fn contains(&self, (alpha, t): &HwrElement) -> bool {
        let ts = self.space.t();
        if alpha.generator != ts.ran(*t)
            || alpha.values.len() != self.space.domain(alpha.generator).len()
        {
            return false;
        }
        match &self.classes {
            None => true,
            Some(cl) => self
                .space
                .domain(alpha.generator)
                .iter()
                .zip(&alpha.values)
                .all(|(&x, &a)| cl[ts.ran(x)].contains(a as usize)),
        }
    }

    pub fn space(&self) -> &PfunSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[HwrElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &HwrElement {
        &self.elements[i]
    }

    pub fn index_of(&self, e: &HwrElement) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn is_along_triple(&self) -> bool {
        self.classes.is_some()
    }

    /// The materialized table, or `TooLarge` above [`TABLE_CAP`].
    pub fn semigroup(&self) -> Result<&InverseSemigroup> {
        self.semigroup.as_ref().ok_or(Error::TooLarge {
            what: "Houghton wreath product table",
            size: self.elements.len(),
            bound: TABLE_CAP,
        })
    }

    /// `α ⊕ t·β` evaluated pointwise on `T ran(tu)`.
    pub fn mul(&self, (alpha, t): &HwrElement, (beta, u): &HwrElement) -> HwrElement {
        let s = &self.space;
        let (ts, k) = (s.t(), s.k());
        let tu = ts.mul(*t, *u);
        let value = |x: usize| {
            let a = s.eval(alpha, x).expect("x ∈ T ran t");
            let b = s.eval(beta, ts.mul(x, *t)).expect("xt ∈ T ran u");
            k.mul(a, b)
        };
        (s.from_fn(ts.ran(tu), value), tu)
    }

    /// `(t⁻¹·α⁻¹, t⁻¹)`
    pub fn inverse(&self, (alpha, t): &HwrElement) -> HwrElement {
        let ti = self.space.t().inv(*t);
        (self.space.act(ti, &self.space.inverse(alpha)), ti)
    }
}

/// `K^T ⋊^λ T` with `(t·f)(x) = f(xt)`: pairs `(f, t)` with
/// `f(x) = f(x ran t)` for all `x`.
#[derive(Clone, Debug)]
pub struct LambdaWreath {
    k: InverseSemigroup,
    t: InverseSemigroup,
    elements: Vec<LwrElement>,
    index: Index<LwrElement>,
    semigroup: Option<InverseSemigroup>,
}

/// All of `K^T` in lexicographic order, or `TooLarge` above `cap`.
fn all_functions(k: &InverseSemigroup, t: &InverseSemigroup, cap: usize) -> Result<Vec<Vec<u32>>> {
    let total = k
        .order()
        .checked_pow(t.order() as u32)
        .filter(|&n| n <= cap);
    let Some(total) = total else {
        return Err(Error::TooLarge {
            what: "function space K^T",
            size: k.order().saturating_pow(t.order() as u32),
            bound: cap,
        });
    };
    let (m, n) = (k.order(), t.order());
    Ok((0..total)
        .map(|mut code| {
            let mut f = vec![0u32; n];
            for slot in f.iter_mut().rev() {
                *slot = (code % m) as u32;
                code /= m;
            }
            f
        })
        .collect())
}

pub fn build_lwr(k: &InverseSemigroup, t: &InverseSemigroup) -> Result<LambdaWreath> {
    let functions = all_functions(k, t, DEFAULT_ELEMENT_CAP)?;
    let mut elements = Vec::new();
    for x in 0..t.order() {
        let r = t.ran(x);
        elements.extend(
            functions
                .iter()
                .filter(|f| (0..t.order()).all(|y| f[y] == f[t.mul(y, r)]))
                .map(|f| (f.clone(), x)),
        );
    }
    let index = intern(&elements);
    let mut out = LambdaWreath {
        k: k.clone(),
        t: t.clone(),
        elements,
        index,
        semigroup: None,
    };
    if out.elements.len() <= TABLE_CAP {
        let sg = tabulate(
            "λ-wreath product",
            &out.elements,
            &out.index,
            |p, q| out.mul(p, q),
            |(f, x)| {
                let vals: Vec<String> = f.iter().map(|&a| k.name(a as usize)).collect();
                format!("([{}],{})", vals.join(","), t.name(*x))
            },
        )?;
        out.semigroup = Some(sg);
    }
    Ok(out)
}

impl LambdaWreath {
    /// A handle for element-level products only; no elements are listed.
    pub fn operations_only(k: &InverseSemigroup, t: &InverseSemigroup) -> Self {
        Self {
            k: k.clone(),
            t: t.clone(),
            elements: Vec::new(),
            index: Index::default(),
            semigroup: None,
        }
    }

    /// `f(x) = f(x ran t)` for all `x`.
    pub fn contains(&self, (f, t): &LwrElement) -> bool {
        let r = self.t.ran(*t);
        f.len() == self.t.order() && (0..self.t.order()).all(|x| f[x] == f[self.t.mul(x, r)])
    }

    pub fn k(&self) -> &InverseSemigroup {
        &self.k
    }

    pub fn t(&self) -> &InverseSemigroup {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[LwrElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &LwrElement {
        &self.elements[i]
    }

    pub fn index_of(&self, e: &LwrElement) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn semigroup(&self) -> Result<&InverseSemigroup> {
        self.semigroup.as_ref().ok_or(Error::TooLarge {
            what: "λ-wreath product table",
            size: self.elements.len(),
            bound: TABLE_CAP,
        })
    }

    /// `(t·f)(x) = f(xt)`
    pub fn act(&self, t: usize, f: &[u32]) -> Vec<u32> {
        (0..self.t.order()).map(|x| f[self.t.mul(x, t)]).collect()
    }

    pub fn mul(&self, (f, t): &LwrElement, (g, u): &LwrElement) -> LwrElement {
        let tu = self.t.mul(*t, *u);
        let r = self.t.ran(tu);
        let h = (0..self.t.order())
            .map(|x| {
                self.k
                    .mul(f[self.t.mul(x, r)] as usize, g[self.t.mul(x, *t)] as usize)
                    as u32
            })
            .collect();
        (h, tu)
    }

    /// `Ψ(f, t) = (f|_{T ran t}, t)`
    pub fn restrict(&self, space: &PfunSpace, (f, t): &LwrElement) -> HwrElement {
        (space.from_fn(self.t.ran(*t), |x| f[x] as usize), *t)
    }

    /// `(h, t) ↦ (h̄, t)` with `h̄(x) = h(x ran t)`.
    pub fn extend(&self, space: &PfunSpace, (h, t): &HwrElement) -> LwrElement {
        let r = self.t.ran(*t);
        let f = (0..self.t.order())
            .map(|x| space.eval(h, self.t.mul(x, r)).expect("x ran t ∈ T ran t") as u32)
            .collect();
        (f, *t)
    }
}

/// The direct power `K^T` with the action `(t·f)(x) = f(xt)`, for checking
/// that the λ-wreath product is a λ-semidirect product.
pub fn power_action(
    k: &InverseSemigroup,
    t: &InverseSemigroup,
    cap: usize,
) -> Result<(Vec<Vec<u32>>, EndoAction)> {
    let functions = all_functions(k, t, cap.min(TABLE_CAP))?;
    let index = intern(&functions);
    let power = tabulate(
        "function space K^T",
        &functions,
        &index,
        |f, g| {
            f.iter()
                .zip(g)
                .map(|(&a, &b)| k.mul(a as usize, b as usize) as u32)
                .collect()
        },
        |f| format!("{f:?}"),
    )?;
    let rows: Vec<Vec<usize>> = (0..t.order())
        .map(|x| {
            functions
                .iter()
                .map(|f| index[&(0..t.order()).map(|y| f[t.mul(y, x)]).collect::<Vec<_>>()])
                .collect()
        })
        .collect();
    let action = EndoAction::validate(t.clone(), power, &rows)?;
    Ok((functions, action))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::products::{build_lsd, build_rsd};

    #[test]
    fn trivial_k_gives_t() {
        let t = fixtures::b2();
        let h = build_hwr(&fixtures::trivial(), &t).unwrap();
        assert_eq!(h.semigroup().unwrap().rows(), t.rows());
        let l = build_lwr(&fixtures::trivial(), &t).unwrap();
        assert_eq!(l.semigroup().unwrap().rows(), t.rows());
    }

    #[test]
    fn hwr_is_rsd_over_pfun() {
        for (k, t) in [
            (fixtures::cyclic(2), fixtures::chain(2)),
            (fixtures::chain(2), fixtures::b2()),
            (fixtures::cyclic(2), fixtures::z2_with_zero()),
        ] {
            let h = build_hwr(&k, &t).unwrap();
            let expected: usize = (0..t.order())
                .map(|x| k.order().pow(t.principal_left_ideal(t.ran(x)).len() as u32))
                .sum();
            assert_eq!(h.len(), expected);
            let p = PfunSpace::new(k.clone(), t.clone())
                .materialize(None, 4096)
                .unwrap();
            let r = build_rsd(&p.action, &p.eps).unwrap();
            let paired: Vec<HwrElement> = r
                .pairs()
                .iter()
                .map(|&(a, x)| (p.elements[a].clone(), x))
                .collect();
            assert_eq!(paired, h.elements());
            assert_eq!(r.semigroup.rows(), h.semigroup().unwrap().rows());
        }
    }

    #[test]
    fn lwr_matches_hwr_under_restriction() {
        let (k, t) = (fixtures::cyclic(2), fixtures::chain(2));
        let h = build_hwr(&k, &t).unwrap();
        let l = build_lwr(&k, &t).unwrap();
        assert_eq!(h.len(), l.len());
        let psi: Vec<usize> = l
            .elements()
            .iter()
            .map(|e| h.index_of(&l.restrict(h.space(), e)).unwrap())
            .collect();
        let (hs, ls) = (h.semigroup().unwrap(), l.semigroup().unwrap());
        for i in 0..l.len() {
            for j in 0..l.len() {
                assert_eq!(psi[ls.mul(i, j)], hs.mul(psi[i], psi[j]));
            }
        }
        for e in h.elements() {
            assert_eq!(&l.restrict(h.space(), &l.extend(h.space(), e)), e);
        }
    }

    #[test]
    fn lwr_is_lsd_of_power() {
        let (k, t) = (fixtures::cyclic(2), fixtures::chain(2));
        let (functions, action) = power_action(&k, &t, 4096).unwrap();
        let p = build_lsd(&action).unwrap();
        let l = build_lwr(&k, &t).unwrap();
        let paired: Vec<LwrElement> = p
            .pairs()
            .iter()
            .map(|&(f, x)| (functions[f].clone(), x))
            .collect();
        assert_eq!(paired, l.elements());
        assert_eq!(p.semigroup.rows(), l.semigroup().unwrap().rows());
    }

    #[test]
    fn p_eta_for_idempotent_kernel() {
        let t = fixtures::b2();
        let e = t.restrict(&t.idempotent_set()).unwrap();
        let triple =
            NormalExtensionTriple::new(e.semigroup.clone(), t.clone(), e.embedding.clone())
                .unwrap();
        let p = build_p_eta(&triple).unwrap();
        assert_eq!(p.elements.len(), t.idempotents().len());
        assert!(p.semigroup.is_semilattice());
        let h = build_hwr_eta(&triple).unwrap();
        assert_eq!(h.len(), t.order());
    }
}
