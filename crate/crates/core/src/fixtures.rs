//! The built-in catalog of small inverse semigroups used by the verifier
//! sweeps and the tests.

use crate::error::{Error, Result};
use crate::pbij::{self, PartialBijection};
use crate::semigroup::InverseSemigroup;

/// A named catalog entry.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub semigroup: InverseSemigroup,
}

pub fn trivial() -> InverseSemigroup {
    InverseSemigroup::trivial()
}

/// The `n`-element chain `0 < 1 < … < n-1` under `min`.
pub fn chain(n: usize) -> InverseSemigroup {
    InverseSemigroup::from_fn(n, |a, b| a.min(b)).expect("chain")
}

/// The cyclic group `Z_n` under addition.
pub fn cyclic(n: usize) -> InverseSemigroup {
    InverseSemigroup::from_fn(n, |a, b| (a + b) % n).expect("cyclic group")
}

/// The five-element Brandt semigroup, realized by the partial bijection `0 ↦ 1`.
pub fn b2() -> InverseSemigroup {
    pbij::generate(2, &[PartialBijection::new(2, &[(0, 1)]).unwrap()])
        .expect("B2")
        .semigroup
}

/// `B₂` with an identity adjoined.
pub fn b2_with_identity() -> InverseSemigroup {
    pbij::generate(
        2,
        &[
            PartialBijection::new(2, &[(0, 1)]).unwrap(),
            PartialBijection::identity(2),
        ],
    )
    .expect("B2 with identity")
    .semigroup
}

pub fn symmetric_inverse_monoid(n: usize) -> InverseSemigroup {
    pbij::symmetric_inverse_monoid(n).expect("I_n").semigroup
}

/// The 2×2 Boolean lattice.
pub fn boolean2() -> InverseSemigroup {
    chain(2).direct_product(&chain(2))
}

/// A Clifford semigroup given as a strong semilattice of groups.
///
/// `groups[e]` is the group sitting over the idempotent `e` of the
/// semilattice `lattice`, and `structure(e, f, g)` gives the image of `g ∈
/// groups[e]` in `groups[f]` for `f ≤ e`. Element `(e, g)` gets index
/// `offset[e] + g`.
pub fn clifford(
    lattice: &InverseSemigroup,
    groups: &[InverseSemigroup],
    structure: impl Fn(usize, usize, usize) -> usize,
) -> Result<InverseSemigroup> {
    if !lattice.is_semilattice() {
        return Err(Error::Invalid(
            "index structure must be a semilattice".into(),
        ));
    }
    if groups.len() != lattice.order() || groups.iter().any(|g| !g.is_group()) {
        return Err(Error::Invalid("one group per semilattice element".into()));
    }
    let mut offset = Vec::with_capacity(groups.len());
    let mut pairs = Vec::new();
    for (e, g) in groups.iter().enumerate() {
        offset.push(pairs.len());
        pairs.extend((0..g.order()).map(|x| (e, x)));
    }
    InverseSemigroup::from_fn(pairs.len(), |i, j| {
        let (e, a) = pairs[i];
        let (f, b) = pairs[j];
        let ef = lattice.mul(e, f);
        let x = structure(e, ef, a);
        let y = structure(f, ef, b);
        offset[ef] + groups[ef].mul(x, y)
    })
}

/// `Z₂` with a zero adjoined: `Z₂` over the top of a 2-chain, trivial group
/// at the bottom.
pub fn z2_with_zero() -> InverseSemigroup {
    let groups = [trivial(), cyclic(2)];
    clifford(&chain(2), &groups, |e, f, a| if e == f { a } else { 0 }).expect("Z2 with zero")
}

/// `Z₂` with an identity adjoined: trivial group on top, `Z₂` at the bottom.
pub fn z2_with_identity() -> InverseSemigroup {
    let groups = [cyclic(2), trivial()];
    clifford(&chain(2), &groups, |_, _, a| a).expect("Z2 with identity")
}

/// `Z₂ × 2-chain` as a Clifford semigroup with identity structure map.
pub fn z2_times_chain2() -> InverseSemigroup {
    let groups = [cyclic(2), cyclic(2)];
    clifford(&chain(2), &groups, |_, _, a| a).expect("Z2 x chain2")
}

/// The full catalog, ordered by size.
pub fn catalog() -> Vec<Fixture> {
    let mut all = vec![
        Fixture {
            name: "trivial".into(),
            semigroup: trivial(),
        },
        Fixture {
            name: "chain2".into(),
            semigroup: chain(2),
        },
        Fixture {
            name: "z2".into(),
            semigroup: cyclic(2),
        },
        Fixture {
            name: "chain3".into(),
            semigroup: chain(3),
        },
        Fixture {
            name: "z3".into(),
            semigroup: cyclic(3),
        },
        Fixture {
            name: "z2-zero".into(),
            semigroup: z2_with_zero(),
        },
        Fixture {
            name: "z2-one".into(),
            semigroup: z2_with_identity(),
        },
        Fixture {
            name: "boolean2".into(),
            semigroup: boolean2(),
        },
        Fixture {
            name: "chain4".into(),
            semigroup: chain(4),
        },
        Fixture {
            name: "z2xchain2".into(),
            semigroup: z2_times_chain2(),
        },
        Fixture {
            name: "b2".into(),
            semigroup: b2(),
        },
        Fixture {
            name: "b2-one".into(),
            semigroup: b2_with_identity(),
        },
        Fixture {
            name: "i2".into(),
            semigroup: symmetric_inverse_monoid(2),
        },
    ];
    all.sort_by_key(|f| f.semigroup.order());
    all
}

/// Catalog entries of order at most `max_order`.
pub fn catalog_up_to(max_order: usize) -> Vec<Fixture> {
    catalog()
        .into_iter()
        .filter(|f| f.semigroup.order() <= max_order)
        .collect()
}

pub fn by_name(name: &str) -> Option<InverseSemigroup> {
    catalog()
        .into_iter()
        .find(|f| f.name == name)
        .map(|f| f.semigroup)
}
