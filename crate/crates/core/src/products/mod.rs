//! Products of an inverse semigroup `K` by an inverse semigroup `T`.
//!
//! Every construction interns its elements, assigns dense indices in a fixed
//! order and tabulates the product, so the result is an ordinary
//! [`InverseSemigroup`] that downstream code can treat like any other.

use std::hash::Hash;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::semigroup::{validate, FiniteSemigroup, InverseSemigroup};

pub mod lsd;
pub mod pfun;
pub mod rsd;
pub mod wreath;

pub use lsd::{
    build_lsd, induced_kernel_action, psi_lemma21, reduce_first_factor, KernelAction,
    KernelRepresentation, LambdaSemidirectProduct, ReducedFirstFactor,
};
pub use pfun::{PartialFunctionElement, PfunSemigroup, PfunSpace};
pub use rsd::{build_rsd, FullRestrictedSemidirectProduct};
pub use wreath::{build_hwr, build_hwr_eta, build_lwr, build_p_eta, HoughtonWreath, LambdaWreath};

/// Default bound on the number of elements a wreath product may have.
pub const DEFAULT_ELEMENT_CAP: usize = 20_000;

/// Largest carrier whose full multiplication table is materialized.
pub const TABLE_CAP: usize = 6144;

/// Element-to-index map of a construction.
pub(crate) type Index<E> = FxHashMap<E, usize>;

/// Indexes `elements` densely in the given order.
pub(crate) fn intern<E: Clone + Eq + Hash>(elements: &[E]) -> Index<E> {
    elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect()
}

/// Tabulates `mul` over `elements` and validates the result.
///
/// Fails with `TooLarge` above [`TABLE_CAP`] and with `Invalid` if the set is
/// not closed under `mul`.
pub(crate) fn tabulate<E, M, N>(
    what: &'static str,
    elements: &[E],
    index: &Index<E>,
    mul: M,
    name: N,
) -> Result<InverseSemigroup>
where
    E: Eq + Hash + Sync,
    M: Fn(&E, &E) -> E + Sync,
    N: Fn(&E) -> String,
{
    let n = elements.len();
    if n > TABLE_CAP {
        return Err(Error::TooLarge {
            what,
            size: n,
            bound: TABLE_CAP,
        });
    }
    let rows: Vec<Result<Vec<u32>>> = elements
        .par_iter()
        .map(|x| {
            elements
                .iter()
                .map(|y| {
                    index.get(&mul(x, y)).map(|&i| i as u32).ok_or_else(|| {
                        Error::Invalid(format!("{what} is not closed under its product"))
                    })
                })
                .collect()
        })
        .collect();
    let mut table = Vec::with_capacity(n * n);
    for row in rows {
        table.extend(row?);
    }
    let names = elements.iter().map(name).collect();
    let base = FiniteSemigroup::from_flat(n, table).with_names(names)?;
    validate(base)
}
