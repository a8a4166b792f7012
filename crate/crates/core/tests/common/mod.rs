//! Brute-force oracles shared by the integration tests. Each one works
//! straight from the multiplication table and the defining law, without
//! going through the library's own checks.

#![allow(dead_code)]

use std::collections::HashSet;

use invsemi::congruence::Congruence;
use invsemi::trhull::Bitranslation;
use invsemi::InverseSemigroup;

/// Associativity plus a unique inverse for every element.
pub fn inverse_semigroup_law(s: &InverseSemigroup) -> Result<(), String> {
    let n = s.order();
    for a in 0..n {
        for b in 0..n {
            let ab = s.mul(a, b);
            for c in 0..n {
                if s.mul(ab, c) != s.mul(a, s.mul(b, c)) {
                    return Err(format!("({a}{b}){c} != {a}({b}{c})"));
                }
            }
        }
    }
    for a in 0..n {
        let inverses: Vec<usize> = (0..n)
            .filter(|&b| s.mul(s.mul(a, b), a) == a && s.mul(s.mul(b, a), b) == b)
            .collect();
        if inverses.len() != 1 {
            return Err(format!("{a} has inverses {inverses:?}"));
        }
    }
    Ok(())
}

pub fn is_homomorphism(map: &[usize], s: &InverseSemigroup, t: &InverseSemigroup) -> bool {
    map.len() == s.order()
        && (0..s.order()).all(|a| (0..s.order()).all(|b| map[s.mul(a, b)] == t.mul(map[a], map[b])))
}

pub fn is_bijection(map: &[usize], target: usize) -> bool {
    map.len() == target
        && map.iter().collect::<HashSet<_>>().len() == target
        && map.iter().all(|&x| x < target)
}

pub fn idempotents(s: &InverseSemigroup) -> Vec<usize> {
    (0..s.order()).filter(|&x| s.mul(x, x) == x).collect()
}

/// `e ≤ f` for idempotents.
pub fn below(s: &InverseSemigroup, e: usize, f: usize) -> bool {
    s.mul(e, f) == e
}

/// Left and right translations that are linked.
pub fn is_bitranslation(s: &InverseSemigroup, w: &Bitranslation) -> bool {
    let n = s.order();
    (0..n).all(|x| {
        (0..n).all(|y| {
            w.left(s.mul(x, y)) == s.mul(w.left(x), y)
                && w.right(s.mul(x, y)) == s.mul(x, w.right(y))
                && s.mul(x, w.left(y)) == s.mul(w.right(x), y)
        })
    })
}

pub fn respects(s: &InverseSemigroup, w: &Bitranslation, theta: &Congruence) -> bool {
    let n = s.order();
    (0..n).all(|x| {
        (0..n).all(|y| {
            !theta.related(x, y)
                || (theta.related(w.left(x), w.left(y)) && theta.related(w.right(x), w.right(y)))
        })
    })
}

/// Union of the classes that contain an idempotent.
pub fn kernel_of(s: &InverseSemigroup, theta: &Congruence) -> Vec<usize> {
    let idem = idempotents(s);
    (0..s.order())
        .filter(|&x| idem.iter().any(|&e| theta.related(x, e)))
        .collect()
}

/// `e·a = a ⟺ ε(a) ≤ e` over all `a` and idempotent `e`.
pub fn afr(t: &InverseSemigroup, act: impl Fn(usize, usize) -> usize, eps: &[usize]) -> bool {
    let idem = idempotents(t);
    (0..eps.len()).all(|a| {
        idem.iter()
            .all(|&e| (act(e, a) == a) == below(t, eps[a], e))
    })
}
