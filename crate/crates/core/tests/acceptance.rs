//! Acceptance suite: one PASS/FAIL line per criterion. Each criterion is
//! checked against brute-force oracles from `common`, on top of the
//! library's own verdicts.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use invsemi::action::{
    check_ae7_ae8, check_afr, check_modified, enumerate_actions, enumerate_epsilons,
    strong_semilattice, EndoAction, EpsilonMap,
};
use invsemi::billhardt::{
    find_transversal, theorem310_backward, theorem310_forward, thm42_embedding,
};
use invsemi::congruence::{
    enumerate_by_closure, enumerate_by_partitions, enumerate_congruences, kernel, CLOSURE_BOUND,
};
use invsemi::fixtures::{catalog, Fixture};
use invsemi::morphism::{solution_embedding, EmbeddingKind, ExtensionSolution};
use invsemi::products::{
    build_hwr, build_lsd, build_lwr, build_rsd, psi_lemma21, FullRestrictedSemidirectProduct,
};
use invsemi::trhull::{
    bracket_identities_check, enumerate_bitranslations, hull_of_extension, naive_bitranslations,
    omega_bracket, restriction_to_quotient_check, Bitranslation, HULL_BOUND,
};
use invsemi::InverseSemigroup;

use common::*;

type Verdict = Result<String, String>;
type Criterion = (&'static str, Option<u64>, fn() -> Verdict);

fn small(max: usize) -> Vec<Fixture> {
    catalog()
        .into_iter()
        .filter(|f| f.semigroup.order() <= max)
        .collect()
}

fn pairs(max: usize) -> Vec<(Fixture, Fixture)> {
    let cat = small(max);
    cat.iter()
        .flat_map(|t| cat.iter().map(move |k| (t.clone(), k.clone())))
        .collect()
}

/// Every surjective homomorphism `K → E(T)`, by scanning all maps.
fn epsilons_oracle(k: &InverseSemigroup, t: &InverseSemigroup) -> Vec<Vec<usize>> {
    let idem = idempotents(t);
    let n = k.order();
    let mut out = Vec::new();
    for code in 0..idem.len().pow(n as u32) {
        let mut c = code;
        let map: Vec<usize> = (0..n)
            .map(|_| {
                let e = idem[c % idem.len()];
                c /= idem.len();
                e
            })
            .collect();
        let onto = idem.iter().all(|e| map.contains(e));
        if onto && is_homomorphism(&map, k, t) {
            out.push(map);
        }
    }
    out
}

struct AfrCase {
    name: String,
    action: EndoAction,
    eps: EpsilonMap,
}

fn actions_up_to(max: usize) -> Vec<(String, EndoAction)> {
    let mut out = Vec::new();
    for (t, k) in pairs(max) {
        for (i, a) in enumerate_actions(&t.semigroup, &k.semigroup)
            .into_iter()
            .enumerate()
        {
            out.push((format!("{} on {} #{i}", t.name, k.name), a));
        }
    }
    out
}

fn afr_cases(max: usize) -> Vec<AfrCase> {
    let mut out = Vec::new();
    for (name, action) in actions_up_to(max) {
        let (k, t) = (action.acted_on().clone(), action.acting().clone());
        for (j, map) in epsilons_oracle(&k, &t).into_iter().enumerate() {
            if afr(&t, |x, a| action.act(x, a), &map) {
                let eps = EpsilonMap::new(&action, map).expect("oracle ε is valid");
                out.push(AfrCase {
                    name: format!("{name} ε{j}"),
                    action: action.clone(),
                    eps,
                });
            }
        }
    }
    out
}

fn rsd_pair_law(p: &FullRestrictedSemidirectProduct, name: &str) -> Result<(), String> {
    let (k, t, action, eps) = (p.k(), p.t(), p.action(), p.eps());
    let expected: BTreeSet<(usize, usize)> = (0..k.order())
        .flat_map(|a| (0..t.order()).map(move |x| (a, x)))
        .filter(|&(a, x)| eps.apply(a) == t.ran(x))
        .collect();
    let got: BTreeSet<(usize, usize)> = p.pairs().iter().copied().collect();
    if got != expected {
        return Err(format!("{name}: carrier differs"));
    }
    for i in 0..p.pairs().len() {
        for j in 0..p.pairs().len() {
            let ((a, x), (b, u)) = (p.pair(i), p.pair(j));
            let want = (k.mul(a, action.act(x, b)), t.mul(x, u));
            if p.pair(p.semigroup.mul(i, j)) != want {
                return Err(format!("{name}: product of {i} and {j}"));
            }
        }
    }
    inverse_semigroup_law(&p.semigroup).map_err(|e| format!("{name}: {e}"))
}

fn construction_soundness() -> Verdict {
    let actions = actions_up_to(4);
    for (name, action) in &actions {
        let (k, t) = (action.acted_on(), action.acting());
        let p = build_lsd(action).map_err(|e| format!("{name}: {e}"))?;
        let expected: BTreeSet<(usize, usize)> = (0..k.order())
            .flat_map(|a| (0..t.order()).map(move |x| (a, x)))
            .filter(|&(a, x)| action.act(t.ran(x), a) == a)
            .collect();
        if p.pairs().iter().copied().collect::<BTreeSet<_>>() != expected {
            return Err(format!("{name}: λ-semidirect carrier differs"));
        }
        for i in 0..p.pairs().len() {
            for j in 0..p.pairs().len() {
                let ((a, x), (b, u)) = (p.pair(i), p.pair(j));
                let xu = t.mul(x, u);
                let want = (k.mul(action.act(t.ran(xu), a), action.act(x, b)), xu);
                if p.pair(p.semigroup.mul(i, j)) != want {
                    return Err(format!("{name}: λ-semidirect product of {i} and {j}"));
                }
            }
        }
        inverse_semigroup_law(&p.semigroup).map_err(|e| format!("{name}: {e}"))?;
    }
    let afr = afr_cases(4);
    for c in &afr {
        let p = build_rsd(&c.action, &c.eps).map_err(|e| format!("{}: {e}", c.name))?;
        rsd_pair_law(&p, &c.name)?;
    }
    Ok(format!(
        "{} λ-semidirect, {} full restricted",
        actions.len(),
        afr.len()
    ))
}

fn kernel_formulas() -> Verdict {
    let mut count = 0;
    for (name, action) in actions_up_to(4) {
        let (k, t) = (action.acted_on(), action.acting());
        let p = build_lsd(&action).map_err(|e| e.to_string())?;
        let by_library: BTreeSet<usize> = kernel(&p.semigroup, &p.projection_congruence())
            .iter()
            .collect();
        let by_oracle: BTreeSet<usize> = kernel_of(&p.semigroup, &p.projection_congruence())
            .into_iter()
            .collect();
        let formula: BTreeSet<usize> = idempotents(t)
            .into_iter()
            .flat_map(|e| {
                let action = &action;
                (0..k.order()).map(move |b| (action.act(e, b), e))
            })
            .map(|(a, e)| p.index_of(a, e).expect("e·b is fixed by e"))
            .collect();
        if formula != by_library || formula != by_oracle {
            return Err(format!("{name}: e·K × {{e}} differs from the Kernel"));
        }
        count += 1;
    }
    for c in afr_cases(4) {
        let p = build_rsd(&c.action, &c.eps).map_err(|e| e.to_string())?;
        let t = p.t();
        let by_library: BTreeSet<usize> = kernel(&p.semigroup, &p.projection_congruence())
            .iter()
            .collect();
        let formula: BTreeSet<usize> = (0..p.k().order())
            .filter(|&a| t.is_idempotent(c.eps.apply(a)))
            .map(|a| {
                p.index_of(a, c.eps.apply(a))
                    .expect("(a, ε(a)) is in the product")
            })
            .collect();
        if formula != by_library {
            return Err(format!("{}: K_e × {{e}} differs from the Kernel", c.name));
        }
        count += 1;
    }
    Ok(format!("{count} products"))
}

fn lambda_to_restricted() -> Verdict {
    let actions = actions_up_to(4);
    for (name, action) in &actions {
        let p = build_lsd(action).map_err(|e| e.to_string())?;
        let rep = psi_lemma21(&p).map_err(|e| format!("{name}: {e}"))?;
        let psi = rep.psi.map();
        if !is_bijection(psi, rep.rsd.semigroup.order()) {
            return Err(format!("{name}: ψ is not bijective"));
        }
        if !is_homomorphism(psi, &p.semigroup, &rep.rsd.semigroup) {
            return Err(format!("{name}: ψ is not a homomorphism"));
        }
        let v = solution_embedding(
            psi,
            &p.solution(),
            &rep.rsd.solution(),
            EmbeddingKind::Isomorphism,
        )
        .map_err(|e| format!("{name}: {e}"))?;
        if !v.holds() {
            return Err(format!("{name}: {v:?}"));
        }
    }
    Ok(format!("{} λ-semidirect products", actions.len()))
}

fn afr_equivalences() -> Verdict {
    let mut cases = 0;
    for (name, action) in actions_up_to(3) {
        let (k, t) = (action.acted_on(), action.acting());
        let oracle = epsilons_oracle(k, t);
        let library: Vec<Vec<usize>> = enumerate_epsilons(k, t)
            .iter()
            .map(|e| e.map().to_vec())
            .collect();
        if oracle.iter().collect::<BTreeSet<_>>() != library.iter().collect::<BTreeSet<_>>() {
            return Err(format!("{name}: ε enumeration differs from the scan"));
        }
        for map in oracle {
            let eps = EpsilonMap::new(&action, map.clone()).map_err(|e| e.to_string())?;
            let by_oracle = afr(t, |x, a| action.act(x, a), &map);
            let a = check_afr(&action, &eps).is_ok();
            let b = check_ae7_ae8(&action, &eps).is_ok();
            let c = check_modified(&action, &eps.classes(t.order())).is_ok();
            if !(by_oracle == a && a == b && b == c) {
                return Err(format!(
                    "{name} ε={map:?}: oracle={by_oracle}, AFR={a}, AE7+AE8={b}, modified={c}"
                ));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} (action, ε) pairs"))
}

fn strong_semilattices() -> Verdict {
    let cases = afr_cases(4);
    for c in &cases {
        let (k, t) = (c.action.acted_on(), c.action.acting());
        let sl = strong_semilattice(&c.action, &c.eps).map_err(|e| format!("{}: {e}", c.name))?;
        let map_of = |e: usize, f: usize, a: usize| -> Option<usize> {
            sl.maps
                .get(&(e, f))?
                .iter()
                .find(|&&(x, _)| x == a)
                .map(|&(_, y)| y)
        };
        let idem = idempotents(t);
        let mut covered = 0;
        for &e in &idem {
            for a in sl.classes[e].iter() {
                covered += 1;
                if map_of(e, e, a) != Some(a) {
                    return Err(format!("{}: ε_{{{e},{e}}} moves {a}", c.name));
                }
            }
        }
        if covered != k.order() {
            return Err(format!("{}: classes do not partition K", c.name));
        }
        for &e in &idem {
            for &f in idem.iter().filter(|&&f| below(t, f, e)) {
                for &g in idem.iter().filter(|&&g| below(t, g, f)) {
                    for a in sl.classes[e].iter() {
                        let two_step = map_of(e, f, a).and_then(|b| map_of(f, g, b));
                        if two_step != map_of(e, g, a) {
                            return Err(format!(
                                "{}: ε_{{{f},{g}}}ε_{{{e},{f}}} != ε_{{{e},{g}}} at {a}",
                                c.name
                            ));
                        }
                    }
                }
            }
        }
        for &e in &idem {
            for &f in &idem {
                let ef = t.mul(e, f);
                for a in sl.classes[e].iter() {
                    for b in sl.classes[f].iter() {
                        let rebuilt = map_of(e, ef, a)
                            .zip(map_of(f, ef, b))
                            .map(|(x, y)| k.mul(x, y));
                        if rebuilt != Some(k.mul(a, b)) {
                            return Err(format!("{}: {a}*{b} is not recovered", c.name));
                        }
                    }
                }
            }
        }
        sl.verify(k, t).map_err(|e| format!("{}: {e}", c.name))?;
    }
    Ok(format!("{} (AFR) pairs", cases.len()))
}

fn hull_structure() -> Verdict {
    let mut cases = 0;
    for f in small(6) {
        for theta in enumerate_congruences(&f.semigroup).map_err(|e| e.to_string())? {
            let s = &f.semigroup;
            let sol =
                ExtensionSolution::new(s.clone(), theta.clone()).map_err(|e| e.to_string())?;
            let eh = hull_of_extension(&sol).map_err(|e| e.to_string())?;
            restriction_to_quotient_check(&eh).map_err(|e| format!("{}: {e}", f.name))?;
            let q = sol.quotient().order();
            if eh.down.iter().collect::<HashSet<_>>().len() != q {
                return Err(format!("{}: restriction is not onto the quotient", f.name));
            }
            let m = eh.order();
            let members: Vec<&Bitranslation> = (0..m).map(|i| eh.element(i)).collect();
            for w in &members {
                if !is_bitranslation(s, w) || !respects(s, w, &theta) {
                    return Err(format!(
                        "{}: a member of Ω(S,θ) is not a θ-respecting bitranslation",
                        f.name
                    ));
                }
            }
            for i in 0..m {
                for j in i + 1..m {
                    let (a, b) = (members[i], members[j]);
                    let related = (0..s.order()).all(|x| {
                        theta.related(a.left(x), b.left(x)) && theta.related(a.right(x), b.right(x))
                    });
                    if related != (eh.down[i] == eh.down[j]) {
                        return Err(format!(
                            "{}: kernel of restriction differs from Ω(θ) at ({i}, {j})",
                            f.name
                        ));
                    }
                }
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} (S, θ) pairs"))
}

fn brackets() -> Verdict {
    let cases = afr_cases(4);
    for c in &cases {
        let p = build_rsd(&c.action, &c.eps).map_err(|e| e.to_string())?;
        let s = &p.semigroup;
        let t = p.t();
        let theta = p.projection_congruence();
        let ws: Vec<Bitranslation> = (0..t.order()).map(|x| omega_bracket(&p, x)).collect();
        for (x, w) in ws.iter().enumerate() {
            if !is_bitranslation(s, w) || !respects(s, w, &theta) {
                return Err(format!(
                    "{}: ω_[{x}] is not a θ-respecting bitranslation",
                    c.name
                ));
            }
            for i in 0..s.order() {
                let u = p.pair(i).1;
                if p.pair(w.left(i)).1 != t.mul(x, u) || p.pair(w.right(i)).1 != t.mul(u, x) {
                    return Err(format!("{}: ω_[{x}] does not restrict to ω_{x}", c.name));
                }
            }
        }
        if ws.iter().collect::<HashSet<_>>().len() != ws.len() {
            return Err(format!("{}: t ↦ ω_[t] is not injective", c.name));
        }
        for x in 0..t.order() {
            for u in 0..t.order() {
                if ws[t.mul(x, u)] != ws[x].compose(&ws[u]) {
                    return Err(format!("{}: ω_[{x}{u}] != ω_[{x}]ω_[{u}]", c.name));
                }
            }
        }
        bracket_identities_check(&p).map_err(|e| format!("{}: {e}", c.name))?;
    }
    Ok(format!("{} full restricted products", cases.len()))
}

fn round_trip() -> Verdict {
    let mut count = 0;
    for c in afr_cases(4) {
        let p = build_rsd(&c.action, &c.eps).map_err(|e| e.to_string())?;
        if p.semigroup.order() > 20 {
            continue;
        }
        let (sol, xi) = theorem310_forward(&p).map_err(|e| format!("{}: {e}", c.name))?;
        let rec = theorem310_backward(&sol, &xi).map_err(|e| format!("{}: {e}", c.name))?;
        if !rec.verdict.holds() {
            return Err(format!("{}: {:?}", c.name, rec.verdict));
        }
        let target = rec.rsd.solution();
        let n = sol.s.order();
        if !is_bijection(&rec.phi, target.s.order())
            || !is_homomorphism(&rec.phi, &sol.s, &target.s)
        {
            return Err(format!("{}: φ is not an isomorphism", c.name));
        }
        for a in 0..n {
            for b in 0..n {
                if sol.theta.related(a, b) != target.theta.related(rec.phi[a], rec.phi[b]) {
                    return Err(format!(
                        "{}: φ does not carry θ to θ' at ({a}, {b})",
                        c.name
                    ));
                }
            }
        }
        count += 1;
    }
    Ok(format!("{count} products of order ≤ 20"))
}

fn wreath_embedding() -> Verdict {
    let mut count = 0;
    for f in catalog() {
        for (i, theta) in enumerate_congruences(&f.semigroup)
            .map_err(|e| e.to_string())?
            .into_iter()
            .enumerate()
        {
            let name = format!("{} θ{i}", f.name);
            let s = &f.semigroup;
            let sol = ExtensionSolution::new(s.clone(), theta).map_err(|e| e.to_string())?;
            let eh = hull_of_extension(&sol).map_err(|e| e.to_string())?;
            let Some(xi) = find_transversal(&eh, false) else {
                continue;
            };
            let emb = thm42_embedding(&sol, &xi).map_err(|e| format!("{name}: {e}"))?;
            let space = emb.hwr_eta.space();
            let (k, t) = (&emb.triple.k, &emb.triple.t);
            if emb.psi.iter().collect::<HashSet<_>>().len() != s.order() {
                return Err(format!("{name}: ψ is not injective"));
            }
            for (x, (h, tx)) in emb.psi.iter().enumerate() {
                if sol.class(x) != *tx {
                    return Err(format!("{name}: ψ({x}) has the wrong second coordinate"));
                }
                for &y in space.domain(t.ran(*tx)) {
                    let v = space
                        .eval(h, y)
                        .ok_or(format!("{name}: h_{x} undefined at {y}"))?;
                    if emb.triple.eta[v] != t.ran(y) {
                        return Err(format!("{name}: h_{x}({y}) leaves K_ran({y})"));
                    }
                }
            }
            for a in 0..s.order() {
                for b in 0..s.order() {
                    let ((alpha, x), (beta, u)) = (&emb.psi[a], &emb.psi[b]);
                    let (gamma, xu) = &emb.psi[s.mul(a, b)];
                    if *xu != t.mul(*x, *u) {
                        return Err(format!("{name}: ψ({a}{b}) has the wrong second coordinate"));
                    }
                    for &y in space.domain(t.ran(*xu)) {
                        let want = space
                            .eval(alpha, y)
                            .zip(space.eval(beta, t.mul(y, *x)))
                            .map(|(p, q)| k.mul(p, q));
                        if space.eval(gamma, y) != want {
                            return Err(format!("{name}: ψ({a})ψ({b}) != ψ({a}{b}) at {y}"));
                        }
                    }
                }
            }
            for (x, (h, tx)) in emb.psi.iter().enumerate() {
                let e = t.ran(*tx);
                let value =
                    emb.kernel.embedding[space.eval(h, e).expect("ran θ(s) is in the domain")];
                let rebuilt = xi.xi[*tx].right(xi.xi[e].inverse(s).left(value));
                if rebuilt != x {
                    return Err(format!(
                        "{name}: ξ⁻¹(e) h_s(e) ξ(θ(s)) = {rebuilt}, not {x}"
                    ));
                }
            }
            emb.verify(&sol, &xi).map_err(|e| format!("{name}: {e}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} almost Billhardt extensions"))
}

fn wreath_isomorphism() -> Verdict {
    let mut count = 0;
    for (t, k) in pairs(usize::MAX) {
        let (kn, tn) = (k.semigroup.order(), t.semigroup.order());
        if !matches!(kn.checked_pow(tn as u32), Some(p) if p <= 4096) {
            continue;
        }
        let name = format!("{} over {}", k.name, t.name);
        let lwr = build_lwr(&k.semigroup, &t.semigroup).map_err(|e| format!("{name}: {e}"))?;
        let hwr = build_hwr(&k.semigroup, &t.semigroup).map_err(|e| format!("{name}: {e}"))?;
        let (lt, ht) = (
            lwr.semigroup().map_err(|e| format!("{name}: {e}"))?,
            hwr.semigroup().map_err(|e| format!("{name}: {e}"))?,
        );
        let space = hwr.space();
        let ts = &t.semigroup;
        let mut psi = Vec::with_capacity(lwr.len());
        for e in lwr.elements() {
            let r = lwr.restrict(space, e);
            let (f, x) = e;
            if r.1 != *x
                || space
                    .domain(ts.ran(*x))
                    .iter()
                    .any(|&y| space.eval(&r.0, y) != Some(f[y] as usize))
            {
                return Err(format!("{name}: Ψ is not restriction"));
            }
            if lwr.extend(space, &r) != *e {
                return Err(format!("{name}: extension does not invert restriction"));
            }
            psi.push(
                hwr.index_of(&r)
                    .ok_or(format!("{name}: Ψ leaves the wreath product"))?,
            );
        }
        if !is_bijection(&psi, hwr.len()) {
            return Err(format!("{name}: Ψ is not bijective"));
        }
        for h in hwr.elements() {
            if lwr.restrict(space, &lwr.extend(space, h)) != *h {
                return Err(format!("{name}: restriction does not invert extension"));
            }
        }
        for a in 0..lt.order() {
            for b in 0..lt.order() {
                if psi[lt.mul(a, b)] != ht.mul(psi[a], psi[b]) {
                    return Err(format!("{name}: Ψ is not multiplicative at ({a}, {b})"));
                }
            }
        }
        count += 1;
    }
    Ok(format!("{count} factor pairs"))
}

fn oracle_redundancy() -> Verdict {
    let mut hulls = 0;
    for f in small(5) {
        let mut naive = naive_bitranslations(&f.semigroup).map_err(|e| e.to_string())?;
        let mut fast =
            enumerate_bitranslations(&f.semigroup, HULL_BOUND).map_err(|e| e.to_string())?;
        naive.sort();
        fast.sort();
        if naive != fast {
            return Err(format!(
                "{}: {} naive vs {} backtracking",
                f.name,
                naive.len(),
                fast.len()
            ));
        }
        hulls += 1;
    }
    let mut lattices = 0;
    for f in small(7) {
        let a = enumerate_by_partitions(&f.semigroup, 7).map_err(|e| e.to_string())?;
        let b = enumerate_by_closure(&f.semigroup, CLOSURE_BOUND).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!(
                "{}: {} by partitions vs {} by closure",
                f.name,
                a.len(),
                b.len()
            ));
        }
        lattices += 1;
    }
    Ok(format!("{hulls} hulls, {lattices} congruence lattices"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("construction soundness", Some(30), construction_soundness),
        ("kernel formulas", None, kernel_formulas),
        (
            "λ-semidirect to full restricted isomorphism",
            Some(10),
            lambda_to_restricted,
        ),
        ("(AFR) equivalences, exhaustive", Some(60), afr_equivalences),
        (
            "strong semilattice decomposition",
            None,
            strong_semilattices,
        ),
        (
            "translational hull of an extension",
            Some(120),
            hull_structure,
        ),
        ("bitranslations ω_[t]", None, brackets),
        ("split reconstruction round trip", None, round_trip),
        (
            "embedding into the wreath product along η",
            Some(120),
            wreath_embedding,
        ),
        (
            "λ-wreath to Houghton wreath isomorphism",
            None,
            wreath_isomorphism,
        ),
        ("oracle redundancy", None, oracle_redundancy),
    ];
    let mut failed = 0;
    for (i, (title, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let elapsed = start.elapsed();
        let over = budget.is_some_and(|b| elapsed > Duration::from_secs(b));
        let (ok, detail) = match verdict {
            Ok(d) if over => (
                false,
                format!(
                    "{d}; {:.1}s exceeds the {}s budget",
                    elapsed.as_secs_f64(),
                    budget.unwrap()
                ),
            ),
            Ok(d) => (true, d),
            Err(w) => (false, w),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {:>2}. {title}: {detail} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
