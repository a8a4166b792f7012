//! Fixture sweeps that check each structural statement, and the reports
//! they produce.
//!
//! A suite runs its fixtures in parallel and merges per-fixture tallies in
//! fixture order, so a report depends only on its inputs and bounds (apart
//! from the timing field).

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::fmt::Display;
use std::hash::{Hash, Hasher};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::{
    check_ae7_ae8, check_afr, check_derived_identities, check_modified, enumerate_actions,
    enumerate_epsilons, sample_actions, strong_semilattice, EndoAction, EpsilonMap,
};
use crate::billhardt::{
    classical_billhardt, find_transversal, kernel_class_shape, prop39_check, split_closure_check,
    theorem310_backward, theorem310_forward, theta_bar_check, thm42_embedding, Transversal,
};
use crate::congruence::enumerate_congruences;
use crate::error::{Error, Result};
use crate::fixtures::{self, Fixture};
use crate::morphism::{
    find_solution_isomorphism, solution_embedding, EmbeddingKind, ExtensionSolution,
    ISOMORPHISM_BOUND,
};
use crate::products::wreath::power_action;
use crate::products::{
    build_hwr, build_lsd, build_lwr, build_p_eta, build_rsd, psi_lemma21,
    FullRestrictedSemidirectProduct, PfunSpace, TABLE_CAP,
};
use crate::semigroup::{ElementSet, InverseSemigroup};
use crate::trhull::{
    bracket_homomorphism_check, bracket_identities_check, bracket_projection_check,
    hull_identities, hull_of_extension, restriction_to_quotient_check, ExtensionHull, HULL_BOUND,
};

/// Suite tokens accepted by [`run_suite`].
pub const SUITES: [&str; 13] = [
    "prop-2.2",
    "lemma-2.1",
    "prop-3.1",
    "cor-3.4",
    "prop-3.5",
    "lemma-3.6",
    "lemma-3.7",
    "lemma-3.8",
    "prop-3.9",
    "thm-3.10",
    "prop-4.1",
    "thm-4.2",
    "remark-4.3",
];

/// Largest factor order swept exhaustively.
pub const EXHAUSTIVE_FACTOR_BOUND: usize = 4;

/// Largest product order in the round-trip sweep.
pub const ROUND_TRIP_BOUND: usize = 20;

/// Largest λ-wreath product compared against `lsd(K^T, T)` table by table.
pub const POWER_CHECK_BOUND: usize = 1024;

/// Largest `|K|^|T|` in the wreath comparison.
pub const WREATH_POWER_BOUND: usize = 4096;

/// Sweep bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest catalog semigroup used as `S`, `K` or `T`.
    pub max_order: usize,
    /// Seed for sampled sweeps beyond the exhaustive bounds.
    pub seed: u64,
    /// Samples per factor pair in sampled sweeps.
    pub samples: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            max_order: 6,
            seed: 0,
            samples: 32,
        }
    }
}

impl Bounds {
    pub fn factor(&self) -> usize {
        self.max_order.min(EXHAUSTIVE_FACTOR_BOUND)
    }

    fn hull(&self) -> usize {
        self.max_order.min(HULL_BOUND)
    }
}

/// One quantified statement: how many cases were checked, how many were
/// out of reach, and the first counterexample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub skipped: usize,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    /// Table digests of the input semigroups.
    pub digests: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    /// Findings that are outputs rather than pass/fail statements.
    pub observations: Vec<String>,
    /// The constructed artifact, for commands that build one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<serde_json::Value>,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            suites: Vec::new(),
            bounds: None,
            digests: BTreeMap::new(),
            checks: Vec::new(),
            observations: Vec::new(),
            result: None,
            elapsed_ms: 0,
        }
    }

    /// Records a check with a single case.
    pub fn check(&mut self, name: &str, outcome: std::result::Result<(), String>) {
        self.checks.push(Check {
            name: name.to_string(),
            cases: 1,
            skipped: 0,
            passed: outcome.is_ok(),
            witness: outcome.err(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = format!("command: {}\n", self.command);
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{verdict}  {:width$}  cases={}", c.name, c.cases));
            if c.skipped > 0 {
                out.push_str(&format!(" skipped={}", c.skipped));
            }
            if let Some(w) = &c.witness {
                out.push_str(&format!("  witness: {w}"));
            }
            out.push('\n');
        }
        for o in &self.observations {
            out.push_str(&format!("note: {o}\n"));
        }
        if let Some(r) = &self.result {
            let body = serde_json::to_string_pretty(r).unwrap_or_default();
            out.push_str(&format!("result:\n{body}\n"));
        }
        out.push_str(&format!("elapsed: {} ms\n", self.elapsed_ms));
        out
    }
}

/// Hex digest of a multiplication table.
pub fn digest(s: &InverseSemigroup) -> String {
    let mut h = DefaultHasher::new();
    s.order().hash(&mut h);
    s.rows().hash(&mut h);
    format!("{:016x}", h.finish())
}

#[derive(Clone, Debug)]
struct Tally {
    name: String,
    cases: usize,
    skipped: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            cases: 0,
            skipped: 0,
            witness: None,
        }
    }

    fn case(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn result<E: Display>(&mut self, at: &str, r: std::result::Result<(), E>) {
        self.case(r.is_ok(), || match r {
            Err(e) => format!("{at}: {e}"),
            Ok(()) => unreachable!(),
        });
    }

    fn absorb(&mut self, other: Tally) {
        self.cases += other.cases;
        self.skipped += other.skipped;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
    }

    fn finish(self, suite: &str) -> Check {
        Check {
            name: format!("{suite}/{}", self.name),
            cases: self.cases,
            skipped: self.skipped,
            passed: self.witness.is_none(),
            witness: self.witness,
        }
    }
}

/// Runs `f` on every item in parallel and merges the tallies in item order.
fn sweep<X: Sync>(
    items: &[X],
    names: &[&str],
    f: impl Fn(&X, &mut [Tally]) -> Result<()> + Sync,
) -> Result<Vec<Tally>> {
    let per_item: Vec<Vec<Tally>> = items
        .par_iter()
        .map(|x| {
            let mut tallies: Vec<Tally> = names.iter().map(|n| Tally::new(n)).collect();
            f(x, &mut tallies)?;
            Ok(tallies)
        })
        .collect::<Result<_>>()?;
    let mut total: Vec<Tally> = names.iter().map(|n| Tally::new(n)).collect();
    for tallies in per_item {
        for (t, x) in total.iter_mut().zip(tallies) {
            t.absorb(x);
        }
    }
    Ok(total)
}

fn tally_err(e: Error) -> String {
    e.to_string()
}

/// A valid action of a catalog `T` on a catalog `K`.
#[derive(Clone, Debug)]
pub struct ActionFixture {
    pub name: String,
    pub action: EndoAction,
}

/// An action together with an `ε` satisfying (AFR).
#[derive(Clone, Debug)]
pub struct AfrFixture {
    pub name: String,
    pub action: EndoAction,
    pub eps: EpsilonMap,
}

/// A catalog semigroup with one of its congruences.
#[derive(Clone, Debug)]
pub struct ExtensionFixture {
    pub name: String,
    pub solution: ExtensionSolution,
}

/// Every action of `T` on `K` for catalog semigroups of order at most
/// `factor`.
pub fn action_fixtures(cat: &[Fixture], factor: usize) -> Vec<ActionFixture> {
    let cat = up_to(cat, factor);
    let pairs: Vec<(&Fixture, &Fixture)> = cat
        .iter()
        .flat_map(|&t| cat.iter().map(move |&k| (t, k)))
        .collect();
    pairs
        .par_iter()
        .map(|(t, k)| {
            enumerate_actions(&t.semigroup, &k.semigroup)
                .into_iter()
                .enumerate()
                .map(|(i, action)| ActionFixture {
                    name: format!("{} on {} #{i}", t.name, k.name),
                    action,
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect()
}

/// Every (action, `ε`) pair satisfying (AFR) with factors of order at most
/// `factor`.
pub fn afr_fixtures(cat: &[Fixture], factor: usize) -> Vec<AfrFixture> {
    let cat = up_to(cat, factor);
    let pairs: Vec<(&Fixture, &Fixture)> = cat
        .iter()
        .flat_map(|&t| cat.iter().map(move |&k| (t, k)))
        .collect();
    pairs
        .par_iter()
        .map(|(t, k)| {
            let epsilons = enumerate_epsilons(&k.semigroup, &t.semigroup);
            let mut out = Vec::new();
            if epsilons.is_empty() {
                return out;
            }
            for (i, action) in enumerate_actions(&t.semigroup, &k.semigroup)
                .into_iter()
                .enumerate()
            {
                for (j, eps) in epsilons.iter().enumerate() {
                    if check_afr(&action, eps).is_ok() {
                        out.push(AfrFixture {
                            name: format!("{} on {} #{i} ε{j}", t.name, k.name),
                            action: action.clone(),
                            eps: eps.clone(),
                        });
                    }
                }
            }
            out
        })
        .flatten()
        .collect()
}

/// Every catalog semigroup of order at most `max_order` with every one of
/// its congruences.
pub fn extension_fixtures(cat: &[Fixture], max_order: usize) -> Result<Vec<ExtensionFixture>> {
    let mut out = Vec::new();
    for f in up_to(cat, max_order) {
        for (i, theta) in enumerate_congruences(&f.semigroup)?.into_iter().enumerate() {
            out.push(ExtensionFixture {
                name: format!("{} θ{i}", f.name),
                solution: ExtensionSolution::new(f.semigroup.clone(), theta)?,
            });
        }
    }
    Ok(out)
}

fn up_to(cat: &[Fixture], max_order: usize) -> Vec<&Fixture> {
    cat.iter()
        .filter(|f| f.semigroup.order() <= max_order)
        .collect()
}

fn rsd_of(f: &AfrFixture) -> Result<FullRestrictedSemidirectProduct> {
    build_rsd(&f.action, &f.eps)
}

/// Runs one suite, or every suite for `"all"`, over the built-in catalog.
pub fn run_suite(name: &str, bounds: &Bounds) -> Result<Report> {
    run_suite_on(name, bounds, &fixtures::catalog())
}

/// [`run_suite`] over a caller-supplied catalog.
pub fn run_suite_on(name: &str, bounds: &Bounds, cat: &[Fixture]) -> Result<Report> {
    let start = Instant::now();
    let names: Vec<&str> = if name == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&name) {
        vec![name]
    } else {
        return Err(Error::Invalid(format!("unknown suite {name}")));
    };
    let mut checks = Vec::new();
    let mut observations = Vec::new();
    for suite in &names {
        let (tallies, notes) = match *suite {
            "prop-2.2" => (semidirect_embeddings(bounds, cat)?, vec![]),
            "lemma-2.1" => (lambda_to_restricted(bounds, cat)?, vec![]),
            "prop-3.1" => (afr_forms(bounds, cat)?, vec![]),
            "cor-3.4" => (strong_semilattices(bounds, cat)?, vec![]),
            "prop-3.5" => (hull_restriction(bounds, cat)?, vec![]),
            "lemma-3.6" => (
                brackets(bounds, cat, "projection", bracket_projection_check)?,
                vec![],
            ),
            "lemma-3.7" => (
                brackets(bounds, cat, "homomorphism", bracket_homomorphism_check)?,
                vec![],
            ),
            "lemma-3.8" => (
                brackets(bounds, cat, "identities", bracket_identities_check)?,
                vec![],
            ),
            "prop-3.9" => transversal_criteria(bounds, cat)?,
            "thm-3.10" => (split_round_trip(bounds, cat)?, vec![]),
            "prop-4.1" => (wreath_along_eta(bounds, cat)?, vec![]),
            "thm-4.2" => (wreath_embedding(bounds, cat)?, vec![]),
            "remark-4.3" => (wreath_restriction(bounds, cat)?, vec![]),
            _ => unreachable!(),
        };
        checks.extend(tallies.into_iter().map(|t| t.finish(suite)));
        observations.extend(notes);
    }
    let digests = up_to(cat, bounds.max_order)
        .into_iter()
        .map(|f| (f.name.clone(), digest(&f.semigroup)))
        .collect();
    Ok(Report {
        command: format!("verify {name}"),
        suites: names.iter().map(|s| s.to_string()).collect(),
        bounds: Some(*bounds),
        digests,
        checks,
        observations,
        result: None,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Embeddability into a λ-semidirect product and into a full restricted
/// semidirect product are interchangeable: `ψ` carries one to the other and
/// the full restricted product sits inside the λ-semidirect product on the
/// same data. Also checks both constructions and their Kernel formulas.
fn semidirect_embeddings(bounds: &Bounds, cat: &[Fixture]) -> Result<Vec<Tally>> {
    let actions = action_fixtures(cat, bounds.factor());
    let mut out = sweep(
        &actions,
        &["lsd-valid", "lsd-kernel-formula", "lsd-into-rsd"],
        |f, t| {
            let p = build_lsd(&f.action);
            t[0].result(&f.name, p.as_ref().map(|_| ()).map_err(|e| e.clone()));
            let Ok(p) = p else { return Ok(()) };
            let sol = p.solution();
            let by_formula = p.kernel_by_formula();
            t[1].case(&by_formula == sol.kernel(), || {
                format!("{}: Kernel formula differs", f.name)
            });
            let verdict = psi_lemma21(&p).and_then(|r| {
                solution_embedding(
                    r.psi.map(),
                    &sol,
                    &r.rsd.solution(),
                    EmbeddingKind::Embedding,
                )
            });
            t[2].case(matches!(&verdict, Ok(v) if v.holds()), || {
                format!("{}: {verdict:?}", f.name)
            });
            Ok(())
        },
    )?;
    let afr = afr_fixtures(cat, bounds.factor());
    out.extend(sweep(
        &afr,
        &[
            "rsd-valid",
            "rsd-kernel-formula",
            "rsd-into-lsd",
            "rsd-through-lsd",
        ],
        |f, t| {
            let r = rsd_of(f);
            t[0].result(&f.name, r.as_ref().map(|_| ()).map_err(|e| e.clone()));
            let Ok(r) = r else { return Ok(()) };
            let sol = r.solution();
            t[1].case(&r.kernel_by_formula() == sol.kernel(), || {
                format!("{}: Kernel formula differs", f.name)
            });
            let p = build_lsd(&f.action)?;
            let inclusion: Vec<usize> = r
                .pairs()
                .iter()
                .map(|&(a, x)| p.index_of(a, x).unwrap_or(usize::MAX))
                .collect();
            if inclusion.contains(&usize::MAX) {
                t[2].case(false, || {
                    format!("{}: a pair of the restricted product is missing", f.name)
                });
                return Ok(());
            }
            let lsd_sol = p.solution();
            let v = solution_embedding(&inclusion, &sol, &lsd_sol, EmbeddingKind::Embedding);
            t[2].case(matches!(&v, Ok(v) if v.holds()), || {
                format!("{}: {v:?}", f.name)
            });
            let rep = psi_lemma21(&p)?;
            let composite: Vec<usize> = inclusion.iter().map(|&i| rep.psi.apply(i)).collect();
            let v = solution_embedding(
                &composite,
                &sol,
                &rep.rsd.solution(),
                EmbeddingKind::Embedding,
            );
            t[3].case(matches!(&v, Ok(v) if v.holds()), || {
                format!("{}: {v:?}", f.name)
            });
            Ok(())
        },
    )?);
    Ok(out)
}

/// `ψ(a,t) = ((a, ran t), t)` is an isomorphism of normal extensions onto
/// the full restricted product of the Kernel.
fn lambda_to_restricted(bounds: &Bounds, cat: &[Fixture]) -> Result<Vec<Tally>> {
    let actions = action_fixtures(cat, bounds.factor());
    let mut out = sweep(
        &actions,
        &["psi-bijective", "psi-isomorphism", "induced-action-afr"],
        |f, t| {
            let p = build_lsd(&f.action)?;
            let rep = match psi_lemma21(&p) {
                Ok(r) => r,
                Err(e) => {
                    t[0].case(false, || format!("{}: {e}", f.name));
                    return Ok(());
                }
            };
            t[0].case(rep.psi.bijective(), || {
                format!("{}: ψ is not bijective", f.name)
            });
            let v = solution_embedding(
                rep.psi.map(),
                &p.solution(),
                &rep.rsd.solution(),
                EmbeddingKind::Isomorphism,
            );
            t[1].case(matches!(&v, Ok(v) if v.holds()), || {
                format!("{}: {v:?}", f.name)
            });
            let ka = &rep.kernel_action;
            t[2].result(
                &f.name,
                check_afr(&ka.action, &ka.eps).map_err(|w| format!("{w:?}")),
            );
            Ok(())
        },
    )?;
    let afr = afr_fixtures(cat, bounds.factor());
    out.extend(sweep(&afr, &["rsd-kernel-isomorphic-to-k"], |f, t| {
        let r = rsd_of(f)?;
        let map = r.kernel_embedding();
        let ok = crate::morphism::is_homomorphism(&map, r.k(), &r.semigroup)
            .map(|m| m.injective() && m.image() == *r.solution().kernel());
        t[0].case(matches!(ok, Ok(true)), || {
            format!("{}: a ↦ (a, ε(a)) is not onto the Kernel", f.name)
        });
        Ok(())
    })?);
    Ok(out)
}

fn ae_checks(action: &EndoAction, eps: &EpsilonMap, name: &str, t: &mut [Tally]) {
    let afr = check_afr(action, eps).is_ok();
    let ae = check_ae7_ae8(action, eps).is_ok();
    let modified = check_modified(action, &eps.classes(action.acting().order())).is_ok();
    t[0].case(afr == ae, || format!("{name}: AFR={afr}, AE7+AE8={ae}"));
    t[1].case(afr == modified, || {
        format!("{name}: AFR={afr}, modified={modified}")
    });
    if afr {
        t[2].case(check_derived_identities(action, eps), || {
            format!("{name}: derived identities fail")
        });
    }
}

/// (AFR) holds iff (AE7) and (AE8) hold iff the modified condition holds,
/// over every action and every surjective `ε`.
fn afr_forms(bounds: &Bounds, cat: &[Fixture]) -> Result<Vec<Tally>> {
    let names = ["afr-iff-ae7-ae8", "afr-iff-modified", "derived-identities"];
    let actions = action_fixtures(cat, bounds.factor());
    let mut out = sweep(&actions, &names, |f, t| {
        let (k, ts) = (f.action.acted_on(), f.action.acting());
        for (j, eps) in enumerate_epsilons(k, ts).iter().enumerate() {
            ae_checks(&f.action, eps, &format!("{} ε{j}", f.name), t);
        }
        Ok(())
    })?;
    // sampled beyond the exhaustive bound
    let cat = up_to(cat, bounds.max_order);
    let big: Vec<(usize, usize)> = (0..cat.len())
        .flat_map(|i| (0..cat.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| cat[i].semigroup.order().max(cat[j].semigroup.order()) > bounds.factor())
        .collect();
    let sampled_names = [
        "sampled-afr-iff-ae7-ae8",
        "sampled-afr-iff-modified",
        "sampled-derived-identities",
    ];
    let sampled = sweep(&big, &sampled_names, |&(i, j), t| {
        let (tf, kf) = (&cat[i], &cat[j]);
        let mut rng = StdRng::seed_from_u64(bounds.seed ^ ((i as u64) << 32 | j as u64));
        let epsilons = enumerate_epsilons(&kf.semigroup, &tf.semigroup);
        if epsilons.is_empty() {
            return Ok(());
        }
        for (n, action) in sample_actions(&tf.semigroup, &kf.semigroup, bounds.samples, &mut rng)
            .iter()
            .enumerate()
        {
            for (e, eps) in epsilons.iter().enumerate() {
                ae_checks(
                    action,
                    eps,
                    &format!("{} on {} sample {n} ε{e}", tf.name, kf.name),
                    t,
                );
            }
        }
        Ok(())
    })?;
    out.extend(sampled);
    Ok(out)
}

/// Every (AFR) pair yields a strong semilattice of the `K_e`.
fn strong_semilattices(bounds: &Bounds, cat: &[Fixture]) -> Result<Vec<Tally>> {
    let afr = afr_fixtures(cat, bounds.factor());
    sweep(&afr, &["strong-semilattice"], |f, t| {
        let r = strong_semilattice(&f.action, &f.eps)
            .map_err(tally_err)
            .and_then(|sl| sl.verify(f.action.acted_on(), f.action.acting()));
        t[0].result(&f.name, r);
        Ok(())
    })
}

fn extension_hulls(bounds: &Bounds, cat: &[Fixture]) -> Result<Vec<(String, ExtensionHull)>> {
    let ext = extension_fixtures(cat, bounds.hull())?;
    ext.par_iter()
        .map(|f| Ok((f.name.clone(), hull_of_extension(&f.solution)?)))
        .collect()
}

/// `()↓` maps `Ω(S,θ)` onto `Π(S/θ)` with kernel `Ω(θ)`, and `π` embeds
/// `(S,θ)` with `ι` bijective.
fn hull_restriction(bounds: &Bounds, cat: &[Fixture]) -> Result<Vec<Tally>> {
    let hulls = extension_hulls(bounds, cat)?;
    sweep(
        &hulls,
        &["structure", "hull-identities"],
        |(name, eh), t| {
            t[0].result(name, restriction_to_quotient_check(eh));
            t[1].result(
                name,
                hull_identities(&eh.hull).map_err(|e| format!("{e:?}")),
            );
            Ok(())
        },
    )
}

fn brackets(
    bounds: &Bounds,
    cat: &[Fixture],
    label: &str,
    check: fn(&FullRestrictedSemidirectProduct) -> std::result::Result<(), String>,
) -> Result<Vec<Tally>> {
    let afr = afr_fixtures(cat, bounds.factor());
    sweep(&afr, &[label], |f, t| {
        let r = rsd_of(f)?;
        t[0].result(&f.name, check(&r));
        Ok(())
    })
}

/// `θ` is (split) almost Billhardt iff some inverse subsemigroup
/// `Π(S) ⊆ S̃ ⊆ Ω(S,θ)` carries a (split) Billhardt restriction of `Ω(θ)`.
fn transversal_criteria(bounds: &Bounds, cat: &[Fixture]) -> Result<(Vec<Tally>, Vec<String>)> {
    let hulls = extension_hulls(bounds, cat)?;
    let tallies = sweep(
        &hulls,
        &["almost-billhardt", "split-almost-billhardt"],
        |(name, eh), t| {
            for (i, split) in [false, true].into_iter().enumerate() {
                match prop39_check(eh, split) {
                    Ok(c) => t[i].case(c.agrees(), || {
                        format!(
                            "{name}: transversal={}, S̃ found={}, S̃ transversal valid={}",
                            c.almost_billhardt,
                            c.witness.is_some(),
                            c.witness_transversal_valid
                        )
                    }),
                    Err(Error::TooLarge { .. }) => t[i].skipped += 1,
                    Err(e) => return Err(e),
                }
            }
            Ok(())
        },
    )?;
    let notes: Vec<String> = hulls
        .par_iter()
        .filter_map(|(name, eh)| {
            let almost = find_transversal(eh, false).is_some();
            if !almost {
                return Some(format!("{name}: no almost Billhardt transversal"));
            }
            let split = find_transversal(eh, true).is_some();
            let classical =
                classical_billhardt(&eh.solution.s, &eh.solution.theta, false).is_some();
            match (split, classical) {
                (true, true) => None,
                (false, true) => Some(format!("{name}: Billhardt, not split almost Billhardt")),
                (true, false) => Some(format!("{name}: split almost Billhardt, not Billhardt")),
                (false, false) => Some(format!("{name}: almost Billhardt only")),
            }
        })
        .collect();
    Ok((tallies, notes))
}

/// Full restricted semidirect products are exactly the split almost
/// Billhardt extensions, with the forward and backward constructions
/// inverse up to isomorphism of normal extensions.
fn split_round_trip(bounds: &Bounds, cat: &[Fixture]) -> Result<Vec<Tally>> {
    let afr: Vec<AfrFixture> = afr_fixtures(cat, bounds.factor());
    let mut out = sweep(&afr, &["forward", "round-trip", "split-closure"], |f, t| {
        let r = rsd_of(f)?;
        if r.semigroup.order() > ROUND_TRIP_BOUND {
            t[1].skipped += 1;
            return Ok(());
        }
        let fwd = theorem310_forward(&r);
        t[0].result(&f.name, fwd.as_ref().map(|_| ()).map_err(|e| e.clone()));
        let Ok((sol, xi)) = fwd else { return Ok(()) };
        let back = theorem310_backward(&sol, &xi);
        t[1].case(matches!(&back, Ok(b) if b.verdict.holds()), || {
            format!("{}: {:?}", f.name, back.as_ref().map(|b| &b.verdict))
        });
        t[2].result(&f.name, split_closure_check(&sol, &xi));
        Ok(())
    })?;
    let hulls = extension_hulls(bounds, cat)?;
    out.extend(sweep(&hulls, &["backward", "no-split-no-product"], |(name, eh), t| {
        let sol = &eh.solution;
        match find_transversal(eh, true) {
            Some(xi) => {
                let back = theorem310_backward(sol, &xi);
                t[0].case(matches!(&back, Ok(b) if b.verdict.holds()), || {
                    format!("{name}: {:?}", back.as_ref().map(|b| &b.verdict))
                });
            }
            None => {
                let (triple, _) = sol.canonical_triple();
                let mut found = None;
                for action in enumerate_actions(&triple.t, &triple.k) {
                    for eps in enumerate_epsilons(&triple.k, &triple.t) {
                        let Ok(r) = build_rsd(&action, &eps) else { continue };
                        let bound = r.semigroup.order().max(ISOMORPHISM_BOUND);
                        if find_solution_isomorphism(sol, &r.solution(), bound)?.is_some() {
                            found = Some(action.rows());
                        }
                    }
                }
                t[1].case(found.is_none(), || {
                    format!("{name}: no split transversal, yet isomorphic to a product with action {found:?}")
                });
            }
        }
        Ok(())
    })?);
    Ok(out)
}

/// `P^η` is an inverse subsemigroup of `P_{K,T}` closed under the action,
/// the restricted action satisfies (AFR), and the wreath product along `η`
/// sits inside the full wreath product.
fn wreath_along_eta(bounds: &Bounds, cat: &[Fixture]) -> Result<Vec<Tally>> {
    let ext = extension_fixtures(cat, bounds.max_order)?;
    sweep(
        &ext,
        &["p-eta-blocks", "p-eta-afr", "p-eta-in-p", "hwr-eta-in-hwr"],
        |f, t| {
            let (triple, _) = f.solution.canonical_triple();
            let p = match build_p_eta(&triple) {
                Ok(p) => p,
                Err(Error::TooLarge { .. }) => {
                    t[0].skipped += 1;
                    return Ok(());
                }
                Err(e) => {
                    t[0].case(false, || format!("{}: {e}", f.name));
                    return Ok(());
                }
            };
            for (e, size) in kernel_class_shape(&triple) {
                let got = p.elements.iter().filter(|a| a.generator == e).count();
                t[0].case(got == size, || {
                    format!("{}: {got} functions on T{e}, expected {size}", f.name)
                });
            }
            t[1].result(
                &f.name,
                check_afr(&p.action, &p.eps).map_err(|w| format!("{w:?}")),
            );
            let space = PfunSpace::new(triple.k.clone(), triple.t.clone());
            match space.materialize(None, TABLE_CAP) {
                Ok(full) => {
                    let map: Option<Vec<usize>> =
                        p.elements.iter().map(|a| full.index_of(a)).collect();
                    let ok = map.is_some_and(|m| {
                        let set = ElementSet::from_iter(full.elements.len(), m.iter().copied());
                        full.semigroup.is_inverse_subsemigroup(&set)
                            && crate::morphism::is_homomorphism(&m, &p.semigroup, &full.semigroup)
                                .is_ok()
                    });
                    t[2].case(ok, || {
                        format!("{}: P^η is not an inverse subsemigroup of P", f.name)
                    });
                }
                Err(Error::TooLarge { .. }) => t[2].skipped += 1,
                Err(e) => return Err(e),
            }
            let (eta_w, full_w) = (
                crate::products::build_hwr_eta(&triple),
                build_hwr(&triple.k, &triple.t),
            );
            match (eta_w, full_w) {
                (Ok(h), Ok(w)) if h.semigroup().is_ok() && w.semigroup().is_ok() => {
                    let map: Option<Vec<usize>> =
                        h.elements().iter().map(|e| w.index_of(e)).collect();
                    let ok = map.is_some_and(|m| {
                        crate::morphism::is_homomorphism(
                            &m,
                            h.semigroup().unwrap(),
                            w.semigroup().unwrap(),
                        )
                        .is_ok()
                    });
                    t[3].case(ok, || {
                        format!(
                            "{}: the wreath product along η is not a subsemigroup",
                            f.name
                        )
                    });
                }
                (Err(e), _) | (_, Err(e)) if !matches!(e, Error::TooLarge { .. }) => return Err(e),
                _ => t[3].skipped += 1,
            }
            Ok(())
        },
    )
}

/// Every almost Billhardt extension embeds into the wreath product along
/// `η` by `ψ(s) = (h_s, θ(s))`.
fn wreath_embedding(bounds: &Bounds, cat: &[Fixture]) -> Result<Vec<Tally>> {
    let names = ["embedding", "theta-bar-billhardt", "kernel-class-shape"];
    let hulls = extension_hulls(bounds, cat)?;
    let mut out = sweep(&hulls, &names, |(name, eh), t| {
        let Some(xi) = find_transversal(eh, false) else {
            return Ok(());
        };
        embedding_checks(name, &eh.solution, &xi, t)?;
        t[1].result(name, theta_bar_check(eh, &xi));
        Ok(())
    })?;
    let afr = afr_fixtures(cat, bounds.factor());
    let rsd = sweep(&afr, &names, |f, t| {
        let r = rsd_of(f)?;
        let (sol, xi) = theorem310_forward(&r)?;
        embedding_checks(&f.name, &sol, &xi, t)
    })?;
    for (a, b) in out.iter_mut().zip(rsd) {
        a.absorb(b);
    }
    Ok(out)
}

fn embedding_checks(
    name: &str,
    sol: &ExtensionSolution,
    xi: &Transversal,
    t: &mut [Tally],
) -> Result<()> {
    let emb = match thm42_embedding(sol, xi) {
        Ok(e) => e,
        Err(e @ Error::TooLarge { .. }) => return Err(e),
        Err(e) => {
            t[0].case(false, || format!("{name}: {e}"));
            return Ok(());
        }
    };
    t[0].result(name, emb.verify(sol, xi));
    if emb.hwr_eta.semigroup().is_ok() {
        for (e, size) in kernel_class_shape(&emb.triple) {
            let got = emb
                .hwr_eta
                .elements()
                .iter()
                .filter(|(_, x)| *x == e)
                .count();
            t[2].case(got == size, || {
                format!("{name}: Kernel class over {e} has {got} elements, expected {size}")
            });
        }
    } else {
        t[2].skipped += 1;
    }
    Ok(())
}

/// Restriction `Ψ(f,t) = (f|_{Tt⁻¹}, t)` is an isomorphism from the
/// λ-wreath product onto Houghton's wreath product, inverted by
/// `h̄(x) = h(x ran t)`.
fn wreath_restriction(bounds: &Bounds, cat: &[Fixture]) -> Result<Vec<Tally>> {
    let cat = up_to(cat, bounds.max_order);
    let pairs: Vec<(usize, usize)> = (0..cat.len())
        .flat_map(|i| (0..cat.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let (k, t) = (cat[i].semigroup.order(), cat[j].semigroup.order());
            k.checked_pow(t as u32)
                .is_some_and(|n| n <= WREATH_POWER_BOUND)
        })
        .collect();
    sweep(
        &pairs,
        &["psi-isomorphism", "round-trip", "lwr-is-lsd-of-power"],
        |&(i, j), t| {
            let (kf, tf) = (&cat[i], &cat[j]);
            let name = format!("K={} T={}", kf.name, tf.name);
            let (l, h) = (
                build_lwr(&kf.semigroup, &tf.semigroup)?,
                build_hwr(&kf.semigroup, &tf.semigroup)?,
            );
            let (ls, hs) = (l.semigroup()?, h.semigroup()?);
            let psi: Option<Vec<usize>> = l
                .elements()
                .iter()
                .map(|e| h.index_of(&l.restrict(h.space(), e)))
                .collect();
            let ok = psi.is_some_and(|m| {
                crate::morphism::is_homomorphism(&m, ls, hs).is_ok_and(|m| m.bijective())
            });
            t[0].case(ok, || format!("{name}: Ψ is not a bijective homomorphism"));
            let round = h
                .elements()
                .iter()
                .all(|e| &l.restrict(h.space(), &l.extend(h.space(), e)) == e)
                && l.elements()
                    .iter()
                    .all(|e| &l.extend(h.space(), &l.restrict(h.space(), e)) == e);
            t[1].case(round, || format!("{name}: h̄ is not inverse to Ψ"));
            if l.len() > POWER_CHECK_BOUND {
                t[2].skipped += 1;
                return Ok(());
            }
            let (functions, action) = power_action(&kf.semigroup, &tf.semigroup, TABLE_CAP)?;
            let p = build_lsd(&action)?;
            let same = p.pairs().len() == l.len()
                && p.pairs()
                    .iter()
                    .zip(l.elements())
                    .all(|(&(f, x), e)| functions[f] == e.0 && x == e.1)
                && p.semigroup.rows() == ls.rows();
            t[2].case(same, || {
                format!("{name}: the λ-wreath product differs from lsd(K^T, T)")
            });
            Ok(())
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_lists_every_check_with_suite_prefix() {
        let bounds = Bounds {
            max_order: 3,
            ..Bounds::default()
        };
        let r = run_suite("lemma-3.8", &bounds).unwrap();
        assert!(r.passed());
        assert!(r.checks.iter().all(|c| c.name.starts_with("lemma-3.8/")));
        assert!(r.checks.iter().all(|c| c.cases > 0));
        assert!(r.to_text().contains("PASS"));
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("lemma-9.9", &Bounds::default()).is_err());
    }

    #[test]
    fn tallies_keep_the_first_witness() {
        let mut a = Tally::new("x");
        a.case(true, || unreachable!());
        let mut b = Tally::new("x");
        b.case(false, || "first".into());
        b.case(false, || "second".into());
        a.absorb(b);
        let c = a.finish("s");
        assert_eq!(
            (c.cases, c.passed, c.witness.as_deref()),
            (3, false, Some("first"))
        );
    }

    #[test]
    fn digests_separate_tables() {
        assert_ne!(digest(&fixtures::chain(2)), digest(&fixtures::cyclic(2)));
        assert_eq!(digest(&fixtures::b2()), digest(&fixtures::b2()));
    }
}
