//! The `invsemi` command line: instance I/O, constructions, and the
//! statement verifiers.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::action::{
    check_ae7_ae8, check_afr, check_modified, ActionJson, EndoAction, EpsilonJson,
};
use crate::billhardt::{
    classify_classical, find_transversal, kernel_class_shape, thm42_embedding, validate_transversal,
};
use crate::congruence::{
    enumerate_by_closure, enumerate_by_partitions, enumerate_congruences, kernel, trace,
    CongruenceJson, CLOSURE_BOUND, PARTITION_SCAN_BOUND,
};
use crate::error::Error;
use crate::fixtures;
use crate::io::{self, InstanceJson, SolutionJson, TripleJson};
use crate::morphism::{solves, ExtensionSolution, MorphismJson, NormalExtensionTriple};
use crate::products::{build_hwr, build_hwr_eta, build_lsd, build_lwr, build_rsd, TABLE_CAP};
use crate::semigroup::{validate, InverseSemigroup};
use crate::trhull::{
    enumerate_hull, extension_hull_from, hull_identities, hull_of_extension, respect_witness,
    restriction_to_quotient_check, BitranslationJson,
};
use crate::verify::{digest, run_suite_on, Bounds, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TOO_LARGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "invsemi",
    version,
    about = "Finite inverse semigroups, normal extensions and their products"
)]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a table or generator list defines an inverse semigroup.
    Validate { instance: PathBuf },
    /// List every congruence with its Kernel and trace.
    Congruences { instance: PathBuf },
    /// Build a product and emit it as an instance with a provenance block.
    Product {
        kind: ProductKind,
        #[arg(long)]
        k: PathBuf,
        #[arg(long)]
        t: PathBuf,
        /// `{"act": [[…]]}`, indexed `[t][a]`.
        #[arg(long)]
        action: Option<PathBuf>,
        /// `{"epsilon": […]}`, required by `rsd`.
        #[arg(long)]
        eps: Option<PathBuf>,
        /// `{"map": […]}`, the map `K → E(T)` required by `hwr-eta`.
        #[arg(long)]
        eta: Option<PathBuf>,
        /// Write the instance JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sizes of the translational hull and, given a congruence, of its
    /// respecting and projecting parts.
    Trhull {
        instance: PathBuf,
        #[arg(long)]
        congruence: Option<PathBuf>,
    },
    /// Check (AFR) and its equivalent forms for an action and an `ε`.
    CheckAfr {
        #[arg(long)]
        k: PathBuf,
        #[arg(long)]
        t: PathBuf,
        action: PathBuf,
        eps: PathBuf,
    },
    /// Check that `(S, θ)` solves the extension problem `(K, η, T)`.
    CheckSolution { triple: PathBuf, solution: PathBuf },
    /// Almost Billhardt transversals.
    #[command(subcommand)]
    Billhardt(BillhardtCommand),
    /// Run a statement verifier over the fixture catalog.
    Verify {
        suite: Suite,
        #[arg(long, default_value_t = Bounds::default().max_order)]
        max_order: usize,
        #[arg(long, default_value_t = Bounds::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = Bounds::default().samples)]
        samples: usize,
        /// Sweep the instances in this directory instead of the built-in catalog.
        #[arg(long)]
        sweep: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BillhardtCommand {
    /// Search for a transversal and emit its certificate.
    Find {
        instance: PathBuf,
        congruence: PathBuf,
        #[arg(long)]
        split: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed `S` into Houghton's wreath product along `η` and emit that
    /// product with the embedding.
    Embed {
        instance: PathBuf,
        congruence: PathBuf,
        #[arg(long)]
        split: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProductKind {
    Lsd,
    Rsd,
    Hwr,
    HwrEta,
    Lwr,
}

/// Verifier tokens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Every suite in order.
    All,
    /// A normal extension embeds in a λ-semidirect product iff it embeds in
    /// a full restricted semidirect product; both constructions are valid
    /// with the stated Kernels.
    #[value(name = "prop-2.2")]
    SemidirectEmbeddings,
    /// A λ-semidirect product is isomorphic, as a normal extension, to the
    /// full restricted product of its Kernel.
    #[value(name = "lemma-2.1")]
    LambdaToRestricted,
    /// (AFR) is equivalent to (AE7) with (AE8), and to the class-wise form.
    #[value(name = "prop-3.1")]
    AfrForms,
    /// Under (AFR) the Kernel is a strong semilattice of the `K_e`.
    #[value(name = "cor-3.4")]
    StrongSemilattice,
    /// Restriction to quotients maps `Ω(S,θ)` onto `Π(S/θ)` with kernel
    /// `Ω(θ)`, and `S` embeds via inner bitranslations.
    #[value(name = "prop-3.5")]
    HullRestriction,
    /// `ω_[t]` is a θ-respecting bitranslation projecting to `ω_t`.
    #[value(name = "lemma-3.6")]
    BracketProjection,
    /// `t ↦ ω_[t]` is an injective homomorphism.
    #[value(name = "lemma-3.7")]
    BracketHomomorphism,
    /// The two product identities for `ω_[t]`.
    #[value(name = "lemma-3.8")]
    BracketIdentities,
    /// (Split) almost Billhardt iff a suitable inverse subsemigroup between
    /// `Π(S)` and `Ω(S,θ)` carries a (split) Billhardt congruence.
    #[value(name = "prop-3.9")]
    TransversalCriteria,
    /// Full restricted products are exactly the split almost Billhardt
    /// extensions, and the two constructions invert each other.
    #[value(name = "thm-3.10")]
    SplitRoundTrip,
    /// `P^η` is an inverse subsemigroup of the partial function semigroup
    /// and the wreath product along `η` sits inside Houghton's.
    #[value(name = "prop-4.1")]
    WreathAlongEta,
    /// An almost Billhardt extension embeds in the wreath product along `η`.
    #[value(name = "thm-4.2")]
    WreathEmbedding,
    /// Restriction is an isomorphism from the λ-wreath product onto
    /// Houghton's wreath product.
    #[value(name = "remark-4.3")]
    WreathRestriction,
}

impl Suite {
    pub fn token(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::SemidirectEmbeddings => "prop-2.2",
            Suite::LambdaToRestricted => "lemma-2.1",
            Suite::AfrForms => "prop-3.1",
            Suite::StrongSemilattice => "cor-3.4",
            Suite::HullRestriction => "prop-3.5",
            Suite::BracketProjection => "lemma-3.6",
            Suite::BracketHomomorphism => "lemma-3.7",
            Suite::BracketIdentities => "lemma-3.8",
            Suite::TransversalCriteria => "prop-3.9",
            Suite::SplitRoundTrip => "thm-3.10",
            Suite::WreathAlongEta => "prop-4.1",
            Suite::WreathEmbedding => "thm-4.2",
            Suite::WreathRestriction => "remark-4.3",
        }
    }
}

/// What a run printed and how it ended.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Outcome {
                code,
                stdout,
                stderr,
                report: None,
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(Failure::Usage(format!("--jobs {n}: {e}"))),
        },
        None => dispatch(&cli.command),
    };
    let mut report = match result {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => return failure(EXIT_USAGE, format!("error: {msg}\n")),
        Err(Failure::Core(e @ Error::TooLarge { .. })) => {
            return failure(EXIT_TOO_LARGE, format!("error: {e}\n"))
        }
        Err(Failure::Core(e)) => {
            let mut r = Report::new(echo(&cli.command));
            r.check("input", Err(e.to_string()));
            r
        }
    };
    report.elapsed_ms = start.elapsed().as_millis();
    let stdout = if cli.json {
        serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"
    } else {
        report.to_text()
    };
    Outcome {
        code: if report.passed() {
            EXIT_PASS
        } else {
            EXIT_FAIL
        },
        stdout,
        stderr: String::new(),
        report: Some(report),
    }
}

fn failure(code: i32, stderr: String) -> Outcome {
    Outcome {
        code,
        stdout: String::new(),
        stderr,
        report: None,
    }
}

fn echo(command: &Command) -> String {
    let p = |x: &Path| x.display().to_string();
    match command {
        Command::Validate { instance } => format!("validate {}", p(instance)),
        Command::Congruences { instance } => format!("congruences {}", p(instance)),
        Command::Product { kind, k, t, .. } => {
            let name = kind
                .to_possible_value()
                .map(|v| v.get_name().to_string())
                .unwrap_or_default();
            format!("product {name} --k {} --t {}", p(k), p(t))
        }
        Command::Trhull {
            instance,
            congruence,
        } => match congruence {
            Some(c) => format!("trhull {} --congruence {}", p(instance), p(c)),
            None => format!("trhull {}", p(instance)),
        },
        Command::CheckAfr { k, t, action, eps } => {
            format!(
                "check-afr --k {} --t {} {} {}",
                p(k),
                p(t),
                p(action),
                p(eps)
            )
        }
        Command::CheckSolution { triple, solution } => {
            format!("check-solution {} {}", p(triple), p(solution))
        }
        Command::Billhardt(BillhardtCommand::Find {
            instance,
            congruence,
            split,
            ..
        }) => {
            format!(
                "billhardt find {} {}{}",
                p(instance),
                p(congruence),
                if *split { " --split" } else { "" }
            )
        }
        Command::Billhardt(BillhardtCommand::Embed {
            instance,
            congruence,
            split,
            ..
        }) => {
            format!(
                "billhardt embed {} {}{}",
                p(instance),
                p(congruence),
                if *split { " --split" } else { "" }
            )
        }
        Command::Verify { suite, .. } => format!("verify {}", suite.token()),
    }
}

fn dispatch(command: &Command) -> CliResult<Report> {
    let mut r = Report::new(echo(command));
    match command {
        Command::Validate { instance } => cmd_validate(&mut r, instance)?,
        Command::Congruences { instance } => cmd_congruences(&mut r, instance)?,
        Command::Product {
            kind,
            k,
            t,
            action,
            eps,
            eta,
            out,
        } => cmd_product(
            &mut r,
            *kind,
            k,
            t,
            action.as_deref(),
            eps.as_deref(),
            eta.as_deref(),
            out.as_deref(),
        )?,
        Command::Trhull {
            instance,
            congruence,
        } => cmd_trhull(&mut r, instance, congruence.as_deref())?,
        Command::CheckAfr { k, t, action, eps } => cmd_check_afr(&mut r, k, t, action, eps)?,
        Command::CheckSolution { triple, solution } => {
            cmd_check_solution(&mut r, triple, solution)?
        }
        Command::Billhardt(BillhardtCommand::Find {
            instance,
            congruence,
            split,
            out,
        }) => cmd_billhardt(&mut r, instance, congruence, *split, false, out.as_deref())?,
        Command::Billhardt(BillhardtCommand::Embed {
            instance,
            congruence,
            split,
            out,
        }) => cmd_billhardt(&mut r, instance, congruence, *split, true, out.as_deref())?,
        Command::Verify {
            suite,
            max_order,
            seed,
            samples,
            sweep,
        } => {
            let bounds = Bounds {
                max_order: *max_order,
                seed: *seed,
                samples: *samples,
            };
            let catalog = match sweep {
                Some(dir) => io::read_catalog(dir)?,
                None => fixtures::catalog(),
            };
            r = run_suite_on(suite.token(), &bounds, &catalog)?;
        }
    }
    Ok(r)
}

fn load(r: &mut Report, label: &str, path: &Path) -> CliResult<InverseSemigroup> {
    let s = io::read_instance(path)?;
    r.digests.insert(label.to_string(), digest(&s));
    Ok(s)
}

fn write_artifact(r: &mut Report, out: Option<&Path>, value: &Value) -> CliResult<()> {
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(value).expect("artifacts serialize");
        std::fs::write(path, text + "\n")
            .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
        r.observations.push(format!("wrote {}", path.display()));
    }
    Ok(())
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("artifacts serialize")
}

fn cmd_validate(r: &mut Report, path: &Path) -> CliResult<()> {
    let source: io::InstanceSource = io::read_json(path)?;
    match source.to_semigroup() {
        Ok(s) => {
            r.digests.insert("instance".into(), digest(&s));
            r.check("inverse-semigroup", Ok(()));
            r.observations.push(format!(
                "order {}, {} idempotents{}",
                s.order(),
                s.idempotents().len(),
                if s.is_group() {
                    ", a group"
                } else if s.is_semilattice() {
                    ", a semilattice"
                } else {
                    ""
                }
            ));
            r.result = Some(to_value(&InstanceJson::from_semigroup(&s)));
        }
        Err(e @ Error::TooLarge { .. }) => return Err(e.into()),
        Err(e) => r.check("inverse-semigroup", Err(e.to_string())),
    }
    Ok(())
}

#[derive(Serialize)]
struct CongruenceEntry {
    class_of: Vec<usize>,
    classes: usize,
    kernel: Vec<usize>,
    trace: CongruenceJson,
}

fn cmd_congruences(r: &mut Report, path: &Path) -> CliResult<()> {
    let s = load(r, "instance", path)?;
    let all = enumerate_congruences(&s)?;
    if s.order() <= PARTITION_SCAN_BOUND {
        let by_partitions = enumerate_by_partitions(&s, PARTITION_SCAN_BOUND)?;
        let by_closure = enumerate_by_closure(&s, CLOSURE_BOUND)?;
        let outcome = if by_partitions == by_closure {
            Ok(())
        } else {
            Err(format!(
                "partition scan found {}, closure found {}",
                by_partitions.len(),
                by_closure.len()
            ))
        };
        r.check("engines-agree", outcome);
    }
    let mut entries = Vec::with_capacity(all.len());
    for (i, theta) in all.iter().enumerate() {
        let ker = kernel(&s, theta).to_vec();
        let tr = trace(&s, theta);
        let names: Vec<String> = ker.iter().map(|&a| s.name(a)).collect();
        r.observations.push(format!(
            "θ{i}: {} classes, Kernel {{{}}}, trace with {} classes",
            theta.class_count(),
            names.join(", "),
            tr.class_count()
        ));
        entries.push(CongruenceEntry {
            class_of: theta.labels(),
            classes: theta.class_count(),
            kernel: ker,
            trace: tr.to_json(),
        });
    }
    r.result = Some(to_value(&entries));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_product(
    r: &mut Report,
    kind: ProductKind,
    k_path: &Path,
    t_path: &Path,
    action_path: Option<&Path>,
    eps_path: Option<&Path>,
    eta_path: Option<&Path>,
    out: Option<&Path>,
) -> CliResult<()> {
    let k = load(r, "k", k_path)?;
    let t = load(r, "t", t_path)?;
    let need = |p: Option<&Path>, flag: &str| {
        p.map(Path::to_path_buf)
            .ok_or_else(|| Failure::Usage(format!("this product needs --{flag}")))
    };
    let action = |path: &Path| -> CliResult<EndoAction> {
        let json: ActionJson = io::read_json(path)?;
        Ok(io::action_from_json(&t, &k, &json)?)
    };
    let mut provenance = json!({
        "k": digest(&k),
        "t": digest(&t),
    });
    let (construction, semigroup) = match kind {
        ProductKind::Lsd => {
            let a = action(&need(action_path, "action")?)?;
            provenance["action"] = to_value(&a.rows());
            ("lambda-semidirect", build_lsd(&a)?.semigroup)
        }
        ProductKind::Rsd => {
            let a = action(&need(action_path, "action")?)?;
            let eps_json: EpsilonJson = io::read_json(&need(eps_path, "eps")?)?;
            let eps = io::epsilon_from_json(&a, &eps_json)?;
            if let Err(v) = check_afr(&a, &eps) {
                r.check("afr", Err(format!("a={}, e={}", v.a, v.e)));
                return Ok(());
            }
            provenance["action"] = to_value(&a.rows());
            provenance["epsilon"] = to_value(&eps.map());
            ("full-restricted-semidirect", build_rsd(&a, &eps)?.semigroup)
        }
        ProductKind::Hwr => ("houghton-wreath", build_hwr(&k, &t)?.semigroup()?.clone()),
        ProductKind::HwrEta => {
            let eta: MorphismJson = io::read_json(&need(eta_path, "eta")?)?;
            let triple = NormalExtensionTriple::new(k.clone(), t.clone(), eta.map.clone())?;
            provenance["eta"] = to_value(&eta.map);
            (
                "houghton-wreath-along-eta",
                build_hwr_eta(&triple)?.semigroup()?.clone(),
            )
        }
        ProductKind::Lwr => ("lambda-wreath", build_lwr(&k, &t)?.semigroup()?.clone()),
    };
    provenance["construction"] = json!(construction);
    r.check(
        "valid",
        validate(semigroup.base().clone())
            .map(|_| ())
            .map_err(|e| e.to_string()),
    );
    r.observations.push(format!(
        "{construction} product of order {}",
        semigroup.order()
    ));
    let mut artifact = to_value(&InstanceJson::from_semigroup(&semigroup));
    artifact["provenance"] = provenance;
    write_artifact(r, out, &artifact)?;
    r.result = Some(artifact);
    Ok(())
}

fn cmd_trhull(r: &mut Report, path: &Path, congruence: Option<&Path>) -> CliResult<()> {
    let s = load(r, "instance", path)?;
    let hull = enumerate_hull(&s)?;
    r.check(
        "hull-identities",
        hull_identities(&hull).map_err(|e| format!("{e:?}")),
    );
    r.observations.push(format!(
        "|Ω(S)| = {}, inner part {}",
        hull.order(),
        hull.inner_set().len()
    ));
    let elements: Vec<BitranslationJson> = hull
        .elements()
        .iter()
        .map(BitranslationJson::from)
        .collect();
    let mut result = json!({ "omega": hull.order(), "elements": elements });
    if let Some(c) = congruence {
        let cj: CongruenceJson = io::read_json(c)?;
        let theta = io::congruence_from_json(&s, &cj)?;
        let sol = ExtensionSolution::new(s.clone(), theta.clone())?;
        let eh = extension_hull_from(&sol, hull.clone())?;
        r.check("structure", restriction_to_quotient_check(&eh));
        r.observations
            .push(format!("|Ω_θ(S)| = {}", eh.respecting.len()));
        r.observations.push(format!("|Ω(S,θ)| = {}", eh.order()));
        let outside = (0..hull.order()).find(|&i| !eh.respecting.contains(i));
        if let Some(i) = outside {
            if let Some((a, b)) = respect_witness(hull.element(i), &theta) {
                r.observations.push(format!(
                    "ω{i} does not respect θ: {a} θ {b} is not preserved"
                ));
            }
        }
        let unprojected = eh.respecting.iter().find(|&i| eh.sub.local(i).is_none());
        if let Some(i) = unprojected {
            r.observations
                .push(format!("ω{i} respects θ but its restriction is not inner"));
        }
        result["omega_theta"] = json!(eh.respecting.len());
        result["omega_s_theta"] = json!(eh.order());
        result["respecting"] = json!(eh.respecting.to_vec());
        result["members"] = json!(eh.sub.embedding);
    }
    r.result = Some(result);
    Ok(())
}

fn cmd_check_afr(r: &mut Report, k: &Path, t: &Path, action: &Path, eps: &Path) -> CliResult<()> {
    let k = load(r, "k", k)?;
    let t = load(r, "t", t)?;
    let a = io::action_from_json(&t, &k, &io::read_json(action)?)?;
    let e = io::epsilon_from_json(&a, &io::read_json(eps)?)?;
    let afr = check_afr(&a, &e).map_err(|v| format!("a={}, e={}", v.a, v.e));
    let ae = check_ae7_ae8(&a, &e).map_err(|v| format!("{v:?}"));
    let modified = check_modified(&a, &e.classes(t.order())).map_err(|v| format!("{v:?}"));
    let agree = afr.is_ok() == ae.is_ok() && afr.is_ok() == modified.is_ok();
    r.check("afr", afr);
    r.check("ae7-ae8", ae);
    r.check("modified", modified);
    if !agree {
        r.observations.push("the three forms disagree".into());
    }
    Ok(())
}

fn cmd_check_solution(r: &mut Report, triple: &Path, solution: &Path) -> CliResult<()> {
    let triple = io::read_json::<TripleJson>(triple)?.to_triple()?;
    let sol = io::read_json::<SolutionJson>(solution)?.to_solution()?;
    r.digests.insert("k".into(), digest(&triple.k));
    r.digests.insert("t".into(), digest(&triple.t));
    r.digests.insert("s".into(), digest(&sol.s));
    match solves(&triple, &sol)? {
        Ok(w) => {
            r.check("solves", Ok(()));
            r.result = Some(json!({ "chi": w.chi, "psi": w.psi.map() }));
        }
        Err(f) => r.check("solves", Err(format!("{f:?}"))),
    }
    Ok(())
}

fn cmd_billhardt(
    r: &mut Report,
    path: &Path,
    congruence: &Path,
    split: bool,
    embed: bool,
    out: Option<&Path>,
) -> CliResult<()> {
    let s = load(r, "instance", path)?;
    let cj: CongruenceJson = io::read_json(congruence)?;
    let theta = io::congruence_from_json(&s, &cj)?;
    let sol = ExtensionSolution::new(s, theta)?;
    let eh = hull_of_extension(&sol)?;
    let kind = if split {
        "split almost Billhardt"
    } else {
        "almost Billhardt"
    };
    let Some(xi) = find_transversal(&eh, split) else {
        r.check("transversal", Err(format!("no {kind} transversal")));
        return Ok(());
    };
    r.check(
        "transversal",
        validate_transversal(&sol, xi.xi.clone(), split)
            .map(|_| ())
            .map_err(|e| e.to_string()),
    );
    let classification = classify_classical(&sol, &xi.xi);
    r.observations.push(format!(
        "{kind} transversal found; classical: {}",
        to_value(&classification)
    ));
    if !embed {
        let artifact = to_value(&xi.to_json(&sol));
        write_artifact(r, out, &artifact)?;
        r.result = Some(artifact);
        return Ok(());
    }
    let emb = thm42_embedding(&sol, &xi)?;
    r.check("embedding", emb.verify(&sol, &xi));
    let (Some(psi), Ok(h)) = (&emb.psi_index, emb.hwr_eta.semigroup()) else {
        let t = &emb.triple.t;
        let shape = kernel_class_shape(&emb.triple);
        let size = (0..t.order())
            .map(|x| {
                shape
                    .iter()
                    .find(|(e, _)| *e == t.ran(x))
                    .map_or(0, |&(_, n)| n)
            })
            .fold(0usize, usize::saturating_add);
        return Err(Error::TooLarge {
            what: "Houghton wreath product along η",
            size,
            bound: TABLE_CAP,
        }
        .into());
    };
    r.observations
        .push(format!("wreath product along η has order {}", h.order()));
    let artifact = json!({
        "hwr_eta": InstanceJson::from_semigroup(h),
        "psi": psi,
        "transversal": xi.to_json(&sol),
    });
    write_artifact(r, out, &artifact)?;
    r.result = Some(artifact);
    Ok(())
}
