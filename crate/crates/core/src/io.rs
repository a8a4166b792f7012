//! JSON file formats: instances, congruences, actions, epsilon maps,
//! triples, solutions and generator lists.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::action::{ActionJson, EndoAction, EpsilonJson, EpsilonMap};
use crate::congruence::{is_congruence, Congruence, CongruenceJson};
use crate::error::{Error, Result};
use crate::fixtures::Fixture;
use crate::morphism::{ExtensionSolution, NormalExtensionTriple};
use crate::pbij::{generate, PartialBijection, PartialBijectionJson};
use crate::semigroup::{validate, FiniteSemigroup, InverseSemigroup};

/// `{"order": n, "table": [[…]], "names": […]}`; emitted instances also
/// carry `inv` and `idempotents`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inv: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotents: Option<Vec<usize>>,
}

impl InstanceJson {
    pub fn from_semigroup(s: &InverseSemigroup) -> Self {
        Self {
            order: s.order(),
            table: s.rows(),
            names: s.base().names().map(<[String]>::to_vec),
            inv: Some(s.inverse_map()),
            idempotents: Some(s.idempotents().to_vec()),
        }
    }

    /// The table, checked for shape only.
    pub fn to_table(&self) -> Result<FiniteSemigroup> {
        if self.table.len() != self.order {
            return Err(Error::Malformed(format!(
                "order is {} but the table has {} rows",
                self.order,
                self.table.len()
            )));
        }
        let table = FiniteSemigroup::new(self.table.clone())?;
        match &self.names {
            Some(names) => table.with_names(names.clone()),
            None => Ok(table),
        }
    }

    pub fn to_semigroup(&self) -> Result<InverseSemigroup> {
        validate(self.to_table()?)
    }
}

/// `{"k": instance, "t": instance, "eta": […]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripleJson {
    pub k: InstanceJson,
    pub t: InstanceJson,
    pub eta: Vec<usize>,
}

impl TripleJson {
    pub fn to_triple(&self) -> Result<NormalExtensionTriple> {
        NormalExtensionTriple::new(
            self.k.to_semigroup()?,
            self.t.to_semigroup()?,
            self.eta.clone(),
        )
    }
}

/// `{"s": instance, "theta": {"class_of": […]}}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolutionJson {
    pub s: InstanceJson,
    pub theta: CongruenceJson,
}

impl SolutionJson {
    pub fn to_solution(&self) -> Result<ExtensionSolution> {
        let s = self.s.to_semigroup()?;
        let theta = congruence_from_json(&s, &self.theta)?;
        ExtensionSolution::new(s, theta)
    }
}

pub fn congruence_from_json(s: &InverseSemigroup, json: &CongruenceJson) -> Result<Congruence> {
    if json.class_of.len() != s.order() {
        return Err(Error::Malformed(format!(
            "congruence labels {} elements of a semigroup of order {}",
            json.class_of.len(),
            s.order()
        )));
    }
    is_congruence(s, &json.class_of)
}

pub fn action_from_json(
    t: &InverseSemigroup,
    k: &InverseSemigroup,
    json: &ActionJson,
) -> Result<EndoAction> {
    EndoAction::validate(t.clone(), k.clone(), &json.act)
}

pub fn epsilon_from_json(action: &EndoAction, json: &EpsilonJson) -> Result<EpsilonMap> {
    EpsilonMap::new(action, json.epsilon.clone())
}

/// Generator lists: a JSON array of `{"degree", "graph"}` objects.
pub fn generators_from_json(json: &[PartialBijectionJson]) -> Result<Vec<PartialBijection>> {
    json.iter().map(PartialBijection::from_json).collect()
}

/// Reads and parses a JSON file.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

/// An instance file: a table, or a list of partial bijections to close.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    Table(InstanceJson),
    Generators(Vec<PartialBijectionJson>),
}

impl InstanceSource {
    pub fn to_semigroup(&self) -> Result<InverseSemigroup> {
        match self {
            InstanceSource::Table(t) => t.to_semigroup(),
            InstanceSource::Generators(g) => {
                let gens = generators_from_json(g)?;
                let degree = gens.first().map_or(0, PartialBijection::degree);
                Ok(generate(degree, &gens)?.semigroup)
            }
        }
    }
}

pub fn read_instance(path: &Path) -> Result<InverseSemigroup> {
    read_json::<InstanceSource>(path)?.to_semigroup()
}

/// Every `*.json` instance in `dir`, named by file stem, sorted by order
/// and then name.
pub fn read_catalog(dir: &Path) -> Result<Vec<Fixture>> {
    let entries =
        fs::read_dir(dir).map_err(|e| Error::Malformed(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut out = Vec::with_capacity(paths.len());
    for p in paths {
        let name = p
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        out.push(Fixture {
            name,
            semigroup: read_instance(&p)?,
        });
    }
    out.sort_by_key(|f| f.semigroup.order());
    Ok(out)
}
