//! JSON documents: systems, maps, chart programs and workspaces bundling them.
//!
//! Rationals are written as strings (`"3"`, `"-1/2"`); bare JSON integers are
//! accepted on input. Load errors carry a path into the document.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::admissible::SystemMap;
use crate::chartcalc::{BaseCoord, ModelCorner};
use crate::error::{Error, Result};
use crate::exactla::{format_rational, parse_rational, Matrix, Rational, Subspace};
use crate::linsys::LinearSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatLit {
    Str(String),
    Int(i64),
}

impl RatLit {
    fn value(&self, path: &str) -> Result<Rational> {
        match self {
            RatLit::Str(s) => parse_rational(s).map_err(|e| Error::doc(path, e.to_string())),
            RatLit::Int(i) => Ok(Rational::from_integer((*i).into())),
        }
    }
}

impl From<&Rational> for RatLit {
    fn from(r: &Rational) -> Self {
        RatLit::Str(format_rational(r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub basis: Vec<Vec<RatLit>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    pub ambient: usize,
    pub subspaces: Vec<SubspaceDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemRef {
    Named(String),
    Inline(SystemDoc),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub name: String,
    pub matrix: Vec<Vec<RatLit>>,
    pub domain: SystemRef,
    pub codomain: SystemRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CornerDoc {
    pub coords: Vec<BaseCoord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramDoc {
    pub corner: CornerDoc,
    pub centers: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceDoc {
    #[serde(default)]
    pub systems: BTreeMap<String, SystemDoc>,
    #[serde(default)]
    pub maps: Vec<MapDoc>,
    #[serde(default)]
    pub programs: BTreeMap<String, ProgramDoc>,
}

/// A loaded chart program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub corner: ModelCorner,
    pub centers: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub systems: BTreeMap<String, LinearSystem>,
    pub maps: BTreeMap<String, SystemMap>,
    pub programs: BTreeMap<String, Program>,
}

impl Workspace {
    pub fn map(&self, name: &str) -> Result<&SystemMap> {
        self.maps
            .get(name)
            .ok_or_else(|| Error::doc("$.maps", format!("no map named {name:?}")))
    }

    pub fn system(&self, name: &str) -> Result<&LinearSystem> {
        self.systems
            .get(name)
            .ok_or_else(|| Error::doc("$.systems", format!("no system named {name:?}")))
    }

    pub fn program(&self, name: &str) -> Result<&Program> {
        self.programs
            .get(name)
            .ok_or_else(|| Error::doc("$.programs", format!("no program named {name:?}")))
    }
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::doc("$", e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn matrix_of(rows: &[Vec<RatLit>], cols: Option<usize>, path: &str) -> Result<(usize, Vec<Vec<Rational>>)> {
    let width = cols.or_else(|| rows.first().map(Vec::len)).unwrap_or(0);
    let mut out = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{r}]");
        if row.len() != width {
            return Err(Error::doc(&rp, format!("row has {} entries, expected {width}", row.len())));
        }
        out.push(
            row.iter()
                .enumerate()
                .map(|(c, x)| x.value(&format!("{rp}[{c}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok((width, out))
}

/// Closes the listed subspaces into a system, keeping their names.
pub fn load_system(doc: &SystemDoc, path: &str) -> Result<LinearSystem> {
    let mut gens = Vec::with_capacity(doc.subspaces.len());
    let mut names = HashSet::new();
    for (i, s) in doc.subspaces.iter().enumerate() {
        let sp = format!("{path}.subspaces[{i}]");
        let label = s.name.clone().unwrap_or_else(|| format!("#{i}"));
        if let Some(n) = &s.name {
            if !names.insert(n.clone()) {
                return Err(Error::doc(&sp, format!("duplicate subspace name {n:?}")));
            }
        }
        let (_, rows) = matrix_of(&s.basis, Some(doc.ambient), &format!("{sp}.basis"))
            .map_err(|e| match e {
                Error::Document { path, reason } => Error::doc(path, format!("subspace {label}: {reason}")),
                e => e,
            })?;
        gens.push((s.name.clone(), Subspace::canonicalize(doc.ambient, &rows)?));
    }
    for (i, (n, g)) in gens.iter().enumerate() {
        if let Some(n) = n {
            if let Some((m, _)) = gens[..i].iter().find(|(m, h)| m.is_some() && h == g) {
                return Err(Error::doc(
                    format!("{path}.subspaces[{i}]"),
                    format!("{n:?} is the same subspace as {:?}", m.as_deref().unwrap_or("")),
                ));
            }
        }
    }
    let sys = LinearSystem::close_named(doc.ambient, gens).map_err(|e| Error::doc(path, e.to_string()))?;
    let mut seen = HashSet::new();
    for n in sys.names() {
        if !seen.insert(n) {
            return Err(Error::doc(path, format!("member name {n:?} is used twice")));
        }
    }
    Ok(sys)
}

/// Every member, named, in canonical order.
pub fn system_doc(sys: &LinearSystem) -> SystemDoc {
    SystemDoc {
        ambient: sys.ambient(),
        subspaces: sys
            .members()
            .iter()
            .zip(sys.names())
            .map(|(v, n)| SubspaceDoc {
                name: Some(n.clone()),
                basis: v.basis().row_vecs().iter().map(|r| r.iter().map(RatLit::from).collect()).collect(),
            })
            .collect(),
    }
}

pub fn matrix_doc(m: &Matrix) -> Vec<Vec<RatLit>> {
    m.row_vecs().iter().map(|r| r.iter().map(RatLit::from).collect()).collect()
}

pub fn load_program(doc: &ProgramDoc, path: &str) -> Result<Program> {
    let corner = ModelCorner::new(doc.corner.coords.clone()).map_err(|e| Error::doc(format!("{path}.corner"), e.to_string()))?;
    for (i, c) in doc.centers.iter().enumerate() {
        for (j, l) in c.iter().enumerate() {
            if corner.position(l).is_none() {
                return Err(Error::doc(format!("{path}.centers[{i}][{j}]"), format!("unknown coordinate {l:?}")));
            }
        }
    }
    Ok(Program { corner, centers: doc.centers.clone() })
}

fn resolve(r: &SystemRef, systems: &BTreeMap<String, LinearSystem>, path: &str) -> Result<LinearSystem> {
    match r {
        SystemRef::Named(n) => systems
            .get(n)
            .cloned()
            .ok_or_else(|| Error::doc(path, format!("unknown system reference {n:?}"))),
        SystemRef::Inline(doc) => load_system(doc, path),
    }
}

pub fn load_map(doc: &MapDoc, systems: &BTreeMap<String, LinearSystem>, path: &str) -> Result<SystemMap> {
    let domain = resolve(&doc.domain, systems, &format!("{path}.domain"))?;
    let codomain = resolve(&doc.codomain, systems, &format!("{path}.codomain"))?;
    let (_, rows) = matrix_of(&doc.matrix, Some(domain.ambient()), &format!("{path}.matrix"))?;
    if rows.len() != codomain.ambient() {
        return Err(Error::doc(
            format!("{path}.matrix"),
            format!("{} rows, codomain has dimension {}", rows.len(), codomain.ambient()),
        ));
    }
    let m = if rows.is_empty() {
        Matrix::zeros(0, domain.ambient())
    } else {
        Matrix::from_rows(domain.ambient(), &rows)?
    };
    SystemMap::new(doc.name.clone(), m, domain, codomain).map_err(|e| Error::doc(path, e.to_string()))
}

pub fn load_workspace(doc: &WorkspaceDoc) -> Result<Workspace> {
    let mut ws = Workspace::default();
    for (name, s) in &doc.systems {
        let sys = load_system(s, &format!("$.systems.{name}"))?;
        ws.systems.insert(name.clone(), sys);
    }
    for (i, m) in doc.maps.iter().enumerate() {
        let path = format!("$.maps[{i}]");
        if ws.maps.contains_key(&m.name) {
            return Err(Error::doc(path, format!("duplicate map name {:?}", m.name)));
        }
        let f = load_map(m, &ws.systems, &path)?;
        ws.maps.insert(m.name.clone(), f);
    }
    for (name, p) in &doc.programs {
        let prog = load_program(p, &format!("$.programs.{name}"))?;
        ws.programs.insert(name.clone(), prog);
    }
    Ok(ws)
}
