//! File loading: the format is picked by extension, JSON mirrors by their
//! fields. Sets need their ambient monoid, which is found next to the set
//! file by its declared name.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use kprime_core::aset::FiniteASet;
use kprime_core::group::GroupTable;
use kprime_core::io;
use kprime_core::monoid::FiniteMonoid;
use kprime_core::nset::FgNSet;

use crate::Failure;

pub enum Loaded {
    Monoid(Arc<FiniteMonoid>),
    Group(GroupTable),
    Set { monoid: Arc<FiniteMonoid>, set: FiniteASet },
    Graph(FgNSet),
}

impl Loaded {
    pub fn kind(&self) -> &'static str {
        match self {
            Loaded::Monoid(_) => "monoid",
            Loaded::Group(_) => "group",
            Loaded::Set { .. } => "pointed set",
            Loaded::Graph(_) => "graph",
        }
    }
}

pub fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn at<E: std::fmt::Display>(path: &Path) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::input(format!("{}: {e}", path.display()))
}

pub fn load(path: &Path) -> Result<Loaded, Failure> {
    let text = read(path)?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    match ext {
        "monoid" => Ok(Loaded::Monoid(io::parse_monoid(&text).map_err(at(path))?.into_arc())),
        "group" => Ok(Loaded::Group(io::parse_group(&text).map_err(at(path))?)),
        "aset" => {
            let label = io::aset_declared_monoid(&text).map_err(at(path))?;
            let monoid = resolve_monoid(path, &label)?;
            let set = io::parse_aset(&text, &monoid).map_err(at(path))?;
            Ok(Loaded::Set { monoid, set })
        }
        "nset" => Ok(Loaded::Graph(io::parse_nset(&text).map_err(at(path))?)),
        "json" => load_json(path, &text),
        other => Err(Failure::input(format!(
            "{}: unknown extension {other:?}, expected monoid, group, aset, nset, or json",
            path.display()
        ))),
    }
}

/// JSON mirrors carry no extension hint, so the object is identified by its
/// fields: `act` marks a set, `succ` a graph, `mul` a monoid or group table.
fn load_json(path: &Path, text: &str) -> Result<Loaded, Failure> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(at(path))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Failure::input(format!("{}: expected a JSON object", path.display())))?;
    if obj.contains_key("act") {
        let label = obj.get("monoid").and_then(|v| v.as_str()).ok_or_else(|| {
            Failure::input(format!("{}: set mirror is missing its monoid name", path.display()))
        })?;
        let monoid = resolve_monoid(path, label)?;
        let set = io::aset_from_json(text, &monoid).map_err(at(path))?;
        Ok(Loaded::Set { monoid, set })
    } else if obj.contains_key("succ") {
        Ok(Loaded::Graph(io::nset_from_json(text).map_err(at(path))?))
    } else if obj.contains_key("mul") {
        match io::monoid_from_json(text) {
            Ok(m) => Ok(Loaded::Monoid(m.into_arc())),
            Err(monoid_err) => match io::group_from_json(text) {
                Ok(g) => Ok(Loaded::Group(g)),
                Err(_) => Err(at(path)(monoid_err)),
            },
        }
    } else {
        Err(Failure::input(format!(
            "{}: no act, succ, or mul field, so not a known mirror",
            path.display()
        )))
    }
}

pub fn load_monoid(path: &Path) -> Result<Arc<FiniteMonoid>, Failure> {
    match load(path)? {
        Loaded::Monoid(m) => Ok(m),
        other => Err(Failure::input(format!(
            "{}: expected a monoid, found a {}",
            path.display(),
            other.kind()
        ))),
    }
}

pub fn load_group(path: &Path) -> Result<GroupTable, Failure> {
    match load(path)? {
        Loaded::Group(g) => Ok(g),
        other => Err(Failure::input(format!(
            "{}: expected a group, found a {}",
            path.display(),
            other.kind()
        ))),
    }
}

/// Find the monoid a set declares: first `<label>.monoid` in the set's
/// directory, then any sibling `.monoid` file whose header carries the
/// label. Labels need not be filename-safe, hence the scan.
fn resolve_monoid(set_path: &Path, label: &str) -> Result<Arc<FiniteMonoid>, Failure> {
    let dir = match set_path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let direct = dir.join(format!("{label}.monoid"));
    if direct.is_file() {
        let m = io::parse_monoid(&read(&direct)?).map_err(at(&direct))?;
        if m.label() == label {
            return Ok(m.into_arc());
        }
    }
    let mut siblings: Vec<PathBuf> = fs::read_dir(&dir)
        .map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("monoid"))
        .collect();
    siblings.sort();
    for candidate in siblings {
        if let Ok(m) = io::parse_monoid(&read(&candidate)?) {
            if m.label() == label {
                return Ok(m.into_arc());
            }
        }
    }
    Err(Failure::input(format!(
        "{}: no .monoid file named or labeled {label:?} found in {}",
        set_path.display(),
        dir.display()
    )))
}
