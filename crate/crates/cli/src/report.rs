//! The class-group report: one JSON schema shared by `k0` and `g0`, holding
//! the presentation, the group in canonical form, the class map, and the
//! cross-checks that were run on the way.

use std::fmt::Write as _;
use std::sync::Arc;

use kprime_core::aset::AdmissibleSeq;
use kprime_core::enumerate::SetFlavor;
use kprime_core::ktheory::{
    build_nset_presentation, build_presentation, devissage_check, g0_nset_reports, smith,
    ClassMap, ClassObject, K0Presentation,
};
use kprime_core::monoid::FiniteMonoid;
use kprime_core::snf::AbGroup;
use serde::Serialize;

use crate::Failure;

#[derive(Serialize)]
pub struct GeneratorEntry {
    pub label: String,
    /// Carrier size, basepoint included; core size for graph classes.
    pub size: usize,
}

#[derive(Serialize)]
pub struct ClassEntry {
    pub label: String,
    /// Canonical coordinates in the presented group, as decimal strings.
    pub coords: Vec<String>,
}

#[derive(Serialize)]
pub struct Checks {
    /// Classes decompose along the length filtration; absent when the
    /// monoid has no finite length or the source is a graph flavor.
    pub devissage: Option<bool>,
    /// Every relation came from a sequence whose maps revalidate, or for
    /// graphs, every class decomposed into its loop and tree parts.
    pub exactness: bool,
    /// Every relation row lands on the zero class of the presented group.
    pub additivity: bool,
}

impl Checks {
    pub fn all_pass(&self) -> bool {
        self.devissage != Some(false) && self.exactness && self.additivity
    }
}

#[derive(Serialize)]
pub struct GroupReport {
    pub monoid: String,
    pub flavor: String,
    pub bound: usize,
    pub generators: Vec<GeneratorEntry>,
    pub relations: Vec<Vec<i64>>,
    pub rank: usize,
    /// Invariant factors greater than one, as decimal strings.
    pub torsion: Vec<String>,
    pub classmap: Vec<ClassEntry>,
    pub checks: Checks,
}

pub fn set_group_report(
    monoid: &Arc<FiniteMonoid>,
    flavor: SetFlavor,
    bound: usize,
) -> Result<GroupReport, Failure> {
    let pres = build_presentation(monoid, flavor, bound);
    let (group, map) = smith(&pres);
    let additivity = relations_vanish(&pres);
    let exactness = pres.generators.iter().all(|g| match &g.object {
        ClassObject::Set(x) => {
            x.closed_subsets().iter().all(|s| AdmissibleSeq::from_subset(s).is_ok())
        }
        ClassObject::Graph(_) => true,
    });
    let devissage = match monoid.finite_length() {
        Ok(Some(_)) => Some(
            devissage_check(monoid, bound)
                .map_err(|e| Failure::input(e.to_string()))?
                .all_hold,
        ),
        _ => None,
    };
    Ok(assemble(
        monoid.label(),
        flavor.name(),
        bound,
        &pres,
        group,
        map,
        Checks { devissage, exactness, additivity },
    ))
}

pub fn graph_group_report(bound: usize, with_tails: bool) -> Result<GroupReport, Failure> {
    let pres = build_nset_presentation(bound, with_tails, 2);
    let (group, map) = smith(&pres);
    let additivity = relations_vanish(&pres);
    let (finite, tailed) = g0_nset_reports(bound, 2);
    let side = if with_tails { tailed } else { finite };
    let exactness =
        side.decompositions_hold && side.basis_unimodular && side.failures.is_empty();
    Ok(assemble(
        "N",
        if with_tails { "fgnset" } else { "nset" },
        bound,
        &pres,
        group,
        map,
        Checks { devissage: None, exactness, additivity },
    ))
}

fn relations_vanish(pres: &K0Presentation) -> bool {
    let pg = pres.presented_group();
    pres.relations.iter().all(|row| pg.is_zero_class_i64(row))
}

fn assemble(
    source: &str,
    flavor: &str,
    bound: usize,
    pres: &K0Presentation,
    group: AbGroup,
    map: ClassMap,
    checks: Checks,
) -> GroupReport {
    GroupReport {
        monoid: source.to_string(),
        flavor: flavor.to_string(),
        bound,
        generators: pres
            .generators
            .iter()
            .map(|g| GeneratorEntry { label: g.label.clone(), size: g.size })
            .collect(),
        relations: pres.relations.clone(),
        rank: group.rank,
        torsion: group.invariants.iter().map(|v| v.to_string()).collect(),
        classmap: map
            .labels
            .iter()
            .zip(&map.coords)
            .map(|(label, coords)| ClassEntry {
                label: label.clone(),
                coords: coords.iter().map(|z| z.to_string()).collect(),
            })
            .collect(),
        checks,
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn render(r: &GroupReport, cmd: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{cmd} over {}, flavor {}, bound {}", r.monoid, r.flavor, r.bound);
    let _ = writeln!(s, "generators ({}):", r.generators.len());
    for g in &r.generators {
        let _ = writeln!(s, "  {} (size {})", g.label, g.size);
    }
    let _ = writeln!(s, "relations: {}", r.relations.len());
    let torsion =
        if r.torsion.is_empty() { "none".to_string() } else { r.torsion.join(", ") };
    let _ = writeln!(s, "rank {}, torsion {torsion}", r.rank);
    let _ = writeln!(s, "classes:");
    for c in &r.classmap {
        let _ = writeln!(s, "  [{}] = ({})", c.label, c.coords.join(", "));
    }
    let devissage = match r.checks.devissage {
        Some(ok) => pass(ok),
        None => "n/a",
    };
    let _ = write!(
        s,
        "checks: devissage {devissage}, exactness {}, additivity {}",
        pass(r.checks.exactness),
        pass(r.checks.additivity)
    );
    s
}
