//! The bundled sample files: the monoids, groups, sets, and graphs that the
//! documentation and integration tests refer to, plus `manifest.json` with
//! expected facts. Everything is recomputed at generation time, so the
//! manifest never goes stale against the code that wrote it.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use kprime_core::aset::FiniteASet;
use kprime_core::group::GroupTable;
use kprime_core::io;
use kprime_core::ktheory::burnside;
use kprime_core::monoid::FiniteMonoid;
use kprime_core::nset::{FgNSet, FunctionalNSet};
use serde::Serialize;

use crate::Failure;

#[derive(Serialize)]
struct ManifestEntry {
    name: String,
    file: String,
    kind: String,
    expected: serde_json::Value,
    note: String,
}

fn monoids() -> Vec<(&'static str, FiniteMonoid)> {
    let z2m = FiniteMonoid::group_monoid(&GroupTable::cyclic(2));
    let z3g = GroupTable::cyclic(3);
    let twisted = FiniteMonoid::group_monoid(&z3g)
        .twisted_truncated_extension(&FiniteMonoid::group_inversion(&z3g), 2)
        .expect("inversion is an automorphism");
    vec![
        ("f1", FiniteMonoid::f1()),
        ("ntr2", FiniteMonoid::truncated_cyclic(2)),
        ("ntr3", FiniteMonoid::truncated_cyclic(3)),
        ("ntr4", FiniteMonoid::truncated_cyclic(4)),
        ("stab1p1", FiniteMonoid::stabilized_cyclic(1, 1)),
        ("stab2p1", FiniteMonoid::stabilized_cyclic(2, 1)),
        ("stab3p1", FiniteMonoid::stabilized_cyclic(3, 1)),
        ("idempotent", FiniteMonoid::stabilized_cyclic(1, 1).with_label("idempotent")),
        ("z2plus", z2m.clone()),
        ("z3plus", FiniteMonoid::group_monoid(&GroupTable::cyclic(3))),
        ("z4plus", FiniteMonoid::group_monoid(&GroupTable::cyclic(4))),
        ("s3plus", FiniteMonoid::group_monoid(&GroupTable::symmetric3())),
        ("smash_ntr2_z2", FiniteMonoid::truncated_cyclic(2).smash(&z2m)),
        ("smash_ntr3_z2", FiniteMonoid::truncated_cyclic(3).smash(&z2m)),
        ("twisted_z3", twisted),
    ]
}

fn groups() -> Vec<(&'static str, GroupTable)> {
    vec![
        ("z2", GroupTable::cyclic(2)),
        ("z3", GroupTable::cyclic(3)),
        ("z4", GroupTable::cyclic(4)),
        ("s3", GroupTable::symmetric3()),
    ]
}

fn graphs() -> Vec<(&'static str, FgNSet)> {
    let fork = FunctionalNSet::new("fork", vec![0, 0, 1, 1]).expect("valid table");
    let rho = FunctionalNSet::new("rho", vec![0, 2, 3, 1, 1]).expect("valid table");
    vec![
        ("path3", FgNSet::from_functional(&FunctionalNSet::path(3))),
        ("fork", FgNSet::from_functional(&fork)),
        ("cycle2", FgNSet::from_functional(&FunctionalNSet::cycle(2))),
        ("cycle3", FgNSet::from_functional(&FunctionalNSet::cycle(3))),
        ("rho", FgNSet::from_functional(&rho)),
        ("chain", FgNSet::free_chain()),
        ("mixed", FgNSet::new("mixed", vec![Some(0), Some(2), Some(1), None]).expect("valid table")),
    ]
}

fn sets() -> Vec<(&'static str, Arc<FiniteMonoid>, FiniteASet)> {
    let ntr3 = FiniteMonoid::truncated_cyclic(3).into_arc();
    let idem = FiniteMonoid::stabilized_cyclic(1, 1).with_label("idempotent").into_arc();
    vec![
        ("free2", ntr3.clone(), FiniteASet::free(ntr3, 2).with_label("free2")),
        ("reg", idem.clone(), FiniteASet::free(idem, 1).with_label("reg")),
    ]
}

fn put(dir: &Path, name: &str, body: &str) -> Result<(), Failure> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub fn write(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
    let mut entries: Vec<ManifestEntry> = Vec::new();
    let mut count = 0usize;

    for (stem, m) in monoids() {
        let file = format!("{stem}.monoid");
        put(dir, &file, &io::format_monoid(&m))?;
        count += 1;
        let m = m.into_arc();
        let length = match m.finite_length() {
            Ok(Some(l)) => serde_json::json!(l),
            _ => serde_json::Value::Null,
        };
        let mut note = String::from(
            "recomputed at generation time: units and abelianness from the table, \
             length from the chain of power ideals, regular_pc from the cancellation \
             scan of the rank-one free set",
        );
        if stem == "idempotent" {
            note.push_str("; same table as stab1p1 under the name the examples use");
        }
        entries.push(ManifestEntry {
            name: m.label().to_string(),
            file,
            kind: "monoid".to_string(),
            expected: serde_json::json!({
                "elements": m.size(),
                "abelian": m.is_abelian(),
                "units": m.units().len(),
                "length": length,
                "regular_pc": FiniteASet::free(m.clone(), 1).is_pc(),
            }),
            note,
        });
    }

    for (stem, g) in groups() {
        let file = format!("{stem}.group");
        put(dir, &file, &io::format_group(&g))?;
        count += 1;
        let marks = burnside(&g).expect("corpus groups are valid");
        entries.push(ManifestEntry {
            name: g.label().to_string(),
            file,
            kind: "group".to_string(),
            expected: serde_json::json!({
                "order": g.size(),
                "subgroup_classes": marks.subgroup_class_count,
            }),
            note: "order from the table; subgroup classes counted by the conjugacy \
                   scan behind the table of marks"
                .to_string(),
        });
    }

    for (stem, g) in graphs() {
        let file = format!("{stem}.nset");
        put(dir, &file, &io::format_nset(&g))?;
        count += 1;
        entries.push(ManifestEntry {
            name: g.label().to_string(),
            file,
            kind: "graph".to_string(),
            expected: serde_json::json!({
                "nodes": g.core_size(),
                "tails": g.tail_roots().len(),
                "cycles": g.cycle_lengths(),
            }),
            note: "nodes, tails, and cycle lengths read back from the successor table"
                .to_string(),
        });
    }

    for (stem, monoid, set) in sets() {
        let file = format!("{stem}.aset");
        put(dir, &file, &io::format_aset(&set))?;
        count += 1;
        entries.push(ManifestEntry {
            name: set.label().to_string(),
            file,
            kind: "set".to_string(),
            expected: serde_json::json!({
                "monoid": monoid.label(),
                "carrier": set.size(),
                "pc": set.is_pc(),
            }),
            note: "carrier from the table, pc from the exhaustive cancellation scan"
                .to_string(),
        });
    }

    let ntr3 = FiniteMonoid::truncated_cyclic(3);
    let mut mirror = io::monoid_to_json(&ntr3);
    mirror.push('\n');
    put(dir, "ntr3.monoid.json", &mirror)?;
    count += 1;
    entries.push(ManifestEntry {
        name: "ntr3".to_string(),
        file: "ntr3.monoid.json".to_string(),
        kind: "monoid mirror".to_string(),
        expected: serde_json::json!({ "elements": ntr3.size() }),
        note: "the same table as ntr3.monoid, serialized through the JSON mirror".to_string(),
    });

    let mut manifest =
        serde_json::to_string_pretty(&entries).expect("manifest serializes");
    manifest.push('\n');
    put(dir, "manifest.json", &manifest)?;
    count += 1;

    crate::print_out(&format!("wrote {count} files to {}", dir.display()))
}
