//! One function per subcommand. Each builds a serializable report, renders
//! the text view, and signals a property failure through its return value
//! so `main` can map it to the right exit code.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use kprime_core::aset::{FiniteASet, PcDecision};
use kprime_core::enumerate::{enumerate_classes, SetFlavor};
use kprime_core::io;
use kprime_core::ktheory as kt;
use kprime_core::monoid::FiniteMonoid;
use kprime_core::nset::{enumerate_functional, FgNSet};
use kprime_core::verify::run_all;
use kprime_core::{check_acgw, check_cgw, check_quasi_exact};
use serde::Serialize;

use crate::files::{self, Loaded};
use crate::report::{self, GeneratorEntry};
use crate::Failure;

/// Write the JSON report to `out` when asked, then print either the JSON or
/// the text view.
fn emit<T: Serialize>(rep: &T, text: &str, json: bool, out: Option<&Path>) -> Result<(), Failure> {
    let rendered = || serde_json::to_string_pretty(rep).expect("reports serialize");
    if let Some(path) = out {
        let mut s = rendered();
        s.push('\n');
        fs::write(path, s).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    }
    if json {
        crate::print_out(&rendered())
    } else {
        crate::print_out(text)
    }
}

enum Flavor {
    Set(SetFlavor),
    Graph { with_tails: bool },
}

fn parse_flavor(s: &str) -> Result<Flavor, Failure> {
    if let Some(fl) = SetFlavor::parse(s) {
        return Ok(Flavor::Set(fl));
    }
    match s {
        "nset" => Ok(Flavor::Graph { with_tails: false }),
        "fgnset" => Ok(Flavor::Graph { with_tails: true }),
        _ => Err(Failure::input(format!(
            "unknown flavor {s:?}, expected all, pc, free, nset, or fgnset"
        ))),
    }
}

fn need_file<'p>(file: Option<&'p Path>, flavor: &str, cmd: &str) -> Result<&'p Path, Failure> {
    file.ok_or_else(|| Failure::input(format!("{cmd} with flavor {flavor} needs a .monoid file")))
}

fn no_file(file: Option<&Path>, flavor: &str) -> Result<(), Failure> {
    match file {
        Some(path) => Err(Failure::input(format!(
            "flavor {flavor} enumerates graphs over the fixed base and takes no file, got {}",
            path.display()
        ))),
        None => Ok(()),
    }
}

pub fn validate(path: &Path, json: bool, out: Option<&Path>) -> Result<(), Failure> {
    let text = files::read(path)?;
    let loaded = files::load(path)?;
    let mirror = mirror(&loaded);
    let canonical_text = canonical(&loaded);
    let is_json = path.extension().and_then(|e| e.to_str()) == Some("json");
    let is_canonical = if is_json {
        text.trim_end() == mirror
    } else {
        text == canonical_text
    };
    if let Some(dest) = out {
        let body = match dest.extension().and_then(|e| e.to_str()) {
            Some("json") => {
                let mut s = mirror.clone();
                s.push('\n');
                s
            }
            Some("dot") => match &loaded {
                Loaded::Graph(g) => io::nset_dot(g),
                _ => {
                    return Err(Failure::input(format!(
                        "dot export works for graphs, {} is a {}",
                        path.display(),
                        loaded.kind()
                    )))
                }
            },
            _ => canonical_text.clone(),
        };
        fs::write(dest, body).map_err(|e| Failure::input(format!("{}: {e}", dest.display())))?;
    }
    if json {
        crate::print_out(&mirror)
    } else {
        crate::print_out(&summarize(&loaded))?;
        crate::print_out(&format!("canonical: {}", if is_canonical { "yes" } else { "no" }))
    }
}

fn summarize(loaded: &Loaded) -> String {
    match loaded {
        Loaded::Monoid(m) => {
            let length = match m.finite_length() {
                Ok(Some(l)) => l.to_string(),
                Ok(None) => "infinite".to_string(),
                Err(_) => "n/a".to_string(),
            };
            let kind = if m.is_abelian() { "abelian" } else { "nonabelian" };
            let regular_pc = FiniteASet::free(m.clone(), 1).is_pc();
            format!(
                "monoid {}: {} elements, {kind}, units {}, length {length}\nregular set pc: {regular_pc}",
                m.label(),
                m.size(),
                m.units().len()
            )
        }
        Loaded::Group(g) => format!("group {}: order {}", g.label(), g.size()),
        Loaded::Set { monoid, set } => format!(
            "set {} over {}: carrier {}, pc: {}",
            set.label(),
            monoid.label(),
            set.size(),
            set.is_pc()
        ),
        Loaded::Graph(g) => format!(
            "graph {}: {} nodes, tails {:?}, cycles {:?}",
            g.label(),
            g.core_size(),
            g.tail_roots(),
            g.cycle_lengths()
        ),
    }
}

fn canonical(loaded: &Loaded) -> String {
    match loaded {
        Loaded::Monoid(m) => io::format_monoid(m),
        Loaded::Group(g) => io::format_group(g),
        Loaded::Set { set, .. } => io::format_aset(set),
        Loaded::Graph(g) => io::format_nset(g),
    }
}

fn mirror(loaded: &Loaded) -> String {
    match loaded {
        Loaded::Monoid(m) => io::monoid_to_json(m),
        Loaded::Group(g) => io::group_to_json(g),
        Loaded::Set { set, .. } => io::aset_to_json(set),
        Loaded::Graph(g) => io::nset_to_json(g),
    }
}

#[derive(Serialize)]
struct PcReport {
    input: String,
    pc: bool,
    witness: serde_json::Value,
}

pub fn pc(path: &Path, json: bool) -> Result<(), Failure> {
    let (input, pc, witness_text, witness) = match files::load(path)? {
        Loaded::Monoid(m) => {
            let set = FiniteASet::free(m.clone(), 1);
            set_witness(m.label(), &m, &set, true)
        }
        Loaded::Group(g) => {
            let m = FiniteMonoid::group_monoid(&g).into_arc();
            let set = FiniteASet::free(m.clone(), 1);
            set_witness(g.label(), &m, &set, true)
        }
        Loaded::Set { monoid, set } => {
            let label = set.label().to_string();
            set_witness(&label, &monoid, &set, false)
        }
        Loaded::Graph(g) => graph_witness(&g)?,
    };
    let rep = PcReport { input: input.clone(), pc, witness };
    let text = match witness_text {
        Some(w) => format!("pc({input}): false, witness {w}"),
        None => format!("pc({input}): {pc}"),
    };
    emit(&rep, &text, json, None)
}

/// Witness text for a failed cancellation: `a` and `b` are named monoid
/// elements; `x` is named too when the set is the regular one, where the
/// carrier is indexed by monoid elements.
fn set_witness(
    input: &str,
    monoid: &Arc<FiniteMonoid>,
    set: &FiniteASet,
    regular: bool,
) -> (String, bool, Option<String>, serde_json::Value) {
    match set.pc_decision() {
        PcDecision::Pc => (input.to_string(), true, None, serde_json::Value::Null),
        PcDecision::NotPc { a, b, x } => {
            let point = if regular {
                let back = (0..monoid.size())
                    .find(|&e| FiniteASet::free_index(monoid, 0, e) == x)
                    .expect("rank one free carrier is indexed by the monoid");
                monoid.element_name(back)
            } else {
                format!("#{x}")
            };
            let text = format!(
                "a={}, b={}, x={point}",
                monoid.element_name(a),
                monoid.element_name(b)
            );
            let js = serde_json::json!({
                "a": monoid.element_name(a),
                "b": monoid.element_name(b),
                "x": point,
            });
            (input.to_string(), false, Some(text), js)
        }
    }
}

/// A graph is cancellative exactly when following successors from any node
/// either reaches the basepoint or escapes along a tail; a revisit away from
/// node 0 is a cycle, and `k` steps around it collide with `0` steps.
fn graph_witness(g: &FgNSet) -> Result<(String, bool, Option<String>, serde_json::Value), Failure> {
    if g.succ(0) != Some(0) {
        return Err(Failure::input(format!(
            "graph {} does not fix node 0, so it has no basepoint to cancel against",
            g.label()
        )));
    }
    for start in 0..g.core_size() {
        let mut seen = vec![false; g.core_size()];
        let mut v = start;
        loop {
            if v == 0 {
                break;
            }
            if seen[v] {
                let text = format!("node {v} sits on a cycle away from the basepoint");
                let js = serde_json::json!({ "cycle_node": v });
                return Ok((g.label().to_string(), false, Some(text), js));
            }
            seen[v] = true;
            match g.succ(v) {
                Some(w) => v = w,
                None => break,
            }
        }
    }
    Ok((g.label().to_string(), true, None, serde_json::Value::Null))
}

#[derive(Serialize)]
struct EnumReport {
    source: String,
    flavor: String,
    bound: usize,
    count: usize,
    classes: Vec<GeneratorEntry>,
}

pub fn enumerate(
    file: Option<&Path>,
    bound: usize,
    flavor: &str,
    json: bool,
) -> Result<(), Failure> {
    let (source, classes) = match parse_flavor(flavor)? {
        Flavor::Set(fl) => {
            let monoid = files::load_monoid(need_file(file, flavor, "enumerate")?)?;
            let sets = enumerate_classes(&monoid, bound, fl);
            let entries = sets
                .iter()
                .map(|x| GeneratorEntry { label: x.label().to_string(), size: x.size() })
                .collect();
            (monoid.label().to_string(), entries)
        }
        Flavor::Graph { with_tails } => {
            no_file(file, flavor)?;
            let entries: Vec<GeneratorEntry> = if with_tails {
                kt::build_nset_presentation(bound, true, 2)
                    .generators
                    .iter()
                    .map(|g| GeneratorEntry { label: g.label.clone(), size: g.size })
                    .collect()
            } else {
                enumerate_functional(bound)
                    .iter()
                    .map(|g| GeneratorEntry { label: g.label().to_string(), size: g.size() })
                    .collect()
            };
            ("N".to_string(), entries)
        }
    };
    let rep = EnumReport {
        source: source.clone(),
        flavor: flavor.to_string(),
        bound,
        count: classes.len(),
        classes,
    };
    let mut text = format!(
        "{} classes over {source}, flavor {flavor}, bound {bound}",
        rep.count
    );
    for c in &rep.classes {
        let _ = write!(text, "\n  {} (size {})", c.label, c.size);
    }
    emit(&rep, &text, json, None)
}

pub fn class_group(
    cmd: &str,
    file: Option<&Path>,
    bound: usize,
    flavor: &str,
    json: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let rep = match parse_flavor(flavor)? {
        Flavor::Set(fl) => {
            let monoid = files::load_monoid(need_file(file, flavor, cmd)?)?;
            report::set_group_report(&monoid, fl, bound)?
        }
        Flavor::Graph { with_tails } => {
            no_file(file, flavor)?;
            report::graph_group_report(bound, with_tails)?
        }
    };
    emit(&rep, &report::render(&rep, cmd), json, out)?;
    if rep.checks.all_pass() {
        Ok(())
    } else {
        Err(Failure::property(format!("{cmd}: a cross-check failed, see the report")))
    }
}

pub fn burnside(path: &Path, json: bool, out: Option<&Path>) -> Result<(), Failure> {
    let g = files::load_group(path)?;
    let rep = kt::burnside(&g).map_err(|e| Failure::input(e.to_string()))?;
    let marks = serde_json::to_string(&rep.marks).expect("marks serialize");
    let mut text = format!(
        "burnside ring of {}: {} subgroup classes, orders {:?}",
        rep.group_label, rep.subgroup_class_count, rep.subgroup_orders
    );
    let _ = write!(text, "\nrank {}, marks {marks}", rep.g0.rank);
    let _ = write!(
        text,
        "\nmarks from cosets agree: {}",
        rep.marks == rep.marks_from_cosets
    );
    let _ = write!(
        text,
        "\nlower triangular: {}, positive diagonal: {}",
        rep.lower_triangular, rep.positive_diagonal
    );
    let _ = write!(text, "\nproducts multiplicative: {}", rep.products_multiplicative);
    emit(&rep, &text, json, out)?;
    let ok = rep.rank_matches
        && rep.marks == rep.marks_from_cosets
        && rep.lower_triangular
        && rep.positive_diagonal
        && rep.products_multiplicative
        && rep.g0.invariants.is_empty();
    if ok {
        Ok(())
    } else {
        Err(Failure::property("burnside: a cross-check failed, see the report".to_string()))
    }
}

pub fn devissage(path: &Path, bound: usize, json: bool, out: Option<&Path>) -> Result<(), Failure> {
    let monoid = files::load_monoid(path)?;
    let rep = kt::devissage_check(&monoid, bound).map_err(|e| Failure::input(e.to_string()))?;
    let mut text = format!(
        "devissage over {}, bound {bound}: length {}, {} classes checked",
        rep.monoid, rep.length, rep.classes_checked
    );
    let _ = write!(text, "\nall classes decompose: {}", rep.all_hold);
    for f in &rep.failures {
        let _ = write!(text, "\n  {f}");
    }
    emit(&rep, &text, json, out)?;
    if rep.all_hold {
        Ok(())
    } else {
        Err(Failure::property("devissage: some class does not decompose".to_string()))
    }
}

fn parse_element(m: &FiniteMonoid, s: &str) -> Result<usize, Failure> {
    if let Some(i) = (0..m.size()).find(|&i| m.element_name(i) == s) {
        return Ok(i);
    }
    if let Ok(i) = s.parse::<usize>() {
        if i < m.size() {
            return Ok(i);
        }
    }
    let names: Vec<String> = (0..m.size()).map(|i| m.element_name(i)).collect();
    Err(Failure::input(format!(
        "{s:?} names no element of {} (elements: {})",
        m.label(),
        names.join(", ")
    )))
}

pub fn localize(
    path: &Path,
    s: &str,
    bound: usize,
    json: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let monoid = files::load_monoid(path)?;
    let elt = parse_element(&monoid, s)?;
    let start = bound.clamp(1, 3);
    let rep = kt::localization_check(&monoid, elt, start, bound)
        .map_err(|e| Failure::input(e.to_string()))?;
    let mut text = format!(
        "localize {} at {}: outcome agreed at bounds {:?}, stabilized {}",
        rep.monoid, rep.s, rep.bounds, rep.stabilized
    );
    let _ = write!(
        text,
        "\nquotient {}, middle {}, local {}",
        rep.quotient_group.describe(),
        rep.middle_group.describe(),
        rep.local_group.describe()
    );
    let _ = write!(text, "\nmaps well defined: {}", rep.maps_well_defined);
    let _ = write!(text, "\ncomposite zero: {}", rep.composite_zero);
    let _ = write!(text, "\nj surjective: {}", rep.j_surjective);
    let _ = write!(text, "\nkernel equals image: {}", rep.kernel_equals_image);
    emit(&rep, &text, json, out)?;
    let ok = rep.stabilized
        && rep.maps_well_defined
        && rep.composite_zero
        && rep.j_surjective
        && rep.kernel_equals_image;
    if ok {
        Ok(())
    } else {
        Err(Failure::property("localize: the sequence fails, see the report".to_string()))
    }
}

pub fn acgw(
    path: &Path,
    samples: usize,
    seed: u64,
    json: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let monoid = files::load_monoid(path)?;
    let mut reports = check_quasi_exact(&monoid, samples, seed);
    reports.extend(check_cgw(&monoid, samples, seed));
    reports.extend(check_acgw(&monoid, samples, seed));
    let mut text = format!(
        "axiom suites over {}: seed {seed}, {samples} samples per clause",
        monoid.label()
    );
    for r in &reports {
        let _ = write!(
            text,
            "\n  {}: {} instances, {} counterexamples",
            r.axiom,
            r.tested,
            r.failures.len()
        );
        for f in r.failures.iter().take(2) {
            for line in f.lines() {
                let _ = write!(text, "\n    {line}");
            }
        }
        if r.failures.len() > 2 {
            let _ = write!(text, "\n    ({} more suppressed)", r.failures.len() - 2);
        }
    }
    emit(&reports, &text, json, out)?;
    if reports.iter().all(|r| r.passed()) {
        Ok(())
    } else {
        Err(Failure::property("acgw: counterexamples found, see the report".to_string()))
    }
}

pub fn verify(seed: u64, json: bool, out: Option<&Path>) -> Result<(), Failure> {
    let results = run_all(seed);
    let mut text = String::new();
    for r in &results {
        let _ = writeln!(text, "[{}] criterion {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.label);
        for line in r.details.lines() {
            let _ = writeln!(text, "    {line}");
        }
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = write!(text, "{passed}/{} criteria pass, seed {seed}", results.len());
    emit(&results, &text, json, out)?;
    if passed == results.len() {
        Ok(())
    } else {
        Err(Failure::property(format!(
            "verify-paper: {} of {} criteria failed",
            results.len() - passed,
            results.len()
        )))
    }
}
