//! Line-based text formats and JSON mirrors for the table types.
//!
//! Every text format starts with a one-line header naming the object and its
//! size, followed by the table rows as space-separated indices. `#` starts a
//! comment anywhere on a line; blank lines are skipped. The formatters emit a
//! canonical form with no comments, so serialize → parse → serialize is the
//! identity on the bytes, and parse → serialize → parse is the identity on
//! the object.
//!
//! Action tables for sets cannot stand alone: the header names the ambient
//! monoid, and the caller supplies it (resolved from an adjacent file or
//! built in memory). [`aset_declared_monoid`] peeks at the header so a
//! caller knows what to resolve.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aset::{ASetError, FiniteASet};
use crate::group::{GroupError, GroupTable};
use crate::monoid::{FiniteMonoid, MonoidError};
use crate::nset::{FgNSet, NSetError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Set(#[from] ASetError),
    #[error(transparent)]
    Graph(#[from] NSetError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn parse_err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse { line, msg: msg.into() }
}

/// Content lines with their 1-based numbers, comments and blanks stripped.
struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    /// Line number of the most recently yielded content line.
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate(), last: 0 }
    }

    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if !content.is_empty() {
                self.last = i + 1;
                return Some((i + 1, content));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), IoError> {
        self.next_content().ok_or_else(|| parse_err(self.last + 1, format!("expected {what}")))
    }

    fn expect_end(&mut self) -> Result<(), IoError> {
        match self.next_content() {
            None => Ok(()),
            Some((n, s)) => Err(parse_err(n, format!("unexpected trailing content: {s}"))),
        }
    }
}

fn parse_row(line: usize, s: &str, len: usize, max: usize) -> Result<Vec<usize>, IoError> {
    let row: Vec<usize> = s
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| parse_err(line, format!("bad index: {tok}")))
        })
        .collect::<Result<_, _>>()?;
    if row.len() != len {
        return Err(parse_err(line, format!("expected {len} entries, found {}", row.len())));
    }
    if let Some(&v) = row.iter().find(|&&v| v >= max) {
        return Err(parse_err(line, format!("index {v} out of range (size {max})")));
    }
    Ok(row)
}

fn header<'a>(
    lines: &mut Lines<'a>,
    keyword: &str,
) -> Result<(usize, Vec<&'a str>), IoError> {
    let (no, s) = lines.expect(&format!("`{keyword} <name> ...` header"))?;
    let fields: Vec<&str> = s.split_whitespace().collect();
    if fields.first() != Some(&keyword) {
        return Err(parse_err(no, format!("expected `{keyword}` header, found: {s}")));
    }
    Ok((no, fields))
}

fn parse_size(no: usize, tok: &str) -> Result<usize, IoError> {
    tok.parse().map_err(|_| parse_err(no, format!("bad size: {tok}")))
}

fn parse_square_table(
    lines: &mut Lines,
    n: usize,
) -> Result<Vec<Vec<usize>>, IoError> {
    (0..n)
        .map(|_| {
            let (no, s) = lines.expect("a table row")?;
            parse_row(no, s, n, n)
        })
        .collect()
}

/// `monoid <name> <n>` followed by the n×n multiplication table.
pub fn parse_monoid(text: &str) -> Result<FiniteMonoid, IoError> {
    let mut lines = Lines::new(text);
    let (no, fields) = header(&mut lines, "monoid")?;
    let [_, name, n] = fields[..] else {
        return Err(parse_err(no, "expected `monoid <name> <n>`"));
    };
    let n = parse_size(no, n)?;
    let mul = parse_square_table(&mut lines, n)?.concat();
    lines.expect_end()?;
    Ok(FiniteMonoid::from_table(name, n, mul)?)
}

pub fn format_monoid(m: &FiniteMonoid) -> String {
    let n = m.size();
    let mut out = format!("monoid {} {}\n", m.label(), n);
    for a in 0..n {
        let row: Vec<String> = (0..n).map(|b| m.mul(a, b).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// `group <name> <n>` followed by the n×n multiplication table.
pub fn parse_group(text: &str) -> Result<GroupTable, IoError> {
    let mut lines = Lines::new(text);
    let (no, fields) = header(&mut lines, "group")?;
    let [_, name, n] = fields[..] else {
        return Err(parse_err(no, "expected `group <name> <n>`"));
    };
    let n = parse_size(no, n)?;
    let mul = parse_square_table(&mut lines, n)?.concat();
    lines.expect_end()?;
    Ok(GroupTable::new(name, n, mul)?)
}

pub fn format_group(g: &GroupTable) -> String {
    let n = g.size();
    let mut out = format!("group {} {}\n", g.label(), n);
    for a in 0..n {
        let row: Vec<String> = (0..n).map(|b| g.mul(a, b).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// The monoid name declared in an `aset` header, for resolving the ambient
/// monoid before a full parse.
pub fn aset_declared_monoid(text: &str) -> Result<String, IoError> {
    let mut lines = Lines::new(text);
    let (no, fields) = header(&mut lines, "aset")?;
    let [_, _, over, monoid, _] = fields[..] else {
        return Err(parse_err(no, "expected `aset <name> over <monoid> <m>`"));
    };
    if over != "over" {
        return Err(parse_err(no, "expected `over` in the aset header"));
    }
    Ok(monoid.to_string())
}

/// `aset <name> over <monoid> <m>` followed by one row per monoid element,
/// each with m entries. The caller supplies the ambient monoid; its label
/// must match the header.
pub fn parse_aset(text: &str, monoid: &Arc<FiniteMonoid>) -> Result<FiniteASet, IoError> {
    let mut lines = Lines::new(text);
    let (no, fields) = header(&mut lines, "aset")?;
    let [_, name, over, declared, m] = fields[..] else {
        return Err(parse_err(no, "expected `aset <name> over <monoid> <m>`"));
    };
    if over != "over" {
        return Err(parse_err(no, "expected `over` in the aset header"));
    }
    if declared != monoid.label() {
        return Err(parse_err(
            no,
            format!("header names monoid `{declared}` but `{}` was supplied", monoid.label()),
        ));
    }
    let m = parse_size(no, m)?;
    let mut act = Vec::with_capacity(monoid.size() * m);
    for _ in 0..monoid.size() {
        let (no, s) = lines.expect("an action row")?;
        act.extend(parse_row(no, s, m, m)?);
    }
    lines.expect_end()?;
    Ok(FiniteASet::from_table(name, monoid.clone(), m, act)?)
}

pub fn format_aset(x: &FiniteASet) -> String {
    let (n, m) = (x.monoid().size(), x.size());
    let mut out = format!("aset {} over {} {}\n", x.label(), x.monoid().label(), m);
    for a in 0..n {
        let row: Vec<String> = (0..m).map(|v| x.act(a, v).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// `nset <name> <n>` with a `succ:` line of n entries; `-` marks a vertex
/// whose orbit continues into an unbounded chain, and those vertices are
/// listed again on a `tails:` line, present exactly when some exist.
pub fn parse_nset(text: &str) -> Result<FgNSet, IoError> {
    let mut lines = Lines::new(text);
    let (no, fields) = header(&mut lines, "nset")?;
    let [_, name, n] = fields[..] else {
        return Err(parse_err(no, "expected `nset <name> <n>`"));
    };
    let n = parse_size(no, n)?;
    let (sno, s) = lines.expect("a `succ:` line")?;
    let body = s
        .strip_prefix("succ:")
        .ok_or_else(|| parse_err(sno, "expected `succ: ...`"))?;
    let succ: Vec<Option<usize>> = body
        .split_whitespace()
        .map(|tok| match tok {
            "-" => Ok(None),
            _ => tok
                .parse::<usize>()
                .map(Some)
                .map_err(|_| parse_err(sno, format!("bad successor: {tok}"))),
        })
        .collect::<Result<_, _>>()?;
    if succ.len() != n {
        return Err(parse_err(sno, format!("expected {n} successors, found {}", succ.len())));
    }
    let declared_tails: Vec<usize> = match lines.next_content() {
        None => Vec::new(),
        Some((tno, t)) => {
            let body = t
                .strip_prefix("tails:")
                .ok_or_else(|| parse_err(tno, format!("unexpected trailing content: {t}")))?;
            let tails = body
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| parse_err(tno, format!("bad tail vertex: {tok}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            lines.expect_end()?;
            tails
        }
    };
    let from_succ: Vec<usize> =
        (0..n).filter(|&v| succ.get(v) == Some(&None)).collect();
    if declared_tails != from_succ {
        return Err(parse_err(
            lines.last,
            format!("tails line {declared_tails:?} does not match `-` entries {from_succ:?}"),
        ));
    }
    Ok(FgNSet::new(name, succ)?)
}

pub fn format_nset(g: &FgNSet) -> String {
    let entries: Vec<String> = (0..g.core_size())
        .map(|v| match g.succ(v) {
            Some(w) => w.to_string(),
            None => "-".to_string(),
        })
        .collect();
    let mut out = format!("nset {} {}\nsucc: {}\n", g.label(), g.core_size(), entries.join(" "));
    let tails = g.tail_roots();
    if !tails.is_empty() {
        let t: Vec<String> = tails.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("tails: {}\n", t.join(" ")));
    }
    out
}

/// DOT rendering of a successor graph for documentation figures. The
/// basepoint is the doubled node; dashed nodes continue into unbounded
/// chains.
pub fn nset_dot(g: &FgNSet) -> String {
    let ident: String = g
        .label()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    let mut out = format!("digraph {ident} {{\n  node [shape=circle];\n");
    out.push_str("  0 [label=\"*\", shape=doublecircle];\n");
    for v in 1..g.core_size() {
        match g.succ(v) {
            Some(w) => out.push_str(&format!("  {v} -> {w};\n")),
            None => out.push_str(&format!("  {v} [style=dashed];\n")),
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct MonoidJson {
    name: String,
    n: usize,
    mul: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GroupJson {
    name: String,
    n: usize,
    mul: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ASetJson {
    name: String,
    monoid: String,
    m: usize,
    act: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NSetJson {
    name: String,
    n: usize,
    succ: Vec<Option<usize>>,
    tails: Vec<usize>,
}

fn chunk(flat: &[usize], width: usize) -> Vec<Vec<usize>> {
    flat.chunks(width).map(|r| r.to_vec()).collect()
}

pub fn monoid_to_json(m: &FiniteMonoid) -> String {
    let doc = MonoidJson {
        name: m.label().to_string(),
        n: m.size(),
        mul: chunk(m.table(), m.size()),
    };
    serde_json::to_string_pretty(&doc).expect("table serialization")
}

pub fn monoid_from_json(text: &str) -> Result<FiniteMonoid, IoError> {
    let doc: MonoidJson = serde_json::from_str(text)?;
    Ok(FiniteMonoid::from_table(&doc.name, doc.n, doc.mul.concat())?)
}

pub fn group_to_json(g: &GroupTable) -> String {
    let doc = GroupJson {
        name: g.label().to_string(),
        n: g.size(),
        mul: chunk(g.table(), g.size()),
    };
    serde_json::to_string_pretty(&doc).expect("table serialization")
}

pub fn group_from_json(text: &str) -> Result<GroupTable, IoError> {
    let doc: GroupJson = serde_json::from_str(text)?;
    Ok(GroupTable::new(&doc.name, doc.n, doc.mul.concat())?)
}

pub fn aset_to_json(x: &FiniteASet) -> String {
    let doc = ASetJson {
        name: x.label().to_string(),
        monoid: x.monoid().label().to_string(),
        m: x.size(),
        act: chunk(x.table(), x.size()),
    };
    serde_json::to_string_pretty(&doc).expect("table serialization")
}

pub fn aset_from_json(text: &str, monoid: &Arc<FiniteMonoid>) -> Result<FiniteASet, IoError> {
    let doc: ASetJson = serde_json::from_str(text)?;
    if doc.monoid != monoid.label() {
        return Err(parse_err(
            1,
            format!("document names monoid `{}` but `{}` was supplied", doc.monoid, monoid.label()),
        ));
    }
    Ok(FiniteASet::from_table(&doc.name, monoid.clone(), doc.m, doc.act.concat())?)
}

pub fn nset_to_json(g: &FgNSet) -> String {
    let doc = NSetJson {
        name: g.label().to_string(),
        n: g.core_size(),
        succ: g.succ_table().to_vec(),
        tails: g.tail_roots(),
    };
    serde_json::to_string_pretty(&doc).expect("table serialization")
}

pub fn nset_from_json(text: &str) -> Result<FgNSet, IoError> {
    let doc: NSetJson = serde_json::from_str(text)?;
    let g = FgNSet::new(&doc.name, doc.succ)?;
    if g.tail_roots() != doc.tails {
        return Err(parse_err(1, "tails field does not match null successors"));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nset::FunctionalNSet;

    fn sample_monoid() -> FiniteMonoid {
        FiniteMonoid::truncated_cyclic(3)
    }

    #[test]
    fn monoid_text_round_trips_bytes() {
        let m = sample_monoid();
        let text = format_monoid(&m);
        let back = parse_monoid(&text).unwrap();
        assert_eq!(back.label(), m.label());
        assert_eq!(back.table(), m.table());
        assert_eq!(format_monoid(&back), text);
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let text = "# header comment\n\nmonoid f1 2  # trailing\n0 0\n0 1\n\n";
        let m = parse_monoid(text).unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(m.label(), "f1");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad_row = "monoid f1 2\n0 0\n0 9\n";
        match parse_monoid(bad_row) {
            Err(IoError::Parse { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("out of range"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        let short = "monoid f1 2\n0 0\n";
        match parse_monoid(short) {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        let stray = "monoid f1 2\n0 0\n0 1\n7 7\n";
        match parse_monoid(stray) {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_tables_surface_module_errors() {
        // rows parse fine but the table is not associative-with-identity
        let text = "monoid bad 2\n1 1\n1 1\n";
        assert!(matches!(parse_monoid(text), Err(IoError::Monoid(_))));
    }

    #[test]
    fn group_text_round_trips() {
        let g = crate::group::GroupTable::symmetric3();
        let text = format_group(&g);
        let back = parse_group(&text).unwrap();
        assert_eq!(back.table(), g.table());
        assert_eq!(format_group(&back), text);
    }

    #[test]
    fn aset_text_round_trips_and_checks_the_monoid() {
        let m = sample_monoid().into_arc();
        let x = FiniteASet::free(m.clone(), 2).with_label("F2");
        let text = format_aset(&x);
        assert_eq!(aset_declared_monoid(&text).unwrap(), m.label());
        let back = parse_aset(&text, &m).unwrap();
        assert_eq!(back.table(), x.table());
        assert_eq!(format_aset(&back), text);
        let other = FiniteMonoid::f1().into_arc();
        assert!(matches!(parse_aset(&text, &other), Err(IoError::Parse { line: 1, .. })));
    }

    #[test]
    fn nset_text_round_trips_with_and_without_tails() {
        let rho = FgNSet::from_functional(
            &FunctionalNSet::new("rho", vec![0, 2, 3, 1, 1]).unwrap(),
        );
        let text = format_nset(&rho);
        assert!(!text.contains("tails"));
        let back = parse_nset(&text).unwrap();
        assert_eq!(back.succ_table(), rho.succ_table());
        assert_eq!(format_nset(&back), text);

        let chain = FgNSet::new("mix", vec![Some(0), None, Some(1)]).unwrap();
        let text = format_nset(&chain);
        assert!(text.contains("succ: 0 - 1\n"));
        assert!(text.contains("tails: 1\n"));
        let back = parse_nset(&text).unwrap();
        assert_eq!(back.succ_table(), chain.succ_table());
        assert_eq!(format_nset(&back), text);
    }

    #[test]
    fn nset_tails_line_must_match_dashes() {
        let text = "nset bad 3\nsucc: 0 - 1\ntails: 2\n";
        assert!(matches!(parse_nset(text), Err(IoError::Parse { .. })));
        let missing = "nset bad 3\nsucc: 0 - 1\n";
        assert!(matches!(parse_nset(missing), Err(IoError::Parse { .. })));
    }

    #[test]
    fn json_mirrors_round_trip() {
        let m = sample_monoid();
        let back = monoid_from_json(&monoid_to_json(&m)).unwrap();
        assert_eq!(back.table(), m.table());

        let g = crate::group::GroupTable::cyclic(4);
        assert_eq!(group_from_json(&group_to_json(&g)).unwrap().table(), g.table());

        let arc = m.into_arc();
        let x = FiniteASet::free(arc.clone(), 1);
        let back = aset_from_json(&aset_to_json(&x), &arc).unwrap();
        assert_eq!(back.table(), x.table());

        let n = FgNSet::new("c", vec![Some(0), Some(2), Some(1), None]).unwrap();
        let back = nset_from_json(&nset_to_json(&n)).unwrap();
        assert_eq!(back.succ_table(), n.succ_table());
    }

    #[test]
    fn dot_export_lists_edges_and_markers() {
        let g = FgNSet::new("mix", vec![Some(0), Some(2), Some(1), None]).unwrap();
        let dot = nset_dot(&g);
        assert!(dot.contains("digraph mix"));
        assert!(dot.contains("1 -> 2;"));
        assert!(dot.contains("2 -> 1;"));
        assert!(dot.contains("3 [style=dashed];"));
        assert!(dot.contains("doublecircle"));
    }
}
