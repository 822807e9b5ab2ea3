//! Exhaustive enumeration of isomorphism classes of finite pointed sets over
//! a fixed monoid, up to a size bound.
//!
//! The action of the whole monoid is determined by the action of a generating
//! set, so the search fills in generator rows only, evaluates every other
//! element through a fixed word in the generators, and prunes a partial
//! assignment as soon as some product pair `f(ab) = f(a)∘f(b)` is determined
//! and violated. Leaves are deduplicated by canonical key and returned as
//! canonical representatives sorted by size, then key.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::aset::FiniteASet;
use crate::canon::CanonKey;
use crate::monoid::FiniteMonoid;

/// Which class of sets to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetFlavor {
    /// Every action.
    All,
    /// Only partially cancellative actions.
    Pc,
    /// Only finite wedges of the monoid acting on itself.
    Free,
}

impl SetFlavor {
    pub fn parse(s: &str) -> Option<SetFlavor> {
        match s {
            "all" => Some(SetFlavor::All),
            "pc" => Some(SetFlavor::Pc),
            "free" => Some(SetFlavor::Free),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SetFlavor::All => "all",
            SetFlavor::Pc => "pc",
            SetFlavor::Free => "free",
        }
    }
}

/// All isomorphism classes of pointed sets over `monoid` with total size
/// (basepoint included) at most `bound`, for the requested flavor.
pub fn enumerate_classes(
    monoid: &Arc<FiniteMonoid>,
    bound: usize,
    flavor: SetFlavor,
) -> Vec<FiniteASet> {
    let mut out: Vec<(usize, CanonKey, FiniteASet)> = Vec::new();
    match flavor {
        SetFlavor::Free => {
            let n = monoid.size();
            let step = n.saturating_sub(1).max(1);
            let mut r = 0;
            loop {
                let size = if n == 1 { 1 } else { r * step + 1 };
                if size > bound {
                    break;
                }
                let s = FiniteASet::free(monoid.clone(), r);
                out.push((s.size(), s.canonical_key(), s));
                if n == 1 {
                    break;
                }
                r += 1;
            }
        }
        SetFlavor::All | SetFlavor::Pc => {
            let pc_only = flavor == SetFlavor::Pc;
            let gens = generating_set(monoid);
            let words = element_words(monoid, &gens);
            let mut seen: BTreeSet<CanonKey> = BTreeSet::new();
            for m in 1..=bound {
                let mut search = Search {
                    monoid,
                    gens: &gens,
                    words: &words,
                    m,
                    cells: vec![usize::MAX; gens.len() * m],
                    pc_only,
                    seen: &mut seen,
                    found: &mut out,
                };
                search.run(0);
            }
        }
    }
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    out.into_iter()
        .enumerate()
        .map(|(i, (_, _, s))| {
            let label = format!("x{i}");
            s.with_label(&label)
        })
        .collect()
}

/// Greedy generating set over indices `2..n`: scan ascending, keep an element
/// exactly when the previously kept ones do not already produce it.
pub fn generating_set(monoid: &FiniteMonoid) -> Vec<usize> {
    let n = monoid.size();
    let mut gens: Vec<usize> = Vec::new();
    let mut closure = close(monoid, &gens);
    for e in 2..n {
        if !closure.contains(&e) {
            gens.push(e);
            closure = close(monoid, &gens);
        }
    }
    gens
}

fn close(monoid: &FiniteMonoid, gens: &[usize]) -> BTreeSet<usize> {
    let mut closure: BTreeSet<usize> = [monoid.one()].into_iter().collect();
    closure.extend(gens.iter().copied());
    let mut work: Vec<usize> = closure.iter().copied().collect();
    while let Some(e) = work.pop() {
        for &g in gens {
            for p in [monoid.mul(e, g), monoid.mul(g, e)] {
                if closure.insert(p) {
                    work.push(p);
                }
            }
        }
    }
    closure
}

/// For each element, a word in generator positions whose left-to-right
/// product is the element (apply rightmost first when acting). The zero
/// element may legitimately have no word; every other element gets one.
pub fn element_words(monoid: &FiniteMonoid, gens: &[usize]) -> Vec<Option<Vec<usize>>> {
    let n = monoid.size();
    let mut words: Vec<Option<Vec<usize>>> = vec![None; n];
    words[monoid.one()] = Some(Vec::new());
    let mut queue: Vec<usize> = vec![monoid.one()];
    let mut head = 0;
    while head < queue.len() {
        let e = queue[head];
        head += 1;
        for (gi, &g) in gens.iter().enumerate() {
            let p = monoid.mul(e, g);
            if words[p].is_none() {
                let mut w = words[e].clone().unwrap();
                w.push(gi);
                words[p] = Some(w);
                queue.push(p);
            }
        }
    }
    for (e, w) in words.iter().enumerate().skip(2) {
        assert!(w.is_some(), "element {e} not generated");
    }
    words
}

struct Search<'a> {
    monoid: &'a Arc<FiniteMonoid>,
    gens: &'a [usize],
    words: &'a [Option<Vec<usize>>],
    m: usize,
    /// `cells[gi * m + x]` is the image of `x` under generator `gi`, or
    /// `usize::MAX` when unset. Column 0 is implicitly 0.
    cells: Vec<usize>,
    pc_only: bool,
    seen: &'a mut BTreeSet<CanonKey>,
    found: &'a mut Vec<(usize, CanonKey, FiniteASet)>,
}

impl Search<'_> {
    /// Cell order is x-major so small elements get complete generator data
    /// early and the word evaluations in the prune can fire.
    fn run(&mut self, step: usize) {
        let ng = self.gens.len();
        let total = ng * (self.m - 1);
        if step == total {
            self.emit();
            return;
        }
        let x = step / ng + 1;
        let gi = step % ng;
        for v in 0..self.m {
            self.cells[gi * self.m + x] = v;
            if self.consistent() {
                self.run(step + 1);
            }
        }
        self.cells[gi * self.m + x] = usize::MAX;
    }

    fn eval_gen(&self, gi: usize, x: usize) -> Option<usize> {
        if x == 0 {
            return Some(0);
        }
        let v = self.cells[gi * self.m + x];
        if v == usize::MAX {
            None
        } else {
            Some(v)
        }
    }

    /// Image of `x` under an element, through its generator word. The zero
    /// element is the constant basepoint map by definition.
    fn eval_elem(&self, e: usize, x: usize) -> Option<usize> {
        if e == 0 {
            return Some(0);
        }
        let w = self.words[e].as_ref()?;
        let mut cur = x;
        for &gi in w.iter().rev() {
            cur = self.eval_gen(gi, cur)?;
        }
        Some(cur)
    }

    /// Every fully-determined instance of `f(ab)(x) = f(a)(f(b)(x))` must
    /// hold, and a generator word for the zero element must act as the
    /// constant basepoint map.
    fn consistent(&self) -> bool {
        let n = self.monoid.size();
        if self.words[0].is_some() {
            for x in 1..self.m {
                if let Some(v) = self.eval_elem_via_word(0, x) {
                    if v != 0 {
                        return false;
                    }
                }
            }
        }
        for a in 1..n {
            for b in 1..n {
                let ab = self.monoid.mul(a, b);
                for x in 1..self.m {
                    let rhs = match self.eval_elem(b, x) {
                        Some(bx) => self.eval_elem(a, bx),
                        None => None,
                    };
                    let lhs = self.eval_elem(ab, x);
                    if let (Some(l), Some(r)) = (lhs, rhs) {
                        if l != r {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Like `eval_elem` but without the zero-element shortcut, to check that
    /// a reachable zero really acts as the constant map.
    fn eval_elem_via_word(&self, e: usize, x: usize) -> Option<usize> {
        let w = self.words[e].as_ref()?;
        let mut cur = x;
        for &gi in w.iter().rev() {
            cur = self.eval_gen(gi, cur)?;
        }
        Some(cur)
    }

    fn emit(&mut self) {
        let n = self.monoid.size();
        let m = self.m;
        let mut act = vec![0usize; n * m];
        for a in 0..n {
            for x in 0..m {
                act[a * m + x] = match self.eval_elem(a, x) {
                    Some(v) => v,
                    None => return,
                };
            }
        }
        let set = match FiniteASet::from_table("cand", self.monoid.clone(), m, act) {
            Ok(s) => s,
            Err(_) => return,
        };
        if self.pc_only && !set.is_pc() {
            return;
        }
        let (key, perm) = canonical(&set);
        if self.seen.insert(key.clone()) {
            let canon_rep = set.relabel(&perm).expect("canonical perm is valid");
            self.found.push((m, key, canon_rep));
        }
    }
}

fn canonical(set: &FiniteASet) -> (CanonKey, Vec<usize>) {
    use crate::canon::CanonInput;
    let n = set.monoid().size();
    let funcs: Vec<Vec<usize>> = (2..n)
        .map(|a| (0..set.size()).map(|x| set.act(a, x)).collect())
        .collect();
    CanonInput { n: set.size(), funcs, colors: vec![0; set.size()] }.canonical_form()
}
