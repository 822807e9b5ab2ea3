//! Pointed sets with a single successor operation.
//!
//! Two models live here. [`FunctionalNSet`] is a finite carrier `0..n` with a
//! successor map fixing the basepoint: an arbitrary functional graph. Every
//! such graph is a rooted forest into the basepoint combined with disjoint
//! cycles; the classification drives both the ambient-monoid construction and
//! the cancellativity checks. [`FgNSet`] extends the model with infinite
//! tails: a marked core vertex continues into a fresh, unbounded chain. That
//! is the general finitely generated object, and its closed subsets and
//! quotients form a small calculus of their own.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_integer::Integer;
use thiserror::Error;

use crate::aset::FiniteASet;
use crate::canon::{CanonInput, CanonKey};
use crate::monoid::FiniteMonoid;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NSetError {
    #[error("successor table has wrong shape or an out-of-range entry")]
    BadTable,
    #[error("basepoint successor must be the basepoint")]
    BadBase,
    #[error("subset is not closed under the successor")]
    BadSubset,
    #[error("subset does not belong to this carrier")]
    Mismatch,
}

/// How a functional graph decomposes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NSetClass {
    /// Every element reaches the basepoint; `depth` is the longest distance.
    RootedTree { depth: usize },
    /// Some orbits end in cycles away from the basepoint.
    WithCycles { preperiod: usize, cycle_lengths: Vec<usize> },
}

/// A finite pointed set with one successor map, `succ(0) == 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalNSet {
    label: String,
    n: usize,
    succ: Vec<usize>,
}

impl FunctionalNSet {
    pub fn new(label: &str, succ: Vec<usize>) -> Result<Self, NSetError> {
        let n = succ.len();
        if n == 0 || succ.iter().any(|&v| v >= n) {
            return Err(NSetError::BadTable);
        }
        if succ[0] != 0 {
            return Err(NSetError::BadBase);
        }
        Ok(FunctionalNSet { label: label.to_string(), n, succ })
    }

    /// Path `v_k → ... → v_1 → ∗` of depth `k`.
    pub fn path(k: usize) -> FunctionalNSet {
        let succ = (0..=k).map(|i| i.saturating_sub(1)).collect();
        FunctionalNSet { label: format!("path{k}"), n: k + 1, succ }
    }

    /// A single `d`-cycle beside the basepoint.
    pub fn cycle(d: usize) -> FunctionalNSet {
        assert!(d >= 1);
        let mut succ = vec![0usize];
        for i in 1..=d {
            succ.push(if i == d { 1 } else { i + 1 });
        }
        FunctionalNSet { label: format!("cycle{d}"), n: d + 1, succ }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn succ(&self, x: usize) -> usize {
        self.succ[x]
    }

    pub fn succ_table(&self) -> &[usize] {
        &self.succ
    }

    /// Iterated successor.
    pub fn succ_k(&self, x: usize, k: usize) -> usize {
        let mut cur = x;
        for _ in 0..k {
            cur = self.succ[cur];
        }
        cur
    }

    pub fn classify(&self) -> NSetClass {
        // After n steps every element sits on a cycle.
        let on_cycle: BTreeSet<usize> = (0..self.n).map(|x| self.succ_k(x, self.n)).collect();
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut cycle_lengths: Vec<usize> = Vec::new();
        for &c in &on_cycle {
            if c == 0 || seen.contains(&c) {
                continue;
            }
            let mut len = 0;
            let mut cur = c;
            loop {
                seen.insert(cur);
                len += 1;
                cur = self.succ[cur];
                if cur == c {
                    break;
                }
            }
            cycle_lengths.push(len);
        }
        cycle_lengths.sort_unstable();
        if cycle_lengths.is_empty() {
            let depth = (0..self.n)
                .map(|x| (0..=self.n).find(|&k| self.succ_k(x, k) == 0).unwrap())
                .max()
                .unwrap_or(0);
            NSetClass::RootedTree { depth }
        } else {
            let preperiod = (0..self.n)
                .map(|x| {
                    (0..=self.n)
                        .find(|&k| {
                            let y = self.succ_k(x, k);
                            y == 0 || on_cycle.contains(&y) && self.is_on_cycle(y)
                        })
                        .unwrap()
                })
                .max()
                .unwrap_or(0);
            NSetClass::WithCycles { preperiod, cycle_lengths }
        }
    }

    fn is_on_cycle(&self, y: usize) -> bool {
        let mut cur = self.succ[y];
        for _ in 0..self.n {
            if cur == y {
                return true;
            }
            cur = self.succ[cur];
        }
        false
    }

    pub fn is_rooted_tree(&self) -> bool {
        matches!(self.classify(), NSetClass::RootedTree { .. })
    }

    /// The smallest truncation or stabilization of the free cyclic monoid
    /// over which the successor generates a full action: a rooted tree of
    /// depth `d` lives over `{∗, 1, t, ..., t^d = ∗}`, and a graph with
    /// cycles lives over the stabilized monoid whose preperiod covers every
    /// approach and whose period is the least common multiple of the cycle
    /// lengths. Returns the ambient together with the induced set.
    pub fn to_truncated_aset(&self) -> (Arc<FiniteMonoid>, FiniteASet) {
        let ambient = match self.classify() {
            NSetClass::RootedTree { depth } => {
                Arc::new(FiniteMonoid::truncated_cyclic(depth.max(1)))
            }
            NSetClass::WithCycles { preperiod, cycle_lengths } => {
                let period = cycle_lengths.iter().fold(1usize, |acc, &l| acc.lcm(&l));
                Arc::new(FiniteMonoid::stabilized_cyclic(preperiod.max(1), period))
            }
        };
        let n_mon = ambient.size();
        let mut act = vec![0usize; n_mon * self.n];
        // Monoid index a ≥ 1 is t^(a-1).
        for a in 1..n_mon {
            for x in 0..self.n {
                act[a * self.n + x] = self.succ_k(x, a - 1);
            }
        }
        let set = FiniteASet::from_table(&self.label, ambient.clone(), self.n, act)
            .expect("classification produces a consistent ambient");
        (ambient, set)
    }

    pub fn canonical_key(&self) -> CanonKey {
        CanonInput {
            n: self.n,
            funcs: vec![self.succ.clone()],
            colors: vec![0; self.n],
        }
        .canonical_key()
    }

    pub fn is_isomorphic(&self, other: &FunctionalNSet) -> bool {
        self.canonical_key() == other.canonical_key()
    }
}

/// Every isomorphism class of functional graphs with at most `bound`
/// elements, sorted by size then canonical key.
pub fn enumerate_functional(bound: usize) -> Vec<FunctionalNSet> {
    let mut out: Vec<(usize, CanonKey, FunctionalNSet)> = Vec::new();
    let mut seen: BTreeSet<CanonKey> = BTreeSet::new();
    for n in 1..=bound {
        let mut succ = vec![0usize; n];
        loop {
            let s = FunctionalNSet { label: "cand".to_string(), n, succ: succ.clone() };
            let key = s.canonical_key();
            if seen.insert(key.clone()) {
                out.push((n, key, s));
            }
            let mut i = 1;
            while i < n {
                succ[i] += 1;
                if succ[i] < n {
                    break;
                }
                succ[i] = 0;
                i += 1;
            }
            if n == 1 || i == n {
                break;
            }
        }
    }
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    out.into_iter()
        .enumerate()
        .map(|(i, (_, _, s))| s.with_label(&format!("g{i}")))
        .collect()
}

/// A finitely generated successor set: a finite core `0..n` where a vertex
/// with no core successor continues into a fresh infinite chain. The chain
/// elements `t·v, t²·v, ...` are not part of the core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgNSet {
    label: String,
    n: usize,
    succ: Vec<Option<usize>>,
}

impl FgNSet {
    pub fn new(label: &str, succ: Vec<Option<usize>>) -> Result<Self, NSetError> {
        let n = succ.len();
        if n == 0 || succ.iter().flatten().any(|&v| v >= n) {
            return Err(NSetError::BadTable);
        }
        if succ[0] != Some(0) {
            return Err(NSetError::BadBase);
        }
        Ok(FgNSet { label: label.to_string(), n, succ })
    }

    /// The free rank-one object: one generator with an infinite tail.
    pub fn free_chain() -> FgNSet {
        FgNSet { label: "chain".to_string(), n: 2, succ: vec![Some(0), None] }
    }

    pub fn from_functional(f: &FunctionalNSet) -> FgNSet {
        FgNSet {
            label: f.label().to_string(),
            n: f.size(),
            succ: f.succ_table().iter().map(|&v| Some(v)).collect(),
        }
    }

    /// The finite graph back, when there are no tails.
    pub fn to_functional(&self) -> Option<FunctionalNSet> {
        let succ: Option<Vec<usize>> = self.succ.iter().copied().collect();
        succ.map(|succ| FunctionalNSet { label: self.label.clone(), n: self.n, succ })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn core_size(&self) -> usize {
        self.n
    }

    pub fn succ(&self, x: usize) -> Option<usize> {
        self.succ[x]
    }

    pub fn succ_table(&self) -> &[Option<usize>] {
        &self.succ
    }

    pub fn tail_roots(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.succ[v].is_none()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.tail_roots().is_empty()
    }

    /// Lengths of the cycles away from the base point, sorted. Tails and
    /// vertices draining to the base contribute nothing.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut state = vec![0u8; self.n]; // 0 unseen, 1 on stack, 2 done
        state[0] = 2;
        let mut lengths = Vec::new();
        for start in 1..self.n {
            if state[start] != 0 {
                continue;
            }
            let mut path = Vec::new();
            let mut v = start;
            loop {
                state[v] = 1;
                path.push(v);
                match self.succ[v] {
                    Some(w) if state[w] == 0 => v = w,
                    Some(w) if state[w] == 1 => {
                        let at = path.iter().position(|&p| p == w).unwrap();
                        lengths.push(path.len() - at);
                        break;
                    }
                    _ => break,
                }
            }
            for p in path {
                state[p] = 2;
            }
        }
        lengths.sort_unstable();
        lengths
    }

    /// Two presentations can describe the same infinite set: a tail root
    /// with a single in-edge is just one step further along the same chain.
    /// Minimization absorbs such roots into their unique predecessor until
    /// none are left, producing the canonical presentation of the class.
    pub fn minimize(&self) -> FgNSet {
        let mut succ = self.succ.clone();
        loop {
            let n = succ.len();
            let absorbable = (1..n).find(|&w| {
                succ[w].is_none() && (0..n).filter(|&x| succ[x] == Some(w)).count() == 1
            });
            let Some(w) = absorbable else { break };
            let x = (0..n).find(|&x| succ[x] == Some(w)).unwrap();
            succ[x] = None;
            succ.remove(w);
            for s in succ.iter_mut().flatten() {
                if *s > w {
                    *s -= 1;
                }
            }
        }
        FgNSet { label: self.label.clone(), n: succ.len(), succ }
    }

    pub fn canonical_key(&self) -> CanonKey {
        let min = self.minimize();
        let func: Vec<usize> = min.succ.iter().map(|v| v.unwrap_or(min.n)).collect();
        CanonInput { n: min.n, funcs: vec![func], colors: vec![0; min.n] }.canonical_key()
    }

    pub fn is_isomorphic(&self, other: &FgNSet) -> bool {
        self.canonical_key() == other.canonical_key()
    }

    /// Closed subsets whose tail entry points are at most `max_offset` steps
    /// into a tail. The core part must be successor-closed; a tail whose root
    /// is outside the subset may still contribute a suffix.
    pub fn closed_subsets(&self, max_offset: usize) -> Vec<FgnSubset> {
        let nonbase = self.n - 1;
        let mut core_parts: Vec<BTreeSet<usize>> = Vec::new();
        'mask: for mask in 0u64..(1u64 << nonbase) {
            let mut members: BTreeSet<usize> = [0].into_iter().collect();
            for v in 0..nonbase {
                if mask & (1 << v) != 0 {
                    members.insert(v + 1);
                }
            }
            for &v in &members {
                if let Some(s) = self.succ[v] {
                    if !members.contains(&s) {
                        continue 'mask;
                    }
                }
            }
            core_parts.push(members);
        }
        let mut out = Vec::new();
        for core in core_parts {
            let open_roots: Vec<usize> =
                self.tail_roots().into_iter().filter(|r| !core.contains(r)).collect();
            // Each open root independently contributes nothing or a suffix.
            let choices = max_offset + 1;
            let total = choices.pow(open_roots.len() as u32);
            for mut code in 0..total {
                let mut offsets: BTreeMap<usize, usize> = BTreeMap::new();
                for &r in &open_roots {
                    let c = code % choices;
                    code /= choices;
                    if c > 0 {
                        offsets.insert(r, c);
                    }
                }
                out.push(FgnSubset { parent: self.clone(), core: core.clone(), offsets });
            }
        }
        out
    }

    /// Collapses a closed subset to the basepoint. A tail entered at offset
    /// `k` leaves a path of `k-1` fresh core vertices behind; a fully
    /// contained tail disappears with its root.
    pub fn quotient(&self, sub: &FgnSubset) -> Result<FgNSet, NSetError> {
        if &sub.parent != self {
            return Err(NSetError::Mismatch);
        }
        let survivors: Vec<usize> = (0..self.n).filter(|v| !sub.core.contains(v) || *v == 0).collect();
        let mut new_index: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, &v) in survivors.iter().enumerate() {
            new_index.insert(v, i);
        }
        let mut succ: Vec<Option<usize>> = Vec::with_capacity(survivors.len());
        for &v in &survivors {
            if v == 0 {
                succ.push(Some(0));
                continue;
            }
            match self.succ[v] {
                Some(s) => succ.push(Some(if sub.core.contains(&s) { 0 } else { new_index[&s] })),
                None => {
                    if sub.offsets.contains_key(&v) {
                        // Filled in below once the path nodes exist.
                        succ.push(Some(0));
                    } else {
                        succ.push(None);
                    }
                }
            }
        }
        // Append truncated-tail paths.
        for (&root, &k) in &sub.offsets {
            debug_assert!(k >= 1);
            let root_new = new_index[&root];
            if k == 1 {
                succ[root_new] = Some(0);
                continue;
            }
            // Path root → p1 → ... → p_{k-1} → base.
            let first = succ.len();
            succ[root_new] = Some(first);
            for j in 0..k - 1 {
                let next = if j + 1 < k - 1 { first + j + 1 } else { 0 };
                succ.push(Some(next));
            }
        }
        FgNSet::new(&format!("{}/s", self.label), succ)
    }
}

/// A closed subset of a finitely generated successor set: a successor-closed
/// core part plus, for each tail root outside the core part, an optional
/// suffix of the tail starting `offset ≥ 1` steps in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgnSubset {
    parent: FgNSet,
    core: BTreeSet<usize>,
    offsets: BTreeMap<usize, usize>,
}

impl FgnSubset {
    pub fn new(
        parent: &FgNSet,
        core: BTreeSet<usize>,
        offsets: BTreeMap<usize, usize>,
    ) -> Result<Self, NSetError> {
        if !core.contains(&0) || core.iter().any(|&v| v >= parent.n) {
            return Err(NSetError::BadSubset);
        }
        for &v in &core {
            if let Some(s) = parent.succ[v] {
                if !core.contains(&s) {
                    return Err(NSetError::BadSubset);
                }
            }
        }
        for (&r, &k) in &offsets {
            if k == 0 || parent.succ.get(r) != Some(&None) || core.contains(&r) {
                return Err(NSetError::BadSubset);
            }
        }
        Ok(FgnSubset { parent: parent.clone(), core, offsets })
    }

    pub fn parent(&self) -> &FgNSet {
        &self.parent
    }

    pub fn core_members(&self) -> &BTreeSet<usize> {
        &self.core
    }

    pub fn offsets(&self) -> &BTreeMap<usize, usize> {
        &self.offsets
    }

    pub fn is_zero(&self) -> bool {
        self.core.len() == 1 && self.offsets.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.core.len() == self.parent.n
    }

    /// The subset as an object of its own. A tail suffix becomes a fresh
    /// tail root that nothing points into.
    pub fn as_fg_nset(&self) -> FgNSet {
        let members: Vec<usize> = self.core.iter().copied().collect();
        let pos = |v: usize| members.binary_search(&v).unwrap();
        let mut succ: Vec<Option<usize>> = members
            .iter()
            .map(|&v| self.parent.succ[v].map(&pos))
            .collect();
        for _ in &self.offsets {
            succ.push(None);
        }
        FgNSet::new(&format!("{}[{}]", self.parent.label, members.len()), succ)
            .expect("closed subset re-indexes cleanly")
    }
}

/// Every isomorphism class of finitely generated successor set with core size
/// at most `bound`.
pub fn enumerate_fg(bound: usize) -> Vec<FgNSet> {
    let mut out: Vec<(usize, CanonKey, FgNSet)> = Vec::new();
    let mut seen: BTreeSet<CanonKey> = BTreeSet::new();
    for n in 1..=bound {
        // succ[v] ranges over 0..n plus the tail marker.
        let mut code = vec![0usize; n];
        loop {
            let succ: Vec<Option<usize>> = (0..n)
                .map(|v| {
                    if v == 0 {
                        Some(0)
                    } else if code[v] == n {
                        None
                    } else {
                        Some(code[v])
                    }
                })
                .collect();
            let s = FgNSet { label: "cand".to_string(), n, succ };
            // The key is computed on the minimized presentation, so a chain
            // feeding a tail root collapses onto the shorter core it presents.
            let key = s.canonical_key();
            if seen.insert(key.clone()) {
                out.push((n, key, s));
            }
            let mut i = 1;
            while i < n {
                code[i] += 1;
                if code[i] <= n {
                    break;
                }
                code[i] = 0;
                i += 1;
            }
            if n == 1 || i == n {
                break;
            }
        }
    }
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    out.into_iter()
        .enumerate()
        .map(|(i, (_, _, s))| s.with_label(&format!("f{i}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn paths_are_rooted_trees_and_cycles_are_not() {
        assert_eq!(FunctionalNSet::path(3).classify(), NSetClass::RootedTree { depth: 3 });
        assert_eq!(FunctionalNSet::path(0).classify(), NSetClass::RootedTree { depth: 0 });
        assert_eq!(
            FunctionalNSet::cycle(2).classify(),
            NSetClass::WithCycles { preperiod: 0, cycle_lengths: vec![2] }
        );
    }

    #[test]
    fn tree_detection_matches_the_direct_criterion() {
        // Independent check: a graph is a rooted tree exactly when n steps
        // of the successor land everything on the basepoint.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let n = rng.gen_range(1..=7);
            let succ: Vec<usize> =
                (0..n).map(|i| if i == 0 { 0 } else { rng.gen_range(0..n) }).collect();
            let s = FunctionalNSet::new("r", succ).unwrap();
            let direct = (0..n).all(|x| s.succ_k(x, n) == 0);
            assert_eq!(s.is_rooted_tree(), direct);
        }
    }

    #[test]
    fn ambient_of_a_path_is_the_truncation() {
        let (ambient, set) = FunctionalNSet::path(3).to_truncated_aset();
        assert_eq!(ambient.label(), "ntr3");
        assert!(ambient.is_pc());
        assert!(set.is_isomorphic(&FiniteASet::free(ambient, 1)));
        assert!(set.is_pc());
    }

    #[test]
    fn ambient_of_a_self_loop_is_the_idempotent_monoid() {
        let (ambient, set) = FunctionalNSet::cycle(1).to_truncated_aset();
        assert_eq!(ambient.size(), 3);
        assert_eq!(ambient.mul(2, 2), 2);
        assert!(!ambient.is_pc());
        assert!(!set.is_pc());
    }

    #[test]
    fn ambient_period_is_the_cycle_lcm() {
        // Cycles of lengths 2 and 3 next to a depth-1 branch into the first.
        let mut succ = vec![0usize, 2, 1, 4, 5, 3, 1];
        succ[6] = 1; // tail vertex into the 2-cycle
        let s = FunctionalNSet::new("mix", succ).unwrap();
        match s.classify() {
            NSetClass::WithCycles { preperiod, cycle_lengths } => {
                assert_eq!(cycle_lengths, vec![2, 3]);
                assert_eq!(preperiod, 1);
            }
            c => panic!("unexpected class {c:?}"),
        }
        let (ambient, set) = s.to_truncated_aset();
        assert_eq!(ambient.label(), "stab1p6");
        assert_eq!(set.size(), 7);
    }

    #[test]
    fn trees_are_pc_and_loops_are_not() {
        for g in enumerate_functional(5) {
            let (_, set) = g.to_truncated_aset();
            assert_eq!(set.is_pc(), g.is_rooted_tree(), "{:?}", g.succ_table());
        }
    }

    #[test]
    fn functional_class_counts_are_frozen() {
        assert_eq!(enumerate_functional(1).len(), 1);
        assert_eq!(enumerate_functional(2).len(), 3);
        assert_eq!(enumerate_functional(3).len(), 9);
    }

    #[test]
    fn fg_class_counts_are_frozen() {
        assert_eq!(enumerate_fg(1).len(), 1);
        assert_eq!(enumerate_fg(2).len(), 4);
    }

    #[test]
    fn cycle_lengths_ignore_trees_and_tails() {
        let mixed = FunctionalNSet::new("mix", vec![0, 2, 1, 4, 5, 3, 1]).unwrap();
        assert_eq!(FgNSet::from_functional(&mixed).cycle_lengths(), vec![2, 3]);
        assert_eq!(FgNSet::free_chain().cycle_lengths(), Vec::<usize>::new());
        let p = FgNSet::from_functional(&FunctionalNSet::path(3));
        assert_eq!(p.cycle_lengths(), Vec::<usize>::new());
    }

    #[test]
    fn chain_into_a_tail_presents_the_plain_chain() {
        // v1 -> v2 -> tail is the same infinite set as v1 -> tail.
        let long = FgNSet::new("long", vec![Some(0), Some(2), None]).unwrap();
        assert_eq!(long.minimize().core_size(), 2);
        assert!(long.is_isomorphic(&FgNSet::free_chain()));
        // A merge point keeps its tail root: two chains into one tail.
        let merge = FgNSet::new("merge", vec![Some(0), Some(3), Some(3), None]).unwrap();
        assert_eq!(merge.minimize().core_size(), 4);
    }

    #[test]
    fn minimized_key_is_invariant_under_chain_expansion() {
        // Expanding any tail root by one chain step never changes the class.
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let n = rng.gen_range(2..=5);
            let succ: Vec<Option<usize>> = (0..n)
                .map(|v| {
                    if v == 0 {
                        Some(0)
                    } else {
                        let c = rng.gen_range(0..=n);
                        if c == n {
                            None
                        } else {
                            Some(c)
                        }
                    }
                })
                .collect();
            let s = FgNSet::new("r", succ.clone()).unwrap();
            let Some(root) = s.tail_roots().first().copied() else { continue };
            let mut grown = succ;
            grown[root] = Some(grown.len());
            grown.push(None);
            let g = FgNSet::new("g", grown).unwrap();
            assert_eq!(s.canonical_key(), g.canonical_key());
        }
    }

    #[test]
    fn chain_is_not_a_finite_class() {
        let chain = FgNSet::free_chain();
        assert!(!chain.is_finite());
        for k in 0..4 {
            let p = FgNSet::from_functional(&FunctionalNSet::path(k));
            assert!(!chain.is_isomorphic(&p));
        }
    }

    #[test]
    fn chain_subsets_with_offset_bound_two() {
        let chain = FgNSet::free_chain();
        let subs = chain.closed_subsets(2);
        // {∗}, suffix from 1, suffix from 2, everything.
        assert_eq!(subs.len(), 4);
    }

    #[test]
    fn chain_quotient_by_suffix_is_a_path() {
        let chain = FgNSet::free_chain();
        for k in 1..=3 {
            let sub = FgnSubset::new(
                &chain,
                [0].into_iter().collect(),
                [(1usize, k)].into_iter().collect(),
            )
            .unwrap();
            let q = chain.quotient(&sub).unwrap();
            let expected = FgNSet::from_functional(&FunctionalNSet::path(k));
            assert!(q.is_isomorphic(&expected), "offset {k}");
            // The suffix itself is a fresh chain.
            assert!(sub.as_fg_nset().is_isomorphic(&chain));
        }
    }

    #[test]
    fn quotient_by_everything_is_the_point() {
        let chain = FgNSet::free_chain();
        let full = FgnSubset::new(&chain, [0, 1].into_iter().collect(), BTreeMap::new()).unwrap();
        let q = chain.quotient(&full).unwrap();
        assert_eq!(q.core_size(), 1);
        assert!(q.is_finite());
    }

    #[test]
    fn finite_quotients_agree_with_functional_quotients() {
        // Collapse the depth-2 suffix of a path inside the fg model and
        // compare with the plain finite computation.
        let p3 = FgNSet::from_functional(&FunctionalNSet::path(3));
        let sub = FgnSubset::new(&p3, [0, 1, 2].into_iter().collect(), BTreeMap::new()).unwrap();
        let q = p3.quotient(&sub).unwrap();
        assert!(q.is_isomorphic(&FgNSet::from_functional(&FunctionalNSet::path(1))));
    }

    #[test]
    fn subset_validation_rejects_open_cores_and_bad_offsets() {
        let p2 = FgNSet::from_functional(&FunctionalNSet::path(2));
        // {∗, v2} is not closed: succ(v2) = v1 missing.
        assert!(FgnSubset::new(&p2, [0, 2].into_iter().collect(), BTreeMap::new()).is_err());
        let chain = FgNSet::free_chain();
        // Offset on a core member is meaningless.
        assert!(FgnSubset::new(
            &chain,
            [0, 1].into_iter().collect(),
            [(1usize, 1usize)].into_iter().collect()
        )
        .is_err());
        // Offset zero is not a suffix.
        assert!(FgnSubset::new(
            &chain,
            [0].into_iter().collect(),
            [(1usize, 0usize)].into_iter().collect()
        )
        .is_err());
    }
}
