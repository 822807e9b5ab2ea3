//! Finite pointed sets with a pointed monoid action.
//!
//! A set is a carrier `0..m` with basepoint 0 and an action table indexed by
//! (monoid element, set element). The zero of the monoid acts as the constant
//! basepoint map and the identity acts as the identity; the table is checked
//! for associativity on construction.
//!
//! Alongside the basic objects this module carries the structural calculus
//! the Grothendieck-group and axiom-testing code is built on: action-closed
//! subsets, Rees quotients, admissible monics and epis, pushouts and
//! pullbacks, wedges and smashes, base change along a monoid map, and
//! canonical keys for isomorphism testing.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::canon::{CanonInput, CanonKey};
use crate::monoid::{FiniteMonoid, Ideal, MonoidMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ASetError {
    #[error("action table has wrong shape or an out-of-range entry")]
    BadTable,
    #[error("basepoint is not fixed or the zero row is not constant")]
    BadBase,
    #[error("identity does not act as the identity (fails at {0})")]
    BadIdentity(usize),
    #[error("action is not associative at (a={0}, b={1}, x={2})")]
    NotAssociative(usize, usize, usize),
    #[error("subset is not closed under the action")]
    BadSubset,
    #[error("operands live over different monoids or different parents")]
    Mismatch,
    #[error("map is not pointed equivariant (fails at a={0}, x={1})")]
    NotEquivariant(usize, usize),
    #[error("action does not descend to the quotient structure")]
    NotWellDefined,
    #[error("sequence is not admissible: {0}")]
    NotAdmissible(&'static str),
}

/// Whether an action table is partially cancellative, with the first
/// violating triple in scan order when it is not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcDecision {
    Pc,
    NotPc { a: usize, b: usize, x: usize },
}

/// A finite pointed set with an action of a finite pointed monoid. The
/// action table is row-major by monoid element: `act[a * m + x]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteASet {
    label: String,
    monoid: Arc<FiniteMonoid>,
    m: usize,
    act: Vec<usize>,
}

impl FiniteASet {
    pub fn from_table(
        label: &str,
        monoid: Arc<FiniteMonoid>,
        m: usize,
        act: Vec<usize>,
    ) -> Result<Self, ASetError> {
        let n = monoid.size();
        if m == 0 || act.len() != n * m || act.iter().any(|&v| v >= m) {
            return Err(ASetError::BadTable);
        }
        let s = FiniteASet { label: label.to_string(), monoid, m, act };
        for a in 0..n {
            if s.act(a, 0) != 0 {
                return Err(ASetError::BadBase);
            }
        }
        for x in 0..m {
            if s.act(s.monoid.star(), x) != 0 {
                return Err(ASetError::BadBase);
            }
        }
        let one = s.monoid.one();
        for x in 0..m {
            if s.act(one, x) != x {
                return Err(ASetError::BadIdentity(x));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for x in 0..m {
                    if s.act(s.monoid.mul(a, b), x) != s.act(a, s.act(b, x)) {
                        return Err(ASetError::NotAssociative(a, b, x));
                    }
                }
            }
        }
        Ok(s)
    }

    /// The one-point set.
    pub fn point(monoid: Arc<FiniteMonoid>) -> FiniteASet {
        let n = monoid.size();
        FiniteASet { label: "pt".to_string(), monoid, m: 1, act: vec![0; n] }
    }

    /// Wedge of `r` copies of the monoid acting on itself from the left.
    /// Copy `i`, monoid element `a ≥ 1` sits at `i*(n-1) + (a-1) + 1`.
    pub fn free(monoid: Arc<FiniteMonoid>, r: usize) -> FiniteASet {
        let n = monoid.size();
        if n == 1 || r == 0 {
            return FiniteASet::point(monoid).with_label(&format!("free{r}"));
        }
        let m = r * (n - 1) + 1;
        let mut act = vec![0usize; n * m];
        for a in 0..n {
            for i in 0..r {
                for b in 1..n {
                    let x = i * (n - 1) + (b - 1) + 1;
                    let p = monoid.mul(a, b);
                    act[a * m + x] = if p == 0 { 0 } else { i * (n - 1) + (p - 1) + 1 };
                }
            }
        }
        FiniteASet { label: format!("free{r}"), monoid, m, act }
    }

    /// Element index of monoid element `a` in copy `i` of [`FiniteASet::free`].
    pub fn free_index(monoid: &FiniteMonoid, i: usize, a: usize) -> usize {
        if a == 0 {
            0
        } else {
            i * (monoid.size() - 1) + (a - 1) + 1
        }
    }

    /// The two-element set `{∗, x}` where units fix `x` and everything else
    /// kills it. Over a group monoid this is the trivially-acted two-point
    /// set; over a monoid with nontrivial non-units it is the unique simple
    /// set.
    pub fn simple(monoid: Arc<FiniteMonoid>) -> FiniteASet {
        let n = monoid.size();
        if n == 1 {
            return FiniteASet::point(monoid).with_label("s0");
        }
        let units: BTreeSet<usize> = monoid.units().into_iter().collect();
        let mut act = vec![0usize; n * 2];
        for a in 0..n {
            act[a * 2 + 1] = if units.contains(&a) { 1 } else { 0 };
        }
        FiniteASet { label: "s0".to_string(), monoid, m: 2, act }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn monoid(&self) -> &Arc<FiniteMonoid> {
        &self.monoid
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn act(&self, a: usize, x: usize) -> usize {
        self.act[a * self.m + x]
    }

    pub fn table(&self) -> &[usize] {
        &self.act
    }

    pub fn is_point(&self) -> bool {
        self.m == 1
    }

    /// First triple `(a, b, x)` with `a·x = b·x ≠ ∗` and `a ≠ b`, in scan
    /// order over `a`, then `b`, then `x`.
    pub fn pc_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.monoid.size();
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                for x in 0..self.m {
                    let r = self.act(a, x);
                    if r != 0 && r == self.act(b, x) {
                        return Some((a, b, x));
                    }
                }
            }
        }
        None
    }

    pub fn pc_decision(&self) -> PcDecision {
        match self.pc_witness() {
            None => PcDecision::Pc,
            Some((a, b, x)) => PcDecision::NotPc { a, b, x },
        }
    }

    pub fn is_pc(&self) -> bool {
        self.pc_witness().is_none()
    }

    /// Smallest action-closed subset containing `x`.
    pub fn cyclic_subset(&self, x: usize) -> ASubset {
        let mut members: BTreeSet<usize> = BTreeSet::new();
        members.insert(0);
        members.insert(x);
        for a in 0..self.monoid.size() {
            members.insert(self.act(a, x));
        }
        ASubset { parent: self.clone(), members }
    }

    /// Every action-closed subset containing the basepoint, by scanning the
    /// subsets of the nonzero elements. Exponential in the size; intended
    /// for the small carriers handled here.
    pub fn closed_subsets(&self) -> Vec<ASubset> {
        let nonzero = self.m - 1;
        let mut out = Vec::new();
        'mask: for mask in 0u64..(1u64 << nonzero) {
            let mut members: BTreeSet<usize> = BTreeSet::new();
            members.insert(0);
            for x in 0..nonzero {
                if mask & (1 << x) != 0 {
                    members.insert(x + 1);
                }
            }
            for &x in &members {
                for a in 0..self.monoid.size() {
                    if !members.contains(&self.act(a, x)) {
                        continue 'mask;
                    }
                }
            }
            out.push(ASubset { parent: self.clone(), members });
        }
        out
    }

    /// Collapse a closed subset to the basepoint. Returns the quotient set
    /// and the projection.
    pub fn quotient(&self, sub: &ASubset) -> Result<(FiniteASet, ASetMap), ASetError> {
        if &sub.parent != self {
            return Err(ASetError::Mismatch);
        }
        let keep: Vec<usize> = (1..self.m).filter(|x| !sub.members.contains(x)).collect();
        let mut old_to_new = vec![0usize; self.m];
        for (i, &x) in keep.iter().enumerate() {
            old_to_new[x] = i + 1;
        }
        let m = keep.len() + 1;
        let n = self.monoid.size();
        let mut act = vec![0usize; n * m];
        for a in 0..n {
            for (i, &x) in keep.iter().enumerate() {
                act[a * m + (i + 1)] = old_to_new[self.act(a, x)];
            }
        }
        let q = FiniteASet {
            label: format!("{}/{}", self.label, sub.describe()),
            monoid: self.monoid.clone(),
            m,
            act,
        };
        let map = ASetMap::new(self.clone(), q.clone(), old_to_new)?;
        Ok((q, map))
    }

    /// `I·S` for a two-sided ideal of the acting monoid and a closed subset.
    pub fn ideal_image(&self, ideal: &Ideal, start: &ASubset) -> Result<ASubset, ASetError> {
        if ideal.parent() != self.monoid.as_ref() || &start.parent != self {
            return Err(ASetError::Mismatch);
        }
        let mut members: BTreeSet<usize> = BTreeSet::new();
        members.insert(0);
        for &a in ideal.members() {
            for &x in &start.members {
                members.insert(self.act(a, x));
            }
        }
        Ok(ASubset { parent: self.clone(), members })
    }

    pub fn full_subset(&self) -> ASubset {
        ASubset { parent: self.clone(), members: (0..self.m).collect() }
    }

    pub fn zero_subset(&self) -> ASubset {
        ASubset { parent: self.clone(), members: [0].into_iter().collect() }
    }

    /// One-point union. Nonzero elements of `self` keep their indices;
    /// nonzero elements of `other` follow.
    pub fn wedge(&self, other: &FiniteASet) -> Result<FiniteASet, ASetError> {
        if self.monoid != other.monoid {
            return Err(ASetError::Mismatch);
        }
        let m = self.m + other.m - 1;
        let n = self.monoid.size();
        let mut act = vec![0usize; n * m];
        for a in 0..n {
            for x in 1..self.m {
                act[a * m + x] = self.act(a, x);
            }
            for y in 1..other.m {
                let v = other.act(a, y);
                act[a * m + (self.m - 1 + y)] = if v == 0 { 0 } else { self.m - 1 + v };
            }
        }
        Ok(FiniteASet {
            label: format!("{}v{}", self.label, other.label),
            monoid: self.monoid.clone(),
            m,
            act,
        })
    }

    /// Smash product with the diagonal action. Pair `(x, y)` of nonzero
    /// elements sits at `(x-1)*(mY-1) + (y-1) + 1`; a pair with a zero
    /// coordinate is the basepoint.
    pub fn smash(&self, other: &FiniteASet) -> Result<FiniteASet, ASetError> {
        if self.monoid != other.monoid {
            return Err(ASetError::Mismatch);
        }
        let (mx, my) = (self.m, other.m);
        if mx == 1 || my == 1 {
            return Ok(FiniteASet::point(self.monoid.clone()));
        }
        let idx = |x: usize, y: usize| -> usize {
            if x == 0 || y == 0 {
                0
            } else {
                (x - 1) * (my - 1) + (y - 1) + 1
            }
        };
        let m = (mx - 1) * (my - 1) + 1;
        let n = self.monoid.size();
        let mut act = vec![0usize; n * m];
        for a in 0..n {
            for x in 1..mx {
                for y in 1..my {
                    act[a * m + idx(x, y)] = idx(self.act(a, x), other.act(a, y));
                }
            }
        }
        Ok(FiniteASet {
            label: format!("{}^{}", self.label, other.label),
            monoid: self.monoid.clone(),
            m,
            act,
        })
    }

    /// Index of the pair `(x, y)` in `self.smash(other)`.
    pub fn smash_index(&self, other: &FiniteASet, x: usize, y: usize) -> usize {
        if x == 0 || y == 0 {
            0
        } else {
            (x - 1) * (other.m - 1) + (y - 1) + 1
        }
    }

    /// Restriction of scalars along `f: A → B` applied to a set over `B`.
    pub fn restrict_along(f: &MonoidMap, x: &FiniteASet) -> Result<FiniteASet, ASetError> {
        if f.target() != x.monoid.as_ref() {
            return Err(ASetError::Mismatch);
        }
        let a_mon = Arc::new(f.source().clone());
        let n = a_mon.size();
        let mut act = vec![0usize; n * x.m];
        for a in 0..n {
            for xx in 0..x.m {
                act[a * x.m + xx] = x.act(f.apply(a), xx);
            }
        }
        Ok(FiniteASet { label: x.label.clone(), monoid: a_mon, m: x.m, act })
    }

    /// Pushes the action forward along a surjective monoid map when every
    /// fiber acts the same way; errors otherwise. Inverse to restriction on
    /// sets where the kernel congruence already acts trivially.
    pub fn factor_action(f: &MonoidMap, x: &FiniteASet) -> Result<FiniteASet, ASetError> {
        if f.source() != x.monoid.as_ref() {
            return Err(ASetError::Mismatch);
        }
        let b_mon = Arc::new(f.target().clone());
        let nb = b_mon.size();
        let mut act = vec![usize::MAX; nb * x.m];
        for a in 0..f.source().size() {
            let b = f.apply(a);
            for xx in 0..x.m {
                let v = x.act(a, xx);
                let slot = &mut act[b * x.m + xx];
                if *slot == usize::MAX {
                    *slot = v;
                } else if *slot != v {
                    return Err(ASetError::NotWellDefined);
                }
            }
        }
        if act.contains(&usize::MAX) {
            // f not surjective: some target element has no prescribed action.
            return Err(ASetError::NotWellDefined);
        }
        FiniteASet::from_table(&x.label, b_mon, x.m, act)
    }

    /// Relabels the carrier by `perm` (old index to new, `perm[0] == 0`).
    pub fn relabel(&self, perm: &[usize]) -> Result<FiniteASet, ASetError> {
        if perm.len() != self.m || perm[0] != 0 {
            return Err(ASetError::BadTable);
        }
        let mut seen = vec![false; self.m];
        for &v in perm {
            if v >= self.m || seen[v] {
                return Err(ASetError::BadTable);
            }
            seen[v] = true;
        }
        let n = self.monoid.size();
        let mut act = vec![0usize; n * self.m];
        for a in 0..n {
            for x in 0..self.m {
                act[a * self.m + perm[x]] = perm[self.act(a, x)];
            }
        }
        Ok(FiniteASet {
            label: self.label.clone(),
            monoid: self.monoid.clone(),
            m: self.m,
            act,
        })
    }

    fn canon_input(&self) -> CanonInput {
        let n = self.monoid.size();
        let funcs: Vec<Vec<usize>> = (2..n)
            .map(|a| (0..self.m).map(|x| self.act(a, x)).collect())
            .collect();
        CanonInput { n: self.m, funcs, colors: vec![0; self.m] }
    }

    /// Key equal across exactly the basepoint-fixing equivariant bijections.
    /// Only meaningful between sets over the same monoid with the same
    /// element indexing.
    pub fn canonical_key(&self) -> CanonKey {
        self.canon_input().canonical_key()
    }

    pub fn is_isomorphic(&self, other: &FiniteASet) -> bool {
        self.monoid == other.monoid && self.canonical_key() == other.canonical_key()
    }

    /// Union-find based quotient by the congruence generated by the given
    /// pairs. The generator set must already be action-stable; closure under
    /// the action is enforced with a worklist anyway, so arbitrary pair sets
    /// are safe. Returns the quotient and the class map (old index to new).
    pub fn quotient_by_pairs(&self, pairs: &[(usize, usize)]) -> (FiniteASet, Vec<usize>) {
        let mut uf = UnionFind::new(self.m);
        let mut work: Vec<(usize, usize)> = Vec::new();
        for &(u, v) in pairs {
            if uf.union(u, v) {
                work.push((u, v));
            }
        }
        let n = self.monoid.size();
        while let Some((u, v)) = work.pop() {
            for a in 0..n {
                let (au, av) = (self.act(a, u), self.act(a, v));
                if uf.union(au, av) {
                    work.push((au, av));
                }
            }
        }
        // Classes ordered by minimal member; the basepoint class is first.
        let mut reps: Vec<usize> = Vec::new();
        let mut class_of = vec![usize::MAX; self.m];
        for x in 0..self.m {
            let r = uf.find(x);
            if class_of[r] == usize::MAX {
                class_of[r] = reps.len();
                reps.push(r);
            }
        }
        let class: Vec<usize> = (0..self.m).map(|x| class_of[uf.find(x)]).collect();
        let m = reps.len();
        let mut act = vec![0usize; n * m];
        for a in 0..n {
            for (i, &r) in reps.iter().enumerate() {
                act[a * m + i] = class[self.act(a, r)];
            }
        }
        let q = FiniteASet {
            label: format!("{}~", self.label),
            monoid: self.monoid.clone(),
            m,
            act,
        };
        (q, class)
    }
}

/// Pushout of `x ←f– y –g→ z`: the wedge of `x` and `z` with `f(q)` glued to
/// `g(q)` for every `q`. Returns the pushout with the two structure maps.
pub fn pushout(
    f: &ASetMap,
    g: &ASetMap,
) -> Result<(FiniteASet, ASetMap, ASetMap), ASetError> {
    if f.source() != g.source() {
        return Err(ASetError::Mismatch);
    }
    let x = f.target();
    let z = g.target();
    let w = x.wedge(z)?;
    let pairs: Vec<(usize, usize)> = (0..f.source().size())
        .map(|q| {
            let fx = f.apply(q);
            let gz = g.apply(q);
            (fx, if gz == 0 { 0 } else { x.m - 1 + gz })
        })
        .collect();
    let (p, class) = w.quotient_by_pairs(&pairs);
    let from_x = ASetMap::new(x.clone(), p.clone(), (0..x.m).map(|i| class[i]).collect())?;
    let from_z = ASetMap::new(
        z.clone(),
        p.clone(),
        (0..z.m)
            .map(|j| if j == 0 { 0 } else { class[x.m - 1 + j] })
            .collect(),
    )?;
    Ok((p, from_x, from_z))
}

/// Pullback of `x –f→ z ←g– y`: all pairs with `f(x') = g(y')`, diagonal
/// action, basepoint `(∗, ∗)`. Returns the pullback with its two projections.
pub fn pullback(
    f: &ASetMap,
    g: &ASetMap,
) -> Result<(FiniteASet, ASetMap, ASetMap), ASetError> {
    if f.target() != g.target() {
        return Err(ASetError::Mismatch);
    }
    let x = f.source();
    let y = g.source();
    if x.monoid != y.monoid {
        return Err(ASetError::Mismatch);
    }
    let mut elems: Vec<(usize, usize)> = vec![(0, 0)];
    for xx in 0..x.m {
        for yy in 0..y.m {
            if (xx, yy) != (0, 0) && f.apply(xx) == g.apply(yy) {
                elems.push((xx, yy));
            }
        }
    }
    let pos = |p: (usize, usize)| -> usize { elems.iter().position(|&q| q == p).unwrap() };
    let n = x.monoid.size();
    let m = elems.len();
    let mut act = vec![0usize; n * m];
    for a in 0..n {
        for (i, &(xx, yy)) in elems.iter().enumerate() {
            act[a * m + i] = pos((x.act(a, xx), y.act(a, yy)));
        }
    }
    let p = FiniteASet {
        label: format!("{}x{}", x.label, y.label),
        monoid: x.monoid.clone(),
        m,
        act,
    };
    let to_x = ASetMap::new(p.clone(), x.clone(), elems.iter().map(|&(xx, _)| xx).collect())?;
    let to_y = ASetMap::new(p.clone(), y.clone(), elems.iter().map(|&(_, yy)| yy).collect())?;
    Ok((p, to_x, to_y))
}

/// Base change of a set over `A` along `f: A → B`: pairs `(b, x)` modulo
/// `(b·f(a), x) ~ (b, a·x)`, with `B` acting on the left coordinate.
pub struct BaseChange {
    pub set: FiniteASet,
    raw_class: Vec<usize>,
    m_x: usize,
}

impl BaseChange {
    /// Class of the pair `(b, x)` in the base-changed set.
    pub fn class_of(&self, b: usize, x: usize) -> usize {
        if b == 0 || x == 0 {
            0
        } else {
            self.raw_class[(b - 1) * (self.m_x - 1) + (x - 1) + 1]
        }
    }

    /// The canonical map `x ↦ (1, x)`, as a plain index vector.
    pub fn unit_map_vec(&self) -> Vec<usize> {
        (0..self.m_x).map(|x| self.class_of(1, x)).collect()
    }
}

pub fn base_change(f: &MonoidMap, x: &FiniteASet) -> Result<BaseChange, ASetError> {
    if f.source() != x.monoid().as_ref() {
        return Err(ASetError::Mismatch);
    }
    let b_mon = Arc::new(f.target().clone());
    let nb = b_mon.size();
    let mx = x.size();
    if nb == 1 || mx == 1 {
        let set = FiniteASet::point(b_mon);
        return Ok(BaseChange { set, raw_class: vec![0; 1], m_x: mx.max(1) });
    }
    let raw_idx = |b: usize, xx: usize| -> usize {
        if b == 0 || xx == 0 {
            0
        } else {
            (b - 1) * (mx - 1) + (xx - 1) + 1
        }
    };
    let raw_m = (nb - 1) * (mx - 1) + 1;
    let mut uf = UnionFind::new(raw_m);
    for b in 1..nb {
        for a in 0..f.source().size() {
            let bfa = b_mon.mul(b, f.apply(a));
            for xx in 1..mx {
                uf.union(raw_idx(bfa, xx), raw_idx(b, x.act(a, xx)));
            }
        }
    }
    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = vec![usize::MAX; raw_m];
    for i in 0..raw_m {
        let r = uf.find(i);
        if class_of[r] == usize::MAX {
            class_of[r] = reps.len();
            reps.push(r);
        }
    }
    let raw_class: Vec<usize> = (0..raw_m).map(|i| class_of[uf.find(i)]).collect();
    let m = reps.len();
    // Action c·(b, x) = (cb, x); check independence of representative.
    let mut act = vec![usize::MAX; nb * m];
    for raw in 0..raw_m {
        let (b, xx) = if raw == 0 {
            (0, 0)
        } else {
            ((raw - 1) / (mx - 1) + 1, (raw - 1) % (mx - 1) + 1)
        };
        for c in 0..nb {
            let target = raw_class[raw_idx(b_mon.mul(c, b), xx)];
            let slot = &mut act[c * m + raw_class[raw]];
            if *slot == usize::MAX {
                *slot = target;
            } else if *slot != target {
                return Err(ASetError::NotWellDefined);
            }
        }
    }
    let act: Vec<usize> = act.into_iter().map(|v| if v == usize::MAX { 0 } else { v }).collect();
    let set = FiniteASet::from_table(&format!("{}*{}", f.target().label(), x.label()), b_mon, m, act)?;
    Ok(BaseChange { set, raw_class, m_x: mx })
}

/// An action-closed subset of a set, always containing the basepoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASubset {
    parent: FiniteASet,
    members: BTreeSet<usize>,
}

impl ASubset {
    pub fn new(parent: &FiniteASet, members: BTreeSet<usize>) -> Result<Self, ASetError> {
        if !members.contains(&0) || members.iter().any(|&v| v >= parent.size()) {
            return Err(ASetError::BadSubset);
        }
        for &x in &members {
            for a in 0..parent.monoid().size() {
                if !members.contains(&parent.act(a, x)) {
                    return Err(ASetError::BadSubset);
                }
            }
        }
        Ok(ASubset { parent: parent.clone(), members })
    }

    pub fn parent(&self) -> &FiniteASet {
        &self.parent
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(&x)
    }

    pub fn is_zero(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.parent.size()
    }

    pub fn is_subset_of(&self, other: &ASubset) -> bool {
        self.parent == other.parent && self.members.is_subset(&other.members)
    }

    pub fn union(&self, other: &ASubset) -> Result<ASubset, ASetError> {
        if self.parent != other.parent {
            return Err(ASetError::Mismatch);
        }
        Ok(ASubset {
            parent: self.parent.clone(),
            members: self.members.union(&other.members).copied().collect(),
        })
    }

    pub fn intersection(&self, other: &ASubset) -> Result<ASubset, ASetError> {
        if self.parent != other.parent {
            return Err(ASetError::Mismatch);
        }
        Ok(ASubset {
            parent: self.parent.clone(),
            members: self.members.intersection(&other.members).copied().collect(),
        })
    }

    fn describe(&self) -> String {
        format!("[{}]", self.members.len())
    }

    /// The subset as a set in its own right: member `k` (in ascending order)
    /// becomes index `k`.
    pub fn as_aset(&self) -> FiniteASet {
        let elems: Vec<usize> = self.members.iter().copied().collect();
        let pos = |x: usize| elems.binary_search(&x).unwrap();
        let n = self.parent.monoid().size();
        let m = elems.len();
        let mut act = vec![0usize; n * m];
        for a in 0..n {
            for (i, &x) in elems.iter().enumerate() {
                act[a * m + i] = pos(self.parent.act(a, x));
            }
        }
        FiniteASet {
            label: format!("{}{}", self.parent.label(), self.describe()),
            monoid: self.parent.monoid().clone(),
            m,
            act,
        }
    }

    pub fn inclusion_map(&self) -> ASetMap {
        let elems: Vec<usize> = self.members.iter().copied().collect();
        ASetMap::new(self.as_aset(), self.parent.clone(), elems)
            .expect("inclusion of a closed subset is equivariant")
    }
}

/// A pointed equivariant map between sets over the same monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASetMap {
    source: FiniteASet,
    target: FiniteASet,
    map: Vec<usize>,
}

impl ASetMap {
    pub fn new(source: FiniteASet, target: FiniteASet, map: Vec<usize>) -> Result<Self, ASetError> {
        if source.monoid() != target.monoid() {
            return Err(ASetError::Mismatch);
        }
        if map.len() != source.size() || map.iter().any(|&v| v >= target.size()) || map[0] != 0 {
            return Err(ASetError::BadTable);
        }
        for a in 0..source.monoid().size() {
            for x in 0..source.size() {
                if map[source.act(a, x)] != target.act(a, map[x]) {
                    return Err(ASetError::NotEquivariant(a, x));
                }
            }
        }
        Ok(ASetMap { source, target, map })
    }

    pub fn identity(set: &FiniteASet) -> ASetMap {
        ASetMap {
            source: set.clone(),
            target: set.clone(),
            map: (0..set.size()).collect(),
        }
    }

    pub fn to_point(set: &FiniteASet) -> ASetMap {
        ASetMap {
            source: set.clone(),
            target: FiniteASet::point(set.monoid().clone()),
            map: vec![0; set.size()],
        }
    }

    pub fn source(&self) -> &FiniteASet {
        &self.source
    }

    pub fn target(&self) -> &FiniteASet {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        for &v in &self.map {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.source.size() == self.target.size() && self.is_injective()
    }

    /// Preimage of the basepoint, always a closed subset of the source.
    pub fn kernel(&self) -> ASubset {
        let members: BTreeSet<usize> =
            (0..self.source.size()).filter(|&x| self.map[x] == 0).collect();
        ASubset { parent: self.source.clone(), members }
    }

    /// Image, always a closed subset of the target.
    pub fn image(&self) -> ASubset {
        let mut members: BTreeSet<usize> = self.map.iter().copied().collect();
        members.insert(0);
        ASubset { parent: self.target.clone(), members }
    }

    /// Monic means injective.
    pub fn is_admissible_monic(&self) -> bool {
        self.is_injective()
    }

    /// Admissible epi: surjective and injective away from the kernel, so the
    /// map is exactly the collapse of its kernel.
    pub fn is_admissible_epi(&self) -> bool {
        if !self.is_surjective() {
            return false;
        }
        let mut seen = vec![false; self.target.size()];
        for &v in &self.map {
            if v != 0 && std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        true
    }

    pub fn compose(&self, then: &ASetMap) -> Result<ASetMap, ASetError> {
        if self.target != then.source {
            return Err(ASetError::Mismatch);
        }
        Ok(ASetMap {
            source: self.source.clone(),
            target: then.target.clone(),
            map: self.map.iter().map(|&v| then.apply(v)).collect(),
        })
    }
}

/// A short sequence `y ↪ x ↠ z` with monic inclusion, admissible projection,
/// and image equal to kernel.
#[derive(Debug, Clone)]
pub struct AdmissibleSeq {
    pub sub: ASetMap,
    pub quo: ASetMap,
}

impl AdmissibleSeq {
    pub fn new(sub: ASetMap, quo: ASetMap) -> Result<Self, ASetError> {
        if sub.target() != quo.source() {
            return Err(ASetError::Mismatch);
        }
        if !sub.is_admissible_monic() {
            return Err(ASetError::NotAdmissible("inclusion is not injective"));
        }
        if !quo.is_admissible_epi() {
            return Err(ASetError::NotAdmissible("projection is not a kernel collapse"));
        }
        if sub.image() != quo.kernel() {
            return Err(ASetError::NotAdmissible("image differs from kernel"));
        }
        Ok(AdmissibleSeq { sub, quo })
    }

    /// The canonical sequence `y ↪ x ↠ x/y` attached to a closed subset.
    pub fn from_subset(sub: &ASubset) -> Result<Self, ASetError> {
        let inc = sub.inclusion_map();
        let (_, proj) = sub.parent().quotient(sub)?;
        AdmissibleSeq::new(inc, proj)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }

    /// True when the call actually merged two classes.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // Keep the smaller root so the basepoint class stays rooted at 0.
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupTable;

    fn ntr(n: usize) -> Arc<FiniteMonoid> {
        Arc::new(FiniteMonoid::truncated_cyclic(n))
    }

    fn z2() -> Arc<FiniteMonoid> {
        Arc::new(FiniteMonoid::group_monoid(&GroupTable::cyclic(2)))
    }

    #[test]
    fn construction_of_the_standard_sets() {
        let a = ntr(2);
        assert_eq!(FiniteASet::point(a.clone()).size(), 1);
        assert_eq!(FiniteASet::free(a.clone(), 1).size(), 3);
        assert_eq!(FiniteASet::free(a.clone(), 3).size(), 7);
        assert_eq!(FiniteASet::simple(a).size(), 2);
        let zero = Arc::new(FiniteMonoid::zero_monoid());
        assert_eq!(FiniteASet::free(zero, 2).size(), 1);
    }

    #[test]
    fn rejects_broken_tables() {
        let a = ntr(2);
        // Identity row broken.
        let act = vec![0, 0, 0, 0, 0, 0];
        assert!(matches!(
            FiniteASet::from_table("bad", a.clone(), 2, act),
            Err(ASetError::BadIdentity(_))
        ));
        // t² = ∗ must kill everything t doesn't: t·x = x is inconsistent.
        let act = vec![0, 0, 0, 1, 0, 1];
        assert!(matches!(
            FiniteASet::from_table("bad", a, 2, act),
            Err(ASetError::NotAssociative(..))
        ));
    }

    #[test]
    fn simple_set_pc_depends_on_units() {
        assert!(FiniteASet::simple(ntr(2)).is_pc());
        let s = FiniteASet::simple(z2());
        assert_eq!(s.pc_witness(), Some((1, 2, 1)));
    }

    #[test]
    fn free_sets_over_pc_monoids_are_pc() {
        for mon in [ntr(1), ntr(3), z2()] {
            assert!(FiniteASet::free(mon, 2).is_pc());
        }
        let stab = Arc::new(FiniteMonoid::stabilized_cyclic(1, 1));
        assert!(!FiniteASet::free(stab, 1).is_pc());
    }

    #[test]
    fn closed_subsets_of_the_rank_one_free_set() {
        // Carrier {∗, 1, t} over {∗,1,t}: closed subsets are {∗}, {∗,t}, all.
        let x = FiniteASet::free(ntr(2), 1);
        let subs = x.closed_subsets();
        let sizes: Vec<usize> = subs.iter().map(|s| s.members().len()).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn quotient_collapse_matches_simple() {
        let x = FiniteASet::free(ntr(2), 1);
        let tail = ASubset::new(&x, [0, 2].into_iter().collect()).unwrap();
        let (q, proj) = x.quotient(&tail).unwrap();
        assert!(q.is_isomorphic(&FiniteASet::simple(ntr(2))));
        assert!(proj.is_admissible_epi());
        assert_eq!(proj.kernel().members().len(), 2);
    }

    #[test]
    fn admissible_epi_rejects_folding() {
        let a = ntr(2);
        let x = FiniteASet::free(a.clone(), 1);
        let w = x.wedge(&x).unwrap();
        // Fold both copies onto the first.
        let fold = ASetMap::new(w, x.clone(), vec![0, 1, 2, 1, 2]).unwrap();
        assert!(fold.is_surjective());
        assert!(!fold.is_admissible_epi());
        assert!(!fold.is_admissible_monic());
    }

    #[test]
    fn sequence_from_subset_is_admissible() {
        let x = FiniteASet::free(ntr(3), 2);
        for sub in x.closed_subsets() {
            let seq = AdmissibleSeq::from_subset(&sub).unwrap();
            assert_eq!(seq.sub.image(), seq.quo.kernel());
        }
    }

    #[test]
    fn pushout_along_point_is_the_quotient() {
        let x = FiniteASet::free(ntr(2), 1);
        let sub = ASubset::new(&x, [0, 2].into_iter().collect()).unwrap();
        let inc = sub.inclusion_map();
        let collapse = ASetMap::to_point(&sub.as_aset());
        let (p, from_x, _) = pushout(&inc, &collapse).unwrap();
        let (q, proj) = x.quotient(&sub).unwrap();
        assert!(p.is_isomorphic(&q));
        for x_el in 0..x.size() {
            assert_eq!(from_x.apply(x_el) == 0, proj.apply(x_el) == 0);
        }
    }

    #[test]
    fn pushout_of_identity_is_identity() {
        let x = FiniteASet::free(z2(), 2);
        let id = ASetMap::identity(&x);
        let (p, _, _) = pushout(&id, &id).unwrap();
        assert!(p.is_isomorphic(&x));
    }

    #[test]
    fn pullback_over_the_point_is_the_product() {
        let a = ntr(2);
        let x = FiniteASet::simple(a.clone());
        let y = FiniteASet::free(a, 1);
        let (p, px, py) = pullback(&ASetMap::to_point(&x), &ASetMap::to_point(&y)).unwrap();
        assert_eq!(p.size(), x.size() * y.size());
        assert!(px.is_surjective());
        assert!(py.is_surjective());
    }

    #[test]
    fn pullback_of_identities_is_the_diagonal() {
        let x = FiniteASet::free(ntr(2), 1);
        let id = ASetMap::identity(&x);
        let (p, _, _) = pullback(&id, &id).unwrap();
        assert!(p.is_isomorphic(&x));
    }

    #[test]
    fn base_change_along_identity_is_identity() {
        let a = ntr(3);
        let x = FiniteASet::free(a.clone(), 2);
        let bc = base_change(&a.identity_map(), &x).unwrap();
        assert!(bc.set.is_isomorphic(&x));
    }

    #[test]
    fn base_change_of_free_stays_free() {
        // Collapse t² in {∗,1,t,t²}: the free rank-1 set base-changes to the
        // free rank-1 set over the quotient.
        let a = FiniteMonoid::truncated_cyclic(3);
        let i = crate::monoid::Ideal::principal(&a, 3);
        let (_, proj) = a.quotient(&i).unwrap();
        let x = FiniteASet::free(Arc::new(a.clone()), 1);
        let bc = base_change(&proj, &x).unwrap();
        let free_b = FiniteASet::free(Arc::new(proj.target().clone()), 1);
        assert!(bc.set.is_isomorphic(&free_b));
    }

    #[test]
    fn base_change_kills_collapsed_tails() {
        // f1 ∧ (free rank 1 over {∗,1,t}) has only the class of (1,1) left.
        let a = FiniteMonoid::truncated_cyclic(2);
        let i = crate::monoid::Ideal::principal(&a, 2);
        let (_, proj) = a.quotient(&i).unwrap();
        let x = FiniteASet::free(Arc::new(a), 1);
        let bc = base_change(&proj, &x).unwrap();
        assert_eq!(bc.set.size(), 2);
        assert_eq!(bc.class_of(1, 2), 0);
        assert_eq!(bc.unit_map_vec(), vec![0, 1, 0]);
    }

    #[test]
    fn restriction_then_factoring_round_trips() {
        let a = FiniteMonoid::truncated_cyclic(3);
        let i = crate::monoid::Ideal::principal(&a, 3);
        let (b, proj) = a.quotient(&i).unwrap();
        let over_b = FiniteASet::simple(Arc::new(b));
        let over_a = FiniteASet::restrict_along(&proj, &over_b).unwrap();
        assert!(over_a.is_isomorphic(&FiniteASet::simple(Arc::new(a))));
        let back = FiniteASet::factor_action(&proj, &over_a).unwrap();
        assert!(back.is_isomorphic(&over_b));
    }

    #[test]
    fn factoring_fails_when_the_kernel_acts() {
        let a = FiniteMonoid::truncated_cyclic(3);
        let i = crate::monoid::Ideal::principal(&a, 3);
        let (_, proj) = a.quotient(&i).unwrap();
        // t² acts nontrivially on the free set, so the action cannot factor.
        let x = FiniteASet::free(Arc::new(a), 1);
        assert_eq!(FiniteASet::factor_action(&proj, &x), Err(ASetError::NotWellDefined));
    }

    #[test]
    fn wedge_and_smash_shapes() {
        let a = z2();
        let x = FiniteASet::free(a.clone(), 1); // {∗, 1, g}
        let s = FiniteASet::simple(a.clone()); // trivial two-point set
        let w = x.wedge(&s).unwrap();
        assert_eq!(w.size(), 4);
        assert!(w.is_isomorphic(&s.wedge(&x).unwrap()));
        // Trivial point smashes as a unit.
        let sm = s.smash(&x).unwrap();
        assert!(sm.is_isomorphic(&x));
        // Free ∧ free over a group: |G| copies of the free set.
        let ff = x.smash(&x).unwrap();
        assert_eq!(ff.size(), 5);
        assert!(ff.is_isomorphic(&x.wedge(&x).unwrap()));
    }

    #[test]
    fn noether_isomorphism_on_a_concrete_chain() {
        // X = free rank 1 over {∗,1,t,t²}, Z = {∗,t,t²} ⊇ Y = {∗,t²}.
        let x = FiniteASet::free(ntr(3), 1);
        let z = ASubset::new(&x, [0, 2, 3].into_iter().collect()).unwrap();
        let y = ASubset::new(&x, [0, 3].into_iter().collect()).unwrap();
        assert!(y.is_subset_of(&z));
        let (x_mod_y, proj_y) = x.quotient(&y).unwrap();
        // Image of Z in X/Y.
        let z_in_q: BTreeSet<usize> = z.members().iter().map(|&v| proj_y.apply(v)).collect();
        let z_mod_y = ASubset::new(&x_mod_y, z_in_q).unwrap();
        let (lhs, _) = x_mod_y.quotient(&z_mod_y).unwrap();
        let (rhs, _) = x.quotient(&z).unwrap();
        assert!(lhs.is_isomorphic(&rhs));
    }

    #[test]
    fn canonical_key_is_relabel_invariant() {
        let x = FiniteASet::free(ntr(2), 2); // 5 elements
        let perm = vec![0, 3, 1, 4, 2];
        let y = x.relabel(&perm).unwrap();
        assert_eq!(x.canonical_key(), y.canonical_key());
        assert!(x.is_isomorphic(&y));
        assert!(!x.is_isomorphic(&FiniteASet::free(ntr(2), 1)));
    }

    #[test]
    fn ideal_image_computes_radical_layers() {
        let a = FiniteMonoid::truncated_cyclic(3);
        let ideal = a.maximal_ideal().unwrap();
        let arc = Arc::new(a);
        let x = FiniteASet::free(arc, 1); // {∗, 1, t, t²}
        let full = x.full_subset();
        let m1 = x.ideal_image(&ideal, &full).unwrap();
        assert_eq!(m1.members().iter().copied().collect::<Vec<_>>(), vec![0, 2, 3]);
        let m2 = x.ideal_image(&ideal, &m1).unwrap();
        assert_eq!(m2.members().iter().copied().collect::<Vec<_>>(), vec![0, 3]);
        let m3 = x.ideal_image(&ideal, &m2).unwrap();
        assert!(m3.is_zero());
    }

    #[test]
    fn kernel_and_image_are_closed() {
        let x = FiniteASet::free(ntr(2), 2);
        let sub = x.cyclic_subset(2);
        let (_, proj) = x.quotient(&sub).unwrap();
        assert_eq!(proj.kernel().members(), sub.members());
        assert!(proj.image().is_full());
    }
}
