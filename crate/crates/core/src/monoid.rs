//! Finite pointed monoids given by full multiplication tables.
//!
//! Elements are indices `0..n` with the absorbing zero `∗` at index 0 and the
//! two-sided identity at index 1. The degenerate one-element monoid (where
//! `1 = ∗`) is allowed and shows up as the result of collapsing constructions,
//! e.g. inverting a nilpotent.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::group::GroupTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("table has wrong shape or an out-of-range entry")]
    BadTable,
    #[error("product is not associative at ({0}, {1}, {2})")]
    NonAssociative(usize, usize, usize),
    #[error("index 1 is not a two-sided identity (fails at {0})")]
    BadUnit(usize),
    #[error("index 0 is not an absorbing zero (fails at {0})")]
    BadZero(usize),
    #[error("monoid is not partially cancellative, witness a={0} b={1} c={2}")]
    NotPc(usize, usize, usize),
    #[error("non-units do not form a two-sided ideal (witness {0}*{1})")]
    NoMaximalIdeal(usize, usize),
    #[error("subset is not a two-sided ideal")]
    BadIdeal,
    #[error("powers of {s} are not a two-sided denominator set: {reason}")]
    NotDenominatorSet { s: usize, reason: String },
    #[error("map is not a monoid homomorphism")]
    BadMap,
    #[error("map is not an automorphism")]
    NotAutomorphism,
    #[error("operands live over different monoids")]
    Mismatch,
}

/// A finite pointed monoid: indices `0..n`, `∗ = 0`, identity `= 1` (or `= 0`
/// when `n == 1`), with the full multiplication table stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMonoid {
    label: String,
    n: usize,
    mul: Vec<usize>,
}

impl FiniteMonoid {
    /// Validates a raw table: shape, associativity, identity and zero laws.
    pub fn from_table(label: &str, n: usize, mul: Vec<usize>) -> Result<Self, MonoidError> {
        if n == 0 || mul.len() != n * n || mul.iter().any(|&v| v >= n) {
            return Err(MonoidError::BadTable);
        }
        let m = FiniteMonoid { label: label.to_string(), n, mul };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m.mul(m.mul(a, b), c) != m.mul(a, m.mul(b, c)) {
                        return Err(MonoidError::NonAssociative(a, b, c));
                    }
                }
            }
        }
        let one = m.one();
        for a in 0..n {
            if m.mul(one, a) != a || m.mul(a, one) != a {
                return Err(MonoidError::BadUnit(a));
            }
        }
        for a in 0..n {
            if m.mul(0, a) != 0 || m.mul(a, 0) != 0 {
                return Err(MonoidError::BadZero(a));
            }
        }
        Ok(m)
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

    pub fn star(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        if self.n == 1 {
            0
        } else {
            1
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.n == 1
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    pub fn table(&self) -> &[usize] {
        &self.mul
    }

    pub fn power(&self, a: usize, k: usize) -> usize {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Printable name for an element index: `∗`, `1`, or `e<i>`.
    pub fn element_name(&self, i: usize) -> String {
        if i == 0 && self.n == 1 {
            "∗=1".to_string()
        } else if i == 0 {
            "∗".to_string()
        } else if i == 1 {
            "1".to_string()
        } else {
            format!("e{i}")
        }
    }

    pub fn into_arc(self) -> Arc<FiniteMonoid> {
        Arc::new(self)
    }

    /// First triple violating partial cancellation in scan order: `ac = bc ≠ ∗`
    /// or `ca = cb ≠ ∗` with `a ≠ b`.
    pub fn pc_witness(&self) -> Option<(usize, usize, usize)> {
        for a in 0..self.n {
            for b in 0..self.n {
                if a == b {
                    continue;
                }
                for c in 0..self.n {
                    let r1 = self.mul(a, c);
                    if r1 != 0 && r1 == self.mul(b, c) {
                        return Some((a, b, c));
                    }
                    let r2 = self.mul(c, a);
                    if r2 != 0 && r2 == self.mul(c, b) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_pc(&self) -> bool {
        self.pc_witness().is_none()
    }

    /// Elements with a two-sided inverse. In a finite monoid a one-sided
    /// inverse is automatically two-sided; the scan checks both anyway.
    pub fn units(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&a| (0..self.n).any(|b| self.mul(a, b) == self.one() && self.mul(b, a) == self.one()))
            .collect()
    }

    /// The unit group as a group table over the unit indices.
    pub fn unit_group(&self) -> (Vec<usize>, GroupTable) {
        let us = self.units();
        let pos: BTreeMap<usize, usize> = us.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let k = us.len();
        let mut mul = vec![0usize; k * k];
        for (i, &a) in us.iter().enumerate() {
            for (j, &b) in us.iter().enumerate() {
                mul[i * k + j] = pos[&self.mul(a, b)];
            }
        }
        let g = GroupTable::new(&format!("{}-units", self.label), k, mul)
            .expect("units of a finite monoid form a group");
        (us, g)
    }

    /// The unique maximal two-sided ideal (∗ together with the non-units).
    /// Requires partial cancellativity, which guarantees the non-units are
    /// closed under multiplication by anything.
    pub fn maximal_ideal(&self) -> Result<Ideal, MonoidError> {
        if let Some((a, b, c)) = self.pc_witness() {
            return Err(MonoidError::NotPc(a, b, c));
        }
        self.nonunit_ideal()
    }

    /// Non-units as an ideal without the pc gate; errors if they fail to be
    /// closed. Used by the length computation so that stabilized (non-pc)
    /// cyclic monoids can still be measured.
    pub fn nonunit_ideal(&self) -> Result<Ideal, MonoidError> {
        let units: BTreeSet<usize> = self.units().into_iter().collect();
        let members: BTreeSet<usize> = (0..self.n).filter(|i| !units.contains(i)).collect();
        for &m in &members {
            for a in 0..self.n {
                if !members.contains(&self.mul(a, m)) {
                    return Err(MonoidError::NoMaximalIdeal(a, m));
                }
                if !members.contains(&self.mul(m, a)) {
                    return Err(MonoidError::NoMaximalIdeal(m, a));
                }
            }
        }
        Ideal::new(self, members)
    }

    /// Rees quotient by a two-sided ideal: carrier `(A \ I) ∪ {∗}`, products
    /// landing in the ideal become `∗`. Collapses to the one-element monoid
    /// when the ideal is everything.
    pub fn quotient(&self, ideal: &Ideal) -> Result<(FiniteMonoid, MonoidMap), MonoidError> {
        if ideal.parent() != self {
            return Err(MonoidError::Mismatch);
        }
        let label = format!("{}/I", self.label);
        if ideal.members().contains(&self.one()) {
            let zero = FiniteMonoid { label, n: 1, mul: vec![0] };
            let map = MonoidMap::new_unchecked(self.clone(), zero.clone(), vec![0; self.n]);
            return Ok((zero, map));
        }
        let keep: Vec<usize> = (0..self.n).filter(|i| !ideal.members().contains(i)).collect();
        // keep is ascending and starts 1, ..; star is re-added at index 0.
        let mut old_to_new = vec![0usize; self.n];
        for (new_idx, &old) in keep.iter().enumerate() {
            old_to_new[old] = new_idx + 1;
        }
        old_to_new[0] = 0;
        let n = keep.len() + 1;
        let mut mul = vec![0usize; n * n];
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                let p = self.mul(a, b);
                mul[(i + 1) * n + (j + 1)] = if ideal.members().contains(&p) { 0 } else { old_to_new[p] };
            }
        }
        let q = FiniteMonoid::from_table(&label, n, mul)?;
        let map_vec: Vec<usize> = (0..self.n)
            .map(|a| if ideal.members().contains(&a) { 0 } else { old_to_new[a] })
            .collect();
        let map = MonoidMap::new(self.clone(), q.clone(), map_vec)?;
        Ok((q, map))
    }

    /// Distinct powers `s⁰, s¹, ...` until the first repetition.
    fn distinct_powers(&self, s: usize) -> Vec<usize> {
        let mut powers = vec![self.one()];
        let mut seen: BTreeSet<usize> = powers.iter().copied().collect();
        loop {
            let next = self.mul(*powers.last().unwrap(), s);
            if !seen.insert(next) {
                return powers;
            }
            powers.push(next);
        }
    }

    /// Checks that `{sⁿ}` is a two-sided denominator set: both permutability
    /// conditions and both reversibility conditions, by finite scan over the
    /// distinct powers.
    pub fn denominator_check(&self, s: usize) -> Result<(), MonoidError> {
        let powers = self.distinct_powers(s);
        let fail = |reason: String| MonoidError::NotDenominatorSet { s, reason };
        for a in 0..self.n {
            for &sn in &powers {
                let left_perm = powers
                    .iter()
                    .any(|&sm| (0..self.n).any(|b| self.mul(sm, a) == self.mul(b, sn)));
                if !left_perm {
                    return Err(fail(format!("no m, b with s^m*{a} = b*s^n for s^n = {sn}")));
                }
                let right_perm = powers
                    .iter()
                    .any(|&sm| (0..self.n).any(|b| self.mul(a, sm) == self.mul(sn, b)));
                if !right_perm {
                    return Err(fail(format!("no m, b with {a}*s^m = s^n*b for s^n = {sn}")));
                }
            }
        }
        for a in 0..self.n {
            for b in 0..self.n {
                for &sn in &powers {
                    if self.mul(a, sn) == self.mul(b, sn)
                        && !powers.iter().any(|&sm| self.mul(sm, a) == self.mul(sm, b))
                    {
                        return Err(fail(format!("{a}*s^n = {b}*s^n but no power separates on the left")));
                    }
                    if self.mul(sn, a) == self.mul(sn, b)
                        && !powers.iter().any(|&sm| self.mul(a, sm) == self.mul(b, sm))
                    {
                        return Err(fail(format!("s^n*{a} = s^n*{b} but no power separates on the right")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Inverts `s`: checks the denominator conditions, then passes to the
    /// stabilized corner `eAe` where `e` is the idempotent power of `s`. In
    /// the corner `e` is the identity and the image of `s` is invertible. The
    /// projection `a ↦ eae` is verified to be a homomorphism; a failure there
    /// is reported as a denominator-set failure since it means two-sided
    /// fractions do not compose.
    pub fn localize(&self, s: usize) -> Result<Localization, MonoidError> {
        if s >= self.n {
            return Err(MonoidError::BadTable);
        }
        self.denominator_check(s)?;
        // Smallest q ≥ 1 with s^q idempotent.
        let mut q = 1;
        let e = loop {
            let p = self.power(s, q);
            if self.mul(p, p) == p {
                break p;
            }
            q += 1;
        };
        let mut carrier: Vec<usize> = (0..self.n)
            .map(|a| self.mul(self.mul(e, a), e))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        // Order: ∗ first, then e, then the rest ascending.
        carrier.retain(|&x| x != 0 && x != e);
        let mut elems = vec![0];
        if e != 0 {
            elems.push(e);
        }
        elems.extend(carrier);
        let pos: BTreeMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let n = elems.len();
        let mut mul = vec![0usize; n * n];
        for (i, &x) in elems.iter().enumerate() {
            for (j, &y) in elems.iter().enumerate() {
                let p = self.mul(x, y);
                mul[i * n + j] = *pos.get(&p).ok_or(MonoidError::NotDenominatorSet {
                    s,
                    reason: "stabilized corner is not closed under the product".to_string(),
                })?;
            }
        }
        let label = format!("{}[1/{}]", self.label, self.element_name(s));
        let loc = FiniteMonoid::from_table(&label, n, mul)?;
        let map_vec: Vec<usize> = (0..self.n).map(|a| pos[&self.mul(self.mul(e, a), e)]).collect();
        let map = MonoidMap::new(self.clone(), loc.clone(), map_vec).map_err(|_| {
            MonoidError::NotDenominatorSet {
                s,
                reason: "projection to the stabilized corner is not multiplicative".to_string(),
            }
        })?;
        let s_image = map.apply(s);
        let invertible = (0..n).any(|b| loc.mul(s_image, b) == loc.one() && loc.mul(b, s_image) == loc.one());
        if !invertible {
            return Err(MonoidError::NotDenominatorSet {
                s,
                reason: "image of s is not invertible in the corner".to_string(),
            });
        }
        Ok(Localization { monoid: loc, map, s_image })
    }

    /// Smash product `A ∧ B`: nonzero pairs plus a common zero. Layout: index
    /// 0 is `∗`, the pair `(a, b)` with `a, b ≥ 1` sits at
    /// `(a-1)*(|B|-1) + (b-1) + 1`, so `(1, 1)` is the identity at index 1.
    pub fn smash(&self, other: &FiniteMonoid) -> FiniteMonoid {
        let (na, nb) = (self.n, other.n);
        if na == 1 || nb == 1 {
            return FiniteMonoid {
                label: format!("{}^{}", self.label, other.label),
                n: 1,
                mul: vec![0],
            };
        }
        let idx = |a: usize, b: usize| -> usize {
            if a == 0 || b == 0 {
                0
            } else {
                (a - 1) * (nb - 1) + (b - 1) + 1
            }
        };
        let n = (na - 1) * (nb - 1) + 1;
        let mut mul = vec![0usize; n * n];
        for a in 1..na {
            for b in 1..nb {
                for c in 1..na {
                    for d in 1..nb {
                        mul[idx(a, b) * n + idx(c, d)] = idx(self.mul(a, c), other.mul(b, d));
                    }
                }
            }
        }
        FiniteMonoid {
            label: format!("{}^{}", self.label, other.label),
            n,
            mul,
        }
    }

    /// Index of the nonzero pair `(a, b)` in `self.smash(other)`.
    pub fn smash_index(&self, other: &FiniteMonoid, a: usize, b: usize) -> usize {
        if a == 0 || b == 0 {
            0
        } else {
            (a - 1) * (other.n - 1) + (b - 1) + 1
        }
    }

    /// Truncated twisted extension: elements `a·tⁱ` for nonzero `a` and
    /// `0 ≤ i < k`, with `(a tⁱ)(b tʲ) = a φⁱ(b) t^{i+j}` and everything of
    /// t-degree ≥ k collapsed to `∗`. `φ` must be an automorphism. Layout:
    /// `(a, i) ↦ i*(n-1) + (a-1) + 1`, so the identity `(1, 0)` is index 1.
    pub fn twisted_truncated_extension(
        &self,
        phi: &MonoidMap,
        k: usize,
    ) -> Result<FiniteMonoid, MonoidError> {
        if k == 0 {
            return Err(MonoidError::BadTable);
        }
        if phi.source() != self || phi.target() != self || !phi.is_bijective() {
            return Err(MonoidError::NotAutomorphism);
        }
        let na = self.n;
        if na == 1 {
            return Ok(FiniteMonoid { label: format!("{}~t{k}", self.label), n: 1, mul: vec![0] });
        }
        // phi_pows[i][a] = φⁱ(a)
        let mut phi_pows: Vec<Vec<usize>> = vec![(0..na).collect()];
        for _ in 1..k {
            let prev = phi_pows.last().unwrap();
            phi_pows.push((0..na).map(|a| phi.apply(prev[a])).collect());
        }
        let idx = |a: usize, i: usize| -> usize {
            if a == 0 {
                0
            } else {
                i * (na - 1) + (a - 1) + 1
            }
        };
        let n = k * (na - 1) + 1;
        let mut mul = vec![0usize; n * n];
        for i in 0..k {
            for a in 1..na {
                for j in 0..k {
                    for b in 1..na {
                        let v = if i + j >= k {
                            0
                        } else {
                            idx(self.mul(a, phi_pows[i][b]), i + j)
                        };
                        mul[idx(a, i) * n + idx(b, j)] = v;
                    }
                }
            }
        }
        FiniteMonoid::from_table(&format!("{}~t{k}", self.label), n, mul)
    }

    /// Index of `a·tⁱ` in the twisted truncated extension built from `self`.
    pub fn twisted_index(&self, a: usize, i: usize) -> usize {
        if a == 0 {
            0
        } else {
            i * (self.n - 1) + (a - 1) + 1
        }
    }

    /// Smallest `n` with `𝔪ⁿ = {∗}` for the ideal of non-units, or `None`
    /// when the powers stabilize above `∗`. The non-units must form an ideal;
    /// partial cancellativity is sufficient but not required, so stabilized
    /// cyclic monoids can be measured (they come out `None`).
    pub fn finite_length(&self) -> Result<Option<usize>, MonoidError> {
        let ideal = self.nonunit_ideal()?;
        let mut current: BTreeSet<usize> = ideal.members().clone();
        let mut n = 1;
        loop {
            if current.len() == 1 {
                return Ok(Some(n));
            }
            let mut next: BTreeSet<usize> = BTreeSet::new();
            next.insert(0);
            for &m in ideal.members() {
                for &x in &current {
                    next.insert(self.mul(m, x));
                }
            }
            if next == current {
                return Ok(None);
            }
            current = next;
            n += 1;
        }
    }

    /// Brute-force isomorphism search fixing `∗` and `1`.
    pub fn iso_to(&self, other: &FiniteMonoid) -> Option<Vec<usize>> {
        if self.n != other.n {
            return None;
        }
        if self.n <= 1 {
            return Some(vec![0; self.n]);
        }
        let rest: Vec<usize> = (2..self.n).collect();
        let mut perm: Vec<usize> = (0..self.n).collect();
        fn go(
            a: &FiniteMonoid,
            b: &FiniteMonoid,
            rest: &[usize],
            used: &mut Vec<bool>,
            perm: &mut Vec<usize>,
            pos: usize,
        ) -> bool {
            if pos == rest.len() {
                let n = a.size();
                for x in 0..n {
                    for y in 0..n {
                        if perm[a.mul(x, y)] != b.mul(perm[x], perm[y]) {
                            return false;
                        }
                    }
                }
                return true;
            }
            let x = rest[pos];
            for t in 2..a.size() {
                if used[t] {
                    continue;
                }
                perm[x] = t;
                used[t] = true;
                if go(a, b, rest, used, perm, pos + 1) {
                    return true;
                }
                used[t] = false;
            }
            false
        }
        let mut used = vec![false; self.n];
        used[0] = true;
        used[1] = true;
        if go(self, other, &rest, &mut used, &mut perm, 0) {
            Some(perm)
        } else {
            None
        }
    }

    // Constructors for the standard families.

    /// The initial pointed monoid `{∗, 1}`.
    pub fn f1() -> FiniteMonoid {
        FiniteMonoid { label: "f1".to_string(), n: 2, mul: vec![0, 0, 0, 1] }
    }

    /// The one-element monoid `{∗ = 1}`.
    pub fn zero_monoid() -> FiniteMonoid {
        FiniteMonoid { label: "zero".to_string(), n: 1, mul: vec![0] }
    }

    /// Nilpotent truncation of the free cyclic monoid: `{∗, 1, t, ..., tⁿ⁻¹}`
    /// with `tⁿ = ∗`. `n = 1` gives `{∗, 1}`.
    pub fn truncated_cyclic(n: usize) -> FiniteMonoid {
        assert!(n >= 1);
        let size = n + 1;
        let idx = |i: usize| -> usize {
            if i >= n {
                0
            } else {
                i + 1
            }
        };
        let mut mul = vec![0usize; size * size];
        for i in 0..n {
            for j in 0..n {
                mul[idx(i) * size + idx(j)] = idx(i + j);
            }
        }
        FiniteMonoid { label: format!("ntr{n}"), n: size, mul }
    }

    /// Stabilized cyclic monoid: `{∗, 1, t, ..., t^{N+L-1}}` with
    /// `t^{N+L} = t^N`. Preperiod `N ≥ 1`, period `L ≥ 1`. Not partially
    /// cancellative; used as the ambient monoid for loop-bearing graphs.
    pub fn stabilized_cyclic(preperiod: usize, period: usize) -> FiniteMonoid {
        assert!(preperiod >= 1 && period >= 1);
        let top = preperiod + period;
        let size = top + 1;
        let reduce = |i: usize| -> usize {
            if i < top {
                i
            } else {
                preperiod + (i - preperiod) % period
            }
        };
        let mut mul = vec![0usize; size * size];
        for i in 0..top {
            for j in 0..top {
                mul[(i + 1) * size + (j + 1)] = reduce(i + j) + 1;
            }
        }
        FiniteMonoid { label: format!("stab{preperiod}p{period}"), n: size, mul }
    }

    /// The group monoid G₊: `∗` adjoined to a group, group element `i` at
    /// monoid index `i + 1` so the identity lands at index 1.
    pub fn group_monoid(g: &GroupTable) -> FiniteMonoid {
        let k = g.size();
        let n = k + 1;
        let mut mul = vec![0usize; n * n];
        for a in 0..k {
            for b in 0..k {
                mul[(a + 1) * n + (b + 1)] = g.mul(a, b) + 1;
            }
        }
        FiniteMonoid { label: format!("{}+", g.label()), n, mul }
    }

    /// Inversion `a ↦ a⁻¹` on a group monoid, as a monoid map. Only an
    /// automorphism when the group is abelian.
    pub fn group_inversion(g: &GroupTable) -> MonoidMap {
        let m = FiniteMonoid::group_monoid(g);
        let mut map = vec![0usize; m.size()];
        map[0] = 0;
        for a in 0..g.size() {
            map[a + 1] = g.inverse(a) + 1;
        }
        MonoidMap::new_unchecked(m.clone(), m, map)
    }

    pub fn identity_map(&self) -> MonoidMap {
        MonoidMap::new_unchecked(self.clone(), self.clone(), (0..self.n).collect())
    }
}

/// A basepoint- and identity-preserving multiplicative map between finite
/// pointed monoids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidMap {
    source: FiniteMonoid,
    target: FiniteMonoid,
    map: Vec<usize>,
}

impl MonoidMap {
    pub fn new(source: FiniteMonoid, target: FiniteMonoid, map: Vec<usize>) -> Result<Self, MonoidError> {
        if map.len() != source.size() || map.iter().any(|&v| v >= target.size()) {
            return Err(MonoidError::BadMap);
        }
        if map[source.star()] != target.star() || map[source.one()] != target.one() {
            return Err(MonoidError::BadMap);
        }
        for a in 0..source.size() {
            for b in 0..source.size() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(MonoidError::BadMap);
                }
            }
        }
        Ok(MonoidMap { source, target, map })
    }

    pub(crate) fn new_unchecked(source: FiniteMonoid, target: FiniteMonoid, map: Vec<usize>) -> Self {
        MonoidMap { source, target, map }
    }

    pub fn source(&self) -> &FiniteMonoid {
        &self.source
    }

    pub fn target(&self) -> &FiniteMonoid {
        &self.target
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        for &v in &self.map {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        self.source.size() == self.target.size()
    }

    pub fn compose(&self, then: &MonoidMap) -> Result<MonoidMap, MonoidError> {
        if self.target != then.source {
            return Err(MonoidError::Mismatch);
        }
        Ok(MonoidMap {
            source: self.source.clone(),
            target: then.target.clone(),
            map: self.map.iter().map(|&v| then.apply(v)).collect(),
        })
    }
}

/// A two-sided ideal: member set containing `∗`, closed under multiplication
/// by arbitrary elements on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    parent: FiniteMonoid,
    members: BTreeSet<usize>,
}

impl Ideal {
    pub fn new(parent: &FiniteMonoid, members: BTreeSet<usize>) -> Result<Self, MonoidError> {
        if !members.contains(&parent.star()) || members.iter().any(|&v| v >= parent.size()) {
            return Err(MonoidError::BadIdeal);
        }
        for &m in &members {
            for a in 0..parent.size() {
                if !members.contains(&parent.mul(a, m)) || !members.contains(&parent.mul(m, a)) {
                    return Err(MonoidError::BadIdeal);
                }
            }
        }
        Ok(Ideal { parent: parent.clone(), members })
    }

    /// The two-sided ideal generated by one element.
    pub fn principal(parent: &FiniteMonoid, s: usize) -> Ideal {
        let mut members: BTreeSet<usize> = BTreeSet::new();
        members.insert(parent.star());
        for a in 0..parent.size() {
            for b in 0..parent.size() {
                members.insert(parent.mul(parent.mul(a, s), b));
            }
        }
        Ideal { parent: parent.clone(), members }
    }

    pub fn parent(&self) -> &FiniteMonoid {
        &self.parent
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    /// Image of the ideal under a surjective quotient map, as an ideal of the
    /// target.
    pub fn image(&self, map: &MonoidMap) -> Result<Ideal, MonoidError> {
        if map.source() != &self.parent {
            return Err(MonoidError::Mismatch);
        }
        let members: BTreeSet<usize> = self.members.iter().map(|&m| map.apply(m)).collect();
        Ideal::new(map.target(), members)
    }
}

/// Result of inverting an element: the corner monoid, the projection onto it,
/// and the (invertible) image of the inverted element.
#[derive(Debug, Clone)]
pub struct Localization {
    pub monoid: FiniteMonoid,
    pub map: MonoidMap,
    pub s_image: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stab(n: usize) -> FiniteMonoid {
        FiniteMonoid::stabilized_cyclic(n, 1)
    }

    #[test]
    fn validates_the_standard_families() {
        for m in [
            FiniteMonoid::f1(),
            FiniteMonoid::zero_monoid(),
            FiniteMonoid::truncated_cyclic(3),
            FiniteMonoid::stabilized_cyclic(3, 1),
            FiniteMonoid::stabilized_cyclic(1, 2),
            FiniteMonoid::group_monoid(&GroupTable::symmetric3()),
        ] {
            FiniteMonoid::from_table(m.label(), m.size(), m.table().to_vec()).unwrap();
        }
    }

    #[test]
    fn rejects_a_non_associative_table() {
        // Star row/column are fine; the broken identity row surfaces as a
        // failed associativity triple first.
        let mul = vec![0, 0, 0, 0, 1, 0, 0, 2, 1];
        let err = FiniteMonoid::from_table("bad", 3, mul).unwrap_err();
        assert_eq!(err, MonoidError::NonAssociative(1, 2, 2));
    }

    #[test]
    fn rejects_broken_unit_and_zero_rows() {
        // a*b = ∗ for all non-identity products: associative, but 1 is broken.
        let mul = vec![0, 0, 0, 0, 1, 0, 0, 0, 0];
        assert!(matches!(
            FiniteMonoid::from_table("bad-unit", 3, mul),
            Err(MonoidError::BadUnit(_))
        ));
        let mul = vec![0, 0, 2, 0, 1, 2, 2, 2, 2];
        assert!(matches!(
            FiniteMonoid::from_table("bad-zero", 3, mul),
            Err(MonoidError::BadZero(_)) | Err(MonoidError::NonAssociative(..))
        ));
    }

    #[test]
    fn pc_families() {
        assert!(FiniteMonoid::f1().is_pc());
        for n in 1..=5 {
            assert!(FiniteMonoid::truncated_cyclic(n).is_pc(), "ntr{n}");
        }
        assert!(FiniteMonoid::group_monoid(&GroupTable::symmetric3()).is_pc());
    }

    #[test]
    fn idempotent_witness_is_frozen() {
        // {∗, 1, e} with e² = e: first violating triple in scan order.
        let m = stab(1);
        assert_eq!(m.size(), 3);
        assert_eq!(m.pc_witness(), Some((1, 2, 2)));
        // All stabilized cyclic monoids fail cancellation.
        for n in 1..=3 {
            assert!(!stab(n).is_pc());
        }
    }

    #[test]
    fn units_of_the_standard_families() {
        assert_eq!(FiniteMonoid::truncated_cyclic(3).units(), vec![1]);
        let s3 = FiniteMonoid::group_monoid(&GroupTable::symmetric3());
        assert_eq!(s3.units(), (1..=6).collect::<Vec<_>>());
        let (_, g) = s3.unit_group();
        assert_eq!(g.size(), 6);
    }

    #[test]
    fn maximal_ideal_and_quotient() {
        let m = FiniteMonoid::truncated_cyclic(3); // {∗,1,t,t²}
        let ideal = m.maximal_ideal().unwrap();
        assert_eq!(ideal.members().iter().copied().collect::<Vec<_>>(), vec![0, 2, 3]);
        // Quotient by (t²): {∗, t²}; the result is ntr2.
        let i2 = Ideal::principal(&m, 3);
        assert_eq!(i2.members().iter().copied().collect::<Vec<_>>(), vec![0, 3]);
        let (q, proj) = m.quotient(&i2).unwrap();
        assert!(q.iso_to(&FiniteMonoid::truncated_cyclic(2)).is_some());
        assert_eq!(proj.apply(3), 0);
    }

    #[test]
    fn nested_quotients_compose() {
        let m = FiniteMonoid::truncated_cyclic(4);
        let i = Ideal::principal(&m, 4); // (t³)
        let (q1, p1) = m.quotient(&i).unwrap();
        let j = Ideal::principal(&m, 3); // (t²) ⊇ (t³)
        let j_in_q1 = j.image(&p1).unwrap();
        let (q2, _) = q1.quotient(&j_in_q1).unwrap();
        let (direct, _) = m.quotient(&j).unwrap();
        assert!(q2.iso_to(&direct).is_some());
    }

    #[test]
    fn localize_nilpotent_gives_zero_monoid() {
        let m = FiniteMonoid::truncated_cyclic(2);
        let loc = m.localize(2).unwrap();
        assert!(loc.monoid.is_trivial());
    }

    #[test]
    fn localize_stabilized_gives_f1() {
        // {∗,1,t,t²} with t³ = t²: inverting t forces t = 1.
        let m = stab(2);
        let loc = m.localize(2).unwrap();
        assert!(loc.monoid.iso_to(&FiniteMonoid::f1()).is_some());
        assert_eq!(loc.s_image, loc.monoid.one());
    }

    #[test]
    fn localize_at_identity_is_identity() {
        let m = FiniteMonoid::truncated_cyclic(3);
        let loc = m.localize(1).unwrap();
        assert_eq!(loc.monoid.size(), m.size());
        assert!(loc.monoid.iso_to(&m).is_some());
        for a in 0..m.size() {
            assert_eq!(loc.map.apply(a), a);
        }
    }

    #[test]
    fn localize_satisfies_the_mapping_property_on_small_targets() {
        // Every map h: A → B inverting s factors uniquely through the corner.
        let cases = vec![
            (stab(2), 2usize),
            (FiniteMonoid::truncated_cyclic(2), 2usize),
            (FiniteMonoid::truncated_cyclic(3), 1usize),
        ];
        let targets = vec![
            FiniteMonoid::f1(),
            FiniteMonoid::zero_monoid(),
            FiniteMonoid::group_monoid(&GroupTable::cyclic(2)),
            FiniteMonoid::truncated_cyclic(2),
        ];
        for (a, s) in cases {
            let loc = a.localize(s).unwrap();
            for b in &targets {
                for h in all_maps(&a, b) {
                    let hs = h.apply(s);
                    let inv = (0..b.size())
                        .any(|x| b.mul(hs, x) == b.one() && b.mul(x, hs) == b.one());
                    if !inv {
                        continue;
                    }
                    let factorings: Vec<MonoidMap> = all_maps(&loc.monoid, b)
                        .into_iter()
                        .filter(|g| (0..a.size()).all(|x| g.apply(loc.map.apply(x)) == h.apply(x)))
                        .collect();
                    assert_eq!(factorings.len(), 1, "{} -> {} at s={}", a.label(), b.label(), s);
                }
            }
        }
    }

    fn all_maps(a: &FiniteMonoid, b: &FiniteMonoid) -> Vec<MonoidMap> {
        let mut out = Vec::new();
        let n = a.size();
        let mut map = vec![0usize; n];
        if n > 1 {
            map[1] = b.one();
        }
        fn go(a: &FiniteMonoid, b: &FiniteMonoid, map: &mut Vec<usize>, pos: usize, out: &mut Vec<MonoidMap>) {
            if pos == a.size() {
                if let Ok(m) = MonoidMap::new(a.clone(), b.clone(), map.clone()) {
                    out.push(m);
                }
                return;
            }
            if pos <= 1 {
                go(a, b, map, pos + 1, out);
                return;
            }
            for v in 0..b.size() {
                map[pos] = v;
                go(a, b, map, pos + 1, out);
            }
        }
        go(a, b, &mut map, 0, &mut out);
        out
    }

    #[test]
    fn smash_of_truncated_cyclics() {
        let a = FiniteMonoid::truncated_cyclic(2);
        let s = a.smash(&a);
        assert_eq!(s.size(), 5);
        assert!(s.is_pc());
        // (t,1)*(1,t) = (t,t), (t,1)*(t,1) = ∗.
        let t1 = a.smash_index(&a, 2, 1);
        let onet = a.smash_index(&a, 1, 2);
        assert_eq!(s.mul(t1, onet), a.smash_index(&a, 2, 2));
        assert_eq!(s.mul(t1, t1), 0);
    }

    #[test]
    fn smash_of_groups_is_the_product_group() {
        let z2 = FiniteMonoid::group_monoid(&GroupTable::cyclic(2));
        let z3 = FiniteMonoid::group_monoid(&GroupTable::cyclic(3));
        let z6 = FiniteMonoid::group_monoid(&GroupTable::cyclic(6));
        assert!(z2.smash(&z3).iso_to(&z6).is_some());
    }

    #[test]
    fn smash_is_commutative_and_associative_up_to_iso() {
        let a = FiniteMonoid::truncated_cyclic(2);
        let b = FiniteMonoid::group_monoid(&GroupTable::cyclic(2));
        let c = FiniteMonoid::f1();
        assert!(a.smash(&b).iso_to(&b.smash(&a)).is_some());
        assert!(a.smash(&b).smash(&c).iso_to(&a.smash(&b.smash(&c))).is_some());
        // F1 is the unit.
        assert!(a.smash(&c).iso_to(&a).is_some());
    }

    #[test]
    fn twisted_extension_with_identity_twist_is_a_smash() {
        let z2 = FiniteMonoid::group_monoid(&GroupTable::cyclic(2));
        let t = z2.twisted_truncated_extension(&z2.identity_map(), 2).unwrap();
        let smash = z2.smash(&FiniteMonoid::truncated_cyclic(2));
        assert!(t.iso_to(&smash).is_some());
    }

    #[test]
    fn twisted_extension_by_inversion_is_noncommutative() {
        let g = GroupTable::cyclic(3);
        let z3 = FiniteMonoid::group_monoid(&g);
        let inv = FiniteMonoid::group_inversion(&g);
        let t = z3.twisted_truncated_extension(&inv, 2).unwrap();
        assert_eq!(t.size(), 7);
        assert!(!t.is_abelian());
        assert!(t.is_pc());
        // t·g = φ(g)·t = g²·t.
        let tg = t.mul(z3.twisted_index(1, 1), z3.twisted_index(2, 0));
        assert_eq!(tg, z3.twisted_index(3, 1));
    }

    #[test]
    fn finite_length_of_the_standard_families() {
        assert_eq!(FiniteMonoid::f1().finite_length().unwrap(), Some(1));
        assert_eq!(FiniteMonoid::truncated_cyclic(3).finite_length().unwrap(), Some(3));
        assert_eq!(stab(2).finite_length().unwrap(), None);
        let z2 = FiniteMonoid::group_monoid(&GroupTable::cyclic(2));
        assert_eq!(z2.finite_length().unwrap(), Some(1));
        let smash = z2.smash(&FiniteMonoid::truncated_cyclic(2));
        assert_eq!(smash.finite_length().unwrap(), Some(2));
    }

    #[test]
    fn denominator_check_passes_for_abelian_and_fails_nowhere_trivial() {
        let m = FiniteMonoid::truncated_cyclic(3);
        for s in 0..m.size() {
            m.denominator_check(s).unwrap();
        }
    }
}
