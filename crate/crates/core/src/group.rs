//! Small finite groups given by multiplication tables, with the subgroup
//! machinery needed for Burnside-ring computations: subgroup enumeration,
//! conjugacy classes of subgroups, and coset actions.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("table is not square or has out-of-range entries")]
    BadTable,
    #[error("index 0 is not a two-sided identity")]
    BadIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("product is not associative at ({0}, {1}, {2})")]
    NonAssociative(usize, usize, usize),
}

/// A finite group on indices `0..n` with the identity at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    label: String,
    n: usize,
    mul: Vec<usize>,
}

impl GroupTable {
    pub fn new(label: &str, n: usize, mul: Vec<usize>) -> Result<Self, GroupError> {
        if n == 0 || mul.len() != n * n || mul.iter().any(|&v| v >= n) {
            return Err(GroupError::BadTable);
        }
        let g = GroupTable { label: label.to_string(), n, mul };
        for a in 0..n {
            if g.mul(0, a) != a || g.mul(a, 0) != a {
                return Err(GroupError::BadIdentity);
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)) {
                        return Err(GroupError::NonAssociative(a, b, c));
                    }
                }
            }
        }
        for a in 0..n {
            if (0..n).all(|b| g.mul(a, b) != 0) {
                return Err(GroupError::NoInverse(a));
            }
        }
        Ok(g)
    }

    /// Cyclic group of order `n`, written additively on residues.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let mut mul = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = (a + b) % n;
            }
        }
        GroupTable { label: format!("z{n}"), n, mul }
    }

    /// Symmetric group on three letters; elements are the six permutations of
    /// `{0,1,2}` in lexicographic order, so the identity lands at index 0.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index_of = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
        let n = 6;
        let mut mul = vec![0usize; n * n];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                // (p ∘ q)(x) = p(q(x))
                let composed = [p[q[0]], p[q[1]], p[q[2]]];
                mul[i * n + j] = index_of(&composed);
            }
        }
        GroupTable { label: "s3".to_string(), n, mul }
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

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    pub fn table(&self) -> &[usize] {
        &self.mul
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.n).find(|&b| self.mul(a, b) == 0).unwrap()
    }

    /// All subgroups, as sorted element sets. Found by closing every subset
    /// seed; fine at the orders used here.
    pub fn subgroups(&self) -> Vec<BTreeSet<usize>> {
        let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        // Closing the set of generators {g} for every subset of a generating
        // redundancy is overkill; closing every subset of elements is still
        // cheap for n ≤ 8.
        let n = self.n;
        for mask in 0..(1u32 << n) {
            let mut seed: BTreeSet<usize> = BTreeSet::new();
            seed.insert(0);
            for a in 0..n {
                if mask & (1 << a) != 0 {
                    seed.insert(a);
                }
            }
            found.insert(self.close_subgroup(seed));
        }
        found.into_iter().collect()
    }

    fn close_subgroup(&self, seed: BTreeSet<usize>) -> BTreeSet<usize> {
        let mut set = seed;
        loop {
            let mut next = set.clone();
            for &a in &set {
                next.insert(self.inverse(a));
                for &b in &set {
                    next.insert(self.mul(a, b));
                }
            }
            if next == set {
                return set;
            }
            set = next;
        }
    }

    pub fn conjugate_subgroup(&self, g: usize, h: &BTreeSet<usize>) -> BTreeSet<usize> {
        let gi = self.inverse(g);
        h.iter().map(|&x| self.mul(self.mul(g, x), gi)).collect()
    }

    /// Conjugacy classes of subgroups, each class sorted, classes ordered by
    /// (subgroup order, least member set). The representative is the least
    /// member of the class.
    pub fn subgroup_conjugacy_classes(&self) -> Vec<Vec<BTreeSet<usize>>> {
        let subs = self.subgroups();
        let mut classes: Vec<Vec<BTreeSet<usize>>> = Vec::new();
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for h in &subs {
            if seen.contains(h) {
                continue;
            }
            let mut class: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
            for g in 0..self.n {
                class.insert(self.conjugate_subgroup(g, h));
            }
            for member in &class {
                seen.insert(member.clone());
            }
            classes.push(class.into_iter().collect());
        }
        classes.sort_by_key(|c| (c[0].len(), c[0].clone()));
        classes
    }

    /// Left cosets of `h`, each sorted, ordered by least member. The coset of
    /// the identity comes first.
    pub fn cosets(&self, h: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let mut cosets: Vec<BTreeSet<usize>> = Vec::new();
        let mut placed = vec![false; self.n];
        for g in 0..self.n {
            if placed[g] {
                continue;
            }
            let coset: BTreeSet<usize> = h.iter().map(|&x| self.mul(g, x)).collect();
            for &m in &coset {
                placed[m] = true;
            }
            cosets.push(coset);
        }
        cosets.sort_by_key(|c| *c.iter().next().unwrap());
        cosets
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_tables_are_groups() {
        for n in 1..=6 {
            let g = GroupTable::cyclic(n);
            GroupTable::new(g.label(), g.size(), g.table().to_vec()).unwrap();
        }
    }

    #[test]
    fn symmetric3_is_a_nonabelian_group_of_order_six() {
        let g = GroupTable::symmetric3();
        assert_eq!(g.size(), 6);
        GroupTable::new("s3", 6, g.table().to_vec()).unwrap();
        assert!((0..6).any(|a| (0..6).any(|b| g.mul(a, b) != g.mul(b, a))));
    }

    #[test]
    fn subgroup_conjugacy_class_counts() {
        assert_eq!(GroupTable::cyclic(1).subgroup_conjugacy_classes().len(), 1);
        assert_eq!(GroupTable::cyclic(2).subgroup_conjugacy_classes().len(), 2);
        assert_eq!(GroupTable::cyclic(3).subgroup_conjugacy_classes().len(), 2);
        assert_eq!(GroupTable::cyclic(4).subgroup_conjugacy_classes().len(), 3);
        assert_eq!(GroupTable::symmetric3().subgroup_conjugacy_classes().len(), 4);
    }

    #[test]
    fn cosets_partition_the_group() {
        let g = GroupTable::symmetric3();
        for class in g.subgroup_conjugacy_classes() {
            let h = &class[0];
            let cosets = g.cosets(h);
            assert_eq!(cosets.len() * h.len(), g.size());
            let union: BTreeSet<usize> = cosets.iter().flatten().copied().collect();
            assert_eq!(union.len(), g.size());
        }
    }
}
