//! Canonical labeling for vertex-colored functional structures.
//!
//! An input is a set of vertices `0..n`, a list of unary functions on the
//! vertices (entry `n` means undefined), and a color per vertex. Vertex 0 is
//! the basepoint and is pinned: only relabelings fixing 0 are considered.
//! Two inputs are isomorphic exactly when their canonical keys are equal.
//!
//! The algorithm is individualization-refinement with a full leaf scan: the
//! partition is refined by (color, image cell per function, preimage cell
//! multiset per function) signatures, the first non-singleton cell is split
//! on every member, and the canonical key is the minimum over all leaves.
//! Exponential in the worst case, fine at the sizes handled here.

/// A functional structure to canonicalize. All `funcs` rows have length `n`
/// with entries in `0..=n`; `colors` has length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonInput {
    pub n: usize,
    pub funcs: Vec<Vec<usize>>,
    pub colors: Vec<usize>,
}

/// Total invariant of an input up to basepoint-fixing isomorphism.
pub type CanonKey = (usize, Vec<usize>, Vec<Vec<usize>>);

/// Refinement signature of one vertex: color, image cell per function,
/// sorted preimage cells per function.
type VertexSig = (usize, Vec<usize>, Vec<Vec<usize>>);

impl CanonInput {
    /// Canonical key together with one relabeling `perm` (old index to new
    /// index, `perm[0] == 0`) realizing it.
    pub fn canonical_form(&self) -> (CanonKey, Vec<usize>) {
        assert!(self.n >= 1);
        debug_assert!(self.colors.len() == self.n);
        debug_assert!(self.funcs.iter().all(|f| f.len() == self.n && f.iter().all(|&v| v <= self.n)));

        // Initial partition: basepoint alone, the rest grouped by color.
        let mut cells: Vec<Vec<usize>> = vec![vec![0]];
        let mut by_color: Vec<(usize, Vec<usize>)> = Vec::new();
        for v in 1..self.n {
            match by_color.binary_search_by_key(&self.colors[v], |e| e.0) {
                Ok(i) => by_color[i].1.push(v),
                Err(i) => by_color.insert(i, (self.colors[v], vec![v])),
            }
        }
        cells.extend(by_color.into_iter().map(|e| e.1));

        let mut best: Option<(CanonKey, Vec<usize>)> = None;
        self.search(cells, &mut best);
        best.expect("at least one leaf")
    }

    pub fn canonical_key(&self) -> CanonKey {
        self.canonical_form().0
    }

    fn search(&self, cells: Vec<Vec<usize>>, best: &mut Option<(CanonKey, Vec<usize>)>) {
        let cells = self.refine(cells);
        if let Some(cell) = cells.iter().position(|c| c.len() > 1) {
            for &v in &cells[cell] {
                let mut child = Vec::with_capacity(cells.len() + 1);
                for (i, c) in cells.iter().enumerate() {
                    if i == cell {
                        child.push(vec![v]);
                        child.push(c.iter().copied().filter(|&x| x != v).collect());
                    } else {
                        child.push(c.clone());
                    }
                }
                self.search(child, best);
            }
            return;
        }
        // Discrete partition: cell order is the new labeling.
        let mut perm = vec![0usize; self.n];
        for (new, c) in cells.iter().enumerate() {
            perm[c[0]] = new;
        }
        let colors: Vec<usize> = cells.iter().map(|c| self.colors[c[0]]).collect();
        let funcs: Vec<Vec<usize>> = self
            .funcs
            .iter()
            .map(|f| {
                let mut row = vec![self.n; self.n];
                for old in 0..self.n {
                    row[perm[old]] = if f[old] == self.n { self.n } else { perm[f[old]] };
                }
                row
            })
            .collect();
        let key = (self.n, colors, funcs);
        match best {
            Some((k, _)) if *k <= key => {}
            _ => *best = Some((key, perm)),
        }
    }

    /// Refines until stable. Sub-cells produced by a split are ordered by
    /// signature, which keeps the cell order relabeling-invariant.
    fn refine(&self, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        loop {
            let mut cell_of = vec![0usize; self.n];
            for (i, c) in cells.iter().enumerate() {
                for &v in c {
                    cell_of[v] = i;
                }
            }
            let sig = |v: usize| -> VertexSig {
                let images: Vec<usize> = self
                    .funcs
                    .iter()
                    .map(|f| if f[v] == self.n { usize::MAX } else { cell_of[f[v]] })
                    .collect();
                let preimages: Vec<Vec<usize>> = self
                    .funcs
                    .iter()
                    .map(|f| {
                        let mut p: Vec<usize> =
                            (0..self.n).filter(|&u| f[u] == v).map(|u| cell_of[u]).collect();
                        p.sort_unstable();
                        p
                    })
                    .collect();
                (self.colors[v], images, preimages)
            };
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
            let mut split = false;
            for c in &cells {
                if c.len() == 1 {
                    next.push(c.clone());
                    continue;
                }
                let mut groups: Vec<(VertexSig, Vec<usize>)> = Vec::new();
                for &v in c {
                    let s = sig(v);
                    match groups.binary_search_by(|g| g.0.cmp(&s)) {
                        Ok(i) => groups[i].1.push(v),
                        Err(i) => groups.insert(i, (s, vec![v])),
                    }
                }
                if groups.len() > 1 {
                    split = true;
                }
                next.extend(groups.into_iter().map(|g| g.1));
            }
            cells = next;
            if !split {
                return cells;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn relabel(input: &CanonInput, perm: &[usize]) -> CanonInput {
        // perm: old -> new, perm[0] == 0.
        let n = input.n;
        let mut colors = vec![0usize; n];
        for old in 0..n {
            colors[perm[old]] = input.colors[old];
        }
        let funcs = input
            .funcs
            .iter()
            .map(|f| {
                let mut row = vec![n; n];
                for old in 0..n {
                    row[perm[old]] = if f[old] == n { n } else { perm[f[old]] };
                }
                row
            })
            .collect();
        CanonInput { n, funcs, colors }
    }

    #[test]
    fn distinguishes_star_from_path() {
        // Both: 4 vertices, one function, 3 edges into the basepoint's tree.
        let star = CanonInput { n: 4, funcs: vec![vec![0, 0, 0, 0]], colors: vec![0; 4] };
        let path = CanonInput { n: 4, funcs: vec![vec![0, 0, 1, 2]], colors: vec![0; 4] };
        assert_ne!(star.canonical_key(), path.canonical_key());
    }

    #[test]
    fn key_ignores_relabeling() {
        let path = CanonInput { n: 4, funcs: vec![vec![0, 0, 1, 2]], colors: vec![0; 4] };
        let shuffled = relabel(&path, &[0, 3, 1, 2]);
        assert_ne!(path.funcs, shuffled.funcs);
        assert_eq!(path.canonical_key(), shuffled.canonical_key());
    }

    #[test]
    fn colors_break_symmetry() {
        let a = CanonInput { n: 3, funcs: vec![vec![0, 0, 0]], colors: vec![0, 1, 2] };
        let b = CanonInput { n: 3, funcs: vec![vec![0, 0, 0]], colors: vec![0, 2, 1] };
        // Same shape, swapped colors: isomorphic via the swap.
        assert_eq!(a.canonical_key(), b.canonical_key());
        let c = CanonInput { n: 3, funcs: vec![vec![0, 0, 0]], colors: vec![0, 1, 1] };
        assert_ne!(a.canonical_key(), c.canonical_key());
    }

    #[test]
    fn undefined_entries_are_respected() {
        let total = CanonInput { n: 3, funcs: vec![vec![0, 1, 1]], colors: vec![0; 3] };
        let partial = CanonInput { n: 3, funcs: vec![vec![0, 1, 3]], colors: vec![0; 3] };
        assert_ne!(total.canonical_key(), partial.canonical_key());
    }

    #[test]
    fn random_relabelings_never_change_the_key() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=7);
            let nf = rng.gen_range(1..=2);
            let funcs: Vec<Vec<usize>> = (0..nf)
                .map(|_| (0..n).map(|_| rng.gen_range(0..=n)).collect())
                .collect();
            let colors: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
            let input = CanonInput { n, funcs, colors };
            let mut perm: Vec<usize> = (0..n).collect();
            perm[1..].shuffle(&mut rng);
            let other = relabel(&input, &perm);
            assert_eq!(input.canonical_key(), other.canonical_key());
        }
    }

    #[test]
    fn returned_perm_realizes_the_key() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let funcs: Vec<Vec<usize>> = vec![(0..n).map(|_| rng.gen_range(0..=n)).collect()];
            let colors: Vec<usize> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let input = CanonInput { n, funcs, colors };
            let (key, perm) = input.canonical_form();
            assert_eq!(perm[0], 0);
            let relabeled = relabel(&input, &perm);
            assert_eq!(key, (relabeled.n, relabeled.colors, relabeled.funcs));
        }
    }
}
