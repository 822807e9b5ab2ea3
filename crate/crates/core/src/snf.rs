//! Integer matrices, Smith normal form, and finitely presented abelian
//! groups.
//!
//! Everything is exact over arbitrary-precision integers. Presentations are
//! row convention: a relation matrix has one row per relation and one column
//! per generator, and the presented group is the cokernel of the row span.
//! The normal form optionally tracks the row and column transforms, which is
//! what the lattice membership, kernel, and class-coordinate computations
//! are built on.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> IntMat {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> IntMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        IntMat {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMat {
        assert!(rows.iter().all(|row| row.len() == cols));
        IntMat { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += xi * self.get(i, j);
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[a] += q * row[b]`.
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(a, j) + q * self.get(b, j);
            self.set(a, j, v);
        }
    }

    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, a) + q * self.get(i, b);
            self.set(i, a, v);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j);
            self.set(a, j, v);
        }
    }

    /// Fraction-free determinant. Square matrices only.
    pub fn det_bareiss(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }
}

/// Smith normal form `u * m * v = d` with `d` diagonal, nonnegative, each
/// entry dividing the next. Transforms are present when requested.
pub struct Snf {
    pub d: IntMat,
    pub u: Option<IntMat>,
    pub v: Option<IntMat>,
}

impl Snf {
    /// Diagonal entries, padded with zeros up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows.min(self.d.cols);
        (0..k).map(|i| self.d.get(i, i).clone()).collect()
    }
}

pub fn smith_normal_form(m: &IntMat, track_left: bool, track_right: bool) -> Snf {
    let mut a = m.clone();
    let mut u = track_left.then(|| IntMat::identity(m.rows));
    let mut v = track_right.then(|| IntMat::identity(m.cols));
    let steps = m.rows.min(m.cols);
    let mut t = 0;
    while t < steps {
        // Minimal nonzero entry of the working submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m.rows {
            for j in t..m.cols {
                if a.get(i, j).is_zero() {
                    continue;
                }
                match pivot {
                    Some((pi, pj)) if a.get(pi, pj).abs() <= a.get(i, j).abs() => {}
                    _ => pivot = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(t, pi);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, pi);
        }
        a.swap_cols(t, pj);
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, pj);
        }
        // Clear row and column t; imperfect quotients shrink the pivot, so
        // re-running to a fixed point terminates.
        loop {
            let mut dirty = false;
            for i in t + 1..m.rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -div_round(a.get(i, t), a.get(t, t));
                a.add_row(i, t, &q);
                if let Some(u) = u.as_mut() {
                    u.add_row(i, t, &q);
                }
                if !a.get(i, t).is_zero() {
                    // Remainder smaller than the pivot: promote it.
                    a.swap_rows(t, i);
                    if let Some(u) = u.as_mut() {
                        u.swap_rows(t, i);
                    }
                    dirty = true;
                }
            }
            for j in t + 1..m.cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -div_round(a.get(t, j), a.get(t, t));
                a.add_col(j, t, &q);
                if let Some(v) = v.as_mut() {
                    v.add_col(j, t, &q);
                }
                if !a.get(t, j).is_zero() {
                    a.swap_cols(t, j);
                    if let Some(v) = v.as_mut() {
                        v.swap_cols(t, j);
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        // Divisibility fixup: the pivot must divide the remaining submatrix.
        let mut fixed = true;
        'scan: for i in t + 1..m.rows {
            for j in t + 1..m.cols {
                if !(a.get(i, j) % a.get(t, t)).is_zero() {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    if let Some(u) = u.as_mut() {
                        u.add_row(t, i, &one);
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
        t += 1;
    }
    Snf { d: a, u, v }
}

/// Quotient rounded to nearest, which keeps remainders at most half the
/// divisor and makes the reduction loop converge fast.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_mod_floor(a, b);
    if BigInt::from(2) * r.abs() > b.abs() {
        q + BigInt::one()
    } else {
        q
    }
}

/// A finitely generated abelian group in canonical form: invariant factors
/// greater than one, then a free rank.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct AbGroup {
    pub invariants: Vec<BigInt>,
    pub rank: usize,
}

impl AbGroup {
    pub fn free(rank: usize) -> AbGroup {
        AbGroup { invariants: Vec::new(), rank }
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty() && self.rank == 0
    }

    pub fn is_free_of_rank(&self, rank: usize) -> bool {
        self.invariants.is_empty() && self.rank == rank
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.rank > 0 {
            return None;
        }
        Some(self.invariants.iter().product())
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.rank == 1 {
            parts.push("Z".to_string());
        } else if self.rank > 1 {
            parts.push(format!("Z^{}", self.rank));
        }
        for inv in &self.invariants {
            parts.push(format!("Z/{inv}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// An abelian group presented by relations, retaining the column transform
/// so elements of `ℤ^g` get canonical coordinates.
#[derive(Debug, Clone)]
pub struct PresentedGroup {
    pub group: AbGroup,
    generators: usize,
    /// Full diagonal, one entry per generator (zeros for free directions).
    diag: Vec<BigInt>,
    v: IntMat,
}

impl PresentedGroup {
    /// `relations`: one row per relation over `generators` columns. A matrix
    /// with zero rows still needs the generator count, hence the parameter.
    pub fn from_relations(relations: &IntMat, generators: usize) -> PresentedGroup {
        assert!(relations.cols == generators || relations.rows == 0);
        let rels = if relations.rows == 0 {
            IntMat::zeros(0, generators)
        } else {
            relations.clone()
        };
        let snf = smith_normal_form(&rels, false, true);
        let mut diag = snf.diagonal();
        diag.resize(generators, BigInt::zero());
        let invariants: Vec<BigInt> =
            diag.iter().filter(|d| **d > BigInt::one()).cloned().collect();
        let rank = diag.iter().filter(|d| d.is_zero()).count();
        PresentedGroup {
            group: AbGroup { invariants, rank },
            generators,
            diag,
            v: snf.v.unwrap(),
        }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    /// Canonical coordinates of a generator combination: residues for the
    /// torsion directions (invariant > 1) followed by the free coordinates.
    pub fn class_of(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.generators);
        let y = self.v_apply(x);
        let mut out = Vec::new();
        for (yi, d) in y.iter().zip(&self.diag) {
            if *d > BigInt::one() {
                out.push(num_integer::Integer::mod_floor(yi, d));
            }
        }
        for (yi, d) in y.iter().zip(&self.diag) {
            if d.is_zero() {
                out.push(yi.clone());
            }
        }
        out
    }

    pub fn class_of_i64(&self, x: &[i64]) -> Vec<BigInt> {
        let x: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        self.class_of(&x)
    }

    pub fn classes_equal(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        self.class_of(a) == self.class_of(b)
    }

    pub fn is_zero_class(&self, x: &[BigInt]) -> bool {
        self.class_of(x).iter().all(|v| v.is_zero())
    }

    pub fn is_zero_class_i64(&self, x: &[i64]) -> bool {
        self.class_of(x.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>().as_slice())
            .iter()
            .all(|v| v.is_zero())
    }

    fn v_apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.generators];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += xi * self.v.get(i, j);
            }
        }
        out
    }
}

/// The row span of an integer matrix, with exact membership testing.
#[derive(Debug, Clone)]
pub struct Lattice {
    cols: usize,
    diag: Vec<BigInt>,
    v: IntMat,
}

impl Lattice {
    pub fn from_rows(m: &IntMat) -> Lattice {
        let snf = smith_normal_form(m, false, true);
        let mut diag = snf.diagonal();
        diag.resize(m.cols, BigInt::zero());
        Lattice { cols: m.cols, diag, v: snf.v.unwrap() }
    }

    /// `x ∈ rowspan`: in the transformed basis every coordinate must be a
    /// multiple of the corresponding diagonal entry (zero where the diagonal
    /// is zero).
    pub fn contains(&self, x: &[BigInt]) -> bool {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![BigInt::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter_mut().enumerate() {
                *yj += xi * self.v.get(i, j);
            }
        }
        y.iter().zip(&self.diag).all(|(yi, d)| {
            if d.is_zero() {
                yi.is_zero()
            } else {
                (yi % d).is_zero()
            }
        })
    }

    pub fn contains_i64(&self, x: &[i64]) -> bool {
        let x: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        self.contains(&x)
    }

    pub fn contains_all_rows(&self, m: &IntMat) -> bool {
        (0..m.rows).all(|i| self.contains(m.row(i)))
    }
}

/// Rows spanning the left kernel `{x : x·m = 0}`, read off the rows of the
/// left transform that hit zero diagonal entries.
pub fn left_kernel(m: &IntMat) -> IntMat {
    let snf = smith_normal_form(m, true, false);
    let diag = snf.diagonal();
    let u = snf.u.unwrap();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..m.rows {
        let zero = i >= diag.len() || diag[i].is_zero();
        if zero {
            rows.push(u.row(i).to_vec());
        }
    }
    IntMat::from_rows(rows, m.rows)
}

/// Rows spanning `{x : x·a ∈ rowspan(l)}`: the left kernel of the stacked
/// matrix `[a; l]` projected to the `a`-block coordinates.
pub fn preimage_lattice(a: &IntMat, l: &IntMat) -> IntMat {
    assert_eq!(a.cols, l.cols);
    let stacked = a.stack(l);
    let ker = left_kernel(&stacked);
    let rows: Vec<Vec<BigInt>> = (0..ker.rows)
        .map(|i| ker.row(i)[..a.rows].to_vec())
        .collect();
    IntMat::from_rows(rows, a.rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn snf_of_a_diagonalizable_matrix() {
        let m = IntMat::from_rows_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let snf = smith_normal_form(&m, true, true);
        assert_eq!(snf.diagonal(), vec![big(2), big(2), big(156)]);
    }

    #[test]
    fn snf_postconditions_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let r = rng.gen_range(1..=4);
            let c = rng.gen_range(1..=4);
            let rows: Vec<Vec<i64>> =
                (0..r).map(|_| (0..c).map(|_| rng.gen_range(-6..=6)).collect()).collect();
            let m = IntMat::from_rows_i64(&rows);
            let snf = smith_normal_form(&m, true, true);
            let (u, v) = (snf.u.as_ref().unwrap(), snf.v.as_ref().unwrap());
            // u m v = d.
            assert_eq!(u.mul(&m).mul(v), snf.d);
            // Transforms are unimodular.
            assert_eq!(u.det_bareiss().abs(), big(1));
            assert_eq!(v.det_bareiss().abs(), big(1));
            // Diagonal, nonnegative, divisibility chain.
            let diag = snf.diagonal();
            for i in 0..snf.d.rows {
                for j in 0..snf.d.cols {
                    if i != j {
                        assert!(snf.d.get(i, j).is_zero());
                    }
                }
            }
            for w in diag.windows(2) {
                assert!(w[0] >= BigInt::zero());
                if w[0].is_zero() {
                    assert!(w[1].is_zero());
                } else {
                    assert!((&w[1] % &w[0]).is_zero());
                }
            }
        }
    }

    #[test]
    fn presented_groups_in_canonical_form() {
        let g = PresentedGroup::from_relations(&IntMat::from_rows_i64(&[vec![2]]), 1);
        assert_eq!(g.group, AbGroup { invariants: vec![big(2)], rank: 0 });
        assert_eq!(g.group.describe(), "Z/2");

        let g = PresentedGroup::from_relations(&IntMat::zeros(0, 3), 3);
        assert!(g.group.is_free_of_rank(3));

        let g = PresentedGroup::from_relations(
            &IntMat::from_rows_i64(&[vec![1, 1], vec![1, -1]]),
            2,
        );
        assert_eq!(g.group, AbGroup { invariants: vec![big(2)], rank: 0 });

        let g = PresentedGroup::from_relations(
            &IntMat::from_rows_i64(&[vec![1, -1, 0], vec![0, 1, -1]]),
            3,
        );
        assert!(g.group.is_free_of_rank(1));
    }

    #[test]
    fn class_coordinates_identify_equal_classes() {
        // Z² modulo (2, 0): one torsion and one free direction.
        let g = PresentedGroup::from_relations(&IntMat::from_rows_i64(&[vec![2, 0]]), 2);
        assert!(g.classes_equal(
            [big(3), big(5)].as_ref(),
            [big(1), big(5)].as_ref()
        ));
        assert!(!g.classes_equal(
            [big(1), big(5)].as_ref(),
            [big(0), big(5)].as_ref()
        ));
        assert!(g.is_zero_class(&[big(2), big(0)]));
        assert!(!g.is_zero_class(&[big(0), big(1)]));
    }

    #[test]
    fn class_map_is_additive_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let gens = rng.gen_range(1..=4);
            let nrel = rng.gen_range(0..=3);
            let rows: Vec<Vec<i64>> = (0..nrel)
                .map(|_| (0..gens).map(|_| rng.gen_range(-4..=4)).collect())
                .collect();
            let m = if rows.is_empty() {
                IntMat::zeros(0, gens)
            } else {
                IntMat::from_rows_i64(&rows)
            };
            let g = PresentedGroup::from_relations(&m, gens);
            // Every relation row is the zero class.
            for row in &rows {
                let x: Vec<BigInt> = row.iter().map(|&v| big(v)).collect();
                assert!(g.is_zero_class(&x));
            }
            // Shifting by a relation never changes a class.
            let x: Vec<BigInt> = (0..gens).map(|_| big(rng.gen_range(-5..=5))).collect();
            for row in &rows {
                let shifted: Vec<BigInt> =
                    x.iter().zip(row).map(|(xi, &r)| xi + big(r)).collect();
                assert!(g.classes_equal(&x, &shifted));
            }
        }
    }

    #[test]
    fn lattice_membership() {
        let l = Lattice::from_rows(&IntMat::from_rows_i64(&[vec![2, 0], vec![0, 3]]));
        assert!(l.contains_i64(&[2, 3]));
        assert!(l.contains_i64(&[-4, 9]));
        assert!(!l.contains_i64(&[1, 0]));
        assert!(!l.contains_i64(&[2, 1]));
        // Rank-deficient span.
        let l = Lattice::from_rows(&IntMat::from_rows_i64(&[vec![1, 1]]));
        assert!(l.contains_i64(&[5, 5]));
        assert!(!l.contains_i64(&[5, 4]));
    }

    #[test]
    fn left_kernel_annihilates() {
        let m = IntMat::from_rows_i64(&[vec![2, 4], vec![1, 2], vec![3, 6]]);
        let k = left_kernel(&m);
        assert_eq!(k.rows, 2);
        for i in 0..k.rows {
            assert!(m.transposed_apply_is_zero(k.row(i)));
        }
        // The kernel contains the expected dependency.
        let lat = Lattice::from_rows(&k);
        assert!(lat.contains_i64(&[1, -2, 0]));
        assert!(lat.contains_i64(&[0, 3, -1]));
        assert!(!lat.contains_i64(&[1, 0, 0]));
    }

    #[test]
    fn preimage_of_a_sublattice() {
        // x ↦ (x₁, 2x₂); target lattice (0, 4)ℤ.
        let a = IntMat::from_rows_i64(&[vec![1, 0], vec![0, 2]]);
        let l = IntMat::from_rows_i64(&[vec![0, 4]]);
        let pre = preimage_lattice(&a, &l);
        let lat = Lattice::from_rows(&pre);
        assert!(lat.contains_i64(&[0, 2]));
        assert!(!lat.contains_i64(&[0, 1]));
        assert!(!lat.contains_i64(&[1, 0]));
    }

    #[test]
    fn determinants() {
        assert_eq!(IntMat::identity(4).det_bareiss(), big(1));
        let m = IntMat::from_rows_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.det_bareiss(), big(-1));
        let m = IntMat::from_rows_i64(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(m.det_bareiss(), big(6));
        let m = IntMat::from_rows_i64(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.det_bareiss(), big(0));
    }

    impl IntMat {
        fn transposed_apply_is_zero(&self, x: &[BigInt]) -> bool {
            self.apply_row(x).iter().all(|v| v.is_zero())
        }
    }
}
