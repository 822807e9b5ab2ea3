//! Randomized checking of the exactness axioms for pointed sets over a
//! fixed monoid.
//!
//! Each suite draws random sets, closed subsets, collapses, and scrambled
//! isomorphisms, then verifies one axiom clause per report by explicit
//! construction: sequences are rebuilt and validated, comparison maps are
//! written down element by element and tested for bijectivity, pushouts and
//! pullbacks are recomputed independently. A failure records the full action
//! tables involved, so a counterexample can be replayed by hand.
//!
//! Reports are deterministic: the same monoid, sample count, and seed
//! produce byte-identical reports. Each clause runs on its own stream of the
//! seeded generator, so adding or reordering clauses does not disturb the
//! instances drawn by the others.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::aset::{pullback, pushout, ASetError, ASetMap, ASubset, AdmissibleSeq, FiniteASet};
use crate::monoid::FiniteMonoid;

/// Outcome of hammering one axiom clause with random instances.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub tested: usize,
    pub failures: Vec<String>,
    pub seed: u64,
}

impl AxiomReport {
    fn new(axiom: &str, seed: u64) -> Self {
        AxiomReport { axiom: axiom.to_string(), tested: 0, failures: Vec::new(), seed }
    }

    fn record(&mut self, outcome: Result<(), String>) {
        self.tested += 1;
        if let Err(detail) = outcome {
            self.failures.push(detail);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Source of random instances. Sets are drawn as congruence quotients of
/// small free sets, which reaches every isomorphism class of finitely
/// generated sets; subsets are unions of cyclic subsets of random elements.
struct Gen {
    monoid: Arc<FiniteMonoid>,
    rng: ChaCha8Rng,
    max_size: usize,
}

impl Gen {
    fn new(monoid: &Arc<FiniteMonoid>, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Gen { monoid: monoid.clone(), rng, max_size: 9 }
    }

    fn set(&mut self) -> FiniteASet {
        let rank = self.rng.gen_range(1..=2);
        let free = FiniteASet::free(self.monoid.clone(), rank);
        let sz = free.size();
        let mut pairs: Vec<(usize, usize)> = (0..self.rng.gen_range(0..=2))
            .map(|_| (self.rng.gen_range(0..sz), self.rng.gen_range(0..sz)))
            .collect();
        loop {
            let (q, _) = free.quotient_by_pairs(&pairs);
            if q.size() <= self.max_size {
                let perm = self.perm(q.size());
                return q.relabel(&perm).expect("permutation relabel").with_label("R");
            }
            pairs.push((self.rng.gen_range(1..sz), self.rng.gen_range(0..sz)));
        }
    }

    fn subset(&mut self, x: &FiniteASet) -> ASubset {
        let mut sub = x.zero_subset();
        for _ in 0..self.rng.gen_range(0..=2) {
            let seed = self.rng.gen_range(0..x.size());
            sub = sub.union(&x.cyclic_subset(seed)).expect("same parent");
        }
        sub
    }

    /// A closed subset of the same parent contained in `outer`.
    fn subset_within(&mut self, outer: &ASubset) -> ASubset {
        let pool: Vec<usize> = outer.members().iter().copied().collect();
        let mut sub = outer.parent().zero_subset();
        for _ in 0..self.rng.gen_range(0..=2) {
            let seed = pool[self.rng.gen_range(0..pool.len())];
            sub = sub.union(&outer.parent().cyclic_subset(seed)).expect("same parent");
        }
        sub
    }

    /// A basepoint-fixing permutation of `0..m`.
    fn perm(&mut self, m: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..m).collect();
        for i in (2..m).rev() {
            let j = self.rng.gen_range(1..=i);
            p.swap(i, j);
        }
        p
    }

    /// A random admissible epi out of `x` with a scrambled target, so the
    /// map is not literally a canonical quotient projection.
    fn collapse(&mut self, x: &FiniteASet) -> Result<(ASubset, ASetMap), ASetError> {
        let s = self.subset(x);
        let (q, qm) = x.quotient(&s)?;
        let perm = self.perm(q.size());
        let scrambled = q.relabel(&perm)?;
        let iso = ASetMap::new(q, scrambled, perm)?;
        Ok((s, qm.compose(&iso)?))
    }
}

fn show_set(x: &FiniteASet) -> String {
    format!("set(m={}, act={:?})", x.size(), x.table())
}

fn show_sub(s: &ASubset) -> String {
    format!("{:?}", s.members())
}

fn step<T>(r: Result<T, ASetError>, what: &str, ctx: &dyn Fn() -> String) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}; {}", ctx()))
}

fn ensure(cond: bool, what: &str, ctx: &dyn Fn() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(format!("{what}; {}", ctx()))
    }
}

/// Positions of the members of `inner` within the sorted member list of
/// `outer`. Callers guarantee `inner ⊆ outer`.
fn positions(inner: &BTreeSet<usize>, outer: &BTreeSet<usize>) -> Vec<usize> {
    let elems: Vec<usize> = outer.iter().copied().collect();
    inner.iter().map(|v| elems.binary_search(v).expect("nested subset")).collect()
}

/// Re-express a closed subset as a subset of a larger subset's own set.
fn transport(inner: &ASubset, outer: &ASubset) -> Result<ASubset, ASetError> {
    let amb = outer.as_aset();
    let members: BTreeSet<usize> =
        positions(inner.members(), outer.members()).into_iter().collect();
    ASubset::new(&amb, members)
}

/// The collapse of `ker e` followed by the induced comparison must land
/// bijectively on the target: an admissible epi is the cokernel of its
/// kernel.
fn cokernel_round_trip(e: &ASetMap) -> Result<(), String> {
    let ctx = || format!("epi from {} via {:?}", show_set(e.source()), e.map());
    let k = e.kernel();
    let (q, qm) = step(e.source().quotient(&k), "collapse of the kernel", &ctx)?;
    let mut phi = vec![usize::MAX; q.size()];
    for x in 0..e.source().size() {
        let (c, d) = (qm.apply(x), e.apply(x));
        if phi[c] == usize::MAX {
            phi[c] = d;
        } else if phi[c] != d {
            return Err(format!("comparison map is not well defined; {}", ctx()));
        }
    }
    ensure(!phi.contains(&usize::MAX), "comparison map misses a class", &ctx)?;
    let cmp = step(ASetMap::new(q, e.target().clone(), phi), "comparison map", &ctx)?;
    ensure(cmp.is_bijective(), "comparison map is not bijective", &ctx)
}

/// A monic's image must be recovered as the kernel of its own collapse.
fn kernel_round_trip(i: &ASetMap) -> Result<(), String> {
    let ctx = || format!("monic into {} via {:?}", show_set(i.target()), i.map());
    let im = i.image();
    let (_, c) = step(i.target().quotient(&im), "collapse of the image", &ctx)?;
    ensure(c.kernel() == im, "kernel of the collapse differs from the image", &ctx)
}

/// Compare two quotients along a correspondence of source elements: the
/// induced map must be a well-defined equivariant bijection. `pairs` yields
/// (element of `qa`'s source, element of `qb`'s source).
fn induced_iso(
    qa: &FiniteASet,
    ma: &ASetMap,
    qb: &FiniteASet,
    mb: &ASetMap,
    pairs: &mut dyn Iterator<Item = (usize, usize)>,
    ctx: &dyn Fn() -> String,
) -> Result<(), String> {
    let mut phi = vec![usize::MAX; qa.size()];
    for (i, j) in pairs {
        let (c, d) = (ma.apply(i), mb.apply(j));
        if phi[c] == usize::MAX {
            phi[c] = d;
        } else if phi[c] != d {
            return Err(format!("induced map is not well defined; {}", ctx()));
        }
    }
    ensure(!phi.contains(&usize::MAX), "correspondence misses a class", ctx)?;
    let cmp = step(ASetMap::new(qa.clone(), qb.clone(), phi), "induced map", ctx)?;
    ensure(cmp.is_bijective(), "induced map is not bijective", ctx)
}

fn run_axiom(
    monoid: &Arc<FiniteMonoid>,
    samples: usize,
    seed: u64,
    stream: u64,
    id: &str,
    mut body: impl FnMut(&mut Gen) -> Result<(), String>,
) -> AxiomReport {
    let mut report = AxiomReport::new(id, seed);
    let mut gen = Gen::new(monoid, seed, stream);
    for _ in 0..samples {
        report.record(body(&mut gen));
    }
    report
}

/// Quasi-exactness of pointed sets over `monoid`: compositions of
/// admissible maps stay admissible, sequences are kernel/cokernel pairs,
/// wedges split, and collapses pull back along inclusions.
pub fn check_quasi_exact(
    monoid: &Arc<FiniteMonoid>,
    samples: usize,
    seed: u64,
) -> Vec<AxiomReport> {
    vec![
        run_axiom(monoid, samples, seed, 0, "qx-i-composition", |g| {
            let x = g.set();
            let ctx = || show_set(&x);
            // isomorphisms are admissible in both senses
            let p = g.perm(x.size());
            let xr = step(x.relabel(&p), "relabel", &ctx)?;
            let iso = step(ASetMap::new(x.clone(), xr, p), "relabel map", &ctx)?;
            ensure(iso.is_admissible_monic() && iso.is_admissible_epi(), "iso not admissible", &ctx)?;
            // a nested inclusion composes to an inclusion
            let s = g.subset(&x);
            let sa = s.as_aset();
            let t = g.subset(&sa);
            let ctx2 = || format!("{}; s={} t={}", show_set(&x), show_sub(&s), show_sub(&t));
            let comp = step(t.inclusion_map().compose(&s.inclusion_map()), "composite monic", &ctx2)?;
            ensure(comp.is_admissible_monic(), "composite of monics not monic", &ctx2)?;
            // a collapse of a collapse is a collapse
            let (q1, e1) = step(x.quotient(&s), "first collapse", &ctx2)?;
            let u = g.subset(&q1);
            let ctx3 = || format!("{}; s={} u={}", show_set(&x), show_sub(&s), show_sub(&u));
            let (_, e2) = step(q1.quotient(&u), "second collapse", &ctx3)?;
            let comp = step(e1.compose(&e2), "composite epi", &ctx3)?;
            ensure(comp.is_admissible_epi(), "composite of epis not epi", &ctx3)
        }),
        run_axiom(monoid, samples, seed, 1, "qx-ii-kernel-cokernel", |g| {
            let x = g.set();
            let s = g.subset(&x);
            let ctx = || format!("{}; s={}", show_set(&x), show_sub(&s));
            let seq = step(AdmissibleSeq::from_subset(&s), "canonical sequence", &ctx)?;
            ensure(seq.sub.image() == seq.quo.kernel(), "image differs from kernel", &ctx)?;
            kernel_round_trip(&seq.sub)?;
            let (_, e) = step(g.collapse(&x), "random collapse", &ctx)?;
            cokernel_round_trip(&e)
        }),
        run_axiom(monoid, samples, seed, 2, "qx-iii-split", |g| {
            let y = g.set();
            let z = g.set();
            let ctx = || format!("y={} z={}", show_set(&y), show_set(&z));
            let w = step(y.wedge(&z), "wedge", &ctx)?;
            let inc =
                step(ASetMap::new(y.clone(), w.clone(), (0..y.size()).collect()), "inclusion", &ctx)?;
            let mut proj = vec![0usize; w.size()];
            for j in 1..z.size() {
                proj[y.size() - 1 + j] = j;
            }
            let pr = step(ASetMap::new(w, z.clone(), proj), "projection", &ctx)?;
            step(AdmissibleSeq::new(inc, pr), "split sequence", &ctx).map(|_| ())
        }),
        run_axiom(monoid, samples, seed, 3, "qx-iv-base-change", |g| {
            let x = g.set();
            let s = g.subset(&x);
            let ctx = || format!("{}; s={}", show_set(&x), show_sub(&s));
            let (z, q) = step(x.quotient(&s), "collapse", &ctx)?;
            let w = g.subset(&z);
            let ctx = || format!("{}; s={} w={}", show_set(&x), show_sub(&s), show_sub(&w));
            let inc = w.inclusion_map();
            let (p, to_x, to_w) = step(pullback(&q, &inc), "pullback", &ctx)?;
            ensure(to_w.is_admissible_epi(), "pulled-back collapse not admissible", &ctx)?;
            ensure(to_x.is_admissible_monic(), "pulled-back inclusion not monic", &ctx)?;
            let commutes =
                (0..p.size()).all(|u| q.apply(to_x.apply(u)) == inc.apply(to_w.apply(u)));
            ensure(commutes, "pullback square does not commute", &ctx)?;
            // the pullback is exactly the preimage of w inside x
            let pre: BTreeSet<usize> =
                (0..x.size()).filter(|&v| w.contains(q.apply(v))).collect();
            let pre = step(ASubset::new(&x, pre), "preimage subset", &ctx)?;
            ensure(p.is_isomorphic(&pre.as_aset()), "pullback differs from the preimage", &ctx)
        }),
    ]
}

/// The CGW-style axioms: the point is a two-sided unit with admissible
/// structure maps, isomorphisms are bi-admissible, wedges of admissible maps
/// are admissible, and kernel/cokernel are mutually inverse on sequences.
pub fn check_cgw(monoid: &Arc<FiniteMonoid>, samples: usize, seed: u64) -> Vec<AxiomReport> {
    vec![
        run_axiom(monoid, samples, seed, 10, "cgw-z-zero-object", |g| {
            let x = g.set();
            let ctx = || show_set(&x);
            ensure(x.zero_subset().inclusion_map().is_admissible_monic(), "0 → x not monic", &ctx)?;
            ensure(ASetMap::to_point(&x).is_admissible_epi(), "x → 0 not epi", &ctx)?;
            let pt = FiniteASet::point(x.monoid().clone());
            let w = step(x.wedge(&pt), "wedge with the point", &ctx)?;
            ensure(w.is_isomorphic(&x), "point is not a wedge unit", &ctx)
        }),
        run_axiom(monoid, samples, seed, 11, "cgw-i-isomorphisms", |g| {
            let x = g.set();
            let p = g.perm(x.size());
            let ctx = || format!("{}; perm={:?}", show_set(&x), p);
            let xr = step(x.relabel(&p), "relabel", &ctx)?;
            let fwd = step(ASetMap::new(x.clone(), xr.clone(), p.clone()), "iso", &ctx)?;
            let mut inv = vec![0usize; p.len()];
            for (i, &v) in p.iter().enumerate() {
                inv[v] = i;
            }
            let bwd = step(ASetMap::new(xr, x.clone(), inv), "inverse iso", &ctx)?;
            ensure(fwd.is_admissible_monic() && fwd.is_admissible_epi(), "iso not bi-admissible", &ctx)?;
            let round = step(fwd.compose(&bwd), "round trip", &ctx)?;
            ensure(round == ASetMap::identity(&x), "inverse does not invert", &ctx)
        }),
        run_axiom(monoid, samples, seed, 12, "cgw-a-wedge-additivity", |g| {
            let x = g.set();
            let y = g.set();
            let s = g.subset(&x);
            let t = g.subset(&y);
            let ctx = || {
                format!("x={} s={} y={} t={}", show_set(&x), show_sub(&s), show_set(&y), show_sub(&t))
            };
            let ws = step(s.as_aset().wedge(&t.as_aset()), "wedge of subsets", &ctx)?;
            let wx = step(x.wedge(&y), "wedge of ambients", &ctx)?;
            let sm: Vec<usize> = s.members().iter().copied().collect();
            let tm: Vec<usize> = t.members().iter().copied().collect();
            let mut map = vec![0usize; ws.size()];
            map[1..sm.len()].copy_from_slice(&sm[1..]);
            for j in 1..tm.len() {
                map[sm.len() - 1 + j] = x.size() - 1 + tm[j];
            }
            let mono = step(ASetMap::new(ws, wx.clone(), map), "wedge of inclusions", &ctx)?;
            ensure(mono.is_admissible_monic(), "wedge of monics not monic", &ctx)?;
            let (qx, ex) = step(x.quotient(&s), "left collapse", &ctx)?;
            let (qy, ey) = step(y.quotient(&t), "right collapse", &ctx)?;
            let wq = step(qx.wedge(&qy), "wedge of quotients", &ctx)?;
            let mut emap = vec![0usize; wx.size()];
            for (v, e) in emap.iter_mut().enumerate().take(x.size()).skip(1) {
                *e = ex.apply(v);
            }
            for w in 1..y.size() {
                let u = ey.apply(w);
                emap[x.size() - 1 + w] = if u == 0 { 0 } else { qx.size() - 1 + u };
            }
            let epi = step(ASetMap::new(wx, wq, emap), "wedge of collapses", &ctx)?;
            ensure(epi.is_admissible_epi(), "wedge of epis not epi", &ctx)?;
            step(AdmissibleSeq::new(mono, epi), "combined sequence", &ctx).map(|_| ())
        }),
        run_axiom(monoid, samples, seed, 13, "cgw-k-cokernel-kernel", |g| {
            let x = g.set();
            let s = g.subset(&x);
            let p = g.perm(x.size());
            let ctx = || format!("{}; s={}", show_set(&x), show_sub(&s));
            let xr = step(x.relabel(&p), "relabel", &ctx)?;
            let iso = step(ASetMap::new(x.clone(), xr, p.clone()), "iso", &ctx)?;
            let mono = step(s.inclusion_map().compose(&iso), "scrambled monic", &ctx)?;
            kernel_round_trip(&mono)
        }),
        run_axiom(monoid, samples, seed, 14, "cgw-m-kernel-cokernel", |g| {
            let x = g.set();
            let ctx = || show_set(&x);
            let (_, e) = step(g.collapse(&x), "random collapse", &ctx)?;
            cokernel_round_trip(&e)
        }),
    ]
}

/// The ACGW-style gluing axioms: pushouts along monics exist and stay
/// monic, a pair of subsets generates the full union/intersection lattice
/// diagram with both corner isomorphisms, collapses push out, the glued
/// copies of a pushout meet exactly in the shared subobject (with the dual
/// statement for pullbacks of collapses), and nested collapses satisfy the
/// first isomorphism theorem.
pub fn check_acgw(monoid: &Arc<FiniteMonoid>, samples: usize, seed: u64) -> Vec<AxiomReport> {
    vec![
        run_axiom(monoid, samples, seed, 20, "acgw-p-pushout-of-monics", |g| {
            pushout_instance(g).map(|_| ())
        }),
        run_axiom(monoid, samples, seed, 21, "acgw-u-lattice-diagram", |g| {
            let x = g.set();
            let y = g.subset(&x);
            let z = g.subset(&x);
            let ctx =
                || format!("{}; y={} z={}", show_set(&x), show_sub(&y), show_sub(&z));
            let cap = step(y.intersection(&z), "intersection", &ctx)?;
            let cup = step(y.union(&z), "union", &ctx)?;
            // all four restriction sequences are admissible
            for (inner, outer) in [(&cap, &y), (&cap, &z), (&y, &cup), (&z, &cup)] {
                let t = step(transport(inner, outer), "transport", &ctx)?;
                step(AdmissibleSeq::from_subset(&t), "restriction sequence", &ctx)?;
            }
            // both corners: y/(y∩z) ≅ (y∪z)/z and z/(y∩z) ≅ (y∪z)/y
            corner_iso(&y, &z, &cap, &cup, &ctx)?;
            corner_iso(&z, &y, &cap, &cup, &ctx)?;
            // middle column: ((y∪z)/(y∩z)) / (y/(y∩z)) ≅ (y∪z)/y
            let u = cup.as_aset();
            let cap_u = step(transport(&cap, &cup), "transport", &ctx)?;
            let y_u = step(transport(&y, &cup), "transport", &ctx)?;
            let (qc, mc) = step(u.quotient(&cap_u), "collapse of the intersection", &ctx)?;
            let ybar: BTreeSet<usize> = y_u.members().iter().map(|&v| mc.apply(v)).collect();
            let ybar = step(ASubset::new(&qc, ybar), "image of y in the collapse", &ctx)?;
            let (q2, m2) = step(qc.quotient(&ybar), "second collapse", &ctx)?;
            let (q3, m3) = step(u.quotient(&y_u), "direct collapse", &ctx)?;
            let both = step(mc.compose(&m2), "composite collapse", &ctx)?;
            induced_iso(&q2, &both, &q3, &m3, &mut (0..u.size()).map(|v| (v, v)), &ctx)
        }),
        run_axiom(monoid, samples, seed, 22, "acgw-s-pushout-squares", |g| {
            let x = g.set();
            let y = g.subset(&x);
            let z = g.subset(&x);
            let ctx =
                || format!("{}; y={} z={}", show_set(&x), show_sub(&y), show_sub(&z));
            let cap = step(y.intersection(&z), "intersection", &ctx)?;
            let cup = step(y.union(&z), "union", &ctx)?;
            // gluing y and z along their intersection recovers the union
            let capa = cap.as_aset();
            let ya = y.as_aset();
            let za = z.as_aset();
            let f = step(
                ASetMap::new(capa.clone(), ya, positions(cap.members(), y.members())),
                "left leg",
                &ctx,
            )?;
            let gm = step(
                ASetMap::new(capa, za, positions(cap.members(), z.members())),
                "right leg",
                &ctx,
            )?;
            let (p, from_y, from_z) = step(pushout(&f, &gm), "pushout", &ctx)?;
            let ua = cup.as_aset();
            let mut phi = vec![usize::MAX; p.size()];
            for (leg, sub) in [(&from_y, &y), (&from_z, &z)] {
                let pos = positions(sub.members(), cup.members());
                for (i, &d) in pos.iter().enumerate() {
                    let c = leg.apply(i);
                    if phi[c] == usize::MAX {
                        phi[c] = d;
                    } else if phi[c] != d {
                        return Err(format!("glued copies disagree in the union; {}", ctx()));
                    }
                }
            }
            ensure(!phi.contains(&usize::MAX), "pushout has an extra class", &ctx)?;
            let cmp = step(ASetMap::new(p, ua, phi), "comparison with the union", &ctx)?;
            ensure(cmp.is_bijective(), "pushout differs from the union", &ctx)?;
            // collapsing y and z separately pushes out to collapsing the union
            let (_, ey) = step(x.quotient(&y), "collapse of y", &ctx)?;
            let (_, ez) = step(x.quotient(&z), "collapse of z", &ctx)?;
            let (p2, from_qy, from_qz) = step(pushout(&ey, &ez), "pushout of collapses", &ctx)?;
            let (qu, mu) = step(x.quotient(&cup), "collapse of the union", &ctx)?;
            let mut phi2 = vec![usize::MAX; p2.size()];
            for v in 0..x.size() {
                for (leg, e) in [(&from_qy, &ey), (&from_qz, &ez)] {
                    let c = leg.apply(e.apply(v));
                    let d = mu.apply(v);
                    if phi2[c] == usize::MAX {
                        phi2[c] = d;
                    } else if phi2[c] != d {
                        return Err(format!("collapse pushout is not well defined; {}", ctx()));
                    }
                }
            }
            ensure(!phi2.contains(&usize::MAX), "collapse pushout has an extra class", &ctx)?;
            let cmp2 = step(ASetMap::new(p2, qu, phi2), "comparison of collapses", &ctx)?;
            ensure(cmp2.is_bijective(), "pushout of collapses differs from the union collapse", &ctx)
        }),
        run_axiom(monoid, samples, seed, 23, "acgw-pp-glued-intersection", |g| {
            let (v, f, _, from_f, from_g) = pushout_instance(g)?;
            let ctx = || format!("glued along {}", show_set(&v));
            let im_f = from_f.image();
            let im_g = from_g.image();
            let shared = step(f.compose(&from_f), "shared copy", &ctx)?.image();
            let meet = step(im_f.intersection(&im_g), "intersection of the copies", &ctx)?;
            ensure(meet == shared, "copies meet outside the shared subobject", &ctx)?;
            let join = step(im_f.union(&im_g), "union of the copies", &ctx)?;
            ensure(join.is_full(), "copies do not cover the pushout", &ctx)?;
            // the shared copy compares back to v
            ensure(shared.as_aset().is_isomorphic(&v), "shared copy differs from the source", &ctx)
        }),
        run_axiom(monoid, samples, seed, 24, "acgw-pp-dual-pullback-kernel", |g| {
            let x = g.set();
            let s = g.subset(&x);
            let t = g.subset(&x);
            let ctx =
                || format!("{}; s={} t={}", show_set(&x), show_sub(&s), show_sub(&t));
            let st = step(s.union(&t), "union", &ctx)?;
            let (_, es) = step(x.quotient(&s), "collapse of s", &ctx)?;
            let (_, et) = step(x.quotient(&t), "collapse of t", &ctx)?;
            let (_, est) = step(x.quotient(&st), "collapse of the union", &ctx)?;
            let f = induced_collapse(&es, &est)
                .ok_or_else(|| format!("no induced collapse on the left; {}", ctx()))?;
            let gm = induced_collapse(&et, &est)
                .ok_or_else(|| format!("no induced collapse on the right; {}", ctx()))?;
            ensure(f.is_admissible_epi() && gm.is_admissible_epi(), "induced collapses not epi", &ctx)?;
            let (p, to_qs, to_qt) = step(pullback(&f, &gm), "pullback", &ctx)?;
            let commutes =
                (0..p.size()).all(|u| f.apply(to_qs.apply(u)) == gm.apply(to_qt.apply(u)));
            ensure(commutes, "pullback square does not commute", &ctx)?;
            // the projection kernel is carried by the opposite leg; the
            // projection itself need not be admissible, and is not when both
            // legs have nontrivial kernels
            let left = to_qs.kernel().as_aset().is_isomorphic(&gm.kernel().as_aset());
            let right = to_qt.kernel().as_aset().is_isomorphic(&f.kernel().as_aset());
            ensure(left, "left pullback kernel differs from the opposite leg", &ctx)?;
            ensure(right, "right pullback kernel differs from the opposite leg", &ctx)
        }),
        run_axiom(monoid, samples, seed, 25, "acgw-first-isomorphism", |g| {
            let x = g.set();
            let z = g.subset(&x);
            let y = g.subset_within(&z);
            let ctx =
                || format!("{}; y={} z={}", show_set(&x), show_sub(&y), show_sub(&z));
            let (q1, m1) = step(x.quotient(&y), "inner collapse", &ctx)?;
            let zq: BTreeSet<usize> = z.members().iter().map(|&v| m1.apply(v)).collect();
            let zq = step(ASubset::new(&q1, zq), "image of z", &ctx)?;
            let (q2, m2) = step(q1.quotient(&zq), "outer collapse", &ctx)?;
            let (q3, m3) = step(x.quotient(&z), "direct collapse", &ctx)?;
            let both = step(m1.compose(&m2), "composite collapse", &ctx)?;
            induced_iso(&q2, &both, &q3, &m3, &mut (0..x.size()).map(|v| (v, v)), &ctx)
        }),
    ]
}

/// Build a random pushout of two scrambled inclusions of the same set and
/// verify the square: both legs monic, the square commutes, and the gluing
/// identifies nothing beyond the shared copy.
fn pushout_instance(
    g: &mut Gen,
) -> Result<(FiniteASet, ASetMap, ASetMap, ASetMap, ASetMap), String> {
    let v = g.set();
    let a = g.set();
    let b = g.set();
    let ctx = || format!("v={} a={} b={}", show_set(&v), show_set(&a), show_set(&b));
    let xa = step(v.wedge(&a), "left ambient", &ctx)?;
    let xb = step(v.wedge(&b), "right ambient", &ctx)?;
    let pa = g.perm(xa.size());
    let pb = g.perm(xb.size());
    let xar = step(xa.relabel(&pa), "left scramble", &ctx)?;
    let xbr = step(xb.relabel(&pb), "right scramble", &ctx)?;
    let f = step(
        ASetMap::new(v.clone(), xar, (0..v.size()).map(|i| pa[i]).collect()),
        "left monic",
        &ctx,
    )?;
    let gm = step(
        ASetMap::new(v.clone(), xbr, (0..v.size()).map(|i| pb[i]).collect()),
        "right monic",
        &ctx,
    )?;
    let (p, from_f, from_g) = step(pushout(&f, &gm), "pushout", &ctx)?;
    ensure(from_f.is_admissible_monic(), "left pushout leg not monic", &ctx)?;
    ensure(from_g.is_admissible_monic(), "right pushout leg not monic", &ctx)?;
    let lhs = step(f.compose(&from_f), "left composite", &ctx)?;
    let rhs = step(gm.compose(&from_g), "right composite", &ctx)?;
    ensure(lhs == rhs, "pushout square does not commute", &ctx)?;
    let expected = f.target().size() + gm.target().size() - v.size();
    ensure(p.size() == expected, "gluing identified elements outside the shared copy", &ctx)?;
    Ok((v, f, gm, from_f, from_g))
}

/// One corner of the lattice diagram: `y/(y∩z) ≅ (y∪z)/z` through the
/// identity on underlying elements.
fn corner_iso(
    y: &ASubset,
    z: &ASubset,
    cap: &ASubset,
    cup: &ASubset,
    ctx: &dyn Fn() -> String,
) -> Result<(), String> {
    let ya = y.as_aset();
    let ua = cup.as_aset();
    let cap_y = step(transport(cap, y), "transport", ctx)?;
    let z_u = step(transport(z, cup), "transport", ctx)?;
    let (qa, ma) = step(ya.quotient(&cap_y), "corner collapse", ctx)?;
    let (qb, mb) = step(ua.quotient(&z_u), "union collapse", ctx)?;
    let yv: Vec<usize> = y.members().iter().copied().collect();
    let upos = positions(y.members(), cup.members());
    let mut pairs = (0..yv.len()).map(|i| (i, upos[i]));
    induced_iso(&qa, &ma, &qb, &mb, &mut pairs, ctx)
}

/// The comparison of a finer collapse with a coarser one: `x/s → x/(s∪t)`.
/// Returns `None` when the correspondence is inconsistent or partial.
fn induced_collapse(finer: &ASetMap, coarser: &ASetMap) -> Option<ASetMap> {
    let mut phi = vec![usize::MAX; finer.target().size()];
    for v in 0..finer.source().size() {
        let (c, d) = (finer.apply(v), coarser.apply(v));
        if phi[c] == usize::MAX {
            phi[c] = d;
        } else if phi[c] != d {
            return None;
        }
    }
    if phi.contains(&usize::MAX) {
        return None;
    }
    ASetMap::new(finer.target().clone(), coarser.target().clone(), phi).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupTable;

    fn assert_clean(reports: &[AxiomReport], samples: usize) {
        for r in reports {
            assert_eq!(r.tested, samples, "{} ran short", r.axiom);
            assert!(r.passed(), "{} failed: {:?}", r.axiom, r.failures.first());
        }
    }

    #[test]
    fn quasi_exact_holds_for_truncations() {
        let m = FiniteMonoid::truncated_cyclic(3).into_arc();
        assert_clean(&check_quasi_exact(&m, 150, 7), 150);
    }

    #[test]
    fn cgw_holds_for_a_group_smash() {
        let z2 = FiniteMonoid::group_monoid(&GroupTable::cyclic(2));
        let m = FiniteMonoid::truncated_cyclic(2).smash(&z2).into_arc();
        assert_clean(&check_cgw(&m, 120, 3), 120);
    }

    #[test]
    fn acgw_holds_for_truncations_and_groups() {
        let m = FiniteMonoid::truncated_cyclic(3).into_arc();
        assert_clean(&check_acgw(&m, 120, 5), 120);
        let g = FiniteMonoid::group_monoid(&GroupTable::cyclic(3)).into_arc();
        assert_clean(&check_acgw(&g, 80, 5), 80);
    }

    #[test]
    fn reports_are_reproducible_bytes() {
        let m = FiniteMonoid::stabilized_cyclic(2, 1).into_arc();
        let a = serde_json::to_string(&check_acgw(&m, 60, 42)).unwrap();
        let b = serde_json::to_string(&check_acgw(&m, 60, 42)).unwrap();
        assert_eq!(a, b);
        let c = serde_json::to_string(&check_acgw(&m, 60, 43)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn report_json_carries_the_schema_fields() {
        let m = FiniteMonoid::f1().into_arc();
        let reports = check_quasi_exact(&m, 5, 1);
        let json = serde_json::to_string(&reports[0]).unwrap();
        for key in ["\"axiom\"", "\"tested\"", "\"failures\"", "\"seed\""] {
            assert!(json.contains(key), "missing {key} in {json}");
        }
    }

    #[test]
    fn failure_paths_produce_counterexample_text() {
        let m = FiniteMonoid::truncated_cyclic(2).into_arc();
        let x = FiniteASet::free(m.clone(), 2);
        let z = FiniteASet::free(m.clone(), 1);
        // folding both generators onto one is surjective and equivariant but
        // merges nonzero elements, so the cokernel round trip rejects it
        let fold = ASetMap::new(x, z, vec![0, 1, 2, 1, 2]).unwrap();
        assert!(!fold.is_admissible_epi());
        let err = cokernel_round_trip(&fold).unwrap_err();
        assert!(err.contains("not bijective"), "{err}");
        let mut rep = AxiomReport::new("probe", 0);
        rep.record(Err("bad instance".into()));
        rep.record(Ok(()));
        assert_eq!(rep.tested, 2);
        assert!(!rep.passed());
        assert_eq!(rep.failures.len(), 1);
    }

    #[test]
    fn induced_collapse_rejects_incompatible_quotients() {
        let m = FiniteMonoid::truncated_cyclic(3).into_arc();
        let x = FiniteASet::free(m.clone(), 1);
        let s = x.cyclic_subset(3);
        let full = x.full_subset();
        let (_, fine) = x.quotient(&s).unwrap();
        let (_, coarse) = x.quotient(&full).unwrap();
        assert!(induced_collapse(&fine, &coarse).is_some());
        assert!(induced_collapse(&coarse, &fine).is_none());
    }
}
