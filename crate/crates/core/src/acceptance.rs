//! End-to-end verification suites, one per acceptance criterion.
//!
//! Every suite is deterministic given its seed. The brute-force oracles used
//! here enumerate objects directly from their definitions and do not go
//! through the code paths they check.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::Serialize;

use crate::clopen::{enumerate_base, is_hereditary_sublattice, tilde_truncated, Clopen};
use crate::lattice_iso::{
    decode, encode, hereditary_image, lemma_fhat_check, neighborhood_correspondence_check,
    phi_homomorphism_check,
};
use crate::pbij::{
    check_convergence, compose, invert, partial_identity, tau_pp_distance, wagner_preston,
    ConvergenceCondition, FiniteInverseSemigroup, PartialBijection, SequenceWindow,
};
use crate::sample;
use crate::semilattice::FiniteSemilattice;
use crate::ExactDistance;

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {}: {} ({}; {:.2?})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed
        )
    }
}

pub const TITLES: [&str; 9] = [
    "inverse-semigroup laws in I(N)",
    "Munn semigroup correctness",
    "finite C=L census at depth 2",
    "phi is an isomorphism on representables",
    "hat map agrees with the window",
    "neighborhood correspondences",
    "convergence criterion",
    "Wagner-Preston at finite scale",
    "hereditary images stay hereditary",
];

/// Runs one criterion (1-based).
pub fn run(id: u8, seed: u64) -> CriterionReport {
    let start = Instant::now();
    let outcome = match id {
        1 => inverse_semigroup_laws(seed),
        2 => munn_correctness(seed),
        3 => census_depth_two(),
        4 => phi_isomorphism(seed),
        5 => fhat(seed),
        6 => correspondences(seed),
        7 => convergence(seed),
        8 => wagner_preston_suite(seed),
        9 => hereditary_images(seed),
        _ => Err(format!("no criterion {id}")),
    };
    let elapsed = start.elapsed();
    let (passed, detail) = match outcome {
        Ok(detail) => (true, detail),
        Err(detail) => (false, detail),
    };
    CriterionReport {
        id,
        title: TITLES.get(usize::from(id).wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed,
        detail,
        elapsed,
    }
}

pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    (1..=9).map(|id| run(id, seed)).collect()
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every partial bijection on `{0..n-1}`.
pub fn all_partial_bijections(n: u64) -> Vec<PartialBijection> {
    fn go(x: u64, n: u64, used: &mut Vec<bool>, acc: &mut Vec<(u64, u64)>, out: &mut Vec<PartialBijection>) {
        if x == n {
            out.push(PartialBijection::new(acc.iter().copied()).expect("injective by construction"));
            return;
        }
        go(x + 1, n, used, acc, out);
        for y in 0..n {
            if !used[y as usize] {
                used[y as usize] = true;
                acc.push((x, y));
                go(x + 1, n, used, acc, out);
                acc.pop();
                used[y as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut vec![false; n as usize], &mut Vec::new(), &mut out);
    out
}

/// Every partial bijection whose sources and targets lie in `points`.
fn partial_bijections_on(points: &[u64]) -> Vec<PartialBijection> {
    all_partial_bijections(points.len() as u64)
        .into_iter()
        .map(|f| {
            PartialBijection::new(
                f.entries()
                    .iter()
                    .map(|&(s, t)| (points[s as usize], points[t as usize])),
            )
            .expect("relabelling keeps injectivity")
        })
        .collect()
}

fn inverse_semigroup_laws(seed: u64) -> Outcome {
    let mut rng = sample::rng(seed ^ 1);
    let pool: Vec<PartialBijection> = (0..1000).map(|_| sample::partial_bijection(&mut rng, 10)).collect();

    for _ in 0..1000 {
        let f = &pool[rng.gen_range(0..pool.len())];
        let g = &pool[rng.gen_range(0..pool.len())];
        let h = &pool[rng.gen_range(0..pool.len())];
        ensure(compose(&compose(f, g), h) == compose(f, &compose(g, h)), || {
            format!("associativity fails for {f}, {g}, {h}")
        })?;
        ensure(invert(&compose(f, g)) == compose(&invert(g), &invert(f)), || {
            format!("(fg)⁻¹ ≠ g⁻¹f⁻¹ for {f}, {g}")
        })?;
    }

    let mut uniqueness_checked = 0;
    for f in &pool {
        let g = invert(f);
        ensure(compose(&compose(f, &g), f) == *f, || format!("f f⁻¹ f ≠ f for {f}"))?;
        ensure(compose(&compose(&g, f), &g) == g, || format!("f⁻¹ f f⁻¹ ≠ f⁻¹ for {f}"))?;

        let squares_to_itself = compose(f, f) == *f;
        let is_partial_identity = *f == partial_identity(f.domain());
        ensure(f.is_idempotent() == squares_to_itself && squares_to_itself == is_partial_identity, || {
            format!("idempotent characterization fails for {f}")
        })?;

        let support: Vec<u64> = f.domain().union(&f.image()).copied().collect();
        if support.len() <= 3 {
            let inverses: Vec<PartialBijection> = partial_bijections_on(&support)
                .into_iter()
                .filter(|c| compose(&compose(f, c), f) == *f && compose(&compose(c, f), c) == *c)
                .collect();
            ensure(inverses == [g.clone()], || format!("{f} has inverses {inverses:?}"))?;
            uniqueness_checked += 1;
        }
    }

    // every element of I({0,1,2}) against every candidate
    let small = all_partial_bijections(3);
    ensure(small.len() == 34, || format!("|I(3)| = {}", small.len()))?;
    for f in &small {
        let inverses: Vec<&PartialBijection> = small
            .iter()
            .filter(|c| compose(&compose(f, c), f) == *f && compose(&compose(c, f), c) == **c)
            .collect();
        ensure(inverses == [&invert(f)], || format!("{f} has inverses {inverses:?}"))?;
        ensure(f.is_idempotent() == (compose(f, f) == *f), || format!("idempotent test fails for {f}"))?;
    }

    let idempotents: Vec<PartialBijection> = all_partial_bijections(6)
        .into_iter()
        .filter(|f| f.is_idempotent())
        .collect();
    for e in &idempotents {
        for f in &idempotents {
            let meet = partial_identity(e.domain().intersection(&f.domain()).copied());
            ensure(compose(e, f) == meet && compose(f, e) == meet, || {
                format!("idempotents {e} and {f} do not commute to their meet")
            })?;
        }
    }

    Ok(format!(
        "1000 elements, 1000 triples, {} exhaustive uniqueness checks, all 34 elements of I(3), {} idempotent pairs on 6 points",
        uniqueness_checked + 34,
        idempotents.len() * idempotents.len()
    ))
}

/// T(E) by brute force: all partial bijections of `E` whose domain and image
/// are principal ideals and which preserve and reflect the order.
fn munn_oracle(e: &FiniteSemilattice) -> BTreeSet<PartialBijection> {
    let n = e.size();
    let leq = |a: u64, b: u64| e.meet_table()[a as usize][b as usize] == a as usize;
    let ideals: Vec<BTreeSet<u64>> = (0..n as u64)
        .map(|x| (0..n as u64).filter(|&y| leq(y, x)).collect())
        .collect();
    all_partial_bijections(n as u64)
        .into_iter()
        .filter(|f| ideals.contains(&f.domain()) && ideals.contains(&f.image()))
        .filter(|f| {
            f.entries().iter().all(|&(a, fa)| {
                f.entries()
                    .iter()
                    .all(|&(b, fb)| leq(a, b) == leq(fa, fb))
            })
        })
        .collect()
}

/// Every meet table on `{0..n-1}` for `1 ≤ n ≤ max_size`, labels included.
pub fn all_semilattices(max_size: usize) -> Vec<FiniteSemilattice> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let count = n.pow(pairs.len() as u32);
        for code in 0..count {
            let mut meet: Vec<Vec<usize>> = (0..n).map(|i| vec![i; n]).collect();
            let mut rest = code;
            for &(i, j) in &pairs {
                meet[i][j] = rest % n;
                meet[j][i] = rest % n;
                rest /= n;
            }
            if let Ok(e) = FiniteSemilattice::new(n, meet) {
                out.push(e);
            }
        }
    }
    out
}

fn seeded_semilattices(seed: u64, count: usize, max_size: usize) -> Vec<FiniteSemilattice> {
    let mut rng = sample::rng(seed);
    (0..count).map(|_| sample::semilattice(&mut rng, max_size)).collect()
}

fn munn_correctness(seed: u64) -> Outcome {
    let mut lattices = all_semilattices(4);
    let exhaustive = lattices.len();
    lattices.extend(seeded_semilattices(seed ^ 2, 200, 4));
    let mut total = 0;
    for e in &lattices {
        let t = e.munn_semigroup().map_err(|err| err.to_string())?;
        let maps: BTreeSet<PartialBijection> = t.iter().map(|m| m.map.clone()).collect();
        ensure(maps.len() == t.len(), || "duplicate elements in T(E)".into())?;
        let oracle = munn_oracle(e);
        ensure(maps == oracle, || {
            format!("T(E) mismatch for {:?}: {} vs {} elements", e.meet_table(), maps.len(), oracle.len())
        })?;
        for f in &maps {
            ensure(maps.contains(&invert(f)), || format!("not closed under inverse at {f}"))?;
            for g in &maps {
                ensure(maps.contains(&compose(f, g)), || format!("not closed at {f} ∘ {g}"))?;
            }
        }
        for f in all_partial_bijections(e.size() as u64) {
            let member = e.is_munn_member(&f).map_err(|err| err.to_string())?;
            ensure(member == maps.contains(&f), || format!("is_munn_member wrong at {f}"))?;
        }
        total += t.len();
    }
    for n in 1..=6 {
        let t = FiniteSemilattice::chain(n).munn_semigroup().map_err(|e| e.to_string())?;
        let maps: BTreeSet<PartialBijection> = t.into_iter().map(|m| m.map).collect();
        let idents: BTreeSet<PartialBijection> = (0..n as u64).map(|x| partial_identity(0..=x)).collect();
        ensure(maps == idents, || format!("T(chain {n}) is not {{1_Ex}}"))?;
    }
    Ok(format!(
        "all {exhaustive} labelled semilattices of size ≤ 4 and {} seeded ones ({total} Munn elements) match brute force; chains 1..=6 have |T(E)| = n",
        lattices.len() - exhaustive
    ))
}

fn census_depth_two() -> Outcome {
    let start = Instant::now();
    let base = enumerate_base(2).map_err(|e| e.to_string())?;
    let mut passing: BTreeSet<BTreeSet<Clopen>> = BTreeSet::new();
    let mut family: Vec<Clopen> = Vec::with_capacity(16);
    for choice in 0u32..1 << 16 {
        family.clear();
        family.extend((0..16).filter(|i| choice >> i & 1 == 1).map(|i| base[i].clone()));
        if is_hereditary_sublattice(&family, 2).map_err(|e| e.to_string())? {
            passing.insert(family.iter().cloned().collect());
        }
    }
    let tildes: BTreeSet<BTreeSet<Clopen>> = base
        .iter()
        .map(|v| tilde_truncated(v, 2))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(passing == tildes, || {
        format!("{} hereditary sublattices vs {} tilde families", passing.len(), tildes.len())
    })?;
    ensure(passing.len() == 16, || format!("count {}", passing.len()))?;
    for l in &passing {
        let union = l.iter().fold(Clopen::empty(), |acc, u| acc.union(u));
        ensure(tilde_truncated(&union, 2).ok().as_ref() == Some(l), || {
            format!("L ≠ tilde(⋃L) for ⋃L = {union}")
        })?;
    }
    ensure(elapsed < Duration::from_secs(5), || format!("census took {elapsed:.2?}"))?;
    Ok(format!("65536 families scanned, exactly 16 pass, all of the form tilde(V, 2), in {elapsed:.2?}"))
}

fn phi_isomorphism(seed: u64) -> Outcome {
    let mut rng = sample::rng(seed ^ 4);
    let maps: Vec<_> = (0..500).map(|_| sample::prefix_map(&mut rng, 3)).collect();
    let mut seen: HashMap<crate::TruncatedLatticeMap, &crate::PrefixMap> = HashMap::new();
    for h in &maps {
        let w = encode(h, 3).map_err(|e| e.to_string())?;
        let back = decode(&w).map_err(|e| format!("decode failed for {h}: {e}"))?;
        ensure(back == *h, || format!("decode(encode({h})) = {back}"))?;
        if let Some(other) = seen.insert(w, h) {
            ensure(other == h, || format!("{other} and {h} have the same window"))?;
        }
    }
    for _ in 0..500 {
        let f = sample::prefix_map(&mut rng, 3);
        let g = sample::prefix_map(&mut rng, 3);
        let check = phi_homomorphism_check(&f, &g, 3).map_err(|e| e.to_string())?;
        ensure(check.holds(), || format!("φ not multiplicative for {f}, {g}: {:?}", check.witness()))?;
    }
    Ok(format!(
        "500 maps round-trip, {} distinct maps give {} distinct windows, 500 pairs multiply",
        maps.iter().collect::<BTreeSet<_>>().len(),
        seen.len()
    ))
}

fn fhat(seed: u64) -> Outcome {
    let mut rng = sample::rng(seed ^ 5);
    for _ in 0..500 {
        let h = sample::prefix_map(&mut rng, 3);
        let w = encode(&h, 3).map_err(|e| e.to_string())?;
        let check = lemma_fhat_check(&w).map_err(|e| format!("{h}: {e}"))?;
        ensure(check.holds(), || format!("hat map of encode({h}) differs at {:?}", check.witness()))?;
    }
    Ok("500 windows agree with their hat maps on every key".into())
}

fn correspondences(seed: u64) -> Outcome {
    let mut rng = sample::rng(seed ^ 6);
    let maps: Vec<_> = (0..100).map(|_| sample::prefix_map(&mut rng, 2)).collect();
    let base = enumerate_base(2).map_err(|e| e.to_string())?;
    for o in &base {
        for p in &base {
            let check = neighborhood_correspondence_check(o, p, &maps, 2).map_err(|e| e.to_string())?;
            ensure(check.holds(), || {
                format!("correspondence fails at o = {o}, p = {p}: {:?}", check.witness())
            })?;
        }
    }
    Ok("256 pairs (o, p) against 100 maps".into())
}

fn convergence(seed: u64) -> Outcome {
    // (a)
    let terms: Vec<_> = (0..10u64).map(|n| partial_identity(0..=n)).collect();
    let w = SequenceWindow::new(terms, partial_identity(0..=20), 5).map_err(|e| e.to_string())?;
    for strict in [false, true] {
        ensure(check_convergence(&w, strict).is_consistent(), || {
            format!("(a) refuted with strict_inverse = {strict}")
        })?;
    }

    // (b)
    let terms: Vec<_> = (0..10u64)
        .map(|n| PartialBijection::new([(n, 0)]).expect("single entry"))
        .collect();
    let limit = PartialBijection::empty();
    let w = SequenceWindow::new(terms, limit.clone(), 3).map_err(|e| e.to_string())?;
    ensure(check_convergence(&w, false).is_consistent(), || "(b) refuted without strict_inverse".into())?;
    let verdict = check_convergence(&w, true);
    let witness = verdict.witness().copied().ok_or("(b) not refuted with strict_inverse")?;
    ensure(
        witness.point == 0 && witness.condition == ConvergenceCondition::IiInverse,
        || format!("(b) wrong witness {witness:?}"),
    )?;
    let d: ExactDistance = tau_pp_distance(&w.terms[witness.index], &limit, 3);
    let floor = ExactDistance::new(1.into(), (1u64 << (witness.point + 1)).into());
    ensure(d >= floor, || format!("(b) distance {d} below {floor}"))?;

    // (c)
    let mut rng = sample::rng(seed ^ 7);
    for case in 0..10 {
        let settle = rng.gen_range(0..8usize);
        let len = settle + rng.gen_range(1..6usize);
        let f = sample::partial_bijection(&mut rng, 10);
        let terms: Vec<_> = (0..len)
            .map(|n| if n < settle { sample::partial_bijection(&mut rng, 10) } else { f.clone() })
            .collect();
        let w = SequenceWindow::new(terms, f.clone(), 9).map_err(|e| e.to_string())?;
        for strict in [false, true] {
            ensure(check_convergence(&w, strict).is_consistent(), || {
                format!("(c) case {case} refuted with strict_inverse = {strict}")
            })?;
        }
        for (n, t) in w.terms.iter().enumerate().skip(settle) {
            let d: ExactDistance = tau_pp_distance(t, &f, 9);
            ensure(d == ExactDistance::from_integer(0.into()), || {
                format!("(c) case {case}: distance {d} at index {n}")
            })?;
        }
    }
    Ok("(a) consistent both ways; (b) consistent / refuted at point 0 (ii-inverse); (c) 10 eventually-constant sequences consistent with distance 0 from the settling index".into())
}

fn verify_representation(s: &FiniteInverseSemigroup) -> Result<(), String> {
    let theta = wagner_preston(s).map_err(|e| e.to_string())?;
    let n = s.size();
    let distinct: BTreeSet<&PartialBijection> = theta.iter().collect();
    ensure(distinct.len() == n, || "representation is not injective".into())?;
    for a in 0..n {
        for b in 0..n {
            ensure(theta[s.mul(a, b)] == compose(&theta[a], &theta[b]), || {
                format!("θ({a}·{b}) ≠ θ({a}) ∘ θ({b})")
            })?;
        }
    }
    Ok(())
}

fn wagner_preston_suite(seed: u64) -> Outcome {
    let flat = FiniteSemilattice::flat(2);
    let munn: Vec<PartialBijection> = flat
        .munn_semigroup()
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|m| m.map)
        .collect();
    ensure(munn.len() == 5, || format!("flat Munn semigroup has {} elements", munn.len()))?;
    let s = FiniteInverseSemigroup::from_partial_bijections(&munn).map_err(|e| e.to_string())?;
    verify_representation(&s)?;

    let mut lattices = all_semilattices(4);
    lattices.extend(seeded_semilattices(seed ^ 8, 50, 4));
    for e in &lattices {
        let s = FiniteInverseSemigroup::from_semilattice(e).map_err(|err| err.to_string())?;
        verify_representation(&s)?;
        let t: Vec<PartialBijection> = e
            .munn_semigroup()
            .map_err(|err| err.to_string())?
            .into_iter()
            .map(|m| m.map)
            .collect();
        let s = FiniteInverseSemigroup::from_partial_bijections(&t).map_err(|err| err.to_string())?;
        verify_representation(&s)?;
    }
    Ok(format!(
        "flat Munn semigroup and {} semilattices of size ≤ 4, all labellings included (and their Munn semigroups), embed faithfully",
        lattices.len()
    ))
}

fn hereditary_images(seed: u64) -> Outcome {
    let mut rng = sample::rng(seed ^ 9);
    for _ in 0..200 {
        let m = sample::balanced_window(&mut rng, 2);
        let v = sample::clopen(&mut rng, 2);
        let l = tilde_truncated(&v, 2).map_err(|e| e.to_string())?;
        let image = hereditary_image(&m, &l).map_err(|e| e.to_string())?;
        ensure(is_hereditary_sublattice(&image, 2).map_err(|e| e.to_string())?, || {
            format!("image of tilde({v}) is not hereditary")
        })?;
    }
    Ok("200 seeded (M, L) pairs at depth 2".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_bijection_counts() {
        // Σ_k C(n,k)² k!
        let counts: Vec<usize> = (0..5).map(|n| all_partial_bijections(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 7, 34, 209]);
    }

    #[test]
    fn semilattice_counts() {
        // 4!/|Aut| summed over the iso types: on 4 points the chain (24),
        // bottom below three atoms (4), bottom < a < {b, c} (12), the
        // diamond (12) and bottom < a < b beside c (24)
        let counts: Vec<usize> = (1..=4)
            .map(|n| all_semilattices(n).iter().filter(|e| e.size() == n).count())
            .collect();
        assert_eq!(counts, vec![1, 2, 9, 76]);
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run(42, 0).passed);
    }
}
