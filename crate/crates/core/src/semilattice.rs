//! Finite meet-semilattices and the Munn semigroup T(E).
//!
//! T(E) consists of every order isomorphism `Ex → Ey` between principal
//! ideals of `E`, under composition of partial maps.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{malformed, Error, Result};
use crate::pbij::PartialBijection;

/// A meet-semilattice on `{0..size-1}` given by its meet table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSemilattice")]
pub struct FiniteSemilattice {
    size: usize,
    meet: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawSemilattice {
    size: usize,
    meet: Vec<Vec<usize>>,
}

impl TryFrom<RawSemilattice> for FiniteSemilattice {
    type Error = Error;

    fn try_from(raw: RawSemilattice) -> Result<Self> {
        FiniteSemilattice::new(raw.size, raw.meet)
    }
}

impl FiniteSemilattice {
    /// Checks the table is commutative, associative and idempotent. The
    /// induced relation `a ≤ b ⟺ a∧b = a` is then automatically a partial
    /// order, which is re-checked anyway.
    pub fn new(size: usize, meet: Vec<Vec<usize>>) -> Result<Self> {
        if meet.len() != size || meet.iter().any(|row| row.len() != size) {
            return Err(malformed(format!("meet table must be {size}×{size}")));
        }
        if meet.iter().flatten().any(|&v| v >= size) {
            return Err(malformed("meet table entry out of range"));
        }
        let e = Self { size, meet };
        for a in 0..size {
            if e.meet(a, a) != a {
                return Err(malformed(format!("meet is not idempotent at {a}")));
            }
            for b in 0..size {
                if e.meet(a, b) != e.meet(b, a) {
                    return Err(malformed(format!("meet is not commutative at ({a}, {b})")));
                }
                for c in 0..size {
                    if e.meet(e.meet(a, b), c) != e.meet(a, e.meet(b, c)) {
                        return Err(malformed(format!(
                            "meet is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        for a in 0..size {
            for b in 0..size {
                if a != b && e.leq(a, b) && e.leq(b, a) {
                    return Err(malformed(format!("order is not antisymmetric at ({a}, {b})")));
                }
                for c in 0..size {
                    if e.leq(a, b) && e.leq(b, c) && !e.leq(a, c) {
                        return Err(malformed(format!("order is not transitive at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(e)
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let meet = (0..n).map(|a| (0..n).map(|b| a.min(b)).collect()).collect();
        Self { size: n, meet }
    }

    /// Bottom `0` with `n` pairwise incomparable atoms `1..=n` above it.
    pub fn flat(n: usize) -> Self {
        let size = n + 1;
        let meet = (0..size)
            .map(|a| (0..size).map(|b| if a == b { a } else { 0 }).collect())
            .collect();
        Self { size, meet }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn meet_table(&self) -> &[Vec<usize>] {
        &self.meet
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet[a][b] == a
    }

    fn check_point(&self, x: u64) -> Result<usize> {
        usize::try_from(x)
            .ok()
            .filter(|&x| x < self.size)
            .ok_or_else(|| malformed(format!("{x} is not an element of a semilattice of size {}", self.size)))
    }

    /// `Ex = {y : y ≤ x}`.
    pub fn principal_ideal(&self, x: usize) -> Result<BTreeSet<usize>> {
        if x >= self.size {
            return Err(malformed(format!(
                "{x} is not an element of a semilattice of size {}",
                self.size
            )));
        }
        Ok(self.ideal(x))
    }

    fn ideal(&self, x: usize) -> BTreeSet<usize> {
        (0..self.size).filter(|&y| self.leq(y, x)).collect()
    }

    /// All order isomorphisms `Ex → Ey`, in lexicographic order of their
    /// entries.
    pub fn ideal_isomorphisms(&self, x: usize, y: usize) -> Vec<PartialBijection> {
        let source: Vec<usize> = self.ideal(x).into_iter().collect();
        let target: Vec<usize> = self.ideal(y).into_iter().collect();
        if source.len() != target.len() {
            return Vec::new();
        }
        // Assign in order of increasing rank so that everything below a point
        // is usually fixed before the point itself.
        let rank = |a: usize| self.ideal(a).len();
        let mut order = source.clone();
        order.sort_by_key(|&a| (rank(a), a));

        let mut found = Vec::new();
        let mut assignment: Vec<(usize, usize)> = Vec::with_capacity(order.len());
        let mut used = vec![false; self.size];
        self.extend_iso(&order, &target, &rank, &mut assignment, &mut used, &mut found);
        let mut maps: Vec<PartialBijection> = found
            .into_iter()
            .map(|pairs| {
                PartialBijection::new(pairs.into_iter().map(|(a, b)| (a as u64, b as u64)))
                    .expect("backtracking assigns distinct targets")
            })
            .collect();
        maps.sort();
        maps
    }

    fn extend_iso(
        &self,
        order: &[usize],
        target: &[usize],
        rank: &dyn Fn(usize) -> usize,
        assignment: &mut Vec<(usize, usize)>,
        used: &mut [bool],
        found: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let depth = assignment.len();
        if depth == order.len() {
            found.push(assignment.clone());
            return;
        }
        let a = order[depth];
        for &b in target {
            if used[b] || rank(b) != rank(a) {
                continue;
            }
            let coherent = assignment.iter().all(|&(a2, b2)| {
                self.leq(a2, a) == self.leq(b2, b) && self.leq(a, a2) == self.leq(b, b2)
            });
            if !coherent {
                continue;
            }
            used[b] = true;
            assignment.push((a, b));
            self.extend_iso(order, target, rank, assignment, used, found);
            assignment.pop();
            used[b] = false;
        }
    }

    /// `𝓤 = {(x, y) : Ex ≅ Ey}`.
    pub fn compat_pairs(&self) -> BTreeSet<(usize, usize)> {
        let mut pairs = BTreeSet::new();
        for x in 0..self.size {
            for y in 0..self.size {
                if !self.ideal_isomorphisms(x, y).is_empty() {
                    pairs.insert((x, y));
                }
            }
        }
        pairs
    }

    /// Every element of T(E), ordered by `(source_apex, target_apex, map)`.
    /// Closure under composition and inversion is verified before returning.
    pub fn munn_semigroup(&self) -> Result<Vec<MunnElement>> {
        let mut elements = Vec::new();
        for (x, y) in self.compat_pairs() {
            for map in self.ideal_isomorphisms(x, y) {
                elements.push(MunnElement {
                    map,
                    source_apex: x,
                    target_apex: y,
                });
            }
        }
        let maps: HashSet<&PartialBijection> = elements.iter().map(|m| &m.map).collect();
        for f in &elements {
            if !maps.contains(&f.map.inverse()) {
                return Err(Error::Consistency(format!("T(E) not closed under inverse at {}", f.map)));
            }
            for g in &elements {
                let fg = f.map.compose(&g.map);
                if !maps.contains(&fg) {
                    return Err(Error::Consistency(format!(
                        "T(E) not closed: {} ∘ {} = {fg}",
                        f.map, g.map
                    )));
                }
            }
        }
        Ok(elements)
    }

    /// Membership in T(E) by the two conditions: domain and image are
    /// principal ideals, and `f` preserves and reflects the order.
    pub fn is_munn_member(&self, f: &PartialBijection) -> Result<bool> {
        for &(s, t) in f.entries() {
            self.check_point(s)?;
            self.check_point(t)?;
        }
        let dom: BTreeSet<usize> = f.domain().into_iter().map(|x| x as usize).collect();
        let im: BTreeSet<usize> = f.image().into_iter().map(|x| x as usize).collect();
        if self.principal_apex(&dom).is_none() || self.principal_apex(&im).is_none() {
            return Ok(false);
        }
        let entries = f.entries();
        Ok(entries.iter().all(|&(a, fa)| {
            entries.iter().all(|&(b, fb)| {
                self.leq(a as usize, b as usize) == self.leq(fa as usize, fb as usize)
            })
        }))
    }

    /// The `x` with `Ex = set`, if there is one.
    pub fn principal_apex(&self, set: &BTreeSet<usize>) -> Option<usize> {
        set.iter().copied().find(|&x| self.ideal(x) == *set)
    }
}

/// An element of T(E) together with the apexes of its domain and image.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MunnElement {
    pub map: PartialBijection,
    pub source_apex: usize,
    pub target_apex: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbij::partial_identity;

    fn pb(entries: &[(u64, u64)]) -> PartialBijection {
        PartialBijection::new(entries.iter().copied()).unwrap()
    }

    #[test]
    fn principal_ideal_examples() {
        let c4 = FiniteSemilattice::chain(4);
        assert_eq!(c4.principal_ideal(2).unwrap(), BTreeSet::from([0, 1, 2]));
        let flat = FiniteSemilattice::flat(2);
        assert_eq!(flat.principal_ideal(1).unwrap(), BTreeSet::from([0, 1]));
        assert_eq!(flat.principal_ideal(0).unwrap(), BTreeSet::from([0]));
        assert!(flat.principal_ideal(3).is_err());
    }

    #[test]
    fn compat_pair_examples() {
        let diag = |n: usize| (0..n).map(|x| (x, x)).collect::<BTreeSet<_>>();
        assert_eq!(FiniteSemilattice::chain(4).compat_pairs(), diag(4));
        let mut flat_pairs = diag(3);
        flat_pairs.extend([(1, 2), (2, 1)]);
        assert_eq!(FiniteSemilattice::flat(2).compat_pairs(), flat_pairs);
        assert_eq!(FiniteSemilattice::chain(1).compat_pairs(), diag(1));
    }

    #[test]
    fn munn_of_chain_is_its_idempotents() {
        let t = FiniteSemilattice::chain(4).munn_semigroup().unwrap();
        let maps: Vec<_> = t.iter().map(|m| m.map.clone()).collect();
        let expected: Vec<_> = (0..4u64).map(|x| partial_identity(0..=x)).collect();
        assert_eq!(maps, expected);
    }

    #[test]
    fn munn_of_flat_semilattice() {
        let t = FiniteSemilattice::flat(2).munn_semigroup().unwrap();
        let maps: Vec<_> = t.iter().map(|m| m.map.clone()).collect();
        assert_eq!(
            maps,
            vec![
                pb(&[(0, 0)]),
                pb(&[(0, 0), (1, 1)]),
                pb(&[(0, 0), (1, 2)]),
                pb(&[(0, 0), (2, 1)]),
                pb(&[(0, 0), (2, 2)]),
            ]
        );
    }

    #[test]
    fn munn_of_point() {
        let t = FiniteSemilattice::chain(1).munn_semigroup().unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].map, partial_identity([0]));
    }

    #[test]
    fn membership_examples() {
        let flat = FiniteSemilattice::flat(2);
        assert!(flat.is_munn_member(&pb(&[(0, 0), (1, 2)])).unwrap());
        assert!(!flat.is_munn_member(&pb(&[(0, 2), (1, 0)])).unwrap());
        assert!(!flat.is_munn_member(&pb(&[(1, 1)])).unwrap());
        assert!(!flat.is_munn_member(&PartialBijection::empty()).unwrap());
        assert!(flat.is_munn_member(&pb(&[(0, 5)])).is_err());
    }

    #[test]
    fn apexes_are_recoverable() {
        let e = FiniteSemilattice::flat(3);
        for m in e.munn_semigroup().unwrap() {
            let dom: BTreeSet<usize> = m.map.domain().into_iter().map(|x| x as usize).collect();
            assert_eq!(e.principal_apex(&dom), Some(m.source_apex));
            assert_eq!(m.map.apply(m.source_apex as u64), Some(m.target_apex as u64));
        }
    }

    #[test]
    fn rejects_invalid_tables() {
        assert!(FiniteSemilattice::new(2, vec![vec![0, 0], vec![1, 1]]).is_err());
        assert!(FiniteSemilattice::new(2, vec![vec![1, 0], vec![0, 1]]).is_err());
        assert!(FiniteSemilattice::new(2, vec![vec![0, 0]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let e: FiniteSemilattice =
            serde_json::from_str(r#"{"size":3,"meet":[[0,0,0],[0,1,0],[0,0,2]]}"#).unwrap();
        assert_eq!(e, FiniteSemilattice::flat(2));
    }
}
