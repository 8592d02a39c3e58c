//! The symmetric inverse semigroup I(ℕ) on finitely supported elements.
//!
//! Composition is right-to-left: `f.compose(&g)` applies `g` first, and its
//! domain is `g⁻¹(dom f ∩ im g)`.

mod convergence;
mod metric;
mod wagner_preston;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{malformed, Result};

pub use convergence::{
    check_convergence, ConvergenceCondition, ConvergenceVerdict, RefutationWitness, SequenceWindow,
};
pub use metric::tau_pp_distance;
pub use wagner_preston::{wagner_preston, FiniteInverseSemigroup};

/// A finite injective partial map on the naturals.
///
/// Entries are kept sorted by source, so two values are equal exactly when
/// they denote the same partial map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "RawPartialBijection")]
pub struct PartialBijection {
    entries: Vec<(u64, u64)>,
}

#[derive(Deserialize)]
struct RawPartialBijection {
    entries: Vec<(u64, u64)>,
}

impl TryFrom<RawPartialBijection> for PartialBijection {
    type Error = crate::Error;

    fn try_from(raw: RawPartialBijection) -> Result<Self> {
        PartialBijection::new(raw.entries)
    }
}

impl PartialBijection {
    /// Builds a partial bijection from `(source, target)` pairs in any order.
    ///
    /// Repeated identical pairs are tolerated; a source or target used twice
    /// with different partners is rejected.
    pub fn new(entries: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut entries: Vec<(u64, u64)> = entries.into_iter().collect();
        entries.sort_unstable();
        entries.dedup();
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(malformed(format!("source {} has two targets", pair[0].0)));
            }
        }
        let mut targets: Vec<u64> = entries.iter().map(|&(_, t)| t).collect();
        targets.sort_unstable();
        for pair in targets.windows(2) {
            if pair[0] == pair[1] {
                return Err(malformed(format!("target {} is hit twice", pair[0])));
            }
        }
        Ok(Self { entries })
    }

    /// Entries that are already known to be functional and injective.
    fn from_sorted_unchecked(entries: Vec<(u64, u64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        Self { entries }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The partial identity 1_A.
    pub fn identity_on(points: impl IntoIterator<Item = u64>) -> Self {
        let set: BTreeSet<u64> = points.into_iter().collect();
        Self::from_sorted_unchecked(set.into_iter().map(|x| (x, x)).collect())
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `f(x)`, if `x ∈ dom(f)`.
    pub fn apply(&self, x: u64) -> Option<u64> {
        self.entries
            .binary_search_by_key(&x, |&(s, _)| s)
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// `f⁻¹(y)`, if `y ∈ im(f)`.
    pub fn preimage(&self, y: u64) -> Option<u64> {
        self.entries.iter().find(|&&(_, t)| t == y).map(|&(s, _)| s)
    }

    pub fn domain(&self) -> BTreeSet<u64> {
        self.entries.iter().map(|&(s, _)| s).collect()
    }

    pub fn image(&self) -> BTreeSet<u64> {
        self.entries.iter().map(|&(_, t)| t).collect()
    }

    pub fn in_domain(&self, x: u64) -> bool {
        self.apply(x).is_some()
    }

    pub fn in_image(&self, y: u64) -> bool {
        self.preimage(y).is_some()
    }

    /// `self ∘ g`: apply `g`, then `self`.
    pub fn compose(&self, g: &PartialBijection) -> PartialBijection {
        let mut entries: Vec<(u64, u64)> = g
            .entries
            .iter()
            .filter_map(|&(x, gx)| self.apply(gx).map(|fgx| (x, fgx)))
            .collect();
        entries.sort_unstable();
        Self::from_sorted_unchecked(entries)
    }

    pub fn inverse(&self) -> PartialBijection {
        let mut entries: Vec<(u64, u64)> = self.entries.iter().map(|&(s, t)| (t, s)).collect();
        entries.sort_unstable();
        Self::from_sorted_unchecked(entries)
    }

    /// Idempotents of I(X) are exactly the partial identities.
    pub fn is_idempotent(&self) -> bool {
        self.entries.iter().all(|&(s, t)| s == t)
    }

    /// Largest point mentioned as a source or a target.
    pub fn support_max(&self) -> Option<u64> {
        self.entries.iter().map(|&(s, t)| s.max(t)).max()
    }
}

impl fmt::Display for PartialBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (s, t)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}↦{t}")?;
        }
        f.write_str("}")
    }
}

pub fn compose(f: &PartialBijection, g: &PartialBijection) -> PartialBijection {
    f.compose(g)
}

pub fn invert(f: &PartialBijection) -> PartialBijection {
    f.inverse()
}

pub fn partial_identity(points: impl IntoIterator<Item = u64>) -> PartialBijection {
    PartialBijection::identity_on(points)
}

pub fn is_idempotent(f: &PartialBijection) -> bool {
    f.is_idempotent()
}

/// The three families of subbasic open sets of τ_pp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubbasicKind {
    /// `v(x, y)`: `x ∈ dom(f)` and `f(x) = y`.
    V,
    /// `w₁(x)`: `x ∉ dom(f)`.
    W1,
    /// `w₂(y)`: `y ∉ im(f)`.
    W2,
}

/// Membership of `f` in a subbasic set.
///
/// `v` needs both points; `w1` reads `x`; `w2` reads `y`, falling back to `x`
/// when only one point is given.
pub fn subbasic_membership(
    f: &PartialBijection,
    kind: SubbasicKind,
    x: Option<u64>,
    y: Option<u64>,
) -> Result<bool> {
    match kind {
        SubbasicKind::V => {
            let (x, y) = match (x, y) {
                (Some(x), Some(y)) => (x, y),
                _ => return Err(malformed("subbasic set v needs both x and y")),
            };
            Ok(f.apply(x) == Some(y))
        }
        SubbasicKind::W1 => {
            let x = x.ok_or_else(|| malformed("subbasic set w1 needs x"))?;
            Ok(!f.in_domain(x))
        }
        SubbasicKind::W2 => {
            let y = y.or(x).ok_or_else(|| malformed("subbasic set w2 needs y"))?;
            Ok(!f.in_image(y))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pb(entries: &[(u64, u64)]) -> PartialBijection {
        PartialBijection::new(entries.iter().copied()).unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(compose(&pb(&[(1, 2)]), &pb(&[(0, 1)])), pb(&[(0, 2)]));
        assert_eq!(compose(&pb(&[(0, 1)]), &pb(&[(0, 1)])), PartialBijection::empty());
        let swap = pb(&[(0, 1), (1, 0)]);
        let id3 = pb(&[(0, 0), (1, 1), (2, 2)]);
        assert_eq!(compose(&swap, &id3), swap);
    }

    #[test]
    fn composite_domain_is_preimage_of_overlap() {
        let f = pb(&[(2, 7), (3, 8)]);
        let g = pb(&[(0, 2), (1, 5), (4, 3)]);
        let fg = compose(&f, &g);
        assert_eq!(fg.domain(), BTreeSet::from([0, 4]));
        assert_eq!(fg, pb(&[(0, 7), (4, 8)]));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(invert(&pb(&[(0, 3), (1, 4)])), pb(&[(3, 0), (4, 1)]));
        assert_eq!(invert(&PartialBijection::empty()), PartialBijection::empty());
    }

    #[test]
    fn partial_identities() {
        assert_eq!(partial_identity([0, 1]), pb(&[(0, 0), (1, 1)]));
        assert_eq!(partial_identity([]), PartialBijection::empty());
        let e = partial_identity([5]);
        assert_eq!(e, pb(&[(5, 5)]));
        assert_eq!(compose(&e, &e), e);
    }

    #[test]
    fn idempotent_examples() {
        assert!(is_idempotent(&pb(&[(0, 0), (2, 2)])));
        assert!(!is_idempotent(&pb(&[(0, 1)])));
        assert!(is_idempotent(&PartialBijection::empty()));
    }

    #[test]
    fn rejects_non_injective_and_non_functional() {
        assert!(PartialBijection::new([(0, 1), (0, 2)]).is_err());
        assert!(PartialBijection::new([(0, 1), (2, 1)]).is_err());
        assert_eq!(PartialBijection::new([(0, 1), (0, 1)]).unwrap(), pb(&[(0, 1)]));
    }

    #[test]
    fn subbasic_examples() {
        let f = pb(&[(0, 1)]);
        assert!(subbasic_membership(&f, SubbasicKind::V, Some(0), Some(1)).unwrap());
        assert!(subbasic_membership(&f, SubbasicKind::W1, Some(2), None).unwrap());
        assert!(!subbasic_membership(&f, SubbasicKind::W2, None, Some(1)).unwrap());
        assert!(!subbasic_membership(&f, SubbasicKind::W1, Some(0), None).unwrap());
    }

    #[test]
    fn subbasic_v_without_target_is_malformed() {
        let f = pb(&[(0, 1)]);
        assert!(matches!(
            subbasic_membership(&f, SubbasicKind::V, Some(0), None),
            Err(crate::Error::Malformed(_))
        ));
    }

    #[test]
    fn json_shape() {
        let f = pb(&[(3, 0), (1, 2)]);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"entries":[[1,2],[3,0]]}"#);
        let back: PartialBijection = serde_json::from_str(r#"{"entries":[[3,0],[1,2]]}"#).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<PartialBijection>(r#"{"entries":[[0,1],[0,2]]}"#).is_err());
    }
}
