//! Finite inverse semigroups given by Cayley tables and their faithful
//! representation by partial bijections.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::PartialBijection;
use crate::error::{malformed, Error, Result};

/// A finite inverse semigroup on `{0..size-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSemigroup")]
pub struct FiniteInverseSemigroup {
    size: usize,
    product: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

#[derive(Deserialize)]
struct RawSemigroup {
    size: usize,
    product: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl TryFrom<RawSemigroup> for FiniteInverseSemigroup {
    type Error = Error;

    fn try_from(raw: RawSemigroup) -> Result<Self> {
        FiniteInverseSemigroup::new(raw.size, raw.product, raw.inverse)
    }
}

impl FiniteInverseSemigroup {
    /// Validates shape, associativity, the inverse axioms and uniqueness of
    /// inverses.
    pub fn new(size: usize, product: Vec<Vec<usize>>, inverse: Vec<usize>) -> Result<Self> {
        if product.len() != size || product.iter().any(|row| row.len() != size) {
            return Err(malformed(format!("product table must be {size}×{size}")));
        }
        if inverse.len() != size {
            return Err(malformed(format!("inverse table must have {size} entries")));
        }
        if product.iter().flatten().chain(inverse.iter()).any(|&v| v >= size) {
            return Err(malformed("table entry out of range"));
        }
        let s = Self {
            size,
            product,
            inverse,
        };
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if s.mul(s.mul(a, b), c) != s.mul(a, s.mul(b, c)) {
                        return Err(malformed(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        for a in 0..size {
            let inverses: Vec<usize> = (0..size).filter(|&t| s.is_inverse_pair(a, t)).collect();
            if inverses != [s.inverse[a]] {
                return Err(malformed(format!(
                    "element {a} has inverses {inverses:?}, table says {}",
                    s.inverse[a]
                )));
            }
        }
        Ok(s)
    }

    /// A meet table viewed as an inverse semigroup (every element is its own
    /// inverse).
    pub fn from_semilattice(e: &crate::semilattice::FiniteSemilattice) -> Result<Self> {
        let n = e.size();
        let product = (0..n).map(|a| (0..n).map(|b| e.meet(a, b)).collect()).collect();
        Self::new(n, product, (0..n).collect())
    }

    /// Cayley table of a set of partial bijections closed under composition
    /// and inversion. Element `i` is `elements[i]`; `i·j` is `elements[i] ∘ elements[j]`.
    pub fn from_partial_bijections(elements: &[PartialBijection]) -> Result<Self> {
        let index: HashMap<&PartialBijection, usize> =
            elements.iter().enumerate().map(|(i, f)| (f, i)).collect();
        if index.len() != elements.len() {
            return Err(malformed("repeated element"));
        }
        let lookup = |f: &PartialBijection| {
            index
                .get(f)
                .copied()
                .ok_or_else(|| malformed(format!("{f} is not in the set")))
        };
        let mut product = Vec::with_capacity(elements.len());
        for f in elements {
            let row = elements
                .iter()
                .map(|g| lookup(&f.compose(g)))
                .collect::<Result<Vec<_>>>()?;
            product.push(row);
        }
        let inverse = elements
            .iter()
            .map(|f| lookup(&f.inverse()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(elements.len(), product, inverse)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn product_table(&self) -> &[Vec<usize>] {
        &self.product
    }

    pub fn inverse_table(&self) -> &[usize] {
        &self.inverse
    }

    fn is_inverse_pair(&self, s: usize, t: usize) -> bool {
        self.mul(self.mul(s, t), s) == s && self.mul(self.mul(t, s), t) == t
    }
}

/// Left-translation representation `θ_s : s⁻¹S → sS`, `x ↦ s·x`.
///
/// The result is checked to be injective and to satisfy `θ_{st} = θ_s ∘ θ_t`
/// before it is returned; a failure means the table was not what it claimed.
pub fn wagner_preston(s: &FiniteInverseSemigroup) -> Result<Vec<PartialBijection>> {
    let n = s.size();
    let mut theta = Vec::with_capacity(n);
    for a in 0..n {
        let a_inv = s.inv(a);
        let mut domain: Vec<usize> = (0..n).map(|x| s.mul(a_inv, x)).collect();
        domain.sort_unstable();
        domain.dedup();
        let map = PartialBijection::new(domain.iter().map(|&x| (x as u64, s.mul(a, x) as u64)))
            .map_err(|e| Error::Consistency(format!("θ_{a} is not injective: {e}")))?;
        theta.push(map);
    }
    for a in 0..n {
        for b in 0..n {
            if theta[s.mul(a, b)] != theta[a].compose(&theta[b]) {
                return Err(Error::Consistency(format!(
                    "θ is not a homomorphism at ({a}, {b})"
                )));
            }
        }
        for b in 0..a {
            if theta[a] == theta[b] {
                return Err(Error::Consistency(format!("θ_{a} = θ_{b}")));
            }
        }
    }
    Ok(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbij::partial_identity;

    #[test]
    fn two_element_chain() {
        // 0 < a, with a = 1
        let s = FiniteInverseSemigroup::new(2, vec![vec![0, 0], vec![0, 1]], vec![0, 1]).unwrap();
        let theta = wagner_preston(&s).unwrap();
        assert_eq!(theta[0], partial_identity([0]));
        assert_eq!(theta[1], partial_identity([0, 1]));
    }

    #[test]
    fn trivial_group() {
        let s = FiniteInverseSemigroup::new(1, vec![vec![0]], vec![0]).unwrap();
        assert_eq!(wagner_preston(&s).unwrap(), vec![partial_identity([0])]);
    }

    #[test]
    fn cyclic_group_of_order_three() {
        let product = (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect()).collect();
        let s = FiniteInverseSemigroup::new(3, product, vec![0, 2, 1]).unwrap();
        let theta = wagner_preston(&s).unwrap();
        assert!(theta.iter().all(|t| t.len() == 3));
    }

    #[test]
    fn rejects_non_associative_table() {
        // x·y = y for the first row only; breaks associativity
        let product = vec![vec![0, 1], vec![0, 0]];
        assert!(FiniteInverseSemigroup::new(2, product, vec![0, 1]).is_err());
    }

    #[test]
    fn rejects_wrong_inverse_table() {
        let product = (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect()).collect();
        assert!(FiniteInverseSemigroup::new(3, product, vec![0, 1, 2]).is_err());
    }

    #[test]
    fn rejects_bad_shape() {
        assert!(FiniteInverseSemigroup::new(2, vec![vec![0, 0]], vec![0, 1]).is_err());
        assert!(FiniteInverseSemigroup::new(1, vec![vec![3]], vec![0]).is_err());
    }

    #[test]
    fn left_zero_band_is_not_inverse() {
        // x·y = x: every element is an inverse of every other.
        let product = vec![vec![0, 0], vec![1, 1]];
        assert!(FiniteInverseSemigroup::new(2, product, vec![0, 1]).is_err());
    }
}
