//! Finite-window checks of the pointwise convergence criterion in I(ℕ).

use serde::{Deserialize, Serialize};

use super::PartialBijection;
use crate::error::{malformed, Result};

/// The first terms of a sequence together with a candidate limit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceWindow {
    pub terms: Vec<PartialBijection>,
    pub claimed_limit: PartialBijection,
    /// Points `0..=window_bound` are checked.
    pub window_bound: u64,
}

impl SequenceWindow {
    pub fn new(
        terms: Vec<PartialBijection>,
        claimed_limit: PartialBijection,
        window_bound: u64,
    ) -> Result<Self> {
        if terms.is_empty() {
            return Err(malformed("a sequence window needs at least one term"));
        }
        Ok(Self {
            terms,
            claimed_limit,
            window_bound,
        })
    }
}

/// Which clause of the criterion failed. The `*-inverse` variants are the
/// same clauses read on the inverted sequence and limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConvergenceCondition {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    Ii,
    #[serde(rename = "i-inverse")]
    IInverse,
    #[serde(rename = "ii-inverse")]
    IiInverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RefutationWitness {
    pub point: u64,
    pub index: usize,
    pub condition: ConvergenceCondition,
}

/// Outcome of [`check_convergence`].
///
/// `Consistent` only says the window did not refute convergence; a finite
/// prefix never proves it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConvergenceVerdict {
    Consistent,
    Refuted { refutation_witness: RefutationWitness },
}

impl ConvergenceVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ConvergenceVerdict::Consistent)
    }

    pub fn witness(&self) -> Option<&RefutationWitness> {
        match self {
            ConvergenceVerdict::Consistent => None,
            ConvergenceVerdict::Refuted { refutation_witness } => Some(refutation_witness),
        }
    }
}

/// Clause (i) at `x` for one term: `x ∈ dom(f_n)` and `f_n(x) = f(x)`.
/// Clause (ii): `x ∉ dom(f_n)`.
fn clause_holds(term: &PartialBijection, limit: &PartialBijection, x: u64) -> (bool, bool) {
    match limit.apply(x) {
        Some(fx) => (true, term.apply(x) == Some(fx)),
        None => (false, !term.in_domain(x)),
    }
}

/// Checks the pointwise criterion on `0..=window_bound`.
///
/// A clause is satisfiable inside the window with its stabilization index
/// `n₀` in range iff the last term satisfies it, so a refutation always names
/// the last term. With `strict_inverse` the clauses are also applied to the
/// inverted sequence against the inverted limit, which is what membership in
/// the `w₂` sets requires.
pub fn check_convergence(window: &SequenceWindow, strict_inverse: bool) -> ConvergenceVerdict {
    let Some(last) = window.terms.last() else {
        return ConvergenceVerdict::Consistent;
    };
    let index = window.terms.len() - 1;
    let last_inv = last.inverse();
    let limit_inv = window.claimed_limit.inverse();

    for x in 0..=window.window_bound {
        let (in_dom, ok) = clause_holds(last, &window.claimed_limit, x);
        if !ok {
            let condition = if in_dom {
                ConvergenceCondition::I
            } else {
                ConvergenceCondition::Ii
            };
            return refuted(x, index, condition);
        }
        if strict_inverse {
            let (in_im, ok) = clause_holds(&last_inv, &limit_inv, x);
            if !ok {
                let condition = if in_im {
                    ConvergenceCondition::IInverse
                } else {
                    ConvergenceCondition::IiInverse
                };
                return refuted(x, index, condition);
            }
        }
    }
    ConvergenceVerdict::Consistent
}

fn refuted(point: u64, index: usize, condition: ConvergenceCondition) -> ConvergenceVerdict {
    ConvergenceVerdict::Refuted {
        refutation_witness: RefutationWitness {
            point,
            index,
            condition,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbij::partial_identity;

    /// Direct reading of the criterion: for each point, look for an `n₀` in
    /// the window from which the clause holds through the last term.
    fn stabilizes(terms: &[PartialBijection], holds: impl Fn(&PartialBijection) -> bool) -> bool {
        (0..terms.len()).any(|n0| terms[n0..].iter().all(&holds))
    }

    fn oracle(window: &SequenceWindow, strict: bool) -> bool {
        let lim = &window.claimed_limit;
        let inv_terms: Vec<_> = window.terms.iter().map(|t| t.inverse()).collect();
        let lim_inv = lim.inverse();
        (0..=window.window_bound).all(|x| {
            let forward = match lim.apply(x) {
                Some(fx) => stabilizes(&window.terms, |t| t.apply(x) == Some(fx)),
                None => stabilizes(&window.terms, |t| t.apply(x).is_none()),
            };
            let backward = !strict
                || match lim_inv.apply(x) {
                    Some(fx) => stabilizes(&inv_terms, |t| t.apply(x) == Some(fx)),
                    None => stabilizes(&inv_terms, |t| t.apply(x).is_none()),
                };
            forward && backward
        })
    }

    #[test]
    fn growing_identities_converge() {
        let terms = (0..10).map(|n| partial_identity(0..=n)).collect();
        let w = SequenceWindow::new(terms, partial_identity(0..=20), 5).unwrap();
        assert!(check_convergence(&w, true).is_consistent());
        assert!(check_convergence(&w, false).is_consistent());
        assert!(oracle(&w, true));
    }

    #[test]
    fn collapsing_sequence_separates_the_two_readings() {
        let terms = (0..10)
            .map(|n| PartialBijection::new([(n, 0)]).unwrap())
            .collect();
        let w = SequenceWindow::new(terms, PartialBijection::empty(), 3).unwrap();
        assert!(check_convergence(&w, false).is_consistent());
        assert!(oracle(&w, false));
        let verdict = check_convergence(&w, true);
        let witness = verdict.witness().unwrap();
        assert_eq!(witness.point, 0);
        assert_eq!(witness.condition, ConvergenceCondition::IiInverse);
        assert_eq!(witness.index, 9);
        assert!(!oracle(&w, true));
    }

    #[test]
    fn constant_sequence_is_consistent() {
        let f = PartialBijection::new([(0, 3), (2, 1), (7, 7)]).unwrap();
        let w = SequenceWindow::new(vec![f.clone(); 4], f, 10).unwrap();
        assert!(check_convergence(&w, true).is_consistent());
        assert!(check_convergence(&w, false).is_consistent());
    }

    #[test]
    fn value_mismatch_reports_condition_i() {
        let w = SequenceWindow::new(
            vec![PartialBijection::new([(1, 2)]).unwrap()],
            PartialBijection::new([(1, 3)]).unwrap(),
            4,
        )
        .unwrap();
        let v = check_convergence(&w, false);
        assert_eq!(
            v.witness().copied(),
            Some(RefutationWitness {
                point: 1,
                index: 0,
                condition: ConvergenceCondition::I
            })
        );
    }

    #[test]
    fn empty_window_rejected() {
        assert!(SequenceWindow::new(vec![], PartialBijection::empty(), 0).is_err());
    }

    #[test]
    fn verdict_json() {
        let v = ConvergenceVerdict::Refuted {
            refutation_witness: RefutationWitness {
                point: 0,
                index: 9,
                condition: ConvergenceCondition::IiInverse,
            },
        };
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(
            text,
            r#"{"status":"refuted","refutation_witness":{"point":0,"index":9,"condition":"ii-inverse"}}"#
        );
        assert_eq!(
            serde_json::to_string(&ConvergenceVerdict::Consistent).unwrap(),
            r#"{"status":"consistent"}"#
        );
    }
}
