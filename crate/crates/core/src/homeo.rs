//! Clopen-domain partial homeomorphisms of Cantor space given by prefix
//! exchange.
//!
//! A [`PrefixMap`] is a finite list of rules `dw ↦ iw` between two prefix
//! antichains. It denotes the homeomorphism `dw·σ ↦ iw·σ` (for every infinite
//! suffix `σ`) from `⋃[dw]` onto `⋃[iw]`. Rules are kept reduced (no sibling
//! pair `w0 ↦ v0, w1 ↦ v1`) and sorted by domain word, so structural equality
//! is equality of the denoted maps.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clopen::{canonicalize, tilde_truncated, Clopen, Word};
use crate::error::{malformed, Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "RawPrefixMap")]
pub struct PrefixMap {
    rules: Vec<(Word, Word)>,
}

#[derive(Deserialize)]
struct RawPrefixMap {
    rules: Vec<(Word, Word)>,
}

impl TryFrom<RawPrefixMap> for PrefixMap {
    type Error = Error;

    fn try_from(raw: RawPrefixMap) -> Result<Self> {
        PrefixMap::new(raw.rules)
    }
}

fn prefix_free(words: &[&Word]) -> Option<(Word, Word)> {
    let mut sorted: Vec<&Word> = words.to_vec();
    sorted.sort();
    // In lexicographic order a prefix sorts immediately before some extension
    // of it, so adjacent pairs suffice.
    sorted
        .windows(2)
        .find(|p| p[0].is_prefix_of(p[1]))
        .map(|p| (p[0].clone(), p[1].clone()))
}

impl PrefixMap {
    /// Validates that both sides are prefix-free, then reduces.
    pub fn new(rules: impl IntoIterator<Item = (Word, Word)>) -> Result<Self> {
        let mut rules: Vec<(Word, Word)> = rules.into_iter().collect();
        rules.sort();
        rules.dedup();
        let dom: Vec<&Word> = rules.iter().map(|(d, _)| d).collect();
        if let Some((a, b)) = prefix_free(&dom) {
            return Err(malformed(format!("domain words {a} and {b} overlap")));
        }
        let im: Vec<&Word> = rules.iter().map(|(_, i)| i).collect();
        if let Some((a, b)) = prefix_free(&im) {
            return Err(malformed(format!("image words {a} and {b} overlap")));
        }
        Ok(Self::reduce(rules))
    }

    /// Parses rules given as pairs of binary strings.
    pub fn parse<S: AsRef<str>>(rules: &[(S, S)]) -> Result<Self> {
        let rules = rules
            .iter()
            .map(|(d, i)| Ok((d.as_ref().parse()?, i.as_ref().parse()?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rules)
    }

    /// Merges sibling rules to a fixpoint. Input must be prefix-free on both
    /// sides.
    fn reduce(mut rules: Vec<(Word, Word)>) -> Self {
        loop {
            rules.sort();
            let mut merged = false;
            let mut out: Vec<(Word, Word)> = Vec::with_capacity(rules.len());
            let mut i = 0;
            while i < rules.len() {
                if i + 1 < rules.len() {
                    if let Some(parent) = sibling_merge(&rules[i], &rules[i + 1]) {
                        out.push(parent);
                        merged = true;
                        i += 2;
                        continue;
                    }
                }
                out.push(rules[i].clone());
                i += 1;
            }
            rules = out;
            if !merged {
                return Self { rules };
            }
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The identity on `X`, `{ε ↦ ε}`.
    pub fn identity() -> Self {
        Self {
            rules: vec![(Word::empty(), Word::empty())],
        }
    }

    /// The partial identity `1_u`.
    pub fn partial_identity(u: &Clopen) -> Self {
        Self {
            rules: u.words().iter().map(|w| (w.clone(), w.clone())).collect(),
        }
    }

    pub fn rules(&self) -> &[(Word, Word)] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn domain(&self) -> Clopen {
        canonicalize(&self.rules.iter().map(|(d, _)| d.clone()).collect::<Vec<_>>())
    }

    pub fn image(&self) -> Clopen {
        canonicalize(&self.rules.iter().map(|(_, i)| i.clone()).collect::<Vec<_>>())
    }

    /// Longest domain word; `decode(encode(h, d)) = h` needs this to be `≤ d`.
    pub fn rule_depth(&self) -> usize {
        self.rules.iter().map(|(d, _)| d.len()).max().unwrap_or(0)
    }

    /// Longest word on either side.
    pub fn max_word_len(&self) -> usize {
        self.rules
            .iter()
            .map(|(d, i)| d.len().max(i.len()))
            .max()
            .unwrap_or(0)
    }

    /// `self ∘ g`: apply `g`, then `self`. Each rule of `g` is refined
    /// against the rules of `self` whose domain word is comparable with its
    /// image word.
    pub fn compose(&self, g: &PrefixMap) -> PrefixMap {
        let mut rules = Vec::new();
        for (gd, gi) in &g.rules {
            for (fd, fi) in &self.rules {
                if let Some(rest) = fd.strip_prefix(gi) {
                    // g's image cylinder is split further by f
                    rules.push((gd.concat(rest), fi.clone()));
                } else if let Some(rest) = gi.strip_prefix(fd) {
                    rules.push((gd.clone(), fi.concat(rest)));
                }
            }
        }
        Self::reduce(rules)
    }

    pub fn inverse(&self) -> PrefixMap {
        Self::reduce(self.rules.iter().map(|(d, i)| (i.clone(), d.clone())).collect())
    }

    /// Partial identities are exactly the idempotents.
    pub fn is_idempotent(&self) -> bool {
        self.rules.iter().all(|(d, i)| d == i)
    }

    /// `h[u ∩ dom h]`.
    pub fn image_of(&self, u: &Clopen) -> Clopen {
        let mut out = Vec::new();
        for (d, i) in &self.rules {
            for w in u.words() {
                if let Some(rest) = w.strip_prefix(d) {
                    out.push(i.concat(rest));
                } else if w.is_prefix_of(d) {
                    out.push(i.clone());
                }
            }
        }
        canonicalize(&out)
    }

    /// `h⁻¹[v ∩ im h]`.
    pub fn preimage_of(&self, v: &Clopen) -> Clopen {
        self.inverse().image_of(v)
    }

    /// Evaluates the map on the cylinder named by a finite prefix of a point.
    pub fn apply_point(&self, x: &Word) -> PointImage {
        for (d, i) in &self.rules {
            if let Some(rest) = x.strip_prefix(d) {
                return PointImage::Determined(i.concat(rest));
            }
        }
        if self.rules.iter().any(|(d, _)| x.is_prefix_of(d)) {
            PointImage::NeedsMoreInput
        } else {
            PointImage::OutsideDomain
        }
    }

    /// Membership in a τ_hco neighborhood.
    pub fn hco_membership(&self, query: &HcoQuery) -> bool {
        match query {
            HcoQuery::Nbhd { k, v } => k.is_subset(&self.domain()) && self.image_of(k).is_subset(v),
            HcoQuery::InverseNbhd { k, v } => k.is_subset(&self.image_of(v)),
            HcoQuery::DMinus { v } => self.domain().complement().intersects(v),
            HcoQuery::IMinus { v } => self.inverse().hco_membership(&HcoQuery::DMinus { v: v.clone() }),
            HcoQuery::Equality { v, w } => {
                v.is_subset(&self.domain()) && w.is_subset(&self.image()) && self.image_of(v) == *w
            }
        }
    }

    /// Checks `f ∈ Γ(X, 𝓑)` with the quantifiers cut down to `B_d`: for every
    /// `U ∈ B_d` inside the domain (resp. image) the image `V = h[U]` (resp.
    /// preimage) is a clopen with `h ∈ E(U; V)` (resp. `h⁻¹ ∈ E(U'; V')`).
    pub fn is_gamma_base_member(&self, d: usize) -> Result<bool> {
        if d > 3 {
            return Err(Error::ResourceLimit(format!("depth {d} exceeds 3")));
        }
        let inv = self.inverse();
        let forward = tilde_truncated(&self.domain(), d)?.into_iter().all(|u| {
            let v = self.image_of(&u);
            self.hco_membership(&HcoQuery::Equality { v: u, w: v })
        });
        let backward = tilde_truncated(&self.image(), d)?.into_iter().all(|u| {
            let v = inv.image_of(&u);
            inv.hco_membership(&HcoQuery::Equality { v: u, w: v })
        });
        Ok(forward && backward)
    }
}

fn sibling_merge(a: &(Word, Word), b: &(Word, Word)) -> Option<(Word, Word)> {
    let (ad, ai) = a;
    let (bd, bi) = b;
    let (&adl, ad_parent) = ad.bits().split_last()?;
    let (&bdl, bd_parent) = bd.bits().split_last()?;
    let (&ail, ai_parent) = ai.bits().split_last()?;
    let (&bil, bi_parent) = bi.bits().split_last()?;
    let siblings = ad_parent == bd_parent && ai_parent == bi_parent;
    if siblings && !adl && bdl && !ail && bil {
        Some((
            Word::from_bits(ad_parent.iter().copied()),
            Word::from_bits(ai_parent.iter().copied()),
        ))
    } else {
        None
    }
}

impl fmt::Display for PrefixMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (d, w)) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}↦{w}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for PrefixMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Result of evaluating a prefix map on a finite prefix of a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "image_prefix", rename_all = "snake_case")]
pub enum PointImage {
    Determined(Word),
    NeedsMoreInput,
    OutsideDomain,
}

/// τ_hco neighborhoods, for clopen (hence compact) `K` and open `V`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum HcoQuery {
    /// `⟨K;V⟩`: `K ⊆ dom f` and `f[K] ⊆ V`.
    #[serde(rename = "nbhd")]
    Nbhd { k: Clopen, v: Clopen },
    /// `⟨K;V⟩⁻¹`: `K ⊆ f[V ∩ dom f]`.
    #[serde(rename = "nbhd_inverse")]
    InverseNbhd { k: Clopen, v: Clopen },
    /// `D⁻¹(V⁻)`: the complement of the domain meets `V`.
    #[serde(rename = "D_minus")]
    DMinus { v: Clopen },
    /// `I⁻¹(V⁻)`: the complement of the image meets `V`.
    #[serde(rename = "I_minus")]
    IMinus { v: Clopen },
    /// `E(V;W)`: `V ⊆ dom f`, `W ⊆ im f` and `f[V] = W`.
    #[serde(rename = "E")]
    Equality { v: Clopen, w: Clopen },
}

pub fn pm_compose(f: &PrefixMap, g: &PrefixMap) -> PrefixMap {
    f.compose(g)
}

pub fn pm_invert(f: &PrefixMap) -> PrefixMap {
    f.inverse()
}

pub fn image_clopen(h: &PrefixMap, u: &Clopen) -> Clopen {
    h.image_of(u)
}
