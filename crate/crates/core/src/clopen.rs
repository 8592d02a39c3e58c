//! Clopen subsets of Cantor space `2^ℕ`.
//!
//! A clopen set is a finite union of cylinders `[w]` (all infinite binary
//! sequences extending the word `w`). It is stored as a canonical prefix
//! antichain: no word is a prefix of another, no sibling pair `w0, w1` is
//! present, and words are sorted lexicographically. Two values are therefore
//! equal exactly when they denote the same set.
//!
//! `B_d` is the finite Boolean algebra of unions of depth-`d` cylinders. Its
//! elements correspond to bitmasks over the `2^d` depth-`d` words (atom `i`
//! is the word spelling `i` in binary, most significant bit first), and
//! [`enumerate_base`] lists them in mask order.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{malformed, Error, Result};

/// Largest depth for which `B_d` may be materialized (`|B_4| = 65536`).
pub const MAX_BASE_DEPTH: usize = 4;

/// A finite binary word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<bool>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        Word(bits.into_iter().collect())
    }

    /// The depth-`depth` word spelling `index` in binary.
    pub fn from_index(index: u64, depth: usize) -> Self {
        Word((0..depth).rev().map(|k| (index >> k) & 1 == 1).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Whether `[self]` and `[other]` intersect.
    pub fn comparable(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    pub fn child(&self, bit: bool) -> Word {
        let mut bits = self.0.clone();
        bits.push(bit);
        Word(bits)
    }

    pub fn concat(&self, suffix: &[bool]) -> Word {
        let mut bits = self.0.clone();
        bits.extend_from_slice(suffix);
        Word(bits)
    }

    /// The suffix `s` with `self = prefix · s`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<&[bool]> {
        self.0.strip_prefix(prefix.0.as_slice())
    }

    /// Integer value of the bits, most significant first.
    fn index(&self) -> u64 {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(malformed(format!("{s:?} is not a binary word"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let text: String = self.0.iter().map(|&b| if b { '1' } else { '0' }).collect();
        s.serialize_str(&text)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Binary trie over cylinders; the working form for Boolean operations.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Empty,
    Full,
    Split(Box<Node>, Box<Node>),
}

impl Node {
    fn split(left: Node, right: Node) -> Node {
        match (&left, &right) {
            (Node::Empty, Node::Empty) => Node::Empty,
            (Node::Full, Node::Full) => Node::Full,
            _ => Node::Split(Box::new(left), Box::new(right)),
        }
    }

    fn from_words<'a>(words: impl IntoIterator<Item = &'a Word>) -> Node {
        let mut root = Node::Empty;
        for w in words {
            root = root.union(&Node::cylinder(w.bits()));
        }
        root
    }

    fn cylinder(bits: &[bool]) -> Node {
        match bits.split_first() {
            None => Node::Full,
            Some((&false, rest)) => Node::split(Node::cylinder(rest), Node::Empty),
            Some((&true, rest)) => Node::split(Node::Empty, Node::cylinder(rest)),
        }
    }

    fn union(&self, other: &Node) -> Node {
        match (self, other) {
            (Node::Full, _) | (_, Node::Full) => Node::Full,
            (Node::Empty, x) | (x, Node::Empty) => x.clone(),
            (Node::Split(a0, a1), Node::Split(b0, b1)) => Node::split(a0.union(b0), a1.union(b1)),
        }
    }

    fn intersect(&self, other: &Node) -> Node {
        match (self, other) {
            (Node::Empty, _) | (_, Node::Empty) => Node::Empty,
            (Node::Full, x) | (x, Node::Full) => x.clone(),
            (Node::Split(a0, a1), Node::Split(b0, b1)) => {
                Node::split(a0.intersect(b0), a1.intersect(b1))
            }
        }
    }

    fn complement(&self) -> Node {
        match self {
            Node::Empty => Node::Full,
            Node::Full => Node::Empty,
            Node::Split(a, b) => Node::split(a.complement(), b.complement()),
        }
    }

    fn collect_words(&self, prefix: &mut Vec<bool>, out: &mut Vec<Word>) {
        match self {
            Node::Empty => {}
            Node::Full => out.push(Word(prefix.clone())),
            Node::Split(l, r) => {
                prefix.push(false);
                l.collect_words(prefix, out);
                prefix.pop();
                prefix.push(true);
                r.collect_words(prefix, out);
                prefix.pop();
            }
        }
    }

    fn into_clopen(self) -> Clopen {
        let mut words = Vec::new();
        self.collect_words(&mut Vec::new(), &mut words);
        Clopen { words }
    }
}

/// A clopen subset of Cantor space in canonical prefix-antichain form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "RawClopen")]
pub struct Clopen {
    words: Vec<Word>,
}

#[derive(Deserialize)]
struct RawClopen {
    words: Vec<Word>,
}

impl From<RawClopen> for Clopen {
    fn from(raw: RawClopen) -> Self {
        canonicalize(&raw.words)
    }
}

impl Clopen {
    pub fn empty() -> Self {
        Clopen::default()
    }

    /// The whole space, `{ε}`.
    pub fn full() -> Self {
        Clopen {
            words: vec![Word::empty()],
        }
    }

    pub fn cylinder(word: Word) -> Self {
        Clopen { words: vec![word] }
    }

    /// Parses and canonicalizes a list of binary words.
    pub fn parse<S: AsRef<str>>(words: &[S]) -> Result<Self> {
        let words = words
            .iter()
            .map(|w| w.as_ref().parse())
            .collect::<Result<Vec<Word>>>()?;
        Ok(canonicalize(&words))
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.words.len() == 1 && self.words[0].is_empty()
    }

    /// Length of the longest word; the least `d` with `self ∈ B_d`.
    pub fn depth(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    fn node(&self) -> Node {
        Node::from_words(&self.words)
    }

    pub fn union(&self, other: &Clopen) -> Clopen {
        self.node().union(&other.node()).into_clopen()
    }

    pub fn intersect(&self, other: &Clopen) -> Clopen {
        self.node().intersect(&other.node()).into_clopen()
    }

    pub fn complement(&self) -> Clopen {
        self.node().complement().into_clopen()
    }

    pub fn minus(&self, other: &Clopen) -> Clopen {
        self.node().intersect(&other.node().complement()).into_clopen()
    }

    pub fn is_subset(&self, other: &Clopen) -> bool {
        self.minus(other).is_empty()
    }

    pub fn intersects(&self, other: &Clopen) -> bool {
        !self.intersect(other).is_empty()
    }

    /// Whether the whole cylinder `[w]` lies inside this set.
    pub fn contains_cylinder(&self, w: &Word) -> bool {
        self.words.iter().any(|v| v.is_prefix_of(w))
    }

    /// Bitmask of the depth-`d` atoms making up this set, if it lies in `B_d`.
    pub fn to_mask(&self, d: usize) -> Option<u64> {
        if d > 6 || self.depth() > d {
            return None;
        }
        let mut mask = 0u64;
        for w in &self.words {
            let spread = d - w.len();
            let first = w.index() << spread;
            for atom in first..first + (1u64 << spread) {
                mask |= 1 << atom;
            }
        }
        Some(mask)
    }

    /// Membership bits of the depth-`d` atoms, packed 64 to a block.
    pub(crate) fn atom_bits(&self, d: usize) -> Option<Vec<u64>> {
        if d > 16 || self.depth() > d {
            return None;
        }
        let mut bits = vec![0u64; (1usize << d).div_ceil(64)];
        for w in &self.words {
            let spread = d - w.len();
            let first = w.index() << spread;
            for atom in first..first + (1u64 << spread) {
                bits[(atom / 64) as usize] |= 1 << (atom % 64);
            }
        }
        Some(bits)
    }

    /// Inverse of [`Clopen::to_mask`].
    pub fn from_mask(mask: u64, d: usize) -> Clopen {
        let atoms: Vec<Word> = (0..1u64 << d)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| Word::from_index(i, d))
            .collect();
        canonicalize(&atoms)
    }
}

impl fmt::Display for Clopen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return f.write_str("∅");
        }
        f.write_str("{")?;
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Clopen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Absorbs words covered by a prefix and merges sibling pairs to a fixpoint.
pub fn canonicalize(words: &[Word]) -> Clopen {
    Node::from_words(words).into_clopen()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeOp {
    Union,
    Intersect,
    Complement,
    Minus,
}

pub fn lattice_op(kind: LatticeOp, a: &Clopen, b: Option<&Clopen>) -> Result<Clopen> {
    let need_b = || b.ok_or_else(|| malformed(format!("{kind:?} needs a second operand")));
    Ok(match kind {
        LatticeOp::Union => a.union(need_b()?),
        LatticeOp::Intersect => a.intersect(need_b()?),
        LatticeOp::Minus => a.minus(need_b()?),
        LatticeOp::Complement => a.complement(),
    })
}

pub fn subset(a: &Clopen, b: &Clopen) -> bool {
    a.is_subset(b)
}

fn check_depth(d: usize) -> Result<()> {
    if d > MAX_BASE_DEPTH {
        return Err(Error::ResourceLimit(format!(
            "B_{d} has 2^{} elements; depth is limited to {MAX_BASE_DEPTH}",
            1u64 << d
        )));
    }
    Ok(())
}

/// All of `B_d`, in mask order: `2^(2^d)` sets.
pub fn enumerate_base(d: usize) -> Result<Vec<Clopen>> {
    check_depth(d)?;
    let count = 1u64 << (1u64 << d);
    Ok((0..count).map(|m| Clopen::from_mask(m, d)).collect())
}

/// Mask of the depth-`d` atoms contained in `v`.
fn atoms_inside(v: &Clopen, d: usize) -> u64 {
    (0..1u64 << d)
        .filter(|&i| v.contains_cylinder(&Word::from_index(i, d)))
        .fold(0, |m, i| m | 1 << i)
}

/// `Ṽ ∩ B_d = {u ∈ B_d : u ⊆ V}`.
pub fn tilde_truncated(v: &Clopen, d: usize) -> Result<BTreeSet<Clopen>> {
    check_depth(d)?;
    let allowed = atoms_inside(v, d);
    Ok(submasks(allowed).map(|m| Clopen::from_mask(m, d)).collect())
}

/// Every submask of `mask`, including `0` and `mask` itself.
fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == 0 {
            None
        } else {
            Some((current - 1) & mask)
        };
        Some(current)
    })
}

fn family_masks<'a>(family: impl IntoIterator<Item = &'a Clopen>, d: usize) -> Result<Vec<u64>> {
    if d > 6 {
        return Err(Error::ResourceLimit(format!("depth {d} is beyond mask range")));
    }
    family
        .into_iter()
        .map(|u| {
            u.to_mask(d)
                .ok_or_else(|| malformed(format!("{u} is not an element of B_{d}")))
        })
        .collect()
}

/// Membership in the depth-`d` reflection of `𝓛`: nonempty, contains `∅`,
/// downward closed within `B_d`, closed under `∪` and `∩`.
pub fn is_hereditary_sublattice<'a>(
    family: impl IntoIterator<Item = &'a Clopen>,
    d: usize,
) -> Result<bool> {
    let masks = family_masks(family, d)?;
    Ok(masks_form_hereditary_sublattice(&masks))
}

/// A family containing `∅`, downward closed and closed under `∪`/`∩` is the
/// powerset of its union, and conversely.
pub(crate) fn masks_form_hereditary_sublattice(masks: &[u64]) -> bool {
    let set: HashSet<u64> = masks.iter().copied().collect();
    let top = set.iter().fold(0, |acc, &m| acc | m);
    top.count_ones() < 64 && set.len() as u64 == 1u64 << top.count_ones()
}

/// Whether the family is downward closed within `B_d`.
pub fn is_down_closed<'a>(family: impl IntoIterator<Item = &'a Clopen>, d: usize) -> Result<bool> {
    let masks = family_masks(family, d)?;
    let set: HashSet<u64> = masks.iter().copied().collect();
    Ok(set.iter().all(|&v| submasks(v).all(|u| set.contains(&u))))
}

/// Finite-family form of the union criterion for `𝓒`: the union of every
/// finite subfamily of `L` (the empty family included) lies in `L`. Within
/// `B_d` every such union is again in `B_d`.
pub fn carac_c_check<'a>(family: impl IntoIterator<Item = &'a Clopen>, d: usize) -> Result<bool> {
    let masks = family_masks(family, d)?;
    let members: HashSet<u64> = masks.iter().copied().collect();
    let mut unions: HashSet<u64> = HashSet::from([0]);
    for &m in &members {
        let grown: Vec<u64> = unions.iter().map(|&u| u | m).collect();
        unions.extend(grown);
    }
    Ok(unions.is_subset(&members))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FellKind {
    /// `V⁻ = {A : A ∩ V ≠ ∅}`.
    #[serde(rename = "V_minus")]
    VMinus,
    /// `V⁺ = {A : A ⊆ V}`.
    #[serde(rename = "V_plus")]
    VPlus,
}

/// Membership of the closed set `k` in a Fell subbasic set.
pub fn fell_membership(k: &Clopen, kind: FellKind, v: &Clopen) -> bool {
    match kind {
        FellKind::VMinus => k.intersects(v),
        FellKind::VPlus => k.is_subset(v),
    }
}
