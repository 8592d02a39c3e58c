//! Finite windows onto partial isomorphisms of the clopen lattice.
//!
//! An element of S(𝓑) is an order isomorphism between two hereditary,
//! ∪/∩-closed families of clopen sets. A [`TruncatedLatticeMap`] keeps the
//! part of such a map whose keys lie in `B_d`. Values are not truncated: the
//! image of a depth-`d` set under a prefix exchange can be deeper than `d`.
//!
//! [`encode`] sends a prefix map `h` to the window `u ↦ h[u]`, and [`decode`]
//! rebuilds `h` from the images of the depth-`d` cylinders (the hat map).

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::clopen::{self, is_hereditary_sublattice, tilde_truncated, Clopen, Word};
use crate::error::{malformed, Error, Result};
use crate::homeo::{HcoQuery, PrefixMap};

/// Largest window depth accepted by [`encode`] and the checks built on it.
pub const MAX_WINDOW_DEPTH: usize = 3;

/// Outcome of a verification: either it holds, or a witness shows why not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check<W> {
    Holds,
    Fails(W),
}

impl<W> Check<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Check::Holds => None,
            Check::Fails(w) => Some(w),
        }
    }
}

/// A key at which two windows (or a window and a map) disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeyWitness {
    pub key: Clopen,
    pub detail: String,
}

impl KeyWitness {
    fn new(key: &Clopen, detail: impl Into<String>) -> Self {
        Self {
            key: key.clone(),
            detail: detail.into(),
        }
    }
}

/// A partial order isomorphism restricted to keys in `B_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWindow", into = "RawWindow")]
pub struct TruncatedLatticeMap {
    depth: usize,
    entries: BTreeMap<Clopen, Clopen>,
}

#[derive(Serialize, Deserialize)]
struct RawWindow {
    depth: usize,
    entries: Vec<(Clopen, Clopen)>,
}

impl TryFrom<RawWindow> for TruncatedLatticeMap {
    type Error = Error;

    fn try_from(raw: RawWindow) -> Result<Self> {
        TruncatedLatticeMap::new(raw.depth, raw.entries)
    }
}

impl From<TruncatedLatticeMap> for RawWindow {
    fn from(m: TruncatedLatticeMap) -> Self {
        RawWindow {
            depth: m.depth,
            entries: m.entries.into_iter().collect(),
        }
    }
}

impl TruncatedLatticeMap {
    /// Checks keys lie in `B_depth`, the map is injective, and a nonempty map
    /// sends `∅` to `∅`.
    pub fn new(depth: usize, entries: impl IntoIterator<Item = (Clopen, Clopen)>) -> Result<Self> {
        if depth > 6 {
            return Err(Error::ResourceLimit(format!("window depth {depth} exceeds 6")));
        }
        let mut map = BTreeMap::new();
        for (k, v) in entries {
            if k.depth() > depth {
                return Err(malformed(format!("key {k} is not in B_{depth}")));
            }
            if let Some(old) = map.insert(k.clone(), v.clone()) {
                if old != v {
                    return Err(malformed(format!("key {k} has two values")));
                }
            }
        }
        let values: HashSet<&Clopen> = map.values().collect();
        if values.len() != map.len() {
            return Err(malformed("window is not injective"));
        }
        if !map.is_empty() && map.get(&Clopen::empty()) != Some(&Clopen::empty()) {
            return Err(malformed("a nonempty window must send ∅ to ∅"));
        }
        Ok(Self {
            depth,
            entries: map,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn entries(&self) -> &BTreeMap<Clopen, Clopen> {
        &self.entries
    }

    pub fn get(&self, key: &Clopen) -> Option<&Clopen> {
        self.entries.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &Clopen> {
        self.entries.keys()
    }

    pub fn values(&self) -> impl Iterator<Item = &Clopen> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Union of all keys.
    pub fn key_support(&self) -> Clopen {
        self.keys().fold(Clopen::empty(), |acc, k| acc.union(k))
    }

    /// Union of all values.
    pub fn value_support(&self) -> Clopen {
        self.values().fold(Clopen::empty(), |acc, v| acc.union(v))
    }
}

pub fn is_order_iso(m: &TruncatedLatticeMap) -> bool {
    if let Some((keys, values)) = entry_masks(m) {
        return keys.iter().zip(&values).all(|(u, fu)| {
            keys.iter()
                .zip(&values)
                .all(|(v, fv)| bits_subset(u, v) == bits_subset(fu, fv))
        });
    }
    let entries: Vec<(&Clopen, &Clopen)> = m.entries.iter().collect();
    entries.iter().all(|(u, fu)| {
        entries
            .iter()
            .all(|(v, fv)| u.is_subset(v) == fu.is_subset(fv))
    })
}

type Bits = Vec<u64>;

/// Keys and values as atom bitsets over one common depth, when that depth is
/// small enough.
fn entry_masks(m: &TruncatedLatticeMap) -> Option<(Vec<Bits>, Vec<Bits>)> {
    let depth = m.entries.iter().map(|(k, v)| k.depth().max(v.depth())).max().unwrap_or(0);
    let keys = m.keys().map(|k| k.atom_bits(depth)).collect::<Option<Vec<_>>>()?;
    let values = m.values().map(|v| v.atom_bits(depth)).collect::<Option<Vec<_>>>()?;
    Some((keys, values))
}

fn bits_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn bits_zip(a: &Bits, b: &Bits, op: impl Fn(u64, u64) -> u64) -> Bits {
    a.iter().zip(b).map(|(&x, &y)| op(x, y)).collect()
}

fn is_value_sublattice(m: &TruncatedLatticeMap) -> bool {
    if let Some((_, values)) = entry_masks(m) {
        if values.iter().all(|v| v.len() == 1) {
            let set: HashSet<u64> = values.iter().map(|v| v[0]).collect();
            return set.contains(&0)
                && set
                    .iter()
                    .all(|&a| set.iter().all(|&b| set.contains(&(a | b)) && set.contains(&(a & b))));
        }
        let set: HashSet<&Bits> = values.iter().collect();
        return set.iter().any(|v| v.iter().all(|&x| x == 0))
            && set.iter().all(|a| {
                set.iter().all(|b| {
                    set.contains(&bits_zip(a, b, |x, y| x | y)) && set.contains(&bits_zip(a, b, |x, y| x & y))
                })
            });
    }
    let values: HashSet<&Clopen> = m.values().collect();
    values.contains(&Clopen::empty())
        && values.iter().all(|a| {
            values
                .iter()
                .all(|b| values.contains(&a.union(b)) && values.contains(&a.intersect(b)))
        })
}

/// Window onto S(𝓑): an order isomorphism whose keys form a hereditary
/// ∪/∩-closed family in `B_d` and whose values form a ∪/∩-closed family
/// containing `∅`.
pub fn is_sb_member(m: &TruncatedLatticeMap) -> bool {
    is_order_iso(m)
        && is_hereditary_sublattice(m.keys(), m.depth).unwrap_or(false)
        && is_value_sublattice(m)
}

/// Whether keys and values are both hereditary sublattices of `B_d`.
pub fn is_balanced(m: &TruncatedLatticeMap) -> bool {
    is_sb_member(m) && is_hereditary_sublattice(m.values(), m.depth).unwrap_or(false)
}

/// Topological closure of a base set. Clopen sets are closed.
fn closure(u: &Clopen) -> &Clopen {
    u
}

/// The S₁ condition `cl(v) ⊆ u ⟺ cl(M(v)) ⊆ M(u)` over all key pairs.
pub fn is_s1_member(m: &TruncatedLatticeMap) -> bool {
    m.entries.iter().all(|(u, mu)| {
        m.entries
            .iter()
            .all(|(v, mv)| closure(v).is_subset(u) == closure(mv).is_subset(mu))
    })
}

/// Finite-family completeness: for every finite family of keys, its union is
/// a key iff the union of its images is a value.
pub fn is_complete_finite(m: &TruncatedLatticeMap) -> bool {
    let keys: HashSet<&Clopen> = m.keys().collect();
    let values: HashSet<&Clopen> = m.values().collect();
    let mut reachable: BTreeSet<(Clopen, Clopen)> = BTreeSet::from([(Clopen::empty(), Clopen::empty())]);
    for (k, v) in &m.entries {
        let grown: Vec<(Clopen, Clopen)> = reachable
            .iter()
            .map(|(a, b)| (a.union(k), b.union(v)))
            .collect();
        reachable.extend(grown);
    }
    reachable
        .iter()
        .all(|(ku, vu)| keys.contains(ku) == values.contains(vu))
}

/// `{M(u) : u ∈ L ∩ keys(M)}`, checked to be a hereditary sublattice of `B_d`.
///
/// Needs a balanced window (both sides hereditary in `B_d`) and `L` itself a
/// hereditary sublattice of `B_d`.
pub fn hereditary_image(m: &TruncatedLatticeMap, family: &BTreeSet<Clopen>) -> Result<BTreeSet<Clopen>> {
    if !is_balanced(m) {
        return Err(malformed(
            "hereditary_image needs a window whose keys and values are hereditary sublattices of B_d",
        ));
    }
    if !is_hereditary_sublattice(family, m.depth)? {
        return Err(malformed("L is not a hereditary sublattice of B_d"));
    }
    let image: BTreeSet<Clopen> = family
        .iter()
        .filter_map(|u| m.get(u).cloned())
        .collect();
    if !is_hereditary_sublattice(&image, m.depth)? {
        return Err(Error::Consistency(
            "image of a hereditary family is not hereditary".into(),
        ));
    }
    Ok(image)
}

fn check_window_depth(d: usize) -> Result<()> {
    if d > MAX_WINDOW_DEPTH {
        return Err(Error::ResourceLimit(format!(
            "window depth {d} exceeds {MAX_WINDOW_DEPTH}"
        )));
    }
    Ok(())
}

/// `u ↦ h[u]` for every `u ∈ B_d` inside `dom h`.
pub fn encode(h: &PrefixMap, d: usize) -> Result<TruncatedLatticeMap> {
    check_window_depth(d)?;
    let entries = tilde_truncated(&h.domain(), d)?
        .into_iter()
        .map(|u| {
            let v = h.image_of(&u);
            (u, v)
        })
        .collect::<Vec<_>>();
    TruncatedLatticeMap::new(d, entries)
}

/// The prefix map whose images agree with the window.
///
/// Each depth-`d` cylinder inside the key support must map to a single
/// cylinder; those pairs are the rules. The result is then checked against
/// every key.
pub fn decode(m: &TruncatedLatticeMap) -> Result<PrefixMap> {
    if !is_sb_member(m) {
        return Err(malformed("decode needs a window onto S(𝓑)"));
    }
    let d = m.depth;
    let support = m.key_support();
    let mut rules = Vec::new();
    for i in 0..1u64 << d {
        let atom = Word::from_index(i, d);
        if !support.contains_cylinder(&atom) {
            continue;
        }
        let key = Clopen::cylinder(atom.clone());
        let value = m.get(&key).ok_or_else(|| Error::Inconsistent {
            witness: key.to_string(),
            reason: "cylinder inside the key support is missing".into(),
        })?;
        match value.words() {
            [single] => rules.push((atom, single.clone())),
            _ => {
                return Err(Error::Inconsistent {
                    witness: key.to_string(),
                    reason: format!("cylinder maps to {value}, which is not a single cylinder"),
                })
            }
        }
    }
    let h = PrefixMap::new(rules).map_err(|e| Error::Inconsistent {
        witness: support.to_string(),
        reason: e.to_string(),
    })?;
    for (u, v) in &m.entries {
        let image = h.image_of(u);
        if image != *v {
            return Err(Error::Inconsistent {
                witness: u.to_string(),
                reason: format!("cylinder rules send it to {image}, window says {v}"),
            });
        }
    }
    Ok(h)
}

/// Window composition `F ∘ G` under the I(𝓑) rule: keys `u` of `G` with
/// `G(u) ⊆ ⋃ keys(F)`, sent to `F(G(u))`. When `G(u)` is deeper than the
/// window of `F`, `F(G(u))` is read off the hat map of `F`.
pub fn compose_windows(f: &TruncatedLatticeMap, g: &TruncatedLatticeMap) -> Result<TruncatedLatticeMap> {
    let f_support = f.key_support();
    let mut hat: Option<PrefixMap> = None;
    let mut entries = Vec::new();
    for (u, gu) in &g.entries {
        if !gu.is_subset(&f_support) {
            continue;
        }
        let value = match f.get(gu) {
            Some(v) => v.clone(),
            None => {
                if hat.is_none() {
                    hat = Some(decode(f)?);
                }
                hat.as_ref().map(|h| h.image_of(gu)).unwrap_or_default()
            }
        };
        entries.push((u.clone(), value));
    }
    TruncatedLatticeMap::new(g.depth, entries)
}

fn first_difference(a: &TruncatedLatticeMap, b: &TruncatedLatticeMap) -> Option<KeyWitness> {
    let keys: BTreeSet<&Clopen> = a.keys().chain(b.keys()).collect();
    keys.into_iter().find_map(|k| match (a.get(k), b.get(k)) {
        (Some(x), Some(y)) if x == y => None,
        (x, y) => Some(KeyWitness::new(
            k,
            format!(
                "{} vs {}",
                x.map_or("undefined".to_string(), |c| c.to_string()),
                y.map_or("undefined".to_string(), |c| c.to_string())
            ),
        )),
    })
}

/// First depth-`d` cylinder on which two prefix maps disagree.
fn map_difference(a: &PrefixMap, b: &PrefixMap, d: usize) -> KeyWitness {
    let depth = d.max(a.max_word_len()).max(b.max_word_len());
    for i in 0..1u64 << depth.min(12) {
        let key = Clopen::cylinder(Word::from_index(i, depth.min(12)));
        if a.image_of(&key) != b.image_of(&key) {
            return KeyWitness::new(&key, format!("{a} vs {b}"));
        }
    }
    KeyWitness::new(&Clopen::empty(), format!("{a} vs {b}"))
}

/// Checks that encoding turns map composition into window composition, and
/// that decoding inverts encoding for `f`, `g` and (when its rules fit in
/// depth `d`) `f ∘ g`.
pub fn phi_homomorphism_check(f: &PrefixMap, g: &PrefixMap, d: usize) -> Result<Check<KeyWitness>> {
    check_window_depth(d)?;
    for (name, h) in [("f", f), ("g", g)] {
        if h.rule_depth() > d {
            return Err(malformed(format!(
                "{name} has rules of depth {} > {d}",
                h.rule_depth()
            )));
        }
    }
    let wf = encode(f, d)?;
    let wg = encode(g, d)?;
    let fg = f.compose(g);
    let direct = encode(&fg, d)?;
    let composed = match compose_windows(&wf, &wg) {
        Ok(w) => w,
        Err(Error::Inconsistent { witness, reason }) => {
            return Ok(Check::Fails(KeyWitness {
                key: Clopen::empty(),
                detail: format!("window of f does not decode at {witness}: {reason}"),
            }))
        }
        Err(e) => return Err(e),
    };
    if let Some(w) = first_difference(&direct, &composed) {
        return Ok(Check::Fails(w));
    }
    for (h, w) in [(f, &wf), (g, &wg)] {
        match decode(w) {
            Ok(back) if back == *h => {}
            Ok(back) => return Ok(Check::Fails(map_difference(h, &back, d))),
            Err(e) => return Ok(Check::Fails(KeyWitness::new(&Clopen::empty(), e.to_string()))),
        }
    }
    if fg.rule_depth() <= d {
        match decode(&direct) {
            Ok(back) if back == fg => {}
            Ok(back) => return Ok(Check::Fails(map_difference(&fg, &back, d))),
            Err(e) => return Ok(Check::Fails(KeyWitness::new(&Clopen::empty(), e.to_string()))),
        }
    }
    Ok(Check::Holds)
}

/// Which of the three correspondences failed, and for which map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrespondenceWitness {
    pub map: PrefixMap,
    /// 1: `v(o,p)`, 2: `w₁(o)`, 3: `w₂(o)`.
    pub clause: u8,
}

/// For each `h` in the sample, with `M = encode(h, d)`:
///
/// 1. `o ∈ keys(M) ∧ M(o) = p` iff `h ∈ ⟨o;p⟩ ∩ ⟨p;o⟩⁻¹` and `h[o] = p`;
/// 2. `o ∉ keys(M)` iff `h ∈ D⁻¹(o⁻)`;
/// 3. `o` is not in the image family iff `h ∈ I⁻¹(o⁻)`.
///
/// The image family at depth `d` is read from the window of `h⁻¹`.
pub fn neighborhood_correspondence_check(
    o: &Clopen,
    p: &Clopen,
    sample: &[PrefixMap],
    d: usize,
) -> Result<Check<CorrespondenceWitness>> {
    check_window_depth(d)?;
    for x in [o, p] {
        if x.depth() > d {
            return Err(malformed(format!("{x} is not in B_{d}")));
        }
    }
    if let Some(h) = sample.iter().find(|h| h.rule_depth() > d) {
        return Err(malformed(format!("{h} has rules deeper than {d}")));
    }
    for h in sample {
        let m = encode(h, d)?;
        let m_inv = encode(&h.inverse(), d)?;

        let in_v = m.get(o) == Some(p);
        let nbhds = h.hco_membership(&HcoQuery::Nbhd {
            k: o.clone(),
            v: p.clone(),
        }) && h.hco_membership(&HcoQuery::InverseNbhd {
            k: p.clone(),
            v: o.clone(),
        }) && h.image_of(o) == *p;
        if in_v != nbhds {
            return Ok(Check::Fails(CorrespondenceWitness {
                map: h.clone(),
                clause: 1,
            }));
        }

        let in_w1 = m.get(o).is_none();
        if in_w1 != h.hco_membership(&HcoQuery::DMinus { v: o.clone() }) {
            return Ok(Check::Fails(CorrespondenceWitness {
                map: h.clone(),
                clause: 2,
            }));
        }

        let in_w2 = m_inv.get(o).is_none();
        if in_w2 != h.hco_membership(&HcoQuery::IMinus { v: o.clone() }) {
            return Ok(Check::Fails(CorrespondenceWitness {
                map: h.clone(),
                clause: 3,
            }));
        }
    }
    Ok(Check::Holds)
}

/// With `h = decode(M)`, checks `h[u] = M(u)` for every key `u`.
pub fn lemma_fhat_check(m: &TruncatedLatticeMap) -> Result<Check<Clopen>> {
    let h = decode(m)?;
    for (u, v) in &m.entries {
        if h.image_of(u) != *v {
            return Ok(Check::Fails(u.clone()));
        }
    }
    Ok(Check::Holds)
}

/// Window onto the identity on `B_d`.
pub fn identity_window(d: usize) -> Result<TruncatedLatticeMap> {
    let entries = clopen::enumerate_base(d)?.into_iter().map(|u| (u.clone(), u));
    TruncatedLatticeMap::new(d, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(words: &[&str]) -> Clopen {
        Clopen::parse(words).unwrap()
    }

    fn pm(rules: &[(&str, &str)]) -> PrefixMap {
        PrefixMap::parse(rules).unwrap()
    }

    fn flip() -> PrefixMap {
        pm(&[("0", "1"), ("1", "0")])
    }

    fn shuffle() -> PrefixMap {
        pm(&[("00", "0"), ("01", "10"), ("1", "11")])
    }

    fn window(d: usize, entries: &[(&[&str], &[&str])]) -> TruncatedLatticeMap {
        TruncatedLatticeMap::new(d, entries.iter().map(|(k, v)| (c(k), c(v)))).unwrap()
    }

    #[test]
    fn order_iso_examples() {
        assert!(is_order_iso(&identity_window(1).unwrap()));
        let swap = window(1, &[(&[], &[]), (&["0"], &["1"]), (&["1"], &["0"]), (&[""], &[""])]);
        assert!(is_order_iso(&swap));
        let reversed = window(1, &[(&[], &[]), (&["0"], &[""]), (&[""], &["0"])]);
        assert!(!is_order_iso(&reversed));
        assert!(!is_s1_member(&reversed));
    }

    #[test]
    fn sb_examples() {
        assert!(is_sb_member(&encode(&flip(), 1).unwrap()));
        let bad = window(2, &[(&[], &[]), (&["00"], &["00"]), (&["01"], &["01"])]);
        assert!(!is_sb_member(&bad));
        assert!(is_sb_member(&window(2, &[(&[], &[])])));
    }

    #[test]
    fn window_construction_errors() {
        assert!(TruncatedLatticeMap::new(1, [(c(&["00"]), c(&["00"]))]).is_err());
        assert!(TruncatedLatticeMap::new(1, [(Clopen::empty(), c(&["1"]))]).is_err());
        assert!(TruncatedLatticeMap::new(
            1,
            [(Clopen::empty(), Clopen::empty()), (c(&["0"]), Clopen::empty())]
        )
        .is_err());
    }

    #[test]
    fn complete_finite_examples() {
        assert!(is_complete_finite(&encode(&flip(), 2).unwrap()));
        let m = window(
            2,
            &[(&[], &[]), (&["00"], &["10"]), (&["01"], &["11"]), (&["0"], &[""])],
        );
        assert!(is_order_iso(&m));
        assert!(!is_complete_finite(&m));
        assert!(is_complete_finite(&window(2, &[(&[], &[])])));
    }

    #[test]
    fn hereditary_image_examples() {
        let m = encode(&flip(), 2).unwrap();
        let l = tilde_truncated(&c(&["0"]), 2).unwrap();
        assert_eq!(
            hereditary_image(&m, &l).unwrap(),
            tilde_truncated(&c(&["1"]), 2).unwrap()
        );
        let bottom = BTreeSet::from([Clopen::empty()]);
        assert_eq!(hereditary_image(&m, &bottom).unwrap(), bottom);
        let id = identity_window(2).unwrap();
        let l = tilde_truncated(&c(&["01", "1"]), 2).unwrap();
        assert_eq!(hereditary_image(&id, &l).unwrap(), l);
        let not_hereditary = BTreeSet::from([Clopen::empty(), c(&["0"])]);
        assert!(hereditary_image(&id, &not_hereditary).is_err());
    }

    #[test]
    fn encode_examples() {
        let swap = window(1, &[(&[], &[]), (&["0"], &["1"]), (&["1"], &["0"]), (&[""], &[""])]);
        assert_eq!(encode(&flip(), 1).unwrap(), swap);
        assert_eq!(
            encode(&pm(&[("0", "0")]), 1).unwrap(),
            window(1, &[(&[], &[]), (&["0"], &["0"])])
        );
        assert_eq!(
            encode(&shuffle(), 1).unwrap(),
            window(
                1,
                &[(&[], &[]), (&["0"], &["0", "10"]), (&["1"], &["11"]), (&[""], &[""])]
            )
        );
        let deep = encode(&shuffle(), 1).unwrap();
        assert!(is_sb_member(&deep) && is_s1_member(&deep));
        assert!(encode(&flip(), 4).is_err());
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode(&encode(&flip(), 2).unwrap()).unwrap(), flip());
        let swap = window(1, &[(&[], &[]), (&["0"], &["1"]), (&["1"], &["0"]), (&[""], &[""])]);
        assert_eq!(decode(&swap).unwrap(), flip());
        let m = encode(&shuffle(), 2).unwrap();
        assert_eq!(m.get(&c(&["00"])), Some(&c(&["0"])));
        assert_eq!(m.get(&c(&["01"])), Some(&c(&["10"])));
        assert_eq!(m.get(&c(&["1"])), Some(&c(&["11"])));
        assert_eq!(decode(&m).unwrap(), shuffle());
    }

    #[test]
    fn decode_rejects_non_local_windows() {
        // the window of a map whose rules are deeper than the window
        let h = pm(&[("00", "00"), ("01", "11")]);
        let m = encode(&h, 1).unwrap();
        match decode(&m) {
            Err(Error::Inconsistent { witness, .. }) => assert_eq!(witness, "{0}"),
            other => panic!("expected inconsistency, got {other:?}"),
        }
        // an order isomorphism that does not preserve unions
        let m = window(1, &[(&[], &[]), (&["0"], &["0"]), (&["1"], &["10"]), (&[""], &[""])]);
        assert!(decode(&m).is_err());
    }

    #[test]
    fn phi_examples() {
        assert!(phi_homomorphism_check(&flip(), &flip(), 2).unwrap().holds());
        assert!(phi_homomorphism_check(&shuffle(), &flip(), 3).unwrap().holds());
        assert!(phi_homomorphism_check(&shuffle(), &PrefixMap::empty(), 2).unwrap().holds());
        assert!(phi_homomorphism_check(&shuffle(), &flip(), 1).is_err());
    }

    #[test]
    fn composition_through_deeper_values() {
        // g's images are deeper than the window of f
        let f = pm(&[("0", "1"), ("1", "0")]);
        let g = pm(&[("0", "00"), ("1", "01")]);
        assert!(phi_homomorphism_check(&f, &g, 1).unwrap().holds());
        let composed = compose_windows(&encode(&f, 1).unwrap(), &encode(&g, 1).unwrap()).unwrap();
        assert_eq!(composed, encode(&f.compose(&g), 1).unwrap());
    }

    #[test]
    fn correspondence_examples() {
        let one = |x: &[&str]| c(x);
        assert!(neighborhood_correspondence_check(&one(&["0"]), &one(&["1"]), &[flip()], 1)
            .unwrap()
            .holds());
        assert!(neighborhood_correspondence_check(
            &one(&["1"]),
            &one(&["1"]),
            &[pm(&[("0", "0")])],
            1
        )
        .unwrap()
        .holds());
        for p in clopen::enumerate_base(1).unwrap() {
            assert!(
                neighborhood_correspondence_check(&Clopen::empty(), &p, &[flip(), shuffle()], 2)
                    .unwrap()
                    .holds()
            );
        }
        assert!(neighborhood_correspondence_check(&one(&["000"]), &Clopen::empty(), &[], 2).is_err());
    }

    #[test]
    fn image_family_needs_the_inverse_window() {
        // h⁻¹[{10}] = {110} is deeper than 2, so {10} is no value of encode(h, 2)
        // even though {10} ⊆ im h.
        let h = pm(&[("0", "00"), ("10", "01"), ("11", "1")]);
        let m = encode(&h, 2).unwrap();
        assert!(!m.values().any(|v| *v == c(&["10"])));
        assert!(!h.hco_membership(&HcoQuery::IMinus { v: c(&["10"]) }));
        assert!(neighborhood_correspondence_check(&c(&["10"]), &c(&["10"]), &[h], 2)
            .unwrap()
            .holds());
    }

    #[test]
    fn fhat_examples() {
        assert!(lemma_fhat_check(&encode(&flip(), 2).unwrap()).unwrap().holds());
        assert!(lemma_fhat_check(&encode(&PrefixMap::empty(), 2).unwrap()).unwrap().holds());
        assert!(lemma_fhat_check(&encode(&shuffle(), 2).unwrap()).unwrap().holds());
    }

    #[test]
    fn json_shape() {
        let m = encode(&pm(&[("0", "0")]), 1).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(
            text,
            r#"{"depth":1,"entries":[[{"words":[]},{"words":[]}],[{"words":["0"]},{"words":["0"]}]]}"#
        );
        let back: TruncatedLatticeMap = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
