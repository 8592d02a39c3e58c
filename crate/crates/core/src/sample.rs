//! Seeded generators for the verification suites. A seed fully determines
//! every sample.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clopen::{Clopen, Word};
use crate::homeo::PrefixMap;
use crate::lattice_iso::TruncatedLatticeMap;
use crate::pbij::PartialBijection;
use crate::semilattice::FiniteSemilattice;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly shaped partial bijection on `{0..n-1}`: a random domain, a
/// random image of the same size, and a random matching between them.
pub fn partial_bijection(rng: &mut impl Rng, n: u64) -> PartialBijection {
    let points: Vec<u64> = (0..n).collect();
    let k = rng.gen_range(0..=n as usize);
    let dom: Vec<u64> = points.choose_multiple(rng, k).copied().collect();
    let im: Vec<u64> = points.choose_multiple(rng, k).copied().collect();
    PartialBijection::new(dom.into_iter().zip(im)).expect("distinct sources and targets")
}

/// A meet-semilattice with at most `max_size` elements, realized as a family
/// of subsets of a small ground set closed under intersection. Element labels
/// are shuffled so that the numbering carries no order information.
pub fn semilattice(rng: &mut impl Rng, max_size: usize) -> FiniteSemilattice {
    loop {
        let generators = rng.gen_range(1..=max_size.max(1));
        let mut family: BTreeSet<u8> = BTreeSet::new();
        for _ in 0..generators {
            family.insert(rng.gen_range(0..16u8));
        }
        loop {
            let members: Vec<u8> = family.iter().copied().collect();
            let before = family.len();
            for &a in &members {
                for &b in &members {
                    family.insert(a & b);
                }
            }
            if family.len() == before {
                break;
            }
        }
        if family.len() > max_size {
            continue;
        }
        let mut sets: Vec<u8> = family.into_iter().collect();
        sets.shuffle(rng);
        let n = sets.len();
        let index = |s: u8| sets.iter().position(|&t| t == s).expect("closed under meet");
        let meet = (0..n)
            .map(|i| (0..n).map(|j| index(sets[i] & sets[j])).collect())
            .collect();
        return FiniteSemilattice::new(n, meet).expect("intersection is a meet");
    }
}

/// A random maximal prefix code with words of length at most `max_depth`.
pub fn prefix_code(rng: &mut impl Rng, max_depth: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut stack = vec![Word::empty()];
    while let Some(w) = stack.pop() {
        if w.len() < max_depth && rng.gen_bool(0.7) {
            stack.push(w.child(true));
            stack.push(w.child(false));
        } else {
            out.push(w);
        }
    }
    out.sort();
    out
}

/// A random prefix map whose domain and image words have length at most
/// `max_depth`. The empty map and total maps both occur.
pub fn prefix_map(rng: &mut impl Rng, max_depth: usize) -> PrefixMap {
    let mut dom = prefix_code(rng, max_depth);
    let mut im = prefix_code(rng, max_depth);
    dom.shuffle(rng);
    im.shuffle(rng);
    let limit = dom.len().min(im.len());
    let k = if rng.gen_bool(0.05) {
        0
    } else if rng.gen_bool(0.25) {
        limit
    } else {
        rng.gen_range(1..=limit)
    };
    PrefixMap::new(dom.into_iter().zip(im).take(k)).expect("prefix codes are prefix-free")
}

/// A clopen set that is a union of depth-`depth` cylinders.
pub fn clopen(rng: &mut impl Rng, depth: usize) -> Clopen {
    let atoms = 1u64 << depth;
    let mask = if atoms >= 64 { rng.gen() } else { rng.gen_range(0..1u64 << atoms) };
    Clopen::from_mask(mask, depth)
}

/// A clopen set whose words have mixed lengths up to `max_depth`.
pub fn clopen_mixed(rng: &mut impl Rng, max_depth: usize) -> Clopen {
    let code = prefix_code(rng, max_depth);
    let words: Vec<Word> = code.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    crate::clopen::canonicalize(&words)
}

/// A depth-`d` window whose keys and values are both hereditary sublattices
/// of `B_d`: a bijection between two equal-size sets of depth-`d` cylinders,
/// extended to all unions.
pub fn balanced_window(rng: &mut impl Rng, d: usize) -> TruncatedLatticeMap {
    let atoms: Vec<u64> = (0..1u64 << d).collect();
    let k = rng.gen_range(0..=atoms.len());
    let source: Vec<u64> = atoms.choose_multiple(rng, k).copied().collect();
    let target: Vec<u64> = atoms.choose_multiple(rng, k).copied().collect();
    let entries = (0..1u64 << k).map(|sub| {
        let mut from = 0u64;
        let mut to = 0u64;
        for bit in 0..k {
            if sub >> bit & 1 == 1 {
                from |= 1 << source[bit];
                to |= 1 << target[bit];
            }
        }
        (Clopen::from_mask(from, d), Clopen::from_mask(to, d))
    });
    TruncatedLatticeMap::new(d, entries).expect("atom bijection extends to an injective window")
}
