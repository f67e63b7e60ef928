//! Canonical labellings and isomorphism tests.
//!
//! Colours start from order-theoretic invariants (projection or not, sizes of
//! the up- and down-sets, how many elements fix `x` on either side) and are
//! refined against the product table until stable. Remaining ties are broken
//! by individualising each candidate in turn; the canonical labelling is the
//! one with the smallest encoded tables.

use crate::algebra::RSemigroup;

/// A canonical relabelling and the encoded tables it produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    /// `perm[old] = new`.
    pub perm: Vec<usize>,
    pub key: Vec<usize>,
}

/// Canonical form of `s` with extra per-element colours that any
/// isomorphism must respect (pass all zeros for none).
pub fn canonical_form(s: &RSemigroup, extra: &[usize]) -> Canonical {
    let n = s.order();
    let initial: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let down = (0..n).filter(|&y| s.le(y, x)).count();
            let up = (0..n).filter(|&y| s.le(x, y)).count();
            let left_fix = (0..n).filter(|&y| s.mul(y, x) == x).count();
            let right_fix = (0..n).filter(|&y| s.mul(x, y) == x).count();
            let idem = (s.mul(x, x) == x) as usize;
            vec![extra.get(x).copied().unwrap_or(0), s.is_projection(x) as usize, idem, down, up, left_fix, right_fix]
        })
        .collect();
    let colours = refine(s, rank(&initial));
    let mut best: Option<Canonical> = None;
    search(s, extra, colours, &mut best);
    best.expect("search visits at least one leaf")
}

pub fn are_isomorphic(a: &RSemigroup, b: &RSemigroup) -> bool {
    find_isomorphism(a, b).is_some()
}

/// An isomorphism `a → b` as an index map, if one exists.
pub fn find_isomorphism(a: &RSemigroup, b: &RSemigroup) -> Option<Vec<usize>> {
    if a.order() != b.order() {
        return None;
    }
    let ca = canonical_form(a, &[]);
    let cb = canonical_form(b, &[]);
    if ca.key != cb.key {
        return None;
    }
    let mut b_inv = vec![0; b.order()];
    for (old, &new) in cb.perm.iter().enumerate() {
        b_inv[new] = old;
    }
    let iso: Vec<usize> = ca.perm.iter().map(|&new| b_inv[new]).collect();
    debug_assert!(crate::algebra::check_rsmorphism(a, b, &iso).is_ok());
    Some(iso)
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter().map(|sig| sorted.binary_search(sig).expect("present")).collect()
}

fn class_count(colours: &[usize]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn refine(s: &RSemigroup, mut colours: Vec<usize>) -> Vec<usize> {
    let n = s.order();
    loop {
        let before = class_count(&colours);
        let sigs: Vec<(usize, usize, usize, Vec<(usize, usize, usize)>)> = (0..n)
            .map(|x| {
                let mut row: Vec<(usize, usize, usize)> =
                    (0..n).map(|y| (colours[y], colours[s.mul(x, y)], colours[s.mul(y, x)])).collect();
                row.sort_unstable();
                (colours[x], colours[s.star(x)], colours[s.plus(x)], row)
            })
            .collect();
        colours = rank(&sigs);
        if class_count(&colours) == before {
            return colours;
        }
    }
}

fn search(s: &RSemigroup, extra: &[usize], colours: Vec<usize>, best: &mut Option<Canonical>) {
    let n = s.order();
    if class_count(&colours) == n {
        let key = encode(s, extra, &colours);
        if best.as_ref().is_none_or(|b| key < b.key) {
            *best = Some(Canonical { perm: colours, key });
        }
        return;
    }
    // First colour class with more than one member.
    let mut counts = vec![0; n];
    colours.iter().for_each(|&c| counts[c] += 1);
    let target = (0..n).find(|&c| counts[c] > 1).expect("not discrete");
    for x in (0..n).filter(|&x| colours[x] == target) {
        let split: Vec<(usize, bool)> = (0..n).map(|y| (colours[y], y != x)).collect();
        search(s, extra, refine(s, rank(&split)), best);
    }
}

fn encode(s: &RSemigroup, extra: &[usize], perm: &[usize]) -> Vec<usize> {
    let t = s.relabel(perm);
    let mut key = Vec::with_capacity(t.order() * (t.order() + 3) + 1);
    key.push(t.order());
    key.extend_from_slice(t.mul_table());
    key.extend_from_slice(t.star_table());
    key.extend_from_slice(t.plus_table());
    if !extra.is_empty() {
        let mut moved = vec![0; t.order()];
        for (old, &new) in perm.iter().enumerate() {
            moved[new] = extra[old];
        }
        key.extend(moved);
    }
    key
}
