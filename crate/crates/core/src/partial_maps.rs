//! Symmetric inverse monoids, Munn semigroups and the Munn representation.

use std::collections::HashMap;

use crate::algebra::{RSMorphism, RSemigroup};
use crate::error::{Error, Result};
use crate::pbij::{all_partial_bijections, PBij, MAX_CARRIER};
use crate::semilattice::Semilattice;

/// Default cap on the order of a constructed inverse semigroup.
pub const DEFAULT_ORDER_LIMIT: usize = 2048;

/// Number of partial bijections of a `k`-set: `Σ C(k,i)² i!`.
pub fn symmetric_inverse_order(k: usize) -> usize {
    let mut total = 0usize;
    let mut binom = 1usize;
    let mut fact = 1usize;
    for i in 0..=k {
        if i > 0 {
            binom = binom * (k - i + 1) / i;
            fact *= i;
        }
        total += binom * binom * fact;
    }
    total
}

/// An inverse semigroup realised by partial bijections, together with the
/// bijection behind each element index.
#[derive(Clone, Debug)]
pub struct PartialBijectionSemigroup {
    pub algebra: RSemigroup,
    pub elements: Vec<PBij>,
}

impl PartialBijectionSemigroup {
    pub fn index_of(&self, f: &PBij) -> Option<usize> {
        self.elements.binary_search(f).ok()
    }
}

/// The symmetric inverse monoid on `k` points, elements in canonical order.
pub fn symmetric_inverse(k: usize) -> Result<PartialBijectionSemigroup> {
    symmetric_inverse_bounded(k, DEFAULT_ORDER_LIMIT)
}

pub fn symmetric_inverse_bounded(k: usize, limit: usize) -> Result<PartialBijectionSemigroup> {
    if k > MAX_CARRIER {
        return Err(Error::SizeLimit { what: "carrier".into(), count: k, limit: MAX_CARRIER });
    }
    let count = symmetric_inverse_order(k);
    if count > limit {
        return Err(Error::SizeLimit { what: format!("symmetric inverse monoid on {k} points"), count, limit });
    }
    closed_family(all_partial_bijections(k))
}

/// Builds the algebra of a composition-closed, inverse-closed family of
/// partial bijections listed in canonical order.
fn closed_family(elements: Vec<PBij>) -> Result<PartialBijectionSemigroup> {
    let n = elements.len();
    let index: HashMap<PBij, usize> = elements.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let lookup = |f: &PBij| index.get(f).copied().ok_or_else(|| Error::NotInverse(format!("{f} is missing from the family")));
    let mut mul = Vec::with_capacity(n * n);
    for f in &elements {
        for g in &elements {
            mul.push(lookup(&f.compose(g))?);
        }
    }
    let inverse = elements.iter().map(|f| lookup(&f.inverse())).collect::<Result<Vec<_>>>()?;
    let algebra = from_inverse(n, &mul, &inverse)?;
    Ok(PartialBijectionSemigroup { algebra, elements })
}

/// An inverse semigroup as a restriction semigroup with `s* = s⁻¹s`, `s+ = ss⁻¹`.
///
/// Rejects tables that are not associative, or where `inverse` does not give
/// the unique inverse of each element.
pub fn from_inverse(n: usize, mul: &[usize], inverse: &[usize]) -> Result<RSemigroup> {
    if mul.len() != n * n || inverse.len() != n {
        return Err(Error::DimensionMismatch(format!("tables do not match order {n}")));
    }
    if mul.iter().chain(inverse).any(|&v| v >= n) {
        return Err(Error::DimensionMismatch("entry out of range".into()));
    }
    let m = |a: usize, b: usize| mul[a * n + b];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if m(m(a, b), c) != m(a, m(b, c)) {
                    return Err(Error::NotInverse(format!("not associative at ({a},{b},{c})")));
                }
            }
        }
    }
    for s in 0..n {
        let t = inverse[s];
        if m(m(s, t), s) != s || m(m(t, s), t) != t {
            return Err(Error::NotInverse(format!("{t} is not an inverse of {s}")));
        }
        if let Some(u) = (0..n).find(|&u| u != t && m(m(s, u), s) == s && m(m(u, s), u) == u) {
            return Err(Error::NotInverse(format!("{s} has two inverses {t} and {u}")));
        }
    }
    let star = (0..n).map(|s| m(inverse[s], s)).collect();
    let plus = (0..n).map(|s| m(s, inverse[s])).collect();
    RSemigroup::new(n, mul.to_vec(), star, plus)
}

/// The Munn semigroup of `y`: order isomorphisms between principal ideals.
pub fn munn_semigroup(y: &Semilattice) -> Result<PartialBijectionSemigroup> {
    if y.size() > MAX_CARRIER {
        return Err(Error::SizeLimit { what: "semilattice".into(), count: y.size(), limit: MAX_CARRIER });
    }
    let mut elements = Vec::new();
    for a in 0..y.size() {
        for b in 0..y.size() {
            for pairs in y.ideal_isomorphisms(a, b) {
                elements.push(PBij::from_pairs(y.size(), &pairs)?);
            }
        }
    }
    elements.sort();
    elements.dedup();
    let out = closed_family(elements)?;
    let monoid = out.algebra.identity().is_some();
    if monoid != y.top().is_some() {
        return Err(Error::OracleMismatch("Munn semigroup is a monoid exactly when the semilattice has a top".into()));
    }
    Ok(out)
}

/// The partial bijection `e ↦ (se)+` on projections below `s*`, with
/// projections indexed by position in `s.projections()`.
pub fn munn_map(s: &RSemigroup, a: usize) -> PBij {
    let p = s.projections();
    let pos = |e: usize| p.iter().position(|&f| f == e).expect("plus of an element is a projection");
    let pairs: Vec<(usize, usize)> = p
        .iter()
        .enumerate()
        .filter(|&(_, &e)| s.le(e, s.star(a)))
        .map(|(i, &e)| (i, pos(s.plus(s.mul(a, e)))))
        .collect();
    PBij::from_pairs(p.len(), &pairs).expect("Munn maps are injective")
}

/// The Munn representation of `s` into the Munn semigroup of its projections.
pub fn munn_representation(s: &RSemigroup) -> Result<(PartialBijectionSemigroup, RSMorphism)> {
    let y = Semilattice::of_projections(s);
    let target = munn_semigroup(&y)?;
    let map = (0..s.order())
        .map(|a| {
            let f = munn_map(s, a);
            target.index_of(&f).ok_or_else(|| Error::OracleMismatch(format!("Munn map {f} of {a} is not an ideal isomorphism")))
        })
        .collect::<Result<Vec<_>>>()?;
    let morphism = RSMorphism::new(s, &target.algebra, map)?;
    Ok((target, morphism))
}
