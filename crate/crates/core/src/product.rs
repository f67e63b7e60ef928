use std::collections::HashMap;

use crate::algebra::{RSMorphism, RSemigroup};
use crate::error::{ensure, mismatch, Error, Result};
use crate::premorphism::{action_flags, ActionTriple};

/// The partial action product of an action triple.
///
/// Elements are the pairs `(y, s)` with `y ∈ ran φ_s` and `q(y) = s+`,
/// numbered in lexicographic order of `(y, s)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProductRS {
    pub algebra: RSemigroup,
    pub pairs: Vec<(usize, usize)>,
    /// The projection `(y, s) ↦ s` onto the acting semigroup.
    pub psi: RSMorphism,
}

impl ProductRS {
    pub fn index_of(&self, y: usize, s: usize) -> Option<usize> {
        self.pairs.binary_search(&(y, s)).ok()
    }
}

/// Builds the product and checks it: the axioms, the description of its
/// projections, order and compatibility in terms of the factors, and
/// properness of the projection onto the acting semigroup.
pub fn partial_action_product(triple: &ActionTriple) -> Result<ProductRS> {
    let flags = action_flags(triple);
    for (name, holds) in [("A1", flags.a1), ("A2", flags.a2), ("A3", flags.a3), ("A4", flags.a4)] {
        if !holds {
            let witness = flags.witnesses.get(name).cloned().unwrap_or_default();
            return Err(Error::PreconditionFailed { condition: name.into(), witness });
        }
    }
    let s = triple.source();
    let y = &triple.lattice;
    let maps = &triple.phi.maps;
    let mut pairs = Vec::new();
    for point in 0..triple.carrier() {
        for a in 0..s.order() {
            if maps[a].range() >> point & 1 == 1 && triple.q[point] == s.plus(a) {
                pairs.push((point, a));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let find = |p: (usize, usize)| index.get(&p).copied().ok_or_else(|| mismatch(format!("product left the carrier at {p:?}")));

    let n = pairs.len();
    let mut mul = Vec::with_capacity(n * n);
    for &(p, a) in &pairs {
        let back = maps[a].apply_inverse(p).ok_or_else(|| mismatch("point outside range"))?;
        for &(x, b) in &pairs {
            let image = maps[a].apply(y.meet(back, x)).ok_or_else(|| mismatch("meet left the domain"))?;
            mul.push(find((image, s.mul(a, b)))?);
        }
    }
    let star = pairs
        .iter()
        .map(|&(p, a)| find((maps[a].apply_inverse(p).expect("in range"), s.star(a))))
        .collect::<Result<Vec<_>>>()?;
    let plus = pairs.iter().map(|&(p, a)| find((p, s.plus(a)))).collect::<Result<Vec<_>>>()?;
    let algebra = RSemigroup::new(n, mul, star, plus).map_err(|e| mismatch(format!("product is not a restriction semigroup: {e}")))?;
    let labels = pairs.iter().map(|&(p, a)| format!("({},{})", p, s.label(a))).collect();
    let algebra = algebra.with_labels(labels)?;

    let psi = RSMorphism::new(&algebra, s, pairs.iter().map(|&(_, a)| a).collect())?;
    let product = ProductRS { algebra, pairs, psi };
    check_product_structure(triple, &product)?;
    Ok(product)
}

fn check_product_structure(triple: &ActionTriple, product: &ProductRS) -> Result<()> {
    let s = triple.source();
    let y = &triple.lattice;
    let alg = &product.algebra;
    let pairs = &product.pairs;

    // Projections are exactly (y, q(y)), one per point, with meets matching.
    let projections = alg.projections();
    let expected: Vec<usize> = (0..triple.carrier()).map(|p| product.index_of(p, triple.q[p]).unwrap_or(usize::MAX)).collect();
    ensure(projections.len() == triple.carrier() && expected.iter().all(|i| projections.contains(i)), || {
        "projections are not the pairs (y, q(y))".into()
    })?;
    for a in 0..triple.carrier() {
        for b in 0..triple.carrier() {
            ensure(alg.mul(expected[a], expected[b]) == expected[y.meet(a, b)], || format!("projection meet fails at {a},{b}"))?;
        }
    }
    for i in 0..pairs.len() {
        for j in 0..pairs.len() {
            let ((p, a), (r, b)) = (pairs[i], pairs[j]);
            ensure(alg.le(i, j) == (y.le(p, r) && s.le(a, b)), || format!("order is not componentwise at {i},{j}"))?;
            ensure(alg.compatible(i, j) == s.compatible(a, b), || format!("compatibility is not inherited at {i},{j}"))?;
        }
    }
    ensure(product.psi.surjective && product.psi.proper, || "projection onto the acting semigroup is not proper".into())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sa_on_y2_has_three_elements() {
        let p = partial_action_product(&fixtures::sa_on_y2()).unwrap();
        assert_eq!(p.pairs, vec![(0, 0), (0, 1), (1, 0)]);
        assert_eq!(p.algebra.projections(), vec![0, 2]);
    }

    #[test]
    fn failing_a4_is_reported() {
        let mut t = fixtures::sa_on_y2();
        t.phi.maps[1] = crate::PBij::empty(2);
        assert_eq!(
            partial_action_product(&t).unwrap_err(),
            Error::PreconditionFailed { condition: "A4".into(), witness: vec![1] }
        );
    }
}
