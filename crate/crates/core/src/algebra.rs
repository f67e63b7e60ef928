//! Finite restriction semigroups given by explicit tables.
//!
//! An element is an index in `0..n`. The product table is row-major:
//! `mul(a, b)` is the entry in row `a`, column `b`.

use crate::error::{ensure, mismatch, Error, Result};
use crate::relation::Relation;

/// A finite restriction semigroup `(S, ·, *, +)`.
///
/// Values of this type have passed [`validate_restriction`], so all axioms
/// hold. Construct through [`RSemigroup::new`] or the text parser.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RSemigroup {
    n: usize,
    mul: Vec<usize>,
    star: Vec<usize>,
    plus: Vec<usize>,
    labels: Option<Vec<String>>,
}

/// Validates the tables and returns the algebra.
///
/// The checks run in a fixed order: table shapes, associativity, the four
/// left identities, the four right identities, then the two linking
/// identities. The reported witness is the lexicographically first one for
/// the first failing identity.
pub fn validate_restriction(n: usize, mul: &[Vec<usize>], star: &[usize], plus: &[usize]) -> Result<RSemigroup> {
    if mul.len() != n || mul.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch(format!("product table must be {n}x{n}")));
    }
    let flat: Vec<usize> = mul.iter().flatten().copied().collect();
    RSemigroup::new(n, flat, star.to_vec(), plus.to_vec())
}

impl RSemigroup {
    /// Builds and validates an algebra from a flat row-major product table.
    pub fn new(n: usize, mul: Vec<usize>, star: Vec<usize>, plus: Vec<usize>) -> Result<Self> {
        if mul.len() != n * n {
            return Err(Error::DimensionMismatch(format!("product table has {} entries, expected {}", mul.len(), n * n)));
        }
        if star.len() != n || plus.len() != n {
            return Err(Error::DimensionMismatch(format!("unary tables must have {n} entries")));
        }
        if let Some(bad) = mul.iter().chain(&star).chain(&plus).find(|&&v| v >= n) {
            return Err(Error::DimensionMismatch(format!("entry {bad} out of range 0..{n}")));
        }
        let s = RSemigroup { n, mul, star, plus, labels: None };
        s.check_axioms()?;
        Ok(s)
    }

    /// Attaches display labels, one per element.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch(format!("{} labels for {} elements", labels.len(), self.n)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.n;
        let (m, st, pl) = (|a, b| self.mul(a, b), |a| self.star(a), |a| self.plus(a));
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if m(m(x, y), z) != m(x, m(y, z)) {
                        return Err(axiom("associativity", vec![x, y, z]));
                    }
                }
            }
        }
        type Pair<'a> = (&'a str, Box<dyn Fn(usize, usize) -> bool + 'a>);
        let binary: [Pair; 8] = [
            ("x+x=x", Box::new(|x, _| m(pl(x), x) == x)),
            ("x+y+=y+x+", Box::new(|x, y| m(pl(x), pl(y)) == m(pl(y), pl(x)))),
            ("(x+y)+=x+y+", Box::new(|x, y| pl(m(pl(x), y)) == m(pl(x), pl(y)))),
            ("(xy)+x=xy+", Box::new(|x, y| m(pl(m(x, y)), x) == m(x, pl(y)))),
            ("xx*=x", Box::new(|x, _| m(x, st(x)) == x)),
            ("x*y*=y*x*", Box::new(|x, y| m(st(x), st(y)) == m(st(y), st(x)))),
            ("(xy*)*=x*y*", Box::new(|x, y| st(m(x, st(y))) == m(st(x), st(y)))),
            ("y(xy)*=x*y", Box::new(|x, y| m(y, st(m(x, y))) == m(st(x), y))),
        ];
        for (name, holds) in &binary {
            for x in 0..n {
                for y in 0..n {
                    if !holds(x, y) {
                        return Err(axiom(name, vec![x, y]));
                    }
                }
            }
        }
        for x in 0..n {
            if st(pl(x)) != pl(x) {
                return Err(axiom("(x+)*=x+", vec![x]));
            }
        }
        for x in 0..n {
            if pl(st(x)) != st(x) {
                return Err(axiom("(x*)+=x*", vec![x]));
            }
        }
        Ok(())
    }

    /// Re-checks identities that follow from the axioms. A failure here means
    /// the validator itself is wrong.
    pub fn check_derived_identities(&self) -> Result<()> {
        let projections = self.projections();
        for s in 0..self.n {
            for &e in &projections {
                let es = self.mul(e, s);
                let se = self.mul(s, e);
                ensure(es == self.mul(s, self.star(es)), || format!("es=s(es)* fails at s={s}, e={e}"))?;
                ensure(se == self.mul(self.plus(se), s), || format!("se=(se)+s fails at s={s}, e={e}"))?;
                ensure(self.star(se) == self.mul(self.star(s), e), || format!("(se)*=s*e fails at s={s}, e={e}"))?;
                ensure(self.plus(es) == self.mul(e, self.plus(s)), || format!("(es)+=es+ fails at s={s}, e={e}"))?;
            }
            for t in 0..self.n {
                let st = self.mul(s, t);
                ensure(self.star(st) == self.star(self.mul(self.star(s), t)), || format!("(st)*=(s*t)* fails at {s},{t}"))?;
                ensure(self.plus(st) == self.plus(self.mul(s, self.plus(t))), || format!("(st)+=(st+)+ fails at {s},{t}"))?;
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    #[inline]
    pub fn star(&self, a: usize) -> usize {
        self.star[a]
    }

    #[inline]
    pub fn plus(&self, a: usize) -> usize {
        self.plus[a]
    }

    pub fn mul_table(&self) -> &[usize] {
        &self.mul
    }

    pub fn star_table(&self) -> &[usize] {
        &self.star
    }

    pub fn plus_table(&self) -> &[usize] {
        &self.plus
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn is_projection(&self, a: usize) -> bool {
        self.star[a] == a
    }

    /// The projections in increasing index order.
    pub fn projections(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| self.is_projection(a)).collect()
    }

    /// `s ≤ t` in the natural partial order, tested as `s = t s*`.
    pub fn le(&self, s: usize, t: usize) -> bool {
        s == self.mul(t, self.star(s))
    }

    /// The natural partial order, checked against its two other
    /// characterizations (`s = s+ t`, and `s = t f` for some projection `f`).
    pub fn natural_order(&self) -> Result<Relation> {
        let projections = self.projections();
        let rel = Relation::from_fn(self.n, |s, t| self.le(s, t));
        for s in 0..self.n {
            for t in 0..self.n {
                let left = s == self.mul(self.plus(s), t);
                let some_f = projections.iter().any(|&f| s == self.mul(t, f));
                ensure(left == rel.contains(s, t) && some_f == rel.contains(s, t), || {
                    format!("order characterizations disagree at ({s},{t})")
                })?;
            }
        }
        ensure(rel.is_partial_order(), || "natural order is not a partial order".into())?;
        Ok(rel)
    }

    /// `s ~ t`: `s t* = t s*` and `t+ s = s+ t`.
    pub fn compatible(&self, s: usize, t: usize) -> bool {
        self.mul(s, self.star(t)) == self.mul(t, self.star(s)) && self.mul(self.plus(t), s) == self.mul(self.plus(s), t)
    }

    pub fn compatibility(&self) -> Relation {
        Relation::from_fn(self.n, |s, t| self.compatible(s, t))
    }

    /// The least congruence identifying all projections.
    ///
    /// Computed from the pairwise test `∃e: es = et`, checked against the
    /// right-handed test `∃e: se = te` and against a congruence closure that
    /// starts from `P × P`.
    pub fn sigma(&self) -> Result<CongruencePartition> {
        let projections = self.projections();
        let left = Relation::from_fn(self.n, |s, t| projections.iter().any(|&e| self.mul(e, s) == self.mul(e, t)));
        let right = Relation::from_fn(self.n, |s, t| projections.iter().any(|&e| self.mul(s, e) == self.mul(t, e)));
        if let Some((s, t)) = left.first_difference(&right) {
            return Err(mismatch(format!("left and right sigma tests disagree at ({s},{t})")));
        }
        ensure(left.is_equivalence(), || "sigma is not an equivalence".into())?;
        let partition = CongruencePartition::from_relation(&left);
        let closure = self.congruence_closure(projections.iter().map(|&e| (projections[0], e)));
        if partition != closure {
            return Err(mismatch(format!("sigma {:?} differs from closure {:?}", partition.blocks(), closure.blocks())));
        }
        Ok(partition)
    }

    /// Least congruence (for `·`, `*`, `+`) containing the given pairs.
    pub fn congruence_closure(&self, seeds: impl IntoIterator<Item = (usize, usize)>) -> CongruencePartition {
        let mut uf = UnionFind::new(self.n);
        let mut work: Vec<(usize, usize)> = seeds.into_iter().collect();
        while let Some((a, b)) = work.pop() {
            if !uf.union(a, b) {
                continue;
            }
            // a and b just merged; every consequence of a ≡ b is queued.
            work.push((self.star(a), self.star(b)));
            work.push((self.plus(a), self.plus(b)));
            for c in 0..self.n {
                work.push((self.mul(a, c), self.mul(b, c)));
                work.push((self.mul(c, a), self.mul(c, b)));
            }
        }
        CongruencePartition::from_block_of(&(0..self.n).map(|a| uf.find(a)).collect::<Vec<_>>())
    }

    pub fn sigma_quotient(&self) -> Result<(RSemigroup, RSMorphism)> {
        let sigma = self.sigma()?;
        let (q, map) = self.quotient(&sigma)?;
        ensure(q.is_reduced(), || "quotient by sigma is not reduced".into())?;
        Ok((q.clone(), RSMorphism::new(self, &q, map)?))
    }

    /// Quotient by a congruence; blocks are numbered by their least element.
    pub fn quotient(&self, partition: &CongruencePartition) -> Result<(RSemigroup, Vec<usize>)> {
        if !partition.is_congruence_of(self) {
            return Err(Error::PreconditionFailed { condition: "congruence".into(), witness: vec![] });
        }
        let k = partition.blocks().len();
        let rep: Vec<usize> = partition.blocks().iter().map(|b| b[0]).collect();
        let block = |a: usize| partition.block_of(a);
        let mut mul = Vec::with_capacity(k * k);
        for &a in &rep {
            for &b in &rep {
                mul.push(block(self.mul(a, b)));
            }
        }
        let star = rep.iter().map(|&a| block(self.star(a))).collect();
        let plus = rep.iter().map(|&a| block(self.plus(a))).collect();
        let q = RSemigroup::new(k, mul, star, plus)?;
        Ok((q, (0..self.n).map(block).collect()))
    }

    /// `~` coincides with `σ`, checked against the two-sided injectivity form.
    pub fn is_proper(&self) -> Result<bool> {
        let sigma = self.sigma()?.relation(self.n);
        let by_relation = self.compatibility() == sigma;
        let by_injectivity = (0..self.n).all(|s| {
            (0..self.n).all(|t| {
                !sigma.contains(s, t) || s == t || (self.star(s) != self.star(t) && self.plus(s) != self.plus(t))
            })
        });
        ensure(by_relation == by_injectivity, || format!("properness tests disagree: {by_relation} vs {by_injectivity}"))?;
        Ok(by_relation)
    }

    /// Exactly one projection.
    pub fn is_reduced(&self) -> bool {
        self.projections().len() == 1
    }

    pub fn identity(&self) -> Option<usize> {
        (0..self.n).find(|&e| (0..self.n).all(|a| self.mul(e, a) == a && self.mul(a, e) == a))
    }

    /// The inverse map, if this is an inverse semigroup whose unary operations
    /// are `s* = s⁻¹s` and `s+ = ss⁻¹`.
    pub fn inverses(&self) -> Option<Vec<usize>> {
        let mut inv = Vec::with_capacity(self.n);
        for s in 0..self.n {
            let mut candidates = (0..self.n).filter(|&t| self.mul(self.mul(s, t), s) == s && self.mul(self.mul(t, s), t) == t);
            let t = candidates.next()?;
            if candidates.next().is_some() {
                return None;
            }
            if self.mul(t, s) != self.star(s) || self.mul(s, t) != self.plus(s) {
                return None;
            }
            inv.push(t);
        }
        Some(inv)
    }

    /// The isomorphic copy in which element `a` becomes `perm[a]`.
    pub fn relabel(&self, perm: &[usize]) -> RSemigroup {
        let n = self.n;
        let mut mul = vec![0; n * n];
        let mut star = vec![0; n];
        let mut plus = vec![0; n];
        for a in 0..n {
            star[perm[a]] = perm[self.star(a)];
            plus[perm[a]] = perm[self.plus(a)];
            for b in 0..n {
                mul[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![String::new(); n];
            for a in 0..n {
                out[perm[a]] = l[a].clone();
            }
            out
        });
        RSemigroup { n, mul, star, plus, labels }
    }

    /// Builds without validation; callers guarantee the axioms.
    pub(crate) fn from_trusted(n: usize, mul: Vec<usize>, star: Vec<usize>, plus: Vec<usize>) -> Self {
        RSemigroup { n, mul, star, plus, labels: None }
    }

    /// Table equality, ignoring labels.
    pub fn same_tables(&self, other: &RSemigroup) -> bool {
        self.n == other.n && self.mul == other.mul && self.star == other.star && self.plus == other.plus
    }
}

fn axiom(name: &str, witness: Vec<usize>) -> Error {
    Error::AxiomViolation { axiom: name.to_string(), witness }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    /// Returns false when already merged.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// A partition of `0..n`, blocks sorted by least element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CongruencePartition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl CongruencePartition {
    /// From any labelling where equal labels mean the same block.
    pub fn from_block_of(labels: &[usize]) -> Self {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut seen: Vec<(usize, usize)> = Vec::new();
        let mut block_of = vec![0; labels.len()];
        for (a, &l) in labels.iter().enumerate() {
            let idx = match seen.iter().find(|&&(label, _)| label == l) {
                Some(&(_, i)) => i,
                None => {
                    seen.push((l, blocks.len()));
                    blocks.push(Vec::new());
                    blocks.len() - 1
                }
            };
            blocks[idx].push(a);
            block_of[a] = idx;
        }
        CongruencePartition { blocks, block_of }
    }

    pub fn from_relation(rel: &Relation) -> Self {
        let labels: Vec<usize> = (0..rel.size()).map(|a| (0..rel.size()).find(|&b| rel.contains(a, b)).unwrap_or(a)).collect();
        Self::from_block_of(&labels)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, a: usize) -> usize {
        self.block_of[a]
    }

    pub fn relation(&self, n: usize) -> Relation {
        Relation::from_fn(n, |a, b| self.block_of[a] == self.block_of[b])
    }

    pub fn is_congruence_of(&self, s: &RSemigroup) -> bool {
        let n = s.order();
        if self.block_of.len() != n {
            return false;
        }
        let same = |a: usize, b: usize| self.block_of[a] == self.block_of[b];
        self.blocks.iter().all(|block| {
            block.iter().all(|&a| {
                let b = block[0];
                same(s.star(a), s.star(b))
                    && same(s.plus(a), s.plus(b))
                    && (0..n).all(|c| same(s.mul(a, c), s.mul(b, c)) && same(s.mul(c, a), s.mul(c, b)))
            })
        })
    }
}

/// A morphism of restriction semigroups with its derived properties.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RSMorphism {
    pub source: RSemigroup,
    pub target: RSemigroup,
    pub map: Vec<usize>,
    pub surjective: bool,
    /// Surjective, and equal images imply compatibility.
    pub proper: bool,
    /// Only projections map to projections.
    pub projection_pure: bool,
}

/// Checks that `map` preserves `·`, `*` and `+`.
///
/// Reports the first failing operation (`mul`, then `star`, then `plus`)
/// with its lexicographically first witness.
pub fn check_rsmorphism(source: &RSemigroup, target: &RSemigroup, map: &[usize]) -> Result<RSMorphism> {
    if map.len() != source.order() {
        return Err(Error::DimensionMismatch(format!("map has {} entries for {} elements", map.len(), source.order())));
    }
    if let Some(&bad) = map.iter().find(|&&v| v >= target.order()) {
        return Err(Error::DimensionMismatch(format!("image {bad} out of range")));
    }
    let n = source.order();
    for a in 0..n {
        for b in 0..n {
            if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                return Err(Error::NotAMorphism { op: "mul".into(), witness: vec![a, b] });
            }
        }
    }
    if let Some(a) = (0..n).find(|&a| map[source.star(a)] != target.star(map[a])) {
        return Err(Error::NotAMorphism { op: "star".into(), witness: vec![a] });
    }
    if let Some(a) = (0..n).find(|&a| map[source.plus(a)] != target.plus(map[a])) {
        return Err(Error::NotAMorphism { op: "plus".into(), witness: vec![a] });
    }
    let mut hit = vec![false; target.order()];
    map.iter().for_each(|&v| hit[v] = true);
    let surjective = hit.iter().all(|&h| h);
    let proper = surjective
        && (0..n).all(|s| (0..n).all(|t| map[s] != map[t] || source.compatible(s, t)));
    let projection_pure = (0..n).all(|s| !target.is_projection(map[s]) || source.is_projection(s));
    Ok(RSMorphism { source: source.clone(), target: target.clone(), map: map.to_vec(), surjective, proper, projection_pure })
}

impl RSMorphism {
    pub fn new(source: &RSemigroup, target: &RSemigroup, map: Vec<usize>) -> Result<Self> {
        check_rsmorphism(source, target, &map)
    }

    pub fn identity(s: &RSemigroup) -> Self {
        // The identity always passes.
        check_rsmorphism(s, s, &(0..s.order()).collect::<Vec<_>>()).expect("identity is a morphism")
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// Elements of the source mapping to `s`.
    pub fn fiber(&self, s: usize) -> Vec<usize> {
        (0..self.source.order()).filter(|&t| self.map[t] == s).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pbij::all_partial_bijections;

    #[test]
    fn order_on_two_point_partial_bijections_is_restriction() {
        let s = fixtures::i2();
        let order = s.natural_order().unwrap();
        // Oracle: f ≤ g iff g restricted to dom f equals f, over the raw maps.
        let maps = all_partial_bijections(2);
        let oracle = maps.iter().flat_map(|f| maps.iter().map(move |g| (f, g))).filter(|(f, g)| g.restrict(f.domain()) == **f).count();
        assert_eq!(oracle, 17);
        assert_eq!(order.count(), 17);
    }

    #[test]
    fn star_breaking_map_is_rejected() {
        let y2 = fixtures::y2();
        assert!(check_rsmorphism(&y2, &y2, &[0, 1]).unwrap().surjective);
        let sa = fixtures::sa();
        assert_eq!(check_rsmorphism(&y2, &sa, &[1, 0]).unwrap_err(), Error::NotAMorphism { op: "star".into(), witness: vec![0] });
    }
}
