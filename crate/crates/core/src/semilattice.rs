use crate::algebra::RSemigroup;
use crate::error::{Error, Result};

/// A finite meet-semilattice on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Semilattice {
    n: usize,
    meet: Vec<usize>,
}

impl Semilattice {
    /// Validates a flat row-major meet table.
    pub fn new(n: usize, meet: Vec<usize>) -> Result<Self> {
        if meet.len() != n * n {
            return Err(Error::DimensionMismatch(format!("meet table has {} entries, expected {}", meet.len(), n * n)));
        }
        if let Some(bad) = meet.iter().find(|&&v| v >= n) {
            return Err(Error::DimensionMismatch(format!("entry {bad} out of range 0..{n}")));
        }
        let y = Semilattice { n, meet };
        for a in 0..n {
            if y.meet(a, a) != a {
                return Err(Error::AxiomViolation { axiom: "idempotent".into(), witness: vec![a] });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if y.meet(a, b) != y.meet(b, a) {
                    return Err(Error::AxiomViolation { axiom: "commutative".into(), witness: vec![a, b] });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if y.meet(y.meet(a, b), c) != y.meet(a, y.meet(b, c)) {
                        return Err(Error::AxiomViolation { axiom: "associativity".into(), witness: vec![a, b, c] });
                    }
                }
            }
        }
        Ok(y)
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let meet = (0..n * n).map(|i| (i / n).min(i % n)).collect();
        Semilattice { n, meet }
    }

    /// The projection semilattice of `s`, indexed by position in `s.projections()`.
    pub fn of_projections(s: &RSemigroup) -> Self {
        let p = s.projections();
        let pos = |e: usize| p.iter().position(|&f| f == e).expect("product of projections is a projection");
        let meet = p.iter().flat_map(|&e| p.iter().map(move |&f| (e, f))).map(|(e, f)| pos(s.mul(e, f))).collect();
        Semilattice { n: p.len(), meet }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b]
    }

    pub fn meet_table(&self) -> &[usize] {
        &self.meet
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    /// Bitmask of the principal ideal `a↓`.
    pub fn down(&self, a: usize) -> u32 {
        (0..self.n).filter(|&b| self.le(b, a)).fold(0, |m, b| m | 1 << b)
    }

    /// Bitmask of the order ideal generated by `mask`.
    pub fn downset(&self, mask: u32) -> u32 {
        (0..self.n).filter(|&a| mask >> a & 1 == 1).fold(0, |m, a| m | self.down(a))
    }

    pub fn is_order_ideal(&self, mask: u32) -> bool {
        self.downset(mask) == mask
    }

    pub fn top(&self) -> Option<usize> {
        (0..self.n).find(|&t| (0..self.n).all(|a| self.le(a, t)))
    }

    /// The semilattice as a restriction semigroup with `x* = x+ = x`.
    pub fn to_rsemigroup(&self) -> RSemigroup {
        let id: Vec<usize> = (0..self.n).collect();
        RSemigroup::from_trusted(self.n, self.meet.clone(), id.clone(), id)
    }

    /// Recovers a semilattice from a restriction semigroup whose elements are all projections.
    pub fn from_rsemigroup(s: &RSemigroup) -> Result<Self> {
        if let Some(a) = (0..s.order()).find(|&a| !s.is_projection(a)) {
            return Err(Error::PreconditionFailed { condition: "all elements are projections".into(), witness: vec![a] });
        }
        Semilattice::new(s.order(), s.mul_table().to_vec())
    }

    /// Checks that `f` preserves meets into `target`.
    pub fn check_morphism(&self, target: &Semilattice, f: &[usize]) -> Result<()> {
        if f.len() != self.n || f.iter().any(|&v| v >= target.n) {
            return Err(Error::DimensionMismatch("map does not fit the carriers".into()));
        }
        for a in 0..self.n {
            for b in 0..self.n {
                if f[self.meet(a, b)] != target.meet(f[a], f[b]) {
                    return Err(Error::NotSemilatticeMorphism { witness: vec![a, b] });
                }
            }
        }
        Ok(())
    }

    /// Every meet-preserving map into `target`.
    pub fn morphisms_to(&self, target: &Semilattice) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut f = vec![0; self.n];
        self.extend_morphism(target, 0, &mut f, &mut out);
        out
    }

    fn extend_morphism(&self, target: &Semilattice, a: usize, f: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if a == self.n {
            out.push(f.clone());
            return;
        }
        for v in 0..target.n {
            f[a] = v;
            let ok = (0..=a).all(|b| {
                let m = self.meet(a, b);
                m > a || f[m] == target.meet(v, f[b])
            });
            if ok {
                self.extend_morphism(target, a + 1, f, out);
            }
        }
    }

    /// Order isomorphisms from the ideal `a↓` onto `b↓`, each as `(point, image)` pairs.
    pub fn ideal_isomorphisms(&self, a: usize, b: usize) -> Vec<Vec<(usize, usize)>> {
        let dom: Vec<usize> = (0..self.n).filter(|&x| self.le(x, a)).collect();
        let cod: Vec<usize> = (0..self.n).filter(|&x| self.le(x, b)).collect();
        let mut out = Vec::new();
        if dom.len() != cod.len() {
            return out;
        }
        let mut img = vec![usize::MAX; dom.len()];
        self.extend_iso(&dom, &cod, 0, &mut img, &mut out);
        out
    }

    fn extend_iso(&self, dom: &[usize], cod: &[usize], i: usize, img: &mut Vec<usize>, out: &mut Vec<Vec<(usize, usize)>>) {
        if i == dom.len() {
            out.push(dom.iter().copied().zip(img.iter().copied()).collect());
            return;
        }
        for &y in cod {
            if img[..i].contains(&y) {
                continue;
            }
            let respects = (0..i).all(|j| {
                self.le(dom[j], dom[i]) == self.le(img[j], y) && self.le(dom[i], dom[j]) == self.le(y, img[j])
            });
            if respects {
                img[i] = y;
                self.extend_iso(dom, cod, i + 1, img, out);
            }
        }
        img[i] = usize::MAX;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_order() {
        let y = Semilattice::chain(3);
        assert!(y.le(0, 2) && !y.le(2, 1));
        assert_eq!(y.down(1), 0b011);
        assert_eq!(y.top(), Some(2));
    }

    #[test]
    fn morphisms_of_two_chain_into_itself() {
        let y = Semilattice::chain(2);
        // constant maps and the identity
        assert_eq!(y.morphisms_to(&y), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn non_commutative_table_rejected() {
        assert!(matches!(Semilattice::new(2, vec![0, 0, 1, 1]), Err(Error::AxiomViolation { .. })));
    }
}
