//! Instance-level checks for the category of action triples over a fixed
//! restriction semigroup and the category of its proper extensions.
//!
//! Categorical statements become finite checks: universal properties are
//! quantified over a supplied family of objects and every semilattice map
//! between their carriers.

use crate::algebra::RSMorphism;
use crate::error::{ensure, mismatch, Error, Result};
use crate::extension::{decompose, upper_underlying, ProperExt};
use crate::pbij::PBij;
use crate::premorphism::{check_action_conditions, check_premorphism, ActionTriple};
use crate::product::{partial_action_product, ProductRS};

/// An action triple satisfying the base conditions, tagged with the two
/// subcategories it may belong to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AObject {
    pub triple: ActionTriple,
    /// Domains are extension-closed.
    pub in_hat: bool,
    /// Domains are generated at `s*`.
    pub in_tilde: bool,
}

impl AObject {
    pub fn new(triple: ActionTriple) -> Result<Self> {
        let flags = check_action_conditions(&triple)?;
        for (name, holds) in [("A1", flags.a1), ("A2", flags.a2), ("A3", flags.a3), ("A4", flags.a4)] {
            if !holds {
                let witness = flags.witnesses.get(name).cloned().unwrap_or_default();
                return Err(Error::PreconditionFailed { condition: name.into(), witness });
            }
        }
        if triple.source().is_reduced() {
            ensure(flags.a3a && flags.a3b, || "over a monoid every object is in both subcategories".into())?;
        }
        Ok(AObject { triple, in_hat: flags.a3a, in_tilde: flags.a3b })
    }

    pub fn carrier(&self) -> usize {
        self.triple.carrier()
    }

    fn maps(&self) -> &[PBij] {
        &self.triple.phi.maps
    }
}

/// A semilattice map between carriers with the morphism conditions it satisfies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AMorphism {
    pub from: AObject,
    pub to: AObject,
    pub f: Vec<usize>,
    /// The `q` maps commute with `f`.
    pub m1: bool,
    /// `f` carries domains into domains and commutes with the action.
    pub m2: bool,
    /// The same for ranges and inverse maps.
    pub m2r: bool,
    /// `f` maps the `s*`-fibre of each domain onto that of the target.
    pub m3: bool,
    /// The same for ranges and `s+`.
    pub m3r: bool,
}

impl AMorphism {
    pub fn is_morphism(&self) -> bool {
        self.m1 && self.m2
    }
}

fn image(f: &[usize], mask: u32) -> u32 {
    f.iter().enumerate().filter(|&(x, _)| mask >> x & 1 == 1).fold(0, |m, (_, &fx)| m | 1 << fx)
}

/// Evaluates the morphism conditions for `f` from `a` to `b`.
pub fn check_amorphism(a: &AObject, b: &AObject, f: &[usize]) -> Result<AMorphism> {
    a.triple.lattice.check_morphism(&b.triple.lattice, f)?;
    let s = a.triple.source();
    let (qa, qb) = (&a.triple.q, &b.triple.q);
    let (alpha, beta) = (a.maps(), b.maps());
    let m1 = (0..a.carrier()).all(|x| qa[x] == qb[f[x]]);
    let m2 = (0..s.order()).all(|t| alpha[t].pairs().all(|(x, ax)| beta[t].apply(f[x]) == Some(f[ax])));
    let m2r = (0..s.order()).all(|t| alpha[t].pairs().all(|(x, ax)| beta[t].apply_inverse(f[ax]) == Some(f[x])));
    let m3 = (0..s.order()).all(|t| {
        beta[t].domain() & b.triple.fiber(s.star(t)) == image(f, alpha[t].domain() & a.triple.fiber(s.star(t)))
    });
    let m3r = (0..s.order()).all(|t| {
        beta[t].range() & b.triple.fiber(s.plus(t)) == image(f, alpha[t].range() & a.triple.fiber(s.plus(t)))
    });
    ensure(m2 == m2r, || format!("domain and range forms of action compatibility differ for {f:?}"))?;
    if m1 && m2 {
        ensure(m3 == m3r, || format!("domain and range forms of fibre surjectivity differ for {f:?}"))?;
        if (a.in_hat && b.in_hat) || (a.in_tilde && b.in_tilde) {
            let domains_onto = (0..s.order()).all(|t| image(f, alpha[t].domain()) == beta[t].domain());
            ensure(m3 == domains_onto, || format!("fibre surjectivity differs from domain surjectivity for {f:?}"))?;
        }
    }
    Ok(AMorphism { from: a.clone(), to: b.clone(), f: f.to_vec(), m1, m2, m2r, m3, m3r })
}

fn rebuild(a: &AObject, maps: Vec<PBij>) -> Result<AObject> {
    let t = &a.triple;
    let phi = check_premorphism(t.source(), t.carrier(), maps)?;
    AObject::new(ActionTriple::new(phi, t.q.clone(), t.lattice.clone())?)
}

/// Extends each domain by the domains of smaller elements.
pub fn hat_f(a: &AObject) -> Result<AObject> {
    let s = a.triple.source();
    let k = a.carrier();
    let maps = (0..s.order())
        .map(|sv| {
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            for t in (0..s.order()).filter(|&t| s.le(t, sv)) {
                for (x, y) in a.maps()[t].pairs() {
                    match pairs.iter().find(|p| p.0 == x) {
                        Some(&(_, y0)) if y0 != y => return Err(mismatch(format!("smaller elements disagree at point {x}"))),
                        Some(_) => {}
                        None => pairs.push((x, y)),
                    }
                }
            }
            PBij::from_pairs(k, &pairs).map_err(|e| mismatch(format!("extended map is not injective: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let out = rebuild(a, maps)?;
    ensure(out.in_hat, || "extension of domains left the extension-closed subcategory".into())?;
    if a.in_hat {
        ensure(out == *a, || "extension of domains moved an extension-closed object".into())?;
    }
    Ok(out)
}

/// Restricts each domain to the ideal generated by its `s*`-fibre.
pub fn tilde_f(a: &AObject) -> Result<AObject> {
    let s = a.triple.source();
    let y = &a.triple.lattice;
    let maps = (0..s.order())
        .map(|t| {
            let f = a.maps()[t];
            f.restrict(y.downset(f.domain() & a.triple.fiber(s.star(t))))
        })
        .collect();
    let out = rebuild(a, maps)?;
    ensure(out.in_tilde, || "restriction of domains left the generated subcategory".into())?;
    if a.in_tilde {
        ensure(out == *a, || "restriction of domains moved a generated object".into())?;
    }
    Ok(out)
}

/// The functors act as the identity on underlying maps; checks that the map
/// is still a morphism between the images.
pub fn hat_f_mor(m: &AMorphism) -> Result<AMorphism> {
    let out = check_amorphism(&hat_f(&m.from)?, &hat_f(&m.to)?, &m.f)?;
    ensure(!m.is_morphism() || out.is_morphism(), || format!("extension of domains broke morphism {:?}", m.f))?;
    Ok(out)
}

pub fn tilde_f_mor(m: &AMorphism) -> Result<AMorphism> {
    let out = check_amorphism(&tilde_f(&m.from)?, &tilde_f(&m.to)?, &m.f)?;
    ensure(!m.is_morphism() || out.is_morphism(), || format!("restriction of domains broke morphism {:?}", m.f))?;
    Ok(out)
}

/// The product of the triple and its projection onto the acting semigroup.
pub fn functor_u(a: &AObject) -> Result<(ProductRS, ProperExt)> {
    let product = partial_action_product(&a.triple)?;
    let ext = ProperExt::new(product.psi.clone())?;
    Ok((product, ext))
}

/// `(x, s) ↦ (f(x), s)` between the two products.
pub fn functor_u_mor(m: &AMorphism) -> Result<RSMorphism> {
    ensure(m.is_morphism(), || "not a morphism of action triples".into())?;
    let (p1, _) = functor_u(&m.from)?;
    let (p2, _) = functor_u(&m.to)?;
    let map = p1
        .pairs
        .iter()
        .map(|&(x, s)| p2.index_of(m.f[x], s).ok_or_else(|| mismatch(format!("({}, {s}) is not in the target product", m.f[x]))))
        .collect::<Result<Vec<_>>>()?;
    let u = RSMorphism::new(&p1.algebra, &p2.algebra, map).map_err(|e| mismatch(format!("image of a morphism: {e}")))?;
    for i in 0..p1.pairs.len() {
        ensure(p2.psi.map[u.map[i]] == p1.psi.map[i], || "image of a morphism does not commute with the projections".into())?;
    }
    ensure(u.surjective == m.m3, || format!("surjectivity of the image differs from fibre surjectivity for {:?}", m.f))?;
    Ok(u)
}

/// The upper underlying triple of an extension.
pub fn functor_g_hat(e: &ProperExt) -> Result<AObject> {
    let out = AObject::new(upper_underlying(e)?)?;
    ensure(out.in_hat, || "underlying triple is not extension-closed".into())?;
    Ok(out)
}

/// Restriction of `gamma: T1 → T2` over `S` to projections.
pub fn functor_g_hat_mor(e1: &ProperExt, e2: &ProperExt, gamma: &RSMorphism) -> Result<AMorphism> {
    let (t1, t2) = (e1.top(), e2.top());
    ensure(gamma.source == *t1 && gamma.target == *t2, || "morphism does not join the two extensions".into())?;
    for u in 0..t1.order() {
        if e2.psi().map[gamma.map[u]] != e1.psi().map[u] {
            return Err(Error::PreconditionFailed { condition: "commutes with the maps to S".into(), witness: vec![u] });
        }
    }
    let (p1, p2) = (t1.projections(), t2.projections());
    let f: Vec<usize> = p1
        .iter()
        .map(|&e| p2.iter().position(|&g| g == gamma.map[e]).ok_or_else(|| mismatch("projection mapped off the projections")))
        .collect::<Result<_>>()?;
    let m = check_amorphism(&functor_g_hat(e1)?, &functor_g_hat(e2)?, &f)?;
    ensure(m.is_morphism(), || "restriction to projections is not a morphism of triples".into())?;
    if gamma.surjective {
        ensure(m.m3, || "surjective morphism restricts to a map without fibre surjectivity".into())?;
    }
    Ok(m)
}

/// Counts from a universal property check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub objects: usize,
    pub morphisms: usize,
}

fn valid_morphisms(a: &AObject, b: &AObject) -> Result<Vec<AMorphism>> {
    let mut out = Vec::new();
    for f in a.triple.lattice.morphisms_to(&b.triple.lattice) {
        let m = check_amorphism(a, b, &f)?;
        if m.is_morphism() {
            out.push(m);
        }
    }
    Ok(out)
}

/// Checks both universal properties at `a` against every object of `family`.
///
/// The unit `a → F̂(a)` and the counit `F̃(a) → a` are identity maps. For
/// each extension-closed `b` and morphism `g: a → b` there must be exactly
/// one morphism `h: F̂(a) → b` with `h = g`; dually for generated `b` and
/// `g: b → a`.
pub fn verify_adjunction_instance(a: &AObject, family: &[AObject]) -> Result<AdjunctionReport> {
    let id: Vec<usize> = (0..a.carrier()).collect();
    let hat = hat_f(a)?;
    let tilde = tilde_f(a)?;
    if !check_amorphism(a, &hat, &id)?.is_morphism() {
        return Err(Error::UniversalityFailure("unit is not a morphism".into()));
    }
    if !check_amorphism(&tilde, a, &id)?.is_morphism() {
        return Err(Error::UniversalityFailure("counit is not a morphism".into()));
    }
    let mut report = AdjunctionReport::default();
    for b in family {
        report.objects += 1;
        if b.in_hat {
            let through: Vec<Vec<usize>> = valid_morphisms(&hat, b)?.into_iter().map(|m| m.f).collect();
            for g in valid_morphisms(a, b)? {
                report.morphisms += 1;
                if through.iter().filter(|h| **h == g.f).count() != 1 {
                    return Err(Error::UniversalityFailure(format!("{:?} does not factor uniquely through the unit", g.f)));
                }
            }
        }
        if b.in_tilde {
            let through: Vec<Vec<usize>> = valid_morphisms(b, &tilde)?.into_iter().map(|m| m.f).collect();
            for g in valid_morphisms(b, a)? {
                report.morphisms += 1;
                if through.iter().filter(|h| **h == g.f).count() != 1 {
                    return Err(Error::UniversalityFailure(format!("{:?} does not factor uniquely through the counit", g.f)));
                }
            }
        }
    }
    Ok(report)
}

/// Round trips between the two subcategories.
pub fn verify_round_trip(a: &AObject) -> Result<()> {
    if a.in_hat {
        ensure(hat_f(&tilde_f(a)?)? == *a, || "restricting then extending moved an extension-closed object".into())?;
    }
    if a.in_tilde {
        ensure(tilde_f(&hat_f(a)?)? == *a, || "extending then restricting moved a generated object".into())?;
    }
    Ok(())
}

/// `x ↦ (x, q(x))` from `a` to the underlying triple of its product,
/// checked to be an isomorphism of triples.
pub fn unit_iso(a: &AObject) -> Result<AMorphism> {
    ensure(a.in_hat, || "equivalence is stated for extension-closed objects".into())?;
    let (product, ext) = functor_u(a)?;
    let back = functor_g_hat(&ext)?;
    let positions = product.algebra.projections();
    let f = (0..a.carrier())
        .map(|x| {
            let idx = product.index_of(x, a.triple.q[x]).ok_or_else(|| mismatch(format!("({x}, q({x})) is not in the product")))?;
            positions.iter().position(|&p| p == idx).ok_or_else(|| mismatch(format!("({x}, q({x})) is not a projection")))
        })
        .collect::<Result<Vec<_>>>()?;
    let forward = check_amorphism(a, &back, &f)?;
    let mut inverse = vec![usize::MAX; f.len()];
    for (x, &fx) in f.iter().enumerate() {
        inverse[fx] = x;
    }
    ensure(f.len() == back.carrier() && inverse.iter().all(|&v| v != usize::MAX), || "unit map is not a bijection".into())?;
    let backward = check_amorphism(&back, a, &inverse)?;
    ensure(forward.is_morphism() && backward.is_morphism(), || "unit map is not an isomorphism of triples".into())?;
    Ok(forward)
}

/// Naturality of the unit isomorphism along a morphism of triples.
pub fn check_unit_naturality(m: &AMorphism) -> Result<()> {
    let u = unit_iso(&m.from)?;
    let v = unit_iso(&m.to)?;
    let (p1, _) = functor_u(&m.from)?;
    let (p2, _) = functor_u(&m.to)?;
    let gu = functor_u_mor(m)?;
    let (proj1, proj2) = (p1.algebra.projections(), p2.algebra.projections());
    for x in 0..m.from.carrier() {
        let around = proj2.iter().position(|&p| p == gu.map[proj1[u.f[x]]]);
        ensure(around == Some(v.f[m.f[x]]), || format!("unit square fails at point {x}"))?;
    }
    Ok(())
}

/// Naturality of `t ↦ (t+, ψ(t))` along `gamma: e1 → e2`.
pub fn check_counit_naturality(e1: &ProperExt, e2: &ProperExt, gamma: &RSMorphism) -> Result<()> {
    let d1 = decompose(e1)?;
    let d2 = decompose(e2)?;
    let g = functor_g_hat_mor(e1, e2, gamma)?;
    let ug = functor_u_mor(&g)?;
    ensure(ug.source.same_tables(&d1.product.algebra) && ug.target.same_tables(&d2.product.algebra), || {
        "image of the restricted morphism joins the wrong products".into()
    })?;
    for t in 0..e1.top().order() {
        ensure(ug.map[d1.eta[t]] == d2.eta[gamma.map[t]], || format!("counit square fails at {t}"))?;
    }
    Ok(())
}

/// Both halves of the equivalence at one extension and one triple.
pub fn verify_equivalence_instance(e: &ProperExt, a: &AObject) -> Result<()> {
    unit_iso(a)?;
    decompose(e)?;
    Ok(())
}

/// Whether every object of `family` is in both subcategories.
pub fn all_in_both(family: &[AObject]) -> bool {
    family.iter().all(|a| a.in_hat && a.in_tilde)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::premorphism::Premorph;

    fn sa_object() -> AObject {
        AObject::new(fixtures::sa_on_y2()).unwrap()
    }

    #[test]
    fn identity_satisfies_everything() {
        let a = sa_object();
        let m = check_amorphism(&a, &a, &[0, 1]).unwrap();
        assert!(m.m1 && m.m2 && m.m2r && m.m3 && m.m3r);
    }

    #[test]
    fn monoid_objects_are_in_both_subcategories() {
        let a = sa_object();
        assert!(a.in_hat && a.in_tilde);
        assert_eq!(hat_f(&a).unwrap(), a);
        assert_eq!(tilde_f(&a).unwrap(), a);
    }

    #[test]
    fn munn_triple_is_recovered_from_identity_extension() {
        let s = fixtures::i2();
        let g = functor_g_hat(&ProperExt::identity(&s)).unwrap();
        assert_eq!(g.triple.phi, Premorph::munn(&s));
    }

    #[test]
    fn collapsing_map_breaks_commuting_q() {
        let s = fixtures::y2();
        let munn = functor_g_hat(&ProperExt::identity(&s)).unwrap();
        let m = check_amorphism(&munn, &munn, &[0, 0]).unwrap();
        assert!(!m.m1);
    }

    #[test]
    fn unit_iso_on_fixture() {
        let u = unit_iso(&sa_object()).unwrap();
        assert!(u.is_morphism());
        check_unit_naturality(&check_amorphism(&sa_object(), &sa_object(), &[0, 1]).unwrap()).unwrap();
    }
}
