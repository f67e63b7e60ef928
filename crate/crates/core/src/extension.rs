//! Proper extensions `ψ: T → S`, their two underlying premorphisms on the
//! projections of `T`, the reconstruction of `T` as a partial action
//! product, and the order-proper / extra proper / perfect / F-morphism
//! classification.

use crate::algebra::{RSMorphism, RSemigroup};
use crate::error::{ensure, mismatch, Error, Result};
use crate::partial_maps::munn_map;
use crate::pbij::PBij;
use crate::premorphism::{
    check_action_conditions, check_pm_conditions, check_premorphism, evaluate, ActionTriple, Flag, PremorphReport,
    SymmetricInverse, TableCodomain,
};
use crate::product::{partial_action_product, ProductRS};
use crate::semilattice::Semilattice;

/// A proper morphism `ψ: T → S`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProperExt {
    psi: RSMorphism,
}

impl ProperExt {
    pub fn new(psi: RSMorphism) -> Result<Self> {
        if !is_proper_morphism(&psi)? {
            let reason = if psi.surjective { "two elements with equal image are not compatible" } else { "not surjective" };
            return Err(Error::NotProper(reason.into()));
        }
        Ok(ProperExt { psi })
    }

    /// The identity of `s`, which is always proper.
    pub fn identity(s: &RSemigroup) -> Self {
        ProperExt { psi: RSMorphism::identity(s) }
    }

    pub fn psi(&self) -> &RSMorphism {
        &self.psi
    }

    /// The extension `T`.
    pub fn top(&self) -> &RSemigroup {
        &self.psi.source
    }

    /// The base `S`.
    pub fn base(&self) -> &RSemigroup {
        &self.psi.target
    }
}

/// Whether `psi` is proper.
///
/// Decided from the definition (surjective, equal images imply compatible)
/// and checked against injectivity on classes with a common `*` or `+`, and
/// against reflection of compatibility.
pub fn is_proper_morphism(psi: &RSMorphism) -> Result<bool> {
    let t = &psi.source;
    let s = &psi.target;
    let n = t.order();
    let same = |a: usize, b: usize| psi.map[a] == psi.map[b];
    let definition = psi.surjective && (0..n).all(|a| (0..n).all(|b| !same(a, b) || t.compatible(a, b)));
    let injective = psi.surjective
        && (0..n).all(|a| {
            (0..n).all(|b| a == b || !same(a, b) || (t.star(a) != t.star(b) && t.plus(a) != t.plus(b)))
        });
    let reflects = psi.surjective
        && (0..n).all(|a| (0..n).all(|b| t.compatible(a, b) == s.compatible(psi.map[a], psi.map[b])));
    ensure(definition == injective && definition == reflects && definition == psi.proper, || {
        format!("properness tests disagree: definition {definition}, injectivity {injective}, reflection {reflects}")
    })?;
    if definition {
        ensure(psi.projection_pure, || "proper morphism is not projection pure".into())?;
    }
    Ok(definition)
}

struct Projections {
    list: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl Projections {
    fn of(t: &RSemigroup) -> Self {
        let list = t.projections();
        let mut position = vec![None; t.order()];
        for (i, &e) in list.iter().enumerate() {
            position[e] = Some(i);
        }
        Projections { list, position }
    }

    fn pos(&self, e: usize) -> usize {
        self.position[e].expect("projection")
    }
}

/// Which elements of `T` may witness membership in the domain at `s`.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Witnesses {
    /// `ψ(t) ≤ s`
    Below,
    /// `ψ(t) = s`
    Exact,
}

fn underlying(ext: &ProperExt, mode: Witnesses) -> Result<ActionTriple> {
    let t = ext.top();
    let s = ext.base();
    let psi = &ext.psi.map;
    let p = Projections::of(t);
    let k = p.list.len();
    let mut maps = Vec::with_capacity(s.order());
    for a in 0..s.order() {
        let witnesses: Vec<usize> = (0..t.order())
            .filter(|&u| match mode {
                Witnesses::Below => s.le(psi[u], a),
                Witnesses::Exact => psi[u] == a,
            })
            .collect();
        let mut pairs = Vec::new();
        for (i, &e) in p.list.iter().enumerate() {
            let mut values = witnesses.iter().filter(|&&u| t.le(e, t.star(u))).map(|&u| p.pos(t.plus(t.mul(u, e))));
            if let Some(v) = values.next() {
                if values.any(|w| w != v) {
                    return Err(mismatch(format!("underlying map at {a} is not well defined at projection {e}")));
                }
                pairs.push((i, v));
            }
        }
        let f = PBij::from_pairs(k, &pairs).map_err(|_| mismatch(format!("underlying map at {a} is not injective")))?;
        // Range and inverse through the dual description.
        for (i, &e) in p.list.iter().enumerate() {
            let mut back = witnesses.iter().filter(|&&u| t.le(e, t.plus(u))).map(|&u| p.pos(t.star(t.mul(e, u))));
            let expected = f.apply_inverse(i);
            ensure(back.next() == expected, || format!("range of underlying map at {a} is not described by plus"))?;
        }
        maps.push(f);
    }
    for e in s.projections() {
        ensure(maps[e].is_partial_identity(), || format!("projection {e} does not act identically"))?;
    }
    let phi = check_premorphism(s, k, maps).map_err(|e| mismatch(format!("underlying map is not a premorphism: {e}")))?;
    let q = p.list.iter().map(|&e| psi[e]).collect();
    let triple = ActionTriple::new(phi, q, Semilattice::of_projections(t))?;
    let flags = check_action_conditions(&triple)?;
    ensure(flags.base(), || "underlying triple fails a base action condition".into())?;
    match mode {
        Witnesses::Below => ensure(flags.a3a, || "upper underlying triple is not extension-closed".into())?,
        Witnesses::Exact => ensure(flags.a3b, || "lower underlying triple is not generated at s*".into())?,
    }
    Ok(triple)
}

/// The premorphism `s ↦ (e ↦ (te)+)` over witnesses `ψ(t) ≤ s`, as an action triple on `P(T)`.
pub fn upper_underlying(ext: &ProperExt) -> Result<ActionTriple> {
    underlying(ext, Witnesses::Below)
}

/// The same over witnesses `ψ(t) = s`.
pub fn lower_underlying(ext: &ProperExt) -> Result<ActionTriple> {
    let lower = underlying(ext, Witnesses::Exact)?;
    let upper = underlying(ext, Witnesses::Below)?;
    let s = ext.base();
    for a in 0..s.order() {
        ensure(lower.phi.maps[a].le(&upper.phi.maps[a]), || format!("lower map at {a} is not a restriction of the upper"))?;
    }
    // Compatible elements act alike where both are defined.
    for a in 0..s.order() {
        for b in 0..s.order() {
            if !s.compatible(a, b) {
                continue;
            }
            for maps in [&lower.phi.maps, &upper.phi.maps] {
                let common = maps[a].domain() & maps[b].domain();
                ensure(maps[a].restrict(common) == maps[b].restrict(common), || {
                    format!("compatible {a},{b} act differently on a common point")
                })?;
            }
        }
    }
    Ok(lower)
}

/// `T` rebuilt as a partial action product, with the isomorphism onto it.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub product: ProductRS,
    /// `eta[t]` is the index of `(t+, ψ(t))` in the product.
    pub eta: Vec<usize>,
}

/// Rebuilds `T` from the upper underlying premorphism, checks that the lower
/// one gives the same product, and that `t ↦ (t+, ψ(t))` is an isomorphism
/// over `S`.
pub fn decompose(ext: &ProperExt) -> Result<Decomposition> {
    let t = ext.top();
    let upper = partial_action_product(&upper_underlying(ext)?)?;
    let lower = partial_action_product(&lower_underlying(ext)?)?;
    ensure(upper.pairs == lower.pairs && upper.algebra.same_tables(&lower.algebra), || {
        "upper and lower products differ".into()
    })?;
    let p = Projections::of(t);
    let eta = (0..t.order())
        .map(|u| upper.index_of(p.pos(t.plus(u)), ext.psi.map[u]).ok_or_else(|| mismatch(format!("(t+, psi t) missing for {u}"))))
        .collect::<Result<Vec<_>>>()?;
    let eta_morphism = RSMorphism::new(t, &upper.algebra, eta.clone()).map_err(|e| mismatch(format!("eta: {e}")))?;
    ensure(eta_morphism.surjective && t.order() == upper.algebra.order(), || "eta is not bijective".into())?;
    for u in 0..t.order() {
        ensure(upper.psi.map[eta[u]] == ext.psi.map[u], || format!("projection after eta differs from psi at {u}"))?;
    }
    Ok(Decomposition { product: upper, eta })
}

/// Largest element of each fibre, or the first element whose fibre has none.
pub fn fiber_maxima(psi: &RSMorphism) -> std::result::Result<Vec<usize>, usize> {
    let t = &psi.source;
    (0..psi.target.order())
        .map(|a| {
            let fiber = psi.fiber(a);
            fiber.iter().copied().find(|&m| fiber.iter().all(|&u| t.le(u, m))).ok_or(a)
        })
        .collect()
}

/// For a surjective morphism whose fibres all have maxima, checks that it is
/// proper. Returns whether the hypothesis applied.
pub fn check_maxima_imply_proper(psi: &RSMorphism) -> Result<bool> {
    if !psi.surjective || fiber_maxima(psi).is_err() {
        return Ok(false);
    }
    ensure(is_proper_morphism(psi)?, || "surjective morphism with fibre maxima is not proper".into())?;
    Ok(true)
}

/// The map to fibre maxima.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauOutcome {
    Maxima { map: Vec<usize>, report: PremorphReport },
    /// The fibre over this element has no maximum.
    NoMaxima { element: usize },
}

/// Builds `s ↦ max ψ⁻¹(s)`, checks it is a premorphism into `T`, and that
/// composing it with the Munn representation of `T` gives the lower
/// underlying premorphism.
pub fn tau(ext: &ProperExt) -> Result<TauOutcome> {
    let map = match fiber_maxima(&ext.psi) {
        Ok(m) => m,
        Err(element) => return Ok(TauOutcome::NoMaxima { element }),
    };
    let t = ext.top();
    let s = ext.base();
    let cod = TableCodomain::new(t);
    check_pm_conditions(s, &cod, &map).map_err(|e| mismatch(format!("fibre maxima do not form a premorphism: {e}")))?;
    let lower = lower_underlying(ext)?;
    for a in 0..s.order() {
        ensure(munn_map(t, map[a]) == lower.phi.maps[a], || format!("Munn image of the maximum over {a} is not the lower map"))?;
    }
    Ok(TauOutcome::Maxima { report: evaluate(s, &cod, &map), map })
}

/// Monoid-specific notion: proper, and the product of two `σ`-classes is a `σ`-class.
pub fn is_almost_perfect(t: &RSemigroup) -> Result<bool> {
    if !t.is_proper()? {
        return Ok(false);
    }
    let sigma = t.sigma()?;
    for a in sigma.blocks() {
        for b in sigma.blocks() {
            let mut product: Vec<usize> = a.iter().flat_map(|&x| b.iter().map(move |&y| t.mul(x, y))).collect();
            product.sort_unstable();
            product.dedup();
            let class = &sigma.blocks()[sigma.block_of(product[0])];
            if product != *class {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Classification of a proper extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionReport {
    pub order_proper: bool,
    pub extra_proper_right: bool,
    pub extra_proper_left: bool,
    pub perfect: bool,
    pub has_fiber_maxima: bool,
    /// `None` when some fibre has no maximum.
    pub f_morphism: Option<bool>,
    pub fa_morphism: Option<bool>,
    pub perfect_f: Option<bool>,
}

impl ExtensionReport {
    pub fn extra_proper(&self) -> bool {
        self.extra_proper_right && self.extra_proper_left
    }

    pub fn to_text(&self) -> String {
        let opt = |v: Option<bool>| v.map_or("n/a".to_string(), |b| b.to_string());
        format!(
            "order-proper: {}\nextra-proper: {}\nextra-proper-right: {}\nextra-proper-left: {}\nperfect: {}\nfiber-maxima: {}\nF-morphism: {}\nFA-morphism: {}\nperfect-F-morphism: {}\n",
            self.order_proper,
            self.extra_proper(),
            self.extra_proper_right,
            self.extra_proper_left,
            self.perfect,
            self.has_fiber_maxima,
            opt(self.f_morphism),
            opt(self.fa_morphism),
            opt(self.perfect_f),
        )
    }
}

fn agree(what: &str, values: &[bool]) -> Result<bool> {
    if values.windows(2).all(|w| w[0] == w[1]) {
        Ok(values[0])
    } else {
        Err(Error::EquivalenceViolation(format!("{what}: characterizations give {values:?}")))
    }
}

/// Elements of `T` lying over `s↓`.
fn over_downset(ext: &ProperExt, a: usize) -> Vec<bool> {
    (0..ext.top().order()).map(|u| ext.base().le(ext.psi.map[u], a)).collect()
}

/// Classifies the extension, computing each property through every
/// available characterization and requiring them to agree.
pub fn classify_extension(ext: &ProperExt) -> Result<ExtensionReport> {
    let t = ext.top();
    let s = ext.base();
    let psi = &ext.psi.map;
    let upper = upper_underlying(ext)?;
    let lower = lower_underlying(ext)?;
    let cod = SymmetricInverse { carrier: upper.carrier() };
    let hat = evaluate(s, &cod, &upper.phi.maps);
    let tilde = evaluate(s, &cod, &lower.phi.maps);
    ensure(hat.get(Flag::Op), || "upper underlying premorphism is not order-preserving".into())?;

    let lifts = (0..s.order()).all(|a| {
        (0..s.order()).filter(|&b| s.le(a, b)).all(|b| {
            ext.psi.fiber(a).iter().all(|&u| ext.psi.fiber(b).iter().any(|&v| t.le(u, v)))
        })
    });
    let downsets_match = (0..s.order()).all(|a| {
        let fiber = ext.psi.fiber(a);
        let generated: Vec<bool> = (0..t.order()).map(|u| fiber.iter().any(|&v| t.le(u, v))).collect();
        generated == over_downset(ext, a)
    });
    let order_proper = agree(
        "order-proper",
        &[tilde.get(Flag::Op), upper.phi.maps == lower.phi.maps, lifts, downsets_match],
    )?;

    let extra_proper_right = agree("extra proper (right)", &[hat.get(Flag::LSr), hat.get(Flag::Sr), tilde.get(Flag::LSr)])?;
    let extra_proper_left = agree("extra proper (left)", &[hat.get(Flag::LSl), hat.get(Flag::Sl), tilde.get(Flag::LSl)])?;

    let setwise = (0..s.order()).all(|a| {
        (0..s.order()).all(|b| {
            let (da, db) = (over_downset(ext, a), over_downset(ext, b));
            let mut product = vec![false; t.order()];
            for u in (0..t.order()).filter(|&u| da[u]) {
                for v in (0..t.order()).filter(|&v| db[v]) {
                    product[t.mul(u, v)] = true;
                }
            }
            product == over_downset(ext, s.mul(a, b))
        })
    });
    let perfect = agree("perfect", &[hat.get(Flag::M), hat.get(Flag::LM), tilde.get(Flag::LM), setwise])?;

    if s.is_reduced() {
        ensure(perfect == is_almost_perfect(t)?, || "over a monoid, perfect differs from almost perfect".into())?;
    }
    if let Some((u, v)) = (0..t.order()).flat_map(|u| (0..t.order()).map(move |v| (u, v))).find(|&(u, v)| {
        psi[u] == psi[v] && !t.compatible(u, v)
    }) {
        return Err(Error::NotProper(format!("{u} and {v} share an image but are not compatible")));
    }

    let (has_fiber_maxima, f_morphism, fa_morphism, perfect_f) = match tau(ext)? {
        TauOutcome::NoMaxima { .. } => (false, None, None, None),
        TauOutcome::Maxima { report, .. } => {
            for (name, of_tau, of_tilde) in [
                ("order-preserving", report.get(Flag::Op), tilde.get(Flag::Op)),
                ("locally strong", report.locally_strong(), tilde.locally_strong()),
                ("strong", report.strong(), tilde.strong()),
                ("locally multiplicative", report.get(Flag::LM), tilde.get(Flag::LM)),
                ("multiplicative", report.get(Flag::M), tilde.get(Flag::M)),
            ] {
                if of_tau != of_tilde {
                    return Err(Error::EquivalenceViolation(format!("fibre-maximum map and lower premorphism differ on {name}")));
                }
            }
            let f = report.get(Flag::Op);
            (true, Some(f), Some(f && report.locally_strong()), Some(f && perfect))
        }
    };

    Ok(ExtensionReport {
        order_proper,
        extra_proper_right,
        extra_proper_left,
        perfect,
        has_fiber_maxima,
        f_morphism,
        fa_morphism,
        perfect_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::partial_maps::munn_map;

    #[test]
    fn identity_recovers_munn_representation() {
        for s in [fixtures::y2(), fixtures::sa(), fixtures::i2()] {
            let ext = ProperExt::identity(&s);
            let upper = upper_underlying(&ext).unwrap();
            let munn: Vec<PBij> = (0..s.order()).map(|a| munn_map(&s, a)).collect();
            assert_eq!(upper.phi.maps, munn);
            assert_eq!(lower_underlying(&ext).unwrap().phi.maps, munn);
        }
    }

    #[test]
    fn product_projection_decomposes_back() {
        let p = partial_action_product(&fixtures::sa_on_y2()).unwrap();
        let ext = ProperExt::new(p.psi.clone()).unwrap();
        let d = decompose(&ext).unwrap();
        assert!(crate::canon::are_isomorphic(&d.product.algebra, &p.algebra));
    }

    #[test]
    fn collapsing_y2_is_not_proper() {
        let psi = RSMorphism::new(&fixtures::y2(), &fixtures::trivial(), vec![0, 0]).unwrap();
        assert!(psi.surjective);
        // x and y are compatible in a semilattice, so the collapse is proper
        assert!(is_proper_morphism(&psi).unwrap());
        let psi = RSMorphism::new(&fixtures::i2(), &fixtures::trivial(), vec![0; 7]).unwrap();
        assert!(!is_proper_morphism(&psi).unwrap());
    }
}
