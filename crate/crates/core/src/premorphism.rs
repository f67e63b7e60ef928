//! Premorphisms into symmetric inverse monoids, the partial actions they
//! encode, and the family of strongness and multiplicativity conditions.

use std::collections::BTreeMap;
use std::fmt::{self, Debug};

use crate::algebra::RSemigroup;
use crate::error::{ensure, Error, Result};
use crate::partial_maps::munn_map;
use crate::pbij::PBij;
use crate::semilattice::Semilattice;

/// Operations a premorphism codomain must provide.
pub trait Codomain {
    type Elem: Clone + PartialEq + Debug;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn star(&self, a: &Self::Elem) -> Self::Elem;
    fn plus(&self, a: &Self::Elem) -> Self::Elem;
    fn le(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        *a == self.mul(b, &self.star(a))
    }
    fn compatible(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.mul(a, &self.star(b)) == self.mul(b, &self.star(a)) && self.mul(&self.plus(b), a) == self.mul(&self.plus(a), b)
    }
    /// Present only when the codomain is an inverse semigroup.
    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
}

/// The symmetric inverse monoid on `carrier` points.
#[derive(Clone, Copy, Debug)]
pub struct SymmetricInverse {
    pub carrier: usize,
}

impl Codomain for SymmetricInverse {
    type Elem = PBij;
    fn mul(&self, a: &PBij, b: &PBij) -> PBij {
        a.compose(b)
    }
    fn star(&self, a: &PBij) -> PBij {
        a.star()
    }
    fn plus(&self, a: &PBij) -> PBij {
        a.plus()
    }
    fn le(&self, a: &PBij, b: &PBij) -> bool {
        a.le(b)
    }
    fn inverse(&self, a: &PBij) -> Option<PBij> {
        Some(a.inverse())
    }
}

/// A finite restriction semigroup used as a codomain.
pub struct TableCodomain<'a> {
    pub algebra: &'a RSemigroup,
    inverses: Option<Vec<usize>>,
}

impl<'a> TableCodomain<'a> {
    pub fn new(algebra: &'a RSemigroup) -> Self {
        TableCodomain { algebra, inverses: algebra.inverses() }
    }
}

impl Codomain for TableCodomain<'_> {
    type Elem = usize;
    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.algebra.mul(*a, *b)
    }
    fn star(&self, a: &usize) -> usize {
        self.algebra.star(*a)
    }
    fn plus(&self, a: &usize) -> usize {
        self.algebra.plus(*a)
    }
    fn inverse(&self, a: &usize) -> Option<usize> {
        self.inverses.as_ref().map(|inv| inv[*a])
    }
}

/// The conditions a map from a restriction semigroup can satisfy.
///
/// Primed variants quantify the same equation over a restricted set of pairs:
/// `'` over pairs with `s* ≤ t+` (right) or `t+ ≤ s*` (left), `''` over
/// pairs with `s* = t+`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Flag {
    Pm1,
    Pm2,
    Pm3,
    Op,
    Sr,
    Sl,
    LSr,
    LSl,
    LSrLe,
    LSlLe,
    LSrEq,
    LSlEq,
    M,
    LM,
    LMEq,
    LMr,
    LMl,
}

impl Flag {
    pub const ALL: [Flag; 17] = [
        Flag::Pm1,
        Flag::Pm2,
        Flag::Pm3,
        Flag::Op,
        Flag::Sr,
        Flag::Sl,
        Flag::LSr,
        Flag::LSl,
        Flag::LSrLe,
        Flag::LSlLe,
        Flag::LSrEq,
        Flag::LSlEq,
        Flag::M,
        Flag::LM,
        Flag::LMEq,
        Flag::LMr,
        Flag::LMl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flag::Pm1 => "PM1",
            Flag::Pm2 => "PM2",
            Flag::Pm3 => "PM3",
            Flag::Op => "OP",
            Flag::Sr => "Sr",
            Flag::Sl => "Sl",
            Flag::LSr => "LSr",
            Flag::LSl => "LSl",
            Flag::LSrLe => "LSr'",
            Flag::LSlLe => "LSl'",
            Flag::LSrEq => "LSr''",
            Flag::LSlEq => "LSl''",
            Flag::M => "M",
            Flag::LM => "LM",
            Flag::LMEq => "LM'",
            Flag::LMr => "LMr",
            Flag::LMl => "LMl",
        }
    }

    pub fn parse(name: &str) -> Option<Flag> {
        Flag::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A filter over classification results: a flag name or one of the
/// composite names `strong`, `locally-strong`, `inv`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Requirement {
    Flag(Flag),
    Strong,
    LocallyStrong,
    Inv,
}

impl Requirement {
    pub fn parse(name: &str) -> Option<Requirement> {
        match name.to_ascii_lowercase().as_str() {
            "strong" => Some(Requirement::Strong),
            "locally-strong" | "locally_strong" => Some(Requirement::LocallyStrong),
            "inv" => Some(Requirement::Inv),
            _ => Flag::parse(name).map(Requirement::Flag),
        }
    }

    pub fn holds(self, report: &PremorphReport) -> bool {
        match self {
            Requirement::Flag(f) => report.get(f),
            Requirement::Strong => report.strong(),
            Requirement::LocallyStrong => report.locally_strong(),
            Requirement::Inv => report.inv == Some(true),
        }
    }
}

/// Which side of the local strongness conditions an instance separates.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Right,
    Left,
}

/// Truth value of every condition, with the first failing witness of each.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PremorphReport {
    flags: BTreeMap<Flag, bool>,
    /// `φ(s⁻¹) = φ(s)⁻¹`; only defined when source and codomain are inverse.
    pub inv: Option<bool>,
    pub witnesses: BTreeMap<Flag, Vec<usize>>,
    /// Set when the `s* = t+` form of a local strongness condition holds but
    /// the `s* ≤ t+` form does not.
    pub separating_side: Option<Side>,
}

impl PremorphReport {
    pub fn get(&self, flag: Flag) -> bool {
        self.flags[&flag]
    }

    pub fn is_premorphism(&self) -> bool {
        self.get(Flag::Pm1) && self.get(Flag::Pm2) && self.get(Flag::Pm3)
    }

    pub fn strong(&self) -> bool {
        self.get(Flag::Sr) && self.get(Flag::Sl)
    }

    pub fn locally_strong(&self) -> bool {
        self.get(Flag::LSr) && self.get(Flag::LSl)
    }

    pub fn multiplicative(&self) -> bool {
        self.get(Flag::M)
    }

    /// Flat `key: value` lines in a fixed order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for flag in Flag::ALL {
            out.push_str(&format!("{}: {}\n", flag, self.get(flag)));
        }
        out.push_str(&format!("strong: {}\n", self.strong()));
        out.push_str(&format!("locally-strong: {}\n", self.locally_strong()));
        let inv = match self.inv {
            Some(v) => v.to_string(),
            None => "n/a".into(),
        };
        out.push_str(&format!("Inv: {inv}\n"));
        for (flag, w) in &self.witnesses {
            out.push_str(&format!("witness {}: {}\n", flag, join(w)));
        }
        if let Some(side) = self.separating_side {
            out.push_str(&format!("separates-local-strongness: {side:?}\n"));
        }
        out
    }
}

pub(crate) fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Evaluates every condition for the map `s ↦ images[s]`.
pub fn evaluate<C: Codomain>(source: &RSemigroup, cod: &C, images: &[C::Elem]) -> PremorphReport {
    let n = source.order();
    let s_ = |a: usize| source.star(a);
    let p_ = |a: usize| source.plus(a);
    let m_ = |a: usize, b: usize| source.mul(a, b);
    let phi = |a: usize| &images[a];
    let mul = |a: &C::Elem, b: &C::Elem| cod.mul(a, b);
    let star = |a: &C::Elem| cod.star(a);
    let plus = |a: &C::Elem| cod.plus(a);

    let mut flags = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    let mut record = |flag: Flag, witness: Option<Vec<usize>>| {
        flags.insert(flag, witness.is_none());
        if let Some(w) = witness {
            witnesses.insert(flag, w);
        }
    };
    let pairs = |pred: &dyn Fn(usize, usize) -> bool| -> Option<Vec<usize>> {
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find(|&(a, b)| !pred(a, b)).map(|(a, b)| vec![a, b])
    };
    let singles = |pred: &dyn Fn(usize) -> bool| -> Option<Vec<usize>> { (0..n).find(|&a| !pred(a)).map(|a| vec![a]) };

    // φ(s)φ(t) = φ(st)φ(t)*
    let sr_eq = |s: usize, t: usize| mul(phi(s), phi(t)) == mul(phi(m_(s, t)), &star(phi(t)));
    // φ(s)φ(t) = φ(s)+φ(st)
    let sl_eq = |s: usize, t: usize| mul(phi(s), phi(t)) == mul(&plus(phi(s)), phi(m_(s, t)));
    let m_eq = |s: usize, t: usize| mul(phi(s), phi(t)) == *phi(m_(s, t));

    record(Flag::Pm1, pairs(&|s, t| cod.le(&mul(phi(s), phi(t)), phi(m_(s, t)))));
    record(Flag::Pm2, singles(&|s| cod.le(&star(phi(s)), phi(s_(s)))));
    record(Flag::Pm3, singles(&|s| cod.le(&plus(phi(s)), phi(p_(s)))));
    record(Flag::Op, pairs(&|s, t| !source.le(s, t) || cod.le(phi(s), phi(t))));
    record(Flag::Sr, pairs(&sr_eq));
    record(Flag::Sl, pairs(&sl_eq));
    record(
        Flag::LSr,
        pairs(&|s, t| mul(phi(m_(s, p_(t))), phi(t)) == mul(phi(m_(s, t)), &star(phi(t)))),
    );
    record(
        Flag::LSl,
        pairs(&|s, t| mul(phi(s), phi(m_(s_(s), t))) == mul(&plus(phi(s)), phi(m_(s, t)))),
    );
    record(Flag::LSrLe, pairs(&|s, t| !source.le(s_(s), p_(t)) || sr_eq(s, t)));
    record(Flag::LSlLe, pairs(&|s, t| !source.le(p_(t), s_(s)) || sl_eq(s, t)));
    record(Flag::LSrEq, pairs(&|s, t| s_(s) != p_(t) || sr_eq(s, t)));
    record(Flag::LSlEq, pairs(&|s, t| s_(s) != p_(t) || sl_eq(s, t)));
    record(Flag::M, pairs(&m_eq));
    record(Flag::LM, pairs(&|s, t| mul(phi(m_(s, p_(t))), phi(m_(s_(s), t))) == *phi(m_(s, t))));
    record(Flag::LMEq, pairs(&|s, t| s_(s) != p_(t) || m_eq(s, t)));
    record(Flag::LMr, pairs(&|s, t| mul(phi(m_(s, p_(t))), phi(t)) == *phi(m_(s, t))));
    record(Flag::LMl, pairs(&|s, t| mul(phi(s), phi(m_(s_(s), t))) == *phi(m_(s, t))));

    let inv = source.inverses().and_then(|inv| {
        let imgs: Option<Vec<C::Elem>> = images.iter().map(|e| cod.inverse(e)).collect();
        imgs.map(|imgs| (0..n).all(|s| *phi(inv[s]) == imgs[s]))
    });

    let separating_side = if flags[&Flag::LSrEq] && !flags[&Flag::LSrLe] {
        Some(Side::Right)
    } else if flags[&Flag::LSlEq] && !flags[&Flag::LSlLe] {
        Some(Side::Left)
    } else {
        None
    };
    PremorphReport { flags, inv, witnesses, separating_side }
}

/// Checks the implications and equivalences that hold for every premorphism.
///
/// `inverse_setting` says that the source and codomain are both inverse
/// semigroups, which enables the extra equivalences with `Inv`.
pub fn cross_check(r: &PremorphReport, inverse_setting: bool) -> Result<()> {
    let fail = |what: &str| Err(Error::EquivalenceViolation(what.to_string()));
    let g = |f| r.get(f);
    if !r.is_premorphism() {
        return fail("cross-check requires a premorphism");
    }
    if g(Flag::LSr) != g(Flag::LSrLe) {
        return fail("LSr <=> LSr'");
    }
    if g(Flag::LSl) != g(Flag::LSlLe) {
        return fail("LSl <=> LSl'");
    }
    if g(Flag::LSrLe) && !g(Flag::LSrEq) {
        return fail("LSr' => LSr''");
    }
    if g(Flag::LSlLe) && !g(Flag::LSlEq) {
        return fail("LSl' => LSl''");
    }
    if g(Flag::Sr) != (g(Flag::LSr) && g(Flag::Op)) {
        return fail("Sr <=> LSr and OP");
    }
    if g(Flag::Sl) != (g(Flag::LSl) && g(Flag::Op)) {
        return fail("Sl <=> LSl and OP");
    }
    if r.strong() != (r.locally_strong() && g(Flag::Op)) {
        return fail("strong <=> locally strong and OP");
    }
    let m = g(Flag::M);
    for (f, name) in [(Flag::LM, "M <=> LM and OP"), (Flag::LMr, "M <=> LMr and OP"), (Flag::LMl, "M <=> LMl and OP")] {
        if m != (g(f) && g(Flag::Op)) {
            return fail(name);
        }
    }
    if g(Flag::LM) != g(Flag::LMEq) {
        return fail("LM <=> LM'");
    }
    if m && !(g(Flag::LM) && g(Flag::Op)) {
        return fail("M => LM and OP");
    }
    if inverse_setting {
        let inv = r.inv.unwrap_or(false);
        if !(g(Flag::Sr) == g(Flag::Sl) && g(Flag::Sl) == r.strong()) {
            return fail("inverse setting: Sr <=> Sl <=> strong");
        }
        for f in [Flag::LSrLe, Flag::LSlLe, Flag::LSrEq, Flag::LSlEq] {
            if g(f) != inv {
                return fail(&format!("inverse setting: {f} <=> Inv"));
            }
        }
        if r.locally_strong() != inv {
            return fail("inverse setting: locally strong <=> Inv");
        }
        if r.strong() != (inv && g(Flag::Op)) {
            return fail("inverse setting: strong <=> Inv and OP");
        }
    }
    Ok(())
}

/// A premorphism into the symmetric inverse monoid on `carrier` points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Premorph {
    pub source: RSemigroup,
    pub carrier: usize,
    pub maps: Vec<PBij>,
}

/// Validates the premorphism conditions, then checks that projections go to
/// partial identities and that compatible elements have compatible images.
pub fn check_premorphism(source: &RSemigroup, carrier: usize, maps: Vec<PBij>) -> Result<Premorph> {
    if maps.len() != source.order() {
        return Err(Error::DimensionMismatch(format!("{} maps for {} elements", maps.len(), source.order())));
    }
    if let Some(f) = maps.iter().find(|f| f.carrier() != carrier) {
        return Err(Error::DimensionMismatch(format!("{f} acts on {} points, expected {carrier}", f.carrier())));
    }
    check_pm_conditions(source, &SymmetricInverse { carrier }, &maps)?;
    Ok(Premorph { source: source.clone(), carrier, maps })
}

/// The premorphism conditions for an arbitrary codomain, followed by the
/// consequences every premorphism has.
pub fn check_pm_conditions<C: Codomain>(source: &RSemigroup, cod: &C, images: &[C::Elem]) -> Result<()> {
    let n = source.order();
    for s in 0..n {
        for t in 0..n {
            if !cod.le(&cod.mul(&images[s], &images[t]), &images[source.mul(s, t)]) {
                return Err(Error::PMViolation { condition: "PM1".into(), witness: vec![s, t] });
            }
        }
    }
    if let Some(s) = (0..n).find(|&s| !cod.le(&cod.star(&images[s]), &images[source.star(s)])) {
        return Err(Error::PMViolation { condition: "PM2".into(), witness: vec![s] });
    }
    if let Some(s) = (0..n).find(|&s| !cod.le(&cod.plus(&images[s]), &images[source.plus(s)])) {
        return Err(Error::PMViolation { condition: "PM3".into(), witness: vec![s] });
    }
    for e in source.projections() {
        ensure(cod.star(&images[e]) == images[e], || format!("image of projection {e} is not a projection"))?;
    }
    for s in 0..n {
        for t in 0..n {
            if source.compatible(s, t) {
                ensure(cod.compatible(&images[s], &images[t]), || format!("compatible {s},{t} have incompatible images"))?;
            }
        }
    }
    Ok(())
}

/// Classifies a premorphism and checks every proven relation between the
/// conditions on it.
pub fn classify(phi: &Premorph) -> Result<PremorphReport> {
    let report = evaluate(&phi.source, &SymmetricInverse { carrier: phi.carrier }, &phi.maps);
    cross_check(&report, phi.source.inverses().is_some())?;
    Ok(report)
}

impl Premorph {
    /// The Munn representation as a premorphism on the projections of `s`.
    pub fn munn(s: &RSemigroup) -> Premorph {
        Premorph { source: s.clone(), carrier: s.projections().len(), maps: (0..s.order()).map(|a| munn_map(s, a)).collect() }
    }

    pub fn codomain(&self) -> SymmetricInverse {
        SymmetricInverse { carrier: self.carrier }
    }
}

/// A partial left action: `act[s][x]` is `s·x` when defined.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LeftAction {
    pub carrier: usize,
    pub act: Vec<Vec<Option<usize>>>,
}

/// A partial right action: `act[x][s]` is `x∘s` when defined.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RightAction {
    pub carrier: usize,
    pub act: Vec<Vec<Option<usize>>>,
}

fn action_violation(condition: &str, witness: Vec<usize>) -> Error {
    Error::PreconditionFailed { condition: condition.into(), witness }
}

/// Checks the left action axioms: each `s·-` injective; `t·(s·x)` defined
/// implies `ts·x = t·(s·x)`; `s·x` defined implies `s*·x = x` and `s+·(s·x)` defined.
pub fn check_left_action(source: &RSemigroup, action: &LeftAction) -> Result<()> {
    let n = source.order();
    let x_range = 0..action.carrier;
    if action.act.len() != n || action.act.iter().any(|row| row.len() != action.carrier) {
        return Err(Error::DimensionMismatch("left action table shape".into()));
    }
    for s in 0..n {
        for x in x_range.clone() {
            for y in x_range.clone() {
                if x != y && action.act[s][x].is_some() && action.act[s][x] == action.act[s][y] {
                    return Err(action_violation("left action injective", vec![s, x, y]));
                }
            }
        }
    }
    for s in 0..n {
        for x in x_range.clone() {
            let Some(sx) = action.act[s][x] else { continue };
            for t in 0..n {
                if let Some(tsx) = action.act[t][sx] {
                    if action.act[source.mul(t, s)][x] != Some(tsx) {
                        return Err(action_violation("left action composition", vec![s, t, x]));
                    }
                }
            }
            if action.act[source.star(s)][x] != Some(x) {
                return Err(action_violation("left action domain projection", vec![s, x]));
            }
            if action.act[source.plus(s)][sx].is_none() {
                return Err(action_violation("left action range projection", vec![s, x]));
            }
        }
    }
    Ok(())
}

/// Checks the right action axioms, the mirror image of [`check_left_action`].
pub fn check_right_action(source: &RSemigroup, action: &RightAction) -> Result<()> {
    let n = source.order();
    let c = action.carrier;
    if action.act.len() != c || action.act.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch("right action table shape".into()));
    }
    for s in 0..n {
        for x in 0..c {
            for y in 0..c {
                if x != y && action.act[x][s].is_some() && action.act[x][s] == action.act[y][s] {
                    return Err(action_violation("right action injective", vec![s, x, y]));
                }
            }
        }
    }
    for x in 0..c {
        for s in 0..n {
            let Some(xs) = action.act[x][s] else { continue };
            for t in 0..n {
                if let Some(xst) = action.act[xs][t] {
                    if action.act[x][source.mul(s, t)] != Some(xst) {
                        return Err(action_violation("right action composition", vec![x, s, t]));
                    }
                }
            }
            if action.act[x][source.plus(s)] != Some(x) {
                return Err(action_violation("right action range projection", vec![x, s]));
            }
            if action.act[xs][source.star(s)].is_none() {
                return Err(action_violation("right action domain projection", vec![x, s]));
            }
        }
    }
    Ok(())
}

/// `s·x = φ_s(x)`, checked against the left action axioms.
pub fn premorph_to_left_action(phi: &Premorph) -> Result<LeftAction> {
    let act = phi.maps.iter().map(|f| (0..phi.carrier).map(|x| f.apply(x)).collect()).collect();
    let action = LeftAction { carrier: phi.carrier, act };
    check_left_action(&phi.source, &action)?;
    Ok(action)
}

/// Rebuilds the premorphism from a validated left action.
pub fn left_action_to_premorph(source: &RSemigroup, action: &LeftAction) -> Result<Premorph> {
    check_left_action(source, action)?;
    let maps = action
        .act
        .iter()
        .map(|row| {
            let pairs: Vec<(usize, usize)> = row.iter().enumerate().filter_map(|(x, y)| y.map(|y| (x, y))).collect();
            PBij::from_pairs(action.carrier, &pairs)
        })
        .collect::<Result<Vec<_>>>()?;
    check_premorphism(source, action.carrier, maps)
}

/// `x∘s = φ_s⁻¹(x)`.
pub fn left_to_right_action(source: &RSemigroup, action: &LeftAction) -> Result<RightAction> {
    let mut act = vec![vec![None; source.order()]; action.carrier];
    for (s, row) in action.act.iter().enumerate() {
        for (x, y) in row.iter().enumerate() {
            if let Some(y) = *y {
                act[y][s] = Some(x);
            }
        }
    }
    let right = RightAction { carrier: action.carrier, act };
    check_right_action(source, &right)?;
    Ok(right)
}

pub fn right_to_left_action(source: &RSemigroup, action: &RightAction) -> Result<LeftAction> {
    check_right_action(source, action)?;
    let mut act = vec![vec![None; action.carrier]; source.order()];
    for (x, row) in action.act.iter().enumerate() {
        for (s, y) in row.iter().enumerate() {
            if let Some(y) = *y {
                act[s][y] = Some(x);
            }
        }
    }
    let left = LeftAction { carrier: action.carrier, act };
    check_left_action(source, &left)?;
    Ok(left)
}

/// A premorphism into the partial bijections of a semilattice, together with
/// a meet-preserving map `q` from the semilattice onto projections of the source.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ActionTriple {
    pub phi: Premorph,
    /// `q[y]` is an element index of the source, always a projection.
    pub q: Vec<usize>,
    pub lattice: Semilattice,
}

impl ActionTriple {
    pub fn new(phi: Premorph, q: Vec<usize>, lattice: Semilattice) -> Result<Self> {
        let s = &phi.source;
        if lattice.size() != phi.carrier || q.len() != phi.carrier {
            return Err(Error::DimensionMismatch("carrier, lattice and q sizes differ".into()));
        }
        if let Some(y) = (0..q.len()).find(|&y| q[y] >= s.order() || !s.is_projection(q[y])) {
            return Err(Error::PreconditionFailed { condition: "q maps to projections".into(), witness: vec![y] });
        }
        for a in 0..q.len() {
            for b in 0..q.len() {
                if q[lattice.meet(a, b)] != s.mul(q[a], q[b]) {
                    return Err(Error::NotSemilatticeMorphism { witness: vec![a, b] });
                }
            }
        }
        Ok(ActionTriple { phi, q, lattice })
    }

    pub fn source(&self) -> &RSemigroup {
        &self.phi.source
    }

    pub fn carrier(&self) -> usize {
        self.phi.carrier
    }

    /// Bitmask of `q⁻¹(e)`.
    pub fn fiber(&self, e: usize) -> u32 {
        (0..self.carrier()).filter(|&y| self.q[y] == e).fold(0, |m, y| m | 1 << y)
    }

    /// Bitmask of `q⁻¹(e↓)`.
    pub fn fiber_below(&self, e: usize) -> u32 {
        (0..self.carrier()).filter(|&y| self.source().le(self.q[y], e)).fold(0, |m, y| m | 1 << y)
    }
}

/// Which of the action triple conditions hold.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ActionFlags {
    /// Domains and ranges are order ideals.
    pub a1: bool,
    /// Each map is an order isomorphism.
    pub a2: bool,
    /// `q⁻¹(e)↓ ⊆ dom φ_e ⊆ q⁻¹(e↓)` for projections `e`.
    pub a3: bool,
    /// `dom φ_s` meets `q⁻¹(s*)`.
    pub a4: bool,
    /// `dom φ_s ⊆ dom φ_{s*}` and `ran φ_s ⊆ ran φ_{s+}`.
    pub a5: bool,
    /// Domains are unions over smaller elements of their `q`-fibres.
    pub a3a: bool,
    /// Domains are generated by their `q`-fibre at `s*`.
    pub a3b: bool,
    pub witnesses: BTreeMap<&'static str, Vec<usize>>,
}

impl ActionFlags {
    pub fn base(&self) -> bool {
        self.a1 && self.a2 && self.a3 && self.a4
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in [
            ("A1", self.a1),
            ("A2", self.a2),
            ("A3", self.a3),
            ("A4", self.a4),
            ("A5", self.a5),
            ("A3a", self.a3a),
            ("A3b", self.a3b),
        ] {
            out.push_str(&format!("{k}: {v}\n"));
        }
        for (k, w) in &self.witnesses {
            out.push_str(&format!("witness {k}: {}\n", join(w)));
        }
        out
    }
}

fn is_subset(a: u32, b: u32) -> bool {
    a & !b == 0
}

/// Evaluates the action triple conditions, then checks their consequences
/// whenever the base conditions hold.
pub fn check_action_conditions(triple: &ActionTriple) -> Result<ActionFlags> {
    let flags = action_flags(triple);
    ensure(flags.a5, || "premorphism without nested domains".into())?;
    if flags.base() {
        check_base_consequences(triple, &flags)?;
    }
    Ok(flags)
}

pub(crate) fn action_flags(triple: &ActionTriple) -> ActionFlags {
    let s = triple.source();
    let y = &triple.lattice;
    let maps = &triple.phi.maps;
    let n = s.order();
    let mut flags = ActionFlags::default();
    let mut w: BTreeMap<&'static str, Vec<usize>> = BTreeMap::new();

    let a1 = (0..n).find(|&a| !y.is_order_ideal(maps[a].domain()) || !y.is_order_ideal(maps[a].range()));
    flags.a1 = a1.is_none();
    if let Some(a) = a1 {
        w.insert("A1", vec![a]);
    }

    let a2 = (0..n).find(|&a| {
        maps[a].pairs().any(|(x1, y1)| maps[a].pairs().any(|(x2, y2)| y.le(x1, x2) != y.le(y1, y2)))
    });
    flags.a2 = a2.is_none();
    if let Some(a) = a2 {
        w.insert("A2", vec![a]);
    }

    let a3 = s.projections().into_iter().find(|&e| {
        let dom = maps[e].domain();
        !(is_subset(y.downset(triple.fiber(e)), dom) && is_subset(dom, triple.fiber_below(e)))
    });
    flags.a3 = a3.is_none();
    if let Some(e) = a3 {
        w.insert("A3", vec![e]);
    }

    let a4 = (0..n).find(|&a| maps[a].domain() & triple.fiber(s.star(a)) == 0);
    flags.a4 = a4.is_none();
    if let Some(a) = a4 {
        w.insert("A4", vec![a]);
    }

    let a5 = (0..n).find(|&a| {
        !is_subset(maps[a].domain(), maps[s.star(a)].domain()) || !is_subset(maps[a].range(), maps[s.plus(a)].range())
    });
    flags.a5 = a5.is_none();
    if let Some(a) = a5 {
        w.insert("A5", vec![a]);
    }

    let a3a = (0..n).find(|&a| {
        let generated = (0..n).filter(|&t| s.le(t, a)).fold(0, |m, t| m | (maps[t].domain() & triple.fiber(s.star(t))));
        generated != maps[a].domain()
    });
    flags.a3a = a3a.is_none();
    if let Some(a) = a3a {
        w.insert("A3a", vec![a]);
    }

    let a3b = (0..n).find(|&a| {
        let dom = maps[a].domain();
        y.downset(dom & triple.fiber(s.star(a))) != dom
    });
    flags.a3b = a3b.is_none();
    if let Some(a) = a3b {
        w.insert("A3b", vec![a]);
    }
    flags.witnesses = w;
    flags
}

fn check_base_consequences(triple: &ActionTriple, flags: &ActionFlags) -> Result<()> {
    let s = triple.source();
    let maps = &triple.phi.maps;
    let q = &triple.q;
    if flags.a3a {
        for e in s.projections() {
            ensure(maps[e].domain() == triple.fiber_below(e), || format!("domain of projection {e} is not q^-1(e down)"))?;
        }
        let report = evaluate(s, &triple.phi.codomain(), maps);
        ensure(report.get(Flag::Op), || "extension-closed triple is not order-preserving".into())?;
    }
    if flags.a3b {
        for e in s.projections() {
            ensure(maps[e].domain() == triple.lattice.downset(triple.fiber(e)), || {
                format!("domain of projection {e} is not q^-1(e) down")
            })?;
        }
    }
    for a in 0..s.order() {
        for (x, fx) in maps[a].pairs() {
            ensure(q[fx] == s.plus(s.mul(a, q[x])), || format!("q(s.y) = (s q(y))+ fails at s={a}, y={x}"))?;
            ensure(q[x] == s.star(s.mul(q[fx], a)), || format!("q(y) = (q(s.y) s)* fails at s={a}, y={x}"))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn munn_representation_is_a_premorphism() {
        for s in [fixtures::y2(), fixtures::sa(), fixtures::i2()] {
            let phi = Premorph::munn(&s);
            let phi = check_premorphism(&phi.source, phi.carrier, phi.maps).unwrap();
            let report = classify(&phi).unwrap();
            assert!(report.multiplicative());
        }
    }

    #[test]
    fn pm1_failure_reports_pair() {
        let s = fixtures::sa();
        // the identity goes to a transposition, whose square is not below it
        let maps = vec![PBij::parse("[0>1,1>0]", 2).unwrap(), PBij::parse("[]", 2).unwrap()];
        let err = check_premorphism(&s, 2, maps).unwrap_err();
        assert_eq!(err, Error::PMViolation { condition: "PM1".into(), witness: vec![0, 0] });

        // a ↦ id, 1 ↦ a proper restriction of it: fails on the domain condition
        let maps = vec![PBij::parse("[0>0]", 2).unwrap(), PBij::parse("[0>0,1>1]", 2).unwrap()];
        let err = check_premorphism(&s, 2, maps).unwrap_err();
        assert_eq!(err, Error::PMViolation { condition: "PM2".into(), witness: vec![1] });
    }

    #[test]
    fn actions_round_trip() {
        let t = fixtures::sa_on_y2();
        let left = premorph_to_left_action(&t.phi).unwrap();
        let right = left_to_right_action(&t.phi.source, &left).unwrap();
        assert_eq!(right_to_left_action(&t.phi.source, &right).unwrap(), left);
        assert_eq!(left_action_to_premorph(&t.phi.source, &left).unwrap(), t.phi);
    }

    #[test]
    fn flag_names_parse_back() {
        for f in Flag::ALL {
            assert_eq!(Flag::parse(f.name()), Some(f));
        }
        assert_eq!(Requirement::parse("strong"), Some(Requirement::Strong));
    }
}
