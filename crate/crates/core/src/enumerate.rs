//! Exhaustive generation of small structures.
//!
//! Restriction semigroups are built by a table search that fixes the
//! projection semilattice first (at indices `0..k`), then the unary
//! operations of the remaining elements, then fills the product table with
//! incremental associativity checks. Every generated algebra is revalidated
//! through [`RSemigroup::new`], and isomorphic copies are removed by
//! canonical form.

use std::collections::BTreeSet;

use crate::algebra::{RSMorphism, RSemigroup};
use crate::canon::canonical_form;
use crate::error::{mismatch, Error, Result};
use crate::extension::ProperExt;
use crate::pbij::{all_partial_bijections, PBij};
use crate::premorphism::{
    action_flags, check_premorphism, evaluate, ActionTriple, Premorph, Requirement, Side, SymmetricInverse,
};
use crate::semilattice::Semilattice;

/// Bounds shared by the generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    pub max_semigroup_order: usize,
    pub max_carrier: usize,
    pub up_to_iso: bool,
    /// Generation stops with [`Error::SizeLimit`] past this many results.
    pub count_limit: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { max_semigroup_order: 6, max_carrier: 4, up_to_iso: true, count_limit: 1_000_000 }
    }
}

impl EnumConfig {
    fn check_order(&self, what: &str, n: usize) -> Result<()> {
        if n > self.max_semigroup_order {
            return Err(Error::SizeLimit { what: what.into(), count: n, limit: self.max_semigroup_order });
        }
        Ok(())
    }

    fn check_carrier(&self, k: usize) -> Result<()> {
        if k > self.max_carrier {
            return Err(Error::SizeLimit { what: "carrier".into(), count: k, limit: self.max_carrier });
        }
        Ok(())
    }

    fn check_count(&self, what: &str, count: usize) -> Result<()> {
        if count > self.count_limit {
            return Err(Error::SizeLimit { what: what.into(), count, limit: self.count_limit });
        }
        Ok(())
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    permutations(n - 1)
        .into_iter()
        .flat_map(|p| {
            (0..n).map(move |i| {
                let mut q = p.clone();
                q.insert(i, n - 1);
                q
            })
        })
        .collect()
}

/// Every relabelling of `reps`, deduplicated.
fn orbit_expand(reps: &[RSemigroup]) -> Vec<RSemigroup> {
    let mut out = Vec::new();
    for s in reps {
        let mut seen = BTreeSet::new();
        for perm in permutations(s.order()) {
            let t = s.relabel(&perm);
            if seen.insert(t.mul_table().iter().chain(t.star_table()).chain(t.plus_table()).copied().collect::<Vec<_>>()) {
                out.push(t);
            }
        }
    }
    out
}

/// All meet-semilattices on `n` elements.
pub fn enumerate_semilattices(n: usize, cfg: &EnumConfig) -> Result<Vec<Semilattice>> {
    cfg.check_order("semilattice", n)?;
    let mut meet = vec![usize::MAX; n * n];
    for a in 0..n {
        meet[a * n + a] = a;
    }
    let mut found = Vec::new();
    fill_meet(n, 0, 1, &mut meet, &mut found);
    let mut reps = Vec::new();
    let mut keys = BTreeSet::new();
    for table in found {
        let y = Semilattice::new(n, table).map_err(|e| mismatch(format!("generated meet table invalid: {e}")))?;
        if keys.insert(canonical_form(&y.to_rsemigroup(), &[]).key) {
            reps.push(y);
        }
    }
    let out = if cfg.up_to_iso {
        reps
    } else {
        let algebras: Vec<RSemigroup> = reps.iter().map(Semilattice::to_rsemigroup).collect();
        orbit_expand(&algebras)
            .iter()
            .map(|s| Semilattice::new(n, s.mul_table().to_vec()))
            .collect::<Result<Vec<_>>>()?
    };
    cfg.check_count("semilattices", out.len())?;
    Ok(out)
}

fn fill_meet(n: usize, a: usize, b: usize, meet: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if a + 1 >= n {
        out.push(meet.clone());
        return;
    }
    if b >= n {
        return fill_meet(n, a + 1, a + 2, meet, out);
    }
    for v in 0..n {
        meet[a * n + b] = v;
        meet[b * n + a] = v;
        if meet_consistent(n, meet) {
            fill_meet(n, a, b + 1, meet, out);
        }
    }
    meet[a * n + b] = usize::MAX;
    meet[b * n + a] = usize::MAX;
}

fn meet_consistent(n: usize, meet: &[usize]) -> bool {
    let get = |a: usize, b: usize| meet[a * n + b];
    (0..n).all(|a| {
        (0..n).all(|b| {
            let ab = get(a, b);
            ab == usize::MAX
                || (0..n).all(|c| {
                    let bc = get(b, c);
                    if bc == usize::MAX {
                        return true;
                    }
                    let (l, r) = (get(ab, c), get(a, bc));
                    l == usize::MAX || r == usize::MAX || l == r
                })
        })
    })
}

const UNSET: usize = usize::MAX;

/// A partially filled product table over fixed unary operations.
struct TableSearch {
    n: usize,
    star: Vec<usize>,
    plus: Vec<usize>,
    /// Allowed values per cell as a bitmask.
    allowed: Vec<u64>,
    mul: Vec<usize>,
}

impl TableSearch {
    /// Sets up the search; `None` when a forced cell contradicts the masks.
    fn new(n: usize, k: usize, meet: &Semilattice, star: Vec<usize>, plus: Vec<usize>, extra: impl Fn(usize, usize) -> u64) -> Option<Self> {
        let le = |e: usize, f: usize| meet.meet(e, f) == e;
        let mut allowed = vec![0u64; n * n];
        for x in 0..n {
            for y in 0..n {
                let mut mask = 0u64;
                for z in 0..n {
                    let ok = le(star[z], star[y])
                        && le(plus[z], plus[x])
                        && (x >= k || plus[z] == meet.meet(x, plus[y]))
                        && (y >= k || star[z] == meet.meet(star[x], y))
                        && (x >= k || y >= k || z == meet.meet(x, y));
                    if ok {
                        mask |= 1 << z;
                    }
                }
                allowed[x * n + y] = mask & extra(x, y);
            }
        }
        let mut search = TableSearch { n, star, plus, allowed, mul: vec![UNSET; n * n] };
        for x in 0..n {
            for (a, b) in [(x, search.star[x]), (search.plus[x], x)] {
                let cell = a * n + b;
                if search.allowed[cell] >> x & 1 == 0 {
                    return None;
                }
                search.allowed[cell] = 1 << x;
            }
        }
        Some(search)
    }

    fn get(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    /// Whether every identity that can already be evaluated holds.
    fn consistent(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                let xy = self.get(x, y);
                if xy == UNSET {
                    continue;
                }
                for z in 0..n {
                    let yz = self.get(y, z);
                    if yz == UNSET {
                        continue;
                    }
                    let (l, r) = (self.get(xy, z), self.get(x, yz));
                    if l != UNSET && r != UNSET && l != r {
                        return false;
                    }
                }
                // (xy)+x = xy+
                let (l, r) = (self.get(self.plus[xy], x), self.get(x, self.plus[y]));
                if l != UNSET && r != UNSET && l != r {
                    return false;
                }
                // y(xy)* = x*y
                let (l, r) = (self.get(y, self.star[xy]), self.get(self.star[x], y));
                if l != UNSET && r != UNSET && l != r {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, cell: usize, out: &mut Vec<RSemigroup>) {
        if cell == self.n * self.n {
            out.push(RSemigroup::from_trusted(self.n, self.mul.clone(), self.star.clone(), self.plus.clone()));
            return;
        }
        let mask = self.allowed[cell];
        for z in (0..self.n).filter(|&z| mask >> z & 1 == 1) {
            self.mul[cell] = z;
            if self.consistent() {
                self.run(cell + 1, out);
            }
        }
        self.mul[cell] = UNSET;
    }
}

/// Non-decreasing sequences of `(star, plus)` choices for `count` elements.
fn unary_choices(count: usize, options: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn go(count: usize, from: usize, options: &[(usize, usize)], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if cur.len() == count {
            out.push(cur.clone());
            return;
        }
        for i in from..options.len() {
            cur.push(options[i]);
            go(count, i, options, cur, out);
            cur.pop();
        }
    }
    go(count, 0, options, &mut cur, &mut out);
    out
}

/// Revalidates raw search output and keeps one algebra per class of the key.
fn dedup_validated(raw: Vec<RSemigroup>, colours: impl Fn(&RSemigroup) -> Vec<usize>) -> Result<Vec<RSemigroup>> {
    let mut keys = BTreeSet::new();
    let mut out = Vec::new();
    for s in raw {
        let s = RSemigroup::new(s.order(), s.mul_table().to_vec(), s.star_table().to_vec(), s.plus_table().to_vec())
            .map_err(|e| mismatch(format!("search produced an invalid algebra: {e}")))?;
        if keys.insert(canonical_form(&s, &colours(&s)).key) {
            out.push(s);
        }
    }
    Ok(out)
}

/// All restriction semigroups of order `n`.
///
/// Up to isomorphism, projections come first in each representative.
pub fn enumerate_restriction_semigroups(n: usize, cfg: &EnumConfig) -> Result<Vec<RSemigroup>> {
    cfg.check_order("restriction semigroup", n)?;
    if n == 0 {
        return Ok(vec![]);
    }
    let mut raw = Vec::new();
    for k in 1..=n {
        for y in enumerate_semilattices(k, &EnumConfig { up_to_iso: true, ..*cfg })? {
            let options: Vec<(usize, usize)> = (0..k).flat_map(|e| (0..k).map(move |f| (e, f))).collect();
            for choice in unary_choices(n - k, &options) {
                let star: Vec<usize> = (0..k).chain(choice.iter().map(|c| c.0)).collect();
                let plus: Vec<usize> = (0..k).chain(choice.iter().map(|c| c.1)).collect();
                if let Some(mut search) = TableSearch::new(n, k, &y, star, plus, |_, _| u64::MAX) {
                    search.run(0, &mut raw);
                }
            }
        }
    }
    let reps = dedup_validated(raw, |_| vec![])?;
    let out = if cfg.up_to_iso { reps } else { orbit_expand(&reps) };
    cfg.check_count("restriction semigroups", out.len())?;
    Ok(out)
}

/// All restriction semigroups of order at most `max`, up to isomorphism.
pub fn restriction_semigroups_up_to(max: usize, cfg: &EnumConfig) -> Result<Vec<RSemigroup>> {
    let cfg = EnumConfig { up_to_iso: true, ..*cfg };
    let mut out = Vec::new();
    for n in 1..=max {
        out.extend(enumerate_restriction_semigroups(n, &cfg)?);
    }
    Ok(out)
}

/// Compositions of `total` into `parts` positive summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (1..=total.saturating_sub(parts - 1))
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// All proper morphisms onto `s` from restriction semigroups of order `order`.
///
/// Up to isomorphism over `s`: two extensions are identified when an
/// isomorphism of the extended algebras commutes with the maps to `s`.
pub fn enumerate_proper_extensions(order: usize, s: &RSemigroup, cfg: &EnumConfig) -> Result<Vec<ProperExt>> {
    cfg.check_order("extension", order)?;
    let ps = s.projections();
    let non_projections: Vec<usize> = (0..s.order()).filter(|&a| !s.is_projection(a)).collect();
    let ps_lattice = Semilattice::of_projections(s);
    let mut raw: Vec<(RSemigroup, Vec<usize>)> = Vec::new();
    for k in ps.len()..=order.saturating_sub(non_projections.len()) {
        for y in enumerate_semilattices(k, &EnumConfig { up_to_iso: true, ..*cfg })? {
            for q in y.morphisms_to(&ps_lattice) {
                let q: Vec<usize> = q.iter().map(|&i| ps[i]).collect();
                if ps.iter().any(|e| !q.contains(e)) {
                    continue;
                }
                for sizes in compositions(order - k, non_projections.len()) {
                    let mut psi = q.clone();
                    for (&a, &size) in non_projections.iter().zip(&sizes) {
                        psi.extend(std::iter::repeat(a).take(size));
                    }
                    fiber_search(s, &y, k, &psi, &non_projections, &sizes, &mut raw);
                }
            }
        }
    }
    let mut keys = BTreeSet::new();
    let mut out = Vec::new();
    for (t, psi) in raw {
        let t = RSemigroup::new(t.order(), t.mul_table().to_vec(), t.star_table().to_vec(), t.plus_table().to_vec())
            .map_err(|e| mismatch(format!("fibre search produced an invalid algebra: {e}")))?;
        let morphism = RSMorphism::new(&t, s, psi.clone()).map_err(|e| mismatch(format!("fibre search broke the morphism: {e}")))?;
        let Ok(ext) = ProperExt::new(morphism) else { continue };
        if keys.insert(canonical_form(&t, &psi).key) {
            out.push(ext);
            cfg.check_count("proper extensions", out.len())?;
        }
    }
    Ok(out)
}

fn fiber_search(
    s: &RSemigroup,
    y: &Semilattice,
    k: usize,
    psi: &[usize],
    non_projections: &[usize],
    sizes: &[usize],
    out: &mut Vec<(RSemigroup, Vec<usize>)>,
) {
    let n = psi.len();
    let fiber_mask = |a: usize| (0..n).filter(|&x| psi[x] == a).fold(0u64, |m, x| m | 1 << x);
    // Per non-projection fibre, the candidate (star, plus) sequences.
    let per_fiber: Vec<Vec<Vec<(usize, usize)>>> = non_projections
        .iter()
        .zip(sizes)
        .map(|(&a, &size)| {
            let stars: Vec<usize> = (0..k).filter(|&e| psi[e] == s.star(a)).collect();
            let pluses: Vec<usize> = (0..k).filter(|&e| psi[e] == s.plus(a)).collect();
            let options: Vec<(usize, usize)> = stars.iter().flat_map(|&e| pluses.iter().map(move |&f| (e, f))).collect();
            // Distinct elements of a fibre of a proper map have distinct stars and pluses.
            unary_choices(size, &options)
                .into_iter()
                .filter(|c| {
                    c.iter().enumerate().all(|(i, p)| c[..i].iter().all(|r| r.0 != p.0 && r.1 != p.1))
                })
                .collect()
        })
        .collect();
    let mut choice = vec![0usize; per_fiber.len()];
    if per_fiber.iter().any(Vec::is_empty) {
        return;
    }
    loop {
        let mut star: Vec<usize> = (0..k).collect();
        let mut plus: Vec<usize> = (0..k).collect();
        for (f, &c) in per_fiber.iter().zip(&choice) {
            star.extend(f[c].iter().map(|p| p.0));
            plus.extend(f[c].iter().map(|p| p.1));
        }
        let extra = |a: usize, b: usize| fiber_mask(s.mul(psi[a], psi[b]));
        if let Some(mut search) = TableSearch::new(n, k, y, star, plus, extra) {
            let mut found = Vec::new();
            search.run(0, &mut found);
            out.extend(found.into_iter().map(|t| (t, psi.to_vec())));
        }
        // Advance the mixed-radix counter over fibres.
        let mut i = 0;
        loop {
            if i == choice.len() {
                return;
            }
            choice[i] += 1;
            if choice[i] < per_fiber[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Proper extensions of `s` with at most `max_order` elements.
pub fn proper_extensions_up_to(max_order: usize, s: &RSemigroup, cfg: &EnumConfig) -> Result<Vec<ProperExt>> {
    let mut out = Vec::new();
    for m in s.order()..=max_order {
        out.extend(enumerate_proper_extensions(m, s, cfg)?);
    }
    Ok(out)
}

/// Which premorphism conditions prune the search.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Pruning {
    /// All of PM1, PM2, PM3.
    Premorphism,
    /// PM1 only, for testing which conditions imply the other two.
    Pm1Only,
}

/// Maps `s ↦ φ_s` into the partial bijections of `carrier` points, drawn
/// from per-element candidate lists, that pass the chosen pruning.
fn search_maps(s: &RSemigroup, candidates: &[Vec<PBij>], pruning: Pruning, limit: usize) -> Result<Vec<Vec<PBij>>> {
    let n = s.order();
    let mut out = Vec::new();
    let mut cur: Vec<PBij> = Vec::with_capacity(n);
    fn ok(s: &RSemigroup, cur: &[PBij], pruning: Pruning) -> bool {
        let a = cur.len() - 1;
        let have = |x: usize| x < cur.len();
        // Only constraints mentioning the newest element can have changed.
        for x in 0..cur.len() {
            for y in 0..cur.len() {
                let xy = s.mul(x, y);
                if have(xy) && (x == a || y == a || xy == a) && !cur[x].compose(&cur[y]).le(&cur[xy]) {
                    return false;
                }
            }
        }
        if pruning == Pruning::Premorphism {
            for x in 0..cur.len() {
                let (xs, xp) = (s.star(x), s.plus(x));
                if have(xs) && (x == a || xs == a) && !cur[x].star().le(&cur[xs]) {
                    return false;
                }
                if have(xp) && (x == a || xp == a) && !cur[x].plus().le(&cur[xp]) {
                    return false;
                }
            }
        }
        true
    }
    fn go(
        s: &RSemigroup,
        candidates: &[Vec<PBij>],
        pruning: Pruning,
        limit: usize,
        cur: &mut Vec<PBij>,
        out: &mut Vec<Vec<PBij>>,
    ) -> Result<()> {
        if cur.len() == s.order() {
            out.push(cur.clone());
            if out.len() > limit {
                return Err(Error::SizeLimit { what: "premorphisms".into(), count: out.len(), limit });
            }
            return Ok(());
        }
        for f in &candidates[cur.len()] {
            cur.push(*f);
            if ok(s, cur, pruning) {
                go(s, candidates, pruning, limit, cur, out)?;
            }
            cur.pop();
        }
        Ok(())
    }
    go(s, candidates, pruning, limit, &mut cur, &mut out)?;
    Ok(out)
}

/// All premorphisms from `s` on `carrier` points satisfying every requirement.
pub fn enumerate_premorphisms(s: &RSemigroup, carrier: usize, filters: &[Requirement], cfg: &EnumConfig) -> Result<Vec<Premorph>> {
    cfg.check_carrier(carrier)?;
    let all = all_partial_bijections(carrier);
    let candidates = vec![all; s.order()];
    let cod = SymmetricInverse { carrier };
    let mut out = Vec::new();
    for maps in search_maps(s, &candidates, Pruning::Premorphism, cfg.count_limit)? {
        let phi = check_premorphism(s, carrier, maps).map_err(|e| mismatch(format!("search produced a non-premorphism: {e}")))?;
        let report = evaluate(s, &cod, &phi.maps);
        if filters.iter().all(|f| f.holds(&report)) {
            out.push(phi);
        }
    }
    Ok(out)
}

/// Maps satisfying PM1 alone, unfiltered by the unary conditions.
pub fn enumerate_pm1_maps(s: &RSemigroup, carrier: usize, cfg: &EnumConfig) -> Result<Vec<Vec<PBij>>> {
    cfg.check_carrier(carrier)?;
    let candidates = vec![all_partial_bijections(carrier); s.order()];
    search_maps(s, &candidates, Pruning::Pm1Only, cfg.count_limit)
}

/// All action triples over `s` on carriers of size `1..=max_carrier` that
/// satisfy the base action conditions, one per semilattice class of the
/// carrier.
pub fn enumerate_action_triples(s: &RSemigroup, max_carrier: usize, cfg: &EnumConfig) -> Result<Vec<ActionTriple>> {
    cfg.check_carrier(max_carrier)?;
    let ps = s.projections();
    let ps_lattice = Semilattice::of_projections(s);
    let mut out = Vec::new();
    for k in 1..=max_carrier {
        for y in enumerate_semilattices(k, &EnumConfig { up_to_iso: true, ..*cfg })? {
            // Candidates with ideal domain and range that are order isomorphisms.
            let ideal_isos: Vec<PBij> = all_partial_bijections(k)
                .into_iter()
                .filter(|f| y.is_order_ideal(f.domain()) && y.is_order_ideal(f.range()))
                .filter(|f| f.pairs().all(|(a, fa)| f.pairs().all(|(b, fb)| y.le(a, b) == y.le(fa, fb))))
                .collect();
            for q in y.morphisms_to(&ps_lattice) {
                let q: Vec<usize> = q.iter().map(|&i| ps[i]).collect();
                let candidates: Vec<Vec<PBij>> = (0..s.order())
                    .map(|a| {
                        let star_fiber = (0..k).filter(|&x| q[x] == s.star(a)).fold(0u32, |m, x| m | 1 << x);
                        ideal_isos
                            .iter()
                            .filter(|f| f.domain() & star_fiber != 0)
                            .filter(|f| f.pairs().all(|(x, fx)| q[fx] == s.plus(s.mul(a, q[x]))))
                            .copied()
                            .collect()
                    })
                    .collect();
                for maps in search_maps(s, &candidates, Pruning::Premorphism, cfg.count_limit)? {
                    let phi = check_premorphism(s, k, maps)?;
                    let triple = ActionTriple::new(phi, q.clone(), y.clone())?;
                    if action_flags(&triple).base() {
                        out.push(triple);
                        cfg.check_count("action triples", out.len())?;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Outcome of the finite search for a premorphism separating the two forms
/// of local strongness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Question1Outcome {
    Witness { premorph: Premorph, side: Side },
    Exhausted { semigroups: usize, premorphisms: usize },
}

impl Question1Outcome {
    pub fn to_text(&self) -> String {
        match self {
            Question1Outcome::Exhausted { semigroups, premorphisms } => {
                format!("outcome: exhausted\nsemigroups: {semigroups}\npremorphisms: {premorphisms}\n")
            }
            Question1Outcome::Witness { premorph, side } => {
                let mut out = format!("outcome: witness\nside: {side:?}\ncarrier: {}\n", premorph.carrier);
                out.push_str(&crate::format::write_rsemigroup(&premorph.source));
                for f in &premorph.maps {
                    out.push_str(&format!("{f}\n"));
                }
                out
            }
        }
    }
}

/// Searches premorphisms from every restriction semigroup of order at most
/// `max_order` on at most `max_carrier` points for one where, on some side,
/// the `s* = t+` form of local strongness holds but the `s* ≤ t+` form fails.
pub fn search_question1(max_order: usize, max_carrier: usize, cfg: &EnumConfig) -> Result<Question1Outcome> {
    let sources = restriction_semigroups_up_to(max_order, cfg)?;
    let mut examined = 0;
    for s in &sources {
        for carrier in 1..=max_carrier {
            for phi in enumerate_premorphisms(s, carrier, &[], cfg)? {
                examined += 1;
                let report = evaluate(s, &phi.codomain(), &phi.maps);
                if let Some(side) = report.separating_side {
                    return Ok(Question1Outcome::Witness { premorph: phi, side });
                }
            }
        }
    }
    Ok(Question1Outcome::Exhausted { semigroups: sources.len(), premorphisms: examined })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::check_rsmorphism;
    use crate::canon::are_isomorphic;
    use crate::extension::is_proper_morphism;
    use crate::fixtures;

    fn cfg() -> EnumConfig {
        EnumConfig::default()
    }

    /// Labelled partial orders with all binary meets, one per isomorphism class.
    fn semilattices_from_posets(n: usize) -> Vec<Vec<usize>> {
        let mut keys = BTreeSet::new();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| a != b).map(move |b| (a, b))).collect();
        for bits in 0u64..1 << pairs.len() {
            let le = |a: usize, b: usize| a == b || pairs.iter().position(|&p| p == (a, b)).is_some_and(|i| bits >> i & 1 == 1);
            let antisym = (0..n).all(|a| (0..n).all(|b| a == b || !(le(a, b) && le(b, a))));
            let trans = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(le(a, b) && le(b, c)) || le(a, c))));
            if !antisym || !trans {
                continue;
            }
            let mut meet = vec![0; n * n];
            let mut ok = true;
            for a in 0..n {
                for b in 0..n {
                    let lower: Vec<usize> = (0..n).filter(|&c| le(c, a) && le(c, b)).collect();
                    match lower.iter().find(|&&m| lower.iter().all(|&c| le(c, m))) {
                        Some(&m) => meet[a * n + b] = m,
                        None => ok = false,
                    }
                }
            }
            if ok {
                let y = Semilattice::new(n, meet).unwrap();
                keys.insert(canonical_form(&y.to_rsemigroup(), &[]).key);
            }
        }
        keys.into_iter().collect()
    }

    #[test]
    fn semilattice_counts_match_poset_oracle() {
        let counts: Vec<usize> = (1..=5).map(|n| enumerate_semilattices(n, &cfg()).unwrap().len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 15]);
        for n in 1..=4 {
            let ours: BTreeSet<Vec<usize>> =
                enumerate_semilattices(n, &cfg()).unwrap().iter().map(|y| canonical_form(&y.to_rsemigroup(), &[]).key).collect();
            assert_eq!(ours, semilattices_from_posets(n).into_iter().collect());
        }
    }

    /// Labelled associative tables by plain backtracking.
    fn semigroup_tables(n: usize) -> Vec<Vec<usize>> {
        fn go(n: usize, cell: usize, t: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cell == n * n {
                out.push(t.clone());
                return;
            }
            for v in 0..n {
                t[cell] = v;
                let ok = (0..n).all(|a| {
                    (0..n).all(|b| {
                        let ab = t[a * n + b];
                        ab == UNSET
                            || (0..n).all(|c| {
                                let bc = t[b * n + c];
                                bc == UNSET || {
                                    let (l, r) = (t[ab * n + c], t[a * n + bc]);
                                    l == UNSET || r == UNSET || l == r
                                }
                            })
                    })
                });
                if ok {
                    go(n, cell + 1, t, out);
                }
            }
            t[cell] = UNSET;
        }
        let mut out = vec![];
        go(n, 0, &mut vec![UNSET; n * n], &mut out);
        out
    }

    /// Labelled restriction semigroups: every associative table with every
    /// pair of unary operations that passes validation.
    fn labelled_restriction_count(n: usize) -> usize {
        let mut count = 0;
        for mul in semigroup_tables(n) {
            let m = |a: usize, b: usize| mul[a * n + b];
            // x x* = x forces x* to be a right identity for x that is idempotent.
            let star_opts: Vec<Vec<usize>> =
                (0..n).map(|x| (0..n).filter(|&e| m(e, e) == e && m(x, e) == x).collect()).collect();
            let plus_opts: Vec<Vec<usize>> =
                (0..n).map(|x| (0..n).filter(|&e| m(e, e) == e && m(e, x) == x).collect()).collect();
            let stars = cartesian(&star_opts);
            let pluses = cartesian(&plus_opts);
            for star in &stars {
                for plus in &pluses {
                    if RSemigroup::new(n, mul.clone(), star.clone(), plus.clone()).is_ok() {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    fn cartesian(opts: &[Vec<usize>]) -> Vec<Vec<usize>> {
        opts.iter().fold(vec![vec![]], |acc, o| {
            acc.into_iter().flat_map(|prefix| o.iter().map(move |&v| [prefix.clone(), vec![v]].concat())).collect()
        })
    }

    #[test]
    fn associative_table_counts() {
        let counts: Vec<usize> = (1..=3).map(|n| semigroup_tables(n).len()).collect();
        assert_eq!(counts, [1, 8, 113]);
    }

    #[test]
    fn restriction_semigroups_match_labelled_oracle() {
        let labelled = EnumConfig { up_to_iso: false, ..cfg() };
        for n in 1..=3 {
            assert_eq!(enumerate_restriction_semigroups(n, &labelled).unwrap().len(), labelled_restriction_count(n), "order {n}");
        }
    }

    #[test]
    fn order_two_includes_named_examples() {
        let reps = enumerate_restriction_semigroups(2, &cfg()).unwrap();
        for named in [fixtures::y2(), fixtures::sa(), fixtures::z2()] {
            assert!(reps.iter().any(|r| are_isomorphic(r, &named)));
        }
        for (i, a) in reps.iter().enumerate() {
            assert!(reps[i + 1..].iter().all(|b| !are_isomorphic(a, b)));
        }
    }

    /// Proper extensions found by trying every map from every algebra of the given order.
    fn extensions_by_brute_force(order: usize, s: &RSemigroup) -> BTreeSet<Vec<usize>> {
        let mut keys = BTreeSet::new();
        for t in enumerate_restriction_semigroups(order, &cfg()).unwrap() {
            for map in cartesian(&vec![(0..s.order()).collect(); order]) {
                if let Ok(psi) = check_rsmorphism(&t, s, &map) {
                    if is_proper_morphism(&psi).unwrap() {
                        keys.insert(canonical_form(&t, &map).key);
                    }
                }
            }
        }
        keys
    }

    #[test]
    fn fibre_search_matches_brute_force() {
        for s in [fixtures::trivial(), fixtures::y2(), fixtures::sa(), fixtures::z2()] {
            for order in s.order()..=4 {
                let ours: BTreeSet<Vec<usize>> = enumerate_proper_extensions(order, &s, &cfg())
                    .unwrap()
                    .iter()
                    .map(|e| canonical_form(e.top(), &e.psi().map).key)
                    .collect();
                assert_eq!(ours, extensions_by_brute_force(order, &s), "order {order} over {:?}", s.labels());
            }
        }
    }

    #[test]
    fn trivial_and_collapse_extensions() {
        let t = fixtures::trivial();
        assert_eq!(enumerate_proper_extensions(1, &t, &cfg()).unwrap().len(), 1);
        let two = enumerate_proper_extensions(2, &t, &cfg()).unwrap();
        assert_eq!(two.len(), 1);
        assert!(are_isomorphic(two[0].top(), &fixtures::y2()));
    }

    #[test]
    fn premorphisms_of_trivial_monoid_are_partial_identities() {
        let out = enumerate_premorphisms(&fixtures::trivial(), 1, &[], &cfg()).unwrap();
        let maps: Vec<String> = out.iter().map(|p| p.maps[0].to_string()).collect();
        assert_eq!(maps, ["[]", "[0>0]"]);
    }

    #[test]
    fn sa_on_two_points_includes_fixture() {
        let fixture = fixtures::sa_on_y2();
        let out = enumerate_premorphisms(&fixtures::sa(), 2, &[], &cfg()).unwrap();
        assert!(out.iter().any(|p| p.maps == fixture.phi.maps));
        let triples = enumerate_action_triples(&fixtures::sa(), 2, &cfg()).unwrap();
        assert!(triples.iter().any(|t| t.phi.maps == fixture.phi.maps && t.q == fixture.q && t.lattice == fixture.lattice));
    }

    #[test]
    fn action_triples_match_unfiltered_premorphisms() {
        for s in [fixtures::y2(), fixtures::sa()] {
            let ps = s.projections();
            let mut expected = 0;
            for k in 1..=3 {
                for y in enumerate_semilattices(k, &cfg()).unwrap() {
                    for q in y.morphisms_to(&Semilattice::of_projections(&s)) {
                        let q: Vec<usize> = q.iter().map(|&i| ps[i]).collect();
                        for phi in enumerate_premorphisms(&s, k, &[], &cfg()).unwrap() {
                            let triple = ActionTriple::new(phi, q.clone(), y.clone()).unwrap();
                            expected += action_flags(&triple).base() as usize;
                        }
                    }
                }
            }
            assert_eq!(enumerate_action_triples(&s, 3, &cfg()).unwrap().len(), expected);
        }
    }

    #[test]
    fn question1_trivial_bound_is_exhausted() {
        assert!(matches!(search_question1(1, 2, &cfg()).unwrap(), Question1Outcome::Exhausted { .. }));
    }

    #[test]
    fn premorphism_search_matches_brute_force() {
        for s in restriction_semigroups_up_to(3, &cfg()).unwrap() {
            let all = all_partial_bijections(2);
            let n = s.order();
            let mut expected = Vec::new();
            for code in 0..all.len().pow(n as u32) {
                let maps: Vec<PBij> = (0..n).map(|i| all[code / all.len().pow(i as u32) % all.len()]).collect();
                if check_premorphism(&s, 2, maps.clone()).is_ok() {
                    expected.push(maps);
                }
            }
            let mut found: Vec<Vec<PBij>> = enumerate_premorphisms(&s, 2, &[], &cfg()).unwrap().into_iter().map(|p| p.maps).collect();
            found.sort();
            expected.sort();
            assert_eq!(found, expected);
        }
    }
}
