//! Acceptance suite: one pass/fail line per criterion, nonzero exit on any
//! failure. Quantified checks here are written against the raw tables so
//! they do not reuse the library's own order and compatibility code.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rsg::algebra::validate_restriction;
use rsg::category::{
    check_amorphism, check_counit_naturality, check_unit_naturality, functor_g_hat, functor_g_hat_mor, functor_u,
    functor_u_mor, hat_f, hat_f_mor, tilde_f, tilde_f_mor, unit_iso, verify_adjunction_instance, verify_round_trip,
    AMorphism, AObject,
};
use rsg::enumerate::{
    enumerate_action_triples, enumerate_premorphisms, enumerate_semilattices, proper_extensions_up_to,
    restriction_semigroups_up_to, EnumConfig,
};
use rsg::extension::{
    check_maxima_imply_proper, classify_extension, decompose, fiber_maxima, is_proper_morphism, upper_underlying,
    ExtensionReport, ProperExt,
};
use rsg::partial_maps::{munn_semigroup, symmetric_inverse};
use rsg::premorphism::{
    classify, left_action_to_premorph, premorph_to_left_action, Premorph,
};
use rsg::product::partial_action_product;
use rsg::{check_rsmorphism, fixtures, RSMorphism, RSemigroup, Semilattice};

#[path = "cli.rs"]
#[allow(dead_code)]
mod golden;

type Outcome = Result<String, String>;

fn cfg() -> EnumConfig {
    EnumConfig::default()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn pool(max_order: usize) -> Result<Vec<RSemigroup>, String> {
    restriction_semigroups_up_to(max_order, &cfg()).map_err(err)
}

fn revalidate(s: &RSemigroup) -> Result<(), String> {
    let n = s.order();
    let rows: Vec<Vec<usize>> = s.mul_table().chunks(n.max(1)).map(<[usize]>::to_vec).collect();
    let rows = if n == 0 { Vec::new() } else { rows };
    validate_restriction(n, &rows, s.star_table(), s.plus_table()).map(|_| ()).map_err(err)
}

fn axiom_suite() -> Outcome {
    let start = Instant::now();
    for k in 0..=3 {
        revalidate(&symmetric_inverse(k).map_err(err)?.algebra).map_err(|e| format!("I({k}): {e}"))?;
    }
    let mut lattices = 0;
    for n in 1..=4 {
        for y in enumerate_semilattices(n, &EnumConfig { up_to_iso: false, ..cfg() }).map_err(err)? {
            revalidate(&munn_semigroup(&y).map_err(err)?.algebra).map_err(|e| format!("Munn semigroup: {e}"))?;
            lattices += 1;
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("I(0..3) and Munn semigroups of {lattices} labelled semilattices"))
}

/// The order and compatibility laws, computed from the tables alone.
fn order_laws(s: &RSemigroup) -> Result<(), String> {
    let n = s.order();
    let m = |a: usize, b: usize| s.mul(a, b);
    let (st, pl) = (|a: usize| s.star(a), |a: usize| s.plus(a));
    let proj: Vec<usize> = (0..n).filter(|&a| st(a) == a).collect();
    let le: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| proj.iter().any(|&f| a == m(b, f))).collect()).collect();
    let comp = |a: usize, b: usize| m(a, st(b)) == m(b, st(a)) && m(pl(b), a) == m(pl(a), b);
    let fail = |item: &str, w: &[usize]| Err(format!("{item} fails at {w:?}"));

    s.check_derived_identities().map_err(err)?;
    for a in 0..n {
        for b in 0..n {
            let l = le[a][b];
            if l != s.le(a, b) || l != (a == m(b, st(a))) || l != (a == m(pl(a), b)) {
                return fail("order characterizations", &[a, b]);
            }
            if comp(a, b) != s.compatible(a, b) {
                return fail("compatibility", &[a, b]);
            }
            if l && !(le[st(a)][st(b)] && le[pl(a)][pl(b)]) {
                return fail("order on unary operations", &[a, b]);
            }
            if l && !comp(a, b) {
                return fail("order implies compatibility", &[a, b]);
            }
            if comp(a, b) && (le[st(a)][st(b)] || le[pl(a)][pl(b)]) && !l {
                return fail("compatible and smaller unary part", &[a, b]);
            }
            if comp(a, b) && (st(a) == st(b) || pl(a) == pl(b)) && a != b {
                return fail("compatible with equal unary part", &[a, b]);
            }
            for u in 0..n {
                if l && !(le[m(a, u)][m(b, u)] && le[m(u, a)][m(u, b)]) {
                    return fail("order is compatible with multiplication", &[a, b, u]);
                }
                if le[a][u] && le[b][u] && !comp(a, b) {
                    return fail("common upper bound implies compatibility", &[a, b, u]);
                }
            }
            for &e in &proj {
                if le[e][st(m(a, b))] && !le[pl(m(b, e))][st(a)] {
                    return fail("projection below (st)*", &[a, b, e]);
                }
            }
        }
    }
    let below: Vec<Vec<usize>> = (0..n).map(|b| (0..n).filter(|&a| le[a][b]).collect()).collect();
    for a in 0..n {
        for b in (0..n).filter(|&b| comp(a, b)) {
            for &c in &below[a] {
                if let Some(&d) = below[b].iter().find(|&&d| !comp(c, d)) {
                    return fail("compatibility passes to smaller elements", &[a, b, c, d]);
                }
            }
        }
    }
    Ok(())
}

fn lemma_suite() -> Outcome {
    let mut algebras = pool(4)?;
    algebras.push(fixtures::i2());
    algebras.push(symmetric_inverse(3).map_err(err)?.algebra);
    for s in &algebras {
        order_laws(s).map_err(|e| format!("order {}: {e}", s.order()))?;
    }
    Ok(format!("{} algebras up to order 4 plus I(2), I(3)", algebras.len()))
}

fn premorphism_coherence() -> Outcome {
    let mut count = 0;
    let mut witness = None;
    for s in pool(3)? {
        for carrier in 1..=3 {
            for phi in enumerate_premorphisms(&s, carrier, &[], &cfg()).map_err(err)? {
                let report = classify(&phi).map_err(err)?;
                let action = premorph_to_left_action(&phi).map_err(err)?;
                let back = left_action_to_premorph(&s, &action).map_err(err)?;
                check(back == phi, || "premorphism to action and back moved a premorphism".into())?;
                if let (Some(side), None) = (report.separating_side, &witness) {
                    witness = Some((side, phi.clone()));
                }
                count += 1;
            }
        }
    }
    Ok(match witness {
        None => format!("{count} premorphisms, no separating example for the two local strongness forms"),
        Some((side, phi)) => format!("{count} premorphisms; separating example on side {side:?}: {:?}", phi.maps),
    })
}

fn associative(s: &RSemigroup) -> bool {
    let n = s.order();
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| s.mul(s.mul(a, b), c) == s.mul(a, s.mul(b, c)))))
}

fn product_suite() -> Outcome {
    let mut count = 0;
    for s in pool(3)? {
        for triple in enumerate_action_triples(&s, 4, &cfg()).map_err(err)? {
            let p = partial_action_product(&triple).map_err(err)?;
            revalidate(&p.algebra)?;
            check(associative(&p.algebra), || "product is not associative".into())?;
            check(is_proper_morphism(&p.psi).map_err(err)?, || "projection is not proper".into())?;
            let projections = p.algebra.projections();
            check(projections.len() == triple.carrier(), || "projections are not in bijection with the carrier".into())?;
            count += 1;
        }
    }
    Ok(format!("{count} products from triples on up to 4 points"))
}

fn extension_pool() -> Result<Vec<ProperExt>, String> {
    let mut out = Vec::new();
    for s in pool(3)? {
        out.extend(proper_extensions_up_to(6, &s, &cfg()).map_err(err)?);
    }
    Ok(out)
}

fn decomposition_suite(pool: &[ProperExt]) -> Outcome {
    for ext in pool {
        let d = decompose(ext).map_err(err)?;
        let eta = check_rsmorphism(ext.top(), &d.product.algebra, &d.eta).map_err(err)?;
        let mut seen = vec![false; d.product.algebra.order()];
        eta.map.iter().for_each(|&v| seen[v] = true);
        check(eta.map.len() == seen.len() && seen.iter().all(|&h| h), || "eta is not a bijection".into())?;
        let commutes = (0..ext.top().order()).all(|t| d.product.psi.map[eta.map[t]] == ext.psi().map[t]);
        check(commutes, || "projection after eta differs from the extension".into())?;
    }
    Ok(format!("{} proper extensions with |T| <= 6 over sources of order <= 3", pool.len()))
}

fn identity_example() -> Outcome {
    let algebras = pool(4)?;
    for s in &algebras {
        let triple = upper_underlying(&ProperExt::identity(s)).map_err(err)?;
        let projections = s.projections();
        check(triple.phi.maps == Premorph::munn(s).maps, || "maps differ from the Munn representation".into())?;
        check(triple.q == projections, || "projection map is not the identity".into())?;
        check(triple.lattice == Semilattice::of_projections(s), || "carrier is not the projection semilattice".into())?;
    }
    Ok(format!("{} algebras up to order 4", algebras.len()))
}

fn all_maps(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..m.pow(n as u32)).map(move |mut code| {
        (0..n)
            .map(|_| {
                let d = code % m;
                code /= m;
                d
            })
            .collect()
    })
}

fn classification_suite(pool: &[ProperExt]) -> Outcome {
    let mut reports: Vec<ExtensionReport> = Vec::with_capacity(pool.len());
    for ext in pool {
        reports.push(classify_extension(ext).map_err(err)?);
    }
    let mut with_maxima = 0;
    let targets = pool_of_bases()?;
    for t in restriction_semigroups_up_to(4, &cfg()).map_err(err)? {
        for s in &targets {
            for map in all_maps(t.order(), s.order()) {
                if let Ok(psi) = check_rsmorphism(&t, s, &map) {
                    if check_maxima_imply_proper(&psi).map_err(err)? {
                        with_maxima += 1;
                    }
                }
            }
        }
    }
    for ext in pool {
        if fiber_maxima(ext.psi()).is_ok() {
            check(check_maxima_imply_proper(ext.psi()).map_err(err)?, || "extension with maxima not proper".into())?;
            with_maxima += 1;
        }
    }
    let perfect = reports.iter().filter(|r| r.perfect).count();
    let order_proper = reports.iter().filter(|r| r.order_proper).count();
    Ok(format!(
        "{} extensions ({order_proper} order-proper, {perfect} perfect); {with_maxima} surjective morphisms with fibre maxima",
        reports.len()
    ))
}

fn pool_of_bases() -> Result<Vec<RSemigroup>, String> {
    pool(3)
}

/// Morphisms `t1 → t2` over the base, found by backtracking within fibres.
fn morphisms_over(e1: &ProperExt, e2: &ProperExt) -> Vec<RSMorphism> {
    let (t1, t2) = (e1.top(), e2.top());
    let n = t1.order();
    let choices: Vec<Vec<usize>> = (0..n).map(|u| e2.psi().fiber(e1.psi().map[u])).collect();
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; n];
    fn consistent(t1: &RSemigroup, t2: &RSemigroup, map: &[usize], k: usize) -> bool {
        let known = |a: usize| a <= k;
        let image = |a: usize| map[a];
        (0..=k).all(|a| {
            (!known(t1.star(a)) || image(t1.star(a)) == t2.star(image(a)))
                && (!known(t1.plus(a)) || image(t1.plus(a)) == t2.plus(image(a)))
                && (0..=k).all(|b| !known(t1.mul(a, b)) || image(t1.mul(a, b)) == t2.mul(image(a), image(b)))
        })
    }
    fn go(k: usize, e: (&RSemigroup, &RSemigroup), choices: &[Vec<usize>], map: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == map.len() {
            out.push(map.clone());
            return;
        }
        for &c in &choices[k] {
            map[k] = c;
            if consistent(e.0, e.1, map, k) {
                go(k + 1, e, choices, map, out);
            }
        }
        map[k] = usize::MAX;
    }
    let mut maps = Vec::new();
    go(0, (t1, t2), &choices, &mut map, &mut maps);
    for m in maps {
        if let Ok(g) = check_rsmorphism(t1, t2, &m) {
            out.push(g);
        }
    }
    out
}

fn category_family(s: &RSemigroup) -> Result<(usize, usize, usize), String> {
    let family: Vec<AObject> = enumerate_action_triples(s, 3, &cfg())
        .map_err(err)?
        .into_iter()
        .map(AObject::new)
        .collect::<rsg::Result<Vec<_>>>()
        .map_err(err)?
        .into_iter()
        .filter(|a| a.in_hat)
        .collect();
    let mut morphisms: Vec<AMorphism> = Vec::new();
    for a in &family {
        verify_adjunction_instance(a, &family).map_err(err)?;
        verify_round_trip(&tilde_f(a).map_err(err)?).map_err(err)?;
        verify_round_trip(a).map_err(err)?;
        check(hat_f(&tilde_f(a).map_err(err)?).map_err(err)? == *a, || "restricting then extending moved an object".into())?;
        unit_iso(a).map_err(err)?;
        let (_, ext) = functor_u(a).map_err(err)?;
        decompose(&ext).map_err(err)?;
        check(functor_g_hat(&ext).map_err(err)?.carrier() == a.carrier(), || "round trip changed the carrier".into())?;
        for b in &family {
            for f in a.triple.lattice.morphisms_to(&b.triple.lattice) {
                let m = check_amorphism(a, b, &f).map_err(err)?;
                hat_f_mor(&m).map_err(err)?;
                tilde_f_mor(&m).map_err(err)?;
                if m.is_morphism() {
                    morphisms.push(m);
                }
            }
        }
    }
    for m in &morphisms {
        let image = functor_u_mor(m).map_err(err)?;
        check(image.surjective == m.m3, || format!("surjectivity transfer fails for {:?}", m.f))?;
        check_unit_naturality(m).map_err(err)?;
    }
    let extensions: Vec<ProperExt> =
        family.iter().map(|a| functor_u(a).map(|p| p.1)).collect::<rsg::Result<_>>().map_err(err)?;
    let mut gammas = 0;
    for e1 in &extensions {
        for e2 in &extensions {
            for gamma in morphisms_over(e1, e2) {
                let g = functor_g_hat_mor(e1, e2, &gamma).map_err(err)?;
                check(!gamma.surjective || g.m3, || "surjective morphism of extensions restricts without fibre surjectivity".into())?;
                check_counit_naturality(e1, e2, &gamma).map_err(err)?;
                gammas += 1;
            }
        }
    }
    Ok((family.len(), morphisms.len(), gammas))
}

fn category_suite() -> Outcome {
    let start = Instant::now();
    let three = partial_action_product(&fixtures::sa_on_y2()).map_err(err)?.algebra;
    let mut parts = Vec::new();
    for (name, s) in [("Y2", fixtures::y2()), ("3-element product", three)] {
        let (objects, morphisms, gammas) = category_family(&s).map_err(|e| format!("{name}: {e}"))?;
        parts.push(format!("{name}: {objects} objects, {morphisms} morphisms, {gammas} extension morphisms"));
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(parts.join("; "))
}

fn cli_golden() -> Outcome {
    let bad = golden::mismatches();
    check(bad.is_empty(), || format!("mismatched: {}", bad.join(", ")))?;
    Ok("all golden files match".into())
}

fn main() -> ExitCode {
    let extensions = extension_pool();
    let ext = |f: fn(&[ProperExt]) -> Outcome| -> Outcome {
        match &extensions {
            Ok(p) => f(p),
            Err(e) => Err(e.clone()),
        }
    };
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("axioms of symmetric inverse and Munn semigroups", Box::new(axiom_suite)),
        ("order and compatibility laws", Box::new(lemma_suite)),
        ("premorphism classification coherence", Box::new(premorphism_coherence)),
        ("partial action products", Box::new(product_suite)),
        ("decomposition of proper extensions", Box::new(move || ext(decomposition_suite))),
        ("identity extension gives the Munn representation", Box::new(identity_example)),
        ("extension classification coherence", Box::new(move || ext(classification_suite))),
        ("category of action triples", Box::new(category_suite)),
        ("CLI golden outputs", Box::new(cli_golden)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} [{secs:.2}s]: {detail}"),
            Err(e) => {
                failed += 1;
                println!("FAIL {name} [{secs:.2}s]: {e}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
