//! Small named algebras used throughout the test suites and examples.

use crate::algebra::RSemigroup;
use crate::partial_maps::symmetric_inverse;
use crate::pbij::PBij;
use crate::premorphism::{check_premorphism, ActionTriple};
use crate::semilattice::Semilattice;

fn labelled(n: usize, mul: &[usize], star: &[usize], plus: &[usize], labels: &[&str]) -> RSemigroup {
    RSemigroup::new(n, mul.to_vec(), star.to_vec(), plus.to_vec())
        .and_then(|s| s.with_labels(labels.iter().map(|l| l.to_string()).collect()))
        .expect("fixture tables are valid")
}

/// The one-element monoid.
pub fn trivial() -> RSemigroup {
    labelled(1, &[0], &[0], &[0], &["1"])
}

/// The two-element chain `x < y` under meet, with `*` and `+` the identity.
pub fn y2() -> RSemigroup {
    labelled(2, &[0, 0, 0, 1], &[0, 1], &[0, 1], &["x", "y"])
}

/// The monoid `{1, a}` with `a² = a`, both unary operations constant at `1`.
pub fn sa() -> RSemigroup {
    labelled(2, &[0, 1, 1, 1], &[0, 0], &[0, 0], &["1", "a"])
}

/// The two-element group.
pub fn z2() -> RSemigroup {
    labelled(2, &[0, 1, 1, 0], &[0, 0], &[0, 0], &["1", "g"])
}

/// The symmetric inverse monoid on two points.
pub fn i2() -> RSemigroup {
    symmetric_inverse(2).expect("seven elements").algebra
}

/// `{1, a}` acting on the chain `x < y`: `1` acts as the identity, `a` fixes
/// `x` only, and every point lies over `1`.
pub fn sa_on_y2() -> ActionTriple {
    let maps = vec![PBij::parse("[0>0,1>1]", 2).expect("literal"), PBij::parse("[0>0]", 2).expect("literal")];
    let phi = check_premorphism(&sa(), 2, maps).expect("valid premorphism");
    ActionTriple::new(phi, vec![0, 0], Semilattice::chain(2)).expect("valid triple")
}
