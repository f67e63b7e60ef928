use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest carrier a [`PBij`] can act on.
pub const MAX_CARRIER: usize = 16;
const UNDEF: u8 = u8::MAX;

/// A partial bijection of `{0, …, carrier-1}`.
///
/// Products compose right to left: `f.compose(&g)` applies `g` first, which
/// matches a left action `s·(t·x) = st·x`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PBij {
    carrier: u8,
    map: [u8; MAX_CARRIER],
}

impl PBij {
    pub fn empty(carrier: usize) -> Self {
        assert!(carrier <= MAX_CARRIER, "carrier {carrier} exceeds {MAX_CARRIER}");
        PBij { carrier: carrier as u8, map: [UNDEF; MAX_CARRIER] }
    }

    /// The partial identity on the points of `mask`.
    pub fn identity_on(carrier: usize, mask: u32) -> Self {
        let mut f = PBij::empty(carrier);
        for x in 0..carrier {
            if mask >> x & 1 == 1 {
                f.map[x] = x as u8;
            }
        }
        f
    }

    /// Builds from `(point, image)` pairs, rejecting non-injective input.
    pub fn from_pairs(carrier: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if carrier > MAX_CARRIER {
            return Err(Error::SizeLimit { what: "carrier".into(), count: carrier, limit: MAX_CARRIER });
        }
        let mut f = PBij::empty(carrier);
        let mut used = 0u32;
        for &(x, y) in pairs {
            if x >= carrier || y >= carrier {
                return Err(Error::DimensionMismatch(format!("point {x}>{y} outside carrier of size {carrier}")));
            }
            if f.map[x] != UNDEF || used >> y & 1 == 1 {
                return Err(Error::DimensionMismatch(format!("{x}>{y} breaks injectivity")));
            }
            f.map[x] = y as u8;
            used |= 1 << y;
        }
        Ok(f)
    }

    pub fn carrier(&self) -> usize {
        self.carrier as usize
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        match self.map[x] {
            UNDEF => None,
            y => Some(y as usize),
        }
    }

    pub fn apply_inverse(&self, y: usize) -> Option<usize> {
        (0..self.carrier()).find(|&x| self.map[x] as usize == y)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.carrier()).filter_map(|x| self.apply(x).map(|y| (x, y)))
    }

    pub fn domain(&self) -> u32 {
        (0..self.carrier()).filter(|&x| self.map[x] != UNDEF).fold(0, |m, x| m | 1 << x)
    }

    pub fn range(&self) -> u32 {
        self.pairs().fold(0, |m, (_, y)| m | 1 << y)
    }

    pub fn rank(&self) -> usize {
        self.domain().count_ones() as usize
    }

    /// `self ∘ g`: apply `g`, then `self`.
    pub fn compose(&self, g: &PBij) -> PBij {
        let mut out = PBij::empty(self.carrier());
        for x in 0..self.carrier() {
            if let Some(y) = g.apply(x) {
                out.map[x] = self.map[y];
            }
        }
        out
    }

    pub fn inverse(&self) -> PBij {
        let mut out = PBij::empty(self.carrier());
        for (x, y) in self.pairs() {
            out.map[y] = x as u8;
        }
        out
    }

    /// Identity on the domain.
    pub fn star(&self) -> PBij {
        PBij::identity_on(self.carrier(), self.domain())
    }

    /// Identity on the range.
    pub fn plus(&self) -> PBij {
        PBij::identity_on(self.carrier(), self.range())
    }

    pub fn is_partial_identity(&self) -> bool {
        self.pairs().all(|(x, y)| x == y)
    }

    /// `self` is a restriction of `other`.
    pub fn le(&self, other: &PBij) -> bool {
        self.pairs().all(|(x, y)| other.apply(x) == Some(y))
    }

    /// Restriction to the points of `mask`.
    pub fn restrict(&self, mask: u32) -> PBij {
        self.compose(&PBij::identity_on(self.carrier(), mask))
    }

    /// Sort key: domain bitmask, then images in increasing domain order.
    fn key(&self) -> (u32, [u8; MAX_CARRIER]) {
        let mut images = [0u8; MAX_CARRIER];
        for (i, (_, y)) in self.pairs().enumerate() {
            images[i] = y as u8;
        }
        (self.domain(), images)
    }

    /// Parses a literal such as `[0>1,2>2]`; `[]` is the empty map.
    pub fn parse(text: &str, carrier: usize) -> Result<Self> {
        let bad = |m: &str| Error::DimensionMismatch(format!("bad partial bijection `{text}`: {m}"));
        let inner = text.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(|| bad("missing brackets"))?;
        let mut pairs = Vec::new();
        if !inner.trim().is_empty() {
            for item in inner.split(',') {
                let (x, y) = item.split_once('>').ok_or_else(|| bad("expected `x>y`"))?;
                let x = x.trim().parse().map_err(|_| bad("bad point"))?;
                let y = y.trim().parse().map_err(|_| bad("bad image"))?;
                pairs.push((x, y));
            }
        }
        PBij::from_pairs(carrier, &pairs)
    }
}

impl Ord for PBij {
    fn cmp(&self, other: &Self) -> Ordering {
        self.carrier.cmp(&other.carrier).then_with(|| self.key().cmp(&other.key()))
    }
}

impl PartialOrd for PBij {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PBij {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (x, y)) in self.pairs().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}>{y}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PBij {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All partial bijections of a `carrier`-element set, in canonical order.
pub fn all_partial_bijections(carrier: usize) -> Vec<PBij> {
    fn extend(x: usize, carrier: usize, used: u32, cur: &mut PBij, out: &mut Vec<PBij>) {
        if x == carrier {
            out.push(*cur);
            return;
        }
        extend(x + 1, carrier, used, cur, out);
        for y in 0..carrier {
            if used >> y & 1 == 0 {
                cur.map[x] = y as u8;
                extend(x + 1, carrier, used | 1 << y, cur, out);
                cur.map[x] = UNDEF;
            }
        }
    }
    let mut out = Vec::new();
    extend(0, carrier, 0, &mut PBij::empty(carrier), &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_round_trip() {
        let f = PBij::parse("[0>1,2>2]", 3).unwrap();
        assert_eq!(f.to_string(), "[0>1,2>2]");
        assert_eq!(PBij::parse("[]", 2).unwrap(), PBij::empty(2));
        assert!(PBij::parse("[0>1,1>1]", 2).is_err());
        assert!(PBij::parse("[0>3]", 2).is_err());
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let f = PBij::parse("[0>1]", 2).unwrap();
        let g = PBij::parse("[1>0]", 2).unwrap();
        assert_eq!(f.compose(&g).to_string(), "[1>1]");
        assert_eq!(g.compose(&f).to_string(), "[0>0]");
    }

    #[test]
    fn canonical_order_on_two_points() {
        let names: Vec<String> = all_partial_bijections(2).iter().map(|f| f.to_string()).collect();
        assert_eq!(names, ["[]", "[0>0]", "[0>1]", "[1>0]", "[1>1]", "[0>0,1>1]", "[0>1,1>0]"]);
    }
}
