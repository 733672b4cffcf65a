//! Continuants, continued fractions and their use for counting maximum
//! matchings along a path.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matching::{bipartition_condition, match_stats, vertex_types, VertexType};
use crate::tree::{RootedTree, Tree};

pub type Rational = BigRational;

/// `K(x_1, ..., x_n)` by the recurrence `K_n = K_{n-1} x_n + K_{n-2}`.
pub fn continuant(xs: &[Rational]) -> Rational {
    let mut prev = Rational::zero();
    let mut cur = Rational::one();
    for (i, x) in xs.iter().enumerate() {
        let next = if i == 0 { x.clone() } else { &cur * x + &prev };
        prev = cur;
        cur = next;
    }
    cur
}

/// `x_0 + 1/(x_1 + 1/(... + 1/x_n))`, evaluated from the innermost term.
///
/// A zero denominator reports the index of the term that vanished.
pub fn continued_fraction(xs: &[Rational]) -> Result<Rational> {
    let (last, init) = xs
        .split_last()
        .ok_or_else(|| Error::BadRange("continued fraction of an empty list".into()))?;
    let mut value = last.clone();
    for (depth, x) in init.iter().enumerate().rev() {
        if value.is_zero() {
            return Err(Error::DivisionByZero(depth + 1));
        }
        value = x + value.recip();
    }
    Ok(value)
}

/// Checks that `path` lists distinct vertices with consecutive ones adjacent.
fn check_path(t: &Tree, path: &[usize]) -> Result<()> {
    if path.is_empty() {
        return Err(Error::NotAPath);
    }
    for &v in path {
        t.check_vertex(v)?;
    }
    let mut seen = vec![false; t.order()];
    for &v in path {
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::NotAPath);
        }
    }
    if path.windows(2).any(|w| !t.are_adjacent(w[0], w[1])) {
        return Err(Error::NotAPath);
    }
    Ok(())
}

/// The quotients `rho_i` along a path together with the product of the counts
/// of all hanging subtrees.
pub fn path_quotients(t: &Tree, path: &[usize]) -> Result<(Vec<Rational>, BigInt)> {
    check_path(t, path)?;
    if !bipartition_condition(t)? {
        return Err(Error::NotBipartite(None));
    }
    let types = vertex_types(t);
    let mut on_path = vec![false; t.order()];
    for &v in path {
        on_path[v] = true;
    }
    let mut product = BigInt::one();
    let mut rhos = Vec::with_capacity(path.len());
    for &v in path {
        let mut rho = if types.get(v) == VertexType::A {
            Rational::one()
        } else {
            Rational::zero()
        };
        for &w in t.neighbors(v).iter().filter(|&&w| !on_path[w]) {
            let s = match_stats(&t.component(w, Some(v)).0);
            rho += &s.rho;
            product *= &s.m;
        }
        rhos.push(rho);
    }
    Ok((rhos, product))
}

/// `m(T)` as `K(rho_0, ..., rho_k)` times the counts of the subtrees hanging
/// off the path, where `rho_i` is 1 for type-A path vertices plus the sum of
/// the quotients `m0/m` of the subtrees hanging at `v_i`.
pub fn path_m_via_continuants(t: &Tree, path: &[usize]) -> Result<BigInt> {
    let (rhos, product) = path_quotients(t, path)?;
    let value = continuant(&rhos) * Rational::from_integer(product);
    debug_assert!(value.is_integer());
    Ok(value.to_integer())
}

/// Exchanges the subtrees hanging below `a` and `b` (with respect to the root
/// of `rt`) by reattaching each at the other's parent. Labels are kept.
pub fn swap_rooted_subtrees(rt: &RootedTree, a: usize, b: usize) -> Result<Tree> {
    let t = &rt.tree;
    t.check_vertex(a)?;
    t.check_vertex(b)?;
    for v in [a, b] {
        if v == rt.root {
            return Err(Error::RootIsWholeTree(v));
        }
    }
    let orient = rt.orientation();
    let is_ancestor = |x: usize, mut y: usize| {
        while y != usize::MAX {
            if y == x {
                return true;
            }
            y = orient.parent[y];
        }
        false
    };
    if is_ancestor(a, b) || is_ancestor(b, a) {
        return Err(Error::Overlapping);
    }
    let (pa, pb) = (orient.parent[a], orient.parent[b]);
    let edges: Vec<(usize, usize)> = t
        .edges()
        .iter()
        .map(|&(u, v)| {
            if (u, v) == (pa, a) || (u, v) == (a, pa) {
                (pa, b)
            } else if (u, v) == (pb, b) || (u, v) == (b, pb) {
                (pb, a)
            } else {
                (u, v)
            }
        })
        .collect();
    Tree::from_edges(t.order(), &edges)
}

/// Closed rational interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl SurdInterval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Decimal rendering of both endpoints with `digits` fractional digits,
    /// rounded outward.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (
            crate::decimal::Decimal::from_rational_floor(&self.lo, digits).to_string(),
            crate::decimal::Decimal::from_rational_ceil(&self.hi, digits).to_string(),
        )
    }
}

impl fmt::Display for SurdInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_decimal(12);
        write!(f, "[{lo}, {hi}]")
    }
}

/// The two exchange bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UBound {
    /// `1/CF(1,u,1,u,1) - 1/CF(1,l,1,l,...)`.
    U0,
    /// `1/CF(l,1,l) - 1/CF(u,1,u,1,...)`.
    U1,
}

impl fmt::Display for UBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UBound::U0 => "U0",
            UBound::U1 => "U1",
        })
    }
}

pub const DEFAULT_DEPTH: usize = 40;
pub const MAX_DEPTH: usize = 200;

/// Encloses the periodic continued fraction `CF(p, q, p, q, ...)` (positive
/// terms) between the convergents of depth `depth` and `depth + 1`.
fn periodic_enclosure(p: &Rational, q: &Rational, depth: usize) -> Result<SurdInterval> {
    let terms = |len: usize| -> Vec<Rational> {
        (0..len)
            .map(|i| if i % 2 == 0 { p.clone() } else { q.clone() })
            .collect()
    };
    let c1 = continued_fraction(&terms(depth + 1))?;
    let c2 = continued_fraction(&terms(depth + 2))?;
    // Truncations ending at an even index undershoot, odd ones overshoot.
    let (lo, hi) = if depth % 2 == 0 { (c1, c2) } else { (c2, c1) };
    Ok(SurdInterval { lo, hi })
}

/// Rational enclosure of `U0(l, u)` or `U1(l, u)`, with the infinite
/// continued fraction truncated at `depth` partial quotients.
pub fn u_bound(which: UBound, l: &Rational, u: &Rational, depth: usize) -> Result<SurdInterval> {
    if !(l > &Rational::zero() && l <= u) {
        return Err(Error::BadRange(format!(
            "{which} needs 0 < l <= u, got l = {l}, u = {u}"
        )));
    }
    let one = Rational::one();
    let (exact, periodic) = match which {
        UBound::U0 => (
            continued_fraction(&[one.clone(), u.clone(), one.clone(), u.clone(), one.clone()])?,
            periodic_enclosure(&one, l, depth)?,
        ),
        UBound::U1 => (
            continued_fraction(&[l.clone(), one.clone(), l.clone()])?,
            periodic_enclosure(u, &one, depth)?,
        ),
    };
    let first = exact.recip();
    Ok(SurdInterval {
        lo: &first - periodic.lo.recip(),
        hi: &first - periodic.hi.recip(),
    })
}

/// Proves `U(l, u) < bound` by widening the truncation depth from
/// [`DEFAULT_DEPTH`] up to [`MAX_DEPTH`] until the enclosure lies below it.
pub fn certify_below(which: UBound, l: &Rational, u: &Rational, bound: &Rational) -> Result<SurdInterval> {
    let mut depth = DEFAULT_DEPTH;
    loop {
        let iv = u_bound(which, l, u, depth)?;
        if &iv.hi < bound {
            return Ok(iv);
        }
        if iv.lo >= *bound || depth >= MAX_DEPTH {
            return Err(Error::PrecisionExhausted {
                cap: depth,
                target: bound.to_string(),
            });
        }
        depth = (depth * 2).min(MAX_DEPTH);
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.1153`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::BadRange(format!("`{text}` is not a rational number"));
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches('-'), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let v = Rational::new(n, den);
        return Ok(if negative { -v } else { v });
    }
    Ok(Rational::from_integer(text.parse().map_err(|_| bad())?))
}

/// Shorthand for small integer rationals.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64) -> Rational {
        Rational::from_integer(BigInt::from(p))
    }

    #[test]
    fn continuant_examples() {
        assert_eq!(continuant(&[]), r(1));
        assert_eq!(continuant(&[rat(7, 3)]), rat(7, 3));
        assert_eq!(continuant(&[r(1), r(1), r(1), r(1)]), r(5));
        assert_eq!(continuant(&[r(2), r(3)]), r(7));
    }

    #[test]
    fn continued_fraction_examples() {
        assert_eq!(continued_fraction(&[rat(5, 2)]).unwrap(), rat(5, 2));
        assert_eq!(continued_fraction(&[r(1), r(1), r(1)]).unwrap(), rat(3, 2));
        assert_eq!(
            continued_fraction(&[r(1), r(2), r(1), r(2), r(1)]).unwrap(),
            rat(15, 11)
        );
        let xs = [r(0), r(1), r(2), r(1), r(2), r(1)];
        let v = continued_fraction(&xs).unwrap();
        assert_eq!(v, rat(11, 15));
        assert_eq!(v * continuant(&xs[1..]), continuant(&xs));
        assert!(matches!(
            continued_fraction(&[r(1), r(0)]),
            Err(Error::DivisionByZero(1))
        ));
        assert!(matches!(
            continued_fraction(&[r(1), r(-1), r(1)]),
            Err(Error::DivisionByZero(1))
        ));
    }

    #[test]
    fn path_formula_on_p3() {
        let p3 = Tree::path(3);
        assert_eq!(path_m_via_continuants(&p3, &[0, 1, 2]).unwrap(), BigInt::from(2));
        assert_eq!(path_m_via_continuants(&p3, &[1]).unwrap(), BigInt::from(2));
        assert!(matches!(
            path_m_via_continuants(&p3, &[0, 2]),
            Err(Error::NotAPath)
        ));
        assert!(matches!(
            path_m_via_continuants(&Tree::path(4), &[0, 1]),
            Err(Error::NotBipartite(_))
        ));
    }

    #[test]
    fn swap_errors() {
        let rt = RootedTree::new(Tree::path(5), 0).unwrap();
        assert!(matches!(swap_rooted_subtrees(&rt, 2, 3), Err(Error::Overlapping)));
        assert!(matches!(swap_rooted_subtrees(&rt, 0, 3), Err(Error::RootIsWholeTree(0))));
        let star = RootedTree::new(Tree::star(5), 0).unwrap();
        let swapped = swap_rooted_subtrees(&star, 1, 2).unwrap();
        assert_eq!(crate::canonical_code(&swapped), crate::canonical_code(&star.tree));
    }

    #[test]
    fn hand_checked_enclosures() {
        // U0(1,2) = 11/15 - 1/phi and U1(1,2) = 2/3 - 1/(1 + sqrt 3).
        let u0 = u_bound(UBound::U0, &r(1), &r(2), 40).unwrap();
        assert!(u0.lo < u0.hi);
        assert!(u0.lo > parse_rational("0.115299344583438").unwrap());
        assert!(u0.hi < parse_rational("0.115299344583439").unwrap());
        let u1 = u_bound(UBound::U1, &r(1), &r(2), 40).unwrap();
        assert!(u1.lo > parse_rational("0.300641262882227").unwrap());
        assert!(u1.hi < parse_rational("0.300641262882229").unwrap());
        assert!(matches!(
            u_bound(UBound::U1, &r(0), &r(2), 40),
            Err(Error::BadRange(_))
        ));
        assert!(matches!(
            u_bound(UBound::U0, &r(3), &r(2), 40),
            Err(Error::BadRange(_))
        ));
    }

    #[test]
    fn certification_fails_honestly() {
        let err = certify_below(UBound::U0, &r(1), &r(2), &parse_rational("0.1152").unwrap());
        assert!(matches!(err, Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("50/2473").unwrap(), rat(50, 2473));
        assert_eq!(parse_rational("0.1153").unwrap(), rat(1153, 10000));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), r(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
