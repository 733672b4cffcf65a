//! The trees with the most maximum matchings for each order, chain growth,
//! the trees with the fewest maximum matchings, and the asymptotic constants.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::decimal::Decimal;
use crate::error::{Error, Result};
use crate::expr::{expr_to_tree, recognise, wrap_chain, TreeExpr};
use crate::matching::{count_max_matchings, match_stats, VertexType};
use crate::quad::QuadSurd;
use crate::tree::{RootedTree, Tree, TreeBuilder};

/// `G_0 = 0`, `G_1 = 1`, `G_{k+1} = 11 G_k - 9 G_{k-1}`.
pub fn g_sequence(k: usize) -> BigInt {
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = BigInt::from(11) * &cur - BigInt::from(9) * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// One chain link on `(m, m0)`: `(8m + 3m0, 5m + 3m0)`.
pub fn chain_step(m: &BigInt, m0: &BigInt) -> (BigInt, BigInt) {
    (
        BigInt::from(8) * m + BigInt::from(3) * m0,
        BigInt::from(5) * m + BigInt::from(3) * m0,
    )
}

/// `(m, m0)` after `k` chain links.
pub fn chain_counts(m: &BigInt, m0: &BigInt, k: usize) -> (BigInt, BigInt) {
    (0..k).fold((m.clone(), m0.clone()), |(a, b), _| chain_step(&a, &b))
}

/// The quotient map of one chain link: `x -> 1 - 3/(8 + 3x)`.
pub fn sigma(x: &BigRational) -> BigRational {
    let three = BigRational::from_integer(3.into());
    BigRational::one() - &three / (BigRational::from_integer(8.into()) + &three * x)
}

/// Common limit `(lambda - 8)/3` of the chain quotients.
pub fn rho_limit() -> QuadSurd {
    let third = BigRational::new(1.into(), 3.into());
    &(&QuadSurd::lambda() - &QuadSurd::from_int(8)) * &third
}

/// `C^k` applied to a type-A rooted tree.
pub fn chain_apply(rt: &RootedTree, k: usize) -> Result<RootedTree> {
    let s = match_stats(rt);
    if s.node_type != VertexType::A {
        return Err(Error::Type(format!(
            "chain operand has type {}, expected A",
            s.node_type
        )));
    }
    let mut b = TreeBuilder::new();
    let mut root = b.attach_detached(rt);
    for _ in 0..k {
        root = wrap_chain(&mut b, root);
    }
    Ok(b.finish_rooted(root))
}

/// One member of an optimal family.
#[derive(Debug, Clone)]
pub struct OptimalTree {
    pub tree: Tree,
    /// Rooted form whose underlying tree is `tree`.
    pub expr: TreeExpr,
    /// The chain exponents of the construction, in index order.
    pub params: Vec<u32>,
}

/// The constructed optimal trees of one order.
#[derive(Debug, Clone)]
pub struct OptimalFamily {
    pub n: usize,
    pub members: Vec<OptimalTree>,
    pub residue: usize,
    pub exceptional: bool,
}

impl OptimalFamily {
    pub fn trees(&self) -> impl Iterator<Item = &Tree> {
        self.members.iter().map(|m| &m.tree)
    }

    /// Number of maximum matchings of the first member.
    pub fn m(&self) -> BigInt {
        count_max_matchings(&self.members[0].tree).1
    }
}

/// Orders whose optimal trees are not given by the residue formulas.
pub const EXCEPTIONAL_ORDERS: [usize; 7] = [1, 2, 3, 6, 10, 13, 20];

/// Optimal trees outside the family obeying all six local conditions.
pub const LOCAL_EXCEPTIONS: [usize; 11] = [2, 3, 5, 6, 8, 9, 10, 12, 13, 16, 20];

const T6_2_FIXTURE: &str = include_str!("../data/fixtures/t6_2_star.edges");
const T13_FIXTURE: &str = include_str!("../data/fixtures/t13_star.edges");

/// Frozen edge lists of the optimal trees found by search.
pub fn fixture(name: &str) -> Option<Tree> {
    let text = match name {
        "T_6_2_star" => T6_2_FIXTURE,
        "T_13_star" => T13_FIXTURE,
        _ => return None,
    };
    Some(Tree::parse_edge_list(text).expect("checked-in fixture parses"))
}

fn chain_of(k: u32, base: TreeExpr) -> TreeExpr {
    TreeExpr::chain(k, base)
}

fn floor_div(a: i64, b: i64) -> u32 {
    u32::try_from(a.div_euclid(b)).expect("non-negative exponent")
}

/// Rooted form and chain exponents of the generic construction for `n`.
fn generic(n: usize) -> (TreeExpr, Vec<u32>) {
    use TreeExpr::{Fork as F, Leaf as L};
    let ni = n as i64;
    match n % 7 {
        1 => {
            let k = ((n - 1) / 7) as u32;
            (chain_of(k, L), vec![k])
        }
        4 => {
            let k = ((n - 4) / 7) as u32;
            (chain_of(k, F), vec![k])
        }
        0 => {
            let k = ((n - 7) / 7) as u32;
            (TreeExpr::b(vec![L, L, chain_of(k, F)]), vec![k])
        }
        3 => {
            let ks: Vec<u32> = (0..4).map(|j| floor_div(ni - 17 + 7 * j, 28)).collect();
            let branches = ks.iter().map(|&k| chain_of(k, F)).collect();
            (TreeExpr::b(branches), ks)
        }
        5 => {
            let ks: Vec<u32> = (0..3).map(|j| floor_div(ni - 5 + 7 * j, 21)).collect();
            let mut branches = vec![L];
            branches.extend(ks.iter().map(|&k| chain_of(k, L)));
            (TreeExpr::b(branches), ks)
        }
        2 => {
            let mut ks = vec![0u32; 5];
            if n >= 37 {
                ks[0] = floor_div(ni - 37, 35);
                for j in 1..5 {
                    ks[j] = floor_div(ni - 2 + 7 * j as i64, 35);
                }
            } else {
                for j in 1..5 {
                    ks[j] = floor_div(ni - 9 + 7 * j as i64, 35);
                }
            }
            (double_hub_l(&ks), ks)
        }
        6 => {
            let ks: Vec<u32> = (0..7).map(|j| floor_div(ni - 27 + 7 * j, 49)).collect();
            (double_hub_f(&ks), ks)
        }
        _ => unreachable!(),
    }
}

/// `B(L, C^k2 L, C^k4 L, C^k0 A(B(L, C^k1 L, C^k3 L)))`.
fn double_hub_l(ks: &[u32]) -> TreeExpr {
    use TreeExpr::Leaf as L;
    let inner = TreeExpr::a(vec![TreeExpr::b(vec![L, chain_of(ks[1], L), chain_of(ks[3], L)])]);
    TreeExpr::b(vec![L, chain_of(ks[2], L), chain_of(ks[4], L), chain_of(ks[0], inner)])
}

/// `B(C^k2 F, C^k4 F, C^k6 F, C^k0 A(B(C^k1 F, C^k3 F, C^k5 F)))`.
fn double_hub_f(ks: &[u32]) -> TreeExpr {
    use TreeExpr::Fork as F;
    let inner = TreeExpr::a(vec![TreeExpr::b(vec![
        chain_of(ks[1], F),
        chain_of(ks[3], F),
        chain_of(ks[5], F),
    ])]);
    TreeExpr::b(vec![
        chain_of(ks[2], F),
        chain_of(ks[4], F),
        chain_of(ks[6], F),
        chain_of(ks[0], inner),
    ])
}

fn member(expr: TreeExpr, params: Vec<u32>) -> OptimalTree {
    let tree = expr_to_tree(&expr).expect("constructions are well typed").tree;
    OptimalTree { tree, expr, params }
}

fn fixture_member(name: &str) -> OptimalTree {
    let tree = fixture(name).expect("known fixture");
    let rooted = best_rooting(&tree);
    let expr = recognise(&rooted).expect("optimal fixtures fulfil the bipartition condition");
    OptimalTree {
        tree,
        expr,
        params: Vec::new(),
    }
}

/// A rooting at a vertex of maximum degree, which keeps the expression short.
fn best_rooting(t: &Tree) -> RootedTree {
    let v = (0..t.order()).max_by_key(|&v| (t.degree(v), std::cmp::Reverse(v))).unwrap_or(0);
    RootedTree::new(t.clone(), v).expect("vertex in range")
}

/// The optimal trees of order `n`, built from the residue of `n` mod 7.
pub fn build_optimal(n: usize) -> Result<OptimalFamily> {
    use TreeExpr::{Fork as F, Leaf as L};
    if n == 0 {
        return Err(Error::OrderTooSmall(0));
    }
    let exceptional = EXCEPTIONAL_ORDERS.contains(&n);
    let members = match n {
        1 => vec![member(L, vec![])],
        2 => vec![member(TreeExpr::b(vec![L]), vec![])],
        3 => vec![member(TreeExpr::b(vec![L, L]), vec![])],
        6 => vec![
            member(TreeExpr::b(vec![L; 5]), vec![]),
            fixture_member("T_6_2_star"),
        ],
        10 => vec![member(
            TreeExpr::b(vec![L, L, TreeExpr::a(vec![TreeExpr::b(vec![L, F])])]),
            vec![],
        )],
        13 => vec![fixture_member("T_13_star")],
        20 => vec![member(TreeExpr::b(vec![L, L, TreeExpr::chain_l(4, L)]), vec![])],
        34 => {
            let (e, ks) = generic(34);
            let variant = vec![1, 0, 0, 0, 0, 0, 0];
            vec![member(e, ks), member(double_hub_f(&variant), variant)]
        }
        _ => {
            let (e, ks) = generic(n);
            vec![member(e, ks)]
        }
    };
    Ok(OptimalFamily {
        n,
        members,
        residue: n % 7,
        exceptional,
    })
}

/// Whether `t` has the fewest maximum matchings among trees of its order:
/// for even order a perfect matching, for odd order a vertex with two leaf
/// neighbours such that removing one of them leaves a perfect matching.
pub fn is_minimum(t: &Tree) -> bool {
    let n = t.order();
    if n < 2 {
        return true;
    }
    if n % 2 == 0 {
        return count_max_matchings(t).0 == n / 2;
    }
    (0..n).any(|w| {
        let leaves: Vec<usize> = t.neighbors(w).iter().copied().filter(|&x| t.is_leaf(x)).collect();
        if leaves.len() < 2 {
            return false;
        }
        let (rest, _) = t.component(w, Some(leaves[0]));
        count_max_matchings(&rest.tree).0 == (n - 1) / 2
    })
}

/// One entry of the table of asymptotic constants
/// `c_j = (p lambda - q) / (d lambda^(j/7))`.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticConstant {
    pub j: usize,
    pub p: i64,
    pub q: i64,
    pub d: i64,
    /// The value to [`ASYMPTOTIC_DIGITS`] digits.
    pub value: String,
    /// Published 15-digit value.
    pub published: &'static str,
    /// `|value - published| / published` to 3 significant digits.
    pub relative_error: String,
    /// Whether the relative error is at most [`PUBLISHED_TOLERANCE`].
    pub matches_published: bool,
}

/// Default number of fractional digits for high-precision output.
pub const ASYMPTOTIC_DIGITS: usize = 50;

/// Relative tolerance against the published decimals, as `(1, 10^14)`.
pub const PUBLISHED_TOLERANCE: (i64, u32) = (1, 14);

const CONSTANT_FORMULAS: [(i64, i64, i64, &str); 7] = [
    (67, 71, 765, "0.792620574273610"),
    (11, 18, 85, "0.787947762616490"),
    (101047, 90171, 614125, "0.783080426542439"),
    (4996, 4448, 21675, "0.788434032505851"),
    (27, 21, 85, "0.790280714748050"),
    (3209, 2817, 7225, "0.785510324593434"),
    (6451616, 5743408, 10440125, "0.784269603628599"),
];

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// `lambda^(n/7)` to `scale` digits, from the exact value of `lambda^n`.
pub fn lambda_power_sevenths(n: u32, scale: usize) -> Decimal {
    QuadSurd::lambda().pow(n).to_decimal(scale + 10).nth_root(7).rescale(scale)
}

/// `c_j` as an exact rational approximation with `scale` guaranteed digits
/// (up to a few units in the last place).
pub fn asymptotic_constant(j: usize, scale: usize) -> BigRational {
    let (p, q, d, _) = CONSTANT_FORMULAS[j];
    let work = scale + 20;
    let lam = QuadSurd::lambda();
    let numer = &(&lam * &BigRational::from_integer(p.into())) - &QuadSurd::from_int(q);
    let numer = numer.to_decimal(work).to_rational();
    let root = lambda_power_sevenths(j as u32, work).to_rational();
    numer / (root * BigRational::from_integer(d.into()))
}

fn relative_error(value: &BigRational, reference: &BigRational) -> BigRational {
    ((value - reference) / reference).abs()
}

fn scientific(x: &BigRational) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut e = 0i32;
    let mut y = x.clone();
    let ten = BigRational::from_integer(10.into());
    let one = BigRational::one();
    while y < one {
        y = &y * &ten;
        e -= 1;
    }
    while y >= ten {
        y = &y / &ten;
        e += 1;
    }
    let mant = Decimal::from_rational_floor(&y, 2);
    format!("{mant}e{e}")
}

/// Evaluates every asymptotic constant and compares it with the published
/// decimals.
pub fn asymptotic_constants() -> Vec<AsymptoticConstant> {
    let tol = BigRational::new(PUBLISHED_TOLERANCE.0.into(), pow10(PUBLISHED_TOLERANCE.1));
    CONSTANT_FORMULAS
        .iter()
        .enumerate()
        .map(|(j, &(p, q, d, published))| {
            let value = asymptotic_constant(j, ASYMPTOTIC_DIGITS + 5);
            let reference = crate::continuants::parse_rational(published).expect("published decimal");
            let err = relative_error(&value, &reference);
            AsymptoticConstant {
                j,
                p,
                q,
                d,
                value: Decimal::from_rational_floor(&value, ASYMPTOTIC_DIGITS).to_string(),
                published,
                relative_error: scientific(&err),
                matches_published: err <= tol,
            }
        })
        .collect()
}

/// `m(T_n^*) / lambda^(n/7)` and `c_(n mod 7)`, both as rationals accurate to
/// `scale` digits.
#[derive(Debug, Clone)]
pub struct AsymptoticRatio {
    pub n: usize,
    pub m: BigInt,
    pub ratio: BigRational,
    pub constant: BigRational,
    pub relative_error: BigRational,
    pub scale: usize,
}

impl AsymptoticRatio {
    pub fn ratio_decimal(&self) -> Decimal {
        Decimal::from_rational_floor(&self.ratio, self.scale)
    }

    pub fn constant_decimal(&self) -> Decimal {
        Decimal::from_rational_floor(&self.constant, self.scale)
    }

    pub fn relative_error_text(&self) -> String {
        scientific(&self.relative_error)
    }
}

/// Compares the exact count of the constructed optimal tree with the
/// asymptotic prediction.
pub fn asymptotic_ratio(n: usize) -> Result<AsymptoticRatio> {
    asymptotic_ratio_with(n, ASYMPTOTIC_DIGITS)
}

pub fn asymptotic_ratio_with(n: usize, scale: usize) -> Result<AsymptoticRatio> {
    let family = build_optimal(n)?;
    let m = family.m();
    let digits = m.to_string().len();
    let power = lambda_power_sevenths(n as u32, scale + digits + 10).to_rational();
    let ratio = BigRational::from_integer(m.clone()) / power;
    let constant = asymptotic_constant(n % 7, scale + 5);
    let relative_error = relative_error(&ratio, &constant);
    Ok(AsymptoticRatio {
        n,
        m,
        ratio,
        constant,
        relative_error,
        scale,
    })
}

/// Cross-checks the chain construction against the integer sequence `G`
/// for a few links. Runs once per process; a mismatch aborts.
pub fn self_test() -> Result<()> {
    static RESULT: OnceLock<std::result::Result<(), String>> = OnceLock::new();
    RESULT
        .get_or_init(|| run_self_test().map_err(|e| e.to_string()))
        .clone()
        .map_err(Error::SelfTest)
}

fn run_self_test() -> Result<()> {
    let leaf = RootedTree::leaf();
    for k in 0..6 {
        let s = match_stats(&chain_apply(&leaf, k)?);
        let g1 = g_sequence(k + 1);
        let g0 = g_sequence(k);
        let expected = (g1.clone(), &g1 - BigInt::from(3) * &g0);
        if (s.m.clone(), s.m0.clone()) != expected {
            return Err(Error::SelfTest(format!(
                "C^{k}L has (m, m0) = ({}, {}), sequence predicts ({}, {})",
                s.m, s.m0, expected.0, expected.1
            )));
        }
    }
    Ok(())
}
