//! Exact searches for rational points on `x^n + y^n = 1`, integer solutions
//! of `x^n + y^n = z^n`, and crossings between wrapped lines and the curve.
//!
//! Every reported solution is verified in exact arithmetic. Nothing here
//! claims irrationality: a crossing without a label is only known to have
//! no rational explanation with denominator up to the requested bound.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::rational::{exact_integer_root, rational_reconstruct, FareyIter, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("exponent n must be at least 1")]
    ZeroExponent,
    #[error("search bound must be at least 1")]
    ZeroBound,
    #[error("({x}, {y}, {z}) does not satisfy x^{n} + y^{n} = z^{n}")]
    NotASolution { x: i64, y: i64, z: i64, n: u32 },
    #[error("z must be positive")]
    NonPositiveZ,
    #[error("line slopes must be non-negative and not both zero")]
    BadSlope,
    #[error("tolerance must be positive")]
    BadTolerance,
}

/// An exact rational point of the Fermat curve of degree `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SolutionRecord {
    pub x: Rational,
    pub y: Rational,
    pub n: u32,
    /// Integer triple `(p, q, z)` with `x = p/z`, `y = q/z`.
    pub witness: Option<(BigInt, BigInt, BigInt)>,
}

impl SolutionRecord {
    /// `x^n + y^n - 1`, computed exactly.
    pub fn residual(&self) -> Rational {
        self.x.pow(self.n) + self.y.pow(self.n) - Rational::one()
    }
}

/// Primitive integer solution of `x^n + y^n = z^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

fn pow_u(v: u64, n: u32) -> BigUint {
    num_traits::pow(BigUint::from(v), n as usize)
}

/// Tests the single abscissa `p/q` (reduced, `0 < p < q`).
fn solve_at(p: u64, q: u64, q_pow: &BigUint, n: u32) -> Option<SolutionRecord> {
    // 1 - (p/q)^n = (q^n - p^n) / q^n, already in lowest terms, and q^n is
    // trivially a perfect n-th power; only the numerator needs a root.
    let rest = q_pow - pow_u(p, n);
    let s = exact_integer_root(&rest, n)?;
    let s = s.to_u64().expect("root below q fits in u64");
    Some(SolutionRecord {
        x: Rational::from_parts_unchecked(p, q),
        y: Rational::from_parts_unchecked(s, q),
        n,
        witness: Some((BigInt::from(p), BigInt::from(s), BigInt::from(q))),
    })
}

/// All rational points `(x, y)` with `0 < x, y < 1` on `x^n + y^n = 1`
/// whose denominators are at most `max_den`, sorted by `x`.
///
/// Only `x` is enumerated; `y` is decided exactly by an n-th root test. For
/// reduced `x = p/q`, any solution has `y` with the same denominator `q`, so
/// this one-dimensional sweep is complete.
pub fn rational_points_on_curve(n: u32, max_den: u64) -> Result<Vec<SolutionRecord>, SearchError> {
    if n == 0 {
        return Err(SearchError::ZeroExponent);
    }
    let farey = FareyIter::new(max_den).map_err(|_| SearchError::ZeroBound)?;
    let mut out = Vec::new();
    let mut cached: Option<(u64, BigUint)> = None;
    for (p, q) in farey {
        if p == 0 || p == q {
            continue;
        }
        let q_pow = match &cached {
            Some((cq, qp)) if *cq == q => qp,
            _ => &cached.insert((q, pow_u(q, n))).1,
        };
        if let Some(rec) = solve_at(p, q, q_pow, n) {
            out.push(rec);
        }
    }
    Ok(out)
}

/// The same search restricted to denominators in `dens`, for splitting the
/// work across threads. Output is sorted by `(x, y)`, so merging partitions
/// and re-sorting reproduces [`rational_points_on_curve`].
pub fn rational_points_for_denominators(
    n: u32,
    dens: std::ops::RangeInclusive<u64>,
) -> Result<Vec<SolutionRecord>, SearchError> {
    if n == 0 {
        return Err(SearchError::ZeroExponent);
    }
    let mut out = Vec::new();
    for q in dens.filter(|&q| q >= 2) {
        let q_pow = pow_u(q, n);
        for p in (1..q).filter(|p| p.gcd(&q) == 1) {
            if let Some(rec) = solve_at(p, q, &q_pow, n) {
                out.push(rec);
            }
        }
    }
    sort_solutions(&mut out);
    Ok(out)
}

/// Total order by `x`, then `y`.
pub fn sort_solutions(v: &mut [SolutionRecord]) {
    v.sort_by(|a, b| a.x.cmp(&b.x).then_with(|| a.y.cmp(&b.y)));
}

/// Primitive triples `0 < x <= y < z <= max_z` with `x^n + y^n = z^n`,
/// sorted by `z` then `x`.
pub fn diophantine_triples(n: u32, max_z: u64) -> Result<Vec<Triple>, SearchError> {
    if n == 0 {
        return Err(SearchError::ZeroExponent);
    }
    if max_z == 0 {
        return Err(SearchError::ZeroBound);
    }
    let mut out = Vec::new();
    for z in 2..=max_z {
        let z_pow = pow_u(z, n);
        for x in 1..z {
            let x_pow = pow_u(x, n);
            let rest = &z_pow - &x_pow;
            if rest < x_pow {
                break;
            }
            if let Some(y) = exact_integer_root(&rest, n) {
                let y = y.to_u64().expect("y < z");
                if y > 0 && x.gcd(&y).gcd(&z) == 1 {
                    out.push(Triple { x, y, z });
                }
            }
        }
    }
    Ok(out)
}

/// Every multiple `k·t` of the given primitive triples with `k·z <= max_z`,
/// sorted by `z` then `x`.
pub fn expand_multiples(primitive: &[Triple], max_z: u64) -> Vec<Triple> {
    let mut out: Vec<Triple> = primitive
        .iter()
        .flat_map(|t| {
            (1..=max_z / t.z).map(move |k| Triple {
                x: k * t.x,
                y: k * t.y,
                z: k * t.z,
            })
        })
        .collect();
    out.sort_by_key(|t| (t.z, t.x, t.y));
    out
}

/// Divides an integer solution through by `z`, checking it exactly first.
pub fn rescale_check(triple: (i64, i64, i64), n: u32) -> Result<SolutionRecord, SearchError> {
    let (x, y, z) = triple;
    if n == 0 {
        return Err(SearchError::ZeroExponent);
    }
    if z <= 0 {
        return Err(SearchError::NonPositiveZ);
    }
    let p = |v: i64| num_traits::pow(BigInt::from(v), n as usize);
    if p(x) + p(y) != p(z) {
        return Err(SearchError::NotASolution { x, y, z, n });
    }
    Ok(SolutionRecord {
        x: Rational::new(x, z).expect("z > 0"),
        y: Rational::new(y, z).expect("z > 0"),
        n,
        witness: Some((BigInt::from(x), BigInt::from(y), BigInt::from(z))),
    })
}

/// A crossing of the wrapped line `y = (b/a) x mod 1` with the curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingRecord {
    pub x: f64,
    pub y: f64,
    /// Exactly verified rational coordinates, if reconstruction found any.
    pub rational_label: Option<(Rational, Rational)>,
    pub slope: (Rational, Rational),
    /// Which wrap of the line (`y = s x - branch`) the crossing lies on.
    pub branch: u64,
}

/// A branch on which bisection could not be started.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchFailure {
    pub branch: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CrossingSearch {
    pub crossings: Vec<CrossingRecord>,
    pub failures: Vec<BranchFailure>,
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return mid;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn label(
    x: f64,
    n: u32,
    slope: &Rational,
    branch: u64,
    max_den: u64,
    tol: f64,
) -> Option<(Rational, Rational)> {
    let xr = rational_reconstruct(x, max_den, tol)?;
    let yr = slope * &xr - Rational::from_integer(branch);
    if yr.is_negative() || yr > Rational::one() {
        return None;
    }
    (xr.pow(n) + yr.pow(n) == Rational::one()).then_some((xr, yr))
}

/// Crossings of the line through the origin with direction `(a, b)`, wrapped
/// onto the unit square, with the curve `x^n + y^n = 1`.
///
/// On each wrap `y = s x - k` (`s = b/a`) the function `x^n + y^n - 1` is
/// increasing, so each branch holds exactly one crossing, found by
/// bisection to `tol`. A crossing is labelled rational only if a
/// reconstructed `x` (denominator at most `max_den`) and the exactly derived
/// `y` satisfy the curve equation in exact arithmetic.
pub fn line_curve_crossings(
    n: u32,
    a: &Rational,
    b: &Rational,
    max_den: u64,
    tol: f64,
) -> Result<CrossingSearch, SearchError> {
    if n == 0 {
        return Err(SearchError::ZeroExponent);
    }
    if a.is_negative() || b.is_negative() || (a.is_zero() && b.is_zero()) {
        return Err(SearchError::BadSlope);
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(SearchError::BadTolerance);
    }
    let slope_pair = (a.clone(), b.clone());
    if a.is_zero() {
        // The vertical line x = 0 meets the curve only at (0, 1).
        return Ok(CrossingSearch {
            crossings: vec![CrossingRecord {
                x: 0.0,
                y: 1.0,
                rational_label: Some((Rational::zero(), Rational::one())),
                slope: slope_pair,
                branch: 0,
            }],
            failures: Vec::new(),
        });
    }
    let slope = b / a;
    let s = slope.to_f64();
    let nf = n as f64;
    let mut search = CrossingSearch::default();
    if slope.is_zero() {
        search.crossings.push(CrossingRecord {
            x: 1.0,
            y: 0.0,
            rational_label: Some((Rational::one(), Rational::zero())),
            slope: slope_pair,
            branch: 0,
        });
        return Ok(search);
    }

    // Branch k covers k/s <= x < (k+1)/s; those with k < s meet [0, 1).
    let ceil = -(-slope.numer()).div_floor(slope.denom());
    let branches = ceil.to_u64().unwrap_or(u64::MAX);
    for k in 0..branches {
        let kf = k as f64;
        let lo = kf / s;
        let reaches_top = (k + 1) as f64 / s <= 1.0;
        let hi = if reaches_top { (kf + 1.0) / s } else { 1.0 };
        let f = |x: f64| x.powf(nf) + (s * x - kf).max(0.0).powf(nf) - 1.0;
        let f_lo = lo.powf(nf) - 1.0;
        // At the top of a branch y reaches 1 (exclusive), so f -> hi^n.
        let f_hi = if reaches_top { hi.powf(nf) } else { f(hi) };
        if !(f_lo < 0.0 && f_hi > 0.0) {
            search.failures.push(BranchFailure {
                branch: k,
                reason: format!("no sign change on [{lo}, {hi}] (f = {f_lo}, {f_hi})"),
            });
            continue;
        }
        let x = bisect(f, lo, hi, tol);
        let y = (s * x - kf).clamp(0.0, 1.0);
        search.crossings.push(CrossingRecord {
            x,
            y,
            rational_label: label(x, n, &slope, k, max_den, tol),
            slope: slope_pair.clone(),
            branch: k,
        });
    }
    Ok(search)
}

impl Triple {
    pub fn as_i64(&self) -> (i64, i64, i64) {
        (self.x as i64, self.y as i64, self.z as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn pythagorean_points() {
        let sols = rational_points_on_curve(2, 25).unwrap();
        assert_eq!(sols.len(), 8);
        assert_eq!(sols[0].x, r("7/25"));
        assert!(sols.iter().any(|s| s.x == r("3/5") && s.y == r("4/5")));
        assert!(sols.iter().all(|s| s.residual().is_zero()));
    }

    #[test]
    fn degree_one_line() {
        let sols = rational_points_on_curve(1, 2).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!((sols[0].x.clone(), sols[0].y.clone()), (r("1/2"), r("1/2")));
    }

    #[test]
    fn bad_arguments() {
        assert_eq!(
            rational_points_on_curve(0, 5),
            Err(SearchError::ZeroExponent)
        );
        assert_eq!(rational_points_on_curve(2, 0), Err(SearchError::ZeroBound));
        assert_eq!(diophantine_triples(2, 0), Err(SearchError::ZeroBound));
    }

    #[test]
    fn triples_small() {
        let t = diophantine_triples(2, 30).unwrap();
        let got: Vec<_> = t.iter().map(|t| (t.x, t.y, t.z)).collect();
        assert_eq!(
            got,
            [
                (3, 4, 5),
                (5, 12, 13),
                (8, 15, 17),
                (7, 24, 25),
                (20, 21, 29)
            ]
        );
        assert_eq!(
            diophantine_triples(2, 5).unwrap(),
            [Triple { x: 3, y: 4, z: 5 }]
        );
        assert!(diophantine_triples(3, 200).unwrap().is_empty());
    }

    #[test]
    fn multiples() {
        let prim = diophantine_triples(2, 13).unwrap();
        let all = expand_multiples(&prim, 13);
        let got: Vec<_> = all.iter().map(|t| (t.x, t.y, t.z)).collect();
        assert_eq!(got, [(3, 4, 5), (6, 8, 10), (5, 12, 13)]);
    }

    #[test]
    fn rescale_examples() {
        let s = rescale_check((3, 4, 5), 2).unwrap();
        assert_eq!((s.x, s.y), (r("3/5"), r("4/5")));
        let s = rescale_check((5, 12, 13), 2).unwrap();
        assert_eq!((s.x.clone(), s.y.clone()), (r("5/13"), r("12/13")));
        assert!(s.residual().is_zero());
        assert_eq!(
            rescale_check((1, 1, 2), 3),
            Err(SearchError::NotASolution {
                x: 1,
                y: 1,
                z: 2,
                n: 3
            })
        );
        assert_eq!(rescale_check((3, 4, 0), 2), Err(SearchError::NonPositiveZ));
    }

    #[test]
    fn crossing_on_pythagorean_line() {
        let res = line_curve_crossings(2, &r("3"), &r("4"), 1000, 1e-13).unwrap();
        assert!(res.failures.is_empty());
        assert_eq!(res.crossings.len(), 2);
        let c = &res.crossings[0];
        assert!((c.x - 0.6).abs() < 1e-12 && (c.y - 0.8).abs() < 1e-12);
        assert_eq!(c.rational_label, Some((r("3/5"), r("4/5"))));
        // The second wrap y = 4x/3 - 1 meets the circle at (24/25, 7/25).
        assert_eq!(
            res.crossings[1].rational_label,
            Some((r("24/25"), r("7/25")))
        );
    }

    #[test]
    fn crossing_on_diagonal() {
        for (n, expect) in [(2u32, 0.5f64.sqrt()), (3, 0.5f64.powf(1.0 / 3.0))] {
            let res = line_curve_crossings(n, &r("1"), &r("1"), 1_000_000, 1e-14).unwrap();
            assert_eq!(res.crossings.len(), 1);
            let c = &res.crossings[0];
            assert!((c.x - expect).abs() < 1e-13, "{} vs {}", c.x, expect);
            assert!(c.rational_label.is_none());
        }
    }

    #[test]
    fn degenerate_lines() {
        let res = line_curve_crossings(3, &r("0"), &r("1"), 10, 1e-12).unwrap();
        assert_eq!(res.crossings[0].rational_label, Some((r("0"), r("1"))));
        let res = line_curve_crossings(3, &r("1"), &r("0"), 10, 1e-12).unwrap();
        assert_eq!(res.crossings[0].rational_label, Some((r("1"), r("0"))));
        assert_eq!(
            line_curve_crossings(2, &r("-1"), &r("1"), 10, 1e-12),
            Err(SearchError::BadSlope)
        );
        assert_eq!(
            line_curve_crossings(2, &r("1"), &r("1"), 10, 0.0),
            Err(SearchError::BadTolerance)
        );
    }

    #[test]
    fn every_branch_has_one_crossing() {
        let res = line_curve_crossings(3, &r("2"), &r("7"), 100, 1e-13).unwrap();
        assert!(res.failures.is_empty());
        assert_eq!(res.crossings.len(), 4);
        for c in &res.crossings {
            assert!((c.x.powi(3) + c.y.powi(3) - 1.0).abs() < 1e-11);
        }
    }
}
