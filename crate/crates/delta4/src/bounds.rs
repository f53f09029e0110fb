//! The explicit numeric side of the two main theorems: arithmetic genus,
//! the point-count interval for absolutely irreducible plane curves, the
//! hyperplane and hypersurface caps, and the exact integer evaluation of
//! the threshold inequalities deciding when delta > 4 is guaranteed.
//!
//! Every inequality is decided in exact integer arithmetic via squared
//! comparisons; the thresholds sit near crossover points where floating
//! point could flip a verdict.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest field degree accepted by the formula evaluations (q must fit in
/// a u64 with headroom for the squared comparisons in u128/i128).
pub const BOUNDS_M_MAX: u32 = 62;

/// Integer square root (floor) for u128.
fn isqrt(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = 1u128 << ((128 - n.leading_zeros()).div_ceil(2));
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Arithmetic genus (d-4)(d-5)/2 of the degree-(d-3) plane curve attached
/// to x^d; defined for odd d >= 5.
pub fn arithmetic_genus(d: u64) -> Result<u64> {
    if d < 5 || d % 2 == 0 {
        return Err(Error::BadArgument {
            what: format!("arithmetic genus needs odd d >= 5, got {d}"),
        });
    }
    Ok((d - 4) * (d - 5) / 2)
}

/// The interval [q+1 - 2g*sqrt(q), q+1 + 2g*sqrt(q)] rounded inward to
/// integers; the lower end may be negative. Exact: floor(2g*sqrt(q)) is
/// isqrt(4 g^2 q).
pub fn weil_interval(q: u64, genus: u64) -> (i64, i64) {
    let s = isqrt(4 * (genus as u128) * (genus as u128) * q as u128) as i64;
    let mid = q as i64 + 1;
    (mid - s, mid + s)
}

/// A plane curve of degree degC not contained in V meets V in at most
/// 7*degC rational points (one plane section per hyperplane).
pub fn hyperplane_cap(deg_c: u64) -> Result<u64> {
    if deg_c < 1 {
        return Err(Error::BadArgument {
            what: "hyperplane cap needs degC >= 1".into(),
        });
    }
    Ok(7 * deg_c)
}

/// Cap 8(deg(X) q + 1) on the rational points of a degree->1 surface inside
/// the union of eight hyperplane sections.
pub fn serre_cap(deg_x: u64, q: u64) -> Result<u64> {
    if deg_x < 2 {
        return Err(Error::BadArgument {
            what: "the surface cap assumes degree > 1".into(),
        });
    }
    Ok(8 * (deg_x * q + 1))
}

/// d = 2^r - 1 for some r >= 3.
pub fn mersenne_r(d: u64) -> Option<u32> {
    if d >= 7 && (d + 1).is_power_of_two() {
        Some((d + 1).trailing_zeros())
    } else {
        None
    }
}

/// Exact check of q - 2*pi*sqrt(q) - 7(d-3) + 1 > 0 with
/// pi = (d-4)(d-5)/2: rewritten as A > 0 and A^2 > (2 pi)^2 q where
/// A = q - 7(d-3) + 1.
fn monomial_proof_inequality(d: u64, q: u64) -> bool {
    if d < 5 {
        return false;
    }
    let pi = (d - 4) * (d - 5) / 2;
    let a = q as i128 - 7 * (d as i128 - 3) + 1;
    a > 0 && a * a > 4 * (pi as i128) * (pi as i128) * q as i128
}

/// Exact check of q - (d-3)^4 sqrt(q) - 36(2d-3)^5 - 8(d-3) > 0.
fn polynomial_proof_inequality(d: u64, q: u64) -> bool {
    if d < 4 {
        return false;
    }
    let k = 36 * (2 * (d as i128) - 3).pow(5) + 8 * (d as i128 - 3);
    let a = q as i128 - k;
    let b = (d as i128 - 3).pow(4);
    a > 0 && a * a > b * b * q as i128
}

/// The closed-form sufficient condition q >= d^4 - 18d^3 + 121d^2 - 348d + 362.
fn monomial_sufficient_quartic(d: u64, q: u64) -> bool {
    let d = d as i128;
    q as i128 >= d.pow(4) - 18 * d.pow(3) + 121 * d * d - 348 * d + 362
}

/// The closed-form sufficient condition 5 <= d < q^(1/4) + 4.6, decided as
/// (10d - 46)^4 < 10^4 q.
fn monomial_sufficient_quarter_root(d: u64, q: u64) -> bool {
    if d < 5 {
        return false;
    }
    let lhs = (10 * d as i128 - 46).pow(4);
    lhs < 10_000 * q as i128
}

/// The stated scope of the degree-(2^r - 1) polynomial theorem: the general
/// band 31 <= d < q^(1/8) + 2 plus the two named small cases.
fn polynomial_statement(d: u64, m: u32, q: u64) -> bool {
    if mersenne_r(d).is_none() {
        return false;
    }
    (d == 7 && m >= 22)
        || (d == 15 && m >= 30)
        || (d >= 31 && {
            let lhs = (d as u128 - 2).pow(8);
            lhs < q as u128
        })
}

/// True iff d = 2^r - 1 (r >= 3) and the exact monomial proof inequality
/// holds, i.e. delta(x^d) > 4 is guaranteed on F_{2^m}.
pub fn monomial_theorem_applies(d: u64, m: u32) -> Result<bool> {
    let q = checked_q(m)?;
    Ok(mersenne_r(d).is_some() && monomial_proof_inequality(d, q))
}

/// True iff d = 2^r - 1 (r >= 3) and the exact proof inequality of the
/// degree-d polynomial theorem holds. Note this is the proof inequality,
/// not the theorem's stated (d, m) cases; `BoundReport` carries both.
pub fn polynomial_theorem_applies(d: u64, m: u32) -> Result<bool> {
    let q = checked_q(m)?;
    Ok(mersenne_r(d).is_some() && polynomial_proof_inequality(d, q))
}

fn checked_q(m: u32) -> Result<u64> {
    if m < 2 || m > BOUNDS_M_MAX {
        return Err(Error::BadArgument {
            what: format!("bounds evaluation needs 2 <= m <= {BOUNDS_M_MAX}, got {m}"),
        });
    }
    Ok(1u64 << m)
}

/// Every explicit formula evaluated at one (d, m).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub d: u64,
    pub m: u32,
    pub q: u64,
    /// (d-4)(d-5)/2 for odd d >= 5.
    pub genus: Option<u64>,
    /// Point-count interval from the genus; lower end may be negative.
    pub weil_interval: Option<(i64, i64)>,
    /// 7(d-3) for d >= 4.
    pub hyperplane_cap: Option<u64>,
    /// 8((d-3)^2 q + 1) for d >= 5.
    pub serre_cap: Option<u64>,
    /// d = 2^r - 1 with r >= 3.
    pub mersenne_hypothesis: bool,
    /// Exact proof inequality of the monomial theorem.
    pub monomial_inequality_holds: bool,
    /// Exact proof inequality of the polynomial theorem.
    pub polynomial_inequality_holds: bool,
    /// Closed-form sufficient condition q >= d^4 - 18d^3 + 121d^2 - 348d + 362.
    pub monomial_sufficient_quartic: bool,
    /// Closed-form sufficient condition 5 <= d < q^(1/4) + 4.6. Reported for
    /// cross-reference only; it can disagree with the exact inequality near
    /// the boundary (d=7, m=6) and never drives the predicted flags.
    pub monomial_sufficient_quarter_root: bool,
    /// The polynomial theorem's stated coverage (d=7, m>=22; d=15, m>=30;
    /// 31 <= d < q^(1/8)+2). The published statement starts one field degree
    /// earlier than the exact proof inequality for d=7 and d=15.
    pub polynomial_statement_applies: bool,
    pub predicted_delta_gt_4_monomial: bool,
    pub predicted_delta_gt_4_polynomial: bool,
}

/// Evaluate every formula for (d, m). The monomial prediction follows the
/// exact proof inequality; the polynomial prediction is granted by either
/// the exact inequality or the theorem's stated cases, with both verdicts
/// visible separately.
pub fn bound_report(d: u64, m: u32) -> Result<BoundReport> {
    let q = checked_q(m)?;
    let genus = arithmetic_genus(d).ok();
    let weil = genus.map(|g| weil_interval(q, g));
    let mersenne = mersenne_r(d).is_some();
    let mono = monomial_proof_inequality(d, q);
    let poly = polynomial_proof_inequality(d, q);
    let statement = polynomial_statement(d, m, q);
    Ok(BoundReport {
        d,
        m,
        q,
        genus,
        weil_interval: weil,
        hyperplane_cap: if d >= 4 { Some(7 * (d - 3)) } else { None },
        serre_cap: if d >= 5 {
            Some(8 * ((d - 3) * (d - 3) * q + 1))
        } else {
            None
        },
        mersenne_hypothesis: mersenne,
        monomial_inequality_holds: mono,
        polynomial_inequality_holds: poly,
        monomial_sufficient_quartic: monomial_sufficient_quartic(d, q),
        monomial_sufficient_quarter_root: monomial_sufficient_quarter_root(d, q),
        polynomial_statement_applies: statement,
        predicted_delta_gt_4_monomial: mersenne && mono,
        predicted_delta_gt_4_polynomial: mersenne && (poly || statement),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_values() {
        assert_eq!(arithmetic_genus(7).unwrap(), 3);
        assert_eq!(arithmetic_genus(15).unwrap(), 55);
        assert_eq!(arithmetic_genus(5).unwrap(), 0);
        assert!(arithmetic_genus(4).is_err());
        assert!(arithmetic_genus(3).is_err());
    }

    #[test]
    fn weil_intervals() {
        assert_eq!(weil_interval(256, 3), (161, 353));
        assert_eq!(weil_interval(64, 3), (17, 113));
        // odd m: sqrt(q) irrational, rounded inward
        assert_eq!(weil_interval(32, 3), (0, 66));
        // genus zero pinches to a point
        assert_eq!(weil_interval(1024, 0), (1025, 1025));
        assert_eq!(weil_interval(16, 3), (-7, 41));
    }

    #[test]
    fn caps() {
        assert_eq!(hyperplane_cap(4).unwrap(), 28);
        assert_eq!(hyperplane_cap(1).unwrap(), 7);
        assert_eq!(hyperplane_cap(12).unwrap(), 84);
        assert!(hyperplane_cap(0).is_err());
        assert_eq!(serre_cap(16, 64).unwrap(), 8200);
        assert_eq!(serre_cap(2, 2).unwrap(), 40);
        assert_eq!(serre_cap(144, 1024).unwrap(), 1_179_656);
        assert!(serre_cap(1, 64).is_err());
    }

    #[test]
    fn mersenne_detection() {
        assert_eq!(mersenne_r(7), Some(3));
        assert_eq!(mersenne_r(15), Some(4));
        assert_eq!(mersenne_r(31), Some(5));
        assert_eq!(mersenne_r(3), None); // r = 2 is below the hypotheses
        assert_eq!(mersenne_r(8), None);
        assert_eq!(mersenne_r(5), None);
    }

    #[test]
    fn monomial_crossovers() {
        // smallest m where the exact inequality holds
        for (d, first_m) in [(7u64, 7u32), (15, 14), (31, 19)] {
            assert!(!monomial_theorem_applies(d, first_m - 1).unwrap(), "d={d}");
            assert!(monomial_theorem_applies(d, first_m).unwrap(), "d={d}");
            for m in first_m..=24 {
                assert!(monomial_theorem_applies(d, m).unwrap(), "d={d} m={m}");
            }
        }
        // hypotheses unmet regardless of m
        assert!(!monomial_theorem_applies(8, 20).unwrap());
        assert!(!monomial_theorem_applies(5, 20).unwrap());
    }

    #[test]
    fn polynomial_crossovers() {
        // the exact proof inequality first holds one degree later than the
        // published statement for both named cases
        assert!(!polynomial_theorem_applies(7, 22).unwrap());
        assert!(polynomial_theorem_applies(7, 23).unwrap());
        assert!(!polynomial_theorem_applies(15, 30).unwrap());
        assert!(polynomial_theorem_applies(15, 31).unwrap());
        assert!(!polynomial_theorem_applies(7, 10).unwrap());
    }

    #[test]
    fn statement_vs_inequality_in_report() {
        let r = bound_report(7, 22).unwrap();
        assert!(!r.polynomial_inequality_holds);
        assert!(r.polynomial_statement_applies);
        assert!(r.predicted_delta_gt_4_polynomial);
        let r = bound_report(15, 30).unwrap();
        assert!(r.polynomial_statement_applies && !r.polynomial_inequality_holds);
        let r = bound_report(7, 21).unwrap();
        assert!(!r.predicted_delta_gt_4_polynomial);
    }

    #[test]
    fn quartic_sufficiency_implies_exact() {
        for d in [7u64, 15, 31] {
            for m in 2..=32u32 {
                let q = 1u64 << m;
                if monomial_sufficient_quartic(d, q) {
                    assert!(monomial_proof_inequality(d, q), "d={d} m={m}");
                }
            }
        }
    }

    #[test]
    fn quarter_root_boundary_discrepancy() {
        // the closed form admits (7, 6) but the exact inequality rejects it
        assert!(monomial_sufficient_quarter_root(7, 64));
        assert!(!monomial_proof_inequality(7, 64));
    }

    #[test]
    fn isqrt_exactness() {
        for n in 0..10_000u128 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n, "n={n}");
        }
        let big = (1u128 << 80) + 12345;
        let r = isqrt(big);
        assert!(r * r <= big && (r + 1) * (r + 1) > big);
    }
}
