//! Polynomial functions f: F_q -> F_q as sparse term maps, the normalizing
//! reductions that leave differential uniformity unchanged, and Lagrange
//! interpolation from value tables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::gf2m::{Elt, Field};
use crate::rng::SplitMix64;

/// A univariate polynomial function over its field, stored as
/// exponent -> nonzero coefficient. Exponents are kept `< q` by the
/// functional identity x^q = x: an exponent e >= q is reduced to
/// `((e-1) mod (q-1)) + 1`, and exponent 0 stays 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFunc {
    field: Field,
    terms: BTreeMap<u32, Elt>,
}

/// A `PolyFunc` in the normal form used throughout the analysis: no constant
/// term, no exponent that is a power of 2, at least one odd exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedPolyFunc(PolyFunc);

impl Deref for NormalizedPolyFunc {
    type Target = PolyFunc;
    fn deref(&self) -> &PolyFunc {
        &self.0
    }
}

impl NormalizedPolyFunc {
    pub fn as_poly(&self) -> &PolyFunc {
        &self.0
    }
    pub fn into_poly(self) -> PolyFunc {
        self.0
    }
}

fn reduce_exponent(e: u64, q: u64) -> u32 {
    if e == 0 {
        0
    } else {
        ((e - 1) % (q - 1) + 1) as u32
    }
}

/// Iterator over all submasks of `mask` in increasing order, including 0 and
/// `mask` itself.
pub(crate) fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some(cur.wrapping_sub(mask) & mask)
        };
        Some(cur)
    })
}

impl PolyFunc {
    /// Build from raw terms; exponents are reduced, colliding terms are added
    /// in the field, zero coefficients are dropped.
    pub fn from_terms<I: IntoIterator<Item = (u64, Elt)>>(field: Field, terms: I) -> PolyFunc {
        let q = field.q();
        let mut map: BTreeMap<u32, Elt> = BTreeMap::new();
        for (e, c) in terms {
            if c == 0 {
                continue;
            }
            let e = reduce_exponent(e, q);
            let entry = map.entry(e).or_insert(0);
            *entry ^= c;
            if *entry == 0 {
                map.remove(&e);
            }
        }
        PolyFunc { field, terms: map }
    }

    pub fn monomial(field: Field, d: u64) -> PolyFunc {
        PolyFunc::from_terms(field, [(d, 1)])
    }

    pub fn zero(field: Field) -> PolyFunc {
        PolyFunc { field, terms: BTreeMap::new() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, Elt)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    /// True iff this is `x^d` for some d (single term, coefficient 1).
    pub fn as_monomial(&self) -> Option<u32> {
        if self.terms.len() == 1 {
            let (&e, &c) = self.terms.iter().next().unwrap();
            if c == 1 {
                return Some(e);
            }
        }
        None
    }

    /// Sparse Horner evaluation, descending through the stored exponents.
    pub fn evaluate(&self, x: Elt) -> Elt {
        let f = &self.field;
        let mut acc: Elt = 0;
        let mut prev_e: u32 = 0;
        for (&e, &c) in self.terms.iter().rev() {
            if acc != 0 {
                acc = f.mul(acc, f.pow(x, (prev_e - e) as u64));
            }
            acc = f.add(acc, c);
            prev_e = e;
        }
        if acc != 0 && prev_e > 0 {
            acc = f.mul(acc, f.pow(x, prev_e as u64));
        }
        acc
    }

    /// Evaluation table over all of F_q, indexed by the bit pattern of x.
    pub fn eval_table(&self) -> Vec<Elt> {
        (0..self.field.q() as Elt).map(|x| self.evaluate(x)).collect()
    }

    /// Strip the constant term and every monomial whose exponent is a power
    /// of 2 (the q-affine part, invisible to differential uniformity).
    /// Rejects the result when nothing with an odd exponent remains.
    pub fn normalize(&self) -> Result<NormalizedPolyFunc> {
        let kept: BTreeMap<u32, Elt> = self
            .terms
            .iter()
            .filter(|(&e, _)| e != 0 && !e.is_power_of_two())
            .map(|(&e, &c)| (e, c))
            .collect();
        if kept.is_empty() {
            return Err(Error::Degenerate {
                reason: "all terms are q-affine; the normal-form analysis does not apply".into(),
            });
        }
        if !kept.keys().any(|e| e % 2 == 1) {
            return Err(Error::Degenerate {
                reason: "no term of odd degree remains after reduction".into(),
            });
        }
        Ok(NormalizedPolyFunc(PolyFunc {
            field: self.field.clone(),
            terms: kept,
        }))
    }

    /// Like `normalize`, but when every surviving exponent is even the
    /// function is first replaced by its square root (halved exponents,
    /// square-rooted coefficients), which leaves the differential
    /// uniformity unchanged. Lets maps like x^(q-2) on even-degree fields
    /// enter the normal form. Still rejects functions that reduce to a
    /// q-affine remainder.
    pub fn normalize_fully(&self) -> Result<NormalizedPolyFunc> {
        let field = self.field.clone();
        let sqrt_exp = field.q() / 2; // c^(q/2) is the square root of c
        let mut cur = self.clone();
        loop {
            let kept: Vec<(u64, Elt)> = cur
                .terms
                .iter()
                .filter(|(&e, _)| e != 0 && !e.is_power_of_two())
                .map(|(&e, &c)| (e as u64, c))
                .collect();
            if kept.is_empty() {
                return Err(Error::Degenerate {
                    reason: "all terms are q-affine; the normal-form analysis does not apply"
                        .into(),
                });
            }
            if kept.iter().any(|&(e, _)| e % 2 == 1) {
                return PolyFunc::from_terms(field, kept).normalize();
            }
            cur = PolyFunc::from_terms(
                field.clone(),
                kept.into_iter().map(|(e, c)| (e / 2, field.pow(c, sqrt_exp))),
            );
        }
    }

    /// The polynomial representing x -> c * f(a*x + b), a != 0, c != 0.
    /// Expansion of (ax+b)^e keeps exactly the submask binomials (Lucas),
    /// so the cost per term is 2^wt(e).
    pub fn affine_conjugate(&self, a: Elt, b: Elt, c: Elt) -> Result<PolyFunc> {
        if a == 0 || c == 0 {
            return Err(Error::BadArgument {
                what: "affine conjugation needs a != 0 and c != 0".into(),
            });
        }
        let f = &self.field;
        let mut out: Vec<(u64, Elt)> = Vec::new();
        for (&e, &coeff) in &self.terms {
            if b == 0 {
                out.push((e as u64, f.mul(coeff, f.pow(a, e as u64))));
                continue;
            }
            for k in submasks(e) {
                let part = f.mul(f.pow(a, k as u64), f.pow(b, (e - k) as u64));
                out.push((k as u64, f.mul(coeff, part)));
            }
        }
        let scaled = out.into_iter().map(|(e, v)| (e, f.mul(c, v)));
        Ok(PolyFunc::from_terms(self.field.clone(), scaled))
    }

    /// The polynomial representing x -> f(x)^2: term-wise coefficient
    /// squaring and exponent doubling (Frobenius).
    pub fn square_function(&self) -> PolyFunc {
        let f = &self.field;
        let terms: Vec<(u64, Elt)> = self
            .terms
            .iter()
            .map(|(&e, &c)| (2 * e as u64, f.mul(c, c)))
            .collect();
        PolyFunc::from_terms(self.field.clone(), terms)
    }
}

/// The unique polynomial of degree <= q-1 whose evaluations reproduce
/// `table` (entry i is the value at the element with bit pattern i).
///
/// Uses the kernel delta_a(x) = 1 - (x-a)^(q-1); over F_2 every binomial
/// coefficient of (x+a)^(q-1) is odd, which collapses the convolution to
/// power sums. Cost O(q^2) field operations.
pub fn interpolate(field: &Field, table: &[Elt]) -> Result<PolyFunc> {
    let q = field.q();
    if table.len() != q as usize {
        return Err(Error::TableLength {
            expected: q as usize,
            got: table.len(),
        });
    }
    let mut coeffs: Vec<Elt> = vec![0; q as usize];
    coeffs[0] = table[0];
    for k in 1..q - 1 {
        let mut c = 0;
        for a in 1..q {
            c ^= field.mul(table[a as usize], field.pow(a as Elt, q - 1 - k));
        }
        coeffs[k as usize] = c;
    }
    let mut top = 0;
    for &v in table {
        top ^= v;
    }
    coeffs[(q - 1) as usize] = top;
    Ok(PolyFunc::from_terms(
        field.clone(),
        coeffs.into_iter().enumerate().map(|(e, c)| (e as u64, c)),
    ))
}

impl fmt::Display for PolyFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0x0");
        }
        let mut first = true;
        for (&e, &c) in self.terms.iter().rev() {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (e, c) {
                (0, c) => write!(f, "{c:#x}")?,
                (1, 1) => write!(f, "x")?,
                (e, 1) => write!(f, "x^{e}")?,
                (1, c) => write!(f, "{c:#x}*x")?,
                (e, c) => write!(f, "{c:#x}*x^{e}")?,
            }
        }
        Ok(())
    }
}

/// Parse the function grammar: terms joined by `+`, each term one of
/// `x^E`, `x`, `0xC`, `0xC*x^E`, `0xC*x`; exponents decimal, coefficients
/// hex with 0x prefix. Whitespace is ignored. Errors carry the byte
/// position in the input.
pub fn parse_func(field: &Field, input: &str) -> Result<PolyFunc> {
    let bytes = input.as_bytes();
    let mut pos = 0usize;
    let mut terms: Vec<(u64, Elt)> = Vec::new();
    let err = |pos: usize, msg: &str| Error::Parse {
        pos,
        msg: msg.into(),
    };

    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };

    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            return Err(err(pos, "expected a term"));
        }
        let (coeff, has_coeff) = if bytes[pos] == b'0'
            && pos + 1 < bytes.len()
            && (bytes[pos + 1] == b'x' || bytes[pos + 1] == b'X')
        {
            let start = pos + 2;
            let mut end = start;
            while end < bytes.len() && bytes[end].is_ascii_hexdigit() {
                end += 1;
            }
            if end == start {
                return Err(err(pos, "hex coefficient has no digits"));
            }
            let v = u64::from_str_radix(&input[start..end], 16)
                .map_err(|_| err(pos, "hex coefficient out of range"))?;
            if v >= field.q() {
                return Err(err(pos, "coefficient is not an element of the field"));
            }
            pos = end;
            (v as Elt, true)
        } else {
            (1, false)
        };

        skip_ws(&mut pos);
        let mut exponent: u64 = 0;
        let mut has_var = false;
        if has_coeff && pos < bytes.len() && bytes[pos] == b'*' {
            pos += 1;
            skip_ws(&mut pos);
        }
        if pos < bytes.len() && (bytes[pos] == b'x' || bytes[pos] == b'X') {
            has_var = true;
            pos += 1;
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                skip_ws(&mut pos);
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == start {
                    return Err(err(start, "exponent has no digits"));
                }
                exponent = input[start..pos]
                    .parse()
                    .map_err(|_| err(start, "exponent out of range"))?;
            } else {
                exponent = 1;
            }
        }
        if !has_coeff && !has_var {
            return Err(err(pos, "expected coefficient or 'x'"));
        }
        terms.push((if has_var { exponent } else { 0 }, coeff));

        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] != b'+' {
            return Err(err(pos, "expected '+' between terms"));
        }
        pos += 1;
    }
    Ok(PolyFunc::from_terms(field.clone(), terms))
}

/// Parse a value-table file: one hex element per line (with or without 0x),
/// blank lines and `#` comments ignored.
pub fn parse_table(field: &Field, text: &str) -> Result<Vec<Elt>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let h = line.strip_prefix("0x").or_else(|| line.strip_prefix("0X")).unwrap_or(line);
        let v = u64::from_str_radix(h, 16).map_err(|_| Error::Parse {
            pos: lineno,
            msg: format!("table line {}: bad hex element", lineno + 1),
        })?;
        if v >= field.q() {
            return Err(Error::Parse {
                pos: lineno,
                msg: format!("table line {}: value not in the field", lineno + 1),
            });
        }
        out.push(v as Elt);
    }
    Ok(out)
}

/// A seeded random polynomial with terms among exponents `3..=max_deg`
/// (reduced into the field's range), each present with probability 1/2.
pub fn random_poly(field: &Field, max_deg: u32, rng: &mut SplitMix64) -> PolyFunc {
    let q = field.q();
    let hi = max_deg.min((q - 1) as u32);
    let mut terms = Vec::new();
    for e in 1..=hi {
        if rng.next_u64() & 1 == 1 {
            terms.push((e as u64, rng.below(q) as Elt));
        }
    }
    PolyFunc::from_terms(field.clone(), terms)
}

/// A seeded random polynomial with an odd leading degree drawn from
/// `5..=max_deg` (capped below q so no exponent reduction occurs) and
/// arbitrary lower-order terms. Always survives normalization with its
/// leading term intact.
pub fn random_odd_leading(field: &Field, max_deg: u32, rng: &mut SplitMix64) -> PolyFunc {
    let q = field.q();
    let hi = max_deg.min((q - 1) as u32);
    let odd_choices: Vec<u32> = (5..=hi).filter(|e| e % 2 == 1).collect();
    let d = odd_choices[rng.below(odd_choices.len() as u64) as usize];
    let mut terms = vec![(d as u64, 1 + rng.below(q - 1) as Elt)];
    for e in 1..d {
        if rng.next_u64() & 1 == 1 {
            terms.push((e as u64, rng.below(q) as Elt));
        }
    }
    PolyFunc::from_terms(field.clone(), terms)
}

/// A seeded random function in normal form with degree <= max_deg (at least
/// one odd, non-power-of-2 exponent is forced to survive).
pub fn random_normalized(field: &Field, max_deg: u32, rng: &mut SplitMix64) -> NormalizedPolyFunc {
    loop {
        if let Ok(nf) = random_poly(field, max_deg, rng).normalize() {
            return nf;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(m: u32) -> Field {
        Field::new(m, None).unwrap()
    }

    #[test]
    fn evaluate_matches_pow() {
        let field = f(4);
        let cube = PolyFunc::monomial(field.clone(), 3);
        for a in field.elements() {
            assert_eq!(cube.evaluate(a), field.pow(a, 3));
        }
    }

    #[test]
    fn evaluate_constant_and_cancellation() {
        let field = f(5);
        let g = parse_func(&field, "x^3 + x + 0x5").unwrap();
        assert_eq!(g.evaluate(0), 5);
        let h = parse_func(&field, "x^3+x").unwrap();
        assert_eq!(h.evaluate(1), 0);
    }

    #[test]
    fn exponent_reduction_preserves_values() {
        for m in 3..=6 {
            let field = f(m);
            let q = field.q();
            // x^(q+2) should act like x^3
            let g = PolyFunc::from_terms(field.clone(), [(q + 2, 1)]);
            assert_eq!(g.degree(), Some(3));
            for a in field.elements() {
                assert_eq!(g.evaluate(a), field.pow(a, 3));
            }
            // exponent q reduces to 1, exponent q-1 stays
            assert_eq!(PolyFunc::from_terms(field.clone(), [(q, 1)]).degree(), Some(1));
            assert_eq!(
                PolyFunc::from_terms(field.clone(), [(q - 1, 1)]).degree(),
                Some((q - 1) as u32)
            );
        }
    }

    #[test]
    fn normalize_strips_q_affine() {
        let field = f(4);
        let g = parse_func(&field, "x^4+x^3").unwrap();
        let n = g.normalize().unwrap();
        assert_eq!(n.as_poly(), &parse_func(&field, "x^3").unwrap());

        let g = parse_func(&field, "x^3+0x1").unwrap();
        assert_eq!(g.normalize().unwrap().as_poly(), &parse_func(&field, "x^3").unwrap());

        let g = parse_func(&field, "x^2+x+0x1").unwrap();
        assert!(matches!(g.normalize(), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn normalize_idempotent() {
        let field = f(5);
        let mut rng = SplitMix64::new(11);
        for _ in 0..50 {
            let n = random_normalized(&field, 9, &mut rng);
            let again = n.as_poly().normalize().unwrap();
            assert_eq!(&again, &n);
        }
    }

    #[test]
    fn conjugate_identity_and_monomial_scaling() {
        let field = f(4);
        let mut rng = SplitMix64::new(5);
        let g = random_poly(&field, 9, &mut rng);
        assert_eq!(g.affine_conjugate(1, 0, 1).unwrap(), g);
        assert!(g.affine_conjugate(0, 1, 1).is_err());
        assert!(g.affine_conjugate(1, 1, 0).is_err());

        let cube = PolyFunc::monomial(field.clone(), 3);
        for a in 1..field.q() as Elt {
            let conj = cube.affine_conjugate(a, 0, 1).unwrap();
            let expected =
                PolyFunc::from_terms(field.clone(), [(3u64, field.pow(a, 3))]);
            assert_eq!(conj, expected);
        }
    }

    #[test]
    fn conjugate_pointwise() {
        // c*f(a*x+b) as a function equals the conjugated polynomial
        let field = f(5);
        let mut rng = SplitMix64::new(17);
        for _ in 0..25 {
            let g = random_poly(&field, 12, &mut rng);
            let a = 1 + rng.below(field.q() - 1) as Elt;
            let b = rng.below(field.q()) as Elt;
            let c = 1 + rng.below(field.q() - 1) as Elt;
            let conj = g.affine_conjugate(a, b, c).unwrap();
            for x in field.elements() {
                let direct = field.mul(c, g.evaluate(field.add(field.mul(a, x), b)));
                assert_eq!(conj.evaluate(x), direct);
            }
        }
    }

    #[test]
    fn conjugate_composition() {
        let field = f(5);
        let mut rng = SplitMix64::new(23);
        for _ in 0..10 {
            let g = random_poly(&field, 9, &mut rng);
            let (a1, b1, c1) = (
                1 + rng.below(field.q() - 1) as Elt,
                rng.below(field.q()) as Elt,
                1 + rng.below(field.q() - 1) as Elt,
            );
            let (a2, b2, c2) = (
                1 + rng.below(field.q() - 1) as Elt,
                rng.below(field.q()) as Elt,
                1 + rng.below(field.q() - 1) as Elt,
            );
            let twice = g
                .affine_conjugate(a1, b1, c1)
                .unwrap()
                .affine_conjugate(a2, b2, c2)
                .unwrap();
            // c2*(c1*f(a1*(a2*x+b2)+b1)) = (c1 c2) f(a1 a2 x + a1 b2 + b1)
            let composed = g
                .affine_conjugate(
                    field.mul(a1, a2),
                    field.add(field.mul(a1, b2), b1),
                    field.mul(c1, c2),
                )
                .unwrap();
            for x in field.elements() {
                assert_eq!(twice.evaluate(x), composed.evaluate(x));
            }
        }
    }

    #[test]
    fn squaring() {
        let field = f(4);
        let cube = PolyFunc::monomial(field.clone(), 3);
        assert_eq!(cube.square_function().degree(), Some(6));
        let mut rng = SplitMix64::new(2);
        for _ in 0..20 {
            let g = random_poly(&field, 12, &mut rng);
            let sq = g.square_function();
            for x in field.elements() {
                let v = g.evaluate(x);
                assert_eq!(sq.evaluate(x), field.mul(v, v));
            }
        }
    }

    #[test]
    fn interpolation_round_trip() {
        for m in 3..=6 {
            let field = f(m);
            let mut rng = SplitMix64::new(m as u64);
            let table: Vec<Elt> = (0..field.q()).map(|_| rng.below(field.q()) as Elt).collect();
            let g = interpolate(&field, &table).unwrap();
            for (x, &v) in table.iter().enumerate() {
                assert_eq!(g.evaluate(x as Elt), v, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn interpolation_recovers_monomial() {
        let field = f(4);
        let g = PolyFunc::monomial(field.clone(), 7);
        let back = interpolate(&field, &g.eval_table()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn interpolation_zero_and_length_check() {
        let field = f(3);
        let z = interpolate(&field, &[0; 8]).unwrap();
        assert!(z.is_zero());
        assert!(matches!(
            interpolate(&field, &[0; 7]),
            Err(Error::TableLength { expected: 8, got: 7 })
        ));
    }

    #[test]
    fn grammar_round_trip() {
        let field = f(8);
        for s in ["x^254", "0x3*x^7+0x1*x^5", "0x1b*x^9+x^3+0x7", "x"] {
            let g = parse_func(&field, s).unwrap();
            let back = parse_func(&field, &g.to_string()).unwrap();
            assert_eq!(g, back, "{s}");
        }
        // whitespace-insensitive
        assert_eq!(
            parse_func(&field, " 0x3 * x^7 + x ").unwrap(),
            parse_func(&field, "0x3*x^7+x").unwrap()
        );
    }

    #[test]
    fn grammar_errors_carry_position() {
        let field = f(4);
        match parse_func(&field, "x^3+^") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_func(&field, "0x1F*x^2").is_err()); // 0x1F not in F_16
        assert!(parse_func(&field, "").is_err());
    }

    #[test]
    fn submask_enumeration() {
        let got: Vec<u32> = submasks(0b1010).collect();
        assert_eq!(got, vec![0b0000, 0b0010, 0b1000, 0b1010]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }
}
