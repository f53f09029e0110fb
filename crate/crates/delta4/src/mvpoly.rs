//! Sparse trivariate polynomials over F_{2^m}: the symmetric numerator
//! f(x)+f(y)+f(z)+f(x+y+z), its exact quotient by (x+y)(x+z)(y+z), and a
//! coefficient-in-F_2 variant for monomials that is reusable across fields.
//!
//! The quotient has total degree deg(f)-3 whenever deg(f) is not a power
//! of 2; the three divisions are performed as successive exact synthetic
//! divisions by the linear binomials, asserting a zero remainder at each
//! stage.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::funcspace::{submasks, NormalizedPolyFunc, PolyFunc};
use crate::gf2m::{Elt, Field};

/// Exponent triples are packed into a u64 as three 21-bit fields (i, j, k).
const SHIFT_I: u32 = 42;
const SHIFT_J: u32 = 21;
const MASK: u64 = (1 << 21) - 1;

#[inline]
fn pack(i: u32, j: u32, k: u32) -> u64 {
    debug_assert!(i as u64 <= MASK && j as u64 <= MASK && k as u64 <= MASK);
    (i as u64) << SHIFT_I | (j as u64) << SHIFT_J | k as u64
}

#[inline]
fn unpack(key: u64) -> (u32, u32, u32) {
    (
        (key >> SHIFT_I) as u32,
        ((key >> SHIFT_J) & MASK) as u32,
        (key & MASK) as u32,
    )
}

/// Sparse trivariate polynomial over a binary field, keyed by packed
/// exponent triples; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriPoly {
    field: Field,
    terms: BTreeMap<u64, Elt>,
}

impl TriPoly {
    pub fn zero(field: Field) -> TriPoly {
        TriPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32, u32), Elt)> + '_ {
        self.terms.iter().map(|(&key, &c)| (unpack(key), c))
    }

    /// Max of i+j+k over stored terms; `None` when zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|&key| {
                let (i, j, k) = unpack(key);
                i + j + k
            })
            .max()
    }

    fn add_term(&mut self, i: u32, j: u32, k: u32, c: Elt) {
        if c == 0 {
            return;
        }
        let key = pack(i, j, k);
        let entry = self.terms.entry(key).or_insert(0);
        *entry ^= c;
        if *entry == 0 {
            self.terms.remove(&key);
        }
    }

    /// Multiply by (x_a + x_b) where a, b index the variables 0=x, 1=y, 2=z.
    pub fn mul_linear(&self, var_a: usize, var_b: usize) -> TriPoly {
        let mut out = TriPoly::zero(self.field.clone());
        for (&key, &c) in &self.terms {
            let (i, j, k) = unpack(key);
            let mut t = [i, j, k];
            t[var_a] += 1;
            out.add_term(t[0], t[1], t[2], c);
            let mut t = [i, j, k];
            t[var_b] += 1;
            out.add_term(t[0], t[1], t[2], c);
        }
        out
    }

    /// Exact division by (x_a + x_b). Panics if the remainder is nonzero:
    /// callers only divide polynomials that are divisible by construction,
    /// so a nonzero remainder is an internal consistency failure.
    fn div_linear_exact(&self, var_a: usize, var_b: usize) -> TriPoly {
        let mut rem: BTreeMap<u64, Elt> = self.terms.clone();
        let mut quot = TriPoly::zero(self.field.clone());
        let exp_of = |key: u64, var: usize| -> u32 {
            let (i, j, k) = unpack(key);
            [i, j, k][var]
        };
        loop {
            if rem.is_empty() {
                return quot;
            }
            let dmax = rem.keys().map(|&key| exp_of(key, var_a)).max().unwrap();
            assert!(
                dmax > 0,
                "nonzero remainder in exact division by a linear binomial"
            );
            let leading: Vec<(u64, Elt)> = rem
                .iter()
                .filter(|(&key, _)| exp_of(key, var_a) == dmax)
                .map(|(&key, &c)| (key, c))
                .collect();
            for (key, c) in leading {
                let (i, j, k) = unpack(key);
                let mut q = [i, j, k];
                q[var_a] -= 1;
                quot.add_term(q[0], q[1], q[2], c);
                // rem -= (x_a + x_b) * c * q  = original term + shifted term
                let mut xor_into = |t: [u32; 3]| {
                    let kk = pack(t[0], t[1], t[2]);
                    let entry = rem.entry(kk).or_insert(0);
                    *entry ^= c;
                    if *entry == 0 {
                        rem.remove(&kk);
                    }
                };
                xor_into([i, j, k]);
                let mut shifted = q;
                shifted[var_b] += 1;
                xor_into(shifted);
            }
        }
    }

    /// Evaluate at (x, y, z) with memoized powers per variable.
    pub fn eval(&self, x: Elt, y: Elt, z: Elt) -> Elt {
        let f = &self.field;
        let mut pow_cache: [BTreeMap<u32, Elt>; 3] = [BTreeMap::new(), BTreeMap::new(), BTreeMap::new()];
        let vals = [x, y, z];
        let mut acc: Elt = 0;
        for (&key, &c) in &self.terms {
            let (i, j, k) = unpack(key);
            let mut term = c;
            for (v, &e) in [i, j, k].iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = *pow_cache[v]
                    .entry(e)
                    .or_insert_with(|| f.pow(vals[v], e as u64));
                term = f.mul(term, p);
            }
            acc ^= term;
        }
        acc
    }

    /// Terms in graded-lex order (total degree first, then (i, j, k)),
    /// descending, one "coeff*x^i*y^j*z^k" line each. Intended for diffing
    /// against computer-algebra output.
    pub fn graded_lex_lines(&self) -> Vec<String> {
        let mut keys: Vec<(u32, u32, u32, u32, Elt)> = self
            .terms
            .iter()
            .map(|(&key, &c)| {
                let (i, j, k) = unpack(key);
                (i + j + k, i, j, k, c)
            })
            .collect();
        keys.sort_unstable_by(|a, b| b.cmp(a));
        keys.into_iter()
            .map(|(_, i, j, k, c)| format!("{c:#x}*x^{i}*y^{j}*z^{k}"))
            .collect()
    }
}

impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", self.graded_lex_lines().join("+"))
    }
}

/// The expanded numerator f(x)+f(y)+f(z)+f(x+y+z).
///
/// (x+y+z)^e expands, in characteristic 2, to exactly the monomials
/// x^i y^j z^k whose exponents have pairwise disjoint binary digits
/// assembling e (Lucas); everything else has an even multinomial
/// coefficient.
pub fn numerator(f: &PolyFunc) -> TriPoly {
    let mut out = TriPoly::zero(f.field().clone());
    for (e, c) in f.terms() {
        out.add_term(e, 0, 0, c);
        out.add_term(0, e, 0, c);
        out.add_term(0, 0, e, c);
        for i in submasks(e) {
            let rest = e ^ i;
            for j in submasks(rest) {
                out.add_term(i, j, rest ^ j, c);
            }
        }
    }
    out
}

/// The exact quotient P_f = numerator(f) / ((x+y)(x+z)(y+z)), of total
/// degree deg(f)-3. Requires deg(f) >= 3 and deg(f) not a power of 2
/// (otherwise the numerator collapses).
pub fn pf_polynomial(f: &NormalizedPolyFunc) -> Result<TriPoly> {
    let d = f.degree().expect("normalized functions are nonzero");
    if d < 3 || d.is_power_of_two() {
        return Err(Error::BadArgument {
            what: format!("P_f needs degree >= 3 and not a power of 2, got {d}"),
        });
    }
    let num = numerator(f.as_poly());
    let q1 = num.div_linear_exact(0, 1); // by x+y
    let q2 = q1.div_linear_exact(0, 2); // by x+z
    let q3 = q2.div_linear_exact(1, 2); // by y+z
    debug_assert_eq!(q3.total_degree(), Some(d - 3));
    Ok(q3)
}

/// P_{x^d} with coefficients in the prime field: a set of exponent triples,
/// homogeneous of total degree d-3, valid over every F_{2^m}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousPf {
    pub d: u32,
    terms: Vec<(u32, u32, u32)>,
}

impl HomogeneousPf {
    pub fn terms(&self) -> &[(u32, u32, u32)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.d - 3
    }

    /// Evaluate over `field` at (x, y, z); with all-ones coefficients this
    /// is an XOR of monomials.
    pub fn eval(&self, field: &Field, x: Elt, y: Elt, z: Elt) -> Elt {
        let mut acc = 0;
        for &(i, j, k) in &self.terms {
            let t = field.mul(
                field.mul(field.pow(x, i as u64), field.pow(y, j as u64)),
                field.pow(z, k as u64),
            );
            acc ^= t;
        }
        acc
    }

    /// Coefficient-wise agreement with a `TriPoly` (all coefficients 1).
    pub fn agrees_with(&self, p: &TriPoly) -> bool {
        if p.num_terms() != self.terms.len() {
            return false;
        }
        p.terms().all(|(t, c)| c == 1 && self.terms.contains(&t))
    }
}

fn f2_xor(set: &mut std::collections::BTreeSet<u64>, key: u64) {
    if !set.insert(key) {
        set.remove(&key);
    }
}

fn f2_div_linear(set: &std::collections::BTreeSet<u64>, var_a: usize, var_b: usize) -> std::collections::BTreeSet<u64> {
    let exp_of = |key: u64, var: usize| -> u32 {
        let (i, j, k) = unpack(key);
        [i, j, k][var]
    };
    let mut rem = set.clone();
    let mut quot = std::collections::BTreeSet::new();
    while !rem.is_empty() {
        let dmax = rem.iter().map(|&key| exp_of(key, var_a)).max().unwrap();
        assert!(dmax > 0, "nonzero remainder dividing an F_2 quotient");
        let leading: Vec<u64> = rem.iter().copied().filter(|&key| exp_of(key, var_a) == dmax).collect();
        for key in leading {
            let (i, j, k) = unpack(key);
            let mut q = [i, j, k];
            q[var_a] -= 1;
            f2_xor(&mut quot, pack(q[0], q[1], q[2]));
            f2_xor(&mut rem, key);
            let mut shifted = q;
            shifted[var_b] += 1;
            f2_xor(&mut rem, pack(shifted[0], shifted[1], shifted[2]));
        }
    }
    quot
}

/// Build P_{x^d} over the prime field, for d >= 3 and not a power of 2.
pub fn homogeneous_pf(d: u32) -> Result<HomogeneousPf> {
    if d < 3 || d.is_power_of_two() {
        return Err(Error::BadArgument {
            what: format!("homogeneous P_f needs d >= 3 and not a power of 2, got {d}"),
        });
    }
    let mut num = std::collections::BTreeSet::new();
    f2_xor(&mut num, pack(d, 0, 0));
    f2_xor(&mut num, pack(0, d, 0));
    f2_xor(&mut num, pack(0, 0, d));
    for i in submasks(d) {
        let rest = d ^ i;
        for j in submasks(rest) {
            f2_xor(&mut num, pack(i, j, rest ^ j));
        }
    }
    let q = f2_div_linear(&f2_div_linear(&f2_div_linear(&num, 0, 1), 0, 2), 1, 2);
    let terms: Vec<(u32, u32, u32)> = q.into_iter().map(unpack).collect();
    debug_assert!(terms.iter().all(|&(i, j, k)| i + j + k == d - 3));
    Ok(HomogeneousPf { d, terms })
}
