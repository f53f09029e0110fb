//! Arithmetic in the binary fields F_{2^m}, 2 <= m <= 24.
//!
//! Elements are machine integers holding coefficients in the polynomial
//! basis; the modulus is an irreducible degree-m polynomial over F_2 encoded
//! as a bit vector of length m+1. Multiplication is carry-less multiply with
//! shift-reduce; for m <= 16 a log/antilog pair over a group generator is
//! built at construction and used instead.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Field element: bit pattern of the polynomial-basis coefficients,
/// always `< 2^m` for the owning field.
pub type Elt = u32;

const M_MIN: u32 = 2;
const M_MAX: u32 = 24;
const TABLE_M_MAX: u32 = 16;

const BUILTIN_MODULI: &str = include_str!("../data/moduli.txt");

struct LogTables {
    log: Vec<u32>,        // index by element, log[0] unused
    alog: Vec<u32>,       // length 2(q-1) so sums of two logs need no reduction
}

struct FieldInner {
    m: u32,
    modulus: u64,
    tables: Option<LogTables>,
}

/// A validated F_{2^m}. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

/// Field identity as it appears in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldDesc {
    pub m: u32,
    pub modulus: String,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Field(m={}, modulus={:#X})", self.m(), self.modulus())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.m() == other.m() && self.modulus() == other.modulus()
    }
}
impl Eq for Field {}

fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32 - if p == 0 { 64 } else { 0 }
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// Nontrivial factor of `p` (degree m), if any, by trial division over all
/// polynomials of degree 1..=m/2.
fn find_factor(p: u64, m: u32) -> Option<u64> {
    for t in 2u64..(1u64 << (m / 2 + 1)) {
        if poly_degree(t) >= 1 && poly_rem(p, t) == 0 {
            return Some(t);
        }
    }
    None
}

/// Parse a "m: hex" table, ignoring blank lines and `#` comments.
pub fn parse_moduli_table(text: &str) -> Result<Vec<(u32, u64)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| Error::Parse {
            pos: lineno,
            msg: format!("moduli table line {}: {}", lineno + 1, msg),
        };
        let (ms, hs) = line.split_once(':').ok_or_else(|| err("expected 'm: hex'"))?;
        let m: u32 = ms.trim().parse().map_err(|_| err("bad degree"))?;
        let hs = hs.trim();
        let hs = hs.strip_prefix("0x").or_else(|| hs.strip_prefix("0X")).unwrap_or(hs);
        let modulus = u64::from_str_radix(hs, 16).map_err(|_| err("bad hex modulus"))?;
        out.push((m, modulus));
    }
    Ok(out)
}

/// The shipped default modulus for degree `m`: the irreducible polynomial
/// with the smallest integer encoding.
pub fn builtin_modulus(m: u32) -> Result<u64> {
    parse_moduli_table(BUILTIN_MODULI)
        .expect("built-in moduli table is well-formed")
        .into_iter()
        .find(|&(deg, _)| deg == m)
        .map(|(_, p)| p)
        .ok_or(Error::NoDefaultModulus { m })
}

fn clmul_reduce(mut a: u64, mut b: u64, m: u32, modulus: u64) -> u32 {
    let mut acc = 0u64;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    let mut bit = 2 * m as i32 - 2;
    while bit >= m as i32 {
        if acc >> bit & 1 != 0 {
            acc ^= modulus << (bit - m as i32);
        }
        bit -= 1;
    }
    acc as u32
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// Construct F_{2^m}. With `modulus: None` the built-in default for `m`
    /// is used. A supplied modulus is validated for shape and irreducibility;
    /// rejection names a nontrivial factor.
    pub fn new(m: u32, modulus: Option<u64>) -> Result<Field> {
        if !(M_MIN..=M_MAX).contains(&m) {
            return Err(Error::DegreeOutOfRange { m });
        }
        let modulus = match modulus {
            Some(p) => p,
            None => builtin_modulus(m)?,
        };
        if poly_degree(modulus) != m as i32 || modulus & 1 == 0 {
            return Err(Error::BadModulusShape { m, modulus });
        }
        if let Some(factor) = find_factor(modulus, m) {
            return Err(Error::ReducibleModulus { modulus, factor });
        }
        let tables = if m <= TABLE_M_MAX {
            Some(build_tables(m, modulus))
        } else {
            None
        };
        Ok(Field {
            inner: Arc::new(FieldInner { m, modulus, tables }),
        })
    }

    pub fn m(&self) -> u32 {
        self.inner.m
    }

    /// Field size q = 2^m.
    pub fn q(&self) -> u64 {
        1u64 << self.inner.m
    }

    pub fn modulus(&self) -> u64 {
        self.inner.modulus
    }

    pub fn descriptor(&self) -> FieldDesc {
        FieldDesc {
            m: self.m(),
            modulus: format!("{:#X}", self.modulus()),
        }
    }

    /// Characteristic-2 addition: coefficient-wise XOR.
    #[inline]
    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        if let Some(t) = &self.inner.tables {
            if a == 0 || b == 0 {
                return 0;
            }
            t.alog[(t.log[a as usize] + t.log[b as usize]) as usize]
        } else {
            clmul_reduce(a as u64, b as u64, self.inner.m, self.inner.modulus)
        }
    }

    /// `a^e` by square-and-multiply; `0^0 = 1`, and for nonzero `a` the
    /// exponent acts modulo q-1.
    pub fn pow(&self, a: Elt, e: u64) -> Elt {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let order = self.q() - 1;
        let mut e = e % order;
        if let Some(t) = &self.inner.tables {
            let l = (t.log[a as usize] as u64 * e) % order;
            return t.alog[l as usize];
        }
        let mut base = a;
        let mut acc: Elt = 1;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(q-2)`; rejects zero. Callers wanting
    /// the AES-style map extended by 0 -> 0 should use `pow(a, q-2)`.
    pub fn inv(&self, a: Elt) -> Result<Elt> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.q() - 2))
    }

    /// All field elements in bit-pattern order.
    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        0..self.q() as Elt
    }
}

fn build_tables(m: u32, modulus: u64) -> LogTables {
    let q = 1usize << m;
    let order = (q - 1) as u64;
    let factors = prime_factors(order);
    // smallest element generating the full multiplicative group
    let slow_pow = |a: u32, mut e: u64| -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e != 0 {
            if e & 1 != 0 {
                acc = clmul_reduce(acc as u64, base as u64, m, modulus);
            }
            base = clmul_reduce(base as u64, base as u64, m, modulus);
            e >>= 1;
        }
        acc
    };
    let mut gen = 2u32;
    loop {
        if factors.iter().all(|&p| slow_pow(gen, order / p) != 1) {
            break;
        }
        gen += 1;
    }
    let mut log = vec![0u32; q];
    let mut alog = vec![0u32; 2 * (q - 1)];
    let mut acc = 1u32;
    for i in 0..(q - 1) {
        alog[i] = acc;
        alog[i + q - 1] = acc;
        log[acc as usize] = i as u32;
        acc = clmul_reduce(acc as u64, gen as u64, m, modulus);
    }
    debug_assert_eq!(acc, 1);
    LogTables { log, alog }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn aes_field_accepted() {
        let f = Field::new(8, Some(0x11B)).unwrap();
        assert_eq!(f.q(), 256);
    }

    #[test]
    fn default_moduli_are_irreducible() {
        for m in 2..=24 {
            let p = builtin_modulus(m).unwrap();
            assert_eq!(poly_degree(p), m as i32);
            assert!(find_factor(p, m).is_none(), "m={m}");
            Field::new(m, None).unwrap();
        }
    }

    #[test]
    fn reducible_modulus_names_factor() {
        // x^4 + 1 = (x+1)^4
        match Field::new(4, Some(0x11)) {
            Err(Error::ReducibleModulus { factor, .. }) => {
                assert_eq!(poly_rem(0x11, factor), 0);
                assert!(factor > 1 && factor < 0x11);
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn degree_out_of_range() {
        assert!(matches!(Field::new(1, None), Err(Error::DegreeOutOfRange { .. })));
        assert!(matches!(Field::new(25, None), Err(Error::DegreeOutOfRange { .. })));
    }

    #[test]
    fn f8_products() {
        // F_8 mod x^3 + x + 1: x * x^2 = x^3 = x + 1
        let f = Field::new(3, Some(0xB)).unwrap();
        assert_eq!(f.mul(0b010, 0b100), 0b011);
        assert_eq!(f.add(0b010, 0b011), 1);
    }

    #[test]
    fn f16_squares() {
        // F_16 mod x^4 + x + 1: x^2 * x^2 = x^4 = x + 1
        let f = Field::new(4, Some(0x13)).unwrap();
        assert_eq!(f.mul(0b0100, 0b0100), 0b0011);
    }

    #[test]
    fn identities() {
        let f = Field::new(6, None).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, a), 0);
            assert_eq!(f.add(0, a), a);
            assert_eq!(f.mul(1, a), a);
        }
    }

    #[test]
    fn field_axioms_random_triples() {
        let mut rng = SplitMix64::new(1);
        for m in 2..=12 {
            let f = Field::new(m, None).unwrap();
            let q = f.q();
            for _ in 0..200 {
                let a = rng.below(q) as Elt;
                let b = rng.below(q) as Elt;
                let c = rng.below(q) as Elt;
                assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            }
        }
    }

    #[test]
    fn pow_laws() {
        for m in [3u32, 5, 8, 10] {
            let f = Field::new(m, None).unwrap();
            let q = f.q();
            for a in f.elements() {
                // Frobenius orbit closure: a^(2^m) = a
                assert_eq!(f.pow(a, q), a);
                if a != 0 {
                    assert_eq!(f.pow(a, q - 1), 1);
                }
            }
            assert_eq!(f.pow(0, 0), 1);
            assert_eq!(f.pow(0, 5), 0);
        }
    }

    #[test]
    fn inversion() {
        let f = Field::new(9, None).unwrap();
        assert_eq!(f.inv(1).unwrap(), 1);
        assert!(matches!(f.inv(0), Err(Error::ZeroInverse)));
        let mut rng = SplitMix64::new(9);
        for _ in 0..50 {
            let a = 1 + rng.below(f.q() - 1) as Elt;
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn table_and_clmul_paths_agree() {
        // Same modulus, with and without log tables (m=17 has none).
        let small = Field::new(12, None).unwrap();
        let raw_mod = small.modulus();
        let mut rng = SplitMix64::new(3);
        for _ in 0..500 {
            let a = rng.below(1 << 12) as Elt;
            let b = rng.below(1 << 12) as Elt;
            assert_eq!(small.mul(a, b), clmul_reduce(a as u64, b as u64, 12, raw_mod));
        }
    }
}
