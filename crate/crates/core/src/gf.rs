//! Finite fields GF(p^m) with exact arithmetic.
//!
//! An element is identified with its index in `[0, q)`: the coefficients of its
//! polynomial representative read as base-`p` digits, lowest degree least
//! significant. This index is also the serialized form.
//!
//! Three arithmetic back ends are used, picked at construction:
//! prime fields use modular integer arithmetic, binary extensions up to
//! GF(2^16) use log/antilog tables, and every other extension falls back to
//! polynomial multiplication with reduction by the modulus.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

/// A field symbol, stored as its canonical index.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serialized form of a field: `{p, m, modulus}` with the modulus given as
/// `m + 1` coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

#[derive(Debug)]
enum Backend {
    Prime,
    Tables { log: Vec<u32>, exp: Vec<u32> },
    Poly,
}

#[derive(Debug)]
struct Inner {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: Option<Elem>,
    backend: Backend,
}

/// Handle to a finite field. Cloning is cheap; the field itself is immutable.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GF({}^{}, modulus {:?})",
            self.0.p, self.0.m, self.0.modulus
        )
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_order(p: u32, m: u32) -> Result<u32> {
    let mut q: u64 = 1;
    for _ in 0..m {
        q *= p as u64;
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge { p, m });
        }
    }
    Ok(q as u32)
}

/// Remainder of `a` modulo the monic polynomial `b`, coefficients over GF(p).
fn poly_rem_mod_p(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let db = b.len() - 1;
    let p64 = p as u64;
    while r.len() > db {
        let lead = r.pop().unwrap() % p64;
        if lead != 0 {
            let off = r.len() - db;
            for (j, &bj) in b[..db].iter().enumerate() {
                r[off + j] = (r[off + j] + p64 - (lead * bj as u64) % p64) % p64;
            }
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree `1..=m/2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut v = idx;
            for _ in 0..d {
                divisor.push((v % p as u64) as u32);
                v /= p as u64;
            }
            divisor.push(1);
            if poly_rem_mod_p(modulus, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn default_modulus(p: u32, m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(m);
    for idx in 0..count {
        let mut poly = Vec::with_capacity(m as usize + 1);
        let mut v = idx;
        for _ in 0..m {
            poly.push((v % p as u64) as u32);
            v /= p as u64;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    /// GF(p^m) with the smallest irreducible monic modulus (by index order).
    pub fn new(p: u32, m: u32) -> Result<Field> {
        Self::validate(p, m)?;
        Self::build(p, m, default_modulus(p, m))
    }

    /// GF(p^m) with a caller-supplied monic modulus, lowest degree first.
    pub fn with_modulus(p: u32, m: u32, modulus: Vec<u32>) -> Result<Field> {
        Self::validate(p, m)?;
        if modulus.len() != m as usize + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                m + 1,
                modulus.len()
            )));
        }
        if modulus[m as usize] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus(format!(
                "coefficients must be below {p}"
            )));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus);
        }
        Self::build(p, m, modulus)
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Field> {
        Self::with_modulus(d.p, d.m, d.modulus.clone())
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.0.p,
            m: self.0.m,
            modulus: self.0.modulus.clone(),
        }
    }

    fn validate(p: u32, m: u32) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        checked_order(p, m).map(|_| ())
    }

    fn build(p: u32, m: u32, modulus: Vec<u32>) -> Result<Field> {
        let q = checked_order(p, m)?;
        let backend = if m == 1 {
            Backend::Prime
        } else {
            Backend::Poly
        };
        let mut field = Field(Arc::new(Inner {
            p,
            m,
            q,
            modulus,
            primitive: None,
            backend,
        }));
        let primitive = if q >= 3 {
            Some(field.find_primitive())
        } else {
            None
        };
        let backend = if p == 2 && (2..=16).contains(&m) {
            let g = primitive.expect("q >= 4");
            let mut exp = vec![0u32; 2 * (q as usize - 1)];
            let mut log = vec![0u32; q as usize];
            let mut x = Elem::ONE;
            for i in 0..(q as usize - 1) {
                exp[i] = x.0;
                exp[i + q as usize - 1] = x.0;
                log[x.0 as usize] = i as u32;
                x = field.mul(x, g);
            }
            Backend::Tables { log, exp }
        } else if m == 1 {
            Backend::Prime
        } else {
            Backend::Poly
        };
        let inner = Arc::get_mut(&mut field.0).expect("unshared during construction");
        inner.primitive = primitive;
        inner.backend = backend;
        Ok(field)
    }

    fn find_primitive(&self) -> Elem {
        let q = self.0.q as u64;
        let factors = prime_factors(q - 1);
        (1..self.0.q)
            .map(Elem)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&l| self.pow(g, (q - 1) / l) != Elem::ONE)
            })
            .expect("the multiplicative group of a finite field is cyclic")
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    /// Number of elements q = p^m.
    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    pub fn elem(&self, value: u32) -> Result<Elem> {
        if value < self.0.q {
            Ok(Elem(value))
        } else {
            Err(Error::ElementOutOfRange { value, q: self.0.q })
        }
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        Ok(FieldElement {
            field: self.clone(),
            value: self.elem(value)?,
        })
    }

    /// All q elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_element(&self) -> Result<Elem> {
        self.0.primitive.ok_or(Error::NoPrimitiveElement(self.0.q))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(0..self.0.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(1..self.0.q))
    }

    fn digits(&self, a: Elem) -> Vec<u32> {
        let p = self.0.p;
        let mut v = a.0;
        (0..self.0.m)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    fn undigits(&self, d: &[u32]) -> Elem {
        let p = self.0.p;
        Elem(d.iter().rev().fold(0u32, |acc, &c| acc * p + c))
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if self.0.m == 1 {
            return Elem((a.0 + b.0) % p);
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
        self.undigits(&sum)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.m == 1 {
            return Elem((p - a.0) % p);
        }
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (p - x) % p).collect();
        self.undigits(&d)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        match &self.0.backend {
            Backend::Prime => Elem(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32),
            Backend::Tables { log, exp } => {
                Elem(exp[(log[a.0 as usize] + log[b.0 as usize]) as usize])
            }
            Backend::Poly => self.poly_mul(a, b),
        }
    }

    fn poly_mul(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p as u64;
        let m = self.0.m as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let modulus = &self.0.modulus;
        for i in (m..2 * m - 1).rev() {
            let lead = prod[i];
            if lead != 0 {
                for (j, &c) in modulus[..m].iter().enumerate() {
                    prod[i - m + j] = (prod[i - m + j] + p - (lead * c as u64) % p) % p;
                }
                prod[i] = 0;
            }
        }
        let low: Vec<u32> = prod[..m].iter().map(|&c| c as u32).collect();
        self.undigits(&low)
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0.backend {
            Backend::Tables { log, exp } => {
                let l = log[a.0 as usize];
                exp[((self.0.q - 1 - l) % (self.0.q - 1)) as usize].into()
            }
            _ => self.pow(a, self.0.q as u64 - 2),
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Elem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut order = self.0.q as u64 - 1;
        for l in prime_factors(order) {
            while order.is_multiple_of(l) && self.pow(a, order / l) == Elem::ONE {
                order /= l;
            }
        }
        Ok(order)
    }
}

impl From<u32> for Elem {
    fn from(v: u32) -> Self {
        Elem(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element bound to its field; arithmetic between elements of different
/// fields is rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn arith(&self, op: ArithOp, rhs: &FieldElement) -> Result<FieldElement> {
        if self.field != rhs.field {
            return Err(Error::MixedFields);
        }
        let f = &self.field;
        let (a, b) = (self.value, rhs.value);
        let value = match op {
            ArithOp::Add => f.add(a, b),
            ArithOp::Sub => f.sub(a, b),
            ArithOp::Mul => f.mul(a, b),
            ArithOp::Div => f.div(a, b)?,
        };
        Ok(FieldElement {
            field: f.clone(),
            value,
        })
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement {
            field: self.field.clone(),
            value: self.field.inv(self.value)?,
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_non_prime_and_oversized() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(Field::new(2, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(
            Field::new(2, 21),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(Field::new(2, 20).is_ok());
    }

    #[test]
    fn default_gf256_modulus_is_0x11b() {
        let f = Field::new(2, 8).unwrap();
        assert_eq!(f.order(), 256);
        assert_eq!(f.modulus(), &[1, 1, 0, 1, 1, 0, 0, 0, 1]);
        // x^7 * x = x^4 + x^3 + x + 1
        assert_eq!(f.mul(Elem(0x80), Elem(0x02)), Elem(0x1b));
    }

    #[test]
    fn supplied_modulus_checked() {
        // x^2 + 1 = (x + 1)^2 over GF(2)
        assert_eq!(
            Field::with_modulus(2, 2, vec![1, 0, 1]).unwrap_err(),
            Error::ReducibleModulus
        );
        // (x^2+x+1)^2 = x^4+x^2+1 has no roots but is reducible
        assert_eq!(
            Field::with_modulus(2, 4, vec![1, 0, 1, 0, 1]).unwrap_err(),
            Error::ReducibleModulus
        );
        let f = Field::with_modulus(2, 8, vec![1, 0, 1, 1, 1, 0, 0, 0, 1]).unwrap();
        assert_eq!(f.primitive_element().unwrap(), Elem(2));
    }

    #[test]
    fn gf13_examples() {
        let f = Field::new(13, 1).unwrap();
        assert_eq!(f.mul(Elem(3), Elem(9)), Elem(1));
        assert_eq!(f.primitive_element().unwrap(), Elem(2));
        let powers: std::collections::BTreeSet<u32> =
            (0..12).map(|e| f.pow(Elem(2), e).0).collect();
        assert_eq!(powers.len(), 12);
        // subgroup of order 3
        let h: Vec<u32> = (0..3).map(|e| f.pow(Elem(3), e).0).collect();
        assert_eq!(h, vec![1, 3, 9]);
    }

    #[test]
    fn gf2_has_no_primitive() {
        let f = Field::new(2, 1).unwrap();
        assert!(f.primitive_element().is_err());
    }

    #[test]
    fn gf256_primitive_order() {
        let f = Field::new(2, 8).unwrap();
        let g = f.primitive_element().unwrap();
        assert_eq!(f.pow(g, 255), Elem::ONE);
        assert_ne!(f.pow(g, 85), Elem::ONE);
        assert_ne!(f.pow(g, 51), Elem::ONE);
        assert_ne!(f.pow(g, 15), Elem::ONE);
        // x itself has order 51 under the AES modulus
        assert_eq!(f.multiplicative_order(Elem(2)).unwrap(), 51);
        assert_eq!(g, Elem(3));
    }

    #[test]
    fn checked_arith() {
        let f = Field::new(13, 1).unwrap();
        let g = Field::new(11, 1).unwrap();
        let a = f.element(5).unwrap();
        let zero = f.element(0).unwrap();
        assert_eq!(a.arith(ArithOp::Add, &zero).unwrap(), a);
        assert_eq!(
            a.arith(ArithOp::Div, &zero).unwrap_err(),
            Error::DivisionByZero
        );
        assert_eq!(
            a.arith(ArithOp::Mul, &g.element(5).unwrap()).unwrap_err(),
            Error::MixedFields
        );
        assert!(f.element(13).is_err());
    }

    #[test]
    fn enumeration_is_complete() {
        for (p, m) in [(2, 1), (3, 2), (2, 4), (5, 2), (13, 1), (3, 3)] {
            let f = Field::new(p, m).unwrap();
            let all: std::collections::HashSet<Elem> = f.elements().collect();
            assert_eq!(all.len() as u32, f.order());
        }
    }

    fn fields() -> Vec<Field> {
        vec![
            Field::new(2, 4).unwrap(),
            Field::new(3, 2).unwrap(),
            Field::new(13, 1).unwrap(),
            Field::new(2, 8).unwrap(),
            Field::new(5, 3).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn field_axioms(fi in 0usize..5, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
            let f = &fields()[fi];
            let q = f.order();
            let (a, b, c) = (Elem(a % q), Elem(b % q), Elem(c % q));
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            if !a.is_zero() {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                prop_assert_eq!(f.pow(a, q as u64 - 1), Elem::ONE);
            }
        }
    }
}
