//! Table-driven arithmetic in small finite fields F_q, q = p^m.
//!
//! Every supported field is small (q <= 81 by default), so all arithmetic is
//! precomputed into lookup tables at construction time: a full add table, a
//! mul table derived from exp/log tables for a fixed generator, and negation
//! and inversion tables. Elements are canonical indices in `[0, q)`; for
//! extension fields the index encodes the coefficients of the polynomial
//! representative in base p, constant coefficient least significant.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Default cap on the field cardinality. Everything this crate verifies at
/// desk scale uses q <= 9 directly and q <= 81 through extension-field
/// oracles, so tables stay tiny.
pub const DEFAULT_Q_BOUND: u32 = 81;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u32),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("q = {q} exceeds the table bound {bound}")]
    BoundExceeded { q: u64, bound: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible fields: {0}")]
    IncompatibleFields(String),
    #[error("invalid field description: {0}")]
    BadDescription(String),
}

/// An element of a [`Field`], stored as its canonical index.
///
/// Elements do not carry a reference to their field; all operations go
/// through the owning [`Field`], which is also what keeps them cheap enough
/// for exhaustive enumeration loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[repr(transparent)]
pub struct FieldElement(u8);

impl FieldElement {
    pub fn index(self) -> u32 {
        self.0 as u32
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite field F_q with q = p^m, fully tabulated.
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus coefficients over F_p, lowest degree first, length m+1.
    /// Empty for prime fields.
    modulus: Vec<u32>,
    add_t: Vec<u8>,
    mul_t: Vec<u8>,
    neg_t: Vec<u8>,
    inv_t: Vec<u8>,
    exp_t: Vec<u8>,
    log_t: Vec<u8>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(q = {}^{})", self.p, self.m)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{} = F_{}^{}", self.q, self.p, self.m)
        }
    }
}

impl Field {
    /// Build F_{p^m} with the default modulus (the lexicographically smallest
    /// monic irreducible of degree m, see [`Field::default_modulus`]) and the
    /// default cardinality bound.
    pub fn new(p: u32, m: u32) -> Result<Arc<Field>, GfError> {
        Self::with_bound(p, m, None, DEFAULT_Q_BOUND)
    }

    /// Build F_{p^m} with an explicit monic modulus (coefficients lowest
    /// degree first, length m+1).
    pub fn with_modulus(p: u32, m: u32, modulus: &[u32]) -> Result<Arc<Field>, GfError> {
        Self::with_bound(p, m, Some(modulus), DEFAULT_Q_BOUND)
    }

    /// Full-control constructor with a caller-chosen cardinality bound.
    pub fn with_bound(
        p: u32,
        m: u32,
        modulus: Option<&[u32]>,
        bound: u32,
    ) -> Result<Arc<Field>, GfError> {
        if !is_prime(p) {
            return Err(GfError::CompositeCharacteristic(p));
        }
        if m < 1 {
            return Err(GfError::BadDescription("extension degree must be >= 1".into()));
        }
        let q64 = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q64 > bound as u64 || q64 > 255 {
            return Err(GfError::BoundExceeded { q: q64, bound });
        }
        let q = q64 as u32;

        let modulus: Vec<u32> = if m == 1 {
            if modulus.is_some_and(|c| !c.is_empty()) {
                return Err(GfError::BadDescription(
                    "prime fields take no modulus".into(),
                ));
            }
            Vec::new()
        } else {
            match modulus {
                Some(c) => {
                    if c.len() != m as usize + 1 || c[m as usize] != 1 || c.iter().any(|&x| x >= p)
                    {
                        return Err(GfError::BadDescription(format!(
                            "modulus must be monic of degree {m} with coefficients below {p}"
                        )));
                    }
                    if !is_irreducible(c, p) {
                        return Err(GfError::ReducibleModulus(p));
                    }
                    c.to_vec()
                }
                None => Self::default_modulus(p, m),
            }
        };

        let mut field = Field {
            p,
            m,
            q,
            modulus,
            add_t: Vec::new(),
            mul_t: Vec::new(),
            neg_t: Vec::new(),
            inv_t: Vec::new(),
            exp_t: Vec::new(),
            log_t: Vec::new(),
        };
        field.build_tables();
        Ok(Arc::new(field))
    }

    /// The lexicographically smallest monic irreducible of degree m over F_p:
    /// smallest base-p integer encoding of the non-leading coefficients, with
    /// the constant coefficient least significant. Yields t^2+t+1 for F_4 and
    /// t^3+t+1 for F_8.
    fn default_modulus(p: u32, m: u32) -> Vec<u32> {
        let pm = (p as u64).pow(m) as u32;
        for code in 0..pm {
            let mut coeffs = decode_base_p(code, p, m as usize);
            coeffs.push(1);
            if is_irreducible(&coeffs, p) {
                return coeffs;
            }
        }
        unreachable!("an irreducible polynomial of degree {m} exists over F_{p}")
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let p = self.p;

        // Raw product via polynomial representatives; the public mul table is
        // rebuilt from exp/log below and checked against this.
        let raw_mul = |a: u32, b: u32| -> u32 {
            if self.m == 1 {
                (a * b) % p
            } else {
                let fa = decode_base_p(a, p, self.m as usize);
                let fb = decode_base_p(b, p, self.m as usize);
                let prod = poly_mul(&fa, &fb, p);
                let rem = poly_rem(&prod, &self.modulus, p);
                encode_base_p(&rem, p)
            }
        };

        self.add_t = vec![0; q * q];
        for a in 0..q as u32 {
            for b in 0..q as u32 {
                let s = if self.m == 1 {
                    (a + b) % p
                } else {
                    let fa = decode_base_p(a, p, self.m as usize);
                    let fb = decode_base_p(b, p, self.m as usize);
                    let sum: Vec<u32> = fa.iter().zip(&fb).map(|(x, y)| (x + y) % p).collect();
                    encode_base_p(&sum, p)
                };
                self.add_t[a as usize * q + b as usize] = s as u8;
            }
        }

        self.neg_t = vec![0; q];
        for a in 0..q as u32 {
            let neg = (0..q as u32)
                .find(|&b| self.add_t[a as usize * q + b as usize] == 0)
                .expect("additive inverse exists");
            self.neg_t[a as usize] = neg as u8;
        }

        // Smallest-index generator of the multiplicative group.
        let gen = (1..q as u32)
            .find(|&g| {
                let mut x = g;
                let mut ord = 1;
                while x != 1 {
                    x = raw_mul(x, g);
                    ord += 1;
                }
                ord == q - 1
            })
            .expect("the multiplicative group of a finite field is cyclic");

        self.exp_t = vec![0; q - 1];
        self.log_t = vec![0xff; q];
        let mut x = 1u32;
        for i in 0..q - 1 {
            self.exp_t[i] = x as u8;
            self.log_t[x as usize] = i as u8;
            x = raw_mul(x, gen);
        }
        debug_assert_eq!(x, 1, "generator order divides q-1");

        self.mul_t = vec![0; q * q];
        for a in 1..q as u32 {
            for b in 1..q as u32 {
                let e = (self.log_t[a as usize] as usize + self.log_t[b as usize] as usize)
                    % (q - 1);
                let prod = self.exp_t[e];
                debug_assert_eq!(prod as u32, raw_mul(a, b));
                self.mul_t[a as usize * q + b as usize] = prod;
            }
        }

        self.inv_t = vec![0; q];
        for a in 1..q {
            let e = (q - 1 - self.log_t[a] as usize) % (q - 1);
            self.inv_t[a] = self.exp_t[e];
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, lowest degree first; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The element with the given canonical index. Panics if out of range.
    pub fn elem(&self, idx: u32) -> FieldElement {
        assert!(idx < self.q, "element index {idx} out of range for {self}");
        FieldElement(idx as u8)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q as u8).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.index() < self.q && b.index() < self.q);
        FieldElement(self.add_t[a.0 as usize * self.q as usize + b.0 as usize])
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.index() < self.q && b.index() < self.q);
        FieldElement(self.mul_t[a.0 as usize * self.q as usize + b.0 as usize])
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        debug_assert!(a.index() < self.q);
        FieldElement(self.neg_t[a.0 as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(FieldElement(self.inv_t[a.0 as usize]))
    }

    /// generator^i, for the fixed generator underlying the tables.
    pub fn exp(&self, i: usize) -> FieldElement {
        FieldElement(self.exp_t[i % (self.q as usize - 1)])
    }

    /// Discrete log base the fixed generator; `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<usize> {
        if a.is_zero() {
            None
        } else {
            Some(self.log_t[a.0 as usize] as usize)
        }
    }

    pub fn generator(&self) -> FieldElement {
        self.exp(1)
    }
}

/// Ring homomorphism F_p -> F_{p^m} sending a residue to the constant
/// polynomial with that residue. The base must be a prime field of the same
/// characteristic as `ext`.
pub fn embed(base: &Field, ext: &Field, e: FieldElement) -> Result<FieldElement, GfError> {
    if !base.is_prime_field() {
        return Err(GfError::IncompatibleFields(format!(
            "embedding base {base} is not a prime field"
        )));
    }
    if base.p() != ext.p() {
        return Err(GfError::IncompatibleFields(format!(
            "characteristics differ: {} vs {}",
            base.p(),
            ext.p()
        )));
    }
    Ok(ext.elem(e.index()))
}

/// Parse a cardinality description: `"5"` or `"3^2"`.
pub fn parse_q(s: &str) -> Result<(u32, u32), GfError> {
    let bad = || GfError::BadDescription(format!("cannot parse field cardinality {s:?}"));
    match s.split_once('^') {
        None => {
            let p: u32 = s.trim().parse().map_err(|_| bad())?;
            Ok((p, 1))
        }
        Some((p, m)) => {
            let p: u32 = p.trim().parse().map_err(|_| bad())?;
            let m: u32 = m.trim().parse().map_err(|_| bad())?;
            Ok((p, m))
        }
    }
}

/// All prime powers p^m <= n with their (p, m), ascending by value.
pub fn prime_powers_up_to(n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for q in 2..=n {
        let mut x = q;
        let p = (2..=q).find(|&d| q % d == 0).unwrap();
        let mut m = 0;
        while x % p == 0 {
            x /= p;
            m += 1;
        }
        if x == 1 {
            out.push((p, m));
        }
    }
    out
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn decode_base_p(code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut c = code;
    (0..len)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn encode_base_p(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn poly_trim(f: &mut Vec<u32>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `b` over F_p.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    debug_assert_eq!(b[db], 1, "divisor must be monic");
    while r.len() > db {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - db;
        for i in 0..=db {
            let sub = (lead * b[i]) % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

/// Irreducibility over F_p by exhaustive trial division with monic divisors
/// of degree at most deg(f)/2.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32) as u32;
        for code in 0..count {
            let mut g = decode_base_p(code, p, d);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}
