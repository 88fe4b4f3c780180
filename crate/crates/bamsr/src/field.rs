//! Finite-field arithmetic for prime fields GF(p) and binary extension
//! fields GF(2^w), both limited to order q <= 2^16.
//!
//! Binary-extension multiplication goes through log/antilog tables built once
//! at construction time; prime fields use plain modular arithmetic. A
//! [`Field`] is immutable after construction and safe to share across
//! threads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One field element. Always a value in `[0, q)` for the [`Field`] in use.
pub type Symbol = u16;

/// Default reduction polynomials for GF(2^w), indexed by w. All of them are
/// primitive, so `x` (the value 2) generates the multiplicative group.
const BINARY_POLYS: [u32; 17] = [
    0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    Prime,
    BinaryExtension,
}

/// Serializable description of a field: enough to rebuild it exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub kind: FieldKind,
    /// Characteristic p.
    pub p: u32,
    /// Extension degree w (1 for prime fields).
    pub w: u32,
    /// Reduction-polynomial bitmask (binary extension only, 0 otherwise).
    pub poly: u32,
}

impl FieldSpec {
    /// GF(p) for a prime p.
    pub fn prime(p: u32) -> Self {
        FieldSpec {
            kind: FieldKind::Prime,
            p,
            w: 1,
            poly: 0,
        }
    }

    /// GF(2^w) with the default reduction polynomial for that degree.
    pub fn binary(w: u32) -> Result<Self> {
        if !(1..=16).contains(&w) {
            return Err(Error::Field(format!(
                "extension degree {w} out of range 1..=16"
            )));
        }
        Ok(Self::binary_with_poly(w, BINARY_POLYS[w as usize]))
    }

    /// GF(2^w) with an explicit reduction polynomial (degree-w bitmask).
    pub fn binary_with_poly(w: u32, poly: u32) -> Self {
        FieldSpec {
            kind: FieldKind::BinaryExtension,
            p: 2,
            w,
            poly,
        }
    }

    /// The default field: GF(2^8) with reduction polynomial 0x11D.
    pub fn gf256() -> Self {
        Self::binary_with_poly(8, 0x11D)
    }

    /// Field order q = p^w.
    pub fn order(&self) -> u32 {
        match self.kind {
            FieldKind::Prime => self.p,
            FieldKind::BinaryExtension => 1u32 << self.w,
        }
    }

    /// Bytes needed to store one symbol in the binary file formats.
    pub fn symbol_width(&self) -> usize {
        if self.order() <= 256 {
            1
        } else {
            2
        }
    }

    /// Parse a field name: `gf256`, `gf(7)`, `gf(2^8)`, `gf(256)`.
    ///
    /// Orders that are powers of two map to the binary-extension field with
    /// the default reduction polynomial; prime orders map to GF(p).
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "gf256" {
            return Ok(Self::gf256());
        }
        let inner = t
            .strip_prefix("gf(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Field(format!("cannot parse field '{s}'")))?;
        if let Some(w) = inner.strip_prefix("2^") {
            let w: u32 = w
                .parse()
                .map_err(|_| Error::Field(format!("bad extension degree in '{s}'")))?;
            return Self::binary(w);
        }
        let q: u32 = inner
            .parse()
            .map_err(|_| Error::Field(format!("bad field order in '{s}'")))?;
        if q >= 2 && q.is_power_of_two() {
            return Self::binary(q.trailing_zeros());
        }
        if is_prime(q) {
            return Ok(Self::prime(q));
        }
        Err(Error::Field(format!(
            "field order {q} is neither prime nor a power of two"
        )))
    }
}

enum Arith {
    Prime,
    /// log[v] for v in 1..q, and exp doubled to 2(q-1) entries so that
    /// `exp[log a + log b]` needs no reduction.
    Tables {
        log: Vec<u16>,
        exp: Vec<u16>,
    },
}

/// A concrete field with its precomputed tables.
pub struct Field {
    spec: FieldSpec,
    q: u32,
    generator: Symbol,
    arith: Arith,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field")
            .field("spec", &self.spec)
            .field("q", &self.q)
            .field("generator", &self.generator)
            .finish()
    }
}

impl Field {
    pub fn new(spec: &FieldSpec) -> Result<Self> {
        match spec.kind {
            FieldKind::Prime => Self::new_prime(spec),
            FieldKind::BinaryExtension => Self::new_binary(spec),
        }
    }

    fn new_prime(spec: &FieldSpec) -> Result<Self> {
        let p = spec.p;
        if spec.w != 1 {
            return Err(Error::Field(
                "prime field must have extension degree 1".into(),
            ));
        }
        if !(2..=0x10000).contains(&p) || !is_prime(p) {
            return Err(Error::Field(format!(
                "{p} is not a prime in range 2..=65536"
            )));
        }
        let generator = smallest_primitive_root(p);
        Ok(Field {
            spec: *spec,
            q: p,
            generator,
            arith: Arith::Prime,
        })
    }

    fn new_binary(spec: &FieldSpec) -> Result<Self> {
        let w = spec.w;
        let poly = spec.poly;
        if spec.p != 2 {
            return Err(Error::Field(
                "binary-extension field must have characteristic 2".into(),
            ));
        }
        if !(1..=16).contains(&w) {
            return Err(Error::Field(format!(
                "extension degree {w} out of range 1..=16"
            )));
        }
        if poly >> w != 1 {
            return Err(Error::Field(format!(
                "reduction polynomial {poly:#x} does not have degree {w}"
            )));
        }
        if poly & 1 == 0 {
            return Err(Error::Field(format!(
                "reduction polynomial {poly:#x} has no constant term, hence is reducible"
            )));
        }
        let q = 1u32 << w;
        // Walk the powers of x, reducing by the polynomial. If the walk
        // revisits an element before covering all q-1 nonzero ones, the
        // polynomial is not primitive and the tables would be unusable.
        let mut log = vec![u16::MAX; q as usize];
        let mut exp = vec![0u16; 2 * (q as usize - 1).max(1)];
        let mut cur: u32 = 1;
        for i in 0..(q - 1) {
            if log[cur as usize] != u16::MAX {
                return Err(Error::Field(format!(
                    "reduction polynomial {poly:#x} is not primitive over GF(2^{w})"
                )));
            }
            log[cur as usize] = i as u16;
            exp[i as usize] = cur as u16;
            exp[(i + q - 1) as usize] = cur as u16;
            cur <<= 1;
            if cur & q != 0 {
                cur ^= poly;
            }
        }
        if cur != 1 {
            return Err(Error::Field(format!(
                "reduction polynomial {poly:#x} is not primitive over GF(2^{w})"
            )));
        }
        // x generates the multiplicative group (that is what the cycle walk
        // proved). In GF(2) the group is trivial and x reduces to 1.
        let generator = if q == 2 { 1 } else { 2 };
        Ok(Field {
            spec: *spec,
            q,
            generator,
            arith: Arith::Tables { log, exp },
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Field order q.
    pub fn order(&self) -> u32 {
        self.q
    }

    /// A fixed generator of the multiplicative group.
    pub fn generator(&self) -> Symbol {
        self.generator
    }

    pub fn contains(&self, a: Symbol) -> bool {
        (a as u32) < self.q
    }

    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        match &self.arith {
            Arith::Prime => ((a as u32 + b as u32) % self.q) as Symbol,
            Arith::Tables { .. } => a ^ b,
        }
    }

    pub fn sub(&self, a: Symbol, b: Symbol) -> Symbol {
        match &self.arith {
            Arith::Prime => ((a as u32 + self.q - b as u32) % self.q) as Symbol,
            Arith::Tables { .. } => a ^ b,
        }
    }

    pub fn neg(&self, a: Symbol) -> Symbol {
        self.sub(0, a)
    }

    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        match &self.arith {
            Arith::Prime => ((a as u32 * b as u32) % self.q) as Symbol,
            Arith::Tables { log, exp } => {
                if a == 0 || b == 0 {
                    0
                } else {
                    exp[log[a as usize] as usize + log[b as usize] as usize]
                }
            }
        }
    }

    pub fn inv(&self, a: Symbol) -> Result<Symbol> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        match &self.arith {
            Arith::Prime => Ok(self.pow(a, (self.q - 2) as u64)),
            Arith::Tables { log, exp } => Ok(exp[(self.q - 1) as usize - log[a as usize] as usize]),
        }
    }

    pub fn div(&self, a: Symbol, b: Symbol) -> Result<Symbol> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e by repeated multiplication. `pow(0, 0)` is defined as 1.
    pub fn pow(&self, a: Symbol, e: u64) -> Symbol {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match &self.arith {
            Arith::Prime => {
                let mut base = a as u64;
                let mut acc: u64 = 1;
                let mut e = e;
                let p = self.q as u64;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    e >>= 1;
                }
                acc as Symbol
            }
            Arith::Tables { log, exp } => {
                let ord = (self.q - 1) as u64;
                let idx = (log[a as usize] as u64 * (e % ord)) % ord;
                exp[idx as usize]
            }
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
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

fn smallest_primitive_root(p: u32) -> Symbol {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    'g: for g in 2..p {
        for &f in &factors {
            if mod_pow(g, ((p - 1) / f) as u64, p) == 1 {
                continue 'g;
            }
        }
        return g as Symbol;
    }
    unreachable!("every prime field has a primitive root")
}

fn mod_pow(base: u32, mut e: u64, m: u32) -> u32 {
    let mut base = base as u64;
    let mut acc = 1u64;
    let m = m as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf7() -> Field {
        Field::new(&FieldSpec::prime(7)).unwrap()
    }

    fn gf256() -> Field {
        Field::new(&FieldSpec::gf256()).unwrap()
    }

    #[test]
    fn gf7_basics() {
        let f = gf7();
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3).unwrap(), 5);
        assert_eq!(f.pow(3, 3), 6);
        assert_eq!(f.add(6, 6), 5);
        assert_eq!(f.sub(2, 5), 4);
    }

    #[test]
    fn gf256_inverse_axiom_all_nonzero() {
        let f = gf256();
        for x in 1u16..256 {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), 1, "x = {x}");
        }
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let f = gf7();
        assert!(matches!(f.inv(0), Err(Error::DivisionByZero)));
        assert!(matches!(f.div(3, 0), Err(Error::DivisionByZero)));
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        for spec in [FieldSpec::prime(13), FieldSpec::gf256()] {
            let f = Field::new(&spec).unwrap();
            for a in 0..f.order() as u16 {
                let mut acc = 1u16;
                for e in 0..9u64 {
                    assert_eq!(f.pow(a, e), acc, "a={a} e={e}");
                    acc = f.mul(acc, a);
                }
            }
        }
    }

    #[test]
    fn generator_has_full_order() {
        for spec in [
            FieldSpec::prime(7),
            FieldSpec::prime(13),
            FieldSpec::gf256(),
        ] {
            let f = Field::new(&spec).unwrap();
            let g = f.generator();
            let mut seen = vec![false; f.order() as usize];
            let mut cur = 1u16;
            for _ in 0..f.order() - 1 {
                assert!(!seen[cur as usize]);
                seen[cur as usize] = true;
                cur = f.mul(cur, g);
            }
            assert_eq!(cur, 1);
        }
    }

    #[test]
    fn non_primitive_poly_rejected() {
        // x^8 + x^4 + x^3 + x + 1 (0x11B, the AES polynomial) is irreducible
        // but not primitive: x has order 51.
        let err = Field::new(&FieldSpec::binary_with_poly(8, 0x11B)).unwrap_err();
        assert!(matches!(err, Error::Field(_)));
        // Degree mismatch and missing constant term are also rejected.
        assert!(Field::new(&FieldSpec::binary_with_poly(8, 0x1D)).is_err());
        assert!(Field::new(&FieldSpec::binary_with_poly(8, 0x11C)).is_err());
    }

    #[test]
    fn widest_supported_field_works() {
        let f = Field::new(&FieldSpec::binary(16).unwrap()).unwrap();
        assert_eq!(f.order(), 65536);
        for x in [1u16, 2, 0x1234, 0xFFFF] {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
        }
        assert_eq!(f.pow(2, 16), f.mul(f.pow(2, 15), 2));
    }

    #[test]
    fn parse_field_names() {
        assert_eq!(FieldSpec::parse("gf256").unwrap(), FieldSpec::gf256());
        assert_eq!(FieldSpec::parse("GF(2^8)").unwrap(), FieldSpec::gf256());
        assert_eq!(FieldSpec::parse("gf(256)").unwrap(), FieldSpec::gf256());
        assert_eq!(FieldSpec::parse("gf(7)").unwrap(), FieldSpec::prime(7));
        assert_eq!(FieldSpec::parse("gf(2^16)").unwrap().order(), 65536);
        assert!(FieldSpec::parse("gf(9)").is_err());
        assert!(FieldSpec::parse("ff(7)").is_err());
    }

    // Field axioms, randomized-exhaustive over small fields.
    proptest! {
        #[test]
        fn axioms_hold(which in 0usize..3, a in 0u16..256, b in 0u16..256, c in 0u16..256) {
            let spec = [FieldSpec::prime(7), FieldSpec::prime(13), FieldSpec::gf256()][which];
            let f = Field::new(&spec).unwrap();
            let q = f.order() as u16;
            let (a, b, c) = (a % q, b % q, c % q);
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, 0), a);
            prop_assert_eq!(f.mul(a, 1), a);
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }
}
