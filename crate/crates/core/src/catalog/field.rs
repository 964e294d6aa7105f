//! Small finite fields GF(p^m) as lookup tables.
//!
//! An element is a polynomial over GF(p) of degree < m, encoded as the
//! integer `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. Extension fields use the
//! fixed moduli x^2+x+1 and x^3+x+1 over GF(2) and x^2+1 over GF(3).

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
pub struct GaloisField {
    p: usize,
    m: usize,
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    primitive: FieldElement,
}

/// Supported (p, m) pairs.
pub const SUPPORTED: &[(usize, usize)] = &[
    (2, 1),
    (2, 2),
    (2, 3),
    (3, 1),
    (3, 2),
    (5, 1),
    (7, 1),
    (11, 1),
    (13, 1),
    (23, 1),
];

/// Low-to-high coefficients of the monic modulus, leading 1 included.
fn modulus(p: usize, m: usize) -> Option<Vec<usize>> {
    match (p, m) {
        (_, 1) => Some(vec![0, 1]),
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (3, 2) => Some(vec![1, 0, 1]),
        _ => None,
    }
}

fn digits(mut x: usize, p: usize, m: usize) -> Vec<usize> {
    (0..m)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl GaloisField {
    pub fn new(p: usize, m: usize) -> Result<Self> {
        if !SUPPORTED.contains(&(p, m)) {
            return Err(Error::InvalidInput(format!("unsupported field GF({p}^{m})")));
        }
        let poly = modulus(p, m).expect("supported pair has a modulus");
        let q = p.pow(m as u32);
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            let da = digits(a, p, m);
            for b in 0..q {
                let db = digits(b, p, m);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&sum, p) as u16;

                let mut prod = vec![0usize; 2 * m];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for deg in (m..2 * m).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    // subtract c * x^(deg-m) * poly
                    for (k, &pc) in poly.iter().enumerate() {
                        let idx = deg - m + k;
                        prod[idx] = (prod[idx] + p * p - c * pc % p) % p;
                    }
                }
                mul[a * q + b] = undigits(&prod[..m], p) as u16;
            }
        }
        let mut neg = vec![0u16; q];
        let mut inv = vec![0u16; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u16;
            if a != 0 {
                inv[a] = (1..q)
                    .find(|&b| mul[a * q + b] == 1)
                    .ok_or_else(|| Error::InvalidInput(format!("GF({p}^{m}) modulus reducible")))?
                    as u16;
            }
        }
        let mut field = GaloisField {
            p,
            m,
            q,
            add,
            mul,
            neg,
            inv,
            primitive: FieldElement::ONE,
        };
        field.primitive = (1..q)
            .map(|x| FieldElement(x as u16))
            .find(|&x| field.multiplicative_order(x) == q - 1)
            .expect("finite field has a primitive element");
        Ok(field)
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        self.q
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q as u16).map(FieldElement)
    }

    /// Generator of the multiplicative group with the smallest encoding.
    pub fn primitive(&self) -> FieldElement {
        self.primitive
    }

    /// The encoding of the polynomial `x` (the field generator over GF(p)).
    pub fn x(&self) -> FieldElement {
        if self.m == 1 {
            FieldElement(0)
        } else {
            FieldElement(self.p as u16)
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add[a.index() * self.q + b.index()])
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul[a.index() * self.q + b.index()])
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.index()])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        (a.0 != 0).then(|| FieldElement(self.inv[a.index()]))
    }

    pub fn pow(&self, a: FieldElement, k: usize) -> FieldElement {
        (0..k).fold(FieldElement::ONE, |acc, _| self.mul(acc, a))
    }

    pub fn multiplicative_order(&self, a: FieldElement) -> usize {
        assert_ne!(a.0, 0, "zero has no multiplicative order");
        let mut x = a;
        let mut k = 1;
        while x != FieldElement::ONE {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}
