use std::cmp::Ordering;

/// A power product stored as a dense exponent vector over its ring.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Box<[u16]>,
    deg: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars].into_boxed_slice(), deg: 0 }
    }

    pub fn var(nvars: usize, i: usize, e: u16) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = e;
        m.deg = e as u32;
        m
    }

    pub fn from_exponents(exps: Vec<u16>) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps: exps.into_boxed_slice(), deg }
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    /// Iterates `(variable, exponent)` over the nonzero exponents.
    pub fn support(&self) -> impl Iterator<Item = (usize, u16)> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Box<[u16]> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        Monomial { exps, deg: self.deg + other.deg }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps: Box<[u16]> = other.exps.iter().zip(self.exps.iter()).map(|(a, b)| a - b).collect();
        Monomial { exps, deg: other.deg - self.deg }
    }

    pub fn checked_div(&self, divisor: &Monomial) -> Option<Monomial> {
        divisor.divides(self).then(|| divisor.quotient_of(self))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: Vec<u16> = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| *a.max(b)).collect();
        Monomial::from_exponents(exps)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps: Vec<u16> = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| *a.min(b)).collect();
        Monomial::from_exponents(exps)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn pow(&self, k: u16) -> Monomial {
        let exps: Vec<u16> = self.exps.iter().map(|e| e.checked_mul(k).expect("exponent overflow")).collect();
        Monomial::from_exponents(exps)
    }

    /// Bitmask with bit `i % 64` set when variable `i` occurs.
    pub fn divmask(&self) -> u64 {
        let mut m = 0u64;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                m |= 1 << (i % 64);
            }
        }
        m
    }

    /// Reindexes into a ring of `nvars` variables; `map[i]` is the new index of variable `i`.
    pub fn remap(&self, map: &[usize], nvars: usize) -> Monomial {
        let mut exps = vec![0u16; nvars];
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                exps[map[i]] += e;
            }
        }
        Monomial { exps: exps.into_boxed_slice(), deg: self.deg }
    }
}

/// Degree-reverse-lexicographic comparison (larger is greater).
pub(crate) fn cmp_degrevlex(a: &Monomial, b: &Monomial) -> Ordering {
    match a.deg.cmp(&b.deg) {
        Ordering::Equal => {
            for (x, y) in a.exps.iter().zip(b.exps.iter()).rev() {
                if x != y {
                    return y.cmp(x);
                }
            }
            Ordering::Equal
        }
        o => o,
    }
}

pub(crate) fn cmp_lex(a: &Monomial, b: &Monomial) -> Ordering {
    a.exps.cmp(&b.exps)
}
