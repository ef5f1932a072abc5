use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::monomial::{cmp_degrevlex, Monomial};
use crate::order::{Comparator, MonomialOrder};
use crate::ring::{same_ring, Ring};
use crate::scalar::Scalar;

/// A sparse polynomial with exact rational coefficients.
///
/// Terms are kept sorted in descending degrevlex order with no zero
/// coefficients, which makes equality structural.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, Scalar)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_ring(&self.ring, &other.ring)
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Self {
        Self::monomial(ring, Monomial::one(ring.len()), c)
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Scalar::one())
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.len(), i, 1), Scalar::one())
    }

    /// The variable with the given name; panics if the ring lacks it.
    pub fn named(ring: &Arc<Ring>, name: &str) -> Self {
        let i = ring.var(name).unwrap_or_else(|| panic!("no variable {name}"));
        Self::var(ring, i)
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.nvars(), ring.len());
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.len());
            if c.is_zero() {
                continue;
            }
            acc.entry(m).and_modify(|a| *a += &c).or_insert(c);
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<Ring>, acc: HashMap<Monomial, Scalar>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| cmp_degrevlex(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    /// Re-sorts terms given in any order without duplicates.
    pub(crate) fn from_distinct(ring: &Arc<Ring>, mut terms: Vec<(Monomial, Scalar)>) -> Self {
        terms.sort_unstable_by(|a, b| cmp_degrevlex(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn parse(ring: &Arc<Ring>, text: &str) -> Result<Self> {
        crate::parse::parse_polynomial(ring, text)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(Scalar::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// True for a single term (a scalar multiple of a power product).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.degree() == w[1].0.degree())
    }

    /// Leading term under `order`.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<&(Monomial, Scalar)> {
        if *order == MonomialOrder::DegRevLex {
            return self.terms.first();
        }
        let cmp = Comparator::new(order, self.ring.len());
        self.terms.iter().max_by(|a, b| cmp.cmp(&a.0, &b.0))
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, Scalar)> {
        let mut t = self.terms.clone();
        if *order != MonomialOrder::DegRevLex {
            let cmp = Comparator::new(order, self.ring.len());
            t.sort_by(|a, b| cmp.cmp(&b.0, &a.0));
        }
        t
    }

    /// Indices of variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        let mut seen = vec![false; self.ring.len()];
        for (m, _) in &self.terms {
            for (i, _) in m.support() {
                seen[i] = true;
            }
        }
        (0..seen.len()).filter(|&i| seen[i]).collect()
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Greatest common divisor of all term monomials.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(self.ring.len()),
            Some((m0, _)) => it.fold(m0.clone(), |g, (m, _)| g.gcd(m)),
        }
    }

    /// Divides every term by `m`; panics if some term is not divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| (t.checked_div(m).expect("monomial does not divide"), c.clone()))
            .collect();
        Polynomial::from_distinct(&self.ring, terms)
    }

    /// Integer-coefficient primitive part, leading (degrevlex) coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let coeffs: Vec<Scalar> = self.terms.iter().map(|(_, c)| c.clone()).collect();
        let (num, den) = Scalar::integer_content(&coeffs);
        let mut factor = Scalar::from_big(num_rational::BigRational::new(den, num));
        if self.terms[0].1.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Scaled so the leading coefficient under `order` is one.
    pub fn monic(&self, order: &MonomialOrder) -> Self {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.ring.len());
        let mut total = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.support() {
                t *= &point[i].pow(e as u32);
            }
            total += &t;
        }
        total
    }

    /// Substitutes `values[i]` (a polynomial in `target`) for variable `i`.
    pub fn substitute(&self, values: &[Polynomial], target: &Arc<Ring>) -> Polynomial {
        assert_eq!(values.len(), self.ring.len());
        let mut cache: HashMap<(usize, u16), Polynomial> = HashMap::new();
        let mut total = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, e) in m.support() {
                let p = cache.entry((i, e)).or_insert_with(|| values[i].pow(e as u32)).clone();
                t = &t * &p;
            }
            total = &total + &t;
        }
        total
    }

    /// Substitutes scalars for a subset of variables, staying in the same ring.
    pub fn specialize(&self, values: &[(usize, Scalar)]) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut c = c.clone();
            let mut exps = m.exponents().to_vec();
            for (i, v) in values {
                let e = exps[*i];
                if e > 0 {
                    c *= &v.pow(e as u32);
                    exps[*i] = 0;
                }
            }
            (Monomial::from_exponents(exps), c)
        });
        Polynomial::from_terms(&self.ring, terms.collect::<Vec<_>>())
    }

    /// Moves the polynomial into another ring by variable name.
    pub fn embed(&self, target: &Arc<Ring>) -> Result<Polynomial> {
        if same_ring(&self.ring, target) {
            return Ok(Polynomial { ring: target.clone(), terms: self.terms.clone() });
        }
        let used = self.variables();
        let mut map = vec![usize::MAX; self.ring.len()];
        for i in used {
            let name = self.ring.name(i);
            map[i] = target
                .var(name)
                .ok_or_else(|| AlgebraError::RingMismatch(format!("variable {name} missing from target ring")))?;
        }
        let terms = self.terms.iter().map(|(m, c)| (m.remap(&map, target.len()), c.clone())).collect();
        Ok(Polynomial::from_distinct(target, terms))
    }

    /// Integer coefficients as big integers, if all coefficients are integral.
    pub fn integer_coefficients(&self) -> Option<Vec<BigInt>> {
        self.terms.iter().map(|(_, c)| c.is_integer().then(|| c.numer())).collect()
    }

    /// Formats with terms sorted by `order`.
    pub fn to_string_in(&self, order: &MonomialOrder) -> String {
        format_terms(&self.ring, &self.sorted_terms(order))
    }

    fn add_impl(&self, other: &Polynomial, negate: bool) -> Polynomial {
        assert!(same_ring(&self.ring, &other.ring), "polynomials from different rings");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match cmp_degrevlex(&a[i].0, &b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    fn mul_impl(&self, other: &Polynomial) -> Polynomial {
        assert!(same_ring(&self.ring, &other.ring), "polynomials from different rings");
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        if other.terms.len() == 1 {
            return self.mul_monomial(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = c1 * c2;
                acc.entry(m1.mul(m2)).and_modify(|a| *a += &c).or_insert(c);
            }
        }
        Polynomial::from_map(&self.ring, acc)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.add_impl(rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.add_impl(rhs, true)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.mul_impl(rhs)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        self.add_impl(&rhs, false)
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        self.add_impl(&rhs, true)
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        self.mul_impl(&rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Scalar::one())
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

pub(crate) fn format_terms(ring: &Ring, terms: &[(Monomial, Scalar)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors = Vec::new();
        if !abs.is_one() || m.is_one() {
            factors.push(abs.to_string());
        }
        for (i, e) in m.support() {
            if e == 1 {
                factors.push(ring.name(i).to_string());
            } else {
                factors.push(format!("{}^{}", ring.name(i), e));
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(&self.ring, &self.terms))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Least common multiple of denominators across polynomials' coefficients.
pub fn common_denominator<'a>(polys: impl IntoIterator<Item = &'a Polynomial>) -> BigInt {
    let mut den = BigInt::one();
    for p in polys {
        for (_, c) in p.terms() {
            den = den.lcm(&c.denom());
        }
    }
    if den.is_zero() {
        BigInt::one()
    } else {
        den
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<Ring> {
        Ring::new(["x", "y", "z"]).unwrap()
    }

    #[test]
    fn arithmetic_and_printing() {
        let r = ring();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p.to_string(), "x^2 - y^2");
        let q = &p - &p;
        assert!(q.is_zero());
        assert_eq!(q.to_string(), "0");
        let h = Polynomial::parse(&r, "1/2*x*z - 3").unwrap();
        assert_eq!(h.to_string(), "1/2*x*z - 3");
        assert_eq!(h.primitive().to_string(), "x*z - 6");
    }

    #[test]
    fn substitution_and_eval() {
        let r = ring();
        let p = Polynomial::parse(&r, "x^2*y - z").unwrap();
        let v = p.eval(&[Scalar::from_int(2), Scalar::from_int(3), Scalar::from_int(5)]);
        assert_eq!(v, Scalar::from_int(7));
        let s = p.specialize(&[(1, Scalar::from_int(2))]);
        assert_eq!(s.to_string(), "2*x^2 - z");
        let vals = vec![
            Polynomial::parse(&r, "y + 1").unwrap(),
            Polynomial::one(&r),
            Polynomial::zero(&r),
        ];
        assert_eq!(p.substitute(&vals, &r).to_string(), "y^2 + 2*y + 1");
    }

    #[test]
    fn embed_by_name() {
        let r = ring();
        let big = r.extended(["t"]).unwrap();
        let p = Polynomial::parse(&r, "x*y + z").unwrap();
        let q = p.embed(&big).unwrap();
        assert_eq!(q.to_string(), "x*y + z");
        let small = Ring::new(["z"]).unwrap();
        assert!(p.embed(&small).is_err());
    }
}
