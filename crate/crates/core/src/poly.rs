//! Exact sparse multivariate polynomials.
//!
//! `Poly<V, C>` is generic over the variable type and the coefficient ring,
//! so it serves both as the target algebra of characters (rational
//! coefficients) and as the formal power series in the couplings (whose
//! coefficients are themselves target-algebra elements).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rational_json(r: &Rational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

/// Coefficient ring.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;
}

impl Coeff for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

/// A product of variables with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PowerProduct<V: Ord>(BTreeMap<V, u32>);

impl<V: Ord + Clone> PowerProduct<V> {
    pub fn one() -> Self {
        PowerProduct(BTreeMap::new())
    }

    pub fn var(v: V) -> Self {
        Self::power(v, 1)
    }

    pub fn power(v: V, k: u32) -> Self {
        let mut m = BTreeMap::new();
        if k > 0 {
            m.insert(v, k);
        }
        PowerProduct(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn exponent(&self, v: &V) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (&V, &u32)> {
        self.0.iter()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (v, k) in &other.0 {
            *m.entry(v.clone()).or_insert(0) += k;
        }
        PowerProduct(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<V: Ord, C> {
    terms: BTreeMap<PowerProduct<V>, C>,
}

impl<V: Ord + Clone, C: Coeff> Poly<V, C> {
    pub fn constant(c: C) -> Self {
        Self::term(PowerProduct::one(), c)
    }

    pub fn var(v: V) -> Self {
        Self::term(PowerProduct::var(v), C::one())
    }

    pub fn term(m: PowerProduct<V>, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_rational(r: &Rational) -> Self {
        Self::constant(C::from_rational(r))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PowerProduct<V>, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &PowerProduct<V>) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&PowerProduct::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn add_term(&mut self, m: PowerProduct<V>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                let sum = x.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *x = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&C::from_rational(r))
    }

    /// Drop terms of total degree above `max`.
    pub fn truncate(&self, max: u32) -> Self {
        Poly {
            terms: self.terms.iter().filter(|(m, _)| m.degree() <= max).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Product with terms above `max` discarded as they are formed.
    pub fn mul_truncated(&self, other: &Self, max: u32) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a.degree() + b.degree() <= max {
                    out.add_term(a.times(b), x.clone() * y.clone());
                }
            }
        }
        out
    }

    pub fn pow_truncated(&self, k: u32, max: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul_truncated(self, max);
        }
        out
    }

    /// Replace each variable by a polynomial, keeping total degree ≤ `max`.
    /// Variables mapped to `None` stay as they are.
    pub fn substitute(&self, map: &dyn Fn(&V) -> Option<Self>, max: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut prod = Self::constant(c.clone());
            for (v, &k) in m.factors() {
                let base = map(v).unwrap_or_else(|| Self::var(v.clone()));
                prod = prod.mul_truncated(&base.pow_truncated(k, max), max);
            }
            out = out + prod;
        }
        out.truncate(max)
    }

    /// Map coefficients into another ring.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<V, D> {
        let mut out = Poly::<V, D>::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Partial derivative in `v`.
    pub fn derivative(&self, v: &V) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let k = m.exponent(v);
            if k == 0 {
                continue;
            }
            let mut f = m.0.clone();
            if k == 1 {
                f.remove(v);
            } else {
                f.insert(v.clone(), k - 1);
            }
            out.add_term(PowerProduct(f), c.clone() * C::from_rational(&int(k as i64)));
        }
        out
    }
}

impl<V: Ord + Clone, C: Coeff> Zero for Poly<V, C> {
    fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<V: Ord + Clone, C: Coeff> One for Poly<V, C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<V: Ord + Clone, C: Coeff> Add for Poly<V, C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<V: Ord + Clone, C: Coeff> AddAssign for Poly<V, C> {
    fn add_assign(&mut self, rhs: Self) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl<V: Ord + Clone, C: Coeff> Neg for Poly<V, C> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<V: Ord + Clone, C: Coeff> Sub for Poly<V, C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<V: Ord + Clone, C: Coeff> Mul for Poly<V, C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.times(b), x.clone() * y.clone());
            }
        }
        out
    }
}

impl<V: Ord + Clone + fmt::Debug, C: Coeff> Coeff for Poly<V, C> {
    fn from_rational(r: &Rational) -> Self {
        Self::constant(C::from_rational(r))
    }
}

/// Variables of the character target algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    /// The scale-power indeterminate of the toy amplitude.
    Q,
    /// A free symbol, e.g. one per graph class.
    Named(String),
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Q => write!(f, "q"),
            Sym::Named(s) => write!(f, "{s}"),
        }
    }
}

/// Values of characters: polynomials over ℚ in `q` and named symbols.
pub type Target = Poly<Sym, Rational>;

pub fn q_power(k: u32) -> Target {
    Target::term(PowerProduct::power(Sym::Q, k), Rational::one())
}

pub fn symbol(name: impl Into<String>) -> Target {
    Target::var(Sym::Named(name.into()))
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl<V: Ord + Clone + fmt::Display> fmt::Display for Poly<V, Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let vars: Vec<String> = m
                .factors()
                .map(|(v, &k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Target {
    /// Coefficient list `[c_0, c_1, ...]` if this is a polynomial in `q`
    /// alone.
    pub fn q_coefficients(&self) -> Option<Vec<Rational>> {
        let mut out: Vec<Rational> = Vec::new();
        for (m, c) in self.terms() {
            let mut k = 0;
            for (v, &e) in m.factors() {
                match v {
                    Sym::Q => k = e as usize,
                    Sym::Named(_) => return None,
                }
            }
            if out.len() <= k {
                out.resize(k + 1, Rational::zero());
            }
            out[k] = c.clone();
        }
        Some(out)
    }

    pub fn to_json(&self) -> Value {
        if let Some(cs) = self.q_coefficients() {
            return json!({ "q": cs.iter().map(rational_json).collect::<Vec<_>>() });
        }
        let terms: Vec<Value> = self
            .terms()
            .map(|(m, c)| {
                let vars: serde_json::Map<String, Value> =
                    m.factors().map(|(v, &k)| (v.to_string(), json!(k))).collect();
                json!({ "monomial": vars, "coeff": rational_json(c) })
            })
            .collect();
        json!({ "terms": terms })
    }

    /// Substitute `q ↦ 1`.
    pub fn at_q_one(&self) -> Target {
        self.substitute(&|v| matches!(v, Sym::Q).then(Target::one), u32::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = Poly<u8, Rational>;

    fn x() -> P {
        P::var(0)
    }

    fn y() -> P {
        P::var(1)
    }

    #[test]
    fn arithmetic() {
        let a = x() + y();
        let b = x() - y();
        assert_eq!(a.clone() * b, x() * x() - y() * y());
        assert!((a.clone() - a).is_zero());
    }

    #[test]
    fn truncation_and_substitution() {
        let p = (x() + P::one()).pow_truncated(3, 2);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.coeff(&PowerProduct::power(0, 2)), int(3));
        // x ↦ x + y in x^2, truncated at 2
        let s = (x() * x()).substitute(&|v| (*v == 0).then(|| x() + y()), 2);
        assert_eq!(s, x() * x() + (x() * y()).scale_rational(&int(2)) + y() * y());
    }

    #[test]
    fn derivative_of_power() {
        let p = x() * x() * y();
        assert_eq!(p.derivative(&0), (x() * y()).scale_rational(&int(2)));
        assert!(p.derivative(&2).is_zero());
    }

    #[test]
    fn q_coefficient_lists() {
        let t = q_power(2).scale_rational(&rat(3, 2)) + Target::one();
        assert_eq!(t.q_coefficients().unwrap(), vec![int(1), int(0), rat(3, 2)]);
        assert_eq!(t.at_q_one(), Target::from_rational(&rat(5, 2)));
        assert!(symbol("a").q_coefficients().is_none());
        assert_eq!(t.to_string(), "1 + 3/2*q^2");
    }

    fn small_poly() -> impl Strategy<Value = P> {
        proptest::collection::vec((0u8..3, 0u32..3, -3i64..4), 0..5).prop_map(|ts| {
            let mut p = P::zero();
            for (v, k, c) in ts {
                p.add_term(PowerProduct::power(v, k), int(c));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        }

        #[test]
        fn truncated_product_is_truncation_of_product(a in small_poly(), b in small_poly(), max in 0u32..5) {
            prop_assert_eq!(a.mul_truncated(&b, max), (a * b).truncate(max));
        }
    }
}
