//! The free commutative algebra on assigned graphs and its Hopf structure.

mod character;
mod engine;
mod morphisms;
mod trees;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::graph::AssignedGraph;
use crate::poly::{rational_json, Rational};

pub use character::{conv_exp, conv_log, Character, InfinitesimalCharacter};
pub use engine::{generator_key, Forest, HopfAlgebra};
pub(crate) use engine::{maximal_below, quotient};
pub use morphisms::{
    check_pi_ck_morphism, check_pi_gn_morphism, check_pi_rt_morphism, gn_coproduct, gn_grading_is_additive, pi_ck,
    pi_ck_monomial, pi_ck_patterns, pi_ck_total, pi_gn, pi_rt, pi_rt_element, pi_rt_graph, pi_rt_monomial,
    pi_rt_tensor, skeleton, CkPattern,
};
pub use trees::{RtElement, RtMonomial, RtTensor, RootedTree};

/// A multiset of canonical generators. Edgeless graphs are units and are
/// dropped, so the empty monomial is `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<AssignedGraph>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// Monomial of a single graph, canonicalised as a generator.
    pub fn generator(g: &AssignedGraph) -> Self {
        Self::from_graphs([g.clone()])
    }

    pub fn from_graphs(gs: impl IntoIterator<Item = AssignedGraph>) -> Self {
        let mut v: Vec<AssignedGraph> =
            gs.into_iter().filter(|g| g.edge_count() > 0).map(|g| generator_key(&g)).collect();
        v.sort();
        Monomial(v)
    }

    /// Assumes the factors are already canonical generators.
    pub(crate) fn from_keys(mut v: Vec<AssignedGraph>) -> Self {
        v.retain(|g| g.edge_count() > 0);
        v.sort();
        Monomial(v)
    }

    pub fn factors(&self) -> &[AssignedGraph] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Sum of loop numbers.
    pub fn grade(&self) -> usize {
        self.0.iter().map(|g| g.loop_number()).sum()
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        v.sort();
        Monomial(v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join("·"))
    }
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Rational>, k: K, c: Rational) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Element of ℋ: rational combination of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Monomial, Rational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_monomial(Monomial::one(), Rational::one())
    }

    pub fn from_monomial(m: Monomial, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn generator(g: &AssignedGraph) -> Self {
        Self::from_monomial(Monomial::generator(g), Rational::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        add_into(&mut self.terms, m, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    /// ε: the coefficient of `1`.
    pub fn counit(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    /// Every monomial has the same grade; returns it (0 for zero).
    pub fn homogeneous_grade(&self) -> Option<usize> {
        let mut grades = self.terms.keys().map(|m| m.grade());
        let first = grades.next().unwrap_or(0);
        grades.all(|g| g == first).then_some(first)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    json!({
                        "monomial": m.factors().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                        "coeff": rational_json(c),
                    })
                })
                .collect(),
        )
    }
}

impl Add for AlgebraElement {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for AlgebraElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for AlgebraElement {
    type Output = Self;
    fn neg(self) -> Self {
        AlgebraElement { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: Self) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.times(b), x * y);
            }
        }
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c}) {m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Rational combination of tensors `m_1 ⊗ … ⊗ m_k` of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TensorElement {
    terms: BTreeMap<Vec<Monomial>, Rational>,
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, factors: Vec<Monomial>, c: Rational) {
        add_into(&mut self.terms, factors, c);
    }

    pub fn add_pair(&mut self, left: Monomial, right: Monomial, c: Rational) {
        self.add_term(vec![left, right], c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Monomial>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, factors: &[Monomial]) -> Rational {
        self.terms.get(factors).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x * c);
        }
        out
    }

    pub fn add(&mut self, other: &TensorElement) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    /// Multiply the tensor factors together.
    pub fn multiply_out(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (k, c) in &self.terms {
            let m = k.iter().fold(Monomial::one(), |acc, x| acc.times(x));
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(k, c)| {
                    json!({
                        "factors": k
                            .iter()
                            .map(|m| m.factors().iter().map(|g| g.to_string()).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                        "coeff": rational_json(c),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let fs: Vec<String> = k.iter().map(|m| m.to_string()).collect();
                format!("({c}) {}", fs.join(" ⊗ "))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
