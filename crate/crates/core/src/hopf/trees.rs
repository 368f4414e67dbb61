//! Undecorated rooted trees with the admissible-cut coproduct.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::poly::Rational;

/// A rooted tree kept in canonical form (children sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedTree {
    children: Vec<RootedTree>,
}

impl RootedTree {
    pub fn leaf() -> Self {
        RootedTree { children: Vec::new() }
    }

    pub fn with_children(mut children: Vec<RootedTree>) -> Self {
        children.sort();
        RootedTree { children }
    }

    /// Build from a parent array; `parent[0]` is ignored and node 0 is the root.
    pub fn from_parents(parent: &[usize]) -> Self {
        fn go(v: usize, kids: &[Vec<usize>]) -> RootedTree {
            RootedTree::with_children(kids[v].iter().map(|&c| go(c, kids)).collect())
        }
        let mut kids = vec![Vec::new(); parent.len().max(1)];
        for (v, &p) in parent.iter().enumerate().skip(1) {
            kids[p].push(v);
        }
        go(0, &kids)
    }

    pub fn children(&self) -> &[RootedTree] {
        &self.children
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.node_count()).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(|c| c.height()).max().unwrap_or(0)
    }

    /// Every admissible cut, including the empty one, as (pruned forest,
    /// trunk).
    fn cuts(&self) -> Vec<(Vec<RootedTree>, RootedTree)> {
        let mut acc: Vec<(Vec<RootedTree>, Vec<RootedTree>)> = vec![(vec![], vec![])];
        for c in &self.children {
            let mut opts: Vec<(Vec<RootedTree>, Option<RootedTree>)> =
                c.cuts().into_iter().map(|(p, t)| (p, Some(t))).collect();
            opts.push((vec![c.clone()], None));
            let mut next = Vec::with_capacity(acc.len() * opts.len());
            for (p, kept) in &acc {
                for (q, t) in &opts {
                    let mut p2 = p.clone();
                    p2.extend(q.iter().cloned());
                    let mut k2 = kept.clone();
                    k2.extend(t.iter().cloned());
                    next.push((p2, k2));
                }
            }
            acc = next;
        }
        acc.into_iter().map(|(p, k)| (p, RootedTree::with_children(k))).collect()
    }

    /// `Δ(T) = T⊗1 + Σ_C P^C(T) ⊗ R^C(T)`, the sum including the empty cut.
    pub fn coproduct(&self) -> RtTensor {
        let mut t = RtTensor::zero();
        t.add_term(RtMonomial::tree(self.clone()), RtMonomial::one(), Rational::one());
        for (p, r) in self.cuts() {
            t.add_term(RtMonomial::from_trees(p), RtMonomial::tree(r), Rational::one());
        }
        t
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for c in &self.children {
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Forest of rooted trees, a monomial of the Connes-Kreimer algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RtMonomial(Vec<RootedTree>);

impl RtMonomial {
    pub fn one() -> Self {
        RtMonomial(Vec::new())
    }

    pub fn tree(t: RootedTree) -> Self {
        RtMonomial(vec![t])
    }

    pub fn from_trees(mut v: Vec<RootedTree>) -> Self {
        v.sort();
        RtMonomial(v)
    }

    pub fn trees(&self) -> &[RootedTree] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn times(&self, other: &RtMonomial) -> RtMonomial {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Self::from_trees(v)
    }

    pub fn node_count(&self) -> usize {
        self.0.iter().map(|t| t.node_count()).sum()
    }
}

impl fmt::Display for RtMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join("·"))
    }
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Rational>, k: K, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(k).or_insert_with(Rational::zero);
    *e += c;
}

fn prune<K: Ord>(map: &mut BTreeMap<K, Rational>) {
    map.retain(|_, c| !c.is_zero());
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RtElement {
    terms: BTreeMap<RtMonomial, Rational>,
}

impl RtElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, m: RtMonomial, c: Rational) {
        add_into(&mut self.terms, m, c);
        prune(&mut self.terms);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RtMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coproduct(&self) -> RtTensor {
        let mut out = RtTensor::zero();
        for (m, c) in &self.terms {
            let mut acc = RtTensor::zero();
            acc.add_term(RtMonomial::one(), RtMonomial::one(), Rational::one());
            for t in m.trees() {
                acc = acc.times(&t.coproduct());
            }
            out.add(&acc.scale(c));
        }
        out
    }
}

impl fmt::Display for RtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c}) {m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RtTensor {
    terms: BTreeMap<(RtMonomial, RtMonomial), Rational>,
}

impl RtTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, l: RtMonomial, r: RtMonomial, c: Rational) {
        add_into(&mut self.terms, (l, r), c);
        prune(&mut self.terms);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(RtMonomial, RtMonomial), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, other: &RtTensor) {
        for ((l, r), c) in &other.terms {
            add_into(&mut self.terms, (l.clone(), r.clone()), c.clone());
        }
        prune(&mut self.terms);
    }

    pub fn scale(&self, c: &Rational) -> RtTensor {
        let mut out = RtTensor::zero();
        for ((l, r), x) in &self.terms {
            out.add_term(l.clone(), r.clone(), x * c);
        }
        out
    }

    pub fn times(&self, other: &RtTensor) -> RtTensor {
        let mut out = RtTensor::zero();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                add_into(&mut out.terms, (a.times(c), b.times(d)), x * y);
            }
        }
        prune(&mut out.terms);
        out
    }
}

impl fmt::Display for RtTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|((l, r), c)| format!("({c}) {l} ⊗ {r}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder(n: usize) -> RootedTree {
        (1..n).fold(RootedTree::leaf(), |t, _| RootedTree::with_children(vec![t]))
    }

    #[test]
    fn single_node_is_primitive() {
        assert_eq!(RootedTree::leaf().coproduct().len(), 2);
    }

    #[test]
    fn ladder_two() {
        // Δ(l2) = l2⊗1 + 1⊗l2 + •⊗•
        let d = ladder(2).coproduct();
        assert_eq!(d.len(), 3);
        let dot = RtMonomial::tree(RootedTree::leaf());
        assert_eq!(d.terms.get(&(dot.clone(), dot)), Some(&Rational::one()));
    }

    #[test]
    fn cherry_has_coefficient_two() {
        // Δ(cherry) ∋ 2 •⊗l2 + •·•⊗•
        let cherry = RootedTree::with_children(vec![RootedTree::leaf(), RootedTree::leaf()]);
        let d = cherry.coproduct();
        let dot = RootedTree::leaf();
        let key = (RtMonomial::tree(dot.clone()), RtMonomial::tree(ladder(2)));
        assert_eq!(d.terms.get(&key), Some(&Rational::from_integer(2.into())));
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn coassociative_on_small_trees() {
        let trees = [
            ladder(3),
            ladder(4),
            RootedTree::from_parents(&[0, 0, 0, 1]),
            RootedTree::from_parents(&[0, 0, 1, 1, 2]),
        ];
        for t in trees {
            let d = t.coproduct();
            let mut left: BTreeMap<(RtMonomial, RtMonomial, RtMonomial), Rational> = BTreeMap::new();
            let mut right = left.clone();
            for ((a, b), c) in d.terms() {
                let da = RtElement { terms: [(a.clone(), Rational::one())].into() }.coproduct();
                for ((x, y), e) in da.terms() {
                    add_into(&mut left, (x.clone(), y.clone(), b.clone()), c * e);
                }
                let db = RtElement { terms: [(b.clone(), Rational::one())].into() }.coproduct();
                for ((x, y), e) in db.terms() {
                    add_into(&mut right, (a.clone(), x.clone(), y.clone()), c * e);
                }
            }
            prune(&mut left);
            prune(&mut right);
            assert_eq!(left, right, "{t}");
        }
    }

    #[test]
    fn from_parents_is_canonical() {
        assert_eq!(RootedTree::from_parents(&[0, 0, 1, 0]), RootedTree::from_parents(&[0, 0, 0, 2]));
        assert_eq!(RootedTree::from_parents(&[0, 0, 1]).node_count(), 3);
    }
}
