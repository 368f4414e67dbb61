//! Characters, infinitesimal characters, convolution, exp and log.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::engine::generator_key;
use super::{AlgebraElement, HopfAlgebra, Monomial};
use crate::error::{Error, Result};
use crate::graph::AssignedGraph;
use crate::poly::{int, Target};

type Eval = Arc<dyn Fn(&AssignedGraph) -> Target + Send + Sync>;

/// Multiplicative map from ℋ to a commutative target algebra, given by its
/// values on generators. `tag` names the target algebra; characters with
/// different tags cannot be combined.
#[derive(Clone)]
pub struct Character {
    tag: String,
    eval: Eval,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character({})", self.tag)
    }
}

impl Character {
    pub fn new(tag: impl Into<String>, f: impl Fn(&AssignedGraph) -> Target + Send + Sync + 'static) -> Self {
        Character { tag: tag.into(), eval: Arc::new(f) }
    }

    /// The counit ε, unit of the convolution group.
    pub fn counit(tag: impl Into<String>) -> Self {
        Self::new(tag, |_| Target::zero())
    }

    /// Takes `value` on the class of `g` and vanishes on other generators.
    pub fn delta(tag: impl Into<String>, g: &AssignedGraph, value: Target) -> Self {
        let key = generator_key(g);
        Self::new(tag, move |h| if generator_key(h) == key { value.clone() } else { Target::zero() })
    }

    /// Values read from a table keyed by generator; zero elsewhere.
    pub fn from_table(tag: impl Into<String>, table: HashMap<AssignedGraph, Target>) -> Self {
        let table: HashMap<AssignedGraph, Target> =
            table.into_iter().map(|(g, v)| (generator_key(&g), v)).collect();
        Self::new(tag, move |h| table.get(&generator_key(h)).cloned().unwrap_or_else(Target::zero))
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    /// Value on one graph; edgeless graphs are units and evaluate to 1.
    pub fn on_graph(&self, g: &AssignedGraph) -> Target {
        if g.edge_count() == 0 {
            Target::one()
        } else {
            (self.eval)(g)
        }
    }

    pub fn on_monomial(&self, m: &Monomial) -> Target {
        m.factors().iter().fold(Target::one(), |acc, g| acc * self.on_graph(g))
    }

    pub fn eval(&self, x: &AlgebraElement) -> Target {
        let mut out = Target::zero();
        for (m, c) in x.terms() {
            out += self.on_monomial(m).scale_rational(c);
        }
        out
    }

    fn check_tag(&self, other: &str) -> Result<()> {
        if self.tag != other {
            return Err(Error::TargetMismatch(self.tag.clone(), other.to_string()));
        }
        Ok(())
    }

    /// `α∗β = m(α⊗β)Δ`.
    pub fn convolve(&self, other: &Character, hopf: &Arc<HopfAlgebra>) -> Result<Character> {
        self.check_tag(&other.tag)?;
        let (a, b, h) = (self.clone(), other.clone(), hopf.clone());
        Ok(Character::new(self.tag.clone(), move |g| {
            let d = h.coproduct_generator(g).expect("coproduct of a generator");
            let mut out = Target::zero();
            for (k, c) in d.terms() {
                out += (a.on_monomial(&k[0]) * b.on_monomial(&k[1])).scale_rational(c);
            }
            out
        }))
    }

    /// `α∘S`, the convolution inverse.
    pub fn inverse(&self, hopf: &Arc<HopfAlgebra>) -> Character {
        let (a, h) = (self.clone(), hopf.clone());
        Character::new(self.tag.clone(), move |g| a.eval(&h.antipode_generator(g).expect("antipode")))
    }

    /// Apply a map to every value.
    pub fn map_values(&self, f: impl Fn(Target) -> Target + Send + Sync + 'static) -> Character {
        let a = self.clone();
        Character::new(self.tag.clone(), move |g| f(a.on_graph(g)))
    }

    /// Cache values per canonical generator.
    pub fn memoized(&self) -> Character {
        let a = self.clone();
        let cache: Arc<std::sync::RwLock<HashMap<AssignedGraph, Target>>> = Arc::default();
        Character::new(self.tag.clone(), move |g| {
            let key = generator_key(g);
            if let Some(v) = cache.read().expect("lock").get(&key) {
                return v.clone();
            }
            let v = a.on_graph(&key);
            cache.write().expect("lock").insert(key, v.clone());
            v
        })
    }
}

/// Linear map vanishing on 1 and on products of two or more generators.
#[derive(Clone)]
pub struct InfinitesimalCharacter {
    tag: String,
    eval: Eval,
}

impl InfinitesimalCharacter {
    pub fn new(tag: impl Into<String>, f: impl Fn(&AssignedGraph) -> Target + Send + Sync + 'static) -> Self {
        InfinitesimalCharacter { tag: tag.into(), eval: Arc::new(f) }
    }

    pub fn zero(tag: impl Into<String>) -> Self {
        Self::new(tag, |_| Target::zero())
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn on_graph(&self, g: &AssignedGraph) -> Target {
        if g.edge_count() == 0 {
            Target::zero()
        } else {
            (self.eval)(g)
        }
    }

    pub fn on_monomial(&self, m: &Monomial) -> Target {
        match m.factors() {
            [g] => self.on_graph(g),
            _ => Target::zero(),
        }
    }
}

fn unit_on(m: &Monomial) -> Target {
    if m.is_one() {
        Target::one()
    } else {
        Target::zero()
    }
}

/// `f^{∗n}(m)` for a linear functional `f` given on monomials.
fn conv_power(hopf: &HopfAlgebra, f: &dyn Fn(&Monomial) -> Target, n: usize, m: &Monomial) -> Result<Target> {
    if n == 0 {
        return Ok(unit_on(m));
    }
    if n == 1 {
        return Ok(f(m));
    }
    let mut out = Target::zero();
    for (k, c) in hopf.coproduct_monomial(m)?.terms() {
        let right = f(&k[1]);
        if right.is_zero() {
            continue;
        }
        out += (conv_power(hopf, f, n - 1, &k[0])? * right).scale_rational(c);
    }
    Ok(out)
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// `exp_∗(δ) = Σ_n δ^{∗n}/n!`, summed up to `max_grade` (exact on
/// generators of grade ≤ `max_grade`).
pub fn conv_exp(d: &InfinitesimalCharacter, max_grade: usize, hopf: &Arc<HopfAlgebra>) -> Character {
    let (d, h) = (d.clone(), hopf.clone());
    Character::new(d.tag.clone(), move |g| {
        let m = Monomial::generator(g);
        let f = |x: &Monomial| d.on_monomial(x);
        let mut out = Target::zero();
        for n in 1..=max_grade.min(m.grade()) {
            let term = conv_power(&h, &f, n, &m).expect("coproduct");
            out += term.scale_rational(&crate::poly::rat(1, factorial(n)));
        }
        out
    })
}

/// `log_∗(α) = Σ_{n≥1} (−1)^{n+1} (α−ε)^{∗n}/n`, truncated at `max_grade`.
pub fn conv_log(a: &Character, max_grade: usize, hopf: &Arc<HopfAlgebra>) -> InfinitesimalCharacter {
    let (a, h) = (a.clone(), hopf.clone());
    InfinitesimalCharacter::new(a.tag.clone(), move |g| {
        let m = Monomial::generator(g);
        let f = |x: &Monomial| a.on_monomial(x) - unit_on(x);
        let mut out = Target::zero();
        for n in 1..=max_grade.min(m.grade()) {
            let term = conv_power(&h, &f, n, &m).expect("coproduct");
            let sign = if n % 2 == 1 { 1 } else { -1 };
            out += term.scale_rational(&(int(sign) / int(n as i64)));
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::poly::{q_power, symbol};

    fn toy() -> Character {
        Character::new("q", |g| q_power(g.scales().iter().sum::<i32>() as u32))
    }

    fn symbols() -> Character {
        Character::new("sym", |g| symbol(format!("a{}", generator_key(g))))
    }

    #[test]
    fn unit_law_and_inverse() {
        let h = HopfAlgebra::high();
        let eps = Character::counit("sym");
        let a = symbols();
        let ae = a.convolve(&eps, &h).unwrap();
        let inv = a.inverse(&h);
        let id = a.convolve(&inv, &h).unwrap();
        for g in fixtures::zoo() {
            if g.edge_count() == 0 {
                continue;
            }
            assert_eq!(ae.on_graph(&g), a.on_graph(&g));
            assert!(id.on_graph(&g).is_zero(), "{g}");
        }
    }

    #[test]
    fn convolution_is_associative() {
        let h = HopfAlgebra::high();
        let a = symbols();
        let b = Character::new("sym", |g| symbol(format!("b{}", g.edge_count())));
        let c = Character::new("sym", |g| symbol(format!("c{}", g.vertex_count())));
        let l = a.convolve(&b, &h).unwrap().convolve(&c, &h).unwrap();
        let r = a.convolve(&b.convolve(&c, &h).unwrap(), &h).unwrap();
        for g in fixtures::zoo() {
            assert_eq!(l.on_graph(&g), r.on_graph(&g), "{g}");
        }
    }

    #[test]
    fn mismatched_targets_are_rejected() {
        let h = HopfAlgebra::high();
        let err = toy().convolve(&symbols(), &h).unwrap_err();
        assert!(matches!(err, Error::TargetMismatch(_, _)));
    }

    #[test]
    fn exp_of_zero_is_counit_and_log_inverts_exp() {
        let h = HopfAlgebra::high();
        let e = conv_exp(&InfinitesimalCharacter::zero("sym"), 3, &h);
        let d = InfinitesimalCharacter::new("sym", |g| symbol(format!("d{}", generator_key(g))));
        let round = conv_log(&conv_exp(&d, 3, &h), 3, &h);
        for g in fixtures::zoo() {
            assert!(e.on_graph(&g).is_zero() || g.edge_count() == 0);
            if g.loop_number() <= 3 {
                assert_eq!(round.on_graph(&g), d.on_graph(&g), "{g}");
            }
        }
        // on a primitive, exp(δ) = δ
        let p = fixtures::bubble(1, 1);
        assert_eq!(conv_exp(&d, 3, &h).on_graph(&p), d.on_graph(&p));
    }

    #[test]
    fn multiplicative_on_products() {
        let a = symbols();
        let x = fixtures::bubble(1, 2);
        let y = fixtures::chain();
        let m = Monomial::from_graphs([x.clone(), y.clone()]);
        assert_eq!(a.on_monomial(&m), a.on_graph(&x) * a.on_graph(&y));
    }
}
