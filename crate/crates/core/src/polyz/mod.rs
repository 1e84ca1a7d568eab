//! Exact multivariate polynomials over the integers, monomial orders, and
//! strong Groebner bases with unique normal forms.
//!
//! The Groebner engine works over the Euclidean domain Z: alongside the
//! usual S-polynomials it closes under GCD-polynomials, which is what makes
//! the bases *strong* (every leading term of an ideal element is divisible,
//! coefficient included, by a generator's leading term) and the normal forms
//! unique. Saturation and ideal quotients go through block elimination
//! orders, and quotient rings are reduced to abelian-group invariants via
//! the relation lattice of the standard monomials.

mod groebner;

pub use groebner::{
    buchberger_strong, divide_exact, ideal_equal, ideal_member, ideal_quotient, normal_form,
    quotient_group_structure, reduce_with_certificate, saturation, standard_monomials,
    AbelianGroupStructure, ReductionStep, StrongGB,
};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector, one entry per variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial {
            exponents: vec![0; num_vars],
        }
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        Self::var_pow(num_vars, i, 1)
    }

    pub fn var_pow(num_vars: usize, i: usize, k: u32) -> Self {
        let mut exponents = vec![0; num_vars];
        exponents[i] = k;
        Monomial { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn num_vars(&self) -> usize {
        self.exponents.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        }
    }

    /// other / self, defined when self divides other.
    pub fn div_into(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| b - a)
                .collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }
}

/// Total order on monomials, compatible with multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic on all variables.
    GrevLex,
    /// Pure lexicographic.
    Lex,
    /// Eliminate the first `first_block` variables: graded reverse lex on
    /// that block, ties broken by graded reverse lex on the rest.
    Block { first_block: usize },
}

fn grevlex_slice(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            // In grevlex the later variable with the *smaller* exponent wins.
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.num_vars(), b.num_vars());
        match self {
            MonomialOrder::GrevLex => grevlex_slice(&a.exponents, &b.exponents),
            MonomialOrder::Lex => {
                for (x, y) in a.exponents.iter().zip(&b.exponents) {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block { first_block } => {
                let k = *first_block;
                match grevlex_slice(&a.exponents[..k], &b.exponents[..k]) {
                    Ordering::Equal => grevlex_slice(&a.exponents[k..], &b.exponents[k..]),
                    o => o,
                }
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::GrevLex => "grevlex".into(),
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::Block { first_block } => {
                format!("block-elimination({})", first_block)
            }
        }
    }
}

/// Sparse polynomial with integer coefficients. Terms are kept in a map
/// keyed structurally; leading terms under an order are located on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    num_vars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPolynomial {
    pub fn zero(num_vars: usize) -> Self {
        IntPolynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(num_vars), c);
        }
        IntPolynomial { num_vars, terms }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, BigInt::one())
    }

    pub fn variable(num_vars: usize, i: usize) -> Self {
        Self::from_terms(num_vars, vec![(Monomial::var(num_vars, i), BigInt::one())])
    }

    /// 1 - x_i, the building block of the exponential relations.
    pub fn one_minus_var(num_vars: usize, i: usize) -> Self {
        Self::from_terms(
            num_vars,
            vec![
                (Monomial::one(num_vars), BigInt::one()),
                (Monomial::var(num_vars, i), BigInt::from(-1)),
            ],
        )
    }

    pub fn from_terms(num_vars: usize, terms: Vec<(Monomial, BigInt)>) -> Self {
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.num_vars(), num_vars, "monomial arity mismatch");
            *map.entry(m).or_insert_with(BigInt::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        IntPolynomial {
            num_vars,
            terms: map,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &BigInt)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp(a, b))
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        assert_eq!(self.num_vars, other.num_vars);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(m.clone()).or_insert_with(BigInt::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        IntPolynomial {
            num_vars: self.num_vars,
            terms,
        }
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> IntPolynomial {
        IntPolynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> IntPolynomial {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        IntPolynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    /// Multiply by a single term c * x^m.
    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> IntPolynomial {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        IntPolynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        assert_eq!(self.num_vars, other.num_vars);
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *terms.entry(m1.mul(m2)).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        IntPolynomial {
            num_vars: self.num_vars,
            terms,
        }
    }

    pub fn pow(&self, k: u32) -> IntPolynomial {
        let mut out = Self::one(self.num_vars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Re-embed into a ring with `count` new variables inserted at the
    /// front (used by the elimination tricks).
    pub fn prepend_vars(&self, count: usize) -> IntPolynomial {
        IntPolynomial {
            num_vars: self.num_vars + count,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = vec![0u32; count];
                    e.extend_from_slice(&m.exponents);
                    (Monomial::new(e), c.clone())
                })
                .collect(),
        }
    }

    /// Drop the first `count` variables; defined only when no term uses them.
    pub fn drop_front_vars(&self, count: usize) -> Option<IntPolynomial> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.exponents[..count].iter().any(|&e| e != 0) {
                return None;
            }
            terms.insert(Monomial::new(m.exponents[count..].to_vec()), c.clone());
        }
        Some(IntPolynomial {
            num_vars: self.num_vars - count,
            terms,
        })
    }

    /// Deterministic rendering with terms sorted descending in the order.
    pub fn render(&self, order: &MonomialOrder, var_name: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut monomials: Vec<&Monomial> = self.terms.keys().collect();
        monomials.sort_by(|a, b| order.cmp(b, a));
        let mut out = String::new();
        for (idx, m) in monomials.iter().enumerate() {
            let c = &self.terms[*m];
            let mag = c.magnitude().to_string();
            if idx == 0 {
                if c.sign() == num_bigint::Sign::Minus {
                    out.push('-');
                }
            } else if c.sign() == num_bigint::Sign::Minus {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.exponents.iter().enumerate() {
                if e == 1 {
                    factors.push(var_name(i));
                } else if e > 1 {
                    factors.push(format!("{}^{}", var_name(i), e));
                }
            }
            if factors.is_empty() {
                out.push_str(&mag);
            } else {
                if mag != "1" {
                    out.push_str(&mag);
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            self.render(&MonomialOrder::GrevLex, &|i| format!("x{}", i))
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn grevlex_ordering() {
        let o = MonomialOrder::GrevLex;
        // Degree dominates.
        assert_eq!(o.cmp(&m(&[2, 0]), &m(&[0, 1])), Ordering::Greater);
        // Same degree: x0 > x1 in two variables.
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 1])), Ordering::Greater);
        // Classic grevlex: x0*x2 < x1^2 in three variables.
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
    }

    #[test]
    fn lex_ordering() {
        let o = MonomialOrder::Lex;
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
    }

    #[test]
    fn block_order_eliminates() {
        // Any monomial containing the first variable beats any that doesn't.
        let o = MonomialOrder::Block { first_block: 1 };
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 9])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 2]), &m(&[0, 1])), Ordering::Greater);
    }

    #[test]
    fn arithmetic_basics() {
        let x = IntPolynomial::variable(2, 0);
        let y = IntPolynomial::variable(2, 1);
        let p = x.add(&y).mul(&x.sub(&y));
        let expected = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "x0^2 - x1^2");
        let q = IntPolynomial::one_minus_var(2, 0).pow(2);
        assert_eq!(q.to_string(), "x0^2 - 2*x0 + 1");
    }

    #[test]
    fn leading_terms_respect_order() {
        let p = IntPolynomial::from_terms(
            3,
            vec![
                (m(&[1, 0, 1]), BigInt::from(5)),
                (m(&[0, 2, 0]), BigInt::from(-7)),
            ],
        );
        let (lm, lc) = p.leading_term(&MonomialOrder::GrevLex).unwrap();
        assert_eq!(lm, &m(&[0, 2, 0]));
        assert_eq!(lc, &BigInt::from(-7));
        let (lm, _) = p.leading_term(&MonomialOrder::Lex).unwrap();
        assert_eq!(lm, &m(&[1, 0, 1]));
    }

    #[test]
    fn variable_embedding_roundtrip() {
        let p = IntPolynomial::one_minus_var(2, 1).pow(3);
        let embedded = p.prepend_vars(2);
        assert_eq!(embedded.num_vars(), 4);
        assert_eq!(embedded.drop_front_vars(2).unwrap(), p);
        let with_front = IntPolynomial::variable(3, 0);
        assert!(with_front.drop_front_vars(1).is_none());
    }
}
