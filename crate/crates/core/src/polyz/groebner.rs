//! Strong Groebner bases over the integers: Buchberger closure under both
//! S-polynomials and GCD-polynomials, unique normal forms with canonical
//! coefficient residues, elimination-based saturation and ideal quotients,
//! and extraction of the abelian-group structure of a quotient ring.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntPolynomial, Monomial, MonomialOrder};
use crate::lattice::{self, IntMatrix};
use crate::{Error, Result};

/// One subtraction performed during reduction: `coeff * x^shift * g_i`.
#[derive(Debug, Clone)]
pub struct ReductionStep {
    pub generator: usize,
    pub shift: Monomial,
    pub coeff: BigInt,
}

/// A strong Groebner basis: every leading term (coefficient included) of an
/// ideal element is term-divisible by some generator's leading term.
#[derive(Debug, Clone)]
pub struct StrongGB {
    num_vars: usize,
    generators: Vec<IntPolynomial>,
    order: MonomialOrder,
}

impl StrongGB {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn generators(&self) -> &[IntPolynomial] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// The ideal is the whole ring iff 1 reduces to 0.
    pub fn is_unit_ideal(&self) -> bool {
        ideal_member(&IntPolynomial::one(self.num_vars), self)
    }
}

fn normalize_sign(p: IntPolynomial, order: &MonomialOrder) -> IntPolynomial {
    match p.leading_term(order) {
        Some((_, c)) if c.is_negative() => p.neg(),
        _ => p,
    }
}

/// Reduce `p` against the generators, returning the canonical remainder and
/// the subtraction certificate: p = sum(steps) + remainder. Each processed
/// term is reduced so its residual coefficient r satisfies 0 <= r < g, where
/// g is the gcd of the leading coefficients of all applicable generators.
pub fn reduce_with_certificate(
    p: &IntPolynomial,
    gb: &StrongGB,
) -> (IntPolynomial, Vec<ReductionStep>) {
    reduce_impl(p, &gb.generators, &gb.order)
}

fn reduce_impl(
    p: &IntPolynomial,
    gens: &[IntPolynomial],
    order: &MonomialOrder,
) -> (IntPolynomial, Vec<ReductionStep>) {
    let num_vars = p.num_vars();
    let mut work = p.clone();
    let mut remainder = IntPolynomial::zero(num_vars);
    let mut steps = Vec::new();

    let leads: Vec<Option<(Monomial, BigInt)>> = gens
        .iter()
        .map(|g| g.leading_term(order).map(|(m, c)| (m.clone(), c.clone())))
        .collect();

    while let Some((lm, lc)) = work
        .leading_term(order)
        .map(|(m, c)| (m.clone(), c.clone()))
    {
        let applicable: Vec<usize> = leads
            .iter()
            .enumerate()
            .filter_map(|(i, lead)| {
                lead.as_ref()
                    .filter(|(gm, _)| gm.divides(&lm))
                    .map(|_| i)
            })
            .collect();

        if applicable.is_empty() {
            remainder = remainder.add(&IntPolynomial::from_terms(
                num_vars,
                vec![(lm.clone(), lc.clone())],
            ));
            work = work.sub(&IntPolynomial::from_terms(num_vars, vec![(lm, lc)]));
            continue;
        }

        // gcd of applicable leading coefficients with a Bezout combination.
        let mut g = BigInt::zero();
        let mut combo: Vec<(usize, BigInt)> = Vec::new();
        for &i in &applicable {
            let lci = &leads[i].as_ref().unwrap().1;
            debug_assert!(lci.is_positive());
            if g.is_zero() {
                g = lci.clone();
                combo.push((i, BigInt::one()));
            } else if !(lci % &g).is_zero() {
                let ext = g.extended_gcd(lci);
                for (_, c) in combo.iter_mut() {
                    *c *= &ext.x;
                }
                combo.push((i, ext.y));
                g = ext.gcd;
            }
            if g.is_one() {
                break;
            }
        }

        let (q, r) = lc.div_mod_floor(&g);
        if !q.is_zero() {
            for (i, c) in &combo {
                let coeff = &q * c;
                if coeff.is_zero() {
                    continue;
                }
                let shift = leads[*i]
                    .as_ref()
                    .unwrap()
                    .0
                    .div_into(&lm)
                    .expect("leading monomial divides");
                work = work.sub(&gens[*i].mul_term(&shift, &coeff));
                steps.push(ReductionStep {
                    generator: *i,
                    shift,
                    coeff,
                });
            }
            debug_assert_eq!(work.coefficient(&lm), r);
        }
        if !r.is_zero() {
            remainder = remainder.add(&IntPolynomial::from_terms(
                num_vars,
                vec![(lm.clone(), r.clone())],
            ));
            work = work.sub(&IntPolynomial::from_terms(num_vars, vec![(lm, r)]));
        }
    }
    (remainder, steps)
}

/// Unique remainder of `p` modulo the basis.
pub fn normal_form(p: &IntPolynomial, gb: &StrongGB) -> IntPolynomial {
    reduce_with_certificate(p, gb).0
}

/// Membership via zero normal form.
pub fn ideal_member(p: &IntPolynomial, gb: &StrongGB) -> bool {
    normal_form(p, gb).is_zero()
}

/// Equality of ideals via mutual membership of generators.
pub fn ideal_equal(a: &StrongGB, b: &StrongGB) -> bool {
    a.generators.iter().all(|g| ideal_member(g, b))
        && b.generators.iter().all(|g| ideal_member(g, a))
}

fn s_poly_and_g_poly(
    f: &IntPolynomial,
    g: &IntPolynomial,
    order: &MonomialOrder,
) -> (IntPolynomial, Option<IntPolynomial>) {
    let (fm, fc) = f.leading_term(order).expect("nonzero");
    let (gm, gc) = g.leading_term(order).expect("nonzero");
    let lcm_m = fm.lcm(gm);
    let shift_f = fm.div_into(&lcm_m).unwrap();
    let shift_g = gm.div_into(&lcm_m).unwrap();
    let lcm_c = fc.lcm(gc);
    let s = f
        .mul_term(&shift_f, &(&lcm_c / fc))
        .sub(&g.mul_term(&shift_g, &(&lcm_c / gc)));
    // The GCD-polynomial only contributes when neither coefficient divides
    // the other; otherwise it is a term multiple of one generator.
    let gp = if (fc % gc).is_zero() || (gc % fc).is_zero() {
        None
    } else {
        let ext = fc.extended_gcd(gc);
        Some(
            f.mul_term(&shift_f, &ext.x)
                .add(&g.mul_term(&shift_g, &ext.y)),
        )
    };
    (s, gp)
}

/// Buchberger over Z. Pair selection is the normal strategy (smallest lcm
/// monomial in the order) with ties broken by insertion order; the result is
/// auto-reduced and canonically sorted, so the output is deterministic.
pub fn buchberger_strong(
    num_vars: usize,
    gens: &[IntPolynomial],
    order: MonomialOrder,
) -> StrongGB {
    let mut basis: Vec<IntPolynomial> = Vec::new();
    for g in gens {
        assert_eq!(g.num_vars(), num_vars, "generator arity mismatch");
        if !g.is_zero() {
            basis.push(normalize_sign(g.clone(), &order));
        }
    }

    let pair_key = |a: &IntPolynomial, b: &IntPolynomial| -> Monomial {
        let (am, _) = a.leading_term(&order).unwrap();
        let (bm, _) = b.leading_term(&order).unwrap();
        am.lcm(bm)
    };

    let mut queue: Vec<(Monomial, usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            queue.push((pair_key(&basis[i], &basis[j]), j, i));
        }
    }

    while !queue.is_empty() {
        let mut best = 0;
        for idx in 1..queue.len() {
            if order.cmp(&queue[idx].0, &queue[best].0) == std::cmp::Ordering::Less {
                best = idx;
            }
        }
        let (_, i, j) = queue.remove(best);
        let (s, gp) = s_poly_and_g_poly(&basis[i], &basis[j], &order);
        for candidate in std::iter::once(s).chain(gp) {
            let (rem, _) = reduce_impl(&candidate, &basis, &order);
            if rem.is_zero() {
                continue;
            }
            let rem = normalize_sign(rem, &order);
            let k = basis.len();
            for t in 0..k {
                queue.push((pair_key(&basis[t], &rem), t, k));
            }
            basis.push(rem);
        }
    }

    // Minimalize: drop generators whose leading term is term-divisible by
    // another survivor's leading term.
    basis.sort_by(|a, b| compare_polys(a, b, &order));
    let term_divides = |a: &IntPolynomial, b: &IntPolynomial| -> bool {
        let (am, ac) = a.leading_term(&order).unwrap();
        let (bm, bc) = b.leading_term(&order).unwrap();
        am.divides(bm) && (bc % ac).is_zero()
    };
    let mut keep = vec![true; basis.len()];
    for i in (0..basis.len()).rev() {
        if basis
            .iter()
            .enumerate()
            .any(|(j, other)| i != j && keep[j] && term_divides(other, &basis[i]))
        {
            keep[i] = false;
        }
    }
    let mut basis: Vec<IntPolynomial> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();

    // Tail-reduce to a fixpoint. Leading terms never change here: a leading
    // monomial cannot divide a strictly smaller tail monomial.
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            let (lm, lc) = {
                let (m, c) = basis[i].leading_term(&order).unwrap();
                (m.clone(), c.clone())
            };
            let lead = IntPolynomial::from_terms(num_vars, vec![(lm, lc)]);
            let tail = basis[i].sub(&lead);
            let (tail_nf, _) = reduce_impl(&tail, &basis, &order);
            let reduced = lead.add(&tail_nf);
            if reduced != basis[i] {
                basis[i] = reduced;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    basis.sort_by(|a, b| compare_polys(a, b, &order));

    StrongGB {
        num_vars,
        generators: basis,
        order,
    }
}

fn compare_polys(a: &IntPolynomial, b: &IntPolynomial, order: &MonomialOrder) -> std::cmp::Ordering {
    let (am, ac) = a.leading_term(order).unwrap();
    let (bm, bc) = b.leading_term(order).unwrap();
    order
        .cmp(am, bm)
        .then_with(|| ac.cmp(bc))
        .then_with(|| {
            let at: Vec<_> = a.terms().collect();
            let bt: Vec<_> = b.terms().collect();
            at.cmp(&bt)
        })
}

/// Saturation (I : f^infinity) by the Rabinowitsch trick: adjoin y, add
/// 1 - y*f, eliminate y with a block order and keep the y-free generators.
pub fn saturation(
    num_vars: usize,
    gens: &[IntPolynomial],
    f: &IntPolynomial,
) -> Vec<IntPolynomial> {
    assert!(!f.is_zero(), "saturation by zero");
    let mut extended: Vec<IntPolynomial> = gens.iter().map(|g| g.prepend_vars(1)).collect();
    let y = IntPolynomial::variable(num_vars + 1, 0);
    extended.push(IntPolynomial::one(num_vars + 1).sub(&y.mul(&f.prepend_vars(1))));
    let gb = buchberger_strong(num_vars + 1, &extended, MonomialOrder::Block { first_block: 1 });
    gb.generators
        .iter()
        .filter_map(|g| g.drop_front_vars(1))
        .collect()
}

/// Exact division p / f, when f divides p over the integers.
pub fn divide_exact(
    p: &IntPolynomial,
    f: &IntPolynomial,
    order: &MonomialOrder,
) -> Option<IntPolynomial> {
    let num_vars = p.num_vars();
    let (fm, fc) = f.leading_term(order)?;
    let mut rest = p.clone();
    let mut quotient = IntPolynomial::zero(num_vars);
    while let Some((lm, lc)) = rest.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        let shift = fm.div_into(&lm)?;
        let (q, r) = lc.div_rem(fc);
        if !r.is_zero() {
            return None;
        }
        let term = IntPolynomial::from_terms(num_vars, vec![(shift, q)]);
        rest = rest.sub(&f.mul(&term));
        quotient = quotient.add(&term);
    }
    Some(quotient)
}

/// Ideal quotient (I : f), via the one-variable intersection trick
/// s*I + (1-s)*<f> followed by exact division by f.
pub fn ideal_quotient(
    num_vars: usize,
    gens: &[IntPolynomial],
    f: &IntPolynomial,
) -> Result<Vec<IntPolynomial>> {
    assert!(!f.is_zero(), "quotient by zero");
    let s = IntPolynomial::variable(num_vars + 1, 0);
    let one_minus_s = IntPolynomial::one(num_vars + 1).sub(&s);
    let mut extended: Vec<IntPolynomial> = gens
        .iter()
        .map(|g| s.mul(&g.prepend_vars(1)))
        .collect();
    extended.push(one_minus_s.mul(&f.prepend_vars(1)));
    let gb = buchberger_strong(num_vars + 1, &extended, MonomialOrder::Block { first_block: 1 });
    let order = MonomialOrder::GrevLex;
    let mut out = Vec::new();
    for g in gb.generators.iter().filter_map(|g| g.drop_front_vars(1)) {
        let q = divide_exact(&g, f, &order).ok_or(Error::ExactDivision)?;
        if !q.is_zero() {
            out.push(q);
        }
    }
    Ok(out)
}

/// Free rank plus invariant-factor chain of a finitely generated abelian
/// group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroupStructure {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl AbelianGroupStructure {
    pub fn free(rank: usize) -> Self {
        AbelianGroupStructure {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    pub fn is_torsion_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

impl std::fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{}", d));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" (+) "))
        }
    }
}

/// Monomials outside the staircase of unit-coefficient leading monomials.
/// Finite exactly when every variable has a unit pure-power leading
/// monomial, which the callers guarantee by an explicit membership check.
pub fn standard_monomials(gb: &StrongGB) -> Result<Vec<Monomial>> {
    let order = &gb.order;
    let unit_lms: Vec<&Monomial> = gb
        .generators
        .iter()
        .filter_map(|g| {
            let (m, c) = g.leading_term(order)?;
            c.abs().is_one().then_some(m)
        })
        .collect();
    if unit_lms.iter().any(|m| m.is_one()) {
        return Ok(Vec::new());
    }
    let mut bounds = vec![None::<u32>; gb.num_vars];
    for m in &unit_lms {
        let support: Vec<usize> = m
            .exponents()
            .iter()
            .enumerate()
            .filter_map(|(i, &e)| (e > 0).then_some(i))
            .collect();
        if support.len() == 1 {
            let i = support[0];
            let e = m.exponents()[i];
            bounds[i] = Some(bounds[i].map_or(e, |b| b.min(e)));
        }
    }
    for (i, b) in bounds.iter().enumerate() {
        if b.is_none() {
            return Err(Error::NotFinitelyGenerated(i));
        }
    }
    let bounds: Vec<u32> = bounds.into_iter().map(Option::unwrap).collect();

    let mut out = Vec::new();
    let mut current = vec![0u32; gb.num_vars];
    loop {
        let m = Monomial::new(current.clone());
        if !unit_lms.iter().any(|u| u.divides(&m)) {
            out.push(m);
        }
        // odometer over the box
        let mut i = 0;
        loop {
            if i == gb.num_vars {
                out.sort_by(|a, b| order.cmp(a, b));
                return Ok(out);
            }
            current[i] += 1;
            if current[i] < bounds[i] {
                break;
            }
            current[i] = 0;
            i += 1;
        }
    }
}

/// Structure of Z[x]/I as a finitely generated abelian group. The group is
/// presented on the standard monomials by the canonical relations
/// g(m)*m - NF(g(m)*m), where g(m) is the gcd of the leading coefficients of
/// the generators whose leading monomial divides m; the Smith normal form of
/// that relation lattice gives the free rank and the invariant factors.
pub fn quotient_group_structure(gb: &StrongGB) -> Result<AbelianGroupStructure> {
    let standard = standard_monomials(gb)?;
    if standard.is_empty() {
        return Ok(AbelianGroupStructure::free(0));
    }
    let order = &gb.order;
    let index_of = |m: &Monomial| -> Option<usize> { standard.iter().position(|s| s == m) };

    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (col, m) in standard.iter().enumerate() {
        let mut g = BigInt::zero();
        for gen in &gb.generators {
            let (lm, lc) = gen.leading_term(order).expect("nonzero generator");
            if lm.divides(m) {
                g = g.gcd(lc);
            }
        }
        if g.is_zero() {
            continue;
        }
        let nf = normal_form(
            &IntPolynomial::from_terms(gb.num_vars, vec![(m.clone(), g.clone())]),
            gb,
        );
        let mut row = vec![BigInt::zero(); standard.len()];
        row[col] = g;
        for (mono, coeff) in nf.terms() {
            let idx = index_of(mono).ok_or_else(|| {
                Error::Internal("normal form leaves the standard monomial span".into())
            })?;
            row[idx] -= coeff;
        }
        rows.push(row);
    }

    if rows.is_empty() {
        return Ok(AbelianGroupStructure::free(standard.len()));
    }
    let mut matrix = IntMatrix::zeros(rows.len(), standard.len());
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            *matrix.at_mut(i, j) = e.clone();
        }
    }
    let snf = lattice::smith_normal_form(&matrix);
    let factors = snf.invariant_factors();
    let rank = factors.iter().filter(|f| !f.is_zero()).count();
    Ok(AbelianGroupStructure {
        free_rank: standard.len() - rank,
        invariant_factors: factors
            .into_iter()
            .filter(|f| !f.is_zero() && !f.is_one())
            .collect(),
    })
}
