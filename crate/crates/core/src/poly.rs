//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are stored in a `BTreeMap` keyed by monomial (grevlex), with no zero
//! coefficient ever stored. Equality is therefore structural: two
//! polynomials are equal iff their term maps are identical and they live in
//! the same variable context.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::context::{same_context, VariableContext};
use crate::monomial::{Monomial, MonomialOrder};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    ContextMismatch,
    UnknownVariable(usize),
    DimensionMismatch { expected: usize, got: usize },
    DivisionByZero,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::ContextMismatch => write!(f, "polynomials come from different variable contexts"),
            PolyError::UnknownVariable(i) => write!(f, "variable index {i} is not in the context"),
            PolyError::DimensionMismatch { expected, got } => {
                write!(f, "expected {expected} coordinates, got {got}")
            }
            PolyError::DivisionByZero => write!(f, "division by the zero polynomial"),
        }
    }
}

impl std::error::Error for PolyError {}

#[derive(Clone)]
pub struct Polynomial {
    ctx: Arc<VariableContext>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::print_poly(self, MonomialOrder::GrevLex))
    }
}

impl Polynomial {
    pub fn zero(ctx: &Arc<VariableContext>) -> Self {
        Polynomial {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<VariableContext>) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn constant(ctx: &Arc<VariableContext>, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ctx.len()), c);
        }
        Polynomial {
            ctx: Arc::clone(ctx),
            terms,
        }
    }

    pub fn variable(ctx: &Arc<VariableContext>, i: usize) -> Result<Self, PolyError> {
        if i >= ctx.len() {
            return Err(PolyError::UnknownVariable(i));
        }
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::variable(ctx.len(), i), Rational::one());
        Ok(Polynomial {
            ctx: Arc::clone(ctx),
            terms,
        })
    }

    /// Canonicalizing constructor: merges duplicate monomials, strips zeros.
    pub fn from_terms<I>(ctx: &Arc<VariableContext>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), ctx.len(), "monomial length must match context");
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(m).or_insert_with(Rational::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        Polynomial {
            ctx: Arc::clone(ctx),
            terms: map,
        }
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_one() && c.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// The constant value when the polynomial has no variable part.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Total degree; -1 for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| i64::from(m.total_degree()))
            .max()
            .unwrap_or(-1)
    }

    fn check_same_context(&self, other: &Polynomial) -> Result<(), PolyError> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_context(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        Ok(Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms,
        })
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Multiply by the single term `c * x^m`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_context(other)?;
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let entry = terms.entry(m).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms,
        })
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ctx);
        for _ in 0..e {
            acc = acc.try_mul(self).expect("same context");
        }
        acc
    }

    /// Exact division. `Ok(Some(q))` with `self == q * g`, `Ok(None)` when no
    /// such polynomial quotient exists.
    pub fn divide_exact(&self, g: &Polynomial) -> Result<Option<Polynomial>, PolyError> {
        self.check_same_context(g)?;
        if g.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let order = MonomialOrder::GrevLex;
        let (glm, glc) = g.leading_term(order).expect("nonzero divisor");
        let glm = glm.clone();
        let glc = glc.clone();
        let mut rem = self.clone();
        let mut quot: BTreeMap<Monomial, Rational> = BTreeMap::new();
        while !rem.is_zero() {
            let (rlm, rlc) = rem.leading_term(order).expect("nonzero remainder");
            // If f = q*g exactly, every leading term along the way is
            // divisible by LT(g); the first failure certifies NotDivisible.
            let Some(factor) = glm.divide(rlm) else {
                return Ok(None);
            };
            let coeff = rlc / &glc;
            rem = rem.try_sub(&g.mul_term(&factor, &coeff))?;
            quot.insert(factor, coeff);
        }
        Ok(Some(Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms: quot,
        }))
    }

    /// Largest exponent of variable `var` over the support; -1 for zero.
    pub fn degree_in(&self, var: usize) -> Result<i64, PolyError> {
        if var >= self.ctx.len() {
            return Err(PolyError::UnknownVariable(var));
        }
        Ok(self
            .terms
            .keys()
            .map(|m| i64::from(m.exponent(var)))
            .max()
            .unwrap_or(-1))
    }

    /// Coefficient of `var^k`, viewed as a polynomial in the remaining
    /// variables (same context, `var` zeroed out).
    pub fn coefficient_in(&self, var: usize, k: u32) -> Result<Polynomial, PolyError> {
        if var >= self.ctx.len() {
            return Err(PolyError::UnknownVariable(var));
        }
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(var) == k)
            .map(|(m, c)| {
                let mut exps = m.exponents().to_vec();
                exps[var] = 0;
                (Monomial::new(exps), c.clone())
            });
        Ok(Polynomial::from_terms(&self.ctx, terms))
    }

    /// Simultaneous substitution: every assigned variable is replaced by its
    /// image computed from the *original* variables; unassigned variables map
    /// to themselves. Ring homomorphism by construction.
    pub fn substitute(
        &self,
        assignments: &BTreeMap<usize, Polynomial>,
    ) -> Result<Polynomial, PolyError> {
        for (&v, img) in assignments {
            if v >= self.ctx.len() {
                return Err(PolyError::UnknownVariable(v));
            }
            if !same_context(&self.ctx, &img.ctx) {
                return Err(PolyError::ContextMismatch);
            }
        }
        // Per-variable power cache for the assigned variables.
        let mut powers: BTreeMap<usize, Vec<Polynomial>> = BTreeMap::new();
        for (&v, img) in assignments {
            let max_e = self
                .terms
                .keys()
                .map(|m| m.exponent(v))
                .max()
                .unwrap_or(0) as usize;
            let mut tower = Vec::with_capacity(max_e + 1);
            tower.push(Polynomial::one(&self.ctx));
            for e in 1..=max_e {
                let next = tower[e - 1].try_mul(img)?;
                tower.push(next);
            }
            powers.insert(v, tower);
        }
        let mut acc = Polynomial::zero(&self.ctx);
        for (m, c) in &self.terms {
            // Unassigned part of the monomial survives verbatim.
            let mut fixed = m.exponents().to_vec();
            for &v in assignments.keys() {
                fixed[v] = 0;
            }
            let mut term = Polynomial::from_terms(
                &self.ctx,
                [(Monomial::new(fixed), c.clone())],
            );
            for (&v, tower) in &powers {
                let e = m.exponent(v) as usize;
                if e > 0 {
                    term = term.try_mul(&tower[e])?;
                }
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.ctx.len() {
            return Err(PolyError::DimensionMismatch {
                expected: self.ctx.len(),
                got: point.len(),
            });
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    v *= rat_pow(&point[i], e);
                }
            }
            total += v;
        }
        Ok(total)
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &Rational)> {
        match order {
            // Term maps are already grevlex-sorted.
            MonomialOrder::GrevLex => self.terms.iter().next_back(),
            _ => self
                .terms
                .iter()
                .max_by(|(a, _), (b, _)| order.compare(a, b)),
        }
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<&Monomial> {
        self.leading_term(order).map(|(m, _)| m)
    }

    pub fn leading_coefficient(&self, order: MonomialOrder) -> Option<&Rational> {
        self.leading_term(order).map(|(_, c)| c)
    }

    /// Scaled to leading coefficient 1 under `order`; zero stays zero.
    pub fn monic(&self, order: MonomialOrder) -> Polynomial {
        match self.leading_coefficient(order) {
            None => self.clone(),
            Some(lc) => {
                let inv = Rational::one() / lc;
                self.scale(&inv)
            }
        }
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| order.compare(b, a));
        v
    }

    /// True when the coefficient of the leading term is positive.
    pub fn leading_is_positive(&self, order: MonomialOrder) -> bool {
        self.leading_coefficient(order)
            .map(|c| c.is_positive())
            .unwrap_or(false)
    }
}

fn rat_pow(r: &Rational, e: u32) -> Rational {
    // numerator/denominator stay coprime under powers, so skip re-reduction
    Rational::new_raw(r.numer().pow(e), r.denom().pow(e))
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("context mismatch in +")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("context mismatch in -")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("context mismatch in *")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}
