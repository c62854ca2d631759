//! Gröbner machinery: multivariate division with quotients, Buchberger's
//! algorithm, reduced bases, unit-ideal testing, elimination ideals, and the
//! lcm-by-elimination gcd.
//!
//! One algorithm (Buchberger) backs ideal membership, the unit-ideal
//! criterion, and gcd, so there is a single trusted core. Pair selection is
//! the normal strategy with a deterministic tie-break, which makes outputs
//! reproducible byte for byte.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::context::{same_context, VariableContext};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{PolyError, Polynomial};
use crate::rational::Rational;

/// Default cap on S-pair reductions, overridable through
/// `QWLSMITH_GB_PAIR_LIMIT`.
pub const DEFAULT_PAIR_LIMIT: usize = 100_000;

/// Reads the pair-reduction safety valve from the environment.
pub fn pair_limit_from_env() -> usize {
    std::env::var("QWLSMITH_GB_PAIR_LIMIT")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_PAIR_LIMIT)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GbError {
    Poly(PolyError),
    ZeroIdeal,
    ZeroGcd,
    DropAllVariables,
    PairLimitExceeded(usize),
    Internal(String),
}

impl fmt::Display for GbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GbError::Poly(e) => e.fmt(f),
            GbError::ZeroIdeal => write!(f, "all generators are zero"),
            GbError::ZeroGcd => write!(f, "gcd of an all-zero family is undefined"),
            GbError::DropAllVariables => write!(f, "cannot eliminate every variable"),
            GbError::PairLimitExceeded(n) => {
                write!(f, "Buchberger exceeded the pair-reduction limit of {n}")
            }
            GbError::Internal(msg) => write!(f, "internal invariant failure: {msg}"),
        }
    }
}

impl std::error::Error for GbError {}

impl From<PolyError> for GbError {
    fn from(e: PolyError) -> Self {
        GbError::Poly(e)
    }
}

/// A finite generating set, zeros stripped on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    ctx: Arc<VariableContext>,
    generators: Vec<Polynomial>,
}

impl Ideal {
    pub fn new<I>(ctx: &Arc<VariableContext>, gens: I) -> Result<Self, GbError>
    where
        I: IntoIterator<Item = Polynomial>,
    {
        let mut generators = Vec::new();
        for g in gens {
            if !same_context(ctx, g.context()) {
                return Err(GbError::Poly(PolyError::ContextMismatch));
            }
            if !g.is_zero() {
                generators.push(g);
            }
        }
        Ok(Ideal {
            ctx: Arc::clone(ctx),
            generators,
        })
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub generators: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub reduced: bool,
}

/// Multivariate division: returns `(normal_form, quotients)` with
/// `f == sum_i quotients[i] * basis[i] + normal_form` and no term of the
/// normal form divisible by any basis leading term.
pub fn reduce(
    f: &Polynomial,
    basis: &[Polynomial],
    order: MonomialOrder,
) -> Result<(Polynomial, Vec<Polynomial>), GbError> {
    for g in basis {
        if !same_context(f.context(), g.context()) {
            return Err(GbError::Poly(PolyError::ContextMismatch));
        }
        if g.is_zero() {
            return Err(GbError::Poly(PolyError::DivisionByZero));
        }
    }
    let ctx = f.context();
    let lts: Vec<(Monomial, Rational)> = basis
        .iter()
        .map(|g| {
            let (m, c) = g.leading_term(order).expect("nonzero");
            (m.clone(), c.clone())
        })
        .collect();
    let mut quotients = vec![Polynomial::zero(ctx); basis.len()];
    let mut remainder = Polynomial::zero(ctx);
    let mut work = f.clone();
    'outer: while !work.is_zero() {
        let (lm, lc) = {
            let (m, c) = work.leading_term(order).expect("nonzero");
            (m.clone(), c.clone())
        };
        for (i, (glm, glc)) in lts.iter().enumerate() {
            if let Some(t) = glm.divide(&lm) {
                let c = &lc / glc;
                quotients[i] = quotients[i]
                    .try_add(&Polynomial::from_terms(ctx, [(t.clone(), c.clone())]))?;
                work = work.try_sub(&basis[i].mul_term(&t, &c))?;
                continue 'outer;
            }
        }
        // leading term is irreducible: move it to the remainder
        remainder = remainder.try_add(&Polynomial::from_terms(ctx, [(lm.clone(), lc.clone())]))?;
        work = work.try_sub(&Polynomial::from_terms(ctx, [(lm, lc)]))?;
    }
    Ok((remainder, quotients))
}

/// Normal form only.
pub fn normal_form(
    f: &Polynomial,
    basis: &[Polynomial],
    order: MonomialOrder,
) -> Result<Polynomial, GbError> {
    Ok(reduce(f, basis, order)?.0)
}

fn s_polynomial(
    f: &Polynomial,
    g: &Polynomial,
    order: MonomialOrder,
) -> Result<Polynomial, GbError> {
    let (flm, flc) = f.leading_term(order).expect("nonzero");
    let (glm, glc) = g.leading_term(order).expect("nonzero");
    let l = flm.lcm(glm);
    let tf = flm.divide(&l).expect("lcm divisible");
    let tg = glm.divide(&l).expect("lcm divisible");
    let a = f.mul_term(&tf, &(Rational::one() / flc));
    let b = g.mul_term(&tg, &(Rational::one() / glc));
    Ok(a.try_sub(&b)?)
}

/// Buchberger's algorithm with the coprime-leading-term and chain criteria
/// and normal pair selection. `pair_limit` caps the number of S-pair
/// reductions attempted.
pub fn buchberger_limited(
    gens: &Ideal,
    order: MonomialOrder,
    pair_limit: usize,
) -> Result<GroebnerBasis, GbError> {
    if gens.is_zero() {
        return Err(GbError::ZeroIdeal);
    }
    let mut basis: Vec<Polynomial> = gens
        .generators
        .iter()
        .map(|g| g.monic(order))
        .collect();
    let mut lts: Vec<Monomial> = basis
        .iter()
        .map(|g| g.leading_monomial(order).expect("nonzero").clone())
        .collect();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pending.insert((i, j));
        }
    }
    let mut reductions = 0usize;
    while !pending.is_empty() {
        // normal selection: smallest lcm of leading terms under the order
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = lts[a.0].lcm(&lts[a.1]);
                let lb = lts[b.0].lcm(&lts[b.1]);
                order.compare(&la, &lb).then(a.cmp(b))
            })
            .expect("nonempty");
        pending.remove(&(i, j));
        let lcm = lts[i].lcm(&lts[j]);
        // first criterion: coprime leading terms never produce new elements
        if lts[i].coprime(&lts[j]) {
            continue;
        }
        // chain criterion: an intermediate k whose pairs are both settled
        let chained = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lts[k].divides(&lcm)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chained {
            continue;
        }
        reductions += 1;
        if reductions > pair_limit {
            return Err(GbError::PairLimitExceeded(pair_limit));
        }
        let s = s_polynomial(&basis[i], &basis[j], order)?;
        let (nf, _) = reduce(&s, &basis, order)?;
        if !nf.is_zero() {
            let nf = nf.monic(order);
            let lt = nf.leading_monomial(order).expect("nonzero").clone();
            basis.push(nf);
            lts.push(lt);
            let n = basis.len() - 1;
            for k in 0..n {
                pending.insert((k, n));
            }
        }
    }
    Ok(GroebnerBasis {
        generators: basis,
        order,
        reduced: false,
    })
}

/// Buchberger with the environment-configured pair limit.
pub fn buchberger(gens: &Ideal, order: MonomialOrder) -> Result<GroebnerBasis, GbError> {
    buchberger_limited(gens, order, pair_limit_from_env())
}

/// Minimalizes and inter-reduces a Gröbner basis into the unique reduced
/// basis: monic generators, no term divisible by another leading term,
/// sorted ascending by leading monomial.
pub fn reduce_basis(gb: GroebnerBasis) -> Result<GroebnerBasis, GbError> {
    let order = gb.order;
    let mut gens: Vec<Polynomial> = gb.generators.iter().map(|g| g.monic(order)).collect();
    // minimalize: drop generators whose leading term another one divides
    let lts: Vec<Monomial> = gens
        .iter()
        .map(|g| g.leading_monomial(order).expect("nonzero").clone())
        .collect();
    let mut keep = vec![true; gens.len()];
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            if i != j
                && keep[j]
                && lts[j].divides(&lts[i])
                && (lts[i] != lts[j] || j < i)
            {
                keep[i] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<Polynomial> = gens
        .drain(..)
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();
    // inter-reduce each survivor modulo the others
    for i in 0..minimal.len() {
        let g = minimal[i].clone();
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter_map(|(j, h)| (j != i).then(|| h.clone()))
            .collect();
        let (nf, _) = reduce(&g, &others, order)?;
        if nf.is_zero() {
            return Err(GbError::Internal(
                "minimal basis element reduced to zero".into(),
            ));
        }
        minimal[i] = nf.monic(order);
    }
    // canonical presentation: descending leading monomials
    minimal.sort_by(|a, b| {
        order.compare(
            b.leading_monomial(order).expect("nonzero"),
            a.leading_monomial(order).expect("nonzero"),
        )
    });
    Ok(GroebnerBasis {
        generators: minimal,
        order,
        reduced: true,
    })
}

/// Convenience: Buchberger followed by reduction.
pub fn reduced_groebner_basis(
    gens: &Ideal,
    order: MonomialOrder,
) -> Result<GroebnerBasis, GbError> {
    reduce_basis(buchberger(gens, order)?)
}

/// The unit-ideal criterion: true iff the reduced Gröbner basis is `{1}`.
/// The zero ideal reports false. A nonzero constant generator short-circuits
/// the basis computation.
pub fn is_unit_ideal(gens: &Ideal, order: MonomialOrder) -> Result<bool, GbError> {
    if gens.is_zero() {
        return Ok(false);
    }
    if gens.generators.iter().any(|g| g.is_constant()) {
        return Ok(true);
    }
    let gb = reduced_groebner_basis(gens, order)?;
    Ok(gb.generators.len() == 1 && gb.generators[0].is_one())
}

fn permuted_context(
    ctx: &Arc<VariableContext>,
    perm: &[usize],
) -> Result<Arc<VariableContext>, GbError> {
    VariableContext::new(perm.iter().map(|&i| ctx.name(i).unwrap().to_string()))
        .map_err(|e| GbError::Internal(e.to_string()))
}

fn permute_poly(p: &Polynomial, perm: &[usize], target: &Arc<VariableContext>) -> Polynomial {
    Polynomial::from_terms(
        target,
        p.terms().map(|(m, c)| {
            let exps: Vec<u32> = perm.iter().map(|&i| m.exponent(i)).collect();
            (Monomial::new(exps), c.clone())
        }),
    )
}

/// Generators of the intersection of the ideal with the subring that avoids
/// `drop_vars` (indices into the context). Internally computes a reduced
/// Gröbner basis under a block elimination order with the dropped variables
/// leading, then keeps the generators free of them.
pub fn eliminate(gens: &Ideal, drop_vars: &BTreeSet<usize>) -> Result<Ideal, GbError> {
    let ctx = &gens.ctx;
    for &v in drop_vars {
        if v >= ctx.len() {
            return Err(GbError::Poly(PolyError::UnknownVariable(v)));
        }
    }
    if drop_vars.is_empty() {
        return Ok(gens.clone());
    }
    if drop_vars.len() == ctx.len() {
        return Err(GbError::DropAllVariables);
    }
    if gens.is_zero() {
        return Ok(gens.clone());
    }
    // dropped variables first, kept variables after, both in index order
    let mut perm: Vec<usize> = drop_vars.iter().copied().collect();
    let kept: Vec<usize> = (0..ctx.len()).filter(|i| !drop_vars.contains(i)).collect();
    perm.extend(&kept);
    let split = drop_vars.len();
    let ectx = permuted_context(ctx, &perm)?;
    let lifted = Ideal::new(
        &ectx,
        gens.generators.iter().map(|g| permute_poly(g, &perm, &ectx)),
    )?;
    let gb = reduced_groebner_basis(&lifted, MonomialOrder::Block { split })?;
    // inverse permutation back into the original context
    let mut inv = vec![0usize; perm.len()];
    for (new_i, &old_i) in perm.iter().enumerate() {
        inv[old_i] = new_i;
    }
    let survivors = gb
        .generators
        .iter()
        .filter(|g| {
            g.terms()
                .all(|(m, _)| m.exponents()[..split].iter().all(|&e| e == 0))
        })
        .map(|g| permute_poly(g, &inv, ctx));
    Ideal::new(ctx, survivors)
}

fn fresh_name(ctx: &VariableContext) -> String {
    let mut name = "t".to_string();
    while ctx.index_of(&name).is_some() {
        name.push('_');
    }
    name
}

/// Monic lcm via the elimination ideal `<t f, (1-t) g> ∩ K[x]`.
pub fn lcm(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, GbError> {
    let ctx = f.context();
    if !same_context(ctx, g.context()) {
        return Err(GbError::Poly(PolyError::ContextMismatch));
    }
    if f.is_zero() || g.is_zero() {
        return Ok(Polynomial::zero(ctx));
    }
    let fresh = fresh_name(ctx);
    let mut names = vec![fresh];
    names.extend(ctx.names().iter().cloned());
    let ectx =
        VariableContext::new(names).map_err(|e| GbError::Internal(e.to_string()))?;
    let lift = |p: &Polynomial| {
        Polynomial::from_terms(
            &ectx,
            p.terms().map(|(m, c)| {
                let mut exps = vec![0u32];
                exps.extend_from_slice(m.exponents());
                (Monomial::new(exps), c.clone())
            }),
        )
    };
    let t = Polynomial::variable(&ectx, 0).expect("t exists");
    let one = Polynomial::one(&ectx);
    let tf = t.try_mul(&lift(f))?;
    let tg = (&one - &t).try_mul(&lift(g))?;
    let ideal = Ideal::new(&ectx, [tf, tg])?;
    let intersection = eliminate(&ideal, &BTreeSet::from([0usize]))?;
    let [generator] = intersection.generators() else {
        return Err(GbError::Internal(format!(
            "intersection of two principal ideals gave {} generators",
            intersection.generators().len()
        )));
    };
    // strip the leading zero exponent of the helper variable
    let lowered = Polynomial::from_terms(
        ctx,
        generator.terms().map(|(m, c)| {
            (Monomial::new(m.exponents()[1..].to_vec()), c.clone())
        }),
    );
    Ok(lowered.monic(MonomialOrder::GrevLex))
}

/// Monic gcd, computed as `f*g / lcm(f,g)`. `gcd(f, 0)` is `monic(f)`.
pub fn gcd(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, GbError> {
    let ctx = f.context();
    if !same_context(ctx, g.context()) {
        return Err(GbError::Poly(PolyError::ContextMismatch));
    }
    let order = MonomialOrder::GrevLex;
    if f.is_zero() && g.is_zero() {
        return Err(GbError::ZeroGcd);
    }
    if f.is_zero() {
        return Ok(g.monic(order));
    }
    if g.is_zero() {
        return Ok(f.monic(order));
    }
    if f.is_constant() || g.is_constant() {
        return Ok(Polynomial::one(ctx));
    }
    // divisibility probes settle the common cases without elimination
    if g.divide_exact(f)?.is_some() {
        return Ok(f.monic(order));
    }
    if f.divide_exact(g)?.is_some() {
        return Ok(g.monic(order));
    }
    let l = lcm(f, g)?;
    let prod = f.try_mul(g)?;
    let Some(h) = prod.divide_exact(&l)? else {
        return Err(GbError::Internal("lcm does not divide the product".into()));
    };
    Ok(h.monic(order))
}

/// Left fold of `gcd` over the family, skipping zeros. Errors when every
/// element is zero. Short-circuits once the gcd collapses to 1.
pub fn gcd_many(polys: &[Polynomial]) -> Result<Polynomial, GbError> {
    let mut acc: Option<Polynomial> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.monic(MonomialOrder::GrevLex),
            Some(h) => {
                if h.is_one() {
                    return Ok(h);
                }
                gcd(&h, p)?
            }
        });
    }
    acc.ok_or(GbError::ZeroGcd)
}
