//! Quasi weakly linear shape detection, the variable-change automorphism,
//! Smith-form construction, the equivalence decision, and verification of
//! unimodular factorization witnesses.
//!
//! The decision criterion: a matrix of normal rank `r` whose maximal
//! determinantal divisor factors as
//! `unit * (x1 - f1(x2..xn))^p * (x2 - f2(x3..xn))^q` is equivalent to its
//! Smith normal form iff every `J_k`, `k = 1..r`, is the unit ideal. Inputs
//! whose `d_r` is not of that shape are answered `OutOfScope`: the criterion
//! says nothing there, and binary matrices inequivalent to their Smith form
//! exist.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::context::{same_context, VariableContext};
use crate::matrix::{MatrixError, MinorReport, PolyMatrix};
use crate::poly::{PolyError, Polynomial};
use crate::rational::Rational;

#[derive(Debug)]
pub enum SmithError {
    ZeroPolynomial,
    ZeroMatrix,
    /// `f1` must avoid the first variable; `f2` the first two.
    ShapePrecondition(String),
    /// A `d_k` is not a product of the two shape factors.
    NotShapeProduct { k: usize },
    /// Exponent differences failed to be non-decreasing, which would break
    /// the divisibility chain of the Smith diagonal.
    NonMonotone { k: usize },
    Dimension(String),
    Matrix(MatrixError),
    Poly(PolyError),
}

impl fmt::Display for SmithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmithError::ZeroPolynomial => write!(f, "the zero polynomial has no shape"),
            SmithError::ZeroMatrix => write!(f, "the zero matrix has no Smith decision"),
            SmithError::ShapePrecondition(msg) => write!(f, "shape precondition violated: {msg}"),
            SmithError::NotShapeProduct { k } => {
                write!(f, "d_{k} is not a product of the two shape factors")
            }
            SmithError::NonMonotone { k } => {
                write!(f, "exponent differences decrease at k = {k}")
            }
            SmithError::Dimension(msg) => write!(f, "dimension mismatch: {msg}"),
            SmithError::Matrix(e) => e.fmt(f),
            SmithError::Poly(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for SmithError {}

impl From<MatrixError> for SmithError {
    fn from(e: MatrixError) -> Self {
        SmithError::Matrix(e)
    }
}

impl From<PolyError> for SmithError {
    fn from(e: PolyError) -> Self {
        SmithError::Poly(e)
    }
}

/// The factored shape `unit * (x1 - f1)^p * (x2 - f2)^q`. A zero exponent
/// means the corresponding factor is absent (the weakly linear and constant
/// degenerate cases).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QwlShape {
    pub f1: Polynomial,
    pub p: u32,
    pub f2: Polynomial,
    pub q: u32,
    pub unit: Rational,
}

impl QwlShape {
    /// `x1 - f1` when the first factor is present.
    pub fn factor1(&self) -> Option<Polynomial> {
        (self.p > 0).then(|| {
            let ctx = self.f1.context();
            let x1 = Polynomial::variable(ctx, 0).expect("p > 0 needs x1");
            &x1 - &self.f1
        })
    }

    /// `x2 - f2` when the second factor is present.
    pub fn factor2(&self) -> Option<Polynomial> {
        (self.q > 0).then(|| {
            let ctx = self.f2.context();
            let x2 = Polynomial::variable(ctx, 1).expect("q > 0 needs x2");
            &x2 - &self.f2
        })
    }

    /// `unit * (x1 - f1)^p * (x2 - f2)^q`.
    pub fn reconstruct(&self, ctx: &Arc<VariableContext>) -> Polynomial {
        let mut acc = Polynomial::constant(ctx, self.unit.clone());
        if let Some(e1) = self.factor1() {
            acc = acc.try_mul(&e1.pow(self.p)).expect("same context");
        }
        if let Some(e2) = self.factor2() {
            acc = acc.try_mul(&e2.pow(self.q)).expect("same context");
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
    OutOfScope,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equivalent => write!(f, "Equivalent"),
            Verdict::NotEquivalent => write!(f, "NotEquivalent"),
            Verdict::OutOfScope => write!(f, "OutOfScope"),
        }
    }
}

/// Outcome of the decision pipeline. `reports` covers `k = 1..=rank` when
/// the shape is recognized; on `OutOfScope` only the maximal order's report
/// (the one that produced `d_r`) is retained. `smith_diagonal` is filled
/// exactly on `Equivalent`.
#[derive(Debug, Clone)]
pub struct SmithDecision {
    pub rank: usize,
    pub reports: Vec<MinorReport>,
    pub shape: Option<QwlShape>,
    pub verdict: Verdict,
    pub smith_diagonal: Vec<Polynomial>,
}

/// Witness of `F = U * D * V` with `U`, `V` unimodular.
#[derive(Debug, Clone)]
pub struct FactorizationWitness {
    pub u: PolyMatrix,
    pub d: PolyMatrix,
    pub v: PolyMatrix,
}

/// Tries to factor `d` as `unit * (x1 - f1(x2..xn))^p * (x2 - f2(x3..xn))^q`.
///
/// The leading `x1`-coefficient of such a product is `unit * (x2 - f2)^q`
/// and the subleading one is `-p * f1` times that, so both `f1` and `f2`
/// fall out of coefficient probes; every candidate is then verified by exact
/// reconstruction, so a `Some` answer is a proof.
pub fn detect_qwl(d: &Polynomial) -> Result<Option<QwlShape>, SmithError> {
    if d.is_zero() {
        return Err(SmithError::ZeroPolynomial);
    }
    let ctx = d.context();
    let n = ctx.len();
    let zero = Polynomial::zero(ctx);

    // stage 1: peel (x1 - f1)^p, leaving L free of x1
    let (f1, p, stage1_rest) = if n >= 1 && d.degree_in(0)? > 0 {
        let p = d.degree_in(0)? as u32;
        let lead = d.coefficient_in(0, p)?;
        let sub = d.coefficient_in(0, p - 1)?;
        let scaled_lead = lead.scale(&Rational::from_integer(p.into()));
        let Some(f1) = sub.neg().divide_exact(&scaled_lead)? else {
            return Ok(None);
        };
        let x1 = Polynomial::variable(ctx, 0)?;
        let candidate = lead.try_mul(&(&x1 - &f1).pow(p))?;
        if &candidate != d {
            return Ok(None);
        }
        (f1, p, lead)
    } else {
        (zero.clone(), 0, d.clone())
    };

    // stage 2: peel unit * (x2 - f2)^q from the x1-free remainder
    let (f2, q, unit) = if n >= 2 && stage1_rest.degree_in(1)? > 0 {
        let q = stage1_rest.degree_in(1)? as u32;
        let lead = stage1_rest.coefficient_in(1, q)?;
        let Some(unit) = lead.constant_value() else {
            return Ok(None);
        };
        let sub = stage1_rest.coefficient_in(1, q - 1)?;
        let scale = -(Rational::one() / (&unit * Rational::from_integer(q.into())));
        let f2 = sub.scale(&scale);
        let x2 = Polynomial::variable(ctx, 1)?;
        let candidate = (&x2 - &f2).pow(q).scale(&unit);
        if candidate != stage1_rest {
            return Ok(None);
        }
        (f2, q, unit)
    } else {
        match stage1_rest.constant_value() {
            Some(u) => (zero, 0, u),
            // a remainder in x3..xn alone cannot be absorbed by either factor
            None => return Ok(None),
        }
    };

    Ok(Some(QwlShape { f1, p, f2, q, unit }))
}

fn check_phi_inputs(
    ctx: &Arc<VariableContext>,
    f1: &Polynomial,
    f2: &Polynomial,
) -> Result<(), SmithError> {
    for g in [f1, f2] {
        if !same_context(ctx, g.context()) {
            return Err(SmithError::Poly(PolyError::ContextMismatch));
        }
    }
    if !ctx.is_empty() && f1.degree_in(0)? > 0 {
        return Err(SmithError::ShapePrecondition("f1 must not involve x1".into()));
    }
    if ctx.is_empty() && !f1.is_zero() {
        return Err(SmithError::ShapePrecondition("f1 needs a variable context".into()));
    }
    if ctx.len() >= 2 {
        if f2.degree_in(0)? > 0 || f2.degree_in(1)? > 0 {
            return Err(SmithError::ShapePrecondition(
                "f2 must not involve x1 or x2".into(),
            ));
        }
    } else if !f2.is_zero() {
        return Err(SmithError::ShapePrecondition(
            "f2 requires at least two variables".into(),
        ));
    }
    Ok(())
}

/// The automorphism `x1 -> x1 - f1, x2 -> x2 - f2` (simultaneous), identity
/// on the remaining variables.
pub fn phi(g: &Polynomial, f1: &Polynomial, f2: &Polynomial) -> Result<Polynomial, SmithError> {
    let ctx = g.context();
    check_phi_inputs(ctx, f1, f2)?;
    let mut map = BTreeMap::new();
    if !ctx.is_empty() {
        let x1 = Polynomial::variable(ctx, 0)?;
        map.insert(0, &x1 - f1);
    }
    if ctx.len() >= 2 {
        let x2 = Polynomial::variable(ctx, 1)?;
        map.insert(1, &x2 - f2);
    }
    Ok(g.substitute(&map)?)
}

/// Inverse of [`phi`]: `x2 -> x2 + f2`, and `x1 -> x1 + f1` with `f1`
/// evaluated at the shifted `x2`, so the round trip is the identity.
pub fn phi_inverse(
    g: &Polynomial,
    f1: &Polynomial,
    f2: &Polynomial,
) -> Result<Polynomial, SmithError> {
    let ctx = g.context();
    check_phi_inputs(ctx, f1, f2)?;
    let mut map = BTreeMap::new();
    if ctx.len() >= 2 {
        let x2 = Polynomial::variable(ctx, 1)?;
        let shifted_x2 = &x2 + f2;
        let f1_shifted = f1.substitute(&BTreeMap::from([(1usize, shifted_x2.clone())]))?;
        let x1 = Polynomial::variable(ctx, 0)?;
        map.insert(0, &x1 + &f1_shifted);
        map.insert(1, shifted_x2);
    } else if !ctx.is_empty() {
        let x1 = Polynomial::variable(ctx, 0)?;
        map.insert(0, &x1 + f1);
    }
    Ok(g.substitute(&map)?)
}

/// Entrywise [`phi`].
pub fn phi_matrix(m: &PolyMatrix, shape: &QwlShape) -> Result<PolyMatrix, SmithError> {
    map_entries(m, |e| phi(e, &shape.f1, &shape.f2))
}

/// Entrywise [`phi_inverse`].
pub fn phi_inverse_matrix(m: &PolyMatrix, shape: &QwlShape) -> Result<PolyMatrix, SmithError> {
    map_entries(m, |e| phi_inverse(e, &shape.f1, &shape.f2))
}

fn map_entries(
    m: &PolyMatrix,
    f: impl Fn(&Polynomial) -> Result<Polynomial, SmithError>,
) -> Result<PolyMatrix, SmithError> {
    let entries = m
        .entries()
        .iter()
        .map(&f)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolyMatrix::new(m.context(), m.rows(), m.cols(), entries)?)
}

/// Splits a monic `d_k` as `c * e1^p * e2^q` by repeated exact division.
fn factor_exponents(
    d: &Polynomial,
    e1: Option<&Polynomial>,
    e2: Option<&Polynomial>,
) -> Option<(u32, u32, Rational)> {
    let mut rest = d.clone();
    let mut count = [0u32; 2];
    for (slot, factor) in [e1, e2].into_iter().enumerate() {
        if let Some(f) = factor {
            while let Some(quot) = rest.divide_exact(f).ok()? {
                rest = quot;
                count[slot] += 1;
            }
        }
    }
    rest.constant_value().map(|c| (count[0], count[1], c))
}

/// Builds the Smith diagonal from the `d_k` chain: entry `k` is
/// `(c_k/c_{k-1}) * e1^(p_k - p_{k-1}) * e2^(q_k - q_{k-1})`, so the product
/// of the first `k` entries reproduces `d_k` exactly.
pub fn smith_form(
    reports: &[MinorReport],
    shape: &QwlShape,
) -> Result<Vec<Polynomial>, SmithError> {
    let e1 = shape.factor1();
    let e2 = shape.factor2();
    let mut diagonal = Vec::with_capacity(reports.len());
    let mut prev = (0u32, 0u32);
    let mut prev_diff: (i64, i64) = (0, 0);
    let mut prev_c = Rational::one();
    for report in reports {
        let ctx = report.d.context();
        let Some((pk, qk, ck)) = factor_exponents(&report.d, e1.as_ref(), e2.as_ref()) else {
            return Err(SmithError::NotShapeProduct { k: report.k });
        };
        let rk = i64::from(pk) - i64::from(prev.0);
        let sk = i64::from(qk) - i64::from(prev.1);
        if rk < prev_diff.0 || sk < prev_diff.1 || rk < 0 || sk < 0 {
            return Err(SmithError::NonMonotone { k: report.k });
        }
        let mut entry = Polynomial::constant(ctx, &ck / &prev_c);
        if let Some(e1) = &e1 {
            entry = entry.try_mul(&e1.pow(rk as u32))?;
        }
        if let Some(e2) = &e2 {
            entry = entry.try_mul(&e2.pow(sk as u32))?;
        }
        diagonal.push(entry);
        prev = (pk, qk);
        prev_diff = (rk, sk);
        prev_c = ck;
    }
    Ok(diagonal)
}

/// The full decision pipeline.
pub fn decide(m: &PolyMatrix) -> Result<SmithDecision, SmithError> {
    let rank = m.normal_rank();
    if rank == 0 {
        return Err(SmithError::ZeroMatrix);
    }
    let top = m.minor_report(rank)?;
    let Some(shape) = detect_qwl(&top.d)? else {
        return Ok(SmithDecision {
            rank,
            reports: vec![top],
            shape: None,
            verdict: Verdict::OutOfScope,
            smith_diagonal: Vec::new(),
        });
    };
    let mut reports = Vec::with_capacity(rank);
    for k in 1..rank {
        reports.push(m.minor_report(k)?);
    }
    reports.push(top);
    let all_unit = reports.iter().all(|r| r.unit_ideal);
    if !all_unit {
        return Ok(SmithDecision {
            rank,
            reports,
            shape: Some(shape),
            verdict: Verdict::NotEquivalent,
            smith_diagonal: Vec::new(),
        });
    }
    match smith_form(&reports, &shape) {
        Ok(diagonal) => Ok(SmithDecision {
            rank,
            reports,
            shape: Some(shape),
            verdict: Verdict::Equivalent,
            smith_diagonal: diagonal,
        }),
        // d_r has the shape but some d_k escapes it: outside the theorems
        Err(SmithError::NotShapeProduct { .. }) => Ok(SmithDecision {
            rank,
            reports,
            shape: Some(shape),
            verdict: Verdict::OutOfScope,
            smith_diagonal: Vec::new(),
        }),
        Err(e) => Err(e),
    }
}

/// True iff `U` and `V` are unimodular and `U * D * V == F` exactly.
pub fn verify_witness(m: &PolyMatrix, w: &FactorizationWitness) -> Result<bool, SmithError> {
    let (l, cols) = (m.rows(), m.cols());
    if w.u.rows() != l || w.u.cols() != l {
        return Err(SmithError::Dimension(format!(
            "U must be {l}x{l}, got {}x{}",
            w.u.rows(),
            w.u.cols()
        )));
    }
    if w.d.rows() != l || w.d.cols() != cols {
        return Err(SmithError::Dimension(format!(
            "D must be {l}x{cols}, got {}x{}",
            w.d.rows(),
            w.d.cols()
        )));
    }
    if w.v.rows() != cols || w.v.cols() != cols {
        return Err(SmithError::Dimension(format!(
            "V must be {cols}x{cols}, got {}x{}",
            w.v.rows(),
            w.v.cols()
        )));
    }
    if !w.u.is_unimodular()? || !w.v.is_unimodular()? {
        return Ok(false);
    }
    let product = w.u.matmul(&w.d)?.matmul(&w.v)?;
    Ok(&product == m)
}
