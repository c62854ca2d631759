//! Polynomial matrices: minors of every order, determinantal divisors `d_k`,
//! reduced minors and their ideals `J_k`, normal rank, determinants,
//! unimodularity, and the zero-left-prime test.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::context::{same_context, VariableContext};
use crate::groebner::{self, GbError, Ideal};
use crate::monomial::MonomialOrder;
use crate::poly::{PolyError, Polynomial};
use crate::rational::Rational;

#[derive(Debug)]
pub enum MatrixError {
    NonSquare { rows: usize, cols: usize },
    DimensionMismatch(String),
    ContextMismatch,
    OrderOutOfRange { k: usize, max: usize },
    /// Every k×k minor vanishes: k exceeds the normal rank.
    RankExceeded { k: usize },
    WideMatrix { rows: usize, cols: usize },
    Poly(PolyError),
    Gb(GbError),
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::NonSquare { rows, cols } => {
                write!(f, "operation needs a square matrix, got {rows}x{cols}")
            }
            MatrixError::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            MatrixError::ContextMismatch => write!(f, "matrices come from different contexts"),
            MatrixError::OrderOutOfRange { k, max } => {
                write!(f, "minor order {k} out of range 1..={max}")
            }
            MatrixError::RankExceeded { k } => {
                write!(f, "all {k}x{k} minors vanish: order exceeds the normal rank")
            }
            MatrixError::WideMatrix { rows, cols } => {
                write!(f, "zero-left-prime needs rows <= cols, got {rows}x{cols}")
            }
            MatrixError::Poly(e) => e.fmt(f),
            MatrixError::Gb(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for MatrixError {}

impl From<PolyError> for MatrixError {
    fn from(e: PolyError) -> Self {
        MatrixError::Poly(e)
    }
}

impl From<GbError> for MatrixError {
    fn from(e: GbError) -> Self {
        MatrixError::Gb(e)
    }
}

/// Row-major grid of polynomials over one shared context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    ctx: Arc<VariableContext>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn new(
        ctx: &Arc<VariableContext>,
        rows: usize,
        cols: usize,
        entries: Vec<Polynomial>,
    ) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::DimensionMismatch(
                "dimensions must be positive".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if !entries.iter().all(|e| same_context(ctx, e.context())) {
            return Err(MatrixError::ContextMismatch);
        }
        Ok(PolyMatrix {
            ctx: Arc::clone(ctx),
            rows,
            cols,
            entries,
        })
    }

    pub fn identity(ctx: &Arc<VariableContext>, n: usize) -> Self {
        let mut entries = vec![Polynomial::zero(ctx); n * n];
        for i in 0..n {
            entries[i * n + i] = Polynomial::one(ctx);
        }
        PolyMatrix {
            ctx: Arc::clone(ctx),
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn zero(ctx: &Arc<VariableContext>, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            ctx: Arc::clone(ctx),
            rows,
            cols,
            entries: vec![Polynomial::zero(ctx); rows * cols],
        }
    }

    pub fn diagonal(ctx: &Arc<VariableContext>, diag: &[Polynomial]) -> Result<Self, MatrixError> {
        let n = diag.len();
        let mut m = Self::zero(ctx, n, n);
        for (i, d) in diag.iter().enumerate() {
            if !same_context(ctx, d.context()) {
                return Err(MatrixError::ContextMismatch);
            }
            m.entries[i * n + i] = d.clone();
        }
        Ok(m)
    }

    /// Identity with rows `i` and `j` swapped.
    pub fn elementary_swap(ctx: &Arc<VariableContext>, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::identity(ctx, n);
        m.entries.swap(i * n + i, i * n + j);
        m.entries.swap(j * n + j, j * n + i);
        m
    }

    /// Identity with row `i` scaled by a nonzero constant.
    pub fn elementary_scale(ctx: &Arc<VariableContext>, n: usize, i: usize, c: &Rational) -> Self {
        let mut m = Self::identity(ctx, n);
        m.entries[i * n + i] = Polynomial::constant(ctx, c.clone());
        m
    }

    /// Identity with `p` placed at `(i, j)`: left-multiplication adds `p` times
    /// row `j` to row `i`.
    pub fn elementary_add_multiple(
        ctx: &Arc<VariableContext>,
        n: usize,
        i: usize,
        j: usize,
        p: &Polynomial,
    ) -> Self {
        assert_ne!(i, j);
        let mut m = Self::identity(ctx, n);
        m.entries[i * n + j] = p.clone();
        m
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.entry(r, c).clone());
            }
        }
        PolyMatrix {
            ctx: Arc::clone(&self.ctx),
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn matmul(&self, other: &PolyMatrix) -> Result<PolyMatrix, MatrixError> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(MatrixError::ContextMismatch);
        }
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Polynomial::zero(&self.ctx);
                for k in 0..self.cols {
                    acc = acc.try_add(&self.entry(r, k).try_mul(other.entry(k, c))?)?;
                }
                entries.push(acc);
            }
        }
        PolyMatrix::new(&self.ctx, self.rows, other.cols, entries)
    }

    /// Entrywise substitution of one variable.
    pub fn specialize(&self, var: usize, value: &Polynomial) -> Result<PolyMatrix, MatrixError> {
        if !same_context(&self.ctx, value.context()) {
            return Err(MatrixError::ContextMismatch);
        }
        let assignments = BTreeMap::from([(var, value.clone())]);
        let entries = self
            .entries
            .iter()
            .map(|e| e.substitute(&assignments))
            .collect::<Result<Vec<_>, _>>()?;
        PolyMatrix::new(&self.ctx, self.rows, self.cols, entries)
    }

    /// Entrywise simultaneous substitution.
    pub fn substitute(
        &self,
        assignments: &BTreeMap<usize, Polynomial>,
    ) -> Result<PolyMatrix, MatrixError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.substitute(assignments))
            .collect::<Result<Vec<_>, _>>()?;
        PolyMatrix::new(&self.ctx, self.rows, self.cols, entries)
    }

    fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let entries = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.entry(r, c).clone()))
            .collect();
        PolyMatrix {
            ctx: Arc::clone(&self.ctx),
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    fn zero_fraction(&self) -> f64 {
        let zeros = self.entries.iter().filter(|e| e.is_zero()).count();
        zeros as f64 / self.entries.len() as f64
    }

    /// Exact determinant. Fraction-free Bareiss elimination, falling back to
    /// cofactor expansion when the matrix is mostly zeros (where expansion
    /// skips whole branches).
    pub fn determinant(&self) -> Result<Polynomial, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows <= 2 || self.zero_fraction() >= 0.5 {
            Ok(self.det_cofactor())
        } else {
            self.det_bareiss()
        }
    }

    /// Fraction-free elimination; every interior division is exact.
    pub fn det_bareiss(&self) -> Result<Polynomial, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m: Vec<Vec<Polynomial>> = (0..n)
            .map(|r| (0..n).map(|c| self.entry(r, c).clone()).collect())
            .collect();
        let mut sign = false;
        let mut prev = Polynomial::one(&self.ctx);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = !sign;
                    }
                    None => return Ok(Polynomial::zero(&self.ctx)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[i][j]
                        .try_mul(&m[k][k])?
                        .try_sub(&m[i][k].try_mul(&m[k][j])?)?;
                    m[i][j] = num
                        .divide_exact(&prev)?
                        .expect("Bareiss interior division is exact");
                }
                m[i][k] = Polynomial::zero(&self.ctx);
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if sign { det.neg() } else { det })
    }

    /// Cofactor expansion along the row with the most zeros.
    pub fn det_cofactor(&self) -> Polynomial {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 1 {
            return self.entry(0, 0).clone();
        }
        let best_row = (0..n)
            .max_by_key(|&r| (0..n).filter(|&c| self.entry(r, c).is_zero()).count())
            .unwrap();
        let rest_rows: Vec<usize> = (0..n).filter(|&r| r != best_row).collect();
        let mut acc = Polynomial::zero(&self.ctx);
        for c in 0..n {
            let a = self.entry(best_row, c);
            if a.is_zero() {
                continue;
            }
            let rest_cols: Vec<usize> = (0..n).filter(|&cc| cc != c).collect();
            let minor = self.submatrix(&rest_rows, &rest_cols).det_cofactor();
            let signed = if (best_row + c) % 2 == 0 {
                a.try_mul(&minor).expect("same context")
            } else {
                a.try_mul(&minor).expect("same context").neg()
            };
            acc = acc.try_add(&signed).expect("same context");
        }
        acc
    }

    /// All k×k minors, ordered lexicographically by (row subset, column
    /// subset). Deterministic.
    pub fn minors(&self, k: usize) -> Result<Vec<Polynomial>, MatrixError> {
        let max = self.rows.min(self.cols);
        if k == 0 || k > max {
            return Err(MatrixError::OrderOutOfRange { k, max });
        }
        let mut out = Vec::new();
        for rows in (0..self.rows).combinations(k) {
            for cols in (0..self.cols).combinations(k) {
                let sub = self.submatrix(&rows, &cols);
                out.push(sub.determinant()?);
            }
        }
        Ok(out)
    }

    /// Largest k with a nonzero k×k minor; 0 for the zero matrix. Searches
    /// downward and exits on the first nonzero determinant.
    pub fn normal_rank(&self) -> usize {
        let max = self.rows.min(self.cols);
        for k in (1..=max).rev() {
            for rows in (0..self.rows).combinations(k) {
                for cols in (0..self.cols).combinations(k) {
                    let sub = self.submatrix(&rows, &cols);
                    let det = sub.determinant().expect("square submatrix");
                    if !det.is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    /// Square with a nonzero constant determinant.
    pub fn is_unimodular(&self) -> Result<bool, MatrixError> {
        let det = self.determinant()?;
        Ok(det.is_constant() && !det.is_zero())
    }

    /// Zero left prime: the maximal-order (rows×rows) minors generate the
    /// unit ideal. Requires rows <= cols.
    pub fn is_zlp(&self) -> Result<bool, MatrixError> {
        if self.rows > self.cols {
            return Err(MatrixError::WideMatrix {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let maximal = self.minors(self.rows)?;
        let ideal = Ideal::new(&self.ctx, maximal)?;
        Ok(groebner::is_unit_ideal(&ideal, MonomialOrder::GrevLex)?)
    }

    /// Per-order record: minors, their monic gcd `d_k`, reduced minors, and
    /// the unit-ideal verdict for `J_k`.
    pub fn minor_report(&self, k: usize) -> Result<MinorReport, MatrixError> {
        let minors = self.minors(k)?;
        if minors.iter().all(|m| m.is_zero()) {
            return Err(MatrixError::RankExceeded { k });
        }
        let d = groebner::gcd_many(&minors)?;
        let reduced: Vec<Polynomial> = minors
            .iter()
            .map(|m| {
                if m.is_zero() {
                    Ok(Polynomial::zero(&self.ctx))
                } else {
                    m.divide_exact(&d)?.ok_or_else(|| {
                        MatrixError::Gb(GbError::Internal(
                            "gcd does not divide one of the minors".into(),
                        ))
                    })
                }
            })
            .collect::<Result<_, MatrixError>>()?;
        let ideal = Ideal::new(&self.ctx, reduced.iter().cloned())?;
        let unit_ideal = groebner::is_unit_ideal(&ideal, MonomialOrder::GrevLex)?;
        Ok(MinorReport {
            k,
            minors,
            d,
            reduced_minors: reduced,
            unit_ideal,
        })
    }
}

/// Evidence for one minor order `k`.
///
/// `minors` holds all `C(l,k)*C(m,k)` determinants in enumeration order and
/// `reduced_minors` is the entrywise exact quotient by `d` (zeros stay
/// zero), so `minors[i] == d * reduced_minors[i]` for every index. The ideal
/// `J_k` is generated by the nonzero reduced minors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorReport {
    pub k: usize,
    pub minors: Vec<Polynomial>,
    /// Monic gcd of the nonzero minors.
    pub d: Polynomial,
    pub reduced_minors: Vec<Polynomial>,
    pub unit_ideal: bool,
}
