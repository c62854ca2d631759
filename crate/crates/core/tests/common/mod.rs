//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use rand::Rng;

use qwlsmith::io;
use qwlsmith::rational::{rat, Rational};
use qwlsmith::{Monomial, PolyMatrix, Polynomial, VariableContext};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> PolyMatrix {
    let bytes = std::fs::read(fixture_path(name))
        .unwrap_or_else(|e| panic!("fixture {name}: {e}"));
    io::read_matrix(&bytes).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn parse(ctx: &Arc<VariableContext>, src: &str) -> Polynomial {
    io::parse_poly(src, ctx).unwrap()
}

/// Random sparse polynomial: up to `max_terms` terms, exponents below
/// `max_exp` per variable, integer coefficients in `[-bound, bound]`.
pub fn rand_poly(
    rng: &mut impl Rng,
    ctx: &Arc<VariableContext>,
    max_terms: usize,
    max_exp: u32,
    bound: i64,
) -> Polynomial {
    let nterms = rng.gen_range(0..=max_terms);
    let terms = (0..nterms).map(|_| {
        let exps: Vec<u32> = (0..ctx.len()).map(|_| rng.gen_range(0..=max_exp)).collect();
        let coeff = rat(rng.gen_range(-bound..=bound), 1);
        (Monomial::new(exps), coeff)
    });
    Polynomial::from_terms(ctx, terms)
}

pub fn rand_nonzero_poly(
    rng: &mut impl Rng,
    ctx: &Arc<VariableContext>,
    max_terms: usize,
    max_exp: u32,
    bound: i64,
) -> Polynomial {
    loop {
        let p = rand_poly(rng, ctx, max_terms.max(1), max_exp, bound);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn rand_point(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
        .collect()
}

/// Determinant by first-row Laplace expansion. Kept deliberately naive and
/// separate from the library so it can serve as an independent oracle.
pub fn oracle_det(m: &PolyMatrix) -> Polynomial {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    if n == 1 {
        return m.entry(0, 0).clone();
    }
    let ctx = m.context();
    let mut acc = Polynomial::zero(ctx);
    for c in 0..n {
        let a = m.entry(0, c);
        if a.is_zero() {
            continue;
        }
        let sub_entries: Vec<Polynomial> = (1..n)
            .flat_map(|r| (0..n).filter(|&cc| cc != c).map(move |cc| m.entry(r, cc).clone()))
            .collect();
        let sub = PolyMatrix::new(ctx, n - 1, n - 1, sub_entries).unwrap();
        let term = a.try_mul(&oracle_det(&sub)).unwrap();
        acc = if c % 2 == 0 {
            acc.try_add(&term).unwrap()
        } else {
            acc.try_sub(&term).unwrap()
        };
    }
    acc
}

/// Random elementary unimodular matrix: a swap, a nonzero constant row
/// scaling, or the addition of a polynomial multiple of one row to another.
pub fn rand_elementary(rng: &mut impl Rng, ctx: &Arc<VariableContext>, n: usize) -> PolyMatrix {
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n);
    while j == i {
        j = rng.gen_range(0..n);
    }
    match rng.gen_range(0..3) {
        0 => PolyMatrix::elementary_swap(ctx, n, i, j),
        1 => {
            let mut c = rat(rng.gen_range(-4i64..=4), 1);
            if c == rat(0, 1) {
                c = rat(1, 1);
            }
            PolyMatrix::elementary_scale(ctx, n, i, &c)
        }
        _ => {
            let p = rand_poly(rng, ctx, 2, 1, 3);
            PolyMatrix::elementary_add_multiple(ctx, n, i, j, &p)
        }
    }
}

/// Product of `k` random elementary matrices.
pub fn rand_unimodular(
    rng: &mut impl Rng,
    ctx: &Arc<VariableContext>,
    n: usize,
    k: usize,
) -> PolyMatrix {
    let mut acc = PolyMatrix::identity(ctx, n);
    for _ in 0..k {
        acc = acc.matmul(&rand_elementary(rng, ctx, n)).unwrap();
    }
    acc
}

pub fn rand_matrix(
    rng: &mut impl Rng,
    ctx: &Arc<VariableContext>,
    rows: usize,
    cols: usize,
    max_terms: usize,
    max_exp: u32,
    bound: i64,
) -> PolyMatrix {
    let entries = (0..rows * cols)
        .map(|_| rand_poly(rng, ctx, max_terms, max_exp, bound))
        .collect();
    PolyMatrix::new(ctx, rows, cols, entries).unwrap()
}
