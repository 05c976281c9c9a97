use std::str::FromStr;

use dashu_float::FBig;
use gkm_core::algebra::{monomials, restrict_mod_form, HomogPolynomial, LinearForm, Rational, RationalMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn arb_form(n: usize) -> impl Strategy<Value = LinearForm> {
    prop::collection::vec(-4i64..=4, n)
        .prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
        .prop_map(LinearForm::new)
}

fn arb_poly(n: usize, k: usize) -> impl Strategy<Value = HomogPolynomial> {
    let ms = monomials(n, k);
    prop::collection::vec((-5i64..=5, 1i64..=3), ms.len()).prop_map(move |coeffs| {
        HomogPolynomial::from_terms(
            n,
            k,
            ms.iter().cloned().zip(coeffs.into_iter().map(|(a, b)| Rational::new(a.into(), b.into()))),
        )
    })
}

proptest! {
    #[test]
    fn multiples_of_alpha_restrict_to_zero(
        (alpha, p) in (1usize..=4).prop_flat_map(|n| (arb_form(n), arb_poly(n, 2)))
    ) {
        let product = alpha.to_polynomial().mul(&p);
        prop_assert!(restrict_mod_form(&product, &alpha).unwrap().is_zero());
    }

    #[test]
    fn restriction_is_linear(
        (alpha, p, r) in (1usize..=4).prop_flat_map(|n| (arb_form(n), arb_poly(n, 3), arb_poly(n, 3))),
        a in -6i64..=6,
        b in 1i64..=5,
    ) {
        let a = Rational::new(a.into(), b.into());
        let lhs = restrict_mod_form(&p.scale(&a).add(&r), &alpha).unwrap();
        let rhs = restrict_mod_form(&p, &alpha).unwrap().scale(&a).add(&restrict_mod_form(&r, &alpha).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn restriction_agrees_with_evaluation_on_hyperplane(
        (alpha, p) in (2usize..=4).prop_flat_map(|n| (arb_form(n), arb_poly(n, 2))),
        point in prop::collection::vec(-9i64..=9, 3),
    ) {
        // Build a point on α = 0 by solving for the pivot coordinate.
        let n = alpha.rank();
        let pivot = alpha.pivot().unwrap();
        let free: Vec<Rational> = (0..n - 1).map(|i| q(point[i % point.len()])).collect();
        let mut full = Vec::with_capacity(n);
        let mut it = free.iter();
        for i in 0..n {
            if i == pivot {
                full.push(Rational::zero());
            } else {
                full.push(it.next().unwrap().clone());
            }
        }
        let mut s = Rational::zero();
        for (i, c) in alpha.coefficients().iter().enumerate() {
            if i != pivot {
                s += q(*c) * &full[i];
            }
        }
        full[pivot] = -s / q(alpha.coefficients()[pivot]);
        let restricted = restrict_mod_form(&p, &alpha).unwrap();
        prop_assert_eq!(p.evaluate(&full), restricted.evaluate(&free));
    }
}

/// Dense Gauss-Jordan over ℚ that walks columns from last to first: an
/// elimination order unrelated to the sparse kernel's.
fn reverse_order_rank(rows: &[Vec<Rational>], cols: usize) -> usize {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut rank = 0;
    for col in (0..cols).rev() {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, p);
        let pivot_row = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = &row[col] / &pivot_row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn kernel_plus_rank_matches_second_elimination() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..60 {
        let rows = rng.gen_range(0..=50);
        let cols = rng.gen_range(1..=50);
        // Low-rank products mixed with sparse noise exercise deficient ranks.
        let inner = rng.gen_range(1..=cols.max(1));
        let left: Vec<Vec<i64>> = (0..rows).map(|_| (0..inner).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let right: Vec<Vec<i64>> = (0..inner).map(|_| (0..cols).map(|_| if rng.gen_bool(0.3) { rng.gen_range(-4..=4) } else { 0 }).collect()).collect();
        let dense: Vec<Vec<Rational>> = (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|j| {
                        let v: i64 = (0..inner).map(|t| left[i][t] * right[t][j]).sum();
                        Rational::new(v.into(), BigInt::from(1 + (i + j) as i64 % 3))
                    })
                    .collect()
            })
            .collect();
        let m = if rows == 0 { RationalMatrix::new(0, cols) } else { RationalMatrix::from_dense(&dense) };
        let kernel = m.kernel();
        let oracle = if rows == 0 { 0 } else { reverse_order_rank(&dense, cols) };
        assert_eq!(kernel.rank, oracle, "case {case}");
        assert_eq!(kernel.dim + oracle, cols, "case {case}");
        for v in &kernel.basis {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero), "case {case}: basis vector not in kernel");
            assert!(v.iter().find(|x| !x.is_zero()).unwrap().is_one());
        }
    }
}

#[derive(Clone, Debug)]
enum Expr {
    Leaf(i64, i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return Expr::Leaf(rng.gen_range(-1000..=1000), rng.gen_range(1..=97));
    }
    let a = Box::new(random_expr(rng, depth - 1));
    let b = Box::new(random_expr(rng, depth - 1));
    match rng.gen_range(0..4) {
        0 => Expr::Add(a, b),
        1 => Expr::Sub(a, b),
        2 => Expr::Mul(a, b),
        _ => Expr::Div(a, b),
    }
}

fn eval_exact(e: &Expr) -> Option<Rational> {
    Some(match e {
        Expr::Leaf(n, d) => Rational::new((*n).into(), (*d).into()),
        Expr::Add(a, b) => eval_exact(a)? + eval_exact(b)?,
        Expr::Sub(a, b) => eval_exact(a)? - eval_exact(b)?,
        Expr::Mul(a, b) => eval_exact(a)? * eval_exact(b)?,
        Expr::Div(a, b) => {
            let d = eval_exact(b)?;
            if d.is_zero() {
                return None;
            }
            eval_exact(a)? / d
        }
    })
}

const PREC: usize = 256;

fn fabs(x: FBig) -> FBig {
    if x < FBig::<dashu_float::round::mode::Zero, 2>::ZERO { -x } else { x }
}

fn big(n: &BigInt) -> FBig {
    FBig::from(dashu_int::IBig::from_str(&n.to_string()).unwrap()).with_precision(PREC).value()
}

fn eval_float(e: &Expr) -> FBig {
    match e {
        Expr::Leaf(n, d) => FBig::from(*n).with_precision(PREC).value() / FBig::from(*d).with_precision(PREC).value(),
        Expr::Add(a, b) => eval_float(a) + eval_float(b),
        Expr::Sub(a, b) => eval_float(a) - eval_float(b),
        Expr::Mul(a, b) => eval_float(a) * eval_float(b),
        Expr::Div(a, b) => eval_float(a) / eval_float(b),
    }
}

/// Largest magnitude of any intermediate, for scaling the cancellation bound.
fn magnitude_bound(e: &Expr) -> Rational {
    match e {
        Expr::Leaf(n, d) => Rational::new((*n).into(), (*d).into()).abs(),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (x, y) = (magnitude_bound(a), magnitude_bound(b));
            if x > y { x } else { y }
        }
        Expr::Mul(_, _) | Expr::Div(_, _) => eval_exact(e).map(|v| v.abs()).unwrap_or_else(Rational::zero),
    }
}

#[test]
fn rational_fuzz_matches_high_precision_float() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let tolerance = FBig::from(1).with_precision(PREC).value() / FBig::from(10).with_precision(PREC).value().powi(40.into());
    let mut checked = 0;
    while checked < 1000 {
        let expr = random_expr(&mut rng, 4);
        let Some(exact) = eval_exact(&expr) else { continue };
        let approx = eval_float(&expr);
        let exact_f = big(exact.numer()) / big(exact.denom());
        let err = fabs(approx - &exact_f);
        if exact.is_zero() {
            let scale = magnitude_bound(&expr) + Rational::one();
            let bound = &tolerance * (big(scale.numer()) / big(scale.denom()));
            assert!(err <= bound, "cancellation to zero not reproduced: {expr:?}");
        } else {
            let rel = err / fabs(exact_f);
            assert!(rel <= tolerance, "relative error too large for {expr:?}");
        }
        checked += 1;
    }
}
