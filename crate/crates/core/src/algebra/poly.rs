use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, from_int, Rational};
use crate::error::{GkmError, Result};

/// An integer covector on the Lie algebra of the torus: an element of the
/// weight lattice. The axial function takes values here.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearForm(pub Vec<i64>);

impl LinearForm {
    pub fn new(coefficients: Vec<i64>) -> Self {
        LinearForm(coefficients)
    }

    /// The form `x_j - x_i` (0-based indices) in `rank` variables.
    pub fn difference(rank: usize, j: usize, i: usize) -> Self {
        let mut c = vec![0; rank];
        c[j] += 1;
        c[i] -= 1;
        LinearForm(c)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        LinearForm(self.0.iter().map(|c| -c).collect())
    }

    pub fn eval(&self, point: &[i64]) -> i128 {
        self.0.iter().zip(point).map(|(&a, &x)| a as i128 * x as i128).sum()
    }

    pub fn sub(&self, other: &LinearForm) -> LinearForm {
        LinearForm(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// True when the two forms span a space of dimension at most one.
    pub fn is_proportional(&self, other: &LinearForm) -> bool {
        let n = self.0.len();
        for i in 0..n {
            for j in i + 1..n {
                let minor = self.0[i] as i128 * other.0[j] as i128 - self.0[j] as i128 * other.0[i] as i128;
                if minor != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// The variable eliminated when restricting to `self = 0`: largest
    /// absolute coefficient, smallest index on ties.
    pub fn pivot(&self) -> Option<usize> {
        let mut best: Option<(usize, u64)> = None;
        for (i, &c) in self.0.iter().enumerate() {
            let a = c.unsigned_abs();
            if a != 0 && best.is_none_or(|(_, b)| a > b) {
                best = Some((i, a));
            }
        }
        best.map(|(i, _)| i)
    }

    pub fn to_polynomial(&self) -> HomogPolynomial {
        let n = self.rank();
        let mut p = HomogPolynomial::zero(n, 1);
        for (i, &c) in self.0.iter().enumerate() {
            if c != 0 {
                let mut e = vec![0; n];
                e[i] = 1;
                p.add_term(Monomial(e), from_int(c));
            }
        }
        p
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())
    }
}

/// Exponent vector of a monomial. Ordered graded-lexicographically:
/// total degree first, then lexicographically with `x1 > x2 > ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Number of degree-`degree` monomials in `nvars` variables, `C(k+n-1, n-1)`.
///
/// `nvars = 0` is the ground field itself: one monomial in degree zero and
/// none above.
pub fn graded_dim(nvars: usize, degree: usize) -> usize {
    if nvars == 0 {
        return usize::from(degree == 0);
    }
    // C(degree + nvars - 1, nvars - 1), multiplicative form stays integral.
    let r = nvars - 1;
    let mut acc: u128 = 1;
    for i in 1..=r as u128 {
        acc = acc * (degree as u128 + i) / i;
    }
    acc as usize
}

/// All degree-`degree` monomials in `nvars` variables, largest first in the
/// global graded-lex order.
pub fn monomials(nvars: usize, degree: usize) -> Vec<Monomial> {
    fn fill(prefix: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<Monomial>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            fill(prefix, remaining - e, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(graded_dim(nvars, degree));
    if nvars == 0 {
        if degree == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    fill(&mut Vec::with_capacity(nvars), degree as u32, nvars, &mut out);
    out
}

/// A homogeneous polynomial of fixed degree with rational coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogPolynomial {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl HomogPolynomial {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        HomogPolynomial { nvars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, value: Rational) -> Self {
        let mut p = Self::zero(nvars, 0);
        p.add_term(Monomial(vec![0; nvars]), value);
        p
    }

    pub fn from_terms(nvars: usize, degree: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars, degree);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms with the leading monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.nvars(), self.nvars, "monomial arity mismatch");
        assert_eq!(m.degree() as usize, self.degree, "monomial degree mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different rings");
        assert_eq!(self.degree, other.degree, "polynomials of different degree");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.nvars, self.degree);
        }
        HomogPolynomial {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * factor)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "polynomials over different rings");
        let mut out = Self::zero(self.nvars, self.degree + other.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    v *= x;
                }
            }
            total += v;
        }
        total
    }
}

impl fmt::Display for HomogPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_constant = m.degree() == 0;
            if magnitude.is_one() && !is_constant {
                write!(f, "{m}")?;
            } else if is_constant {
                write!(f, "{}", format_rational(&magnitude))?;
            } else {
                write!(f, "{}*{m}", format_rational(&magnitude))?;
            }
        }
        Ok(())
    }
}

/// Restriction `S(t*) -> S(ker α)` for a fixed nonzero form α.
///
/// The pivot variable `x_v` of α is replaced by `-(Σ_{j≠v} α_j x_j) / α_v`
/// and the remaining variables are renumbered in order, so results live in
/// `n - 1` variables. A polynomial restricts to zero iff α divides it.
#[derive(Debug, Clone)]
pub struct Restriction {
    nvars: usize,
    pivot: usize,
    substitute: HomogPolynomial,
    /// Powers `L^0, L^1, ...` of the substituted linear form.
    powers: Vec<HomogPolynomial>,
}

impl Restriction {
    pub fn new(alpha: &LinearForm, max_degree: usize) -> Result<Self> {
        let pivot = alpha.pivot().ok_or(GkmError::ZeroForm)?;
        let nvars = alpha.rank();
        let pivot_coeff = from_int(alpha.0[pivot]);
        let reduced = nvars - 1;
        let mut substitute = HomogPolynomial::zero(reduced, 1);
        for (i, &c) in alpha.0.iter().enumerate() {
            if i == pivot || c == 0 {
                continue;
            }
            let j = if i < pivot { i } else { i - 1 };
            let mut e = vec![0; reduced];
            e[j] = 1;
            substitute.add_term(Monomial(e), -from_int(c) / &pivot_coeff);
        }
        let mut r = Restriction {
            nvars,
            pivot,
            substitute,
            powers: vec![HomogPolynomial::constant(reduced, Rational::one())],
        };
        r.ensure_power(max_degree);
        Ok(r)
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn source_vars(&self) -> usize {
        self.nvars
    }

    pub fn target_vars(&self) -> usize {
        self.nvars - 1
    }

    fn ensure_power(&mut self, d: usize) {
        while self.powers.len() <= d {
            let next = self.powers[self.powers.len() - 1].mul(&self.substitute);
            self.powers.push(next);
        }
    }

    pub fn apply_monomial(&mut self, m: &Monomial) -> HomogPolynomial {
        assert_eq!(m.nvars(), self.nvars);
        let power = m.0[self.pivot] as usize;
        self.ensure_power(power);
        let rest: Vec<u32> = m
            .0
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.pivot)
            .map(|(_, &e)| e)
            .collect();
        let shift = Monomial(rest);
        let degree = m.degree() as usize;
        HomogPolynomial::from_terms(
            self.nvars - 1,
            degree,
            self.powers[power].terms.iter().map(|(t, c)| (t.mul(&shift), c.clone())),
        )
    }

    pub fn apply(&mut self, p: &HomogPolynomial) -> HomogPolynomial {
        assert_eq!(p.nvars(), self.nvars, "restriction applied to wrong ring");
        let mut out = HomogPolynomial::zero(self.nvars - 1, p.degree());
        for (m, c) in &p.terms {
            let image = self.apply_monomial(m);
            for (t, d) in image.terms {
                out.add_term(t, d * c);
            }
        }
        out
    }
}

/// Restriction of `p` to the hyperplane `α = 0`, in `n - 1` variables.
pub fn restrict_mod_form(p: &HomogPolynomial, alpha: &LinearForm) -> Result<HomogPolynomial> {
    if alpha.rank() != p.nvars() {
        return Err(GkmError::DimensionMismatch { expected: p.nvars(), found: alpha.rank() });
    }
    let mut r = Restriction::new(alpha, p.degree())?;
    Ok(r.apply(p))
}
