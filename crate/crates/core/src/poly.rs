//! Exact multivariate polynomials with rational coefficients.
//!
//! A [`Poly`] is a sparse map from exponent vectors to nonzero rationals.
//! Every operation is exact; the representation is canonical, so `==` on
//! two polynomials is equality of values.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::EchelonBasis;
use crate::Decision;

/// Exact rational scalar. Always in lowest terms with a positive denominator.
pub type Scalar = BigRational;

/// Shorthand for an integer-valued [`Scalar`].
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn rat(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Degree counted over the first `k` variables only.
    pub fn partial_degree(&self, k: usize) -> u32 {
        self.0[..k].iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    /// All monomials in `nvars` variables with total degree at most `maxdeg`,
    /// in ascending graded-lex order.
    pub fn all_up_to(nvars: usize, maxdeg: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in 0..=maxdeg {
            let mut cur = vec![0u32; nvars];
            monomials_of_degree(nvars, d, 0, &mut cur, &mut out);
        }
        out.sort();
        out
    }
}

fn monomials_of_degree(nvars: usize, rem: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if nvars == 0 {
        if rem == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    if pos == nvars - 1 {
        cur[pos] = rem;
        out.push(Monomial(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for e in 0..=rem {
        cur[pos] = e;
        monomials_of_degree(nvars, rem - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::term(nvars, Monomial::one(nvars), c)
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, int(c))
    }

    /// The coordinate function `x_{var}` (zero-based).
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable {var} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[var] = 1;
        Self::term(nvars, Monomial(e), Scalar::one())
    }

    pub fn term(nvars: usize, mono: Monomial, c: Scalar) -> Self {
        assert_eq!(mono.0.len(), nvars, "monomial length does not match variable count");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Poly { nvars, terms }
    }

    /// Builds from `(coefficient, exponents)` pairs; duplicates are summed.
    pub fn from_terms<I>(nvars: usize, it: I) -> Self
    where
        I: IntoIterator<Item = (Scalar, Vec<u32>)>,
    {
        let mut p = Poly::zero(nvars);
        for (c, e) in it {
            assert_eq!(e.len(), nvars);
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Smallest total degree among the terms; `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    fn check_same(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VarCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn check_var(&self, var: usize) -> Result<()> {
        if var >= self.nvars {
            return Err(Error::VarOutOfRange { var, nvars: self.nvars });
        }
        Ok(())
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Result<Poly> {
        self.check_var(var)?;
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c * int(e as i64));
        }
        Ok(out)
    }

    /// Derivative along the vector field with components `field`.
    pub fn derivative_along(&self, field: &[Poly]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (k, v) in field.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let dp = self.partial(k).expect("field length matches variable count");
            if !dp.is_zero() {
                out += &(v * &dp);
            }
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::PointLength { expected: self.nvars, got: point.len() });
        }
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes `value` for variable `var`; the variable count is kept.
    pub fn substitute(&self, var: usize, value: &Scalar) -> Result<Poly> {
        self.check_var(var)?;
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut exps = m.0.clone();
            exps[var] = 0;
            let f = if e == 0 { Scalar::one() } else { num_traits::pow(value.clone(), e as usize) };
            out.add_term(Monomial(exps), c * f);
        }
        Ok(out)
    }

    /// Exact `∫₀¹ p dt` where `t` is variable `var`. The result no longer
    /// involves `var` (its exponent is zero everywhere).
    pub fn integrate_unit(&self, var: usize) -> Result<Poly> {
        self.check_var(var)?;
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut exps = m.0.clone();
            exps[var] = 0;
            out.add_term(Monomial(exps), c / int(e as i64 + 1));
        }
        Ok(out)
    }

    /// Appends `k` fresh variables that do not occur.
    pub fn extend_vars(&self, k: usize) -> Poly {
        Poly {
            nvars: self.nvars + k,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.extend(std::iter::repeat_n(0, k));
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Removes the trailing variables beyond `nvars`; they must not occur.
    pub fn truncate_vars(&self, nvars: usize) -> Result<Poly> {
        if nvars > self.nvars {
            return Err(Error::VarCountMismatch { left: self.nvars, right: nvars });
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0[nvars..].iter().any(|&e| e != 0) {
                return Err(Error::VariableOccurs { var: nvars });
            }
            terms.insert(Monomial(m.0[..nvars].to_vec()), c.clone());
        }
        Ok(Poly { nvars, terms })
    }

    /// Minimal degree over the first `k` variables among all terms.
    pub fn min_partial_degree(&self, k: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.partial_degree(k)).min()
    }

    /// Canonical text with the given variable names, highest graded-lex term first.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (v, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    _ => factors.push(format!("{}^{}", names[v], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Default names `x1, …, xn`.
    pub fn default_names(nvars: usize) -> Vec<String> {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Poly::default_names(self.nvars)))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Ideal of the coefficient ring given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffIdeal {
    generators: Vec<Poly>,
    monomial: bool,
}

impl CoeffIdeal {
    pub fn new(generators: Vec<Poly>) -> Result<Self> {
        if let Some(first) = generators.first() {
            for g in &generators[1..] {
                first.check_same(g)?;
            }
        }
        let monomial = generators.iter().all(|g| g.is_monomial());
        Ok(CoeffIdeal { generators, monomial })
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn is_monomial(&self) -> bool {
        self.monomial
    }
}

/// Decides `p ∈ ideal`, returning cofactors `c` with `p = Σ cᵢ gᵢ` on success.
///
/// Monomial ideals are decided exactly. Otherwise cofactors of degree at most
/// `maxdeg` are searched by an exact linear solve, and failure is reported as
/// [`Decision::NoWitnessWithin`].
pub fn ideal_member(p: &Poly, ideal: &CoeffIdeal, maxdeg: u32) -> Result<Decision<Vec<Poly>>> {
    let nvars = p.nvars;
    for g in &ideal.generators {
        p.check_same(g)?;
    }
    let mut cof = vec![Poly::zero(nvars); ideal.generators.len()];
    if p.is_zero() {
        return Ok(Decision::Yes(cof));
    }
    if ideal.monomial {
        let gens: Vec<(&Monomial, &Scalar)> = ideal
            .generators
            .iter()
            .map(|g| g.terms.iter().next().expect("monomial generator"))
            .collect();
        for (m, c) in &p.terms {
            match gens.iter().position(|(gm, _)| gm.divides(m)) {
                Some(i) => {
                    let (gm, gc) = gens[i];
                    cof[i].add_term(gm.quotient_of(m), c / gc);
                }
                None => return Ok(Decision::No),
            }
        }
        return Ok(Decision::Yes(cof));
    }
    let monos = Monomial::all_up_to(nvars, maxdeg);
    let mut columns = Vec::new();
    let mut labels = Vec::new();
    for (gi, g) in ideal.generators.iter().enumerate() {
        for m in &monos {
            columns.push(g.mul_monomial(m).terms);
            labels.push((gi, m.clone()));
        }
    }
    let mut basis = EchelonBasis::new(columns.len());
    for (i, col) in columns.into_iter().enumerate() {
        basis.insert_column(i, col);
    }
    match basis.solve(&p.terms) {
        Some(x) => {
            for ((gi, m), c) in labels.into_iter().zip(x) {
                cof[gi].add_term(m, c);
            }
            Ok(Decision::Yes(cof))
        }
        None => Ok(Decision::NoWitnessWithin(maxdeg)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::var(2, i)
    }

    #[test]
    fn monomial_product() {
        let a = x(0).pow(2);
        let b = x(1).pow(2);
        let p = &a * &b;
        assert_eq!(p, Poly::from_terms(2, [(int(1), vec![2, 2])]));
        assert_eq!(p.degree(), Some(4));
    }

    #[test]
    fn cancellation_and_zero() {
        let s = &(&x(0) + &x(1)) + &(-&x(0));
        assert_eq!(s, x(1));
        let z = &x(1).pow(2).scale(&int(2)) * &Poly::zero(2);
        assert!(z.is_zero());
    }

    #[test]
    fn mismatch_rejected() {
        let a = Poly::var(2, 0);
        let b = Poly::var(3, 0);
        assert!(matches!(a.try_add(&b), Err(Error::VarCountMismatch { .. })));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn partials() {
        assert_eq!(x(0).pow(2).partial(0).unwrap(), x(0).scale(&int(2)));
        assert!(x(0).pow(2).partial(1).unwrap().is_zero());
        assert_eq!(x(0).pow(3).scale(&int(2)).partial(0).unwrap(), x(0).pow(2).scale(&int(6)));
        assert!(x(0).partial(2).is_err());
    }

    #[test]
    fn evaluation() {
        let p = &x(0).pow(2) + &x(1).pow(2);
        assert_eq!(p.eval(&[int(0), int(0)]).unwrap(), int(0));
        assert_eq!(p.eval(&[int(1), int(2)]).unwrap(), int(5));
        assert_eq!(Poly::from_int(2, 3).eval(&[int(7), rat(1, 3)]).unwrap(), int(3));
        assert!(p.eval(&[int(1)]).is_err());
    }

    #[test]
    fn unit_integrals() {
        let t = Poly::var(2, 1);
        assert_eq!(t.integrate_unit(1).unwrap(), Poly::constant(2, rat(1, 2)));
        let one_minus_t = &Poly::one(2) - &t;
        assert_eq!(one_minus_t.integrate_unit(1).unwrap(), Poly::constant(2, rat(1, 2)));
        let x1sq = x(0).pow(2);
        assert_eq!(x1sq.integrate_unit(1).unwrap(), x1sq);
    }

    #[test]
    fn printing_is_graded_lex() {
        let p = Poly::from_terms(2, [(int(3), vec![0, 0]), (int(-2), vec![1, 2]), (rat(1, 2), vec![2, 0])]);
        assert_eq!(p.to_string(), "-2*x1*x2^2 + 1/2*x1^2 + 3");
        assert_eq!(Poly::zero(2).to_string(), "0");
    }

    #[test]
    fn monomial_ideal_membership() {
        let ideal = CoeffIdeal::new(vec![x(0).pow(2), x(1).pow(2)]).unwrap();
        assert!(ideal.is_monomial());
        let p = &x(0).pow(2).scale(&int(3)) + &(&x(0) * &x(1).pow(2));
        match ideal_member(&p, &ideal, 0).unwrap() {
            Decision::Yes(c) => {
                assert_eq!(c[0], Poly::from_int(2, 3));
                assert_eq!(c[1], x(0));
            }
            other => panic!("expected membership, got {other:?}"),
        }
        assert_eq!(ideal_member(&(&x(0) * &x(1)), &ideal, 4).unwrap(), Decision::No);
        match ideal_member(&Poly::zero(2), &ideal, 0).unwrap() {
            Decision::Yes(c) => assert!(c.iter().all(Poly::is_zero)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bounded_membership_for_general_generators() {
        // <x1 + x2>: x1^2 - x2^2 = (x1 - x2)(x1 + x2)
        let g = &x(0) + &x(1);
        let ideal = CoeffIdeal::new(vec![g.clone()]).unwrap();
        assert!(!ideal.is_monomial());
        let p = &x(0).pow(2) - &x(1).pow(2);
        match ideal_member(&p, &ideal, 1).unwrap() {
            Decision::Yes(c) => assert_eq!(&c[0] * &g, p),
            other => panic!("{other:?}"),
        }
        assert_eq!(ideal_member(&x(0), &ideal, 3).unwrap(), Decision::NoWitnessWithin(3));
        // witness exists only beyond the bound
        let q = &x(0).pow(3) * &g;
        assert_eq!(ideal_member(&q, &ideal, 2).unwrap(), Decision::NoWitnessWithin(2));
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(Monomial::all_up_to(2, 2).len(), 6);
        assert_eq!(Monomial::all_up_to(3, 3).len(), 20);
        assert_eq!(Monomial::all_up_to(0, 3).len(), 1);
    }
}
