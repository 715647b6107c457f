//! Anchored vector bundles with skew brackets over a polynomial base ℝⁿ.
//!
//! Bundles are trivial with a fixed global frame `e_1, …, e_m`. An
//! [`Algebroid`] stores the anchor of each generator and the full skew table
//! of generator brackets; brackets of arbitrary sections follow from the
//! Leibniz rule.

mod construct;
mod structures;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{Poly, Scalar};

pub use construct::{
    check_morphism, Feasibility, InfeasibilityCertificate, MorphismReport, SubalgebroidOutcome,
};
pub use structures::{BracketModifier, CoMetric, CourantSolutions, Endomorphism};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseSpace {
    var_names: Vec<String>,
}

impl BaseSpace {
    pub fn new(var_names: Vec<String>) -> Result<Self> {
        check_unique(&var_names)?;
        Ok(BaseSpace { var_names })
    }

    /// ℝⁿ with coordinates `x1, …, xn`.
    pub fn euclidean(n: usize) -> Self {
        BaseSpace { var_names: Poly::default_names(n) }
    }

    pub fn dim(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    /// The same base with one more coordinate appended.
    pub fn with_extra(&self, name: &str) -> Result<Self> {
        let mut v = self.var_names.clone();
        v.push(name.to_string());
        BaseSpace::new(v)
    }
}

pub(crate) fn check_unique(names: &[String]) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::DuplicateName(n.clone()));
        }
    }
    Ok(())
}

/// Coefficient vector over the generator frame.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Section {
    coeffs: Vec<Poly>,
}

impl Section {
    pub fn new(coeffs: Vec<Poly>) -> Self {
        Section { coeffs }
    }

    pub fn zero(rank: usize, nvars: usize) -> Self {
        Section { coeffs: vec![Poly::zero(nvars); rank] }
    }

    /// The generator `e_i`.
    pub fn basis(rank: usize, nvars: usize, i: usize) -> Self {
        let mut s = Self::zero(rank, nvars);
        s.coeffs[i] = Poly::one(nvars);
        s
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Poly {
        &self.coeffs[i]
    }

    pub fn into_coeffs(self) -> Vec<Poly> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    pub fn scale(&self, f: &Poly) -> Section {
        Section { coeffs: self.coeffs.iter().map(|c| c * f).collect() }
    }

    pub fn scale_scalar(&self, c: &Scalar) -> Section {
        Section { coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn add_scaled(&mut self, f: &Poly, other: &Section) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += &(f * b);
            }
        }
    }

    /// Minimal total degree over all nonzero coefficients.
    pub fn min_degree(&self) -> Option<u32> {
        self.coeffs.iter().filter_map(Poly::min_degree).min()
    }

    pub fn extend_vars(&self, k: usize) -> Section {
        Section { coeffs: self.coeffs.iter().map(|c| c.extend_vars(k)).collect() }
    }

    pub fn truncate_vars(&self, nvars: usize) -> Result<Section> {
        Ok(Section { coeffs: self.coeffs.iter().map(|c| c.truncate_vars(nvars)).collect::<Result<_>>()? })
    }

    pub fn substitute(&self, var: usize, value: &Scalar) -> Result<Section> {
        Ok(Section { coeffs: self.coeffs.iter().map(|c| c.substitute(var, value)).collect::<Result<_>>()? })
    }
}

impl<'a> Add<&'a Section> for &'a Section {
    type Output = Section;
    fn add(self, rhs: &'a Section) -> Section {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        Section { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a Section> for &'a Section {
    type Output = Section;
    fn sub(self, rhs: &'a Section) -> Section {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        Section { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Section {
    type Output = Section;
    fn neg(self) -> Section {
        Section { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

/// Polynomial vector field on the base, in coordinate components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField {
    comps: Vec<Poly>,
}

impl VectorField {
    pub fn new(comps: Vec<Poly>) -> Self {
        VectorField { comps }
    }

    pub fn zero(nvars: usize) -> Self {
        VectorField { comps: vec![Poly::zero(nvars); nvars] }
    }

    /// `∂/∂x_k`.
    pub fn coordinate(nvars: usize, k: usize) -> Self {
        let mut v = Self::zero(nvars);
        v.comps[k] = Poly::one(nvars);
        v
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn scale(&self, f: &Poly) -> VectorField {
        VectorField { comps: self.comps.iter().map(|c| c * f).collect() }
    }

    /// `V(f)`.
    pub fn apply(&self, f: &Poly) -> Poly {
        f.derivative_along(&self.comps)
    }

    /// The Lie bracket `[V, W] = V(W) − W(V)` componentwise.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        if self.dim() != other.dim() {
            return Err(Error::BaseMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(VectorField {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(v, w)| &other.apply(v).neg() + &self.apply(w))
                .collect(),
        })
    }

    pub fn extend_vars(&self, k: usize) -> VectorField {
        let nvars = self.dim() + k;
        let mut comps: Vec<Poly> = self.comps.iter().map(|c| c.extend_vars(k)).collect();
        comps.extend(std::iter::repeat_n(Poly::zero(nvars), k));
        VectorField { comps }
    }
}

impl<'a> Add<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn add(self, rhs: &'a VectorField) -> VectorField {
        VectorField { comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &'a VectorField) -> VectorField {
        VectorField { comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect() }
    }
}

/// Anchor compatibility result for one generator pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    /// `[ρeᵢ, ρeⱼ] − ρ([eᵢ,eⱼ])`.
    pub defect: VectorField,
}

impl PairCheck {
    pub fn passes(&self) -> bool {
        self.defect.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub pairs: Vec<PairCheck>,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.pairs.iter().all(PairCheck::passes)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PairCheck> {
        self.pairs.iter().filter(|p| !p.passes())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieReport {
    /// Every generator triple `i<j<k` with its Jacobiator.
    pub triples: Vec<((usize, usize, usize), Section)>,
}

impl LieReport {
    pub fn is_lie(&self) -> bool {
        self.triples.iter().all(|(_, s)| s.is_zero())
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &((usize, usize, usize), Section)> {
        self.triples.iter().filter(|(_, s)| !s.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebroid {
    name: String,
    base: BaseSpace,
    gen_names: Vec<String>,
    anchor: Vec<VectorField>,
    table: Vec<Vec<Section>>,
}

impl Algebroid {
    /// Builds an anchored bundle with a skew bracket.
    ///
    /// `brackets` lists generator pairs; `(j, i)` entries are negated into
    /// `(i, j)`, unlisted pairs are zero and diagonal entries must vanish.
    pub fn new<I>(
        name: impl Into<String>,
        base: BaseSpace,
        gen_names: Vec<String>,
        anchor: Vec<VectorField>,
        brackets: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Section)>,
    {
        let n = base.dim();
        let m = gen_names.len();
        check_unique(&gen_names)?;
        if anchor.len() != m {
            return Err(Error::RankMismatch { expected: m, got: anchor.len() });
        }
        for v in &anchor {
            if v.dim() != n {
                return Err(Error::BaseMismatch { expected: n, got: v.dim() });
            }
            if let Some(c) = v.comps.iter().find(|c| c.nvars() != n) {
                return Err(Error::BaseMismatch { expected: n, got: c.nvars() });
            }
        }
        let mut table = vec![vec![Section::zero(m, n); m]; m];
        for ((i, j), s) in brackets {
            if i >= m || j >= m {
                return Err(Error::GeneratorOutOfRange { index: i.max(j), rank: m });
            }
            if s.rank() != m {
                return Err(Error::RankMismatch { expected: m, got: s.rank() });
            }
            if let Some(c) = s.coeffs.iter().find(|c| c.nvars() != n) {
                return Err(Error::BaseMismatch { expected: n, got: c.nvars() });
            }
            if i == j {
                if !s.is_zero() {
                    return Err(Error::DiagonalBracket(gen_names[i].clone()));
                }
                continue;
            }
            table[j][i] = -&s;
            table[i][j] = s;
        }
        Ok(Algebroid { name: name.into(), base, gen_names, anchor, table })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn base(&self) -> &BaseSpace {
        &self.base
    }

    pub fn nvars(&self) -> usize {
        self.base.dim()
    }

    pub fn rank(&self) -> usize {
        self.gen_names.len()
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gen_names.iter().position(|g| g == name)
    }

    pub fn gen(&self, i: usize) -> Section {
        Section::basis(self.rank(), self.nvars(), i)
    }

    pub fn anchor_of(&self, i: usize) -> &VectorField {
        &self.anchor[i]
    }

    pub fn anchors(&self) -> &[VectorField] {
        &self.anchor
    }

    /// `[eᵢ, eⱼ]` from the skew table.
    pub fn structure(&self, i: usize, j: usize) -> &Section {
        &self.table[i][j]
    }

    /// Nonzero structure entries with `i < j`.
    pub fn structure_pairs(&self) -> BTreeMap<(usize, usize), Section> {
        let mut out = BTreeMap::new();
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                if !self.table[i][j].is_zero() {
                    out.insert((i, j), self.table[i][j].clone());
                }
            }
        }
        out
    }

    pub(crate) fn check_section(&self, s: &Section) -> Result<()> {
        if s.rank() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: s.rank() });
        }
        if let Some(c) = s.coeffs.iter().find(|c| c.nvars() != self.nvars()) {
            return Err(Error::BaseMismatch { expected: self.nvars(), got: c.nvars() });
        }
        Ok(())
    }

    pub fn anchor_apply(&self, s: &Section) -> Result<VectorField> {
        self.check_section(s)?;
        let n = self.nvars();
        let mut out = VectorField::zero(n);
        for (c, v) in s.coeffs.iter().zip(&self.anchor) {
            if c.is_zero() {
                continue;
            }
            for (o, vc) in out.comps.iter_mut().zip(&v.comps) {
                if !vc.is_zero() {
                    *o += &(c * vc);
                }
            }
        }
        Ok(out)
    }

    /// `ρ(X)(f)`.
    pub fn anchor_derivative(&self, s: &Section, f: &Poly) -> Result<Poly> {
        Ok(self.anchor_apply(s)?.apply(f))
    }

    /// `ρ(e_i)(f)`.
    pub fn gen_derivative(&self, i: usize, f: &Poly) -> Poly {
        self.anchor[i].apply(f)
    }

    /// Bracket of arbitrary sections via bilinearity and the Leibniz rule.
    pub fn bracket(&self, x: &Section, y: &Section) -> Result<Section> {
        self.check_section(x)?;
        self.check_section(y)?;
        let m = self.rank();
        let mut out = Section::zero(m, self.nvars());
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                if b.is_zero() || i == j {
                    continue;
                }
                let s = &self.table[i][j];
                if !s.is_zero() {
                    out.add_scaled(&(a * b), s);
                }
            }
        }
        let rx = self.anchor_apply(x)?;
        let ry = self.anchor_apply(y)?;
        for j in 0..m {
            let d = rx.apply(&y.coeffs[j]);
            out.coeffs[j] += &d;
            let d = ry.apply(&x.coeffs[j]);
            out.coeffs[j] -= &d;
        }
        Ok(out)
    }

    /// Anchor compatibility `ρ([eᵢ,eⱼ]) = [ρeᵢ, ρeⱼ]` on all generator pairs.
    /// This suffices: both sides differ by an ℱ-bilinear expression.
    pub fn check_axioms(&self) -> AxiomReport {
        let m = self.rank();
        let pairs: Vec<(usize, usize)> =
            (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
        let pairs = pairs
            .into_par_iter()
            .map(|(i, j)| {
                let lhs = self.anchor_apply(&self.table[i][j]).expect("table shape");
                let rhs = self.anchor[i].bracket(&self.anchor[j]).expect("anchor shape");
                PairCheck { i, j, defect: &rhs - &lhs }
            })
            .collect();
        AxiomReport { pairs }
    }

    pub fn is_almost_lie(&self) -> bool {
        self.check_axioms().passes()
    }

    /// The cyclic sum `[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]]`.
    ///
    /// Computed for any sections; it is a tensor only when the algebroid
    /// passes [`check_axioms`](Self::check_axioms).
    pub fn jacobiator(&self, x: &Section, y: &Section, z: &Section) -> Result<Section> {
        let a = self.bracket(x, &self.bracket(y, z)?)?;
        let b = self.bracket(y, &self.bracket(z, x)?)?;
        let c = self.bracket(z, &self.bracket(x, y)?)?;
        Ok(&(&a + &b) + &c)
    }

    /// Jacobiator checked against the axioms first.
    pub fn checked_jacobiator(&self, x: &Section, y: &Section, z: &Section) -> Result<Section> {
        if let Some(p) = self.check_axioms().failures().next() {
            return Err(Error::AxiomFailure(p.i, p.j));
        }
        self.jacobiator(x, y, z)
    }

    pub fn gen_jacobiator(&self, i: usize, j: usize, k: usize) -> Section {
        self.jacobiator(&self.gen(i), &self.gen(j), &self.gen(k)).expect("generator shapes")
    }

    /// Jacobiator on all `C(m,3)` generator triples; sufficient by tensoriality.
    pub fn check_lie(&self) -> LieReport {
        let m = self.rank();
        let mut triples = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    triples.push((i, j, k));
                }
            }
        }
        let triples = triples
            .into_par_iter()
            .map(|(i, j, k)| ((i, j, k), self.gen_jacobiator(i, j, k)))
            .collect();
        LieReport { triples }
    }

    /// Rank of the anchor matrix evaluated at `point`.
    pub fn anchor_rank_at(&self, point: &[Scalar]) -> Result<usize> {
        let rows = self
            .anchor
            .iter()
            .map(|v| v.comps.iter().map(|c| c.eval(point)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(linalg::rank(&rows))
    }

    /// Same structure over `k` extra trailing variables that the anchor ignores.
    pub fn extend_vars(&self, extra_names: &[String]) -> Result<Algebroid> {
        let k = extra_names.len();
        let mut names = self.base.var_names.clone();
        names.extend(extra_names.iter().cloned());
        let base = BaseSpace::new(names)?;
        let anchor = self.anchor.iter().map(|v| v.extend_vars(k)).collect();
        let brackets = self
            .structure_pairs()
            .into_iter()
            .map(|(p, s)| (p, s.extend_vars(k)))
            .collect::<Vec<_>>();
        Algebroid::new(self.name.clone(), base, self.gen_names.clone(), anchor, brackets)
    }

    pub fn format_section(&self, s: &Section) -> String {
        format_combination(
            s.coeffs.iter().zip(self.gen_names.iter().map(String::as_str)),
            self.base.var_names(),
        )
    }

    pub fn format_field(&self, v: &VectorField) -> String {
        let names: Vec<String> = (1..=self.nvars()).map(|k| format!("d{k}")).collect();
        format_combination(v.comps.iter().zip(names.iter().map(String::as_str)), self.base.var_names())
    }

    pub fn format_poly(&self, p: &Poly) -> String {
        p.display_with(self.base.var_names())
    }
}

impl fmt::Display for Algebroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (rank {} over {} variables)", self.name, self.rank(), self.nvars())
    }
}

/// Renders `Σ cᵢ·bᵢ` in the DSL syntax, skipping zero coefficients.
pub fn format_combination<'a, I>(terms: I, var_names: &[String]) -> String
where
    I: IntoIterator<Item = (&'a Poly, &'a str)>,
{
    let mut out = String::new();
    for (c, basis) in terms {
        if c.is_zero() {
            continue;
        }
        let first = out.is_empty();
        let (neg, body) = if c.is_monomial() {
            let (m, s) = c.terms().next().expect("one term");
            let mut factors = Vec::new();
            if !s.abs().is_one() {
                factors.push(s.abs().to_string());
            }
            for (v, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(var_names[v].clone()),
                    _ => factors.push(format!("{}^{}", var_names[v], e)),
                }
            }
            factors.push(basis.to_string());
            (s.is_negative(), factors.join("*"))
        } else {
            (false, format!("({})*{}", c.display_with(var_names), basis))
        };
        match (first, neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::poly::int;

    fn x(i: usize) -> Poly {
        Poly::var(2, i)
    }

    #[test]
    fn constant_fields_commute() {
        let d1 = VectorField::coordinate(2, 0);
        let d2 = VectorField::coordinate(2, 1);
        assert!(d1.bracket(&d2).unwrap().is_zero());
        assert!(d1.bracket(&d1).unwrap().is_zero());
    }

    #[test]
    fn weighted_field_bracket() {
        // [(x1)^2 d1, (x1)^2 d2] = 2 (x1)^3 d2, expanded by hand
        let v = VectorField::coordinate(2, 0).scale(&x(0).pow(2));
        let w = VectorField::coordinate(2, 1).scale(&x(0).pow(2));
        let b = v.bracket(&w).unwrap();
        assert!(b.comps()[0].is_zero());
        assert_eq!(b.comps()[1], x(0).pow(3).scale(&int(2)));
        assert_eq!(w.bracket(&v).unwrap(), VectorField::new(b.comps().iter().map(|c| -c).collect()));
    }

    #[test]
    fn field_base_mismatch() {
        assert!(VectorField::zero(2).bracket(&VectorField::zero(3)).is_err());
    }

    #[test]
    fn diagonal_bracket_rejected() {
        let base = BaseSpace::euclidean(1);
        let s = Section::new(vec![Poly::one(1)]);
        let err = Algebroid::new("A", base, vec!["A".into()], vec![VectorField::zero(1)], [((0, 0), s)]);
        assert_eq!(err.unwrap_err(), Error::DiagonalBracket("A".into()));
    }

    #[test]
    fn rank_one_trivial_bundle_passes() {
        let a = Algebroid::new("L", BaseSpace::euclidean(1), vec!["e".into()], vec![VectorField::zero(1)], [])
            .unwrap();
        assert!(a.check_axioms().passes());
        assert!(a.check_lie().is_lie());
        assert_eq!(a.anchor_rank_at(&[int(3)]).unwrap(), 0);
    }

    #[test]
    fn e0_anchor_examples() {
        let e0 = builtins::e0().algebroid;
        let v = e0.anchor_apply(&e0.gen(0)).unwrap();
        assert_eq!(v.comps(), &[x(0).pow(2), Poly::zero(2)]);
        let k1 = builtins::e0().section("Xc1").unwrap().clone();
        assert!(e0.anchor_apply(&k1).unwrap().is_zero());
        assert!(e0.anchor_apply(&Section::zero(4, 2)).unwrap().is_zero());
        assert!(e0.anchor_apply(&Section::zero(3, 2)).is_err());
    }

    #[test]
    fn e0_bracket_examples() {
        let e0 = builtins::e0().algebroid;
        let g = |i| e0.gen(i);
        // [X21, X12] = 2 x2 X11 - 2 x1 X22
        let b = e0.bracket(&g(1), &g(2)).unwrap();
        assert_eq!(e0.format_section(&b), "2*x2*X11 - 2*x1*X22");
        // compact formula: [X11, X21] = 2 x1 X21
        assert_eq!(e0.format_section(&e0.bracket(&g(0), &g(1)).unwrap()), "2*x1*X21");
        // Leibniz: [X11, x1 X22] = (x1)^2 X22 since [X11, X22] = 0
        let b = e0.bracket(&g(0), &g(3).scale(&x(0))).unwrap();
        assert_eq!(e0.format_section(&b), "x1^2*X22");
    }

    #[test]
    fn e0_axioms_and_itemized_variant() {
        let e0 = builtins::e0().algebroid;
        let report = e0.check_axioms();
        assert_eq!(report.pairs.len(), 6);
        assert!(report.passes());
        let bad = builtins::e0_itemized().algebroid;
        let fails: Vec<_> = bad.check_axioms().failures().cloned().collect();
        assert_eq!(fails.len(), 1);
        assert_eq!((fails[0].i, fails[0].j), (0, 1));
        // defect 2 (x1)^3 d2 - 2 x2 (x1)^2 d2
        let expected = &x(1).scale(&int(2)) * &x(0).pow(2);
        let expected = &x(0).pow(3).scale(&int(2)) - &expected;
        assert_eq!(fails[0].defect.comps()[1], expected);
        assert!(fails[0].defect.comps()[0].is_zero());
    }

    #[test]
    fn anchor_rank_of_e0() {
        let e0 = builtins::e0().algebroid;
        assert_eq!(e0.anchor_rank_at(&[int(1), int(0)]).unwrap(), 2);
        assert_eq!(e0.anchor_rank_at(&[int(0), int(0)]).unwrap(), 0);
    }

    #[test]
    fn jacobiator_repeated_argument() {
        let e0 = builtins::e0().algebroid;
        let x0 = &e0.gen(1).scale(&x(0)) + &e0.gen(2);
        let y0 = e0.gen(3).scale(&x(1).pow(2));
        assert!(e0.jacobiator(&x0, &x0, &y0).unwrap().is_zero());
    }

    #[test]
    fn checked_jacobiator_flags_axiom_failure() {
        let bad = builtins::e0_itemized().algebroid;
        let r = bad.checked_jacobiator(&bad.gen(0), &bad.gen(1), &bad.gen(2));
        assert_eq!(r.unwrap_err(), Error::AxiomFailure(0, 1));
    }

    #[test]
    fn combination_formatting() {
        let names = Poly::default_names(2);
        let c = [&x(0) + &x(1), Poly::from_int(2, -1)];
        let s = format_combination(c.iter().zip(["A", "B"]), &names);
        assert_eq!(s, "(x1 + x2)*A - B");
    }
}
