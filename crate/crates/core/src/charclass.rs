//! Connection and curvature form matrices, traces of curvature powers, the
//! product `E × Tℝ` with its homotopy operator, and transgression checks.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebroid::{Algebroid, Section, VectorField};
use crate::connection::EConnection;
use crate::error::{Error, Result};
use crate::forms::{pullback, Form, IdealBasis, IdealWitness};
use crate::poly::{int, Poly, Scalar};
use crate::Decision;

/// Square matrix of forms of one degree. `entries[a][b]` is row `a`, column `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormMatrix {
    degree: usize,
    entries: Vec<Vec<Form>>,
}

impl FormMatrix {
    pub fn zero(size: usize, rank: usize, nvars: usize, degree: usize) -> Self {
        FormMatrix { degree, entries: vec![vec![Form::zero(rank, nvars, degree); size]; size] }
    }

    pub fn new(entries: Vec<Vec<Form>>) -> Result<Self> {
        let size = entries.len();
        let first = entries.first().and_then(|r| r.first());
        let degree = first.map_or(0, Form::degree);
        for row in &entries {
            if row.len() != size {
                return Err(Error::Shape(format!("row of length {} in a {size}x{size} matrix", row.len())));
            }
            if row.iter().any(|f| f.degree() != degree) {
                return Err(Error::Shape("mixed degrees in a form matrix".into()));
            }
        }
        Ok(FormMatrix { degree, entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn entry(&self, a: usize, b: usize) -> &Form {
        &self.entries[a][b]
    }

    pub fn entries(&self) -> &[Vec<Form>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Form::is_zero)
    }

    fn shape(&self) -> (usize, usize) {
        let f = &self.entries[0][0];
        (f.rank(), f.nvars())
    }

    pub fn map(&self, f: impl Fn(&Form) -> Result<Form>) -> Result<FormMatrix> {
        let entries =
            self.entries.iter().map(|r| r.iter().map(&f).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        FormMatrix::new(entries)
    }

    /// `(A∧B)ₐᵦ = Σ_c Aₐc ∧ B_cb`.
    pub fn wedge(&self, other: &FormMatrix) -> Result<FormMatrix> {
        if self.size() != other.size() {
            return Err(Error::Shape("matrix sizes differ".into()));
        }
        let s = self.size();
        if s == 0 {
            return Ok(FormMatrix { degree: self.degree + other.degree, entries: Vec::new() });
        }
        let (rank, nvars) = self.shape();
        let mut out = FormMatrix::zero(s, rank, nvars, self.degree + other.degree);
        for a in 0..s {
            for b in 0..s {
                let mut acc = Form::zero(rank, nvars, self.degree + other.degree);
                for c in 0..s {
                    acc = &acc + &self.entries[a][c].wedge(&other.entries[c][b])?;
                }
                out.entries[a][b] = acc;
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<Form> {
        let Some(first) = self.entries.first() else {
            return Err(Error::Shape("trace of an empty matrix".into()));
        };
        let mut acc = Form::zero(first[0].rank(), first[0].nvars(), self.degree);
        for (a, row) in self.entries.iter().enumerate() {
            acc = &acc + &row[a];
        }
        Ok(acc)
    }

    /// `k`-fold wedge power, associated from the left.
    pub fn power(&self, k: usize) -> Result<FormMatrix> {
        let mut out = self.clone();
        for _ in 1..k {
            out = out.wedge(self)?;
        }
        Ok(out)
    }

    pub fn differential(&self, a: &Algebroid) -> Result<FormMatrix> {
        self.map(|f| f.differential(a))
    }

    pub fn add(&self, other: &FormMatrix) -> Result<FormMatrix> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &FormMatrix) -> Result<FormMatrix> {
        self.combine(other, true)
    }

    fn combine(&self, other: &FormMatrix, negate: bool) -> Result<FormMatrix> {
        if self.size() != other.size() || self.degree != other.degree {
            return Err(Error::Shape("matrix shapes differ".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| if negate { x - y } else { x + y }).collect())
            .collect();
        FormMatrix::new(entries)
    }
}

/// `θₐᵦ = Σ_β Γᵃ_{βb} ωᵝ`, so that `∇ s_b = Σₐ θₐᵦ ⊗ sₐ`.
pub fn connection_forms(conn: &EConnection) -> FormMatrix {
    let alg = conn.algebroid();
    let (m, n, r) = (alg.rank(), alg.nvars(), conn.target_rank());
    let mut out = FormMatrix::zero(r, m, n, 1);
    for a in 0..r {
        for b in 0..r {
            let comps = (0..m).map(|beta| (vec![beta], conn.christoffel(a, beta, b).clone()));
            out.entries[a][b] = Form::from_components(m, n, 1, comps).expect("connection shape");
        }
    }
    out
}

/// `R̄ₐᵦ(e_α, e_β)` read from `R(e_α, e_β)s_b`.
pub fn curvature_matrix(conn: &EConnection) -> FormMatrix {
    let alg = conn.algebroid();
    let (m, n, r) = (alg.rank(), alg.nvars(), conn.target_rank());
    let mut comps = vec![vec![Vec::new(); r]; r];
    for alpha in 0..m {
        for beta in alpha + 1..m {
            for b in 0..r {
                let s = conn.gen_curvature(alpha, beta, b);
                for (a, c) in s.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        comps[a][b].push((vec![alpha, beta], c.clone()));
                    }
                }
            }
        }
    }
    let entries = comps
        .into_iter()
        .map(|row| row.into_iter().map(|cs| Form::from_components(m, n, 2, cs).expect("curvature shape")).collect())
        .collect();
    FormMatrix::new(entries).expect("square")
}

/// `Tr R̄ᵏ`, a `2k`-form.
pub fn char_form(conn: &EConnection, k: usize) -> Result<Form> {
    if k == 0 {
        return Err(Error::Invalid("characteristic forms need k >= 1".into()));
    }
    let alg = conn.algebroid();
    if 2 * k > alg.rank() || conn.target_rank() == 0 {
        return Ok(Form::zero(alg.rank(), alg.nvars(), 2 * k));
    }
    curvature_matrix(conn).power(k)?.trace()
}

/// `R̄ − dθ − θ∧θ`.
pub fn cartan_residual(conn: &EConnection) -> Result<FormMatrix> {
    let theta = connection_forms(conn);
    let rhs = theta.differential(conn.algebroid())?.add(&theta.wedge(&theta)?)?;
    curvature_matrix(conn).sub(&rhs)
}

/// `dR̄ − d²θ − R̄∧θ + θ∧R̄`.
pub fn dr_residual(conn: &EConnection) -> Result<FormMatrix> {
    let alg = conn.algebroid();
    let theta = connection_forms(conn);
    let r = curvature_matrix(conn);
    let d2 = theta.map(|f| f.d_squared(alg))?;
    r.differential(alg)?.sub(&d2)?.sub(&r.wedge(&theta)?)?.add(&theta.wedge(&r)?)
}

/// `Tr(R̄ᵏ∧θ − θ∧R̄ᵏ)`.
pub fn trace_commutator(conn: &EConnection, k: usize) -> Result<Form> {
    let theta = connection_forms(conn);
    let rk = curvature_matrix(conn).power(k)?;
    rk.wedge(&theta)?.sub(&theta.wedge(&rk)?)?.trace()
}

/// `d Tr R̄ᵏ − k·Tr(d²θ ∧ R̄ᵏ⁻¹)` for `k ≥ 2`.
pub fn trace_chain_residual(conn: &EConnection, k: usize) -> Result<Form> {
    if k < 2 {
        return Err(Error::Invalid("the trace chain needs k >= 2".into()));
    }
    let alg = conn.algebroid();
    let theta = connection_forms(conn);
    let r = curvature_matrix(conn);
    let lhs = r.power(k)?.trace()?.differential(alg)?;
    let d2 = theta.map(|f| f.d_squared(alg))?;
    let rhs = d2.wedge(&r.power(k - 1)?)?.trace()?.scale_scalar(&int(k as i64));
    Ok(&lhs - &rhs)
}

/// `Ẽ = E × Tℝ`: one extra variable `t` and one generator `e_t` with `ρ(e_t) = ∂_t`.
#[derive(Clone, Debug)]
pub struct ProductAlgebroid {
    base: Arc<Algebroid>,
    product: Arc<Algebroid>,
}

pub fn product_algebroid(e: Arc<Algebroid>) -> Result<ProductAlgebroid> {
    let n = e.nvars();
    let var = fresh_name(e.base().var_names(), "t");
    let gen = fresh_name(e.gen_names(), "e_t");
    let base = e.base().with_extra(&var)?;
    let mut names = e.gen_names().to_vec();
    names.push(gen);
    let mut anchor: Vec<VectorField> = e.anchors().iter().map(|v| v.extend_vars(1)).collect();
    anchor.push(VectorField::coordinate(n + 1, n));
    let brackets: Vec<_> = e
        .structure_pairs()
        .into_iter()
        .map(|(k, s)| {
            let mut c = s.extend_vars(1).into_coeffs();
            c.push(Poly::zero(n + 1));
            (k, Section::new(c))
        })
        .collect();
    let product = Algebroid::new(format!("{}xTR", e.name()), base, names, anchor, brackets)?;
    Ok(ProductAlgebroid { base: e, product: Arc::new(product) })
}

fn fresh_name(taken: &[String], stem: &str) -> String {
    let mut name = stem.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

impl ProductAlgebroid {
    pub fn base(&self) -> &Arc<Algebroid> {
        &self.base
    }

    pub fn product(&self) -> &Arc<Algebroid> {
        &self.product
    }

    fn t_var(&self) -> usize {
        self.base.nvars()
    }

    fn t_gen(&self) -> usize {
        self.base.rank()
    }

    /// A form on `E` viewed on `Ẽ`, independent of `t` and without `ωᵗ`.
    pub fn lift(&self, w: &Form) -> Form {
        w.extend_vars(1).extend_rank(self.product.rank())
    }

    /// `Ĩᵤ*`: substitute `t = u` and drop `ωᵗ` components.
    pub fn restrict(&self, w: &Form, u: &Scalar) -> Result<Form> {
        let (m, n) = (self.base.rank(), self.base.nvars());
        let comps = w
            .comps()
            .iter()
            .filter(|(k, _)| !k.contains(&self.t_gen()))
            .map(|(k, c)| Ok((k.clone(), c.substitute(self.t_var(), u)?.truncate_vars(n)?)))
            .collect::<Result<Vec<_>>>()?;
        Form::from_components(m, n, w.degree(), comps)
    }

    /// `H(α + β∧ωᵗ) = (−1)^{deg β} ∫₀¹ β dt`, the sign making `H d̃ + d H = Ĩ₁* − Ĩ₀*`.
    pub fn homotopy(&self, w: &Form) -> Result<Form> {
        let (m, n) = (self.base.rank(), self.base.nvars());
        if w.degree() == 0 {
            return Ok(Form::zero(m, n, 0));
        }
        let t = self.t_gen();
        let mut comps = Vec::new();
        for (key, c) in w.comps() {
            if key.last() != Some(&t) {
                continue;
            }
            let rest = key[..key.len() - 1].to_vec();
            let mut f = c.integrate_unit(self.t_var())?.truncate_vars(n)?;
            if rest.len() % 2 == 1 {
                f = -f;
            }
            comps.push((rest, f));
        }
        Form::from_components(m, n, w.degree() - 1, comps)
    }
}

#[derive(Clone, Debug)]
pub struct HomotopyReport {
    /// `H d̃ω̃ + d Hω̃ − (Ĩ₁* − Ĩ₀*)ω̃`.
    pub identity_residual: Form,
    /// `H d̃²ω̃ − d² Hω̃`.
    pub d2_residual: Form,
    /// Ideal membership of `Hω̃` when `ω̃ ∈ Λ⁽²⁾(Ẽ)` was certified.
    pub ideal_image: Option<Decision<IdealWitness>>,
}

impl HomotopyReport {
    pub fn passes(&self) -> bool {
        self.identity_residual.is_zero()
            && self.d2_residual.is_zero()
            && self.ideal_image.as_ref().is_none_or(Decision::is_yes)
    }
}

pub fn homotopy_identity_check(p: &ProductAlgebroid, w: &Form, maxdeg: u32) -> Result<HomotopyReport> {
    let (e, big) = (p.base(), p.product());
    let dw = w.differential(big)?;
    let lhs = &p.homotopy(&dw)?;
    let hw = p.homotopy(w)?;
    let dh = if w.degree() == 0 { Form::zero(e.rank(), e.nvars(), 0) } else { hw.differential(e)? };
    let rhs = &p.restrict(w, &Scalar::one())? - &p.restrict(w, &Scalar::zero())?;
    let identity_residual = &(lhs + &dh) - &rhs;
    let h_d2 = p.homotopy(&dw.differential(big)?)?;
    let d2_h = if w.degree() == 0 { Form::zero(e.rank(), e.nvars(), 1) } else { hw.d_squared(e)? };
    let d2_residual = &h_d2 - &d2_h;
    let ideal_image = match IdealBasis::new(big)?.contains(w, maxdeg)? {
        Decision::Yes(_) if w.degree() >= 4 => Some(IdealBasis::new(e)?.contains(&hw, maxdeg)?),
        _ => None,
    };
    Ok(HomotopyReport { identity_residual, d2_residual, ideal_image })
}

/// `∇̃ = (1−t)∇¹ + t∇²` on `Ẽ`, with `∇̃_{e_t} = 0`.
pub fn interpolated_connection(p: &ProductAlgebroid, c1: &EConnection, c2: &EConnection) -> Result<EConnection> {
    check_pair(c1, c2)?;
    let n = p.base().nvars();
    let r = c1.target_rank();
    let t = Poly::var(n + 1, n);
    let one_minus_t = &Poly::one(n + 1) - &t;
    let mut gamma: Vec<Vec<Section>> = c1
        .gammas()
        .iter()
        .zip(c2.gammas())
        .map(|(r1, r2)| {
            r1.iter()
                .zip(r2)
                .map(|(g1, g2)| &g1.extend_vars(1).scale(&one_minus_t) + &g2.extend_vars(1).scale(&t))
                .collect()
        })
        .collect();
    gamma.push(vec![Section::zero(r, n + 1); r]);
    EConnection::new(p.product().clone(), c1.target_names().to_vec(), gamma)
}

fn check_pair(c1: &EConnection, c2: &EConnection) -> Result<()> {
    let (a1, a2) = (c1.algebroid(), c2.algebroid());
    if a1.rank() != a2.rank() || a1.gen_names() != a2.gen_names() {
        return Err(Error::RankMismatch { expected: a1.rank(), got: a2.rank() });
    }
    if a1.nvars() != a2.nvars() {
        return Err(Error::BaseMismatch { expected: a1.nvars(), got: a2.nvars() });
    }
    if c1.target_rank() != c2.target_rank() {
        return Err(Error::RankMismatch { expected: c1.target_rank(), got: c2.target_rank() });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct TransgressionReport {
    pub k: usize,
    /// `Tr(R̄⁽²⁾)ᵏ − Tr(R̄⁽¹⁾)ᵏ`.
    pub difference: Form,
    /// `θ′ = H(Tr R̃ᵏ)`.
    pub theta: Form,
    /// `ω′ = H(d̃ Tr R̃ᵏ)`.
    pub ideal_part: Form,
    /// `difference − dθ′ − ω′`.
    pub residual: Form,
    pub ideal_membership: Decision<IdealWitness>,
}

impl TransgressionReport {
    pub fn identity_holds(&self) -> bool {
        self.residual.is_zero()
    }

    /// Certified weak exact.
    pub fn passes(&self) -> bool {
        self.identity_holds() && self.ideal_membership.is_yes()
    }

    /// Failed only because the bounded membership search gave up.
    pub fn inconclusive(&self) -> bool {
        self.identity_holds() && matches!(self.ideal_membership, Decision::NoWitnessWithin(_))
    }
}

pub fn transgression_check(c1: &EConnection, c2: &EConnection, k: usize, maxdeg: u32) -> Result<TransgressionReport> {
    check_pair(c1, c2)?;
    let e = Arc::new(c1.algebroid().clone());
    let p = product_algebroid(e.clone())?;
    let big = p.product().clone();
    let difference = &char_form(c2, k)? - &char_form(c1, k)?;
    let tilde = interpolated_connection(&p, c1, c2)?;
    let tr = char_form(&tilde, k)?;
    let theta = p.homotopy(&tr)?;
    let ideal_part = p.homotopy(&tr.differential(&big)?)?;
    let dtheta = theta.differential(&e)?;
    let residual = &(&difference - &dtheta) - &ideal_part;
    let ideal_membership = IdealBasis::new(&e)?.contains(&ideal_part, maxdeg)?;
    Ok(TransgressionReport { k, difference, theta, ideal_part, residual, ideal_membership })
}

#[derive(Clone, Debug)]
pub struct PullbackReport {
    pub k: usize,
    pub char_form: Form,
    pub pulled_back: Form,
    pub normal_char: Form,
    pub normal_pulled: Form,
}

impl PullbackReport {
    pub fn passes(&self) -> bool {
        self.normal_char == self.normal_pulled
    }

    pub fn equal_on_the_nose(&self) -> bool {
        self.char_form == self.pulled_back
    }
}

/// Compares `Tr R̄ᵏ` of the induced connection with `ρ*` of the base form, modulo `Λ⁽²⁾`.
pub fn pullback_consistency(
    a: Arc<Algebroid>,
    base_conn: &EConnection,
    k: usize,
    maxdeg: u32,
) -> Result<PullbackReport> {
    let induced = EConnection::induced(a.clone(), base_conn)?;
    let char_form = char_form(&induced, k)?;
    let base_form = char_form_on_base(base_conn, k)?;
    let pulled_back = pullback(&a, &base_form)?;
    let ideal = IdealBasis::new(&a)?;
    let normal_char = ideal.normal_form(&char_form, maxdeg);
    let normal_pulled = ideal.normal_form(&pulled_back, maxdeg);
    Ok(PullbackReport { k, char_form, pulled_back, normal_char, normal_pulled })
}

fn char_form_on_base(base_conn: &EConnection, k: usize) -> Result<Form> {
    let t = base_conn.algebroid();
    let n = t.nvars();
    if t.rank() != n || (0..n).any(|i| *t.anchor_of(i) != VectorField::coordinate(n, i)) {
        return Err(Error::Invalid("base connection must be a tangent(n) connection".into()));
    }
    char_form(base_conn, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn e0_conn(name: &str) -> EConnection {
        builtins::e0().connection(name).unwrap().clone()
    }

    #[test]
    fn flat_connection_is_trivial() {
        let c = e0_conn("flat");
        assert!(connection_forms(&c).is_zero());
        assert!(curvature_matrix(&c).is_zero());
        for k in 1..=3 {
            assert!(char_form(&c, k).unwrap().is_zero());
        }
    }

    #[test]
    fn cartan_and_dr_on_torsion_free() {
        let c = e0_conn("torsion_free");
        assert!(!curvature_matrix(&c).is_zero());
        assert!(cartan_residual(&c).unwrap().is_zero());
        assert!(dr_residual(&c).unwrap().is_zero());
        assert!(trace_commutator(&c, 1).unwrap().is_zero());
        assert!(trace_chain_residual(&c, 2).unwrap().is_zero());
        assert!(char_form(&c, 3).unwrap().is_zero());
    }

    #[test]
    fn torsion_free_forms_entries() {
        let c = e0_conn("torsion_free");
        let theta = connection_forms(&c);
        // ∇_{X11} X11 = 2 x1 X11, so θ₀₀ has 2x1 on ω⁰.
        assert_eq!(theta.entry(0, 0).component(&[0]), Poly::var(2, 0).scale(&int(2)));
    }

    #[test]
    fn product_shape_and_axioms() {
        let p = product_algebroid(Arc::new(builtins::e0().algebroid)).unwrap();
        assert_eq!((p.product().rank(), p.product().nvars()), (5, 3));
        assert!(p.product().check_axioms().passes());
        let t = p.product().gen_jacobiator(0, 1, 4);
        assert!(t.is_zero());
    }

    #[test]
    fn homotopy_examples() {
        let p = product_algebroid(Arc::new(builtins::e0().algebroid)).unwrap();
        let t = Poly::var(3, 2);
        let w = Form::monomial(5, 3, &[0, 4], t);
        let h = p.homotopy(&w).unwrap();
        assert_eq!(h, Form::monomial(4, 2, &[0], Poly::constant(2, crate::poly::rat(-1, 2))));
        let no_t = Form::monomial(5, 3, &[0, 1], Poly::var(3, 0));
        assert!(p.homotopy(&no_t).unwrap().is_zero());
        assert!(p.homotopy(&Form::function(5, Poly::one(3))).unwrap().is_zero());
        for w in [w, no_t, Form::function(5, &Poly::var(3, 2) * &Poly::var(3, 0))] {
            assert!(homotopy_identity_check(&p, &w, 0).unwrap().passes());
        }
    }

    #[test]
    fn transgression_flat_vs_torsion_free() {
        let (c1, c2) = (e0_conn("flat"), e0_conn("torsion_free"));
        for k in 1..=2 {
            let r = transgression_check(&c1, &c2, k, 2).unwrap();
            assert!(r.passes(), "k = {k}");
        }
        let same = transgression_check(&c2, &c2, 1, 0).unwrap();
        assert!(same.difference.is_zero() && same.passes());
    }

    #[test]
    fn pullback_with_tangent() {
        let t2 = Arc::new(builtins::tangent(2).algebroid);
        let x = Poly::var(2, 0);
        let base = EConnection::from_rules(
            t2.clone(),
            vec!["s1".into(), "s2".into()],
            [((1, 0), Section::new(vec![Poly::zero(2), x.clone()])), ((0, 1), Section::new(vec![x, Poly::zero(2)]))],
        )
        .unwrap();
        let r = pullback_consistency(t2, &base, 1, 0).unwrap();
        assert!(r.equal_on_the_nose());
        let e0 = Arc::new(builtins::e0().algebroid);
        let r = pullback_consistency(e0, &base, 1, 0).unwrap();
        assert!(r.passes());
    }
}
