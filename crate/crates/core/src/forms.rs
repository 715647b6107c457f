//! Alternating forms over the dual generator frame, the differential `d`,
//! the ideal `Λ⁽²⁾` generated by `d²ωᵅ`, and bounded witness searches for
//! closedness and exactness.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::algebroid::{Algebroid, Section};
use crate::error::{Error, Result};
use crate::linalg::EchelonBasis;
use crate::poly::{ideal_member, int, CoeffIdeal, Monomial, Poly, Scalar};
use crate::Decision;

/// Sorts `key` in place, returning the permutation sign, or `None` on a repeat.
pub fn sort_key(key: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..key.len() {
        let mut j = i;
        while j > 0 && key[j - 1] > key[j] {
            key.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && key[j - 1] == key[j] {
            return None;
        }
    }
    if key.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

/// All strictly increasing `k`-tuples in `0..n`.
pub fn index_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    rank: usize,
    nvars: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Poly>,
}

impl Form {
    pub fn zero(rank: usize, nvars: usize, degree: usize) -> Self {
        Form { rank, nvars, degree, comps: BTreeMap::new() }
    }

    pub fn function(rank: usize, f: Poly) -> Self {
        let mut out = Form::zero(rank, f.nvars(), 0);
        if !f.is_zero() {
            out.comps.insert(Vec::new(), f);
        }
        out
    }

    /// `ωⁱ`, dual to generator `i`.
    pub fn dual(rank: usize, nvars: usize, i: usize) -> Self {
        Form::monomial(rank, nvars, &[i], Poly::one(nvars))
    }

    /// `f · ω^{k₁} ∧ … ∧ ω^{kₚ}` for an arbitrary index list.
    pub fn monomial(rank: usize, nvars: usize, key: &[usize], f: Poly) -> Self {
        let mut out = Form::zero(rank, nvars, key.len());
        let mut k = key.to_vec();
        assert!(k.iter().all(|&i| i < rank), "index out of range");
        if let Some(sign) = sort_key(&mut k) {
            out.add_component(k, f.scale(&int(sign)));
        }
        out
    }

    /// Builds a form from components with arbitrary (unsorted) keys.
    pub fn from_components<I>(rank: usize, nvars: usize, degree: usize, comps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Poly)>,
    {
        let mut out = Form::zero(rank, nvars, degree);
        for (mut key, f) in comps {
            if key.len() != degree {
                return Err(Error::Shape(format!("component of degree {} in a {degree}-form", key.len())));
            }
            if let Some(&bad) = key.iter().find(|&&i| i >= rank) {
                return Err(Error::GeneratorOutOfRange { index: bad, rank });
            }
            if f.nvars() != nvars {
                return Err(Error::VarCountMismatch { left: nvars, right: f.nvars() });
            }
            if let Some(sign) = sort_key(&mut key) {
                out.add_component(key, f.scale(&int(sign)));
            }
        }
        Ok(out)
    }

    fn add_component(&mut self, key: Vec<usize>, f: Poly) {
        if f.is_zero() {
            return;
        }
        match self.comps.get_mut(&key) {
            Some(c) => {
                *c += &f;
                if c.is_zero() {
                    self.comps.remove(&key);
                }
            }
            None => {
                self.comps.insert(key, f);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn comps(&self) -> &BTreeMap<Vec<usize>, Poly> {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Component on an arbitrary index list, with the alternating sign.
    pub fn component(&self, key: &[usize]) -> Poly {
        let mut k = key.to_vec();
        match sort_key(&mut k) {
            Some(sign) => self.comps.get(&k).map_or_else(|| Poly::zero(self.nvars), |c| c.scale(&int(sign))),
            None => Poly::zero(self.nvars),
        }
    }

    fn check_same(&self, other: &Form) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: other.rank });
        }
        if self.nvars != other.nvars {
            return Err(Error::VarCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    fn check_algebroid(&self, a: &Algebroid) -> Result<()> {
        if self.rank != a.rank() {
            return Err(Error::RankMismatch { expected: a.rank(), got: self.rank });
        }
        if self.nvars != a.nvars() {
            return Err(Error::BaseMismatch { expected: a.nvars(), got: self.nvars });
        }
        Ok(())
    }

    pub fn scale(&self, f: &Poly) -> Form {
        let mut out = Form::zero(self.rank, self.nvars, self.degree);
        for (k, c) in &self.comps {
            out.add_component(k.clone(), c * f);
        }
        out
    }

    pub fn scale_scalar(&self, c: &Scalar) -> Form {
        self.map_coeffs(|p| Ok(p.scale(c))).expect("infallible")
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Result<Poly>) -> Result<Form> {
        let mut out = Form::zero(self.rank, self.nvars, self.degree);
        for (k, c) in &self.comps {
            out.add_component(k.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Graded-commutative exterior product.
    pub fn wedge(&self, other: &Form) -> Result<Form> {
        self.check_same(other)?;
        let mut out = Form::zero(self.rank, self.nvars, self.degree + other.degree);
        if self.degree + other.degree > self.rank {
            return Ok(out);
        }
        for (ka, ca) in &self.comps {
            for (kb, cb) in &other.comps {
                if ka.iter().any(|i| kb.binary_search(i).is_ok()) {
                    continue;
                }
                let inversions: usize = ka.iter().map(|a| kb.iter().filter(|&&b| b < *a).count()).sum();
                let mut key = ka.clone();
                key.extend_from_slice(kb);
                key.sort_unstable();
                let mut p = ca * cb;
                if inversions % 2 == 1 {
                    p = -p;
                }
                out.add_component(key, p);
            }
        }
        Ok(out)
    }

    /// `ω(X₁, …, X_k)` for arbitrary sections.
    pub fn evaluate(&self, args: &[Section]) -> Result<Poly> {
        if args.len() != self.degree {
            return Err(Error::Shape(format!("{}-form applied to {} sections", self.degree, args.len())));
        }
        let mut acc = Poly::zero(self.nvars);
        for (key, c) in &self.comps {
            let m: Vec<Vec<Poly>> =
                args.iter().map(|x| key.iter().map(|&i| x.coeff(i).clone()).collect()).collect();
            let det = poly_det(&m, self.nvars);
            if !det.is_zero() {
                acc += &(c * &det);
            }
        }
        Ok(acc)
    }

    /// The differential, evaluated on generator tuples:
    /// `dω(e₀..e_k) = Σ(−1)ⁱ ρ(eᵢ)ω(..êᵢ..) + Σ_{i<j}(−1)^{i+j} ω([eᵢ,eⱼ], ..êᵢ..êⱼ..)`.
    pub fn differential(&self, a: &Algebroid) -> Result<Form> {
        self.check_algebroid(a)?;
        let k = self.degree;
        let mut out = Form::zero(self.rank, self.nvars, k + 1);
        if k + 1 > self.rank || self.is_zero() {
            return Ok(out);
        }
        let structure = a.structure_pairs();
        for key in index_tuples(self.rank, k + 1) {
            let mut val = Poly::zero(self.nvars);
            for i in 0..=k {
                let mut rest = key.clone();
                rest.remove(i);
                let c = match self.comps.get(&rest) {
                    Some(c) => a.gen_derivative(key[i], c),
                    None => continue,
                };
                if i % 2 == 0 {
                    val += &c;
                } else {
                    val -= &c;
                }
            }
            for i in 0..=k {
                for j in i + 1..=k {
                    let Some(br) = structure.get(&(key[i], key[j])) else { continue };
                    let rest: Vec<usize> =
                        key.iter().enumerate().filter(|&(p, _)| p != i && p != j).map(|(_, &v)| v).collect();
                    let mut term = Poly::zero(self.nvars);
                    for (c, coeff) in br.coeffs().iter().enumerate() {
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut full = vec![c];
                        full.extend_from_slice(&rest);
                        let w = self.component(&full);
                        if !w.is_zero() {
                            term += &(coeff * &w);
                        }
                    }
                    if (i + j) % 2 == 0 {
                        val += &term;
                    } else {
                        val -= &term;
                    }
                }
            }
            out.add_component(key, val);
        }
        Ok(out)
    }

    pub fn d_squared(&self, a: &Algebroid) -> Result<Form> {
        self.differential(a)?.differential(a)
    }

    /// The 3-form `(X,Y,Z) ↦ ω(𝒥(X,Y,Z))` of a 1-form.
    pub fn compose_jacobiator(&self, a: &Algebroid) -> Result<Form> {
        self.check_algebroid(a)?;
        if self.degree != 1 {
            return Err(Error::Shape("composition with the Jacobiator needs a 1-form".into()));
        }
        let mut out = Form::zero(self.rank, self.nvars, 3);
        for key in index_tuples(self.rank, 3) {
            let j = a.gen_jacobiator(key[0], key[1], key[2]);
            out.add_component(key, self.evaluate(&[j])?);
        }
        Ok(out)
    }

    /// Appends `k` variables that do not occur.
    pub fn extend_vars(&self, k: usize) -> Form {
        let mut out = Form::zero(self.rank, self.nvars + k, self.degree);
        for (key, c) in &self.comps {
            out.add_component(key.clone(), c.extend_vars(k));
        }
        out
    }

    /// Same components over a larger frame with extra trailing generators.
    pub fn extend_rank(&self, rank: usize) -> Form {
        assert!(rank >= self.rank);
        Form { rank, nvars: self.nvars, degree: self.degree, comps: self.comps.clone() }
    }

    /// Renders in the DSL form syntax with generator and variable names.
    pub fn display_with(&self, gen_names: &[String], var_names: &[String]) -> String {
        if self.comps.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (key, c) in &self.comps {
            let wedge: Vec<String> = key.iter().map(|&i| format!("w({})", gen_names[i])).collect();
            let basis = wedge.join("^");
            let (neg, body) = if key.is_empty() {
                (false, format!("({})", c.display_with(var_names)))
            } else if c.is_monomial() {
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
                let body =
                    if factors.is_empty() { basis } else { format!("{} * {}", factors.join("*"), basis) };
                (s.is_negative(), body)
            } else {
                (false, format!("({}) * {}", c.display_with(var_names), basis))
            };
            match (out.is_empty(), neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }

    pub fn display_in(&self, a: &Algebroid) -> String {
        self.display_with(a.gen_names(), a.base().var_names())
    }
}

fn poly_det(m: &[Vec<Poly>], nvars: usize) -> Poly {
    match m.len() {
        0 => Poly::one(nvars),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Poly::zero(nvars);
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, p)| p.clone()).collect())
                    .collect();
                let t = &m[0][col] * &poly_det(&minor, nvars);
                if col % 2 == 0 {
                    acc += &t;
                } else {
                    acc -= &t;
                }
            }
            acc
        }
    }
}

impl<'a> Add<&'a Form> for &'a Form {
    type Output = Form;
    fn add(self, rhs: &'a Form) -> Form {
        self.check_same(rhs).expect("form shape");
        assert_eq!(self.degree, rhs.degree, "degree mismatch");
        let mut out = self.clone();
        for (k, c) in &rhs.comps {
            out.add_component(k.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Form> for &'a Form {
    type Output = Form;
    fn sub(self, rhs: &'a Form) -> Form {
        self + &(-rhs)
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form {
            rank: self.rank,
            nvars: self.nvars,
            degree: self.degree,
            comps: self.comps.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

/// Differential form on the base `ℝⁿ`, stored over the frame `dx¹, …, dxⁿ`.
pub type BaseForm = Form;

/// `(ρ*ω)(X₁,…,X_k) = ω(ρX₁,…,ρX_k)`.
pub fn pullback(a: &Algebroid, base_form: &BaseForm) -> Result<Form> {
    let n = a.nvars();
    if base_form.rank() != n || base_form.nvars() != n {
        return Err(Error::BaseMismatch { expected: n, got: base_form.rank() });
    }
    let k = base_form.degree();
    let mut out = Form::zero(a.rank(), n, k);
    if k > a.rank() {
        return Ok(out);
    }
    let fields: Vec<Section> = a.anchors().iter().map(|v| Section::new(v.comps().to_vec())).collect();
    for key in index_tuples(a.rank(), k) {
        let args: Vec<Section> = key.iter().map(|&i| fields[i].clone()).collect();
        out.add_component(key, base_form.evaluate(&args)?);
    }
    Ok(out)
}

/// Generators `d²ωᵅ` of the ideal `Λ⁽²⁾`.
#[derive(Clone, Debug)]
pub struct IdealBasis {
    rank: usize,
    nvars: usize,
    gens: Vec<Form>,
    monomial: bool,
}

/// Witness for `ω ∈ Λ⁽²⁾`: `ω = Σ ηᵅ ∧ d²ωᵅ`.
pub type IdealWitness = Vec<Form>;

impl IdealBasis {
    pub fn new(a: &Algebroid) -> Result<Self> {
        let gens = (0..a.rank())
            .map(|i| Form::dual(a.rank(), a.nvars(), i).d_squared(a))
            .collect::<Result<Vec<_>>>()?;
        let monomial =
            gens.iter().all(|g| g.is_zero() || (g.comps.len() == 1 && g.comps.values().all(Poly::is_monomial)));
        Ok(IdealBasis { rank: a.rank(), nvars: a.nvars(), gens, monomial })
    }

    pub fn generators(&self) -> &[Form] {
        &self.gens
    }

    /// Whether the exact per-component fast path applies.
    pub fn is_monomial(&self) -> bool {
        self.monomial
    }

    pub fn is_zero(&self) -> bool {
        self.gens.iter().all(Form::is_zero)
    }

    /// Rebuilds `Σ ηᵅ ∧ d²ωᵅ`.
    pub fn combine(&self, witness: &[Form]) -> Result<Form> {
        let degree = witness.first().map_or(3, |w| w.degree() + 3);
        let mut out = Form::zero(self.rank, self.nvars, degree);
        for (eta, g) in witness.iter().zip(&self.gens) {
            out = &out + &eta.wedge(g)?;
        }
        Ok(out)
    }

    fn zero_witness(&self, degree: usize) -> IdealWitness {
        vec![Form::zero(self.rank, self.nvars, degree.saturating_sub(3)); self.gens.len()]
    }

    /// Decides `ω ∈ Λ⁽²⁾`; exact on the monomial fast path, otherwise a
    /// search over `ηᵅ` with coefficients of degree ≤ `maxdeg`.
    pub fn contains(&self, w: &Form, maxdeg: u32) -> Result<Decision<IdealWitness>> {
        if w.rank != self.rank || w.nvars != self.nvars {
            return Err(Error::RankMismatch { expected: self.rank, got: w.rank });
        }
        if w.is_zero() {
            return Ok(Decision::Yes(self.zero_witness(w.degree)));
        }
        if w.degree < 3 || self.is_zero() {
            return Ok(Decision::No);
        }
        if self.monomial {
            return self.contains_monomial(w);
        }
        let (basis, labels) = self.module_columns(w.degree, maxdeg);
        match basis.solve(&form_vec(w)) {
            Some(x) => {
                let mut eta = self.zero_witness(w.degree);
                for ((alpha, key, mono), c) in labels.into_iter().zip(x) {
                    if !c.is_zero() {
                        eta[alpha].add_component(key, Poly::term(self.nvars, mono, c));
                    }
                }
                Ok(Decision::Yes(eta))
            }
            None => Ok(Decision::NoWitnessWithin(maxdeg)),
        }
    }

    /// Per-component monomial data `(α, sign·c, m, support)` of the generators.
    fn monomial_gens(&self) -> Vec<(usize, Scalar, Monomial, Vec<usize>)> {
        self.gens
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_zero())
            .map(|(alpha, g)| {
                let (key, c) = g.comps.iter().next().expect("one component");
                let (m, s) = c.terms().next().expect("monomial");
                (alpha, s.clone(), m.clone(), key.clone())
            })
            .collect()
    }

    fn contains_monomial(&self, w: &Form) -> Result<Decision<IdealWitness>> {
        let gens = self.monomial_gens();
        let mut eta = self.zero_witness(w.degree);
        for (key, c) in &w.comps {
            let usable: Vec<&(usize, Scalar, Monomial, Vec<usize>)> =
                gens.iter().filter(|(_, _, _, sup)| sup.iter().all(|i| key.binary_search(i).is_ok())).collect();
            let ideal =
                CoeffIdeal::new(usable.iter().map(|(_, _, m, _)| Poly::term(self.nvars, m.clone(), int(1))).collect())?;
            match ideal_member(c, &ideal, 0)? {
                Decision::Yes(cof) => {
                    for ((alpha, s, _, sup), q) in usable.iter().zip(cof) {
                        if q.is_zero() {
                            continue;
                        }
                        let rest: Vec<usize> = key.iter().copied().filter(|i| !sup.contains(i)).collect();
                        // e^rest ∧ e^sup = sign · e^key
                        let mut full = rest.clone();
                        full.extend_from_slice(sup);
                        let sign = sort_key(&mut full).expect("disjoint");
                        let f = q.scale(&(Scalar::one() / (s * int(sign))));
                        eta[*alpha].add_component(rest, f);
                    }
                }
                _ => return Ok(Decision::No),
            }
        }
        Ok(Decision::Yes(eta))
    }

    /// Columns `m · ω^K ∧ d²ωᵅ` spanning degree-`degree` ideal elements.
    fn module_columns(
        &self,
        degree: usize,
        maxdeg: u32,
    ) -> (EchelonBasis<(Vec<usize>, Monomial)>, Vec<(usize, Vec<usize>, Monomial)>) {
        let monos = Monomial::all_up_to(self.nvars, maxdeg);
        let mut cols = Vec::new();
        let mut labels = Vec::new();
        for (alpha, g) in self.gens.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            for key in index_tuples(self.rank, degree - 3) {
                let base = Form::monomial(self.rank, self.nvars, &key, Poly::one(self.nvars)).wedge(g).expect("shape");
                if base.is_zero() {
                    continue;
                }
                for m in &monos {
                    cols.push(form_vec(&base.scale(&Poly::term(self.nvars, m.clone(), int(1)))));
                    labels.push((alpha, key.clone(), m.clone()));
                }
            }
        }
        let mut basis = EchelonBasis::new(cols.len());
        for (i, c) in cols.into_iter().enumerate() {
            basis.insert_column(i, c);
        }
        (basis, labels)
    }

    /// Canonical representative of `ω` modulo `Λ⁽²⁾`. Exact on the monomial
    /// fast path; otherwise modulo ideal elements with coefficients of degree ≤ `maxdeg`.
    pub fn normal_form(&self, w: &Form, maxdeg: u32) -> Form {
        if w.degree < 3 || self.is_zero() {
            return w.clone();
        }
        if self.monomial {
            let gens = self.monomial_gens();
            let mut out = Form::zero(w.rank, w.nvars, w.degree);
            for (key, c) in &w.comps {
                let divisors: Vec<&Monomial> = gens
                    .iter()
                    .filter(|(_, _, _, sup)| sup.iter().all(|i| key.binary_search(i).is_ok()))
                    .map(|(_, _, m, _)| m)
                    .collect();
                let kept = Poly::from_terms(
                    w.nvars,
                    c.terms()
                        .filter(|(m, _)| !divisors.iter().any(|d| d.divides(m)))
                        .map(|(m, s)| (s.clone(), m.exps().to_vec())),
                );
                out.add_component(key.clone(), kept);
            }
            return out;
        }
        let (basis, _) = self.module_columns(w.degree, maxdeg);
        let v = basis.normal_form(&form_vec(w));
        let mut out = Form::zero(w.rank, w.nvars, w.degree);
        for ((key, m), c) in v {
            out.add_component(key, Poly::term(w.nvars, m, c));
        }
        out
    }
}

fn form_vec(w: &Form) -> BTreeMap<(Vec<usize>, Monomial), Scalar> {
    let mut out = BTreeMap::new();
    for (k, c) in &w.comps {
        for (m, s) in c.terms() {
            out.insert((k.clone(), m.clone()), s.clone());
        }
    }
    out
}

pub fn lambda2_basis(a: &Algebroid) -> Result<IdealBasis> {
    IdealBasis::new(a)
}

pub fn in_lambda2(a: &Algebroid, w: &Form, maxdeg: u32) -> Result<Decision<IdealWitness>> {
    IdealBasis::new(a)?.contains(w, maxdeg)
}

pub fn normal_form_mod_lambda2(a: &Algebroid, w: &Form, maxdeg: u32) -> Result<Form> {
    Ok(IdealBasis::new(a)?.normal_form(w, maxdeg))
}

/// Searches `Σ c · columnᵢ = target` where columns are `f(m · ω^K)` over
/// keys of `degree` and monomials of degree ≤ `maxdeg`.
fn bounded_preimage(
    a: &Algebroid,
    degree: usize,
    maxdeg: u32,
    target: &Form,
    extra: Option<&IdealBasis>,
    f: impl Fn(&Form) -> Result<Form>,
) -> Result<Option<(Form, IdealWitness)>> {
    let n = a.nvars();
    let m = a.rank();
    let monos = Monomial::all_up_to(n, maxdeg);
    let mut cols = Vec::new();
    let mut labels: Vec<(Option<usize>, Vec<usize>, Monomial)> = Vec::new();
    for key in index_tuples(m, degree) {
        for mono in &monos {
            let base = Form::monomial(m, n, &key, Poly::term(n, mono.clone(), int(1)));
            let img = f(&base)?;
            if img.is_zero() {
                continue;
            }
            cols.push(form_vec(&img));
            labels.push((None, key.clone(), mono.clone()));
        }
    }
    if let Some(ideal) = extra.filter(|i| target.degree >= 3 && !i.is_zero()) {
        for (alpha, g) in ideal.gens.iter().enumerate() {
            for key in index_tuples(m, target.degree - 3) {
                let base = Form::monomial(m, n, &key, Poly::one(n)).wedge(g)?;
                if base.is_zero() {
                    continue;
                }
                for mono in &monos {
                    cols.push(form_vec(&base.scale(&Poly::term(n, mono.clone(), int(1)))));
                    labels.push((Some(alpha), key.clone(), mono.clone()));
                }
            }
        }
    }
    let mut basis = EchelonBasis::new(cols.len());
    for (i, c) in cols.into_iter().enumerate() {
        basis.insert_column(i, c);
    }
    let Some(x) = basis.solve(&form_vec(target)) else { return Ok(None) };
    let mut theta = Form::zero(m, n, degree);
    let mut eta = vec![Form::zero(m, n, target.degree.saturating_sub(3)); m];
    for ((alpha, key, mono), c) in labels.into_iter().zip(x) {
        if c.is_zero() {
            continue;
        }
        let p = Poly::term(n, mono, c);
        match alpha {
            None => theta.add_component(key, p),
            Some(al) => eta[al].add_component(key, p),
        }
    }
    Ok(Some((theta, eta)))
}

/// `∃θ: dω = d²θ`.
pub fn strong_closed(a: &Algebroid, w: &Form, maxdeg: u32) -> Result<Decision<Form>> {
    let dw = w.differential(a)?;
    if dw.is_zero() || w.degree == 0 {
        let zero = Form::zero(a.rank(), a.nvars(), w.degree.saturating_sub(1));
        return Ok(if dw.is_zero() { Decision::Yes(zero) } else { Decision::No });
    }
    match bounded_preimage(a, w.degree - 1, maxdeg, &dw, None, |f| f.d_squared(a))? {
        Some((theta, _)) => Ok(Decision::Yes(theta)),
        None if IdealBasis::new(a)?.is_zero() => Ok(Decision::No),
        None => Ok(Decision::NoWitnessWithin(maxdeg)),
    }
}

/// `dω ∈ Λ⁽²⁾`.
pub fn weak_closed(a: &Algebroid, w: &Form, maxdeg: u32) -> Result<Decision<IdealWitness>> {
    in_lambda2(a, &w.differential(a)?, maxdeg)
}

/// `∃θ′: ω = dθ′`, searched with coefficients of degree ≤ `maxdeg`.
pub fn strong_exact(a: &Algebroid, w: &Form, maxdeg: u32) -> Result<Decision<Form>> {
    if w.is_zero() {
        return Ok(Decision::Yes(Form::zero(a.rank(), a.nvars(), w.degree.saturating_sub(1))));
    }
    if w.degree == 0 {
        return Ok(Decision::No);
    }
    match bounded_preimage(a, w.degree - 1, maxdeg, w, None, |f| f.differential(a))? {
        Some((theta, _)) => Ok(Decision::Yes(theta)),
        None => Ok(Decision::NoWitnessWithin(maxdeg)),
    }
}

/// Witness for weak exactness: `ω = ω′ + dθ′` with `ω′ ∈ Λ⁽²⁾`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakExactWitness {
    pub theta: Form,
    pub ideal_part: Form,
}

pub fn weak_exact(a: &Algebroid, w: &Form, maxdeg: u32) -> Result<Decision<WeakExactWitness>> {
    let zero_theta = Form::zero(a.rank(), a.nvars(), w.degree.saturating_sub(1));
    if w.is_zero() {
        return Ok(Decision::Yes(WeakExactWitness { theta: zero_theta, ideal_part: w.clone() }));
    }
    if w.degree == 0 {
        return Ok(Decision::No);
    }
    let ideal = IdealBasis::new(a)?;
    if let Decision::Yes(_) = ideal.contains(w, maxdeg)? {
        return Ok(Decision::Yes(WeakExactWitness { theta: zero_theta, ideal_part: w.clone() }));
    }
    match bounded_preimage(a, w.degree - 1, maxdeg, w, Some(&ideal), |f| f.differential(a))? {
        Some((theta, eta)) => {
            let ideal_part = if w.degree >= 3 { ideal.combine(&eta)? } else { Form::zero(a.rank(), a.nvars(), w.degree) };
            Ok(Decision::Yes(WeakExactWitness { theta, ideal_part }))
        }
        None => Ok(Decision::NoWitnessWithin(maxdeg)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::poly::int;

    fn x(i: usize) -> Poly {
        Poly::var(2, i)
    }

    fn w(i: usize) -> Form {
        Form::dual(4, 2, i)
    }

    #[test]
    fn wedge_basics() {
        let a = w(0).wedge(&w(1)).unwrap();
        assert_eq!(a.comps().len(), 1);
        assert_eq!(a.component(&[0, 1]), Poly::one(2));
        assert_eq!(a.component(&[1, 0]), Poly::from_int(2, -1));
        let om = &w(0).scale(&x(0)) + &w(2);
        assert!(om.wedge(&om).unwrap().is_zero());
        let f = Form::function(4, x(1));
        assert_eq!(f.wedge(&om).unwrap(), om.scale(&x(1)));
    }

    #[test]
    fn differential_examples() {
        let e0 = builtins::e0().algebroid;
        let df = Form::function(4, x(0)).differential(&e0).unwrap();
        assert_eq!(df, &w(0).scale(&x(0).pow(2)) + &w(2).scale(&x(1).pow(2)));
        let d = w(1).differential(&e0).unwrap();
        let expected = &Form::monomial(4, 2, &[0, 1], x(0).scale(&int(-2)))
            + &Form::monomial(4, 2, &[1, 3], x(1).scale(&int(-2)));
        assert_eq!(d, expected);
        assert!(Form::function(4, Poly::from_int(2, 7)).differential(&e0).unwrap().is_zero());
    }

    #[test]
    fn d_squared_examples() {
        let e0 = builtins::e0().algebroid;
        assert!(Form::function(4, &x(0) * &x(1).pow(3)).d_squared(&e0).unwrap().is_zero());
        let d2 = w(1).d_squared(&e0).unwrap();
        assert_eq!(d2, Form::monomial(4, 2, &[0, 1, 2], x(1).pow(2).scale(&int(-2))));
        assert_eq!(d2, -&w(1).compose_jacobiator(&e0).unwrap());
        let three = Form::monomial(4, 2, &[0, 1, 3], x(0).pow(3));
        assert!(three.d_squared(&e0).unwrap().is_zero());
    }

    #[test]
    fn lambda2_on_e0() {
        let e0 = builtins::e0().algebroid;
        let basis = lambda2_basis(&e0).unwrap();
        assert!(basis.is_monomial());
        for g in basis.generators() {
            assert_eq!(g.comps().len(), 1);
            let key = g.comps().keys().next().unwrap();
            assert!(key == &vec![0, 1, 2] || key == &vec![1, 2, 3]);
        }
        let d2 = w(1).d_squared(&e0).unwrap();
        let dec = basis.contains(&d2, 0).unwrap();
        assert_eq!(basis.combine(dec.witness().unwrap()).unwrap(), d2);
        let top = Form::monomial(4, 2, &[0, 1, 2, 3], &x(0) * &x(1));
        assert_eq!(basis.contains(&top, 4).unwrap(), Decision::No);
        assert!(basis.contains(&Form::zero(4, 2, 3), 0).unwrap().is_yes());
        assert!(basis.normal_form(&d2, 0).is_zero());
    }

    #[test]
    fn normal_form_fast_path() {
        let e0 = builtins::e0().algebroid;
        let basis = lambda2_basis(&e0).unwrap();
        let two = w(0).wedge(&w(1)).unwrap();
        assert_eq!(basis.normal_form(&two, 0), two);
        let mixed = &w(3).d_squared(&e0).unwrap().scale(&x(1)) + &Form::monomial(4, 2, &[0, 1, 2], x(0));
        assert_eq!(basis.normal_form(&mixed, 0), Form::monomial(4, 2, &[0, 1, 2], x(0)));
    }

    #[test]
    fn pullback_examples() {
        let e0 = builtins::e0().algebroid;
        let dx1 = Form::dual(2, 2, 0);
        let p = pullback(&e0, &dx1).unwrap();
        assert_eq!(p, &w(0).scale(&x(0).pow(2)) + &w(2).scale(&x(1).pow(2)));
        let f = Form::function(2, x(1));
        assert_eq!(pullback(&e0, &f).unwrap(), Form::function(4, x(1)));
        let t2 = builtins::tangent(2).algebroid;
        let om = Form::monomial(2, 2, &[0, 1], x(0));
        assert_eq!(pullback(&t2, &om).unwrap(), om);
    }

    #[test]
    fn closedness_trivial_cases() {
        let e0 = builtins::e0().algebroid;
        let c = Form::function(4, Poly::from_int(2, 3));
        assert!(strong_closed(&e0, &c, 2).unwrap().is_yes());
        assert!(weak_closed(&e0, &Form::zero(4, 2, 2), 0).unwrap().is_yes());
        let theta = &w(0).scale(&x(1)) + &w(3);
        let dt = theta.differential(&e0).unwrap();
        let we = weak_exact(&e0, &dt, 2).unwrap();
        let wit = we.witness().unwrap();
        assert_eq!(&wit.theta.differential(&e0).unwrap() + &wit.ideal_part, dt);
        assert!(strong_exact(&e0, &dt, 2).unwrap().is_yes());
    }
}
