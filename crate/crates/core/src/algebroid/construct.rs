use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Algebroid, BracketModifier, Section, VectorField};
use crate::error::{Error, Result};
use crate::linalg::{self, EchelonBasis};
use crate::poly::{int, Monomial, Poly, Scalar};

#[derive(Clone, Debug)]
pub enum SubalgebroidOutcome {
    Closed(Algebroid),
    /// The bracket of generators `pair` has no representation with
    /// coefficients of degree ≤ `max_degree`.
    NotClosed { pair: (usize, usize), bracket: Section, max_degree: u32 },
}

impl SubalgebroidOutcome {
    pub fn closed(&self) -> Option<&Algebroid> {
        match self {
            SubalgebroidOutcome::Closed(a) => Some(a),
            SubalgebroidOutcome::NotClosed { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismReport {
    /// `ρ_B(f eᵢ) − ρ_A(eᵢ)` per source generator.
    pub anchors: Vec<(usize, VectorField)>,
    /// `f([eᵢ,eⱼ]_A) − [f eᵢ, f eⱼ]_B` per source pair.
    pub brackets: Vec<((usize, usize), Section)>,
}

impl MorphismReport {
    pub fn passes(&self) -> bool {
        self.anchors.iter().all(|(_, v)| v.is_zero()) && self.brackets.iter().all(|(_, s)| s.is_zero())
    }

    pub fn failing_pairs(&self) -> impl Iterator<Item = &((usize, usize), Section)> {
        self.brackets.iter().filter(|(_, s)| !s.is_zero())
    }
}

/// Verifies that `f` (a `rank(B) × rank(A)` matrix over the identity base map)
/// is an algebroid morphism `A → B` on generators.
pub fn check_morphism(f: &[Vec<Poly>], a: &Algebroid, b: &Algebroid) -> Result<MorphismReport> {
    if f.len() != b.rank() {
        return Err(Error::Shape(format!("morphism needs {} rows, got {}", b.rank(), f.len())));
    }
    if let Some(r) = f.iter().find(|r| r.len() != a.rank()) {
        return Err(Error::Shape(format!("morphism needs {} columns, got {}", a.rank(), r.len())));
    }
    if a.nvars() != b.nvars() {
        return Err(Error::BaseMismatch { expected: a.nvars(), got: b.nvars() });
    }
    let map = |s: &Section| -> Section {
        Section::new(
            f.iter()
                .map(|row| {
                    let mut acc = Poly::zero(a.nvars());
                    for (c, x) in row.iter().zip(s.coeffs()) {
                        if !c.is_zero() && !x.is_zero() {
                            acc += &(c * x);
                        }
                    }
                    acc
                })
                .collect(),
        )
    };
    let images: Vec<Section> = (0..a.rank()).map(|i| map(&a.gen(i))).collect();
    let mut anchors = Vec::new();
    for (i, img) in images.iter().enumerate() {
        anchors.push((i, &b.anchor_apply(img)? - a.anchor_of(i)));
    }
    let mut brackets = Vec::new();
    for i in 0..a.rank() {
        for j in i + 1..a.rank() {
            let lhs = map(a.structure(i, j));
            let rhs = b.bracket(&images[i], &images[j])?;
            brackets.push(((i, j), &lhs - &rhs));
        }
    }
    Ok(MorphismReport { anchors, brackets })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// The Jacobiator already vanishes on the triple; `B = 0` works.
    TriviallyFeasible,
    Infeasible,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct InfeasibilityCertificate {
    pub triple: (usize, usize, usize),
    pub max_degree: u32,
    pub parameters: usize,
    pub jacobiator: Section,
    pub jacobiator_min_degree: Option<u32>,
    /// Least base-variable degree over all terms of the modifier contribution.
    pub modifier_min_degree: Option<u32>,
    /// Whether the generic modified Jacobiator equals `𝒥 − 𝓑` on the triple.
    pub modifier_identity: bool,
    pub verdict: Feasibility,
}

impl Algebroid {
    /// Bracket `[eᵢ,eⱼ] + B(eᵢ,eⱼ)`; rejects modifiers that the anchor does not kill.
    pub fn modify_bracket(&self, b: &BracketModifier) -> Result<Algebroid> {
        let mut pairs = self.structure_pairs();
        for (&(i, j), v) in b.entries() {
            if i >= self.rank() || j >= self.rank() {
                return Err(Error::GeneratorOutOfRange { index: j, rank: self.rank() });
            }
            if !self.anchor_apply(v)?.is_zero() {
                return Err(Error::ModifierNotKernel(i, j));
            }
            let e = pairs.entry((i, j)).or_insert_with(|| Section::zero(self.rank(), self.nvars()));
            *e = &*e + v;
        }
        Algebroid::new(
            self.name().to_string(),
            self.base().clone(),
            self.gen_names().to_vec(),
            self.anchors().to_vec(),
            pairs,
        )
    }

    /// Induced structure on the span of `gens`, if it closes at degree ≤ `maxdeg`.
    pub fn subalgebroid_restrict(
        &self,
        gens: &[Section],
        names: &[String],
        maxdeg: u32,
    ) -> Result<SubalgebroidOutcome> {
        if gens.len() != names.len() {
            return Err(Error::Shape("one name per generator".into()));
        }
        for g in gens {
            self.check_section(g)?;
        }
        if !generically_independent(gens, self.nvars())? {
            return Err(Error::DependentGenerators);
        }
        let n = self.nvars();
        let k = gens.len();
        let monos = Monomial::all_up_to(n, maxdeg);
        let mut labels = Vec::new();
        let mut basis = EchelonBasis::new(k * monos.len());
        for (c, g) in gens.iter().enumerate() {
            for mono in &monos {
                let idx = labels.len();
                basis.insert_column(idx, section_vec(&g.scale(&Poly::term(n, mono.clone(), int(1)))));
                labels.push((c, mono.clone()));
            }
        }
        let mut brackets = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                let br = self.bracket(&gens[a], &gens[b])?;
                let Some(x) = basis.solve(&section_vec(&br)) else {
                    return Ok(SubalgebroidOutcome::NotClosed { pair: (a, b), bracket: br, max_degree: maxdeg });
                };
                let mut coeffs = vec![Poly::zero(n); k];
                for ((c, mono), v) in labels.iter().zip(x) {
                    if !v.is_zero() {
                        coeffs[*c] += &Poly::term(n, mono.clone(), v);
                    }
                }
                brackets.push(((a, b), Section::new(coeffs)));
            }
        }
        let anchor = gens.iter().map(|g| self.anchor_apply(g)).collect::<Result<Vec<_>>>()?;
        let sub = Algebroid::new(
            format!("{}|sub", self.name()),
            self.base().clone(),
            names.to_vec(),
            anchor,
            brackets,
        )?;
        Ok(SubalgebroidOutcome::Closed(sub))
    }

    /// Degree bookkeeping for Lie modifications `[·,·] + B` with
    /// `B(eₐ,e_b) = Σ_α B^α_{ab} K_α` over the kernel sections `kernel`.
    ///
    /// Each `B^α_{ab}` is a generic polynomial of degree ≤ `maxdeg` whose
    /// coefficients become extra ring variables that the anchor ignores.
    pub fn lie_infeasibility_certificate(
        &self,
        kernel: &[Section],
        triple: (usize, usize, usize),
        maxdeg: u32,
    ) -> Result<InfeasibilityCertificate> {
        let (i, j, k) = triple;
        let m = self.rank();
        let n = self.nvars();
        if let Some(&bad) = [i, j, k].iter().find(|&&x| x >= m) {
            return Err(Error::GeneratorOutOfRange { index: bad, rank: m });
        }
        for (idx, s) in kernel.iter().enumerate() {
            self.check_section(s)?;
            if !self.anchor_apply(s)?.is_zero() {
                return Err(Error::ModifierNotKernel(idx, idx));
            }
        }
        let jac = self.checked_jacobiator(&self.gen(i), &self.gen(j), &self.gen(k))?;
        let jac_min = jac.min_degree();
        let mut cert = InfeasibilityCertificate {
            triple,
            max_degree: maxdeg,
            parameters: 0,
            jacobiator: jac.clone(),
            jacobiator_min_degree: jac_min,
            modifier_min_degree: None,
            modifier_identity: true,
            verdict: Feasibility::TriviallyFeasible,
        };
        if jac.is_zero() || kernel.is_empty() {
            if !jac.is_zero() {
                cert.verdict = Feasibility::Infeasible;
            }
            return Ok(cert);
        }

        let monos = Monomial::all_up_to(n, maxdeg);
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
        let nparams = pairs.len() * kernel.len() * monos.len();
        let names: Vec<String> = (0..nparams).map(|p| format!("b{p}")).collect();
        let ext = self.extend_vars(&names)?;
        let total = n + nparams;
        let kernel_ext: Vec<Section> = kernel.iter().map(|s| s.extend_vars(nparams)).collect();
        let mut entries = Vec::new();
        let mut p = 0;
        for &pair in &pairs {
            let mut value = Section::zero(m, total);
            for kg in &kernel_ext {
                let mut coeff = Poly::zero(total);
                for mono in &monos {
                    let mut exps = mono.exps().to_vec();
                    exps.resize(total, 0);
                    exps[n + p] = 1;
                    coeff += &Poly::term(total, Monomial::new(exps), int(1));
                    p += 1;
                }
                value.add_scaled(&coeff, kg);
            }
            entries.push((pair, value));
        }
        let bmod = BracketModifier::new(entries)?;
        let (x, y, z) = (ext.gen(i), ext.gen(j), ext.gen(k));
        let contribution = modifier_contribution(&ext, &bmod, &x, &y, &z)?;
        let base_min = contribution
            .coeffs()
            .iter()
            .flat_map(|c| c.terms().map(|(mono, _)| mono.exps()[..n].iter().sum::<u32>()))
            .min();
        let modified = ext.modify_bracket(&bmod)?;
        let jac_mod = modified.jacobiator(&x, &y, &z)?;
        let expected = &jac.extend_vars(nparams) - &contribution;
        cert.parameters = nparams;
        cert.modifier_min_degree = base_min;
        cert.modifier_identity = jac_mod == expected;
        cert.verdict = match (jac_min, base_min) {
            (Some(_), None) => Feasibility::Infeasible,
            (Some(jd), Some(bd)) if bd > jd => Feasibility::Infeasible,
            _ => Feasibility::Inconclusive,
        };
        Ok(cert)
    }
}

/// `Σ_cyc ([B(X,Y),Z] + B([X,Y],Z) + B(B(X,Y),Z))`.
pub(crate) fn modifier_contribution(
    a: &Algebroid,
    b: &BracketModifier,
    x: &Section,
    y: &Section,
    z: &Section,
) -> Result<Section> {
    let term = |x: &Section, y: &Section, z: &Section| -> Result<Section> {
        let bxy = b.apply(x, y);
        let t1 = a.bracket(&bxy, z)?;
        let t2 = b.apply(&a.bracket(x, y)?, z);
        let t3 = b.apply(&bxy, z);
        Ok(&(&t1 + &t2) + &t3)
    };
    let s1 = term(x, y, z)?;
    let s2 = term(y, z, x)?;
    let s3 = term(z, x, y)?;
    Ok(&(&s1 + &s2) + &s3)
}

fn section_vec(s: &Section) -> BTreeMap<(usize, Monomial), Scalar> {
    let mut out = BTreeMap::new();
    for (i, c) in s.coeffs().iter().enumerate() {
        for (mono, v) in c.terms() {
            out.insert((i, mono.clone()), v.clone());
        }
    }
    out
}

/// Full rank at one of a few fixed points implies independence over the ring.
fn generically_independent(gens: &[Section], nvars: usize) -> Result<bool> {
    const PRIMES: [i64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    for shift in 0..4 {
        let point: Vec<Scalar> = (0..nvars).map(|v| int(PRIMES[(v + shift) % 8] + shift as i64)).collect();
        let rows = gens
            .iter()
            .map(|g| g.coeffs().iter().map(|c| c.eval(&point)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if linalg::rank(&rows) == gens.len() {
            return Ok(true);
        }
    }
    Ok(gens.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn x(i: usize) -> Poly {
        Poly::var(2, i)
    }

    #[test]
    fn zero_modifier_is_identity() {
        let e0 = builtins::e0().algebroid;
        let b = BracketModifier::new([]).unwrap();
        assert_eq!(e0.modify_bracket(&b).unwrap(), e0);
    }

    #[test]
    fn kernel_modifier_stays_non_lie() {
        let b0 = builtins::e0();
        let k2 = b0.section("Xc2").unwrap().clone();
        let b = BracketModifier::new([((1, 2), k2)]).unwrap();
        let m = b0.algebroid.modify_bracket(&b).unwrap();
        assert!(m.check_axioms().passes());
        assert!(!m.check_lie().is_lie());
    }

    #[test]
    fn non_kernel_modifier_rejected() {
        let e0 = builtins::e0().algebroid;
        let b = BracketModifier::new([((0, 3), e0.gen(0))]).unwrap();
        assert_eq!(e0.modify_bracket(&b).unwrap_err(), Error::ModifierNotKernel(0, 3));
    }

    #[test]
    fn e0_doubleprime_closure() {
        let b0 = builtins::e0();
        let gens = [b0.section("A1").unwrap().clone(), b0.section("B1").unwrap().clone()];
        let names = vec!["A1".to_string(), "B1".to_string()];
        let out = b0.algebroid.subalgebroid_restrict(&gens, &names, 2).unwrap();
        let sub = out.closed().expect("closed");
        // [A1, B1] = -2 x2 A1 + 2 x1 B1
        assert_eq!(sub.format_section(sub.structure(0, 1)), "-2*x2*A1 + 2*x1*B1");
        assert!(sub.check_axioms().passes());
        assert!(sub.check_lie().is_lie());
    }

    #[test]
    fn single_generator_is_abelian() {
        let e0 = builtins::e0().algebroid;
        let out = e0.subalgebroid_restrict(&[e0.gen(0)], &["X11".into()], 0).unwrap();
        assert!(out.closed().unwrap().structure_pairs().is_empty());
    }

    #[test]
    fn dependent_generators_rejected() {
        let e0 = builtins::e0().algebroid;
        let g = e0.gen(0);
        let r = e0.subalgebroid_restrict(&[g.clone(), g.scale(&x(0))], &["a".into(), "b".into()], 1);
        assert_eq!(r.unwrap_err(), Error::DependentGenerators);
    }

    #[test]
    fn non_closed_pair_reported() {
        let e0 = builtins::e0().algebroid;
        let out = e0.subalgebroid_restrict(&[e0.gen(1), e0.gen(2)], &["a".into(), "b".into()], 3).unwrap();
        match out {
            SubalgebroidOutcome::NotClosed { pair, .. } => assert_eq!(pair, (0, 1)),
            SubalgebroidOutcome::Closed(_) => panic!("[X21, X12] leaves the span"),
        }
    }

    #[test]
    fn identity_morphism_passes() {
        let e0 = builtins::e0().algebroid;
        let id: Vec<Vec<Poly>> =
            (0..4).map(|i| (0..4).map(|j| Poly::from_int(2, (i == j) as i64)).collect()).collect();
        assert!(check_morphism(&id, &e0, &e0).unwrap().passes());
        assert!(check_morphism(&id[..3], &e0, &e0).is_err());
    }

    #[test]
    fn certificate_on_vanishing_triple_is_trivial() {
        let b0 = builtins::e0();
        let kernel = [b0.section("Xc1").unwrap().clone(), b0.section("Xc2").unwrap().clone()];
        let c = b0.algebroid.lie_infeasibility_certificate(&kernel, (0, 1, 3), 1).unwrap();
        assert_eq!(c.verdict, Feasibility::TriviallyFeasible);
    }

    #[test]
    fn certificate_at_degree_zero() {
        let b0 = builtins::e0();
        let kernel = [b0.section("Xc1").unwrap().clone(), b0.section("Xc2").unwrap().clone()];
        let c = b0.algebroid.lie_infeasibility_certificate(&kernel, (0, 1, 2), 0).unwrap();
        assert_eq!(c.verdict, Feasibility::Infeasible);
        assert_eq!(c.parameters, 12);
        assert_eq!(c.jacobiator_min_degree, Some(2));
        assert!(c.modifier_min_degree.unwrap() >= 3);
        assert!(c.modifier_identity);
    }
}
