//! Linear E-connections given by Christoffel data on generators, extended by
//! the Koszul rules; torsion, curvature and the first Bianchi identity; the
//! derived bundle `E ⊕ (E∧E)` with its lifted connection.

use std::sync::Arc;

use rayon::prelude::*;

use crate::algebroid::{Algebroid, Section, VectorField};
use crate::error::{Error, Result};
use crate::poly::{rat, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EConnection {
    algebroid: Arc<Algebroid>,
    target_names: Vec<String>,
    /// `gamma[β][b] = ∇_{e_β} a_b`.
    gamma: Vec<Vec<Section>>,
}

impl EConnection {
    pub fn new(algebroid: Arc<Algebroid>, target_names: Vec<String>, gamma: Vec<Vec<Section>>) -> Result<Self> {
        crate::algebroid::check_unique(&target_names)?;
        let m = algebroid.rank();
        let r = target_names.len();
        if gamma.len() != m {
            return Err(Error::RankMismatch { expected: m, got: gamma.len() });
        }
        for row in &gamma {
            if row.len() != r {
                return Err(Error::RankMismatch { expected: r, got: row.len() });
            }
            for s in row {
                if s.rank() != r {
                    return Err(Error::RankMismatch { expected: r, got: s.rank() });
                }
                if let Some(c) = s.coeffs().iter().find(|c| c.nvars() != algebroid.nvars()) {
                    return Err(Error::BaseMismatch { expected: algebroid.nvars(), got: c.nvars() });
                }
            }
        }
        Ok(EConnection { algebroid, target_names, gamma })
    }

    /// A connection on `E` itself.
    pub fn on_self(algebroid: Arc<Algebroid>, gamma: Vec<Vec<Section>>) -> Result<Self> {
        let names = algebroid.gen_names().to_vec();
        Self::new(algebroid, names, gamma)
    }

    /// All Christoffel symbols zero.
    pub fn flat(algebroid: Arc<Algebroid>, target_names: Vec<String>) -> Result<Self> {
        let r = target_names.len();
        let n = algebroid.nvars();
        let gamma = vec![vec![Section::zero(r, n); r]; algebroid.rank()];
        Self::new(algebroid, target_names, gamma)
    }

    /// Generator rules `(β, b) ↦ ∇_{e_β} a_b`; unlisted pairs are zero.
    pub fn from_rules<I>(algebroid: Arc<Algebroid>, target_names: Vec<String>, rules: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Section)>,
    {
        let r = target_names.len();
        let n = algebroid.nvars();
        let mut gamma = vec![vec![Section::zero(r, n); r]; algebroid.rank()];
        for ((beta, b), s) in rules {
            if beta >= algebroid.rank() {
                return Err(Error::GeneratorOutOfRange { index: beta, rank: algebroid.rank() });
            }
            if b >= r {
                return Err(Error::GeneratorOutOfRange { index: b, rank: r });
            }
            gamma[beta][b] = s;
        }
        Self::new(algebroid, target_names, gamma)
    }

    pub fn algebroid(&self) -> &Algebroid {
        &self.algebroid
    }

    pub fn algebroid_arc(&self) -> &Arc<Algebroid> {
        &self.algebroid
    }

    pub fn target_names(&self) -> &[String] {
        &self.target_names
    }

    pub fn target_rank(&self) -> usize {
        self.target_names.len()
    }

    pub fn is_self(&self) -> bool {
        self.target_names == self.algebroid.gen_names()
    }

    pub fn gamma(&self, beta: usize, b: usize) -> &Section {
        &self.gamma[beta][b]
    }

    pub fn gammas(&self) -> &[Vec<Section>] {
        &self.gamma
    }

    /// `Γᵃ_{βb}`.
    pub fn christoffel(&self, a: usize, beta: usize, b: usize) -> &Poly {
        self.gamma[beta][b].coeff(a)
    }

    fn check_target(&self, s: &Section) -> Result<()> {
        if s.rank() != self.target_rank() {
            return Err(Error::RankMismatch { expected: self.target_rank(), got: s.rank() });
        }
        Ok(())
    }

    /// `∇_X s = Σ ρ(X)(sᵇ) a_b + Σ X^β sᵇ Γ_{βb}`.
    pub fn covariant_derivative(&self, x: &Section, s: &Section) -> Result<Section> {
        self.check_target(s)?;
        let rx = self.algebroid.anchor_apply(x)?;
        let mut out = Section::new(s.coeffs().iter().map(|c| rx.apply(c)).collect());
        for (beta, xb) in x.coeffs().iter().enumerate() {
            if xb.is_zero() {
                continue;
            }
            for (b, sb) in s.coeffs().iter().enumerate() {
                if sb.is_zero() || self.gamma[beta][b].is_zero() {
                    continue;
                }
                out.add_scaled(&(xb * sb), &self.gamma[beta][b]);
            }
        }
        Ok(out)
    }

    /// `T(X,Y) = ∇_X Y − ∇_Y X − [X,Y]`.
    pub fn torsion(&self, x: &Section, y: &Section) -> Result<Section> {
        if !self.is_self() {
            return Err(Error::NotSelfConnection);
        }
        let a = self.covariant_derivative(x, y)?;
        let b = self.covariant_derivative(y, x)?;
        let c = self.algebroid.bracket(x, y)?;
        Ok(&(&a - &b) - &c)
    }

    /// `R(X,Y)s = ∇_X∇_Y s − ∇_Y∇_X s − ∇_{[X,Y]} s`.
    pub fn curvature(&self, x: &Section, y: &Section, s: &Section) -> Result<Section> {
        let a = self.covariant_derivative(x, &self.covariant_derivative(y, s)?)?;
        let b = self.covariant_derivative(y, &self.covariant_derivative(x, s)?)?;
        let c = self.covariant_derivative(&self.algebroid.bracket(x, y)?, s)?;
        Ok(&(&a - &b) - &c)
    }

    /// `R(e_α, e_β) a_b`.
    pub fn gen_curvature(&self, alpha: usize, beta: usize, b: usize) -> Section {
        let m = self.algebroid.rank();
        let n = self.algebroid.nvars();
        let s = Section::basis(self.target_rank(), n, b);
        self.curvature(&Section::basis(m, n, alpha), &Section::basis(m, n, beta), &s)
            .expect("generator shapes")
    }

    /// `(∇_X T)(Y,Z) = ∇_X(T(Y,Z)) − T(∇_X Y, Z) − T(Y, ∇_X Z)`.
    pub fn torsion_derivative(&self, x: &Section, y: &Section, z: &Section) -> Result<Section> {
        let a = self.covariant_derivative(x, &self.torsion(y, z)?)?;
        let b = self.torsion(&self.covariant_derivative(x, y)?, z)?;
        let c = self.torsion(y, &self.covariant_derivative(x, z)?)?;
        Ok(&(&a - &b) - &c)
    }

    /// `Σ R(X,Y)Z − Σ (∇_X T)(Y,Z) − Σ T(T(X,Y),Z) − 𝒥(X,Y,Z)`, cyclic sums.
    pub fn bianchi_defect(&self, x: &Section, y: &Section, z: &Section) -> Result<Section> {
        let cyc = [(x, y, z), (y, z, x), (z, x, y)];
        let mut out = Section::zero(self.algebroid.rank(), self.algebroid.nvars());
        for (a, b, c) in cyc {
            out = &out + &self.curvature(a, b, c)?;
            out = &out - &self.torsion_derivative(a, b, c)?;
            out = &out - &self.torsion(&self.torsion(a, b)?, c)?;
        }
        Ok(&out - &self.algebroid.jacobiator(x, y, z)?)
    }

    /// The first generator pair with nonzero torsion, if any.
    pub fn torsion_failure(&self) -> Result<Option<(usize, usize)>> {
        let m = self.algebroid.rank();
        for i in 0..m {
            for j in i + 1..m {
                if !self.torsion(&self.algebroid.gen(i), &self.algebroid.gen(j))?.is_zero() {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    /// Builds `E⁽¹⁾` from a torsion-free connection on `E`.
    pub fn derive_bundle(&self) -> Result<DerivedBundle> {
        if !self.is_self() {
            return Err(Error::NotSelfConnection);
        }
        if let Some((i, j)) = self.torsion_failure()? {
            return Err(Error::NonzeroTorsion(i, j));
        }
        DerivedBundle::build(self)
    }

    /// `∇_X s = D_{ρ(X)} s` for a connection `D` along the tangent algebroid.
    pub fn induced(algebroid: Arc<Algebroid>, base: &EConnection) -> Result<Self> {
        let n = algebroid.nvars();
        if base.algebroid.rank() != n || base.algebroid.nvars() != n {
            return Err(Error::Shape("base connection must be along the tangent algebroid of the same base".into()));
        }
        let r = base.target_rank();
        let mut gamma = vec![vec![Section::zero(r, n); r]; algebroid.rank()];
        for (beta, row) in gamma.iter_mut().enumerate() {
            let field = algebroid.anchor_of(beta);
            for (b, entry) in row.iter_mut().enumerate() {
                for (k, c) in field.comps().iter().enumerate() {
                    if !c.is_zero() {
                        entry.add_scaled(c, &base.gamma[k][b]);
                    }
                }
            }
        }
        Self::new(algebroid, base.target_names.clone(), gamma)
    }

    /// Same Christoffel data over an algebroid with identical generators.
    pub fn rebase(&self, algebroid: Arc<Algebroid>) -> Result<Self> {
        Self::new(algebroid, self.target_names.clone(), self.gamma.clone())
    }
}

/// Free-function form of [`EConnection::induced`].
pub fn induced_connection(algebroid: Arc<Algebroid>, base: &EConnection) -> Result<EConnection> {
    EConnection::induced(algebroid, base)
}

/// `E⁽¹⁾ = E ⊕ (E∧E)` with generators `eᵢ` followed by `eᵢ∧eⱼ`, `i<j`.
#[derive(Clone, Debug)]
pub struct DerivedBundle {
    pub base: Arc<Algebroid>,
    pub connection: EConnection,
    pub derived: Arc<Algebroid>,
    /// `∇⁽¹⁾`, with the `½ X∧Y` correction on `E` arguments.
    pub lifted: EConnection,
    /// `∇⁽¹⁾` without the correction.
    pub plain: EConnection,
    pairs: Vec<(usize, usize)>,
}

impl DerivedBundle {
    fn build(nabla: &EConnection) -> Result<Self> {
        let e = nabla.algebroid.clone();
        let m = e.rank();
        let n = e.nvars();
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
        let rank = m + pairs.len();
        let mut names = e.gen_names().to_vec();
        for &(i, j) in &pairs {
            names.push(format!("{}_{}", e.gen_names()[i], e.gen_names()[j]));
        }
        let index = |i: usize, j: usize| m + pairs.iter().position(|&p| p == (i, j)).expect("pair");
        let embed = |s: &Section| {
            let mut c = s.coeffs().to_vec();
            c.resize(rank, Poly::zero(n));
            Section::new(c)
        };
        let wedge = |a: &Section, b: &Section| {
            let mut out = Section::zero(rank, n);
            for i in 0..m {
                for j in i + 1..m {
                    let f = &(a.coeff(i) * b.coeff(j)) - &(a.coeff(j) * b.coeff(i));
                    if !f.is_zero() {
                        out.add_scaled(&f, &Section::basis(rank, n, index(i, j)));
                    }
                }
            }
            out
        };
        let gen = |i: usize| e.gen(i);
        let curv: Vec<Vec<Section>> = pairs
            .iter()
            .map(|&(i, j)| (0..m).map(|k| nabla.gen_curvature(i, j, k)).collect())
            .collect();
        let half = Poly::constant(n, rat(1, 2));

        let mut plain = vec![vec![Section::zero(rank, n); rank]; rank];
        let mut lifted = vec![vec![Section::zero(rank, n); rank]; rank];
        for i in 0..m {
            for j in 0..m {
                let v = embed(nabla.gamma(i, j));
                let mut l = v.clone();
                l.add_scaled(&half, &wedge(&gen(i), &gen(j)));
                plain[i][j] = v;
                lifted[i][j] = l;
            }
            for (p, &(k, l)) in pairs.iter().enumerate() {
                let a = wedge(nabla.gamma(i, k), &gen(l));
                let b = wedge(&gen(k), nabla.gamma(i, l));
                let v = &a + &b;
                plain[i][m + p] = v.clone();
                lifted[i][m + p] = v;
            }
        }
        for (p, _) in pairs.iter().enumerate() {
            for k in 0..m {
                let v = embed(&curv[p][k]);
                plain[m + p][k] = v.clone();
                lifted[m + p][k] = v;
            }
            for (q, &(k, l)) in pairs.iter().enumerate() {
                let a = wedge(&curv[p][k], &gen(l));
                let b = wedge(&gen(k), &curv[p][l]);
                let v = &a + &b;
                plain[m + p][m + q] = v.clone();
                lifted[m + p][m + q] = v;
            }
        }

        let mut anchor: Vec<VectorField> = e.anchors().to_vec();
        let axioms = e.check_axioms();
        for &(i, j) in &pairs {
            let pc = axioms.pairs.iter().find(|p| (p.i, p.j) == (i, j)).expect("pair");
            anchor.push(pc.defect.clone());
        }
        let mut brackets = Vec::new();
        for u in 0..rank {
            for v in u + 1..rank {
                let s = &lifted[u][v] - &lifted[v][u];
                if !s.is_zero() {
                    brackets.push(((u, v), s));
                }
            }
        }
        let derived = Arc::new(Algebroid::new(
            format!("{}_derived", e.name()),
            e.base().clone(),
            names,
            anchor,
            brackets,
        )?);
        let lifted = EConnection::on_self(derived.clone(), lifted)?;
        let plain = EConnection::on_self(derived.clone(), plain)?;
        Ok(DerivedBundle { base: e, connection: nabla.clone(), derived, lifted, plain, pairs })
    }

    pub fn wedge_pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Index of `eᵢ∧eⱼ` among the derived generators, for `i<j`.
    pub fn wedge_index(&self, i: usize, j: usize) -> Option<usize> {
        self.pairs.iter().position(|&p| p == (i, j)).map(|p| self.base.rank() + p)
    }

    /// `E`-section as a derived section.
    pub fn embed(&self, s: &Section) -> Section {
        let mut c = s.coeffs().to_vec();
        c.resize(self.derived.rank(), Poly::zero(self.base.nvars()));
        Section::new(c)
    }

    /// `Y ∧ Z` of two sections supported on `E`; `None` if either has a wedge part.
    pub fn wedge(&self, a: &Section, b: &Section) -> Option<Section> {
        let m = self.base.rank();
        let n = self.base.nvars();
        if a.coeffs()[m..].iter().chain(&b.coeffs()[m..]).any(|c| !c.is_zero()) {
            return None;
        }
        let mut out = Section::zero(self.derived.rank(), n);
        for (p, &(i, j)) in self.pairs.iter().enumerate() {
            let f = &(a.coeff(i) * b.coeff(j)) - &(a.coeff(j) * b.coeff(i));
            if !f.is_zero() {
                out.add_scaled(&f, &Section::basis(self.derived.rank(), n, m + p));
            }
        }
        Some(out)
    }

    /// Checks the five curvature identities for `R⁽¹⁾` on generator tuples.
    pub fn verify_prhelp(&self) -> PrhelpReport {
        let m = self.base.rank();
        let d = &self.derived;
        let g = |i: usize| d.gen(i);
        let w: Vec<usize> = (m..d.rank()).collect();
        let r1 = |x: &Section, y: &Section, z: &Section| self.lifted.curvature(x, y, z).expect("shapes");
        let nab = |x: &Section, y: &Section| self.plain.covariant_derivative(x, y).expect("shapes");
        let wedge_or_fail = |a: &Section, b: &Section| self.wedge(a, b);

        let mut items = Vec::new();

        // 1: R(X,Y)Z = R(X,Y)(Z∧T) = 0
        let tuples: Vec<(usize, usize, usize)> = (0..m)
            .flat_map(|i| (i + 1..m).flat_map(move |j| (0..d.rank()).map(move |k| (i, j, k))))
            .collect();
        let fails = tuples
            .par_iter()
            .filter(|&&(i, j, k)| !r1(&g(i), &g(j), &g(k)).is_zero())
            .map(|&(i, j, k)| vec![i, j, k])
            .collect::<Vec<_>>();
        items.push(PrhelpItem { item: 1, checked: tuples.len(), failures: fails });

        // 2: R(X₁∧X₂, Y)Z through the plain connection
        let tuples: Vec<(usize, usize, usize)> =
            w.iter().flat_map(|&a| (0..m).flat_map(move |y| (0..m).map(move |z| (a, y, z)))).collect();
        let fails = tuples
            .par_iter()
            .filter(|&&(a, y, z)| {
                let (xa, ys, zs) = (g(a), g(y), g(z));
                let lhs = r1(&xa, &ys, &zs);
                let rhs = &(&(&nab(&xa, &nab(&ys, &zs)) - &nab(&ys, &nab(&xa, &zs))) - &nab(&nab(&xa, &ys), &zs))
                    + &nab(&nab(&ys, &xa), &zs);
                lhs != rhs
            })
            .map(|&(a, y, z)| vec![a, y, z])
            .collect::<Vec<_>>();
        items.push(PrhelpItem { item: 2, checked: tuples.len(), failures: fails });

        // 3: derivation over Z∧T for (X₁∧X₂, Y)
        let tuples: Vec<(usize, usize, usize)> =
            w.iter().flat_map(|&a| (0..m).flat_map(move |y| (0..m).map(move |z| (a, y, z)))).collect();
        let fails = self.derivation_failures(&tuples, |a, y| (g(a), g(y)), &r1, &wedge_or_fail);
        items.push(PrhelpItem { item: 3, checked: tuples.len() * self.pairs.len(), failures: fails });

        // 4: R(X₁∧X₂, Y₁∧Y₂)Z through the plain connection
        let tuples: Vec<(usize, usize, usize)> = w
            .iter()
            .flat_map(|&a| w.iter().filter(move |&&b| b > a).flat_map(move |&b| (0..m).map(move |z| (a, b, z))))
            .collect();
        let fails = tuples
            .par_iter()
            .filter(|&&(a, b, z)| {
                let (xa, yb, zs) = (g(a), g(b), g(z));
                let lhs = r1(&xa, &yb, &zs);
                let rhs = &(&(&nab(&xa, &nab(&yb, &zs)) - &nab(&yb, &nab(&xa, &zs))) - &nab(&nab(&xa, &yb), &zs))
                    + &nab(&nab(&yb, &xa), &zs);
                lhs != rhs
            })
            .map(|&(a, b, z)| vec![a, b, z])
            .collect::<Vec<_>>();
        items.push(PrhelpItem { item: 4, checked: tuples.len(), failures: fails });

        // 5: derivation over Z∧T for (X₁∧X₂, Y₁∧Y₂)
        let tuples: Vec<(usize, usize, usize)> = w
            .iter()
            .flat_map(|&a| w.iter().filter(move |&&b| b > a).map(move |&b| (a, b, 0)))
            .collect();
        let fails = self.derivation_failures(&tuples, |a, b| (g(a), g(b)), &r1, &wedge_or_fail);
        items.push(PrhelpItem { item: 5, checked: tuples.len() * self.pairs.len(), failures: fails });

        PrhelpReport { items }
    }

    fn derivation_failures<G, R, W>(
        &self,
        tuples: &[(usize, usize, usize)],
        args: G,
        r1: &R,
        wedge: &W,
    ) -> Vec<Vec<usize>>
    where
        G: Fn(usize, usize) -> (Section, Section) + Sync,
        R: Fn(&Section, &Section, &Section) -> Section + Sync,
        W: Fn(&Section, &Section) -> Option<Section> + Sync,
    {
        let m = self.base.rank();
        let d = &self.derived;
        let mut seen = std::collections::BTreeSet::new();
        let jobs: Vec<(usize, usize, usize)> = tuples
            .iter()
            .filter(|&&(a, b, _)| seen.insert((a, b)))
            .flat_map(|&(a, b, _)| (0..self.pairs.len()).map(move |p| (a, b, p)))
            .collect();
        jobs.par_iter()
            .filter(|&&(a, b, p)| {
                let (x, y) = args(a, b);
                let (k, l) = self.pairs[p];
                let lhs = r1(&x, &y, &d.gen(m + p));
                let rk = r1(&x, &y, &d.gen(k));
                let rl = r1(&x, &y, &d.gen(l));
                match (wedge(&rk, &d.gen(l)), wedge(&d.gen(k), &rl)) {
                    (Some(u), Some(v)) => lhs != &u + &v,
                    _ => true,
                }
            })
            .map(|&(a, b, p)| vec![a, b, m + p])
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrhelpItem {
    pub item: u8,
    pub checked: usize,
    /// Derived generator indices of failing tuples.
    pub failures: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrhelpReport {
    pub items: Vec<PrhelpItem>,
}

impl PrhelpReport {
    pub fn passes(&self) -> bool {
        self.items.iter().all(|i| i.failures.is_empty())
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

    #[test]
    fn koszul_examples() {
        let b = builtins::e0();
        let flat = b.connection("flat").unwrap();
        let tf = b.connection("torsion_free").unwrap();
        let e0 = &b.algebroid;
        assert!(flat.covariant_derivative(&e0.gen(0), &e0.gen(1)).unwrap().is_zero());
        let v = tf.covariant_derivative(&e0.gen(0), &e0.gen(1)).unwrap();
        assert_eq!(e0.format_section(&v), "2*x1*X21");
        let s = &e0.gen(2).scale(&x(1)) + &e0.gen(3);
        let xs = &e0.gen(1) + &e0.gen(2).scale(&x(0));
        let lhs = &tf.covariant_derivative(&xs, &s.scale(&x(0))).unwrap()
            - &tf.covariant_derivative(&xs, &s).unwrap().scale(&x(0));
        let rhs = s.scale(&e0.anchor_derivative(&xs, &x(0)).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn torsion_examples() {
        let b = builtins::e0();
        let e0 = &b.algebroid;
        let tf = b.connection("torsion_free").unwrap();
        assert_eq!(tf.torsion_failure().unwrap(), None);
        let flat = b.connection("flat").unwrap();
        let t = flat.torsion(&e0.gen(0), &e0.gen(1)).unwrap();
        assert_eq!(e0.format_section(&t), "-2*x1*X21");
        let s = &e0.gen(0).scale(&x(1)) + &e0.gen(3);
        assert!(flat.torsion(&s, &s).unwrap().is_zero());
    }

    #[test]
    fn curvature_examples() {
        let b = builtins::e0();
        let e0 = &b.algebroid;
        let tf = b.connection("torsion_free").unwrap();
        let k2 = b.section("Xc2").unwrap();
        let r = tf.curvature(&e0.gen(0), &e0.gen(2), &e0.gen(1)).unwrap();
        assert_eq!(r, k2.scale_scalar(&int(-2)));
        let flat = b.connection("flat").unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    assert!(flat.gen_curvature(i, j, k).is_zero());
                }
            }
        }
        let s = &e0.gen(1).scale(&x(0)) + &e0.gen(2);
        assert!(tf.curvature(&s, &s, &e0.gen(3)).unwrap().is_zero());
    }

    #[test]
    fn bianchi_on_e0() {
        let b = builtins::e0();
        let e0 = &b.algebroid;
        let tf = b.connection("torsion_free").unwrap();
        let flat = b.connection("flat").unwrap();
        for c in [tf, flat] {
            assert!(c.bianchi_defect(&e0.gen(0), &e0.gen(1), &e0.gen(2)).unwrap().is_zero());
            assert!(c.bianchi_defect(&e0.gen(1), &e0.gen(2), &e0.gen(3)).unwrap().is_zero());
        }
    }

    #[test]
    fn derive_rejects_torsion() {
        let b = builtins::e0();
        assert_eq!(b.connection("flat").unwrap().derive_bundle().unwrap_err(), Error::NonzeroTorsion(0, 1));
    }

    #[test]
    fn derived_generator_bracket() {
        let b = builtins::e0();
        let d = b.connection("torsion_free").unwrap().derive_bundle().unwrap();
        assert_eq!(d.derived.rank(), 10);
        let br = d.derived.structure(0, 1);
        assert_eq!(d.derived.format_section(br), "2*x1*X21 + X11_X21");
        for i in 4..10 {
            assert!(d.derived.anchor_of(i).is_zero());
        }
    }

    #[test]
    fn induced_from_flat_base_is_flat() {
        let b = builtins::e0();
        let t2 = Arc::new(builtins::tangent(2).algebroid);
        let base = EConnection::flat(t2, b.algebroid.gen_names().to_vec()).unwrap();
        let ind = EConnection::induced(Arc::new(b.algebroid.clone()), &base).unwrap();
        assert!(ind.gammas().iter().flatten().all(Section::is_zero));
    }

    #[test]
    fn induced_on_tangent_is_identity() {
        let t2 = Arc::new(builtins::tangent(2).algebroid);
        let names = t2.gen_names().to_vec();
        let base = EConnection::from_rules(t2.clone(), names, [((0, 1), Section::new(vec![x(1), x(0).pow(2)]))])
            .unwrap();
        assert_eq!(EConnection::induced(t2, &base).unwrap(), base);
    }

    #[test]
    fn induced_weighted_by_anchor() {
        let e0 = Arc::new(builtins::e0().algebroid);
        let t2 = Arc::new(builtins::tangent(2).algebroid);
        // base Γ¹₁₁ = 1 on a rank-1 bundle A
        let base = EConnection::from_rules(t2, vec!["a".into()], [((0, 0), Section::new(vec![Poly::one(2)]))])
            .unwrap();
        let ind = EConnection::induced(e0, &base).unwrap();
        assert_eq!(ind.christoffel(0, 0, 0), &x(0).pow(2));
        assert!(ind.christoffel(0, 1, 0).is_zero());
        assert_eq!(ind.christoffel(0, 2, 0), &x(1).pow(2));
        assert!(ind.christoffel(0, 3, 0).is_zero());
    }
}
