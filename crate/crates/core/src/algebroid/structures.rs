use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Algebroid, Section};
use crate::error::{Error, Result};
use crate::linalg::{self, EchelonBasis};
use crate::poly::{int, Monomial, Poly, Scalar};
use crate::Decision;

/// Bundle endomorphism; `matrix[i][j]` is the coefficient of `eᵢ` in `J(eⱼ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    matrix: Vec<Vec<Poly>>,
}

impl Endomorphism {
    pub fn new(matrix: Vec<Vec<Poly>>) -> Result<Self> {
        let m = matrix.len();
        if matrix.iter().any(|r| r.len() != m) {
            return Err(Error::Shape("endomorphism matrix must be square".into()));
        }
        Ok(Endomorphism { matrix })
    }

    /// From the images of the generators.
    pub fn from_images(images: &[Section]) -> Result<Self> {
        let m = images.len();
        let nvars = images.first().map_or(0, |s| s.coeff(0).nvars());
        let mut matrix = vec![vec![Poly::zero(nvars); m]; m];
        for (j, s) in images.iter().enumerate() {
            if s.rank() != m {
                return Err(Error::RankMismatch { expected: m, got: s.rank() });
            }
            for i in 0..m {
                matrix[i][j] = s.coeff(i).clone();
            }
        }
        Ok(Endomorphism { matrix })
    }

    pub fn identity(rank: usize, nvars: usize) -> Self {
        let mut matrix = vec![vec![Poly::zero(nvars); rank]; rank];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = Poly::one(nvars);
        }
        Endomorphism { matrix }
    }

    pub fn matrix(&self) -> &[Vec<Poly>] {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, s: &Section) -> Section {
        let coeffs = self
            .matrix
            .iter()
            .map(|row| {
                let mut acc = Poly::zero(s.coeff(0).nvars());
                for (a, c) in row.iter().zip(s.coeffs()) {
                    if !a.is_zero() && !c.is_zero() {
                        acc += &(a * c);
                    }
                }
                acc
            })
            .collect();
        Section::new(coeffs)
    }

    pub fn image(&self, j: usize) -> Section {
        Section::new(self.matrix.iter().map(|r| r[j].clone()).collect())
    }

    /// `J ∘ J = −id` as a polynomial identity.
    pub fn is_almost_complex(&self) -> bool {
        let m = self.rank();
        (0..m).all(|j| {
            let sq = self.apply(&self.image(j));
            sq.coeffs().iter().enumerate().all(|(i, c)| {
                if i == j {
                    c.constant_term() == int(-1) && c.len() == 1
                } else {
                    c.is_zero()
                }
            })
        })
    }
}

/// Skew ℱ-bilinear map on generators, added to a bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketModifier {
    values: BTreeMap<(usize, usize), Section>,
}

impl BracketModifier {
    /// Entries given for either order; `(j,i)` entries are negated into `(i,j)`.
    pub fn new<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Section)>,
    {
        let mut values = BTreeMap::new();
        for ((i, j), s) in entries {
            match i.cmp(&j) {
                std::cmp::Ordering::Less => {
                    values.insert((i, j), s);
                }
                std::cmp::Ordering::Greater => {
                    values.insert((j, i), -&s);
                }
                std::cmp::Ordering::Equal => {
                    if !s.is_zero() {
                        return Err(Error::Invalid("modifier must vanish on the diagonal".into()));
                    }
                }
            }
        }
        Ok(BracketModifier { values })
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Section> {
        &self.values
    }

    /// `B(eᵢ, eⱼ)`, skew-extended; `None` when zero.
    pub fn value(&self, i: usize, j: usize) -> Option<Section> {
        if i < j {
            self.values.get(&(i, j)).cloned()
        } else {
            self.values.get(&(j, i)).map(|s| -s)
        }
    }

    /// `B(X, Y)` by bilinearity.
    pub fn apply(&self, x: &Section, y: &Section) -> Section {
        let nvars = x.coeff(0).nvars();
        let mut out = Section::zero(x.rank(), nvars);
        for ((i, j), s) in &self.values {
            let f = &(x.coeff(*i) * y.coeff(*j)) - &(x.coeff(*j) * y.coeff(*i));
            if !f.is_zero() {
                out.add_scaled(&f, s);
            }
        }
        out
    }
}

/// Symmetric matrix of `g⁻¹` in the generator frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoMetric {
    matrix: Vec<Vec<Poly>>,
}

impl CoMetric {
    pub fn new(matrix: Vec<Vec<Poly>>) -> Result<Self> {
        let m = matrix.len();
        if matrix.iter().any(|r| r.len() != m) {
            return Err(Error::Shape("cometric matrix must be square".into()));
        }
        for i in 0..m {
            for j in i + 1..m {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::AsymmetricCometric);
                }
            }
        }
        Ok(CoMetric { matrix })
    }

    pub fn identity(rank: usize, nvars: usize) -> Self {
        CoMetric { matrix: Endomorphism::identity(rank, nvars).matrix }
    }

    pub fn matrix(&self) -> &[Vec<Poly>] {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
        self.matrix
            .iter()
            .map(|r| r.iter().map(|p| p.eval(point)).collect())
            .collect()
    }
}

/// Degree-bounded solutions of the Courant condition `ρ G ρᵀ = 0`.
#[derive(Clone, Debug)]
pub struct CourantSolutions {
    pub max_degree: u32,
    pub basis: Vec<CoMetric>,
    pub point: Vec<Scalar>,
    /// Each basis element evaluated at `point`.
    pub values: Vec<Vec<Vec<Scalar>>>,
    /// A solution nondegenerate at `point`, if one was found.
    pub nondegenerate: Decision<CoMetric>,
}

impl CourantSolutions {
    pub fn all_degenerate_at_point(&self) -> bool {
        self.values.iter().all(|m| m.iter().flatten().all(Zero::is_zero))
    }
}

impl Algebroid {
    /// `N(X,Y) = [JX,JY] − J[X,JY] − J[JX,Y] − [X,Y]`.
    pub fn nijenhuis(&self, j: &Endomorphism, x: &Section, y: &Section) -> Result<Section> {
        if j.rank() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: j.rank() });
        }
        if !j.is_almost_complex() {
            return Err(Error::NotAlmostComplex);
        }
        let jx = j.apply(x);
        let jy = j.apply(y);
        let a = self.bracket(&jx, &jy)?;
        let b = j.apply(&self.bracket(x, &jy)?);
        let c = j.apply(&self.bracket(&jx, y)?);
        let d = self.bracket(x, y)?;
        Ok(&(&(&a - &b) - &c) - &d)
    }

    /// `ρ G ρᵀ` as an `n × n` matrix; zero iff the Courant condition holds for `G`.
    pub fn courant_defect(&self, g: &CoMetric) -> Result<Vec<Vec<Poly>>> {
        if g.rank() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: g.rank() });
        }
        let n = self.nvars();
        let m = self.rank();
        let mut out = vec![vec![Poly::zero(n); n]; n];
        for (k, row) in out.iter_mut().enumerate() {
            for (l, entry) in row.iter_mut().enumerate() {
                for i in 0..m {
                    let ri = &self.anchor_of(i).comps()[k];
                    if ri.is_zero() {
                        continue;
                    }
                    for jj in 0..m {
                        let gij = &g.matrix[i][jj];
                        let rj = &self.anchor_of(jj).comps()[l];
                        if gij.is_zero() || rj.is_zero() {
                            continue;
                        }
                        *entry += &(&(ri * gij) * rj);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Solves `ρ G ρᵀ = 0` over symmetric `G` with entries of degree ≤ `maxdeg`.
    pub fn courant_solution_space(&self, maxdeg: u32, point: &[Scalar]) -> Result<CourantSolutions> {
        let n = self.nvars();
        let m = self.rank();
        if point.len() != n {
            return Err(Error::PointLength { expected: n, got: point.len() });
        }
        let monos = Monomial::all_up_to(n, maxdeg);
        let mut labels = Vec::new();
        let mut columns = Vec::new();
        for i in 0..m {
            for j in i..m {
                for mono in &monos {
                    let mut col: BTreeMap<(usize, usize, Monomial), Scalar> = BTreeMap::new();
                    for k in 0..n {
                        for l in k..n {
                            let mut p = &self.anchor_of(i).comps()[k] * &self.anchor_of(j).comps()[l];
                            if i != j {
                                p += &(&self.anchor_of(j).comps()[k] * &self.anchor_of(i).comps()[l]);
                            }
                            for (pm, c) in p.mul_monomial(mono).terms() {
                                col.insert((k, l, pm.clone()), c.clone());
                            }
                        }
                    }
                    labels.push((i, j, mono.clone()));
                    columns.push(col);
                }
            }
        }
        let mut basis = EchelonBasis::new(columns.len());
        for (idx, col) in columns.into_iter().enumerate() {
            basis.insert_column(idx, col);
        }
        let mut sols = Vec::new();
        for v in basis.kernel() {
            let mut mat = vec![vec![Poly::zero(n); m]; m];
            for ((i, j, mono), c) in labels.iter().zip(v) {
                if c.is_zero() {
                    continue;
                }
                let t = Poly::term(n, mono.clone(), c);
                mat[*i][*j] += &t;
                if i != j {
                    mat[*j][*i] += &t;
                }
            }
            sols.push(CoMetric::new(mat)?);
        }
        let values = sols.iter().map(|g| g.eval(point)).collect::<Result<Vec<_>>>()?;
        let nondegenerate = find_nondegenerate(&sols, &values, maxdeg);
        Ok(CourantSolutions { max_degree: maxdeg, basis: sols, point: point.to_vec(), values, nondegenerate })
    }
}

/// Looks for a combination of the basis whose value at the point is invertible.
fn find_nondegenerate(
    sols: &[CoMetric],
    values: &[Vec<Vec<Scalar>>],
    maxdeg: u32,
) -> Decision<CoMetric> {
    if values.iter().all(|m| m.iter().flatten().all(Zero::is_zero)) {
        return Decision::No;
    }
    let combine = |coeffs: &[Scalar]| -> Vec<Vec<Scalar>> {
        let size = values[0].len();
        let mut acc = vec![vec![Scalar::zero(); size]; size];
        for (c, v) in coeffs.iter().zip(values) {
            for (ar, vr) in acc.iter_mut().zip(v) {
                for (a, x) in ar.iter_mut().zip(vr) {
                    *a += c * x;
                }
            }
        }
        acc
    };
    let materialize = |coeffs: &[Scalar]| -> CoMetric {
        let m = sols[0].rank();
        let nvars = sols[0].matrix[0][0].nvars();
        let mut mat = vec![vec![Poly::zero(nvars); m]; m];
        for (c, g) in coeffs.iter().zip(sols) {
            for (r, gr) in mat.iter_mut().zip(&g.matrix) {
                for (a, x) in r.iter_mut().zip(gr) {
                    *a += &x.scale(c);
                }
            }
        }
        CoMetric { matrix: mat }
    };
    let k = sols.len();
    for i in 0..k {
        let mut coeffs = vec![Scalar::zero(); k];
        coeffs[i] = int(1);
        if !linalg::determinant(&combine(&coeffs)).is_zero() {
            return Decision::Yes(materialize(&coeffs));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..64 {
        let coeffs: Vec<Scalar> = (0..k).map(|_| int(rng.gen_range(-9..=9))).collect();
        if !linalg::determinant(&combine(&coeffs)).is_zero() {
            return Decision::Yes(materialize(&coeffs));
        }
    }
    Decision::NoWitnessWithin(maxdeg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn x(i: usize) -> Poly {
        Poly::var(2, i)
    }

    #[test]
    fn e0_complex_structure_is_integrable() {
        let b = builtins::e0();
        let j = b.endo("J").unwrap();
        assert!(j.is_almost_complex());
        let e0 = &b.algebroid;
        for p in 0..4 {
            for q in 0..4 {
                let n = e0.nijenhuis(j, &e0.gen(p), &e0.gen(q)).unwrap();
                assert!(n.is_zero(), "N(e{p}, e{q}) = {}", e0.format_section(&n));
            }
        }
        let s = &e0.gen(0).scale(&x(1)) + &e0.gen(3);
        assert!(e0.nijenhuis(j, &s, &s).unwrap().is_zero());
    }

    #[test]
    fn nijenhuis_rejects_non_complex() {
        let e0 = builtins::e0().algebroid;
        let id = Endomorphism::identity(4, 2);
        assert!(!id.is_almost_complex());
        assert_eq!(e0.nijenhuis(&id, &e0.gen(0), &e0.gen(1)).unwrap_err(), Error::NotAlmostComplex);
    }

    #[test]
    fn courant_defect_examples() {
        let e0 = builtins::e0().algebroid;
        let d = e0.courant_defect(&CoMetric::identity(4, 2)).unwrap();
        let r = &x(0).pow(4) + &x(1).pow(4);
        assert_eq!(d, vec![vec![r.clone(), Poly::zero(2)], vec![Poly::zero(2), r]]);
        let zero = CoMetric::new(vec![vec![Poly::zero(2); 4]; 4]).unwrap();
        assert!(e0.courant_defect(&zero).unwrap().iter().flatten().all(Poly::is_zero));
        let t2 = builtins::tangent(2).algebroid;
        let g = CoMetric::new(vec![vec![x(0), Poly::one(2)], vec![Poly::one(2), x(1).pow(3)]]).unwrap();
        assert_eq!(t2.courant_defect(&g).unwrap(), g.matrix().to_vec());
    }

    #[test]
    fn asymmetric_cometric_rejected() {
        let m = vec![vec![Poly::zero(2), Poly::one(2)], vec![Poly::zero(2), Poly::zero(2)]];
        assert_eq!(CoMetric::new(m).unwrap_err(), Error::AsymmetricCometric);
    }

    #[test]
    fn zero_anchor_accepts_every_symmetric_cometric() {
        let a = Algebroid::new(
            "Z",
            crate::BaseSpace::euclidean(1),
            vec!["a".into(), "b".into()],
            vec![crate::VectorField::zero(1); 2],
            [],
        )
        .unwrap();
        let sols = a.courant_solution_space(1, &[int(0)]).unwrap();
        // 3 symmetric entries × 2 monomials
        assert_eq!(sols.basis.len(), 6);
    }

    #[test]
    fn modifier_bilinear_extension() {
        let e0 = builtins::e0().algebroid;
        let k2 = builtins::e0().section("Xc2").unwrap().clone();
        let b = BracketModifier::new([((2, 1), k2.clone())]).unwrap();
        assert_eq!(b.value(1, 2).unwrap(), -&k2);
        let v = b.apply(&e0.gen(2), &e0.gen(1).scale(&x(0)));
        assert_eq!(v, k2.scale(&x(0)));
    }
}
