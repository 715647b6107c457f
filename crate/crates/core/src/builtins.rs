//! The worked examples: `E0` and its variants, the rank-4 bundle `E0prime`
//! with both bracket tables, the subalgebroids, and tangent algebroids.

use std::sync::Arc;

use crate::algebroid::{Algebroid, BaseSpace, Endomorphism, Section, SubalgebroidOutcome, VectorField};
use crate::connection::EConnection;
use crate::error::{Error, Result};
use crate::poly::{int, Poly};

/// An algebroid with its named auxiliary data.
#[derive(Clone, Debug)]
pub struct Builtin {
    pub algebroid: Algebroid,
    pub sections: Vec<(String, Section)>,
    pub endos: Vec<(String, Endomorphism)>,
    pub connections: Vec<(String, EConnection)>,
    /// Names of registered sections spanning the anchor kernel.
    pub kernel: Vec<String>,
}

impl Builtin {
    fn bare(algebroid: Algebroid) -> Self {
        Builtin { algebroid, sections: Vec::new(), endos: Vec::new(), connections: Vec::new(), kernel: Vec::new() }
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn endo(&self, name: &str) -> Option<&Endomorphism> {
        self.endos.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn connection(&self, name: &str) -> Option<&EConnection> {
        self.connections.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn kernel_sections(&self) -> Vec<Section> {
        self.kernel.iter().filter_map(|n| self.section(n).cloned()).collect()
    }
}

pub const NAMES: [&str; 8] = ["E0", "E0_itemized", "E0prime", "E0prime_lie", "E0doubleprime", "E00", "E01", "E02"];

/// Looks up a built-in by name; `tangent(n)` is accepted for any `n ≥ 1`.
pub fn builtin(name: &str) -> Result<Builtin> {
    match name {
        "E0" => Ok(e0()),
        "E0_itemized" => Ok(e0_itemized()),
        "E0prime" => Ok(e0_prime()),
        "E0prime_lie" => Ok(e0_prime_lie()),
        "E0doubleprime" => Ok(e0_doubleprime()),
        "E00" => Ok(e00()),
        "E01" => e0_sub("E01", &[0, 1, 3]),
        "E02" => e0_sub("E02", &[0, 2, 3]),
        _ => {
            let n = name
                .strip_prefix("tangent(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|d| d.trim().parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))?;
            Ok(tangent(n))
        }
    }
}

fn x(i: usize) -> Poly {
    Poly::var(2, i)
}

fn sec(terms: &[(Poly, usize)], rank: usize) -> Section {
    let mut s = Section::zero(rank, 2);
    for (c, i) in terms {
        s.add_scaled(c, &Section::basis(rank, 2, *i));
    }
    s
}

fn d(k: usize, c: Poly) -> VectorField {
    VectorField::coordinate(2, k).scale(&c)
}

/// Index of `X_sub^sup` in the order `X11, X21, X12, X22`.
fn xi(sup: usize, sub: usize) -> usize {
    (sup - 1) * 2 + (sub - 1)
}

const E0_GENS: [(usize, usize); 4] = [(1, 1), (1, 2), (2, 1), (2, 2)];

fn e0_names() -> Vec<String> {
    E0_GENS.iter().map(|(sup, sub)| format!("X{sub}{sup}")).collect()
}

fn e0_anchor() -> Vec<VectorField> {
    E0_GENS.iter().map(|&(sup, sub)| d(sub - 1, x(sup - 1).pow(2))).collect()
}

fn delta(a: usize, b: usize) -> bool {
    a == b
}

/// `[X_j^i, X_l^k] = 2x^k δ_jk X_l^i − 2x^i δ_li X_j^k`.
fn e0_compact_bracket() -> Vec<((usize, usize), Section)> {
    let mut out = Vec::new();
    for (p, &(i, j)) in E0_GENS.iter().enumerate() {
        for (q, &(k, l)) in E0_GENS.iter().enumerate().skip(p + 1) {
            let mut s = Section::zero(4, 2);
            if delta(j, k) {
                s.add_scaled(&x(k - 1).scale(&int(2)), &Section::basis(4, 2, xi(i, l)));
            }
            if delta(l, i) {
                s.add_scaled(&x(i - 1).scale(&int(-2)), &Section::basis(4, 2, xi(k, j)));
            }
            out.push(((p, q), s));
        }
    }
    out
}

/// `∇_{X_j^i} X_l^k = 2x^k δ_jk X_l^i`.
fn e0_torsion_free_rules() -> Vec<((usize, usize), Section)> {
    let mut out = Vec::new();
    for (p, &(i, j)) in E0_GENS.iter().enumerate() {
        for (q, &(k, l)) in E0_GENS.iter().enumerate() {
            if delta(j, k) {
                out.push(((p, q), sec(&[(x(k - 1).scale(&int(2)), xi(i, l))], 4)));
            }
        }
    }
    out
}

fn e0_with(name: &str, brackets: Vec<((usize, usize), Section)>) -> Builtin {
    let alg = Algebroid::new(name, BaseSpace::euclidean(2), e0_names(), e0_anchor(), brackets)
        .expect("E0 tables are well formed");
    let arc = Arc::new(alg.clone());
    let (s1, s2) = (x(0).pow(2), x(1).pow(2));
    let sections = vec![
        ("Xc1".to_string(), sec(&[(s2.clone(), 0), (-&s1, 2)], 4)),
        ("Xc2".to_string(), sec(&[(s2, 1), (-&s1, 3)], 4)),
        ("A1".to_string(), sec(&[(Poly::one(2), 0), (Poly::one(2), 2)], 4)),
        ("B1".to_string(), sec(&[(Poly::one(2), 1), (Poly::one(2), 3)], 4)),
    ];
    let one = Poly::one(2);
    let j = Endomorphism::from_images(&[
        sec(&[(-&one, 1)], 4),
        sec(&[(one.clone(), 0)], 4),
        sec(&[(-&one, 3)], 4),
        sec(&[(one.clone(), 2)], 4),
    ])
    .expect("square");
    let flat = EConnection::flat(arc.clone(), e0_names()).expect("shape");
    let tf = EConnection::from_rules(arc, e0_names(), e0_torsion_free_rules()).expect("shape");
    Builtin {
        algebroid: alg,
        sections,
        endos: vec![("J".to_string(), j)],
        connections: vec![("flat".to_string(), flat), ("torsion_free".to_string(), tf)],
        kernel: vec!["Xc1".to_string(), "Xc2".to_string()],
    }
}

/// `E₀` with the compact bracket.
pub fn e0() -> Builtin {
    e0_with("E0", e0_compact_bracket())
}

/// `E₀` with the itemized table, which differs only at `[X11, X21] = 2 x2 X21`.
pub fn e0_itemized() -> Builtin {
    let mut table = e0_compact_bracket();
    for ((p, q), s) in table.iter_mut() {
        if (*p, *q) == (0, 1) {
            *s = sec(&[(x(1).scale(&int(2)), 1)], 4);
        }
    }
    e0_with("E0_itemized", table)
}

fn e0_prime_with(name: &str, lie: bool) -> Builtin {
    let names: Vec<String> = ["Y11", "Y22", "Yc1", "Yc2"].iter().map(|s| s.to_string()).collect();
    let anchor = vec![d(0, x(0).pow(2)), d(1, x(1).pow(2)), VectorField::zero(2), VectorField::zero(2)];
    let mut brackets = vec![
        ((0, 3), sec(&[(x(0).scale(&int(2)), 3)], 4)),
        ((1, 2), sec(&[(x(1).scale(&int(2)), 2)], 4)),
    ];
    if !lie {
        let a = &x(0).pow(2) * &x(1);
        let b = &x(0) * &x(1).pow(2);
        brackets.push(((2, 3), sec(&[(a.scale(&int(2)), 2), (b.scale(&int(2)), 3)], 4)));
    }
    let alg = Algebroid::new(name, BaseSpace::euclidean(2), names, anchor, brackets).expect("E0prime tables");
    let mut b = Builtin::bare(alg);
    b.kernel = vec!["Yc1".into(), "Yc2".into()];
    b.sections = vec![("Yc1".into(), Section::basis(4, 2, 2)), ("Yc2".into(), Section::basis(4, 2, 3))];
    b
}

pub fn e0_prime() -> Builtin {
    e0_prime_with("E0prime", false)
}

pub fn e0_prime_lie() -> Builtin {
    e0_prime_with("E0prime_lie", true)
}

/// The map `E0prime → E0` with `Y11 ↦ X11`, `Y22 ↦ X22`, `Yc1 ↦ Xc1`, `Yc2 ↦ Xc2`.
pub fn f0_matrix() -> Vec<Vec<Poly>> {
    let b = e0();
    let images = [
        b.algebroid.gen(0),
        b.algebroid.gen(3),
        b.section("Xc1").expect("registered").clone(),
        b.section("Xc2").expect("registered").clone(),
    ];
    (0..4).map(|row| images.iter().map(|s| s.coeff(row).clone()).collect()).collect()
}

fn rho_sum() -> Poly {
    &x(0).pow(2) + &x(1).pow(2)
}

/// The span of `A1 = X11 + X12`, `B1 = X21 + X22` with its induced table.
pub fn e0_doubleprime() -> Builtin {
    let names = vec!["A1".to_string(), "B1".to_string()];
    let anchor = vec![d(0, rho_sum()), d(1, rho_sum())];
    let br = sec(&[(x(1).scale(&int(-2)), 0), (x(0).scale(&int(2)), 1)], 2);
    let alg = Algebroid::new("E0doubleprime", BaseSpace::euclidean(2), names, anchor, [((0, 1), br)])
        .expect("E0doubleprime table");
    Builtin::bare(alg)
}

/// The frame `A1', A2', Xc1', Xc2'` away from the origin, as polynomial tables.
pub fn e00() -> Builtin {
    let names: Vec<String> = ["A1p", "A2p", "Xc1p", "Xc2p"].iter().map(|s| s.to_string()).collect();
    let anchor = vec![d(0, rho_sum()), d(1, rho_sum()), VectorField::zero(2), VectorField::zero(2)];
    let br = sec(&[(x(1).scale(&int(-2)), 0), (x(0).scale(&int(2)), 1)], 4);
    let alg = Algebroid::new("E00", BaseSpace::euclidean(2), names, anchor, [((0, 1), br)]).expect("E00 table");
    let mut b = Builtin::bare(alg);
    b.kernel = vec!["Xc1p".into(), "Xc2p".into()];
    b.sections = vec![("Xc1p".into(), Section::basis(4, 2, 2)), ("Xc2p".into(), Section::basis(4, 2, 3))];
    b
}

/// The structure induced on a span of `E₀` generators.
fn e0_sub(name: &str, gens: &[usize]) -> Result<Builtin> {
    let e = e0().algebroid;
    let sections: Vec<Section> = gens.iter().map(|&i| e.gen(i)).collect();
    let names: Vec<String> = gens.iter().map(|&i| e.gen_names()[i].clone()).collect();
    match e.subalgebroid_restrict(&sections, &names, 1)? {
        SubalgebroidOutcome::Closed(a) => Ok(Builtin::bare(a.with_name(name))),
        SubalgebroidOutcome::NotClosed { pair, .. } => {
            Err(Error::Invalid(format!("{name} does not close on pair {pair:?}")))
        }
    }
}

/// `Tℝⁿ` with generators `T1..Tn`, identity anchor and zero bracket.
pub fn tangent(n: usize) -> Builtin {
    let names: Vec<String> = (1..=n).map(|k| format!("T{k}")).collect();
    let anchor = (0..n).map(|k| VectorField::coordinate(n, k)).collect();
    let alg = Algebroid::new(format!("tangent({n})"), BaseSpace::euclidean(n), names, anchor, [])
        .expect("tangent table");
    Builtin::bare(alg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_pass_axioms() {
        for name in NAMES.iter().filter(|n| **n != "E0_itemized") {
            let b = builtin(name).unwrap();
            assert!(b.algebroid.check_axioms().passes(), "{name}");
        }
        assert!(builtin("tangent(3)").unwrap().algebroid.check_axioms().passes());
    }

    #[test]
    fn shapes() {
        let b = builtin("E0").unwrap();
        assert_eq!((b.algebroid.rank(), b.algebroid.nvars()), (4, 2));
        let t = builtin("tangent(2)").unwrap().algebroid;
        assert_eq!(t.anchor_of(1), &VectorField::coordinate(2, 1));
        assert!(t.structure_pairs().is_empty());
        assert_eq!(builtin("E1").unwrap_err(), Error::UnknownBuiltin("E1".into()));
        assert!(builtin("tangent(0)").is_err());
    }

    #[test]
    fn kernel_sections_are_kernel() {
        for name in ["E0", "E0prime", "E00"] {
            let b = builtin(name).unwrap();
            for s in b.kernel_sections() {
                assert!(b.algebroid.anchor_apply(&s).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn lie_variants() {
        assert!(builtin("E0prime_lie").unwrap().algebroid.check_lie().is_lie());
        assert!(!builtin("E0").unwrap().algebroid.check_lie().is_lie());
        assert!(builtin("E00").unwrap().algebroid.check_lie().is_lie());
    }

    #[test]
    fn compact_bracket_table() {
        let e = e0().algebroid;
        let f = |i, j| e.format_section(e.structure(i, j));
        assert_eq!(f(0, 1), "2*x1*X21");
        assert_eq!(f(0, 2), "-2*x1*X12");
        assert_eq!(f(0, 3), "0");
        assert_eq!(f(1, 2), "2*x2*X11 - 2*x1*X22");
        assert_eq!(f(1, 3), "2*x2*X21");
        assert_eq!(f(2, 3), "-2*x2*X12");
    }
}
