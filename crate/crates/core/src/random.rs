//! Seeded generators of polynomials, sections, connections and forms.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebroid::{Algebroid, BracketModifier, Section};
use crate::connection::EConnection;
use crate::error::Result;
use crate::forms::{index_tuples, Form};
use crate::poly::{int, Monomial, Poly};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `terms` terms of degree ≤ `maxdeg` with integer coefficients in `[-3, 3]`.
pub fn poly(rng: &mut impl Rng, nvars: usize, maxdeg: u32, terms: usize) -> Poly {
    let monos = Monomial::all_up_to(nvars, maxdeg);
    let mut p = Poly::zero(nvars);
    for _ in 0..terms {
        let m = monos[rng.gen_range(0..monos.len())].clone();
        let c = rng.gen_range(-3i64..=3);
        p += &Poly::term(nvars, m, int(c));
    }
    p
}

pub fn section(rng: &mut impl Rng, rank: usize, nvars: usize, maxdeg: u32) -> Section {
    Section::new((0..rank).map(|_| poly(rng, nvars, maxdeg, 2)).collect())
}

/// A connection on `E` with sparse random Christoffel symbols.
pub fn connection(rng: &mut impl Rng, alg: Arc<Algebroid>, maxdeg: u32) -> Result<EConnection> {
    let (m, n) = (alg.rank(), alg.nvars());
    let gamma = (0..m)
        .map(|_| {
            (0..m)
                .map(|_| {
                    let coeffs = (0..m)
                        .map(|_| if rng.gen_bool(0.3) { poly(rng, n, maxdeg, 1) } else { Poly::zero(n) })
                        .collect();
                    Section::new(coeffs)
                })
                .collect()
        })
        .collect();
    EConnection::on_self(alg, gamma)
}

/// A modifier with values in the span of `kernel` (sections killed by the anchor).
pub fn kernel_modifier(rng: &mut impl Rng, alg: &Algebroid, kernel: &[Section], maxdeg: u32) -> Result<BracketModifier> {
    let (m, n) = (alg.rank(), alg.nvars());
    let mut values = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let mut s = Section::zero(m, n);
            for k in kernel {
                s.add_scaled(&poly(rng, n, maxdeg, 1), k);
            }
            values.push(((i, j), s));
        }
    }
    BracketModifier::new(values)
}

/// A `degree`-form with sparse random components.
pub fn form(rng: &mut impl Rng, rank: usize, nvars: usize, degree: usize, maxdeg: u32) -> Form {
    let mut comps = Vec::new();
    for k in index_tuples(rank, degree) {
        if rng.gen_bool(0.5) {
            comps.push((k, poly(rng, nvars, maxdeg, 2)));
        }
    }
    Form::from_components(rank, nvars, degree, comps).expect("shape")
}
