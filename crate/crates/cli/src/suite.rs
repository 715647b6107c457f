//! The built-in verification suite run by `verify-paper`.

use std::sync::Arc;

use algforge_core::algebroid::{CoMetric, Feasibility};
use algforge_core::builtins::{self, Builtin};
use algforge_core::charclass::{
    cartan_residual, char_form, connection_forms, dr_residual, homotopy_identity_check, product_algebroid,
    pullback_consistency, transgression_check,
};
use algforge_core::forms::{weak_closed, Form, IdealBasis};
use algforge_core::poly::{int, Scalar};
use algforge_core::{random, Algebroid, EConnection, Poly, Section};
use num_traits::Zero;

use crate::commands;
use crate::corpus;
use crate::dsl::{self, Document};
use crate::report::{Check, Report};

/// Criteria that cannot pass as stated; they are run and reported as failures.
pub const KNOWN_UNATTAINABLE: [u8; 2] = [12, 14];

type Outcome = Result<(bool, String), String>;

struct Criterion {
    id: u8,
    title: &'static str,
    run: fn(u64) -> Outcome,
}

const CRITERIA: [Criterion; 19] = [
    Criterion { id: 1, title: "E0 anchor axioms", run: c01_axioms },
    Criterion { id: 2, title: "Jacobiator table", run: c02_jacobiator },
    Criterion { id: 3, title: "kernel bracket table", run: c03_kernel_brackets },
    Criterion { id: 4, title: "E01 and E02 are Lie", run: c04_subalgebroids },
    Criterion { id: 5, title: "E0prime structures and f0", run: c05_e0_prime },
    Criterion { id: 6, title: "E0doubleprime closure", run: c06_doubleprime },
    Criterion { id: 7, title: "torsion-free connection", run: c07_torsion_free },
    Criterion { id: 8, title: "Bianchi identity", run: c08_bianchi },
    Criterion { id: 9, title: "derived E0 is Lie", run: c09_derived_lie },
    Criterion { id: 10, title: "lifted curvature identities", run: c10_prhelp },
    Criterion { id: 11, title: "Lie modification obstruction", run: c11_obstruction },
    Criterion { id: 12, title: "Courant cometric degeneracy", run: c12_courant },
    Criterion { id: 13, title: "complex structure", run: c13_complex },
    Criterion { id: 14, title: "d2 characterization", run: c14_d_squared },
    Criterion { id: 15, title: "Cartan structure equations", run: c15_cartan },
    Criterion { id: 16, title: "homotopy operator", run: c16_homotopy },
    Criterion { id: 17, title: "transgression", run: c17_transgression },
    Criterion { id: 18, title: "pullback consistency", run: c18_pullback },
    Criterion { id: 19, title: "DSL round-trip and exit codes", run: c19_corpus },
];

pub fn check_name(id: u8, title: &str) -> String {
    format!("{id:02} {title}")
}

/// Runs every criterion; checks come back in criterion order.
pub fn verify(seed: u64) -> Report {
    let mut report = Report::new("verify-paper", "", seed);
    let outcomes: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = CRITERIA.iter().map(|c| s.spawn(move || (c.run)(seed))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err("panicked".to_string())))
            .collect()
    });
    for (c, out) in CRITERIA.iter().zip(outcomes) {
        let (ok, detail) = out.unwrap_or_else(|e| (false, format!("error: {e}")));
        let mut detail = detail;
        if !ok && KNOWN_UNATTAINABLE.contains(&c.id) {
            detail.push_str(" [known unattainable as stated]");
        }
        report.push(Check::of(check_name(c.id, c.title), ok).detail(detail));
    }
    report
}

fn e0() -> Builtin {
    builtins::e0()
}

fn x(i: usize) -> Poly {
    Poly::var(2, i)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn all_triples(m: usize) -> Vec<(usize, usize, usize)> {
    (0..m).flat_map(|i| (i + 1..m).flat_map(move |j| (j + 1..m).map(move |k| (i, j, k)))).collect()
}

fn c01_axioms(_: u64) -> Outcome {
    let a = e0().algebroid;
    let r = a.check_axioms();
    let it = builtins::e0_itemized().algebroid;
    let bad: Vec<_> = it.check_axioms().failures().cloned().collect();
    let ok = r.pairs.len() == 6 && r.passes() && !bad.is_empty();
    let defect = bad.first().map(|f| format!("[{}, {}] defect {}", it.gen_names()[f.i], it.gen_names()[f.j], it.format_field(&f.defect)));
    Ok((ok, format!("6 pairs hold; itemized table: {}", defect.unwrap_or_else(|| "no defect".into()))))
}

fn c02_jacobiator(_: u64) -> Outcome {
    let b = e0();
    let a = &b.algebroid;
    let (xc1, xc2) = (b.section("Xc1").expect("kernel"), b.section("Xc2").expect("kernel"));
    let zeros = a.gen_jacobiator(0, 1, 3).is_zero() && a.gen_jacobiator(0, 2, 3).is_zero();
    let j1 = a.gen_jacobiator(0, 1, 2);
    let j2 = a.gen_jacobiator(1, 2, 3);
    let two = Poly::from_int(2, 2);
    let sign = |j: &Section, target: &Section| {
        let t = target.scale(&two);
        if *j == t {
            Some('+')
        } else if *j == -&t {
            Some('-')
        } else {
            None
        }
    };
    let (s1, s2) = (sign(&j1, xc2), sign(&j2, xc1));
    let kernel = all_triples(4)
        .into_iter()
        .all(|(i, j, k)| a.anchor_apply(&a.gen_jacobiator(i, j, k)).is_ok_and(|v| v.is_zero()));
    let ok = zeros && s1.is_some() && s2.is_some() && kernel;
    let s = |c: Option<char>| c.map_or("?".to_string(), |c| c.to_string());
    Ok((
        ok,
        format!(
            "J(X11,X21,X12) = {}2 Xc2, J(X21,X12,X22) = {}2 Xc1 (reference table prints sign -, recorded as a discrepancy); rho(J) = 0",
            s(s1),
            s(s2)
        ),
    ))
}

fn c03_kernel_brackets(_: u64) -> Outcome {
    let b = e0();
    let a = &b.algebroid;
    let (xc1, xc2) = (b.section("Xc1").expect("kernel"), b.section("Xc2").expect("kernel"));
    let g = |i| a.gen(i);
    let k = |c: i64, v: usize, s: &Section| s.scale(&x(v).scale(&int(c)));
    let zero = Section::zero(4, 2);
    let table: [(&Section, usize, Section); 8] = [
        (xc1, 0, zero.clone()),
        (xc1, 2, zero.clone()),
        (xc2, 1, zero.clone()),
        (xc2, 3, zero),
        (xc1, 3, k(-2, 1, xc1)),
        (xc1, 1, k(2, 0, xc2)),
        (xc2, 0, k(-2, 0, xc2)),
        (xc2, 2, k(2, 1, xc1)),
    ];
    let mut matched = 0;
    let mut kernel = true;
    for (s, i, expected) in &table {
        let br = a.bracket(s, &g(*i)).map_err(err)?;
        matched += usize::from(br == *expected);
        kernel &= a.anchor_apply(&br).map_err(err)?.is_zero();
    }
    let both = a.bracket(xc1, xc2).map_err(err)?;
    kernel &= a.anchor_apply(&both).map_err(err)?.is_zero();
    Ok((
        matched == 8 && kernel,
        format!("{matched}/8 displayed brackets match; [Xc1, Xc2] = {} is kernel-valued", a.format_section(&both)),
    ))
}

fn lie_ok(a: &Algebroid) -> bool {
    a.check_axioms().passes() && a.check_lie().is_lie()
}

fn c04_subalgebroids(_: u64) -> Outcome {
    let e01 = builtins::builtin("E01").map_err(err)?.algebroid;
    let e02 = builtins::builtin("E02").map_err(err)?.algebroid;
    Ok((lie_ok(&e01) && lie_ok(&e02), "induced structures on span(X11, X21, X22) and span(X11, X12, X22)".into()))
}

fn c05_e0_prime(_: u64) -> Outcome {
    let unprimed = builtins::e0_prime().algebroid;
    let primed = builtins::e0_prime_lie().algebroid;
    let axioms = unprimed.check_axioms().passes();
    let lie = lie_ok(&primed);
    let morphism = commands::f0_morphism_passes().map_err(err)?;
    Ok((axioms && lie && morphism, format!("axioms {axioms}, primed Lie {lie}, f0 morphism {morphism}")))
}

fn c06_doubleprime(_: u64) -> Outcome {
    let b = e0();
    let a = &b.algebroid;
    let (a1, b1) = (b.section("A1").expect("A1"), b.section("B1").expect("B1"));
    let br = a.bracket(a1, b1).map_err(err)?;
    let expected = &a1.scale(&x(1).scale(&int(-2))) + &b1.scale(&x(0).scale(&int(2)));
    let closure = br == expected;
    let names = vec!["A1".to_string(), "B1".to_string()];
    let induced = a.subalgebroid_restrict(&[a1.clone(), b1.clone()], &names, 1).map_err(err)?;
    let Some(sub) = induced.closed() else { return Ok((false, "span(A1, B1) does not close".into())) };
    let dp = builtins::e0_doubleprime().algebroid;
    let table = sub.structure_pairs() == dp.structure_pairs() && sub.anchors() == dp.anchors();
    let e00 = builtins::e00().algebroid;
    let e00_match = e00.structure(0, 1).coeffs()[..2] == dp.structure(0, 1).coeffs()[..]
        && e00.anchors()[..2] == dp.anchors()[..];
    let ok = closure && lie_ok(sub) && table && e00_match;
    Ok((ok, format!("[A1, B1] = {}; induced table matches E0doubleprime and E00", a.format_section(&br))))
}

fn torsion_free() -> EConnection {
    e0().connection("torsion_free").expect("registered").clone()
}

fn c07_torsion_free(_: u64) -> Outcome {
    let c = torsion_free();
    let a = c.algebroid();
    let torsion = c.torsion_failure().map_err(err)?.is_none();
    let mut kernel = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            for b in 0..4 {
                kernel += usize::from(a.anchor_apply(&c.gen_curvature(i, j, b)).map_err(err)?.is_zero());
            }
        }
    }
    Ok((torsion && kernel == 24, format!("torsion zero on 6 pairs; rho(R) = 0 on {kernel}/24 generator triples")))
}

fn bianchi_ok(c: &EConnection) -> Result<bool, String> {
    let a = c.algebroid();
    for (i, j, k) in all_triples(a.rank()) {
        if !c.bianchi_defect(&a.gen(i), &a.gen(j), &a.gen(k)).map_err(err)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn c08_bianchi(seed: u64) -> Outcome {
    let tf = bianchi_ok(&torsion_free())?;
    let arc = Arc::new(e0().algebroid);
    let mut rng = random::rng(seed);
    let mut good = 0;
    for _ in 0..20 {
        let c = random::connection(&mut rng, arc.clone(), 2).map_err(err)?;
        good += usize::from(bianchi_ok(&c)?);
    }
    Ok((tf && good == 20, format!("torsion-free connection on 4 triples; {good}/20 random connections")))
}

fn c09_derived_lie(_: u64) -> Outcome {
    let d = torsion_free().derive_bundle().map_err(err)?;
    let axioms = d.derived.check_axioms().passes();
    let lie = d.derived.check_lie();
    let n = lie.triples.len();
    let ok = axioms && lie.is_lie() && n == 120;
    Ok((ok, format!("rank {} derived bundle: axioms {axioms}, Jacobiator zero on {}/{n} triples", d.derived.rank(), n - lie.nonzero().count())))
}

fn c10_prhelp(_: u64) -> Outcome {
    let d = torsion_free().derive_bundle().map_err(err)?;
    let r = d.verify_prhelp();
    let counts: Vec<String> =
        r.items.iter().map(|i| format!("{}: {}/{}", i.item, i.checked - i.failures.len(), i.checked)).collect();
    Ok((r.passes() && r.items.len() == 5, format!("identities {}", counts.join(", "))))
}

fn c11_obstruction(seed: u64) -> Outcome {
    let b = e0();
    let a = &b.algebroid;
    let kernel = b.kernel_sections();
    let mut verdicts = Vec::new();
    for d in [2, 3] {
        let cert = a.lie_infeasibility_certificate(&kernel, (0, 1, 2), d).map_err(err)?;
        verdicts.push(cert.verdict == Feasibility::Infeasible && cert.modifier_identity);
    }
    let mut rng = random::rng(seed);
    let (x, y, z) = (a.gen(0), a.gen(1), a.gen(2));
    let mut nonzero = 0;
    for _ in 0..50 {
        let m = random::kernel_modifier(&mut rng, a, &kernel, 3).map_err(err)?;
        nonzero += usize::from(!a.modify_bracket(&m).map_err(err)?.jacobiator(&x, &y, &z).map_err(err)?.is_zero());
    }
    let ok = verdicts.iter().all(|v| *v) && nonzero == 50;
    Ok((ok, format!("infeasible at D = 2: {}, D = 3: {}; {nonzero}/50 random modifiers nonzero", verdicts[0], verdicts[1])))
}

fn c12_courant(_: u64) -> Outcome {
    let a = e0().algebroid;
    let origin = vec![Scalar::zero(); 2];
    let d4 = a.courant_solution_space(4, &origin).map_err(err)?;
    let nonempty = !d4.basis.is_empty();
    let degenerate = d4.all_degenerate_at_point();
    let constant = a.courant_solution_space(0, &origin).map_err(err)?;
    let constant_trivial = constant.basis.is_empty();
    let q = &x(0).pow(4) + &x(1).pow(4);
    let id = a.courant_defect(&CoMetric::identity(4, 2)).map_err(err)?;
    let identity = id == vec![vec![q.clone(), Poly::zero(2)], vec![Poly::zero(2), q]];
    let ok = nonempty && degenerate && constant_trivial && identity;
    let mut detail = format!(
        "D = 4 space dimension {}; all basis solutions vanish at origin: {degenerate}; constant solutions: {}; identity defect (x1^4 + x2^4) I2: {identity}",
        d4.basis.len(),
        constant.basis.len()
    );
    if let Some(g) = constant.basis.first() {
        let m: Vec<String> = g
            .matrix()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|p| a.format_poly(p)).collect::<Vec<_>>().join(", ")))
            .collect();
        detail.push_str(&format!("; constant solution [{}]", m.join(", ")));
    }
    Ok((ok, detail))
}

fn c13_complex(_: u64) -> Outcome {
    let b = e0();
    let a = &b.algebroid;
    let j = b.endo("J").expect("J");
    let mut zero = 0;
    for x in 0..4 {
        for y in x + 1..4 {
            zero += usize::from(a.nijenhuis(j, &a.gen(x), &a.gen(y)).map_err(err)?.is_zero());
        }
    }
    Ok((j.is_almost_complex() && zero == 6, format!("J^2 = -id; Nijenhuis zero on {zero}/6 pairs")))
}

fn c14_d_squared(seed: u64) -> Outcome {
    let a = e0().algebroid;
    let mut rng = random::rng(seed);
    let mut functions = true;
    for _ in 0..20 {
        let f = Form::function(4, random::poly(&mut rng, 2, 4, 4));
        functions &= f.d_squared(&a).map_err(err)?.is_zero();
    }
    let (mut literal, mut opposite, mut ideal) = (0, 0, 0);
    for _ in 0..20 {
        let w = random::form(&mut rng, 4, 2, 1, 3);
        let d2 = w.d_squared(&a).map_err(err)?;
        let wj = w.compose_jacobiator(&a).map_err(err)?;
        literal += usize::from(d2 == wj);
        opposite += usize::from(d2 == -&wj);
        let in_f0 = d2.comps().values().all(|c| c.terms().all(|(m, _)| m.exps()[0] >= 2 || m.exps()[1] >= 2));
        ideal += usize::from(in_f0);
    }
    let mut higher = true;
    for k in 3..=4 {
        for _ in 0..5 {
            higher &= random::form(&mut rng, 4, 2, k, 3).d_squared(&a).map_err(err)?.is_zero();
        }
    }
    let ok = functions && literal == 20 && higher && ideal == 20;
    Ok((
        ok,
        format!(
            "d2 f = 0: {functions}; d2 w = w(J) on {literal}/20 1-forms, d2 w = -w(J) on {opposite}/20; d2 = 0 on degrees 3, 4: {higher}; coefficients in <x1^2, x2^2>: {ideal}/20"
        ),
    ))
}

fn cartan_ok(c: &EConnection) -> Result<bool, String> {
    let a = c.algebroid();
    let eqs = cartan_residual(c).map_err(err)?.is_zero() && dr_residual(c).map_err(err)?.is_zero();
    let tr = char_form(c, 1).map_err(err)?;
    let theta0 = connection_forms(c).trace().map_err(err)?;
    let strong = tr.differential(a).map_err(err)? == theta0.d_squared(a).map_err(err)?;
    let tr2 = char_form(c, 2).map_err(err)?;
    let weak = weak_closed(a, &tr2, 2).map_err(err)?.is_yes();
    Ok(eqs && strong && weak)
}

fn c15_cartan(seed: u64) -> Outcome {
    let b = e0();
    let flat = b.connection("flat").expect("flat").clone();
    let named = cartan_ok(&flat)? && cartan_ok(&torsion_free())?;
    let mut flat_zero = true;
    for k in 1..=4 {
        flat_zero &= char_form(&flat, k).map_err(err)?.is_zero();
    }
    let arc = Arc::new(b.algebroid);
    let mut rng = random::rng(seed);
    let mut good = 0;
    for _ in 0..20 {
        let c = random::connection(&mut rng, arc.clone(), 1).map_err(err)?;
        good += usize::from(cartan_ok(&c)?);
    }
    Ok((named && flat_zero && good == 20, format!("flat and torsion_free: {named}; {good}/20 random; flat Tr R^k = 0 for k <= 4: {flat_zero}")))
}

fn c16_homotopy(seed: u64) -> Outcome {
    let p = product_algebroid(Arc::new(e0().algebroid)).map_err(err)?;
    let big = p.product().clone();
    let (m, n) = (big.rank(), big.nvars());
    let mut rng = random::rng(seed);
    let mut identity = 0;
    for k in 1..=4 {
        for _ in 0..20 {
            let w = random::form(&mut rng, m, n, k, 2);
            identity += usize::from(homotopy_identity_check(&p, &w, 0).map_err(err)?.identity_residual.is_zero());
        }
    }
    let mut d2 = 0;
    for _ in 0..20 {
        let w = random::form(&mut rng, m, n, 1, 2);
        d2 += usize::from(homotopy_identity_check(&p, &w, 0).map_err(err)?.d2_residual.is_zero());
    }
    let ideal = IdealBasis::new(&big).map_err(err)?;
    let mut image = 0;
    for _ in 0..5 {
        let eta: Vec<Form> = (0..m).map(|_| random::form(&mut rng, m, n, 1, 1)).collect();
        let w = ideal.combine(&eta).map_err(err)?;
        let r = homotopy_identity_check(&p, &w, 2).map_err(err)?;
        image += usize::from(r.ideal_image.as_ref().is_some_and(|d| d.is_yes()) && r.passes());
    }
    let ok = identity == 80 && d2 == 20 && image == 5;
    Ok((ok, format!("identity on {identity}/80 forms of degree 1..4; H d2 = d2 H on {d2}/20; H of ideal elements in the ideal: {image}/5")))
}

fn c17_transgression(seed: u64) -> Outcome {
    let b = e0();
    let flat = b.connection("flat").expect("flat").clone();
    let mut pairs = vec![(flat, torsion_free())];
    let arc = Arc::new(b.algebroid);
    let mut rng = random::rng(seed);
    for _ in 0..5 {
        let c1 = random::connection(&mut rng, arc.clone(), 1).map_err(err)?;
        let c2 = random::connection(&mut rng, arc.clone(), 1).map_err(err)?;
        pairs.push((c1, c2));
    }
    let mut good = 0;
    for (c1, c2) in &pairs {
        for k in 1..=2 {
            good += usize::from(transgression_check(c1, c2, k, 2).map_err(err)?.passes());
        }
    }
    Ok((good == 12, format!("{good}/12 (pair, k) certified weak exact with explicit witnesses")))
}

fn c18_pullback(seed: u64) -> Outcome {
    let a = Arc::new(e0().algebroid);
    let t2 = Arc::new(builtins::tangent(2).algebroid);
    let flat = EConnection::flat(t2.clone(), t2.gen_names().to_vec()).map_err(err)?;
    let r = pullback_consistency(a.clone(), &flat, 1, 2).map_err(err)?;
    let flat_ok = r.char_form.is_zero() && r.pulled_back.is_zero() && r.equal_on_the_nose();
    let mut rng = random::rng(seed);
    let base = random::connection(&mut rng, t2, 2).map_err(err)?;
    let r = pullback_consistency(a, &base, 1, 2).map_err(err)?;
    let nonflat = !char_form(&base, 1).map_err(err)?.is_zero();
    let ok = flat_ok && r.passes() && nonflat;
    Ok((ok, format!("flat base: both zero {flat_ok}; nonflat base (Tr R != 0: {nonflat}) agrees mod ideal: {}", r.passes())))
}

fn c19_corpus(_: u64) -> Outcome {
    let mut failures = Vec::new();
    let mut docs = 0;
    for name in builtins::NAMES.iter().map(|n| n.to_string()).chain(["tangent(3)".to_string()]) {
        let doc = Document::from_builtin(&builtins::builtin(&name).map_err(err)?);
        docs += 1;
        if dsl::parse(&doc.to_text()).ok().as_ref() != Some(&doc) {
            failures.push(format!("builtin {name} round-trip"));
        }
    }
    for (name, text) in corpus::DOCS {
        docs += 1;
        if let Ok(doc) = dsl::parse(text) {
            if dsl::parse(&doc.to_text()).ok().as_ref() != Some(&doc) {
                failures.push(format!("{name} round-trip"));
            }
        }
    }
    for case in corpus::CASES {
        let args: Vec<String> = std::iter::once("algforge".to_string()).chain(case.args.iter().map(|s| s.to_string())).collect();
        let out = crate::run(args);
        if out.code != case.exit {
            failures.push(format!("`{}` exited {} (expected {})", case.args.join(" "), out.code, case.exit));
        }
    }
    let ok = failures.is_empty() && docs >= 10;
    let detail = if ok {
        format!("{docs} documents round-trip; {} exit-code cases", corpus::CASES.len())
    } else {
        failures.join("; ")
    };
    Ok((ok, detail))
}
