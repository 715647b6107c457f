//! Command implementations. Each command turns a loaded document into a [`Report`].

use algforge_core::algebroid::{check_morphism, Feasibility};
use algforge_core::builtins;
use algforge_core::charclass::{cartan_residual, char_form, connection_forms, dr_residual, transgression_check};
use algforge_core::forms::{strong_closed, strong_exact, weak_closed, weak_exact};
use algforge_core::poly::Scalar;
use algforge_core::{random, Algebroid, Decision, EConnection, Form, Section};
use num_traits::Zero;

use crate::dsl::{self, Document, LookupError, ParseError};
use crate::report::{Check, Report, Status};

pub const DEFAULT_MAX_DEGREE: u32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}:{err}")]
    Parse { path: String, err: ParseError },
    #[error(transparent)]
    Lookup(#[from] LookupError),
    #[error(transparent)]
    Engine(#[from] algforge_core::Error),
    #[error("{path}: {err}")]
    Io { path: String, err: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Global options shared by all commands.
#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub max_degree: u32,
    pub bundle: Option<String>,
}

/// A parsed input with the text it was read from.
#[derive(Clone, Debug)]
pub struct Input {
    pub text: String,
    pub doc: Document,
}

/// Reads `builtin:NAME`, `corpus:NAME` or a file path.
pub fn load(path: &str) -> Result<Input, CliError> {
    if let Some(name) = path.strip_prefix("builtin:") {
        let b = builtins::builtin(name)?;
        let doc = Document::from_builtin(&b);
        return Ok(Input { text: doc.to_text(), doc });
    }
    let text = match path.strip_prefix("corpus:") {
        Some(name) => crate::corpus::source(name)
            .ok_or_else(|| CliError::Usage(format!("no corpus document named `{name}`")))?
            .to_string(),
        None => std::fs::read_to_string(path).map_err(|err| CliError::Io { path: path.into(), err })?,
    };
    let doc = dsl::parse(&text).map_err(|err| CliError::Parse { path: path.into(), err })?;
    Ok(Input { text, doc })
}

fn bundle_name(input: &Input, opts: &Options) -> Result<String, CliError> {
    Ok(input.doc.bundle_or_first(opts.bundle.as_deref())?.name.clone())
}

fn algebroid(input: &Input, opts: &Options) -> Result<Algebroid, CliError> {
    Ok(input.doc.algebroid(&bundle_name(input, opts)?)?)
}

/// Resolves a generator given by name or 1-based index.
fn generator(a: &Algebroid, s: &str) -> Result<usize, CliError> {
    let s = s.trim();
    if let Some(i) = a.gen_index(s) {
        return Ok(i);
    }
    match s.parse::<usize>() {
        Ok(i) if (1..=a.rank()).contains(&i) => Ok(i - 1),
        _ => Err(CliError::Usage(format!("`{s}` is not a generator of {}", a.name()))),
    }
}

fn triple(a: &Algebroid, s: &str) -> Result<(usize, usize, usize), CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("expected a triple i,j,k, got `{s}`")));
    }
    Ok((generator(a, parts[0])?, generator(a, parts[1])?, generator(a, parts[2])?))
}

fn names(a: &Algebroid, idx: &[usize]) -> String {
    idx.iter().map(|&i| a.gen_names()[i].as_str()).collect::<Vec<_>>().join(", ")
}

fn form_text(a: &Algebroid, f: &Form) -> String {
    if f.is_zero() {
        "0".into()
    } else {
        f.display_in(a)
    }
}

/// Status of a bounded existential search.
fn decision_status<W>(d: &Decision<W>) -> Status {
    match d {
        Decision::Yes(_) => Status::Pass,
        Decision::No => Status::Fail,
        Decision::NoWitnessWithin(_) => Status::Inconclusive,
    }
}

fn decision_detail<W>(d: &Decision<W>) -> String {
    match d {
        Decision::Yes(_) => "witness found".into(),
        Decision::No => "refuted exactly".into(),
        Decision::NoWitnessWithin(k) => format!("no witness with coefficient degree <= {k}"),
    }
}

/// Anchor compatibility on every generator pair.
pub fn check(input: &Input, opts: &Options) -> Result<Report, CliError> {
    let mut r = Report::new("check", &input.text, opts.seed);
    let a = algebroid(input, opts)?;
    for pc in a.check_axioms().pairs {
        let mut c = Check::of(format!("anchor [{}]", names(&a, &[pc.i, pc.j])), pc.passes());
        if !pc.passes() {
            c = c.witness(a.format_field(&pc.defect)).detail("[rho X, rho Y] - rho[X, Y] is nonzero");
        }
        r.push(c);
    }
    Ok(r)
}

fn jacobiator_check(a: &Algebroid, t: (usize, usize, usize)) -> Result<Vec<Check>, CliError> {
    let (i, j, k) = t;
    let label = names(a, &[i, j, k]);
    let jac = a.gen_jacobiator(i, j, k);
    let mut c = Check::of(format!("J({label}) = 0"), jac.is_zero());
    if !jac.is_zero() {
        c = c.witness(a.format_section(&jac));
    }
    let rho = a.anchor_apply(&jac)?;
    let mut k = Check::of(format!("rho(J({label})) = 0"), rho.is_zero());
    if !rho.is_zero() {
        k = k.witness(a.format_field(&rho));
    }
    Ok(vec![c, k])
}

pub fn jacobiator(input: &Input, opts: &Options, triples: &str) -> Result<Report, CliError> {
    let mut r = Report::new("jacobiator", &input.text, opts.seed);
    let a = algebroid(input, opts)?;
    let list: Vec<(usize, usize, usize)> = if triples == "all" {
        let m = a.rank();
        (0..m).flat_map(|i| (i + 1..m).flat_map(move |j| (j + 1..m).map(move |k| (i, j, k)))).collect()
    } else {
        triples.split(';').map(|t| triple(&a, t)).collect::<Result<_, _>>()?
    };
    for t in list {
        for c in jacobiator_check(&a, t)? {
            r.push(c);
        }
    }
    Ok(r)
}

pub fn lie(input: &Input, opts: &Options) -> Result<Report, CliError> {
    let mut r = Report::new("lie", &input.text, opts.seed);
    let a = algebroid(input, opts)?;
    let axioms = a.check_axioms();
    let mut c = Check::of("anchor compatibility", axioms.passes());
    if let Some(f) = axioms.failures().next() {
        c = c.witness(a.format_field(&f.defect)).detail(format!("fails on [{}]", names(&a, &[f.i, f.j])));
    }
    r.push(c);
    let report = a.check_lie();
    let total = report.triples.len();
    let mut any = false;
    for ((i, j, k), s) in report.nonzero() {
        any = true;
        r.push(Check::fail(format!("J({}) = 0", names(&a, &[*i, *j, *k]))).witness(a.format_section(s)));
    }
    if !any {
        r.push(Check::pass("Jacobi identity").detail(format!("all {total} generator triples")));
    }
    Ok(r)
}

fn connection(input: &Input, name: &str) -> Result<EConnection, CliError> {
    Ok(input.doc.connection(name)?)
}

pub fn connection_report(input: &Input, opts: &Options, name: &str) -> Result<Report, CliError> {
    let mut r = Report::new("connection-report", &input.text, opts.seed);
    let c = connection(input, name)?;
    let a = c.algebroid().clone();
    let m = a.rank();
    let target = input.doc.connections.iter().find(|d| d.name == name).expect("found").target.clone();
    let render = |s: &Section| input.doc.render_section(&target, s);
    if c.is_self() {
        for i in 0..m {
            for j in i + 1..m {
                let t = c.torsion(&a.gen(i), &a.gen(j))?;
                let mut ch = Check::of(format!("torsion T({}) = 0", names(&a, &[i, j])), t.is_zero());
                if !t.is_zero() {
                    ch = ch.witness(render(&t));
                }
                r.push(ch);
            }
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            for b in 0..c.target_rank() {
                let rv = c.gen_curvature(i, j, b);
                if !rv.is_zero() {
                    r.value(format!("R({}){}", names(&a, &[i, j]), c.target_names()[b]), render(&rv));
                }
                if c.is_self() {
                    let rho = a.anchor_apply(&rv)?;
                    let mut ch = Check::of(
                        format!("rho(R({}){}) = 0", names(&a, &[i, j]), a.gen_names()[b]),
                        rho.is_zero(),
                    );
                    if !rho.is_zero() {
                        ch = ch.witness(a.format_field(&rho));
                    }
                    r.push(ch);
                }
            }
        }
    }
    if c.is_self() {
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let d = c.bianchi_defect(&a.gen(i), &a.gen(j), &a.gen(k))?;
                    let mut ch = Check::of(format!("Bianchi ({})", names(&a, &[i, j, k])), d.is_zero());
                    if !d.is_zero() {
                        ch = ch.witness(render(&d));
                    }
                    r.push(ch);
                }
            }
        }
    }
    Ok(r)
}

/// Builds the derived bundle and writes it as a document.
pub fn derive(input: &Input, opts: &Options, name: &str) -> Result<(Report, String), CliError> {
    let mut r = Report::new("derive", &input.text, opts.seed);
    let c = connection(input, name)?;
    let d = c.derive_bundle()?;
    let derived = &d.derived;
    let axioms = derived.check_axioms();
    let mut ch = Check::of("derived anchor compatibility", axioms.passes());
    if let Some(f) = axioms.failures().next() {
        ch = ch.witness(derived.format_field(&f.defect)).detail(format!("fails on [{}]", names(derived, &[f.i, f.j])));
    }
    r.push(ch);
    let lie = derived.check_lie();
    let bad: Vec<_> = lie.nonzero().collect();
    let mut ch = Check::of("derived Jacobi identity", bad.is_empty())
        .detail(format!("{} generator triples", lie.triples.len()));
    if let Some(((i, j, k), s)) = bad.first() {
        ch = ch.witness(format!("J({}) = {}", names(derived, &[*i, *j, *k]), derived.format_section(s)));
    }
    r.push(ch);
    for item in d.verify_prhelp().items {
        let mut ch = Check::of(format!("lifted curvature identity {}", item.item), item.failures.is_empty())
            .detail(format!("{} tuples", item.checked));
        if let Some(f) = item.failures.first() {
            ch = ch.witness(names(derived, f));
        }
        r.push(ch);
    }
    let mut doc = Document::from_algebroid(derived);
    let bundle = doc.bundles[0].name.clone();
    doc.connections.push(dsl::ConnectionDecl::from_connection(&format!("{name}_lift"), &bundle, &bundle, &d.lifted));
    Ok((r, doc.to_text()))
}

pub fn cohomology(input: &Input, opts: &Options, name: &str) -> Result<Report, CliError> {
    let mut r = Report::new("cohomology", &input.text, opts.seed);
    let decl = input.doc.form(name)?;
    let a = input.doc.algebroid(&decl.bundle)?;
    let w = &decl.form;
    let dmax = opts.max_degree;
    let dw = w.differential(&a)?;
    r.value(format!("d{name}"), form_text(&a, &dw));
    r.value(format!("d2{name}"), form_text(&a, &dw.differential(&a)?));

    let sc = strong_closed(&a, w, dmax)?;
    let mut ch = Check::new("strong closed", decision_status(&sc)).detail(decision_detail(&sc));
    if let Decision::Yes(t) = &sc {
        ch = ch.witness(form_text(&a, t));
    }
    r.push(ch);
    let wc = weak_closed(&a, w, dmax)?;
    r.push(Check::new("weak closed", decision_status(&wc)).detail(decision_detail(&wc)));
    let se = strong_exact(&a, w, dmax)?;
    let mut ch = Check::new("strong exact", decision_status(&se)).detail(decision_detail(&se));
    if let Decision::Yes(t) = &se {
        ch = ch.witness(form_text(&a, t));
    }
    r.push(ch);
    let we = weak_exact(&a, w, dmax)?;
    let mut ch = Check::new("weak exact", decision_status(&we)).detail(decision_detail(&we));
    if let Decision::Yes(x) = &we {
        ch = ch.witness(format!("theta = {}; ideal part = {}", form_text(&a, &x.theta), form_text(&a, &x.ideal_part)));
    }
    r.push(ch);
    Ok(r)
}

pub fn charclass(input: &Input, opts: &Options, name: &str, max_k: usize) -> Result<Report, CliError> {
    let mut r = Report::new("charclass", &input.text, opts.seed);
    let c = connection(input, name)?;
    let a = c.algebroid().clone();
    r.push(Check::of("R = d theta + theta ^ theta", cartan_residual(&c)?.is_zero()));
    r.push(Check::of("dR = d2 theta + R ^ theta - theta ^ R", dr_residual(&c)?.is_zero()));
    for k in 1..=max_k {
        let f = char_form(&c, k)?;
        r.value(format!("Tr R^{k}"), form_text(&a, &f));
        if k == 1 {
            let theta0 = connection_forms(&c).trace()?;
            let ok = f.differential(&a)? == theta0.d_squared(&a)?;
            r.push(Check::of("Tr R strong closed", ok).witness(form_text(&a, &theta0)));
        } else {
            let wc = weak_closed(&a, &f, opts.max_degree)?;
            r.push(Check::new(format!("Tr R^{k} weak closed"), decision_status(&wc)).detail(decision_detail(&wc)));
        }
    }
    Ok(r)
}

pub fn transgression(input: &Input, opts: &Options, c1: &str, c2: &str, k: usize) -> Result<Report, CliError> {
    let mut r = Report::new("transgression", &input.text, opts.seed);
    let (n1, n2) = (connection(input, c1)?, connection(input, c2)?);
    let a = n1.algebroid().clone();
    let t = transgression_check(&n1, &n2, k, opts.max_degree)?;
    r.value("difference", form_text(&a, &t.difference));
    r.value("theta", form_text(&a, &t.theta));
    r.value("ideal part", form_text(&a, &t.ideal_part));
    let mut ch = Check::of("homotopy identity", t.identity_holds());
    if !t.identity_holds() {
        ch = ch.witness(form_text(&a, &t.residual));
    }
    r.push(ch);
    let status = if t.passes() {
        Status::Pass
    } else if t.inconclusive() {
        Status::Inconclusive
    } else {
        Status::Fail
    };
    r.push(
        Check::new(format!("Tr({c2})^{k} - Tr({c1})^{k} weak exact"), status)
            .witness(form_text(&a, &t.theta))
            .detail(decision_detail(&t.ideal_membership)),
    );
    Ok(r)
}

fn matrix_text(a: &Algebroid, m: &[Vec<algforge_core::Poly>]) -> String {
    let rows: Vec<String> =
        m.iter().map(|r| format!("[{}]", r.iter().map(|p| a.format_poly(p)).collect::<Vec<_>>().join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

fn scalar_matrix_text(m: &[Vec<Scalar>]) -> String {
    let rows: Vec<String> =
        m.iter().map(|r| format!("[{}]", r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

pub fn courant(input: &Input, opts: &Options) -> Result<Report, CliError> {
    let mut r = Report::new("courant", &input.text, opts.seed);
    let bundle = bundle_name(input, opts)?;
    let a = input.doc.algebroid(&bundle)?;
    let origin = vec![Scalar::zero(); a.nvars()];
    let sols = a.courant_solution_space(opts.max_degree, &origin)?;
    r.value("solution space dimension", sols.basis.len().to_string());
    let mut ch = Check::of("no solution nondegenerate at the origin", !sols.nondegenerate.is_yes())
        .detail(format!("symmetric G with entries of degree <= {}", sols.max_degree));
    if let Decision::Yes(g) = &sols.nondegenerate {
        ch = ch.witness(matrix_text(&a, g.matrix()));
    }
    r.push(ch);
    for (i, v) in sols.values.iter().enumerate() {
        if v.iter().flatten().any(|c| !c.is_zero()) {
            r.value(format!("G{} at origin", i + 1), scalar_matrix_text(v));
        }
    }
    for decl in input.doc.cometrics.iter().filter(|g| g.bundle == bundle) {
        let (_, g) = input.doc.cometric(&decl.name)?;
        let defect = a.courant_defect(&g)?;
        let zero = defect.iter().flatten().all(|p| p.is_zero());
        let mut ch = Check::of(format!("rho {} rho^T = 0", decl.name), zero);
        if !zero {
            ch = ch.witness(matrix_text(&a, &defect));
        }
        r.push(ch);
    }
    Ok(r)
}

pub fn nijenhuis(input: &Input, opts: &Options, name: &str) -> Result<Report, CliError> {
    let mut r = Report::new("nijenhuis", &input.text, opts.seed);
    let (decl, j) = input.doc.endo(name)?;
    let a = input.doc.algebroid(&decl.bundle)?;
    r.push(Check::of(format!("{name}^2 = -id"), j.is_almost_complex()));
    for x in 0..a.rank() {
        for y in x + 1..a.rank() {
            let n = a.nijenhuis(&j, &a.gen(x), &a.gen(y))?;
            let mut ch = Check::of(format!("N({}) = 0", names(&a, &[x, y])), n.is_zero());
            if !n.is_zero() {
                ch = ch.witness(a.format_section(&n));
            }
            r.push(ch);
        }
    }
    Ok(r)
}

/// Anchor-killed sections: declared sections of the bundle plus generators with zero anchor.
fn kernel_sections(input: &Input, a: &Algebroid, bundle: &str) -> Result<Vec<(String, Section)>, CliError> {
    let mut out: Vec<(String, Section)> = Vec::new();
    for i in 0..a.rank() {
        if a.anchor_of(i).is_zero() {
            out.push((a.gen_names()[i].clone(), a.gen(i)));
        }
    }
    for s in input.doc.sections.iter().filter(|s| s.bundle == bundle) {
        if a.anchor_apply(&s.value)?.is_zero() && !out.iter().any(|(_, v)| *v == s.value) {
            out.push((s.name.clone(), s.value.clone()));
        }
    }
    Ok(out)
}

pub fn obstruction(
    input: &Input,
    opts: &Options,
    triple_arg: &str,
    kernel: Option<&str>,
    samples: usize,
) -> Result<Report, CliError> {
    let mut r = Report::new("obstruction", &input.text, opts.seed);
    let bundle = bundle_name(input, opts)?;
    let a = input.doc.algebroid(&bundle)?;
    let t = triple(&a, triple_arg)?;
    let kernel: Vec<(String, Section)> = match kernel {
        Some(list) => list
            .split(',')
            .map(|n| {
                let n = n.trim();
                match a.gen_index(n) {
                    Some(i) => Ok((n.to_string(), a.gen(i))),
                    None => Ok((n.to_string(), input.doc.section(n)?.value.clone())),
                }
            })
            .collect::<Result<_, CliError>>()?,
        None => kernel_sections(input, &a, &bundle)?,
    };
    let ks: Vec<Section> = kernel.iter().map(|(_, s)| s.clone()).collect();
    r.value("kernel", kernel.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join(", "));
    let cert = a.lie_infeasibility_certificate(&ks, t, opts.max_degree)?;
    r.value("jacobiator", a.format_section(&cert.jacobiator));
    r.value("parameters", cert.parameters.to_string());
    if let Some(d) = cert.jacobiator_min_degree {
        r.value("jacobiator min degree", d.to_string());
    }
    if let Some(d) = cert.modifier_min_degree {
        r.value("modifier min degree", d.to_string());
    }
    r.push(Check::of("modified Jacobiator equals J - B", cert.modifier_identity));
    let status = match cert.verdict {
        Feasibility::Infeasible => Status::Pass,
        Feasibility::TriviallyFeasible => Status::Fail,
        Feasibility::Inconclusive => Status::Inconclusive,
    };
    let detail = match cert.verdict {
        Feasibility::Infeasible => "every kernel-valued modifier leaves a nonzero Jacobiator",
        Feasibility::TriviallyFeasible => "the Jacobiator already vanishes on this triple",
        Feasibility::Inconclusive => "degree bookkeeping does not separate the terms",
    };
    r.push(
        Check::new(
            format!("no Lie modification on ({}) at degree <= {}", names(&a, &[t.0, t.1, t.2]), opts.max_degree),
            status,
        )
        .detail(detail),
    );
    if samples > 0 {
        let mut rng = random::rng(opts.seed);
        let (x, y, z) = (a.gen(t.0), a.gen(t.1), a.gen(t.2));
        let mut zero = None;
        for s in 0..samples {
            let b = random::kernel_modifier(&mut rng, &a, &ks, opts.max_degree)?;
            if a.modify_bracket(&b)?.jacobiator(&x, &y, &z)?.is_zero() {
                zero = Some(s);
                break;
            }
        }
        let mut ch = Check::of("random kernel modifiers keep the Jacobiator nonzero", zero.is_none())
            .detail(format!("{samples} samples"));
        if let Some(s) = zero {
            ch = ch.witness(format!("sample {s}"));
        }
        r.push(ch);
    }
    Ok(r)
}

/// Shared by `verify-paper`: the morphism check for the `E0prime → E0` map.
pub(crate) fn f0_morphism_passes() -> algforge_core::Result<bool> {
    let src = builtins::e0_prime().algebroid;
    let dst = builtins::e0().algebroid;
    Ok(check_morphism(&builtins::f0_matrix(), &src, &dst)?.passes())
}
