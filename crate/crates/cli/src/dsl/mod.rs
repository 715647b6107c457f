//! Text format for bases, bundles, sections, connections, endomorphisms,
//! cometrics and forms.

mod lexer;
mod parser;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use algforge_core::algebroid::{format_combination, CoMetric, Endomorphism};
use algforge_core::builtins::Builtin;
use algforge_core::{Algebroid, BaseSpace, EConnection, Form, Poly, Section, VectorField};

pub use lexer::Pos;
pub use parser::parse;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Semantic,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub pos: Pos,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub(crate) fn syntax(pos: Pos, message: impl Into<String>, expected: Vec<String>) -> Self {
        ParseError { kind: ErrorKind::Syntax, pos, message: message.into(), expected }
    }

    pub(crate) fn semantic(pos: Pos, message: impl Into<String>) -> Self {
        ParseError { kind: ErrorKind::Semantic, pos, message: message.into(), expected: Vec::new() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Semantic => "semantic error",
        };
        write!(f, "{}: {kind}: {}", self.pos, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle {
    pub name: String,
    pub gens: Vec<String>,
    pub anchors: Vec<VectorField>,
    /// Entries with `i < j` only.
    pub brackets: BTreeMap<(usize, usize), Section>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionDecl {
    pub name: String,
    pub bundle: String,
    pub value: Section,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionDecl {
    pub name: String,
    /// Bundle whose generators differentiate.
    pub over: String,
    /// Bundle whose sections are differentiated.
    pub target: String,
    /// `(β, b) ↦ ∇_{e_β} a_b`, nonzero entries only.
    pub rules: BTreeMap<(usize, usize), Section>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoDecl {
    pub name: String,
    pub bundle: String,
    /// `images[j] = J(e_j)`.
    pub images: Vec<Section>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CometricDecl {
    pub name: String,
    pub bundle: String,
    pub matrix: Vec<Vec<Poly>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormDecl {
    pub name: String,
    pub bundle: String,
    pub form: Form,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub base: BaseSpace,
    pub bundles: Vec<Bundle>,
    pub sections: Vec<SectionDecl>,
    pub connections: Vec<ConnectionDecl>,
    pub endos: Vec<EndoDecl>,
    pub cometrics: Vec<CometricDecl>,
    pub forms: Vec<FormDecl>,
}

/// A lookup failure on a parsed document.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LookupError {
    #[error("no {kind} named `{name}`")]
    Missing { kind: &'static str, name: String },
    #[error("document declares no bundle")]
    NoBundle,
    #[error(transparent)]
    Engine(#[from] algforge_core::Error),
}

fn sanitize(name: &str) -> String {
    let s: String = name.chars().filter(|c| c.is_ascii_alphanumeric() || *c == '_').collect();
    if s.is_empty() || s.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        format!("E{s}")
    } else {
        s
    }
}

impl Document {
    pub fn empty(base: BaseSpace) -> Self {
        Document {
            base,
            bundles: Vec::new(),
            sections: Vec::new(),
            connections: Vec::new(),
            endos: Vec::new(),
            cometrics: Vec::new(),
            forms: Vec::new(),
        }
    }

    pub fn from_algebroid(a: &Algebroid) -> Self {
        let mut doc = Document::empty(a.base().clone());
        doc.bundles.push(Bundle {
            name: sanitize(a.name()),
            gens: a.gen_names().to_vec(),
            anchors: a.anchors().to_vec(),
            brackets: a.structure_pairs(),
        });
        doc
    }

    pub fn from_builtin(b: &Builtin) -> Self {
        let mut doc = Document::from_algebroid(&b.algebroid);
        let bundle = doc.bundles[0].name.clone();
        for (name, s) in &b.sections {
            if b.algebroid.gen_index(name).is_some() {
                continue;
            }
            doc.sections.push(SectionDecl { name: name.clone(), bundle: bundle.clone(), value: s.clone() });
        }
        for (name, c) in &b.connections {
            doc.connections.push(ConnectionDecl::from_connection(name, &bundle, &bundle, c));
        }
        for (name, j) in &b.endos {
            let images = (0..j.rank()).map(|c| j.image(c)).collect();
            doc.endos.push(EndoDecl { name: name.clone(), bundle: bundle.clone(), images });
        }
        doc
    }

    pub fn bundle(&self, name: &str) -> Result<&Bundle, LookupError> {
        self.bundles
            .iter()
            .find(|b| b.name == name)
            .ok_or_else(|| LookupError::Missing { kind: "bundle", name: name.into() })
    }

    /// The named bundle, or the first one.
    pub fn bundle_or_first(&self, name: Option<&str>) -> Result<&Bundle, LookupError> {
        match name {
            Some(n) => self.bundle(n),
            None => self.bundles.first().ok_or(LookupError::NoBundle),
        }
    }

    pub fn algebroid(&self, name: &str) -> Result<Algebroid, LookupError> {
        let b = self.bundle(name)?;
        Ok(Algebroid::new(
            b.name.clone(),
            self.base.clone(),
            b.gens.clone(),
            b.anchors.clone(),
            b.brackets.iter().map(|(k, v)| (*k, v.clone())),
        )?)
    }

    pub fn algebroids(&self) -> Result<Vec<Algebroid>, LookupError> {
        self.bundles.iter().map(|b| self.algebroid(&b.name)).collect()
    }

    pub fn section(&self, name: &str) -> Result<&SectionDecl, LookupError> {
        self.sections
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| LookupError::Missing { kind: "section", name: name.into() })
    }

    pub fn connection(&self, name: &str) -> Result<EConnection, LookupError> {
        let c = self
            .connections
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| LookupError::Missing { kind: "connection", name: name.into() })?;
        let over = Arc::new(self.algebroid(&c.over)?);
        let target = self.bundle(&c.target)?.gens.clone();
        Ok(EConnection::from_rules(over, target, c.rules.iter().map(|(k, v)| (*k, v.clone())))?)
    }

    pub fn endo(&self, name: &str) -> Result<(&EndoDecl, Endomorphism), LookupError> {
        let e = self
            .endos
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| LookupError::Missing { kind: "endomorphism", name: name.into() })?;
        Ok((e, Endomorphism::from_images(&e.images)?))
    }

    pub fn cometric(&self, name: &str) -> Result<(&CometricDecl, CoMetric), LookupError> {
        let g = self
            .cometrics
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| LookupError::Missing { kind: "cometric", name: name.into() })?;
        Ok((g, CoMetric::new(g.matrix.clone())?))
    }

    pub fn form(&self, name: &str) -> Result<&FormDecl, LookupError> {
        self.forms
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| LookupError::Missing { kind: "form", name: name.into() })
    }

    fn poly(&self, p: &Poly) -> String {
        p.display_with(self.base.var_names())
    }

    fn section_text(&self, bundle: &str, s: &Section) -> String {
        let gens = &self.bundle(bundle).expect("declared bundle").gens;
        format_combination(s.coeffs().iter().zip(gens.iter().map(String::as_str)), self.base.var_names())
    }

    fn form_text(&self, bundle: &str, f: &Form) -> String {
        let gens = &self.bundle(bundle).expect("declared bundle").gens;
        if f.is_zero() && f.degree() > 0 {
            let wedge: Vec<String> = (0..f.degree()).map(|i| format!("w({})", gens[i])).collect();
            return format!("0*{}", wedge.join("^"));
        }
        f.display_with(gens, self.base.var_names())
    }

    /// Canonical text; `parse(&doc.to_text())` reproduces `doc`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let vars = self.base.var_names();
        out.push_str(&format!("base {} ({})\n", vars.len(), vars.join(", ")));
        let fields: Vec<String> = (1..=vars.len()).map(|k| format!("d{k}")).collect();
        for b in &self.bundles {
            out.push_str(&format!("\nbundle {} rank {} gens ({})\n", b.name, b.gens.len(), b.gens.join(", ")));
            for (g, v) in b.gens.iter().zip(&b.anchors) {
                if !v.is_zero() {
                    let text = format_combination(v.comps().iter().zip(fields.iter().map(String::as_str)), vars);
                    out.push_str(&format!("anchor {g} -> {text}\n"));
                }
            }
            for ((i, j), s) in &b.brackets {
                if !s.is_zero() {
                    out.push_str(&format!(
                        "bracket [{}, {}] = {}\n",
                        b.gens[*i],
                        b.gens[*j],
                        self.section_text(&b.name, s)
                    ));
                }
            }
        }
        if !self.sections.is_empty() {
            out.push('\n');
        }
        for s in &self.sections {
            let on = self.on_clause(&s.bundle, &s.value.is_zero());
            out.push_str(&format!("section {}{on} = {}\n", s.name, self.section_text(&s.bundle, &s.value)));
        }
        for c in &self.connections {
            let over = if c.over == c.target { String::new() } else { format!(" over {}", c.over) };
            out.push_str(&format!("\nconnection {} on {}{over} {{\n", c.name, c.target));
            let (gover, gtarget) = (&self.bundle(&c.over).expect("bundle").gens, &self.bundle(&c.target).expect("bundle").gens);
            let mut any = false;
            for ((beta, b), s) in &c.rules {
                if s.is_zero() {
                    continue;
                }
                any = true;
                out.push_str(&format!("  {} {} -> {}\n", gover[*beta], gtarget[*b], self.section_text(&c.target, s)));
            }
            if !any {
                out.push_str("  default 0\n");
            }
            out.push_str("}\n");
        }
        for e in &self.endos {
            let gens = &self.bundle(&e.bundle).expect("bundle").gens;
            out.push_str(&format!("\nendo {} on {} {{\n", e.name, e.bundle));
            for (g, s) in gens.iter().zip(&e.images) {
                if !s.is_zero() {
                    out.push_str(&format!("  {g} -> {}\n", self.section_text(&e.bundle, s)));
                }
            }
            out.push_str("}\n");
        }
        for g in &self.cometrics {
            let rows: Vec<String> = g
                .matrix
                .iter()
                .map(|r| format!("[{}]", r.iter().map(|p| self.poly(p)).collect::<Vec<_>>().join(", ")))
                .collect();
            out.push_str(&format!("\ncometric {} on {} = [{}]\n", g.name, g.bundle, rows.join(", ")));
        }
        if !self.forms.is_empty() {
            out.push('\n');
        }
        for f in &self.forms {
            let on = self.on_clause(&f.bundle, &(f.form.is_zero() || f.form.degree() == 0));
            out.push_str(&format!("form {}{on} = {}\n", f.name, self.form_text(&f.bundle, &f.form)));
        }
        out
    }

    /// ` on B` when the bundle cannot be inferred from the expression.
    fn on_clause(&self, bundle: &str, ambiguous: &bool) -> String {
        if *ambiguous {
            format!(" on {bundle}")
        } else {
            String::new()
        }
    }

    /// Renders a section of the named bundle.
    pub fn render_section(&self, bundle: &str, s: &Section) -> String {
        self.section_text(bundle, s)
    }

    pub fn render_form(&self, bundle: &str, f: &Form) -> String {
        self.form_text(bundle, f)
    }
}

impl ConnectionDecl {
    pub fn from_connection(name: &str, over: &str, target: &str, c: &EConnection) -> Self {
        let mut rules = BTreeMap::new();
        for (beta, row) in c.gammas().iter().enumerate() {
            for (b, s) in row.iter().enumerate() {
                if !s.is_zero() {
                    rules.insert((beta, b), s.clone());
                }
            }
        }
        ConnectionDecl { name: name.into(), over: over.into(), target: target.into(), rules }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use algforge_core::builtins;

    #[test]
    fn builtin_e0_round_trip() {
        let doc = Document::from_builtin(&builtins::e0());
        let text = doc.to_text();
        let back = parse(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.algebroid("E0").unwrap(), builtins::e0().algebroid);
        assert!(text.contains("bracket [X11, X21] = 2*x1*X21"));
    }

    #[test]
    fn all_builtins_round_trip() {
        for name in builtins::NAMES.iter().copied().chain(["tangent(3)"]) {
            let doc = Document::from_builtin(&builtins::builtin(name).unwrap());
            assert_eq!(parse(&doc.to_text()).unwrap(), doc, "{name}");
        }
    }
}
