use std::collections::BTreeMap;

use algforge_core::forms::Form;
use algforge_core::poly::Scalar;
use algforge_core::{BaseSpace, Poly, Section, VectorField};

use super::lexer::{lex, Pos, Tok, Token};
use super::{Bundle, CometricDecl, ConnectionDecl, Document, EndoDecl, FormDecl, ParseError, SectionDecl};

const KEYWORDS: [&str; 10] =
    ["base", "bundle", "anchor", "bracket", "section", "connection", "endo", "cometric", "form", "default"];

/// Parses and resolves a document.
pub fn parse(text: &str) -> Result<Document, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, at: 0, doc: None, names: BTreeMap::new() };
    p.document()?;
    Ok(p.doc.expect("document has a base"))
}

/// Value of an expression during resolution.
#[derive(Clone, Debug)]
enum Val {
    Poly(Poly),
    Field(Vec<Poly>),
    Sec(usize, Section),
    Form(usize, Form),
}

impl Val {
    fn kind(&self) -> &'static str {
        match self {
            Val::Poly(_) => "polynomial",
            Val::Field(_) => "vector field",
            Val::Sec(..) => "section",
            Val::Form(..) => "form",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum NameKind {
    Var,
    Bundle,
    Gen(usize, usize),
    Section,
    Connection,
    Endo,
    Cometric,
    Form,
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    doc: Option<Document>,
    names: BTreeMap<String, NameKind>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.at + k).min(self.tokens.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::syntax(
            self.pos(),
            format!("unexpected {}", self.peek()),
            expected.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, ParseError> {
        if *self.peek() == tok {
            Ok(self.next().pos)
        } else {
            Err(self.unexpected(&[&tok.to_string()]))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.next();
                Ok(())
            }
            _ => Err(self.unexpected(&[&format!("`{kw}`")])),
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.next().pos;
                Ok((s, pos))
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn int(&mut self) -> Result<(usize, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Int(s) => {
                let pos = self.next().pos;
                let v = s.parse().map_err(|_| ParseError::syntax(pos, "integer too large", vec![]))?;
                Ok((v, pos))
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    fn ident_list(&mut self) -> Result<Vec<(String, Pos)>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut out = vec![self.ident()?];
        while *self.peek() == Tok::Comma {
            self.next();
            out.push(self.ident()?);
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    fn doc(&self) -> &Document {
        self.doc.as_ref().expect("base declared")
    }

    fn doc_mut(&mut self) -> &mut Document {
        self.doc.as_mut().expect("base declared")
    }

    fn nvars(&self) -> usize {
        self.doc().base.dim()
    }

    fn declare(&mut self, name: &str, pos: Pos, kind: NameKind) -> Result<(), ParseError> {
        if KEYWORDS.contains(&name) || name == "w" {
            return Err(ParseError::semantic(pos, format!("`{name}` is reserved")));
        }
        if self.names.contains_key(name) {
            return Err(ParseError::semantic(pos, format!("`{name}` is already declared")));
        }
        self.names.insert(name.to_string(), kind);
        Ok(())
    }

    fn document(&mut self) -> Result<(), ParseError> {
        loop {
            let start = self.pos();
            let kw = match self.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) && s != "default" => s,
                _ => {
                    return Err(self.unexpected(&[
                        "`base`",
                        "`bundle`",
                        "`anchor`",
                        "`bracket`",
                        "`section`",
                        "`connection`",
                        "`endo`",
                        "`cometric`",
                        "`form`",
                    ]))
                }
            };
            self.next();
            if kw == "base" {
                if self.doc.is_some() {
                    return Err(ParseError::semantic(start, "a document has a single base"));
                }
                self.base(start)?;
                continue;
            }
            if self.doc.is_none() {
                return Err(ParseError::semantic(start, format!("`{kw}` before the base declaration")));
            }
            match kw.as_str() {
                "bundle" => self.bundle()?,
                "anchor" => self.anchor()?,
                "bracket" => self.bracket(start)?,
                "section" => self.section()?,
                "connection" => self.connection()?,
                "endo" => self.endo(start)?,
                "cometric" => self.cometric(start)?,
                "form" => self.form(start)?,
                _ => unreachable!(),
            }
        }
        if self.doc.is_none() {
            return Err(ParseError::semantic(self.pos(), "missing base declaration"));
        }
        Ok(())
    }

    fn base(&mut self, start: Pos) -> Result<(), ParseError> {
        let (n, npos) = self.int()?;
        let vars = self.ident_list()?;
        if vars.len() != n {
            return Err(ParseError::semantic(npos, format!("base declares {n} variables but lists {}", vars.len())));
        }
        for (v, pos) in &vars {
            if is_field_name(v).is_some() {
                return Err(ParseError::semantic(*pos, format!("`{v}` is reserved for coordinate vector fields")));
            }
            self.declare(v, *pos, NameKind::Var)?;
        }
        let base = BaseSpace::new(vars.into_iter().map(|(v, _)| v).collect())
            .map_err(|e| ParseError::semantic(start, e.to_string()))?;
        self.doc = Some(Document::empty(base));
        Ok(())
    }

    fn bundle(&mut self) -> Result<(), ParseError> {
        let (name, pos) = self.ident()?;
        self.keyword("rank")?;
        let (rank, rpos) = self.int()?;
        self.keyword("gens")?;
        let gens = self.ident_list()?;
        if gens.len() != rank {
            return Err(ParseError::semantic(rpos, format!("rank {rank} but {} generators", gens.len())));
        }
        self.declare(&name, pos, NameKind::Bundle)?;
        let b = self.doc().bundles.len();
        for (i, (g, gpos)) in gens.iter().enumerate() {
            self.declare(g, *gpos, NameKind::Gen(b, i))?;
        }
        let n = self.nvars();
        self.doc_mut().bundles.push(Bundle {
            name,
            gens: gens.into_iter().map(|(g, _)| g).collect(),
            anchors: vec![VectorField::zero(n); rank],
            brackets: BTreeMap::new(),
        });
        Ok(())
    }

    fn generator(&mut self) -> Result<(usize, usize, Pos), ParseError> {
        let (g, pos) = self.ident()?;
        match self.names.get(&g) {
            Some(NameKind::Gen(b, i)) => Ok((*b, *i, pos)),
            _ => Err(ParseError::semantic(pos, format!("`{g}` is not a declared generator"))),
        }
    }

    fn bundle_ref(&mut self) -> Result<(usize, Pos), ParseError> {
        let (name, pos) = self.ident()?;
        match self.names.get(&name) {
            Some(NameKind::Bundle) => {
                Ok((self.doc().bundles.iter().position(|b| b.name == name).expect("declared"), pos))
            }
            _ => Err(ParseError::semantic(pos, format!("`{name}` is not a declared bundle"))),
        }
    }

    fn anchor(&mut self) -> Result<(), ParseError> {
        let (b, i, _) = self.generator()?;
        self.expect(Tok::Arrow)?;
        let epos = self.pos();
        let v = self.expr(true)?;
        let n = self.nvars();
        let field = match v {
            Val::Field(c) => c,
            Val::Poly(p) if p.is_zero() => vec![Poly::zero(n); n],
            other => return Err(ParseError::semantic(epos, format!("anchor must be a vector field, found {}", other.kind()))),
        };
        self.doc_mut().bundles[b].anchors[i] = VectorField::new(field);
        Ok(())
    }

    fn bracket(&mut self, start: Pos) -> Result<(), ParseError> {
        self.expect(Tok::LBracket)?;
        let (b1, i, _) = self.generator()?;
        self.expect(Tok::Comma)?;
        let (b2, j, jpos) = self.generator()?;
        self.expect(Tok::RBracket)?;
        self.expect(Tok::Eq)?;
        if b1 != b2 {
            return Err(ParseError::semantic(jpos, "bracket of generators from different bundles"));
        }
        let s = self.section_expr(b1)?;
        if i == j {
            if !s.is_zero() {
                return Err(ParseError::semantic(start, "diagonal bracket must be zero"));
            }
            return Ok(());
        }
        let (key, s) = if i < j { ((i, j), s) } else { ((j, i), -&s) };
        let bundle = &mut self.doc_mut().bundles[b1];
        if bundle.brackets.contains_key(&key) {
            return Err(ParseError::semantic(start, "bracket declared twice"));
        }
        if !s.is_zero() {
            bundle.brackets.insert(key, s);
        }
        Ok(())
    }

    fn on_clause(&mut self) -> Result<Option<usize>, ParseError> {
        if matches!(self.peek(), Tok::Ident(s) if s == "on") {
            self.next();
            Ok(Some(self.bundle_ref()?.0))
        } else {
            Ok(None)
        }
    }

    fn section(&mut self) -> Result<(), ParseError> {
        let (name, pos) = self.ident()?;
        let on = self.on_clause()?;
        self.expect(Tok::Eq)?;
        let epos = self.pos();
        let v = self.expr(false)?;
        let (b, s) = match (v, on) {
            (Val::Sec(b, s), None) => (b, s),
            (Val::Sec(b, s), Some(o)) if b == o => (b, s),
            (Val::Sec(..), Some(_)) => return Err(ParseError::semantic(epos, "section belongs to another bundle")),
            (Val::Poly(p), Some(o)) if p.is_zero() => (o, Section::zero(self.doc().bundles[o].gens.len(), self.nvars())),
            (other, _) => return Err(ParseError::semantic(epos, format!("expected a section, found {}", other.kind()))),
        };
        self.declare(&name, pos, NameKind::Section)?;
        let bundle = self.doc().bundles[b].name.clone();
        self.doc_mut().sections.push(SectionDecl { name, bundle, value: s });
        Ok(())
    }

    fn connection(&mut self) -> Result<(), ParseError> {
        let (name, pos) = self.ident()?;
        self.keyword("on")?;
        let (target, _) = self.bundle_ref()?;
        let over = if matches!(self.peek(), Tok::Ident(s) if s == "over") {
            self.next();
            self.bundle_ref()?.0
        } else {
            target
        };
        self.expect(Tok::LBrace)?;
        let mut rules = BTreeMap::new();
        loop {
            match self.peek().clone() {
                Tok::RBrace => {
                    self.next();
                    break;
                }
                Tok::Ident(s) if s == "default" => {
                    self.next();
                    let p = self.pos();
                    let (v, _) = self.int()?;
                    if v != 0 {
                        return Err(ParseError::semantic(p, "only `default 0` is supported"));
                    }
                }
                Tok::Ident(_) => {
                    let (bo, beta, bpos) = self.generator()?;
                    let (bt, b, tpos) = self.generator()?;
                    if bo != over {
                        return Err(ParseError::semantic(bpos, "generator is not in the differentiating bundle"));
                    }
                    if bt != target {
                        return Err(ParseError::semantic(tpos, "generator is not in the target bundle"));
                    }
                    self.expect(Tok::Arrow)?;
                    let s = self.section_expr(target)?;
                    if rules.contains_key(&(beta, b)) {
                        return Err(ParseError::semantic(bpos, "rule declared twice"));
                    }
                    if !s.is_zero() {
                        rules.insert((beta, b), s);
                    }
                }
                _ => return Err(self.unexpected(&["generator", "`default`", "`}`"])),
            }
        }
        self.declare(&name, pos, NameKind::Connection)?;
        let (over, target) = (self.doc().bundles[over].name.clone(), self.doc().bundles[target].name.clone());
        self.doc_mut().connections.push(ConnectionDecl { name, over, target, rules });
        Ok(())
    }

    fn endo(&mut self, start: Pos) -> Result<(), ParseError> {
        let (name, pos) = self.ident()?;
        let mut bundle = self.on_clause()?;
        self.expect(Tok::LBrace)?;
        let mut images: BTreeMap<usize, Section> = BTreeMap::new();
        while *self.peek() != Tok::RBrace {
            let (b, j, gpos) = self.generator()?;
            if *bundle.get_or_insert(b) != b {
                return Err(ParseError::semantic(gpos, "endomorphism mixes bundles"));
            }
            self.expect(Tok::Arrow)?;
            let s = self.section_expr(b)?;
            if images.insert(j, s).is_some() {
                return Err(ParseError::semantic(gpos, "image declared twice"));
            }
        }
        self.next();
        let Some(b) = bundle else {
            return Err(ParseError::semantic(start, "empty endomorphism needs `on BUNDLE`"));
        };
        self.declare(&name, pos, NameKind::Endo)?;
        let rank = self.doc().bundles[b].gens.len();
        let n = self.nvars();
        let images = (0..rank).map(|j| images.remove(&j).unwrap_or_else(|| Section::zero(rank, n))).collect();
        let bundle = self.doc().bundles[b].name.clone();
        self.doc_mut().endos.push(EndoDecl { name, bundle, images });
        Ok(())
    }

    fn cometric(&mut self, start: Pos) -> Result<(), ParseError> {
        let (name, pos) = self.ident()?;
        let on = self.on_clause()?;
        self.expect(Tok::Eq)?;
        self.expect(Tok::LBracket)?;
        let mut rows = Vec::new();
        loop {
            self.expect(Tok::LBracket)?;
            let mut row = vec![self.poly_expr()?];
            while *self.peek() == Tok::Comma {
                self.next();
                row.push(self.poly_expr()?);
            }
            self.expect(Tok::RBracket)?;
            rows.push(row);
            if *self.peek() == Tok::Comma {
                self.next();
            } else {
                break;
            }
        }
        self.expect(Tok::RBracket)?;
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(ParseError::semantic(start, "cometric matrix must be square"));
        }
        let b = match on {
            Some(b) => b,
            None => self
                .doc()
                .bundles
                .iter()
                .position(|b| b.gens.len() == size)
                .ok_or_else(|| ParseError::semantic(start, format!("no bundle of rank {size}")))?,
        };
        if self.doc().bundles[b].gens.len() != size {
            return Err(ParseError::semantic(start, "cometric size differs from the bundle rank"));
        }
        for i in 0..size {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(ParseError::semantic(start, "cometric matrix must be symmetric"));
                }
            }
        }
        self.declare(&name, pos, NameKind::Cometric)?;
        let bundle = self.doc().bundles[b].name.clone();
        self.doc_mut().cometrics.push(CometricDecl { name, bundle, matrix: rows });
        Ok(())
    }

    fn form(&mut self, start: Pos) -> Result<(), ParseError> {
        let (name, pos) = self.ident()?;
        let on = self.on_clause()?;
        self.expect(Tok::Eq)?;
        let epos = self.pos();
        let v = self.expr(false)?;
        let (b, f) = match (v, on) {
            (Val::Form(b, f), None) => (b, f),
            (Val::Form(b, f), Some(o)) if b == o => (b, f),
            (Val::Form(..), Some(_)) => return Err(ParseError::semantic(epos, "form belongs to another bundle")),
            (Val::Poly(p), on) => {
                let b = match on {
                    Some(b) => b,
                    None if !self.doc().bundles.is_empty() => 0,
                    None => return Err(ParseError::semantic(start, "form declared before any bundle")),
                };
                (b, Form::function(self.doc().bundles[b].gens.len(), p))
            }
            (other, _) => return Err(ParseError::semantic(epos, format!("expected a form, found {}", other.kind()))),
        };
        self.declare(&name, pos, NameKind::Form)?;
        let bundle = self.doc().bundles[b].name.clone();
        self.doc_mut().forms.push(FormDecl { name, bundle, form: f });
        Ok(())
    }

    fn section_expr(&mut self, bundle: usize) -> Result<Section, ParseError> {
        let pos = self.pos();
        match self.expr(false)? {
            Val::Sec(b, s) if b == bundle => Ok(s),
            Val::Sec(..) => Err(ParseError::semantic(pos, "section of a different bundle")),
            Val::Poly(p) if p.is_zero() => Ok(Section::zero(self.doc().bundles[bundle].gens.len(), self.nvars())),
            other => Err(ParseError::semantic(pos, format!("expected a section, found {}", other.kind()))),
        }
    }

    fn poly_expr(&mut self) -> Result<Poly, ParseError> {
        let pos = self.pos();
        match self.expr(false)? {
            Val::Poly(p) => Ok(p),
            other => Err(ParseError::semantic(pos, format!("expected a polynomial, found {}", other.kind()))),
        }
    }

    // expr := ['-'] term (('+' | '-') term)*
    fn expr(&mut self, fields: bool) -> Result<Val, ParseError> {
        let mut acc = if *self.peek() == Tok::Minus {
            self.next();
            let pos = self.pos();
            let t = self.term(fields)?;
            self.negate(t, pos)?
        } else {
            self.term(fields)?
        };
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    let t = self.term(fields)?;
                    acc = self.add(acc, t, pos)?;
                }
                Tok::Minus => {
                    self.next();
                    let t = self.term(fields)?;
                    let t = self.negate(t, pos)?;
                    acc = self.add(acc, t, pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := wedge (('*' wedge) | ('/' INT))*
    fn term(&mut self, fields: bool) -> Result<Val, ParseError> {
        let mut acc = self.wedge(fields)?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Star => {
                    self.next();
                    let f = self.wedge(fields)?;
                    acc = self.mul(acc, f, pos)?;
                }
                Tok::Slash => {
                    self.next();
                    let (d, dpos) = self.int()?;
                    if d == 0 {
                        return Err(ParseError::semantic(dpos, "division by zero"));
                    }
                    let c = Scalar::new(1.into(), d.into());
                    acc = self.mul(acc, Val::Poly(Poly::constant(self.nvars(), c)), pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // wedge := unary ('^' (INT | unary))*
    fn wedge(&mut self, fields: bool) -> Result<Val, ParseError> {
        let mut acc = self.unary(fields)?;
        while *self.peek() == Tok::Caret {
            let pos = self.next().pos;
            if let Tok::Int(_) = self.peek() {
                let (e, epos) = self.int()?;
                acc = match acc {
                    Val::Poly(p) => Val::Poly(p.pow(u32::try_from(e).map_err(|_| ParseError::semantic(epos, "exponent too large"))?)),
                    other => return Err(ParseError::semantic(pos, format!("cannot raise a {} to a power", other.kind()))),
                };
            } else {
                let rhs = self.unary(fields)?;
                acc = self.wedge_vals(acc, rhs, pos)?;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self, fields: bool) -> Result<Val, ParseError> {
        if *self.peek() == Tok::Minus {
            let pos = self.next().pos;
            let v = self.unary(fields)?;
            return self.negate(v, pos);
        }
        self.atom(fields)
    }

    fn atom(&mut self, fields: bool) -> Result<Val, ParseError> {
        let n = self.nvars();
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(s) => {
                self.next();
                let c: Scalar = s.parse().expect("digits");
                Ok(Val::Poly(Poly::constant(n, c)))
            }
            Tok::LParen => {
                self.next();
                let v = self.expr(fields)?;
                self.expect(Tok::RParen)?;
                Ok(v)
            }
            Tok::Ident(name) if name == "w" && *self.peek_at(1) == Tok::LParen => {
                self.next();
                self.next();
                let (b, i, _) = self.generator()?;
                self.expect(Tok::RParen)?;
                Ok(Val::Form(b, Form::dual(self.doc().bundles[b].gens.len(), n, i)))
            }
            Tok::Ident(name) => {
                self.next();
                if let Some(kind) = self.names.get(&name).copied() {
                    return match kind {
                        NameKind::Var => {
                            let k = self.doc().base.var_names().iter().position(|v| *v == name).expect("var");
                            Ok(Val::Poly(Poly::var(n, k)))
                        }
                        NameKind::Gen(b, i) => Ok(Val::Sec(b, Section::basis(self.doc().bundles[b].gens.len(), n, i))),
                        NameKind::Section => {
                            let s = self.doc().sections.iter().find(|s| s.name == name).expect("section");
                            let b = self.doc().bundles.iter().position(|b| b.name == s.bundle).expect("bundle");
                            Ok(Val::Sec(b, s.value.clone()))
                        }
                        NameKind::Form => {
                            let f = self.doc().forms.iter().find(|f| f.name == name).expect("form");
                            let b = self.doc().bundles.iter().position(|b| b.name == f.bundle).expect("bundle");
                            Ok(Val::Form(b, f.form.clone()))
                        }
                        _ => Err(ParseError::semantic(pos, format!("`{name}` cannot appear in an expression"))),
                    };
                }
                if let Some(k) = is_field_name(&name) {
                    if !fields {
                        return Err(ParseError::semantic(pos, format!("vector field `{name}` outside an anchor")));
                    }
                    if k == 0 || k > n {
                        return Err(ParseError::semantic(
                            pos,
                            format!("`{name}` is out of range for a base of dimension {n}"),
                        ));
                    }
                    let mut c = vec![Poly::zero(n); n];
                    c[k - 1] = Poly::one(n);
                    return Ok(Val::Field(c));
                }
                Err(ParseError::semantic(pos, format!("undeclared name `{name}`")))
            }
            _ => Err(self.unexpected(&["number", "name", "`(`", "`-`"])),
        }
    }

    fn negate(&self, v: Val, pos: Pos) -> Result<Val, ParseError> {
        let minus = Val::Poly(Poly::from_int(self.nvars(), -1));
        self.mul(minus, v, pos)
    }

    fn add(&self, a: Val, b: Val, pos: Pos) -> Result<Val, ParseError> {
        Ok(match (a, b) {
            (Val::Poly(x), Val::Poly(y)) => Val::Poly(&x + &y),
            (Val::Field(x), Val::Field(y)) => Val::Field(x.iter().zip(&y).map(|(p, q)| p + q).collect()),
            (Val::Sec(i, x), Val::Sec(j, y)) if i == j => Val::Sec(i, &x + &y),
            (Val::Form(i, x), Val::Form(j, y)) if i == j && x.degree() == y.degree() => Val::Form(i, &x + &y),
            (Val::Form(i, x), Val::Form(j, _)) if i == j => {
                return Err(ParseError::semantic(pos, format!("sum of forms of different degrees ({})", x.degree())))
            }
            (Val::Poly(p), v) | (v, Val::Poly(p)) if p.is_zero() => v,
            (Val::Poly(p), Val::Form(b, f)) | (Val::Form(b, f), Val::Poly(p)) if f.degree() == 0 => {
                Val::Form(b, &f + &Form::function(f.rank(), p))
            }
            (a, b) => return Err(ParseError::semantic(pos, format!("cannot add a {} and a {}", a.kind(), b.kind()))),
        })
    }

    fn mul(&self, a: Val, b: Val, pos: Pos) -> Result<Val, ParseError> {
        Ok(match (a, b) {
            (Val::Poly(x), Val::Poly(y)) => Val::Poly(&x * &y),
            (Val::Poly(p), Val::Field(c)) | (Val::Field(c), Val::Poly(p)) => {
                Val::Field(c.iter().map(|q| &p * q).collect())
            }
            (Val::Poly(p), Val::Sec(b, s)) | (Val::Sec(b, s), Val::Poly(p)) => Val::Sec(b, s.scale(&p)),
            (Val::Poly(p), Val::Form(b, f)) | (Val::Form(b, f), Val::Poly(p)) => Val::Form(b, f.scale(&p)),
            (a, b) => {
                return Err(ParseError::semantic(pos, format!("cannot multiply a {} by a {}", a.kind(), b.kind())))
            }
        })
    }

    fn wedge_vals(&self, a: Val, b: Val, pos: Pos) -> Result<Val, ParseError> {
        Ok(match (a, b) {
            (Val::Form(i, x), Val::Form(j, y)) if i == j => Val::Form(i, x.wedge(&y).expect("same shape")),
            (Val::Poly(p), Val::Form(b, f)) | (Val::Form(b, f), Val::Poly(p)) => Val::Form(b, f.scale(&p)),
            (a, b) => {
                return Err(ParseError::semantic(pos, format!("cannot wedge a {} with a {}", a.kind(), b.kind())))
            }
        })
    }
}

fn is_field_name(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('d')?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::ErrorKind;

    const HEAD: &str = "base 2 (x1, x2)\nbundle E rank 2 gens (A, B)\n";

    #[test]
    fn expressions() {
        let doc = parse(&format!(
            "{HEAD}anchor A -> x1^2 * d1\nbracket [B, A] = 3/2*x2*A - (x1 + 1)*B\nsection s = -x1*A + B\nform f = 2*x2^2 * w(A)^w(B) + 0*w(A)^w(B)\nform g = (x1 - x2)"
        ))
        .unwrap();
        let b = &doc.bundles[0];
        assert_eq!(b.anchors[0].comps()[0], Poly::var(2, 0).pow(2));
        let br = &b.brackets[&(0, 1)];
        assert_eq!(br.coeff(1), &(&Poly::var(2, 0) + &Poly::one(2)));
        assert_eq!(doc.forms[0].form.degree(), 2);
        assert_eq!(doc.forms[1].form.degree(), 0);
        assert_eq!(parse(&doc.to_text()).unwrap(), doc);
    }

    #[test]
    fn diagonal_bracket_rejected() {
        let err = parse(&format!("{HEAD}bracket [A, A] = B")).unwrap_err();
        assert_eq!(err.kind, ErrorKind::Semantic);
        assert_eq!(err.pos.line, 3);
    }

    #[test]
    fn field_out_of_range() {
        let err = parse(&format!("{HEAD}anchor A -> x1^2 * d3")).unwrap_err();
        assert_eq!(err.kind, ErrorKind::Semantic);
        assert!(err.message.contains("d3"));
    }

    #[test]
    fn syntax_error_reports_expected() {
        let err = parse("base 2 (x1 x2)").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Syntax);
        assert_eq!((err.pos.line, err.pos.col), (1, 12));
        assert!(!err.expected.is_empty());
    }

    #[test]
    fn undeclared_and_duplicate_names() {
        assert!(parse(&format!("{HEAD}section s = C")).unwrap_err().message.contains("undeclared"));
        assert!(parse(&format!("{HEAD}section A = B")).unwrap_err().message.contains("already"));
        assert!(parse("bundle E rank 1 gens (A)").is_err());
        assert!(parse(&format!("{HEAD}base 1 (y)")).is_err());
    }

    #[test]
    fn connections_and_endos() {
        let doc = parse(&format!(
            "{HEAD}connection c on E {{\n A B -> x1*A\n default 0\n}}\nendo J {{ A -> -B  B -> A }}\ncometric g = [[1, 0], [0, x1]]"
        ))
        .unwrap();
        assert_eq!(doc.connections[0].rules.len(), 1);
        let (_, j) = doc.endo("J").unwrap();
        assert!(j.is_almost_complex());
        assert_eq!(parse(&doc.to_text()).unwrap(), doc);
        assert!(parse(&format!("{HEAD}cometric g = [[1, x1], [0, 1]]")).is_err());
    }
}
