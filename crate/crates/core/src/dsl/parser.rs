//! Recursive-descent parser and cross-reference resolution.

use std::collections::BTreeMap;

use crate::algebra::ConstraintFlag;

use super::ast::*;
use super::lexer::{lex, Tok, TokKind};
use super::{ParseError, ParseErrorKind};

const STMT_KEYWORDS: [&str; 6] = ["dim", "gen", "rel", "basis", "prod", "meta"];

/// Parses a document and resolves every cross-reference: space names,
/// generator and basis-class names, assignment homogeneity and degree
/// ranges. Errors carry line and column.
pub fn parse(text: &str) -> Result<Document, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, at: 0 };
    let doc = parser.document()?;
    resolve(&doc)?;
    Ok(doc)
}

struct Parser {
    toks: Vec<Tok>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.peek().pos, ParseErrorKind::Syntax, message)
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        let t = self.bump();
        match t.kind {
            TokKind::Ident(s) => Ok((s, t.pos)),
            other => Err(ParseError::new(
                t.pos,
                ParseErrorKind::Syntax,
                format!("expected {what}, found {other:?}"),
            )),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Pos, ParseError> {
        let (s, pos) = self.expect_ident(&format!("`{kw}`"))?;
        if s != kw {
            return Err(ParseError::new(
                pos,
                ParseErrorKind::Syntax,
                format!("expected `{kw}`, found `{s}`"),
            ));
        }
        Ok(pos)
    }

    /// Names are normally quoted strings; a bare identifier is accepted too.
    fn expect_name(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        let t = self.bump();
        match t.kind {
            TokKind::Str(s) | TokKind::Ident(s) => Ok((s, t.pos)),
            other => Err(ParseError::new(
                t.pos,
                ParseErrorKind::Syntax,
                format!("expected {what} (a quoted string), found {other:?}"),
            )),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<(u64, Pos), ParseError> {
        let t = self.bump();
        match t.kind {
            TokKind::Int(n) => Ok((n, t.pos)),
            other => Err(ParseError::new(
                t.pos,
                ParseErrorKind::Syntax,
                format!("expected {what}, found {other:?}"),
            )),
        }
    }

    fn expect_small_int(&mut self, what: &str) -> Result<(usize, Pos), ParseError> {
        let (n, pos) = self.expect_int(what)?;
        if n > u32::MAX as u64 {
            return Err(ParseError::new(
                pos,
                ParseErrorKind::DegreeOverflow,
                format!("{what} {n} is too large"),
            ));
        }
        Ok((n as usize, pos))
    }

    fn expect_tok(&mut self, kind: &TokKind, what: &str) -> Result<Pos, ParseError> {
        let t = self.bump();
        if &t.kind == kind {
            Ok(t.pos)
        } else {
            Err(ParseError::new(
                t.pos,
                ParseErrorKind::Syntax,
                format!("expected {what}, found {:?}", t.kind),
            ))
        }
    }

    fn eat_semis(&mut self) {
        while matches!(self.peek().kind, TokKind::Semi) {
            self.bump();
        }
    }

    fn expect_bool(&mut self, what: &str) -> Result<bool, ParseError> {
        let (s, pos) = self.expect_ident(what)?;
        match s.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            other => Err(ParseError::new(
                pos,
                ParseErrorKind::Syntax,
                format!("expected true or false, found `{other}`"),
            )),
        }
    }

    fn document(&mut self) -> Result<Document, ParseError> {
        let mut doc = Document::default();
        loop {
            match &self.peek().kind {
                TokKind::Eof => return Ok(doc),
                TokKind::Ident(kw) => match kw.as_str() {
                    "space" => doc.spaces.push(self.space_block()?),
                    "bundle" => doc.bundles.push(self.bundle_block()?),
                    "map" => doc.maps.push(self.map_block()?),
                    other => {
                        return Err(self.err(format!(
                            "expected `space`, `bundle` or `map`, found `{other}`"
                        )))
                    }
                },
                other => {
                    return Err(self.err(format!(
                        "expected `space`, `bundle` or `map`, found {other:?}"
                    )))
                }
            }
        }
    }

    fn space_block(&mut self) -> Result<Presentation, ParseError> {
        let pos = self.expect_keyword("space")?;
        let (name, _) = self.expect_name("space name")?;
        self.expect_tok(&TokKind::LBrace, "`{`")?;
        self.expect_keyword("dim")?;
        let (dim, dim_pos) = self.expect_small_int("dimension")?;
        if dim == 0 {
            return Err(ParseError::new(
                dim_pos,
                ParseErrorKind::DegreeOverflow,
                "dim must be at least 1",
            ));
        }

        let mut gens = Vec::new();
        let mut rels = Vec::new();
        let mut basis = Vec::new();
        let mut prods = Vec::new();
        let mut meta = MetaBlock::default();

        loop {
            self.eat_semis();
            if matches!(self.peek().kind, TokKind::RBrace) {
                self.bump();
                break;
            }
            let (kw, kw_pos) = self.expect_ident("a space statement")?;
            match kw.as_str() {
                "gen" => {
                    let (gname, gpos) = self.expect_ident("generator name")?;
                    self.expect_tok(&TokKind::Colon, "`:`")?;
                    let (deg, _) = self.expect_small_int("generator degree")?;
                    gens.push(Generator {
                        name: gname,
                        degree: deg,
                        pos: gpos,
                    });
                }
                "rel" => rels.push(self.monomial()?),
                "basis" => {
                    let (bname, bpos) = self.expect_ident("basis class name")?;
                    self.expect_tok(&TokKind::Colon, "`:`")?;
                    let (deg, _) = self.expect_small_int("basis class degree")?;
                    basis.push(BasisDecl {
                        name: bname,
                        degree: deg,
                        pos: bpos,
                    });
                }
                "prod" => {
                    let (left, ppos) = self.expect_ident("basis class name")?;
                    self.expect_tok(&TokKind::Star, "`*`")?;
                    let (right, _) = self.expect_ident("basis class name")?;
                    self.expect_tok(&TokKind::Eq, "`=`")?;
                    let value = self.poly()?;
                    prods.push(ProdDecl {
                        left,
                        right,
                        value,
                        pos: ppos,
                    });
                }
                "meta" => self.meta_stmt(&mut meta)?,
                other => {
                    return Err(ParseError::new(
                        kw_pos,
                        ParseErrorKind::Syntax,
                        format!("unknown space statement `{other}`"),
                    ))
                }
            }
        }

        if !gens.is_empty() && !basis.is_empty() {
            return Err(ParseError::new(
                pos,
                ParseErrorKind::Syntax,
                "a space is either polynomial (gen/rel) or a table (basis/prod), not both",
            ));
        }
        if !rels.is_empty() && gens.is_empty() {
            return Err(ParseError::new(
                pos,
                ParseErrorKind::Syntax,
                "rel without any gen",
            ));
        }
        if !prods.is_empty() && basis.is_empty() {
            return Err(ParseError::new(
                pos,
                ParseErrorKind::Syntax,
                "prod without any basis",
            ));
        }

        let body = if !basis.is_empty() {
            Body::Table { basis, prods }
        } else {
            Body::Poly { gens, rels }
        };
        Ok(Presentation {
            name,
            dim,
            body,
            meta,
            pos,
        })
    }

    fn meta_stmt(&mut self, meta: &mut MetaBlock) -> Result<(), ParseError> {
        let (key, key_pos) = self.expect_ident("a meta key")?;
        match key.as_str() {
            "poincare" => meta.poincare = self.expect_bool("poincare flag")?,
            "null_cobordant" => meta.null_cobordant = self.expect_bool("null_cobordant flag")?,
            "suspension" => meta.suspension = self.expect_bool("suspension flag")?,
            "spherical" => {
                let mut any = false;
                while matches!(self.peek().kind, TokKind::Int(_)) {
                    let (deg, _) = self.expect_small_int("spherical degree")?;
                    self.expect_tok(&TokKind::Colon, "`:`")?;
                    let (name, npos) = self.expect_ident("spherical class name")?;
                    meta.spherical.push((deg, name, npos));
                    any = true;
                }
                if !any {
                    return Err(ParseError::new(
                        key_pos,
                        ParseErrorKind::Syntax,
                        "meta spherical needs at least one <degree>:<class> pair",
                    ));
                }
            }
            "constraint" => {
                let mut any = false;
                while let TokKind::Ident(next) = &self.peek().kind {
                    if STMT_KEYWORDS.contains(&next.as_str()) {
                        break;
                    }
                    let (mut flag, fpos) = self.expect_ident("constraint flag")?;
                    while matches!(self.peek().kind, TokKind::Minus) {
                        self.bump();
                        let (part, _) = self.expect_ident("constraint flag")?;
                        flag.push('-');
                        flag.push_str(&part);
                    }
                    match ConstraintFlag::parse(&flag) {
                        Some(f) => meta.constraints.push(f),
                        None => {
                            return Err(ParseError::new(
                                fpos,
                                ParseErrorKind::Syntax,
                                format!("unknown constraint flag `{flag}`"),
                            ))
                        }
                    }
                    any = true;
                }
                if !any {
                    return Err(ParseError::new(
                        key_pos,
                        ParseErrorKind::Syntax,
                        "meta constraint needs at least one flag",
                    ));
                }
            }
            "sq1" => {
                let (name, npos) = self.expect_ident("basis class name")?;
                self.expect_tok(&TokKind::Eq, "`=`")?;
                let value = self.poly()?;
                meta.sq1.push((name, value, npos));
            }
            other => {
                return Err(ParseError::new(
                    key_pos,
                    ParseErrorKind::Syntax,
                    format!("unknown meta key `{other}`"),
                ))
            }
        }
        Ok(())
    }

    fn bundle_block(&mut self) -> Result<SWProfileSource, ParseError> {
        let pos = self.expect_keyword("bundle")?;
        let (name, _) = self.expect_name("bundle name")?;
        self.expect_keyword("on")?;
        let (space, _) = self.expect_name("space name")?;
        self.expect_tok(&TokKind::LBrace, "`{`")?;
        let mut assignments = Vec::new();
        loop {
            self.eat_semis();
            if matches!(self.peek().kind, TokKind::RBrace) {
                self.bump();
                break;
            }
            let (w, wpos) = self.expect_ident("a w<i> assignment")?;
            let index: usize = w
                .strip_prefix('w')
                .and_then(|s| if s.is_empty() { None } else { s.parse().ok() })
                .ok_or_else(|| {
                    ParseError::new(
                        wpos,
                        ParseErrorKind::Syntax,
                        format!("expected w<i> on the left of an assignment, found `{w}`"),
                    )
                })?;
            self.expect_tok(&TokKind::Eq, "`=`")?;
            let value = self.poly()?;
            assignments.push((index, value));
        }
        Ok(SWProfileSource {
            name,
            space,
            assignments,
            pos,
        })
    }

    fn map_block(&mut self) -> Result<RingMapSource, ParseError> {
        let pos = self.expect_keyword("map")?;
        let (name, _) = self.expect_name("map name")?;
        self.expect_keyword("from")?;
        let (source, _) = self.expect_name("source space name")?;
        self.expect_keyword("to")?;
        let (target, _) = self.expect_name("target space name")?;
        self.expect_tok(&TokKind::LBrace, "`{`")?;
        let mut images = Vec::new();
        loop {
            self.eat_semis();
            if matches!(self.peek().kind, TokKind::RBrace) {
                self.bump();
                break;
            }
            let (gen, _) = self.expect_ident("a generator name")?;
            self.expect_tok(&TokKind::Arrow, "`->`")?;
            let value = self.poly()?;
            images.push((gen, value));
        }
        Ok(RingMapSource {
            name,
            source,
            target,
            images,
            pos,
        })
    }

    fn monomial(&mut self) -> Result<Monomial, ParseError> {
        let pos = self.peek().pos;
        let mut factors = Vec::new();
        loop {
            let (name, npos) = self.expect_ident("a generator")?;
            let exp = if matches!(self.peek().kind, TokKind::Caret) {
                self.bump();
                let (e, epos) = self.expect_small_int("exponent")?;
                if e == 0 {
                    return Err(ParseError::new(
                        epos,
                        ParseErrorKind::DegreeOverflow,
                        "zero exponent in a relation",
                    ));
                }
                e as u32
            } else {
                1
            };
            let _ = npos;
            factors.push((name, exp));
            if matches!(self.peek().kind, TokKind::Star) {
                self.bump();
            } else {
                break;
            }
        }
        Ok(Monomial { factors, pos })
    }

    fn poly(&mut self) -> Result<Poly, ParseError> {
        let pos = self.peek().pos;
        let mut terms = vec![self.term()?];
        while matches!(self.peek().kind, TokKind::Plus) {
            self.bump();
            terms.push(self.term()?);
        }
        // Zero terms vanish.
        let terms = terms.into_iter().flatten().collect();
        Ok(Poly { terms, pos })
    }

    /// Returns None for a literal-zero term.
    fn term(&mut self) -> Result<Option<Term>, ParseError> {
        let mut factors = vec![self.factor()?];
        while matches!(self.peek().kind, TokKind::Star) {
            self.bump();
            factors.push(self.factor()?);
        }
        let mut out = Vec::new();
        for f in factors {
            match f.base {
                Atom::Const(false) if f.exp > 0 => return Ok(None),
                Atom::Const(true) => {}
                _ if f.exp == 0 => {}
                _ => out.push(f),
            }
        }
        Ok(Some(Term { factors: out }))
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let base = self.atom()?;
        let exp = if matches!(self.peek().kind, TokKind::Caret) {
            self.bump();
            let (e, _) = self.expect_small_int("exponent")?;
            e as u32
        } else {
            1
        };
        Ok(Factor { base, exp })
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let t = self.bump();
        match t.kind {
            TokKind::Ident(name) => Ok(Atom::Var { name, pos: t.pos }),
            TokKind::Int(0) => Ok(Atom::Const(false)),
            TokKind::Int(1) => Ok(Atom::Const(true)),
            TokKind::Int(n) => Err(ParseError::new(
                t.pos,
                ParseErrorKind::Syntax,
                format!("coefficients are 0 or 1, found {n}"),
            )),
            TokKind::LParen => {
                self.at -= 1;
                self.bump();
                let inner = self.poly()?;
                self.expect_tok(&TokKind::RParen, "`)`")?;
                Ok(Atom::Group(Box::new(inner)))
            }
            other => Err(ParseError::new(
                t.pos,
                ParseErrorKind::Syntax,
                format!("expected a class name, 0, 1 or `(`, found {other:?}"),
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// Resolution
// ---------------------------------------------------------------------------

/// Name environment of a space: declared generators or basis classes.
fn space_env(p: &Presentation) -> BTreeMap<String, usize> {
    match &p.body {
        Body::Poly { gens, .. } => gens.iter().map(|g| (g.name.clone(), g.degree)).collect(),
        Body::Table { basis, .. } => basis.iter().map(|b| (b.name.clone(), b.degree)).collect(),
    }
}

/// Symbolic degree of a polynomial under the environment. `None` means the
/// zero polynomial (homogeneous of every degree).
pub(super) fn poly_degree(
    poly: &Poly,
    env: &BTreeMap<String, usize>,
) -> Result<Option<u64>, ParseError> {
    let mut degree: Option<u64> = None;
    for term in &poly.terms {
        let Some(d) = term_degree(term, env)? else {
            continue;
        };
        match degree {
            None => degree = Some(d),
            Some(prev) if prev == d => {}
            Some(prev) => {
                return Err(ParseError::new(
                    poly.pos,
                    ParseErrorKind::Inhomogeneous,
                    format!("inhomogeneous expression mixes degrees {prev} and {d}"),
                ))
            }
        }
    }
    Ok(degree)
}

fn term_degree(term: &Term, env: &BTreeMap<String, usize>) -> Result<Option<u64>, ParseError> {
    let mut total: u64 = 0;
    for factor in &term.factors {
        if factor.exp == 0 {
            continue;
        }
        let base = match &factor.base {
            Atom::Const(false) => return Ok(None),
            Atom::Const(true) => 0,
            Atom::Var { name, pos } => *env.get(name).ok_or_else(|| {
                ParseError::new(
                    *pos,
                    ParseErrorKind::UnknownName,
                    format!("unknown generator or basis class `{name}`"),
                )
            })? as u64,
            Atom::Group(inner) => match poly_degree(inner, env)? {
                None => return Ok(None),
                Some(d) => d,
            },
        };
        let add = base.checked_mul(factor.exp as u64).ok_or_else(|| {
            ParseError::new(
                term_pos(term),
                ParseErrorKind::DegreeOverflow,
                "degree overflow",
            )
        })?;
        total = total.checked_add(add).ok_or_else(|| {
            ParseError::new(
                term_pos(term),
                ParseErrorKind::DegreeOverflow,
                "degree overflow",
            )
        })?;
    }
    Ok(Some(total))
}

fn term_pos(term: &Term) -> Pos {
    term.factors
        .iter()
        .find_map(|f| match &f.base {
            Atom::Var { pos, .. } => Some(*pos),
            _ => None,
        })
        .unwrap_or_default()
}

fn resolve(doc: &Document) -> Result<(), ParseError> {
    let mut names = BTreeMap::new();
    for space in &doc.spaces {
        if names.insert(space.name.clone(), ()).is_some() {
            return Err(ParseError::new(
                space.pos,
                ParseErrorKind::Duplicate,
                format!("duplicate space {:?}", space.name),
            ));
        }
        resolve_space(space)?;
    }

    let mut bundle_names = BTreeMap::new();
    for bundle in &doc.bundles {
        let space = doc.space(&bundle.space).ok_or_else(|| {
            ParseError::new(
                bundle.pos,
                ParseErrorKind::UnknownName,
                format!("unknown space {:?}", bundle.space),
            )
        })?;
        if bundle_names
            .insert((bundle.space.clone(), bundle.name.clone()), ())
            .is_some()
        {
            return Err(ParseError::new(
                bundle.pos,
                ParseErrorKind::Duplicate,
                format!("duplicate bundle {:?} on {:?}", bundle.name, bundle.space),
            ));
        }
        let env = space_env(space);
        let mut seen = Vec::new();
        for (index, value) in &bundle.assignments {
            if *index == 0 || *index > space.dim {
                return Err(ParseError::new(
                    value.pos,
                    ParseErrorKind::DegreeOverflow,
                    format!("w{index} out of range 1..={}", space.dim),
                ));
            }
            if seen.contains(index) {
                return Err(ParseError::new(
                    value.pos,
                    ParseErrorKind::Duplicate,
                    format!("w{index} assigned twice"),
                ));
            }
            seen.push(*index);
            if let Some(d) = poly_degree(value, &env)? {
                if d != *index as u64 {
                    return Err(ParseError::new(
                        value.pos,
                        ParseErrorKind::Inhomogeneous,
                        format!("w{index} assignment has degree {d}"),
                    ));
                }
            }
        }
    }

    let mut map_names = BTreeMap::new();
    for map in &doc.maps {
        if map_names.insert(map.name.clone(), ()).is_some() {
            return Err(ParseError::new(
                map.pos,
                ParseErrorKind::Duplicate,
                format!("duplicate map {:?}", map.name),
            ));
        }
        let source = doc.space(&map.source).ok_or_else(|| {
            ParseError::new(
                map.pos,
                ParseErrorKind::UnknownName,
                format!("unknown space {:?}", map.source),
            )
        })?;
        let target = doc.space(&map.target).ok_or_else(|| {
            ParseError::new(
                map.pos,
                ParseErrorKind::UnknownName,
                format!("unknown space {:?}", map.target),
            )
        })?;
        let src_env = space_env(source);
        let tgt_env = space_env(target);
        let mut seen = Vec::new();
        for (gen, value) in &map.images {
            let Some(&gen_degree) = src_env.get(gen) else {
                return Err(ParseError::new(
                    value.pos,
                    ParseErrorKind::UnknownName,
                    format!("unknown generator `{gen}` in {:?}", map.source),
                ));
            };
            if seen.contains(gen) {
                return Err(ParseError::new(
                    value.pos,
                    ParseErrorKind::Duplicate,
                    format!("generator `{gen}` mapped twice"),
                ));
            }
            seen.push(gen.clone());
            if let Some(d) = poly_degree(value, &tgt_env)? {
                if d != gen_degree as u64 {
                    return Err(ParseError::new(
                        value.pos,
                        ParseErrorKind::Inhomogeneous,
                        format!("image of `{gen}` (degree {gen_degree}) has degree {d}"),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn resolve_space(space: &Presentation) -> Result<(), ParseError> {
    let env = space_env(space);
    match &space.body {
        Body::Poly { gens, rels } => {
            let mut seen = Vec::new();
            for g in gens {
                if g.degree == 0 {
                    return Err(ParseError::new(
                        g.pos,
                        ParseErrorKind::DegreeOverflow,
                        format!("generator `{}` must have degree at least 1", g.name),
                    ));
                }
                if seen.contains(&g.name) {
                    return Err(ParseError::new(
                        g.pos,
                        ParseErrorKind::Duplicate,
                        format!("duplicate generator `{}`", g.name),
                    ));
                }
                seen.push(g.name.clone());
            }
            for rel in rels {
                for (name, _) in &rel.factors {
                    if !env.contains_key(name) {
                        return Err(ParseError::new(
                            rel.pos,
                            ParseErrorKind::UnknownName,
                            format!("unknown generator `{name}` in relation"),
                        ));
                    }
                }
            }
        }
        Body::Table { basis, prods } => {
            let mut seen = Vec::new();
            for b in basis {
                if b.degree == 0 || b.degree > space.dim {
                    return Err(ParseError::new(
                        b.pos,
                        ParseErrorKind::DegreeOverflow,
                        format!(
                            "basis class `{}` has degree {} outside 1..={}",
                            b.name, b.degree, space.dim
                        ),
                    ));
                }
                if seen.contains(&b.name) {
                    return Err(ParseError::new(
                        b.pos,
                        ParseErrorKind::Duplicate,
                        format!("duplicate basis class `{}`", b.name),
                    ));
                }
                seen.push(b.name.clone());
            }
            for prod in prods {
                let ldeg = *env.get(&prod.left).ok_or_else(|| {
                    ParseError::new(
                        prod.pos,
                        ParseErrorKind::UnknownName,
                        format!("unknown basis class `{}`", prod.left),
                    )
                })?;
                let rdeg = *env.get(&prod.right).ok_or_else(|| {
                    ParseError::new(
                        prod.pos,
                        ParseErrorKind::UnknownName,
                        format!("unknown basis class `{}`", prod.right),
                    )
                })?;
                for term in &prod.value.terms {
                    let simple = term.factors.len() == 1
                        && term.factors[0].exp == 1
                        && matches!(term.factors[0].base, Atom::Var { .. });
                    if !simple {
                        return Err(ParseError::new(
                            prod.value.pos,
                            ParseErrorKind::Syntax,
                            "table products must be sums of basis classes or 0",
                        ));
                    }
                }
                match poly_degree(&prod.value, &env)? {
                    None => {}
                    Some(d) => {
                        if ldeg + rdeg > space.dim {
                            return Err(ParseError::new(
                                prod.value.pos,
                                ParseErrorKind::DegreeOverflow,
                                format!(
                                    "product of `{}` and `{}` lands above dim {}; only 0 allowed",
                                    prod.left, prod.right, space.dim
                                ),
                            ));
                        }
                        if d != (ldeg + rdeg) as u64 {
                            return Err(ParseError::new(
                                prod.value.pos,
                                ParseErrorKind::Inhomogeneous,
                                format!(
                                    "product of `{}` and `{}` must have degree {}, found {d}",
                                    prod.left,
                                    prod.right,
                                    ldeg + rdeg
                                ),
                            ));
                        }
                    }
                }
            }
        }
    }

    for (deg, name, pos) in &space.meta.spherical {
        if *deg == 0 || *deg > space.dim {
            return Err(ParseError::new(
                *pos,
                ParseErrorKind::DegreeOverflow,
                format!("spherical degree {deg} outside 1..={}", space.dim),
            ));
        }
        // Poly-mode names may denote monomial basis classes that only exist
        // after realization; check what is checkable here.
        if let Some(&d) = env.get(name) {
            if matches!(space.body, Body::Poly { .. }) && d != *deg {
                // A generator of the wrong degree can still match a
                // monomial name only in contrived cases; reject plainly.
                return Err(ParseError::new(
                    *pos,
                    ParseErrorKind::Inhomogeneous,
                    format!("spherical class `{name}` has degree {d}, not {deg}"),
                ));
            }
            if matches!(space.body, Body::Table { .. }) && d != *deg {
                return Err(ParseError::new(
                    *pos,
                    ParseErrorKind::Inhomogeneous,
                    format!("spherical class `{name}` has degree {d}, not {deg}"),
                ));
            }
        } else if matches!(space.body, Body::Table { .. }) {
            return Err(ParseError::new(
                *pos,
                ParseErrorKind::UnknownName,
                format!("unknown basis class `{name}`"),
            ));
        }
    }

    for (name, value, pos) in &space.meta.sq1 {
        let declared = env.get(name).copied();
        if declared.is_none() && matches!(space.body, Body::Table { .. }) {
            return Err(ParseError::new(
                *pos,
                ParseErrorKind::UnknownName,
                format!("unknown basis class `{name}` in sq1"),
            ));
        }
        if let (Some(deg), Some(d)) = (declared, poly_degree(value, &env)?) {
            if d != deg as u64 + 1 {
                return Err(ParseError::new(
                    *pos,
                    ParseErrorKind::Inhomogeneous,
                    format!("sq1 image of `{name}` must raise degree by 1, found degree {d}"),
                ));
            }
        }
    }
    Ok(())
}
