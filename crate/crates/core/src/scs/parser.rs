//! Recursive-descent parser for SCS examples and corpus files.

use super::ast::*;
use super::lexer::{is_keyword, is_type_ident, tokenize, Tok, Token};
use super::ScsError;

/// Parse a single example. `text` may be a bare statement list or one
/// `#example ... #end` block.
pub fn parse_example(text: &str) -> Result<ScsExample, ScsError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with("#example") {
        let mut blocks = parse_corpus(text)?;
        if blocks.len() != 1 {
            return Err(ScsError::Syntax {
                line: 1,
                col: 1,
                message: format!("expected exactly one example block, found {}", blocks.len()),
            });
        }
        return Ok(blocks.remove(0));
    }
    parse_statements("example", Vec::new(), text, 1)
}

/// Parse a statement list with the given context parameters in scope.
pub fn parse_statements(
    id: &str,
    params: Vec<Param>,
    body: &str,
    first_line: usize,
) -> Result<ScsExample, ScsError> {
    for p in &params {
        if !is_type_ident(&p.ty) {
            return Err(ScsError::TypeName { line: first_line, col: 1, name: p.ty.clone() });
        }
    }
    let tokens = tokenize(body, first_line)?;
    let mut parser = Parser::new(tokens, &params);
    let statements = parser.statements_until_eof()?;
    let free_vars = parser
        .free
        .iter()
        .map(|name| FreeVar { name: name.clone(), ty: UNKNOWN_TYPE.to_string(), conflicted: false })
        .collect();
    let mut ex = ScsExample { id: id.to_string(), context_params: params, statements, free_vars, source_uri: None };
    super::infer::infer_free_var_types(&mut ex, None);
    Ok(ex)
}

/// Parse a corpus file: any number of `#example <id> (<p:T>, ...)` blocks,
/// each terminated by `#end`. Lines outside blocks must be blank or `//`
/// comments.
pub fn parse_corpus(text: &str) -> Result<Vec<ScsExample>, ScsError> {
    let mut out = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((idx, line)) = lines.next() {
        let t = line.trim();
        if t.is_empty() || t.starts_with("//") {
            continue;
        }
        let lineno = idx + 1;
        let Some(header) = t.strip_prefix("#example") else {
            return Err(ScsError::Syntax { line: lineno, col: 1, message: "expected `#example` header".into() });
        };
        let (id, params) = parse_header(header, lineno)?;
        let mut source_uri = None;
        let mut body = String::new();
        let mut closed = false;
        for (bidx, bline) in lines.by_ref() {
            let bt = bline.trim();
            if bt == "#end" {
                closed = true;
                break;
            }
            if let Some(uri) = bt.strip_prefix("#source") {
                source_uri = Some(uri.trim().to_string());
                body.push('\n');
                continue;
            }
            if bt.starts_with("#example") {
                return Err(ScsError::Syntax { line: bidx + 1, col: 1, message: "missing `#end`".into() });
            }
            body.push_str(bline);
            body.push('\n');
        }
        if !closed {
            return Err(ScsError::Syntax { line: lineno, col: 1, message: format!("example `{id}` has no `#end`") });
        }
        // Body text keeps one line per file line, so positions stay aligned.
        let mut ex = parse_statements(&id, params, &body, lineno + 1)?;
        ex.source_uri = source_uri;
        out.push(ex);
    }
    Ok(out)
}

fn parse_header(header: &str, line: usize) -> Result<(String, Vec<Param>), ScsError> {
    let err = |m: &str| ScsError::Syntax { line, col: 1, message: m.to_string() };
    let header = header.trim();
    let (id, rest) = match header.find('(') {
        Some(i) => (header[..i].trim(), header[i..].trim()),
        None => (header, ""),
    };
    if id.is_empty() || id.contains(char::is_whitespace) {
        return Err(err("malformed example id"));
    }
    let mut params = Vec::new();
    if !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| err("malformed parameter list"))?;
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, ty) = part.split_once(':').ok_or_else(|| err("parameter must be `name:Type`"))?;
            let (name, ty) = (name.trim(), ty.trim());
            if !is_var_ident(name) {
                return Err(err("malformed parameter name"));
            }
            if !is_type_ident(ty) {
                return Err(ScsError::TypeName { line, col: 1, name: ty.to_string() });
            }
            params.push(Param::new(name, ty));
        }
    }
    Ok((id.to_string(), params))
}

fn is_var_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(f) if f.is_alphabetic() || f == '_' || f == '$')
        && c.all(|ch| ch.is_alphanumeric() || ch == '_' || ch == '$')
        && !is_keyword(s)
}

/// Parse a standalone expression; identifiers in `scope` are variables, any
/// other lowercase identifier is a free variable of unknown type.
pub fn parse_expr(text: &str, scope: &[Param]) -> Result<Expr, ScsError> {
    let tokens = tokenize(text, 1)?;
    let mut p = Parser::new(tokens, scope);
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

/// Heuristic used when no API graph is available: `Type.NAME` in all caps
/// is an enum constant, anything else a static field.
fn looks_like_constant(name: &str) -> bool {
    name.chars().any(|c| c.is_alphabetic()) && name.chars().all(|c| c.is_uppercase() || c.is_ascii_digit() || c == '_')
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    scopes: Vec<Vec<(String, String)>>,
    /// Names ever declared, to reject uses outside their scope.
    declared_anywhere: Vec<String>,
    pub(crate) free: Vec<String>,
}

impl Parser {
    pub(crate) fn new(toks: Vec<Token>, params: &[Param]) -> Self {
        Parser {
            toks,
            pos: 0,
            scopes: vec![params.iter().map(|p| (p.name.clone(), p.ty.clone())).collect()],
            declared_anywhere: Vec::new(),
            free: Vec::new(),
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ScsError {
        let (line, col) = self.here();
        ScsError::Syntax { line, col, message: message.into() }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ScsError> {
        if *self.peek() == want {
            self.advance();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {}", describe(self.peek()))))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ScsError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.advance();
                Ok(())
            }
            other => Err(self.error(format!("expected `{kw}`, found {}", describe(other)))),
        }
    }

    pub(crate) fn expect_eof(&self) -> Result<(), ScsError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {}", describe(self.peek()))))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ScsError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.advance();
                Ok(s)
            }
            other => Err(self.error(format!("expected {what}, found {}", describe(&other)))),
        }
    }

    fn type_name(&mut self) -> Result<String, ScsError> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Ident(s) => {
                if !is_type_ident(&s) || is_keyword(&s) {
                    return Err(ScsError::TypeName { line, col, name: s });
                }
                self.advance();
                Ok(s)
            }
            other => Err(self.error(format!("expected type name, found {}", describe(&other)))),
        }
    }

    fn lookup(&self, name: &str) -> Option<&str> {
        self.scopes
            .iter()
            .rev()
            .find_map(|s| s.iter().rev().find(|(n, _)| n == name).map(|(_, t)| t.as_str()))
    }

    fn declare(&mut self, name: &str, ty: &str) -> Result<(), ScsError> {
        if self.free.iter().any(|f| f == name) {
            return Err(self.error(format!("`{name}` is used before its declaration")));
        }
        if self.lookup(name).is_some() {
            return Err(self.error(format!("`{name}` is already declared")));
        }
        self.scopes.last_mut().expect("scope").push((name.to_string(), ty.to_string()));
        self.declared_anywhere.push(name.to_string());
        Ok(())
    }

    fn statements_until_eof(&mut self) -> Result<Vec<Stmt>, ScsError> {
        let mut out = Vec::new();
        while *self.peek() != Tok::Eof {
            out.push(self.statement()?);
        }
        Ok(out)
    }

    fn block(&mut self) -> Result<Vec<Stmt>, ScsError> {
        self.expect(Tok::LBrace, "`{`")?;
        self.scopes.push(Vec::new());
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Tok::RBrace => break,
                Tok::Eof => return Err(self.error("unbalanced braces: missing `}`")),
                _ => out.push(self.statement()?),
            }
        }
        self.advance();
        self.scopes.pop();
        Ok(out)
    }

    fn statement(&mut self) -> Result<Stmt, ScsError> {
        match (self.peek().clone(), self.peek_at(1).clone()) {
            (Tok::Ident(kw), _) if kw == "if" || kw == "while" => {
                self.advance();
                self.expect(Tok::LParen, "`(`")?;
                let cond = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                let body = self.block()?;
                Ok(if kw == "if" { Stmt::If { cond, body } } else { Stmt::While { cond, body } })
            }
            (Tok::Ident(kw), _) if kw == "try" => {
                self.advance();
                let body = self.block()?;
                let mut catches = Vec::new();
                while matches!(self.peek(), Tok::Ident(k) if k == "catch") {
                    self.expect_keyword("catch")?;
                    self.expect(Tok::LParen, "`(`")?;
                    let ty = self.type_name()?;
                    let name = self.ident("exception variable")?;
                    self.expect(Tok::RParen, "`)`")?;
                    self.scopes.push(Vec::new());
                    self.declare(&name, &ty)?;
                    let body = self.block()?;
                    self.scopes.pop();
                    catches.push(CatchClause { ty, name, body });
                }
                if catches.is_empty() {
                    return Err(self.error("`try` without `catch`"));
                }
                Ok(Stmt::Try { body, catches })
            }
            (Tok::Ident(kw), _) if kw == "catch" => Err(self.error("`catch` without `try`")),
            (Tok::RBrace, _) => Err(self.error("unbalanced braces: unexpected `}`")),
            (Tok::Ident(ty), Tok::Ident(_)) if !is_keyword(&ty) => {
                let ty = self.type_name()?;
                let name = self.ident("variable name")?;
                let init = if *self.peek() == Tok::Eq {
                    self.advance();
                    Some(self.expr()?)
                } else {
                    None
                };
                self.expect(Tok::Semi, "`;`")?;
                // Declared after the initializer so `T x = x.f();` sees the outer x.
                self.declare(&name, &ty)?;
                Ok(Stmt::Decl { ty, name, init })
            }
            (Tok::Ident(name), Tok::Eq) if !is_keyword(&name) => {
                if self.lookup(&name).is_none() {
                    return Err(self.error(format!("assignment to undeclared variable `{name}`")));
                }
                self.advance();
                self.advance();
                let value = self.expr()?;
                self.expect(Tok::Semi, "`;`")?;
                Ok(Stmt::Assign { name, value })
            }
            _ => {
                let expr = self.expr()?;
                self.expect(Tok::Semi, "`;`")?;
                Ok(Stmt::Expr { expr })
            }
        }
    }

    fn args(&mut self) -> Result<Vec<Expr>, ScsError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.advance();
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            match self.peek() {
                Tok::Comma => {
                    self.advance();
                }
                Tok::RParen => {
                    self.advance();
                    return Ok(args);
                }
                other => return Err(self.error(format!("expected `,` or `)`, found {}", describe(other)))),
            }
        }
    }

    pub(crate) fn expr(&mut self) -> Result<Expr, ScsError> {
        let (base, mut target_ty) = self.primary()?;
        let mut current = base;
        while *self.peek() == Tok::Dot {
            self.advance();
            let name = self.ident("member name")?;
            let target = match (current.take(), target_ty.take()) {
                (Some(e), _) => Target::Expr(Box::new(e)),
                (None, Some(t)) => Target::Static(t),
                (None, None) => unreachable!("primary yields an expression or a type"),
            };
            current = Some(if *self.peek() == Tok::LParen {
                let args = self.args()?;
                Expr::Call { target, name, args }
            } else {
                match target {
                    Target::Static(ty) if looks_like_constant(&name) => Expr::EnumConst { ty, name },
                    target => Expr::Field { target, name },
                }
            });
        }
        match (current, target_ty) {
            (Some(e), _) => Ok(e),
            (None, Some(t)) => Err(self.error(format!("type `{t}` used as a value"))),
            (None, None) => unreachable!(),
        }
    }

    /// Either a value expression or a bare type name (static receiver).
    fn primary(&mut self) -> Result<(Option<Expr>, Option<String>), ScsError> {
        let tok = self.peek().clone();
        let value = match tok {
            Tok::Int { text, long } => {
                self.advance();
                let ty = if long { LitType::Long } else { LitType::Int };
                Expr::Literal(Literal::new(ty, canonical_int(&text, ty).ok_or_else(|| self.error("integer literal out of range"))?))
            }
            Tok::Double(text) => {
                self.advance();
                Expr::Literal(Literal::new(LitType::Double, text))
            }
            Tok::Str(s) => {
                self.advance();
                Expr::Literal(Literal::new(LitType::String, s))
            }
            Tok::Char(s) => {
                self.advance();
                Expr::Literal(Literal::new(LitType::Char, s))
            }
            Tok::Placeholder(ty) => {
                self.advance();
                Expr::Placeholder { ty }
            }
            Tok::LParen => {
                // `(short) 3` is the only parenthesized form.
                if matches!(self.peek_at(1), Tok::Ident(s) if s == "short") && *self.peek_at(2) == Tok::RParen {
                    self.advance();
                    self.advance();
                    self.advance();
                    match self.advance() {
                        Tok::Int { text, long: false } => Expr::Literal(Literal::new(
                            LitType::Short,
                            canonical_int(&text, LitType::Short).ok_or_else(|| self.error("short literal out of range"))?,
                        )),
                        _ => return Err(self.error("`(short)` must be followed by an integer literal")),
                    }
                } else {
                    return Err(self.error("unexpected `(`"));
                }
            }
            Tok::Ident(word) => match word.as_str() {
                "null" => {
                    self.advance();
                    Expr::Null
                }
                "true" | "false" => {
                    self.advance();
                    Expr::Literal(Literal::new(LitType::Boolean, word))
                }
                "new" => {
                    self.advance();
                    let ty = self.type_name()?;
                    let args = self.args()?;
                    Expr::New { ty, args }
                }
                w if is_keyword(w) => return Err(self.error(format!("unexpected keyword `{w}`"))),
                _ => {
                    self.advance();
                    if let Some(ty) = self.lookup(&word) {
                        Expr::Var { name: word.clone(), ty: ty.to_string() }
                    } else if is_type_ident(&word) && LitType::from_type_name(&word).is_none() {
                        if *self.peek() != Tok::Dot {
                            return Err(self.error(format!("type `{word}` used as a value")));
                        }
                        return Ok((None, Some(word)));
                    } else {
                        if self.declared_anywhere.contains(&word) {
                            return Err(self.error(format!("`{word}` used outside the scope of its declaration")));
                        }
                        if !self.free.contains(&word) {
                            self.free.push(word.clone());
                        }
                        Expr::Var { name: word, ty: UNKNOWN_TYPE.to_string() }
                    }
                }
            },
            Tok::Semi | Tok::RParen | Tok::Comma => return Err(self.error("expected expression")),
            other => return Err(self.error(format!("expected expression, found {}", describe(&other)))),
        };
        Ok((Some(value), None))
    }
}

fn canonical_int(text: &str, ty: LitType) -> Option<String> {
    let v: i64 = text.parse().ok()?;
    let ok = match ty {
        LitType::Short => i16::try_from(v).is_ok(),
        LitType::Int => i32::try_from(v).is_ok(),
        _ => true,
    };
    ok.then(|| v.to_string())
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int { text, .. } | Tok::Double(text) => format!("`{text}`"),
        Tok::Str(_) => "string literal".into(),
        Tok::Char(_) => "char literal".into(),
        Tok::Placeholder(t) => format!("`⟨{t}⟩`"),
        Tok::Hole { id, .. } => format!("hole `{id}`"),
        Tok::Dot => "`.`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Semi => "`;`".into(),
        Tok::Colon => "`:`".into(),
        Tok::Eq => "`=`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LBrace => "`{`".into(),
        Tok::RBrace => "`}`".into(),
        Tok::Eof => "end of input".into(),
    }
}
