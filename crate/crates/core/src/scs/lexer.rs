use super::ScsError;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    /// Integral literal; `long` when it carried an `L` suffix.
    Int { text: String, long: bool },
    Double(String),
    Str(String),
    Char(String),
    /// `⟨Type⟩`
    Placeholder(String),
    /// `{hole-3:Type}`, only meaningful in pattern text.
    Hole { id: String, ty: String },
    Dot,
    Comma,
    Semi,
    Colon,
    Eq,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn tokenize(src: &str, first_line: usize) -> Result<Vec<Token>, ScsError> {
    Lexer { chars: src.chars().collect(), pos: 0, line: first_line, col: 1 }.run()
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.pos + n).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, line: usize, col: usize, msg: impl Into<String>) -> ScsError {
        ScsError::Syntax { line, col, message: msg.into() }
    }

    fn run(mut self) -> Result<Vec<Token>, ScsError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else {
                out.push(Token { tok: Tok::Eof, line, col });
                return Ok(out);
            };
            let tok = match c {
                '.' => self.single(Tok::Dot),
                ',' => self.single(Tok::Comma),
                ';' => self.single(Tok::Semi),
                ':' => self.single(Tok::Colon),
                '=' => self.single(Tok::Eq),
                '(' => self.single(Tok::LParen),
                ')' => self.single(Tok::RParen),
                '}' => self.single(Tok::RBrace),
                '{' => {
                    if self.looks_like_hole() {
                        self.hole(line, col)?
                    } else {
                        self.single(Tok::LBrace)
                    }
                }
                '⟨' => {
                    self.bump();
                    let ty = self.take_while(|c| c != '⟩' && c != '\n');
                    if self.bump() != Some('⟩') || !is_type_ident(&ty) {
                        return Err(self.err(line, col, "malformed placeholder"));
                    }
                    Tok::Placeholder(ty)
                }
                '"' => self.string(line, col)?,
                '\'' => self.char_lit(line, col)?,
                '-' if self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) => {
                    self.bump();
                    self.number(true)
                }
                d if d.is_ascii_digit() => self.number(false),
                a if a.is_alphabetic() || a == '_' || a == '$' => {
                    Tok::Ident(self.take_while(|c| c.is_alphanumeric() || c == '_' || c == '$'))
                }
                other => return Err(self.err(line, col, format!("unexpected character `{other}`"))),
            };
            out.push(Token { tok, line, col });
        }
    }

    fn single(&mut self, t: Tok) -> Tok {
        self.bump();
        t
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') if self.peek_at(1) == Some('/') => {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn looks_like_hole(&self) -> bool {
        let rest: String = self.chars[self.pos..].iter().take(6).collect();
        rest.starts_with("{hole-")
    }

    fn hole(&mut self, line: usize, col: usize) -> Result<Tok, ScsError> {
        self.bump();
        let id = self.take_while(|c| c.is_alphanumeric() || c == '-' || c == '_');
        if self.bump() != Some(':') {
            return Err(self.err(line, col, "expected `:` in hole"));
        }
        let ty = self.take_while(|c| c != '}' && c != '\n');
        if self.bump() != Some('}') || !is_type_ident(&ty) {
            return Err(self.err(line, col, "malformed hole"));
        }
        Ok(Tok::Hole { id, ty })
    }

    fn number(&mut self, negative: bool) -> Tok {
        let mut text = if negative { "-".to_string() } else { String::new() };
        text.push_str(&self.take_while(|c| c.is_ascii_digit()));
        let mut is_double = false;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            is_double = true;
            text.push('.');
            self.bump();
            text.push_str(&self.take_while(|c| c.is_ascii_digit()));
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let sign = matches!(self.peek_at(1), Some('+' | '-'));
            let digit_at = if sign { 2 } else { 1 };
            if self.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                is_double = true;
                text.push('e');
                self.bump();
                if sign {
                    text.push(self.bump().unwrap());
                }
                text.push_str(&self.take_while(|c| c.is_ascii_digit()));
            }
        }
        if is_double {
            return Tok::Double(text);
        }
        let long = matches!(self.peek(), Some('L' | 'l'));
        if long {
            self.bump();
        }
        Tok::Int { text, long }
    }

    fn escape(&mut self, line: usize, col: usize) -> Result<char, ScsError> {
        match self.bump() {
            Some('n') => Ok('\n'),
            Some('t') => Ok('\t'),
            Some('r') => Ok('\r'),
            Some('0') => Ok('\0'),
            Some(c @ ('\\' | '"' | '\'')) => Ok(c),
            _ => Err(self.err(line, col, "invalid escape")),
        }
    }

    fn string(&mut self, line: usize, col: usize) -> Result<Tok, ScsError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('"') => return Ok(Tok::Str(s)),
                Some('\\') => s.push(self.escape(line, col)?),
                Some('\n') | None => return Err(self.err(line, col, "unterminated string literal")),
                Some(c) => s.push(c),
            }
        }
    }

    fn char_lit(&mut self, line: usize, col: usize) -> Result<Tok, ScsError> {
        self.bump();
        let c = match self.bump() {
            Some('\\') => self.escape(line, col)?,
            Some('\'') | Some('\n') | None => return Err(self.err(line, col, "empty char literal")),
            Some(c) => c,
        };
        if self.bump() != Some('\'') {
            return Err(self.err(line, col, "unterminated char literal"));
        }
        Ok(Tok::Char(c.to_string()))
    }
}

/// Type names are primitive keywords or identifiers starting with an
/// uppercase letter.
pub fn is_type_ident(s: &str) -> bool {
    if super::ast::LitType::from_type_name(s).is_some() {
        return true;
    }
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_uppercase())
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '$')
}

pub fn is_keyword(s: &str) -> bool {
    matches!(s, "new" | "null" | "true" | "false" | "if" | "while" | "try" | "catch")
}
