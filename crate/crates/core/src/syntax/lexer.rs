//! Tokenizer. Each token carries the trivia that precedes it.

use super::ast::{NumLit, Pos, StrLit, Ws};
use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub enum TokenKind {
    LParen,
    RParen,
    LBrack,
    RBrack,
    Bar,
    Backslash,
    Num(NumLit),
    Str(StrLit),
    Bool(bool),
    Ident(String),
    Keyword(Keyword),
    Eof,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keyword {
    Def,
    DefRec,
    Let,
    LetRec,
    Case,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::LBrack => "`[`".into(),
            TokenKind::RBrack => "`]`".into(),
            TokenKind::Bar => "`|`".into(),
            TokenKind::Backslash => "`\\`".into(),
            TokenKind::Num(n) => format!("number `{}`", n.text),
            TokenKind::Str(_) => "string".into(),
            TokenKind::Bool(b) => format!("`{b}`"),
            TokenKind::Ident(x) => format!("identifier `{x}`"),
            TokenKind::Keyword(k) => format!("keyword `{}`", k.as_str()),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

impl Keyword {
    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Def => "def",
            Keyword::DefRec => "defrec",
            Keyword::Let => "let",
            Keyword::LetRec => "letrec",
            Keyword::Case => "case",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub kind: TokenKind,
    pub ws: Ws,
    pub start: Pos,
    pub end: Pos,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn is_op_char(c: char) -> bool {
    matches!(c, '+' | '-' | '*' | '/' | '<' | '>' | '=' | '%' | '^' | '&')
}

/// Reserved words that cannot be used as variable names.
pub fn is_reserved(word: &str) -> bool {
    matches!(word, "def" | "defrec" | "let" | "letrec" | "case" | "true" | "false")
}

/// Whether `name` is a syntactically valid variable name.
pub fn is_valid_ident(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if is_ident_start(c) => chars.all(is_ident_char) && !is_reserved(name),
        Some(c) if is_op_char(c) => chars.all(is_op_char),
        _ => false,
    }
}

struct Lexer<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    i: usize,
    pos: Pos,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).map(|&(_, c)| c)
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.i + k).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.i).map_or(self.src.len(), |&(o, _)| o)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 0;
        } else {
            self.pos.col += 1;
        }
        self.pos.offset = self.offset();
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.pos.line,
            col: self.pos.col,
            message: message.into(),
        }
    }

    fn trivia(&mut self) -> Result<Ws, ParseError> {
        let start = self.offset();
        loop {
            match self.peek() {
                Some('\t') => return Err(self.error("tab characters are not allowed")),
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some(';') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        if c == '\t' {
                            return Err(self.error("tab characters are not allowed"));
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        Ok(self.src[start..self.offset()].to_string())
    }

    fn number(&mut self) -> Result<TokenKind, ParseError> {
        let start = self.offset();
        if self.peek() == Some('-') {
            self.bump();
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.peek() == Some('.') && matches!(self.peek_at(1), Some(c) if c.is_ascii_digit()) {
            self.bump();
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.bump();
            }
        }
        let text = self.src[start..self.offset()].to_string();
        let value: f64 = text
            .parse()
            .map_err(|_| self.error(format!("malformed number `{text}`")))?;
        let frozen = if self.peek() == Some('!') {
            self.bump();
            true
        } else {
            false
        };
        let range = if self.peek() == Some('{') {
            let rstart = self.offset();
            loop {
                match self.bump() {
                    Some('}') => break,
                    Some('\n') | None => return Err(self.error("unterminated range annotation")),
                    Some(_) => {}
                }
            }
            Some(self.src[rstart..self.offset()].to_string())
        } else {
            None
        };
        if matches!(self.peek(), Some(c) if is_ident_char(c)) {
            return Err(self.error(format!("malformed number `{text}`")));
        }
        Ok(TokenKind::Num(NumLit {
            text,
            value,
            frozen,
            range,
        }))
    }

    fn string(&mut self, quote: char) -> Result<TokenKind, ParseError> {
        self.bump();
        let start = self.offset();
        loop {
            match self.peek() {
                Some(c) if c == quote => break,
                Some('\n') | None => return Err(self.error("unterminated string literal")),
                Some('\t') => return Err(self.error("tab characters are not allowed")),
                Some(_) => {
                    self.bump();
                }
            }
        }
        let content = self.src[start..self.offset()].to_string();
        self.bump();
        Ok(TokenKind::Str(StrLit { quote, content }))
    }

    fn word(&mut self) -> TokenKind {
        let start = self.offset();
        let first = self.peek().unwrap_or(' ');
        if is_ident_start(first) {
            while matches!(self.peek(), Some(c) if is_ident_char(c)) {
                self.bump();
            }
        } else {
            while matches!(self.peek(), Some(c) if is_op_char(c)) {
                self.bump();
            }
        }
        let text = &self.src[start..self.offset()];
        match text {
            "def" => TokenKind::Keyword(Keyword::Def),
            "defrec" => TokenKind::Keyword(Keyword::DefRec),
            "let" => TokenKind::Keyword(Keyword::Let),
            "letrec" => TokenKind::Keyword(Keyword::LetRec),
            "case" => TokenKind::Keyword(Keyword::Case),
            "true" => TokenKind::Bool(true),
            "false" => TokenKind::Bool(false),
            _ => TokenKind::Ident(text.to_string()),
        }
    }

    fn next_token(&mut self) -> Result<Token, ParseError> {
        let ws = self.trivia()?;
        let start = self.pos;
        let kind = match self.peek() {
            None => TokenKind::Eof,
            Some(c) => match c {
                '(' => {
                    self.bump();
                    TokenKind::LParen
                }
                ')' => {
                    self.bump();
                    TokenKind::RParen
                }
                '[' => {
                    self.bump();
                    TokenKind::LBrack
                }
                ']' => {
                    self.bump();
                    TokenKind::RBrack
                }
                '|' => {
                    self.bump();
                    TokenKind::Bar
                }
                '\\' => {
                    self.bump();
                    TokenKind::Backslash
                }
                '\'' | '"' => self.string(c)?,
                c if c.is_ascii_digit() => self.number()?,
                '-' if matches!(self.peek_at(1), Some(d) if d.is_ascii_digit()) => self.number()?,
                c if is_ident_start(c) || is_op_char(c) => self.word(),
                c => return Err(self.error(format!("unexpected character `{c}`"))),
            },
        };
        Ok(Token {
            kind,
            ws,
            start,
            end: self.pos,
        })
    }
}

/// Splits `src` into tokens. The final token is always `Eof`, whose trivia is
/// the trailing trivia of the input.
pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut lexer = Lexer {
        src,
        chars: src.char_indices().collect(),
        i: 0,
        pos: Pos::START,
    };
    let mut out = Vec::new();
    loop {
        let tok = lexer.next_token()?;
        let done = tok.kind == TokenKind::Eof;
        out.push(tok);
        if done {
            return Ok(out);
        }
    }
}
