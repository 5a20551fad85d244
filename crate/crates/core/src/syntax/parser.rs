//! Recursive-descent parser producing lossless trees.

use super::ast::*;
use super::lexer::{tokenize, Keyword, Token, TokenKind};
use super::ParseError;

struct Parser {
    toks: Vec<Token>,
    i: usize,
    next_id: u32,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(src)?,
            i: 0,
            next_id: 0,
        })
    }

    fn fresh(&mut self) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        id
    }

    fn peek(&self) -> &Token {
        &self.toks[self.i]
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn error_at(&self, tok: &Token, expected: &str) -> ParseError {
        ParseError {
            line: tok.start.line,
            col: tok.start.col,
            message: format!("expected {expected}, found {}", tok.kind.describe()),
        }
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<Token, ParseError> {
        if self.peek().kind == kind {
            Ok(self.advance())
        } else {
            Err(self.error_at(self.peek(), expected))
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut defs = Vec::new();
        while self.peek().kind != TokenKind::Eof {
            defs.push(self.def()?);
        }
        let eof = self.peek().clone();
        match defs.last() {
            None => return Err(self.error_at(&eof, "a definition")),
            Some(last) if last.name() != Some("main") => {
                return Err(ParseError {
                    line: last.span.start.line,
                    col: last.span.start.col,
                    message: "the last definition must bind `main`".into(),
                })
            }
            _ => {}
        }
        Ok(Program {
            defs,
            trailing_ws: eof.ws,
            next_id: self.next_id,
        })
    }

    fn def(&mut self) -> Result<Def, ParseError> {
        let open = self.expect(TokenKind::LParen, "`(def`")?;
        let kw = self.advance();
        let rec = match kw.kind {
            TokenKind::Keyword(Keyword::Def) => false,
            TokenKind::Keyword(Keyword::DefRec) => true,
            _ => return Err(self.error_at(&kw, "`def` or `defrec`")),
        };
        let id = self.fresh();
        let pat = self.pat()?;
        let bound = self.exp()?;
        let close = self.expect(TokenKind::RParen, "`)`")?;
        Ok(Def {
            id,
            ws: open.ws,
            kw_ws: kw.ws,
            rec,
            pat,
            bound,
            close_ws: close.ws.clone(),
            span: Span::new(open.start, close.end),
        })
    }

    fn exp(&mut self) -> Result<Exp, ParseError> {
        let tok = self.peek().clone();
        let atom = match &tok.kind {
            TokenKind::Num(n) => Some(ExpKind::Num(n.clone())),
            TokenKind::Str(s) => Some(ExpKind::Str(s.clone())),
            TokenKind::Bool(b) => Some(ExpKind::Bool(*b)),
            TokenKind::Ident(x) => Some(ExpKind::Var(x.clone())),
            _ => None,
        };
        if let Some(kind) = atom {
            self.advance();
            return Ok(Exp {
                id: self.fresh(),
                ws: tok.ws,
                span: Span::new(tok.start, tok.end),
                kind,
            });
        }
        match tok.kind {
            TokenKind::LBrack => self.list_exp(),
            TokenKind::LParen => self.paren_exp(),
            _ => Err(self.error_at(&tok, "an expression")),
        }
    }

    fn list_exp(&mut self) -> Result<Exp, ParseError> {
        let open = self.advance();
        let id = self.fresh();
        let mut elems = Vec::new();
        while !matches!(self.peek().kind, TokenKind::RBrack | TokenKind::Bar | TokenKind::Eof) {
            elems.push(self.exp()?);
        }
        let tail = if self.peek().kind == TokenKind::Bar {
            if elems.is_empty() {
                return Err(self.error_at(self.peek(), "a list element before `|`"));
            }
            let bar = self.advance();
            Some(Tail {
                bar_ws: bar.ws,
                node: Box::new(self.exp()?),
            })
        } else {
            None
        };
        let close = self.expect(TokenKind::RBrack, "`]`")?;
        Ok(Exp {
            id,
            ws: open.ws,
            span: Span::new(open.start, close.end),
            kind: ExpKind::List {
                elems,
                tail,
                close_ws: close.ws.clone(),
            },
        })
    }

    fn paren_exp(&mut self) -> Result<Exp, ParseError> {
        let open = self.advance();
        let id = self.fresh();
        let next = self.peek().clone();
        let kind = match &next.kind {
            TokenKind::Backslash => {
                self.advance();
                let params = if self.peek().kind == TokenKind::LParen {
                    let popen = self.advance();
                    let mut pats = Vec::new();
                    while !matches!(self.peek().kind, TokenKind::RParen | TokenKind::Eof) {
                        pats.push(self.pat()?);
                    }
                    if pats.is_empty() {
                        return Err(self.error_at(self.peek(), "a parameter pattern"));
                    }
                    let pclose = self.expect(TokenKind::RParen, "`)`")?;
                    Params {
                        paren: Some((popen.ws, pclose.ws)),
                        pats,
                    }
                } else {
                    Params {
                        paren: None,
                        pats: vec![self.pat()?],
                    }
                };
                let body = Box::new(self.exp()?);
                let close = self.expect(TokenKind::RParen, "`)`")?;
                (
                    ExpKind::Fun {
                        kw_ws: next.ws,
                        params,
                        body,
                        close_ws: close.ws.clone(),
                    },
                    close.end,
                )
            }
            TokenKind::Keyword(k @ (Keyword::Let | Keyword::LetRec)) => {
                let rec = *k == Keyword::LetRec;
                self.advance();
                let def_id = self.fresh();
                let pat = self.pat()?;
                let bound = Box::new(self.exp()?);
                let def_span = Span::new(next.start, bound.span.end);
                let body = Box::new(self.exp()?);
                let close = self.expect(TokenKind::RParen, "`)`")?;
                (
                    ExpKind::Let {
                        def: LetDef {
                            id: def_id,
                            kw_ws: next.ws,
                            rec,
                            pat,
                            bound,
                            span: def_span,
                        },
                        body,
                        close_ws: close.ws.clone(),
                    },
                    close.end,
                )
            }
            TokenKind::Keyword(Keyword::Case) => {
                self.advance();
                let scrutinee = Box::new(self.exp()?);
                let mut branches = Vec::new();
                while self.peek().kind == TokenKind::LParen {
                    branches.push(self.branch()?);
                }
                if branches.is_empty() {
                    return Err(self.error_at(self.peek(), "a case branch `(p e)`"));
                }
                let close = self.expect(TokenKind::RParen, "`)`")?;
                (
                    ExpKind::Case {
                        kw_ws: next.ws,
                        scrutinee,
                        branches,
                        close_ws: close.ws.clone(),
                    },
                    close.end,
                )
            }
            TokenKind::Keyword(_) => return Err(self.error_at(&next, "an expression")),
            _ => {
                let head = Box::new(self.exp()?);
                let mut args = Vec::new();
                while !matches!(self.peek().kind, TokenKind::RParen | TokenKind::Eof) {
                    args.push(self.exp()?);
                }
                if args.is_empty() {
                    return Err(self.error_at(self.peek(), "an argument"));
                }
                let close = self.expect(TokenKind::RParen, "`)`")?;
                (
                    ExpKind::App {
                        head,
                        args,
                        close_ws: close.ws.clone(),
                    },
                    close.end,
                )
            }
        };
        let (kind, end) = kind;
        Ok(Exp {
            id,
            ws: open.ws,
            span: Span::new(open.start, end),
            kind,
        })
    }

    fn branch(&mut self) -> Result<Branch, ParseError> {
        let open = self.advance();
        let id = self.fresh();
        let pat = self.pat()?;
        let body = self.exp()?;
        let close = self.expect(TokenKind::RParen, "`)`")?;
        Ok(Branch {
            id,
            ws: open.ws,
            pat,
            body,
            close_ws: close.ws.clone(),
            span: Span::new(open.start, close.end),
        })
    }

    fn pat(&mut self) -> Result<Pat, ParseError> {
        let tok = self.peek().clone();
        let kind = match &tok.kind {
            TokenKind::Num(n) => PatKind::Num(n.clone()),
            TokenKind::Str(s) => PatKind::Str(s.clone()),
            TokenKind::Bool(b) => PatKind::Bool(*b),
            TokenKind::Ident(x) => PatKind::Var(x.clone()),
            TokenKind::LBrack => return self.list_pat(),
            _ => return Err(self.error_at(&tok, "a pattern")),
        };
        self.advance();
        Ok(Pat {
            id: self.fresh(),
            ws: tok.ws,
            span: Span::new(tok.start, tok.end),
            kind,
        })
    }

    fn list_pat(&mut self) -> Result<Pat, ParseError> {
        let open = self.advance();
        let id = self.fresh();
        let mut elems = Vec::new();
        while !matches!(self.peek().kind, TokenKind::RBrack | TokenKind::Bar | TokenKind::Eof) {
            elems.push(self.pat()?);
        }
        let tail = if self.peek().kind == TokenKind::Bar {
            if elems.is_empty() {
                return Err(self.error_at(self.peek(), "a pattern before `|`"));
            }
            let bar = self.advance();
            Some(Tail {
                bar_ws: bar.ws,
                node: Box::new(self.pat()?),
            })
        } else {
            None
        };
        let close = self.expect(TokenKind::RBrack, "`]`")?;
        Ok(Pat {
            id,
            ws: open.ws,
            span: Span::new(open.start, close.end),
            kind: PatKind::List {
                elems,
                tail,
                close_ws: close.ws.clone(),
            },
        })
    }

    fn finish(&self) -> Result<(), ParseError> {
        let t = self.peek();
        if t.kind == TokenKind::Eof {
            Ok(())
        } else {
            Err(self.error_at(t, "end of input"))
        }
    }

    fn at_eof_after_ws(&self) -> bool {
        self.peek().kind == TokenKind::Eof && self.peek().ws.is_empty()
    }
}

/// Parses a whole program.
pub fn parse(src: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(src)?;
    let prog = p.program()?;
    p.finish()?;
    Ok(prog)
}

/// Parses a standalone expression, as found inside a program. The fragment
/// must not carry trailing trivia.
pub fn parse_exp_fragment(src: &str) -> Result<Exp, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.exp()?;
    p.finish()?;
    if !p.at_eof_after_ws() {
        return Err(p.error_at(p.peek(), "end of fragment"));
    }
    Ok(e)
}

/// Parses a standalone pattern.
pub fn parse_pat_fragment(src: &str) -> Result<Pat, ParseError> {
    let mut p = Parser::new(src)?;
    let pat = p.pat()?;
    p.finish()?;
    if !p.at_eof_after_ws() {
        return Err(p.error_at(p.peek(), "end of fragment"));
    }
    Ok(pat)
}

/// Parses a standalone top-level definition.
pub fn parse_def_fragment(src: &str) -> Result<Def, ParseError> {
    let mut p = Parser::new(src)?;
    let d = p.def()?;
    p.finish()?;
    Ok(d)
}
